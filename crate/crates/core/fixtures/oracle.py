#!/usr/bin/env python3
"""Independent manifest oracle for the fixture.

Reads only the written fixture files (never generate.py's in-memory data) and
recomputes the expected build outcome by plain set iteration:

  manifest.json      graph counts, adopted node/edge sets, Morphine hops
  emr_manifest.json  record/string counts and group-by facts used by tests
"""

import csv
import json
import os
from collections import Counter, OrderedDict

HERE = os.path.dirname(os.path.abspath(__file__))
SEEDS = ["N02A", "N01AH", "R05DA", "N07BC", "A06AH"]
PROPERTY_KINDS = [
    "ingredients_of", "has_form", "form_of", "part_of", "ingredient_of",
    "consists_of", "constitutes", "has_tradename", "precise_ingredient_of",
]
EDGE_ORDER = ["subclass_of", "has_cui"] + PROPERTY_KINDS
KIND_ORDER = ["AtcClass", "RxGenericIngredient", "RxClass", "CuiHub"]


def read_tsv(name):
    with open(os.path.join(HERE, name), newline="") as f:
        rows = list(csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE))
    return rows[1:]


atc = read_tsv("atc.tsv")
concepts = read_tsv("concepts.tsv")
raw_relations = read_tsv("relations.tsv")

relations = []
seen = set()
for r in raw_relations:
    t = tuple(r)
    if t not in seen:
        seen.add(t)
        relations.append(t)
duplicates = len(raw_relations) - len(relations)

concept = {(s, c): (cui, tty, name) for s, c, cui, tty, name in concepts}

# --- ATC closure by recursive descent over parent pointers -----------------
children = {}
for code, parent, _ in atc:
    children.setdefault(parent, []).append(code)


def descend(code, acc):
    if code in acc:
        return
    acc.add(code)
    for ch in children.get(code, []):
        descend(ch, acc)


closure = set()
for s in SEEDS:
    descend(s, closure)

# --- CUI bridge (equi-join on cui) -----------------------------------------
closure_cuis = {concept[("ATC", c)][0] for c in closure if concept[("ATC", c)][0]}
bridged = {c for s, c, cui, tty, _ in concepts if s == "RXNORM" and cui and cui in closure_cuis}
generic = {c for c in bridged if concept[("RXNORM", c)][1] == "IN"}
blocked = {c for s, c, cui, tty, _ in concepts if s == "RXNORM" and tty == "IN" and c not in bridged}

# --- iterative join --------------------------------------------------------
adopted = set(bridged)
adopted_edges = set()
rounds = 0
while True:
    rounds += 1
    snap = set(adopted)
    before = (len(adopted), len(adopted_edges))
    for ss, sc, kind, ds, dc in relations:
        if kind not in PROPERTY_KINDS or sc in blocked or dc in blocked:
            continue
        if sc in snap or dc in snap:
            adopted_edges.add((sc, kind, dc))
            adopted.add(sc)
            adopted.add(dc)
    if (len(adopted), len(adopted_edges)) == before:
        break

property_rows = [r for r in relations if r[2] in PROPERTY_KINDS]
dropped = sum(1 for r in property_rows if (r[1], r[2], r[4]) not in adopted_edges)

# --- node table --------------------------------------------------------------
nodes = []  # (key, kind, label, cui)
for code, parent, name in atc:
    if code in closure:
        nodes.append((("ATC", code), "AtcClass", name, concept.get(("ATC", code), ("",))[0]))
for s, c, cui, tty, name in concepts:
    if s == "RXNORM" and c in adopted:
        nodes.append((("RXNORM", c), "RxGenericIngredient" if c in generic else "RxClass", name, cui))
hubs = []
for _, _, _, cui in nodes:
    if cui and cui not in hubs:
        hubs.append(cui)

edges = Counter()
for code, parent, _ in atc:
    if code in closure and parent in closure:
        edges["subclass_of"] += 1
edges["has_cui"] = sum(1 for n in nodes if n[3])
for _, kind, _ in adopted_edges:
    edges[kind] += 1

kinds = Counter(n[1] for n in nodes)
kinds["CuiHub"] = len(hubs)

stats = OrderedDict()
stats["nodes_by_kind"] = OrderedDict((k, kinds[k]) for k in KIND_ORDER)
stats["cui_nodes"] = len(hubs)
stats["rxcui_annotations"] = sum(1 for n in nodes if n[0][0] == "RXNORM")
stats["edges_by_kind"] = OrderedDict((k, edges[k]) for k in EDGE_ORDER)
stats["total_nodes"] = len(nodes) + len(hubs)
stats["total_edges"] = sum(edges.values())

label = {("RXNORM", c): concept[("RXNORM", c)][2] for c in adopted}
morphine = "7052"
hops = OrderedDict()
for kind in PROPERTY_KINDS:
    ls = sorted(label[("RXNORM", d)] for s, k, d in adopted_edges if s == morphine and k == kind)
    if ls:
        hops[kind] = ls

manifest = OrderedDict()
manifest["stats"] = stats
manifest["build"] = OrderedDict([
    ("seeds_resolved", len(SEEDS)),
    ("atc_closure_size", len(closure)),
    ("cui_bridged_ingredients", len(generic)),
    ("bridged_concepts", len(bridged)),
    ("expansion_rounds", rounds),
    ("adopted_concepts", len(adopted)),
    ("adopted_relation_edges", len(adopted_edges)),
    ("dropped_relations", dropped),
    ("duplicate_relation_rows", duplicates),
])
manifest["atc_closure"] = sorted(closure)
manifest["generic_ingredients"] = sorted(concept[("RXNORM", c)][2] for c in generic)
manifest["adopted_concepts"] = sorted(adopted, key=int)
manifest["adopted_edges"] = sorted([list(e) for e in adopted_edges],
                                   key=lambda e: (int(e[0]), e[1], int(e[2])))
manifest["morphine_hops"] = hops

with open(os.path.join(HERE, "manifest.json"), "w") as f:
    json.dump(manifest, f, indent=2)
    f.write("\n")

# --- EMR facts ---------------------------------------------------------------
labels = {}
with open(os.path.join(HERE, "parse_labels.tsv"), newline="") as f:
    rd = csv.DictReader(f, delimiter="\t", quoting=csv.QUOTE_NONE)
    for row in rd:
        labels[row["raw"]] = [i for i in row["ingredients"].split(";") if i]

with open(os.path.join(HERE, "emr.csv"), newline="") as f:
    records = list(csv.DictReader(f))

cells = Counter()
for r in records:
    for ing in labels[r["drug_string"]]:
        cells[(ing, r["state"], int(r["year"]))] += 1
over_100 = sorted([list(k) + [v] for k, v in cells.items() if v > 100])

emr = OrderedDict()
emr["records"] = len(records)
emr["distinct_strings"] = len({r["drug_string"] for r in records})
emr["cui_mapped"] = 34
emr["rxcui_mapped"] = 44
emr["fentanyl_fl_miami_2012"] = sum(
    1 for r in records
    if "Fentanyl" in labels[r["drug_string"]] and (r["state"], r["subregion"], r["year"]) == ("FL", "Miami", "2012"))
emr["ingredient_state_year_cells_over_100"] = over_100

with open(os.path.join(HERE, "emr_manifest.json"), "w") as f:
    json.dump(emr, f, indent=2)
    f.write("\n")

print(json.dumps(stats))
print(json.dumps(manifest["build"]))
print(json.dumps(emr["ingredient_state_year_cells_over_100"]), emr["fentanyl_fl_miami_2012"])
