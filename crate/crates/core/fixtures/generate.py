#!/usr/bin/env python3
"""Writes the synthetic terminology + EMR fixture.

All codes are fixture values. RxCUIs for the generic ingredients follow the
public RxNorm numbering where known; everything else is synthetic.

Outputs (next to this script):
  atc.tsv, concepts.tsv, relations.tsv      TSV terminology inputs
  rrf/MRCONSO.RRF, rrf/MRREL.RRF            the same content, RRF-subset form
  drug_strings.txt                          the 50 distinct EMR drug strings
  emr.csv                                   prescription records

Run oracle.py afterwards to regenerate manifest.json / emr_manifest.json.
"""

import csv
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

# ---------------------------------------------------------------------------
# ATC: (code, parent, name, cui)
# ---------------------------------------------------------------------------
ATC = [
    ("A", "", "ALIMENTARY TRACT AND METABOLISM", ""),
    ("A06", "A", "DRUGS FOR CONSTIPATION", ""),
    ("A06A", "A06", "DRUGS FOR CONSTIPATION", ""),
    ("A06AH", "A06A", "Peripheral opioid receptor antagonists", "C3653623"),
    ("A06AH01", "A06AH", "methylnaltrexone bromide", "C0066658"),
    ("A06AH03", "A06AH", "naloxegol", "C3490653"),
    ("A06AH04", "A06AH", "naloxone", "C0027358"),
    ("N", "", "NERVOUS SYSTEM", ""),
    ("N01", "N", "ANESTHETICS", ""),
    ("N01A", "N01", "ANESTHETICS, GENERAL", ""),
    ("N01AH", "N01A", "Opioid anesthetics", "C3653626"),
    ("N01AH01", "N01AH", "fentanyl", "C0015846"),
    ("N01AH02", "N01AH", "alfentanil", "C0002048"),
    ("N01AH03", "N01AH", "sufentanil", "C0038806"),
    ("N01AH06", "N01AH", "remifentanil", "C0246631"),
    ("N02", "N", "ANALGESICS", ""),
    ("N02A", "N02", "Opioid analgesics", "C0242402"),
    ("N02AA", "N02A", "Natural opium alkaloids", ""),
    ("N02AA01", "N02AA", "morphine", "C0026549"),
    ("N02AA03", "N02AA", "hydromorphone", "C0012306"),
    ("N02AA05", "N02AA", "oxycodone", "C0030049"),
    ("N02AA08", "N02AA", "dihydrocodeine", "C0058075"),
    ("N02AA51", "N02AA", "morphine, combinations", ""),
    ("N02AA59", "N02AA", "codeine, combinations excl. psycholeptics", ""),
    ("N02AB", "N02A", "Phenylpiperidine derivatives", ""),
    ("N02AB01", "N02AB", "ketobemidone", "C0022598"),
    ("N02AB02", "N02AB", "pethidine", "C0025376"),
    ("N02AB03", "N02AB", "fentanyl", "C0015846"),
    ("N02AC", "N02A", "Diphenylpropylamine derivatives", ""),
    ("N02AC04", "N02AC", "dextropropoxyphene", "C0033495"),
    ("N02AD", "N02A", "Benzomorphan derivatives", ""),
    ("N02AD01", "N02AD", "pentazocine", "C0030873"),
    ("N02AE", "N02A", "Oripavine derivatives", ""),
    ("N02AE01", "N02AE", "buprenorphine", "C0006405"),
    ("N02AF", "N02A", "Morphinan derivatives", ""),
    ("N02AF01", "N02AF", "butorphanol", "C0006492"),
    ("N02AF02", "N02AF", "nalbuphine", "C0027346"),
    ("N02AJ", "N02A", "Opioids in combination with non-opioid analgesics", ""),
    ("N02AJ06", "N02AJ", "codeine and paracetamol", ""),
    ("N02AJ13", "N02AJ", "tramadol and paracetamol", ""),
    ("N02AX", "N02A", "Other opioids", ""),
    ("N02AX02", "N02AX", "tramadol", "C0040610"),
    ("N02AX06", "N02AX", "tapentadol", "C1776888"),
    ("N02B", "N02", "OTHER ANALGESICS AND ANTIPYRETICS", ""),
    ("N02BA", "N02B", "Salicylic acid and derivatives", ""),
    ("N02BA01", "N02BA", "acetylsalicylic acid", "C0004057"),
    ("N02BE", "N02B", "Anilides", ""),
    ("N02BE01", "N02BE", "paracetamol", "C0000970"),
    ("N07", "N", "OTHER NERVOUS SYSTEM DRUGS", ""),
    ("N07B", "N07", "DRUGS USED IN ADDICTIVE DISORDERS", ""),
    ("N07BC", "N07B", "Drugs used in opioid dependence", ""),
    ("N07BC01", "N07BC", "buprenorphine", "C0006405"),
    ("N07BC02", "N07BC", "methadone", "C0025605"),
    ("N07BC51", "N07BC", "buprenorphine, combinations", ""),
    ("N07BC90", "N07BC", "naltrexone", "C0027380"),
    ("R", "", "RESPIRATORY SYSTEM", ""),
    ("R05", "R", "COUGH AND COLD PREPARATIONS", ""),
    ("R05D", "R05", "COUGH SUPPRESSANTS, EXCL. COMBINATIONS WITH EXPECTORANTS", ""),
    ("R05DA", "R05D", "Opium alkaloids and derivatives", ""),
    ("R05DA01", "R05DA", "ethylmorphine", "C0059601"),
    ("R05DA03", "R05DA", "hydrocodone", "C0020264"),
    ("R05DA04", "R05DA", "codeine", "C0009214"),
    ("R05DA08", "R05DA", "pholcodine", "C0070853"),
]

# ---------------------------------------------------------------------------
# RxNorm families. Each concept: (key, tty, name, cui) where cui "" = none and
# None = synthesize one.
# ---------------------------------------------------------------------------
concepts = []  # (source, code, cui, tty, name)
relations = []  # (src_source, src_code, rel, dst_source, dst_code)
by_name = {}

_next_rxcui = [900001]
_next_cui = [9000001]


def rx(tty, name, cui=None, rxcui=None):
    if rxcui is None:
        rxcui = str(_next_rxcui[0])
        _next_rxcui[0] += 1
    if cui is None:
        cui = "C%07d" % _next_cui[0]
        _next_cui[0] += 1
    assert name not in by_name, name
    concepts.append(("RXNORM", rxcui, cui, tty, name))
    by_name[name] = rxcui
    return rxcui


def rel(src, kind, dst):
    relations.append(("RXNORM", by_name[src], kind, "RXNORM", by_name[dst]))


def family(ing, rxcui, cui, pins=(), bns=(), scdc=(), scdf=(), scd=(), sbd=(),
           no_cui=()):
    """scdc: list of (name, pin-or-None); scd: list of (name, scdc-name);
    sbd: list of (name, scd-name, bn-name)."""
    rx("IN", ing, cui, rxcui)
    for p in pins:
        rx("PIN", p, "" if p in no_cui else None)
        rel(ing, "has_form", p)
        rel(p, "form_of", ing)
    for b in bns:
        rx("BN", b, "" if b in no_cui else None)
        rel(ing, "has_tradename", b)
    for name, pin in scdc:
        rx("SCDC", name, "" if name in no_cui else None)
        rel(ing, "ingredient_of", name)
        if pin:
            rel(pin, "precise_ingredient_of", name)
    for name in scdf:
        rx("SCDF", name, "" if name in no_cui else None)
        rel(ing, "ingredient_of", name)
    for name, comp in scd:
        rx("SCD", name, "" if name in no_cui else None)
        rel(name, "consists_of", comp)
        rel(comp, "constitutes", name)
    for name, clin, bn in sbd:
        rx("SBD", name, "" if name in no_cui else None)
        rel(clin, "has_tradename", name)
        rel(bn, "ingredient_of", name)


def combo(min_name, parts, bns=(), scdf=(), no_cui=()):
    rx("MIN", min_name, "" if min_name in no_cui else None)
    for p in parts:
        rel(p, "part_of", min_name)
    for b in bns:
        if b not in by_name:
            rx("BN", b, "" if b in no_cui else None)
        for p in parts:
            rel(p, "has_tradename", b)
    for s in scdf:
        rx("SCDF", s, "" if s in no_cui else None)
        rel(min_name, "ingredients_of", s)


# Non-opioid ingredients touching opioid combinations (never bridged).
rx("IN", "Acetaminophen", "C0000970", "161")
rx("IN", "Atropine", "C0004259", "1223")
rx("IN", "Cyclizine", "C0010547", "3008")

family(
    "Morphine", "7052", "C0026549",
    pins=["Morphine Sulfate", "Morphine Hydrochloride", "Morphine Tartrate"],
    bns=["MS Contin", "Avinza", "Duramorph", "Kadian", "Roxanol"],
    scdc=[("Morphine Sulfate 20 MG/ML", "Morphine Sulfate"),
          ("Morphine hydrochloride 40 MG", "Morphine Hydrochloride"),
          ("Morphine Sulfate 30 MG", "Morphine Sulfate"),
          ("Morphine Sulfate 4 MG/ML", "Morphine Sulfate")],
    scdf=["Morphine Injectable Solution", "Morphine Prefilled Syringe",
          "Morphine Extended Release Oral Tablet"],
    scd=[("Morphine Sulfate 30 MG Extended Release Oral Tablet", "Morphine Sulfate 30 MG"),
         ("Morphine Sulfate 4 MG/ML Injectable Solution", "Morphine Sulfate 4 MG/ML")],
    sbd=[("Morphine Sulfate 30 MG Extended Release Oral Tablet [MS Contin]",
          "Morphine Sulfate 30 MG Extended Release Oral Tablet", "MS Contin"),
         ("Morphine Sulfate 4 MG/ML Injectable Solution [Duramorph]",
          "Morphine Sulfate 4 MG/ML Injectable Solution", "Duramorph")],
    no_cui=["Kadian", "Avinza", "Morphine Tartrate"],
)

family(
    "Naltrexone", "7243", "C0027380",
    pins=["Naltrexone Hydrochloride"],
    bns=["Vivitrol", "Revia"],
    scdc=[("Naltrexone hydrochloride 50 MG", "Naltrexone Hydrochloride"),
          ("Naltrexone 380 MG", None)],
    scdf=["Naltrexone Oral Tablet", "Naltrexone Injectable Suspension"],
    scd=[("Naltrexone hydrochloride 50 MG Oral Tablet", "Naltrexone hydrochloride 50 MG")],
    sbd=[("Naltrexone hydrochloride 50 MG Oral Tablet [Revia]",
          "Naltrexone hydrochloride 50 MG Oral Tablet", "Revia")],
)

combo("Atropine / Morphine", ["Atropine", "Morphine"],
      scdf=["Atropine / Morphine Injectable Solution"])
combo("Cyclizine / Morphine", ["Cyclizine", "Morphine"])
combo("Morphine / Naltrexone", ["Morphine", "Naltrexone"], bns=["EMbeda"],
      scdf=["Morphine / Naltrexone Extended Release Oral Capsule"])
# Table-1 style formulation hanging directly off the ingredient.
rx("SCDF", "Morphine / Naltrexone Extended Release Oral Tablet")
rel("Morphine", "ingredient_of", "Morphine / Naltrexone Extended Release Oral Tablet")
rel("Naltrexone", "ingredient_of", "Morphine / Naltrexone Extended Release Oral Tablet")

family(
    "Fentanyl", "4337", "C0015846",
    pins=["Fentanyl Citrate"],
    bns=["Duragesic", "Sublimaze", "Actiq", "Fentora"],
    scdc=[("Fentanyl 0.025 MG/HR", None), ("Fentanyl Citrate 0.05 MG/ML", "Fentanyl Citrate"),
          ("Fentanyl 0.1 MG/HR", None)],
    scdf=["Fentanyl Transdermal System", "Fentanyl Injectable Solution",
          "Fentanyl Buccal Tablet"],
    scd=[("72 HR Fentanyl 0.025 MG/HR Transdermal System", "Fentanyl 0.025 MG/HR"),
         ("Fentanyl Citrate 0.05 MG/ML Injectable Solution", "Fentanyl Citrate 0.05 MG/ML")],
    sbd=[("72 HR Fentanyl 0.025 MG/HR Transdermal System [Duragesic]",
          "72 HR Fentanyl 0.025 MG/HR Transdermal System", "Duragesic")],
    no_cui=["Duragesic"],
)

family(
    "Oxycodone", "7804", "C0030049",
    pins=["Oxycodone Hydrochloride"],
    bns=["OxyContin", "Roxicodone", "Oxaydo"],
    scdc=[("Oxycodone Hydrochloride 10 MG", "Oxycodone Hydrochloride"),
          ("Oxycodone Hydrochloride 1 MG/ML", "Oxycodone Hydrochloride")],
    scdf=["Oxycodone Oral Tablet", "Oxycodone Extended Release Oral Tablet"],
    scd=[("12 HR Oxycodone Hydrochloride 10 MG Extended Release Oral Tablet",
          "Oxycodone Hydrochloride 10 MG")],
    sbd=[("12 HR Oxycodone Hydrochloride 10 MG Extended Release Oral Tablet [OxyContin]",
          "12 HR Oxycodone Hydrochloride 10 MG Extended Release Oral Tablet", "OxyContin")],
    no_cui=["Roxicodone"],
)
combo("Acetaminophen / Oxycodone", ["Acetaminophen", "Oxycodone"], bns=["Percocet"],
      scdf=["Acetaminophen / Oxycodone Oral Tablet"])

family(
    "Hydrocodone", "5489", "C0020264",
    pins=["Hydrocodone Bitartrate"],
    bns=["Zohydro", "Hysingla"],
    scdc=[("Hydrocodone Bitartrate 20 MG", "Hydrocodone Bitartrate")],
    scdf=["Hydrocodone Extended Release Oral Capsule"],
    no_cui=["Zohydro"],
)
combo("Acetaminophen / Hydrocodone", ["Acetaminophen", "Hydrocodone"],
      bns=["Norco", "Vicodin"], scdf=["Acetaminophen / Hydrocodone Oral Tablet"])

family(
    "Codeine", "2670", "C0009214",
    pins=["Codeine Sulfate", "Codeine Phosphate"],
    scdc=[("Codeine Sulfate 15 MG", "Codeine Sulfate")],
    scdf=["Codeine Oral Tablet"],
    scd=[("Codeine Sulfate 15 MG Oral Tablet", "Codeine Sulfate 15 MG")],
)
combo("Acetaminophen / Codeine", ["Acetaminophen", "Codeine"],
      bns=["Tylenol with Codeine"], scdf=["Acetaminophen / Codeine Oral Solution"])

family(
    "Hydromorphone", "3423", "C0012306",
    pins=["Hydromorphone Hydrochloride"],
    bns=["Dilaudid", "Exalgo"],
    scdc=[("Hydromorphone Hydrochloride 2 MG", "Hydromorphone Hydrochloride"),
          ("Hydromorphone Hydrochloride 4 MG/ML", "Hydromorphone Hydrochloride")],
    scdf=["Hydromorphone Oral Tablet", "Hydromorphone Injectable Solution"],
    scd=[("Hydromorphone Hydrochloride 2 MG Oral Tablet", "Hydromorphone Hydrochloride 2 MG")],
    sbd=[("Hydromorphone Hydrochloride 2 MG Oral Tablet [Dilaudid]",
          "Hydromorphone Hydrochloride 2 MG Oral Tablet", "Dilaudid")],
)

family(
    "Methadone", "6813", "C0025605",
    pins=["Methadone Hydrochloride"],
    bns=["Dolophine", "Methadose"],
    scdc=[("Methadone Hydrochloride 5 MG", "Methadone Hydrochloride")],
    scdf=["Methadone Oral Tablet", "Methadone Oral Concentrate"],
    scd=[("Methadone Hydrochloride 5 MG Oral Tablet", "Methadone Hydrochloride 5 MG")],
    no_cui=["Methadose"],
)

family(
    "Buprenorphine", "1819", "C0006405",
    pins=["Buprenorphine Hydrochloride"],
    bns=["Subutex", "Butrans", "Buprenex"],
    scdc=[("Buprenorphine 0.01 MG/HR", None),
          ("Buprenorphine Hydrochloride 2 MG", "Buprenorphine Hydrochloride")],
    scdf=["Buprenorphine Transdermal System", "Buprenorphine Sublingual Tablet"],
    scd=[("7 DAY Buprenorphine 0.01 MG/HR Transdermal System", "Buprenorphine 0.01 MG/HR")],
    sbd=[("7 DAY Buprenorphine 0.01 MG/HR Transdermal System [Butrans]",
          "7 DAY Buprenorphine 0.01 MG/HR Transdermal System", "Butrans")],
    no_cui=["Butrans"],
)

family(
    "Naloxone", "7242", "C0027358",
    pins=["Naloxone Hydrochloride"],
    bns=["Narcan", "Evzio"],
    scdc=[("Naloxone Hydrochloride 0.4 MG/ML", "Naloxone Hydrochloride")],
    scdf=["Naloxone Nasal Spray", "Naloxone Injectable Solution"],
)
combo("Buprenorphine / Naloxone", ["Buprenorphine", "Naloxone"], bns=["Suboxone", "Zubsolv"],
      scdf=["Buprenorphine / Naloxone Sublingual Film"])

family(
    "Tramadol", "10689", "C0040610",
    pins=["Tramadol Hydrochloride"],
    bns=["Ultram", "ConZip"],
    scdc=[("Tramadol Hydrochloride 100 MG", "Tramadol Hydrochloride")],
    scdf=["Tramadol Oral Tablet"],
    no_cui=["Ultram"],
)
combo("Acetaminophen / Tramadol", ["Acetaminophen", "Tramadol"], bns=["Ultracet"])

family(
    "Meperidine", "6754", "C0025376",
    pins=["Meperidine Hydrochloride"],
    bns=["Demerol"],
    scdc=[("Meperidine Hydrochloride 25 MG/ML", "Meperidine Hydrochloride")],
    scdf=["Meperidine Injectable Solution"],
)

# Non-opioid families: reachable only through the (blocked) acetaminophen
# ingredient, or not at all.
family(
    "Ibuprofen", "5640", "C0020740",
    bns=["Advil", "Motrin"],
    scdc=[("Ibuprofen 200 MG", None)],
    scdf=["Ibuprofen Oral Tablet"],
)
for b in ["Tylenol", "Mapap"]:
    rx("BN", b)
    rel("Acetaminophen", "has_tradename", b)
rx("SCDC", "Acetaminophen 325 MG")
rel("Acetaminophen", "ingredient_of", "Acetaminophen 325 MG")
rx("SCD", "Acetaminophen 325 MG Oral Tablet")
rel("Acetaminophen 325 MG Oral Tablet", "consists_of", "Acetaminophen 325 MG")
rel("Acetaminophen 325 MG", "constitutes", "Acetaminophen 325 MG Oral Tablet")
rel("Atropine", "has_tradename", "Tylenol")  # noise edge into the blocked region
rel("Atropine", "ingredient_of", "Atropine / Morphine Injectable Solution")

# Duplicate rows, as exported terminologies commonly contain.
relations.append(relations[0])
relations.append(relations[5])
relations.append(relations[5])


# ---------------------------------------------------------------------------
# Write TSV
# ---------------------------------------------------------------------------


def write_tsv(name, header, rows):
    with open(os.path.join(HERE, name), "w", newline="") as f:
        f.write("\t".join(header) + "\n")
        for r in rows:
            f.write("\t".join(r) + "\n")


write_tsv("atc.tsv", ["code", "parent_code", "name"], [(c, p, n) for c, p, n, _ in ATC])
atc_concepts = [("ATC", c, cui, "PT", n) for c, p, n, cui in ATC]
write_tsv("concepts.tsv", ["source", "code", "cui", "tty", "name"], atc_concepts + concepts)
write_tsv("relations.tsv", ["src_source", "src_code", "rel", "dst_source", "dst_code"], relations)

# ---------------------------------------------------------------------------
# Write RRF subset. MRREL rows read "AUI2 <RELA> AUI1".
# ---------------------------------------------------------------------------
aui_of = {}
conso_rows = []
aui_n = [1]


def next_aui():
    a = "A%08d" % aui_n[0]
    aui_n[0] += 1
    return a


for source, code, cui, tty, name in atc_concepts + concepts:
    aui = next_aui()
    aui_of[(source, code)] = aui
    conso_rows.append([cui, "ENG", "P", "L0000001", "PF", "S0000001", "Y", aui, "", "", "",
                       source, tty, code, name, "0", "N", "", ""])
    if source == "RXNORM" and tty == "IN":
        # synonym atom: same code, later row, must not override the first
        conso_rows.append([cui, "ENG", "S", "L0000002", "VO", "S0000002", "N", next_aui(), "",
                           "", "", source, "SY", code, name.upper() + " (SYNONYM)", "0", "N",
                           "", ""])
# Foreign-vocabulary atom that the adapter must skip.
conso_rows.append(["C0026549", "ENG", "P", "L0000003", "PF", "S0000003", "Y", "A99999999", "",
                   "", "D009020", "MSH", "MH", "D009020", "Morphine", "0", "N", "", ""])

rel_rows = []
rui = [1]


def mrrel(aui1, rela, aui2, rel_code="RO", sab="RXNORM"):
    rel_rows.append(["", aui1, "SCUI", rel_code, "", aui2, "SCUI", rela, "R%08d" % rui[0], "",
                     sab, sab, "", "Y", "N", "", ""])
    rui[0] += 1


for c, p, n, _ in ATC:
    if p:
        mrrel(aui_of[("ATC", p)], "isa", aui_of[("ATC", c)], "CHD", "ATC")
for ss, sc, kind, ds, dc in relations:
    mrrel(aui_of[(ds, dc)], kind, aui_of[(ss, sc)])
# Inverse labels outside the fixed set: skipped and counted.
mrrel(aui_of[("RXNORM", "7052")], "tradename_of", aui_of[("RXNORM", by_name["MS Contin"])])
mrrel(aui_of[("RXNORM", by_name["Morphine Sulfate 30 MG"])], "has_ingredient",
      aui_of[("RXNORM", "7052")])
# Relation touching the foreign atom: skipped.
mrrel("A99999999", "mapped_to", aui_of[("RXNORM", "7052")], "RO", "MSH")

for name, rows in [("MRCONSO.RRF", conso_rows), ("MRREL.RRF", rel_rows)]:
    with open(os.path.join(HERE, "rrf", name), "w", newline="") as f:
        for r in rows:
            f.write("|".join(r) + "|\n")

# ---------------------------------------------------------------------------
# EMR strings + records. Labels live in parse_labels.tsv (hand-written);
# ingredient sets are read from it.
# ---------------------------------------------------------------------------
labels = []
with open(os.path.join(HERE, "parse_labels.tsv"), newline="") as f:
    reader = csv.reader(f, delimiter="\t", quoting=csv.QUOTE_NONE)
    header = next(reader)
    for row in reader:
        labels.append(dict(zip(header, row)))
strings = [l["raw"] for l in labels]
assert len(strings) == 50 and len(set(strings)) == 50
ingredients_of = {l["raw"]: [i for i in l["ingredients"].split(";") if i] for l in labels}

with open(os.path.join(HERE, "drug_strings.txt"), "w") as f:
    for s in strings:
        f.write(s + "\n")


def only(ing):
    return [s for s in strings if ingredients_of[s] == [ing]]


STATES = {
    "FL": ["Miami", "Tampa", "Orlando", "Jacksonville"],
    "TX": ["Houston", "Dallas", "Austin"],
    "GA": ["Atlanta"],
    "CA": ["Los Angeles", "San Diego"],
    "WA": ["Seattle"],
    "OH": ["Columbus", "Cleveland"],
    "IL": ["Chicago"],
    "NY": ["New York", "Buffalo"],
    "PA": ["Philadelphia"],
    "DC": ["Washington"],
}

rng = random.Random(20190506)
records = []


def block(pool, state, sub, year, n):
    for _ in range(n):
        records.append((rng.choice(pool), state, sub, year))


block(only("Fentanyl"), "FL", "Miami", 2012, 7)
block(only("Fentanyl"), "FL", "Miami", 2010, 3)
block(only("Fentanyl"), "FL", "Miami", 2011, 4)
block(only("Fentanyl"), "FL", "Miami", 2013, 5)
block(only("Fentanyl"), "FL", "Miami", 2015, 2)
block(only("Fentanyl"), "FL", "Tampa", 2012, 60)
block(only("Fentanyl"), "FL", "Orlando", 2012, 50)
block(only("Morphine"), "FL", "Jacksonville", 2012, 70)
block(only("Morphine"), "FL", "Tampa", 2012, 60)
block(only("Oxycodone"), "TX", "Houston", 2013, 55)
block(only("Oxycodone"), "TX", "Dallas", 2013, 50)
# every distinct string at least once
for i, s in enumerate(strings):
    st = sorted(STATES)[i % len(STATES)]
    records.append((s, st, STATES[st][i % len(STATES[st])], 2009 + i % 8))
# filler, keeping (FL, Miami, 2012) untouched
while len(records) < 1200:
    st = rng.choice(sorted(STATES))
    sub = rng.choice(STATES[st])
    yr = rng.randint(2009, 2016)
    if (st, sub, yr) == ("FL", "Miami", 2012):
        continue
    records.append((rng.choice(strings), st, sub, yr))
rng.shuffle(records)

with open(os.path.join(HERE, "emr.csv"), "w", newline="") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["record_id", "drug_string", "state", "subregion", "year"])
    for i, (s, st, sub, yr) in enumerate(records, 1):
        w.writerow(["r%05d" % i, s, st, sub, yr])

print("concepts:", len(atc_concepts) + len(concepts), "relations:", len(relations),
      "records:", len(records))
