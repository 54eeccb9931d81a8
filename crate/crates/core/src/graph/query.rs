use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{EdgeKind, GraphError, NodeId, NodeKind, OdkgGraph};

impl OdkgGraph {
    fn expect_kind(
        &self,
        id: NodeId,
        ok: impl Fn(NodeKind) -> bool,
        expected: &'static str,
    ) -> Result<(), GraphError> {
        let found = self.node(id)?.kind;
        if ok(found) {
            Ok(())
        } else {
            Err(GraphError::WrongKind {
                node: id,
                expected,
                found,
            })
        }
    }

    /// All transitive subclasses of an ATC class, excluding the class itself.
    pub fn descendants(&self, root: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.expect_kind(root, |k| k == NodeKind::AtcClass, "AtcClass")?;
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(kind, child) in self.incoming(v) {
                if kind == EdgeKind::SubClassOf && child != root && seen.insert(child) {
                    queue.push_back(child);
                }
            }
        }
        Ok(seen)
    }

    /// Outgoing edges of `node`, optionally restricted to one kind, sorted by
    /// kind and then neighbor label.
    pub fn first_degree_hops(
        &self,
        node: NodeId,
        rel: Option<EdgeKind>,
    ) -> Result<Vec<(EdgeKind, NodeId)>, GraphError> {
        self.node(node)?;
        let mut hops: Vec<(EdgeKind, NodeId)> = self
            .outgoing(node)
            .iter()
            .copied()
            .filter(|(k, _)| rel.is_none_or(|r| r == *k))
            .collect();
        hops.sort_by(|a, b| {
            (a.0, &self.nodes[a.1.index()].label, a.1).cmp(&(
                b.0,
                &self.nodes[b.1.index()].label,
                b.1,
            ))
        });
        Ok(hops)
    }

    /// Generic ingredients reachable from an RxNorm node over the property
    /// edges taken in either direction. Ingredient nodes are collected but not
    /// expanded, so an ingredient rolls up to itself.
    pub fn roll_up_to_ingredients(&self, node: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.expect_kind(node, NodeKind::is_rxnorm, "RxClass or RxGenericIngredient")?;
        let mut found = BTreeSet::new();
        if self.nodes[node.index()].kind == NodeKind::RxGenericIngredient {
            found.insert(node);
            return Ok(found);
        }
        let mut seen = HashSet::from([node]);
        let mut queue = VecDeque::from([node]);
        while let Some(v) = queue.pop_front() {
            let neighbors = self.outgoing(v).iter().chain(self.incoming(v));
            for &(kind, w) in neighbors {
                if !kind.is_property() || !seen.insert(w) {
                    continue;
                }
                if self.nodes[w.index()].kind == NodeKind::RxGenericIngredient {
                    found.insert(w);
                } else {
                    queue.push_back(w);
                }
            }
        }
        Ok(found)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{atc, edge, rx};
    use super::super::*;

    fn tree() -> OdkgGraph {
        // N02A <- {A, B, C}; A <- {A1, A2}
        let nodes = vec![
            atc(0, "N02A"),
            atc(1, "A"),
            atc(2, "B"),
            atc(3, "C"),
            atc(4, "A1"),
            atc(5, "A2"),
        ];
        let edges = vec![
            edge(1, EdgeKind::SubClassOf, 0),
            edge(2, EdgeKind::SubClassOf, 0),
            edge(3, EdgeKind::SubClassOf, 0),
            edge(4, EdgeKind::SubClassOf, 1),
            edge(5, EdgeKind::SubClassOf, 1),
        ];
        OdkgGraph::from_parts(nodes, edges).unwrap()
    }

    #[test]
    fn descendants_of_tree() {
        let g = tree();
        assert_eq!(g.descendants(NodeId(0)).unwrap().len(), 5);
        assert!(g.descendants(NodeId(4)).unwrap().is_empty());
        assert!(matches!(
            g.descendants(NodeId(99)),
            Err(GraphError::UnknownNode(_))
        ));
    }

    #[test]
    fn descendants_survive_cycle() {
        let nodes = vec![atc(0, "X"), atc(1, "Y")];
        let edges = vec![
            edge(0, EdgeKind::SubClassOf, 1),
            edge(1, EdgeKind::SubClassOf, 0),
        ];
        let g = OdkgGraph::from_parts(nodes, edges).unwrap();
        assert_eq!(
            g.descendants(NodeId(0)).unwrap(),
            BTreeSet::from([NodeId(1)])
        );
    }

    fn morphine() -> OdkgGraph {
        let nodes = vec![
            rx(0, NodeKind::RxGenericIngredient, "Morphine"),
            rx(1, NodeKind::RxGenericIngredient, "Naltrexone"),
            rx(2, NodeKind::RxClass, "Morphine / Naltrexone"),
            rx(
                3,
                NodeKind::RxClass,
                "Morphine / Naltrexone Extended Release Oral Tablet",
            ),
            rx(4, NodeKind::RxClass, "MS Contin"),
            rx(5, NodeKind::RxClass, "Duramorph"),
            rx(6, NodeKind::RxClass, "Lonely"),
        ];
        let edges = vec![
            edge(0, EdgeKind::PartOf, 2),
            edge(1, EdgeKind::PartOf, 2),
            edge(2, EdgeKind::IngredientOf, 3),
            edge(0, EdgeKind::HasTradename, 5),
            edge(0, EdgeKind::HasTradename, 4),
        ];
        OdkgGraph::from_parts(nodes, edges).unwrap()
    }

    #[test]
    fn hops_are_sorted_by_label() {
        let g = morphine();
        let hops = g
            .first_degree_hops(NodeId(0), Some(EdgeKind::HasTradename))
            .unwrap();
        assert_eq!(
            hops,
            vec![
                (EdgeKind::HasTradename, NodeId(5)),
                (EdgeKind::HasTradename, NodeId(4))
            ]
        );
        assert_eq!(g.first_degree_hops(NodeId(0), None).unwrap().len(), 3);
        assert!(g.first_degree_hops(NodeId(6), None).unwrap().is_empty());
    }

    #[test]
    fn roll_up_stops_at_ingredients() {
        let g = morphine();
        assert_eq!(
            g.roll_up_to_ingredients(NodeId(3)).unwrap(),
            BTreeSet::from([NodeId(0), NodeId(1)])
        );
        // Duramorph must not leak into Naltrexone through Morphine.
        assert_eq!(
            g.roll_up_to_ingredients(NodeId(5)).unwrap(),
            BTreeSet::from([NodeId(0)])
        );
        assert_eq!(
            g.roll_up_to_ingredients(NodeId(1)).unwrap(),
            BTreeSet::from([NodeId(1)])
        );
        assert!(g.roll_up_to_ingredients(NodeId(6)).unwrap().is_empty());
        assert!(matches!(
            tree().roll_up_to_ingredients(NodeId(0)),
            Err(GraphError::WrongKind { .. })
        ));
    }
}
