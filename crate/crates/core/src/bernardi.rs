//! Bernardi tours, the tree-to-break-divisor bijection at `(q, e)`, and the
//! resulting action of degree-zero divisor classes on spanning trees.

use std::collections::HashMap;

use serde::Serialize;

use crate::divisors::{reduce, Divisor, PIVOT};
use crate::error::GraphError;
use crate::permutation::TreePermutation;
use crate::ribbon_graph::{EdgeId, HalfEdgeId, RibbonGraph, VertexId};
use crate::trees::{SpanningTree, TreeList};

/// A non-tree edge passed over during a tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Skip {
    pub edge: EdgeId,
    /// Vertex whose rotation was being scanned.
    pub vertex: VertexId,
    /// Number of tree edges traversed before this skip.
    pub after_steps: usize,
    pub first: bool,
}

/// The walk `(v0, e1, v1, ..., ek, vk)` with `v0 = vk = q`, plus every
/// skipped non-tree edge in the order it was passed over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BernardiTour {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub skips: Vec<Skip>,
}

impl BernardiTour {
    /// One chip at the scanning vertex for each first skip.
    pub fn break_divisor(&self, n: usize) -> Divisor {
        let mut d = Divisor::zero(n);
        for s in self.skips.iter().filter(|s| s.first) {
            d.add_at(s.vertex, 1);
        }
        d
    }

    pub fn display(&self, g: &RibbonGraph) -> String {
        let mut out = String::from("(");
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(g.vertex_name(*v));
            if let Some(e) = self.edges.get(i) {
                out.push_str(", ");
                out.push_str(g.edge_name(*e));
            }
        }
        out.push(')');
        out
    }
}

/// Tours `tree` starting at `q` with `e` as the first edge considered (the
/// virtual previous edge is the one just before `e` at `q`). At each vertex
/// the rotation is scanned forward from the edge of arrival, skipping
/// non-tree edges, until a tree edge is found and crossed. The tour ends
/// when the state `(q, about to consider e)` recurs.
pub fn bernardi_tour(
    g: &RibbonGraph,
    tree: &SpanningTree,
    q: VertexId,
    e: EdgeId,
) -> Result<BernardiTour, GraphError> {
    let start = g.require_half_edge_at(e, q)?;
    Ok(tour_from(g, tree, start))
}

fn tour_from(g: &RibbonGraph, tree: &SpanningTree, start: HalfEdgeId) -> BernardiTour {
    let q = g.vertex_of(start);
    let mut vertices = vec![q];
    let mut edges = Vec::new();
    let mut skips = Vec::new();
    let mut skipped = vec![false; g.num_edges()];
    let mut h = start;
    loop {
        let edge = g.edge_of(h);
        if tree.contains(edge) {
            let t = g.twin(h);
            edges.push(edge);
            vertices.push(g.vertex_of(t));
            h = g.successor(t);
        } else {
            let first = !std::mem::replace(&mut skipped[edge.0], true);
            skips.push(Skip {
                edge,
                vertex: g.vertex_of(h),
                after_steps: edges.len(),
                first,
            });
            h = g.successor(h);
        }
        if h == start {
            break;
        }
    }
    BernardiTour {
        vertices,
        edges,
        skips,
    }
}

pub fn bernardi_break_divisor(
    g: &RibbonGraph,
    tree: &SpanningTree,
    q: VertexId,
    e: EdgeId,
) -> Result<Divisor, GraphError> {
    Ok(bernardi_tour(g, tree, q, e)?.break_divisor(g.num_vertices()))
}

/// The bijection trees -> break divisors at fixed `(q, e)` with its inverse
/// keyed by reduced divisor.
#[derive(Debug, Clone)]
pub struct BernardiTorsor<'a> {
    graph: &'a RibbonGraph,
    trees: &'a TreeList,
    base: VertexId,
    edge: EdgeId,
    divisors: Vec<Divisor>,
    inverse: HashMap<Divisor, usize>,
}

impl<'a> BernardiTorsor<'a> {
    pub fn new(
        graph: &'a RibbonGraph,
        trees: &'a TreeList,
        base: VertexId,
        edge: EdgeId,
    ) -> Result<Self, GraphError> {
        let start = graph.require_half_edge_at(edge, base)?;
        let n = graph.num_vertices();
        let divisors: Vec<Divisor> = trees
            .iter()
            .map(|t| tour_from(graph, t, start).break_divisor(n))
            .collect();
        let mut inverse = HashMap::with_capacity(divisors.len());
        for (i, d) in divisors.iter().enumerate() {
            let prev = inverse.insert(reduce(graph, d, PIVOT), i);
            assert!(
                prev.is_none(),
                "Bernardi map sends two trees to equivalent divisors"
            );
        }
        Ok(Self {
            graph,
            trees,
            base,
            edge,
            divisors,
            inverse,
        })
    }

    /// Uses the first edge in the rotation at `base`.
    pub fn with_default_edge(
        graph: &'a RibbonGraph,
        trees: &'a TreeList,
        base: VertexId,
    ) -> Self {
        let edge = graph.edge_of(graph.rotation(base)[0]);
        Self::new(graph, trees, base, edge).expect("edge taken from the rotation at base")
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    /// Break divisor of the tree with canonical index `i`.
    pub fn break_divisor(&self, i: usize) -> &Divisor {
        &self.divisors[i]
    }

    pub fn break_divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    /// Index of the tree whose break divisor is equivalent to `d`.
    pub fn tree_for(&self, d: &Divisor) -> Option<usize> {
        self.inverse.get(&reduce(self.graph, d, PIVOT)).copied()
    }

    /// `[d] · T_i`, `d` of degree zero.
    pub fn apply(&self, d: &Divisor, i: usize) -> usize {
        debug_assert_eq!(d.degree(), 0);
        self.tree_for(&(d + &self.divisors[i]))
            .expect("every degree-g class has a break divisor in the image")
    }

    pub fn permutation(&self, d: &Divisor) -> TreePermutation {
        let images = (0..self.trees.len()).map(|i| self.apply(d, i)).collect();
        TreePermutation::from_images(images).expect("divisor classes act bijectively")
    }

    /// Permutation of the generator `(v) - (base)`.
    pub fn generator(&self, v: VertexId) -> TreePermutation {
        self.permutation(&Divisor::generator(self.graph.num_vertices(), v, self.base))
    }
}

/// `β_q([d], T)` using the first edge at `q`.
pub fn bernardi_action(
    g: &RibbonGraph,
    trees: &TreeList,
    q: VertexId,
    d: &Divisor,
    tree: &SpanningTree,
) -> SpanningTree {
    let torsor = BernardiTorsor::with_default_edge(g, trees, q);
    let i = trees.index_of(tree).expect("tree belongs to the list");
    trees.get(torsor.apply(d, i)).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::{is_break_divisor, laplacian};
    use crate::trees::enumerate_trees;

    fn triangle() -> RibbonGraph {
        RibbonGraph::from_edge_rotations(&[
            ("x", &["xy", "xz"]),
            ("y", &["yz", "xy"]),
            ("z", &["xz", "yz"]),
        ])
        .unwrap()
    }

    fn rounded_bowtie() -> RibbonGraph {
        RibbonGraph::from_edge_rotations(&[
            ("a", &["ca1", "ca2"]),
            ("b", &["cb1", "cb2"]),
            ("c", &["ca1", "cb1", "ca2", "cb2"]),
        ])
        .unwrap()
    }

    #[test]
    fn single_edge_tour() {
        let g = RibbonGraph::from_edge_rotations(&[("q", &["e"]), ("v", &["e"])]).unwrap();
        let trees = enumerate_trees(&g);
        let q = g.vertex_by_name("q").unwrap();
        let tour = bernardi_tour(&g, trees.get(0), q, EdgeId(0)).unwrap();
        assert_eq!(tour.display(&g), "(q, e, v, e, q)");
        assert!(tour.skips.is_empty());
        assert!(tour.break_divisor(2).is_zero());
    }

    #[test]
    fn triangle_tour_skips_once_per_endpoint() {
        let g = triangle();
        let [x, y] = ["x", "y"].map(|n| g.vertex_by_name(n).unwrap());
        let [xy, yz, xz] = ["xy", "yz", "xz"].map(|n| g.edge_by_name(n).unwrap());
        let t = SpanningTree::new(&g, vec![xy, yz]).unwrap();
        let tour = bernardi_tour(&g, &t, x, xy).unwrap();
        assert_eq!(tour.edges.len(), 4);
        assert_eq!(tour.skips.len(), 2);
        assert!(tour.skips.iter().all(|s| s.edge == xz));
        let b = tour.break_divisor(3);
        assert_eq!(b.degree(), 1);
        assert!(b.get(y) == 0);
        assert!(matches!(
            bernardi_tour(&g, &t, x, yz),
            Err(GraphError::NotIncident { .. })
        ));
    }

    #[test]
    fn rounded_bowtie_break_divisors() {
        let g = rounded_bowtie();
        let trees = enumerate_trees(&g);
        let c = g.vertex_by_name("c").unwrap();
        let ca1 = g.edge_by_name("ca1").unwrap();
        let torsor = BernardiTorsor::new(&g, &trees, c, ca1).unwrap();
        let mut got: Vec<String> = torsor.break_divisors().iter().map(|d| d.to_string()).collect();
        got.sort();
        assert_eq!(got, ["(0,0,2)", "(0,1,1)", "(1,0,1)", "(1,1,0)"]);
        for (i, t) in trees.iter().enumerate() {
            let b = is_break_divisor(&g, &trees, torsor.break_divisor(i)).unwrap();
            assert!(tree_break_witness(&g, t, &b.divisor));
        }
    }

    fn tree_break_witness(g: &RibbonGraph, t: &SpanningTree, d: &Divisor) -> bool {
        crate::divisors::tree_break_divisors(g, t)
            .into_iter()
            .any(|(x, _)| &x == d)
    }

    #[test]
    fn rounded_bowtie_generator_is_double_transposition() {
        let g = rounded_bowtie();
        let trees = enumerate_trees(&g);
        let [a, c] = ["a", "c"].map(|n| g.vertex_by_name(n).unwrap());
        let torsor = BernardiTorsor::with_default_edge(&g, &trees, c);
        let p = torsor.generator(a);
        assert_eq!(p.cycle_type(), vec![2, 2]);
    }

    #[test]
    fn zero_and_principal_act_trivially() {
        let g = rounded_bowtie();
        let trees = enumerate_trees(&g);
        for q in g.vertices() {
            let torsor = BernardiTorsor::with_default_edge(&g, &trees, q);
            assert!(torsor.permutation(&Divisor::zero(3)).is_identity());
            assert!(torsor.permutation(&laplacian(&g, &[3, -1, 2])).is_identity());
            let t = trees.get(2);
            assert_eq!(&bernardi_action(&g, &trees, q, &Divisor::zero(3), t), t);
        }
    }
}
