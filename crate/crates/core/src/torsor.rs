//! Comparing the Bernardi and rotor-routing actions at each base vertex.

use serde::{Deserialize, Serialize};

use crate::bernardi::BernardiTorsor;
use crate::divisors::{linearly_equivalent, Divisor};
use crate::permutation::TreePermutation;
use crate::ribbon_graph::{RibbonGraph, VertexId};
use crate::rotor::RotorTorsor;
use crate::trees::TreeList;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Bernardi,
    Rotor,
}

/// Both actions at one base vertex.
#[derive(Debug, Clone)]
pub struct BaseActions<'a> {
    pub bernardi: BernardiTorsor<'a>,
    pub rotor: RotorTorsor<'a>,
}

impl<'a> BaseActions<'a> {
    pub fn new(g: &'a RibbonGraph, trees: &'a TreeList, q: VertexId) -> Self {
        Self {
            bernardi: BernardiTorsor::with_default_edge(g, trees, q),
            rotor: RotorTorsor::new(g, trees, q),
        }
    }

    pub fn permutation(&self, kind: ActionKind, d: &Divisor) -> TreePermutation {
        match kind {
            ActionKind::Bernardi => self.bernardi.permutation(d),
            ActionKind::Rotor => self.rotor.permutation(d),
        }
    }

    pub fn generator(&self, kind: ActionKind, v: VertexId) -> TreePermutation {
        match kind {
            ActionKind::Bernardi => self.bernardi.generator(v),
            ActionKind::Rotor => self.rotor.generator(v),
        }
    }

    /// `ρ_q([d])⁻¹ β_q([d])`.
    pub fn difference(&self, d: &Divisor) -> TreePermutation {
        self.rotor.permutation(d).inverse().compose(&self.bernardi.permutation(d))
    }
}

/// Permutation of `[(v) - (q)]` under the chosen action.
pub fn action_permutation(
    g: &RibbonGraph,
    trees: &TreeList,
    kind: ActionKind,
    q: VertexId,
    v: VertexId,
) -> TreePermutation {
    match kind {
        ActionKind::Bernardi => BernardiTorsor::with_default_edge(g, trees, q).generator(v),
        ActionKind::Rotor => RotorTorsor::new(g, trees, q).generator(v),
    }
}

pub fn difference(g: &RibbonGraph, trees: &TreeList, q: VertexId, d: &Divisor) -> TreePermutation {
    BaseActions::new(g, trees, q).difference(d)
}

/// A tree on which the two actions of one generator differ. Tree indices
/// are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Disagreement {
    pub generator: VertexId,
    pub tree: usize,
    pub rotor_image: usize,
    pub bernardi_image: usize,
}

/// `Ok` iff `ρ_q = β_q`; otherwise the first disagreement in canonical
/// generator and tree order.
pub fn torsors_equal(g: &RibbonGraph, trees: &TreeList, q: VertexId) -> Result<(), Disagreement> {
    first_disagreement(g, &BaseActions::new(g, trees, q), q)
}

fn first_disagreement(g: &RibbonGraph, actions: &BaseActions, q: VertexId) -> Result<(), Disagreement> {
    for v in g.vertices().filter(|&v| v != q) {
        let rho = actions.rotor.generator(v);
        let beta = actions.bernardi.generator(v);
        if let Some(i) = (0..rho.len()).find(|&i| rho.apply(i) != beta.apply(i)) {
            return Err(Disagreement {
                generator: v,
                tree: i,
                rotor_image: rho.apply(i),
                bernardi_image: beta.apply(i),
            });
        }
    }
    Ok(())
}

/// The divisor-level test: `β_{(q,e)}(ρ_q([(v)-(q)], T)) ~ (v) - (q) + β_{(q,e)}(T)`
/// for the given generator and tree.
pub fn criterion_holds(
    g: &RibbonGraph,
    actions: &BaseActions,
    q: VertexId,
    v: VertexId,
    tree: usize,
) -> bool {
    let image = actions.rotor.generator(v).apply(tree);
    let lhs = actions.bernardi.break_divisor(image);
    let rhs = &Divisor::generator(g.num_vertices(), v, q) + actions.bernardi.break_divisor(tree);
    linearly_equivalent(g, lhs, &rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub generator: String,
    /// 1-based tree index.
    pub tree: usize,
    pub rotor_image: usize,
    pub bernardi_image: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceEntry {
    pub generator: String,
    pub cycles: String,
    pub cycle_type: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseReport {
    pub vertex: String,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<WitnessEntry>,
    pub differences: Vec<DifferenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub genus: usize,
    pub trees: usize,
    pub bases: Vec<BaseReport>,
    pub bernardi_base_independent: bool,
    pub rotor_base_independent: bool,
}

impl AgreementReport {
    pub fn agreeing(&self) -> impl Iterator<Item = &str> {
        self.bases.iter().filter(|b| b.agree).map(|b| b.vertex.as_str())
    }

    pub fn disagreeing(&self) -> impl Iterator<Item = &str> {
        self.bases.iter().filter(|b| !b.agree).map(|b| b.vertex.as_str())
    }
}

pub fn base_report(g: &RibbonGraph, actions: &BaseActions, q: VertexId) -> BaseReport {
    let n = g.num_vertices();
    let witness = first_disagreement(g, actions, q).err().map(|d| WitnessEntry {
        generator: g.vertex_name(d.generator).to_owned(),
        tree: d.tree + 1,
        rotor_image: d.rotor_image + 1,
        bernardi_image: d.bernardi_image + 1,
    });
    let differences = g
        .vertices()
        .filter(|&v| v != q)
        .map(|v| {
            let p = actions.difference(&Divisor::generator(n, v, q));
            DifferenceEntry {
                generator: g.vertex_name(v).to_owned(),
                cycles: p.to_string(),
                cycle_type: p.cycle_type(),
            }
        })
        .collect();
    BaseReport {
        vertex: g.vertex_name(q).to_owned(),
        agree: witness.is_none(),
        witness,
        differences,
    }
}

/// True iff the action of every `[(v) - (u)]` is the same permutation at
/// every base vertex.
pub fn base_independent(g: &RibbonGraph, all: &[BaseActions], kind: ActionKind) -> bool {
    let n = g.num_vertices();
    let u = VertexId(0);
    g.vertices().filter(|&v| v != u).all(|v| {
        let d = Divisor::generator(n, v, u);
        let reference = all[0].permutation(kind, &d);
        all[1..].iter().all(|a| a.permutation(kind, &d) == reference)
    })
}

/// Evaluates agreement at every base vertex, in canonical vertex order.
pub fn scan_bases(g: &RibbonGraph, trees: &TreeList) -> AgreementReport {
    let all: Vec<BaseActions> = g.vertices().map(|q| BaseActions::new(g, trees, q)).collect();
    let bases = g.vertices().map(|q| base_report(g, &all[q.0], q)).collect();
    AgreementReport {
        genus: g.genus(),
        trees: trees.len(),
        bases,
        bernardi_base_independent: base_independent(g, &all, ActionKind::Bernardi),
        rotor_base_independent: base_independent(g, &all, ActionKind::Rotor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::enumerate_trees;

    fn triangle() -> RibbonGraph {
        RibbonGraph::from_edge_rotations(&[
            ("x", &["xy", "xz"]),
            ("y", &["yz", "xy"]),
            ("z", &["xz", "yz"]),
        ])
        .unwrap()
    }

    #[test]
    fn triangle_agrees_everywhere() {
        let g = triangle();
        let trees = enumerate_trees(&g);
        let report = scan_bases(&g, &trees);
        assert!(report.bases.iter().all(|b| b.agree && b.witness.is_none()));
        assert!(report.bernardi_base_independent && report.rotor_base_independent);
        for b in &report.bases {
            assert!(b.differences.iter().all(|d| d.cycles == "()"));
        }
        let json = serde_json::to_string(&report).unwrap();
        let back: AgreementReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn criterion_matches_permutations() {
        let g = triangle();
        let trees = enumerate_trees(&g);
        for q in g.vertices() {
            let actions = BaseActions::new(&g, &trees, q);
            for v in g.vertices() {
                for t in 0..trees.len() {
                    assert!(criterion_holds(&g, &actions, q, v, t));
                }
            }
            assert!(torsors_equal(&g, &trees, q).is_ok());
        }
    }

    #[test]
    fn generator_order_divides_group_order() {
        let g = triangle();
        let trees = enumerate_trees(&g);
        for kind in [ActionKind::Bernardi, ActionKind::Rotor] {
            let p = action_permutation(&g, &trees, kind, VertexId(0), VertexId(1));
            assert!(p.pow(trees.len() as i64).is_identity());
        }
        assert!(difference(&g, &trees, VertexId(2), &Divisor::zero(3)).is_identity());
    }
}
