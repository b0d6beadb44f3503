//! Name-based report records shared by the command-line front end. Every
//! record serializes to stable JSON and renders to plain text.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bernardi::BernardiTorsor;
use crate::divisors::{picard_structure, Divisor};
use crate::error::WitnessError;
use crate::ribbon_graph::{RibbonGraph, VertexId};
use crate::rotor::{route_to_sink, step_budget, tree_to_rotor};
use crate::torsor::{ActionKind, BaseActions};
use crate::trees::{SpanningTree, TreeList};
use crate::witness::{
    construct_disagreement, find_nonseparating_cycle, find_proper_witness_pair,
    find_tight_witness_pair, Construction, Route, WitnessPair,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub cycle_rank: usize,
}

impl GenusReport {
    pub fn new(g: &RibbonGraph) -> Self {
        Self {
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            faces: g.faces().len().max(1),
            genus: g.genus(),
            cycle_rank: g.cycle_rank(),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "genus {}\nvertices {}, edges {}, faces {}\ncycle rank {}\n",
            self.genus, self.vertices, self.edges, self.faces, self.cycle_rank
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEntry {
    /// 1-based canonical index.
    pub index: usize,
    pub edges: Vec<String>,
}

impl TreeEntry {
    fn new(g: &RibbonGraph, i: usize, t: &SpanningTree) -> Self {
        Self {
            index: i + 1,
            edges: t.key(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreesReport {
    pub count: usize,
    pub trees: Vec<TreeEntry>,
}

impl TreesReport {
    pub fn new(g: &RibbonGraph, trees: &TreeList) -> Self {
        Self {
            count: trees.len(),
            trees: trees
                .iter()
                .enumerate()
                .map(|(i, t)| TreeEntry::new(g, i, t))
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.trees {
            let _ = writeln!(out, "{} -> {{{}}}", t.index, t.edges.join(", "));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardReport {
    pub structure: String,
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

impl PicardReport {
    pub fn new(g: &RibbonGraph) -> Self {
        let p = picard_structure(g);
        Self {
            structure: p.to_string(),
            invariant_factors: p.invariant_factors,
            order: p.order,
        }
    }

    pub fn text(&self) -> String {
        format!("Pic0 = {}\norder {}\n", self.structure, self.order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakEntry {
    pub tree: usize,
    pub divisor: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepEntry {
    pub chip: String,
    pub rotor: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeImage {
    pub tree: usize,
    pub image: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<StepEntry>,
}

/// The permutation of `[(v) - (q)]` under one action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub kind: ActionKind,
    pub base: String,
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    pub cycles: String,
    pub cycle_type: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub break_divisors: Vec<BreakEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeImage>,
}

/// Options for [`ActionReport::new`]; tree indices are 0-based.
#[derive(Debug, Clone, Copy)]
pub struct ActionRequest {
    pub kind: ActionKind,
    pub base: VertexId,
    pub generator: VertexId,
    pub edge: Option<crate::ribbon_graph::EdgeId>,
    pub tree: Option<usize>,
    pub trace: bool,
}

impl ActionReport {
    pub fn new(
        g: &RibbonGraph,
        trees: &TreeList,
        req: ActionRequest,
    ) -> Result<Self, crate::error::GraphError> {
        let n = g.num_vertices();
        let d = Divisor::generator(n, req.generator, req.base);
        let (perm, edge, break_divisors) = match req.kind {
            ActionKind::Bernardi => {
                let t = match req.edge {
                    Some(e) => BernardiTorsor::new(g, trees, req.base, e)?,
                    None => BernardiTorsor::with_default_edge(g, trees, req.base),
                };
                let breaks = t
                    .break_divisors()
                    .iter()
                    .enumerate()
                    .map(|(i, b)| BreakEntry {
                        tree: i + 1,
                        divisor: b.coefficients().to_vec(),
                    })
                    .collect();
                (t.permutation(&d), Some(g.edge_name(t.edge()).to_owned()), breaks)
            }
            ActionKind::Rotor => {
                let actions = BaseActions::new(g, trees, req.base);
                (actions.rotor.permutation(&d), None, Vec::new())
            }
        };
        let tree = req.tree.map(|i| {
            let trace = if req.trace && req.kind == ActionKind::Rotor {
                let rotor = tree_to_rotor(g, trees.get(i), req.base).rotor;
                route_to_sink(g, &rotor, req.generator, req.base, step_budget(g, trees.len()))
                    .expect("routing from a tree configuration reaches the sink")
                    .steps
                    .iter()
                    .map(|s| StepEntry {
                        chip: g.vertex_name(s.from).to_owned(),
                        rotor: g.edge_name(s.edge).to_owned(),
                        to: g.vertex_name(s.to).to_owned(),
                    })
                    .collect()
            } else {
                Vec::new()
            };
            TreeImage {
                tree: i + 1,
                image: perm.apply(i) + 1,
                trace,
            }
        });
        Ok(Self {
            kind: req.kind,
            base: g.vertex_name(req.base).to_owned(),
            generator: g.vertex_name(req.generator).to_owned(),
            edge,
            cycles: perm.to_string(),
            cycle_type: perm.cycle_type(),
            break_divisors,
            tree,
        })
    }

    pub fn text(&self) -> String {
        let kind = match self.kind {
            ActionKind::Bernardi => "bernardi",
            ActionKind::Rotor => "rotor",
        };
        let mut out = format!("{kind} action at base {}", self.base);
        if let Some(e) = &self.edge {
            let _ = write!(out, ", edge {e}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "({}) - ({}): {}", self.generator, self.base, self.cycles);
        let _ = writeln!(out, "cycle type {:?}", self.cycle_type);
        if !self.break_divisors.is_empty() {
            let _ = writeln!(out, "break divisors:");
            for b in &self.break_divisors {
                let _ = writeln!(out, "  T{} {}", b.tree, Divisor::from_coefficients(b.divisor.clone()));
            }
        }
        if let Some(t) = &self.tree {
            for s in &t.trace {
                let _ = writeln!(out, "  {} -[{}]-> {}", s.chip, s.rotor, s.to);
            }
            let _ = writeln!(out, "T{} -> T{}", t.tree, t.image);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEntry {
    pub cycle: String,
    pub path: String,
    pub proper: bool,
    pub tight: bool,
}

impl PairEntry {
    fn new(g: &RibbonGraph, w: &WitnessPair) -> Self {
        Self {
            cycle: w.cycle.display(g).to_string(),
            path: w.path.display(g).to_string(),
            proper: w.proper,
            tight: w.tight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionEntry {
    pub route: Route,
    pub pair: PairEntry,
    pub reroutes: usize,
    pub fallback: bool,
    pub q: String,
    pub z: String,
    pub tree: Vec<String>,
    pub rotor_image: Vec<String>,
    pub bernardi_image: Vec<String>,
    /// `β_q(T)`, `β_q(ρ_q([(z)-(q)], T))` and `(z) - (q) + β_q(T)`.
    pub break_divisor: Vec<i64>,
    pub rotor_image_break_divisor: Vec<i64>,
    pub shifted_break_divisor: Vec<i64>,
    pub disagree: bool,
}

impl ConstructionEntry {
    fn new(g: &RibbonGraph, trees: &TreeList, c: &Construction) -> Self {
        let bt = BernardiTorsor::with_default_edge(g, trees, c.q);
        let idx = |t: &SpanningTree| trees.index_of(t).expect("tree in list");
        let before = bt.break_divisor(idx(&c.tree)).clone();
        let after = bt.break_divisor(idx(&c.action.rotor_tree)).clone();
        let shifted = &Divisor::generator(g.num_vertices(), c.z, c.q) + &before;
        Self {
            route: c.route,
            pair: PairEntry::new(g, &c.pair),
            reroutes: c.reroutes,
            fallback: c.fallback,
            q: g.vertex_name(c.q).to_owned(),
            z: g.vertex_name(c.z).to_owned(),
            tree: c.tree.key(g),
            rotor_image: c.action.rotor_tree.key(g),
            bernardi_image: c.action.bernardi_tree.key(g),
            break_divisor: before.coefficients().to_vec(),
            rotor_image_break_divisor: after.coefficients().to_vec(),
            shifted_break_divisor: shifted.coefficients().to_vec(),
            disagree: c.action.disagree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub genus: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonseparating: Option<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proper: Option<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tight: Option<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionEntry>,
}

/// Which parts of the witness report to compute.
#[derive(Debug, Clone, Copy, Default)]
pub struct WitnessRequest {
    pub proper: bool,
    pub tight: bool,
    pub construct: bool,
}

impl WitnessReport {
    pub fn new(
        g: &RibbonGraph,
        trees: &TreeList,
        req: WitnessRequest,
    ) -> Result<Self, WitnessError> {
        let nonseparating = find_nonseparating_cycle(g).map(|(cycle, path)| {
            let proper = path.start() != path.end();
            PairEntry::new(g, &WitnessPair { cycle, path, proper, tight: false })
        });
        let proper = req.proper.then(|| find_proper_witness_pair(g)).flatten();
        let tight = req.tight.then(|| find_tight_witness_pair(g)).flatten();
        let construction = if req.construct {
            Some(ConstructionEntry::new(g, trees, &construct_disagreement(g, trees)?))
        } else {
            None
        };
        Ok(Self {
            genus: g.genus(),
            nonseparating,
            proper: proper.map(|w| PairEntry::new(g, &w)),
            tight: tight.map(|w| PairEntry::new(g, &w)),
            construction,
        })
    }

    pub fn text(&self) -> String {
        let mut out = format!("genus {}\n", self.genus);
        let pair = |out: &mut String, label: &str, p: &Option<PairEntry>| {
            match p {
                Some(p) => {
                    let _ = writeln!(out, "{label}: C = {}, P = {}", p.cycle, p.path);
                }
                None => {
                    let _ = writeln!(out, "{label}: none");
                }
            }
        };
        pair(&mut out, "nonseparating cycle", &self.nonseparating);
        if self.proper.is_some() || self.tight.is_some() {
            pair(&mut out, "proper witness pair", &self.proper);
            pair(&mut out, "tight witness pair", &self.tight);
        }
        if let Some(c) = &self.construction {
            let route = match c.route {
                Route::Proper => "proper pair",
                Route::Tight => "tight pair",
            };
            let d = |v: &[i64]| Divisor::from_coefficients(v.to_vec()).to_string();
            let _ = writeln!(out, "construction via {route} (reroutes {})", c.reroutes);
            let _ = writeln!(out, "  pair: C = {}, P = {}", c.pair.cycle, c.pair.path);
            let _ = writeln!(out, "  q = {}, z = {}", c.q, c.z);
            let _ = writeln!(out, "  T = {{{}}}", c.tree.join(", "));
            let _ = writeln!(out, "  rotor image    {{{}}}", c.rotor_image.join(", "));
            let _ = writeln!(out, "  bernardi image {{{}}}", c.bernardi_image.join(", "));
            let _ = writeln!(out, "  beta_q(T)             = {}", d(&c.break_divisor));
            let _ = writeln!(out, "  (z) - (q) + beta_q(T) = {}", d(&c.shifted_break_divisor));
            let _ = writeln!(out, "  beta_q(rotor image)   = {}", d(&c.rotor_image_break_divisor));
            let _ = writeln!(
                out,
                "  torsors {} at {}",
                if c.disagree { "disagree" } else { "agree" },
                c.q
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::trees::enumerate_trees;

    #[test]
    fn witness_report_round_trips() {
        let g = catalog("pointed-bowtie").unwrap().graph;
        let trees = enumerate_trees(&g);
        let req = WitnessRequest {
            proper: true,
            tight: true,
            construct: true,
        };
        let r = WitnessReport::new(&g, &trees, req).unwrap();
        assert!(r.proper.is_none() && r.tight.is_some());
        let c = r.construction.as_ref().unwrap();
        assert!(c.disagree);
        assert_ne!(c.rotor_image_break_divisor, c.shifted_break_divisor);
        let back: WitnessReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn action_report_traces_rotor_steps() {
        let g = catalog("triangle").unwrap().graph;
        let trees = enumerate_trees(&g);
        let req = ActionRequest {
            kind: ActionKind::Rotor,
            base: VertexId(0),
            generator: VertexId(1),
            edge: None,
            tree: Some(0),
            trace: true,
        };
        let r = ActionReport::new(&g, &trees, req).unwrap();
        let t = r.tree.as_ref().unwrap();
        assert!(!t.trace.is_empty());
        assert_eq!(t.trace.last().unwrap().to, "x");
        assert_eq!(r.cycle_type, vec![3]);
    }
}
