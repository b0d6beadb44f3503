//! Rotor-routing: configurations, single steps, routing to a sink, the
//! induced action on spanning trees, and unicycles.

use serde::Serialize;

use crate::divisors::Divisor;
use crate::error::RotorError;
use crate::permutation::TreePermutation;
use crate::ribbon_graph::{EdgeId, HalfEdgeId, RibbonGraph, VertexId};
use crate::trees::{SpanningTree, TreeList};

/// A rotor at some vertices plus a chip. `rotor[w]` is a half-edge at `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RotorConfiguration {
    pub rotor: Vec<Option<HalfEdgeId>>,
    pub chip: VertexId,
}

impl RotorConfiguration {
    pub fn with_chip(&self, chip: VertexId) -> Self {
        Self {
            rotor: self.rotor.clone(),
            chip,
        }
    }

    pub fn is_total(&self) -> bool {
        self.rotor.iter().all(Option::is_some)
    }

    /// Vertex the rotor at `w` points to.
    pub fn target(&self, g: &RibbonGraph, w: VertexId) -> Option<VertexId> {
        self.rotor[w.0].map(|h| g.vertex_of(g.twin(h)))
    }
}

/// Rotors pointing one step toward `q` along `tree`; no rotor at `q`. The
/// chip starts at `q`.
pub fn tree_to_rotor(g: &RibbonGraph, tree: &SpanningTree, q: VertexId) -> RotorConfiguration {
    RotorConfiguration {
        rotor: tree.parent_darts(g, q),
        chip: q,
    }
}

/// The edges carried by rotors at every vertex except `sink`, if they form a
/// spanning tree.
pub fn rotor_subgraph(
    g: &RibbonGraph,
    rotor: &[Option<HalfEdgeId>],
    sink: VertexId,
) -> Result<SpanningTree, RotorError> {
    let mut edges = Vec::with_capacity(rotor.len());
    for w in g.vertices().filter(|&w| w != sink) {
        let h = rotor[w.0].ok_or_else(|| RotorError::MissingRotor(g.vertex_name(w).into()))?;
        edges.push(g.edge_of(h));
    }
    SpanningTree::new(g, edges).map_err(|_| RotorError::NotATree)
}

/// One move: the rotor at the chip's vertex advances and the chip crosses
/// the new rotor edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: VertexId,
    /// The rotor's new half-edge at `from`.
    pub rotor: HalfEdgeId,
    pub edge: EdgeId,
    pub to: VertexId,
}

impl Step {
    pub fn display(&self, g: &RibbonGraph) -> String {
        format!(
            "{} -[{}]-> {}",
            g.vertex_name(self.from),
            g.edge_name(self.edge),
            g.vertex_name(self.to)
        )
    }
}

/// Performs one step in place. `sink`, when given, may not hold the chip.
pub fn rotor_step_mut(
    g: &RibbonGraph,
    c: &mut RotorConfiguration,
    sink: Option<VertexId>,
) -> Result<Step, RotorError> {
    let v = c.chip;
    if sink == Some(v) {
        return Err(RotorError::AtSink(g.vertex_name(v).into()));
    }
    let h = c.rotor[v.0].ok_or_else(|| RotorError::MissingRotor(g.vertex_name(v).into()))?;
    let next = g.successor(h);
    c.rotor[v.0] = Some(next);
    let to = g.vertex_of(g.twin(next));
    c.chip = to;
    Ok(Step {
        from: v,
        rotor: next,
        edge: g.edge_of(next),
        to,
    })
}

pub fn rotor_step(
    g: &RibbonGraph,
    c: &RotorConfiguration,
    sink: Option<VertexId>,
) -> Result<RotorConfiguration, RotorError> {
    let mut next = c.clone();
    rotor_step_mut(g, &mut next, sink)?;
    Ok(next)
}

/// Result of routing a chip into the sink.
#[derive(Debug, Clone)]
pub struct Routing {
    pub rotor: Vec<Option<HalfEdgeId>>,
    pub tree: SpanningTree,
    pub steps: Vec<Step>,
}

/// Defensive bound on routing length: `4·|E|·|Pic⁰|`.
pub fn step_budget(g: &RibbonGraph, picard_order: usize) -> usize {
    4 * g.num_edges() * picard_order.max(1)
}

/// Routes the chip at `chip` until it reaches `sink`, then reads off the
/// spanning tree of final rotors.
pub fn route_to_sink(
    g: &RibbonGraph,
    rotor: &[Option<HalfEdgeId>],
    chip: VertexId,
    sink: VertexId,
    budget: usize,
) -> Result<Routing, RotorError> {
    let mut c = RotorConfiguration {
        rotor: rotor.to_vec(),
        chip,
    };
    let mut steps = Vec::new();
    while c.chip != sink {
        if steps.len() == budget {
            return Err(RotorError::StepBudgetExceeded(budget));
        }
        steps.push(rotor_step_mut(g, &mut c, Some(sink))?);
    }
    let tree = rotor_subgraph(g, &c.rotor, sink)?;
    Ok(Routing {
        rotor: c.rotor,
        tree,
        steps,
    })
}

/// Generator permutations of `ρ_q` on a fixed tree list.
#[derive(Debug, Clone)]
pub struct RotorTorsor<'a> {
    graph: &'a RibbonGraph,
    trees: &'a TreeList,
    base: VertexId,
    generators: Vec<TreePermutation>,
}

impl<'a> RotorTorsor<'a> {
    pub fn new(graph: &'a RibbonGraph, trees: &'a TreeList, base: VertexId) -> Self {
        let budget = step_budget(graph, trees.len());
        let rotors: Vec<_> = trees.iter().map(|t| tree_to_rotor(graph, t, base).rotor).collect();
        let generators = graph
            .vertices()
            .map(|v| {
                let images = rotors
                    .iter()
                    .map(|r| {
                        let routed = route_to_sink(graph, r, v, base, budget)
                            .expect("routing from a tree configuration reaches the sink");
                        trees.index_of(&routed.tree).expect("routing ends in a spanning tree")
                    })
                    .collect();
                TreePermutation::from_images(images)
                    .expect("rotor routing permutes spanning trees")
            })
            .collect();
        Self {
            graph,
            trees,
            base,
            generators,
        }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    /// Permutation of `(v) - (base)`.
    pub fn generator(&self, v: VertexId) -> TreePermutation {
        self.generators[v.0].clone()
    }

    /// Extends the generators linearly; negative coefficients use inverses.
    pub fn permutation(&self, d: &Divisor) -> TreePermutation {
        debug_assert_eq!(d.degree(), 0);
        let mut out = TreePermutation::identity(self.trees.len());
        for v in self.graph.vertices().filter(|&v| v != self.base) {
            let k = d.get(v);
            if k != 0 {
                out = self.generators[v.0].pow(k).compose(&out);
            }
        }
        out
    }

    pub fn apply(&self, d: &Divisor, i: usize) -> usize {
        self.permutation(d).apply(i)
    }
}

/// `ρ_q([d], T)`.
pub fn rotor_action(
    g: &RibbonGraph,
    trees: &TreeList,
    q: VertexId,
    d: &Divisor,
    tree: &SpanningTree,
) -> SpanningTree {
    let torsor = RotorTorsor::new(g, trees, q);
    let i = trees.index_of(tree).expect("tree belongs to the list");
    trees.get(torsor.apply(d, i)).clone()
}

/// Vertices on directed cycles of the rotor functional graph, one list per
/// cycle. Requires a total rotor.
fn rotor_cycles(g: &RibbonGraph, c: &RotorConfiguration) -> Vec<Vec<VertexId>> {
    let n = g.num_vertices();
    // 0 unvisited, 1 on current walk, 2 finished
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in g.vertices() {
        if state[start.0] != 0 {
            continue;
        }
        let mut walk = Vec::new();
        let mut v = start;
        while state[v.0] == 0 {
            state[v.0] = 1;
            walk.push(v);
            v = c.target(g, v).expect("total rotor");
        }
        if state[v.0] == 1 {
            let pos = walk.iter().position(|&x| x == v).unwrap();
            cycles.push(walk[pos..].to_vec());
        }
        for w in walk {
            state[w.0] = 2;
        }
    }
    cycles
}

/// True iff every vertex has a rotor, the rotor graph has exactly one
/// directed cycle, and the chip lies on it.
pub fn is_unicycle(g: &RibbonGraph, c: &RotorConfiguration) -> bool {
    if !c.is_total() {
        return false;
    }
    let cycles = rotor_cycles(g, c);
    cycles.len() == 1 && cycles[0].contains(&c.chip)
}

/// Every unicycle of `g`, by brute force over rotor assignments and chips.
pub fn enumerate_unicycles(g: &RibbonGraph) -> Vec<RotorConfiguration> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let rotor: Vec<Option<HalfEdgeId>> = g
            .vertices()
            .map(|v| Some(g.rotation(v)[choice[v.0]]))
            .collect();
        let probe = RotorConfiguration { rotor, chip: VertexId(0) };
        let cycles = rotor_cycles(g, &probe);
        if cycles.len() == 1 {
            let mut on_cycle = cycles[0].clone();
            on_cycle.sort();
            for v in on_cycle {
                out.push(probe.with_chip(v));
            }
        }
        // odometer increment over rotor choices
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            choice[i] += 1;
            if choice[i] < g.degree(VertexId(i)) {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Outcome of running `2m` steps from a configuration with no sink.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullRotationAudit {
    pub returns_to_start: bool,
    pub each_direction_once: bool,
    pub each_rotor_full_turn: bool,
}

impl FullRotationAudit {
    pub fn holds(&self) -> bool {
        self.returns_to_start && self.each_direction_once && self.each_rotor_full_turn
    }
}

/// Runs `2|E|` sink-free steps and audits traversals and rotor turns.
pub fn audit_full_rotation(g: &RibbonGraph, start: &RotorConfiguration) -> FullRotationAudit {
    let mut c = start.clone();
    let mut crossed = vec![0usize; g.num_half_edges()];
    let mut advances = vec![0usize; g.num_vertices()];
    for _ in 0..2 * g.num_edges() {
        let step = rotor_step_mut(g, &mut c, None).expect("total rotor without sink");
        crossed[step.rotor.0] += 1;
        advances[step.from.0] += 1;
    }
    FullRotationAudit {
        returns_to_start: &c == start,
        each_direction_once: crossed.iter().all(|&k| k == 1),
        each_rotor_full_turn: g.vertices().all(|v| advances[v.0] == g.degree(v)),
    }
}

/// For a unicycle `(σ, w)` and every `z` with `σ(z)` pointing at `w`, checks
/// that for each neighbour `v ≠ w` of `z` whose rotor is an edge to `z`, the
/// rotor at `z` turns onto that same edge before the rotor at `v` completes
/// a full rotation. Routing starts from `(σ, w)`. Returns the violating
/// `(z, v)` pairs.
pub fn neighbour_rotation_violations(
    g: &RibbonGraph,
    start: &RotorConfiguration,
) -> Vec<(VertexId, VertexId)> {
    let w = start.chip;
    let mut violations = Vec::new();
    for z in g.vertices().filter(|&z| z != w && start.target(g, z) == Some(w)) {
        for v in g.vertices().filter(|&v| v != w && v != z) {
            let Some(hv) = start.rotor[v.0] else { continue };
            if g.vertex_of(g.twin(hv)) != z {
                continue;
            }
            let edge = g.edge_of(hv);
            let mut c = start.clone();
            let mut turns_at_v = 0;
            let mut reached = false;
            for _ in 0..2 * g.num_edges() {
                let step = rotor_step_mut(g, &mut c, None).expect("total rotor");
                if step.from == z && step.edge == edge {
                    reached = true;
                    break;
                }
                if step.from == v {
                    turns_at_v += 1;
                    if turns_at_v == g.degree(v) {
                        break;
                    }
                }
            }
            if !reached {
                violations.push((z, v));
            }
        }
    }
    violations
}
