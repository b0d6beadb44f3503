//! Nonseparating cycles, witness pairs, and the two tree constructions that
//! force the Bernardi and rotor-routing torsors apart on nonplanar graphs.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bernardi::{bernardi_break_divisor, BernardiTorsor};
use crate::divisors::Divisor;
use crate::error::WitnessError;
use crate::format::to_text;
use crate::ribbon_graph::{EdgeId, GraphPath, HalfEdgeId, OrientedCycle, RibbonGraph, Side, VertexId};
use crate::rotor::{route_to_sink, step_budget, tree_to_rotor};
use crate::trees::{extend_to_tree, SpanningTree, TreeList};

/// A cycle together with a path that leaves it on the left and comes back
/// on the right, touching it only at the path's endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub cycle: OrientedCycle,
    pub path: GraphPath,
    pub proper: bool,
    pub tight: bool,
}

impl WitnessPair {
    /// The shared vertex: the start of the path.
    pub fn z(&self) -> VertexId {
        self.path.start()
    }

    /// The other endpoint of a proper path.
    pub fn x(&self) -> Option<VertexId> {
        self.proper.then(|| self.path.end())
    }

    pub fn describe(&self, g: &RibbonGraph) -> String {
        let kind = match (self.proper, self.tight) {
            (true, _) => "proper",
            (false, true) => "tight",
            (false, false) => "improper",
        };
        format!(
            "{kind} witness pair: C = {}, P = {}",
            self.cycle.display(g),
            self.path.display(g)
        )
    }
}

/// Which path endpoints a search accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ends {
    Any,
    Distinct,
    Same,
}

impl Ends {
    fn accepts(self, start: VertexId, end: VertexId) -> bool {
        match self {
            Ends::Any => true,
            Ends::Distinct => start != end,
            Ends::Same => start == end,
        }
    }
}

/// Every simple cycle once, oriented from its smallest vertex towards the
/// smaller of that vertex's two cycle neighbours, sorted by edge names.
pub fn enumerate_cycles(g: &RibbonGraph) -> Vec<OrientedCycle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in g.vertices() {
        let mut vs = vec![s];
        let mut es = Vec::new();
        cycle_dfs(g, s, &mut vs, &mut es, &mut seen, &mut out);
    }
    let mut keyed: Vec<(Vec<String>, OrientedCycle)> = out
        .into_iter()
        .map(|c| {
            let mut key: Vec<String> = g.edge_names(c.edges()).map(str::to_owned).collect();
            key.sort();
            (key, c)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, c)| c).collect()
}

fn cycle_dfs(
    g: &RibbonGraph,
    s: VertexId,
    vs: &mut Vec<VertexId>,
    es: &mut Vec<EdgeId>,
    seen: &mut HashSet<Vec<EdgeId>>,
    out: &mut Vec<OrientedCycle>,
) {
    let u = *vs.last().expect("nonempty walk");
    for (h, w) in g.neighbors(u) {
        let e = g.edge_of(h);
        if es.contains(&e) {
            continue;
        }
        if w == s && !es.is_empty() {
            let mut key = es.clone();
            key.push(e);
            key.sort();
            if seen.insert(key) {
                let mut edges = es.clone();
                edges.push(e);
                let c = OrientedCycle::new(g, vs.clone(), edges).expect("walk closes up");
                out.push(canonical_orientation(g, c));
            }
        } else if w > s && !vs.contains(&w) {
            vs.push(w);
            es.push(e);
            cycle_dfs(g, s, vs, es, seen, out);
            vs.pop();
            es.pop();
        }
    }
}

fn canonical_orientation(g: &RibbonGraph, c: OrientedCycle) -> OrientedCycle {
    let s = *c.vertices().iter().min().expect("nonempty cycle");
    let c = c.starting_at(s).expect("s on cycle");
    let r = c.reversed();
    let key = |c: &OrientedCycle| (c.vertices()[1], g.edge_name(c.edges()[0]).to_owned());
    if key(&r) < key(&c) {
        r
    } else {
        c
    }
}

fn on_cycle_mask(g: &RibbonGraph, c: &OrientedCycle) -> Vec<bool> {
    let mut m = vec![false; g.num_vertices()];
    for &v in c.vertices() {
        m[v.0] = true;
    }
    m
}

fn side(g: &RibbonGraph, c: &OrientedCycle, h: HalfEdgeId) -> Option<Side> {
    g.classify_dart_side(c, h).ok()
}

/// Left-classified darts at cycle vertices, in cycle then rotation order.
fn left_darts<'a>(g: &'a RibbonGraph, c: &'a OrientedCycle) -> impl Iterator<Item = HalfEdgeId> + 'a {
    c.vertices().iter().flat_map(move |&u| {
        g.rotation(u)
            .iter()
            .copied()
            .filter(move |&h| side(g, c, h) == Some(Side::Left))
    })
}

/// Breadth-first search for one witness path of `c`.
fn bfs_witness(g: &RibbonGraph, c: &OrientedCycle, ends: Ends) -> Option<GraphPath> {
    let on = on_cycle_mask(g, c);
    for h in left_darts(g, c) {
        let u = g.vertex_of(h);
        let e = g.edge_of(h);
        let w = g.vertex_of(g.twin(h));
        if on[w.0] {
            if ends.accepts(u, w) && side(g, c, g.twin(h)) == Some(Side::Right) {
                return GraphPath::new(g, vec![u, w], vec![e]).ok();
            }
            continue;
        }
        let mut parent: HashMap<VertexId, HalfEdgeId> = HashMap::new();
        let mut queue = VecDeque::from([w]);
        let mut seen = vec![false; g.num_vertices()];
        seen[w.0] = true;
        while let Some(y) = queue.pop_front() {
            for (d, t) in g.neighbors(y) {
                let de = g.edge_of(d);
                if de == e {
                    continue;
                }
                if on[t.0] {
                    if ends.accepts(u, t) && side(g, c, g.twin(d)) == Some(Side::Right) {
                        let mut vs = vec![t, y];
                        let mut es = vec![de];
                        let mut cur = y;
                        while let Some(&p) = parent.get(&cur) {
                            es.push(g.edge_of(p));
                            cur = g.vertex_of(p);
                            vs.push(cur);
                        }
                        es.push(e);
                        vs.push(u);
                        vs.reverse();
                        es.reverse();
                        return GraphPath::new(g, vs, es).ok();
                    }
                } else if !seen[t.0] {
                    seen[t.0] = true;
                    parent.insert(t, d);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Every witness path of `c` whose interior is a simple path off the cycle.
fn all_witness_paths(g: &RibbonGraph, c: &OrientedCycle, ends: Ends) -> Vec<GraphPath> {
    let on = on_cycle_mask(g, c);
    let mut out = Vec::new();
    for h in left_darts(g, c) {
        let u = g.vertex_of(h);
        let mut vs = vec![u, g.vertex_of(g.twin(h))];
        let mut es = vec![g.edge_of(h)];
        path_dfs(g, c, &on, ends, g.twin(h), &mut vs, &mut es, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn path_dfs(
    g: &RibbonGraph,
    c: &OrientedCycle,
    on: &[bool],
    ends: Ends,
    arrival: HalfEdgeId,
    vs: &mut Vec<VertexId>,
    es: &mut Vec<EdgeId>,
    out: &mut Vec<GraphPath>,
) {
    let y = g.vertex_of(arrival);
    if on[y.0] {
        if ends.accepts(vs[0], y) && side(g, c, arrival) == Some(Side::Right) {
            out.push(GraphPath::new(g, vs.clone(), es.clone()).expect("walk is a path"));
        }
        return;
    }
    for (d, t) in g.neighbors(y) {
        let de = g.edge_of(d);
        if es.contains(&de) || (!on[t.0] && vs.contains(&t)) {
            continue;
        }
        vs.push(t);
        es.push(de);
        path_dfs(g, c, on, ends, g.twin(d), vs, es, out);
        vs.pop();
        es.pop();
    }
}

/// A witness path for `c` in its stored orientation. Reversing that path
/// serves the opposite orientation, so one search decides the question.
pub fn is_nonseparating(g: &RibbonGraph, c: &OrientedCycle) -> Option<GraphPath> {
    bfs_witness(g, c, Ends::Any)
}

/// First nonseparating cycle in canonical order, with its witness path.
pub fn find_nonseparating_cycle(g: &RibbonGraph) -> Option<(OrientedCycle, GraphPath)> {
    enumerate_cycles(g)
        .into_iter()
        .find_map(|c| is_nonseparating(g, &c).map(|p| (c, p)))
}

/// Checks the witness-pair invariants from scratch. Tight minimality is not
/// checked here.
pub fn verify_witness_pair(g: &RibbonGraph, w: &WitnessPair) -> Result<(), String> {
    let (c, p) = (&w.cycle, &w.path);
    if p.is_empty() {
        return Err("empty path".into());
    }
    let vs = p.vertices();
    let last = vs.len() - 1;
    if !c.contains_vertex(vs[0]) || !c.contains_vertex(vs[last]) {
        return Err("path endpoints must lie on the cycle".into());
    }
    let interior = &vs[1..last];
    if interior.iter().any(|&v| c.contains_vertex(v)) {
        return Err("path interior meets the cycle".into());
    }
    let distinct: HashSet<_> = interior.iter().collect();
    if distinct.len() != interior.len() || interior.contains(&vs[0]) || interior.contains(&vs[last]) {
        return Err("path repeats a vertex".into());
    }
    if p.edges().iter().any(|&e| c.contains_edge(e)) {
        return Err("path uses a cycle edge".into());
    }
    let (h0, h1) = p.end_darts(g).ok_or("path has no end darts")?;
    if g.classify_dart_side(c, h0).map_err(|e| e.to_string())? != Side::Left {
        return Err("first edge is not on the left".into());
    }
    if g.classify_dart_side(c, h1).map_err(|e| e.to_string())? != Side::Right {
        return Err("last edge is not on the right".into());
    }
    let distinct_ends = vs[0] != vs[last];
    if w.proper != distinct_ends {
        return Err("proper flag does not match the endpoints".into());
    }
    if w.tight && distinct_ends {
        return Err("a tight pair shares exactly one vertex".into());
    }
    Ok(())
}

/// First proper pair in canonical cycle order, paths by BFS layer.
pub fn find_proper_witness_pair(g: &RibbonGraph) -> Option<WitnessPair> {
    enumerate_cycles(g).into_iter().find_map(|c| {
        bfs_witness(g, &c, Ends::Distinct).map(|path| WitnessPair {
            cycle: c,
            path,
            proper: true,
            tight: false,
        })
    })
}

/// Every proper pair with a simple interior, in canonical order.
pub fn proper_witness_pairs(g: &RibbonGraph) -> Vec<WitnessPair> {
    enumerate_cycles(g)
        .into_iter()
        .flat_map(|c| {
            all_witness_paths(g, &c, Ends::Distinct)
                .into_iter()
                .map(move |path| WitnessPair {
                    cycle: c.clone(),
                    path,
                    proper: true,
                    tight: false,
                })
        })
        .collect()
}

/// `min(|[e,f]|, |[f,e]|)` for the two cycle edges at `z`.
pub fn interval_measure(g: &RibbonGraph, c: &OrientedCycle, z: VertexId) -> Option<usize> {
    let (a, b) = c.darts_at(g, z)?;
    Some(g.dart_interval(a, b).len().min(g.dart_interval(b, a).len()))
}

fn undirected_key(p: &GraphPath) -> (VertexId, Vec<EdgeId>) {
    let mut es = p.edges().to_vec();
    es.sort();
    (p.start(), es)
}

/// All improper pairs (closed witness paths), in canonical order.
pub fn improper_witness_pairs(g: &RibbonGraph) -> Vec<WitnessPair> {
    enumerate_cycles(g)
        .into_iter()
        .flat_map(|c| {
            all_witness_paths(g, &c, Ends::Same)
                .into_iter()
                .map(move |path| WitnessPair {
                    cycle: c.clone(),
                    path,
                    proper: false,
                    tight: false,
                })
        })
        .collect()
}

/// Canonical-first tight pair. The witness path is held fixed and the cycle
/// varies over every cycle through `z` that the path witnesses.
pub fn find_tight_witness_pair(g: &RibbonGraph) -> Option<WitnessPair> {
    if g.is_planar() || find_proper_witness_pair(g).is_some() {
        return None;
    }
    let pairs = improper_witness_pairs(g);
    let mut best: HashMap<(VertexId, Vec<EdgeId>), usize> = HashMap::new();
    let measures: Vec<usize> = pairs
        .iter()
        .map(|w| {
            let m = interval_measure(g, &w.cycle, w.z()).expect("z on cycle");
            let slot = best.entry(undirected_key(&w.path)).or_insert(m);
            *slot = (*slot).min(m);
            m
        })
        .collect();
    pairs
        .into_iter()
        .zip(measures)
        .find(|(w, m)| best[&undirected_key(&w.path)] == *m)
        .map(|(w, _)| WitnessPair { tight: true, ..w })
}

/// One way of reading `e0 ≺ e1` at an endpoint `z` of a proper path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Precedence {
    pub z: VertexId,
    pub e0: EdgeId,
    pub e1: EdgeId,
    /// Edges strictly between `e0` and `e1` at `z`.
    pub intervening: Vec<EdgeId>,
    /// The intervening edges whose side of `G - z` meets the cycle or path.
    pub relevant: Vec<EdgeId>,
}

fn component_avoiding(g: &RibbonGraph, start: VertexId, z: VertexId) -> Vec<bool> {
    g.reachable_from(start, |e| {
        let (a, b) = g.endpoints(e);
        a != z && b != z
    })
}

/// Both endpoints, both orders of the two cycle edges.
pub fn precedence_options(g: &RibbonGraph, w: &WitnessPair) -> Vec<Precedence> {
    let mut marked = vec![false; g.num_vertices()];
    for &v in w.cycle.vertices().iter().chain(w.path.vertices()) {
        marked[v.0] = true;
    }
    let mut ends = vec![w.path.start()];
    if w.path.end() != w.path.start() {
        ends.push(w.path.end());
    }
    let mut out = Vec::new();
    for z in ends {
        let Some((h_in, h_out)) = w.cycle.darts_at(g, z) else {
            continue;
        };
        for (h0, h1) in [(h_in, h_out), (h_out, h_in)] {
            let between = g.strictly_between(h0, h1);
            let intervening: Vec<EdgeId> = between.iter().map(|&h| g.edge_of(h)).collect();
            let relevant = between
                .iter()
                .filter(|&&h| {
                    let comp = component_avoiding(g, g.vertex_of(g.twin(h)), z);
                    g.vertices().any(|v| v != z && comp[v.0] && marked[v.0])
                })
                .map(|&h| g.edge_of(h))
                .collect();
            out.push(Precedence {
                z,
                e0: g.edge_of(h0),
                e1: g.edge_of(h1),
                intervening,
                relevant,
            });
        }
    }
    out
}

/// The option `swap_setup` uses: strict adjacency first, then adjacency
/// up to edges whose components can be ignored.
fn usable_precedence(options: &[Precedence]) -> Option<&Precedence> {
    options
        .iter()
        .find(|p| p.intervening.is_empty())
        .or_else(|| options.iter().find(|p| p.relevant.is_empty()))
}

fn remaining(options: &[Precedence]) -> usize {
    options.iter().map(|p| p.relevant.len()).min().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapSetup {
    pub pair: WitnessPair,
    pub z: VertexId,
    pub x: VertexId,
    pub e0: EdgeId,
    pub e1: EdgeId,
    pub q: VertexId,
    pub e_prime: EdgeId,
    /// Intervening edges at `z` whose components avoid the cycle and path.
    pub ignored: Vec<EdgeId>,
    pub tree: SpanningTree,
}

/// Builds `T ⊇ (C∖e1)∪(P∖e′)` avoiding `e1` and `e′`, where `e′` is the
/// path edge at `z` and `q` is the far end of `e1`.
pub fn swap_setup(g: &RibbonGraph, w: &WitnessPair) -> Result<SwapSetup, WitnessError> {
    if !w.proper {
        return Err(WitnessError::NotProper);
    }
    let options = precedence_options(g, w);
    let p = usable_precedence(&options).ok_or(WitnessError::PrecedenceFails {
        intervening: remaining(&options),
    })?;
    let z = p.z;
    let (x, e_prime) = if z == w.path.start() {
        (w.path.end(), w.path.edges()[0])
    } else {
        (w.path.start(), *w.path.edges().last().expect("nonempty path"))
    };
    let q = g.other_end(p.e1, z);
    let required: Vec<EdgeId> = w
        .cycle
        .edges()
        .iter()
        .filter(|&&e| e != p.e1)
        .chain(w.path.edges().iter().filter(|&&e| e != e_prime))
        .copied()
        .collect();
    let tree = extend_to_tree(g, &required, &[p.e1, e_prime])?;
    Ok(SwapSetup {
        pair: w.clone(),
        z,
        x,
        e0: p.e0,
        e1: p.e1,
        q,
        e_prime,
        ignored: p.intervening.clone(),
        tree,
    })
}

/// What the two actions do to `T` under `[(z) - (q)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEvidence {
    pub rotor_tree: SpanningTree,
    pub rotor_steps: usize,
    pub bernardi_tree: SpanningTree,
    pub disagree: bool,
}

pub fn action_evidence(
    g: &RibbonGraph,
    trees: &TreeList,
    q: VertexId,
    z: VertexId,
    tree: &SpanningTree,
) -> ActionEvidence {
    let rotor = tree_to_rotor(g, tree, q).rotor;
    let routed = route_to_sink(g, &rotor, z, q, step_budget(g, trees.len()))
        .expect("routing from a tree configuration reaches the sink");
    let bernardi = BernardiTorsor::with_default_edge(g, trees, q);
    let i = trees.index_of(tree).expect("tree belongs to the list");
    let j = bernardi.apply(&Divisor::generator(g.num_vertices(), z, q), i);
    let bernardi_tree = trees.get(j).clone();
    ActionEvidence {
        disagree: routed.tree != bernardi_tree,
        rotor_steps: routed.steps.len(),
        rotor_tree: routed.tree,
        bernardi_tree,
    }
}

impl SwapSetup {
    /// `(T∖e0)∪e1`, the expected single-step rotor image.
    pub fn swapped_tree(&self, g: &RibbonGraph) -> SpanningTree {
        let mut edges: Vec<EdgeId> = self.tree.edges().iter().copied().filter(|&e| e != self.e0).collect();
        edges.push(self.e1);
        SpanningTree::new(g, edges).expect("swapping a cycle edge keeps a tree")
    }
}

fn path_between(
    g: &RibbonGraph,
    parent: &HashMap<VertexId, HalfEdgeId>,
    from: VertexId,
    to: VertexId,
) -> (Vec<VertexId>, Vec<EdgeId>) {
    let mut vs = vec![to];
    let mut es = Vec::new();
    let mut cur = to;
    while cur != from {
        let d = parent[&cur];
        es.push(g.edge_of(d));
        cur = g.vertex_of(d);
        vs.push(cur);
    }
    vs.reverse();
    es.reverse();
    (vs, es)
}

fn sub_path(p: &GraphPath, from: VertexId, to: VertexId) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
    let i = p.vertices().iter().position(|&v| v == from)?;
    let j = p.vertices().iter().position(|&v| v == to)?;
    if i <= j {
        Some((p.vertices()[i..=j].to_vec(), p.edges()[i..j].to_vec()))
    } else {
        let r = p.reversed();
        sub_path(&r, from, to)
    }
}

fn oriented_with_out(c: &OrientedCycle, z: VertexId, e: EdgeId) -> OrientedCycle {
    if c.edges_at(z).map(|(_, out)| out) == Some(e) {
        c.clone()
    } else {
        c.reversed()
    }
}

/// Closes `cycle_part` (a walk from `z` to `t`) with `q_back` (a walk from
/// `t` back to `z`).
fn close_cycle(
    g: &RibbonGraph,
    cycle_part: (Vec<VertexId>, Vec<EdgeId>),
    q_back: (Vec<VertexId>, Vec<EdgeId>),
) -> Option<OrientedCycle> {
    let (mut vs, mut es) = cycle_part;
    let (qv, qe) = q_back;
    vs.extend_from_slice(&qv[1..qv.len() - 1]);
    es.extend(qe);
    OrientedCycle::new(g, vs, es).ok()
}

fn proper_variants(g: &RibbonGraph, c: OrientedCycle, p: GraphPath) -> Option<WitnessPair> {
    let cr = c.reversed();
    let pr = p.reversed();
    [(c.clone(), p.clone()), (cr.clone(), p), (c, pr.clone()), (cr, pr)]
        .into_iter()
        .map(|(cycle, path)| WitnessPair {
            cycle,
            path,
            proper: true,
            tight: false,
        })
        .find(|w| verify_witness_pair(g, w).is_ok())
}

/// One rerouting step: splices a path through the component of an
/// intervening edge so the number of relevant intervening edges drops.
pub fn reroute_witness(g: &RibbonGraph, w: &WitnessPair) -> Result<WitnessPair, WitnessError> {
    if !w.proper {
        return Err(WitnessError::NotProper);
    }
    let options = precedence_options(g, w);
    if options.iter().any(|p| p.intervening.is_empty()) {
        return Ok(w.clone());
    }
    if let Some(p) = options.iter().find(|p| p.relevant.is_empty()) {
        return Err(WitnessError::ComponentDisjoint(
            g.edge_name(p.intervening[0]).to_owned(),
        ));
    }
    let t = remaining(&options);
    let mut on_c = vec![false; g.num_vertices()];
    let mut on_p = vec![false; g.num_vertices()];
    for &v in w.cycle.vertices() {
        on_c[v.0] = true;
    }
    for &v in w.path.vertices() {
        on_p[v.0] = true;
    }
    for opt in &options {
        let z = opt.z;
        let f = opt.relevant[0];
        let v = g.other_end(f, z);
        let x = if z == w.path.start() { w.path.end() } else { w.path.start() };

        // Breadth-first through G - z, stopping at cycle and path vertices.
        let mut parent: HashMap<VertexId, HalfEdgeId> = HashMap::new();
        let mut seen = vec![false; g.num_vertices()];
        seen[z.0] = true;
        seen[v.0] = true;
        let mut targets = Vec::new();
        let mut queue = VecDeque::from([v]);
        while let Some(y) = queue.pop_front() {
            if on_c[y.0] || on_p[y.0] {
                targets.push(y);
                continue;
            }
            for (d, u) in g.neighbors(y) {
                if !seen[u.0] {
                    seen[u.0] = true;
                    parent.insert(u, d);
                    queue.push_back(u);
                }
            }
        }

        for target in targets {
            let (mut qv, mut qe) = path_between(g, &parent, v, target);
            qv.insert(0, z);
            qe.insert(0, f);
            qv.reverse();
            qe.reverse();
            let q_back = (qv, qe);
            // The cycle edge kept at z: `e0` for a cycle target, `e1` for a
            // path target; the other arc is tried second.
            let mut candidates = Vec::new();
            if on_c[target.0] {
                for keep in [opt.e0, opt.e1] {
                    let c = oriented_with_out(&w.cycle, z, keep);
                    if let Some(c2) = c.arc(z, target).and_then(|arc| close_cycle(g, arc, q_back.clone())) {
                        candidates.push((c2, w.path.clone()));
                    }
                }
            }
            if on_p[target.0] && target != x {
                for keep in [opt.e1, opt.e0] {
                    let c = oriented_with_out(&w.cycle, z, keep);
                    let arc = c.arc(z, x);
                    let px = sub_path(&w.path, x, target);
                    let pz = sub_path(&w.path, z, target);
                    if let (Some((mut vs, mut es)), Some((pv, pe)), Some((zv, ze))) = (arc, px, pz) {
                        vs.extend_from_slice(&pv[1..]);
                        es.extend(pe);
                        if let (Some(c2), Ok(p2)) = (close_cycle(g, (vs, es), q_back.clone()), GraphPath::new(g, zv, ze)) {
                            candidates.push((c2, p2));
                        }
                    }
                }
            }
            for (c2, p2) in candidates {
                if let Some(next) = proper_variants(g, c2, p2) {
                    if remaining(&precedence_options(g, &next)) < t {
                        return Ok(next);
                    }
                }
            }
        }
    }
    Err(WitnessError::RerouteFailed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSetup {
    /// The tight pair with its cycle oriented from `q` to `z`.
    pub pair: WitnessPair,
    pub z: VertexId,
    pub q: VertexId,
    pub e: EdgeId,
    pub e_prime: EdgeId,
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    /// Edges of the union of all witness paths closing up at `z`.
    pub h_edges: Vec<EdgeId>,
    pub left_h: Vec<VertexId>,
    pub right_h: Vec<VertexId>,
    pub w0: Option<VertexId>,
    pub v0: Option<VertexId>,
    pub tree: SpanningTree,
}

/// Builds `q`, `e`, `e′` and `T ⊇ C ∪ Z ∖ {e}` from a tight pair.
pub fn tight_setup(g: &RibbonGraph, w: &WitnessPair) -> Result<TightSetup, WitnessError> {
    let na = |s: &str| Err(WitnessError::NotApplicable(s.to_owned()));
    if g.has_multiple_edges() {
        return na("graph has multiple edges");
    }
    if g.is_planar() {
        return na("graph is planar");
    }
    if w.proper || !w.tight || w.path.start() != w.path.end() {
        return na("witness pair is not tight");
    }
    if find_proper_witness_pair(g).is_some() {
        return na("graph admits a proper witness pair");
    }
    let z = w.z();
    let (e_a, e_b) = w.cycle.edges_at(z).expect("z on cycle");
    // Orient C from q to z so that e = {q, z} enters z; keep the orientation
    // whose left interval at z is the shorter one.
    let mut choices: Vec<(usize, VertexId, OrientedCycle)> = [e_a, e_b]
        .into_iter()
        .map(|e| {
            let c = if w.cycle.edges_at(z).map(|(i, _)| i) == Some(e) {
                w.cycle.clone()
            } else {
                w.cycle.reversed()
            };
            let (h_in, h_out) = c.darts_at(g, z).expect("z on cycle");
            (g.dart_interval(h_out, h_in).len(), g.other_end(e, z), c)
        })
        .collect();
    choices.sort_by_key(|(len, q, _)| (*len, *q));
    let (_, q, cycle) = choices.swap_remove(0);
    let (e, _) = cycle.edges_at(z).expect("z on cycle");
    let (h_in, h_out) = cycle.darts_at(g, z).expect("z on cycle");
    let h_e = g.half_edge_at(e, q).expect("e ends at q");
    let e_prime = g.edge_of(g.successor(h_e));

    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut z_edges = Vec::new();
    for (h, y) in g.neighbors(z) {
        if cycle.contains_vertex(y) {
            continue;
        }
        z_edges.push(g.edge_of(h));
        match g.classify_dart_side(&cycle, h)? {
            Side::Left => left.push(y),
            Side::Right => right.push(y),
        }
    }

    let paths: Vec<GraphPath> = all_witness_paths(g, &cycle, Ends::Same)
        .into_iter()
        .filter(|p| p.start() == z)
        .collect();
    let mut h_edges: Vec<EdgeId> = paths.iter().flat_map(|p| p.edges().iter().copied()).collect();
    h_edges.sort();
    h_edges.dedup();
    let in_h: HashSet<VertexId> = paths.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    let left_h = left.iter().copied().filter(|v| in_h.contains(v)).collect();
    let right_h = right.iter().copied().filter(|v| in_h.contains(v)).collect();
    let first_h = |from: HalfEdgeId, to: HalfEdgeId| {
        g.strictly_between(from, to)
            .into_iter()
            .find(|&h| h_edges.contains(&g.edge_of(h)))
            .map(|h| g.vertex_of(g.twin(h)))
    };
    let w0 = first_h(h_out, h_in);
    let v0 = first_h(h_in, h_out);

    let required: Vec<EdgeId> = cycle
        .edges()
        .iter()
        .copied()
        .filter(|&x| x != e)
        .chain(z_edges.iter().copied())
        .collect();
    let tree = extend_to_tree(g, &required, &[e])?;
    Ok(TightSetup {
        pair: WitnessPair {
            cycle,
            ..w.clone()
        },
        z,
        q,
        e,
        e_prime,
        left,
        right,
        h_edges,
        left_h,
        right_h,
        w0,
        v0,
        tree,
    })
}

/// The divisor facts the tight construction relies on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightEvidence {
    /// `β_(q,e)(T)` at `z`.
    pub value_at_z: i64,
    /// `β_(q,e′)(T) = (z) - (q) + β_(q,e)(T)`.
    pub shift_holds: bool,
    /// `β_(q,e)` of the rotor image at `z`.
    pub image_value_at_z: i64,
    pub contains_all_at_z: bool,
    pub action: ActionEvidence,
}

impl TightEvidence {
    pub fn holds(&self) -> bool {
        self.value_at_z == 0 && self.shift_holds && self.image_value_at_z >= 2 && self.action.disagree
    }
}

pub fn tight_evidence(g: &RibbonGraph, trees: &TreeList, s: &TightSetup) -> TightEvidence {
    let n = g.num_vertices();
    let b_e = bernardi_break_divisor(g, &s.tree, s.q, s.e).expect("e ends at q");
    let b_e2 = bernardi_break_divisor(g, &s.tree, s.q, s.e_prime).expect("e′ ends at q");
    let action = action_evidence(g, trees, s.q, s.z, &s.tree);
    let image = bernardi_break_divisor(g, &action.rotor_tree, s.q, s.e).expect("e ends at q");
    let contains_all_at_z = g
        .neighbors(s.z)
        .all(|(h, _)| g.edge_of(h) == s.e || s.tree.contains(g.edge_of(h)));
    TightEvidence {
        value_at_z: b_e.get(s.z),
        shift_holds: b_e2 == &Divisor::generator(n, s.z, s.q) + &b_e,
        image_value_at_z: image.get(s.z),
        contains_all_at_z,
        action,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Proper pair, possibly rerouted, then the single-step tree.
    Proper,
    /// Tight pair and the construction around its shared vertex.
    Tight,
}

/// A base vertex where the two torsors differ, found constructively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub route: Route,
    pub pair: WitnessPair,
    pub reroutes: usize,
    /// Set when rerouting stalled and a usable proper pair was searched for.
    pub fallback: bool,
    pub q: VertexId,
    pub z: VertexId,
    pub tree: SpanningTree,
    pub action: ActionEvidence,
    pub swap: Option<SwapSetup>,
    pub tight_route: Option<(TightSetup, TightEvidence)>,
}

/// Proper pair → reroute → single-step tree; otherwise tight pair → the
/// construction at its shared vertex.
pub fn construct_disagreement(g: &RibbonGraph, trees: &TreeList) -> Result<Construction, WitnessError> {
    if let Some(mut pair) = find_proper_witness_pair(g) {
        let mut reroutes = 0;
        let mut fallback = false;
        loop {
            match reroute_witness(g, &pair) {
                Ok(next) if next == pair => break,
                Ok(next) => {
                    pair = next;
                    reroutes += 1;
                }
                Err(WitnessError::ComponentDisjoint(_)) => break,
                Err(WitnessError::RerouteFailed) => {
                    pair = proper_witness_pairs(g)
                        .into_iter()
                        .find(|w| usable_precedence(&precedence_options(g, w)).is_some())
                        .ok_or(WitnessError::RerouteFailed)?;
                    fallback = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let setup = swap_setup(g, &pair)?;
        let action = action_evidence(g, trees, setup.q, setup.z, &setup.tree);
        return Ok(Construction {
            route: Route::Proper,
            pair,
            reroutes,
            fallback,
            q: setup.q,
            z: setup.z,
            tree: setup.tree.clone(),
            action,
            swap: Some(setup),
            tight_route: None,
        });
    }
    let pair = find_tight_witness_pair(g)
        .ok_or_else(|| WitnessError::NotApplicable("no proper or tight witness pair".into()))?;
    let setup = tight_setup(g, &pair)?;
    let evidence = tight_evidence(g, trees, &setup);
    Ok(Construction {
        route: Route::Tight,
        pair: setup.pair.clone(),
        reroutes: 0,
        fallback: false,
        q: setup.q,
        z: setup.z,
        tree: setup.tree.clone(),
        action: evidence.action.clone(),
        tight_route: Some((setup, evidence)),
        swap: None,
    })
}

/// Every connected minor reachable by single-edge deletions and
/// contractions, deduplicated by serialized form, `g` itself included.
pub fn minors(g: &RibbonGraph) -> Vec<RibbonGraph> {
    let mut seen = HashSet::from([to_text(g)]);
    let mut out = vec![g.clone()];
    let mut i = 0;
    while i < out.len() {
        let h = out[i].clone();
        i += 1;
        for e in h.edges() {
            let mut next = Vec::new();
            if let Ok(d) = h.delete_edge(e) {
                next.push(d);
            }
            if h.num_vertices() > 1 {
                next.push(h.contract_edge(e).graph);
            }
            for m in next {
                if seen.insert(to_text(&m)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, k4, triangle};
    use crate::torsor::scan_bases;
    use crate::trees::enumerate_trees;

    #[test]
    fn triangle_has_no_nonseparating_cycle() {
        let g = triangle();
        let cycles = enumerate_cycles(&g);
        assert_eq!(cycles.len(), 1);
        assert!(is_nonseparating(&g, &cycles[0]).is_none());
        assert!(find_tight_witness_pair(&g).is_none());
    }

    #[test]
    fn k4_cycle_count() {
        assert_eq!(enumerate_cycles(&k4([false; 4])).len(), 7);
    }

    #[test]
    fn nonplanar_k4_has_proper_pairs() {
        for flips in [[true, false, false, false], [true, true, false, false]] {
            let g = k4(flips);
            let w = find_proper_witness_pair(&g).expect("proper pair");
            verify_witness_pair(&g, &w).unwrap();
            assert!(find_tight_witness_pair(&g).is_none());
        }
    }

    #[test]
    fn rounded_bowtie_has_no_proper_pair() {
        let g = catalog("rounded-bowtie").unwrap().graph;
        assert!(find_nonseparating_cycle(&g).is_some());
        assert!(find_proper_witness_pair(&g).is_none());
        assert!(matches!(
            construct_disagreement(&g, &enumerate_trees(&g)),
            Err(WitnessError::NotApplicable(_))
        ));
    }

    #[test]
    fn pointed_bowtie_takes_the_tight_route() {
        let g = catalog("pointed-bowtie").unwrap().graph;
        let trees = enumerate_trees(&g);
        let c = construct_disagreement(&g, &trees).unwrap();
        assert_eq!(c.route, Route::Tight);
        let (_, ev) = c.tight_route.as_ref().unwrap();
        assert!(ev.holds(), "{ev:?}");
        let report = scan_bases(&g, &trees);
        assert!(report.disagreeing().any(|v| v == g.vertex_name(c.q)));
    }

    #[test]
    fn precedence_failure_is_reported() {
        let g = k4([true, false, false, false]);
        let w = find_proper_witness_pair(&g).unwrap();
        let not_proper = WitnessPair { proper: false, ..w };
        assert_eq!(swap_setup(&g, &not_proper), Err(WitnessError::NotProper));
    }
}
