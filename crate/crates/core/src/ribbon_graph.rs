//! Half-edge representation of loopless connected multigraphs with a
//! rotation system.
//!
//! Every edge is a pair of half-edges (darts). Each vertex owns a cyclic
//! sequence of its half-edges, read counterclockwise. All higher-level
//! structures (trees, divisors, tours, rotor configurations) index into a
//! `RibbonGraph` through the id newtypes defined here.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

id_newtype!(
    /// Index of a vertex in canonical (input) order.
    VertexId
);
id_newtype!(
    /// Index of an edge in canonical (input) order.
    EdgeId
);
id_newtype!(
    /// Dense index of a half-edge. The label used in the text format is kept
    /// separately, see [`RibbonGraph::label`].
    HalfEdgeId
);

#[derive(Debug, Clone, PartialEq, Eq)]
struct HalfEdge {
    vertex: VertexId,
    edge: EdgeId,
    position: usize,
    label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Edge {
    name: String,
    halves: [HalfEdgeId; 2],
}

/// A finite connected loopless multigraph together with a cyclic order of
/// the half-edges at each vertex.
///
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertex_names: Vec<String>,
    rotations: Vec<Vec<HalfEdgeId>>,
    half_edges: Vec<HalfEdge>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

/// Which side of an oriented cycle an off-cycle edge leaves from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Collects vertex rotations and edge pairings, then validates them.
#[derive(Debug, Clone, Default)]
pub struct RibbonGraphBuilder {
    vertices: Vec<(String, Vec<usize>)>,
    edges: Vec<(String, usize, usize)>,
}

impl RibbonGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex whose half-edge labels are listed counterclockwise.
    pub fn vertex<S, I>(&mut self, name: S, rotation: I) -> &mut Self
    where
        S: Into<String>,
        I: IntoIterator<Item = usize>,
    {
        self.vertices
            .push((name.into(), rotation.into_iter().collect()));
        self
    }

    /// Pairs two half-edge labels into a named edge.
    pub fn edge<S: Into<String>>(&mut self, name: S, a: usize, b: usize) -> &mut Self {
        self.edges.push((name.into(), a, b));
        self
    }

    pub fn build(&self) -> Result<RibbonGraph, GraphError> {
        RibbonGraph::from_parts(&self.vertices, &self.edges)
    }
}

impl RibbonGraph {
    /// Builds a ribbon graph from per-vertex rotations and an edge pairing.
    ///
    /// Half-edge labels may be arbitrary integers; internal ids are assigned
    /// densely in rotation order. Errors name the offending element.
    pub fn from_parts(
        vertices: &[(String, Vec<usize>)],
        edges: &[(String, usize, usize)],
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut vertex_index = HashMap::new();
        let mut by_label: HashMap<usize, HalfEdgeId> = HashMap::new();
        let mut half_edges = Vec::new();
        let mut rotations = Vec::with_capacity(vertices.len());
        for (vi, (name, rotation)) in vertices.iter().enumerate() {
            if vertex_index.insert(name.clone(), VertexId(vi)).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
            let mut rot = Vec::with_capacity(rotation.len());
            for (position, &label) in rotation.iter().enumerate() {
                let id = HalfEdgeId(half_edges.len());
                if by_label.insert(label, id).is_some() {
                    return Err(GraphError::DuplicateHalfEdge(label));
                }
                half_edges.push(HalfEdge {
                    vertex: VertexId(vi),
                    edge: EdgeId(usize::MAX),
                    position,
                    label,
                });
                rot.push(id);
            }
            rotations.push(rot);
        }

        let mut edge_index = HashMap::new();
        let mut out_edges = Vec::with_capacity(edges.len());
        for (ei, (name, a, b)) in edges.iter().enumerate() {
            if edge_index.insert(name.clone(), EdgeId(ei)).is_some() {
                return Err(GraphError::DuplicateEdge(name.clone()));
            }
            if a == b {
                return Err(GraphError::BadInvolution {
                    half_edge: *a,
                    reason: "paired with itself",
                });
            }
            let ha = *by_label.get(a).ok_or(GraphError::UnknownHalfEdge(*a))?;
            let hb = *by_label.get(b).ok_or(GraphError::UnknownHalfEdge(*b))?;
            for (h, label) in [(ha, *a), (hb, *b)] {
                if half_edges[h.0].edge.0 != usize::MAX {
                    return Err(GraphError::BadInvolution {
                        half_edge: label,
                        reason: "paired twice",
                    });
                }
                half_edges[h.0].edge = EdgeId(ei);
            }
            let (va, vb) = (half_edges[ha.0].vertex, half_edges[hb.0].vertex);
            if va == vb {
                return Err(GraphError::LoopEdge {
                    edge: name.clone(),
                    vertex: vertices[va.0].0.clone(),
                });
            }
            out_edges.push(Edge {
                name: name.clone(),
                halves: [ha, hb],
            });
        }
        if let Some(h) = half_edges.iter().find(|h| h.edge.0 == usize::MAX) {
            return Err(GraphError::BadInvolution {
                half_edge: h.label,
                reason: "never paired",
            });
        }

        let graph = RibbonGraph {
            vertex_names: vertices.iter().map(|(n, _)| n.clone()).collect(),
            rotations,
            half_edges,
            edges: out_edges,
            vertex_index,
            edge_index,
        };
        let reach = graph.reachable_from(VertexId(0), |_| true);
        if let Some(v) = reach.iter().position(|r| !r) {
            return Err(GraphError::Disconnected(graph.vertex_names[v].clone()));
        }
        Ok(graph)
    }

    /// Convenience constructor: each vertex lists the names of its incident
    /// edges counterclockwise. Every edge name must occur at exactly two
    /// distinct vertices; edges are numbered by first appearance.
    pub fn from_edge_rotations(spec: &[(&str, &[&str])]) -> Result<Self, GraphError> {
        let mut next = 0usize;
        let mut ends: Vec<(String, Vec<usize>)> = Vec::new();
        let mut vertices = Vec::new();
        for (name, rot) in spec {
            let mut labels = Vec::new();
            for &e in rot.iter() {
                let label = next;
                next += 1;
                labels.push(label);
                match ends.iter_mut().find(|(n, _)| n == e) {
                    Some((_, v)) => v.push(label),
                    None => ends.push((e.to_string(), vec![label])),
                }
            }
            vertices.push((name.to_string(), labels));
        }
        let mut edges = Vec::new();
        for (name, labels) in ends {
            match labels.as_slice() {
                [a, b] => edges.push((name, *a, *b)),
                [a] => {
                    return Err(GraphError::BadInvolution {
                        half_edge: *a,
                        reason: "never paired",
                    })
                }
                [_, _, c, ..] => {
                    return Err(GraphError::BadInvolution {
                        half_edge: *c,
                        reason: "paired twice",
                    })
                }
                [] => unreachable!(),
            }
        }
        Self::from_parts(&vertices, &edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn half_edges(&self) -> impl Iterator<Item = HalfEdgeId> + '_ {
        (0..self.half_edges.len()).map(HalfEdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        self.edge_index
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))
    }

    /// Half-edges at `v`, counterclockwise.
    pub fn rotation(&self, v: VertexId) -> &[HalfEdgeId] {
        &self.rotations[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v.0].len()
    }

    pub fn vertex_of(&self, h: HalfEdgeId) -> VertexId {
        self.half_edges[h.0].vertex
    }

    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        self.half_edges[h.0].edge
    }

    /// Label of `h` as it appears in the text format.
    pub fn label(&self, h: HalfEdgeId) -> usize {
        self.half_edges[h.0].label
    }

    /// The other half of `h`'s edge.
    pub fn twin(&self, h: HalfEdgeId) -> HalfEdgeId {
        let [a, b] = self.edges[self.edge_of(h).0].halves;
        if a == h {
            b
        } else {
            a
        }
    }

    /// Next half-edge counterclockwise at `h`'s vertex.
    pub fn successor(&self, h: HalfEdgeId) -> HalfEdgeId {
        let he = &self.half_edges[h.0];
        let rot = &self.rotations[he.vertex.0];
        rot[(he.position + 1) % rot.len()]
    }

    pub fn predecessor(&self, h: HalfEdgeId) -> HalfEdgeId {
        let he = &self.half_edges[h.0];
        let rot = &self.rotations[he.vertex.0];
        rot[(he.position + rot.len() - 1) % rot.len()]
    }

    pub fn try_successor(&self, h: HalfEdgeId) -> Result<HalfEdgeId, GraphError> {
        if h.0 >= self.half_edges.len() {
            return Err(GraphError::UnknownHalfEdge(h.0));
        }
        Ok(self.successor(h))
    }

    pub fn edge_halves(&self, e: EdgeId) -> [HalfEdgeId; 2] {
        self.edges[e.0].halves
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let [a, b] = self.edges[e.0].halves;
        (self.vertex_of(a), self.vertex_of(b))
    }

    /// The endpoint of `e` that is not `v`. `v` must be an endpoint.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e);
        debug_assert!(a == v || b == v);
        if a == v {
            b
        } else {
            a
        }
    }

    /// The half-edge of `e` sitting at `v`, if `e` is incident to `v`.
    pub fn half_edge_at(&self, e: EdgeId, v: VertexId) -> Option<HalfEdgeId> {
        self.edges[e.0]
            .halves
            .iter()
            .copied()
            .find(|&h| self.vertex_of(h) == v)
    }

    pub(crate) fn require_half_edge_at(
        &self,
        e: EdgeId,
        v: VertexId,
    ) -> Result<HalfEdgeId, GraphError> {
        self.half_edge_at(e, v).ok_or_else(|| GraphError::NotIncident {
            edge: self.edge_name(e).to_string(),
            vertex: self.vertex_name(v).to_string(),
        })
    }

    /// Edge names in canonical order; shorthand used in messages and sorting.
    pub fn edge_names<'a>(&'a self, edges: &'a [EdgeId]) -> impl Iterator<Item = &'a str> + 'a {
        edges.iter().map(move |&e| self.edge_name(e))
    }

    /// Breadth-first reachability from `start` through edges accepted by `keep`.
    pub fn reachable_from(&self, start: VertexId, keep: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([start]);
        seen[start.0] = true;
        while let Some(v) = queue.pop_front() {
            for &h in &self.rotations[v.0] {
                let e = self.edge_of(h);
                if !keep(e) {
                    continue;
                }
                let w = self.vertex_of(self.twin(h));
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// The interval `[e0, e1]` at `v`: half-edges from `e0` to the first
    /// occurrence of `e1`, following the rotation, both endpoints included.
    pub fn interval(
        &self,
        v: VertexId,
        e0: EdgeId,
        e1: EdgeId,
    ) -> Result<Vec<EdgeId>, GraphError> {
        let h0 = self.require_half_edge_at(e0, v)?;
        let h1 = self.require_half_edge_at(e1, v)?;
        Ok(self
            .dart_interval(h0, h1)
            .into_iter()
            .map(|h| self.edge_of(h))
            .collect())
    }

    /// Half-edge form of [`interval`](Self::interval); `h0` and `h1` must sit
    /// at the same vertex.
    pub fn dart_interval(&self, h0: HalfEdgeId, h1: HalfEdgeId) -> Vec<HalfEdgeId> {
        debug_assert_eq!(self.vertex_of(h0), self.vertex_of(h1));
        let mut out = vec![h0];
        let mut h = h0;
        while h != h1 {
            h = self.successor(h);
            out.push(h);
        }
        out
    }

    /// Half-edges strictly between `h0` and `h1` going counterclockwise.
    pub fn strictly_between(&self, h0: HalfEdgeId, h1: HalfEdgeId) -> Vec<HalfEdgeId> {
        let mut v = self.dart_interval(h0, h1);
        v.pop();
        v.remove(0);
        v
    }

    /// Left iff `e` lies inside `[e_out, e_in]` at `v`, where `e_in` and
    /// `e_out` are the cycle edges entering and leaving `v`.
    pub fn classify_edge_side(
        &self,
        cycle: &OrientedCycle,
        v: VertexId,
        e: EdgeId,
    ) -> Result<Side, GraphError> {
        let h = self.require_half_edge_at(e, v)?;
        self.classify_dart_side(cycle, h)
    }

    pub fn classify_dart_side(
        &self,
        cycle: &OrientedCycle,
        h: HalfEdgeId,
    ) -> Result<Side, GraphError> {
        let v = self.vertex_of(h);
        let e = self.edge_of(h);
        if cycle.contains_edge(e) {
            return Err(GraphError::EdgeInCycle(self.edge_name(e).to_string()));
        }
        let (h_in, h_out) = cycle
            .darts_at(self, v)
            .ok_or_else(|| GraphError::NotOnCycle(self.vertex_name(v).to_string()))?;
        let mut x = self.successor(h_out);
        while x != h_in {
            if x == h {
                return Ok(Side::Left);
            }
            x = self.successor(x);
        }
        Ok(Side::Right)
    }

    /// Orbits of the face permutation `h -> successor(twin(h))`.
    pub fn faces(&self) -> Vec<Vec<HalfEdgeId>> {
        let mut seen = vec![false; self.num_half_edges()];
        let mut faces = Vec::new();
        for start in self.half_edges() {
            if seen[start.0] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h.0] {
                seen[h.0] = true;
                face.push(h);
                h = self.successor(self.twin(h));
            }
            faces.push(face);
        }
        faces
    }

    /// Genus of the closed oriented surface determined by the rotation system.
    pub fn genus(&self) -> usize {
        // an edgeless graph has no face orbits but bounds one face
        let faces = self.faces().len().max(1);
        let chi = self.num_vertices() as i64 - self.num_edges() as i64 + faces as i64;
        let twice = 2 - chi;
        debug_assert!(twice >= 0 && twice % 2 == 0, "Euler characteristic {chi}");
        (twice / 2) as usize
    }

    pub fn is_planar(&self) -> bool {
        self.genus() == 0
    }

    /// First Betti number `|E| - |V| + 1`, the number of edges outside any
    /// spanning tree.
    pub fn cycle_rank(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices()
    }

    /// True if the underlying graph has two edges with the same endpoints.
    pub fn has_multiple_edges(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges().any(|e| {
            let (a, b) = self.endpoints(e);
            !seen.insert((a.min(b), a.max(b)))
        })
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (HalfEdgeId, VertexId)> + '_ {
        self.rotations[v.0]
            .iter()
            .map(move |&h| (h, self.vertex_of(self.twin(h))))
    }

    /// Removes `e`, keeping all other rotations in order.
    pub fn delete_edge(&self, e: EdgeId) -> Result<RibbonGraph, GraphError> {
        let reach = self.reachable_from(VertexId(0), |x| x != e);
        if reach.iter().any(|r| !r) {
            return Err(GraphError::WouldDisconnect(self.edge_name(e).to_string()));
        }
        let vertices = self
            .vertices()
            .map(|v| {
                let rot = self.rotations[v.0]
                    .iter()
                    .filter(|&&h| self.edge_of(h) != e)
                    .map(|&h| self.label(h))
                    .collect();
                (self.vertex_names[v.0].clone(), rot)
            })
            .collect::<Vec<_>>();
        let edges = self
            .edges()
            .filter(|&x| x != e)
            .map(|x| self.edge_spec(x))
            .collect::<Vec<_>>();
        RibbonGraph::from_parts(&vertices, &edges)
    }

    /// Contracts `e` by splicing the rotation of its second endpoint into the
    /// slot `e` occupied at the first. The merged vertex keeps the name and
    /// position of the lower-indexed endpoint. Loops created by parallel
    /// edges are removed and counted.
    pub fn contract_edge(&self, e: EdgeId) -> Contraction {
        let [ha, hb] = self.edges[e.0].halves;
        let (mut keep, mut gone) = (ha, hb);
        if self.vertex_of(gone) < self.vertex_of(keep) {
            std::mem::swap(&mut keep, &mut gone);
        }
        let (vk, vg) = (self.vertex_of(keep), self.vertex_of(gone));

        // rotation at vg read from just after the contracted half-edge
        let mut spliced = Vec::new();
        let mut h = self.successor(gone);
        while h != gone {
            spliced.push(h);
            h = self.successor(h);
        }
        let mut merged = Vec::new();
        for &x in &self.rotations[vk.0] {
            if x == keep {
                merged.extend(spliced.iter().copied());
            } else {
                merged.push(x);
            }
        }

        let is_loop = |x: EdgeId| {
            let (a, b) = self.endpoints(x);
            x != e && ((a == vk && b == vg) || (a == vg && b == vk))
        };
        let removed_loops = self.edges().filter(|&x| is_loop(x)).count();

        let vertices = self
            .vertices()
            .filter(|&v| v != vg)
            .map(|v| {
                let rot: &[HalfEdgeId] = if v == vk { &merged } else { &self.rotations[v.0] };
                let labels = rot
                    .iter()
                    .filter(|&&x| !is_loop(self.edge_of(x)))
                    .map(|&x| self.label(x))
                    .collect();
                (self.vertex_names[v.0].clone(), labels)
            })
            .collect::<Vec<_>>();
        let edges = self
            .edges()
            .filter(|&x| x != e && !is_loop(x))
            .map(|x| self.edge_spec(x))
            .collect::<Vec<_>>();
        let graph = RibbonGraph::from_parts(&vertices, &edges)
            .expect("contraction of a connected loopless graph stays valid");
        Contraction {
            graph,
            removed_loops,
        }
    }

    fn edge_spec(&self, e: EdgeId) -> (String, usize, usize) {
        let [a, b] = self.edges[e.0].halves;
        (self.edges[e.0].name.clone(), self.label(a), self.label(b))
    }
}

/// Result of [`RibbonGraph::contract_edge`].
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: RibbonGraph,
    pub removed_loops: usize,
}

/// A cycle with an orientation: `edges[i]` joins `vertices[i]` to
/// `vertices[(i + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedCycle {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl OrientedCycle {
    pub fn new(
        g: &RibbonGraph,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
    ) -> Result<Self, GraphError> {
        let k = vertices.len();
        if k < 2 || edges.len() != k {
            return Err(GraphError::InvalidCycle(format!(
                "{k} vertices and {} edges",
                edges.len()
            )));
        }
        let distinct_v: HashSet<_> = vertices.iter().collect();
        let distinct_e: HashSet<_> = edges.iter().collect();
        if distinct_v.len() != k || distinct_e.len() != k {
            return Err(GraphError::InvalidCycle("repeated vertex or edge".into()));
        }
        for i in 0..k {
            let (a, b) = g.endpoints(edges[i]);
            let (u, w) = (vertices[i], vertices[(i + 1) % k]);
            if !((a == u && b == w) || (a == w && b == u)) {
                return Err(GraphError::InvalidCycle(format!(
                    "edge `{}` does not join `{}` and `{}`",
                    g.edge_name(edges[i]),
                    g.vertex_name(u),
                    g.vertex_name(w)
                )));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    /// Edges `(e_in, e_out)` at `v` with respect to the orientation.
    pub fn edges_at(&self, v: VertexId) -> Option<(EdgeId, EdgeId)> {
        let i = self.position(v)?;
        let k = self.len();
        Some((self.edges[(i + k - 1) % k], self.edges[i]))
    }

    /// Half-edges at `v` of `(e_in, e_out)`.
    pub fn darts_at(&self, g: &RibbonGraph, v: VertexId) -> Option<(HalfEdgeId, HalfEdgeId)> {
        let (ein, eout) = self.edges_at(v)?;
        Some((g.half_edge_at(ein, v)?, g.half_edge_at(eout, v)?))
    }

    /// The same cycle traversed backwards, starting at the same vertex.
    pub fn reversed(&self) -> Self {
        let k = self.len();
        let vertices = (0..k).map(|i| self.vertices[(k - i) % k]).collect();
        let edges = (0..k).map(|i| self.edges[k - 1 - i]).collect();
        Self { vertices, edges }
    }

    /// Rotates the sequence so that it starts at `v`.
    pub fn starting_at(&self, v: VertexId) -> Option<Self> {
        let i = self.position(v)?;
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.rotate_left(i);
        edges.rotate_left(i);
        Some(Self { vertices, edges })
    }

    /// Walk along the cycle from `from` to `to` following the orientation:
    /// returns the vertices (both ends included) and the edges.
    pub fn arc(&self, from: VertexId, to: VertexId) -> Option<(Vec<VertexId>, Vec<EdgeId>)> {
        let k = self.len();
        let mut i = self.position(from)?;
        self.position(to)?;
        let mut vs = vec![from];
        let mut es = Vec::new();
        while self.vertices[i] != to {
            es.push(self.edges[i]);
            i = (i + 1) % k;
            vs.push(self.vertices[i]);
        }
        Some((vs, es))
    }

    pub fn display<'a>(&'a self, g: &'a RibbonGraph) -> impl fmt::Display + 'a {
        DisplayWalk {
            g,
            vertices: &self.vertices,
            edges: &self.edges,
            closed: true,
        }
    }
}

/// A walk that never repeats an edge; vertices may repeat.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphPath {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl GraphPath {
    /// The path consisting of `v` alone.
    pub fn trivial(v: VertexId) -> Self {
        Self {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn new(
        g: &RibbonGraph,
        vertices: Vec<VertexId>,
        edges: Vec<EdgeId>,
    ) -> Result<Self, GraphError> {
        if vertices.len() != edges.len() + 1 {
            return Err(GraphError::InvalidPath(format!(
                "{} vertices for {} edges",
                vertices.len(),
                edges.len()
            )));
        }
        let distinct: HashSet<_> = edges.iter().collect();
        if distinct.len() != edges.len() {
            return Err(GraphError::InvalidPath("repeated edge".into()));
        }
        for (i, &e) in edges.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            let (u, w) = (vertices[i], vertices[i + 1]);
            if !((a == u && b == w) || (a == w && b == u)) {
                return Err(GraphError::InvalidPath(format!(
                    "edge `{}` does not join `{}` and `{}`",
                    g.edge_name(e),
                    g.vertex_name(u),
                    g.vertex_name(w)
                )));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("path has at least one vertex")
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Self { vertices, edges }
    }

    /// Half-edges of the first and last edge at the start and end vertex.
    pub fn end_darts(&self, g: &RibbonGraph) -> Option<(HalfEdgeId, HalfEdgeId)> {
        let first = *self.edges.first()?;
        let last = *self.edges.last()?;
        Some((
            g.half_edge_at(first, self.start())?,
            g.half_edge_at(last, self.end())?,
        ))
    }

    pub fn display<'a>(&'a self, g: &'a RibbonGraph) -> impl fmt::Display + 'a {
        DisplayWalk {
            g,
            vertices: &self.vertices,
            edges: &self.edges,
            closed: false,
        }
    }
}

struct DisplayWalk<'a> {
    g: &'a RibbonGraph,
    vertices: &'a [VertexId],
    edges: &'a [EdgeId],
    closed: bool,
}

impl fmt::Display for DisplayWalk<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.g.vertex_name(*v))?;
            if let Some(e) = self.edges.get(i) {
                write!(f, ", {}", self.g.edge_name(*e))?;
            }
        }
        if self.closed {
            write!(f, ", {}", self.g.vertex_name(self.vertices[0]))?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> RibbonGraph {
        RibbonGraph::from_edge_rotations(&[
            ("x", &["xy", "xz"]),
            ("y", &["yz", "xy"]),
            ("z", &["xz", "yz"]),
        ])
        .unwrap()
    }

    /// K4 drawn with `a` in the middle of triangle b, c, d; `flip[i]` reverses
    /// the counterclockwise rotation at vertex i.
    fn k4(flip: [bool; 4]) -> RibbonGraph {
        let rots: [(&str, [&str; 3]); 4] = [
            ("a", ["ab", "ac", "ad"]),
            ("b", ["bc", "ab", "bd"]),
            ("c", ["cd", "ac", "bc"]),
            ("d", ["bd", "ad", "cd"]),
        ];
        let owned: Vec<(&str, Vec<&str>)> = rots
            .iter()
            .zip(flip)
            .map(|((n, r), f)| {
                let mut r = r.to_vec();
                if f {
                    r.reverse();
                }
                (*n, r)
            })
            .collect();
        let spec: Vec<(&str, &[&str])> = owned.iter().map(|(n, r)| (*n, r.as_slice())).collect();
        RibbonGraph::from_edge_rotations(&spec).unwrap()
    }

    #[test]
    fn triangle_builds() {
        let g = triangle();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.genus(), 0);
        assert_eq!(g.cycle_rank(), 1);
    }

    #[test]
    fn fixed_point_pairing_is_rejected() {
        let err = RibbonGraphBuilder::new()
            .vertex("x", [0, 1])
            .vertex("y", [2, 3])
            .edge("a", 0, 0)
            .edge("b", 2, 3)
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::BadInvolution { half_edge: 0, .. }));
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = RibbonGraphBuilder::new()
            .vertex("a", [0])
            .vertex("b", [1])
            .vertex("c", [2])
            .vertex("d", [3])
            .edge("ab", 0, 1)
            .edge("cd", 2, 3)
            .build()
            .unwrap_err();
        assert_eq!(err, GraphError::Disconnected("c".into()));
    }

    #[test]
    fn loop_and_duplicate_are_rejected() {
        let err = RibbonGraphBuilder::new()
            .vertex("a", [0, 1])
            .edge("l", 0, 1)
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::LoopEdge { .. }));
        let err = RibbonGraphBuilder::new()
            .vertex("a", [0])
            .vertex("b", [0])
            .edge("e", 0, 0)
            .build()
            .unwrap_err();
        assert_eq!(err, GraphError::DuplicateHalfEdge(0));
        let err = RibbonGraphBuilder::new()
            .vertex("a", [0, 2])
            .vertex("b", [1])
            .edge("e", 0, 1)
            .build()
            .unwrap_err();
        assert!(matches!(err, GraphError::BadInvolution { half_edge: 2, .. }));
    }

    #[test]
    fn successor_on_triangle() {
        let g = triangle();
        let x = g.vertex_by_name("x").unwrap();
        let [hxy, hxz] = [g.rotation(x)[0], g.rotation(x)[1]];
        assert_eq!(g.successor(hxy), hxz);
        assert_eq!(g.successor(g.successor(hxy)), hxy);
        assert!(g.try_successor(HalfEdgeId(99)).is_err());
    }

    #[test]
    fn successor_cubed_is_identity_on_k4() {
        let g = k4([false; 4]);
        for h in g.half_edges() {
            assert_eq!(g.successor(g.successor(g.successor(h))), h);
            assert_ne!(g.successor(h), h);
        }
    }

    #[test]
    fn intervals() {
        let g = triangle();
        let x = g.vertex_by_name("x").unwrap();
        let (xy, xz) = (g.edge_by_name("xy").unwrap(), g.edge_by_name("xz").unwrap());
        assert_eq!(g.interval(x, xy, xz).unwrap(), vec![xy, xz]);

        let g = k4([false; 4]);
        let a = g.vertex_by_name("a").unwrap();
        let [ab, ac, ad] = ["ab", "ac", "ad"].map(|n| g.edge_by_name(n).unwrap());
        assert_eq!(g.interval(a, ab, ad).unwrap(), vec![ab, ac, ad]);
        assert_eq!(g.interval(a, ad, ab).unwrap(), vec![ad, ab]);
        let bc = g.edge_by_name("bc").unwrap();
        assert!(matches!(
            g.interval(a, ab, bc),
            Err(GraphError::NotIncident { .. })
        ));
    }

    #[test]
    fn k4_genus_by_type() {
        for code in 0u32..16 {
            let flip = [0, 1, 2, 3].map(|i| code >> i & 1 == 1);
            let g = k4(flip);
            let flips = code.count_ones();
            if flips == 0 || flips == 4 {
                assert_eq!(g.genus(), 0, "code {code:04b}");
            } else {
                assert_eq!(g.genus(), 1, "code {code:04b}");
            }
            let total: usize = g.faces().iter().map(Vec::len).sum();
            assert_eq!(total, 2 * g.num_edges());
        }
    }

    #[test]
    fn side_classification_at_degree_three() {
        // cycle a -> b -> c -> a on planar K4; d hangs off each vertex
        let g = k4([false; 4]);
        let [a, b, c] = ["a", "b", "c"].map(|n| g.vertex_by_name(n).unwrap());
        let [ab, bc, ac] = ["ab", "bc", "ac"].map(|n| g.edge_by_name(n).unwrap());
        let cyc = OrientedCycle::new(&g, vec![a, b, c], vec![ab, bc, ac]).unwrap();
        let ad = g.edge_by_name("ad").unwrap();
        let side = g.classify_edge_side(&cyc, a, ad).unwrap();
        // enumerate directly: at a the rotation is (ab, ac, ad); e_out = ab,
        // e_in = ac, so ad sits in [ac, ab], i.e. on the right
        assert_eq!(side, Side::Right);
        let rev = cyc.reversed();
        assert_eq!(g.classify_edge_side(&rev, a, ad).unwrap(), Side::Left);
        assert!(matches!(
            g.classify_edge_side(&cyc, a, ab),
            Err(GraphError::EdgeInCycle(_))
        ));
        let d = g.vertex_by_name("d").unwrap();
        assert!(matches!(
            g.classify_edge_side(&cyc, d, ad),
            Err(GraphError::NotOnCycle(_))
        ));
    }

    #[test]
    fn contraction_of_triangle_edge() {
        let g = triangle();
        let c = g.contract_edge(g.edge_by_name("xy").unwrap());
        assert_eq!(c.removed_loops, 0);
        assert_eq!(c.graph.num_vertices(), 2);
        assert_eq!(c.graph.num_edges(), 2);
        assert!(c.graph.has_multiple_edges());
        // contracting one of the resulting parallel pair removes the other
        let again = c.graph.contract_edge(EdgeId(0));
        assert_eq!(again.removed_loops, 1);
        assert_eq!(again.graph.num_edges(), 0);
    }

    #[test]
    fn deletion_keeps_k4_connected() {
        let g = k4([false, true, false, false]);
        for e in g.edges() {
            let h = g.delete_edge(e).unwrap();
            assert_eq!(h.num_vertices(), 4);
            assert_eq!(h.num_edges(), 5);
            assert!(h.genus() <= g.genus());
        }
        let t = triangle();
        let path = t.delete_edge(EdgeId(0)).unwrap();
        assert!(matches!(
            path.delete_edge(EdgeId(0)),
            Err(GraphError::WouldDisconnect(_))
        ));
    }

    #[test]
    fn cycle_arcs_and_reversal() {
        let g = k4([false; 4]);
        let [a, b, c] = ["a", "b", "c"].map(|n| g.vertex_by_name(n).unwrap());
        let [ab, bc, ac] = ["ab", "bc", "ac"].map(|n| g.edge_by_name(n).unwrap());
        let cyc = OrientedCycle::new(&g, vec![a, b, c], vec![ab, bc, ac]).unwrap();
        assert_eq!(cyc.arc(b, a).unwrap(), (vec![b, c, a], vec![bc, ac]));
        let rev = cyc.reversed();
        assert_eq!(rev.vertices(), &[a, c, b]);
        assert_eq!(rev.edges(), &[ac, bc, ab]);
        assert_eq!(rev.edges_at(a), Some((ab, ac)));
        assert!(OrientedCycle::new(&g, vec![a, b, c], vec![ab, ac, bc]).is_err());
    }
}
