//! Spanning trees with a canonical global order.
//!
//! Trees are sorted lexicographically by their sorted edge-name sequences;
//! every permutation of trees elsewhere in the crate uses these indices.

use std::collections::{HashMap, VecDeque};

use crate::error::TreeError;
use crate::linalg;
use crate::ribbon_graph::{EdgeId, GraphPath, HalfEdgeId, RibbonGraph, VertexId};

/// An edge subset forming a spanning tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    edges: Vec<EdgeId>,
    member: Vec<bool>,
}

impl SpanningTree {
    /// Validates that `edges` span `g` without cycles.
    pub fn new(g: &RibbonGraph, mut edges: Vec<EdgeId>) -> Result<Self, TreeError> {
        edges.sort();
        edges.dedup();
        let n = g.num_vertices();
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!(
                "{} edges for {n} vertices",
                edges.len()
            )));
        }
        let mut dsu = Dsu::new(n);
        for &e in &edges {
            let (a, b) = g.endpoints(e);
            if !dsu.union(a.0, b.0) {
                return Err(TreeError::NotATree(format!(
                    "edge `{}` closes a cycle",
                    g.edge_name(e)
                )));
            }
        }
        Ok(Self::from_sorted(g, edges))
    }

    fn from_sorted(g: &RibbonGraph, edges: Vec<EdgeId>) -> Self {
        let mut member = vec![false; g.num_edges()];
        for e in &edges {
            member[e.0] = true;
        }
        Self { edges, member }
    }

    /// Tree edges in canonical edge order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member[e.0]
    }

    /// Edges of the graph outside the tree, in canonical edge order.
    pub fn complement(&self) -> Vec<EdgeId> {
        (0..self.member.len())
            .filter(|&i| !self.member[i])
            .map(EdgeId)
            .collect()
    }

    /// Sorted edge names: the canonical sort key.
    pub fn key(&self, g: &RibbonGraph) -> Vec<String> {
        let mut names: Vec<String> = self.edges.iter().map(|&e| g.edge_name(e).to_owned()).collect();
        names.sort();
        names
    }

    pub fn describe(&self, g: &RibbonGraph) -> String {
        format!("{{{}}}", self.key(g).join(", "))
    }

    /// For every vertex, the half-edge at it leading one step closer to
    /// `root` along the tree; `None` at the root.
    pub fn parent_darts(&self, g: &RibbonGraph, root: VertexId) -> Vec<Option<HalfEdgeId>> {
        let mut parent = vec![None; g.num_vertices()];
        let mut seen = vec![false; g.num_vertices()];
        seen[root.0] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &h in g.rotation(v) {
                if !self.contains(g.edge_of(h)) {
                    continue;
                }
                let t = g.twin(h);
                let w = g.vertex_of(t);
                if !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some(t);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// The unique path in the tree from `u` to `v`; trivial when `u == v`.
    pub fn path(&self, g: &RibbonGraph, u: VertexId, v: VertexId) -> GraphPath {
        let parent = self.parent_darts(g, v);
        let mut vertices = vec![u];
        let mut edges = Vec::new();
        let mut x = u;
        while let Some(h) = parent[x.0] {
            edges.push(g.edge_of(h));
            x = g.vertex_of(g.twin(h));
            vertices.push(x);
        }
        GraphPath::new(g, vertices, edges).expect("tree paths are edge-injective")
    }
}

/// The unique tree path from `u` to `v`.
pub fn tree_path(g: &RibbonGraph, tree: &SpanningTree, u: VertexId, v: VertexId) -> GraphPath {
    tree.path(g, u, v)
}

/// All spanning trees of a graph in canonical order. Indices are 1-based
/// when printed and 0-based in the API.
#[derive(Debug, Clone)]
pub struct TreeList {
    trees: Vec<SpanningTree>,
    index: HashMap<Vec<EdgeId>, usize>,
}

impl TreeList {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn get(&self, i: usize) -> &SpanningTree {
        &self.trees[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpanningTree> {
        self.trees.iter()
    }

    /// Canonical 0-based index of `tree`.
    pub fn index_of(&self, tree: &SpanningTree) -> Option<usize> {
        self.index.get(&tree.edges).copied()
    }

    pub fn index_of_edges(&self, edges: &[EdgeId]) -> Option<usize> {
        let mut sorted = edges.to_vec();
        sorted.sort();
        self.index.get(&sorted).copied()
    }
}

/// Enumerates every spanning tree by deciding each edge in canonical order
/// (include it, i.e. contract, or exclude it, i.e. delete), then sorts.
///
/// Panics if the count disagrees with the matrix-tree determinant.
pub fn enumerate_trees(g: &RibbonGraph) -> TreeList {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    let dsu = Dsu::new(n);
    branch(g, 0, m, n - 1, &mut chosen, dsu, &mut found);

    let mut keyed: Vec<(Vec<String>, SpanningTree)> = found
        .into_iter()
        .map(|edges| {
            let t = SpanningTree::from_sorted(g, edges);
            (t.key(g), t)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let trees: Vec<SpanningTree> = keyed.into_iter().map(|(_, t)| t).collect();
    let index = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.edges.clone(), i))
        .collect();

    let expected = linalg::determinant(&linalg::reduced_laplacian(g, VertexId(0)));
    assert_eq!(
        trees.len() as i128,
        expected,
        "spanning tree enumeration disagrees with the matrix-tree theorem"
    );
    TreeList { trees, index }
}

fn branch(
    g: &RibbonGraph,
    next: usize,
    m: usize,
    need: usize,
    chosen: &mut Vec<EdgeId>,
    dsu: Dsu,
    out: &mut Vec<Vec<EdgeId>>,
) {
    if chosen.len() == need {
        out.push(chosen.clone());
        return;
    }
    if next == m || chosen.len() + (m - next) < need {
        return;
    }
    let e = EdgeId(next);
    let (a, b) = g.endpoints(e);
    let mut with = dsu.clone();
    if with.union(a.0, b.0) {
        chosen.push(e);
        branch(g, next + 1, m, need, chosen, with, out);
        chosen.pop();
    }
    branch(g, next + 1, m, need, chosen, dsu, out);
}

/// Greedy extension of `required` to a spanning tree avoiding `forbidden`,
/// scanning the remaining edges in canonical order.
pub fn extend_to_tree(
    g: &RibbonGraph,
    required: &[EdgeId],
    forbidden: &[EdgeId],
) -> Result<SpanningTree, TreeError> {
    if let Some(e) = required.iter().find(|e| forbidden.contains(e)) {
        return Err(TreeError::Infeasible(format!(
            "edge `{}` is both required and forbidden",
            g.edge_name(*e)
        )));
    }
    let mut dsu = Dsu::new(g.num_vertices());
    let mut edges = Vec::new();
    for &e in required {
        if edges.contains(&e) {
            continue;
        }
        let (a, b) = g.endpoints(e);
        if !dsu.union(a.0, b.0) {
            return Err(TreeError::Infeasible(format!(
                "required edges contain a cycle through `{}`",
                g.edge_name(e)
            )));
        }
        edges.push(e);
    }
    for e in g.edges() {
        if forbidden.contains(&e) || edges.contains(&e) {
            continue;
        }
        let (a, b) = g.endpoints(e);
        if dsu.union(a.0, b.0) {
            edges.push(e);
        }
    }
    if edges.len() + 1 != g.num_vertices() {
        return Err(TreeError::Infeasible(
            "the graph without the forbidden edges is disconnected".into(),
        ));
    }
    edges.sort();
    Ok(SpanningTree::from_sorted(g, edges))
}

#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
