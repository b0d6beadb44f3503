//! Divisors, the combinatorial Laplacian, linear equivalence via reduced
//! divisors, the Picard group, and break divisors.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::DivisorError;
use crate::linalg;
use crate::ribbon_graph::{EdgeId, RibbonGraph, VertexId};
use crate::trees::{SpanningTree, TreeList};

/// Integer chip counts indexed by canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn from_coefficients(coeffs: Vec<i64>) -> Self {
        Self(coeffs)
    }

    /// Checks the length against `g`.
    pub fn for_graph(g: &RibbonGraph, coeffs: Vec<i64>) -> Result<Self, DivisorError> {
        if coeffs.len() != g.num_vertices() {
            return Err(DivisorError::WrongLength {
                expected: g.num_vertices(),
                found: coeffs.len(),
            });
        }
        Ok(Self(coeffs))
    }

    /// The divisor `(v)`.
    pub fn point(n: usize, v: VertexId) -> Self {
        let mut d = Self::zero(n);
        d.0[v.0] = 1;
        d
    }

    /// The generator `(v) - (q)` of degree-zero divisors.
    pub fn generator(n: usize, v: VertexId, q: VertexId) -> Self {
        let mut d = Self::zero(n);
        d.0[v.0] += 1;
        d.0[q.0] -= 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, v: VertexId) -> i64 {
        self.0[v.0]
    }

    pub fn set(&mut self, v: VertexId, value: i64) {
        self.0[v.0] = value;
    }

    pub fn add_at(&mut self, v: VertexId, delta: i64) {
        self.0[v.0] += delta;
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `a=2,b=1,c=-1` form.
    pub fn named(&self, g: &RibbonGraph) -> String {
        g.vertices()
            .map(|v| format!("{}={}", g.vertex_name(v), self.0[v.0]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Row-vector form `(2,1,-1)`.
impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.0.len(), rhs.0.len());
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        assert_eq!(self.0.len(), rhs.0.len());
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor(self.0.iter().map(|a| -a).collect())
    }
}

/// Parses `a=2,b=1,c=-1` (unlisted vertices are zero) or the positional
/// form `(2,1,-1)` against canonical vertex order.
pub fn parse_divisor(g: &RibbonGraph, literal: &str) -> Result<Divisor, DivisorError> {
    let bad = || DivisorError::Literal(literal.to_string());
    let s = literal.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let coeffs = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        return Divisor::for_graph(g, coeffs);
    }
    let mut d = Divisor::zero(g.num_vertices());
    if s.is_empty() {
        return Ok(d);
    }
    for part in s.split(',') {
        let (name, value) = part.split_once('=').ok_or_else(bad)?;
        let v = g.vertex_by_name(name.trim())?;
        let x: i64 = value.trim().parse().map_err(|_| bad())?;
        d.add_at(v, x);
    }
    Ok(d)
}

/// `Δf(v) = Σ_{e = {v,w}} (f(v) - f(w))`, parallel edges counted with
/// multiplicity.
pub fn laplacian(g: &RibbonGraph, f: &[i64]) -> Divisor {
    assert_eq!(f.len(), g.num_vertices());
    let mut d = Divisor::zero(g.num_vertices());
    for e in g.edges() {
        let (a, b) = g.endpoints(e);
        let diff = f[a.0] - f[b.0];
        d.0[a.0] += diff;
        d.0[b.0] -= diff;
    }
    d
}

/// Number of edges between each pair of vertices.
fn multiplicities(g: &RibbonGraph) -> Vec<Vec<i64>> {
    let n = g.num_vertices();
    let mut m = vec![vec![0i64; n]; n];
    for e in g.edges() {
        let (a, b) = g.endpoints(e);
        m[a.0][b.0] += 1;
        m[b.0][a.0] += 1;
    }
    m
}

/// The `q`-reduced divisor linearly equivalent to `d`.
///
/// First every vertex other than `q` is made nonnegative by borrowing, then
/// Dhar's burning algorithm fires the unburnt set until everything burns.
pub fn reduce(g: &RibbonGraph, d: &Divisor, q: VertexId) -> Divisor {
    let n = g.num_vertices();
    let mult = multiplicities(g);
    let deg: Vec<i64> = (0..n).map(|v| g.degree(VertexId(v)) as i64).collect();
    let mut d = d.0.clone();

    // borrowing terminates: debt only ever drains toward q
    while let Some(v) = (0..n).find(|&v| v != q.0 && d[v] < 0) {
        let times = (-d[v] + deg[v] - 1) / deg[v];
        d[v] += times * deg[v];
        for w in 0..n {
            d[w] -= times * mult[v][w];
        }
    }

    loop {
        let mut burnt = vec![false; n];
        burnt[q.0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if burnt[v] {
                    continue;
                }
                let threats: i64 = (0..n).filter(|&w| burnt[w]).map(|w| mult[v][w]).sum();
                if threats > d[v] {
                    burnt[v] = true;
                    changed = true;
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            return Divisor(d);
        }
        // fire the unburnt set once
        let mut delta = vec![0i64; n];
        for v in (0..n).filter(|&v| !burnt[v]) {
            for w in (0..n).filter(|&w| burnt[w]) {
                delta[v] -= mult[v][w];
                delta[w] += mult[v][w];
            }
        }
        for v in 0..n {
            d[v] += delta[v];
        }
    }
}

/// Canonical pivot for equivalence testing: the first vertex.
pub const PIVOT: VertexId = VertexId(0);

pub fn linearly_equivalent(g: &RibbonGraph, d1: &Divisor, d2: &Divisor) -> bool {
    d1.degree() == d2.degree() && reduce(g, d1, PIVOT) == reduce(g, d2, PIVOT)
}

/// Invariant factors of the degree-zero Picard group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardStructure {
    /// Nontrivial factors `d1 | d2 | ...`, all greater than one.
    pub invariant_factors: Vec<u64>,
    pub order: u64,
}

impl fmt::Display for PicardStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Smith normal form of the reduced Laplacian at the first vertex.
pub fn picard_structure(g: &RibbonGraph) -> PicardStructure {
    let diag = linalg::smith_diagonal(&linalg::reduced_laplacian(g, PIVOT));
    let invariant_factors: Vec<u64> = diag
        .into_iter()
        .filter(|&d| d != 1)
        .map(|d| d as u64)
        .collect();
    let order = invariant_factors.iter().product();
    PicardStructure {
        invariant_factors,
        order,
    }
}

/// A degree-`g` divisor together with a tree and an endpoint choice for each
/// non-tree edge that produce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakDivisor {
    pub divisor: Divisor,
    /// Canonical index of the witnessing tree, when it came from a list.
    pub tree: Option<usize>,
    pub selection: Vec<(EdgeId, VertexId)>,
}

/// Every break divisor of `tree`, one per endpoint selection, in selection
/// order (bit i picks the second endpoint of the i-th non-tree edge).
pub fn tree_break_divisors(g: &RibbonGraph, tree: &SpanningTree) -> Vec<(Divisor, Vec<(EdgeId, VertexId)>)> {
    let outside = tree.complement();
    let k = outside.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0u64..(1u64 << k) {
        let mut d = Divisor::zero(g.num_vertices());
        let mut sel = Vec::with_capacity(k);
        for (i, &e) in outside.iter().enumerate() {
            let (a, b) = g.endpoints(e);
            let v = if mask >> i & 1 == 1 { b } else { a };
            d.add_at(v, 1);
            sel.push((e, v));
        }
        out.push((d, sel));
    }
    out
}

/// All distinct break divisors of `g`, each with the first witnessing tree
/// in canonical order.
pub fn all_break_divisors(g: &RibbonGraph, trees: &TreeList) -> Vec<BreakDivisor> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        for (d, selection) in tree_break_divisors(g, t) {
            if seen.insert(d.clone()) {
                out.push(BreakDivisor {
                    divisor: d,
                    tree: Some(i),
                    selection,
                });
            }
        }
    }
    out
}

/// Searches trees and endpoint selections for a decomposition of `b`.
pub fn is_break_divisor(g: &RibbonGraph, trees: &TreeList, b: &Divisor) -> Option<BreakDivisor> {
    if b.degree() != g.cycle_rank() as i64 || b.0.iter().any(|&x| x < 0) {
        return None;
    }
    for (i, t) in trees.iter().enumerate() {
        for (d, selection) in tree_break_divisors(g, t) {
            if &d == b {
                return Some(BreakDivisor {
                    divisor: d,
                    tree: Some(i),
                    selection,
                });
            }
        }
    }
    None
}

/// The unique break divisor equivalent to `d`, found by exhaustive search.
pub fn break_representative(
    g: &RibbonGraph,
    trees: &TreeList,
    d: &Divisor,
) -> Result<BreakDivisor, DivisorError> {
    let genus = g.cycle_rank() as i64;
    if d.degree() != genus {
        return Err(DivisorError::WrongDegree {
            expected: genus,
            found: d.degree(),
        });
    }
    let target = reduce(g, d, PIVOT);
    let mut matches: Vec<BreakDivisor> = all_break_divisors(g, trees)
        .into_iter()
        .filter(|b| reduce(g, &b.divisor, PIVOT) == target)
        .collect();
    match matches.len() {
        1 => Ok(matches.pop().unwrap()),
        0 => Err(DivisorError::NotFound(d.to_string())),
        count => Err(DivisorError::NonUnique {
            divisor: d.to_string(),
            count,
        }),
    }
}

/// Groups all break divisors by linear-equivalence class; used to check
/// that each degree-`g` class holds exactly one.
pub fn break_divisor_classes(g: &RibbonGraph, trees: &TreeList) -> HashMap<Divisor, Vec<Divisor>> {
    let mut classes: HashMap<Divisor, Vec<Divisor>> = HashMap::new();
    for b in all_break_divisors(g, trees) {
        classes
            .entry(reduce(g, &b.divisor, PIVOT))
            .or_default()
            .push(b.divisor);
    }
    classes
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

    /// a, b, c with doubled edges c-a and c-b.
    fn rounded_bowtie() -> RibbonGraph {
        RibbonGraph::from_edge_rotations(&[
            ("a", &["ca1", "ca2"]),
            ("b", &["cb1", "cb2"]),
            ("c", &["ca1", "cb1", "ca2", "cb2"]),
        ])
        .unwrap()
    }

    fn d(x: &[i64]) -> Divisor {
        Divisor::from_coefficients(x.to_vec())
    }

    #[test]
    fn degrees() {
        assert_eq!(Divisor::zero(3).degree(), 0);
        assert_eq!(Divisor::generator(3, VertexId(0), VertexId(2)).degree(), 0);
        assert_eq!(d(&[2, 1, -1]).degree(), 2);
    }

    #[test]
    fn laplacian_examples() {
        let g = triangle();
        assert!(laplacian(&g, &[5, 5, 5]).is_zero());
        assert_eq!(laplacian(&g, &[1, 0, 0]), d(&[2, -1, -1]));
        let g = rounded_bowtie();
        assert_eq!(laplacian(&g, &[1, 0, 0]), d(&[2, 0, -2]));
    }

    #[test]
    fn rounded_bowtie_equivalences() {
        let g = rounded_bowtie();
        assert!(linearly_equivalent(&g, &d(&[2, 1, -1]), &d(&[0, 1, 1])));
        assert!(linearly_equivalent(&g, &d(&[2, 0, 0]), &d(&[0, 0, 2])));
        assert!(!linearly_equivalent(&g, &d(&[2, 0, 0]), &d(&[1, 1, 0])));
        assert!(!linearly_equivalent(&g, &d(&[1, 0, 0]), &d(&[1, 1, 0])));
    }

    #[test]
    fn reduced_form_is_stable() {
        let g = rounded_bowtie();
        let r = reduce(&g, &d(&[-3, 7, 1]), PIVOT);
        assert_eq!(reduce(&g, &r, PIVOT), r);
        assert!(r.coefficients()[1..].iter().all(|&x| x >= 0));
    }

    #[test]
    fn picard_examples() {
        let p = picard_structure(&triangle());
        assert_eq!(p.invariant_factors, vec![3]);
        assert_eq!(p.order, 3);
        assert_eq!(p.to_string(), "Z/3");
        assert_eq!(picard_structure(&rounded_bowtie()).order, 4);
    }

    #[test]
    fn break_divisor_search() {
        let g = rounded_bowtie();
        let trees = enumerate_trees(&g);
        let b = is_break_divisor(&g, &trees, &d(&[0, 0, 2])).expect("(0,0,2) is a break divisor");
        assert_eq!(b.selection.len(), 2);
        assert!(is_break_divisor(&g, &trees, &d(&[2, 0, 0])).is_none());
        assert!(is_break_divisor(&g, &trees, &d(&[1, 0, 0])).is_none());

        let r = break_representative(&g, &trees, &d(&[2, 1, -1])).unwrap();
        assert_eq!(r.divisor, d(&[0, 1, 1]));
        let r = break_representative(&g, &trees, &d(&[2, 0, 0])).unwrap();
        assert_eq!(r.divisor, d(&[0, 0, 2]));
        let r = break_representative(&g, &trees, &d(&[1, 1, 0])).unwrap();
        assert_eq!(r.divisor, d(&[1, 1, 0]));
        assert!(matches!(
            break_representative(&g, &trees, &d(&[1, 0, 0])),
            Err(DivisorError::WrongDegree { .. })
        ));
    }

    #[test]
    fn divisor_literals() {
        let g = rounded_bowtie();
        assert_eq!(parse_divisor(&g, "a=2,b=1,c=-1").unwrap(), d(&[2, 1, -1]));
        assert_eq!(parse_divisor(&g, "(2, 1, -1)").unwrap(), d(&[2, 1, -1]));
        assert_eq!(parse_divisor(&g, "c=1").unwrap(), d(&[0, 0, 1]));
        assert!(parse_divisor(&g, "(1,2)").is_err());
        assert!(parse_divisor(&g, "z=1").is_err());
        assert!(parse_divisor(&g, "a:1").is_err());
        assert_eq!(d(&[2, 1, -1]).to_string(), "(2,1,-1)");
        assert_eq!(d(&[2, 1, -1]).named(&g), "a=2,b=1,c=-1");
    }
}
