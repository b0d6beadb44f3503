//! Named example graphs and the calibration search that fixes the rotation
//! systems of the two bowtie graphs.

use serde::Serialize;

use crate::bernardi::BernardiTorsor;
use crate::divisors::Divisor;
use crate::error::CatalogError;
use crate::ribbon_graph::{RibbonGraph, VertexId};
use crate::torsor::{torsors_equal, BaseActions};
use crate::trees::enumerate_trees;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: RibbonGraph,
    pub note: String,
    pub planar: bool,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, graph: RibbonGraph, note: impl Into<String>) -> Self {
        let planar = graph.is_planar();
        Self {
            name: name.into(),
            graph,
            note: note.into(),
            planar,
        }
    }
}

/// An underlying multigraph whose rotation systems are indexed per vertex.
/// At a vertex with incident edges `[e0, .., ek]` (listing order) the cyclic
/// orders are `e0` followed by each permutation of the rest, numbered in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct RotationFamily {
    vertices: Vec<String>,
    incident: Vec<Vec<String>>,
}

impl RotationFamily {
    /// `edges` are `(name, u, v)` with vertex names from `vertices`.
    pub fn new<S: AsRef<str>>(vertices: &[&str], edges: &[(S, &str, &str)]) -> Self {
        let incident = vertices
            .iter()
            .map(|v| {
                edges
                    .iter()
                    .filter(|(_, a, b)| a == v || b == v)
                    .map(|(n, _, _)| n.as_ref().to_owned())
                    .collect()
            })
            .collect();
        Self {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            incident,
        }
    }

    /// Number of cyclic orders at each vertex.
    pub fn choices(&self) -> Vec<usize> {
        self.incident
            .iter()
            .map(|es| (1..es.len()).product::<usize>().max(1))
            .collect()
    }

    pub fn rotation_at(&self, v: usize, k: usize) -> Vec<&str> {
        let es = &self.incident[v];
        let mut rest: Vec<&str> = es[1..].iter().map(String::as_str).collect();
        let mut out = vec![es[0].as_str()];
        // k-th permutation in lexicographic order (factorial number system)
        let mut k = k;
        while !rest.is_empty() {
            let f: usize = (1..rest.len()).product::<usize>().max(1);
            out.push(rest.remove(k / f));
            k %= f;
        }
        out
    }

    pub fn build(&self, code: &[usize]) -> RibbonGraph {
        let rotations: Vec<Vec<&str>> = (0..self.vertices.len())
            .map(|v| self.rotation_at(v, code[v]))
            .collect();
        let spec: Vec<(&str, &[&str])> = self
            .vertices
            .iter()
            .zip(&rotations)
            .map(|(v, r)| (v.as_str(), r.as_slice()))
            .collect();
        RibbonGraph::from_edge_rotations(&spec).expect("family graphs are valid")
    }

    /// Every code in lexicographic order, first vertex most significant.
    pub fn codes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for c in self.choices() {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..c).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

fn complete_family(vertices: &[&str]) -> RotationFamily {
    let mut edges = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            edges.push((format!("{a}{b}"), *a, *b));
        }
    }
    RotationFamily::new(vertices, &edges)
}

pub fn k5_family() -> RotationFamily {
    complete_family(&["a", "b", "c", "d", "e"])
}

pub fn k33_family() -> RotationFamily {
    let us = ["u1", "u2", "u3"];
    let ws = ["w1", "w2", "w3"];
    let mut edges = Vec::new();
    for u in us {
        for w in ws {
            edges.push((format!("{u}{w}"), u, w));
        }
    }
    RotationFamily::new(&["u1", "u2", "u3", "w1", "w2", "w3"], &edges)
}

pub fn rounded_bowtie_family() -> RotationFamily {
    RotationFamily::new(
        &["a", "b", "c"],
        &[("ca1", "c", "a"), ("ca2", "c", "a"), ("cb1", "c", "b"), ("cb2", "c", "b")],
    )
}

pub fn pointed_bowtie_family() -> RotationFamily {
    RotationFamily::new(
        &["a", "b", "p", "c", "q"],
        &[
            ("ab", "a", "b"),
            ("ap", "a", "p"),
            ("bp", "b", "p"),
            ("pc", "p", "c"),
            ("pq", "p", "q"),
            ("cq", "c", "q"),
        ],
    )
}

/// Cyclic-order index at `c` selected by [`audit_rounded_bowtie`].
pub const ROUNDED_BOWTIE_ROTATION: usize = 2;
/// Cyclic-order index at `p` meeting every essential claim of
/// [`audit_pointed_bowtie`].
pub const POINTED_BOWTIE_ROTATION: usize = 2;
/// First genus-one code of [`k5_family`].
pub const K5_DEFAULT: [usize; 5] = [0, 0, 1, 2, 4];
/// First genus-one code of [`k33_family`].
pub const K33_DEFAULT: [usize; 6] = [0; 6];

pub fn triangle() -> RibbonGraph {
    RibbonGraph::from_edge_rotations(&[
        ("x", &["xy", "xz"]),
        ("y", &["yz", "xy"]),
        ("z", &["xz", "yz"]),
    ])
    .expect("valid")
}

/// K4 with the planar rotation reversed at each vertex whose bit is set
/// (bits in vertex order a, b, c, d).
pub fn k4(flips: [bool; 4]) -> RibbonGraph {
    let base: [(&str, [&str; 3]); 4] = [
        ("a", ["ab", "ac", "ad"]),
        ("b", ["bc", "ab", "bd"]),
        ("c", ["cd", "ac", "bc"]),
        ("d", ["bd", "ad", "cd"]),
    ];
    let rotations: Vec<(&str, Vec<&str>)> = base
        .iter()
        .zip(flips)
        .map(|((v, r), flip)| {
            let mut r = r.to_vec();
            if flip {
                r.reverse();
            }
            (*v, r)
        })
        .collect();
    let spec: Vec<(&str, &[&str])> = rotations.iter().map(|(v, r)| (*v, r.as_slice())).collect();
    RibbonGraph::from_edge_rotations(&spec).expect("valid")
}

pub fn k4_code_name(flips: [bool; 4]) -> String {
    let bits: String = flips.iter().map(|&b| if b { '1' } else { '0' }).collect();
    format!("k4:{bits}")
}

pub fn all_k4_codes() -> Vec<[bool; 4]> {
    (0..16u8)
        .map(|m| [m & 8 != 0, m & 4 != 0, m & 2 != 0, m & 1 != 0])
        .collect()
}

fn parse_digits(text: &str, len: usize, bound: usize) -> Option<Vec<usize>> {
    let digits: Vec<usize> = text
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()?;
    (digits.len() == len && digits.iter().all(|&d| d < bound)).then_some(digits)
}

/// Looks up a named graph: `triangle`, `k4:<4 bits>`, `k5[:<5 digits 0-5>]`,
/// `k33[:<6 bits>]`, `rounded-bowtie[:<0-5>]`, `pointed-bowtie[:<0-5>]`.
pub fn catalog(name: &str) -> Result<CatalogEntry, CatalogError> {
    let unknown = || CatalogError::UnknownName(name.to_owned());
    let (head, code) = match name.split_once(':') {
        Some((h, c)) => (h, Some(c)),
        None => (name, None),
    };
    let entry = match (head, code) {
        ("triangle", None) => CatalogEntry::new(name, triangle(), "triangle on x, y, z"),
        ("k4", Some(c)) => {
            let d = parse_digits(c, 4, 2).ok_or_else(unknown)?;
            let flips = [d[0] == 1, d[1] == 1, d[2] == 1, d[3] == 1];
            let reversed = flips.iter().filter(|&&b| b).count();
            CatalogEntry::new(
                name,
                k4(flips),
                format!("K4, planar rotation reversed at {reversed} vertices"),
            )
        }
        ("k5", c) => {
            let code = match c {
                Some(c) => parse_digits(c, 5, 6).ok_or_else(unknown)?,
                None => K5_DEFAULT.to_vec(),
            };
            CatalogEntry::new(name, k5_family().build(&code), "K5 with an indexed rotation system")
        }
        ("k33", c) => {
            let code = match c {
                Some(c) => parse_digits(c, 6, 2).ok_or_else(unknown)?,
                None => K33_DEFAULT.to_vec(),
            };
            CatalogEntry::new(name, k33_family().build(&code), "K3,3 with an indexed rotation system")
        }
        ("rounded-bowtie", c) => {
            let k = match c {
                Some(c) => parse_digits(c, 1, 6).ok_or_else(unknown)?[0],
                None => ROUNDED_BOWTIE_ROTATION,
            };
            CatalogEntry::new(
                name,
                rounded_bowtie_family().build(&[0, 0, k]),
                "doubled edges c-a and c-b; rotation at c fixed by calibration",
            )
        }
        ("pointed-bowtie", c) => {
            let k = match c {
                Some(c) => parse_digits(c, 1, 6).ok_or_else(unknown)?[0],
                None => POINTED_BOWTIE_ROTATION,
            };
            CatalogEntry::new(
                name,
                pointed_bowtie_family().build(&[0, 0, k, 0, 0]),
                "triangles a-b-p and p-c-q sharing p; rotation at p fixed by calibration",
            )
        }
        _ => return Err(unknown()),
    };
    Ok(entry)
}

/// Default names served by the CLI listing and used by whole-catalog checks.
pub fn standard_names() -> Vec<String> {
    let mut names = vec!["triangle".to_owned()];
    names.extend(all_k4_codes().into_iter().map(k4_code_name));
    names.extend(["k5", "k33", "rounded-bowtie", "pointed-bowtie"].map(String::from));
    names
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub claim: String,
    pub holds: bool,
    /// Essential claims decide the catalog rotation even when some
    /// non-essential claim fails everywhere.
    pub essential: bool,
}

fn check(claim: &str, holds: bool) -> Check {
    Check {
        claim: claim.to_owned(),
        holds,
        essential: true,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateAudit {
    pub index: usize,
    pub rotation: Vec<String>,
    pub genus: usize,
    pub checks: Vec<Check>,
    pub satisfies: bool,
}

impl CandidateAudit {
    fn satisfies_essential(&self) -> bool {
        self.checks.iter().all(|c| c.holds || !c.essential)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub graph: String,
    pub vertex: String,
    pub candidates: Vec<CandidateAudit>,
    /// First candidate satisfying every claim.
    pub selected: Option<usize>,
    /// First candidate satisfying every essential claim.
    pub essential: Option<usize>,
}

impl Calibration {
    pub fn into_result(self) -> Result<Self, CatalogError> {
        match self.selected {
            Some(_) => Ok(self),
            None => Err(CatalogError::CalibrationFailed(self.graph)),
        }
    }
}

fn audit(
    graph: &str,
    family: &RotationFamily,
    vertex: usize,
    base: &[usize],
    claims: impl Fn(&RibbonGraph) -> Vec<Check>,
) -> Calibration {
    let mut candidates = Vec::new();
    for k in 0..family.choices()[vertex] {
        let mut code = base.to_vec();
        code[vertex] = k;
        let g = family.build(&code);
        let genus = g.genus();
        let mut checks = vec![check("nonplanar", genus > 0)];
        if genus > 0 {
            checks.extend(claims(&g));
        }
        let satisfies = checks.iter().all(|c| c.holds);
        candidates.push(CandidateAudit {
            index: k,
            rotation: family.rotation_at(vertex, k).into_iter().map(String::from).collect(),
            genus,
            checks,
            satisfies,
        });
    }
    let selected = candidates.iter().find(|c| c.satisfies).map(|c| c.index);
    let essential = candidates
        .iter()
        .find(|c| c.satisfies_essential())
        .map(|c| c.index);
    Calibration {
        graph: graph.to_owned(),
        vertex: family.vertices[vertex].clone(),
        candidates,
        selected,
        essential,
    }
}

fn v(g: &RibbonGraph, name: &str) -> VertexId {
    g.vertex_by_name(name).expect("family vertex")
}

/// Audits the cyclic orders at `c`: nonplanar, the two actions agree at
/// every base, `[(a)-(c)]` acts as the same double transposition under
/// both, and the break divisors at `(c, ca1)` are `(0,1,1), (0,0,2),
/// (1,1,0), (1,0,1)`.
pub fn audit_rounded_bowtie() -> Calibration {
    audit("rounded-bowtie", &rounded_bowtie_family(), 2, &[0, 0, 0], |g| {
        let trees = enumerate_trees(g);
        let (a, c) = (v(g, "a"), v(g, "c"));
        let all_agree = g.vertices().all(|q| torsors_equal(g, &trees, q).is_ok());
        let actions = BaseActions::new(g, &trees, c);
        let beta = actions.bernardi.generator(a);
        let rho = actions.rotor.generator(a);
        let ca1 = g.edge_by_name("ca1").expect("edge");
        let bt = BernardiTorsor::new(g, &trees, c, ca1).expect("ca1 is at c");
        let mut breaks: Vec<String> = bt.break_divisors().iter().map(Divisor::to_string).collect();
        breaks.sort();
        vec![
            check("actions agree at every base", all_agree),
            check("beta_c((a)-(c)) = rho_c((a)-(c))", beta == rho),
            check("beta_c((a)-(c)) has cycle type (2,2)", beta.cycle_type() == [2, 2]),
            check(
                "break divisors at (c, ca1) are (0,1,1), (0,0,2), (1,1,0), (1,0,1)",
                breaks == ["(0,0,2)", "(0,1,1)", "(1,0,1)", "(1,1,0)"],
            ),
        ]
    })
}

/// Audits the cyclic orders at `p`: nonplanar, the actions agree at `p` and
/// differ at `q`, both actions of `[(p)-(q)]` at `q` have cycle type
/// {3,3,3}, and the difference of `[(a)-(p)]` at `q` has cycle type
/// {3,3,1,1,1}. The last claim is non-essential: it rests on quoted
/// permutations for `[(a)-(q)]` that are inverse to those of `[(p)-(q)]`,
/// which no free action of a group of order 9 allows.
pub fn audit_pointed_bowtie() -> Calibration {
    audit("pointed-bowtie", &pointed_bowtie_family(), 2, &[0, 0, 0, 0, 0], |g| {
        let trees = enumerate_trees(g);
        let n = g.num_vertices();
        let (a, p, q) = (v(g, "a"), v(g, "p"), v(g, "q"));
        let at_q = BaseActions::new(g, &trees, q);
        let diff = at_q.difference(&Divisor::generator(n, a, p));
        let beta = at_q.bernardi.generator(p);
        let rho = at_q.rotor.generator(p);
        vec![
            check("actions agree at p", torsors_equal(g, &trees, p).is_ok()),
            check("actions differ at q", torsors_equal(g, &trees, q).is_err()),
            check("beta_q((p)-(q)) has cycle type {3,3,3}", beta.cycle_type() == [3, 3, 3]),
            check("rho_q((p)-(q)) has cycle type {3,3,3}", rho.cycle_type() == [3, 3, 3]),
            Check {
                essential: false,
                ..check(
                    "difference of (a)-(p) at q has cycle type {3,3,1,1,1}",
                    diff.cycle_type() == [3, 3, 1, 1, 1],
                )
            },
        ]
    })
}

pub fn calibrate_rounded_bowtie() -> Result<Calibration, CatalogError> {
    audit_rounded_bowtie().into_result()
}

pub fn calibrate_pointed_bowtie() -> Result<Calibration, CatalogError> {
    audit_pointed_bowtie().into_result()
}

/// Both audits; fails if either graph has no rotation meeting every claim.
pub fn calibrate_catalog() -> Result<Vec<Calibration>, CatalogError> {
    Ok(vec![calibrate_rounded_bowtie()?, calibrate_pointed_bowtie()?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_rotations_are_cyclic_orders() {
        let f = rounded_bowtie_family();
        assert_eq!(f.choices(), vec![1, 1, 6]);
        let orders: Vec<Vec<&str>> = (0..6).map(|k| f.rotation_at(2, k)).collect();
        assert_eq!(orders[0], ["ca1", "ca2", "cb1", "cb2"]);
        assert_eq!(orders[5], ["ca1", "cb2", "cb1", "ca2"]);
        assert_eq!(f.codes().len(), 6);
        assert_eq!(k5_family().codes().len(), 6usize.pow(5));
        assert_eq!(k33_family().codes().len(), 64);
    }

    #[test]
    fn k4_planarity_by_flip_count() {
        for flips in all_k4_codes() {
            let g = k4(flips);
            let planar = flips.iter().all(|&b| b) || flips.iter().all(|&b| !b);
            assert_eq!(g.is_planar(), planar, "{}", k4_code_name(flips));
        }
    }

    #[test]
    fn default_codes_are_first_genus_one() {
        let f = k5_family();
        let first = f.codes().into_iter().find(|c| f.build(c).genus() == 1).unwrap();
        assert_eq!(first, K5_DEFAULT);
        let f = k33_family();
        let first = f.codes().into_iter().find(|c| f.build(c).genus() == 1).unwrap();
        assert_eq!(first, K33_DEFAULT);
    }

    #[test]
    fn calibration_reproduces_hardcoded_choices() {
        let rounded = audit_rounded_bowtie();
        assert_eq!(rounded.selected, Some(ROUNDED_BOWTIE_ROTATION));
        assert_eq!(rounded.essential, Some(ROUNDED_BOWTIE_ROTATION));
        let pointed = audit_pointed_bowtie();
        assert_eq!(pointed.essential, Some(POINTED_BOWTIE_ROTATION));
    }

    #[test]
    fn pointed_bowtie_difference_claim_fails_everywhere() {
        let pointed = audit_pointed_bowtie();
        assert_eq!(pointed.selected, None);
        assert!(matches!(
            calibrate_pointed_bowtie(),
            Err(CatalogError::CalibrationFailed(_))
        ));
        let nonplanar: Vec<_> = pointed.candidates.iter().filter(|c| c.genus > 0).collect();
        assert_eq!(nonplanar.len(), 2);
        assert!(nonplanar.iter().all(|c| c.checks.iter().all(|k| k.holds || !k.essential)));
    }

    #[test]
    fn lookup() {
        assert!(catalog("k4:0000").unwrap().planar);
        assert!(!catalog("k4:0100").unwrap().planar);
        assert!(catalog("k4:0120").is_err());
        assert!(catalog("nope").is_err());
        let e = catalog("pointed-bowtie").unwrap();
        assert_eq!((e.graph.num_vertices(), e.graph.num_edges()), (5, 6));
        assert_eq!(standard_names().len(), 21);
    }
}
