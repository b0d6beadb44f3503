//! Permutations of canonical tree indices.
//!
//! Composition is right to left: `a.compose(&b)` applies `b` first, so
//! `(123)(34) = (1234)`. Cycle notation is 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreePermutation {
    images: Vec<usize>,
}

impl TreePermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// `images[i]` is the 0-based image of `i`. Returns `None` unless it is a
    /// bijection of `0..n`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    /// Parses 1-based cycle notation such as `(193)(278)(456)` or
    /// `(1,10,3)(2,4)` on `n` points.
    pub fn parse_cycles(n: usize, text: &str) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        let mut rest = text.trim();
        if rest.is_empty() || rest == "()" {
            return Some(Self::identity(n));
        }
        while !rest.is_empty() {
            let body = rest.strip_prefix('(')?;
            let close = body.find(')')?;
            let inner = &body[..close];
            rest = body[close + 1..].trim_start();
            let points: Vec<usize> = if inner.contains(',') {
                inner
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().ok())
                    .collect::<Option<_>>()?
            } else {
                inner
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()?
            };
            for (i, &p) in points.iter().enumerate() {
                if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                    return None;
                }
                images[p - 1] = points[(i + 1) % points.len()] - 1;
            }
        }
        Some(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Self { images }
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.len());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, x)| i == *x).count()
    }

    /// Cycles of length at least two, each starting at its smallest point,
    /// ordered by that point. 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            if cyc.len() > 1 {
                out.push(cyc);
            }
        }
        out
    }

    /// Lengths of all cycles including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x];
            }
            if len > 0 {
                out.push(len);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `sigma ∘ self ∘ sigma⁻¹`: the same permutation after relabeling
    /// every point `i` as `sigma(i)`.
    pub fn conjugate_by(&self, sigma: &Self) -> Self {
        sigma.compose(self).compose(&sigma.inverse())
    }

    /// Every element of the group generated by `gens`, identity first.
    pub fn group_closure(gens: &[Self], n: usize) -> Vec<Self> {
        let mut elems = vec![Self::identity(n)];
        let mut set: std::collections::HashSet<Self> = elems.iter().cloned().collect();
        let mut frontier = 0;
        while frontier < elems.len() {
            let cur = elems[frontier].clone();
            frontier += 1;
            for gen in gens {
                let next = gen.compose(&cur);
                if set.insert(next.clone()) {
                    elems.push(next);
                }
            }
        }
        elems
    }
}

impl fmt::Display for TreePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        let sep = if self.len() > 9 { "," } else { "" };
        for cyc in cycles {
            let pts: Vec<String> = cyc.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}
