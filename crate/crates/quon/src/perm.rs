//! Permutations in one-line notation with the combinatorics used by the
//! factorization and inversion formulas.
//!
//! Positions and values are 1-based; `(g·h)(x) = g(h(x))`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::algebra::Label;
use crate::lattice::Subdivision;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not a permutation: {0}")]
    NotBijective(String),
    #[error("bounds violated: {0}")]
    Bounds(String),
    #[error("permutation sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((1..=n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(PermError::NotBijective(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Perm(images))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    /// `g(x)` for 1-based `x`.
    pub fn at(&self, x: usize) -> usize {
        self.0[x - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    /// `self · h`, i.e. `x ↦ self(h(x))`.
    pub fn compose(&self, h: &Perm) -> Perm {
        assert_eq!(self.n(), h.n(), "composing permutations of different sizes");
        Perm(h.0.iter().map(|&x| self.0[x as usize - 1]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v as usize - 1] = (k + 1) as u8;
        }
        Perm(inv)
    }

    /// `I(g) = {(a, b) : a < b, g(a) > g(b)}`, sorted.
    pub fn inversion_set(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                if self.at(a) > self.at(b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.inversion_set().len()
    }

    /// `Des(g) = {i : g(i) > g(i+1)}`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.at(i) > self.at(i + 1)).collect()
    }

    /// The cycle `t_{a,b}`: `b → b-1 → … → a → b`.
    pub fn cycle(a: usize, b: usize, n: usize) -> Result<Perm, PermError> {
        if !(1 <= a && a <= b && b <= n) {
            return Err(PermError::Bounds(format!("t_{{{a},{b}}} in S_{n}")));
        }
        let mut v: Vec<u8> = (1..=n as u8).collect();
        v[a - 1] = b as u8;
        for k in a + 1..=b {
            v[k - 1] = (k - 1) as u8;
        }
        Ok(Perm(v))
    }

    /// `w_[a..b]`: reverses the positions `a..b`.
    pub fn longest(a: usize, b: usize, n: usize) -> Result<Perm, PermError> {
        if !(1 <= a && a <= b && b <= n) {
            return Err(PermError::Bounds(format!("w_[{a}..{b}] in S_{n}")));
        }
        let mut v: Vec<u8> = (1..=n as u8).collect();
        v[a - 1..b].reverse();
        Ok(Perm(v))
    }

    /// Product of the longest elements of the intervals of `s`.
    pub fn longest_of(s: &Subdivision, n: usize) -> Perm {
        let mut v: Vec<u8> = (1..=n as u8).collect();
        for &(a, b) in s.intervals() {
            v[a - 1..b].reverse();
        }
        Perm(v)
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }

    /// Does `g` map `[a..b]` onto itself?
    pub fn stabilizes(&self, a: usize, b: usize) -> bool {
        (a..=b).all(|x| (a..=b).contains(&self.at(x)))
    }

    /// Does `g` lie in the Young subgroup of `s`?
    pub fn in_young_subgroup(&self, s: &Subdivision) -> bool {
        s.intervals().iter().all(|&(a, b)| self.stabilizes(a, b))
    }

    /// Place permutation of a word: `(g·j)_p = j_{g⁻¹(p)}`.
    pub fn act(&self, word: &[Label]) -> Vec<Label> {
        let mut out = vec![0; word.len()];
        for (k, &l) in word.iter().enumerate() {
            out[self.0[k] as usize - 1] = l;
        }
        out
    }

    /// Cut points of the minimal Young subgroup on `[a..b]` containing `g`,
    /// for `g` stabilizing `[a..b]`.
    pub fn young_cuts_in(&self, a: usize, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut mx = 0;
        for j in a..b {
            mx = mx.max(self.at(j));
            if mx == j {
                out.push(j);
            }
        }
        out
    }

    /// `g = a_J · g_J` with `a_J` increasing on each block of `s` and
    /// `g_J` in the Young subgroup of `s`.
    pub fn shuffle_factor(&self, s: &Subdivision) -> (Perm, Perm) {
        let mut a = self.0.clone();
        for &(x, y) in s.intervals() {
            a[x - 1..y].sort_unstable();
        }
        let a = Perm(a);
        let h = a.inverse().compose(self);
        (a, h)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        if self.n() <= 9 {
            write!(f, "{}", parts.concat())
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Perm {
    type Err = PermError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PermError::NotBijective(s.to_string());
        let images: Vec<u8> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        } else {
            s.trim().chars().map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad)).collect::<Result<_, _>>()?
        };
        Perm::from_images(images)
    }
}

/// `J(g)`, `σ(g)` and the factors `g_k` (each a permutation of `S_n`
/// supported on the block `J_k`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungData {
    pub cuts: Vec<usize>,
    pub sigma: Subdivision,
    pub factors: Vec<Perm>,
}

pub fn young_data(g: &Perm) -> YoungData {
    let n = g.n();
    let cuts = g.young_cuts_in(1, n);
    let sigma = Subdivision::from_cuts(1, n, &cuts);
    let factors = sigma
        .intervals()
        .iter()
        .map(|&(a, b)| {
            let mut v: Vec<u8> = (1..=n as u8).collect();
            v[a - 1..b].copy_from_slice(&g.images()[a - 1..b]);
            Perm(v)
        })
        .collect();
    YoungData { cuts, sigma, factors }
}

/// `g' = g · w_{J(g)}`.
pub fn young_step(g: &Perm) -> Perm {
    let yd = young_data(g);
    g.compose(&Perm::longest_of(&yd.sigma, g.n()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YoungSequence {
    /// `g, g', g'', …` up to the identity or up to the first repeat.
    pub seq: Vec<Perm>,
    pub tree_like: bool,
    /// Minimal `k` with `g^(k) = id`, when tree-like.
    pub depth: Option<usize>,
}

/// Iterates `g ↦ g·w_{J(g)}` until the identity or a revisited permutation.
pub fn young_sequence(g: &Perm) -> YoungSequence {
    let mut seen = HashSet::new();
    let mut seq = vec![g.clone()];
    let mut cur = g.clone();
    loop {
        if cur.is_identity() {
            let depth = seq.len() - 1;
            return YoungSequence { seq, tree_like: true, depth: Some(depth) };
        }
        if !seen.insert(cur.clone()) {
            seq.pop();
            return YoungSequence { seq, tree_like: false, depth: None };
        }
        cur = young_step(&cur);
        seq.push(cur.clone());
    }
}

pub fn is_tree_like(g: &Perm) -> bool {
    young_sequence(g).tree_like
}

/// `S_m^(k) × S_1^(n-m)`: `π(1) < … < π(k) > … > π(m)`, fixing `m+1..n`.
pub fn unimodal_subset(m: usize, k: usize, n: usize) -> Result<Vec<Perm>, PermError> {
    if !(1 <= k && k <= m && m <= n) {
        return Err(PermError::Bounds(format!("unimodal m={m} k={k} n={n}")));
    }
    let mut out = Vec::new();
    let rest: Vec<u8> = (1..m as u8).collect();
    for mask in 0u32..1 << rest.len() {
        let up: Vec<u8> = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        if up.len() != k - 1 {
            continue;
        }
        let mut down: Vec<u8> = rest.iter().copied().filter(|v| !up.contains(v)).collect();
        down.reverse();
        let mut v = up;
        v.push(m as u8);
        v.extend(down);
        v.extend(m as u8 + 1..=n as u8);
        out.push(Perm(v));
    }
    out.sort();
    Ok(out)
}

/// `γ_J = {g : Des(g) ⊆ J}`.
pub fn shuffles(cuts: &[usize], n: usize) -> Vec<Perm> {
    Perm::all(n).into_iter().filter(|g| g.descents().iter().all(|d| cuts.contains(d))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn young_data_of_41325786() {
        let g = p("41325786");
        let yd = young_data(&g);
        assert_eq!(yd.cuts, vec![4, 5]);
        assert_eq!(yd.sigma.to_string(), "[1234][5][678]");
        assert_eq!(young_step(&g), p("23145687"));
        let s = young_sequence(&p("43218765"));
        assert!(s.tree_like);
        assert_eq!(s.depth, Some(1));
    }

    #[test]
    fn cycle_and_longest() {
        assert_eq!(Perm::cycle(1, 3, 3).unwrap(), p("312"));
        assert_eq!(Perm::longest(1, 4, 8).unwrap(), p("43215678"));
        assert_eq!(p("312").inversion_set(), vec![(1, 2), (1, 3)]);
    }
}
