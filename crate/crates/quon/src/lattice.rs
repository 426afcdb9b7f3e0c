//! Interval subdivisions of `{1..n}`, chains from `[1..n]` toward the finest
//! subdivision, generalized bracketings, and the Schröder-type counts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid subdivision: {0}")]
    Subdivision(String),
    #[error("invalid chain: {0}")]
    Chain(String),
    #[error("invalid bracketing: {0}")]
    Bracketing(String),
}

/// A partition of `[lo..hi]` into consecutive intervals (1-based, inclusive).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subdivision {
    intervals: Vec<(usize, usize)>,
}

impl Subdivision {
    pub fn new(intervals: Vec<(usize, usize)>) -> Result<Self, LatticeError> {
        if intervals.is_empty() {
            return Err(LatticeError::Subdivision("no intervals".into()));
        }
        for w in intervals.windows(2) {
            if w[0].1 + 1 != w[1].0 {
                return Err(LatticeError::Subdivision(format!("gap between {:?} and {:?}", w[0], w[1])));
            }
        }
        if intervals.iter().any(|&(a, b)| a > b || a == 0) {
            return Err(LatticeError::Subdivision("empty interval".into()));
        }
        Ok(Subdivision { intervals })
    }

    /// Subdivision of `[lo..hi]` cut after each `j` in `cuts` (`lo <= j < hi`).
    pub fn from_cuts(lo: usize, hi: usize, cuts: &[usize]) -> Self {
        let mut iv = Vec::new();
        let mut start = lo;
        let mut cs: Vec<usize> = cuts.iter().copied().filter(|&j| j >= lo && j < hi).collect();
        cs.sort_unstable();
        cs.dedup();
        for j in cs {
            iv.push((start, j));
            start = j + 1;
        }
        iv.push((start, hi));
        Subdivision { intervals: iv }
    }

    /// The single interval `[lo..hi]`; for `lo = 1` this is the bottom element.
    pub fn whole(lo: usize, hi: usize) -> Self {
        Subdivision { intervals: vec![(lo, hi)] }
    }

    /// All singletons of `[lo..hi]`; for `lo = 1` this is the top element.
    pub fn singletons(lo: usize, hi: usize) -> Self {
        Subdivision { intervals: (lo..=hi).map(|k| (k, k)).collect() }
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn lo(&self) -> usize {
        self.intervals[0].0
    }

    pub fn hi(&self) -> usize {
        self.intervals[self.intervals.len() - 1].1
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn cuts(&self) -> Vec<usize> {
        self.intervals[..self.intervals.len() - 1].iter().map(|&(_, b)| b).collect()
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.intervals.iter().copied().filter(|&(a, b)| a < b)
    }

    pub fn is_finest(&self) -> bool {
        self.intervals.iter().all(|&(a, b)| a == b)
    }

    /// Every interval of `self` lies inside an interval of `coarser`.
    pub fn refines(&self, coarser: &Subdivision) -> bool {
        self.lo() == coarser.lo()
            && self.hi() == coarser.hi()
            && coarser.cuts().iter().all(|c| self.cuts().contains(c))
    }

    /// The strict order of chains: `finer` refines `self` and splits every
    /// nondegenerate interval of `self`.
    pub fn precedes(&self, finer: &Subdivision) -> bool {
        finer.refines(self) && self.nondegenerate().all(|iv| !finer.intervals.contains(&iv))
    }

    /// The restriction to `[a..b]`, which must be a union of intervals.
    pub fn restrict(&self, a: usize, b: usize) -> Subdivision {
        Subdivision {
            intervals: self.intervals.iter().copied().filter(|&(x, y)| x >= a && y <= b).collect(),
        }
    }
}

impl fmt::Display for Subdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.hi() > 9;
        for &(a, b) in &self.intervals {
            let ls: Vec<String> = (a..=b).map(|k| k.to_string()).collect();
            write!(f, "[{}]", ls.join(if wide { "," } else { "" }))?;
        }
        Ok(())
    }
}

/// All `2^(hi-lo)` subdivisions of `[lo..hi]`, lexicographic by endpoints.
pub fn subdivisions_of(lo: usize, hi: usize) -> Vec<Subdivision> {
    let gaps: Vec<usize> = (lo..hi).collect();
    let mut out: Vec<Subdivision> = (0u64..1 << gaps.len())
        .map(|mask| {
            let cuts: Vec<usize> = gaps.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &j)| j).collect();
            Subdivision::from_cuts(lo, hi, &cuts)
        })
        .collect();
    out.sort();
    out
}

pub fn enumerate_subdivisions(n: usize) -> Vec<Subdivision> {
    subdivisions_of(1, n)
}

/// A chain `[1..n] = σ0 < σ1 < … < σm`, the top element excluded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain {
    n: usize,
    members: Vec<Subdivision>,
}

impl Chain {
    pub fn new(n: usize, members: Vec<Subdivision>) -> Result<Self, LatticeError> {
        let bad = |m: &str| Err(LatticeError::Chain(m.into()));
        if n == 1 {
            return if members.is_empty() { Ok(Chain { n, members }) } else { bad("n = 1 has only the empty chain") };
        }
        if members.first() != Some(&Subdivision::whole(1, n)) {
            return bad("must start at [1..n]");
        }
        if members.iter().any(|m| m.is_finest() || m.lo() != 1 || m.hi() != n) {
            return bad("members must be proper subdivisions of [1..n]");
        }
        if !members.windows(2).all(|w| w[0].precedes(&w[1])) {
            return bad("each member must split every nondegenerate interval of its predecessor");
        }
        Ok(Chain { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Subdivision] {
        &self.members
    }

    /// Total number of nondegenerate intervals over all members.
    pub fn b_plus(&self) -> usize {
        self.members.iter().map(|m| m.nondegenerate().count()).sum()
    }
}

/// All chains from `[1..n]` to the top, in lexicographic order.
pub fn enumerate_chains(n: usize) -> Vec<Chain> {
    if n == 1 {
        return vec![Chain { n, members: vec![] }];
    }
    let all = enumerate_subdivisions(n);
    let mut out = Vec::new();
    let mut stack = vec![Subdivision::whole(1, n)];
    fn grow(all: &[Subdivision], n: usize, stack: &mut Vec<Subdivision>, out: &mut Vec<Chain>) {
        out.push(Chain { n, members: stack.clone() });
        let last = stack.last().unwrap().clone();
        for s in all {
            if !s.is_finest() && last.precedes(s) {
                stack.push(s.clone());
                grow(all, n, stack, out);
                stack.pop();
            }
        }
    }
    grow(&all, n, &mut stack, &mut out);
    out.sort();
    out
}

/// A generalized bracketing of `12…n`: a nested family of nondegenerate intervals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracketing {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Bracketing {
    pub fn new(n: usize, pairs: BTreeSet<(usize, usize)>) -> Result<Self, LatticeError> {
        for &(a, b) in &pairs {
            if !(1 <= a && a < b && b <= n) {
                return Err(LatticeError::Bracketing(format!("bad pair [{a}..{b}]")));
            }
        }
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                let disjoint = b < c || d < a;
                let nested = (a <= c && d <= b) || (c <= a && b <= d);
                if !(disjoint || nested) {
                    return Err(LatticeError::Bracketing(format!("[{a}..{b}] crosses [{c}..{d}]")));
                }
            }
        }
        Ok(Bracketing { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    /// Number of bracket pairs.
    pub fn b(&self) -> usize {
        self.pairs.len()
    }

    pub fn has_outer(&self) -> bool {
        self.n == 1 || self.pairs.contains(&(1, self.n))
    }

    pub fn without_outer(&self) -> Bracketing {
        let mut p = self.pairs.clone();
        p.remove(&(1, self.n));
        Bracketing { n: self.n, pairs: p }
    }

    pub fn with_outer(&self) -> Bracketing {
        let mut p = self.pairs.clone();
        if self.n > 1 {
            p.insert((1, self.n));
        }
        Bracketing { n: self.n, pairs: p }
    }

    /// Maximal brackets strictly inside `[a..b]`.
    fn children(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let inside: Vec<(usize, usize)> =
            self.pairs.iter().copied().filter(|&(c, d)| a <= c && d <= b && (c, d) != (a, b)).collect();
        inside
            .iter()
            .copied()
            .filter(|&(c, d)| !inside.iter().any(|&(e, f)| e <= c && d <= f && (e, f) != (c, d)))
            .collect()
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n > 9 { "," } else { "" };
        let mut out = String::new();
        for k in 1..=self.n {
            if k > 1 && !sep.is_empty() {
                out.push_str(sep);
            }
            for _ in self.pairs.iter().filter(|&&(a, _)| a == k) {
                out.push('[');
            }
            out.push_str(&k.to_string());
            for _ in self.pairs.iter().filter(|&&(_, b)| b == k) {
                out.push(']');
            }
        }
        write!(f, "{out}")
    }
}

impl FromStr for Bracketing {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| LatticeError::Bracketing(m.into());
        let mut open: Vec<usize> = Vec::new();
        let mut pending = 0usize;
        let mut pairs = BTreeSet::new();
        let mut pos = 0usize;
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                '[' => pending += 1,
                ']' => {
                    let a = open.pop().ok_or_else(|| bad("unbalanced ]"))?;
                    if a >= pos {
                        return Err(bad("degenerate bracket"));
                    }
                    pairs.insert((a, pos));
                }
                ',' | ' ' => {}
                c if c.is_ascii_digit() => {
                    let st = i;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() && chars.contains(&',') {
                        i += 1;
                    }
                    let k: usize = chars[st..=i].iter().collect::<String>().parse().map_err(|_| bad("bad letter"))?;
                    pos += 1;
                    if k != pos {
                        return Err(bad("letters must read 1, 2, …, n"));
                    }
                    for _ in 0..pending {
                        open.push(pos);
                    }
                    pending = 0;
                }
                _ => return Err(bad("unexpected character")),
            }
            i += 1;
        }
        if !open.is_empty() || pending > 0 {
            return Err(bad("unbalanced ["));
        }
        Bracketing::new(pos, pairs)
    }
}

pub fn chain_to_bracketing(c: &Chain) -> Bracketing {
    let pairs = c.members.iter().flat_map(|m| m.nondegenerate().collect::<Vec<_>>()).collect();
    Bracketing { n: c.n, pairs }
}

/// Inverse of [`chain_to_bracketing`]; needs the outer bracket.
pub fn bracketing_to_chain(b: &Bracketing) -> Result<Chain, LatticeError> {
    if b.n == 1 {
        return Chain::new(1, vec![]);
    }
    if !b.has_outer() {
        return Err(LatticeError::Bracketing("chains correspond to bracketings with outer brackets".into()));
    }
    let mut members = Vec::new();
    let mut level = Subdivision::whole(1, b.n);
    while !level.is_finest() {
        members.push(level.clone());
        let mut next = Vec::new();
        for &(a, bb) in level.intervals() {
            if a == bb {
                next.push((a, a));
                continue;
            }
            let kids = b.children(a, bb);
            let mut k = a;
            while k <= bb {
                if let Some(&(c, d)) = kids.iter().find(|&&(c, _)| c == k) {
                    next.push((c, d));
                    k = d + 1;
                } else {
                    next.push((k, k));
                    k += 1;
                }
            }
        }
        level = Subdivision::new(next)?;
    }
    Chain::new(b.n, members)
}

/// All bracketings of `12…n` with outer brackets.
pub fn enumerate_bracketings(n: usize) -> Vec<Bracketing> {
    let mut v: Vec<Bracketing> = enumerate_chains(n).iter().map(chain_to_bracketing).collect();
    v.sort();
    v
}

/// `c_1..c_{n_max}` from `(n+1)c_{n+1} = 3(2n-1)c_n - (n-2)c_{n-1}`.
pub fn schroeder_counts(n_max: usize) -> Vec<BigInt> {
    let mut c: Vec<BigInt> = vec![BigInt::one(), BigInt::one()];
    while c.len() < n_max {
        let n = c.len();
        let val = BigInt::from(3 * (2 * n - 1)) * &c[n - 1] - BigInt::from(n as i64 - 2) * &c[n - 2];
        c.push(val / BigInt::from(n + 1));
    }
    c.truncate(n_max);
    c
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn double_factorial_odd(m: i64) -> BigInt {
    // m!! for odd m >= -1, with (-1)!! = 1
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    factorial(n as usize) / (factorial(k as usize) * factorial((n - k) as usize))
}

/// Closed form from expanding the square root in the generating function
/// `(1 + t - sqrt(1 - 6t + t^2)) / 4`; valid for `n >= 2`.
pub fn schroeder_sqrt_form(n: usize) -> BigInt {
    if n == 1 {
        return BigInt::one();
    }
    let mut acc = BigRational::zero();
    for nu in 0..=n / 2 {
        let sign = if nu % 2 == 0 { 1 } else { -1 };
        let num = double_factorial_odd(2 * n as i64 - 2 * nu as i64 - 3) * BigInt::from(3).pow((n - 2 * nu) as u32);
        let den = factorial(nu) * factorial(n - 2 * nu) * BigInt::from(2).pow(nu as u32 + 2);
        acc += BigRational::new(num * sign, den);
    }
    acc.to_integer()
}

/// Closed form from Lagrange inversion.
pub fn schroeder_lagrange_form(n: usize) -> BigInt {
    let n = n as i64;
    let mut acc = BigRational::zero();
    for nu in 0..n {
        let sign = if (n - 1 - nu) % 2 == 0 { 1 } else { -1 };
        let t = BigRational::new(BigInt::from(2).pow(nu as u32) * binomial(2 * nu + 1, nu), BigInt::from(2 * nu + 1))
            * BigRational::from_integer(binomial(n + nu - 1, n - nu - 1));
        acc += t * BigRational::from_integer(BigInt::from(sign));
    }
    acc.to_integer()
}

/// Number of underdiagonal lattice paths with unit steps (1,0), (0,1), (1,1);
/// equals `2 c_n` for `n >= 2`.
pub fn underdiagonal_paths(n: usize) -> BigInt {
    let mut acc = BigRational::zero();
    for r in 0..n {
        let m = 2 * n - 1 - r;
        let multinom = factorial(m) / (factorial(r) * factorial(n - r) * factorial(n - r - 1));
        acc += BigRational::new(multinom, BigInt::from(m));
    }
    acc.to_integer()
}

/// Bracketings of `n` letters with outer brackets and exactly `k` pairs:
/// `(1/n) C(n+k-1, k) C(n-2, k-1)`.
pub fn c_nk(n: usize, k: usize) -> BigInt {
    if n == 1 {
        return if k == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let (n, k) = (n as i64, k as i64);
    binomial(n + k - 1, k) * binomial(n - 2, k - 1) / BigInt::from(n)
}

/// Coefficients of `P_n(z) = Σ_k c_{n,k} z^k`, index `k`.
pub fn catalan_schroeder_poly(n: usize) -> Vec<BigInt> {
    (0..n.max(1)).map(|k| c_nk(n, k)).collect()
}

pub fn c_n_exact(n: usize) -> u64 {
    schroeder_counts(n)[n - 1].to_u64().unwrap_or(u64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracketing_example_round_trips() {
        let s = |v: Vec<(usize, usize)>| Subdivision::new(v).unwrap();
        let c = Chain::new(
            5,
            vec![s(vec![(1, 5)]), s(vec![(1, 2), (3, 5)]), s(vec![(1, 1), (2, 2), (3, 4), (5, 5)])],
        )
        .unwrap();
        let b = chain_to_bracketing(&c);
        assert_eq!(b.to_string(), "[[12][[34]5]]");
        assert_eq!(bracketing_to_chain(&b).unwrap(), c);
        assert_eq!("[[12][[34]5]]".parse::<Bracketing>().unwrap(), b);
    }

    #[test]
    fn schroeder_small() {
        let c: Vec<u64> = schroeder_counts(6).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(c, vec![1, 1, 3, 11, 45, 197]);
    }
}
