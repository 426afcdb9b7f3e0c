//! Factored determinants and the elimination oracles that check them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{AlgebraError, Assignment, BoxFactor, EvalMode, GaussRat, Label, Mono, ParamVar, Poly, Rat};
use crate::fock::{words_of_weight, Weight};
use crate::gram::{build, build_degenerate, build_generic, embed_degenerate, GramError, GramMatrix};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetError {
    #[error("weight {0} is degenerate")]
    Degenerate(Weight),
    #[error("bounds violated: {0}")]
    Bounds(String),
    #[error("parameter {0} has modulus >= 1")]
    Modulus(ParamVar),
    #[error("positivity needs a hermitian or symmetric real point")]
    Mode,
    #[error("{0} is out of range for the grid certificate")]
    GridSize(usize),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A product `∏ (1 - m)^e` of box factors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DetFormula {
    factors: BTreeMap<BoxFactor, u32>,
}

impl DetFormula {
    pub fn one() -> Self {
        DetFormula::default()
    }

    pub fn new(factors: impl IntoIterator<Item = (BoxFactor, u32)>) -> Self {
        let mut f = DetFormula::one();
        for (b, e) in factors {
            f.push(b, e);
        }
        f
    }

    fn push(&mut self, b: BoxFactor, e: u32) {
        if e > 0 {
            *self.factors.entry(b).or_insert(0) += e;
        }
    }

    pub fn factors(&self) -> &BTreeMap<BoxFactor, u32> {
        &self.factors
    }

    /// Exponent of `□_μ` for a label set `μ`.
    pub fn exponent_of(&self, mu: &[Label]) -> u32 {
        BoxFactor::over_letters(mu).ok().and_then(|b| self.factors.get(&b).copied()).unwrap_or(0)
    }

    pub fn times(&self, o: &DetFormula) -> DetFormula {
        let mut out = self.clone();
        for (b, &e) in &o.factors {
            out.push(b.clone(), e);
        }
        out
    }

    pub fn expand(&self) -> Poly {
        self.factors.iter().map(|(b, &e)| b.poly().pow(e)).product()
    }

    pub fn one_param(&self) -> DetFormula {
        DetFormula::new(self.factors.iter().map(|(b, &e)| (b.one_param(), e)))
    }

    pub fn substitute(&self, f: &impl Fn(ParamVar) -> Mono) -> Result<DetFormula, AlgebraError> {
        let mut out = DetFormula::one();
        for (b, &e) in &self.factors {
            out.push(b.substitute(f)?, e);
        }
        Ok(out)
    }

    pub fn eval(&self, a: &Assignment) -> Result<GaussRat, AlgebraError> {
        let mut acc = GaussRat::one();
        for (b, &e) in &self.factors {
            acc *= crate::algebra::pow(&a.eval(&b.poly())?, e);
        }
        Ok(acc)
    }

    /// Sum of all exponents, the log₂ of a bound on the expanded
    /// coefficients.
    pub fn exponent_sum(&self) -> u32 {
        self.factors.values().sum()
    }

    pub fn degree_in(&self, v: ParamVar) -> u32 {
        self.factors.iter().map(|(b, &e)| b.mono().exponent(v) * e).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(b, &e)| b.mono().degree() * e).sum()
    }
}

impl fmt::Display for DetFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut fs: Vec<(&BoxFactor, u32)> = self.factors.iter().map(|(b, &e)| (b, e)).collect();
        fs.sort_by(|x, y| x.0.mono().degree().cmp(&y.0.mono().degree()).then(x.0.cmp(y.0)));
        let parts: Vec<String> = fs
            .iter()
            .map(|(b, e)| if *e == 1 { format!("(1-{})", b.mono()) } else { format!("(1-{})^{e}", b.mono()) })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn subsets_of_size(labels: &[Label], k: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << labels.len() {
        if mask.count_ones() as usize == k {
            out.push(labels.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &l)| l).collect());
        }
    }
    out
}

fn require_generic(nu: &Weight) -> Result<(), DetError> {
    if nu.is_generic() {
        Ok(())
    } else {
        Err(DetError::Degenerate(nu.clone()))
    }
}

/// `det A^(ν) = ∏_{μ ⊆ ν, |μ| ≥ 2} □_μ^{(|μ|−2)!(n−|μ|+1)!}`.
pub fn det_formula(nu: &Weight) -> Result<DetFormula, DetError> {
    require_generic(nu)?;
    let labels = nu.labels();
    let n = labels.len();
    let mut f = DetFormula::one();
    for k in 2..=n {
        let e = factorial(k - 2) * factorial(n - k + 1);
        for mu in subsets_of_size(&labels, k) {
            f.push(BoxFactor::over_letters(&mu)?, e as u32);
        }
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleVariant {
    /// `det(I − R̂(t_{a,b}))`, `a < b`.
    Plain,
    /// `det(I − Q_{{b,b+1}}·R̂(t_{a,b}))`, `b < n`.
    Boxed,
}

/// Determinant of one factor of `C^m` or `D^m`.
///
/// Each `t_{a,b}`-orbit of words contributes one box over the letters it
/// cycles (plus the letter at `b+1` when boxed). Counting orbits per label
/// set gives `(b−a)!(n+a−b−1)!` for the plain case and
/// `(b−a)!(b−a+2)(n+a−b−2)!` for the boxed one.
pub fn det_cycle_factor(nu: &Weight, a: usize, b: usize, variant: CycleVariant) -> Result<DetFormula, DetError> {
    require_generic(nu)?;
    let labels = nu.labels();
    let n = labels.len();
    let (k, e) = match variant {
        CycleVariant::Plain if 1 <= a && a < b && b <= n => (b - a + 1, factorial(b - a) * factorial(n + a - b - 1)),
        CycleVariant::Boxed if 1 <= a && a <= b && b < n => {
            (b - a + 2, factorial(b - a) * (b - a + 2) as u64 * factorial(n + a - b - 2))
        }
        _ => return Err(DetError::Bounds(format!("{variant:?} factor t_{{{a},{b}}} for n = {n}"))),
    };
    let mut f = DetFormula::one();
    for mu in subsets_of_size(&labels, k) {
        f.push(BoxFactor::over_letters(&mu)?, e as u32);
    }
    Ok(f)
}

/// `det A^m = ∏_{μ ⊆ ν, 2 ≤ |μ| ≤ m} □_μ^{(|μ|−2)!(n−|μ|)!}`.
pub fn det_level(nu: &Weight, m: usize) -> Result<DetFormula, DetError> {
    require_generic(nu)?;
    let labels = nu.labels();
    let n = labels.len();
    if m == 0 || m > n {
        return Err(DetError::Bounds(format!("level {m} for n = {n}")));
    }
    let mut f = DetFormula::one();
    for k in 2..=m {
        let e = factorial(k - 2) * factorial(n - k);
        for mu in subsets_of_size(&labels, k) {
            f.push(BoxFactor::over_letters(&mu)?, e as u32);
        }
    }
    Ok(f)
}

/// `det A_n(q) = ∏_{k=2}^n (1 − q^{k(k−1)})^{n!(n−k+1)/(k(k−1))}`.
pub fn det_one_param(n: usize) -> DetFormula {
    let mut f = DetFormula::one();
    for k in 2..=n {
        let e = factorial(n) * (n - k + 1) as u64 / (k * (k - 1)) as u64;
        f.push(BoxFactor::new(Mono::q_pow((k * (k - 1)) as u32)).expect("positive power"), e as u32);
    }
    f
}

/// Rings with exact division, as fraction-free elimination needs.
pub trait ExactDiv: crate::algebra::Ring {
    fn div_exact(&self, o: &Self) -> Self;
}

impl ExactDiv for Poly {
    fn div_exact(&self, o: &Self) -> Self {
        self.exact_div(o).expect("Bareiss quotients are exact")
    }
}

pub type GaussInt = Complex<BigInt>;

impl ExactDiv for GaussInt {
    fn div_exact(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        let t = self * o.conj();
        let (re, r1) = t.re.div_rem(&n);
        let (im, r2) = t.im.div_rem(&n);
        assert!(r1.is_zero() && r2.is_zero(), "Bareiss quotients are exact");
        Complex::new(re, im)
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, o: &Self) -> Self {
        let (q, r) = self.div_rem(o);
        assert!(r.is_zero(), "Bareiss quotients are exact");
        q
    }
}

/// Fraction-free Gaussian elimination.
pub fn bareiss<T: ExactDiv>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return T::zero(),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        bottom.par_iter_mut().for_each(|row| {
            for j in k + 1..n {
                let t = pivot_row[k].times(&row[j]).minus(&row[k].times(&pivot_row[j]));
                row[j] = t.div_exact(&prev);
            }
            row[k] = T::zero();
        });
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.negate()
    } else {
        d
    }
}

/// Symbolic determinant of a polynomial matrix.
pub fn brute_det(m: &GramMatrix<Poly>) -> Poly {
    det_poly(m.rows().to_vec())
}

/// Symbolic determinant, by minor expansion up to size 14 and Bareiss above.
pub fn det_poly(rows: Vec<Vec<Poly>>) -> Poly {
    if rows.len() <= 14 {
        subset_det(&rows)
    } else {
        bareiss(rows)
    }
}

/// Row-by-row expansion over sets of used columns: `2^N·N` products of an
/// entry with a minor. Much faster than elimination for small matrices of
/// sparse entries, where Bareiss quotients blow up.
fn subset_det(m: &[Vec<Poly>]) -> Poly {
    let mut layer: HashMap<u32, Poly> = HashMap::from([(0, Poly::one())]);
    for row in m {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (&used, minor) in &layer {
            for (j, a) in row.iter().enumerate() {
                if used >> j & 1 == 1 || a.is_zero() {
                    continue;
                }
                let t = minor * a;
                let t = if (used >> (j + 1)).count_ones() % 2 == 1 { -t } else { t };
                let acc = next.entry(used | 1 << j).or_insert_with(Poly::zero);
                for (mono, c) in t.terms() {
                    acc.add_term(mono.clone(), c.clone());
                }
            }
        }
        layer = next;
    }
    layer.into_values().next().unwrap_or_else(Poly::zero)
}

/// Exact determinant over the Gaussian rationals (row reduction with
/// inverses).
pub fn det_gauss_rat(rows: &[Vec<GaussRat>]) -> GaussRat {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = GaussRat::one();
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return GaussRat::zero();
        };
        if r != k {
            m.swap(k, r);
            det = -det;
        }
        let inv = GaussRat::one() / &m[k][k];
        det *= &m[k][k];
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot = &top[k];
        bottom.par_iter_mut().for_each(|row| {
            if row[k].is_zero() {
                return;
            }
            let f = &row[k] * &inv;
            for j in k + 1..n {
                row[j] = &row[j] - &(&f * &pivot[j]);
            }
        });
    }
    det
}

/// Exact `det A^(ν)` at a point, by clearing denominators and running
/// Bareiss over the Gaussian integers.
pub fn det_at_point(a: &GramMatrix<Poly>, point: &Assignment) -> Result<GaussRat, DetError> {
    let vals = a.eval(point)?;
    let mut lcm = BigInt::one();
    for r in vals.rows() {
        for x in r {
            lcm = lcm.lcm(x.re.denom()).lcm(x.im.denom());
        }
    }
    let scale = Rat::from_integer(lcm.clone());
    let ints: Vec<Vec<GaussInt>> = vals
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| Complex::new((&x.re * &scale).to_integer(), (&x.im * &scale).to_integer()))
                .collect()
        })
        .collect();
    let d = bareiss(ints);
    let denom = Rat::from_integer(num_traits::pow(lcm, a.size()));
    Ok(Complex::new(Rat::from_integer(d.re) / &denom, Rat::from_integer(d.im) / &denom))
}

/// Outcome of a floating-point eigenvalue check.
#[derive(Clone, Debug, PartialEq)]
pub struct Positivity {
    pub min_eigenvalue: f64,
    pub positive: bool,
}

fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Smallest eigenvalue of `A^(ν)` at a hermitian point with all
/// `|q_ij| < 1`; positive means above `tol`.
pub fn positivity_check(nu: &Weight, point: &Assignment, tol: f64) -> Result<Positivity, DetError> {
    if point.mode() == EvalMode::OneParam {
        let q = point.get(ParamVar::Q)?;
        if q.norm_sqr() >= Rat::one() {
            return Err(DetError::Modulus(ParamVar::Q));
        }
    } else {
        for (&v, x) in point.values() {
            if x.norm_sqr() >= Rat::one() {
                return Err(DetError::Modulus(v));
            }
        }
    }
    let a = build(nu)?.eval(point)?;
    let n = a.size();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let x = a.get(i, j);
        Complex::new(to_f64(&x.re), to_f64(&x.im))
    });
    let min = m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Positivity { min_eigenvalue: min, positive: min > tol })
}

/// `Φ_d(q)` up to sign (`Φ_1 = 1 − q`).
pub fn cyclotomic(d: u32) -> Poly {
    let mut p = Poly::one_minus(&Mono::q_pow(d));
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        p = p.exact_div(&cyclotomic(e)).expect("Φ_e divides 1 − q^d for e | d");
    }
    p
}

/// Largest `k` with `p^k | f`, and the cofactor.
pub fn multiplicity(f: &Poly, p: &Poly) -> (u32, Poly) {
    let mut k = 0;
    let mut rest = f.clone();
    while let Ok(q) = rest.exact_div(p) {
        rest = q;
        k += 1;
    }
    (k, rest)
}

/// Irreducible factors of `1 − m`: with `m = m₀^k` and `m₀` not a proper
/// power, `1 − m = ±∏_{d | k} Φ_d(m₀)`.
pub fn box_pieces(m: &Mono) -> Vec<Poly> {
    let k = m.terms().iter().fold(0, |g, &(_, e)| g.gcd(&e));
    let m0 = Mono::from_pairs(m.terms().iter().map(|&(v, e)| (v, e / k)));
    (1..=k)
        .filter(|d| k % d == 0)
        .map(|d| {
            let c = cyclotomic(d);
            Poly::from_terms(c.terms().map(|(t, c)| (m0.pow(t.exponent(ParamVar::Q)), c.clone())))
        })
        .collect()
}

/// Does `det A^(ν)` divide `det Ã` (with `x_ab ↦ x_{φ(a)φ(b)}`) exactly?
///
/// Each substituted box splits into irreducible cyclotomic pieces; dividing
/// them out one at a time must leave a unit.
pub fn det_divides(nu: &Weight) -> Result<bool, DetError> {
    if nu.is_generic() {
        return Ok(true);
    }
    let mut rest = brute_det(&build_degenerate(nu)?);
    let e = embed_degenerate(nu);
    let sub = e.substitution();
    let mut pieces: Vec<(Poly, u32)> = Vec::new();
    for (b, &k) in det_formula(e.model())?.substitute(&sub)?.factors() {
        for p in box_pieces(b.mono()) {
            match pieces.iter_mut().find(|(x, _)| *x == p) {
                Some((_, e)) => *e += k,
                None => pieces.push((p, k)),
            }
        }
    }
    for (p, k) in &pieces {
        for _ in 0..*k {
            match rest.exact_div(p) {
                Ok(q) => rest = q,
                Err(_) => break,
            }
        }
    }
    Ok(rest == Poly::one() || rest == Poly::constant(-1))
}

/// `D_i A_{ij} = B_{ij} D_j` with `D_i = ∏ x_{ab}` over label pairs
/// `a < b` that appear as `b … a` in `i`, and `B_{ij}` a monomial in the
/// symmetric products `p_{ab} = x_{ab}x_{ba}`: `det A = det B`.
///
/// Returns `B` as the list of pair indices (into `pairs`) per entry, after
/// checking the identity entrywise.
pub struct Similarity {
    pub pairs: Vec<(Label, Label)>,
    pub entries: Vec<Vec<Vec<usize>>>,
}

pub fn similarity(n: usize) -> Result<Similarity, DetError> {
    let a = build_generic(&Weight::generic(n))?;
    let words = a.basis().words();
    let pairs: Vec<(Label, Label)> =
        (1..=n as Label).flat_map(|x| (x + 1..=n as Label).map(move |y| (x, y))).collect();
    let pos = |w: &[Label], l: Label| w.iter().position(|&c| c == l).expect("generic word");
    let d: Vec<Mono> = words
        .iter()
        .map(|w| {
            pairs.iter().filter(|&&(x, y)| pos(w, y) < pos(w, x)).fold(Mono::one(), |m, &(x, y)| m.mul(&Mono::pair(x, y)))
        })
        .collect();
    let p_mono = |k: usize| {
        let (x, y) = pairs[k];
        Mono::pair(x, y).mul(&Mono::pair(y, x))
    };
    let mut entries = Vec::with_capacity(words.len());
    for (i, wi) in words.iter().enumerate() {
        let mut row = Vec::with_capacity(words.len());
        for (j, wj) in words.iter().enumerate() {
            let lhs = Poly::mono(d[i].clone()) * a.get(i, j).clone();
            let idx: Vec<usize> = (0..pairs.len())
                .filter(|&k| {
                    let (x, y) = pairs[k];
                    pos(wi, y) < pos(wi, x) && pos(wj, x) < pos(wj, y)
                })
                .collect();
            let b = idx.iter().fold(Mono::one(), |m, &k| m.mul(&p_mono(k)));
            if lhs != Poly::mono(b.mul(&d[j])) {
                return Err(DetError::Bounds(format!("similarity fails at ({i}, {j})")));
            }
            row.push(idx);
        }
        entries.push(row);
    }
    Ok(Similarity { pairs, entries })
}

/// A prime `p = 2³¹ − c` with shift-and-add reduction.
#[derive(Clone, Copy, Debug)]
pub struct Prime31 {
    p: u64,
    c: u64,
}

impl Prime31 {
    pub const LIST: [Prime31; 3] = [Prime31 { p: (1 << 31) - 1, c: 1 }, Prime31 { p: (1 << 31) - 19, c: 19 }, Prime31 {
        p: (1 << 31) - 61,
        c: 61,
    }];

    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        // x < 2^62: two folds bring it below 2p
        let x = (x & 0x7fff_ffff) + self.c * (x >> 31);
        let x = (x & 0x7fff_ffff) + self.c * (x >> 31);
        if x >= self.p {
            x - self.p
        } else {
            x
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    pub fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Determinant by elimination; destroys `m`.
    pub fn det(self, m: &mut [Vec<u64>]) -> u64 {
        let n = m.len();
        let mut det = 1;
        for k in 0..n {
            let Some(r) = (k..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            if r != k {
                m.swap(k, r);
                det = self.p - det;
            }
            det = self.mul(det, m[k][k]);
            let inv = self.inv(m[k][k]);
            let (top, bottom) = m.split_at_mut(k + 1);
            let pivot = &top[k];
            for row in bottom {
                if row[k] == 0 {
                    continue;
                }
                let f = self.p - self.mul(row[k], inv);
                for j in k + 1..n {
                    row[j] = self.reduce(row[j] + self.mul(f, pivot[j]));
                }
            }
        }
        if det == self.p {
            0
        } else {
            det
        }
    }
}

impl Prime31 {
    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(self, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let n = m.len();
        let mut a: Vec<Vec<u64>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r: Vec<u64> = row.iter().map(|&x| x % self.p).collect();
                r.extend((0..n).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        for k in 0..n {
            let r = (k..n).find(|&r| a[r][k] != 0)?;
            a.swap(k, r);
            let inv = self.inv(a[k][k]);
            for x in a[k].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot = a[k].clone();
            a.par_iter_mut().enumerate().filter(|(i, row)| *i != k && row[k] != 0).for_each(|(_, row)| {
                let f = self.p - row[k];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = self.reduce(*x + self.mul(f, y));
                }
            });
        }
        Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Summary of the modular grid certificate for `det A^{1..n} = det_formula`.
#[derive(Clone, Debug)]
pub struct GridReport {
    pub n: usize,
    pub degree_bound: u32,
    pub grid_points: u64,
    pub orbit_representatives: u64,
    pub coefficient_bound_bits: u64,
    pub modulus_bits: u64,
    pub mismatches: u64,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.coefficient_bound_bits + 1 < self.modulus_bits
    }
}

/// Certifies `det A^{1..n} = det_formula` as a polynomial identity.
///
/// Through `similarity`, both sides are polynomials in the `p_ab` of
/// degree at most `d` in each variable, with integer coefficients bounded
/// by `N! + 2^{Σe}`. Their difference is symmetric under relabeling (both
/// `det A` and the formula are), so it vanishes on the grid `{0..d}^pairs`
/// once it vanishes on one point per orbit. Vanishing on the grid modulo a
/// prime forces every coefficient to be divisible by that prime; three
/// primes exceed twice the coefficient bound.
pub fn grid_certificate(n: usize) -> Result<GridReport, DetError> {
    if !(2..=4).contains(&n) {
        return Err(DetError::GridSize(n));
    }
    let sim = similarity(n)?;
    let formula = det_formula(&Weight::generic(n))?;
    let np = sim.pairs.len();
    // degree in p_k is at most the number of rows where it appears
    let deg_b = (0..np).map(|k| sim.entries.iter().filter(|r| r.iter().any(|e| e.contains(&k))).count() as u32).max().unwrap_or(0);
    let deg_f = sim.pairs.iter().map(|&(x, y)| formula.degree_in(ParamVar::Pair(x, y))).max().unwrap_or(0);
    let d = deg_b.max(deg_f);
    let size = sim.entries.len();
    let fact: BigInt = (1..=size as u64).map(BigInt::from).product();
    let bound = fact + (BigInt::one() << formula.exponent_sum() as usize);
    let modulus: BigInt = Prime31::LIST.iter().map(|p| BigInt::from(p.modulus())).product();
    assert!(Prime31::LIST.iter().all(|p| is_prime(p.modulus())));

    // formula factors as lists of pair indices
    let pair_index = |x: Label, y: Label| sim.pairs.iter().position(|&p| p == (x.min(y), x.max(y))).expect("pair");
    let factors: Vec<(Vec<usize>, u64)> = formula
        .factors()
        .iter()
        .map(|(b, &e)| {
            let labels = b.label_set().expect("canonical box");
            let mut idx = Vec::new();
            for (s, &x) in labels.iter().enumerate() {
                for &y in &labels[s + 1..] {
                    idx.push(pair_index(x, y));
                }
            }
            (idx, e as u64)
        })
        .collect();

    // relabelings act on pair indices
    let perm_actions: Vec<Vec<usize>> = Perm::all(n)
        .iter()
        .map(|t| sim.pairs.iter().map(|&(x, y)| pair_index(t.at(x as usize) as Label, t.at(y as usize) as Label)).collect())
        .collect();
    let base = d as u64 + 1;
    let total = base.pow(np as u32);
    let decode = |mut code: u64| {
        let mut v = vec![0u64; np];
        for x in v.iter_mut() {
            *x = code % base;
            code /= base;
        }
        v
    };
    let reps: Vec<Vec<u64>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let v = decode(code);
            let minimal = perm_actions.iter().all(|act| {
                let mut w = vec![0u64; np];
                for k in 0..np {
                    w[act[k]] = v[k];
                }
                // compare as base-(d+1) numbers, least significant first
                w.iter().rev().cmp(v.iter().rev()) != std::cmp::Ordering::Less
            });
            minimal.then_some(v)
        })
        .collect();

    let mismatches: u64 = reps
        .par_iter()
        .map(|v| {
            let mut bad = 0;
            for &pr in &Prime31::LIST {
                let mut m: Vec<Vec<u64>> = sim
                    .entries
                    .iter()
                    .map(|r| r.iter().map(|e| e.iter().fold(1, |acc, &k| pr.mul(acc, v[k]))).collect())
                    .collect();
                let lhs = pr.det(&mut m);
                let rhs = factors.iter().fold(1, |acc, (idx, e)| {
                    let prod = idx.iter().fold(1, |a, &k| pr.mul(a, v[k]));
                    pr.mul(acc, pr.pow((1 + pr.modulus() - prod) % pr.modulus(), *e))
                });
                if lhs != rhs {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    Ok(GridReport {
        n,
        degree_bound: d,
        grid_points: total,
        orbit_representatives: reps.len() as u64,
        coefficient_bound_bits: bound.bits(),
        modulus_bits: modulus.bits() - 1,
        mismatches,
    })
}

/// All weights of size `n` over labels `1..=n` that are degenerate.
pub fn degenerate_weights(n: usize) -> Vec<Weight> {
    let mut out = Vec::new();
    fn rec(n: usize, label: Label, left: usize, cur: &mut Vec<(Label, usize)>, out: &mut Vec<Weight>) {
        if left == 0 {
            let w = Weight::from_multiplicities(cur.iter().copied());
            if !w.is_generic() {
                out.push(w);
            }
            return;
        }
        if label as usize > n {
            return;
        }
        for k in (0..=left).rev() {
            cur.push((label, k));
            rec(n, label + 1, left - k, cur, out);
            cur.pop();
        }
    }
    rec(n, 1, n, &mut Vec::new(), &mut out);
    out.retain(|w| !words_of_weight(w).is_empty());
    out
}

/// `|q|`-bounded random hermitian point: each `q_ij` (`i ≤ j`) is a
/// Gaussian rational of modulus at most `r` (real on the diagonal).
pub fn random_hermitian_point(labels: &[Label], r: f64, rng: &mut impl rand::Rng) -> Assignment {
    let den = 1000i64;
    let mut vals = Vec::new();
    for (s, &i) in labels.iter().enumerate() {
        for &j in &labels[s..] {
            let x = loop {
                let re = rng.gen_range(-den..=den);
                let im = if i == j { 0 } else { rng.gen_range(-den..=den) };
                if ((re * re + im * im) as f64).sqrt() <= r * den as f64 {
                    break Complex::new(Rat::new(re.into(), den.into()), Rat::new(im.into(), den.into()));
                }
            };
            vals.push(((i, j), x));
        }
    }
    Assignment::hermitian(vals).expect("constructed hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_symbolic() {
        let nu = Weight::generic(3);
        assert_eq!(brute_det(&build_generic(&nu).unwrap()), det_formula(&nu).unwrap().expand());
        assert_eq!(det_one_param(3).to_string(), "(1-q^2)^6 * (1-q^6)");
        assert_eq!(det_formula(&nu).unwrap().one_param(), det_one_param(3));
    }

    #[test]
    fn modular_det_small() {
        let p = Prime31::LIST[1];
        let mut m = vec![vec![2, 3], vec![5, 7]];
        assert_eq!(p.det(&mut m), p.modulus() - 1);
        assert_eq!(p.mul(p.modulus() - 1, p.modulus() - 1), 1);
    }

    #[test]
    fn grid_n3() {
        let r = grid_certificate(3).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}
