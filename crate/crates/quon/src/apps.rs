//! The quantum bilinear form of the discriminant arrangement and the
//! contravariant form of a quantum group on weight `(1, …, 1)`, both as
//! specializations of the generic Gram matrix `A^{12⋯n}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{BoxFactor, Label, Mono, ParamVar, Poly};
use crate::det::{bareiss, det_formula, DetError, DetFormula, Prime31};
use crate::fock::{Weight, Word};
use crate::gram::{build_generic, Basis, GramError, GramMatrix};
use crate::perm::Perm;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("matrix of bilinear data must be square and symmetric of size {0}")]
    NotSymmetric(usize),
    #[error("size {0} out of range ({1})")]
    Size(usize, &'static str),
    #[error("invalid bilinear data: {0}")]
    Json(String),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Det(#[from] DetError),
}

// ---------------------------------------------------------------------------
// discriminant arrangement

/// `q_ab` with `a < b`: the weight of the hyperplane `x_a = x_b`.
pub fn hyperplane_weight(a: Label, b: Label) -> Mono {
    Mono::pair(a.min(b), a.max(b))
}

/// Real-symmetric specialization `q_ji ↦ q_ij` (`i < j`).
pub fn symmetrize(p: &Poly) -> Poly {
    p.substitute(&|v| match v {
        ParamVar::Pair(i, j) => hyperplane_weight(i, j),
        other => Mono::var(other),
    })
}

/// The domains `P_π` of the arrangement in the order of the generic basis:
/// `P_π` is matched with the word `π(1)π(2)⋯π(n)`.
pub fn domains(n: usize) -> Vec<Perm> {
    Basis::generic(n)
        .words()
        .iter()
        .map(|w| Perm::from_images(w.clone()).expect("generic word"))
        .collect()
}

/// `B_n(P_π, P_τ) = ∏_{(a,b) ∈ I(π⁻¹) △ I(τ⁻¹)} q_ab`.
pub fn varchenko_entry(pi: &Perm, tau: &Perm) -> Mono {
    let a = pi.inverse().inversion_set();
    let b = tau.inverse().inversion_set();
    a.iter()
        .filter(|x| !b.contains(x))
        .chain(b.iter().filter(|x| !a.contains(x)))
        .fold(Mono::one(), |m, &(x, y)| m.mul(&hyperplane_weight(x as Label, y as Label)))
}

pub fn varchenko_matrix(n: usize) -> Result<GramMatrix<Poly>, AppError> {
    if n == 0 {
        return Err(AppError::Size(n, "arrangements need n ≥ 1"));
    }
    let ds = domains(n);
    let rows = ds.par_iter().map(|p| ds.iter().map(|t| Poly::mono(varchenko_entry(p, t))).collect()).collect();
    Ok(GramMatrix::new(Basis::generic(n), rows)?)
}

/// Does the arrangement form equal the real-symmetric specialization of `A^{12⋯n}`?
pub fn varchenko_matches_gram(n: usize) -> Result<bool, AppError> {
    let b = varchenko_matrix(n)?;
    let a = build_generic(&Weight::generic(n))?.map(symmetrize);
    Ok(a.rows() == b.rows())
}

/// An edge of the arrangement: the flat cut out by `x_a = x_b` for `a, b`
/// in a common block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Blocks with at least two coordinates.
    pub blocks: Vec<Vec<Label>>,
    /// Product of the weights of the hyperplanes containing the edge.
    pub weight: Mono,
    /// `(k−2)!(n−k+1)!` for a single block of size `k`, zero otherwise.
    pub multiplicity: u64,
}

impl Edge {
    /// Lies in a `k`-equal arrangement.
    pub fn is_k_equal(&self) -> bool {
        self.blocks.len() == 1
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<Label>>> {
    let mut out: Vec<Vec<Vec<Label>>> = vec![vec![]];
    for x in 1..=n as Label {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..p.len() {
                let mut q = p.clone();
                q[k].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

/// All proper edges (every flat except the ambient space), `k`-equal ones first.
pub fn edges(n: usize) -> Vec<Edge> {
    let mut out: Vec<Edge> = set_partitions(n)
        .into_iter()
        .filter_map(|p| {
            let blocks: Vec<Vec<Label>> = p.into_iter().filter(|b| b.len() >= 2).collect();
            if blocks.is_empty() {
                return None;
            }
            let mut weight = Mono::one();
            for b in &blocks {
                for (x, &i) in b.iter().enumerate() {
                    for &j in &b[x + 1..] {
                        weight = weight.mul(&hyperplane_weight(i, j));
                    }
                }
            }
            let multiplicity = match blocks.as_slice() {
                [b] => factorial(b.len() - 2) * factorial(n - b.len() + 1),
                _ => 0,
            };
            Some(Edge { blocks, weight, multiplicity })
        })
        .collect();
    out.sort_by(|x, y| {
        (x.blocks.len(), x.blocks.iter().map(Vec::len).sum::<usize>(), &x.blocks)
            .cmp(&(y.blocks.len(), y.blocks.iter().map(Vec::len).sum::<usize>(), &y.blocks))
    });
    out
}

/// `det B_n = ∏_{L ∈ E′} (1 − a(L)²)^{l(L)}`.
pub fn varchenko_det(n: usize) -> DetFormula {
    DetFormula::new(edges(n).into_iter().filter(Edge::is_k_equal).map(|e| {
        (BoxFactor::new(e.weight.pow(2)).expect("nonempty edge"), e.multiplicity as u32)
    }))
}

/// The factored determinant equals the elimination determinant of the
/// matrix, exactly for `n ≤ 3`.
pub fn check_varchenko_det(n: usize) -> Result<bool, AppError> {
    if n > 3 {
        return Err(AppError::Size(n, "exact elimination is run for n ≤ 3"));
    }
    let m = varchenko_matrix(n)?;
    Ok(bareiss(m.into_rows()) == varchenko_det(n).expand())
}

/// Randomized identity test of `det B_n = varchenko_det(n)`: both sides at
/// `points` seeded random points modulo each of three 31-bit primes. A
/// nonzero difference of total degree `D` survives one point with
/// probability at most `D/p`.
pub fn check_varchenko_det_modular(n: usize, points: usize, seed: u64) -> Result<bool, AppError> {
    let m = varchenko_matrix(n)?;
    let f = varchenko_det(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for pr in Prime31::LIST {
        let md = pr.modulus();
        for _ in 0..points {
            let vals: BTreeMap<ParamVar, u64> = (1..=n as Label)
                .flat_map(|a| (a + 1..=n as Label).map(move |b| ParamVar::Pair(a, b)))
                .map(|v| (v, rng.gen_range(1..md)))
                .collect();
            let val = |v: ParamVar| vals.get(&v).copied().unwrap_or(0);
            let mut ev: Vec<Vec<u64>> = m.rows().iter().map(|r| r.iter().map(|x| x.eval_mod(md, &val)).collect()).collect();
            let lhs = pr.det(&mut ev);
            let rhs = f.factors().iter().fold(1u64, |acc, (b, &e)| {
                let x = (1 + md - Poly::mono(b.mono().clone()).eval_mod(md, &val)) % md;
                pr.mul(acc, pr.pow(x, e as u64))
            });
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The factors of `varchenko_det` are the symmetric specializations of the
/// determinant factors of `A^{12⋯n}`, exponent by exponent.
pub fn check_varchenko_exponents(n: usize) -> Result<bool, AppError> {
    let f = det_formula(&Weight::generic(n))?;
    let sym: BTreeMap<BoxFactor, u32> = f
        .factors()
        .iter()
        .map(|(b, &e)| (BoxFactor::new(symmetrize(&b.poly()).as_one_minus().expect("box")).expect("box"), e))
        .collect();
    Ok(&sym == varchenko_det(n).factors())
}

// ---------------------------------------------------------------------------
// contravariant form

/// Symmetric integer matrix `b_ij = (α_i, α_j)`, 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BilinearData {
    pub b: Vec<Vec<i64>>,
}

impl BilinearData {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self, AppError> {
        let n = b.len();
        let ok = b.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..n).all(|j| b[i][j] == b[j][i]));
        if !ok {
            return Err(AppError::NotSymmetric(n));
        }
        Ok(BilinearData { b })
    }

    /// Parses `{"b": [[...], ...]}`.
    pub fn from_json(s: &str) -> Result<Self, AppError> {
        let d: BilinearData = serde_json::from_str(s).map_err(|e| AppError::Json(e.to_string()))?;
        BilinearData::new(d.b)
    }

    pub fn constant(n: usize, c: i64) -> Self {
        BilinearData { b: vec![vec![c; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn get(&self, i: Label, j: Label) -> i64 {
        self.b[i as usize - 1][j as usize - 1]
    }
}

/// Laurent monomial in the formal variables `u_ab = q^{b_ab/4}`, `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentMono(BTreeMap<(Label, Label), i64>);

impl LaurentMono {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn u(i: Label, j: Label, e: i64) -> Self {
        let mut m = Self::one();
        m.mul_assign_u(i, j, e);
        m
    }

    fn mul_assign_u(&mut self, i: Label, j: Label, e: i64) {
        let k = (i.min(j), i.max(j));
        let x = self.0.entry(k).or_insert(0);
        *x += e;
        if *x == 0 {
            self.0.remove(&k);
        }
    }

    pub fn mul(&self, o: &LaurentMono) -> LaurentMono {
        let mut m = self.clone();
        for (&(i, j), &e) in &o.0 {
            m.mul_assign_u(i, j, e);
        }
        m
    }

    pub fn exponents(&self) -> &BTreeMap<(Label, Label), i64> {
        &self.0
    }

    /// `u_ab ↦ t^{b_ab}` with `t = q^{1/4}`: the exponent of `t`.
    pub fn specialize(&self, b: &BilinearData) -> i64 {
        self.0.iter().map(|(&(i, j), &e)| e * b.get(i, j)).sum()
    }

    /// Rewrites `∏ u_ab^{2e}` as `∏ q_ab^e`; `None` for odd or negative exponents.
    pub fn to_q(&self) -> Option<Mono> {
        let mut m = Mono::one();
        for (&(i, j), &e) in &self.0 {
            if e < 0 || e % 2 != 0 {
                return None;
            }
            m = m.mul(&Mono::pair(i, j).pow((e / 2) as u32));
        }
        Some(m)
    }
}

impl fmt::Display for LaurentMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(i, j), &e)| if e == 1 { format!("u{i}{j}") } else { format!("u{i}{j}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `g_i(f_J)` on a multiplicity-free word: the coefficient and the word
/// with `i` removed, or `None` when `i` does not occur.
pub fn g_op(i: Label, j: &[Label]) -> Option<(LaurentMono, Word)> {
    let p = j.iter().position(|&x| x == i)?;
    let mut m = LaurentMono::one();
    for (l, &x) in j.iter().enumerate() {
        if l != p {
            m.mul_assign_u(i, x, if l < p { 1 } else { -1 });
        }
    }
    let mut rest = j.to_vec();
    rest.remove(p);
    Some((m, rest))
}

/// `S(f_I, f_J)` from `S(1,1) = 1` and `S(f_i x, y) = S(x, g_i y)`.
pub fn contravariant_entry(i: &[Label], j: &[Label]) -> Option<LaurentMono> {
    let mut acc = LaurentMono::one();
    let mut y = j.to_vec();
    for &x in i {
        let (m, rest) = g_op(x, &y)?;
        acc = acc.mul(&m);
        y = rest;
    }
    y.is_empty().then_some(acc)
}

/// `S(f_I, f_J) = q^{Σ_{k<l} ±b_{i_k i_l}/4}` with `+` when the letters
/// `i_k, i_l` occur in `J` in the opposite order.
pub fn contravariant_closed_entry(i: &[Label], j: &[Label]) -> LaurentMono {
    let pos = |x: Label| j.iter().position(|&y| y == x).expect("same letters");
    let mut m = LaurentMono::one();
    for k in 0..i.len() {
        for l in k + 1..i.len() {
            let flipped = pos(i[k]) > pos(i[l]);
            m.mul_assign_u(i[k], i[l], if flipped { 1 } else { -1 });
        }
    }
    m
}

/// The closed entry with the sign read off `σ` rather than `σ⁻¹`, where
/// `j_p = i_{σ(p)}`.
pub fn contravariant_closed_entry_sigma(i: &[Label], j: &[Label]) -> LaurentMono {
    let n = i.len();
    let sigma: Vec<usize> = (0..n).map(|p| i.iter().position(|&x| x == j[p]).expect("same letters")).collect();
    let mut m = LaurentMono::one();
    for k in 0..n {
        for l in k + 1..n {
            m.mul_assign_u(i[k], i[l], if sigma[k] > sigma[l] { 1 } else { -1 });
        }
    }
    m
}

/// Matrix of `S` on `(U_q n₋)_{(1,…,1)}` in the generic basis order, from the
/// `g_i` operators.
pub fn contravariant_matrix(n: usize) -> Result<Vec<Vec<LaurentMono>>, AppError> {
    if n == 0 || n > 6 {
        return Err(AppError::Size(n, "contravariant matrices are built for 1 ≤ n ≤ 6"));
    }
    let basis = Basis::generic(n);
    let ws = basis.words();
    Ok(ws
        .par_iter()
        .map(|i| ws.iter().map(|j| contravariant_entry(i, j).expect("same weight")).collect())
        .collect())
}

pub fn contravariant_closed_matrix(n: usize) -> Vec<Vec<LaurentMono>> {
    let ws = Basis::generic(n).words().to_vec();
    ws.iter().map(|i| ws.iter().map(|j| contravariant_closed_entry(i, j)).collect()).collect()
}

/// `q^{−¼Σ_{k<l} b_kl} = ∏_{k<l} u_kl^{−1}`.
pub fn contravariant_prefactor(n: usize) -> LaurentMono {
    let mut m = LaurentMono::one();
    for k in 1..=n as Label {
        for l in k + 1..=n as Label {
            m.mul_assign_u(k, l, -1);
        }
    }
    m
}

/// After removing the prefactor, `S` is `A^{12⋯n}` under `q_ij = q_ji = u_ij² = q^{b_ij/2}`.
pub fn contravariant_matches_gram(n: usize) -> Result<bool, AppError> {
    let s = contravariant_matrix(n)?;
    let a = build_generic(&Weight::generic(n))?.map(symmetrize);
    let inv = {
        let p = contravariant_prefactor(n);
        LaurentMono(p.0.iter().map(|(&k, &e)| (k, -e)).collect())
    };
    Ok(s.iter().zip(a.rows()).all(|(sr, ar)| {
        sr.iter().zip(ar).all(|(x, y)| x.mul(&inv).to_q().is_some_and(|m| Poly::mono(m) == *y))
    }))
}

/// Laurent polynomial in `t = q^{1/4}` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly(BTreeMap<i64, BigInt>);

impl TPoly {
    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(e: i64, c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        TPoly(m)
    }

    /// `1 − t^e`.
    pub fn one_minus(e: i64) -> Self {
        TPoly::one().sub(&TPoly::monomial(e, BigInt::one()))
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        let x = self.0.entry(e).or_insert_with(BigInt::zero);
        *x += c;
        if x.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &TPoly) -> TPoly {
        let mut r = self.clone();
        for (&e, c) in &o.0 {
            r.add_term(e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &TPoly) -> TPoly {
        let mut r = self.clone();
        for (&e, c) in &o.0 {
            r.add_term(e, -c.clone());
        }
        r
    }

    pub fn mul(&self, o: &TPoly) -> TPoly {
        let mut r = TPoly::default();
        for (&e1, c1) in &self.0 {
            for (&e2, c2) in &o.0 {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u64) -> TPoly {
        (0..k).fold(TPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn shift(&self, by: i64) -> TPoly {
        TPoly(self.0.iter().map(|(&e, c)| (e + by, c.clone())).collect())
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.0
    }

    /// From a polynomial in the single variable `q` (read as `t`).
    pub fn from_poly_in_q(p: &Poly) -> TPoly {
        let mut r = TPoly::default();
        for (m, c) in p.terms() {
            r.add_term(m.exponent(ParamVar::Q) as i64, c.clone());
        }
        r
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (_, true) => write!(f, "t^{e}")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, false) => write!(f, "{a}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `Σ_{k<l} b_{i_k i_l}` over a subset.
fn pair_sum(b: &BilinearData, t: &[Label]) -> i64 {
    let mut s = 0;
    for (x, &i) in t.iter().enumerate() {
        for &j in &t[x + 1..] {
            s += b.get(i, j);
        }
    }
    s
}

fn subsets(n: usize, min: usize) -> Vec<Vec<Label>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize >= min)
        .map(|m| (1..=n as Label).filter(|k| m >> (k - 1) & 1 == 1).collect())
        .collect()
}

/// The two closed forms of the determinant, as Laurent polynomials in `t = q^{1/4}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContravariantDet {
    pub n: usize,
    /// `(Σ_{k<l} b_{i_k i_l}, (m−2)!(n−m+1)!)` per subset of size `m ≥ 2`.
    pub factors: Vec<(Vec<Label>, i64, u64)>,
    /// `q^{−(n!/4)Σb} ∏ (1 − q^{Σb_T})^{l}`.
    pub prefactor_form: TPoly,
    /// `∏ (q^{−Σb_T/2} − q^{Σb_T/2})^{l}`.
    pub symmetric_form: TPoly,
}

impl ContravariantDet {
    pub fn forms_agree(&self) -> bool {
        self.prefactor_form == self.symmetric_form
    }

    /// Factored text `q^(e/4) * (1 - q^s)^l * …`, equal factors merged.
    pub fn factored(&self) -> String {
        let total: i64 = self.factors.iter().filter(|(t, _, _)| t.len() == 2).map(|(_, s, _)| s).sum();
        let nf = factorial(self.n) as i64;
        let mut grouped: BTreeMap<i64, u64> = BTreeMap::new();
        for (_, s, l) in &self.factors {
            *grouped.entry(*s).or_insert(0) += l;
        }
        let mut parts = vec![format!("q^({}/4)", -nf * total)];
        for (s, l) in grouped {
            let f = format!("(1 - q^{s})");
            parts.push(if l == 1 { f } else { format!("{f}^{l}") });
        }
        parts.join(" * ")
    }
}

pub fn contravariant_det(b: &BilinearData) -> Result<ContravariantDet, AppError> {
    let n = b.n();
    if n == 0 || n > 5 {
        return Err(AppError::Size(n, "closed determinant forms are built for 1 ≤ n ≤ 5"));
    }
    let factors: Vec<(Vec<Label>, i64, u64)> = subsets(n, 2)
        .into_iter()
        .map(|t| {
            let s = pair_sum(b, &t);
            let m = t.len();
            (t, s, factorial(m - 2) * factorial(n - m + 1))
        })
        .collect();
    let total = pair_sum(b, &(1..=n as Label).collect::<Vec<_>>());
    let mut pre = TPoly::monomial(-(factorial(n) as i64) * total, BigInt::one());
    let mut sym = TPoly::one();
    for (_, s, l) in &factors {
        // q^x = t^{4x}
        pre = pre.mul(&TPoly::one_minus(4 * s).pow(*l));
        let f = TPoly::monomial(-2 * s, BigInt::one()).sub(&TPoly::monomial(2 * s, BigInt::one()));
        sym = sym.mul(&f.pow(*l));
    }
    Ok(ContravariantDet { n, factors, prefactor_form: pre, symmetric_form: sym })
}

/// `det S` from the matrix: entries `t^{e}` are shifted to a polynomial
/// matrix in one variable and eliminated exactly.
pub fn contravariant_matrix_det(b: &BilinearData) -> Result<TPoly, AppError> {
    let n = b.n();
    let s = contravariant_matrix(n)?;
    let exps: Vec<Vec<i64>> = s.iter().map(|r| r.iter().map(|m| m.specialize(b)).collect()).collect();
    let lo = exps.iter().flatten().copied().min().unwrap_or(0);
    let rows: Vec<Vec<Poly>> =
        exps.iter().map(|r| r.iter().map(|&e| Poly::mono(Mono::q_pow((e - lo) as u32))).collect()).collect();
    let size = rows.len() as i64;
    Ok(TPoly::from_poly_in_q(&bareiss(rows)).shift(lo * size))
}

/// The determinant factors of `A^{12⋯n}` under `q_ij ↦ t^{2b_ij}`.
pub fn substituted_det_formula(b: &BilinearData) -> Result<TPoly, AppError> {
    let f = det_formula(&Weight::generic(b.n()))?;
    let total = pair_sum(b, &(1..=b.n() as Label).collect::<Vec<_>>());
    let mut acc = TPoly::monomial(-(factorial(b.n()) as i64) * total, BigInt::one());
    for (bx, &e) in f.factors() {
        let x: i64 = bx
            .mono()
            .terms()
            .iter()
            .map(|&(v, k)| match v {
                ParamVar::Pair(i, j) => 2 * b.get(i, j) * k as i64,
                ParamVar::Q => 0,
            })
            .sum();
        acc = acc.mul(&TPoly::one_minus(x).pow(e as u64));
    }
    Ok(acc)
}

/// Matrix determinant, both closed forms and the substituted general
/// formula all agree.
pub fn check_contravariant_det(b: &BilinearData) -> Result<bool, AppError> {
    let d = contravariant_det(b)?;
    let m = contravariant_matrix_det(b)?;
    Ok(d.forms_agree() && m == d.prefactor_form && substituted_det_formula(b)? == m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_hyperplane_form() {
        let m = varchenko_matrix(2).unwrap();
        assert_eq!(m.get(0, 1).to_string(), "q12");
        assert_eq!(m.get(1, 0).to_string(), "q12");
        assert_eq!(varchenko_det(2).expand().to_string(), "1 - q12^2");
    }

    #[test]
    fn edge_count() {
        let e = edges(4);
        assert_eq!(e.iter().filter(|x| x.is_k_equal()).count(), 11);
        // {12}{34}, {13}{24}, {14}{23} have multiplicity zero
        assert_eq!(e.iter().filter(|x| x.multiplicity == 0).count(), 3);
    }

    #[test]
    fn small_contravariant() {
        let s = contravariant_matrix(2).unwrap();
        assert_eq!(s[0][0].to_string(), "u12^-1");
        assert_eq!(s[0][1].to_string(), "u12");
        let b = BilinearData::new(vec![vec![2, 3], vec![3, 2]]).unwrap();
        let d = contravariant_det(&b).unwrap();
        assert!(d.forms_agree());
        assert_eq!(d.symmetric_form.to_string(), "t^-6 - t^6");
    }
}
