//! Inverses of generic and degenerate Gram matrices.
//!
//! For a generic weight, `A⁻¹ = Σ_g Λ(g)·R̂(g)` with diagonal `Λ(g)`. Each
//! `Λ(g)` is computed once as a *template*: a box fraction in position
//! variables, where `q_ab` stands for the diagonal operator `Q_{a,b}`. The
//! value on a basis word `i` is the template under `q_ab ↦ q_{i_a i_b}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{AlgebraError, BoxFactor, BoxFraction, Label, Mono, ParamVar, Poly};
use crate::det::{cyclotomic, det_formula, det_poly, multiplicity, DetError, Prime31};
use crate::fock::{word_string, Weight, Word};
use crate::gram::{
    box_interval, build_generic, factor_c, factor_d, q_hat, q_interval, rhat, Basis, DiagOp, Embedding, GramError,
    GramMatrix, OpExpansion,
};
use crate::lattice::{enumerate_bracketings, enumerate_chains, Subdivision};
use crate::perm::{is_tree_like, shuffles, young_data, young_sequence, young_step, Perm};

#[derive(Debug, thiserror::Error)]
pub enum InverseError {
    #[error("weight {0} is degenerate; this needs a generic weight")]
    Degenerate(Weight),
    #[error("size {0} not supported here: {1}")]
    Size(usize, String),
    #[error("unknown method {0:?}")]
    Method(String),
    #[error("elimination disagrees with the determinant formula")]
    Determinant,
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

type Frac = BoxFraction;

// ---------------------------------------------------------------------------
// templates

fn id_word(n: usize) -> Word {
    (1..=n as Label).collect()
}

/// `□_{[a..b]}` in position variables.
pub fn pos_box(a: usize, b: usize) -> BoxFactor {
    box_interval(&id_word(b), a, b).expect("nondegenerate interval")
}

/// `Q_{[a..b]}` in position variables.
pub fn pos_q_interval(a: usize, b: usize) -> Mono {
    q_interval(&id_word(b), a, b)
}

/// `Q(g)` in position variables.
pub fn pos_q_hat(g: &Perm) -> Mono {
    q_hat(&id_word(g.n()), g)
}

fn abs_sq(m: &Mono) -> Mono {
    m.mul(&m.conjugate())
}

/// `Q_σ = ∏_{J ∈ σ} Q_J`.
fn pos_q_sigma(s: &Subdivision) -> Mono {
    s.nondegenerate().fold(Mono::one(), |m, (a, b)| m.mul(&pos_q_interval(a, b)))
}

fn shift(f: &Frac, off: usize) -> Frac {
    if off == 0 {
        return f.clone();
    }
    let o = off as Label;
    f.substitute(&|v| match v {
        ParamVar::Pair(a, b) => Mono::pair(a + o, b + o),
        other => Mono::var(other),
    })
    .expect("shifting keeps box factors proper")
}

/// The pattern of `g` on a block `[a..b]` it stabilizes, as a permutation of `1..b−a+1`.
fn pattern(g: &Perm, a: usize, b: usize) -> Perm {
    Perm::from_images((a..=b).map(|x| (g.at(x) + 1 - a) as u8).collect()).expect("g stabilizes the block")
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn signed(f: Frac, k: usize) -> Frac {
    if k.is_multiple_of(2) {
        f
    } else {
        -f
    }
}

/// Signed sum over bracketings (outer bracket included) of `l` consecutive
/// blocks: `Σ_β (−1)^{b(β)+l−1} ∏_{[x..y] ∈ β} 1/box(x, y)`, by dynamic
/// programming over intervals of blocks (0-based, inclusive).
fn bracket_sum(l: usize, boxf: impl Fn(usize, usize) -> BoxFactor) -> Frac {
    if l <= 1 {
        return Frac::one();
    }
    // g[x][y]: Σ over bracketings of blocks x..y with outer bracket of (−1)^b/□_β
    // p[x][y]: Σ over sequences of top-level pieces covering x..y
    let mut g = vec![vec![Frac::zero(); l]; l];
    let mut p = vec![vec![Frac::zero(); l]; l];
    for x in 0..l {
        g[x][x] = Frac::one();
        p[x][x] = Frac::one();
    }
    for len in 2..=l {
        for x in 0..=l - len {
            let y = x + len - 1;
            let mut h = Frac::zero();
            for t in x..y {
                h = h + &g[x][t] * &p[t + 1][y];
            }
            let gv = -h.div_box(boxf(x, y));
            p[x][y] = &h + &gv;
            g[x][y] = gv;
        }
    }
    signed(g[0][l - 1].clone(), l - 1)
}

/// `Λ_σ`: the identity coefficient on blocks, `□_T ↦ □_{∪_{k∈T} J_k}`.
pub fn lambda_sigma(s: &Subdivision) -> Frac {
    let iv = s.intervals();
    bracket_sum(iv.len(), |x, y| pos_box(iv[x].0, iv[y].1))
}

/// Form of the identity coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdForm {
    /// `Σ_β (−1)^{b+n−1}/□_β` over bracketings with outer brackets.
    OuterBrackets,
    /// `(1/□_{[1..n]}) Σ_β Q_β/□_β` over bracketings without outer brackets.
    NoOuter,
}

/// `Λ(id)` in position variables, by explicit enumeration of bracketings.
pub fn lambda_id_template(n: usize, form: IdForm) -> Frac {
    if n <= 1 {
        return Frac::one();
    }
    let bs = enumerate_bracketings(n);
    match form {
        IdForm::OuterBrackets => bs
            .iter()
            .map(|b| {
                let f = b.pairs().iter().fold(Frac::one(), |f, &(x, y)| f.div_box(pos_box(x, y)));
                signed(f, b.b() + n - 1)
            })
            .sum(),
        IdForm::NoOuter => {
            let s: Frac = bs
                .iter()
                .map(|b| {
                    let inner = b.without_outer();
                    inner.pairs().iter().fold(Frac::one(), |f, &(x, y)| {
                        f.mul_mono(&pos_q_interval(x, y)).div_box(pos_box(x, y))
                    })
                })
                .sum();
            s.div_box(pos_box(1, n))
        }
    }
}

/// Instantiates a template on one word.
pub fn on_word(t: &Frac, w: &[Label]) -> Frac {
    t.substitute(&|v| match v {
        ParamVar::Pair(a, b) => Mono::pair(w[a as usize - 1], w[b as usize - 1]),
        other => Mono::var(other),
    })
    .expect("relabeling keeps box factors proper")
}

/// `Λ(id)` on a generic basis.
pub fn lambda_id(nu: &Weight, form: IdForm) -> Result<DiagOp<Frac>, InverseError> {
    let basis = generic_basis(nu)?;
    let t = lambda_id_template(nu.size(), form);
    Ok(basis.diag(|w| on_word(&t, w)))
}

fn generic_basis(nu: &Weight) -> Result<Arc<Basis>, InverseError> {
    if !nu.is_generic() {
        return Err(InverseError::Degenerate(nu.clone()));
    }
    Ok(Basis::new(nu))
}

// ---------------------------------------------------------------------------
// per-permutation algorithms

/// Algorithms for a single coefficient `Λ(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LambdaAlgo {
    /// One step of the thickened recursion: `Λ_{σ(g)}·∏_k Λ_{J_k}(g_k)`,
    /// with the reversal rule for `g(1) > g(n)`.
    Recursive,
    /// Two steps at once: `±Λ_{σ(g)}Λ_{σ(g'):σ(g)}Q_{σ(g')}Λ_{J(g')}(g'')`.
    Fast,
    /// The closed product over the Young sequence.
    Closed,
    /// Inclusion-exclusion over `∅ ≠ J ⊆ J(g)`.
    Long,
    /// Sum over the two-block splittings of `g`.
    Short,
}

impl LambdaAlgo {
    pub const ALL: [LambdaAlgo; 5] =
        [LambdaAlgo::Recursive, LambdaAlgo::Fast, LambdaAlgo::Closed, LambdaAlgo::Long, LambdaAlgo::Short];
}

impl fmt::Display for LambdaAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LambdaAlgo::Recursive => "recursive",
            LambdaAlgo::Fast => "fast",
            LambdaAlgo::Closed => "closed",
            LambdaAlgo::Long => "long",
            LambdaAlgo::Short => "short",
        };
        f.write_str(s)
    }
}

/// Memoized coefficient templates. Keys are `(algorithm, pattern)`: a
/// coefficient on a block `[a..b]` is the template of its pattern shifted
/// by `a − 1`.
#[derive(Default)]
pub struct LambdaEngine {
    memo: Mutex<HashMap<(LambdaAlgo, Perm), Frac>>,
    sigma: Mutex<HashMap<Subdivision, Frac>>,
}

impl LambdaEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn sigma(&self, s: &Subdivision) -> Frac {
        if let Some(v) = self.sigma.lock().expect("poisoned").get(s) {
            return v.clone();
        }
        let v = lambda_sigma(s);
        self.sigma.lock().expect("poisoned").insert(s.clone(), v.clone());
        v
    }

    /// `Λ(g)` in position variables.
    pub fn template(&self, g: &Perm, algo: LambdaAlgo) -> Frac {
        if g.n() <= 1 {
            return Frac::one();
        }
        let key = (algo, g.clone());
        if let Some(v) = self.memo.lock().expect("poisoned").get(&key) {
            return v.clone();
        }
        let v = match algo {
            LambdaAlgo::Recursive => self.recursive(g),
            LambdaAlgo::Fast => self.fast(g),
            LambdaAlgo::Closed => self.closed(g),
            LambdaAlgo::Long => self.long(g),
            LambdaAlgo::Short => self.short(g),
        };
        self.memo.lock().expect("poisoned").insert(key, v.clone());
        v
    }

    fn on_block(&self, g: &Perm, a: usize, b: usize, algo: LambdaAlgo) -> Frac {
        if a == b {
            return Frac::one();
        }
        shift(&self.template(&pattern(g, a, b), algo), a - 1)
    }

    /// `Λ(g) = (−1)^{n−1}|Q(g·w_n)|²Λ(g·w_n)` for `g(1) > g(n)`.
    fn flip(&self, g: &Perm, algo: LambdaAlgo) -> Frac {
        let n = g.n();
        let gw = g.compose(&Perm::longest(1, n, n).expect("n ≥ 1"));
        let t = self.template(&gw, algo).mul_mono(&abs_sq(&pos_q_hat(&gw)));
        signed(t, n - 1)
    }

    fn recursive(&self, g: &Perm) -> Frac {
        let n = g.n();
        if g.at(1) > g.at(n) {
            return self.flip(g, LambdaAlgo::Recursive);
        }
        let yd = young_data(g);
        if yd.cuts.is_empty() {
            return Frac::zero();
        }
        let mut acc = self.sigma(&yd.sigma);
        for &(a, b) in yd.sigma.intervals() {
            if acc.is_zero() {
                break;
            }
            acc = acc * self.on_block(g, a, b, LambdaAlgo::Recursive);
        }
        acc
    }

    fn fast(&self, g: &Perm) -> Frac {
        let n = g.n();
        if g.is_identity() {
            return self.sigma(&Subdivision::singletons(1, n));
        }
        if !is_tree_like(g) {
            return Frac::zero();
        }
        let s0 = young_data(g).sigma;
        let g1 = young_step(g);
        let s1 = young_data(&g1).sigma;
        let g2 = young_step(&g1);
        let mut acc = self.sigma(&s0);
        for &(a, b) in s0.intervals() {
            acc = acc * self.sigma(&s1.restrict(a, b));
        }
        acc = acc.mul_mono(&pos_q_sigma(&s1));
        for &(a, b) in s1.intervals() {
            acc = acc * self.on_block(&g2, a, b, LambdaAlgo::Fast);
        }
        signed(acc, s0.len() + s1.len())
    }

    fn closed(&self, g: &Perm) -> Frac {
        let ys = young_sequence(g);
        if !ys.tree_like {
            return Frac::zero();
        }
        let sigmas: Vec<Subdivision> = ys.seq.iter().map(|h| young_data(h).sigma).collect();
        let d = sigmas.len() - 1;
        let big_n: usize = sigmas.iter().map(|s| s.intervals().iter().map(|&(a, b)| b - a).sum::<usize>()).sum();
        let mut acc = self.sigma(&sigmas[0]);
        for k in 1..=d {
            for &(a, b) in sigmas[k - 1].intervals() {
                acc = acc * self.sigma(&sigmas[k].restrict(a, b));
            }
        }
        let d_odd = if d == 0 { 0 } else { 2 * ((d - 1) / 2) + 1 };
        for k in (1..=d_odd).step_by(2) {
            acc = acc.mul_mono(&pos_q_sigma(&sigmas[k]));
        }
        signed(acc, big_n)
    }

    fn long(&self, g: &Perm) -> Frac {
        let n = g.n();
        if g.at(1) > g.at(n) {
            return self.flip(g, LambdaAlgo::Long);
        }
        let cuts = g.young_cuts_in(1, n);
        let mut acc = Frac::zero();
        for mask in 1u32..1 << cuts.len() {
            let j: Vec<usize> = cuts.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &c)| c).collect();
            let s = Subdivision::from_cuts(1, n, &j);
            let mut t = Frac::one();
            for &(a, b) in s.intervals() {
                t = t * self.on_block(g, a, b, LambdaAlgo::Long);
            }
            acc = acc + signed(t, j.len() + 1);
        }
        acc.div_box(pos_box(1, n))
    }

    fn short(&self, g: &Perm) -> Frac {
        let n = g.n();
        if g.at(1) > g.at(n) {
            return self.flip(g, LambdaAlgo::Short);
        }
        let mut acc = Frac::zero();
        for k in g.young_cuts_in(1, n) {
            let mut t = self.on_block(g, 1, k, LambdaAlgo::Short) * self.on_block(g, k + 1, n, LambdaAlgo::Short);
            if g.at(1) < g.at(k) {
                t = t.mul_mono(&pos_q_interval(1, k));
            }
            acc = acc + t;
        }
        acc.div_box(pos_box(1, n))
    }
}

/// `Λ(g)` in position variables with a fresh engine.
pub fn lambda_template(g: &Perm, algo: LambdaAlgo) -> Frac {
    LambdaEngine::new().template(g, algo)
}

/// `Λ(g)` on a generic basis.
pub fn lambda(nu: &Weight, g: &Perm, algo: LambdaAlgo) -> Result<DiagOp<Frac>, InverseError> {
    let basis = generic_basis(nu)?;
    if g.n() != basis.n() {
        return Err(InverseError::Size(g.n(), format!("permutation on words of length {}", basis.n())));
    }
    let t = lambda_template(g, algo);
    Ok(basis.diag(|w| on_word(&t, w)))
}

/// `Σ_g Λ(g)·R̂(g)` stored coefficientwise.
#[derive(Clone, Debug)]
pub struct LambdaTable {
    basis: Arc<Basis>,
    entries: BTreeMap<Perm, DiagOp<Frac>>,
}

impl LambdaTable {
    /// Table for a generic weight; zero coefficients are omitted.
    pub fn compute(nu: &Weight, algo: LambdaAlgo) -> Result<Self, InverseError> {
        let basis = generic_basis(nu)?;
        let engine = LambdaEngine::new();
        let entries: BTreeMap<Perm, DiagOp<Frac>> = Perm::all(basis.n())
            .into_par_iter()
            .filter_map(|g| {
                let t = engine.template(&g, algo);
                (!t.is_zero()).then(|| {
                    let d = basis.diag(|w| on_word(&t, w));
                    (g, d)
                })
            })
            .collect();
        Ok(LambdaTable { basis, entries })
    }

    /// Reads `Λ(g) = D(g)/Q(g)` off an expansion `Σ D(g)·R(g)`.
    pub fn from_expansion(e: &OpExpansion<Frac>) -> Result<Self, InverseError> {
        let basis = e.basis().clone();
        let mut entries = BTreeMap::new();
        for (g, d) in e.terms() {
            let v = basis
                .words()
                .iter()
                .zip(d.entries())
                .map(|(w, x)| x.div_mono(&q_hat(w, g)))
                .collect::<Result<Vec<_>, _>>()?;
            entries.insert(g.clone(), DiagOp(v));
        }
        Ok(LambdaTable { basis, entries })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn entries(&self) -> &BTreeMap<Perm, DiagOp<Frac>> {
        &self.entries
    }

    pub fn get(&self, g: &Perm) -> DiagOp<Frac> {
        self.entries.get(g).cloned().unwrap_or_else(|| DiagOp::constant(self.basis.len(), Frac::zero()))
    }

    pub fn to_expansion(&self) -> OpExpansion<Frac> {
        let mut out = OpExpansion::zero(self.basis.clone());
        for (g, d) in &self.entries {
            let q = self.basis.diag(|w| Frac::from_poly(Poly::mono(q_hat(w, g))));
            out.add_term(g.clone(), d.times(&q));
        }
        out
    }

    /// `{perm: {word: Λ(g)_word}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            self.entries.iter().map(|(g, d)| (g.to_string(), d.to_json(&self.basis))).collect();
        serde_json::Value::Object(map)
    }
}

// ---------------------------------------------------------------------------
// operator-level inverses

/// Methods for the whole inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InverseMethod {
    Fast,
    Long,
    Short,
    Zagier,
    Chains,
    /// Cofactors over the symbolic determinant; small sizes only.
    Brute,
}

impl InverseMethod {
    pub const ALL: [InverseMethod; 6] = [
        InverseMethod::Fast,
        InverseMethod::Long,
        InverseMethod::Short,
        InverseMethod::Zagier,
        InverseMethod::Chains,
        InverseMethod::Brute,
    ];
}

impl fmt::Display for InverseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InverseMethod::Fast => "fast",
            InverseMethod::Long => "long",
            InverseMethod::Short => "short",
            InverseMethod::Zagier => "zagier",
            InverseMethod::Chains => "chains",
            InverseMethod::Brute => "brute",
        };
        f.write_str(s)
    }
}

impl FromStr for InverseMethod {
    type Err = InverseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        InverseMethod::ALL
            .into_iter()
            .find(|m| m.to_string() == s)
            .ok_or_else(|| InverseError::Method(s.to_string()))
    }
}

fn lift(e: &OpExpansion<Poly>) -> OpExpansion<Frac> {
    e.map(|p| Frac::from_poly(p.clone()))
}

fn rhat_frac(basis: &Arc<Basis>, g: &Perm) -> OpExpansion<Frac> {
    lift(&rhat(basis, g).expect("generic basis"))
}

fn inv_box_diag(basis: &Basis, a: usize, b: usize) -> DiagOp<Frac> {
    basis.diag(|w| Frac::inverse_box(box_interval(w, a, b).expect("nondegenerate interval")))
}

/// `Ψ_{[a..b]} = (1/□_{[a..b]})(I − (−1)^{b−a+1}R̂(w_{[a..b]}))`, the inverse of
/// `I + (−1)^{b−a+1}R̂(w_{[a..b]})`.
pub fn psi(basis: &Arc<Basis>, a: usize, b: usize) -> OpExpansion<Frac> {
    let n = basis.n();
    let id = OpExpansion::identity(basis.clone());
    let r = rhat_frac(basis, &Perm::longest(a, b, n).expect("interval inside 1..n"));
    let phi = if (b - a + 1).is_multiple_of(2) { id.minus(&r) } else { id.plus(&r) };
    phi.scale_left(&inv_box_diag(basis, a, b))
}

/// Sum over chains of the subdivision lattice: `Σ_C (−1)^{b₊(C)+n−1} Ψ_C`.
pub fn inv_chains(nu: &Weight) -> Result<OpExpansion<Frac>, InverseError> {
    let basis = generic_basis(nu)?;
    let n = basis.n();
    let terms: Vec<OpExpansion<Frac>> = enumerate_chains(n)
        .into_par_iter()
        .map(|c| {
            let mut acc = OpExpansion::identity(basis.clone());
            for s in c.members().iter().rev() {
                for (a, b) in s.nondegenerate() {
                    acc = acc.times(&psi(&basis, a, b));
                }
            }
            if (c.b_plus() + n - 1) % 2 == 1 {
                acc.negate()
            } else {
                acc
            }
        })
        .collect();
    Ok(terms.iter().fold(OpExpansion::zero(basis.clone()), |s, t| s.plus(t)))
}

/// Number of chain terms in [`inv_chains`].
pub fn chain_term_count(n: usize) -> usize {
    enumerate_chains(n).len()
}

/// Interval inverses `[A_{[a..b]}]⁻¹` by the long or short recursion.
struct IntervalInverses {
    basis: Arc<Basis>,
    short: bool,
    memo: HashMap<(usize, usize), OpExpansion<Frac>>,
}

impl IntervalInverses {
    fn get(&mut self, a: usize, b: usize) -> OpExpansion<Frac> {
        if a == b {
            return OpExpansion::identity(self.basis.clone());
        }
        if let Some(v) = self.memo.get(&(a, b)) {
            return v.clone();
        }
        let mut sum = OpExpansion::zero(self.basis.clone());
        if self.short {
            // Σ_k (−1)^{k−a}[A_{[a..k]}]⁻¹[A_{[k+1..b]}]⁻¹R̂(w_{[a..k]})
            for k in a..b {
                let mut t = self.get(a, k).times(&self.get(k + 1, b));
                if k > a {
                    t = t.times(&rhat_frac(&self.basis, &Perm::longest(a, k, self.basis.n()).expect("inside")));
                }
                sum = if (k - a).is_multiple_of(2) { sum.plus(&t) } else { sum.minus(&t) };
            }
        } else {
            // Σ_{∅ ≠ J} (−1)^{|J|+1} ∏_{blocks} [A_block]⁻¹
            let gaps: Vec<usize> = (a..b).collect();
            for mask in 1u32..1 << gaps.len() {
                let j: Vec<usize> =
                    gaps.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &c)| c).collect();
                let mut t = OpExpansion::identity(self.basis.clone());
                for &(x, y) in Subdivision::from_cuts(a, b, &j).intervals() {
                    t = t.times(&self.get(x, y));
                }
                sum = if j.len() % 2 == 1 { sum.plus(&t) } else { sum.minus(&t) };
            }
        }
        let v = sum.times(&psi(&self.basis, a, b));
        self.memo.insert((a, b), v.clone());
        v
    }
}

/// `E^m = Σ_{π ∈ S_m × S_1^{n−m}} W_m(π)·R̂(π)` with
/// `W_m(π) = ∏_{i ∈ Des(π⁻¹)} Q_{[i+1..m+1]}`.
pub fn factor_e(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Poly>, InverseError> {
    let n = basis.n();
    if m == 0 || m >= n {
        return Err(InverseError::Size(m, format!("E^m needs 1 ≤ m < {n}")));
    }
    let mut out = OpExpansion::zero(basis.clone());
    for p in Perm::all(m) {
        let mut v = p.images().to_vec();
        v.extend(m as u8 + 1..=n as u8);
        let pi = Perm::from_images(v).expect("extension of a permutation");
        let des = pi.inverse().descents();
        let w = basis.diag(|word| {
            let mono = des.iter().fold(Mono::one(), |acc, &i| acc.mul(&q_interval(word, i + 1, m + 1)));
            Poly::mono(mono).times_q_hat(word, &pi)
        });
        out.add_term(pi, w);
    }
    Ok(out)
}

trait TimesQHat {
    fn times_q_hat(self, word: &[Label], g: &Perm) -> Poly;
}

impl TimesQHat for Poly {
    fn times_q_hat(self, word: &[Label], g: &Perm) -> Poly {
        self.mul_mono(&q_hat(word, g))
    }
}

/// `Δ^m = □_{[1..m+1]}□_{[2..m+1]}⋯□_{[m..m+1]}`, inverted.
pub fn inv_delta_m(basis: &Basis, m: usize) -> DiagOp<Frac> {
    basis.diag(|w| {
        (1..=m).fold(Frac::one(), |f, a| f.div_box(box_interval(w, a, m + 1).expect("nondegenerate interval")))
    })
}

/// `[D^m]⁻¹ = [Δ^m]⁻¹E^m`.
pub fn inv_factor_d(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Frac>, InverseError> {
    Ok(lift(&factor_e(basis, m)?).scale_left(&inv_delta_m(basis, m)))
}

/// `A⁻¹ = C^n[D^{n−1}]⁻¹C^{n−1}⋯C²[D¹]⁻¹`.
pub fn inv_zagier(nu: &Weight) -> Result<OpExpansion<Frac>, InverseError> {
    let basis = generic_basis(nu)?;
    let n = basis.n();
    let mut acc = lift(&factor_c(&basis, n)?);
    for m in (1..n).rev() {
        acc = acc.times(&inv_factor_d(&basis, m)?);
        if m >= 2 {
            acc = acc.times(&lift(&factor_c(&basis, m)?));
        }
    }
    Ok(acc)
}

/// `[D^m]⁻¹·D^m = I`.
pub fn check_inv_factor_d(basis: &Arc<Basis>, m: usize) -> Result<bool, InverseError> {
    let d = lift(&factor_d(basis, m)?);
    Ok(inv_factor_d(basis, m)?.times(&d) == OpExpansion::identity(basis.clone()))
}

/// `Σ_J (−1)^{n−1−|J|}Γ_J = R̂(w_n)` with `Γ_J = R̂(γ_J)`.
pub fn check_solomon_euler(basis: &Arc<Basis>) -> Result<bool, InverseError> {
    let n = basis.n();
    let mut sum = OpExpansion::<Poly>::zero(basis.clone());
    for mask in 0u32..1 << (n - 1) {
        let j: Vec<usize> = (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        let mut gamma = OpExpansion::zero(basis.clone());
        for g in shuffles(&j, n) {
            gamma = gamma.plus(&rhat(basis, &g)?);
        }
        sum = if (n - 1 - j.len()).is_multiple_of(2) { sum.plus(&gamma) } else { sum.minus(&gamma) };
    }
    Ok(sum == rhat(basis, &Perm::longest(1, n, n).expect("n ≥ 1"))?)
}

/// Cofactor inverse with the determinant supplied in factored form (after
/// checking it against elimination).
pub fn inv_brute(nu: &Weight) -> Result<GramMatrix<Frac>, InverseError> {
    if nu.size() > 3 {
        return Err(InverseError::Size(nu.size(), "cofactor inverses are built for |ν| ≤ 3".into()));
    }
    let a = build_generic(nu)?;
    let size = a.size();
    if size == 1 {
        return Ok(GramMatrix::new(a.basis().clone(), vec![vec![Frac::one()]])?);
    }
    let f = det_formula(nu)?;
    if det_poly(a.rows().to_vec()) != f.expand() {
        return Err(InverseError::Determinant);
    }
    let den: Vec<(BoxFactor, u32)> = f.factors().iter().map(|(b, &e)| (b.clone(), e)).collect();
    let rows: Vec<Vec<Frac>> = (0..size)
        .into_par_iter()
        .map(|i| {
            (0..size)
                .map(|j| {
                    // (A⁻¹)_{ij} = (−1)^{i+j} det(A without row j, column i) / det A
                    let minor: Vec<Vec<Poly>> = (0..size)
                        .filter(|&r| r != j)
                        .map(|r| (0..size).filter(|&c| c != i).map(|c| a.get(r, c).clone()).collect())
                        .collect();
                    let c = det_poly(minor);
                    let c = if (i + j) % 2 == 1 { -c } else { c };
                    Frac::new(c, den.clone())
                })
                .collect()
        })
        .collect();
    Ok(GramMatrix::new(a.basis().clone(), rows)?)
}

/// The inverse of a generic Gram matrix as `Σ_g D(g)·R(g)`.
pub fn inv_full(nu: &Weight, method: InverseMethod) -> Result<OpExpansion<Frac>, InverseError> {
    let basis = generic_basis(nu)?;
    match method {
        InverseMethod::Fast => Ok(LambdaTable::compute(nu, LambdaAlgo::Fast)?.to_expansion()),
        InverseMethod::Chains => inv_chains(nu),
        InverseMethod::Long | InverseMethod::Short => {
            let mut ii = IntervalInverses { basis: basis.clone(), short: method == InverseMethod::Short, memo: HashMap::new() };
            Ok(ii.get(1, basis.n()))
        }
        InverseMethod::Zagier => inv_zagier(nu),
        InverseMethod::Brute => Ok(OpExpansion::from_dense(&inv_brute(nu)?)?),
    }
}

/// `A·X = I` exactly, for an expansion `X` on a generic basis.
pub fn is_inverse(x: &OpExpansion<Frac>) -> Result<bool, InverseError> {
    let basis = x.basis().clone();
    let mut a = OpExpansion::zero(basis.clone());
    for g in Perm::all(basis.n()) {
        a = a.plus(&rhat_frac(&basis, &g));
    }
    Ok(a.times(x) == OpExpansion::identity(basis))
}

/// Inverse for any weight of size ≤ 5: generic weights directly, degenerate
/// ones through the generic model, `[A]⁻¹_{i,j} = Σ_{h∈H}[Ã⁻¹]_{ĩ,h·j̃}`.
pub fn inv_degenerate(nu: &Weight, method: InverseMethod) -> Result<GramMatrix<Frac>, InverseError> {
    if nu.size() > 5 {
        return Err(InverseError::Size(nu.size(), "degenerate inverses are built for |ν| ≤ 5".into()));
    }
    let e = Embedding::new(nu);
    let big = inv_full(e.model(), method)?.to_dense();
    if e.is_trivial() {
        return Ok(big);
    }
    let sub = e.substitution();
    Ok(e.transfer(&big, |f| f.substitute(&sub).expect("relabeling keeps box factors proper"))?)
}

// ---------------------------------------------------------------------------
// common denominators

/// Candidate common denominators for inverse entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DenominatorMode {
    /// `∏_{a<b} □_{[a..b]}`.
    Multi,
    /// `∏_{T ⊆ [1..n], |T| ≥ 2} □_T`.
    ExtendedMulti,
    /// `δ_n(q) = ∏_{k=2}^n (1 − q^{k(k−1)})^{n−k+1}`, all `q_ij = q`.
    OneParam,
    /// `Δ_n(q) = ∏_{k=2}^n (1 − q^{k(k−1)})`, all `q_ij = q`.
    OriginalConjecture,
}

impl fmt::Display for DenominatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DenominatorMode::Multi => "multi",
            DenominatorMode::ExtendedMulti => "extended-multi",
            DenominatorMode::OneParam => "one-param",
            DenominatorMode::OriginalConjecture => "original-conjecture",
        };
        f.write_str(s)
    }
}

impl FromStr for DenominatorMode {
    type Err = InverseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            DenominatorMode::Multi,
            DenominatorMode::ExtendedMulti,
            DenominatorMode::OneParam,
            DenominatorMode::OriginalConjecture,
        ]
        .into_iter()
        .find(|m| m.to_string() == s)
        .ok_or_else(|| InverseError::Method(s.to_string()))
    }
}

fn one_minus_q(e: u32) -> Poly {
    Poly::one_minus(&Mono::q_pow(e))
}

/// A candidate denominator: a product of box factors in position
/// variables, or a polynomial in `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidate {
    Boxes(BTreeMap<BoxFactor, u32>),
    OneParam(Poly),
}

impl Candidate {
    /// Is `f · D` a polynomial? For products of boxes this is containment of
    /// the reduced denominator: a multiparameter box `1 − m` is linear in one
    /// of its variables, hence irreducible, and distinct boxes are coprime.
    pub fn clears(&self, f: &Frac) -> bool {
        match self {
            Candidate::Boxes(d) => f.den().iter().all(|(b, e)| d.get(b).is_some_and(|x| x >= e)),
            Candidate::OneParam(p) => f.times_poly_exact(p).is_some(),
        }
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            Candidate::Boxes(d) => d.iter().map(|(b, &e)| b.poly().pow(e)).product(),
            Candidate::OneParam(p) => p.clone(),
        }
    }
}

/// The candidate denominator for size `n`.
pub fn candidate_denominator(n: usize, mode: DenominatorMode) -> Candidate {
    match mode {
        DenominatorMode::Multi => {
            let mut d = BTreeMap::new();
            for a in 1..=n {
                for b in a + 1..=n {
                    d.insert(pos_box(a, b), 1);
                }
            }
            Candidate::Boxes(d)
        }
        DenominatorMode::ExtendedMulti => {
            let mut d = BTreeMap::new();
            for mask in 0u32..1 << n {
                if mask.count_ones() >= 2 {
                    let t: Vec<Label> = (1..=n as Label).filter(|k| mask >> (k - 1) & 1 == 1).collect();
                    d.insert(BoxFactor::over_letters(&t).expect("at least two letters"), 1);
                }
            }
            Candidate::Boxes(d)
        }
        DenominatorMode::OneParam => Candidate::OneParam(
            (2..=n as u32).map(|k| one_minus_q(k * (k - 1)).pow(n as u32 - k + 1)).product(),
        ),
        DenominatorMode::OriginalConjecture => {
            Candidate::OneParam((2..=n as u32).map(|k| one_minus_q(k * (k - 1))).product())
        }
    }
}

/// One coefficient against a candidate denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientCheck {
    pub perm: Perm,
    /// `Λ(g)` in position variables, or in `q` for the one-parameter modes.
    pub lambda: Frac,
    pub polynomial: bool,
}

/// Per-coefficient results of a denominator check.
#[derive(Clone, Debug)]
pub struct DenominatorReport {
    pub n: usize,
    pub mode: DenominatorMode,
    pub checks: Vec<CoefficientCheck>,
}

impl DenominatorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.polynomial)
    }

    pub fn failures(&self) -> Vec<&CoefficientCheck> {
        self.checks.iter().filter(|c| !c.polynomial).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "mode": self.mode.to_string(),
            "checked": self.checks.len(),
            "passed": self.passed(),
            "coefficients": self.checks.iter().map(|c| serde_json::json!({
                "perm": c.perm.to_string(),
                "lambda": c.lambda.to_string(),
                "polynomial": c.polynomial,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Checks a single coefficient `Λ(g)` (the inverse entry differs by the
/// monomial `Q(g)`, which does not affect polynomiality).
pub fn check_coefficient(engine: &LambdaEngine, g: &Perm, cand: &Candidate) -> CoefficientCheck {
    let t = engine.template(g, LambdaAlgo::Fast);
    let lambda = if matches!(cand, Candidate::OneParam(_)) { t.one_param() } else { t };
    let polynomial = cand.clears(&lambda);
    CoefficientCheck { perm: g.clone(), lambda, polynomial }
}

/// Every coefficient of `A⁻¹` for the generic weight of size `n` against a
/// candidate denominator. A generic instantiation is an injective relabeling
/// of variables, so templates decide the question for every word.
pub fn zagier_check(n: usize, mode: DenominatorMode) -> DenominatorReport {
    let engine = LambdaEngine::new();
    let cand = candidate_denominator(n, mode);
    let checks = Perm::all(n).into_par_iter().map(|g| check_coefficient(&engine, &g, &cand)).collect();
    DenominatorReport { n, mode, checks }
}

/// Single-coefficient report, for sizes where the full table is out of reach.
pub fn zagier_check_coefficient(g: &Perm, mode: DenominatorMode) -> DenominatorReport {
    let engine = LambdaEngine::new();
    let cand = candidate_denominator(g.n(), mode);
    DenominatorReport { n: g.n(), mode, checks: vec![check_coefficient(&engine, g, &cand)] }
}

/// A cyclotomic factor `Φ_d(q)` with more copies in the denominator of a
/// one-parameter coefficient than the numerator and a candidate can absorb.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub d: u32,
    pub in_denominator: u32,
    pub in_numerator: u32,
    pub in_candidate: u32,
}

impl Obstruction {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cyclotomic": self.d,
            "factor": cyclotomic(self.d).to_string(),
            "in_denominator": self.in_denominator,
            "in_numerator": self.in_numerator,
            "in_candidate": self.in_candidate,
        })
    }
}

/// Why `f·cand` fails to be a polynomial, for `f` in `q` alone: each box
/// `1 − q^k` of the reduced denominator splits into `Φ_d`, `d | k`.
pub fn one_param_obstructions(f: &Frac, cand: &Poly) -> Vec<Obstruction> {
    let mut den: BTreeMap<u32, u32> = BTreeMap::new();
    for (b, &e) in f.den() {
        let k = b.mono().exponent(ParamVar::Q);
        for d in (1..=k).filter(|d| k % d == 0) {
            *den.entry(d).or_insert(0) += e;
        }
    }
    den.into_iter()
        .filter_map(|(d, in_denominator)| {
            let phi = cyclotomic(d);
            let in_numerator = multiplicity(f.num(), &phi).0;
            let in_candidate = multiplicity(cand, &phi).0;
            (in_denominator > in_numerator + in_candidate).then_some(Obstruction {
                d,
                in_denominator,
                in_numerator,
                in_candidate,
            })
        })
        .collect()
}

/// Each `□_{[a..b]}` (`a < b`) occurs, to the first power, in the least common
/// denominator of the reduced coefficients.
pub fn check_box_coverage(n: usize) -> bool {
    let engine = LambdaEngine::new();
    let mut lcm: BTreeMap<BoxFactor, u32> = BTreeMap::new();
    for g in Perm::all(n) {
        for (b, &e) in engine.template(&g, LambdaAlgo::Fast).den() {
            let x = lcm.entry(b.clone()).or_insert(0);
            *x = (*x).max(e);
        }
    }
    let mut expected = BTreeMap::new();
    for a in 1..=n {
        for b in a + 1..=n {
            expected.insert(pos_box(a, b), 1);
        }
    }
    lcm == expected
}

// ---------------------------------------------------------------------------
// modular evidence

/// Value of a box fraction at a point of `F_p`; `None` on a vanishing denominator.
pub fn eval_frac_mod(f: &Frac, p: Prime31, val: &impl Fn(ParamVar) -> u64) -> Option<u64> {
    let m = p.modulus();
    let num = f.num().eval_mod(m, val);
    let den = f.den_poly().eval_mod(m, val);
    (den != 0).then(|| p.mul(num, p.inv(den)))
}

/// Comparison of coefficient templates with the inverse of `A` at a random
/// point of `F_p`.
#[derive(Clone, Debug)]
pub struct ModularReport {
    pub n: usize,
    pub modulus: u64,
    /// Permutations compared against the modular inverse.
    pub compared: usize,
    pub mismatches: Vec<Perm>,
    /// `A·X = I` at the point, with `X` assembled from all templates.
    pub product_is_identity: bool,
}

impl ModularReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.product_is_identity
    }
}

/// Evaluates `A^{1..n}` and the template inverse at a seeded random point
/// of `F_p` and compares the `g`-diagonals for `perms` (all of `S_n` when
/// `None`). Zero templates are compared too, so non-tree-like permutations
/// are checked to have vanishing diagonals.
pub fn modular_check(
    n: usize,
    algo: LambdaAlgo,
    perms: Option<&[Perm]>,
    p: Prime31,
    seed: u64,
) -> Result<ModularReport, InverseError> {
    let nu = Weight::generic(n);
    let basis = Basis::new(&nu);
    let a = build_generic(&nu)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = p.modulus();
    let mut values: HashMap<(Label, Label), u64> = HashMap::new();
    for i in 1..=n as Label {
        for j in 1..=n as Label {
            values.insert((i, j), rand::Rng::gen_range(&mut rng, 2..m));
        }
    }
    let val = |v: ParamVar| match v {
        ParamVar::Pair(i, j) => values[&(i, j)],
        ParamVar::Q => 0,
    };
    let am: Vec<Vec<u64>> = a.rows().par_iter().map(|r| r.iter().map(|x| x.eval_mod(m, &val)).collect()).collect();
    let inv = p.inverse(&am).ok_or_else(|| InverseError::Size(n, "singular at the sampled point".into()))?;

    let engine = LambdaEngine::new();
    let all = Perm::all(n);
    // X(i, g⁻¹·i) = Λ(g)_i·Q(g)_i
    let size = basis.len();
    let mut x = vec![vec![0u64; size]; size];
    let mut undefined = false;
    let mut templ: HashMap<Perm, Frac> = HashMap::new();
    for g in &all {
        templ.insert(g.clone(), engine.template(g, algo));
    }
    let entry = |g: &Perm, i: usize| -> Option<u64> {
        let w = basis.word(i);
        let wval = |v: ParamVar| match v {
            ParamVar::Pair(s, t) => val(ParamVar::Pair(w[s as usize - 1], w[t as usize - 1])),
            ParamVar::Q => 0,
        };
        let l = eval_frac_mod(&templ[g], p, &wval)?;
        let q = Poly::mono(q_hat(w, g)).eval_mod(m, &val);
        Some(p.mul(l, q))
    };
    for g in &all {
        let back = basis.action(&g.inverse());
        for i in 0..size {
            match entry(g, i) {
                Some(v) => x[i][back[i]] = v,
                None => undefined = true,
            }
        }
    }
    let chosen: Vec<Perm> = perms.map(|s| s.to_vec()).unwrap_or_else(|| all.clone());
    let mismatches: Vec<Perm> = chosen
        .par_iter()
        .filter(|g| {
            let back = basis.action(&g.inverse());
            (0..size).any(|i| inv[i][back[i]] != x[i][back[i]])
        })
        .cloned()
        .collect();
    let product_is_identity = !undefined
        && (0..size).into_par_iter().all(|i| {
            (0..size).all(|j| {
                let mut s = 0u64;
                for (k, row) in x.iter().enumerate() {
                    s = (s + p.mul(am[i][k], row[j])) % m;
                }
                s == u64::from(i == j)
            })
        });
    Ok(ModularReport { n, modulus: m, compared: chosen.len(), mismatches, product_is_identity })
}

/// `count` distinct tree-like permutations of `S_n`, seeded.
pub fn sample_tree_like(n: usize, count: usize, seed: u64) -> Vec<Perm> {
    let mut pool: Vec<Perm> = Perm::all(n).into_iter().filter(is_tree_like).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(count);
    pool.sort();
    pool
}

/// Expansion as `{perm: {word: entry}}` with words in basis order.
pub fn expansion_json(e: &OpExpansion<Frac>) -> serde_json::Value {
    e.to_json()
}

/// Dense entry lookup by word strings, for displays.
pub fn dense_entry<'a>(m: &'a GramMatrix<Frac>, i: &str, j: &str) -> Option<&'a Frac> {
    let b = m.basis();
    let pi = b.words().iter().position(|w| word_string(w) == i)?;
    let pj = b.words().iter().position(|w| word_string(w) == j)?;
    Some(m.get(pi, pj))
}

/// `sign(k)` as used in displays.
pub fn parity_sign(k: usize) -> i64 {
    sign(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_fraction;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn two_letters() {
        assert_eq!(lambda_id_template(2, IdForm::OuterBrackets), parse_fraction("1 / Box{1,2}").unwrap());
        // Λ(21) = −1/□ in position variables
        assert_eq!(lambda_template(&p("21"), LambdaAlgo::Recursive), parse_fraction("-1 / Box{1,2}").unwrap());
    }

    #[test]
    fn sigma_of_three_blocks() {
        // 1/□_{1..8} · (−1 + 1/□_{1..5} + 1/□_{5..8})
        let s = Subdivision::from_cuts(1, 8, &[4, 5]);
        let want = (Frac::one().div_box(pos_box(1, 5)) + Frac::one().div_box(pos_box(5, 8)) - Frac::one())
            .div_box(pos_box(1, 8));
        assert_eq!(lambda_sigma(&s), want);
    }

    #[test]
    fn psi_inverts_phi() {
        let basis = Basis::generic(3);
        for (a, b) in [(1, 2), (2, 3), (1, 3)] {
            let w = rhat_frac(&basis, &Perm::longest(a, b, 3).unwrap());
            let id = OpExpansion::identity(basis.clone());
            let phi = if (b - a + 1) % 2 == 0 { id.plus(&w) } else { id.minus(&w) };
            assert_eq!(phi.times(&psi(&basis, a, b)), id);
        }
    }

    #[test]
    fn non_tree_like_vanishes() {
        for g in Perm::all(4) {
            let t = lambda_template(&g, LambdaAlgo::Recursive);
            assert_eq!(t.is_zero(), !is_tree_like(&g), "{g}");
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in InverseMethod::ALL {
            assert_eq!(m.to_string().parse::<InverseMethod>().unwrap(), m);
        }
        assert!("gauss".parse::<InverseMethod>().is_err());
    }
}
