//! Gram matrices on weight spaces, diagonal operators and the
//! permutation-indexed operator expansions `Σ_g D(g)·R(g)`.
//!
//! Words are acted on by place permutation, `(g·j)_p = j_{g⁻¹(p)}`, and
//! `R(g)_{i,j} = δ_{i, g·j}`, so `R(g)R(h) = R(gh)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::algebra::{AlgebraError, Assignment, BoxFactor, GaussRat, Label, Mono, ParamVar, Poly, Ring};
use crate::fock::{word_string, words_of_weight, Weight, Word};
use crate::perm::{unimodal_subset, Perm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GramError {
    #[error("weight {0} is degenerate")]
    Degenerate(Weight),
    #[error("weight {0} is generic")]
    Generic(Weight),
    #[error("bounds violated: {0}")]
    Bounds(String),
    #[error("word {0} is not in the basis")]
    UnknownWord(String),
    #[error("matrix shape does not match the basis")]
    Shape,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// All words of one weight, in lexicographic order.
pub struct Basis {
    weight: Weight,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    tables: Mutex<HashMap<Perm, Arc<Vec<usize>>>>,
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Basis({}, {} words)", self.weight, self.words.len())
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
    }
}

impl Basis {
    pub fn new(weight: &Weight) -> Arc<Self> {
        let words = words_of_weight(weight);
        let index = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        Arc::new(Basis { weight: weight.clone(), words, index, tables: Mutex::new(HashMap::new()) })
    }

    pub fn generic(n: usize) -> Arc<Self> {
        Basis::new(&Weight::generic(n))
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// Word length `|ν|`.
    pub fn n(&self) -> usize {
        self.weight.size()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_generic(&self) -> bool {
        self.weight.is_generic()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, k: usize) -> &[Label] {
        &self.words[k]
    }

    pub fn position(&self, w: &[Label]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `k ↦ index of g·word_k`, cached per permutation.
    pub fn action(&self, g: &Perm) -> Arc<Vec<usize>> {
        if let Some(t) = self.tables.lock().expect("poisoned").get(g) {
            return t.clone();
        }
        let t: Arc<Vec<usize>> = Arc::new(self.words.iter().map(|w| self.index[&g.act(w)]).collect());
        self.tables.lock().expect("poisoned").insert(g.clone(), t.clone());
        t
    }

    /// Diagonal operator with entries `f(word)`.
    pub fn diag<T>(&self, f: impl Fn(&[Label]) -> T) -> DiagOp<T> {
        DiagOp(self.words.iter().map(|w| f(w)).collect())
    }
}

/// `q_{i_a i_b}` for 1-based positions.
pub fn pair_at(word: &[Label], a: usize, b: usize) -> Mono {
    Mono::pair(word[a - 1], word[b - 1])
}

/// `(Q_T)_{ii} = ∏_{a ≠ b ∈ T} q_{i_a i_b}`.
pub fn q_set(word: &[Label], positions: impl IntoIterator<Item = usize> + Clone) -> Mono {
    let mut m = Mono::one();
    for a in positions.clone() {
        for b in positions.clone() {
            if a != b {
                m = m.mul(&pair_at(word, a, b));
            }
        }
    }
    m
}

/// `Q_{[a..b]}` on one word.
pub fn q_interval(word: &[Label], a: usize, b: usize) -> Mono {
    q_set(word, a..=b)
}

/// `□_{[a..b]}` on one word; needs `a < b`.
pub fn box_interval(word: &[Label], a: usize, b: usize) -> Result<BoxFactor, AlgebraError> {
    BoxFactor::new(q_interval(word, a, b))
}

/// `Q(g)_{ii} = q_{i,g⁻¹} = ∏_{(a,b) ∈ I(g⁻¹)} q_{i_a i_b}`.
pub fn q_hat(word: &[Label], g: &Perm) -> Mono {
    let mut m = Mono::one();
    for (a, b) in g.inverse().inversion_set() {
        m = m.mul(&pair_at(word, a, b));
    }
    m
}

/// `q_{i,σ} = ∏_{(a,b) ∈ I(σ)} q_{i_a i_b}`.
pub fn q_word_perm(word: &[Label], s: &Perm) -> Mono {
    let mut m = Mono::one();
    for (a, b) in s.inversion_set() {
        m = m.mul(&pair_at(word, a, b));
    }
    m
}

/// A diagonal operator, one entry per basis word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagOp<T = Poly>(pub Vec<T>);

impl<T: Ring> DiagOp<T> {
    pub fn constant(len: usize, c: T) -> Self {
        DiagOp(vec![c; len])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Ring::is_zero)
    }

    pub fn times(&self, o: &DiagOp<T>) -> DiagOp<T> {
        DiagOp(self.0.iter().zip(&o.0).map(|(a, b)| a.times(b)).collect())
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> DiagOp<U> {
        DiagOp(self.0.iter().map(f).collect())
    }
}

impl<T: fmt::Display> DiagOp<T> {
    pub fn to_json(&self, basis: &Basis) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = basis
            .words()
            .iter()
            .zip(&self.0)
            .map(|(w, c)| (word_string(w), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Dense square matrix indexed by a basis.
#[derive(Clone, Debug)]
pub struct GramMatrix<T = Poly> {
    basis: Arc<Basis>,
    rows: Vec<Vec<T>>,
}

impl<T: Clone> GramMatrix<T> {
    pub fn new(basis: Arc<Basis>, rows: Vec<Vec<T>>) -> Result<Self, GramError> {
        let n = basis.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(GramError::Shape);
        }
        Ok(GramMatrix { basis, rows })
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<T>> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    /// Entry at a pair of words.
    pub fn entry(&self, i: &[Label], j: &[Label]) -> Result<&T, GramError> {
        let pi = self.basis.position(i).ok_or_else(|| GramError::UnknownWord(word_string(i)))?;
        let pj = self.basis.position(j).ok_or_else(|| GramError::UnknownWord(word_string(j)))?;
        Ok(&self.rows[pi][pj])
    }

    /// The entries with rows and columns listed in the order `words`.
    pub fn reorder(&self, words: &[Word]) -> Result<Vec<Vec<T>>, GramError> {
        let idx = words
            .iter()
            .map(|w| self.basis.position(w).ok_or_else(|| GramError::UnknownWord(word_string(w))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(idx.iter().map(|&i| idx.iter().map(|&j| self.rows[i][j].clone()).collect()).collect())
    }

    pub fn map<U: Clone + Send>(&self, f: impl Fn(&T) -> U + Sync) -> GramMatrix<U>
    where
        T: Sync,
    {
        let rows = self.rows.par_iter().map(|r| r.iter().map(&f).collect()).collect();
        GramMatrix { basis: self.basis.clone(), rows }
    }
}

impl<T: Ring> GramMatrix<T> {
    pub fn identity(basis: Arc<Basis>) -> Self {
        let n = basis.len();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
        GramMatrix { basis, rows }
    }

    pub fn mul(&self, o: &GramMatrix<T>) -> GramMatrix<T> {
        let n = self.size();
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = T::zero();
                        for k in 0..n {
                            let (a, b) = (&self.rows[i][k], &o.rows[k][j]);
                            if !a.is_zero() && !b.is_zero() {
                                acc = acc.plus(&a.times(b));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        GramMatrix { basis: self.basis.clone(), rows }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| if i == j { *x == T::one() } else { x.is_zero() })
        })
    }
}

impl<T: fmt::Display> GramMatrix<T> {
    pub fn to_json(&self) -> serde_json::Value {
        let basis: Vec<String> = self.basis.words().iter().map(|w| word_string(w)).collect();
        let entries: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        serde_json::json!({
            "weight": self.basis.weight().to_string(),
            "basis": basis,
            "entries": entries,
        })
    }

    /// Header row of basis words, then one row per word.
    pub fn to_csv(&self) -> String {
        let quote = |s: String| format!("\"{}\"", s.replace('"', "\"\""));
        let mut out = String::from("word");
        for w in self.basis.words() {
            out.push(',');
            out.push_str(&word_string(w));
        }
        out.push('\n');
        for (w, r) in self.basis.words().iter().zip(&self.rows) {
            out.push_str(&word_string(w));
            for x in r {
                out.push(',');
                out.push_str(&quote(x.to_string()));
            }
            out.push('\n');
        }
        out
    }
}

impl GramMatrix<Poly> {
    pub fn is_hermitian(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i..n).all(|j| self.rows[i][j] == self.rows[j][i].conjugate()))
    }

    /// `P A P = Ā` for the word-reversal permutation `P`.
    pub fn is_reversal_symmetric(&self) -> bool {
        let rev: Vec<usize> = self
            .basis
            .words()
            .iter()
            .map(|w| {
                let r: Word = w.iter().rev().copied().collect();
                self.basis.position(&r).expect("reversal preserves the weight")
            })
            .collect();
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.rows[rev[i]][rev[j]] == self.rows[i][j].conjugate()))
    }

    pub fn one_param(&self) -> GramMatrix<Poly> {
        self.map(Poly::one_param)
    }

    pub fn eval(&self, a: &Assignment) -> Result<GramMatrix<GaussRat>, GramError> {
        let rows = self
            .rows
            .par_iter()
            .map(|r| r.iter().map(|x| a.eval(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GramMatrix { basis: self.basis.clone(), rows })
    }
}

/// `A^(ν)` for generic `ν`: `A_{i,j} = q_{i,σ}` with `σ·i = j`.
pub fn build_generic(nu: &Weight) -> Result<GramMatrix<Poly>, GramError> {
    if !nu.is_generic() {
        return Err(GramError::Degenerate(nu.clone()));
    }
    let basis = Basis::new(nu);
    let rows = basis
        .words()
        .par_iter()
        .map(|i| {
            // letters of i that appear in reversed order in j
            basis
                .words()
                .iter()
                .map(|j| {
                    let pos_j: HashMap<Label, usize> = j.iter().enumerate().map(|(p, &l)| (l, p)).collect();
                    let mut m = Mono::one();
                    for a in 0..i.len() {
                        for b in a + 1..i.len() {
                            if pos_j[&i[a]] > pos_j[&i[b]] {
                                m = m.mul(&Mono::pair(i[a], i[b]));
                            }
                        }
                    }
                    Poly::mono(m)
                })
                .collect()
        })
        .collect();
    Ok(GramMatrix { basis, rows })
}

/// `A^(ν)` for degenerate `ν`: `A_{i,j} = Σ_{σ : σ·i = j} q_{i,σ}`.
pub fn build_degenerate(nu: &Weight) -> Result<GramMatrix<Poly>, GramError> {
    if nu.is_generic() {
        return Err(GramError::Generic(nu.clone()));
    }
    Ok(build_by_permutations(nu))
}

/// Either construction, by the kind of `ν`.
pub fn build(nu: &Weight) -> Result<GramMatrix<Poly>, GramError> {
    if nu.is_generic() {
        build_generic(nu)
    } else {
        build_degenerate(nu)
    }
}

fn build_by_permutations(nu: &Weight) -> GramMatrix<Poly> {
    let basis = Basis::new(nu);
    let perms = Perm::all(nu.size());
    let n = basis.len();
    let rows = basis
        .words()
        .par_iter()
        .map(|i| {
            let mut row = vec![Poly::zero(); n];
            for s in &perms {
                let j = basis.position(&s.act(i)).expect("action preserves the weight");
                row[j] = &row[j] + &Poly::mono(q_word_perm(i, s));
            }
            row
        })
        .collect();
    GramMatrix { basis, rows }
}

/// `Σ_g D(g)·R(g)` over a generic basis, zero diagonals omitted.
#[derive(Clone, Debug)]
pub struct OpExpansion<T = Poly> {
    basis: Arc<Basis>,
    terms: BTreeMap<Perm, DiagOp<T>>,
}

impl<T: Ring> PartialEq for OpExpansion<T> {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.terms == other.terms
    }
}

impl<T: Ring> OpExpansion<T> {
    pub fn zero(basis: Arc<Basis>) -> Self {
        OpExpansion { basis, terms: BTreeMap::new() }
    }

    pub fn identity(basis: Arc<Basis>) -> Self {
        let n = basis.n();
        OpExpansion::single(basis.clone(), Perm::identity(n), DiagOp::constant(basis.len(), T::one()))
    }

    /// `D·R(g)`.
    pub fn single(basis: Arc<Basis>, g: Perm, d: DiagOp<T>) -> Self {
        let mut e = OpExpansion::zero(basis);
        e.add_term(g, d);
        e
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Perm, DiagOp<T>> {
        &self.terms
    }

    /// The `g`-th diagonal; zero when absent.
    pub fn diagonal(&self, g: &Perm) -> DiagOp<T> {
        self.terms.get(g).cloned().unwrap_or_else(|| DiagOp::constant(self.basis.len(), T::zero()))
    }

    pub fn add_term(&mut self, g: Perm, d: DiagOp<T>) {
        match self.terms.get_mut(&g) {
            Some(cur) => {
                for (x, y) in cur.0.iter_mut().zip(&d.0) {
                    *x = x.plus(y);
                }
                if cur.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None if !d.is_zero() => {
                self.terms.insert(g, d);
            }
            None => {}
        }
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (g, d) in &o.terms {
            out.add_term(g.clone(), d.clone());
        }
        out
    }

    pub fn negate(&self) -> Self {
        let terms = self.terms.iter().map(|(g, d)| (g.clone(), d.map(Ring::negate))).collect();
        OpExpansion { basis: self.basis.clone(), terms }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }

    /// `D·X` for a diagonal `D`.
    pub fn scale_left(&self, d: &DiagOp<T>) -> Self {
        let mut out = OpExpansion::zero(self.basis.clone());
        for (g, c) in &self.terms {
            out.add_term(g.clone(), d.times(c));
        }
        out
    }

    /// Operator product, using `R(g)·D = D^{(g)}·R(g)` with
    /// `D^{(g)}_i = D_{g⁻¹·i}`.
    pub fn times(&self, o: &Self) -> Self {
        let partial: Vec<Vec<(Perm, DiagOp<T>)>> = self
            .terms
            .par_iter()
            .map(|(g, d1)| {
                let back = self.basis.action(&g.inverse());
                o.terms
                    .iter()
                    .map(|(h, d2)| {
                        let c = d1.0.iter().enumerate().map(|(i, x)| x.times(&d2.0[back[i]])).collect();
                        (g.compose(h), DiagOp(c))
                    })
                    .collect()
            })
            .collect();
        let mut out = OpExpansion::zero(self.basis.clone());
        for (g, d) in partial.into_iter().flatten() {
            out.add_term(g, d);
        }
        out
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> OpExpansion<U> {
        let mut out = OpExpansion::zero(self.basis.clone());
        for (g, d) in &self.terms {
            out.add_term(g.clone(), d.map(&f));
        }
        out
    }

    /// Dense matrix: `M_{i, g⁻¹·i} += D(g)_i`.
    pub fn to_dense(&self) -> GramMatrix<T> {
        let n = self.basis.len();
        let mut rows = vec![vec![T::zero(); n]; n];
        for (g, d) in &self.terms {
            let back = self.basis.action(&g.inverse());
            for (i, x) in d.0.iter().enumerate() {
                rows[i][back[i]] = rows[i][back[i]].plus(x);
            }
        }
        GramMatrix { basis: self.basis.clone(), rows }
    }

    /// Inverse of `to_dense`, on a generic basis (where each entry lies on
    /// exactly one diagonal).
    pub fn from_dense(m: &GramMatrix<T>) -> Result<Self, GramError> {
        let basis = m.basis().clone();
        if !basis.is_generic() {
            return Err(GramError::Degenerate(basis.weight().clone()));
        }
        let mut out = OpExpansion::zero(basis.clone());
        for g in Perm::all(basis.n()) {
            let back = basis.action(&g.inverse());
            let d = DiagOp((0..basis.len()).map(|i| m.get(i, back[i]).clone()).collect());
            out.add_term(g, d);
        }
        Ok(out)
    }
}

impl<T: Ring + fmt::Display> OpExpansion<T> {
    /// `{perm: {word: entry}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            self.terms.iter().map(|(g, d)| (g.to_string(), d.to_json(&self.basis))).collect();
        serde_json::Value::Object(map)
    }
}

fn require_generic(basis: &Basis) -> Result<(), GramError> {
    if basis.is_generic() {
        Ok(())
    } else {
        Err(GramError::Degenerate(basis.weight().clone()))
    }
}

/// `Q(g)` as a diagonal operator.
pub fn q_diag(basis: &Basis, g: &Perm) -> DiagOp<Poly> {
    basis.diag(|w| Poly::mono(q_hat(w, g)))
}

/// `Q_{a,b}`.
pub fn q_pair_diag(basis: &Basis, a: usize, b: usize) -> DiagOp<Poly> {
    basis.diag(|w| Poly::mono(pair_at(w, a, b)))
}

/// `Q_{{a,b}} = Q_{a,b}·Q_{b,a}`.
pub fn q_sym_diag(basis: &Basis, a: usize, b: usize) -> DiagOp<Poly> {
    basis.diag(|w| Poly::mono(pair_at(w, a, b).mul(&pair_at(w, b, a))))
}

/// `Q_T`.
pub fn q_set_diag(basis: &Basis, t: &[usize]) -> DiagOp<Poly> {
    basis.diag(|w| Poly::mono(q_set(w, t.iter().copied())))
}

/// `R̂(g) = Q(g)·R(g)`.
pub fn rhat(basis: &Arc<Basis>, g: &Perm) -> Result<OpExpansion<Poly>, GramError> {
    require_generic(basis)?;
    if g.n() != basis.n() {
        return Err(GramError::Bounds(format!("{g} acting on words of length {}", basis.n())));
    }
    Ok(OpExpansion::single(basis.clone(), g.clone(), q_diag(basis, g)))
}

/// `M(g₁, g₂) = ∏_{(a,b) ∈ I(g₁⁻¹) − I(g₂⁻¹g₁⁻¹)} Q_{{a,b}}`.
pub fn mult_factor(basis: &Basis, g1: &Perm, g2: &Perm) -> DiagOp<Poly> {
    let outer = g1.inverse().inversion_set();
    let inner = g2.inverse().compose(&g1.inverse()).inversion_set();
    let pairs: Vec<(usize, usize)> = outer.into_iter().filter(|p| !inner.contains(p)).collect();
    basis.diag(|w| {
        let mut m = Mono::one();
        for &(a, b) in &pairs {
            m = m.mul(&pair_at(w, a, b)).mul(&pair_at(w, b, a));
        }
        Poly::mono(m)
    })
}

fn check_level(basis: &Basis, m: usize, max: usize) -> Result<(), GramError> {
    require_generic(basis)?;
    if m == 0 || m > max {
        return Err(GramError::Bounds(format!("level {m} outside 1..={max}")));
    }
    Ok(())
}

fn cycle(m_lo: usize, m: usize, n: usize) -> Perm {
    Perm::cycle(m_lo, m, n).expect("bounds checked")
}

/// `A^m = Σ_{k=1}^m R̂(t_{k,m})`.
pub fn factor_a_m(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Poly>, GramError> {
    let n = basis.n();
    check_level(basis, m, n)?;
    let mut out = OpExpansion::zero(basis.clone());
    for k in 1..=m {
        out = out.plus(&rhat(basis, &cycle(k, m, n))?);
    }
    Ok(out)
}

/// `C^m = [I − R̂(t_{1,m})]⋯[I − R̂(t_{m−1,m})]`.
pub fn factor_c(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Poly>, GramError> {
    let n = basis.n();
    check_level(basis, m, n)?;
    let id = OpExpansion::identity(basis.clone());
    let mut out = id.clone();
    for k in 1..m {
        out = out.times(&id.minus(&rhat(basis, &cycle(k, m, n))?));
    }
    Ok(out)
}

/// `C^m = Σ_k (−1)^{m−k} Σ_{π ∈ S_m^(k)} R̂(π⁻¹)`, the unimodal expansion.
pub fn factor_c_unimodal(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Poly>, GramError> {
    let n = basis.n();
    check_level(basis, m, n)?;
    let mut out = OpExpansion::zero(basis.clone());
    for k in 1..=m {
        for p in unimodal_subset(m, k, n).map_err(|e| GramError::Bounds(e.to_string()))? {
            let t = rhat(basis, &p.inverse())?;
            out = if (m - k).is_multiple_of(2) { out.plus(&t) } else { out.minus(&t) };
        }
    }
    Ok(out)
}

/// `D^m = ∏_{k=1}^m [I − Q_{{m,m+1}}·R̂(t_{k,m})]`, for `m < n`.
pub fn factor_d(basis: &Arc<Basis>, m: usize) -> Result<OpExpansion<Poly>, GramError> {
    let n = basis.n();
    check_level(basis, m, n.saturating_sub(1))?;
    let id = OpExpansion::identity(basis.clone());
    let qs = q_sym_diag(basis, m, m + 1);
    let mut out = id.clone();
    for k in 1..=m {
        out = out.times(&id.minus(&rhat(basis, &cycle(k, m, n))?.scale_left(&qs)));
    }
    Ok(out)
}

/// `(C^m, D^m)`; `D^m` is absent at `m = n`.
pub fn factor_cd(
    basis: &Arc<Basis>,
    m: usize,
) -> Result<(OpExpansion<Poly>, Option<OpExpansion<Poly>>), GramError> {
    let c = factor_c(basis, m)?;
    let d = if m < basis.n() { Some(factor_d(basis, m)?) } else { None };
    Ok((c, d))
}

/// The generic model of a degenerate weight: `ν̃ = {1..n}` with
/// `φ: ν̃ → ν` sending copies to labels, and the group `H` of label
/// permutations of `ν̃` preserving `φ`.
#[derive(Clone, Debug)]
pub struct Embedding {
    weight: Weight,
    model: Weight,
    phi: Vec<Label>,
    group: Vec<Perm>,
}

impl Embedding {
    /// For generic `ν` the model is `ν` itself and `H` is trivial.
    pub fn new(nu: &Weight) -> Self {
        let n = nu.size();
        if nu.is_generic() {
            let labels = nu.sorted_letters();
            return Embedding { weight: nu.clone(), model: nu.clone(), phi: labels, group: vec![Perm::identity(n)] };
        }
        let phi = nu.sorted_letters();
        let group = Perm::all(n).into_iter().filter(|h| (1..=n).all(|c| phi[h.at(c) - 1] == phi[c - 1])).collect();
        Embedding { weight: nu.clone(), model: Weight::generic(n), phi, group }
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn model(&self) -> &Weight {
        &self.model
    }

    pub fn is_trivial(&self) -> bool {
        self.weight == self.model
    }

    /// `φ(c)` for a model label `c`.
    pub fn phi(&self, c: Label) -> Label {
        if self.is_trivial() {
            c
        } else {
            self.phi[c as usize - 1]
        }
    }

    pub fn group(&self) -> &[Perm] {
        &self.group
    }

    /// `x_{ab} ↦ x_{φ(a)φ(b)}`.
    pub fn substitution(&self) -> impl Fn(ParamVar) -> Mono + '_ {
        move |v| match v {
            ParamVar::Pair(a, b) => Mono::pair(self.phi(a), self.phi(b)),
            other => Mono::var(other),
        }
    }

    /// The lift of a word: the `k`-th occurrence of a label becomes its
    /// `k`-th copy.
    pub fn lift(&self, w: &[Label]) -> Word {
        if self.is_trivial() {
            return w.to_vec();
        }
        let mut next: HashMap<Label, usize> = HashMap::new();
        w.iter()
            .map(|&l| {
                let k = next.entry(l).or_insert(0);
                let copies: Vec<usize> = (0..self.phi.len()).filter(|&c| self.phi[c] == l).collect();
                let c = copies[*k];
                *k += 1;
                (c + 1) as Label
            })
            .collect()
    }

    fn act_labels(h: &Perm, w: &[Label]) -> Word {
        w.iter().map(|&c| h.at(c as usize) as Label).collect()
    }

    /// `X^(ν)_{i,j} = Σ_{h ∈ H} subst(X̃_{ĩ, h·j̃})`: recovers `A^(ν)` from
    /// `Ã` and `[A^(ν)]⁻¹` from `Ã⁻¹`.
    pub fn transfer<T: Ring>(
        &self,
        big: &GramMatrix<T>,
        subst: impl Fn(&T) -> T + Sync,
    ) -> Result<GramMatrix<T>, GramError> {
        if *big.basis().weight() != self.model {
            return Err(GramError::Shape);
        }
        let small = Basis::new(&self.weight);
        let lifts: Vec<Word> = small.words().iter().map(|w| self.lift(w)).collect();
        let rows = lifts
            .par_iter()
            .map(|li| {
                let pi = big.basis().position(li).expect("lift lies in the model basis");
                lifts
                    .iter()
                    .map(|lj| {
                        let mut acc = T::zero();
                        for h in &self.group {
                            let pj = big.basis().position(&Self::act_labels(h, lj)).expect("H preserves the model");
                            acc = acc.plus(big.get(pi, pj));
                        }
                        subst(&acc)
                    })
                    .collect()
            })
            .collect();
        GramMatrix::new(small, rows)
    }
}

/// The embedding data of a weight.
pub fn embed_degenerate(nu: &Weight) -> Embedding {
    Embedding::new(nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{inner_product, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn entries_match_oracle() {
        for nu in [Weight::generic(3), Weight::from_multiplicities([(1, 2), (3, 1)])] {
            let a = build(&nu).unwrap();
            for (i, x) in a.basis().words().iter().enumerate() {
                for (j, y) in a.basis().words().iter().enumerate() {
                    assert_eq!(*a.get(i, j), inner_product(x, y));
                }
            }
        }
    }

    #[test]
    fn q_pair_example() {
        let b = Basis::generic(4);
        let d = q_pair_diag(&b, 2, 4);
        assert_eq!(d.0[b.position(&w("4123")).unwrap()], Poly::mono(Mono::pair(1, 3)));
    }

    #[test]
    fn rhat_sum_and_product_convention() {
        let b = Basis::generic(3);
        let mut s = OpExpansion::zero(b.clone());
        for g in Perm::all(3) {
            s = s.plus(&rhat(&b, &g).unwrap());
        }
        assert_eq!(s.to_dense().rows(), build_generic(b.weight()).unwrap().rows());
        let plain = |g: &Perm| OpExpansion::<Poly>::single(b.clone(), g.clone(), DiagOp::constant(6, Poly::one()));
        for g in Perm::all(3) {
            for h in Perm::all(3) {
                assert_eq!(plain(&g).times(&plain(&h)), plain(&g.compose(&h)));
                let lhs = plain(&g).to_dense().mul(&plain(&h).to_dense());
                assert_eq!(lhs.rows(), plain(&g.compose(&h)).to_dense().rows());
            }
        }
    }

    #[test]
    fn degenerate_transfer() {
        let nu = Weight::from_multiplicities([(1, 2), (3, 1)]);
        let e = embed_degenerate(&nu);
        assert_eq!(e.group().len(), 2);
        let big = build_generic(e.model()).unwrap();
        let sub = e.substitution();
        let a = e.transfer(&big, |p| p.substitute(&sub)).unwrap();
        assert_eq!(a.rows(), build_degenerate(&nu).unwrap().rows());
    }
}
