//! Words, weights and the deformed derivative calculus on the free algebra.
//!
//! The left derivative `ᵢ∂` realizes the annihilator `a_i` on the Fock space;
//! iterating it gives the inner product independently of any matrix formula.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Label, Mono, ParamVar, Poly};
use crate::perm::Perm;

pub type Word = Vec<Label>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FockError {
    #[error("duplicate label {0} in index set")]
    DuplicateLabel(Label),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
}

/// Ordered finite list of distinct generator labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet(Vec<Label>);

impl IndexSet {
    pub fn new(labels: Vec<Label>) -> Result<Self, FockError> {
        let mut seen = Vec::new();
        for &l in &labels {
            if seen.contains(&l) {
                return Err(FockError::DuplicateLabel(l));
            }
            seen.push(l);
        }
        Ok(IndexSet(labels))
    }

    /// `{1, …, n}`.
    pub fn first(n: usize) -> Self {
        IndexSet((1..=n as Label).collect())
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }
}

/// Multiset of labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(BTreeMap<Label, usize>);

impl Weight {
    pub fn from_multiplicities(m: impl IntoIterator<Item = (Label, usize)>) -> Self {
        let mut map = BTreeMap::new();
        for (l, k) in m {
            if k > 0 {
                *map.entry(l).or_insert(0) += k;
            }
        }
        Weight(map)
    }

    /// Multiplicities aligned to an index set, e.g. `[2, 0, 1]` over `{1,2,3}`.
    pub fn aligned(index: &IndexSet, mult: &[usize]) -> Result<Self, FockError> {
        if mult.len() > index.labels().len() {
            return Err(FockError::InvalidWeight(format!(
                "{} multiplicities for {} labels",
                mult.len(),
                index.labels().len()
            )));
        }
        Ok(Weight::from_multiplicities(index.labels().iter().copied().zip(mult.iter().copied())))
    }

    /// The generic weight `{1, …, n}`.
    pub fn generic(n: usize) -> Self {
        Weight::from_multiplicities((1..=n as Label).map(|l| (l, 1)))
    }

    pub fn of_word(w: &[Label]) -> Self {
        Weight::from_multiplicities(w.iter().map(|&l| (l, 1)))
    }

    pub fn size(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_generic(&self) -> bool {
        self.0.values().all(|&k| k <= 1)
    }

    pub fn multiplicity(&self, l: Label) -> usize {
        self.0.get(&l).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<Label, usize> {
        &self.0
    }

    pub fn labels(&self) -> Vec<Label> {
        self.0.keys().copied().collect()
    }

    /// Letters in increasing order with repetition: the smallest word.
    pub fn sorted_letters(&self) -> Word {
        self.0.iter().flat_map(|(&l, &k)| std::iter::repeat_n(l, k)).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.sorted_letters().iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", letters.join(","))
    }
}

pub fn word_string(w: &[Label]) -> String {
    if w.iter().all(|&l| l < 10) {
        w.iter().map(|l| l.to_string()).collect()
    } else {
        w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }
}

pub fn parse_word(s: &str) -> Option<Word> {
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse().ok()).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as Label)).collect()
    }
}

fn x(i: Label, j: Label) -> Mono {
    Mono::var(ParamVar::Pair(i, j))
}

/// Linear combination of words with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<Word, Poly>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    /// The vacuum `1`.
    pub fn vacuum() -> Self {
        FockVector::word(vec![])
    }

    pub fn word(w: Word) -> Self {
        FockVector::term(w, Poly::one())
    }

    pub fn term(w: Word, c: Poly) -> Self {
        let mut v = FockVector::zero();
        v.add(w, c);
        v
    }

    pub fn add(&mut self, w: Word, c: Poly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[Label]) -> Poly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> FockVector {
        let mut out = FockVector::zero();
        for (w, d) in &self.terms {
            out.add(w.clone(), d * c);
        }
        out
    }

    /// `θ_j · v`.
    pub fn prepend(&self, j: Label) -> FockVector {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            let mut w2 = vec![j];
            w2.extend_from_slice(w);
            out.add(w2, c.clone());
        }
        out
    }

    /// The anti-automorphism `ρ` reversing words.
    pub fn reverse(&self) -> FockVector {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            out.add(w.iter().rev().copied().collect(), c.clone());
        }
        out
    }

    /// Conjugates the coefficients.
    pub fn conjugate(&self) -> FockVector {
        let mut out = FockVector::zero();
        for (w, c) in &self.terms {
            out.add(w.clone(), c.conjugate());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.terms.iter().map(|(w, c)| (word_string(w), serde_json::Value::String(c.to_string()))).collect(),
        )
    }
}

/// `ᵢ∂(θ_{j1}⋯θ_{jn}) = Σ_{p : j_p = i} q_{i j1}⋯q_{i j(p-1)} θ_{j1}⋯θ̂_{jp}⋯θ_{jn}`.
pub fn partial_left(i: Label, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (w, c) in &v.terms {
        let mut pre = Mono::one();
        for (p, &l) in w.iter().enumerate() {
            if l == i {
                let mut rest = w.clone();
                rest.remove(p);
                out.add(rest, c.mul_mono(&pre));
            }
            pre = pre.mul(&x(i, l));
        }
    }
    out
}

/// `∂_i(θ_{j1}⋯θ_{jn}) = Σ_{p : j_p = i} q_{j(p+1) i}⋯q_{jn i} θ_{j1}⋯θ̂_{jp}⋯θ_{jn}`,
/// from `∂_i(xy) = β(|y|, i) ∂_i(x) y + x ∂_i(y)`.
pub fn partial_right(i: Label, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (w, c) in &v.terms {
        let mut post = Mono::one();
        for p in (0..w.len()).rev() {
            if w[p] == i {
                let mut rest = w.clone();
                rest.remove(p);
                out.add(rest, c.mul_mono(&post));
            }
            post = post.mul(&x(w[p], i));
        }
    }
    out
}

/// `A_{x,y} = ₓₙ∂⋯ₓ₁∂(θ_y)`, the Gram entry in row `x`, column `y`.
/// Equals the form `(θ_y, θ_x)`.
pub fn inner_product(xw: &[Label], yw: &[Label]) -> Poly {
    if xw.len() != yw.len() {
        return Poly::zero();
    }
    let mut v = FockVector::word(yw.to_vec());
    for &l in xw {
        v = partial_left(l, &v);
        if v.is_zero() {
            return Poly::zero();
        }
    }
    v.coeff(&[])
}

/// The sesquilinear form `(u, v)`: linear in `u`, conjugate-linear in `v`.
pub fn form(u: &FockVector, v: &FockVector) -> Poly {
    let mut acc = Poly::zero();
    for (a, c) in &u.terms {
        for (b, d) in &v.terms {
            acc = acc + &(&(c * &d.conjugate()) * &inner_product(b, a));
        }
    }
    acc
}

/// `ᵢ∂(θ_j w) = q_ij θ_j ᵢ∂(w) + δ_ij w`.
pub fn check_ccr(i: Label, j: Label, w: &[Label]) -> bool {
    let wv = FockVector::word(w.to_vec());
    let lhs = partial_left(i, &wv.prepend(j));
    let mut rhs = partial_left(i, &wv).prepend(j).scale(&Poly::mono(x(i, j)));
    if i == j {
        rhs = rhs.plus(&wv);
    }
    lhs == rhs
}

/// One term `coeff · left ⊗ right` of the braided coproduct.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoproductTerm {
    pub left: Word,
    pub right: Word,
    pub coeff: Mono,
}

/// `r(θ_w)` as a sum over `(k, l)`-shuffles `g`.
///
/// The left factor takes the letters at positions `g(1) < … < g(k)`; every
/// letter `u` of the right factor that precedes a letter `v` of the left
/// factor in `w` contributes `q_{uv}` (the braiding of `r(θ_u)` past `r(θ_v)`).
pub fn coproduct(w: &[Label]) -> Vec<CoproductTerm> {
    let n = w.len();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let left_pos: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 1).collect();
        let right_pos: Vec<usize> = (0..n).filter(|&p| mask >> p & 1 == 0).collect();
        let mut coeff = Mono::one();
        for &r in &right_pos {
            for &l in &left_pos {
                if r < l {
                    coeff = coeff.mul(&x(w[r], w[l]));
                }
            }
        }
        out.push(CoproductTerm {
            left: left_pos.iter().map(|&p| w[p]).collect(),
            right: right_pos.iter().map(|&p| w[p]).collect(),
            coeff,
        });
    }
    out.sort();
    out
}

/// The `(k, l)`-shuffle permutation with `g(1..k) = left positions`.
pub fn shuffle_perm(n: usize, left_positions: &[usize]) -> Perm {
    let mut v: Vec<u8> = left_positions.iter().map(|&p| p as u8).collect();
    v.extend((1..=n as u8).filter(|p| !left_positions.contains(&(*p as usize))));
    Perm::from_images(v).expect("shuffle is a permutation")
}

/// All words of a weight, lexicographic.
pub fn words_of_weight(nu: &Weight) -> Vec<Word> {
    fn rec(rem: &mut BTreeMap<Label, usize>, cur: &mut Word, out: &mut Vec<Word>, n: usize) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let keys: Vec<Label> = rem.keys().copied().collect();
        for l in keys {
            if rem[&l] == 0 {
                continue;
            }
            *rem.get_mut(&l).unwrap() -= 1;
            cur.push(l);
            rec(rem, cur, out, n);
            cur.pop();
            *rem.get_mut(&l).unwrap() += 1;
        }
    }
    let mut rem = nu.multiplicities().clone();
    let mut out = Vec::new();
    rec(&mut rem, &mut Vec::new(), &mut out, nu.size());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        let v = FockVector::word(vec![2, 1]);
        assert_eq!(partial_left(1, &v), FockVector::term(vec![2], Poly::mono(x(1, 2))));
        let v = FockVector::word(vec![1, 1]);
        assert_eq!(partial_left(1, &v), FockVector::term(vec![1], Poly::one() + Poly::mono(x(1, 1))));
        let v = FockVector::word(vec![1, 2]);
        assert_eq!(partial_right(1, &v), FockVector::term(vec![2], Poly::mono(x(2, 1))));
        assert!(partial_left(1, &FockVector::vacuum()).is_zero());
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&[1, 2, 3], &[1, 3, 2]), Poly::mono(x(2, 3)));
        assert_eq!(
            inner_product(&[1, 1, 3], &[1, 3, 1]),
            Poly::mono(x(1, 3)) + Poly::mono(x(1, 1).mul(&x(1, 3)))
        );
    }
}
