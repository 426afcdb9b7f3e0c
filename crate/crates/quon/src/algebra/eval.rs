use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::boxfrac::BoxFraction;
use super::mono::{Label, Mono, ParamVar};
use super::poly::Poly;
use super::AlgebraError;

/// Arbitrary-precision rational.
pub type Rat = BigRational;
/// Exact Gaussian rational `re + i·im`.
pub type GaussRat = Complex<Rat>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rat, im: Rat) -> GaussRat {
    Complex::new(re, im)
}

pub fn gauss_int(n: i64) -> GaussRat {
    Complex::new(rat(n, 1), Rat::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// `x_ji = conj(x_ij)` and `x_ii` real.
    Hermitian,
    /// `x_ij = x_ji` real.
    SymmetricReal,
    /// Every pair variable takes the single value of `q`.
    OneParam,
}

/// A validated point at which polynomials are evaluated.
#[derive(Clone, Debug)]
pub struct Assignment {
    mode: EvalMode,
    values: BTreeMap<ParamVar, GaussRat>,
}

impl Assignment {
    /// Validates `values` against the constraints of `mode`.
    pub fn new(mode: EvalMode, values: BTreeMap<ParamVar, GaussRat>) -> Result<Self, AlgebraError> {
        let bad = |msg: String| Err(AlgebraError::InvalidAssignment(msg));
        for (&v, x) in &values {
            match (mode, v) {
                (EvalMode::OneParam, ParamVar::Pair(..)) => {
                    return bad(format!("{v} assigned in one-parameter mode"));
                }
                (_, ParamVar::Pair(i, j)) => {
                    let must_be_real = mode == EvalMode::SymmetricReal || i == j;
                    if must_be_real && !x.im.is_zero() {
                        return bad(format!("{v} must be real"));
                    }
                    if let Some(y) = values.get(&ParamVar::Pair(j, i)) {
                        let expected = match mode {
                            EvalMode::Hermitian => x.conj(),
                            _ => x.clone(),
                        };
                        if *y != expected {
                            return bad(format!("{v} and its transpose violate {mode:?} symmetry"));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(Assignment { mode, values })
    }

    /// Hermitian point from values on pairs `i <= j`; transposes are filled in.
    pub fn hermitian(upper: impl IntoIterator<Item = ((Label, Label), GaussRat)>) -> Result<Self, AlgebraError> {
        let mut values = BTreeMap::new();
        for ((i, j), x) in upper {
            values.insert(ParamVar::Pair(j, i), x.conj());
            values.insert(ParamVar::Pair(i, j), x);
        }
        Assignment::new(EvalMode::Hermitian, values)
    }

    /// Symmetric real point from values on pairs `i <= j`.
    pub fn symmetric_real(upper: impl IntoIterator<Item = ((Label, Label), Rat)>) -> Result<Self, AlgebraError> {
        let mut values = BTreeMap::new();
        for ((i, j), x) in upper {
            let z = Complex::new(x, Rat::zero());
            values.insert(ParamVar::Pair(j, i), z.clone());
            values.insert(ParamVar::Pair(i, j), z);
        }
        Assignment::new(EvalMode::SymmetricReal, values)
    }

    pub fn one_param(q: GaussRat) -> Self {
        Assignment { mode: EvalMode::OneParam, values: BTreeMap::from([(ParamVar::Q, q)]) }
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn values(&self) -> &BTreeMap<ParamVar, GaussRat> {
        &self.values
    }

    pub fn get(&self, v: ParamVar) -> Result<&GaussRat, AlgebraError> {
        let key = match self.mode {
            EvalMode::OneParam => ParamVar::Q,
            _ => v,
        };
        self.values.get(&key).ok_or(AlgebraError::MissingVariable(v))
    }

    pub fn eval_mono(&self, m: &Mono) -> Result<GaussRat, AlgebraError> {
        let mut acc = GaussRat::one();
        for &(v, e) in m.terms() {
            acc *= pow(self.get(v)?, e);
        }
        Ok(acc)
    }

    pub fn eval(&self, p: &Poly) -> Result<GaussRat, AlgebraError> {
        let mut acc = GaussRat::zero();
        for (m, c) in p.terms() {
            acc += self.eval_mono(m)? * Complex::new(Rat::from_integer(c.clone()), Rat::zero());
        }
        Ok(acc)
    }

    /// Value of a box fraction; a vanishing denominator is an error.
    pub fn eval_fraction(&self, f: &BoxFraction) -> Result<GaussRat, AlgebraError> {
        let mut d = GaussRat::one();
        for (b, &e) in f.den() {
            d *= pow(&(GaussRat::one() - self.eval_mono(b.mono())?), e);
        }
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.eval(f.num())? / d)
    }
}

pub fn pow(x: &GaussRat, e: u32) -> GaussRat {
    let mut acc = GaussRat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// `evaluate(p, assignment)`.
pub fn evaluate(p: &Poly, a: &Assignment) -> Result<GaussRat, AlgebraError> {
    a.eval(p)
}
