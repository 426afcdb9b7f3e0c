use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mono::{Mono, ParamVar};
use super::AlgebraError;

/// Polynomial with integer coefficients in the formal parameters.
///
/// Terms are kept in monomial order with no zero coefficients, so derived
/// equality is structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Poly::term(Mono::one(), c)
    }

    pub fn term(m: Mono, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn mono(m: Mono) -> Self {
        Poly::term(m, 1)
    }

    pub fn var(v: ParamVar) -> Self {
        Poly::mono(Mono::var(v))
    }

    /// `1 - m`.
    pub fn one_minus(m: &Mono) -> Self {
        let mut p = Poly::one();
        p.add_term(m.clone(), BigInt::from(-1));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, BigInt)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Mono::one())
    }

    /// If the polynomial is a single monomial with coefficient 1, returns it.
    pub fn as_mono(&self) -> Option<&Mono> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    /// If the polynomial has the form `1 - m` with `m != 1`, returns `m`.
    pub fn as_one_minus(&self) -> Option<Mono> {
        if self.terms.len() != 2 || !self.constant_term().is_one() {
            return None;
        }
        let (m, c) = self.leading()?;
        (*c == BigInt::from(-1)).then(|| m.clone())
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / b`, or `NotDivisible`.
    ///
    /// Leading-term reduction in a monomial order: if `b | self` every
    /// remainder is a multiple of `b`, so its leading term is divisible by
    /// `lt(b)`; the first failure proves non-divisibility.
    pub fn exact_div(&self, b: &Poly) -> Result<Poly, AlgebraError> {
        let (lm, lc) = b.leading().ok_or(AlgebraError::DivisionByZero)?;
        let (lm, lc) = (lm.clone(), lc.clone());
        if let Some(m) = b.as_mono() {
            let mut q = Poly::zero();
            for (k, c) in &self.terms {
                q.terms.insert(k.div(m).ok_or(AlgebraError::NotDivisible)?, c.clone());
            }
            return Ok(q);
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading() {
            let m = rm.div(&lm).ok_or(AlgebraError::NotDivisible)?;
            let (c, rem) = rc.div_rem(&lc);
            if !rem.is_zero() {
                return Err(AlgebraError::NotDivisible);
            }
            for (bm, bc) in &b.terms {
                r.add_term(bm.mul(&m), -(bc * &c));
            }
            q.terms.insert(m, c);
        }
        Ok(q)
    }

    pub fn divides(&self, a: &Poly) -> bool {
        a.exact_div(self).is_ok()
    }

    /// The involution `x_ij <-> x_ji` applied termwise.
    pub fn conjugate(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.conjugate(), c.clone())))
    }

    pub fn substitute(&self, f: &impl Fn(ParamVar) -> Mono) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.substitute(f), c.clone())))
    }

    /// Specialization sending every pair variable to `q`.
    pub fn one_param(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.one_param(), c.clone())))
    }

    pub fn variables(&self) -> Vec<ParamVar> {
        let mut v: Vec<ParamVar> = self
            .terms
            .keys()
            .flat_map(|m| m.terms().iter().map(|&(x, _)| x))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn degree_in(&self, v: ParamVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm1(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Value modulo a prime `p < 2^32`, with variables valued by `val`.
    pub fn eval_mod(&self, p: u64, val: &impl Fn(ParamVar) -> u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = c.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0);
            for &(v, e) in m.terms() {
                t = t * pow_mod(val(v) % p, e as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl From<Mono> for Poly {
    fn from(m: Mono) -> Self {
        Poly::mono(m)
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(m) = rhs.as_mono() {
            return self.mul_mono(m);
        }
        if let Some(m) = self.as_mono() {
            return rhs.mul_mono(m);
        }
        let mut acc: HashMap<Mono, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *acc.entry(a.mul(b)).or_default() += ca * cb;
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Poly {
    fn product<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::one(), |a, b| a * b)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: u32) -> Poly {
        Poly::mono(Mono::q_pow(k))
    }

    #[test]
    fn geometric_quotient() {
        let a = Poly::one() - q(6);
        let b = Poly::one() - q(2);
        assert_eq!(a.exact_div(&b).unwrap(), Poly::one() + q(2) + q(4));
        assert_eq!(b.exact_div(&a), Err(AlgebraError::NotDivisible));
        assert_eq!(a.exact_div(&Poly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn display_constant_first() {
        let x = Poly::one() - &Poly::mono(Mono::pair(1, 2).mul(&Mono::pair(2, 1)));
        assert_eq!(x.to_string(), "1 - q12*q21");
    }
}
