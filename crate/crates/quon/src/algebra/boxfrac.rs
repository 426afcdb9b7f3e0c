use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::mono::{Label, Mono, ParamVar};
use super::poly::Poly;
use super::AlgebraError;

/// A box factor `1 - m`, stored by its monomial `m` (never `1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxFactor(Mono);

impl BoxFactor {
    /// `1 - m`; rejects `m = 1`, which would be the zero polynomial.
    pub fn new(m: Mono) -> Result<Self, AlgebraError> {
        if m.is_one() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(BoxFactor(m))
    }

    /// `□` over the letters `labels`: `1 - ∏_{a != b} x_{i_a i_b}`, taken over
    /// ordered pairs of distinct positions.
    pub fn over_letters(labels: &[Label]) -> Result<Self, AlgebraError> {
        let mut m = Vec::new();
        for (a, &i) in labels.iter().enumerate() {
            for (b, &j) in labels.iter().enumerate() {
                if a != b {
                    m.push((ParamVar::Pair(i, j), 1));
                }
            }
        }
        BoxFactor::new(Mono::from_pairs(m))
    }

    pub fn mono(&self) -> &Mono {
        &self.0
    }

    pub fn poly(&self) -> Poly {
        Poly::one_minus(&self.0)
    }

    pub fn one_param(&self) -> BoxFactor {
        BoxFactor(self.0.one_param())
    }

    pub fn substitute(&self, f: &impl Fn(ParamVar) -> Mono) -> Result<BoxFactor, AlgebraError> {
        BoxFactor::new(self.0.substitute(f))
    }

    /// The label set `T` when `m` is exactly the canonical product over `T`.
    pub fn label_set(&self) -> Option<Vec<Label>> {
        let mut labels = Vec::new();
        for &(v, e) in self.0.terms() {
            match v {
                ParamVar::Pair(i, j) if i != j && e == 1 => {
                    labels.push(i);
                    labels.push(j);
                }
                _ => return None,
            }
        }
        labels.sort_unstable();
        labels.dedup();
        let canonical = BoxFactor::over_letters(&labels).ok()?;
        (canonical == *self).then_some(labels)
    }
}

impl fmt::Display for BoxFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label_set() {
            Some(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
                write!(f, "Box{{{}}}", parts.join(","))
            }
            None => write!(f, "(1 - {})", self.0),
        }
    }
}

/// Rational function `num / ∏ den` whose denominator is a multiset of box
/// factors. Kept reduced: no denominator factor divides the numerator.
#[derive(Clone, Debug, Default)]
pub struct BoxFraction {
    num: Poly,
    den: BTreeMap<BoxFactor, u32>,
}

impl BoxFraction {
    pub fn zero() -> Self {
        BoxFraction::default()
    }

    pub fn one() -> Self {
        BoxFraction::from_poly(Poly::one())
    }

    pub fn from_poly(num: Poly) -> Self {
        BoxFraction { num, den: BTreeMap::new() }
    }

    /// `1 / □`.
    pub fn inverse_box(b: BoxFactor) -> Self {
        BoxFraction::new(Poly::one(), [(b, 1)])
    }

    /// Builds and reduces `num / ∏ den`.
    pub fn new<I: IntoIterator<Item = (BoxFactor, u32)>>(num: Poly, den: I) -> Self {
        let mut d = BTreeMap::new();
        for (b, e) in den {
            if e > 0 {
                *d.entry(b).or_insert(0) += e;
            }
        }
        let mut f = BoxFraction { num, den: d };
        f.reduce();
        f
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<BoxFactor, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn den_poly(&self) -> Poly {
        self.den.iter().map(|(b, &e)| b.poly().pow(e)).product()
    }

    /// Cancels denominator factors that divide the numerator exactly.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let keys: Vec<BoxFactor> = self.den.keys().cloned().collect();
        for b in keys {
            let p = b.poly();
            loop {
                let e = self.den[&b];
                if e == 0 {
                    break;
                }
                match self.num.exact_div(&p) {
                    Ok(q) => {
                        self.num = q;
                        *self.den.get_mut(&b).unwrap() -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
        self.den.retain(|_, e| *e > 0);
    }

    pub fn is_reduced(&self) -> bool {
        if self.num.is_zero() {
            return self.den.is_empty();
        }
        self.den.iter().all(|(b, &e)| e > 0 && !b.poly().divides(&self.num))
    }

    /// Numerator scaled to the common denominator `lcm`, which must contain `den`.
    fn lift(&self, lcm: &BTreeMap<BoxFactor, u32>) -> Poly {
        let mut n = self.num.clone();
        for (b, &e) in lcm {
            let have = self.den.get(b).copied().unwrap_or(0);
            if e > have {
                n = &n * &b.poly().pow(e - have);
            }
        }
        n
    }

    fn lcm_den(&self, other: &BoxFraction) -> BTreeMap<BoxFactor, u32> {
        let mut l = self.den.clone();
        for (b, &e) in &other.den {
            let x = l.entry(b.clone()).or_insert(0);
            *x = (*x).max(e);
        }
        l
    }

    pub fn mul_poly(&self, p: &Poly) -> BoxFraction {
        BoxFraction::new(&self.num * p, self.den.clone())
    }

    pub fn mul_mono(&self, m: &Mono) -> BoxFraction {
        BoxFraction::new(self.num.mul_mono(m), self.den.clone())
    }

    /// Divides by a monomial, if the numerator allows it.
    pub fn div_mono(&self, m: &Mono) -> Result<BoxFraction, AlgebraError> {
        let n = self.num.exact_div(&Poly::mono(m.clone()))?;
        Ok(BoxFraction { num: n, den: self.den.clone() })
    }

    pub fn div_box(&self, b: BoxFactor) -> BoxFraction {
        let mut den = self.den.clone();
        *den.entry(b).or_insert(0) += 1;
        BoxFraction::new(self.num.clone(), den)
    }

    pub fn conjugate(&self) -> BoxFraction {
        BoxFraction::new(
            self.num.conjugate(),
            self.den.iter().map(|(b, &e)| (BoxFactor(b.0.conjugate()), e)),
        )
    }

    pub fn one_param(&self) -> BoxFraction {
        BoxFraction::new(self.num.one_param(), self.den.iter().map(|(b, &e)| (b.one_param(), e)))
    }

    pub fn substitute(&self, f: &impl Fn(ParamVar) -> Mono) -> Result<BoxFraction, AlgebraError> {
        let mut den = Vec::new();
        for (b, &e) in &self.den {
            den.push((b.substitute(f)?, e));
        }
        Ok(BoxFraction::new(self.num.substitute(f), den))
    }

    /// `Some(p)` when `self · m` is the polynomial `p`.
    pub fn times_poly_exact(&self, m: &Poly) -> Option<Poly> {
        (&self.num * m).exact_div(&self.den_poly()).ok()
    }
}

impl PartialEq for BoxFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let l = self.lcm_den(other);
        self.lift(&l) == other.lift(&l)
    }
}

impl Eq for BoxFraction {}

impl From<Poly> for BoxFraction {
    fn from(p: Poly) -> Self {
        BoxFraction::from_poly(p)
    }
}

impl Add<&BoxFraction> for &BoxFraction {
    type Output = BoxFraction;
    fn add(self, rhs: &BoxFraction) -> BoxFraction {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return BoxFraction::new(&self.num + &rhs.num, self.den.clone());
        }
        let l = self.lcm_den(rhs);
        BoxFraction::new(&self.lift(&l) + &rhs.lift(&l), l)
    }
}

impl Sub<&BoxFraction> for &BoxFraction {
    type Output = BoxFraction;
    fn sub(self, rhs: &BoxFraction) -> BoxFraction {
        self + &(-rhs)
    }
}

impl Mul<&BoxFraction> for &BoxFraction {
    type Output = BoxFraction;
    fn mul(self, rhs: &BoxFraction) -> BoxFraction {
        if self.is_zero() || rhs.is_zero() {
            return BoxFraction::zero();
        }
        let mut den = self.den.clone();
        for (b, &e) in &rhs.den {
            *den.entry(b.clone()).or_insert(0) += e;
        }
        BoxFraction::new(&self.num * &rhs.num, den)
    }
}

impl Neg for &BoxFraction {
    type Output = BoxFraction;
    fn neg(self) -> BoxFraction {
        BoxFraction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for BoxFraction {
    type Output = BoxFraction;
    fn neg(self) -> BoxFraction {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<BoxFraction> for BoxFraction {
            type Output = BoxFraction;
            fn $f(self, rhs: BoxFraction) -> BoxFraction {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&BoxFraction> for BoxFraction {
            type Output = BoxFraction;
            fn $f(self, rhs: &BoxFraction) -> BoxFraction {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for BoxFraction {
    fn sum<I: Iterator<Item = BoxFraction>>(iter: I) -> BoxFraction {
        iter.fold(BoxFraction::zero(), |a, b| a + b)
    }
}

impl fmt::Display for BoxFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(b, &e)| if e == 1 { b.to_string() } else { format!("{b}^{e}") })
            .collect();
        if parts.len() == 1 {
            write!(f, " / {}", parts[0])
        } else {
            write!(f, " / ({})", parts.join(" * "))
        }
    }
}
