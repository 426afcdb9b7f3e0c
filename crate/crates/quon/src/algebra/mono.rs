use std::cmp::Ordering;
use std::fmt;

/// Generator label. Labels are small positive integers.
pub type Label = u8;

/// A formal parameter: `x_ij` standing for `q_ij`, or the single variable `q`
/// of the one-parameter specialization.
///
/// The derived order sorts pairs by `(i, j)` and puts `Q` last.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamVar {
    Pair(Label, Label),
    Q,
}

impl ParamVar {
    /// The involution `x_ij <-> x_ji`; fixes `x_ii` and `q`.
    pub fn conjugate(self) -> Self {
        match self {
            ParamVar::Pair(i, j) => ParamVar::Pair(j, i),
            ParamVar::Q => ParamVar::Q,
        }
    }
}

impl fmt::Display for ParamVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParamVar::Pair(i, j) if i < 10 && j < 10 => write!(f, "q{i}{j}"),
            ParamVar::Pair(i, j) => write!(f, "q[{i},{j}]"),
            ParamVar::Q => write!(f, "q"),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` list with no zero exponents.
///
/// `Ord` is the lexicographic monomial order in which smaller variables are
/// more significant; it is multiplicative, which exact division relies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<(ParamVar, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: ParamVar) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn pair(i: Label, j: Label) -> Self {
        Mono::var(ParamVar::Pair(i, j))
    }

    pub fn q_pow(k: u32) -> Self {
        if k == 0 {
            Mono::one()
        } else {
            Mono(vec![(ParamVar::Q, k)])
        }
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (ParamVar, u32)>>(it: I) -> Self {
        let mut v: Vec<(ParamVar, u32)> = it.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_by_key(|&(x, _)| x);
        let mut out: Vec<(ParamVar, u32)> = Vec::with_capacity(v.len());
        for (x, e) in v {
            match out.last_mut() {
                Some((y, f)) if *y == x => *f += e,
                _ => out.push((x, e)),
            }
        }
        Mono(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> &[(ParamVar, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: ParamVar) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(x, _)| x)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    pub fn pow(&self, k: u32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Mono(out))
    }

    pub fn divides(&self, other: &Mono) -> bool {
        other.div(self).is_some()
    }

    pub fn conjugate(&self) -> Mono {
        Mono::from_pairs(self.0.iter().map(|&(v, e)| (v.conjugate(), e)))
    }

    /// Applies a variable substitution that maps variables to monomials.
    pub fn substitute(&self, f: &impl Fn(ParamVar) -> Mono) -> Mono {
        self.0
            .iter()
            .fold(Mono::one(), |acc, &(v, e)| acc.mul(&f(v).pow(e)))
    }

    /// Every pair variable becomes `q`.
    pub fn one_param(&self) -> Mono {
        Mono::q_pow(self.degree())
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(x, e)), Some(&(y, f))) => match x.cmp(&y) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_multiplicative() {
        let x1 = Mono::pair(1, 2);
        let x2 = Mono::pair(2, 1);
        assert!(x1 > x2);
        assert!(x1.mul(&x1) > x1.mul(&x2));
        assert!(Mono::one() < x2);
    }

    #[test]
    fn division() {
        let m = Mono::from_pairs([(ParamVar::Pair(1, 2), 2), (ParamVar::Pair(2, 1), 1)]);
        assert_eq!(m.div(&Mono::pair(1, 2)), Some(Mono::from_pairs([(ParamVar::Pair(1, 2), 1), (ParamVar::Pair(2, 1), 1)])));
        assert_eq!(m.div(&Mono::pair(1, 3)), None);
        assert_eq!(Mono::pair(1, 2).div(&m), None);
    }
}
