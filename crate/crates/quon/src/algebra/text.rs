//! String and JSON forms of polynomials and box fractions.
//!
//! The string grammar is what `Display` prints:
//! `1 - q12*q21`, `3*q^2`, `(1 + q12) / (Box{1,2}^2 * (1 - q13*q31*q11))`.
//! Division is only by products of box factors.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::boxfrac::{BoxFactor, BoxFraction};
use super::mono::{Label, Mono, ParamVar};
use super::poly::Poly;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(ParamVar),
    Box(Vec<Label>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse(msg.into())
}

fn lex(s: &str) -> Result<Vec<Tok>, AlgebraError> {
    let c: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let label_list = |body: &str| -> Result<Vec<Label>, AlgebraError> {
        body.split(',')
            .map(|t| t.trim().parse::<Label>().map_err(|_| err(format!("bad label '{t}'"))))
            .collect()
    };
    while i < c.len() {
        let ch = c[i];
        match ch {
            ' ' | '\t' | '\n' => i += 1,
            '+' => { out.push(Tok::Plus); i += 1 }
            '-' => { out.push(Tok::Minus); i += 1 }
            '*' => { out.push(Tok::Star); i += 1 }
            '/' => { out.push(Tok::Slash); i += 1 }
            '^' => { out.push(Tok::Caret); i += 1 }
            '(' => { out.push(Tok::LParen); i += 1 }
            ')' => { out.push(Tok::RParen); i += 1 }
            '0'..='9' => {
                let st = i;
                while i < c.len() && c[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = c[st..i].iter().collect();
                out.push(Tok::Int(t.parse().map_err(|_| err("bad integer"))?));
            }
            'B' => {
                let rest: String = c[i..].iter().collect();
                let body_start = "Box{".len();
                if !rest.starts_with("Box{") {
                    return Err(err(format!("unexpected input at {i}")));
                }
                let close = rest.find('}').ok_or_else(|| err("unterminated Box{"))?;
                out.push(Tok::Box(label_list(&rest[body_start..close])?));
                i += rest[..=close].chars().count();
            }
            'q' => {
                i += 1;
                if i < c.len() && c[i] == '[' {
                    let rest: String = c[i + 1..].iter().collect();
                    let close = rest.find(']').ok_or_else(|| err("unterminated q["))?;
                    let ls = label_list(&rest[..close])?;
                    if ls.len() != 2 {
                        return Err(err("q[..] takes two labels"));
                    }
                    out.push(Tok::Var(ParamVar::Pair(ls[0], ls[1])));
                    i += 1 + rest[..=close].chars().count();
                } else if i + 1 < c.len() && c[i].is_ascii_digit() && c[i + 1].is_ascii_digit() {
                    let a = c[i].to_digit(10).unwrap() as Label;
                    let b = c[i + 1].to_digit(10).unwrap() as Label;
                    out.push(Tok::Var(ParamVar::Pair(a, b)));
                    i += 2;
                } else {
                    out.push(Tok::Var(ParamVar::Q));
                }
            }
            _ => return Err(err(format!("unexpected character '{ch}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<(), AlgebraError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(err(format!("expected {t:?}")))
        }
    }

    fn exponent(&mut self) -> Result<u32, AlgebraError> {
        if !self.eat(&Tok::Caret) {
            return Ok(1);
        }
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                u32::try_from(k).map_err(|_| err("exponent too large"))
            }
            _ => Err(err("expected exponent")),
        }
    }

    fn expr(&mut self) -> Result<BoxFraction, AlgebraError> {
        let mut acc = if self.eat(&Tok::Minus) { -self.term()? } else { self.term()? };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<BoxFraction, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc * self.factor()?;
            } else if self.eat(&Tok::Slash) {
                for (b, e) in self.denominator()? {
                    for _ in 0..e {
                        acc = acc.div_box(b.clone());
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<BoxFraction, AlgebraError> {
        let base = match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                BoxFraction::from_poly(Poly::constant(k))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                BoxFraction::from_poly(Poly::var(v))
            }
            Some(Tok::Box(ls)) => {
                self.pos += 1;
                BoxFraction::from_poly(BoxFactor::over_letters(&ls)?.poly())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                e
            }
            other => return Err(err(format!("unexpected token {other:?}"))),
        };
        let k = self.exponent()?;
        Ok((1..k).fold(base.clone(), |acc, _| &acc * &base))
    }

    /// A box factor, `(1 - m)`, or a parenthesized product of those.
    fn denominator(&mut self) -> Result<Vec<(BoxFactor, u32)>, AlgebraError> {
        if let Some(b) = self.box_atom()? {
            let e = self.exponent()?;
            return Ok(vec![(b, e)]);
        }
        self.expect(&Tok::LParen)?;
        let mut out = Vec::new();
        loop {
            let b = self.box_atom()?.ok_or_else(|| err("expected box factor in denominator"))?;
            out.push((b, self.exponent()?));
            if !self.eat(&Tok::Star) {
                break;
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(out)
    }

    fn box_atom(&mut self) -> Result<Option<BoxFactor>, AlgebraError> {
        if let Some(Tok::Box(ls)) = self.peek().cloned() {
            self.pos += 1;
            return Ok(Some(BoxFactor::over_letters(&ls)?));
        }
        let save = self.pos;
        if self.eat(&Tok::LParen) && self.eat(&Tok::Int(BigInt::from(1))) && self.eat(&Tok::Minus) {
            let mut m = Mono::one();
            while let Some(Tok::Var(v)) = self.peek().cloned() {
                self.pos += 1;
                m = m.mul(&Mono::var(v).pow(self.exponent()?));
                if !self.eat(&Tok::Star) {
                    break;
                }
            }
            if self.eat(&Tok::RParen) && !m.is_one() {
                return Ok(Some(BoxFactor::new(m)?));
            }
        }
        self.pos = save;
        Ok(None)
    }
}

pub fn parse_fraction(s: &str) -> Result<BoxFraction, AlgebraError> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(f)
}

pub fn parse_poly(s: &str) -> Result<Poly, AlgebraError> {
    let f = parse_fraction(s)?;
    if !f.is_polynomial() {
        return Err(err("expected a polynomial"));
    }
    Ok(f.num().clone())
}

impl FromStr for Poly {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl FromStr for BoxFraction {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fraction(s)
    }
}

/// JSON record for one term: exponent vector as `[variable, exponent]` pairs.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct TermJson {
    pub exponents: Vec<(String, u32)>,
    pub coeff: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct BoxJson {
    pub monomial: Vec<(String, u32)>,
    pub power: u32,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FractionJson {
    pub num: PolyJson,
    pub den: Vec<BoxJson>,
}

fn var_from_name(s: &str) -> Result<ParamVar, AlgebraError> {
    match lex(s)?.as_slice() {
        [Tok::Var(v)] => Ok(*v),
        _ => Err(err(format!("bad variable name '{s}'"))),
    }
}

fn mono_to_json(m: &Mono) -> Vec<(String, u32)> {
    m.terms().iter().map(|&(v, e)| (v.to_string(), e)).collect()
}

fn mono_from_json(v: &[(String, u32)]) -> Result<Mono, AlgebraError> {
    let mut pairs = Vec::new();
    for (name, e) in v {
        pairs.push((var_from_name(name)?, *e));
    }
    Ok(Mono::from_pairs(pairs))
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .map(|(m, c)| TermJson { exponents: mono_to_json(m), coeff: c.to_string() })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for Poly {
    type Error = AlgebraError;
    fn try_from(j: &PolyJson) -> Result<Self, Self::Error> {
        let mut p = Poly::zero();
        for t in &j.terms {
            let c: BigInt = t.coeff.parse().map_err(|_| err("bad coefficient"))?;
            p.add_term(mono_from_json(&t.exponents)?, c);
        }
        Ok(p)
    }
}

impl From<&BoxFraction> for FractionJson {
    fn from(f: &BoxFraction) -> Self {
        FractionJson {
            num: f.num().into(),
            den: f
                .den()
                .iter()
                .map(|(b, &e)| BoxJson { monomial: mono_to_json(b.mono()), power: e })
                .collect(),
        }
    }
}

impl TryFrom<&FractionJson> for BoxFraction {
    type Error = AlgebraError;
    fn try_from(j: &FractionJson) -> Result<Self, Self::Error> {
        let num = Poly::try_from(&j.num)?;
        let mut den = Vec::new();
        for b in &j.den {
            den.push((BoxFactor::new(mono_from_json(&b.monomial)?)?, b.power));
        }
        Ok(BoxFraction::new(num, den))
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::try_from(&j).map_err(serde::de::Error::custom)
    }
}

impl Serialize for BoxFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FractionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxFraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = FractionJson::deserialize(d)?;
        BoxFraction::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_strings() {
        for s in ["1 - q12*q21", "0", "-3*q^2 + q", "q[10,2]^3 - 7"] {
            let p: Poly = s.parse().unwrap();
            assert_eq!(p.to_string().parse::<Poly>().unwrap(), p, "{s}");
        }
        let f: BoxFraction = "(1 + q12) / (Box{1,2}^2 * (1 - q^6))".parse().unwrap();
        assert_eq!(f.to_string().parse::<BoxFraction>().unwrap(), f);
        assert_eq!(f.den().values().sum::<u32>(), 3);
    }
}
