//! Monomials and polynomials in jet variables `x_k^(m)`.
//!
//! A variable is packed into a `u32` key so that a larger key is a larger variable
//! in the monomial order: lower jet order first, then earlier position in the
//! ring's declared generator order. Monomials are compared graded reverse
//! lexicographically on total exponent.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::lin::Lin;
use crate::rat::Rat;

pub const MAX_ORDER: u32 = 0xFFFF;
pub const MAX_GENS: u32 = 0xFF;

/// Jet variable: generator position (in monomial order) and derivative order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

impl Var {
    pub fn new(pos: usize, order: u32) -> Var {
        assert!(order <= MAX_ORDER && (pos as u32) < MAX_GENS);
        Var(((MAX_ORDER - order) << 8) | (MAX_GENS - pos as u32))
    }

    pub fn pos(self) -> usize {
        (MAX_GENS - (self.0 & 0xFF)) as usize
    }

    pub fn order(self) -> u32 {
        MAX_ORDER - (self.0 >> 8)
    }

    pub fn shifted(self, k: u32) -> Var {
        Var::new(self.pos(), self.order() + k)
    }
}

/// A monomial: `(variable, exponent)` pairs sorted by ascending variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub SmallVec<[(Var, u32); 4]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(v: Var) -> Mono {
        let mut s = SmallVec::new();
        s.push((v, 1));
        Mono(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.order() * e).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.0.iter().map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = SmallVec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Mono(out)
    }

    pub fn divides(&self, o: &Mono) -> bool {
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < o.0.len() && o.0[j].0 < v {
                j += 1;
            }
            if j == o.0.len() || o.0[j].0 != v || o.0[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut out = SmallVec::new();
        let mut i = 0;
        for &(v, e) in &o.0 {
            if i < self.0.len() && self.0[i].0 == v {
                let d = e - self.0[i].1;
                if d > 0 {
                    out.push((v, d));
                }
                i += 1;
            } else {
                out.push((v, e));
            }
        }
        Mono(out)
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut out = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            if j == o.0.len() || (i < self.0.len() && self.0[i].0 < o.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || o.0[j].0 < self.0[i].0 {
                out.push(o.0[j]);
                j += 1;
            } else {
                out.push((self.0[i].0, self.0[i].1.max(o.0[j].1)));
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.0.iter().all(|(v, _)| o.exp(*v) == 0)
    }

    /// Removes one factor of `v`; `None` if absent.
    pub fn without(&self, v: Var) -> Option<Mono> {
        let idx = self.0.iter().position(|(w, _)| *w == v)?;
        let mut out = self.clone();
        if out.0[idx].1 == 1 {
            out.0.remove(idx);
        } else {
            out.0[idx].1 -= 1;
        }
        Some(out)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        let c = self.count().cmp(&o.count());
        if c != Ordering::Equal {
            return c;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            let k = match (self.0.get(i), o.0.get(j)) {
                (Some(a), Some(b)) => a.0.min(b.0),
                (Some(a), None) => a.0,
                (None, Some(b)) => b.0,
                (None, None) => unreachable!(),
            };
            let ea = match self.0.get(i) {
                Some(a) if a.0 == k => {
                    i += 1;
                    a.1
                }
                _ => 0,
            };
            let eb = match o.0.get(j) {
                Some(b) if b.0 == k => {
                    j += 1;
                    b.1
                }
                _ => 0,
            };
            if ea != eb {
                return eb.cmp(&ea);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial in jet variables (not necessarily reduced).
pub type Poly = Lin<Mono>;

pub fn poly_const(c: Rat) -> Poly {
    Poly::single(Mono::one(), c)
}

pub fn poly_var(v: Var) -> Poly {
    Poly::single(Mono::var(v), Rat::one())
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in a.iter() {
        for (n, d) in b.iter() {
            out.add_term(m.mul(n), c * d);
        }
    }
    out
}

pub fn poly_mul_mono(a: &Poly, m: &Mono, c: &Rat) -> Poly {
    let mut out = Poly::new();
    for (n, d) in a.iter() {
        out.add_term(n.mul(m), d * c);
    }
    out
}

/// The leading monomial under the monomial order.
pub fn leading(p: &Poly) -> Option<(Mono, Rat)> {
    p.iter().max_by(|a, b| a.0.cmp(b.0)).map(|(m, c)| (m.clone(), c.clone()))
}

/// Largest weight of any term.
pub fn poly_weight(p: &Poly) -> u32 {
    p.keys().map(|m| m.weight()).max().unwrap_or(0)
}

/// Total derivative: `∂ x^(m) = x^(m+1)` extended by Leibniz.
pub fn jet_d_mono(m: &Mono) -> Poly {
    let mut out = Poly::new();
    for &(v, e) in &m.0 {
        let rest = m.without(v).expect("present");
        out.add_term(rest.mul(&Mono::var(v.shifted(1))), Rat::from_int(e as i64));
    }
    out
}

pub fn jet_d_raw(p: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in p.iter() {
        out.add_scaled(&jet_d_mono(m), c);
    }
    out
}

/// Renders polynomials with generator names.
pub struct PolyDisplay<'a> {
    pub poly: &'a Poly,
    pub names: &'a [String],
}

pub fn mono_string(m: &Mono, names: &[String]) -> String {
    if m.is_one() {
        return "1".into();
    }
    // print in descending variable order: lowest jet order first
    m.0.iter()
        .rev()
        .map(|(v, e)| {
            let base = if v.order() == 0 { names[v.pos()].clone() } else { format!("{}^({})", names[v.pos()], v.order()) };
            if *e == 1 {
                base
            } else {
                format!("{base}**{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.poly.iter().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| b.0.cmp(a.0));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono_string(m, self.names))?;
            } else {
                write!(f, "{abs}*{}", mono_string(m, self.names))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot parse polynomial `{input}` at byte {offset}: {msg}")]
pub struct PolyParseError {
    pub input: String,
    pub offset: usize,
    pub msg: String,
}

/// Parses `+`, `-`, `*`, `**`/`^` with integer exponents, rational literals
/// (`3/4`), parentheses and generator names. `pos_of` maps a name to the
/// generator's position in the monomial order.
pub fn parse_poly(input: &str, pos_of: &dyn Fn(&str) -> Option<usize>) -> Result<Poly, PolyParseError> {
    let mut p = Parser { s: input.as_bytes(), i: 0, input, pos_of };
    let out = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    input: &'a str,
    pos_of: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyParseError {
        PolyParseError { input: self.input.to_string(), offset: self.i, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = Poly::new();
        let mut sign = Rat::one();
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            self.i += 1;
            if c == b'-' {
                sign = Rat::from_int(-1);
            }
        }
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, &sign);
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.i += 1;
                    sign = Rat::from_int(-1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, PolyParseError> {
        let mut acc = self.power()?;
        loop {
            self.ws();
            if self.s.get(self.i) == Some(&b'*') && self.s.get(self.i + 1) != Some(&b'*') {
                self.i += 1;
                let f = self.power()?;
                acc = poly_mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly, PolyParseError> {
        let base = self.atom()?;
        self.ws();
        let is_pow = self.s.get(self.i) == Some(&b'^') || (self.s.get(self.i) == Some(&b'*') && self.s.get(self.i + 1) == Some(&b'*'));
        if !is_pow {
            return Ok(base);
        }
        self.i += if self.s[self.i] == b'^' { 1 } else { 2 };
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        let e: u32 = self.input[start..self.i].parse().map_err(|_| self.err("expected exponent"))?;
        let mut acc = poly_const(Rat::one());
        for _ in 0..e {
            acc = poly_mul(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Poly, PolyParseError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.i += 1;
                let a = self.atom()?;
                Ok(a.scaled(&Rat::from_int(-1)))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'/') {
                    self.i += 1;
                }
                let r: Rat = self.input[start..self.i].parse().map_err(|_| self.err("bad number"))?;
                Ok(poly_const(r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = &self.input[start..self.i];
                let pos = (self.pos_of)(name).ok_or_else(|| {
                    let mut e = self.err(&format!("unknown generator `{name}`"));
                    e.offset = start;
                    e
                })?;
                Ok(poly_var(Var::new(pos, 0)))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names() -> Vec<String> {
        ["a", "d", "b", "c"].iter().map(|s| s.to_string()).collect()
    }

    fn parse(s: &str) -> Poly {
        let n = names();
        parse_poly(s, &|x| n.iter().position(|y| y == x)).unwrap()
    }

    #[test]
    fn var_packing_roundtrip() {
        let v = Var::new(3, 7);
        assert_eq!((v.pos(), v.order()), (3, 7));
        assert!(Var::new(0, 0) > Var::new(1, 0));
        assert!(Var::new(3, 0) > Var::new(0, 1));
    }

    #[test]
    fn leading_term_of_determinant() {
        let p = parse("a*d - b*c - 1");
        let (m, c) = leading(&p).unwrap();
        assert_eq!(mono_string(&m, &names()), "a*d");
        assert!(c.is_one());
    }

    #[test]
    fn parse_and_print() {
        let p = parse("2*a^2 - (b + c)*(b - c) + 1/2");
        let s = PolyDisplay { poly: &p, names: &names() }.to_string();
        assert_eq!(parse(&s), p);
        let err = parse_poly("a + q", &|x| names().iter().position(|y| y == x)).unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn leibniz() {
        let p = parse("a*b");
        let d = jet_d_raw(&p);
        assert_eq!(d.len(), 2);
        assert!(d.keys().all(|m| m.weight() == 1 && m.count() == 2));
    }

    fn arb_mono() -> impl Strategy<Value = Mono> {
        proptest::collection::vec((0usize..3, 0u32..3, 1u32..3), 0..4).prop_map(|v| {
            v.into_iter().fold(Mono::one(), |m, (p, o, e)| {
                let mut x = m;
                for _ in 0..e {
                    x = x.mul(&Mono::var(Var::new(p, o)));
                }
                x
            })
        })
    }

    proptest! {
        #[test]
        fn order_is_multiplicative(a in arb_mono(), b in arb_mono(), c in arb_mono()) {
            prop_assert_eq!(a.cmp(&b), a.mul(&c).cmp(&b.mul(&c)));
            prop_assert!(a.divides(&a.mul(&b)));
            prop_assert_eq!(a.quotient_of(&a.mul(&b)), b.clone());
            let l = a.lcm(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
        }
    }
}
