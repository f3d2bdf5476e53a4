//! The jet ring `J(G)`: polynomials in `x_k^(m)` modulo the differential ideal
//! generated by the relations of `O_G`.
//!
//! Normal forms come from a Gröbner basis that is built lazily, one weight at a
//! time. The prolonged relations `∂^m r` are weight homogeneous, so the basis
//! truncated at weight `w` is exact for every polynomial of weight at most `w`.

use std::sync::Arc;

use dashmap::DashMap;
use parking_lot::{Mutex, RwLock};
use rustc_hash::FxBuildHasher;

use crate::lin::Lin;
use crate::poly::{jet_d_mono, jet_d_raw, leading, Mono, Poly, Var};
use crate::rat::Rat;

/// A reduced polynomial as a shared term list.
pub type Nf = Arc<[(Mono, Rat)]>;

#[derive(Clone, Debug)]
struct GbElem {
    lt: Mono,
    /// monic; the leading term is first
    terms: Vec<(Mono, Rat)>,
}

#[derive(Clone, Debug, Default)]
struct GbState {
    elems: Vec<GbElem>,
    /// pairs awaiting an S-polynomial, with the weight of their lcm
    pairs: Vec<(usize, usize, u32)>,
    /// `∂^bound r` for each base relation
    derivs: Vec<Poly>,
    /// complete for all weights `< bound`
    bound: u32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RingError {
    #[error("rewrite rule {index}: `{lhs}` is not the leading monomial of its relation")]
    NotLeading { index: usize, lhs: String },
    #[error("rewrite rules are not confluent: completion adds `{extra}`")]
    NotConfluent { extra: String },
    #[error("ring shape: {0}")]
    Shape(String),
}

type Cache<K, V> = DashMap<K, V, FxBuildHasher>;

/// Coordinate ring with its jet prolongation.
#[derive(Debug)]
pub struct JetRing {
    /// generator names in monomial order
    pub names: Vec<String>,
    /// degree vector of each generator
    pub degrees: Vec<Vec<i32>>,
    /// base relations (weight 0)
    pub relations: Vec<Poly>,
    gb: RwLock<Arc<GbState>>,
    grow: Mutex<()>,
    nf_cache: Cache<Mono, Nf>,
    dpow_cache: Cache<(Mono, u32), Nf>,
}

impl Clone for JetRing {
    fn clone(&self) -> Self {
        JetRing {
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            relations: self.relations.clone(),
            gb: RwLock::new(self.gb.read().clone()),
            grow: Mutex::new(()),
            nf_cache: Cache::default(),
            dpow_cache: Cache::default(),
        }
    }
}

fn monic(p: &Poly) -> Option<GbElem> {
    let (lt, lc) = leading(p)?;
    let inv = lc.recip();
    let mut terms: Vec<(Mono, Rat)> = p.iter().map(|(m, c)| (m.clone(), c * &inv)).collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    Some(GbElem { lt, terms })
}

fn reduce_full(elems: &[GbElem], p: &Poly) -> Poly {
    use std::collections::BTreeMap;
    let mut work: BTreeMap<Mono, Rat> = p.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut rem = Poly::new();
    while let Some((m, c)) = work.pop_last() {
        match elems.iter().find(|g| g.lt.divides(&m)) {
            Some(g) => {
                let q = g.lt.quotient_of(&m);
                for (t, d) in &g.terms[1..] {
                    let key = q.mul(t);
                    let e = work.entry(key).or_default();
                    *e -= &(&c * d);
                    if e.is_zero() {
                        let k = q.mul(t);
                        work.remove(&k);
                    }
                }
            }
            None => rem.add_term(m, c),
        }
    }
    rem
}

fn spoly(f: &GbElem, g: &GbElem) -> Poly {
    let l = f.lt.lcm(&g.lt);
    let qf = f.lt.quotient_of(&l);
    let qg = g.lt.quotient_of(&l);
    let mut out = Poly::new();
    for (t, c) in &f.terms {
        out.add_term(qf.mul(t), c.clone());
    }
    for (t, c) in &g.terms {
        out.add_term(qg.mul(t), -c);
    }
    out
}

impl GbState {
    fn add(&mut self, e: GbElem) {
        let i = self.elems.len();
        for (j, g) in self.elems.iter().enumerate() {
            if !g.lt.coprime(&e.lt) {
                let w = g.lt.lcm(&e.lt).weight();
                self.pairs.push((j, i, w));
            }
        }
        self.elems.push(e);
    }

    /// Completes the basis for weight `w`, assuming all lower weights are done.
    fn complete_weight(&mut self, w: u32) {
        for k in 0..self.derivs.len() {
            let p = if w == 0 { self.derivs[k].clone() } else { jet_d_raw(&self.derivs[k]) };
            self.derivs[k] = p.clone();
            let r = reduce_full(&self.elems, &p);
            if let Some(e) = monic(&r) {
                self.add(e);
            }
        }
        loop {
            let Some(idx) = self.pairs.iter().position(|p| p.2 <= w) else { break };
            let (i, j, _) = self.pairs.swap_remove(idx);
            let s = spoly(&self.elems[i], &self.elems[j]);
            let r = reduce_full(&self.elems, &s);
            if let Some(e) = monic(&r) {
                self.add(e);
            }
        }
        self.bound = w + 1;
    }
}

impl JetRing {
    /// Builds the ring from relations given as `lhs - rhs` with declared leading monomials.
    pub fn new(names: Vec<String>, degrees: Vec<Vec<i32>>, rules: Vec<(Mono, Poly)>) -> Result<JetRing, RingError> {
        if names.len() != degrees.len() {
            return Err(RingError::Shape("one degree vector per generator".into()));
        }
        let rank = degrees.first().map(|d| d.len()).unwrap_or(0);
        if degrees.iter().any(|d| d.len() != rank) {
            return Err(RingError::Shape("degree vectors must share a length".into()));
        }
        let mut relations = Vec::new();
        for (index, (lhs, rhs)) in rules.into_iter().enumerate() {
            let mut rel = Poly::single(lhs.clone(), Rat::one());
            rel.sub(&rhs);
            match leading(&rel) {
                Some((lt, _)) if lt == lhs => {}
                _ => return Err(RingError::NotLeading { index, lhs: crate::poly::mono_string(&lhs, &names) }),
            }
            relations.push(rel);
        }
        let state = GbState { derivs: relations.clone(), ..Default::default() };
        let ring = JetRing {
            names,
            degrees,
            relations,
            gb: RwLock::new(Arc::new(state)),
            grow: Mutex::new(()),
            nf_cache: Cache::default(),
            dpow_cache: Cache::default(),
        };
        ring.ensure_weight(0);
        let gb = ring.gb.read().clone();
        if gb.elems.len() > ring.relations.len() {
            let extra = &gb.elems[ring.relations.len()];
            let p: Poly = extra.terms.iter().cloned().collect();
            return Err(RingError::NotConfluent { extra: ring.show(&p) });
        }
        Ok(ring)
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn grading_rank(&self) -> usize {
        self.degrees.first().map(|d| d.len()).unwrap_or(0)
    }

    pub fn gen(&self, k: usize) -> Poly {
        Poly::single(Mono::var(Var::new(k, 0)), Rat::one())
    }

    pub fn show(&self, p: &Poly) -> String {
        crate::poly::PolyDisplay { poly: p, names: &self.names }.to_string()
    }

    pub fn parse(&self, s: &str) -> Result<Poly, crate::poly::PolyParseError> {
        crate::poly::parse_poly(s, &|x| self.names.iter().position(|n| n == x))
    }

    /// Makes the Gröbner basis exact up to weight `w`.
    pub fn ensure_weight(&self, w: u32) {
        if self.gb.read().bound > w {
            return;
        }
        let _g = self.grow.lock();
        let cur = self.gb.read().clone();
        if cur.bound > w {
            return;
        }
        let mut st = (*cur).clone();
        for k in st.bound..=w {
            st.complete_weight(k);
        }
        *self.gb.write() = Arc::new(st);
    }

    /// Number of Gröbner basis elements currently known.
    pub fn basis_len(&self) -> usize {
        self.gb.read().elems.len()
    }

    pub fn leading_monomials(&self, w: u32) -> Vec<Mono> {
        self.ensure_weight(w);
        self.gb.read().elems.iter().filter(|e| e.lt.weight() <= w).map(|e| e.lt.clone()).collect()
    }

    pub fn is_normal(&self, m: &Mono) -> bool {
        self.ensure_weight(m.weight());
        !self.gb.read().elems.iter().any(|g| g.lt.divides(m))
    }

    /// Normal form of a monomial.
    pub fn nf_mono(&self, m: &Mono) -> Nf {
        if let Some(v) = self.nf_cache.get(m) {
            return v.clone();
        }
        self.ensure_weight(m.weight());
        let gb = self.gb.read().clone();
        let out: Nf = match gb.elems.iter().find(|g| g.lt.divides(m)) {
            None => Arc::from(vec![(m.clone(), Rat::one())]),
            Some(g) => {
                let q = g.lt.quotient_of(m);
                let mut acc = Lin::new();
                for (t, c) in &g.terms[1..] {
                    let sub = self.nf_mono(&q.mul(t));
                    for (n, d) in sub.iter() {
                        acc.add_term(n.clone(), -&(c * d));
                    }
                }
                acc.into_iter_terms().collect::<Vec<_>>().into()
            }
        };
        self.nf_cache.insert(m.clone(), out.clone());
        out
    }

    pub fn nf(&self, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p.iter() {
            for (n, d) in self.nf_mono(m).iter() {
                out.add_term(n.clone(), c * d);
            }
        }
        out
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in a.iter() {
            for (n, d) in b.iter() {
                let cd = c * d;
                for (r, e) in self.nf_mono(&m.mul(n)).iter() {
                    out.add_term(r.clone(), &cd * e);
                }
            }
        }
        out
    }

    /// `∂p` in normal form.
    pub fn d(&self, p: &Poly) -> Poly {
        self.nf(&jet_d_raw(p))
    }

    /// `∂^k m / k!` in normal form, for a normal monomial `m`.
    pub fn d_pow_mono(&self, m: &Mono, k: u32) -> Nf {
        if k == 0 {
            return self.nf_mono(m);
        }
        let key = (m.clone(), k);
        if let Some(v) = self.dpow_cache.get(&key) {
            return v.clone();
        }
        let prev = self.d_pow_mono(m, k - 1);
        let mut acc = Poly::new();
        let inv = Rat::new(1, k as i64);
        for (n, c) in prev.iter() {
            acc.add_scaled(&jet_d_mono(n), &(c * &inv));
        }
        let out: Nf = self.nf(&acc).into_iter_terms().collect::<Vec<_>>().into();
        self.dpow_cache.insert(key, out.clone());
        out
    }

    pub fn degree(&self, m: &Mono) -> Vec<i32> {
        let mut d = vec![0; self.grading_rank()];
        for (v, e) in &m.0 {
            for (x, g) in d.iter_mut().zip(&self.degrees[v.pos()]) {
                *x += g * *e as i32;
            }
        }
        d
    }

    /// Evaluates a weight-0 polynomial at a point.
    pub fn eval(&self, p: &Poly, point: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (m, c) in p.iter() {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                assert_eq!(v.order(), 0, "evaluation of a jet variable");
                t *= &point[v.pos()].pow(*e);
            }
            s += &t;
        }
        s
    }

    /// Normal monomials of weight `w`, degree `deg` and at most `max_count` factors, sorted.
    pub fn normal_monomials(&self, w: u32, deg: &[i32], max_count: u32) -> Vec<Mono> {
        self.ensure_weight(w);
        let lts = self.leading_monomials(w);
        let n = self.ngens();
        let mut vars: Vec<Var> = Vec::new();
        for o in 0..=w {
            for k in 0..n {
                vars.push(Var::new(k, o));
            }
        }
        let mut out = Vec::new();
        let mut cur = Mono::one();
        self.enum_rec(&vars, 0, w, max_count, &mut cur, &lts, deg, &mut out);
        out.sort();
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn enum_rec(&self, vars: &[Var], i: usize, wleft: u32, cleft: u32, cur: &mut Mono, lts: &[Mono], deg: &[i32], out: &mut Vec<Mono>) {
        if lts.iter().any(|l| l.divides(cur)) {
            return;
        }
        if i == vars.len() {
            if wleft == 0 && self.degree(cur) == deg {
                out.push(cur.clone());
            }
            return;
        }
        let v = vars[i];
        let o = v.order();
        let mut e = 0u32;
        let saved = cur.clone();
        loop {
            self.enum_rec(vars, i + 1, wleft - o * e, cleft - e, cur, lts, deg, out);
            e += 1;
            if e > cleft || o * e > wleft {
                break;
            }
            *cur = cur.mul(&Mono::var(v));
            if lts.iter().any(|l| l.divides(cur)) {
                break;
            }
        }
        *cur = saved;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    pub(crate) fn sl2_ring() -> JetRing {
        let names: Vec<String> = ["a", "d", "b", "c"].iter().map(|s| s.to_string()).collect();
        let rhs = parse_poly("b*c + 1", &|x| names.iter().position(|n| n == x)).unwrap();
        let lhs = Mono::var(Var::new(0, 0)).mul(&Mono::var(Var::new(1, 0)));
        JetRing::new(names, vec![vec![1]; 4], vec![(lhs, rhs)]).unwrap()
    }

    fn gm_ring() -> JetRing {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let lhs = Mono::var(Var::new(0, 0)).mul(&Mono::var(Var::new(1, 0)));
        JetRing::new(names, vec![vec![1], vec![-1]], vec![(lhs, Poly::single(Mono::one(), Rat::one()))]).unwrap()
    }

    #[test]
    fn determinant_rewrites() {
        let r = sl2_ring();
        let ad = r.parse("a*d").unwrap();
        assert_eq!(r.nf(&ad), r.parse("b*c + 1").unwrap());
        let p = r.parse("a*d - b*c - 1").unwrap();
        assert!(r.nf(&p).is_zero());
        assert!(r.d(&p).is_zero());
        let dd = r.d(&r.d(&p));
        assert!(dd.is_zero());
    }

    #[test]
    fn gm_relations() {
        let r = gm_ring();
        let p = r.parse("x^2*y").unwrap();
        assert_eq!(r.nf(&p), r.parse("x").unwrap());
        assert!(r.d(&r.parse("x*y").unwrap()).is_zero());
        assert_eq!(r.normal_monomials(1, &[0], 2).len(), 1);
        assert_eq!(r.normal_monomials(0, &[5], 5).len(), 1);
    }

    #[test]
    fn prolonged_ideal_is_closed_under_d() {
        let r = sl2_ring();
        r.ensure_weight(4);
        let mut p = r.parse("a*d - b*c - 1").unwrap();
        for _ in 0..4 {
            p = jet_d_raw(&p);
            assert!(r.nf(&p).is_zero());
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_multiplicative() {
        let r = sl2_ring();
        r.ensure_weight(3);
        let ms = r.normal_monomials(2, &[3], 3);
        for a in &ms {
            for b in ms.iter().take(5) {
                let pa = Poly::single(a.clone(), Rat::one());
                let pb = Poly::single(b.clone(), Rat::one());
                let prod = r.mul(&pa, &pb);
                assert_eq!(r.nf(&prod), prod);
                let d1 = r.d(&prod);
                let d2 = {
                    let mut s = r.mul(&r.d(&pa), &pb);
                    s.add(&r.mul(&pa, &r.d(&pb)));
                    s
                };
                assert_eq!(d1, d2);
            }
        }
    }
}
