//! Group coordinate data: invariant vector fields, adjoint coefficients, coframe,
//! and the jet-level maps built from them.
//!
//! Left fields act by `X ↦ XA` and form a homomorphism `g → Der(O_G)`; right
//! fields act by `X ↦ AX` and form an anti-homomorphism. Both take the value `v`
//! at the unit. The adjoint coefficients satisfy `v_a^r = Σ_i g_{ia} v_i^l`.

use std::fmt;

use dashmap::DashMap;
use rustc_hash::FxBuildHasher;

use crate::jet::{JetRing, Nf};
use crate::lie::{modular_character, BilinearForm, LieAlgebraData};
use crate::poly::{jet_d_raw, Mono, Poly, Var};
use crate::rat::Rat;

/// Which family of invariant vector fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Frame {
    Left,
    Right,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::Left => "left",
            Frame::Right => "right",
        })
    }
}

#[derive(Debug)]
pub struct GroupData {
    pub name: String,
    pub lie: LieAlgebraData,
    pub ring: JetRing,
    /// `left[a][k] = Lie_{v_a^l}(x_k)`
    pub left: Vec<Vec<Poly>>,
    /// `right[a][k] = Lie_{v_a^r}(x_k)`
    pub right: Vec<Vec<Poly>>,
    /// `ad_coeff[i][a] = g_{ia}`
    pub ad_coeff: Vec<Vec<Poly>>,
    /// `coframe[j][k] = c_{jk}` with `θ^j = Σ_k c_{jk} dx_k`
    pub coframe: Vec<Vec<Poly>>,
    pub unit_point: Vec<Rat>,
    prolong_cache: DashMap<(Frame, usize, u32, Mono), Nf, FxBuildHasher>,
}

impl Clone for GroupData {
    fn clone(&self) -> Self {
        GroupData {
            name: self.name.clone(),
            lie: self.lie.clone(),
            ring: self.ring.clone(),
            left: self.left.clone(),
            right: self.right.clone(),
            ad_coeff: self.ad_coeff.clone(),
            coframe: self.coframe.clone(),
            unit_point: self.unit_point.clone(),
            prolong_cache: DashMap::default(),
        }
    }
}

/// A failed structural identity of the group data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupViolation {
    Shape(String),
    RelationNotKilled { frame: Frame, a: String, relation: usize },
    FrameRelation { frame: Frame, a: String, b: String, generator: String },
    FramesDoNotCommute { a: String, b: String, generator: String },
    AdjointIdentity { a: String, generator: String },
    CoframeDuality { j: String, i: String },
    UnitNotOnGroup { relation: usize },
    UnitValue { a: String, generator: String },
    AdjointAtUnit { i: String, a: String },
}

impl fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupViolation::Shape(s) => write!(f, "shape: {s}"),
            GroupViolation::RelationNotKilled { frame, a, relation } => {
                write!(f, "{frame} field {a} does not preserve relation {relation}")
            }
            GroupViolation::FrameRelation { frame, a, b, generator } => {
                write!(f, "{frame} frame relation fails for ({a},{b}) on {generator}")
            }
            GroupViolation::FramesDoNotCommute { a, b, generator } => {
                write!(f, "left {a} and right {b} do not commute on {generator}")
            }
            GroupViolation::AdjointIdentity { a, generator } => write!(f, "adjoint identity fails at (a={a}, k={generator})"),
            GroupViolation::CoframeDuality { j, i } => write!(f, "coframe duality fails at (j={j}, i={i})"),
            GroupViolation::UnitNotOnGroup { relation } => write!(f, "unit point violates relation {relation}"),
            GroupViolation::UnitValue { a, generator } => {
                write!(f, "left and right {a} differ at the unit on {generator}")
            }
            GroupViolation::AdjointAtUnit { i, a } => write!(f, "adjoint coefficient ({i},{a}) is not the identity at the unit"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("group data is inconsistent: {0}")]
    Invalid(String),
}

impl GroupData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        lie: LieAlgebraData,
        ring: JetRing,
        left: Vec<Vec<Poly>>,
        right: Vec<Vec<Poly>>,
        ad_coeff: Vec<Vec<Poly>>,
        coframe: Vec<Vec<Poly>>,
        unit_point: Vec<Rat>,
    ) -> GroupData {
        let mut g = GroupData {
            name: name.into(),
            lie,
            ring,
            left,
            right,
            ad_coeff,
            coframe,
            unit_point,
            prolong_cache: DashMap::default(),
        };
        let nf = |r: &JetRing, p: &Poly| r.nf(p);
        for t in [&mut g.left, &mut g.right, &mut g.ad_coeff, &mut g.coframe] {
            for row in t.iter_mut() {
                for p in row.iter_mut() {
                    *p = nf(&g.ring, p);
                }
            }
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn ngens(&self) -> usize {
        self.ring.ngens()
    }

    fn table(&self, frame: Frame) -> &Vec<Vec<Poly>> {
        match frame {
            Frame::Left => &self.left,
            Frame::Right => &self.right,
        }
    }

    /// Applies the derivation with generator images `img` to a weight-0 polynomial.
    pub fn derive_with(&self, img: &[Poly], p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p.iter() {
            for &(v, e) in &m.0 {
                let rest = m.without(v).expect("present");
                let coef = c * &Rat::from_int(e as i64);
                let rp = Poly::single(rest, coef);
                out.add(&self.ring.mul(&rp, &img[v.pos()]));
            }
        }
        out
    }

    /// `Lie_{v_a}(p)` for the left or right field of basis element `a`.
    pub fn lie_derivative(&self, frame: Frame, a: usize, p: &Poly) -> Poly {
        self.derive_with(&self.table(frame)[a], p)
    }

    /// Lie derivative along `Σ_a u_a v_a`.
    pub fn lie_derivative_vec(&self, frame: Frame, u: &[Rat], p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (a, c) in u.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.lie_derivative(frame, a, p), c);
            }
        }
        out
    }

    /// Checks every structural identity of the data.
    pub fn validate(&self) -> Vec<GroupViolation> {
        let n = self.dim();
        let m = self.ngens();
        let mut out = Vec::new();
        let shape_ok = |t: &Vec<Vec<Poly>>, r: usize, c: usize| t.len() == r && t.iter().all(|x| x.len() == c);
        if !shape_ok(&self.left, n, m) || !shape_ok(&self.right, n, m) {
            out.push(GroupViolation::Shape("field tables must be dim x generators".into()));
        }
        if !shape_ok(&self.ad_coeff, n, n) {
            out.push(GroupViolation::Shape("adjoint coefficients must be dim x dim".into()));
        }
        if !shape_ok(&self.coframe, n, m) {
            out.push(GroupViolation::Shape("coframe must be dim x generators".into()));
        }
        if self.unit_point.len() != m {
            out.push(GroupViolation::Shape("unit point must assign every generator".into()));
        }
        if !out.is_empty() {
            return out;
        }
        let lab = |a: usize| self.lie.labels[a].clone();
        let gname = |k: usize| self.ring.names[k].clone();
        for frame in [Frame::Left, Frame::Right] {
            for a in 0..n {
                for (ri, r) in self.ring.relations.iter().enumerate() {
                    if !self.lie_derivative(frame, a, r).is_zero() {
                        out.push(GroupViolation::RelationNotKilled { frame, a: lab(a), relation: ri });
                    }
                }
            }
        }
        for frame in [Frame::Left, Frame::Right] {
            let sign = if frame == Frame::Left { Rat::one() } else { Rat::from_int(-1) };
            for a in 0..n {
                for b in 0..n {
                    for k in 0..m {
                        let x = self.ring.gen(k);
                        let mut lhs = self.lie_derivative(frame, a, &self.lie_derivative(frame, b, &x));
                        lhs.sub(&self.lie_derivative(frame, b, &self.lie_derivative(frame, a, &x)));
                        for c in 0..n {
                            let f = &self.lie.f[a][b][c];
                            if !f.is_zero() {
                                lhs.add_scaled(&self.table(frame)[c][k], &-(&sign * f));
                            }
                        }
                        if !lhs.is_zero() {
                            out.push(GroupViolation::FrameRelation { frame, a: lab(a), b: lab(b), generator: gname(k) });
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for k in 0..m {
                    let x = self.ring.gen(k);
                    let mut c = self.lie_derivative(Frame::Left, a, &self.lie_derivative(Frame::Right, b, &x));
                    c.sub(&self.lie_derivative(Frame::Right, b, &self.lie_derivative(Frame::Left, a, &x)));
                    if !c.is_zero() {
                        out.push(GroupViolation::FramesDoNotCommute { a: lab(a), b: lab(b), generator: gname(k) });
                    }
                }
            }
        }
        for a in 0..n {
            for k in 0..m {
                let mut s = self.right[a][k].clone();
                for i in 0..n {
                    s.sub(&self.ring.mul(&self.ad_coeff[i][a], &self.left[i][k]));
                }
                if !s.is_zero() {
                    out.push(GroupViolation::AdjointIdentity { a: lab(a), generator: gname(k) });
                }
            }
        }
        for j in 0..n {
            for i in 0..n {
                let mut s = Poly::new();
                for k in 0..m {
                    s.add(&self.ring.mul(&self.coframe[j][k], &self.left[i][k]));
                }
                if i == j {
                    s.add_term(Mono::one(), Rat::from_int(-1));
                }
                if !s.is_zero() {
                    out.push(GroupViolation::CoframeDuality { j: lab(j), i: lab(i) });
                }
            }
        }
        for (ri, r) in self.ring.relations.iter().enumerate() {
            if !self.ring.eval(r, &self.unit_point).is_zero() {
                out.push(GroupViolation::UnitNotOnGroup { relation: ri });
            }
        }
        for a in 0..n {
            for k in 0..m {
                if self.ring.eval(&self.left[a][k], &self.unit_point) != self.ring.eval(&self.right[a][k], &self.unit_point) {
                    out.push(GroupViolation::UnitValue { a: lab(a), generator: gname(k) });
                }
            }
            for i in 0..n {
                let want = if i == a { Rat::one() } else { Rat::zero() };
                if self.ring.eval(&self.ad_coeff[i][a], &self.unit_point) != want {
                    out.push(GroupViolation::AdjointAtUnit { i: lab(i), a: lab(a) });
                }
            }
        }
        out
    }

    /// `G^Q_{u,v}(g) = Q(Ad_g u, v) = Σ_i g_{iv} Q(v_i, u)`.
    pub fn g_function(&self, q: &BilinearForm, u: usize, v: usize) -> Poly {
        let mut out = Poly::new();
        for i in 0..self.dim() {
            let c = &q.q[i][u];
            if !c.is_zero() {
                out.add_scaled(&self.ad_coeff[i][v], c);
            }
        }
        out
    }

    /// For each `a`: `Σ_i Lie_{v_i^l}(g_{ia}) − ρ(v_a)`.
    pub fn check_lemma_rho(&self) -> Vec<Poly> {
        let rho = modular_character(&self.lie);
        (0..self.dim())
            .map(|a| {
                let mut s = Poly::new();
                for i in 0..self.dim() {
                    s.add(&self.lie_derivative(Frame::Left, i, &self.ad_coeff[i][a]));
                }
                s.add_term(Mono::one(), -&rho.0[a]);
                s
            })
            .collect()
    }

    /// `Σ_i Lie_{[u,v_i]^l}(g_{iv}) − G^{Q0}_{u,v}`.
    pub fn check_lemma_killing(&self, u: usize, v: usize) -> Poly {
        let n = self.dim();
        let q0 = crate::lie::killing_form(&self.lie);
        let mut s = Poly::new();
        for i in 0..n {
            let uv: Vec<Rat> = (0..n).map(|c| self.lie.f[u][i][c].clone()).collect();
            s.add(&self.lie_derivative_vec(Frame::Left, &uv, &self.ad_coeff[i][v]));
        }
        s.sub(&self.g_function(&q0, u, v));
        s
    }

    /// `η(Σ_k p_k dx_k) = Σ_k p_k x_k^(1)`.
    pub fn eta(&self, omega: &[Poly]) -> Poly {
        let mut out = Poly::new();
        for (k, p) in omega.iter().enumerate() {
            let x1 = Poly::single(Mono::var(Var::new(k, 1)), Rat::one());
            out.add(&self.ring.mul(p, &x1));
        }
        out
    }

    /// The 1-form `Q(v^r, −)` in coordinate differentials.
    pub fn right_form(&self, q: &BilinearForm, v: usize) -> Vec<Poly> {
        let n = self.dim();
        let mut omega = vec![Poly::new(); self.ngens()];
        for j in 0..n {
            // coefficient of θ^j: Σ_i g_{iv} Q(v_i, v_j)
            let mut cj = Poly::new();
            for i in 0..n {
                if !q.q[i][j].is_zero() {
                    cj.add_scaled(&self.ad_coeff[i][v], &q.q[i][j]);
                }
            }
            if cj.is_zero() {
                continue;
            }
            for (k, w) in omega.iter_mut().enumerate() {
                w.add(&self.ring.mul(&cj, &self.coframe[j][k]));
            }
        }
        omega
    }

    /// `η_Q(v) = η(Q(v^r, −))`.
    pub fn eta_q(&self, q: &BilinearForm, v: usize) -> Poly {
        self.eta(&self.right_form(q, v))
    }

    /// Contraction `⟨v_a, ω⟩` of a frame field with a 1-form.
    pub fn contract(&self, frame: Frame, a: usize, omega: &[Poly]) -> Poly {
        let mut out = Poly::new();
        for (k, p) in omega.iter().enumerate() {
            out.add(&self.ring.mul(p, &self.table(frame)[a][k]));
        }
        out
    }

    /// Lie derivative of a 1-form: `Lie_u(p dx) = Lie_u(p) dx + p d(Lie_u x)`.
    pub fn lie_derivative_form(&self, frame: Frame, a: usize, omega: &[Poly]) -> Vec<Poly> {
        let m = self.ngens();
        let mut out = vec![Poly::new(); m];
        for (k, p) in omega.iter().enumerate() {
            out[k].add(&self.lie_derivative(frame, a, p));
            let img = &self.table(frame)[a][k];
            for (l, o) in out.iter_mut().enumerate() {
                let dimg = self.partial(img, l);
                if !dimg.is_zero() {
                    o.add(&self.ring.mul(p, &dimg));
                }
            }
        }
        out
    }

    /// `∂p/∂x_l` for a weight-0 polynomial.
    pub fn partial(&self, p: &Poly, l: usize) -> Poly {
        let v = Var::new(l, 0);
        let mut out = Poly::new();
        for (m, c) in p.iter() {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.without(v).expect("present"), c * &Rat::from_int(e as i64));
            }
        }
        self.ring.nf(&out)
    }

    /// `d f` as a list of coefficients of `dx_k`.
    pub fn differential(&self, f: &Poly) -> Vec<Poly> {
        (0..self.ngens()).map(|l| self.partial(f, l)).collect()
    }

    /// The derivation `D_k` of the jet ring attached to the `k`-th nonnegative mode of
    /// the current of `a`: `D_k(x^(m)) = m!/(m−k)! ∂^{m−k}(Lie_{v_a} x)` for `m ≥ k`, else 0.
    /// `D_0` is the prolonged action.
    pub fn jet_derivation_mono(&self, frame: Frame, a: usize, k: u32, m: &Mono) -> Nf {
        let key = (frame, a, k, m.clone());
        if let Some(v) = self.prolong_cache.get(&key) {
            return v.clone();
        }
        let mut out = Poly::new();
        for &(var, e) in &m.0 {
            let ord = var.order();
            if ord < k {
                continue;
            }
            let rest = Poly::single(m.without(var).expect("present"), Rat::from_int(e as i64));
            let img = self.var_image(frame, a, k, var);
            out.add(&self.ring.mul(&rest, &img));
        }
        let nf: Nf = out.into_iter_terms().collect::<Vec<_>>().into();
        self.prolong_cache.insert(key, nf.clone());
        nf
    }

    fn var_image(&self, frame: Frame, a: usize, k: u32, var: Var) -> Poly {
        let ord = var.order();
        let mut p = self.table(frame)[a][var.pos()].clone();
        for _ in 0..(ord - k) {
            p = jet_d_raw(&p);
        }
        let mut fall = 1i64;
        for t in 0..k {
            fall *= (ord - t) as i64;
        }
        self.ring.nf(&p.scaled(&Rat::from_int(fall)))
    }

    pub fn jet_derivation(&self, frame: Frame, a: usize, k: u32, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p.iter() {
            for (n, d) in self.jet_derivation_mono(frame, a, k, m).iter() {
                out.add_term(n.clone(), c * d);
            }
        }
        out
    }

    /// The zero-mode action of `v_a^l` on jets.
    pub fn prolonged_action(&self, a: usize, p: &Poly) -> Poly {
        self.jet_derivation(Frame::Left, a, 0, p)
    }
}
