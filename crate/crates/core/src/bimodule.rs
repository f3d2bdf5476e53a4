//! Transfer between module structures through the coaction of a representation.
//!
//! For a representation `M_0` and forms `Q`, `Q'`, let `M` be the Weyl module of
//! `M_0` at level `Q` (induced from the evaluation action of `g[[t]]`). The map
//! `φ: M ⊗ V_{G,Q'} → M ⊗ V_{G,Q'−Q}` is fixed by
//!
//! * `φ(m ⊗ |0⟩) = Σ_i m_i ⊗ F_{im}|0⟩` with `F = ρ(g⁻¹)` the coaction,
//! * function modes are fixed,
//! * `φ ∘ J^L = (J^L + J^M) ∘ φ`,
//! * `φ ∘ J^M_v = (Σ_i :g_{iv} J^M_i: − η_Q(v)) ∘ φ`,
//!
//! and is checked to carry `J^R − J^M` on the source to `J^R` on the target.

use std::sync::Arc;

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::{FxBuildHasher, FxHashMap};

use crate::cdo::{build_right_currents, RightCurrentSet};
use crate::fock::{apply_field, words, word_weight, Affine, AffineLeaf, Basis, FieldExpr, ModeSpace, Vacuum, Word};
use crate::group::{Frame, GroupData};
use crate::lie::{BilinearForm, ModuleData};
use crate::lin::Lin;
use crate::linalg::{Echelon, SparseRow};
use crate::poly::{Mono, Poly};
use crate::rat::Rat;
use crate::report::{anchors, Check};

/// A finite-dimensional representation with its coaction `m_j ↦ Σ_i m_i ⊗ F_{ij}`.
#[derive(Clone, Debug)]
pub struct IntegrableModuleData {
    pub name: String,
    pub module: ModuleData,
    /// `coaction[i][j] = F_{ij}`
    pub coaction: Vec<Vec<Poly>>,
}

impl IntegrableModuleData {
    pub fn trivial(g: &GroupData) -> Self {
        IntegrableModuleData {
            name: "trivial".into(),
            module: ModuleData::trivial(&g.lie),
            coaction: vec![vec![crate::poly::poly_const(Rat::one())]],
        }
    }

    /// Violations of `F(1) = 1`, `Lie_{v^l} F = −ρ(v) F` and `Lie_{v^r} F = −F ρ(v)`.
    pub fn coaction_violations(&self, g: &GroupData) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.module.dim;
        if let Err(e) = self.module.check_representation(&g.lie) {
            out.push(e.to_string());
            return out;
        }
        if self.coaction.len() != d || self.coaction.iter().any(|r| r.len() != d) {
            out.push("coaction table has the wrong shape".into());
            return out;
        }
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { Rat::one() } else { Rat::zero() };
                if g.ring.eval(&self.coaction[i][j], &g.unit_point) != want {
                    out.push(format!("counit fails at ({i},{j})"));
                }
            }
        }
        for a in 0..g.dim() {
            let rho = &self.module.action[a];
            for i in 0..d {
                for j in 0..d {
                    let mut l = g.lie_derivative(Frame::Left, a, &self.coaction[i][j]);
                    let mut r = g.lie_derivative(Frame::Right, a, &self.coaction[i][j]);
                    for k in 0..d {
                        l.add_scaled(&self.coaction[k][j], &rho[i][k]);
                        r.add_scaled(&self.coaction[i][k], &rho[k][j]);
                    }
                    if !g.ring.nf(&l).is_zero() {
                        out.push(format!("left derivative of the coaction fails for {} at ({i},{j})", g.lie.labels[a]));
                    }
                    if !g.ring.nf(&r).is_zero() {
                        out.push(format!("right derivative of the coaction fails for {} at ({i},{j})", g.lie.labels[a]));
                    }
                }
            }
        }
        out
    }
}

/// The evaluation action on the leaves of the Weyl module.
pub struct MatrixLeaf {
    pub module: ModuleData,
}

impl AffineLeaf for MatrixLeaf {
    type L = u8;

    fn leaf_weight(&self, _: &u8) -> u32 {
        0
    }

    fn leaf_action(&self, a: usize, n: u32, l: &u8) -> Lin<u8> {
        if n > 0 {
            return Lin::new();
        }
        let col = *l as usize;
        (0..self.module.dim).filter_map(|i| {
            let c = &self.module.action[a][i][col];
            (!c.is_zero()).then(|| (i as u8, c.clone()))
        })
        .collect()
    }
}

/// Basis vector of `M ⊗ V`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorBasis {
    pub m_word: Word,
    pub leaf: u8,
    pub v: Basis,
}

impl TensorBasis {
    pub fn weight(&self) -> u32 {
        word_weight(&self.m_word) + self.v.weight()
    }
}

pub type TensorState = Lin<TensorBasis>;

/// `M ⊗ V_{G,Q}`: currents, functions and jets act on `V`, module currents on `M`.
pub struct Tensor {
    pub weyl: Affine<MatrixLeaf>,
    pub vac: Vacuum,
}

impl Tensor {
    pub fn new(g: Arc<GroupData>, module: ModuleData, module_level: BilinearForm, vacuum_level: BilinearForm) -> Tensor {
        let weyl = Affine::new(MatrixLeaf { module }, g.lie.clone(), module_level);
        Tensor { weyl, vac: Vacuum::new(g, vacuum_level) }
    }

    fn lift_v(b: &TensorBasis, s: &Lin<Basis>) -> Lin<TensorBasis> {
        s.iter().map(|(v, c)| (TensorBasis { m_word: b.m_word.clone(), leaf: b.leaf, v: v.clone() }, c.clone())).collect()
    }

    /// Basis vectors of weight `w` whose `V` factor has degree `d`.
    pub fn basis(&self, w: u32, d: &[i32]) -> Vec<TensorBasis> {
        let n = self.vac.group.dim();
        let mut out = Vec::new();
        for wm in 0..=w {
            let vb = self.vac.basis(w - wm, d);
            for mw in words(n, wm) {
                for leaf in 0..self.weyl.leaf.module.dim as u8 {
                    for v in &vb {
                        out.push(TensorBasis { m_word: mw.clone(), leaf, v: v.clone() });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl ModeSpace for Tensor {
    type B = TensorBasis;

    fn weight(&self, b: &TensorBasis) -> u32 {
        b.weight()
    }

    fn current(&self, a: usize, n: i32, b: &TensorBasis) -> Arc<TensorState> {
        Arc::new(Self::lift_v(b, &self.vac.current(a, n, &b.v)))
    }

    fn jet(&self, m: &Mono, n: i32, b: &TensorBasis) -> Arc<TensorState> {
        Arc::new(Self::lift_v(b, &self.vac.jet(m, n, &b.v)))
    }

    fn module_current(&self, a: usize, n: i32, b: &TensorBasis) -> Arc<TensorState> {
        let r = self.weyl.act(a, n, &(b.m_word.clone(), b.leaf));
        Arc::new(r.iter().map(|((w, l), c)| (TensorBasis { m_word: w.clone(), leaf: *l, v: b.v.clone() }, c.clone())).collect())
    }
}

/// The transfer map and both bimodules.
pub struct Transfer {
    pub module: IntegrableModuleData,
    pub q: BilinearForm,
    pub q_prime: BilinearForm,
    /// `M ⊗ V_{G,Q'}`
    pub source: Tensor,
    /// `M ⊗ V_{G,Q'−Q}`
    pub target: Tensor,
    pub rc_source: RightCurrentSet,
    pub rc_target: RightCurrentSet,
    /// image of `J^M_v`, acting on the target
    pub phi_module: Vec<FieldExpr>,
    cache: DashMap<TensorBasis, Arc<TensorState>, FxBuildHasher>,
}

impl Transfer {
    pub fn new(g: Arc<GroupData>, module: IntegrableModuleData, q: BilinearForm, q_prime: BilinearForm) -> Transfer {
        let diff = q_prime.add(&q.neg());
        let source = Tensor::new(g.clone(), module.module.clone(), q.clone(), q_prime.clone());
        let target = Tensor::new(g.clone(), module.module.clone(), q.clone(), diff.clone());
        let rc_source = build_right_currents(&g, &q_prime);
        let rc_target = build_right_currents(&g, &diff);
        let n = g.dim();
        let phi_module = (0..n)
            .map(|v| {
                let mut terms: Vec<(Rat, FieldExpr)> = (0..n)
                    .filter(|i| !g.ad_coeff[*i][v].is_zero())
                    .map(|i| (Rat::one(), FieldExpr::normord(FieldExpr::FunGen(g.ad_coeff[i][v].clone()), FieldExpr::ModuleCurrent(i))))
                    .collect();
                let eta = g.eta_q(&q, v);
                if !eta.is_zero() {
                    terms.push((Rat::from_int(-1), FieldExpr::Jet(eta)));
                }
                FieldExpr::comb(terms)
            })
            .collect();
        Transfer { module, q, q_prime, source, target, rc_source, rc_target, phi_module, cache: DashMap::default() }
    }

    fn group(&self) -> &GroupData {
        &self.source.vac.group
    }

    /// `φ(m_j ⊗ |0⟩) = Σ_i m_i ⊗ F_{ij}|0⟩`.
    fn coaction(&self, leaf: u8) -> TensorState {
        let mut out = TensorState::new();
        for (i, row) in self.module.coaction.iter().enumerate() {
            for (m, c) in row[leaf as usize].iter() {
                out.add_term(TensorBasis { m_word: Word::new(), leaf: i as u8, v: Basis { word: Word::new(), jet: m.clone() } }, c.clone());
            }
        }
        out
    }

    pub fn apply_basis(&self, b: &TensorBasis) -> Arc<TensorState> {
        if let Some(v) = self.cache.get(b) {
            return v.clone();
        }
        let out = if let Some(&(a, d)) = b.m_word.first() {
            let rest = TensorBasis { m_word: b.m_word[1..].into(), leaf: b.leaf, v: b.v.clone() };
            apply_field(&self.target, &self.phi_module[a as usize], -(d as i32), &self.apply_basis(&rest))
        } else if let Some(&(a, d)) = b.v.word.first() {
            let rest = TensorBasis { m_word: Word::new(), leaf: b.leaf, v: Basis { word: b.v.word[1..].into(), jet: b.v.jet.clone() } };
            let diag = FieldExpr::sum(FieldExpr::CurrentGen(a as usize), FieldExpr::ModuleCurrent(a as usize));
            apply_field(&self.target, &diag, -(d as i32), &self.apply_basis(&rest))
        } else if b.v.jet.is_one() {
            self.coaction(b.leaf)
        } else {
            let rest = TensorBasis { m_word: Word::new(), leaf: b.leaf, v: Basis::vacuum() };
            let jet = FieldExpr::Jet(Poly::single(b.v.jet.clone(), Rat::one()));
            apply_field(&self.target, &jet, -(b.v.jet.weight() as i32), &self.apply_basis(&rest))
        };
        let out = Arc::new(out);
        self.cache.insert(b.clone(), out.clone());
        out
    }

    pub fn apply(&self, s: &TensorState) -> TensorState {
        let mut out = TensorState::new();
        for (b, c) in s.iter() {
            out.add_scaled(&self.apply_basis(b), c);
        }
        out
    }

    /// Generator pairs `(name, action on the source, action on the target)`.
    pub fn generators(&self) -> Vec<(String, FieldExpr, FieldExpr)> {
        let g = self.group();
        let mut out = Vec::new();
        for a in 0..g.dim() {
            let l = &g.lie.labels[a];
            out.push((format!("J^L_{l}"), FieldExpr::CurrentGen(a), FieldExpr::sum(FieldExpr::CurrentGen(a), FieldExpr::ModuleCurrent(a))));
            out.push((format!("J^R_{l}-J^M_{l}"), FieldExpr::diff(self.rc_source.get(a).clone(), FieldExpr::ModuleCurrent(a)), self.rc_target.get(a).clone()));
        }
        for k in 0..g.ngens() {
            let f = FieldExpr::FunGen(g.ring.gen(k));
            out.push((g.ring.names[k].clone(), f.clone(), f));
        }
        out
    }

    /// Source basis vectors of weight `≤ w` with `V`-degree in the window.
    pub fn sample(&self, w: u32, degrees: &[Vec<i32>]) -> Vec<TensorBasis> {
        let mut out = Vec::new();
        for k in 0..=w {
            for d in degrees {
                out.extend(self.source.basis(k, d));
            }
        }
        out
    }

    /// Rank of `φ` on the source block `(w, d)`, with the block dimension.
    pub fn block_rank(&self, w: u32, d: &[i32]) -> (usize, usize) {
        let src = self.source.basis(w, d);
        let images: Vec<Arc<TensorState>> = src.par_iter().map(|b| self.apply_basis(b)).collect();
        let mut cols: FxHashMap<TensorBasis, usize> = FxHashMap::default();
        let mut e = Echelon::new();
        for img in &images {
            let mut row = SparseRow::new();
            for (t, c) in img.iter() {
                let l = cols.len();
                let i = *cols.entry(t.clone()).or_insert(l);
                row.insert(i, c.clone());
            }
            e.insert(row);
        }
        (e.rank(), src.len())
    }
}

/// Renders `J^M` letters, the leaf, then the vacuum-module factor.
pub fn show_basis(g: &GroupData, b: &TensorBasis) -> String {
    let m: Vec<String> = b.m_word.iter().map(|(a, d)| format!("{}[-{}]", g.lie.labels[*a as usize], d)).collect();
    let v = crate::fock::show_state(g, &Lin::single(b.v.clone(), Rat::one()));
    let v = v.strip_prefix("(1) ").unwrap_or(&v).to_string();
    format!("{}m{} ⊗ {v}", if m.is_empty() { String::new() } else { m.join(" ") + " " }, b.leaf)
}

/// `φ(ξ[n] s) = ξ'[n] φ(s)` for the generators, `|n| ≤ modes`, on source states.
pub fn check_intertwining(t: &Transfer, weight: u32, degrees: &[Vec<i32>], modes: i32) -> Vec<Check> {
    let g = t.group();
    let mut coaction = Check::new("transfer.coaction", anchors::REGULAR).param("rep", &t.module.name);
    let bad = t.module.coaction_violations(g);
    coaction.cases = 1;
    if let Some(w) = bad.first() {
        coaction.fail(w.clone());
    }
    let gens = t.generators();
    let states = t.sample(weight, degrees);
    let mut cases = Vec::new();
    for (gi, _) in gens.iter().enumerate() {
        for n in -modes..=modes {
            for s in &states {
                cases.push((gi, n, s.clone()));
            }
        }
    }
    let inter = Check::new("transfer.intertwining", anchors::REGULAR)
        .param("rep", &t.module.name)
        .param("weight", weight)
        .param("modes", modes)
        .run_cases(&cases, |(gi, n, s)| {
            let (name, fs, ft) = &gens[*gi];
            let st = TensorState::single(s.clone(), Rat::one());
            let lhs = t.apply(&apply_field(&t.source, fs, *n, &st));
            let rhs = apply_field(&t.target, ft, *n, &t.apply(&st));
            (lhs != rhs).then(|| format!("{name}[{n}] on {}", show_basis(g, s)))
        });
    let mut inv = Check::new("transfer.invertible", anchors::REGULAR).param("rep", &t.module.name).param("weight", weight);
    inv = inv.timed(|c| {
        for w in 0..=weight {
            for d in degrees {
                c.cases += 1;
                let (r, dim) = t.block_rank(w, d);
                if r != dim {
                    c.fail(format!("block (w={w}, d={d:?}): rank {r} < {dim}"));
                }
            }
        }
    });
    vec![coaction, inter, inv]
}
