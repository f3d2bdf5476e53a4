//! Verification suites on the vacuum module: affine relations, the current-function
//! relation, the PBW filtration, the character identity and mode Jacobi.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cdo::{spanning_states, RightCurrentSet};
use crate::character::predicted_dimension;
use crate::fock::{apply_field, commutator, show_state, Basis, FieldExpr, State, Vacuum};
use crate::group::Frame;
use crate::lie::dual_form;
use crate::rat::Rat;
use crate::report::{anchors, Bounds, Check};

fn unit(b: &Basis) -> State {
    State::single(b.clone(), Rat::one())
}

fn max_filtration(s: &State) -> Option<usize> {
    s.keys().map(|b| b.filtration()).max()
}

/// `[J_a[m], J_b[n]] = Σ_c f^c_{ab} J_c[m+n] + m δ_{m+n,0} Q(a,b)` on spanning states.
pub fn check_affine(vac: &Vacuum, b: Bounds) -> Check {
    let g = vac.group.clone();
    let n = g.dim();
    let states = spanning_states(vac, b.weight, b.degree);
    let mut cases = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for m in -b.modes..=b.modes {
                for k in -b.modes..=b.modes {
                    for s in &states {
                        cases.push((x, y, m, k, s.clone()));
                    }
                }
            }
        }
    }
    Check::new("fock.affine", anchors::CATAFFINE).param("bounds", b.label()).run_cases(&cases, |(x, y, m, k, s)| {
        let st = unit(s);
        let lhs = commutator(vac, &FieldExpr::CurrentGen(*x), *m, &FieldExpr::CurrentGen(*y), *k, &st);
        let mut rhs = State::new();
        for c in 0..n {
            let f = &g.lie.f[*x][*y][c];
            if !f.is_zero() {
                rhs.add_scaled(&vac.apply_current(c, m + k, &st), f);
            }
        }
        if m + k == 0 {
            rhs.add_scaled(&st, &(&Rat::from_int(*m as i64) * &vac.level.q[*x][*y]));
        }
        (lhs != rhs).then(|| {
            let mut d = lhs;
            d.sub(&rhs);
            format!("a={},b={},m={m},n={k},s={}: residual {}", g.lie.labels[*x], g.lie.labels[*y], show_state(&g, &st), show_state(&g, &d))
        })
    })
}

/// `[J_a[m], f[n]] = (Lie_{a^l} f)[m+n]` for every coordinate `f`.
pub fn check_catrep(vac: &Vacuum, b: Bounds) -> Check {
    let g = vac.group.clone();
    let states = spanning_states(vac, b.weight, b.degree);
    let mut cases = Vec::new();
    for a in 0..g.dim() {
        for x in 0..g.ngens() {
            for m in -b.modes..=b.modes {
                for k in -b.modes..=b.modes {
                    for s in &states {
                        cases.push((a, x, m, k, s.clone()));
                    }
                }
            }
        }
    }
    Check::new("fock.catrep", anchors::CATREP).param("bounds", b.label()).run_cases(&cases, |(a, x, m, k, s)| {
        let st = unit(s);
        let f = g.ring.gen(*x);
        let lhs = commutator(vac, &FieldExpr::CurrentGen(*a), *m, &FieldExpr::FunGen(f.clone()), *k, &st);
        let rhs = vac.apply_fun_mode(&g.lie_derivative(Frame::Left, *a, &f), m + k, &st);
        (lhs != rhs).then(|| {
            format!("a={},f={},m={m},n={k},s={}: got {}", g.lie.labels[*a], g.ring.names[*x], show_state(&g, &st), show_state(&g, &lhs))
        })
    })
}

/// Creation count is a filtration: currents raise it by at most one, functions do not
/// raise it, and commutators of a current with a function do not raise it.
pub fn check_filtration(vac: &Vacuum, rc: &RightCurrentSet, b: Bounds) -> Check {
    let g = vac.group.clone();
    let states = spanning_states(vac, b.weight, b.degree);
    let mut cases = Vec::new();
    for s in &states {
        for m in -b.modes..=b.modes {
            cases.push((m, s.clone()));
        }
    }
    Check::new("fock.filtration", anchors::FILTRATION).param("bounds", b.label()).run_cases(&cases, |(m, s)| {
        let st = unit(s);
        let k = s.filtration();
        let within = |r: &State, bound: usize| max_filtration(r).is_none_or(|f| f <= bound);
        for a in 0..g.dim() {
            let cur = FieldExpr::CurrentGen(a);
            if !within(&apply_field(vac, &cur, *m, &st), k + 1) {
                return Some(format!("J_{}[{m}] raises the filtration of {} by more than one", g.lie.labels[a], show_state(&g, &st)));
            }
            if !within(&apply_field(vac, rc.get(a), *m, &st), k + 1) {
                return Some(format!("J^R_{}[{m}] raises the filtration of {} by more than one", g.lie.labels[a], show_state(&g, &st)));
            }
            for x in 0..g.ngens() {
                let f = FieldExpr::FunGen(g.ring.gen(x));
                if !within(&commutator(vac, &cur, *m, &f, -1, &st), k) {
                    return Some(format!("[J_{}[{m}], {}[-1]] raises the filtration of {}", g.lie.labels[a], g.ring.names[x], show_state(&g, &st)));
                }
            }
        }
        for x in 0..g.ngens() {
            let f = FieldExpr::FunGen(g.ring.gen(x));
            if !within(&apply_field(vac, &f, *m, &st), k) {
                return Some(format!("{}[{m}] raises the filtration of {}", g.ring.names[x], show_state(&g, &st)));
            }
        }
        None
    })
}

/// All degree vectors with every component in `[-d, d]`.
pub fn degree_window(rank: usize, d: u32) -> Vec<Vec<i32>> {
    let d = d as i32;
    let mut out: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|p| (-d..=d).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

/// One cell of the character table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterCell {
    pub weight: u32,
    pub degree: Vec<i32>,
    pub enumerated: usize,
    pub predicted: Option<i64>,
}

impl CharacterCell {
    pub fn agrees(&self) -> bool {
        self.predicted == Some(self.enumerated as i64)
    }
}

pub fn character_table(vac: &Vacuum, weight: u32, degree: u32) -> Vec<CharacterCell> {
    let g = &vac.group;
    let mut out = Vec::new();
    for w in 0..=weight {
        for d in degree_window(g.ring.grading_rank(), degree) {
            let enumerated = vac.graded_dimension(w, &d);
            let predicted = predicted_dimension(g, w, &d).ok();
            out.push(CharacterCell { weight: w, degree: d, enumerated, predicted });
        }
    }
    out
}

/// Graded dimensions against the generating-function prediction.
pub fn check_pbw(vac: &Vacuum, weight: u32, degree: u32) -> Check {
    let mut c = Check::new("fock.pbw", anchors::PBW).param("bounds", Bounds::new(weight, degree, 0).label());
    if let Err(e) = crate::character::model(&vac.group) {
        return c.skip(e.to_string());
    }
    c = c.timed(|c| {
        for cell in character_table(vac, weight, degree) {
            c.cases += 1;
            if !cell.agrees() {
                c.fail(format!("(w={}, d={:?}): enumerated {}, predicted {:?}", cell.weight, cell.degree, cell.enumerated, cell.predicted));
            }
        }
    });
    c
}

/// A field of the Jacobi sample pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    Left(usize),
    Fun(usize),
    Right(usize),
}

/// `[X[m], Y[n]]` as a combination of modes plus a scalar, from the defining relations.
type Bracket = (Vec<(Rat, FieldExpr, i32)>, Rat);

struct Pool<'a> {
    vac: &'a Vacuum,
    rc: &'a RightCurrentSet,
    dual: crate::lie::BilinearForm,
}

impl Pool<'_> {
    fn field(&self, x: Gen) -> FieldExpr {
        match x {
            Gen::Left(a) => FieldExpr::CurrentGen(a),
            Gen::Fun(k) => FieldExpr::FunGen(self.vac.group.ring.gen(k)),
            Gen::Right(v) => self.rc.get(v).clone(),
        }
    }

    fn label(&self, x: Gen) -> String {
        let g = &self.vac.group;
        match x {
            Gen::Left(a) => format!("J_{}", g.lie.labels[a]),
            Gen::Fun(k) => g.ring.names[k].clone(),
            Gen::Right(v) => format!("J^R_{}", g.lie.labels[v]),
        }
    }

    /// `None` when no closed formula is available (right–right on non-unimodular input).
    fn bracket(&self, x: Gen, m: i32, y: Gen, n: i32) -> Option<Bracket> {
        let g = &self.vac.group;
        let dim = g.dim();
        let mut terms = Vec::new();
        let mut scalar = Rat::zero();
        match (x, y) {
            (Gen::Left(a), Gen::Left(b)) => {
                for c in 0..dim {
                    if !g.lie.f[a][b][c].is_zero() {
                        terms.push((g.lie.f[a][b][c].clone(), FieldExpr::CurrentGen(c), m + n));
                    }
                }
                if m + n == 0 {
                    scalar = &Rat::from_int(m as i64) * &self.vac.level.q[a][b];
                }
            }
            (Gen::Right(u), Gen::Right(v)) => {
                if !g.lie.is_unimodular() {
                    return None;
                }
                for c in 0..dim {
                    if !g.lie.f[u][v][c].is_zero() {
                        terms.push((-&g.lie.f[u][v][c], self.rc.get(c).clone(), m + n));
                    }
                }
                if m + n == 0 {
                    scalar = &Rat::from_int(m as i64) * &self.dual.q[u][v];
                }
            }
            (Gen::Left(a), Gen::Fun(k)) => {
                terms.push((Rat::one(), FieldExpr::FunGen(g.lie_derivative(Frame::Left, a, &g.ring.gen(k))), m + n));
            }
            (Gen::Right(v), Gen::Fun(k)) => {
                terms.push((Rat::one(), FieldExpr::FunGen(g.lie_derivative(Frame::Right, v, &g.ring.gen(k))), m + n));
            }
            (Gen::Fun(_), Gen::Left(_)) | (Gen::Fun(_), Gen::Right(_)) => {
                let (t, s) = self.bracket(y, n, x, m)?;
                return Some((t.into_iter().map(|(c, f, p)| (-&c, f, p)).collect(), -&s));
            }
            (Gen::Left(_), Gen::Right(_)) | (Gen::Right(_), Gen::Left(_)) | (Gen::Fun(_), Gen::Fun(_)) => {}
        }
        Some((terms, scalar))
    }

    /// `[A[l], [B[m], C[n]]] s` with the inner bracket taken from the relations.
    fn outer(&self, a: Gen, l: i32, inner: &Bracket, s: &State) -> State {
        let fa = self.field(a);
        let mut out = State::new();
        for (c, f, p) in &inner.0 {
            out.add_scaled(&commutator(self.vac, &fa, l, f, *p, s), c);
        }
        out
    }
}

/// A sampled Jacobi triple.
pub type Triple = [(Gen, i32); 3];

/// Seeded sample of triples from currents, coordinates and right currents; right–right
/// pairs are left out when the algebra is not unimodular.
pub fn sample_triples(vac: &Vacuum, count: usize, modes: i32, seed: u64) -> Vec<Triple> {
    let g = &vac.group;
    let mut pool: Vec<Gen> = Vec::new();
    pool.extend((0..g.dim()).map(Gen::Left));
    pool.extend((0..g.ngens()).map(Gen::Fun));
    pool.extend((0..g.dim()).map(Gen::Right));
    let unimodular = g.lie.is_unimodular();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t: Triple = std::array::from_fn(|_| (*pool.choose(&mut rng).expect("nonempty pool"), rng.gen_range(-modes..=modes)));
        let rights = t.iter().filter(|(x, _)| matches!(x, Gen::Right(_))).count();
        if !unimodular && rights >= 2 {
            continue;
        }
        out.push(t);
    }
    out
}

/// Mode Jacobi identity on sampled triples, inner brackets from the relations and
/// outer brackets from the engine.
pub fn check_jacobi(vac: &Vacuum, rc: &RightCurrentSet, b: Bounds, count: usize, seed: u64) -> Check {
    let g = vac.group.clone();
    let pool = Pool { vac, rc, dual: dual_form(&rc.form, &g.lie) };
    let triples = sample_triples(vac, count, b.modes, seed);
    let states = spanning_states(vac, b.weight, b.degree);
    let mut cases = Vec::new();
    for (ti, _) in triples.iter().enumerate() {
        for s in &states {
            cases.push((ti, s.clone()));
        }
    }
    Check::new("fock.jacobi", anchors::JACOBI)
        .param("bounds", b.label())
        .param("seed", seed)
        .param("triples", count)
        .run_cases(&cases, |(ti, s)| {
            let [(a, l), (bb, m), (c, n)] = triples[*ti];
            let st = unit(s);
            let mut r = State::new();
            for (x, i, (y, j), (z, k)) in [(a, l, (bb, m), (c, n)), (bb, m, (c, n), (a, l)), (c, n, (a, l), (bb, m))] {
                let inner = pool.bracket(y, j, z, k).expect("sampled pairs have closed brackets");
                r.add(&pool.outer(x, i, &inner, &st));
            }
            (!r.is_zero()).then(|| {
                format!(
                    "({}[{l}], {}[{m}], {}[{n}]) on {}: residual {}",
                    pool.label(a),
                    pool.label(bb),
                    pool.label(c),
                    show_state(&g, &st),
                    show_state(&g, &r)
                )
            })
        })
}

/// Every structural identity of a loaded document: Lie axioms, the group tables,
/// invariance of the named forms, the representations and their coactions.
pub fn check_structure(l: &crate::doc::Loaded) -> Check {
    let g = &l.group;
    let mut c = Check::new("data.structure", anchors::STRUCTURE);
    c = c.timed(|c| {
        let mut bad: Vec<String> = crate::lie::validate_lie_algebra(&g.lie).iter().map(|v| format!("lie: {v}")).collect();
        if bad.is_empty() {
            bad.extend(g.validate().iter().map(|v| v.to_string()));
        }
        for (name, q) in &l.forms {
            if !q.is_symmetric() {
                bad.push(format!("form {name} is not symmetric"));
            }
            if let Some((a, b, k)) = q.invariance_violations(&g.lie).first() {
                let lab = |i: usize| g.lie.labels[i].clone();
                bad.push(format!("form {name} is not invariant at ({},{},{})", lab(*a), lab(*b), lab(*k)));
            }
        }
        for (name, r) in &l.reps {
            bad.extend(r.coaction_violations(g).into_iter().map(|v| format!("rep {name}: {v}")));
        }
        c.cases = 1 + l.forms.len() + l.reps.len();
        if let Some(w) = bad.first() {
            c.fail(w.clone());
            c.note = Some(format!("{} violations", bad.len()));
        }
    });
    c
}

/// `Σ_i Lie_{v_i^l}(g_{ia}) = ρ(v_a)` in `O_G`.
pub fn check_rho(g: &crate::group::GroupData) -> Check {
    let rho = crate::lie::modular_character(&g.lie);
    let mut c = Check::new("group.rho", anchors::RHO);
    c.note = Some(format!("rho = ({})", rho.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
    let cases: Vec<usize> = (0..g.dim()).collect();
    let res = g.check_lemma_rho();
    c.run_cases(&cases, |a| (!res[*a].is_zero()).then(|| format!("{}: residual {}", g.lie.labels[*a], g.ring.show(&res[*a]))))
}

/// `Σ_i Lie_{[u,v_i]^l}(g_{iv}) = G^{Q0}_{u,v}` for all pairs.
pub fn check_killing(g: &crate::group::GroupData) -> Check {
    let n = g.dim();
    let cases: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    Check::new("group.killing", anchors::KILLING).run_cases(&cases, |(u, v)| {
        let r = g.check_lemma_killing(*u, *v);
        (!r.is_zero()).then(|| format!("({},{}): residual {}", g.lie.labels[*u], g.lie.labels[*v], g.ring.show(&r)))
    })
}
