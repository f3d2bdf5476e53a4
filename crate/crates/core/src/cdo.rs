//! Right currents and the checks of left/right commutation and the dual level.
//!
//! `J^R_v = Σ_i :g_{iv} J_i: + η_{−Q−Q0}(v)`. With left fields acting by right
//! multiplication the right currents form an anti-homomorphism:
//! `[J^R_u[m], J^R_v[n]] = −Σ_c f^c_{uv} J^R_c[m+n] + m δ_{m+n,0} Q'(u,v)`.

use std::sync::Arc;

use crate::fock::{apply_field, commutator, show_state, vacuum, Basis, FieldExpr, State, Vacuum};
use crate::group::{Frame, GroupData};
use crate::lie::{dual_form, killing_form, BilinearForm};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::report::{anchors, Bounds, Check, Status};

#[derive(Clone, Debug)]
pub struct RightCurrentSet {
    pub form: BilinearForm,
    /// `Σ_i :g_{iv} J_i:`
    pub remb1: Vec<FieldExpr>,
    /// `η_{−Q−Q0}(v)` as a jet field
    pub remb2: Vec<FieldExpr>,
    pub fields: Vec<FieldExpr>,
    /// the jets `η_{−Q−Q0}(v)`
    pub correction: Vec<Poly>,
}

impl RightCurrentSet {
    pub fn get(&self, v: usize) -> &FieldExpr {
        &self.fields[v]
    }
}

/// The form of the correction term, `−Q − Q0`.
///
/// With left fields acting by right multiplication the double contraction inside
/// `:g_{iv} J_i:` contributes `+G^{Q0}`, so the correction carries `−Q0`.
pub fn anomaly_form(g: &GroupData, q: &BilinearForm) -> BilinearForm {
    killing_form(&g.lie).add(q).neg()
}

pub fn build_right_currents(g: &GroupData, q: &BilinearForm) -> RightCurrentSet {
    build_right_currents_with(g, q, Rat::one())
}

/// As [`build_right_currents`] with the correction term scaled by `sign`; used to
/// demonstrate that the checks detect a wrong correction.
pub fn build_right_currents_with(g: &GroupData, q: &BilinearForm, sign: Rat) -> RightCurrentSet {
    let n = g.dim();
    let aq = anomaly_form(g, q);
    let mut remb1 = Vec::new();
    let mut remb2 = Vec::new();
    let mut fields = Vec::new();
    let mut correction = Vec::new();
    for v in 0..n {
        let terms: Vec<(Rat, FieldExpr)> = (0..n)
            .filter(|i| !g.ad_coeff[*i][v].is_zero())
            .map(|i| (Rat::one(), FieldExpr::normord(FieldExpr::FunGen(g.ad_coeff[i][v].clone()), FieldExpr::CurrentGen(i))))
            .collect();
        let r1 = FieldExpr::memo(FieldExpr::comb(terms));
        let eta = g.eta_q(&aq, v).scaled(&sign);
        let r2 = FieldExpr::Jet(eta.clone());
        fields.push(FieldExpr::memo(FieldExpr::sum(r1.clone(), r2.clone())));
        remb1.push(r1);
        remb2.push(r2);
        correction.push(eta);
    }
    RightCurrentSet { form: q.clone(), remb1, remb2, fields, correction }
}

/// All basis vectors with weight ≤ W and every degree component in `[-D, D]`.
pub fn spanning_states(vac: &Vacuum, weight: u32, degree: u32) -> Vec<Basis> {
    let r = vac.group.ring.grading_rank();
    let d = degree as i32;
    let mut degs: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..r {
        degs = degs.into_iter().flat_map(|p| (-d..=d).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    let mut out = Vec::new();
    for w in 0..=weight {
        for dv in &degs {
            out.extend(vac.basis(w, dv));
        }
    }
    out
}

fn mode_pairs(k: i32) -> Vec<(i32, i32)> {
    let mut v = Vec::new();
    for m in -k..=k {
        for n in -k..=k {
            v.push((m, n));
        }
    }
    v
}

fn unit(b: &Basis) -> State {
    State::single(b.clone(), Rat::one())
}

/// Cases `(u, v, m, n, state)` expanded for parallel evaluation.
fn cases(n: usize, modes: i32, states: &[Basis]) -> Vec<(usize, usize, i32, i32, Basis)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            for (m, k) in mode_pairs(modes) {
                for s in states {
                    out.push((u, v, m, k, s.clone()));
                }
            }
        }
    }
    out
}

/// The symbol of `J^R_v`: its zero mode acts on functions by the right-invariant field.
pub fn check_symbol(vac: &Vacuum, rc: &RightCurrentSet) -> Check {
    let g = &vac.group;
    let gens: Vec<usize> = (0..g.ngens()).collect();
    let n = g.dim();
    let cases: Vec<(usize, usize)> = (0..n).flat_map(|v| gens.iter().map(move |k| (v, *k))).collect();
    Check::new("cdo.symbol", anchors::MAIN_C).run_cases(&cases, |(v, k)| {
        let x = g.ring.gen(*k);
        let s = vac.apply_fun_mode(&x, 0, &vacuum());
        let lhs = apply_field(vac, rc.get(*v), 0, &s);
        let want = vac.apply_fun_mode(&g.lie_derivative(Frame::Right, *v, &x), 0, &vacuum());
        (lhs != want).then(|| format!("J^R_{}[0] {}|0> = {}", g.lie.labels[*v], g.ring.names[*k], show_state(g, &lhs)))
    })
}

/// `[J^L_u[m], J^R_v[n]] = 0` and the two halves `±m (G^{Q+Q0}_{u,v})[m+n]`.
pub fn check_left_right(vac: &Vacuum, rc: &RightCurrentSet, b: Bounds) -> Vec<Check> {
    let g = vac.group.clone();
    let states = spanning_states(vac, b.weight, b.degree);
    let n = g.dim();
    let aq = anomaly_form(&g, &rc.form);
    let gq: Vec<Vec<Poly>> = (0..n).map(|u| (0..n).map(|v| g.g_function(&aq, u, v)).collect()).collect();
    let all = cases(n, b.modes, &states);
    let label = |u: usize, v: usize, m: i32, k: i32, s: &Basis| {
        format!("u={},v={},m={m},n={k},s={}", g.lie.labels[u], g.lie.labels[v], show_state(&g, &unit(s)))
    };
    let full = Check::new("cdo.left-right", anchors::MAIN_B).param("bounds", b.label()).run_cases(&all, |(u, v, m, k, s)| {
        let r = commutator(vac, &FieldExpr::CurrentGen(*u), *m, rc.get(*v), *k, &unit(s));
        (!r.is_zero()).then(|| format!("{}: residual {}", label(*u, *v, *m, *k, s), show_state(&g, &r)))
    });
    let halves = Check::new("cdo.left-right.halves", anchors::MAIN_B).param("bounds", b.label()).run_cases(&all, |(u, v, m, k, s)| {
        let st = unit(s);
        let h1 = commutator(vac, &FieldExpr::CurrentGen(*u), *m, &rc.remb1[*v], *k, &st);
        let h2 = commutator(vac, &FieldExpr::CurrentGen(*u), *m, &rc.remb2[*v], *k, &st);
        // remb2 half: m·(G^{−Q−Q0})[m+n]; remb1 half is its negative
        let want2 = vac.apply_fun_mode(&gq[*u][*v], m + k, &st).scaled(&Rat::from_int(*m as i64));
        let want1 = want2.scaled(&Rat::from_int(-1));
        if h2 != want2 {
            return Some(format!("{}: remb2 half {} expected {}", label(*u, *v, *m, *k, s), show_state(&g, &h2), show_state(&g, &want2)));
        }
        if h1 != want1 {
            return Some(format!("{}: remb1 half {} expected {}", label(*u, *v, *m, *k, s), show_state(&g, &h1), show_state(&g, &want1)));
        }
        None
    });
    vec![full, halves]
}

/// Vacuum coefficient of `[J^R_u[1], J^R_v[-1]]|0⟩` with the bracket term removed.
pub fn extract_level(vac: &Vacuum, rc: &RightCurrentSet, u: usize, v: usize) -> Rat {
    let g = &vac.group;
    let r = commutator(vac, rc.get(u), 1, rc.get(v), -1, &vacuum());
    let mut level = r.coeff(&Basis::vacuum());
    // bracket contribution −Σ_c f^c_{uv} J^R_c[0]|0⟩ removed from the vacuum coefficient
    for c in 0..g.dim() {
        let f = &g.lie.f[u][v][c];
        if !f.is_zero() {
            let z = apply_field(vac, rc.get(c), 0, &vacuum());
            level += &(f * &z.coeff(&Basis::vacuum()));
        }
    }
    level
}

/// The extracted level matrix compared with `Q' = −Q − Q0`.
pub fn check_dual_level(vac: &Vacuum, rc: &RightCurrentSet) -> Check {
    let g = &vac.group;
    let n = g.dim();
    let want = dual_form(&rc.form, &g.lie);
    let mut c = Check::new("cdo.dual-level", anchors::DUAL);
    c = c.timed(|c| {
        let mut observed = Vec::new();
        for u in 0..n {
            for v in 0..n {
                c.cases += 1;
                let got = extract_level(vac, rc, u, v);
                observed.push(format!("{}{}={}", g.lie.labels[u], g.lie.labels[v], got));
                if got != want.q[u][v] {
                    c.fail(format!("({},{}): got {got}, expected {}", g.lie.labels[u], g.lie.labels[v], want.q[u][v]));
                }
            }
        }
        c.note = Some(observed.join(" "));
    });
    c
}

/// `[J^R_u[m], J^R_v[n]] = −Σ_c f^c_{uv} J^R_c[m+n] + m δ Q'(u,v)`; declined when ρ ≠ 0.
pub fn check_right_bracket(vac: &Vacuum, rc: &RightCurrentSet, b: Bounds) -> Check {
    let g = vac.group.clone();
    let c = Check::new("cdo.right-bracket", anchors::REMB).param("bounds", b.label());
    if !g.lie.is_unimodular() {
        return c.skip(format!("non-unimodular algebra; observed vacuum-level correction: {}", observed_correction(vac, rc)));
    }
    let qd = dual_form(&rc.form, &g.lie);
    let states = spanning_states(vac, b.weight, b.degree);
    let n = g.dim();
    let all = cases(n, b.modes, &states);
    // chunked so the caches can be trimmed between chunks
    let mut c = c;
    for chunk in all.chunks(CHUNK) {
        vac.trim_caches();
        c = c.run_cases(chunk, |case| right_bracket_case(vac, rc, &qd, case));
        if c.status == Status::Fail {
            break;
        }
    }
    c
}

const CHUNK: usize = 512;

fn right_bracket_case(vac: &Vacuum, rc: &RightCurrentSet, qd: &BilinearForm, (u, v, m, k, s): &(usize, usize, i32, i32, Basis)) -> Option<String> {
    let g = &vac.group;
    let n = g.dim();
    {
        let st = unit(s);
        let lhs = commutator(vac, rc.get(*u), *m, rc.get(*v), *k, &st);
        let mut rhs = State::new();
        for cc in 0..n {
            let f = &g.lie.f[*u][*v][cc];
            if !f.is_zero() {
                rhs.add_scaled(&apply_field(vac, rc.get(cc), m + k, &st), &-f);
            }
        }
        if m + k == 0 {
            rhs.add_scaled(&st, &(&Rat::from_int(*m as i64) * &qd.q[*u][*v]));
        }
        (lhs != rhs).then(|| {
            let mut d = lhs.clone();
            d.sub(&rhs);
            format!(
                "u={},v={},m={m},n={k},s={}: residual {}",
                g.lie.labels[*u],
                g.lie.labels[*v],
                show_state(g, &st),
                show_state(g, &d)
            )
        })
    }
}

/// The two nonvanishing products of the right currents as states:
/// `J^R_u[0] J^R_v[-1]|0⟩ = −Σ_c f^c_{uv} J^R_c[-1]|0⟩` and `J^R_u[1] J^R_v[-1]|0⟩ = Q'(u,v)|0⟩`.
/// Through the commutator formula these fix `[J^R_u[m], J^R_v[n]]` for every `m, n`.
pub fn check_right_ope(vac: &Vacuum, rc: &RightCurrentSet) -> Check {
    let g = vac.group.clone();
    let c = Check::new("cdo.right-bracket.ope", anchors::REMB);
    if !g.lie.is_unimodular() {
        return c.skip("non-unimodular algebra");
    }
    let qd = dual_form(&rc.form, &g.lie);
    let n = g.dim();
    let pairs: Vec<(usize, usize, i32)> = (0..n).flat_map(|u| (0..n).flat_map(move |v| [(u, v, 0), (u, v, 1)])).collect();
    c.run_cases(&pairs, |(u, v, j)| {
        let bv = apply_field(vac, rc.get(*v), -1, &vacuum());
        let got = apply_field(vac, rc.get(*u), *j, &bv);
        let mut want = State::new();
        if *j == 0 {
            for cc in 0..n {
                let f = &g.lie.f[*u][*v][cc];
                if !f.is_zero() {
                    want.add_scaled(&apply_field(vac, rc.get(cc), -1, &vacuum()), &-f);
                }
            }
        } else {
            want.add_scaled(&vacuum(), &qd.q[*u][*v]);
        }
        (got != want).then(|| {
            let mut d = got.clone();
            d.sub(&want);
            format!("J^R_{}[{j}] J^R_{}[-1]|0>: residual {}", g.lie.labels[*u], g.lie.labels[*v], show_state(&g, &d))
        })
    })
}

/// For non-unimodular input: the residual of the predicted bracket on the vacuum at modes (1,-1) and (0,-1).
pub fn observed_correction(vac: &Vacuum, rc: &RightCurrentSet) -> String {
    let g = &vac.group;
    let qd = dual_form(&rc.form, &g.lie);
    let n = g.dim();
    let mut parts = Vec::new();
    for u in 0..n {
        for v in 0..n {
            for (m, k) in [(1, -1), (0, -1)] {
                let lhs = commutator(vac, rc.get(u), m, rc.get(v), k, &vacuum());
                let mut rhs = State::new();
                for c in 0..n {
                    let f = &g.lie.f[u][v][c];
                    if !f.is_zero() {
                        rhs.add_scaled(&apply_field(vac, rc.get(c), m + k, &vacuum()), &-f);
                    }
                }
                if m + k == 0 {
                    rhs.add_scaled(&vacuum(), &(&Rat::from_int(m as i64) * &qd.q[u][v]));
                }
                let mut d = lhs;
                d.sub(&rhs);
                if !d.is_zero() {
                    parts.push(format!("[{}[{m}],{}[{k}]]: {}", g.lie.labels[u], g.lie.labels[v], show_state(g, &d)));
                }
            }
        }
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join("; ")
    }
}

/// `[J_u[m], η(ω)[n]] = η(Lie_u ω)[m+n] + m ⟨u, ω⟩[m+n]` for a family of test forms.
pub fn check_eta_commutation(vac: &Vacuum, b: Bounds) -> Check {
    let g = vac.group.clone();
    let states = spanning_states(vac, b.weight, b.degree);
    let forms = test_forms(&g);
    let n = g.dim();
    let mut all = Vec::new();
    for (fi, _) in forms.iter().enumerate() {
        for u in 0..n {
            for (m, k) in mode_pairs(b.modes) {
                for s in &states {
                    all.push((fi, u, m, k, s.clone()));
                }
            }
        }
    }
    let pre: Vec<Vec<(Poly, Poly, Poly)>> = forms
        .iter()
        .map(|w| {
            (0..n)
                .map(|u| {
                    let eta = g.eta(w);
                    let lie = g.eta(&g.lie_derivative_form(Frame::Left, u, w));
                    let ctr = g.contract(Frame::Left, u, w);
                    (eta, lie, ctr)
                })
                .collect()
        })
        .collect();
    Check::new("cdo.eta", anchors::ACTIONONETA).param("bounds", b.label()).param("forms", forms.len()).run_cases(&all, |(fi, u, m, k, s)| {
        let (eta, lie, ctr) = &pre[*fi][*u];
        let st = unit(s);
        let lhs = commutator(vac, &FieldExpr::CurrentGen(*u), *m, &FieldExpr::Jet(eta.clone()), *k, &st);
        let mut rhs = apply_field(vac, &FieldExpr::Jet(lie.clone()), m + k, &st);
        rhs.add_scaled(&vac.apply_fun_mode(ctr, m + k, &st), &Rat::from_int(*m as i64));
        (lhs != rhs).then(|| format!("form {fi}, u={}, m={m}, n={k}, s={}", g.lie.labels[*u], show_state(&g, &st)))
    })
}

/// `dx_k`, `x_j dx_k` for all generator pairs, and the coframe.
pub fn test_forms(g: &GroupData) -> Vec<Vec<Poly>> {
    let m = g.ngens();
    let mut out = Vec::new();
    for k in 0..m {
        let mut w = vec![Poly::new(); m];
        w[k] = crate::poly::poly_const(Rat::one());
        out.push(w);
    }
    for j in 0..m {
        for k in 0..m {
            let mut w = vec![Poly::new(); m];
            w[k] = g.ring.gen(j);
            out.push(w);
        }
    }
    for row in &g.coframe {
        out.push(row.clone());
    }
    out
}

/// Builds the vacuum module and its right currents at level `q`.
pub fn setup(g: Arc<GroupData>, q: &BilinearForm) -> (Vacuum, RightCurrentSet) {
    let rc = build_right_currents(&g, q);
    (Vacuum::new(g, q.clone()), rc)
}
