//! The vacuum module: graded dimensions and mode relations.

use chiralx_core::cdo::spanning_states;
use chiralx_core::doc::golden;
use chiralx_core::fock::{commutator, FieldExpr, State, Vacuum};
use chiralx_core::report::{Bounds, Status};
use chiralx_core::suites::{check_affine, check_catrep, check_filtration, check_pbw, degree_window};
use chiralx_core::Rat;
use proptest::prelude::*;

fn vacuum(name: &str) -> Vacuum {
    let l = golden::load(name);
    let q = l.forms[l.defaults.form.as_deref().unwrap()].clone();
    Vacuum::new(l.group.clone(), q)
}

/// Coefficients of `Π_n (1 - q^n)^{-k}` up to `q^w`, by repeated convolution.
fn partitions(k: usize, w: usize) -> Vec<u64> {
    let mut out = vec![0u64; w + 1];
    out[0] = 1;
    for _ in 0..k {
        for part in 1..=w {
            for i in part..=w {
                out[i] += out[i - part];
            }
        }
    }
    out
}

#[test]
fn torus_dimensions_are_partition_counts() {
    // currents and jet coordinates each contribute one free boson per dimension;
    // the invertible coordinate absorbs the degree, so every degree looks alike
    for (name, rank) in [("gm1", 1usize), ("gm2", 2)] {
        let vac = vacuum(name);
        let want = partitions(2 * rank, 3);
        for w in 0..=3u32 {
            for d in degree_window(rank, 2) {
                assert_eq!(vac.graded_dimension(w, &d) as u64, want[w as usize], "{name} w={w} d={d:?}");
            }
        }
    }
}

#[test]
fn coordinate_ring_dimensions() {
    // normal monomials of SL2 avoid a*d: (d+1)^2 of them in degree d
    let sl2 = vacuum("sl2");
    for d in 0..=4i32 {
        assert_eq!(sl2.graded_dimension(0, &[d]), ((d + 1) * (d + 1)) as usize, "sl2 d={d}");
        assert_eq!(sl2.graded_dimension(0, &[-d - 1]), 0);
    }
    // t^i s^k and u^j s^k with j >= 1
    let borel = vacuum("borel");
    for d in 0..=4i32 {
        assert_eq!(borel.graded_dimension(0, &[d]), (2 * d + 1) as usize, "borel d={d}");
    }
}

#[test]
fn character_identity_on_all_documents() {
    for (name, _) in golden::ALL {
        let c = check_pbw(&vacuum(name), 3, 2);
        assert_eq!(c.status, Status::Pass, "{name}: {:?}", c.witness);
    }
}

#[test]
fn mode_relations_hold_at_small_bounds() {
    let b = Bounds::new(1, 1, 1);
    for (name, _) in golden::ALL {
        let l = golden::load(name);
        let q = l.forms[l.defaults.form.as_deref().unwrap()].clone();
        let vac = Vacuum::new(l.group.clone(), q.clone());
        let (_, rc) = chiralx_core::cdo::setup(l.group.clone(), &q);
        for c in [check_affine(&vac, b), check_catrep(&vac, b), check_filtration(&vac, &rc, b)] {
            assert_eq!(c.status, Status::Pass, "{name} {}: {:?}", c.id, c.witness);
            assert!(c.cases > 0);
        }
    }
}

fn one(s: &chiralx_core::fock::Basis) -> State {
    State::single(s.clone(), Rat::one())
}

#[test]
fn sl2_brackets_by_hand() {
    // basis e, h, f; level k1 has (e,f) = 1 and (h,h) = 2
    let vac = vacuum("sl2");
    let g = vac.group.clone();
    let (e, h, f) = (0, 1, 2);
    let cur = FieldExpr::CurrentGen;
    for s in spanning_states(&vac, 1, 1) {
        let st = one(&s);
        for m in -2..=2 {
            for n in -2..=2 {
                let mut want = vac.apply_current(h, m + n, &st);
                if m + n == 0 {
                    want.add_scaled(&st, &Rat::from_int(m as i64));
                }
                assert_eq!(commutator(&vac, &cur(e), m, &cur(f), n, &st), want);

                let want = vac.apply_current(e, m + n, &st).scaled(&Rat::from_int(2));
                assert_eq!(commutator(&vac, &cur(h), m, &cur(e), n, &st), want);

                let want = if m + n == 0 { st.scaled(&Rat::from_int(2 * m as i64)) } else { State::new() };
                assert_eq!(commutator(&vac, &cur(h), m, &cur(h), n, &st), want);

                // left e moves b to a: [J_e[m], b[n]] = a[m+n]
                let b = g.ring.parse("b").unwrap();
                let a = g.ring.parse("a").unwrap();
                assert_eq!(commutator(&vac, &cur(e), m, &FieldExpr::FunGen(b), n, &st), vac.apply_fun_mode(&a, m + n, &st));
            }
        }
    }
}

#[test]
fn function_modes_commute() {
    let vac = vacuum("sl2");
    let g = vac.group.clone();
    let fun = |s: &str| FieldExpr::FunGen(g.ring.parse(s).unwrap());
    for s in spanning_states(&vac, 1, 1) {
        for (m, n) in [(-1, 0), (0, 0), (-2, 1), (1, -1)] {
            assert!(commutator(&vac, &fun("a"), m, &fun("b*c"), n, &one(&s)).is_zero());
        }
    }
}

fn sl2_vacuum() -> &'static Vacuum {
    static V: std::sync::OnceLock<Vacuum> = std::sync::OnceLock::new();
    V.get_or_init(|| vacuum("sl2"))
}

fn field(k: usize) -> FieldExpr {
    let g = &sl2_vacuum().group;
    match k {
        0..=2 => FieldExpr::CurrentGen(k),
        3..=6 => FieldExpr::FunGen(g.ring.gen(k - 3)),
        _ => FieldExpr::normord(FieldExpr::CurrentGen(1), FieldExpr::FunGen(g.ring.gen(0))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutators_are_antisymmetric(x in 0usize..8, y in 0usize..8, m in -2i32..=2, n in -2i32..=2, pick in 0usize..64) {
        let vac = sl2_vacuum();
        let states = spanning_states(vac, 1, 1);
        let st = one(&states[pick % states.len()]);
        let ab = commutator(vac, &field(x), m, &field(y), n, &st);
        let ba = commutator(vac, &field(y), n, &field(x), m, &st);
        prop_assert_eq!(ab.scaled(&Rat::from_int(-1)), ba);
    }
}
