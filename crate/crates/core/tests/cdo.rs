//! Right currents on the vacuum module.

use chiralx_core::cdo::{
    build_right_currents_with, check_dual_level, check_eta_commutation, check_left_right, check_right_bracket, check_right_ope, check_symbol,
    extract_level, setup,
};
use chiralx_core::doc::golden;
use chiralx_core::fock::{apply_field, vacuum, Vacuum};
use chiralx_core::lie::LieAlgebraData;
use chiralx_core::report::{Bounds, Status};
use chiralx_core::suites::check_jacobi;
use chiralx_core::Rat;

/// `tr(ad_u ad_v)` from the structure constants.
fn killing(l: &LieAlgebraData, u: usize, v: usize) -> Rat {
    let n = l.dim();
    let mut t = Rat::zero();
    for i in 0..n {
        for j in 0..n {
            // (ad_u)_{ji} = f[u][i][j], (ad_v)_{ij} = f[v][j][i]
            t += &(&l.f[u][i][j] * &l.f[v][j][i]);
        }
    }
    t
}

#[test]
fn extracted_levels_are_the_dual_levels() {
    for (name, _) in golden::ALL {
        let l = golden::load(name);
        for (fname, q) in &l.forms {
            let (vac, rc) = setup(l.group.clone(), q);
            let n = l.group.dim();
            for u in 0..n {
                for v in 0..n {
                    let want = -&(&q.q[u][v] + &killing(&l.group.lie, u, v));
                    assert_eq!(extract_level(&vac, &rc, u, v), want, "{name}.{fname} ({u},{v})");
                }
            }
            assert_eq!(check_dual_level(&vac, &rc).status, Status::Pass);
        }
    }
}

#[test]
fn known_dual_levels() {
    let l = golden::load("sl2");
    let (vac, rc) = setup(l.group.clone(), &l.forms["k1"]);
    assert_eq!(extract_level(&vac, &rc, 0, 2), Rat::from_int(-5));
    assert_eq!(extract_level(&vac, &rc, 1, 1), Rat::from_int(-10));
    // the critical form -2 kappa is its own dual
    let (vac, rc) = setup(l.group.clone(), &l.forms["crit"]);
    assert_eq!(extract_level(&vac, &rc, 0, 2), Rat::from_int(-2));
    assert_eq!(extract_level(&vac, &rc, 1, 1), Rat::from_int(-4));

    let l = golden::load("gm1");
    for (form, q) in [("q1", 1), ("q2", 2), ("qm3", -3)] {
        let (vac, rc) = setup(l.group.clone(), &l.forms[form]);
        assert_eq!(extract_level(&vac, &rc, 0, 0), Rat::from_int(-q), "{form}");
    }
}

#[test]
fn right_zero_modes_are_right_invariant_fields() {
    // right e sends a to c and b to d; right f sends c to a
    let l = golden::load("sl2");
    let g = l.group.clone();
    let (vac, rc) = setup(g.clone(), &l.forms["k1"]);
    let on = |v: usize, x: &str| {
        let s = vac.apply_fun_mode(&g.ring.parse(x).unwrap(), 0, &vacuum());
        apply_field(&vac, rc.get(v), 0, &s)
    };
    let state = |x: &str| vac.apply_fun_mode(&g.ring.parse(x).unwrap(), 0, &vacuum());
    assert_eq!(on(0, "a"), state("c"));
    assert_eq!(on(0, "b"), state("d"));
    assert_eq!(on(2, "c"), state("a"));
    assert!(on(2, "a").is_zero());
    assert_eq!(on(1, "c"), state("-c"));
}

#[test]
fn a_wrong_correction_is_detected() {
    for (name, form) in [("sl2", "k1"), ("gm1", "q1"), ("gm2", "diag12")] {
        let l = golden::load(name);
        let q = &l.forms[form];
        for sign in [0, -1, 2] {
            let rc = build_right_currents_with(&l.group, q, Rat::from_int(sign));
            let vac = Vacuum::new(l.group.clone(), q.clone());
            assert_eq!(check_dual_level(&vac, &rc).status, Status::Fail, "{name} sign {sign}: dual level");
            assert_eq!(check_right_ope(&vac, &rc).status, Status::Fail, "{name} sign {sign}: ope");
            let halves = &check_left_right(&vac, &rc, Bounds::new(0, 1, 1))[1];
            assert_eq!(halves.status, Status::Fail, "{name} sign {sign}: halves");
        }
    }
}

#[test]
fn commutation_and_symbol_on_all_documents() {
    let b = Bounds::new(1, 1, 1);
    for (name, _) in golden::ALL {
        let l = golden::load(name);
        let q = &l.forms[l.defaults.form.as_deref().unwrap()];
        let (vac, rc) = setup(l.group.clone(), q);
        let mut checks = vec![check_symbol(&vac, &rc), check_eta_commutation(&vac, b), check_jacobi(&vac, &rc, b, 12, 3)];
        checks.extend(check_left_right(&vac, &rc, b));
        for c in checks {
            assert_eq!(c.status, Status::Pass, "{name} {}: {:?}", c.id, c.witness);
        }
    }
}

#[test]
fn right_bracket_on_unimodular_documents() {
    for (name, b) in [("gm1", Bounds::new(2, 1, 2)), ("gm2", Bounds::new(1, 1, 1)), ("sl2", Bounds::new(1, 1, 1))] {
        let l = golden::load(name);
        for q in l.forms.values() {
            let (vac, rc) = setup(l.group.clone(), q);
            for c in [check_right_ope(&vac, &rc), check_right_bracket(&vac, &rc, b)] {
                assert_eq!(c.status, Status::Pass, "{name} {}: {:?}", c.id, c.witness);
            }
            if name == "sl2" {
                break;
            }
        }
    }
}

#[test]
fn non_unimodular_bracket_is_declined() {
    let l = golden::load("borel");
    let (vac, rc) = setup(l.group.clone(), &l.forms["q1"]);
    let c = check_right_bracket(&vac, &rc, Bounds::new(1, 1, 1));
    assert_eq!(c.status, Status::Skipped);
    assert!(c.note.unwrap().contains("observed"));
    assert_eq!(check_right_ope(&vac, &rc).status, Status::Skipped);
}
