//! The transfer map between tensor-product bimodules.

use chiralx_core::bimodule::{check_intertwining, TensorBasis, Transfer};
use chiralx_core::doc::golden;
use chiralx_core::fock::{Basis, FieldExpr};
use chiralx_core::poly::{Mono, Var};
use chiralx_core::report::Status;
use chiralx_core::suites::degree_window;
use chiralx_core::Rat;

fn transfer(name: &str, rep: &str, q: &str, q_prime: &str) -> Transfer {
    let l = golden::load(name);
    Transfer::new(l.group.clone(), l.reps[rep].clone(), l.forms[q].clone(), l.forms[q_prime].clone())
}

fn all_pass(t: &Transfer, w: u32, d: u32) -> Vec<(String, Status, Option<String>)> {
    let degrees = degree_window(t.source.vac.group.ring.grading_rank(), d);
    check_intertwining(t, w, &degrees, 1).into_iter().map(|c| (c.id, c.status, c.witness)).collect()
}

#[test]
fn transfer_intertwines_on_every_document() {
    for (name, rep, q, qp) in [
        ("gm1", "char1", "q1", "q1"),
        ("gm1", "char1", "q1", "q2"),
        ("gm1", "char1", "qm3", "zero"),
        ("gm2", "char10", "diag11", "diag12"),
        ("sl2", "std", "k1", "k1"),
        ("sl2", "std", "zero", "k1"),
    ] {
        let t = transfer(name, rep, q, qp);
        for (id, status, witness) in all_pass(&t, 1, 1) {
            assert_eq!(status, Status::Pass, "{name} {rep} Q={q} Q'={qp} {id}: {witness:?}");
        }
    }
}

#[test]
fn vacuum_goes_to_the_coaction() {
    // the character y of the circle: m ⊗ |0> maps to m ⊗ y|0>
    let t = transfer("gm1", "char1", "q1", "q1");
    let g = &t.source.vac.group;
    let y = g.ring.names.iter().position(|n| n == "y").unwrap();
    let image = t.apply_basis(&TensorBasis { m_word: Default::default(), leaf: 0, v: Basis::vacuum() });
    let want = TensorBasis { m_word: Default::default(), leaf: 0, v: Basis { word: Default::default(), jet: Mono::var(Var::new(y, 0)) } };
    assert_eq!(image.sorted(), vec![(want, Rat::one())]);
}

#[test]
fn transfer_is_bijective_on_small_blocks() {
    let t = transfer("sl2", "std", "k1", "k1");
    for w in 0..=1 {
        for d in -1..=1 {
            let (rank, dim) = t.block_rank(w, &[d]);
            assert_eq!(rank, dim, "w={w} d={d}");
        }
    }
}

#[test]
fn dropping_the_correction_breaks_intertwining() {
    let mut t = transfer("gm1", "char1", "q1", "q1");
    let g = t.source.vac.group.clone();
    // keep the current term only
    t.phi_module[0] = FieldExpr::normord(FieldExpr::FunGen(g.ad_coeff[0][0].clone()), FieldExpr::ModuleCurrent(0));
    let out = all_pass(&t, 1, 1);
    assert_eq!(out[1].1, Status::Fail, "{out:?}");
}

#[test]
fn a_swapped_coaction_is_caught_twice() {
    let l = golden::load("sl2");
    let mut rep = l.reps["std"].clone();
    rep.coaction.swap(0, 1);
    let t = Transfer::new(l.group.clone(), rep, l.forms["k1"].clone(), l.forms["k1"].clone());
    let out = all_pass(&t, 0, 1);
    assert_eq!(out[0].1, Status::Fail);
    assert_eq!(out[1].1, Status::Fail);
}
