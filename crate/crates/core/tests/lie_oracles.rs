use chiralx_core::lie::{ce_cohomology, dual_form, killing_form, modular_character, validate_lie_algebra, BilinearForm, LieAlgebraData, ModuleData};
use chiralx_core::Rat;
use proptest::prelude::*;

fn r(n: i64) -> Rat {
    Rat::from_int(n)
}

/// `ad_x` as a dense matrix, built straight from the structure constants.
fn ad(l: &LieAlgebraData, x: &[Rat]) -> Vec<Vec<Rat>> {
    let n = l.dim();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for a in 0..n {
        for col in 0..n {
            for row in 0..n {
                m[row][col] += &(&x[a] * &l.f[a][col][row]);
            }
        }
    }
    m
}

fn trace_of_product(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Rat {
    let mut t = Rat::zero();
    for i in 0..a.len() {
        for j in 0..a.len() {
            t += &(&a[i][j] * &b[j][i]);
        }
    }
    t
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    (0..n).map(|k| if k == i { r(1) } else { r(0) }).collect()
}

fn heisenberg() -> LieAlgebraData {
    LieAlgebraData::from_entries(vec!["x".into(), "y".into(), "z".into()], &[(0, 1, 2, r(1)), (1, 0, 2, r(-1))]).unwrap()
}

fn algebras() -> Vec<LieAlgebraData> {
    vec![LieAlgebraData::abelian(1), LieAlgebraData::abelian(2), LieAlgebraData::borel(), LieAlgebraData::sl2(), heisenberg()]
}

#[test]
fn killing_form_matches_trace_of_adjoint_products() {
    for l in algebras() {
        let n = l.dim();
        let q0 = killing_form(&l);
        for u in 0..n {
            for v in 0..n {
                let want = trace_of_product(&ad(&l, &unit(n, u)), &ad(&l, &unit(n, v)));
                assert_eq!(q0.q[u][v], want, "{:?} ({u},{v})", l.labels);
            }
        }
    }
}

#[test]
fn modular_character_is_trace_of_adjoint() {
    for l in algebras() {
        let n = l.dim();
        let rho = modular_character(&l);
        for a in 0..n {
            let m = ad(&l, &unit(n, a));
            let tr = (0..n).fold(Rat::zero(), |acc, i| &acc + &m[i][i]);
            assert_eq!(rho.0[a], tr);
        }
    }
}

#[test]
fn ce_cohomology_known_values() {
    let triv = |l: &LieAlgebraData| ce_cohomology(l, &ModuleData::trivial(l)).unwrap();
    // abelian: the differential vanishes, so H^k = Λ^k
    assert_eq!(triv(&LieAlgebraData::abelian(1)), vec![1, 1]);
    assert_eq!(triv(&LieAlgebraData::abelian(2)), vec![1, 2, 1]);
    // semisimple: H^1 = H^2 = 0, H^3 spanned by the Cartan 3-cocycle
    assert_eq!(triv(&LieAlgebraData::sl2()), vec![1, 0, 0, 1]);
    // [h,e] = 2e: H^1 = (b/[b,b])^* is 1-dimensional, H^2 = 0
    assert_eq!(triv(&LieAlgebraData::borel()), vec![1, 1, 0]);
    assert_eq!(triv(&heisenberg()), vec![1, 2, 2, 1]);
}

#[test]
fn poincare_duality_holds_exactly_for_unimodular_algebras() {
    for l in algebras() {
        let h = ce_cohomology(&l, &ModuleData::trivial(&l)).unwrap();
        let dual: Vec<usize> = h.iter().rev().copied().collect();
        assert_eq!(h == dual, l.is_unimodular(), "{:?}: {h:?}", l.labels);
    }
}

#[test]
fn standard_representation_cohomology_vanishes() {
    // Whitehead: nontrivial irreducible modules of a semisimple algebra are acyclic
    let l = LieAlgebraData::sl2();
    let z = r(0);
    let std = ModuleData {
        dim: 2,
        action: vec![
            vec![vec![z.clone(), r(1)], vec![z.clone(), z.clone()]],
            vec![vec![r(1), z.clone()], vec![z.clone(), r(-1)]],
            vec![vec![z.clone(), z.clone()], vec![r(1), z.clone()]],
        ],
    };
    assert!(std.check_representation(&l).is_ok());
    assert_eq!(ce_cohomology(&l, &std).unwrap(), vec![0, 0, 0, 0]);
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-4i64..=4, n)
}

proptest! {
    #[test]
    fn sl2_bracket_satisfies_jacobi(x in small_vec(3), y in small_vec(3), z in small_vec(3)) {
        let l = LieAlgebraData::sl2();
        let v = |a: &Vec<i64>| a.iter().map(|&c| r(c)).collect::<Vec<_>>();
        let (x, y, z) = (v(&x), v(&y), v(&z));
        let a = l.bracket(&x, &l.bracket(&y, &z));
        let b = l.bracket(&y, &l.bracket(&z, &x));
        let c = l.bracket(&z, &l.bracket(&x, &y));
        for i in 0..3 {
            prop_assert!((&(&a[i] + &b[i]) + &c[i]).is_zero());
        }
    }

    #[test]
    fn killing_form_is_invariant(x in small_vec(3), y in small_vec(3), z in small_vec(3)) {
        let l = LieAlgebraData::sl2();
        let q0 = killing_form(&l);
        let v = |a: &Vec<i64>| a.iter().map(|&c| r(c)).collect::<Vec<_>>();
        let (x, y, z) = (v(&x), v(&y), v(&z));
        prop_assert_eq!(q0.eval(&l.bracket(&x, &y), &z), q0.eval(&x, &l.bracket(&y, &z)));
    }

    #[test]
    fn dual_level_is_an_involution(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6) {
        // every symmetric form on an abelian algebra is invariant
        let l = LieAlgebraData::abelian(2);
        let mut q = BilinearForm::zero(2);
        q.q[0][0] = r(a);
        q.q[0][1] = r(b);
        q.q[1][0] = r(b);
        q.q[1][1] = r(c);
        prop_assert_eq!(dual_form(&dual_form(&q, &l), &l), q.clone());
        prop_assert_eq!(dual_form(&q, &l), q.neg());
    }
}

#[test]
fn corrupted_structure_constant_is_detected() {
    let mut l = LieAlgebraData::sl2();
    l.f[0][2][1] = r(2);
    assert!(!validate_lie_algebra(&l).is_empty());
}
