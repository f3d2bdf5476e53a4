use chiralx_core::linalg::{dense_rank, rank, SparseRow};
use chiralx_core::{Lin, Rat};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn lin(terms: &[(u8, i64)]) -> Lin<u8> {
    let mut l = Lin::new();
    for (k, c) in terms {
        l.add_term(*k, Rat::from_int(*c));
    }
    l
}

fn terms() -> impl Strategy<Value = Vec<(u8, i64)>> {
    proptest::collection::vec((0u8..8, -5i64..=5), 0..12)
}

/// Textbook Gaussian elimination over arbitrary-precision rationals.
fn oracle_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(row, p);
        for i in 0..a.len() {
            if i != row && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[row][c];
                for j in 0..cols {
                    let t = &f * &a[row][j];
                    a[i][j] -= t;
                }
            }
        }
        row += 1;
    }
    row
}

fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    m.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect()
}

proptest! {
    #[test]
    fn combinations_form_a_vector_space(a in terms(), b in terms(), c in -4i64..=4) {
        let (x, y) = (lin(&a), lin(&b));
        let mut s = x.clone();
        s.add(&y);
        s.sub(&y);
        prop_assert_eq!(&s, &x);
        let mut t = x.scaled(&Rat::from_int(c));
        t.add_scaled(&x, &Rat::from_int(-c));
        prop_assert!(t.is_zero());
        prop_assert!(x.iter().all(|(_, v)| !v.is_zero()));
    }

    #[test]
    fn rank_agrees_with_gaussian_elimination(m in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 1..7)) {
        let want = oracle_rank(&m);
        prop_assert_eq!(dense_rank(&to_rat(&m)), want);
        // rows arriving in reverse order reduce to the same rank
        let rows = m.iter().rev().map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, &x)| (j, Rat::from_int(x))).collect::<SparseRow>());
        prop_assert_eq!(rank(rows), want);
    }
}

#[test]
fn rank_of_known_matrices() {
    assert_eq!(dense_rank(&to_rat(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]])), 2);
    assert_eq!(dense_rank(&to_rat(&[vec![0, 0], vec![0, 0]])), 0);
    assert_eq!(dense_rank(&to_rat(&[vec![2, 1], vec![1, 1]])), 2);
}
