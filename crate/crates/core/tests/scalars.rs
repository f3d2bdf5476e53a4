use chiralx_core::Rat;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn big(r: &Rat) -> BigRational {
    let (n, d) = r.parts();
    BigRational::new(n, d)
}

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn any_rat() -> impl Strategy<Value = (i64, i64)> {
    // includes values near the i64 boundary to exercise promotion
    (prop_oneof![-1000i64..1000, Just(i64::MAX), Just(i64::MIN + 1), -(1i64 << 40)..(1i64 << 40)], prop_oneof![1i64..50, Just(i64::MAX)])
}

proptest! {
    #[test]
    fn field_operations_agree_with_big_rationals((an, ad) in any_rat(), (bn, bd) in any_rat()) {
        let (a, b) = (rat(an, ad), rat(bn, bd));
        let (x, y) = (big(&a), big(&b));
        prop_assert_eq!(big(&(&a + &b)), &x + &y);
        prop_assert_eq!(big(&(&a - &b)), &x - &y);
        prop_assert_eq!(big(&(&a * &b)), &x * &y);
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), &x / &y);
        }
        prop_assert_eq!(a.cmp(&b), x.cmp(&y));
    }

    #[test]
    fn representation_is_canonical(n in -500i64..500, d in 1i64..500, k in 1i64..40) {
        prop_assert_eq!(rat(n * k, d * k), rat(n, d));
        prop_assert_eq!(rat(-n, -d), rat(n, d));
    }

    #[test]
    fn display_round_trips((n, d) in any_rat()) {
        let a = rat(n, d);
        prop_assert_eq!(a.to_string().parse::<Rat>().unwrap(), a);
    }
}

#[test]
fn overflowing_products_promote_exactly() {
    let a = Rat::from_int(i64::MAX);
    let p = &a * &a;
    let want = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
    assert_eq!(big(&p), BigRational::from_integer(want));
    assert_eq!(&(&p / &a) / &a, Rat::from_int(1));
}
