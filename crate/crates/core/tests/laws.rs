//! Algebraic laws of the exact value operations.

use num::{BigInt, BigRational};
use proptest::prelude::*;

use qll_core::alethic::{Ext, Hardness, Value};

fn ext() -> impl Strategy<Value = Ext> {
    prop_oneof![
        1 => Just(Ext::Zero),
        1 => Just(Ext::Inf),
        1 => Just(Ext::one()),
        6 => (1i64..200, 1i64..200).prop_map(|(n, d)| Ext::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))),
    ]
}

fn hardness() -> impl Strategy<Value = Hardness> {
    prop_oneof![Just("1"), Just("2"), Just("3/2"), Just("inf")].prop_map(|s| Hardness::parse(s).unwrap())
}

proptest! {
    #[test]
    fn commutative_and_associative(a in ext(), b in ext(), c in ext(), p in hardness()) {
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        prop_assert_eq!(a.cotensor(&b), b.cotensor(&a));
        prop_assert_eq!(a.padd(&b, &p), b.padd(&a, &p));
        prop_assert_eq!(a.pcoadd(&b, &p), b.pcoadd(&a, &p));
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
        prop_assert_eq!(a.cotensor(&b).cotensor(&c), a.cotensor(&b.cotensor(&c)));
        prop_assert_eq!(a.padd(&b, &p).padd(&c, &p), a.padd(&b.padd(&c, &p), &p));
        prop_assert_eq!(a.pcoadd(&b, &p).pcoadd(&c, &p), a.pcoadd(&b.pcoadd(&c, &p), &p));
    }

    #[test]
    fn units(a in ext(), p in hardness()) {
        prop_assert_eq!(a.tensor(&Ext::one()), a.clone());
        prop_assert_eq!(a.cotensor(&Ext::one()), a.clone());
        prop_assert_eq!(a.padd(&Ext::Zero, &p), a.clone());
        prop_assert_eq!(a.pcoadd(&Ext::Inf, &p), a.clone());
        prop_assert_eq!(a.tensor(&Ext::Zero), Ext::Zero);
        prop_assert_eq!(a.cotensor(&Ext::Inf), Ext::Inf);
    }

    #[test]
    fn duality_swaps_operations(a in ext(), b in ext(), p in hardness()) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!(a.tensor(&b).dual(), a.dual().cotensor(&b.dual()));
        prop_assert_eq!(a.padd(&b, &p).dual(), a.dual().pcoadd(&b.dual(), &p));
        prop_assert_eq!(a.residual(&b), a.dual().cotensor(&b));
    }

    #[test]
    fn residuation(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(a.tensor(&b) <= c, a <= b.residual(&c));
    }

    #[test]
    fn soft_operations_lie_between(a in ext(), b in ext(), p in hardness()) {
        let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
        prop_assert!(a.pcoadd(&b, &p) <= *lo);
        prop_assert!(*hi <= a.padd(&b, &p));
        prop_assert_eq!(a.padd(&a, &p) == a, a.is_zero() || a.is_inf() || p.is_infinite());
    }

    #[test]
    fn values_print_and_parse_back(a in ext(), p in hardness()) {
        let v = Value::from_power(a, &p);
        prop_assert_eq!(Value::parse(&v.exact(), &p).unwrap(), v);
    }

    #[test]
    fn decimal_view_is_monotone(a in ext(), b in ext(), p in hardness()) {
        let (x, y) = (Value::from_power(a.clone(), &p), Value::from_power(b.clone(), &p));
        if a <= b {
            prop_assert!(x.to_float() <= y.to_float());
        }
    }
}
