use proptest::prelude::*;

use powmon::power::admissible_shifts;
use powmon::Cone;
use powmon::{
    normalize_shift_bruteforce, normalize_shift_inductive, transport, transport_with_shift,
    FinSubset, GroupElement, MonoidSpec, QuadraticIrrational,
};

fn raw_set(size: usize, bound: i64) -> impl Strategy<Value = FinSubset> {
    prop::collection::vec((-bound..=bound, -bound..=bound), 0..size).prop_map(|pts| {
        FinSubset::new(
            pts.into_iter()
                .map(|(x, y)| GroupElement::new(x, y))
                .chain([GroupElement::zero()]),
        )
        .unwrap()
    })
}

fn member_set(m: MonoidSpec, size: usize, bound: i64) -> impl Strategy<Value = FinSubset> {
    raw_set(size, bound).prop_map(move |x| {
        FinSubset::new(x.elements().iter().filter(|g| m.contains(g)).cloned()).unwrap()
    })
}

fn lex() -> MonoidSpec {
    MonoidSpec::Lex
}

fn slope() -> MonoidSpec {
    MonoidSpec::Slope(QuadraticIrrational::sqrt2())
}

proptest! {
    #[test]
    fn product_commutative_associative(x in raw_set(6, 20), y in raw_set(6, 20), z in raw_set(6, 20)) {
        prop_assert_eq!(x.product(&y), y.product(&x));
        prop_assert_eq!(x.product(&y).product(&z), x.product(&y.product(&z)));
        prop_assert_eq!(x.product(&FinSubset::identity()), x.clone());
    }

    #[test]
    fn sumset_size_bounds(x in raw_set(8, 20), y in raw_set(8, 20)) {
        let n = x.product(&y).len();
        prop_assert!(n + 1 >= x.len() + y.len());
        prop_assert!(n <= x.len() * y.len());
    }

    #[test]
    fn translation_distributes(x in raw_set(6, 20), y in raw_set(6, 20),
                               a1 in (-20i64..20, -20i64..20), a2 in (-20i64..20, -20i64..20)) {
        let a1 = GroupElement::new(a1.0, a1.1);
        let a2 = GroupElement::new(a2.0, a2.1);
        let a = &a1 + &a2;
        let lhs = powmon::translate(&a, x.product(&y).elements());
        let tx = powmon::translate(&a1, x.elements());
        let ty = powmon::translate(&a2, y.elements());
        let mut rhs: Vec<GroupElement> = tx.iter().flat_map(|u| ty.iter().map(move |v| u + v)).collect();
        rhs.sort();
        rhs.dedup();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unique_shift_and_oracle_agreement(x in raw_set(8, 50)) {
        for m in [lex(), slope()] {
            prop_assert_eq!(admissible_shifts(&m, &x).len(), 1);
            let ind = normalize_shift_inductive(&m, &x).unwrap();
            let brute = normalize_shift_bruteforce(&m, &x).unwrap();
            prop_assert!(ind.normalized.is_subset_of(&m));
            prop_assert_eq!(ind, brute);
        }
    }

    #[test]
    fn transport_is_a_homomorphism(x in member_set(lex(), 6, 30), y in member_set(lex(), 6, 30)) {
        let (src, dst) = (lex(), slope());
        let fx = transport_with_shift(&src, &dst, &x).unwrap();
        let fy = transport_with_shift(&src, &dst, &y).unwrap();
        let fxy = transport_with_shift(&src, &dst, &x.product(&y)).unwrap();
        prop_assert_eq!(&fxy.normalized, &fx.normalized.product(&fy.normalized));
        prop_assert_eq!(fxy.shift, &fx.shift + &fy.shift);
    }

    #[test]
    fn transport_round_trips(x in member_set(lex(), 8, 50), y in member_set(slope(), 8, 50)) {
        let (h1, h2) = (lex(), slope());
        let there = transport(&h1, &h2, &x).unwrap();
        prop_assert_eq!(transport(&h2, &h1, &there).unwrap(), x);
        let back = transport(&h2, &h1, &y).unwrap();
        prop_assert_eq!(transport(&h1, &h2, &back).unwrap(), y);
    }

    #[test]
    fn text_round_trip(x in raw_set(8, 1000)) {
        prop_assert_eq!(x.to_string().parse::<FinSubset>().unwrap(), x.clone());
        prop_assert_eq!(FinSubset::from_json(&x.to_json()).unwrap(), x);
    }
}

#[test]
fn identity_is_preserved() {
    let id = FinSubset::identity();
    assert_eq!(transport(&lex(), &slope(), &id).unwrap(), id);
    assert_eq!(transport(&slope(), &lex(), &id).unwrap(), id);
}
