use proptest::prelude::*;
use spingen::binaryforms::{class_group, compose, equivalent, BinaryForm};

const DISCS: [i64; 20] = [-68, -84, -104, -231, -260, -399, -420, -555, -1155, -3299, 40, 60, 136, 145, 229, 316, 321, 520, 1364, 2021];

/// The form f(px + qy, rx + sy) for a matrix of determinant 1.
fn act(f: &BinaryForm, (p, q, r, s): (i64, i64, i64, i64)) -> BinaryForm {
    let (a, b, c) = (f.a, f.b, f.c);
    BinaryForm::new(a * p * p + b * p * r + c * r * r, 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, a * q * q + b * q * s + c * s * s).unwrap()
}

fn sl2() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    // products of T^k and S
    proptest::collection::vec((-3i64..=3, any::<bool>()), 1..4).prop_map(|steps| {
        let mut m = (1i64, 0i64, 0i64, 1i64);
        for (k, s) in steps {
            m = (m.0, m.0 * k + m.1, m.2, m.2 * k + m.3);
            if s {
                m = (m.1, -m.0, m.3, -m.2);
            }
        }
        m
    })
}

fn triple() -> impl Strategy<Value = (i64, [BinaryForm; 3])> {
    (0..DISCS.len(), any::<[u16; 3]>(), sl2(), sl2(), sl2()).prop_map(|(i, picks, m1, m2, m3)| {
        let g = class_group(DISCS[i]).unwrap();
        let reps = g.representatives();
        let pick = |k: usize| reps[picks[k] as usize % reps.len()];
        (DISCS[i], [act(&pick(0), m1), act(&pick(1), m2), act(&pick(2), m3)])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_laws((disc, [f, g, h]) in triple()) {
        let e = BinaryForm::principal(disc).unwrap();
        let fg = compose(&f, &g).unwrap();
        prop_assert!(equivalent(&fg, &compose(&g, &f).unwrap()).unwrap());
        let left = compose(&fg, &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert!(equivalent(&left, &right).unwrap());
        prop_assert!(equivalent(&compose(&e, &f).unwrap(), &f).unwrap());
        prop_assert!(equivalent(&compose(&f, &f.inverse()).unwrap(), &e).unwrap());
    }

    #[test]
    fn reduction_is_an_invariant_of_the_class((disc, [f, _, _]) in triple(), m in sl2()) {
        prop_assert_eq!(f.disc(), disc);
        prop_assert!(equivalent(&f, &act(&f, m)).unwrap());
        let g = class_group(disc).unwrap();
        prop_assert_eq!(g.class_of(&f).unwrap(), g.class_of(&act(&f, m)).unwrap());
    }
}

#[test]
fn class_counts_match_group_order() {
    for d in DISCS {
        let g = class_group(d).unwrap();
        assert_eq!(g.h(), g.structure().iter().product::<u64>());
        assert_eq!(g.rank4(), g.rank4_via_squares());
        for (i, f) in g.representatives().iter().enumerate() {
            assert_eq!(g.class_of(f).unwrap(), i);
        }
    }
}
