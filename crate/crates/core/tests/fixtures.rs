use num_bigint::BigInt;
use spingen::lattice::jordan_decompose;
use spingen::padic::valuation_int;
use spingen::poly::Poly;
use spingen::tracefields::{disc_bound, load_fixtures, tame_local_shape, trace_gram};

#[test]
fn corpus_is_large_enough() {
    let f = load_fixtures().unwrap();
    assert!(f.len() >= 20);
    assert!(f.iter().all(|x| (3..=5).contains(&x.input.degree())));
}

#[test]
fn det_equals_field_discriminant() {
    for f in load_fixtures().unwrap() {
        let g = trace_gram(&f.input).unwrap();
        assert_eq!(g.determinant(), f.disc, "{}", f.name);
        assert_eq!(g.entry(0, 0), &BigInt::from(f.input.degree()), "{}", f.name);
    }
}

#[test]
fn real_roots_match() {
    for f in load_fixtures().unwrap() {
        assert_eq!(Poly::from_ints(f.input.poly()).count_real_roots(), f.real_roots, "{}", f.name);
    }
}

#[test]
fn every_ramified_prime_is_listed() {
    for f in load_fixtures().unwrap() {
        for (p, _) in spingen::arith::factor_bigint(&f.disc).unwrap() {
            assert!(f.ramification.contains_key(&p), "{}: p = {p}", f.name);
        }
    }
}

#[test]
fn tame_shapes_and_bounds() {
    let mut tame = 0;
    for f in load_fixtures().unwrap() {
        let n = f.input.degree();
        let g = trace_gram(&f.input).unwrap();
        for (&p, ram) in &f.ramification {
            let v = valuation_int(&g.determinant(), p).unwrap() as u64;
            let b = disc_bound(n, ram).unwrap();
            assert!(v <= b.bound && b.bound <= b.corollary, "{} p = {p}", f.name);
            if ram.is_tame() {
                tame += 1;
                assert!(b.exact);
                assert_eq!(v, n as u64 - ram.residue_sum(), "{} p = {p}", f.name);
                let shape = tame_local_shape(n, ram).unwrap();
                let j = jordan_decompose(&g, p).unwrap();
                assert!(shape.matches(&j), "{} p = {p}: {j}", f.name);
            }
        }
    }
    assert!(tame > 40);
}
