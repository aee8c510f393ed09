use monopair::exact::{gaussian_roots, parse_rf, MeroMatrix, Point, Poly, GQ, RF};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn gq() -> impl Strategy<Value = GQ> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5).prop_map(|(a, b, c, d)| GQ::from_parts(a, b, c, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(gq(), 1..=max_len).prop_map(Poly::new)
}

fn rf() -> impl Strategy<Value = RF> {
    (poly(4), poly(3)).prop_filter_map("nonzero denominator", |(n, d)| RF::new(n, d).ok())
}

fn small_rf() -> impl Strategy<Value = RF> {
    (poly(3), poly(2)).prop_filter_map("nonzero denominator", |(n, d)| RF::new(n, d).ok())
}

fn matrix(n: usize) -> impl Strategy<Value = MeroMatrix> {
    prop::collection::vec(small_rf(), n * n)
        .prop_map(move |v| MeroMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_field_axioms(a in gq(), b in gq(), c in gq()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), GQ::one());
        }
        prop_assert_eq!((&a * &a.conj()).im, GQ::zero().im);
    }

    #[test]
    fn division_with_remainder(a in poly(7), b in poly(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn gcd_divides_both(a in poly(5), b in poly(5), c in poly(3)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = Poly::gcd(&x, &y);
        if !g.is_zero() {
            prop_assert!(x.div_rem(&g).unwrap().1.is_zero());
            prop_assert!(y.div_rem(&g).unwrap().1.is_zero());
            if !c.is_zero() {
                prop_assert!(g.div_rem(&c.monic()).unwrap().1.is_zero());
            }
        }
    }

    #[test]
    fn square_free_decomposition_reassembles(a in poly(4), b in poly(3)) {
        let p = &(&a * &b) * &b;
        prop_assume!(p.degree() > 0);
        let parts = p.square_free_decomposition();
        let mut prod = Poly::constant(p.lc());
        for (k, f) in parts.iter().enumerate() {
            prod = &prod * &f.pow(k as u32 + 1);
            prop_assert!(Poly::gcd(f, &f.derivative()).degree() <= 0);
        }
        prop_assert_eq!(prod, p);
    }

    #[test]
    fn rational_functions_form_a_field(f in rf(), g in rf(), h in rf()) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        if !g.is_zero() {
            prop_assert_eq!(&(&f / &g) * &g, f.clone());
        }
        prop_assert_eq!(parse_rf(&f.to_expr()).unwrap(), f);
    }

    #[test]
    fn valuation_is_additive(f in rf(), g in rf(), a in gq()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        for p in [Point::Finite(a.clone()), Point::Infinity] {
            let v = (&f * &g).valuation_at(&p).unwrap();
            prop_assert_eq!(v, f.valuation_at(&p).unwrap() + g.valuation_at(&p).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        if !a.det().unwrap().is_zero() {
            prop_assert!(a.mul(&a.inverse().unwrap()).unwrap().is_identity());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_roots_of_planted_products(rs in prop::collection::vec((gq(), 1u32..=3), 1..=3), extra in 0i64..=2) {
        let mut p = Poly::one();
        for (r, m) in &rs {
            p = &p * &Poly::linear(r).pow(*m);
        }
        // z^2 + 2 has no roots in Q(i).
        if extra > 0 {
            p = &p * &Poly::from_ints(&[2, 0, 1]);
        }
        let found = gaussian_roots(&p);
        for (r, _) in &rs {
            let m = p.order_at(r).unwrap();
            prop_assert!(found.roots.iter().any(|(x, k)| x == r && *k as i64 == m));
        }
        prop_assert_eq!(found.is_complete(), extra == 0);
    }
}
