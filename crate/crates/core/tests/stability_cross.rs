use monopair::exact::rat;
use monopair::pairmodel::{
    invariant_lines, stability, t_slope, Certificate, InvariantLines, Verdict,
};
use monopair::testkit::{planted_diagonal_pair, random_cyclic_pair};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn branch_certificates_have_no_invariant_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut branches = 0;
    for case in 0..100 {
        let pair = random_cyclic_pair(&mut rng).unwrap();
        let v = stability(&pair).unwrap();
        let (_, rho) = pair.explicit_parts().unwrap();
        let lines = invariant_lines(rho).unwrap();
        match &v.certificate {
            Certificate::Branch(b) => {
                branches += 1;
                assert_eq!(v.verdict, Verdict::Stable, "case {case}");
                assert!(b.order.rem_euclid(2) == 1, "case {case}: order {}", b.order);
                assert_eq!(lines, InvariantLines::Lines(vec![]), "case {case}");
            }
            Certificate::Exhaustive(cs) => {
                assert_eq!(v.verdict, Verdict::Stable);
                assert!(cs.iter().all(|c| c.t_slope < v.slope), "case {case}");
            }
            Certificate::Destabilizing(c) => assert!(c.t_slope >= v.slope, "case {case}"),
            _ => {}
        }
        assert_eq!(v.slope, t_slope(&pair), "case {case}");
    }
    assert!(branches > 0);
}

#[test]
fn planted_diagonal_pairs_split_by_slope() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..50 {
        let pair = planted_diagonal_pair(&mut rng).unwrap();
        let (degrees, rho) = pair.explicit_parts().unwrap();
        let pt = &pair.pair_type;
        // Slope of each coordinate line from the valuations of its diagonal entry.
        let slopes: Vec<BigRational> = (0..2)
            .map(|i| {
                let mut w = rat(0, 1);
                for s in &pt.singularities {
                    w +=
                        BigRational::from_integer(rho.get(i, i).valuation_at(&s.z).unwrap().into())
                            * &s.t;
                }
                BigRational::from_integer(degrees[i].into()) - w / &pt.period
            })
            .collect();
        let mu = (&slopes[0] + &slopes[1]) / rat(2, 1);
        let v = stability(&pair).unwrap();
        assert_eq!(v.slope, mu, "case {case}");
        let top = slopes.iter().max().unwrap();
        if slopes[0] == slopes[1] {
            assert_eq!(v.verdict, Verdict::Polystable, "case {case}");
        } else {
            assert_eq!(v.verdict, Verdict::Unstable, "case {case}");
            let Certificate::Destabilizing(c) = &v.certificate else {
                panic!("case {case}: {:?}", v.certificate)
            };
            assert_eq!(&c.t_slope, top);
            assert!(c.t_slope > mu);
        }
    }
}
