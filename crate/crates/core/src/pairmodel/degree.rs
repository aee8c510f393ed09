//! The `t`-degree `c_1 - sum_j trk_j t_j / T`, its invariances, and the
//! admissibility conditions on charges and times.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{int, BundlePair, PairType};
use crate::error::{Error, Result};

/// First Chern class and `(trk_j, t_j)` charges on a circle of length `T`.
///
/// Times are not restricted to `(0, T]` here so that the formal moves used in the
/// invariance checks can be represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeData {
    pub c1: i64,
    pub charges: Vec<(i64, BigRational)>,
    pub period: BigRational,
}

impl DegreeData {
    pub fn new(c1: i64, charges: Vec<(i64, BigRational)>, period: BigRational) -> Self {
        Self {
            c1,
            charges,
            period,
        }
    }

    pub fn from_type(c1: i64, pt: &PairType) -> Self {
        Self {
            c1,
            charges: pt
                .singularities
                .iter()
                .map(|s| (s.weight.trk(), s.t.clone()))
                .collect(),
            period: pt.period.clone(),
        }
    }

    /// `c_1 - sum trk_j t_j / T`.
    pub fn degree(&self) -> BigRational {
        let s: BigRational = self.charges.iter().map(|(k, t)| int(*k) * t).sum();
        int(self.c1) - s / &self.period
    }
}

pub fn t_degree(pair: &BundlePair) -> BigRational {
    DegreeData::from_type(pair.c1(), &pair.pair_type).degree()
}

pub fn t_slope(pair: &BundlePair) -> BigRational {
    t_degree(pair) / int(pair.rank as i64)
}

/// Time average of the slice degree `c_1 + sum_{t_i < t} trk_i` over `[0, T]`.
///
/// Requires times in `[0, T]`; the staircase starts at `c_1` on the first interval.
pub fn average_degree(d: &DegreeData) -> Result<BigRational> {
    let mut ch = d.charges.clone();
    if ch.iter().any(|(_, t)| t.is_negative() || t > &d.period) {
        return Err(Error::Invalid(
            "times must lie in [0, T] for the staircase average".into(),
        ));
    }
    ch.sort_by(|a, b| a.1.cmp(&b.1));
    let mut acc = BigRational::zero();
    let mut level = int(d.c1);
    let mut prev = BigRational::zero();
    for (k, t) in &ch {
        acc += &level * (t - &prev);
        level += int(*k);
        prev = t.clone();
    }
    acc += &level * (&d.period - &prev);
    Ok(acc / &d.period)
}

/// Move the origin of the circle: every time becomes `t + s`, reduced into `(0, T]`.
/// The new slice at the origin has degree `c_1 - sum of trk over the wrapped charges`.
pub fn shift_origin(d: &DegreeData, s: &BigRational) -> DegreeData {
    let period = &d.period;
    let mut c1 = d.c1;
    let mut charges = Vec::with_capacity(d.charges.len());
    for (k, t) in &d.charges {
        let mut u = t + s;
        // Reduce into (0, T]; each full turn past T moves the charge across the origin.
        while &u > period {
            u -= period;
            c1 -= k;
        }
        while !u.is_positive() {
            u += period;
            c1 += k;
        }
        charges.push((*k, u));
    }
    DegreeData {
        c1,
        charges,
        period: period.clone(),
    }
}

/// Carry the reference slice once around through charge `j`: `c_1` gains `trk_j`
/// and `t_j` gains `T`.
pub fn pass_through(d: &DegreeData, j: usize) -> DegreeData {
    let mut out = d.clone();
    let (k, t) = &mut out.charges[j];
    out.c1 += *k;
    *t += &d.period;
    out
}

/// `c_1 - sum trk_j t(z_j) / (T l)` over the lifts of singular points in a cover by `l`
/// fundamental domains.
pub fn tu_degree(
    c1: i64,
    lifts: &[(i64, BigRational)],
    period: &BigRational,
    l: u32,
) -> Result<BigRational> {
    if l == 0 {
        return Err(Error::Invalid(
            "number of fundamental domains must be positive".into(),
        ));
    }
    let s: BigRational = lifts.iter().map(|(k, t)| int(*k) * t).sum();
    Ok(int(c1) - s / (period * BigRational::from_integer(BigInt::from(l))))
}

/// Conditions on a singular type for a `U(n)` configuration with slice degree `k_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub sum_trk: i64,
    pub sum_trk_zero: bool,
    /// `C / (2 pi / Vol)` with `C = (-2 pi / Vol) (k_0 - sum trk_j t_j / T) / n`.
    pub c_over_two_pi_per_vol: BigRational,
    /// `sum trk_j t_j = k_0 T`, i.e. `C = 0`.
    pub bogomolny_compatible: bool,
}

pub fn check_admissible(pt: &PairType, k0: i64, n: usize) -> Result<AdmissibilityReport> {
    if n == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    let sum_trk = pt.sum_trk();
    let w = pt.weighted_time();
    let c = -(int(k0) - &w) / int(n as i64);
    Ok(AdmissibilityReport {
        sum_trk,
        sum_trk_zero: sum_trk == 0,
        bogomolny_compatible: c.is_zero(),
        c_over_two_pi_per_vol: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Point};
    use crate::iwahori::WeightVector;
    use crate::pairmodel::SingularityDatum;

    fn data() -> DegreeData {
        let t = rat(1, 1);
        DegreeData::new(1, vec![(1, rat(1, 2)), (-1, rat(1, 4))], t)
    }

    #[test]
    fn degree_examples() {
        assert_eq!(DegreeData::new(3, vec![], rat(2, 1)).degree(), rat(3, 1));
        assert_eq!(data().degree(), rat(3, 4));
        assert_eq!(average_degree(&data()).unwrap(), rat(3, 4));
    }

    #[test]
    fn invariances_on_example() {
        let d = data();
        for s in [rat(1, 3), rat(1, 2), rat(3, 4), rat(9, 10)] {
            assert_eq!(shift_origin(&d, &s).degree(), d.degree());
            assert_eq!(average_degree(&shift_origin(&d, &s)).unwrap(), d.degree());
        }
        assert_eq!(pass_through(&d, 0).degree(), d.degree());
    }

    #[test]
    fn admissibility_examples() {
        let t = rat(1, 1);
        let sd = |z: i64, tt, k: i64| SingularityDatum {
            z: Point::int(z),
            t: tt,
            weight: WeightVector::new(vec![k]).unwrap(),
        };
        let pt = PairType::new(vec![sd(0, rat(3, 4), 2), sd(1, rat(1, 4), -2)], t.clone()).unwrap();
        let r = check_admissible(&pt, 1, 1).unwrap();
        assert!(r.sum_trk_zero && r.bogomolny_compatible);
        let pt = PairType::new(vec![sd(0, rat(3, 4), 1), sd(1, rat(1, 4), -1)], t.clone()).unwrap();
        let r = check_admissible(&pt, 0, 1).unwrap();
        assert_eq!(r.c_over_two_pi_per_vol, rat(1, 2));
        assert!(!r.bogomolny_compatible);
        let r = check_admissible(&PairType::empty(t), 0, 1).unwrap();
        assert!(r.c_over_two_pi_per_vol.is_zero());
    }

    #[test]
    fn covering_degree() {
        let t = rat(1, 1);
        let base = DegreeData::new(2, vec![(3, rat(1, 5))], t.clone()).degree();
        assert_eq!(tu_degree(2, &[(3, rat(1, 5))], &t, 1).unwrap(), base);
        let two = tu_degree(2, &[(3, rat(1, 5)), (3, rat(1, 5) + rat(1, 2))], &t, 2).unwrap();
        let single_a = tu_degree(2, &[(3, rat(1, 5))], &t, 1).unwrap();
        let single_b = tu_degree(2, &[(3, rat(7, 10))], &t, 1).unwrap();
        assert_eq!(two, (single_a + single_b) / rat(2, 1));
        assert_eq!(tu_degree(5, &[], &t, 3).unwrap(), rat(5, 1));
    }
}
