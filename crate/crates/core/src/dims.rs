//! Dimension and index counts for moduli of singular monopoles.
//!
//! Every formula holds only under its own hypotheses and refuses outside them.

use crate::error::{Error, Result};
use crate::exact::Divisor;
use crate::iwahori::WeightVector;
use crate::pairmodel::PairType;

/// `[k] = sum_{a<b} (k_a - k_b)` for a non-increasing `k`.
pub fn contribution(k: &[i64]) -> Result<i64> {
    if k.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::OrderingViolated);
    }
    let n = k.len() as i64;
    let pairwise: i64 = (0..k.len())
        .flat_map(|a| (a + 1..k.len()).map(move |b| (a, b)))
        .map(|(a, b)| k[a] - k[b])
        .sum();
    let gaps: i64 = k
        .windows(2)
        .enumerate()
        .map(|(a, w)| (w[0] - w[1]) * (a as i64 + 1) * (n - a as i64 - 1))
        .sum();
    assert_eq!(pairwise, gaps, "two forms of [k] disagree");
    Ok(pairwise)
}

pub fn contribution_sum(pt: &PairType) -> i64 {
    pt.singularities
        .iter()
        .map(|s| weight_contribution(&s.weight))
        .sum()
}

fn weight_contribution(w: &WeightVector) -> i64 {
    contribution(w.as_slice()).expect("weight vectors are sorted")
}

/// `(2 + sum [k_i], 4 + 2 sum [k_i])` for a nonzero type on the torus.
///
/// A zero type is refused; the error carries the flat-case real rank `4n`.
pub fn moduli_dims(pt: &PairType, rank: usize) -> Result<(i64, i64)> {
    if pt.is_trivial() {
        return Err(Error::TheoremHypothesisViolated {
            flat_real_rank: 4 * rank as i64,
        });
    }
    let s = contribution_sum(pt);
    Ok((2 + s, 4 + 2 * s))
}

/// Real index of the deformation complex, `2 sum [k_j]`.
pub fn gauge_index(pt: &PairType) -> i64 {
    2 * contribution_sum(pt)
}

/// `(h^0, h^1, h^2) = (1, g + 1 + sum [k_i], g)` for a simple pair with generic divisors.
pub fn h_dims(genus: u32, pt: &PairType, simple: bool, generic: bool) -> Result<(i64, i64, i64)> {
    if !generic {
        return Err(Error::GenericityRequired);
    }
    if !simple {
        return Err(Error::SimpleRequired);
    }
    let g = genus as i64;
    Ok((1, g + 1 + contribution_sum(pt), g))
}

/// Parameter counts for `SL(2)` pairs `tr rho = f` with polar divisor `D_+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su2Report {
    /// Functions with polar divisor exactly `D_+`: `d_+ + 1 - g`.
    pub f_dim: i64,
    /// Genus of the double cover with `2 d_+` simple branch points.
    pub genus_s: i64,
    pub prym_dim: i64,
    pub total: i64,
    pub assumptions: Vec<String>,
}

fn check_regime(genus: u32, d: i64) -> Result<()> {
    if d > 2 * genus as i64 - 2 {
        Ok(())
    } else {
        Err(Error::RiemannRochRegime)
    }
}

pub fn su2_counts(genus: u32, d_plus: &Divisor) -> Result<Su2Report> {
    if d_plus.terms().iter().any(|(_, m)| *m < 0) {
        return Err(Error::Invalid("polar divisor must be effective".into()));
    }
    let d = d_plus.degree();
    check_regime(genus, d)?;
    let g = genus as i64;
    let genus_s = spectral_genus(genus, 2 * d)?;
    Ok(Su2Report {
        f_dim: d + 1 - g,
        genus_s,
        prym_dim: genus_s - g,
        total: 2 * d,
        assumptions: vec![
            format!("d+ = {d} > 2g - 2 = {}", 2 * g - 2),
            "simple branching: f^2 - 4 has 2 d+ simple zeros".into(),
        ],
    })
}

/// `2d + g + 1`: the `SL(2)` count plus a line bundle and a scale.
pub fn u2_count(genus: u32, d: i64) -> Result<i64> {
    check_regime(genus, d)?;
    Ok(2 * d + genus as i64 + 1)
}

/// Riemann-Hurwitz for a double cover with `b` simple branch points: `2g - 1 + b/2`.
pub fn spectral_genus(genus: u32, branch_count: i64) -> Result<i64> {
    if branch_count < 0 || branch_count % 2 != 0 {
        return Err(Error::BranchParity);
    }
    Ok(2 * genus as i64 - 1 + branch_count / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub contribution_sum: i64,
    pub moduli_complex_dim: Option<i64>,
    pub moduli_real_dim: Option<i64>,
    pub flat_real_rank: Option<i64>,
    pub gauge_index: i64,
    pub h: Option<(i64, i64, i64)>,
    /// The `SU(n)` count `sum [k_i]`, stated only informally.
    pub su_n_remark_level: i64,
    pub flags: Vec<String>,
}

pub fn dimension_report(
    genus: u32,
    pt: &PairType,
    rank: usize,
    simple: bool,
    generic: bool,
) -> DimensionReport {
    let s = contribution_sum(pt);
    let mut flags = Vec::new();
    let (cx, re, flat) = match moduli_dims(pt, rank) {
        Ok((c, r)) => (Some(c), Some(r), None),
        Err(Error::TheoremHypothesisViolated { flat_real_rank }) => {
            flags.push("zero type: smooth-moduli dimension not asserted".into());
            (None, None, Some(flat_real_rank))
        }
        Err(_) => (None, None, None),
    };
    let h = match h_dims(genus, pt, simple, generic) {
        Ok(h) => {
            flags.push("assumed: pair is simple".into());
            flags.push("assumed: generic divisors, more than g points".into());
            Some(h)
        }
        Err(e) => {
            flags.push(format!("h dimensions refused: {e}"));
            None
        }
    };
    flags.push("SU(n) dimension is remark-level".into());
    DimensionReport {
        contribution_sum: s,
        moduli_complex_dim: cx,
        moduli_real_dim: re,
        flat_real_rank: flat,
        gauge_index: 2 * s,
        h,
        su_n_remark_level: s,
        flags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Point};
    use crate::pairmodel::SingularityDatum;

    fn pt(ws: &[&[i64]]) -> PairType {
        let sing = ws
            .iter()
            .enumerate()
            .map(|(i, k)| SingularityDatum {
                z: Point::int(i as i64),
                t: rat(i as i64 + 1, ws.len() as i64 + 1),
                weight: WeightVector::new(k.to_vec()).unwrap(),
            })
            .collect();
        PairType::new(sing, rat(1, 1)).unwrap()
    }

    #[test]
    fn contribution_examples() {
        assert_eq!(contribution(&[0, 0, 0]).unwrap(), 0);
        assert_eq!(contribution(&[1, -1]).unwrap(), 2);
        assert_eq!(contribution(&[2, 1, -3]).unwrap(), 10);
        assert_eq!(contribution(&[-1, 1]), Err(Error::OrderingViolated));
    }

    #[test]
    fn contribution_exhaustive_small() {
        fn rec(prefix: &mut Vec<i64>, n: usize) {
            if prefix.len() == n {
                let c = contribution(prefix).unwrap();
                assert!(c >= 0);
                assert_eq!(c == 0, prefix.iter().all(|x| *x == prefix[0]));
                return;
            }
            let hi = prefix.last().copied().unwrap_or(6);
            for k in -6..=hi {
                prefix.push(k);
                rec(prefix, n);
                prefix.pop();
            }
        }
        for n in 1..=6 {
            rec(&mut Vec::new(), n);
        }
    }

    #[test]
    fn moduli_examples() {
        assert_eq!(moduli_dims(&pt(&[&[1, -1]]), 2).unwrap(), (4, 8));
        assert_eq!(moduli_dims(&pt(&[&[1, -1], &[2, -2]]), 2).unwrap(), (8, 16));
        assert_eq!(
            moduli_dims(&PairType::empty(rat(1, 1)), 2),
            Err(Error::TheoremHypothesisViolated { flat_real_rank: 8 })
        );
        assert_eq!(gauge_index(&pt(&[&[1, -1]])), 4);
        assert_eq!(gauge_index(&PairType::empty(rat(1, 1))), 0);
        assert_eq!(gauge_index(&pt(&[&[1, 0, -1]])), 8);
        let p = pt(&[&[2, 0, -2]]);
        assert_eq!(gauge_index(&p), 2 * (moduli_dims(&p, 3).unwrap().0 - 2));
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_dims(0, &pt(&[&[1, -1]]), true, true).unwrap(), (1, 3, 0));
        assert_eq!(
            h_dims(2, &pt(&[&[2, 1, -3]]), true, true).unwrap(),
            (1, 13, 2)
        );
        let p = pt(&[&[1, -1], &[3, -3]]);
        assert_eq!(
            h_dims(1, &p, true, true).unwrap().1,
            moduli_dims(&p, 2).unwrap().0
        );
        assert_eq!(h_dims(1, &p, true, false), Err(Error::GenericityRequired));
        assert_eq!(h_dims(1, &p, false, true), Err(Error::SimpleRequired));
    }

    #[test]
    fn su2_and_u2_examples() {
        let d3 = Divisor::new([(Point::int(0), 2), (Point::Infinity, 1)]);
        let r = su2_counts(0, &d3).unwrap();
        assert_eq!((r.f_dim, r.genus_s, r.prym_dim, r.total), (4, 2, 2, 6));
        let d5 = Divisor::new([(Point::int(0), 3), (Point::int(1), 2)]);
        let r = su2_counts(2, &d5).unwrap();
        assert_eq!((r.f_dim, r.genus_s, r.prym_dim, r.total), (4, 8, 6, 10));
        assert_eq!(
            su2_counts(2, &Divisor::new([(Point::int(0), 2)])),
            Err(Error::RiemannRochRegime)
        );
        assert_eq!(u2_count(0, 3).unwrap(), 7);
        assert_eq!(u2_count(1, 1).unwrap(), 4);
        assert_eq!(
            u2_count(2, 5).unwrap() - su2_counts(2, &d5).unwrap().total,
            3
        );
        // total equals sum of [(k, -k)] = 2k over the points of D_+.
        let ks: i64 = d5
            .terms()
            .iter()
            .map(|(_, k)| contribution(&[*k, -*k]).unwrap())
            .sum();
        assert_eq!(ks, 10);
    }

    #[test]
    fn spectral_genus_examples() {
        assert_eq!(spectral_genus(0, 4).unwrap(), 1);
        assert_eq!(spectral_genus(0, 2).unwrap(), 0);
        assert_eq!(spectral_genus(1, 6).unwrap(), 4);
        assert_eq!(spectral_genus(0, 3), Err(Error::BranchParity));
    }

    #[test]
    fn report_flags() {
        let r = dimension_report(1, &PairType::empty(rat(1, 1)), 2, true, false);
        assert_eq!(r.flat_real_rank, Some(8));
        assert!(r.h.is_none());
        assert!(r.flags.iter().any(|f| f.contains("remark-level")));
        let r = dimension_report(1, &pt(&[&[1, -1]]), 2, true, true);
        assert_eq!(r.moduli_real_dim, r.moduli_complex_dim.map(|c| 2 * c));
    }
}
