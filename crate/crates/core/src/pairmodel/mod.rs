//! Bundle pairs `(E, rho)`: a holomorphic bundle on a Riemann surface with a
//! meromorphic automorphism, together with the singular type and the times
//! `t_j` at which the singularities sit on the circle of length `T`.
//!
//! On the projective line the bundle is `O(d_1) + ... + O(d_n)` and `rho` is an
//! explicit matrix of rational functions. In the affine frame entry `(i, j)` is
//! the coefficient of `e_i` in `rho(e_j)`; in the frame at infinity it picks up
//! the factor `z^(d_j - d_i)`.

mod constructions;
mod degree;
mod stability;

pub use constructions::{build_cyclic_pair, complete_interval_pair, hecke_transform};
pub use degree::{
    average_degree, check_admissible, pass_through, shift_origin, t_degree, t_slope, tu_degree,
    AdmissibilityReport, DegreeData,
};
pub use stability::{
    invariant_lines, line_subbundle_degree, saturate, stability, BranchCertificate, Certificate,
    InvariantLines, StabilityVerdict, SubPairCertificate, Verdict,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{gaussian_roots, MeroMatrix, Point, RF};
use crate::iwahori::{local_type_of_matrix, WeightVector};

/// A singular point `(t, z)` with its weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SingularityDatum {
    pub z: Point,
    pub t: BigRational,
    pub weight: WeightVector,
}

/// The singular type together with the circle length `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairType {
    pub singularities: Vec<SingularityDatum>,
    pub period: BigRational,
}

impl PairType {
    /// Validates the invariants and sorts by `(t, z)`.
    pub fn new(mut singularities: Vec<SingularityDatum>, period: BigRational) -> Result<Self> {
        if !period.is_positive() {
            return Err(Error::Invalid("circle length must be positive".into()));
        }
        for s in &singularities {
            if !s.t.is_positive() || s.t > period {
                return Err(Error::Invalid(format!("time {} outside (0, T]", s.t)));
            }
        }
        let n = singularities.first().map(|s| s.weight.rank());
        if singularities.iter().any(|s| Some(s.weight.rank()) != n) {
            return Err(Error::Invalid("weight vectors of different ranks".into()));
        }
        singularities.sort_by(|a, b| a.t.cmp(&b.t).then_with(|| a.z.cmp(&b.z)));
        let mut zs: Vec<&Point> = singularities.iter().map(|s| &s.z).collect();
        zs.sort();
        if zs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(
                "singular points must have distinct z".into(),
            ));
        }
        let tot: i64 = singularities.iter().map(|s| s.weight.trk()).sum();
        if tot != 0 {
            return Err(Error::Invalid(format!("sum of trk is {tot}, not 0")));
        }
        Ok(Self {
            singularities,
            period,
        })
    }

    /// Builds a type without enforcing `sum trk = 0` (for admissibility reports).
    pub fn unchecked(mut singularities: Vec<SingularityDatum>, period: BigRational) -> Self {
        singularities.sort_by(|a, b| a.t.cmp(&b.t).then_with(|| a.z.cmp(&b.z)));
        Self {
            singularities,
            period,
        }
    }

    pub fn empty(period: BigRational) -> Self {
        Self {
            singularities: Vec::new(),
            period,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.singularities.iter().all(|s| s.weight.is_zero())
    }

    pub fn sum_trk(&self) -> i64 {
        self.singularities.iter().map(|s| s.weight.trk()).sum()
    }

    pub fn datum_at(&self, z: &Point) -> Option<&SingularityDatum> {
        self.singularities.iter().find(|s| &s.z == z)
    }

    /// `sum_j trk_j t_j / T`.
    pub fn weighted_time(&self) -> BigRational {
        let s: BigRational = self
            .singularities
            .iter()
            .map(|d| BigRational::from_integer(BigInt::from(d.weight.trk())) * &d.t)
            .sum();
        s / &self.period
    }
}

/// How the bundle is modelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// `O(d_1) + ... + O(d_n)` on the projective line with an explicit `rho`.
    ExplicitP1 { degrees: Vec<i64>, rho: MeroMatrix },
    /// Degree bookkeeping only, on a surface of genus `g`.
    AbstractGenus { genus: u32, c1: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundlePair {
    pub rank: usize,
    pub backend: Backend,
    pub pair_type: PairType,
}

impl BundlePair {
    /// Explicit pair; checks shapes, `det rho != 0`, and that every singular point of
    /// `rho` (including infinity) is declared with the right weights.
    pub fn explicit(degrees: Vec<i64>, rho: MeroMatrix, pair_type: PairType) -> Result<Self> {
        let n = degrees.len();
        if rho.rows() != n || rho.cols() != n {
            return Err(Error::NotABundlePair(format!(
                "rho is {}x{} but rank is {n}",
                rho.rows(),
                rho.cols()
            )));
        }
        if pair_type.singularities.iter().any(|s| s.weight.rank() != n) {
            return Err(Error::NotABundlePair(
                "weight vector rank differs from bundle rank".into(),
            ));
        }
        let pair = Self {
            rank: n,
            backend: Backend::ExplicitP1 { degrees, rho },
            pair_type,
        };
        pair.singularity_type()?;
        Ok(pair)
    }

    /// Explicit pair whose type is read off from `rho`; `time` assigns a time to the
    /// `i`-th singular point in the order of [`singular_points`].
    pub fn explicit_inferred(
        degrees: Vec<i64>,
        rho: MeroMatrix,
        period: BigRational,
        time: impl Fn(usize, &Point) -> BigRational,
    ) -> Result<Self> {
        let types = computed_types(&degrees, &rho)?;
        let sing = types
            .into_iter()
            .enumerate()
            .map(|(i, (z, weight))| SingularityDatum {
                t: time(i, &z),
                z,
                weight,
            })
            .collect();
        let pt = PairType::new(sing, period)?;
        Self::explicit(degrees, rho, pt)
    }

    pub fn abstract_genus(genus: u32, c1: i64, rank: usize, pair_type: PairType) -> Result<Self> {
        if pair_type
            .singularities
            .iter()
            .any(|s| s.weight.rank() != rank)
        {
            return Err(Error::NotABundlePair(
                "weight vector rank differs from bundle rank".into(),
            ));
        }
        Ok(Self {
            rank,
            backend: Backend::AbstractGenus { genus, c1 },
            pair_type,
        })
    }

    pub fn c1(&self) -> i64 {
        match &self.backend {
            Backend::ExplicitP1 { degrees, .. } => degrees.iter().sum(),
            Backend::AbstractGenus { c1, .. } => *c1,
        }
    }

    pub fn explicit_parts(&self) -> Result<(&[i64], &MeroMatrix)> {
        match &self.backend {
            Backend::ExplicitP1 { degrees, rho } => Ok((degrees, rho)),
            Backend::AbstractGenus { .. } => Err(Error::ExplicitBackendRequired),
        }
    }

    /// Recompute the type from `rho` and compare with the declared one.
    pub fn singularity_type(&self) -> Result<PairType> {
        let (degrees, rho) = self.explicit_parts()?;
        let computed = computed_types(degrees, rho)?;
        let declared: Vec<(Point, WeightVector)> = self
            .pair_type
            .singularities
            .iter()
            .filter(|s| !s.weight.is_zero())
            .map(|s| (s.z.clone(), s.weight.clone()))
            .collect();
        let mut declared_sorted = declared.clone();
        declared_sorted.sort_by(|a, b| a.0.cmp(&b.0));
        if computed != declared_sorted {
            let show = |v: &[(Point, WeightVector)]| {
                v.iter()
                    .map(|(p, w)| format!("{w} at {p}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            return Err(Error::TypeMismatch(format!(
                "rho has {{{}}} but the declared type is {{{}}}",
                show(&computed),
                show(&declared_sorted)
            )));
        }
        Ok(self.pair_type.clone())
    }
}

/// Rational function matrix in the frame at infinity: entry `(i, j)` times `z^(d_j - d_i)`.
pub fn frame_at_infinity(degrees: &[i64], rho: &MeroMatrix) -> MeroMatrix {
    MeroMatrix::from_fn(rho.rows(), rho.cols(), |i, j| {
        let e = degrees[j] - degrees[i];
        rho.get(i, j) * &RF::linear_power(&crate::exact::GQ::zero(), e)
    })
}

/// Points where `rho` or its inverse has a pole, including infinity (in the twisted frame).
pub fn singular_points(degrees: &[i64], rho: &MeroMatrix) -> Result<Vec<Point>> {
    let det = rho.det()?;
    if det.is_zero() {
        return Err(Error::NotABundlePair("det rho vanishes identically".into()));
    }
    let inv = rho.inverse()?;
    let mut pts: Vec<Point> = Vec::new();
    for m in [rho, &inv] {
        for f in m.entries() {
            if f.is_zero() {
                continue;
            }
            let rs = gaussian_roots(f.den());
            if !rs.is_complete() {
                return Err(Error::UnsupportedSplittingField);
            }
            pts.extend(rs.roots.into_iter().map(|(r, _)| Point::Finite(r)));
        }
    }
    let inf = frame_at_infinity(degrees, rho);
    let regular_at_inf = inf
        .entries()
        .all(|f| f.is_zero() || f.valuation_at(&Point::Infinity).is_ok_and(|v| v >= 0))
        && inf.det()?.valuation_at(&Point::Infinity)? == 0;
    if !regular_at_inf {
        pts.push(Point::Infinity);
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Nonzero local types of `rho`, sorted by point.
pub fn computed_types(degrees: &[i64], rho: &MeroMatrix) -> Result<Vec<(Point, WeightVector)>> {
    let mut out = Vec::new();
    for p in singular_points(degrees, rho)? {
        let w = if p.is_infinity() {
            local_type_of_matrix(&frame_at_infinity(degrees, rho), &p)?
        } else {
            local_type_of_matrix(rho, &p)?
        };
        if !w.is_zero() {
            out.push((p, w));
        }
    }
    Ok(out)
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_rf, rat};

    fn mat(rows: &[&[&str]]) -> MeroMatrix {
        MeroMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rf(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn datum(z: Point, t: BigRational, k: &[i64]) -> SingularityDatum {
        SingularityDatum {
            z,
            t,
            weight: WeightVector::new(k.to_vec()).unwrap(),
        }
    }

    #[test]
    fn singularity_type_examples() {
        let rho = mat(&[&["z", "0"], &["0", "1/z"]]);
        let pt = PairType::new(
            vec![
                datum(Point::int(0), rat(1, 2), &[1, -1]),
                datum(Point::Infinity, rat(1, 1), &[1, -1]),
            ],
            rat(1, 1),
        )
        .unwrap();
        assert!(BundlePair::explicit(vec![0, 0], rho.clone(), pt).is_ok());
        let only0 =
            PairType::new(vec![datum(Point::int(0), rat(1, 2), &[1, -1])], rat(1, 1)).unwrap();
        assert!(matches!(
            BundlePair::explicit(vec![0, 0], rho, only0),
            Err(Error::TypeMismatch(_))
        ));

        let rho = mat(&[&["0", "1"], &["(z-1)z", "0"]]);
        let types = computed_types(&[0, 0], &rho).unwrap();
        let shown: Vec<String> = types.iter().map(|(p, w)| format!("{w}@{p}")).collect();
        assert_eq!(shown, vec!["[1, 0]@0", "[1, 0]@1", "[0, -2]@inf"]);
        let rho = mat(&[&["2", "1"], &["1", "1"]]);
        assert!(computed_types(&[0, 0], &rho).unwrap().is_empty());
    }

    #[test]
    fn pair_type_invariants() {
        let bad = PairType::new(vec![datum(Point::int(0), rat(1, 2), &[1, 0])], rat(1, 1));
        assert!(matches!(bad, Err(Error::Invalid(_))));
        let dup = PairType::new(
            vec![
                datum(Point::int(0), rat(1, 2), &[1, 0]),
                datum(Point::int(0), rat(1, 3), &[0, -1]),
            ],
            rat(1, 1),
        );
        assert!(matches!(dup, Err(Error::Invalid(_))));
        let zero_t = PairType::new(vec![datum(Point::int(0), rat(0, 1), &[1, -1])], rat(1, 1));
        assert!(matches!(zero_t, Err(Error::Invalid(_))));
    }

    #[test]
    fn singular_det_is_not_a_pair() {
        let rho = mat(&[&["z", "1"], &["z^2", "z"]]);
        let r = BundlePair::explicit(vec![0, 0], rho, PairType::empty(rat(1, 1)));
        assert!(matches!(r, Err(Error::NotABundlePair(_))));
    }
}
