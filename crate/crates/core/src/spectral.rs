//! Characteristic polynomials and the rank-2 spectral double cover.

use num_traits::{One, Zero};

use crate::dims::spectral_genus;
use crate::error::{Error, Result};
use crate::exact::{gaussian_roots, Divisor, MeroMatrix, Point, GQ, RF};
use crate::pairmodel::BundlePair;

/// Coefficients `a_0, ..., a_n` of `det(X - m)` (so `a_n = 1`), by Faddeev-LeVerrier.
pub fn monic_char_coeffs(m: &MeroMatrix) -> Result<Vec<RF>> {
    if !m.is_square() {
        return Err(Error::Shape(
            "characteristic polynomial of a non-square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut c = vec![RF::zero(); n + 1];
    c[n] = RF::one();
    let mut mk = MeroMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = mk.add(&MeroMatrix::identity(n).scale(&c[n + 1 - k]))?;
        mk = m.mul(&shifted)?;
        c[n - k] = -mk.trace() * &RF::constant(GQ::from_frac(1, k as i64));
    }
    Ok(c)
}

/// Coefficients of `det(rho - lambda)` from `lambda^n` down to `lambda^0`.
pub fn char_poly(pair: &BundlePair) -> Result<Vec<RF>> {
    let (_, rho) = pair.explicit_parts()?;
    char_poly_of(rho)
}

pub fn char_poly_of(rho: &MeroMatrix) -> Result<Vec<RF>> {
    let n = rho.rows();
    let sign = if n % 2 == 0 {
        RF::one()
    } else {
        RF::from_int(-1)
    };
    Ok(monic_char_coeffs(rho)?
        .into_iter()
        .rev()
        .map(|c| &c * &sign)
        .collect())
}

/// Zeros of a function on the projective line, with multiplicities.
///
/// Factors whose roots are not in `Q(i)` are kept as `(degree, multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchLocus {
    pub divisor: Divisor,
    pub unresolved: Vec<(i64, u32)>,
}

impl BranchLocus {
    fn zeros_of(f: &RF) -> Self {
        let rs = gaussian_roots(f.num());
        let mut terms: Vec<(Point, i64)> = rs
            .roots
            .into_iter()
            .map(|(r, m)| (Point::Finite(r), m as i64))
            .collect();
        let v = f.den().degree() - f.num().degree();
        if v > 0 {
            terms.push((Point::Infinity, v));
        }
        Self {
            divisor: Divisor::new(terms),
            unresolved: rs.unresolved,
        }
    }

    /// Number of branch points counted with multiplicity.
    pub fn degree(&self) -> i64 {
        self.divisor.degree()
            + self
                .unresolved
                .iter()
                .map(|(d, m)| d * *m as i64)
                .sum::<i64>()
    }

    /// Number of distinct points, including those not listed individually.
    pub fn support_size(&self) -> i64 {
        self.divisor.terms().len() as i64 + self.unresolved.iter().map(|(d, _)| d).sum::<i64>()
    }

    pub fn is_smooth(&self) -> bool {
        self.divisor.terms().iter().all(|(_, m)| *m == 1)
            && self.unresolved.iter().all(|(_, m)| *m == 1)
    }

    pub fn has_odd_point(&self) -> bool {
        self.divisor.terms().iter().any(|(_, m)| m % 2 != 0)
            || self.unresolved.iter().any(|(_, m)| m % 2 != 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    pub rank: usize,
    /// `det(rho - lambda)` from `lambda^n` down to `lambda^0`.
    pub char_coeffs: Vec<RF>,
    pub trace: RF,
    pub det: RF,
    pub branch: Option<BranchLocus>,
    pub smooth: bool,
    /// `None` where the genus of the cover is undefined (singular or non-double cover).
    pub genus_s: Option<i64>,
}

/// `tr^2 - 4 det` of a rank-2 matrix.
pub fn discriminant(rho: &MeroMatrix) -> Result<RF> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::Shape("discriminant is taken in rank 2".into()));
    }
    let tr = rho.trace();
    Ok(&(&tr * &tr) - &(&rho.det()? * &RF::from_int(4)))
}

/// Zeros of `tr(rho)^2 - 4 det(rho)` on the projective line.
pub fn branch_divisor(pair: &BundlePair) -> Result<BranchLocus> {
    let (_, rho) = pair.explicit_parts()?;
    branch_divisor_of(rho)
}

pub fn branch_divisor_of(rho: &MeroMatrix) -> Result<BranchLocus> {
    let d = discriminant(rho)?;
    if d.is_zero() {
        return Err(Error::NonReducedSpectralCurve);
    }
    Ok(BranchLocus::zeros_of(&d))
}

/// Polar divisor of a rational function.
pub fn polar_divisor(f: &RF) -> Result<Divisor> {
    let rs = gaussian_roots(f.den());
    if !rs.is_complete() {
        return Err(Error::UnsupportedSplittingField);
    }
    let mut terms: Vec<(Point, i64)> = rs
        .roots
        .into_iter()
        .map(|(r, m)| (Point::Finite(r), m as i64))
        .collect();
    let v = f.num().degree() - f.den().degree();
    if !f.is_zero() && v > 0 {
        terms.push((Point::Infinity, v));
    }
    Ok(Divisor::new(terms))
}

/// Spectral data of `lambda^2 - f lambda + 1 = 0` on the projective line.
pub fn sl2_spectral(f: &RF, d_plus: &Divisor) -> Result<SpectralData> {
    if &polar_divisor(f)? != d_plus {
        return Err(Error::PolarDivisorMismatch);
    }
    let disc = &(f * f) - &RF::from_int(4);
    if disc.is_zero() {
        return Err(Error::NonReducedSpectralCurve);
    }
    let branch = BranchLocus::zeros_of(&disc);
    let smooth = branch.is_smooth();
    let genus_s = if smooth {
        Some(spectral_genus(0, branch.degree())?)
    } else {
        None
    };
    Ok(SpectralData {
        rank: 2,
        char_coeffs: vec![RF::one(), -f, RF::one()],
        trace: f.clone(),
        det: RF::one(),
        branch: Some(branch),
        smooth,
        genus_s,
    })
}

/// Spectral data of an explicit pair; branch data only in rank 2.
pub fn spectral_data(pair: &BundlePair) -> Result<SpectralData> {
    let (_, rho) = pair.explicit_parts()?;
    let char_coeffs = char_poly_of(rho)?;
    let (branch, smooth, genus_s) = if pair.rank == 2 {
        let b = branch_divisor_of(rho)?;
        let smooth = b.is_smooth();
        let g = if smooth {
            spectral_genus(0, b.degree()).ok()
        } else {
            None
        };
        (Some(b), smooth, g)
    } else {
        (None, false, None)
    };
    Ok(SpectralData {
        rank: pair.rank,
        char_coeffs,
        trace: rho.trace(),
        det: rho.det()?,
        branch,
        smooth,
        genus_s,
    })
}

/// `g_S - g = g - 1 + b/2` for a smooth double cover with `b` branch points.
pub fn prym_dimension(genus: u32, branch_count: i64, smooth: bool) -> Result<i64> {
    if !smooth {
        return Err(Error::PrymUndefined);
    }
    Ok(spectral_genus(genus, branch_count)? - genus as i64)
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

    fn rfs(s: &[&str]) -> Vec<RF> {
        s.iter().map(|x| parse_rf(x).unwrap()).collect()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly_of(&mat(&[&["z", "0"], &["0", "1/z"]])).unwrap(),
            rfs(&["1", "-(z + 1/z)", "1"])
        );
        assert_eq!(
            char_poly_of(&mat(&[&["0", "1"], &["z", "0"]])).unwrap(),
            rfs(&["1", "0", "-z"])
        );
        assert_eq!(
            char_poly_of(&mat(&[&["3", "0"], &["0", "3"]])).unwrap(),
            rfs(&["1", "-6", "9"])
        );
        let m = mat(&[&["1", "z", "0"], &["0", "2", "1/z"], &["z", "0", "1"]]);
        let c = char_poly_of(&m).unwrap();
        assert_eq!(c[0], RF::from_int(-1));
        assert_eq!(c[3], m.det().unwrap());
    }

    #[test]
    fn branch_examples() {
        let b = branch_divisor_of(&mat(&[&["z", "0"], &["0", "1/z"]])).unwrap();
        assert_eq!(
            b.divisor,
            Divisor::new([(Point::int(-1), 2), (Point::int(1), 2)])
        );
        assert!(!b.is_smooth() && !b.has_odd_point());
        let b = branch_divisor_of(&mat(&[&["0", "1"], &["z", "0"]])).unwrap();
        assert_eq!(b.divisor, Divisor::new([(Point::int(0), 1)]));
        let r = branch_divisor_of(&mat(&[&["z", "0"], &["0", "z"]]));
        assert_eq!(r, Err(Error::NonReducedSpectralCurve));
    }

    #[test]
    fn sl2_examples() {
        let d = Divisor::new([(Point::int(0), 1), (Point::Infinity, 1)]);
        let s = sl2_spectral(&parse_rf("z + 1/z").unwrap(), &d).unwrap();
        assert!(!s.smooth);
        assert_eq!(s.genus_s, None);
        let s = sl2_spectral(&parse_rf("z + 2/z").unwrap(), &d).unwrap();
        assert!(s.smooth);
        assert_eq!(s.branch.as_ref().unwrap().degree(), 4);
        assert_eq!(s.genus_s, Some(1));
        assert_eq!(
            sl2_spectral(&RF::from_int(3), &d),
            Err(Error::PolarDivisorMismatch)
        );
    }

    #[test]
    fn unresolved_branch_points_still_decide_smoothness() {
        let d = Divisor::new([(Point::Infinity, 2)]);
        let s = sl2_spectral(&parse_rf("z^2 + 1").unwrap(), &d).unwrap();
        // f^2 - 4 = (z^2 - 1)(z^2 + 3): roots +-1 listed, +-i sqrt 3 not in Q(i).
        let b = s.branch.unwrap();
        assert_eq!(b.unresolved, vec![(2, 1)]);
        assert!(s.smooth);
        assert_eq!(b.degree(), 4);
        assert_eq!(s.genus_s, Some(1));
    }

    #[test]
    fn prym_examples() {
        assert_eq!(prym_dimension(0, 6, true).unwrap(), 2);
        assert_eq!(prym_dimension(1, 2, true).unwrap(), 1);
        assert_eq!(prym_dimension(0, 2, true).unwrap(), 0);
        assert_eq!(prym_dimension(0, 2, false), Err(Error::PrymUndefined));
    }

    #[test]
    fn pair_level_spectral_data() {
        let rho = mat(&[&["0", "1"], &["z", "0"]]);
        let p =
            BundlePair::explicit_inferred(vec![0, 0], rho, rat(1, 1), |_, _| rat(1, 2)).unwrap();
        let s = spectral_data(&p).unwrap();
        assert_eq!(s.det, parse_rf("-z").unwrap());
        assert!(s.branch.unwrap().has_odd_point());
    }
}
