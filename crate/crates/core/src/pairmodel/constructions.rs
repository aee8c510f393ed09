//! Cyclic pairs, Hecke transforms at a regular fibre, and the completion of a
//! rank-2 pair over an interval to one with a branch certificate.

use num_traits::{One, Zero};

use super::{BundlePair, PairType};
use crate::error::{Error, Result};
use crate::exact::{MeroMatrix, Point, Poly, GQ, RF};

/// Cyclic pair on `L_1 + ... + L_n` with `L_j = L(D_1 + ... + D_j)`,
/// `D_j = sum_i k_{i, sigma_i(j)} z_i`, and `rho` mapping `L_j` to `L_{j+1}` (and `L_n` to `L_1`).
///
/// `perms[i]` is the permutation `sigma_i` attached to the `i`-th singularity of `pair_type`.
pub fn build_cyclic_pair(
    l_degree: i64,
    perms: &[Vec<usize>],
    pair_type: &PairType,
) -> Result<BundlePair> {
    let sing = &pair_type.singularities;
    if sing.is_empty() || sing.iter().all(|s| s.weight.trk() == 0) {
        return Err(Error::NeedNonzeroType);
    }
    let n = sing[0].weight.rank();
    if perms.len() != sing.len() {
        return Err(Error::Shape(format!(
            "{} permutations for {} singularities",
            perms.len(),
            sing.len()
        )));
    }
    for p in perms {
        let mut q = p.clone();
        q.sort_unstable();
        if q != (0..n).collect::<Vec<_>>() {
            return Err(Error::Invalid(format!(
                "{p:?} is not a permutation of 0..{n}"
            )));
        }
    }
    // deg D_j, and P_j = product of (z - z_i)^k over the finite points of D_j.
    let mut degrees = Vec::with_capacity(n);
    let mut factors = Vec::with_capacity(n);
    let mut acc = l_degree;
    for j in 0..n {
        let mut deg = 0;
        let mut f = RF::one();
        for (s, p) in sing.iter().zip(perms) {
            let k = s.weight.as_slice()[p[j]];
            deg += k;
            if let Point::Finite(a) = &s.z {
                f = &f * &RF::linear_power(a, k);
            }
        }
        acc += deg;
        degrees.push(acc);
        factors.push(f);
    }
    let rho = MeroMatrix::from_fn(n, n, |i, j| {
        if n == 1 || i == (j + 1) % n {
            factors[i].clone()
        } else {
            RF::zero()
        }
    });
    BundlePair::explicit(degrees, rho, pair_type.clone())
}

/// Elementary modification along the hyperplane `ker phi` in the fibre at `z0`, where
/// `phi` is a left eigenvector of `rho(z0)`. The summand that drops in degree is the one
/// of largest degree among those where `phi` is nonzero.
pub fn hecke_transform(pair: &BundlePair, z0: &Point, phi: &[GQ]) -> Result<BundlePair> {
    let (degrees, rho) = pair.explicit_parts()?;
    let n = pair.rank;
    let Point::Finite(a) = z0 else {
        return Err(Error::Invalid(
            "Hecke transforms are taken at finite points".into(),
        ));
    };
    if phi.len() != n {
        return Err(Error::Shape(format!(
            "functional of length {} in rank {n}",
            phi.len()
        )));
    }
    if pair
        .pair_type
        .datum_at(z0)
        .is_some_and(|s| !s.weight.is_zero())
    {
        return Err(Error::NotInvariantAtPoint);
    }
    let value = rho.eval(a).map_err(|_| Error::NotInvariantAtPoint)?;
    let p = (0..n)
        .filter(|&j| !phi[j].is_zero())
        .max_by(|&i, &j| degrees[i].cmp(&degrees[j]).then(j.cmp(&i)))
        .ok_or(Error::NotInvariantAtPoint)?;
    let psi: Vec<GQ> = (0..n)
        .map(|j| (0..n).fold(GQ::zero(), |s, i| s + &phi[i] * &value[i][j]))
        .collect();
    let lambda = &psi[p] / &phi[p];
    if (0..n).any(|j| psi[j] != &lambda * &phi[j]) {
        return Err(Error::NotInvariantAtPoint);
    }
    let m = MeroMatrix::from_fn(n, n, |i, j| {
        if j == p {
            if i == p {
                RF::from_poly(Poly::linear(a))
            } else {
                RF::zero()
            }
        } else if i == p {
            RF::constant(-(&phi[j] / &phi[p]))
        } else if i == j {
            RF::one()
        } else {
            RF::zero()
        }
    });
    let new_rho = m.inverse()?.mul(rho)?.mul(&m)?;
    let mut new_degrees = degrees.to_vec();
    new_degrees[p] -= 1;
    BundlePair::explicit(new_degrees, new_rho, pair.pair_type.clone())
}

/// `sigma` with poles only in `allowed_poles` such that `sigma * rho` has a simple
/// zero of its discriminant at `w`.
///
/// `sigma * rho = h J` with `J = [[0, -1], [1, tau]]`, `tau = 2 + (z - w)/(z - a)` for the
/// first allowed pole `a`, and `h` a scalar that vanishes at the poles of `rho^-1` and has
/// its only pole at `a`.
pub fn complete_interval_pair(
    rho: &MeroMatrix,
    allowed_poles: &[Point],
    w: &GQ,
) -> Result<MeroMatrix> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::Shape("interval completion is for rank 2".into()));
    }
    let a = allowed_poles.first().ok_or(Error::InsufficientPoleBudget)?;
    if a.finite() == Some(w) {
        return Err(Error::Invalid(
            "branch point coincides with the allowed pole".into(),
        ));
    }
    let inv = rho.inverse()?;
    let det = rho.det()?;
    if det
        .value_at(&Point::Finite(w.clone()))
        .is_none_or(|v| v.is_zero())
        || inv
            .entries()
            .any(|f| f.value_at(&Point::Finite(w.clone())).is_none())
    {
        return Err(Error::Invalid(
            "branch point must be a regular point of rho".into(),
        ));
    }
    // Pole orders of rho^-1: finite points through the common denominator, infinity separately.
    let mut den = Poly::one();
    for f in inv.entries().filter(|f| !f.is_zero()) {
        let g = Poly::gcd(&den, f.den());
        den = &den * &f.den().exact_div(&g)?;
    }
    let m_inf = inv
        .entries()
        .filter(|f| !f.is_zero())
        .map(|f| -f.valuation_at(&Point::Infinity).expect("nonzero"))
        .max()
        .unwrap_or(0)
        .max(0);
    let zw = RF::from_poly(Poly::linear(w));
    let (tau, h) = match a {
        Point::Finite(a) => {
            let za = RF::from_poly(Poly::linear(a));
            let tau = &RF::from_int(2) + &(&zw / &za);
            let h = &RF::from_poly(den.clone()) * &RF::linear_power(a, -(den.degree() + m_inf));
            (tau, h)
        }
        Point::Infinity => (&RF::from_int(2) + &zw, RF::from_poly(den.clone())),
    };
    let j = MeroMatrix::from_rows(vec![
        vec![RF::zero(), RF::from_int(-1)],
        vec![RF::one(), tau],
    ])?;
    let sigma = j.mul(&inv)?.scale(&h);
    let bad = sigma.entries().filter(|f| !f.is_zero()).any(|f| {
        let finite_ok = match a {
            Point::Finite(a) => {
                f.den().degree() == 0
                    || Poly::linear(a).pow(f.den().degree() as u32).monic() == f.den().monic()
            }
            Point::Infinity => f.den().degree() == 0,
        };
        let inf_ok = a.is_infinity() || f.valuation_at(&Point::Infinity).expect("nonzero") >= 0;
        !(finite_ok && inf_ok)
    });
    if bad {
        return Err(Error::InsufficientPoleBudget);
    }
    Ok(sigma)
}
