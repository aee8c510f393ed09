//! `t`-stability of explicit pairs on the projective line.
//!
//! Tier 1 looks for a local obstruction to any invariant subbundle: an odd-order
//! zero or pole of the discriminant in rank 2, or an Eisenstein-Dumas Newton
//! polygon of the centred characteristic polynomial in higher rank. Tier 2
//! enumerates the invariant subbundles when they are determined by rational
//! eigenvalues and compares slopes.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{int, BundlePair};
use crate::error::{Error, Result};
use crate::exact::{gaussian_roots, gq_sqrt, MeroMatrix, Point, Poly, GQ, RF};
use crate::spectral::{discriminant, monic_char_coeffs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Stable,
    Unstable,
    Polystable,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Polystable => "polystable",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A point where the characteristic polynomial is locally irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchCertificate {
    /// `None` when the witness is a factor whose roots lie outside `Q(i)`.
    pub point: Option<Point>,
    /// Irreducible-over-`Q(i)` factor carrying the witness, as an expression.
    pub factor: String,
    /// Order of the discriminant (rank 2) or valuation of the constant term (rank >= 3).
    pub order: i64,
    pub criterion: String,
}

/// An invariant subbundle `V` spanned by saturated polynomial vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPairCertificate {
    pub rank: usize,
    pub basis: Vec<Vec<RF>>,
    pub degree: i64,
    /// `trk(V)` at each declared singular point, in pair-type order.
    pub local_orders: Vec<(Point, i64)>,
    pub t_degree: BigRational,
    pub t_slope: BigRational,
    /// `mu(V) = mu(E)`.
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Branch(BranchCertificate),
    /// A sub-pair with `mu(V) >= mu(E)`.
    Destabilizing(SubPairCertificate),
    /// Every invariant sub-pair, each of smaller slope.
    Exhaustive(Vec<SubPairCertificate>),
    /// Equal-slope summands whose direct sum is the whole pair.
    Decomposition(Vec<SubPairCertificate>),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    pub slope: BigRational,
    pub certificate: Certificate,
    pub note: String,
}

impl StabilityVerdict {
    fn new(
        verdict: Verdict,
        slope: &BigRational,
        certificate: Certificate,
        note: impl Into<String>,
    ) -> Self {
        Self {
            verdict,
            slope: slope.clone(),
            certificate,
            note: note.into(),
        }
    }
}

/// Clear denominators and common factors; the first nonzero entry is made monic.
pub fn saturate(v: &[RF]) -> Result<Vec<RF>> {
    if v.iter().all(|f| f.is_zero()) {
        return Err(Error::Invalid("cannot saturate the zero vector".into()));
    }
    let mut l = Poly::one();
    for f in v.iter().filter(|f| !f.is_zero()) {
        let g = Poly::gcd(&l, f.den());
        l = &l * &f.den().exact_div(&g)?;
    }
    let mut polys: Vec<Poly> = Vec::with_capacity(v.len());
    for f in v {
        polys.push(if f.is_zero() {
            Poly::zero()
        } else {
            f.num() * &l.exact_div(f.den())?
        });
    }
    let g = polys
        .iter()
        .filter(|p| !p.is_zero())
        .fold(Poly::zero(), |acc, p| Poly::gcd(&acc, p));
    let lead = polys
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| p.exact_div(&g))
        .transpose()?
        .expect("nonzero")
        .lc();
    let s = lead.inv()?;
    polys
        .iter()
        .map(|p| {
            Ok(RF::from_poly(if p.is_zero() {
                Poly::zero()
            } else {
                p.exact_div(&g)?.scale(&s)
            }))
        })
        .collect()
}

/// Degree of the saturated line subbundle of `O(d_1) + ... + O(d_n)` spanned by `v`.
pub fn line_subbundle_degree(degrees: &[i64], v: &[RF]) -> Result<i64> {
    if degrees.len() != v.len() {
        return Err(Error::Shape(format!(
            "vector of length {} in rank {}",
            v.len(),
            degrees.len()
        )));
    }
    let s = saturate(v)?;
    Ok(s.iter()
        .zip(degrees)
        .filter(|(f, _)| !f.is_zero())
        .map(|(f, d)| d - f.num().degree())
        .min()
        .expect("nonzero vector"))
}

pub fn stability(pair: &BundlePair) -> Result<StabilityVerdict> {
    let (degrees, rho) = pair.explicit_parts()?;
    let n = pair.rank;
    let mu = super::t_slope(pair);
    if n == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    if n == 1 {
        return Ok(StabilityVerdict::new(
            Verdict::Stable,
            &mu,
            Certificate::None,
            "rank one",
        ));
    }
    if let Some(c) = tier1(rho)? {
        return Ok(StabilityVerdict::new(
            Verdict::Stable,
            &mu,
            Certificate::Branch(c),
            "no invariant subbundle",
        ));
    }
    if let Some(lambda) = scalar_value(rho) {
        return Ok(scalar_verdict(pair, degrees, &lambda, &mu));
    }
    match n {
        2 => rank_two(pair, degrees, rho, &mu),
        3 => match diagonal_distinct(rho) {
            Some(eig) => Ok(diagonal_verdict(pair, degrees, &eig, &mu)),
            None => Ok(StabilityVerdict::new(
                Verdict::Inconclusive,
                &mu,
                Certificate::None,
                "rank 3 beyond the diagonal and scalar cases",
            )),
        },
        _ => Ok(StabilityVerdict::new(
            Verdict::Inconclusive,
            &mu,
            Certificate::None,
            "rank >= 4 without a branch certificate",
        )),
    }
}

fn tier1(rho: &MeroMatrix) -> Result<Option<BranchCertificate>> {
    if rho.rows() == 2 {
        return Ok(odd_point(&discriminant(rho)?));
    }
    newton_certificate(rho)
}

fn odd_point(f: &RF) -> Option<BranchCertificate> {
    if f.is_zero() {
        return None;
    }
    for (poly, sign) in [(f.num(), 1), (f.den(), -1)] {
        for (k, fac) in poly.square_free_decomposition().iter().enumerate() {
            let mult = k as i64 + 1;
            if mult % 2 == 1 && fac.degree() > 0 {
                let roots = gaussian_roots(fac);
                return Some(BranchCertificate {
                    point: roots.roots.first().map(|(r, _)| Point::Finite(r.clone())),
                    factor: fac.to_expr(),
                    order: sign * mult,
                    criterion: "odd-order point of the discriminant".into(),
                });
            }
        }
    }
    let v = f.den().degree() - f.num().degree();
    (v % 2 != 0).then(|| BranchCertificate {
        point: Some(Point::Infinity),
        factor: "1/z".into(),
        order: v,
        criterion: "odd-order point of the discriminant".into(),
    })
}

fn newton_certificate(rho: &MeroMatrix) -> Result<Option<BranchCertificate>> {
    let n = rho.rows();
    let shift = rho.trace() * &RF::constant(GQ::from_frac(1, n as i64));
    let centred = rho.sub(&MeroMatrix::identity(n).scale(&shift))?;
    let a = monic_char_coeffs(&centred)?;
    if a[0].is_zero() {
        return Ok(None);
    }
    let mut points: Vec<Point> = vec![Point::Infinity];
    for f in a.iter().take(n).filter(|f| !f.is_zero()) {
        for p in [f.num(), f.den()] {
            points.extend(
                gaussian_roots(p)
                    .roots
                    .into_iter()
                    .map(|(r, _)| Point::Finite(r)),
            );
        }
    }
    points.sort();
    points.dedup();
    let ni = n as i64;
    for p in points {
        let v0 = a[0].valuation_at(&p)?;
        if num_integer::gcd(v0, ni) != 1 {
            continue;
        }
        let above = (1..n).all(|k| {
            a[k].is_zero() || ni * a[k].valuation_at(&p).expect("nonzero") >= v0 * (ni - k as i64)
        });
        if above {
            let factor = match &p {
                Point::Infinity => "1/z".to_string(),
                Point::Finite(r) => Poly::linear(r).to_expr(),
            };
            return Ok(Some(BranchCertificate {
                point: Some(p),
                factor,
                order: v0,
                criterion: format!("single Newton segment of slope {v0}/{n}"),
            }));
        }
    }
    Ok(None)
}

fn scalar_value(rho: &MeroMatrix) -> Option<RF> {
    let n = rho.rows();
    let l = rho.get(0, 0).clone();
    let ok = (0..n).all(|i| {
        (0..n).all(|j| {
            if i == j {
                rho.get(i, j) == &l
            } else {
                rho.get(i, j).is_zero()
            }
        })
    });
    ok.then_some(l)
}

fn diagonal_distinct(rho: &MeroMatrix) -> Option<Vec<RF>> {
    let n = rho.rows();
    let off = (0..n).all(|i| (0..n).all(|j| i == j || rho.get(i, j).is_zero()));
    let d: Vec<RF> = (0..n).map(|i| rho.get(i, i).clone()).collect();
    let distinct = (0..n).all(|i| (i + 1..n).all(|j| d[i] != d[j]));
    (off && distinct).then_some(d)
}

fn unit(n: usize, j: usize) -> Vec<RF> {
    (0..n)
        .map(|i| if i == j { RF::one() } else { RF::zero() })
        .collect()
}

/// Sub-pair with the given saturated basis, bundle degree and eigenvalues on it.
fn sub_pair(
    pair: &BundlePair,
    basis: Vec<Vec<RF>>,
    degree: i64,
    eig: &[&RF],
    mu: &BigRational,
) -> SubPairCertificate {
    let pt = &pair.pair_type;
    let mut local_orders = Vec::new();
    let mut weighted = BigRational::zero();
    for s in &pt.singularities {
        let k: i64 = eig
            .iter()
            .map(|l| {
                l.valuation_at(&s.z)
                    .expect("eigenvalue of an invertible matrix")
            })
            .sum();
        weighted += int(k) * &s.t;
        local_orders.push((s.z.clone(), k));
    }
    let t_degree = int(degree) - weighted / &pt.period;
    let rank = basis.len();
    let t_slope = &t_degree / int(rank as i64);
    let equality = &t_slope == mu;
    SubPairCertificate {
        rank,
        basis,
        degree,
        local_orders,
        t_degree,
        t_slope,
        equality,
    }
}

fn scalar_verdict(
    pair: &BundlePair,
    degrees: &[i64],
    lambda: &RF,
    mu: &BigRational,
) -> StabilityVerdict {
    let n = degrees.len();
    if degrees.iter().all(|d| *d == degrees[0]) {
        let parts = (0..n)
            .map(|j| sub_pair(pair, vec![unit(n, j)], degrees[j], &[lambda], mu))
            .collect();
        return StabilityVerdict::new(
            Verdict::Polystable,
            mu,
            Certificate::Decomposition(parts),
            "scalar rho on equal summands",
        );
    }
    let j = (0..n)
        .max_by(|a, b| degrees[*a].cmp(&degrees[*b]).then(b.cmp(a)))
        .expect("rank >= 1");
    let c = sub_pair(pair, vec![unit(n, j)], degrees[j], &[lambda], mu);
    StabilityVerdict::new(
        Verdict::Unstable,
        mu,
        Certificate::Destabilizing(c),
        "scalar rho, summand of largest degree",
    )
}

/// Compare the invariant sub-pairs (all of them) against `mu`.
fn judge(
    candidates: Vec<SubPairCertificate>,
    whole_degree: i64,
    c1: i64,
    mu: &BigRational,
) -> (Verdict, Certificate) {
    let worst = candidates
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.t_slope.cmp(&b.t_slope).then(j.cmp(i)))
        .map(|(i, _)| i);
    let Some(w) = worst else {
        return (Verdict::Stable, Certificate::Exhaustive(candidates));
    };
    let top = &candidates[w];
    if &top.t_slope < mu {
        return (Verdict::Stable, Certificate::Exhaustive(candidates));
    }
    if &top.t_slope == mu && whole_degree == c1 {
        let eq: Vec<SubPairCertificate> = candidates
            .iter()
            .filter(|c| c.rank == 1 && c.equality)
            .cloned()
            .collect();
        return (Verdict::Polystable, Certificate::Decomposition(eq));
    }
    (Verdict::Unstable, Certificate::Destabilizing(top.clone()))
}

fn rank_two(
    pair: &BundlePair,
    degrees: &[i64],
    rho: &MeroMatrix,
    mu: &BigRational,
) -> Result<StabilityVerdict> {
    let tr = rho.trace();
    let disc = discriminant(rho)?;
    let half = RF::constant(GQ::from_frac(1, 2));
    if disc.is_zero() {
        // Repeated eigenvalue, rho not scalar: the kernel is the only invariant line.
        let lambda = &tr * &half;
        let line = kernel_line(rho, &lambda)?;
        let deg = line_subbundle_degree(degrees, &line)?;
        let c = sub_pair(pair, vec![line], deg, &[&lambda], mu);
        let v = if &c.t_slope > mu {
            Verdict::Unstable
        } else if &c.t_slope < mu {
            Verdict::Stable
        } else {
            return Ok(StabilityVerdict::new(
                Verdict::Inconclusive,
                mu,
                Certificate::Destabilizing(c),
                "non-semisimple rho with an equal-slope invariant line",
            ));
        };
        let cert = if v == Verdict::Stable {
            Certificate::Exhaustive(vec![c])
        } else {
            Certificate::Destabilizing(c)
        };
        return Ok(StabilityVerdict::new(v, mu, cert, "unique invariant line"));
    }
    let Some(root) = rf_sqrt(&disc) else {
        return Ok(StabilityVerdict::new(
            Verdict::Inconclusive,
            mu,
            Certificate::None,
            "discriminant is a square over C(z) but not over Q(i)(z)",
        ));
    };
    let mut cands = Vec::new();
    let mut total = 0;
    for sign in [1, -1] {
        let lambda = &(&tr + &(&root * &RF::from_int(sign))) * &half;
        let line = kernel_line(rho, &lambda)?;
        let deg = line_subbundle_degree(degrees, &line)?;
        total += deg;
        cands.push((sub_pair(pair, vec![line], deg, &[&lambda], mu), lambda));
    }
    let c1: i64 = degrees.iter().sum();
    let (v, cert) = judge(cands.into_iter().map(|(c, _)| c).collect(), total, c1, mu);
    Ok(StabilityVerdict::new(v, mu, cert, "two eigenlines"))
}

fn diagonal_verdict(
    pair: &BundlePair,
    degrees: &[i64],
    eig: &[RF],
    mu: &BigRational,
) -> StabilityVerdict {
    let n = degrees.len();
    let mut cands = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let idx: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let basis = idx.iter().map(|&j| unit(n, j)).collect();
        let deg = idx.iter().map(|&j| degrees[j]).sum();
        let ls: Vec<&RF> = idx.iter().map(|&j| &eig[j]).collect();
        cands.push(sub_pair(pair, basis, deg, &ls, mu));
    }
    let c1: i64 = degrees.iter().sum();
    let (v, cert) = judge(cands, c1, c1, mu);
    StabilityVerdict::new(v, mu, cert, "coordinate subbundles of a diagonal rho")
}

/// Invariant lines of a rank-2 `rho` over `Q(i)(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantLines {
    /// `rho` is scalar.
    All,
    Lines(Vec<Vec<RF>>),
    /// Eigenvalues exist over `C(z)` but not over `Q(i)(z)`.
    Undetermined,
}

pub fn invariant_lines(rho: &MeroMatrix) -> Result<InvariantLines> {
    if rho.rows() != 2 || rho.cols() != 2 {
        return Err(Error::Shape(
            "invariant lines are enumerated in rank 2".into(),
        ));
    }
    if scalar_value(rho).is_some() {
        return Ok(InvariantLines::All);
    }
    let tr = rho.trace();
    let disc = discriminant(rho)?;
    let half = RF::constant(GQ::from_frac(1, 2));
    if disc.is_zero() {
        return Ok(InvariantLines::Lines(vec![kernel_line(
            rho,
            &(&tr * &half),
        )?]));
    }
    let odd = |p: &Poly| {
        p.square_free_decomposition()
            .iter()
            .enumerate()
            .any(|(k, f)| k % 2 == 0 && f.degree() > 0)
    };
    if odd(disc.num()) || odd(disc.den()) {
        // Not a square over C(z): no eigenvalue in C(z).
        return Ok(InvariantLines::Lines(vec![]));
    }
    let Some(root) = rf_sqrt(&disc) else {
        return Ok(InvariantLines::Undetermined);
    };
    let lines = [1, -1]
        .iter()
        .map(|s| kernel_line(rho, &(&(&tr + &(&root * &RF::from_int(*s))) * &half)))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantLines::Lines(lines))
}

/// Saturated kernel of `rho - lambda` in rank 2.
fn kernel_line(rho: &MeroMatrix, lambda: &RF) -> Result<Vec<RF>> {
    let m = rho.sub(&MeroMatrix::identity(2).scale(lambda))?;
    let row = (0..2)
        .map(|i| m.row(i))
        .find(|r| r.iter().any(|f| !f.is_zero()));
    let v = match row {
        Some(r) => vec![r[1].clone(), -&r[0]],
        None => unit(2, 0),
    };
    let v = saturate(&v)?;
    if m.mul_vec(&v)?.iter().any(|f| !f.is_zero()) {
        return Err(Error::Invalid("eigenvalue has no kernel".into()));
    }
    Ok(v)
}

/// Square root in `Q(i)(z)`, if one exists.
fn rf_sqrt(f: &RF) -> Option<RF> {
    let half = |p: &Poly| -> Option<Poly> {
        let mut out = Poly::constant(gq_sqrt(&p.lc())?);
        for (k, fac) in p.square_free_decomposition().iter().enumerate() {
            if fac.degree() <= 0 {
                continue;
            }
            if (k + 1) % 2 == 1 {
                return None;
            }
            out = &out * &fac.pow((k as u32 + 1) / 2);
        }
        Some(out)
    };
    let r = RF::new(half(f.num())?, half(f.den())?).ok()?;
    (&r * &r == *f).then_some(r)
}
