//! Roots of polynomials that lie in `Q(i)`, and exact square roots.
//!
//! Candidates come from Aberth-Ehrlich iteration in double precision. A numeric
//! root `r` of a Gaussian-integer polynomial with leading coefficient `c` can only
//! be a Gaussian-rational root if `c r` is a Gaussian integer, so each candidate
//! is rounded accordingly and then verified by exact division.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::gaussian::GQ;
use super::poly::Poly;

/// Roots found in `Q(i)` with multiplicities, plus the square-free factors
/// (as `(degree, multiplicity)`) that have no root there.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootSet {
    pub roots: Vec<(GQ, u32)>,
    pub unresolved: Vec<(i64, u32)>,
}

impl RootSet {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// All roots of `p` in `Q(i)`, sorted by the lexicographic order on points.
pub fn gaussian_roots(p: &Poly) -> RootSet {
    let mut out = RootSet::default();
    for (i, f) in p.square_free_decomposition().into_iter().enumerate() {
        let mult = i as u32 + 1;
        if f.degree() <= 0 {
            continue;
        }
        let (roots, rest) = square_free_roots(&f);
        out.roots.extend(roots.into_iter().map(|r| (r, mult)));
        if rest.degree() > 0 {
            out.unresolved.push((rest.degree(), mult));
        }
    }
    out.roots.sort_by(|a, b| a.0.lex_cmp(&b.0));
    out
}

/// Roots of a square-free polynomial in `Q(i)` and the remaining cofactor.
pub fn square_free_roots(f: &Poly) -> (Vec<GQ>, Poly) {
    let mut rest = f.monic();
    let mut found = Vec::new();
    for _pass in 0..3 {
        if rest.degree() <= 0 {
            break;
        }
        if rest.degree() == 1 {
            found.push(-rest.coeff(0));
            rest = Poly::one();
            break;
        }
        if rest.degree() == 2 {
            // Exact quadratic formula when the discriminant is a square.
            let b = rest.coeff(1);
            let c = rest.coeff(0);
            let disc = &(&b * &b) - &(&GQ::from_int(4) * &c);
            if let Some(s) = gq_sqrt(&disc) {
                let half = GQ::from_frac(1, 2);
                found.push(&(&(-&b) + &s) * &half);
                found.push(&(&(-&b) - &s) * &half);
                rest = Poly::one();
            }
            break;
        }
        let zp = integer_primitive(&rest);
        let lc = zp.lc();
        let before = found.len();
        for r in aberth(&zp) {
            let cand = round_candidate(r, &lc);
            if rest.eval(&cand).is_zero() {
                rest = rest.exact_div(&Poly::linear(&cand)).expect("verified root");
                found.push(cand);
            }
        }
        if found.len() == before {
            break;
        }
    }
    (found, rest)
}

/// Scale by the common denominator so every coefficient is a Gaussian integer.
fn integer_primitive(p: &Poly) -> Poly {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(&c.denom_lcm());
    }
    p.scale(&GQ::from_real(BigRational::from_integer(l)))
}

fn round_candidate(r: Complex64, lc: &GQ) -> GQ {
    let scaled = r * lc.to_complex();
    let re = BigRational::from_integer(BigInt::from_f64(scaled.re.round()).unwrap_or_default());
    let im = BigRational::from_integer(BigInt::from_f64(scaled.im.round()).unwrap_or_default());
    &GQ::new(re, im) / lc
}

/// Simultaneous root approximation; returns `deg p` approximations.
pub fn aberth(p: &Poly) -> Vec<Complex64> {
    let n = p.degree();
    if n <= 0 {
        return Vec::new();
    }
    let n = n as usize;
    let c: Vec<Complex64> = p.coeffs().iter().map(|x| x.to_complex()).collect();
    let lc = c[n];
    let dc: Vec<Complex64> = (1..=n).map(|i| c[i] * i as f64).collect();
    let eval = |cs: &[Complex64], x: Complex64| {
        cs.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |a, &b| a * x + b)
    };
    // Cauchy bound on root moduli.
    let bound = 1.0 + c[..n].iter().map(|x| (x / lc).norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6).max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let pv = eval(&c, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / eval(&dc, z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // Newton polish against the same coefficients.
    for zk in z.iter_mut() {
        for _ in 0..4 {
            let d = eval(&dc, *zk);
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(&c, *zk) / d;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    z
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root in `Q(i)` when it exists (either root may be returned).
pub fn gq_sqrt(w: &GQ) -> Option<GQ> {
    if w.is_zero() {
        return Some(GQ::zero());
    }
    let modulus = rat_sqrt(&w.norm_sqr())?;
    let two = BigRational::from_integer(BigInt::from(2));
    let x2 = (&w.re + &modulus) / &two;
    let y2 = (&modulus - &w.re) / &two;
    let x = rat_sqrt(&x2)?;
    let y = rat_sqrt(&y2)?;
    // Pick the sign of y so that 2xy = im.
    let cand = GQ::new(x.clone(), y.clone());
    if &(&cand * &cand) == w {
        return Some(cand);
    }
    let cand = GQ::new(x, -y);
    if &(&cand * &cand) == w {
        Some(cand)
    } else {
        None
    }
}
