//! The charge-`k` Dirac monopole on `R^3 \ {0}` and the Hopf-lift form identities.
//!
//! Coordinates are `(t, x, y)` with `z = x + iy`, `R = |(t, x, y)|`, `r = |z|`, orientation
//! `dt ^ dx ^ dy` and polar angle `theta` measured from the positive `t`-axis. The Higgs field
//! is `phi = ik / 2R` and the connection is `A = i a (x dy - y dx)` with `a` depending on
//! the chart. Purely imaginary quantities are stored as their coefficient of `i`.

pub mod hopf;
mod quad;

pub use hopf::{hopf_identity_suite, lambda_dxi_profile, HopfLiftFrame, HopfReport, TwoForm};
pub use quad::adaptive_simpson;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Regular off the positive `t`-axis: `A = (ik/2)(1 + cos theta) d psi`.
    ThetaNonzero,
    /// Regular off the negative `t`-axis: `A = (ik/2)(cos theta - 1) d psi`.
    ThetaNotPi,
}

impl Chart {
    fn sign(self) -> f64 {
        match self {
            Chart::ThetaNonzero => 1.0,
            Chart::ThetaNotPi => -1.0,
        }
    }

    /// Distance from `p` to the excluded closed half-axis.
    pub fn axis_distance(self, p: &[f64; 3]) -> f64 {
        let r = p[1].hypot(p[2]);
        if self.sign() * p[0] >= 0.0 {
            r
        } else {
            norm(p)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiracChart {
    pub k: i64,
    pub chart: Chart,
}

/// `(F_tx, F_ty, F_xy)`, coefficients of `i`.
pub type Curvature = [f64; 3];

impl DiracChart {
    pub fn new(k: i64, chart: Chart) -> Self {
        Self { k, chart }
    }

    fn half_k(&self) -> f64 {
        self.k as f64 / 2.0
    }

    pub fn phi(&self, p: &[f64; 3]) -> Result<f64> {
        let r = norm(p);
        if r == 0.0 {
            return Err(Error::NearSingularity);
        }
        Ok(self.half_k() / r)
    }

    fn check(&self, p: &[f64; 3]) -> Result<()> {
        if self.chart.axis_distance(p) == 0.0 {
            return Err(Error::Refused("point on the excluded half-axis".into()));
        }
        Ok(())
    }

    /// `a` and its partial derivatives `(a, a_t, a_x, a_y)`.
    fn profile(&self, p: &[f64; 3]) -> [f64; 4] {
        let s = self.chart.sign();
        let [t, x, y] = *p;
        let r = norm(p);
        let m = r - s * t;
        let a = s * self.half_k() / (r * m);
        let a_t = self.half_k() / (r * r * r);
        let common = -s * self.half_k() * (2.0 * r - s * t) / (r * r * r * m * m);
        [a, a_t, common * x, common * y]
    }

    /// `(A_t, A_x, A_y)`.
    pub fn connection(&self, p: &[f64; 3]) -> Result<[f64; 3]> {
        self.check(p)?;
        let a = self.profile(p)[0];
        Ok([0.0, -a * p[2], a * p[1]])
    }

    /// `dA` from the exact partial derivatives of `a`.
    pub fn curvature(&self, p: &[f64; 3]) -> Result<Curvature> {
        self.check(p)?;
        let [a, a_t, a_x, a_y] = self.profile(p);
        let [_, x, y] = *p;
        Ok([-y * a_t, x * a_t, 2.0 * a + x * a_x + y * a_y])
    }

    /// `dA` by central differences of the sampled connection.
    pub fn curvature_fd(&self, p: &[f64; 3], h: f64) -> Result<Curvature> {
        let d = |i: usize, j: usize| -> Result<f64> {
            let mut plus = *p;
            let mut minus = *p;
            plus[i] += h;
            minus[i] -= h;
            Ok((self.connection(&plus)?[j] - self.connection(&minus)?[j]) / (2.0 * h))
        };
        Ok([
            d(0, 1)? - d(1, 0)?,
            d(0, 2)? - d(2, 0)?,
            d(1, 2)? - d(2, 1)?,
        ])
    }
}

/// `*d phi` for `phi = ik / 2R`; chart independent.
pub fn star_dphi(k: i64, p: &[f64; 3]) -> Curvature {
    let r = norm(p);
    let c = k as f64 / (2.0 * r * r * r);
    [-c * p[2], c * p[1], -c * p[0]]
}

/// Spherical-coordinate sample grid on a shell, in polar angle from the positive `t`-axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Shell {
    pub radii: (f64, f64),
    pub polar: (f64, f64),
    /// Samples in `R`, `theta`, `psi`.
    pub counts: [usize; 3],
}

impl Shell {
    pub fn points(&self) -> Vec<[f64; 3]> {
        let lin = |(a, b): (f64, f64), n: usize, i: usize| {
            if n <= 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        };
        let [nr, nt, np] = self.counts;
        let mut out = Vec::with_capacity(nr * nt * np);
        for i in 0..nr {
            let r = lin(self.radii, nr, i);
            for j in 0..nt {
                let th = lin(self.polar, nt, j);
                for l in 0..np {
                    let ps = 2.0 * PI * (l as f64 + 0.5) / np as f64;
                    out.push([
                        r * th.cos(),
                        r * th.sin() * ps.cos(),
                        r * th.sin() * ps.sin(),
                    ]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BogomolnyReport {
    /// Max over the shell of `|dA - *d phi|` with `dA` from exact derivatives.
    pub closed_form: f64,
    /// Max finite-difference error at spacings `h` and `h/2`.
    pub fd_errors: (f64, f64),
    /// `log2` of the error ratio; absent when both errors are at rounding level.
    pub order: Option<f64>,
}

fn max_diff(a: &Curvature, b: &Curvature) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
}

/// Checks `F = *d phi` on a shell, in closed form and by finite differences at `h` and `h/2`.
pub fn bogomolny_residual(k: i64, chart: Chart, shell: &Shell, h: f64) -> Result<BogomolnyReport> {
    let pts = shell.points();
    if pts.iter().any(|p| chart.axis_distance(p) < 2.0 * h) {
        return Err(Error::Refused(
            "shell grid touches the excluded half-axis".into(),
        ));
    }
    let dc = DiracChart::new(k, chart);
    let errs = pts
        .par_iter()
        .map(|p| {
            let exact = star_dphi(k, p);
            Ok((
                max_diff(&dc.curvature(p)?, &exact),
                max_diff(&dc.curvature_fd(p, h)?, &exact),
                max_diff(&dc.curvature_fd(p, h / 2.0)?, &exact),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let fold = |f: fn(&(f64, f64, f64)) -> f64| errs.iter().map(f).fold(0.0, f64::max);
    let (closed_form, e1, e2) = (fold(|e| e.0), fold(|e| e.1), fold(|e| e.2));
    let order = if e2 > 1e-13 {
        Some((e1 / e2).log2())
    } else {
        None
    };
    Ok(BogomolnyReport {
        closed_form,
        fd_errors: (e1, e2),
        order,
    })
}

/// `(i / 2 pi) int F` over the sphere of radius `r`, with `psi_nodes` trapezoid nodes in azimuth
/// and adaptive Simpson in the polar angle. Each hemisphere uses the chart regular on it.
pub fn chern_number(k: i64, r: f64, psi_nodes: usize) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    if psi_nodes == 0 {
        return Err(Error::Invalid("need at least one azimuthal node".into()));
    }
    let north = DiracChart::new(k, Chart::ThetaNotPi);
    let south = DiracChart::new(k, Chart::ThetaNonzero);
    let ring = |th: f64| -> f64 {
        let dc = if th < PI / 2.0 { &north } else { &south };
        let (st, ct) = th.sin_cos();
        (0..psi_nodes)
            .map(|l| {
                let ps = 2.0 * PI * l as f64 / psi_nodes as f64;
                let (sp, cp) = ps.sin_cos();
                let p = [r * ct, r * st * cp, r * st * sp];
                let u = [-r * st, r * ct * cp, r * ct * sp];
                let v = [0.0, -r * st * sp, r * st * cp];
                let f = dc
                    .curvature(&p)
                    .expect("each hemisphere avoids its chart's axis");
                f[0] * (u[0] * v[1] - u[1] * v[0])
                    + f[1] * (u[0] * v[2] - u[2] * v[0])
                    + f[2] * (u[1] * v[2] - u[2] * v[1])
            })
            .sum::<f64>()
            * 2.0
            * PI
            / psi_nodes as f64
    };
    let tol = 1e-13 * (k.unsigned_abs().max(1) as f64);
    let integral =
        adaptive_simpson(&ring, 0.0, PI / 2.0, tol) + adaptive_simpson(&ring, PI / 2.0, PI, tol);
    // (i / 2 pi) (i f) = -f / 2 pi for F = i f.
    Ok(-integral / (2.0 * PI))
}

/// Holomorphic transport from `t = -1` to `t = 1` at fixed `z`, expressed in the holomorphic
/// gauges of the two charts; equals `z^k`.
pub fn scattering_scalar(k: i64, z: Complex64) -> Result<Complex64> {
    let rz = z.norm();
    if rz == 0.0 {
        return Err(Error::Refused(
            "scattering through the singular point".into(),
        ));
    }
    let r1 = (1.0 + rz * rz).sqrt();
    let kf = k as f64;
    // (d_t - i phi) s = 0 gives s' = -(k / 2R) s in the unitary gauge.
    let integral = adaptive_simpson(&|t: f64| 0.5 / (t * t + rz * rz).sqrt(), -1.0, 1.0, 1e-15);
    let transport = (-kf * integral).exp();
    // Holomorphic coordinate is g s with g_0 = (R - t)^{-k/2} and g_pi = (R + t)^{k/2}.
    let leave = (r1 + 1.0).powf(kf / 2.0);
    let arrive = (r1 + 1.0).powf(kf / 2.0);
    let transition = Complex64::from_polar(1.0, kf * z.arg());
    Ok(transition * (leave * transport * arrive))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue {
    /// `(R - t)^k` or `(R + t)^{-k}`.
    pub value: f64,
    /// `(g* g)^{-1}` for the chart's gauge change.
    pub from_gauge: f64,
}

/// Hermitian metric on the holomorphic frame of the chosen chart at `(t, z)`.
pub fn holomorphic_metric(k: i64, chart: Chart, t: f64, z: Complex64) -> Result<MetricValue> {
    let p = [t, z.re, z.im];
    if chart.axis_distance(&p) == 0.0 {
        return Err(Error::Refused("point on the excluded half-axis".into()));
    }
    let r = norm(&p);
    let kf = k as f64;
    let (value, g) = match chart {
        Chart::ThetaNonzero => ((r - t).powi(k as i32), (r - t).powf(-kf / 2.0)),
        Chart::ThetaNotPi => ((r + t).powi(-k as i32), (r + t).powf(kf / 2.0)),
    };
    Ok(MetricValue {
        value,
        from_gauge: 1.0 / (g * g),
    })
}

pub(crate) fn norm(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}
