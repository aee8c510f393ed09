//! `U(1)` Higgs field on the flat torus `S^1 x T^2` with Dirac point charges.
//!
//! Coordinates are `(t, x, y)` with periods `(T, L_1, L_2)`. The field is purely
//! imaginary, `phi = i u`, and `u = sum_j (k_j / 2) G(. - p_j) + c` with `G` the
//! zero-mean periodic Green's function normalized as `1/R` at the source.
//!
//! The slice flux is `Phi(t) = (i / 2 pi) int_{t} *d phi = -(1 / 2 pi) int d_t u dA`.
//! Moving past a charge raises it by `k_j`; the quantized profile is recovered by
//! adding the constant `k_0 - sum_j k_j t_j / T`, which is `-C Vol / 2 pi`.

mod green;

pub use green::{fourier_green, EwaldSum};

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::rat_to_f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Torus3Spec {
    /// Circle length `T`.
    pub period: BigRational,
    pub l1: BigRational,
    pub l2: BigRational,
    /// `(N_t, N_1, N_2)`.
    pub grid: [usize; 3],
    /// Spherical cutoff on reciprocal mode vectors.
    pub fourier_modes: usize,
}

impl Torus3Spec {
    pub fn validate(&self) -> Result<()> {
        if !self.period.is_positive() || !self.l1.is_positive() || !self.l2.is_positive() {
            return Err(Error::Invalid("torus periods must be positive".into()));
        }
        if self.grid.iter().any(|n| *n < 16) {
            return Err(Error::Invalid("grid sizes must be at least 16".into()));
        }
        Ok(())
    }

    pub fn lengths(&self) -> [f64; 3] {
        [
            rat_to_f64(&self.period),
            rat_to_f64(&self.l1),
            rat_to_f64(&self.l2),
        ]
    }

    /// Area of the surface factor.
    pub fn area(&self) -> BigRational {
        &self.l1 * &self.l2
    }

    /// Largest grid spacing.
    pub fn spacing(&self) -> f64 {
        let l = self.lengths();
        (0..3)
            .map(|i| l[i] / self.grid[i] as f64)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCharge {
    pub t: BigRational,
    pub x: BigRational,
    pub y: BigRational,
    pub k: i64,
}

impl PointCharge {
    pub fn position(&self) -> [f64; 3] {
        [
            rat_to_f64(&self.t),
            rat_to_f64(&self.x),
            rat_to_f64(&self.y),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeConfig {
    pub charges: Vec<PointCharge>,
    pub k0: i64,
}

impl ChargeConfig {
    pub fn validate(&self, spec: &Torus3Spec) -> Result<()> {
        if self.charges.iter().map(|c| c.k).sum::<i64>() != 0 {
            return Err(Error::NoPeriodicSolution);
        }
        let reduce = |c: &PointCharge| {
            let m = |v: &BigRational, l: &BigRational| {
                let q = v / l;
                (q.clone() - q.floor()) * l
            };
            (m(&c.t, &spec.period), m(&c.x, &spec.l1), m(&c.y, &spec.l2))
        };
        let mut pos: Vec<_> = self.charges.iter().map(reduce).collect();
        pos.sort();
        if pos.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("charge positions must be distinct".into()));
        }
        Ok(())
    }

    /// `sum_j k_j t_j / T`.
    pub fn weighted_time(&self, spec: &Torus3Spec) -> BigRational {
        let s: BigRational = self
            .charges
            .iter()
            .map(|c| BigRational::from_integer(c.k.into()) * &c.t)
            .sum();
        s / &spec.period
    }

    /// `k_0 + sum_{t_j < t} k_j`, the Chern number of the slice at `t`.
    pub fn staircase(&self, t: f64) -> i64 {
        self.k0
            + self
                .charges
                .iter()
                .filter(|c| rat_to_f64(&c.t) < t)
                .map(|c| c.k)
                .sum::<i64>()
    }
}

/// Harmonic `u` with the prescribed charges; `phi = i u`.
#[derive(Clone, Debug)]
pub struct ScalarField3 {
    pub spec: Torus3Spec,
    pub config: ChargeConfig,
    pub constant: f64,
    sum: EwaldSum,
}

pub fn solve_higgs(spec: &Torus3Spec, config: &ChargeConfig) -> Result<ScalarField3> {
    solve_higgs_with_constant(spec, config, 0.0)
}

pub fn solve_higgs_with_constant(
    spec: &Torus3Spec,
    config: &ChargeConfig,
    constant: f64,
) -> Result<ScalarField3> {
    spec.validate()?;
    config.validate(spec)?;
    let sources: Vec<([f64; 3], f64)> = config
        .charges
        .iter()
        .map(|c| (c.position(), c.k as f64 / 2.0))
        .collect();
    let sum = EwaldSum::new(spec.lengths(), &sources, spec.fourier_modes);
    Ok(ScalarField3 {
        spec: spec.clone(),
        config: config.clone(),
        constant,
        sum,
    })
}

/// Flux samples and their comparison with the integer staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxProfile {
    pub times: Vec<f64>,
    pub raw: Vec<f64>,
    /// `k_0 - sum_j k_j t_j / T`, added to `raw`.
    pub correction: f64,
    pub corrected: Vec<f64>,
    pub staircase: Vec<i64>,
    pub max_deviation: f64,
}

impl ScalarField3 {
    pub fn min_distance(&self) -> f64 {
        3.0 * self.spec.spacing()
    }

    /// Coefficient of `i` in `phi(x)`; refused within three grid spacings of a charge.
    pub fn value(&self, x: &[f64; 3]) -> Result<f64> {
        if self.sum.nearest_source(x) < self.min_distance() * (1.0 - 1e-12) {
            return Err(Error::NearSingularity);
        }
        Ok(self.value_unchecked(x))
    }

    fn value_unchecked(&self, x: &[f64; 3]) -> f64 {
        self.sum.value(x) + self.constant
    }

    pub fn gradient(&self, x: &[f64; 3]) -> Result<[f64; 3]> {
        if self.sum.nearest_source(x) < self.min_distance() * (1.0 - 1e-12) {
            return Err(Error::NearSingularity);
        }
        Ok(self.sum.gradient(x))
    }

    /// Samples on the grid in `(t, x, y)` row-major order; `NaN` within three spacings of a charge.
    pub fn samples(&self) -> Vec<f64> {
        let [nt, n1, n2] = self.spec.grid;
        let l = self.spec.lengths();
        (0..nt * n1 * n2)
            .into_par_iter()
            .map(|idx| {
                let (a, rest) = (idx / (n1 * n2), idx % (n1 * n2));
                let (b, c) = (rest / n2, rest % n2);
                let x = [
                    a as f64 * l[0] / nt as f64,
                    b as f64 * l[1] / n1 as f64,
                    c as f64 * l[2] / n2 as f64,
                ];
                self.value(&x).unwrap_or(f64::NAN)
            })
            .collect()
    }

    /// `(t, x, y, value)` rows for the grid samples away from the charges.
    pub fn dump_rows(&self) -> Vec<[f64; 4]> {
        let [nt, n1, n2] = self.spec.grid;
        let l = self.spec.lengths();
        let s = self.samples();
        let mut out = Vec::new();
        for (idx, v) in s.into_iter().enumerate() {
            if v.is_nan() {
                continue;
            }
            let (a, rest) = (idx / (n1 * n2), idx % (n1 * n2));
            let (b, c) = (rest / n2, rest % n2);
            out.push([
                a as f64 * l[0] / nt as f64,
                b as f64 * l[1] / n1 as f64,
                c as f64 * l[2] / n2 as f64,
                v,
            ]);
        }
        out
    }

    /// `-(1 / 2 pi) int d_t u dA` on the slice at time `t`, by the periodic trapezoid rule.
    pub fn slice_flux(&self, t: f64) -> Result<f64> {
        let period = rat_to_f64(&self.spec.period);
        for c in &self.config.charges {
            let d = (t - rat_to_f64(&c.t)).rem_euclid(period);
            if d.min(period - d) < self.min_distance() {
                return Err(Error::SingularTime);
            }
        }
        let [_, n1, n2] = self.spec.grid;
        let l = self.spec.lengths();
        let rows: Vec<f64> = (0..n1)
            .into_par_iter()
            .map(|b| {
                (0..n2)
                    .map(|c| {
                        self.sum.gradient(&[
                            t,
                            b as f64 * l[1] / n1 as f64,
                            c as f64 * l[2] / n2 as f64,
                        ])[0]
                    })
                    .sum::<f64>()
            })
            .collect();
        let da = l[1] * l[2] / (n1 * n2) as f64;
        Ok(-rows.iter().sum::<f64>() * da / (2.0 * PI))
    }

    pub fn flux_profile(&self, times: &[f64]) -> Result<FluxProfile> {
        let raw = times
            .iter()
            .map(|t| self.slice_flux(*t))
            .collect::<Result<Vec<_>>>()?;
        let correction = self.config.k0 as f64 - rat_to_f64(&self.config.weighted_time(&self.spec));
        let corrected: Vec<f64> = raw.iter().map(|r| r + correction).collect();
        let staircase: Vec<i64> = times.iter().map(|t| self.config.staircase(*t)).collect();
        let max_deviation = corrected
            .iter()
            .zip(&staircase)
            .map(|(c, s)| (c - *s as f64).abs())
            .fold(0.0, f64::max);
        Ok(FluxProfile {
            times: times.to_vec(),
            raw,
            correction,
            corrected,
            staircase,
            max_deviation,
        })
    }

    /// Three samples inside each interval between consecutive charge times.
    pub fn default_flux_times(&self) -> Vec<f64> {
        let period = rat_to_f64(&self.spec.period);
        let mut ts: Vec<f64> = self
            .config
            .charges
            .iter()
            .map(|c| rat_to_f64(&c.t).rem_euclid(period))
            .collect();
        ts.push(0.0);
        ts.push(period);
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let mut out = Vec::new();
        for w in ts.windows(2) {
            for f in [0.25, 0.5, 0.75] {
                let t = w[0] + f * (w[1] - w[0]);
                if self.slice_flux_allowed(t) {
                    out.push(t);
                }
            }
        }
        out
    }

    fn slice_flux_allowed(&self, t: f64) -> bool {
        let period = rat_to_f64(&self.spec.period);
        self.config.charges.iter().all(|c| {
            let d = (t - rat_to_f64(&c.t)).rem_euclid(period);
            d.min(period - d) >= self.min_distance()
        })
    }

    /// Measured jump `Phi(t_j+) - Phi(t_j-)` across each charge, from the nearest samples
    /// on either side, as `(k_j, jump)`. Charges without samples between them and their
    /// neighbours are left out.
    pub fn jumps(&self, profile: &FluxProfile) -> Vec<(i64, f64)> {
        let mut out = Vec::new();
        for c in &self.config.charges {
            let tj = rat_to_f64(&c.t);
            let before = profile
                .times
                .iter()
                .zip(&profile.corrected)
                .filter(|(t, _)| **t < tj)
                .last();
            let after = profile
                .times
                .iter()
                .zip(&profile.corrected)
                .find(|(t, _)| **t > tj);
            // Charges sharing a time jump together; attribute the full jump to each.
            let shared: i64 = self
                .config
                .charges
                .iter()
                .filter(|d| d.t == c.t)
                .map(|d| d.k)
                .sum();
            if let (Some((ta, a)), Some((tb, b))) = (before, after) {
                // Skip when another charge time separates the two samples.
                let clean = self.config.charges.iter().all(|d| {
                    let td = rat_to_f64(&d.t);
                    td == tj || td <= *ta || td >= *tb
                });
                if clean {
                    out.push((shared, b - a));
                }
            }
        }
        out
    }

    /// `(R, u(p_j + R n) - k_j / 2R)` along a unit direction.
    pub fn near_field(
        &self,
        j: usize,
        direction: [f64; 3],
        radii: &[f64],
    ) -> Result<Vec<(f64, f64)>> {
        let c = self
            .config
            .charges
            .get(j)
            .ok_or_else(|| Error::Invalid(format!("no charge {j}")))?;
        let p = c.position();
        let n = green::norm(&direction);
        radii
            .iter()
            .map(|r| {
                let x = [
                    p[0] + r * direction[0] / n,
                    p[1] + r * direction[1] / n,
                    p[2] + r * direction[2] / n,
                ];
                Ok((*r, self.value(&x)? - c.k as f64 / (2.0 * r)))
            })
            .collect()
    }

    /// Max over `points` of the 7-point discrete Laplacian of `u` with spacing `h`.
    /// The exact Laplacian away from the charges is `(4 pi / V) sum k_j / 2 = 0`.
    pub fn laplacian_residual(&self, points: &[[f64; 3]], h: f64) -> Result<f64> {
        let vals: Vec<f64> = points
            .par_iter()
            .map(|x| {
                let c = self.value(x)?;
                let mut s = -6.0 * c;
                for i in 0..3 {
                    for sg in [-1.0, 1.0] {
                        let mut y = *x;
                        y[i] += sg * h;
                        s += self.value(&y)?;
                    }
                }
                Ok((s / (h * h)).abs())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(vals.into_iter().fold(0.0, f64::max))
    }

    /// Grid points at least `margin` away from every charge, on a coarse lattice of `per_axis^3`.
    pub fn probe_points(&self, per_axis: usize, margin: f64) -> Vec<[f64; 3]> {
        let l = self.spec.lengths();
        let mut out = Vec::new();
        for a in 0..per_axis {
            for b in 0..per_axis {
                for c in 0..per_axis {
                    let f = |i: usize, n: usize| (i as f64 + 0.37) / n as f64;
                    let x = [
                        f(a, per_axis) * l[0],
                        f(b, per_axis) * l[1],
                        f(c, per_axis) * l[2],
                    ];
                    if self.sum.nearest_source(&x) >= margin {
                        out.push(x);
                    }
                }
            }
        }
        out
    }
}

/// `C` for `n = 1` as a multiple of `2 pi / Vol`, with its floating value.
#[derive(Clone, Debug, PartialEq)]
pub struct HeConstant {
    pub over_two_pi_per_vol: BigRational,
    pub value: f64,
}

pub fn he_constant(spec: &Torus3Spec, config: &ChargeConfig) -> HeConstant {
    let c = -(BigRational::from_integer(config.k0.into()) - config.weighted_time(spec));
    let value = rat_to_f64(&c) * 2.0 * PI / rat_to_f64(&spec.area());
    HeConstant {
        over_two_pi_per_vol: c,
        value,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantMode {
    /// Correct by the constant determined by the charge locations.
    FromLocations,
    /// Take `C = 0` regardless of the locations.
    ForcedZero,
}

/// Max distance from the corrected flux to the nearest integer.
pub fn verify_quantization(field: &ScalarField3, times: &[f64], mode: ConstantMode) -> Result<f64> {
    let profile = field.flux_profile(times)?;
    let shift = match mode {
        ConstantMode::FromLocations => profile.correction,
        // With C = 0 the slice Chern number is k_0 + Phi - Phi(0+) shifted by nothing.
        ConstantMode::ForcedZero => 0.0,
    };
    Ok(profile
        .raw
        .iter()
        .map(|r| r + shift)
        .map(|v| (v - v.round()).abs())
        .fold(0.0, f64::max))
}

/// Exact time average of the staircase `k_0 + sum_{t_j < t} k_j`; equals the `t`-degree.
pub fn staircase_average(spec: &Torus3Spec, config: &ChargeConfig) -> BigRational {
    let mut acc = BigRational::zero();
    for c in &config.charges {
        let q = &c.t / &spec.period;
        // A charge at `t = T` jumps at the end of the interval, not at its start.
        let frac = if q > BigRational::one() {
            q.clone() - q.floor()
        } else {
            q.clone()
        };
        acc += BigRational::from_integer(c.k.into()) * (BigRational::from_integer(1.into()) - frac);
    }
    BigRational::from_integer(config.k0.into()) + acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn spec(n: usize) -> Torus3Spec {
        Torus3Spec {
            period: rat(1, 1),
            l1: rat(1, 1),
            l2: rat(1, 1),
            grid: [n, n, n],
            fourier_modes: 48,
        }
    }

    fn charge(t: BigRational, x: BigRational, y: BigRational, k: i64) -> PointCharge {
        PointCharge { t, x, y, k }
    }

    fn pair_config(k: i64, k0: i64) -> ChargeConfig {
        ChargeConfig {
            charges: vec![
                charge(rat(3, 4), rat(1, 4), rat(1, 2), k),
                charge(rat(1, 4), rat(3, 4), rat(1, 2), -k),
            ],
            k0,
        }
    }

    #[test]
    fn he_constant_examples() {
        let s = spec(16);
        assert!(he_constant(&s, &pair_config(2, 1))
            .over_two_pi_per_vol
            .is_zero());
        let c = he_constant(&s, &pair_config(1, 0));
        assert_eq!(c.over_two_pi_per_vol, rat(1, 2));
        assert!((c.value - PI).abs() < 1e-15);
        let empty = ChargeConfig {
            charges: vec![],
            k0: 0,
        };
        assert_eq!(he_constant(&s, &empty).value, 0.0);
    }

    #[test]
    fn refusals() {
        let s = spec(16);
        let bad = ChargeConfig {
            charges: vec![charge(rat(1, 2), rat(0, 1), rat(0, 1), 1)],
            k0: 0,
        };
        assert_eq!(
            solve_higgs(&s, &bad).unwrap_err(),
            Error::NoPeriodicSolution
        );
        let f = solve_higgs(&s, &pair_config(1, 0)).unwrap();
        assert_eq!(f.value(&[0.75, 0.26, 0.5]), Err(Error::NearSingularity));
        assert_eq!(f.slice_flux(0.75), Err(Error::SingularTime));
    }

    #[test]
    fn antisymmetric_midpoint() {
        // Charges +1 at (1/4, 1/4, 1/2) and -1 at (3/4, 3/4, 1/2): the point reflection
        // through (1/2, 1/2, 1/2) swaps them, so u vanishes at the centre.
        let cfg = ChargeConfig {
            charges: vec![
                charge(rat(1, 4), rat(1, 4), rat(1, 2), 1),
                charge(rat(3, 4), rat(3, 4), rat(1, 2), -1),
            ],
            k0: 0,
        };
        let f = solve_higgs(&spec(16), &cfg).unwrap();
        assert!(f.value(&[0.5, 0.5, 0.5]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn flux_staircase() {
        let f = solve_higgs(&spec(32), &pair_config(2, 1)).unwrap();
        let times = f.default_flux_times();
        let p = f.flux_profile(&times).unwrap();
        assert!(p.max_deviation < 1e-6, "{p:?}");
        for (k, j) in f.jumps(&p) {
            assert!((j - k as f64).abs() < 1e-6);
        }
        let empty = solve_higgs(
            &spec(16),
            &ChargeConfig {
                charges: vec![],
                k0: 3,
            },
        )
        .unwrap();
        let p = empty.flux_profile(&[0.1, 0.6]).unwrap();
        assert_eq!(p.corrected, vec![3.0, 3.0]);
        assert_eq!(
            verify_quantization(&empty, &[0.1], ConstantMode::FromLocations).unwrap(),
            0.0
        );
    }

    #[test]
    fn forced_zero_constant_reports_fractional_part() {
        let f = solve_higgs(&spec(32), &pair_config(1, 0)).unwrap();
        let times = f.default_flux_times();
        let r = verify_quantization(&f, &times, ConstantMode::ForcedZero).unwrap();
        assert!((r - 0.5).abs() < 1e-6);
        assert!(verify_quantization(&f, &times, ConstantMode::FromLocations).unwrap() < 1e-6);
    }

    #[test]
    fn staircase_average_is_degree() {
        let s = spec(16);
        let cfg = pair_config(2, 1);
        assert_eq!(
            staircase_average(&s, &cfg),
            rat(1, 1) - cfg.weighted_time(&s)
        );
    }
}
