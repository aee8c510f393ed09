//! Periodic Green's function on a flat three-torus by Ewald summation.
//!
//! `G` solves `Laplacian G = -4 pi (delta - 1/V)`, has zero mean and `G ~ 1/R` at the
//! source. The real-space part sums `erfc(a R)/R` over the 27 nearest images; the
//! reciprocal part keeps the modes whose Gaussian factor is above `1e-17`, capped by
//! a spherical cutoff `|m| <= M`.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `a * r_cut` such that `erfc` is below double precision at the cutoff.
const SCREEN: f64 = 5.9;
/// Relative size below which reciprocal terms are dropped.
const MODE_FLOOR: f64 = 1e-17;

#[derive(Clone, Debug)]
struct Mode {
    k: [f64; 3],
    /// `4 pi / V exp(-k^2 / 4 a^2) / k^2`
    weight: f64,
    /// `sum_j q_j exp(-i k . p_j)`
    structure: Complex64,
}

/// Potential `sum_j q_j G(x - p_j)` of point sources on the torus with side lengths `lengths`.
#[derive(Clone, Debug)]
pub struct EwaldSum {
    lengths: [f64; 3],
    alpha: f64,
    r_cut: f64,
    sources: Vec<([f64; 3], f64)>,
    modes: Vec<Mode>,
    background: f64,
}

impl EwaldSum {
    /// `max_modes` is the spherical cutoff `M` on integer mode vectors.
    pub fn new(lengths: [f64; 3], sources: &[([f64; 3], f64)], max_modes: usize) -> Self {
        let lmin = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        Self::with_cutoff(lengths, sources, max_modes, lmin)
    }

    /// Same sum with the real-space cutoff `r_cut <= min(lengths)`; the result is independent
    /// of the splitting to rounding error.
    pub fn with_cutoff(
        lengths: [f64; 3],
        sources: &[([f64; 3], f64)],
        max_modes: usize,
        r_cut: f64,
    ) -> Self {
        let alpha = SCREEN / r_cut;
        let vol: f64 = lengths.iter().product();
        let kmax = 2.0 * alpha * (-(MODE_FLOOR.ln())).sqrt();
        let mlim: Vec<i64> = lengths
            .iter()
            .map(|l| ((kmax * l / (2.0 * PI)).ceil() as i64).min(max_modes as i64))
            .collect();
        let m2max = (max_modes * max_modes) as i64;
        let mut modes = Vec::new();
        for a in -mlim[0]..=mlim[0] {
            for b in -mlim[1]..=mlim[1] {
                for c in -mlim[2]..=mlim[2] {
                    if (a, b, c) == (0, 0, 0) || a * a + b * b + c * c > m2max {
                        continue;
                    }
                    let k = [
                        2.0 * PI * a as f64 / lengths[0],
                        2.0 * PI * b as f64 / lengths[1],
                        2.0 * PI * c as f64 / lengths[2],
                    ];
                    let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                    let g = (-k2 / (4.0 * alpha * alpha)).exp();
                    if g < MODE_FLOOR {
                        continue;
                    }
                    let structure = sources
                        .iter()
                        .map(|(p, q)| {
                            Complex64::from_polar(*q, -(k[0] * p[0] + k[1] * p[1] + k[2] * p[2]))
                        })
                        .sum();
                    modes.push(Mode {
                        k,
                        weight: 4.0 * PI / vol * g / k2,
                        structure,
                    });
                }
            }
        }
        let qsum: f64 = sources.iter().map(|(_, q)| q).sum();
        Self {
            lengths,
            alpha,
            r_cut,
            sources: sources.to_vec(),
            modes,
            background: -PI / (alpha * alpha * vol) * qsum,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Minimum-image displacement `x - p`.
    pub fn displacement(&self, x: &[f64; 3], p: &[f64; 3]) -> [f64; 3] {
        let mut d = [0.0; 3];
        for i in 0..3 {
            let l = self.lengths[i];
            d[i] = (x[i] - p[i]) - l * ((x[i] - p[i]) / l).round();
        }
        d
    }

    /// Distance to the nearest source image.
    pub fn nearest_source(&self, x: &[f64; 3]) -> f64 {
        self.sources
            .iter()
            .map(|(p, _)| norm(&self.displacement(x, p)))
            .fold(f64::INFINITY, f64::min)
    }

    fn images(&self, d: [f64; 3], mut f: impl FnMut([f64; 3], f64)) {
        for a in -1..=1 {
            for b in -1..=1 {
                for c in -1..=1 {
                    let r = [
                        d[0] + a as f64 * self.lengths[0],
                        d[1] + b as f64 * self.lengths[1],
                        d[2] + c as f64 * self.lengths[2],
                    ];
                    let rn = norm(&r);
                    if rn < self.r_cut {
                        f(r, rn);
                    }
                }
            }
        }
    }

    pub fn value(&self, x: &[f64; 3]) -> f64 {
        let mut real = 0.0;
        for (p, q) in &self.sources {
            self.images(self.displacement(x, p), |_, rn| {
                real += q * libm::erfc(self.alpha * rn) / rn
            });
        }
        let mut recip = 0.0;
        for m in &self.modes {
            let ph = Complex64::from_polar(1.0, m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]);
            recip += m.weight * (m.structure * ph).re;
        }
        real + recip + self.background
    }

    pub fn gradient(&self, x: &[f64; 3]) -> [f64; 3] {
        let a = self.alpha;
        let mut g = [0.0; 3];
        for (p, q) in &self.sources {
            self.images(self.displacement(x, p), |r, rn| {
                let dr = -libm::erfc(a * rn) / (rn * rn)
                    - 2.0 * a / PI.sqrt() * (-(a * rn) * (a * rn)).exp() / rn;
                for i in 0..3 {
                    g[i] += q * dr * r[i] / rn;
                }
            });
        }
        for m in &self.modes {
            let ph = Complex64::from_polar(1.0, m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]);
            let s = -m.weight * (m.structure * ph).im;
            for i in 0..3 {
                g[i] += s * m.k[i];
            }
        }
        g
    }
}

/// Plain truncated Fourier sum `4 pi / V sum_{0 < |m| <= M} cos(k . r) / k^2`.
pub fn fourier_green(lengths: [f64; 3], r: &[f64; 3], max_modes: i64) -> f64 {
    let vol: f64 = lengths.iter().product();
    let mut s = 0.0;
    for a in -max_modes..=max_modes {
        for b in -max_modes..=max_modes {
            for c in -max_modes..=max_modes {
                if (a, b, c) == (0, 0, 0) || a * a + b * b + c * c > max_modes * max_modes {
                    continue;
                }
                let k = [
                    2.0 * PI * a as f64 / lengths[0],
                    2.0 * PI * b as f64 / lengths[1],
                    2.0 * PI * c as f64 / lengths[2],
                ];
                let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                s += (k[0] * r[0] + k[1] * r[1] + k[2] * r[2]).cos() / k2;
            }
        }
    }
    4.0 * PI / vol * s
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: [f64; 3] = [1.0, 1.0, 1.0];

    #[test]
    fn splitting_independence() {
        let src = [([0.1, 0.2, 0.3], 1.0)];
        let a = EwaldSum::new([1.0, 1.3, 0.9], &src, 48);
        let b = EwaldSum::with_cutoff([1.0, 1.3, 0.9], &src, 48, 0.6);
        for x in [[0.5, 0.5, 0.5], [0.12, 0.9, 0.33], [0.8, 0.1, 0.7]] {
            assert!((a.value(&x) - b.value(&x)).abs() < 1e-12);
            let (ga, gb) = (a.gradient(&x), b.gradient(&x));
            for i in 0..3 {
                assert!((ga[i] - gb[i]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn near_field_is_coulomb() {
        let e = EwaldSum::new(UNIT, &[([0.0; 3], 1.0)], 48);
        let reg: Vec<f64> = [1e-3, 3e-3, 1e-2]
            .iter()
            .map(|r| e.value(&[*r, 0.0, 0.0]) - 1.0 / r)
            .collect();
        // The regular part is c + (2 pi / 3 V) R^2 + ... near the source.
        assert!((reg[0] - reg[2]).abs() < 1e-3);
        assert!((reg[0] - reg[1]).abs() < 1e-4);
    }

    #[test]
    fn zero_mean_and_fourier_oracle() {
        let e = EwaldSum::new(UNIT, &[([0.0; 3], 1.0)], 48);
        let n = 8;
        let mut mean = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = [
                        (i as f64 + 0.5) / n as f64,
                        (j as f64 + 0.5) / n as f64,
                        (k as f64 + 0.5) / n as f64,
                    ];
                    mean += e.value(&x);
                }
            }
        }
        mean /= (n * n * n) as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        let x = [0.5, 0.5, 0.5];
        let f = fourier_green(UNIT, &x, 24);
        assert!((f - e.value(&x)).abs() < 2e-2, "{f} vs {}", e.value(&x));
    }

    #[test]
    fn gradient_matches_differences() {
        let e = EwaldSum::new(
            [1.0, 2.0, 1.5],
            &[([0.2, 0.3, 0.4], 1.5), ([0.7, 1.1, 0.2], -1.5)],
            48,
        );
        let x = [0.45, 0.9, 1.1];
        let g = e.gradient(&x);
        let h = 1e-5;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += h;
            xm[i] -= h;
            let fd = (e.value(&xp) - e.value(&xm)) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6, "{i}: {fd} vs {}", g[i]);
        }
    }
}
