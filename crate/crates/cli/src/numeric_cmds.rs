//! Commands on floating-point models: the abelian torus field and the Dirac monopole.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use monopair::abelian::{
    he_constant, solve_higgs, verify_quantization, ChargeConfig, ConstantMode, PointCharge,
    ScalarField3, Torus3Spec,
};
use monopair::diracmodel::{
    bogomolny_residual, chern_number, hopf_identity_suite, scattering_scalar, Chart, DiracChart,
    HopfLiftFrame, Shell,
};
use monopair::exact::rat_to_f64;
use monopair::testkit::ball_point;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::job::{self, at, AbelianJob, DiracJob, UsageError};
use crate::report::{sci, Check, Status};

const FLUX: &str = "slice Chern numbers jump by the charges";
const HE_CONSTANT: &str = "constant in the HE-Bogomolny equation";
const NEAR: &str = "Dirac-type singularity ik/2R at each charge";
const HARMONIC: &str = "phi is harmonic away from the charges";
const CHERN: &str = "first Chern number of the Dirac line bundle is k";
const BOGOMOLNY: &str = "Dirac monopole solves F = *d phi";
const SCATTERING: &str = "scattering of the Dirac monopole is z^k";
const HOPF: &str = "Hopf lift: basis, orthogonality and projection identities";
const EUCLID: &str = "Lambda(d xi) vanishes for the flat metric";

pub struct Context {
    pub seed: u64,
    pub tol: BTreeMap<&'static str, f64>,
    pub emit_fields: Option<PathBuf>,
}

impl Context {
    fn tol(&self, name: &str) -> f64 {
        *self
            .tol
            .get(name)
            .expect("tolerance declared for this command")
    }
}

fn write_rows(path: &PathBuf, rows: impl Iterator<Item = [f64; 4]>) -> Result<(), UsageError> {
    let mut s = String::new();
    for [t, x, y, v] in rows {
        let _ = writeln!(s, "{t:.9e} {x:.9e} {y:.9e} {v:.9e}");
    }
    std::fs::write(path, s)
        .map_err(|e| UsageError::Plain(format!("--emit-fields {}: {e}", path.display())))
}

fn config(j: &AbelianJob) -> Result<(Torus3Spec, ChargeConfig), UsageError> {
    let spec = Torus3Spec {
        period: job::rational("abelian.period", &j.period)?,
        l1: job::rational("abelian.l1", &j.l1)?,
        l2: job::rational("abelian.l2", &j.l2)?,
        grid: [j.grid; 3],
        fourier_modes: j.modes,
    };
    let charges = j
        .charges
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = format!("abelian.charges[{i}]");
            Ok(PointCharge {
                t: job::rational(&format!("{p}.t"), &c.t)?,
                x: job::rational(&format!("{p}.x"), &c.x)?,
                y: job::rational(&format!("{p}.y"), &c.y)?,
                k: c.k,
            })
        })
        .collect::<Result<Vec<_>, UsageError>>()?;
    Ok((spec, ChargeConfig { charges, k0: j.k0 }))
}

fn near_field_check(field: &ScalarField3, tol: f64) -> Check {
    let h = field.spec.spacing();
    let radii: Vec<f64> = (3..=10).map(|m| m as f64 * h).collect();
    let mut worst = 0.0f64;
    for j in 0..field.config.charges.len() {
        match field.near_field(j, [0.3, 0.5, 0.8], &radii) {
            Ok(rows) => worst = rows.iter().fold(worst, |w, (_, d)| w.max(d.abs())),
            Err(e) => return Check::refused("near-field", e, NEAR),
        }
    }
    Check::new(
        "near-field",
        Status::from_bool(worst < tol),
        format!("max |u - k/2R| over R in [3h, 10h] = {}", sci(worst)),
        NEAR,
    )
    .tol(sci(tol))
}

fn laplacian_check(field: &ScalarField3, min_order: f64) -> Check {
    let h = field.spec.spacing();
    let pts = field.probe_points(4, 5.0 * h);
    let run = || -> monopair::Result<(f64, f64)> {
        Ok((
            field.laplacian_residual(&pts, h)?,
            field.laplacian_residual(&pts, h / 2.0)?,
        ))
    };
    match run() {
        Ok((r1, r2)) => {
            let order = (r1 / r2).log2();
            Check::new(
                "laplacian-order",
                Status::from_bool(order >= min_order),
                format!(
                    "{order:.3} (residual {} at h, {} at h/2, {} probes)",
                    sci(r1),
                    sci(r2),
                    pts.len()
                ),
                HARMONIC,
            )
            .tol(format!(">= {min_order}"))
        }
        Err(e) => Check::refused("laplacian-order", e, HARMONIC),
    }
}

pub fn abelian(body: toml::Value, ctx: &Context) -> Result<Vec<Check>, UsageError> {
    let j: AbelianJob = job::typed("abelian", body)?;
    let mode = match j.constant.as_deref() {
        None | Some("from-locations") => ConstantMode::FromLocations,
        Some("forced-zero") => ConstantMode::ForcedZero,
        Some(other) => {
            return Err(at(
                "abelian.constant",
                format!("expected \"from-locations\" or \"forced-zero\", got {other:?}"),
            ))
        }
    };
    let (spec, cfg) = config(&j)?;
    let mut out = Vec::new();
    let he = he_constant(&spec, &cfg);
    let field = match solve_higgs(&spec, &cfg) {
        Ok(f) => f,
        Err(e) => return Ok(vec![Check::refused("solve", e, HE_CONSTANT)]),
    };
    out.push(Check::new(
        "he-constant",
        Status::Pass,
        format!(
            "C / (2 pi / Vol) = {} (C = {}), potential constant {}",
            he.over_two_pi_per_vol,
            sci(he.value),
            sci(field.constant)
        ),
        HE_CONSTANT,
    ));
    let times: Vec<f64> = match &j.times {
        Some(ts) => ts
            .iter()
            .enumerate()
            .map(|(i, t)| job::rational(&format!("abelian.times[{i}]"), t).map(|r| rat_to_f64(&r)))
            .collect::<Result<_, _>>()?,
        None => field.default_flux_times(),
    };
    let profile = match field.flux_profile(&times) {
        Ok(p) => p,
        Err(e) => {
            out.push(Check::refused("staircase", e, FLUX));
            return Ok(out);
        }
    };
    let shift = if mode == ConstantMode::FromLocations {
        profile.correction
    } else {
        0.0
    };
    let dev = profile
        .raw
        .iter()
        .zip(&profile.staircase)
        .map(|(r, s)| (r + shift - *s as f64).abs())
        .fold(0.0, f64::max);
    let tol_s = ctx.tol("staircase");
    let levels: Vec<String> = profile.staircase.iter().map(|s| s.to_string()).collect();
    out.push(
        Check::new(
            "staircase",
            Status::from_bool(dev < tol_s),
            format!(
                "max deviation {} from levels ({}) at {} times",
                sci(dev),
                levels.join(", "),
                times.len()
            ),
            FLUX,
        )
        .tol(sci(tol_s)),
    );
    out.push(match verify_quantization(&field, &times, mode) {
        Ok(q) => Check::new(
            "quantization",
            Status::from_bool(q < tol_s),
            format!("max distance to an integer {}", sci(q)),
            FLUX,
        )
        .tol(sci(tol_s)),
        Err(e) => Check::refused("quantization", e, FLUX),
    });
    let tol_j = ctx.tol("jump");
    let jumps = field.jumps(&profile);
    if jumps.len() < cfg.charges.len() {
        out.push(Check::new(
            "jump-coverage",
            Status::Inconclusive,
            format!(
                "{} of {} charges have samples on both sides",
                jumps.len(),
                cfg.charges.len()
            ),
            FLUX,
        ));
    }
    for (i, (k, jump)) in jumps.into_iter().enumerate() {
        out.push(
            Check::new(
                format!("jump[{i}]"),
                Status::from_bool((jump - k as f64).abs() < tol_j),
                format!("{jump:.6} vs {k}"),
                FLUX,
            )
            .tol(sci(tol_j)),
        );
    }
    if j.near_field {
        out.push(near_field_check(&field, ctx.tol("near_field")));
    }
    if j.laplacian {
        out.push(laplacian_check(&field, ctx.tol("laplacian_order")));
    }
    if let Some(path) = &ctx.emit_fields {
        write_rows(path, field.dump_rows().into_iter())?;
    }
    Ok(out)
}

fn shell_for(chart: Chart) -> Shell {
    let polar = match chart {
        Chart::ThetaNonzero => (0.6, 3.0),
        Chart::ThetaNotPi => (0.14, 2.5),
    };
    Shell {
        radii: (0.5, 2.0),
        polar,
        counts: [4, 5, 6],
    }
}

pub fn dirac(body: toml::Value, ctx: &Context) -> Result<Vec<Check>, UsageError> {
    let j: DiracJob = job::typed("dirac", body)?;
    if j.radii.iter().any(|r| !(*r > 0.0)) {
        return Err(at("dirac.radii", "radii must be positive"));
    }
    if !(j.fd_step > 0.0) {
        return Err(at("dirac.fd_step", "step must be positive"));
    }
    let mut out = Vec::new();
    let tol_c = ctx.tol("chern");
    for &k in &j.charges {
        for &r in &j.radii {
            out.push(match chern_number(k, r, j.psi_nodes) {
                Ok(c) => Check::new(
                    format!("chern k={k} r={r}"),
                    Status::from_bool((c - k as f64).abs() < tol_c),
                    format!("{c:.12}"),
                    CHERN,
                )
                .tol(sci(tol_c)),
                Err(e) => Check::refused(format!("chern k={k} r={r}"), e, CHERN),
            });
        }
    }
    let (tol_cf, min_order) = (ctx.tol("closed_form"), ctx.tol("fd_order"));
    for &k in &j.charges {
        for (label, chart) in [
            ("theta!=0", Chart::ThetaNonzero),
            ("theta!=pi", Chart::ThetaNotPi),
        ] {
            let name = format!("bogomolny k={k} {label}");
            match bogomolny_residual(k, chart, &shell_for(chart), j.fd_step) {
                Ok(b) => {
                    out.push(
                        Check::new(
                            format!("{name} closed"),
                            Status::from_bool(b.closed_form < tol_cf),
                            sci(b.closed_form),
                            BOGOMOLNY,
                        )
                        .tol(sci(tol_cf)),
                    );
                    let (status, value) = match b.order {
                        Some(o) => (
                            Status::from_bool(o >= min_order),
                            format!(
                                "{o:.3} (errors {} and {})",
                                sci(b.fd_errors.0),
                                sci(b.fd_errors.1)
                            ),
                        ),
                        None => (
                            Status::Pass,
                            format!("differences exact to rounding ({})", sci(b.fd_errors.1)),
                        ),
                    };
                    out.push(
                        Check::new(format!("{name} order"), status, value, BOGOMOLNY)
                            .tol(format!(">= {min_order}")),
                    );
                }
                Err(e) => out.push(Check::refused(name, e, BOGOMOLNY)),
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    if j.scattering_points > 0 {
        let zs: Vec<Complex64> = (0..j.scattering_points)
            .map(|_| Complex64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(-PI..PI)))
            .collect();
        let tol = ctx.tol("scattering");
        for &k in &j.charges {
            let errs = zs
                .iter()
                .map(|z| scattering_scalar(k, *z).map(|s| (s - z.powi(k as i32)).norm()))
                .collect::<monopair::Result<Vec<f64>>>();
            out.push(match errs {
                Ok(e) => {
                    let worst = e.into_iter().fold(0.0, f64::max);
                    Check::new(
                        format!("scattering k={k}"),
                        Status::from_bool(worst < tol),
                        format!("max |S - z^k| = {} over {} points", sci(worst), zs.len()),
                        SCATTERING,
                    )
                    .tol(sci(tol))
                }
                Err(e) => Check::refused(format!("scattering k={k}"), e, SCATTERING),
            });
        }
    }
    if j.hopf_points > 0 {
        let pts: Vec<_> = (0..j.hopf_points)
            .map(|_| ball_point(&mut rng, 0.05))
            .collect();
        let tol = ctx.tol("hopf");
        out.push(match hopf_identity_suite(&pts, &|_z| 1.0) {
            Ok(r) => Check::new(
                "hopf-suite",
                Status::from_bool(r.max_residual() < tol),
                format!(
                    "{} points; lift {}, expansions {}, decomposition {}, orthogonality {}, norm {}, projection {}, idempotence {}",
                    r.points,
                    sci(r.lift),
                    sci(r.expansions),
                    sci(r.decomposition),
                    sci(r.orthogonality),
                    sci(r.norm),
                    sci(r.projection),
                    sci(r.idempotence)
                ),
                HOPF,
            )
            .tol(sci(tol)),
            Err(e) => Check::refused("hopf-suite", e, HOPF),
        });
        let tol = ctx.tol("lambda");
        let worst = pts
            .iter()
            .map(|(a, b)| HopfLiftFrame::with_alpha(*a, *b, 1.0).lambda_dxi().norm())
            .fold(0.0, f64::max);
        out.push(
            Check::new(
                "lambda-dxi flat",
                Status::from_bool(worst < tol),
                sci(worst),
                EUCLID,
            )
            .tol(sci(tol)),
        );
    }
    if let (Some(path), Some(&k)) = (&ctx.emit_fields, j.charges.first()) {
        let dc = DiracChart::new(k, Chart::ThetaNonzero);
        let rows: Vec<[f64; 4]> = shell_for(Chart::ThetaNonzero)
            .points()
            .into_iter()
            .filter_map(|p| dc.phi(&p).ok().map(|v| [p[0], p[1], p[2], v]))
            .collect();
        write_rows(path, rows.into_iter())?;
    }
    Ok(out)
}
