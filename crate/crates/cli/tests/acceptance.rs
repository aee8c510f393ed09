//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use monopair::abelian::{he_constant, solve_higgs, ChargeConfig, PointCharge, Torus3Spec};
use monopair::dims::{contribution, gauge_index, moduli_dims, su2_counts};
use monopair::diracmodel::{
    bogomolny_residual, chern_number, hopf_identity_suite, scattering_scalar, Chart, HopfLiftFrame,
    Shell,
};
use monopair::exact::{rat, Divisor, Point};
use monopair::iwahori::{local_type_of_matrix, WeightVector};
use monopair::pairmodel::{
    average_degree, invariant_lines, pass_through, shift_origin, stability, Certificate,
    InvariantLines, PairType, SingularityDatum, Verdict,
};
use monopair::testkit::{
    admissible_degree_data, ball_point, minor_valuation_type, planted_diagonal_pair,
    planted_germ_with, random_cyclic_pair, PlantedGerm,
};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iwahori_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let entry_degree = |g: &PlantedGerm| {
        g.matrix
            .entries()
            .map(|f| f.num().degree().max(f.den().degree()))
            .max()
            .unwrap_or(0)
    };
    let mut max_deg = 0;
    for case in 0..200 {
        let g = loop {
            let g = planted_germ_with(&mut rng, 1 + case % 4, 4, 1);
            if entry_degree(&g) <= 6 {
                break g;
            }
        };
        max_deg = max_deg.max(entry_degree(&g));
        let w =
            local_type_of_matrix(&g.matrix, &g.center).map_err(|e| format!("case {case}: {e}"))?;
        ensure(w.as_slice() == g.exponents.as_slice(), || {
            format!("case {case}: got {w}, planted {:?}", g.exponents)
        })?;
        let o =
            minor_valuation_type(&g.matrix, &g.center).map_err(|e| format!("case {case}: {e}"))?;
        ensure(o == g.exponents, || format!("case {case}: oracle {o:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "200 germs, rank <= 4, max entry degree {max_deg}, 0 failures, {:.1} s",
        t.as_secs_f64()
    ))
}

fn degree_invariances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in 0..500 {
        let d = admissible_degree_data(&mut rng);
        let deg = d.degree();
        let s = BigRational::new(
            rng.gen_range(-30i64..=30).into(),
            rng.gen_range(1i64..=12).into(),
        ) * &d.period;
        ensure(shift_origin(&d, &s).degree() == deg, || {
            format!("case {case}: origin shift by {s}")
        })?;
        for j in 0..d.charges.len() {
            ensure(pass_through(&d, j).degree() == deg, || {
                format!("case {case}: pass-through {j}")
            })?;
        }
        let avg = average_degree(&d).map_err(|e| format!("case {case}: {e}"))?;
        ensure(avg == deg, || {
            format!("case {case}: average {avg} vs degree {deg}")
        })?;
    }
    Ok("500 configs: origin shift, pass-through and staircase average exact".into())
}

fn stability_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tier1 = 0;
    for case in 0..100 {
        let pair = random_cyclic_pair(&mut rng).map_err(|e| format!("cyclic {case}: {e}"))?;
        let v = stability(&pair).map_err(|e| format!("cyclic {case}: {e}"))?;
        if let Certificate::Branch(_) = v.certificate {
            tier1 += 1;
            ensure(v.verdict == Verdict::Stable, || {
                format!("cyclic {case}: branch certificate with {}", v.verdict)
            })?;
            let (_, rho) = pair.explicit_parts().map_err(|e| e.to_string())?;
            let lines = invariant_lines(rho).map_err(|e| format!("cyclic {case}: {e}"))?;
            ensure(lines == InvariantLines::Lines(vec![]), || {
                format!("cyclic {case}: eigenline search gives {lines:?}")
            })?;
        }
    }
    let mut planted = 0;
    let mut attempts = 0;
    while planted < 50 {
        attempts += 1;
        let pair = planted_diagonal_pair(&mut rng).map_err(|e| format!("diagonal: {e}"))?;
        let (degrees, rho) = pair.explicit_parts().map_err(|e| e.to_string())?;
        let pt = &pair.pair_type;
        let mut slopes = Vec::new();
        for i in 0..2 {
            let mut w = rat(0, 1);
            for s in &pt.singularities {
                let v = rho
                    .get(i, i)
                    .valuation_at(&s.z)
                    .map_err(|e| e.to_string())?;
                w += BigRational::from_integer(v.into()) * &s.t;
            }
            slopes.push(BigRational::from_integer(degrees[i].into()) - w / &pt.period);
        }
        if slopes[0] == slopes[1] {
            continue;
        }
        planted += 1;
        let mu = (&slopes[0] + &slopes[1]) / rat(2, 1);
        let v = stability(&pair).map_err(|e| format!("diagonal: {e}"))?;
        ensure(v.verdict == Verdict::Unstable, || {
            format!("diagonal {planted}: verdict {}", v.verdict)
        })?;
        let Certificate::Destabilizing(c) = &v.certificate else {
            return Err(format!(
                "diagonal {planted}: certificate {:?}",
                v.certificate
            ));
        };
        let top = slopes.iter().max().expect("two slopes");
        ensure(&c.t_slope == top && c.t_slope > mu && v.slope == mu, || {
            format!("diagonal {planted}: slope {} vs {top}, mu {mu}", c.t_slope)
        })?;
    }
    Ok(format!("{tier1} of 100 cyclic pairs certified by an odd branch point, none with an invariant line; 50 planted diagonal pairs unstable ({attempts} drawn)"))
}

fn dimension_identities() -> Outcome {
    let mut count = 0;
    for n in 1..=6usize {
        let mut k = vec![6i64; n];
        loop {
            let linear: i64 = k
                .iter()
                .enumerate()
                .map(|(a, x)| (n as i64 - 1 - 2 * a as i64) * x)
                .sum();
            // `contribution` also asserts its pairwise and gap forms agree.
            ensure(
                contribution(&k).map_err(|e| e.to_string())? == linear,
                || format!("{k:?}"),
            )?;
            count += 1;
            // Next non-increasing vector in reverse lexicographic order.
            let Some(i) = (0..n).rev().find(|&i| k[i] > -6) else {
                break;
            };
            k[i] -= 1;
            for j in i + 1..n {
                k[j] = 6;
                k[j] = k[j].min(k[i]);
            }
        }
    }
    for ks in [
        vec![1],
        vec![2],
        vec![1, 1],
        vec![3, 1],
        vec![2, 2, 1],
        vec![1, 1, 1, 1],
    ] {
        let d = Divisor::new(
            ks.iter()
                .enumerate()
                .map(|(i, k)| (Point::int(i as i64), *k)),
        );
        let total = su2_counts(0, &d).map_err(|e| e.to_string())?.total;
        let sum: i64 = ks
            .iter()
            .map(|k| contribution(&[*k, -*k]).expect("sorted"))
            .sum();
        ensure(total == 2 * ks.iter().sum::<i64>() && total == sum, || {
            format!("D+ {ks:?}: total {total}, sum {sum}")
        })?;
    }
    let pt = PairType::new(
        vec![SingularityDatum {
            z: Point::int(0),
            t: rat(1, 2),
            weight: WeightVector::sorted(vec![1, -1]),
        }],
        rat(1, 1),
    )
    .map_err(|e| e.to_string())?;
    let dims = moduli_dims(&pt, 2).map_err(|e| e.to_string())?;
    ensure(dims == (4, 8) && gauge_index(&pt) == 4, || {
        format!("(1, -1): {dims:?}, index {}", gauge_index(&pt))
    })?;
    Ok(format!(
        "{count} weight vectors, SU(2) totals, (1,-1) gives (4, 8) and index 4"
    ))
}

fn dirac_model() -> Outcome {
    let start = Instant::now();
    let mut worst_chern = 0.0f64;
    for k in -3..=3 {
        for r in [0.5, 1.0, 2.0] {
            let c = chern_number(k, r, 64).map_err(|e| e.to_string())?;
            worst_chern = worst_chern.max((c - k as f64).abs());
        }
    }
    ensure(worst_chern < 1e-8, || {
        format!("Chern error {worst_chern:e}")
    })?;
    let (mut worst_closed, mut min_order) = (0.0f64, f64::INFINITY);
    for k in -3..=3 {
        for (chart, polar) in [
            (Chart::ThetaNonzero, (0.6, 3.0)),
            (Chart::ThetaNotPi, (0.14, 2.5)),
        ] {
            let b = bogomolny_residual(
                k,
                chart,
                &Shell {
                    radii: (0.5, 2.0),
                    polar,
                    counts: [4, 5, 6],
                },
                0.02,
            )
            .map_err(|e| e.to_string())?;
            worst_closed = worst_closed.max(b.closed_form);
            if k != 0 {
                min_order = min_order.min(b.order.ok_or("no finite-difference error to measure")?);
            }
        }
    }
    ensure(worst_closed < 1e-12 && min_order >= 1.8, || {
        format!("closed form {worst_closed:e}, order {min_order}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let zs: Vec<Complex64> = (0..20)
        .map(|_| Complex64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(-3.14..3.14)))
        .collect();
    let mut worst_scatter = 0.0f64;
    for k in -2..=2 {
        for z in &zs {
            let s = scattering_scalar(k, *z).map_err(|e| e.to_string())?;
            worst_scatter = worst_scatter.max((s - z.powi(k as i32)).norm());
        }
    }
    ensure(worst_scatter < 1e-6, || {
        format!("scattering error {worst_scatter:e}")
    })?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!(
        "Chern error {worst_chern:.1e}, closed form {worst_closed:.1e}, order >= {min_order:.3}, scattering {worst_scatter:.1e}, {:.1} s",
        t.as_secs_f64()
    ))
}

fn hopf_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let pts: Vec<_> = (0..100).map(|_| ball_point(&mut rng, 0.05)).collect();
    let r = hopf_identity_suite(&pts, &|_z| 1.0).map_err(|e| e.to_string())?;
    ensure(r.max_residual() < 1e-9, || format!("{r:?}"))?;
    let lambda = pts
        .iter()
        .map(|(a, b)| HopfLiftFrame::with_alpha(*a, *b, 1.0).lambda_dxi().norm())
        .fold(0.0, f64::max);
    ensure(lambda < 1e-12, || {
        format!("Lambda(d xi) = {lambda:e} for alpha = 1")
    })?;
    Ok(format!(
        "100 points, max residual {:.1e}, flat Lambda(d xi) {lambda:.1e}",
        r.max_residual()
    ))
}

fn abelian_torus() -> Outcome {
    let start = Instant::now();
    let spec = Torus3Spec {
        period: rat(1, 1),
        l1: rat(1, 1),
        l2: rat(1, 1),
        grid: [64; 3],
        fourier_modes: 48,
    };
    let cfg = ChargeConfig {
        charges: vec![
            PointCharge {
                t: rat(3, 4),
                x: rat(1, 2),
                y: rat(1, 2),
                k: 2,
            },
            PointCharge {
                t: rat(1, 4),
                x: rat(1, 4),
                y: rat(1, 4),
                k: -2,
            },
        ],
        k0: 1,
    };
    let he = he_constant(&spec, &cfg);
    ensure(he.over_two_pi_per_vol == rat(0, 1), || {
        format!("C = {}", he.over_two_pi_per_vol)
    })?;
    let field = solve_higgs(&spec, &cfg).map_err(|e| e.to_string())?;
    let times = field.default_flux_times();
    let profile = field.flux_profile(&times).map_err(|e| e.to_string())?;
    let mut levels = profile.staircase.clone();
    levels.dedup();
    ensure(levels == [1, -1, 1], || {
        format!("staircase levels {levels:?}")
    })?;
    ensure(profile.max_deviation < 1e-3, || {
        format!("staircase deviation {:e}", profile.max_deviation)
    })?;
    let jumps = field.jumps(&profile);
    ensure(jumps.len() == 2, || {
        format!("{} jumps measured", jumps.len())
    })?;
    let jump_err = jumps
        .iter()
        .map(|(k, j)| (j - *k as f64).abs())
        .fold(0.0, f64::max);
    ensure(jump_err < 1e-3, || format!("jump error {jump_err:e}"))?;
    let h = field.spec.spacing();
    let radii: Vec<f64> = (3..=10).map(|m| m as f64 * h).collect();
    let mut near = 0.0f64;
    for j in 0..2 {
        for dir in [[0.3, 0.5, 0.8], [-1.0, 0.2, 0.1], [0.0, -0.6, 0.7]] {
            let rows = field
                .near_field(j, dir, &radii)
                .map_err(|e| e.to_string())?;
            near = rows.iter().fold(near, |m, (_, d)| m.max(d.abs()));
        }
    }
    ensure(near < 5.0, || format!("near-field deviation {near}"))?;
    let pts = field.probe_points(4, 5.0 * h);
    let r1 = field
        .laplacian_residual(&pts, h)
        .map_err(|e| e.to_string())?;
    let r2 = field
        .laplacian_residual(&pts, h / 2.0)
        .map_err(|e| e.to_string())?;
    let order = (r1 / r2).log2();
    ensure(order >= 1.8, || format!("Laplacian order {order}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!(
        "staircase deviation {:.1e}, jump error {jump_err:.1e}, C = 0, near-field <= {near:.2}, Laplacian order {order:.2}, {:.1} s",
        profile.max_deviation,
        t.as_secs_f64()
    ))
}

/// Expected exit code of each example job.
const JOBS: [(&str, i32); 17] = [
    ("abelian_forced_zero", 1),
    ("abelian_torus", 0),
    ("bad_schema", 64),
    ("dims_elementary", 0),
    ("dims_zero_type", 1),
    ("dirac_model", 0),
    ("factorize_diag", 0),
    ("factorize_expect_fail", 1),
    ("report_all", 0),
    ("spectral_matrix", 0),
    ("spectral_nodal", 2),
    ("spectral_smooth", 0),
    ("spectral_unresolved", 0),
    ("stability_cyclic", 0),
    ("stability_diagonal", 0),
    ("validate_constant_fail", 1),
    ("validate_torus", 0),
];

fn cli_determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("jobs");
    let mut files: Vec<String> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".toml"))
        .collect();
    files.sort();
    let listed: Vec<String> = JOBS.iter().map(|(n, _)| format!("{n}.toml")).collect();
    ensure(files == listed, || {
        format!("job files {files:?} differ from the expectation table")
    })?;
    for (name, want) in JOBS {
        let path = dir.join(format!("{name}.toml"));
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let cmd = text
            .lines()
            .find_map(|l| l.strip_prefix("command = \""))
            .and_then(|r| r.strip_suffix('"'))
            .ok_or_else(|| format!("{name}: no command"))?;
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_monopair"))
                .args([cmd, "--input"])
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a.stdout == b.stdout && a.stderr == b.stderr, || {
            format!("{name}: output differs between runs")
        })?;
        let code = a.status.code().unwrap_or(-1);
        ensure(code == want, || {
            format!("{name}: exit {code}, expected {want}")
        })?;
    }
    Ok(format!(
        "{} jobs byte-identical across two runs with expected exit codes",
        JOBS.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 Iwahori round-trip", iwahori_round_trip),
        ("2 t-degree invariances", degree_invariances),
        ("3 stability cross-check", stability_cross_check),
        ("4 dimension identities", dimension_identities),
        ("5 Dirac model", dirac_model),
        ("6 Hopf-lift suite", hopf_suite),
        ("7 abelian torus", abelian_torus),
        ("8 CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
