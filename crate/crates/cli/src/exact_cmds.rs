//! Commands on exact data: admissibility, local types, stability, dimensions, spectral curves.

use monopair::dims::{dimension_report, su2_counts, u2_count};
use monopair::exact::{Divisor, MeroMatrix, Point, RF};
use monopair::iwahori::{factorize, local_type_of_matrix, verify, LaurentMatrixGerm, WeightVector};
use monopair::pairmodel::{
    average_degree, build_cyclic_pair, check_admissible, invariant_lines, singular_points,
    stability, t_degree, BundlePair, Certificate, DegreeData, InvariantLines, PairType,
    SingularityDatum, StabilityVerdict, Verdict,
};
use monopair::spectral::{
    branch_divisor_of, char_poly_of, monic_char_coeffs, prym_dimension, sl2_spectral,
};
use monopair::testkit::minor_valuation_type;
use num_rational::BigRational;
use num_traits::Zero;

use crate::job::{self, at, FactorizeJob, PolarJob, SingJob, StabilityJob, UsageError};
use crate::report::{Check, Status};

const ADMISSIBLE: &str = "admissible types: total rank jump vanishes";
const HE_CONSTANT: &str = "constant in the HE-Bogomolny equation";
const BOGOMOLNY: &str = "Bogomolny solutions need zero constant";
const AVERAGE: &str = "t-degree is the time average of slice degrees";
const IWAHORI: &str = "local type from the Iwahori factorization";
const STABILITY: &str = "t-slope stability of bundle pairs";
const DIMS: &str = "moduli dimension from the contribution [k]";
const SPECTRAL: &str = "spectral double cover and Riemann-Hurwitz";

fn weight(path: &str, w: &[i64]) -> Result<WeightVector, UsageError> {
    WeightVector::new(w.to_vec())
        .map_err(|e| at(path, format!("{e}: weights must be non-increasing")))
}

fn singularities(prefix: &str, list: &[SingJob]) -> Result<Vec<SingularityDatum>, UsageError> {
    list.iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{prefix}[{i}]");
            Ok(SingularityDatum {
                z: job::point(&format!("{p}.z"), &s.z)?,
                t: job::rational(&format!("{p}.t"), &s.t)?,
                weight: weight(&format!("{p}.weight"), &s.weight)?,
            })
        })
        .collect()
}

fn divisor(prefix: &str, list: &[PolarJob]) -> Result<Divisor, UsageError> {
    let terms = list
        .iter()
        .enumerate()
        .map(|(i, p)| Ok((job::point(&format!("{prefix}[{i}].z"), &p.z)?, p.m)))
        .collect::<Result<Vec<(Point, i64)>, UsageError>>()?;
    Ok(Divisor::new(terms))
}

fn show_weights(w: &[i64]) -> String {
    format!("{w:?}")
}

pub fn validate(body: toml::Value) -> Result<Vec<Check>, UsageError> {
    let j: job::ValidateJob = job::typed("validate", body)?;
    let period = job::rational("validate.period", &j.period)?;
    let sing = singularities("validate.singularities", &j.singularities)?;
    let mut out = Vec::new();
    if j.rank == 0 || sing.iter().any(|s| s.weight.rank() != j.rank) {
        return Err(at(
            "validate.rank",
            "every weight vector must have the stated rank",
        ));
    }
    if !period.is_zero()
        && sing
            .iter()
            .any(|s| s.t <= BigRational::zero() || s.t > period)
    {
        out.push(Check::refused(
            "pair-type",
            "times must lie in (0, T]",
            ADMISSIBLE,
        ));
        return Ok(out);
    }
    let pt = PairType::unchecked(sing, period);
    let rep = match check_admissible(&pt, j.k0, j.rank) {
        Ok(r) => r,
        Err(e) => return Ok(vec![Check::refused("condition0", e, ADMISSIBLE)]),
    };
    out.push(Check::new(
        "condition0",
        Status::from_bool(rep.sum_trk_zero),
        format!("sum trk = {}", rep.sum_trk),
        ADMISSIBLE,
    ));
    out.push(Check::new(
        "he-constant",
        Status::Pass,
        format!("C / (2 pi / Vol) = {}", rep.c_over_two_pi_per_vol),
        HE_CONSTANT,
    ));
    out.push(Check::new(
        "condition1",
        Status::from_bool(rep.bogomolny_compatible),
        format!("C = 0 is {}", rep.bogomolny_compatible),
        BOGOMOLNY,
    ));
    let d = DegreeData::from_type(j.c1.unwrap_or(j.k0), &pt);
    out.push(match average_degree(&d) {
        Ok(avg) => Check::new(
            "average-degree",
            Status::from_bool(avg == d.degree()),
            format!("t-degree {}, staircase average {}", d.degree(), avg),
            AVERAGE,
        ),
        Err(e) => Check::refused("average-degree", e, AVERAGE),
    });
    Ok(out)
}

pub fn factorize_cmd(body: toml::Value) -> Result<Vec<Check>, UsageError> {
    let j: FactorizeJob = job::typed("factorize", body)?;
    let m = job::matrix("factorize.matrix", &j.matrix)?;
    let center = job::point("factorize.center", &j.center)?;
    let mut out = Vec::new();
    let w = match local_type_of_matrix(&m, &center) {
        Ok(w) => w,
        Err(e) => return Ok(vec![Check::refused("local-type", e, IWAHORI)]),
    };
    out.push(Check::new(
        "local-type",
        Status::Pass,
        format!("{w} at {center}"),
        IWAHORI,
    ));
    let verified = LaurentMatrixGerm::from_matrix_auto(&m, &center).and_then(|g| {
        let fac = factorize(&g)?;
        Ok((verify(&g, &fac)?, fac.weights))
    });
    out.push(match verified {
        Ok((order, fw)) => Check::new(
            "factorization",
            Status::from_bool(order >= 1 && fw == w),
            format!("F diag G reproduces the germ through order {order}"),
            IWAHORI,
        ),
        Err(e) => Check::refused("factorization", e, IWAHORI),
    });
    if m.rows() <= 4 {
        out.push(match minor_valuation_type(&m, &center) {
            Ok(o) => Check::new(
                "minor-oracle",
                Status::from_bool(o == w.as_slice()),
                show_weights(&o),
                IWAHORI,
            ),
            Err(e) => Check::refused("minor-oracle", e, IWAHORI),
        });
    }
    if let Some(e) = j.expect {
        out.push(Check::new(
            "expected",
            Status::from_bool(e == w.as_slice()),
            format!("expected {}", show_weights(&e)),
            IWAHORI,
        ));
    }
    Ok(out)
}

fn build_pair(j: &StabilityJob) -> Result<Result<BundlePair, monopair::Error>, UsageError> {
    let period = job::rational("stability.period", &j.period)?;
    match (&j.cyclic, &j.rho, &j.degrees) {
        (Some(c), None, None) => {
            let sing = singularities("stability.cyclic.singularities", &c.singularities)?;
            Ok(PairType::new(sing, period)
                .and_then(|pt| build_cyclic_pair(c.l_degree, &c.perms, &pt)))
        }
        (None, Some(rho), Some(degrees)) => {
            let rho = job::matrix("stability.rho", rho)?;
            let times = j
                .times
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    Ok((
                        job::point(&format!("stability.times[{i}].z"), &t.z)?,
                        job::rational(&format!("stability.times[{i}].t"), &t.t)?,
                    ))
                })
                .collect::<Result<Vec<(Point, BigRational)>, UsageError>>()?;
            let pts = match singular_points(degrees, &rho) {
                Ok(p) => p,
                Err(e) => return Ok(Err(e)),
            };
            if let Some(p) = pts.iter().find(|p| !times.iter().any(|(z, _)| z == *p)) {
                return Err(at(
                    "stability.times",
                    format!("no time given for the singular point {p}"),
                ));
            }
            let lookup = |_: usize, z: &Point| {
                times
                    .iter()
                    .find(|(w, _)| w == z)
                    .map(|(_, t)| t.clone())
                    .expect("checked above")
            };
            Ok(BundlePair::explicit_inferred(
                degrees.clone(),
                rho,
                period,
                lookup,
            ))
        }
        _ => Err(at(
            "stability",
            "give either `cyclic` or both `degrees` and `rho`",
        )),
    }
}

fn verdict_name(v: Verdict) -> String {
    v.to_string()
}

/// Re-derives the slope of a certificate sub-pair from its degree and local orders.
fn recheck(pair: &BundlePair, c: &monopair::pairmodel::SubPairCertificate) -> bool {
    let pt = &pair.pair_type;
    let mut w = BigRational::zero();
    for (z, k) in &c.local_orders {
        match pt.datum_at(z) {
            Some(s) => w += BigRational::from_integer((*k).into()) * &s.t,
            None => return false,
        }
    }
    let td = BigRational::from_integer(c.degree.into()) - w / &pt.period;
    td == c.t_degree && &td / BigRational::from_integer((c.rank as i64).into()) == c.t_slope
}

fn certificate_check(pair: &BundlePair, v: &StabilityVerdict) -> Check {
    match &v.certificate {
        Certificate::Branch(b) => {
            let lines = pair.explicit_parts().and_then(|(_, rho)| {
                if pair.rank == 2 {
                    invariant_lines(rho).map(Some)
                } else {
                    Ok(None)
                }
            });
            let value = format!("{} of order {} in {}", b.criterion, b.order, b.factor);
            match lines {
                Ok(Some(InvariantLines::Lines(l))) => Check::new(
                    "certificate",
                    Status::from_bool(l.is_empty()),
                    format!(
                        "{value}; eigenline search finds {} invariant lines",
                        l.len()
                    ),
                    STABILITY,
                ),
                Ok(Some(_)) => Check::new(
                    "certificate",
                    Status::Inconclusive,
                    format!("{value}; eigenline search undetermined"),
                    STABILITY,
                ),
                Ok(None) => Check::new("certificate", Status::Pass, value, STABILITY),
                Err(e) => Check::refused("certificate", e, STABILITY),
            }
        }
        Certificate::Destabilizing(c) => Check::new(
            "certificate",
            Status::from_bool(recheck(pair, c) && c.t_slope >= v.slope),
            format!(
                "rank {} sub-pair of degree {} with t-slope {} >= {}",
                c.rank, c.degree, c.t_slope, v.slope
            ),
            STABILITY,
        ),
        Certificate::Exhaustive(cs) => Check::new(
            "certificate",
            Status::from_bool(cs.iter().all(|c| recheck(pair, c) && c.t_slope < v.slope)),
            format!(
                "all {} invariant sub-pairs have t-slope below {}: [{}]",
                cs.len(),
                v.slope,
                cs.iter()
                    .map(|c| c.t_slope.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            STABILITY,
        ),
        Certificate::Decomposition(cs) => Check::new(
            "certificate",
            Status::from_bool(cs.iter().all(|c| recheck(pair, c) && c.equality)),
            format!("{} equal-slope summands", cs.len()),
            STABILITY,
        ),
        Certificate::None => Check::new("certificate", Status::Inconclusive, "none", STABILITY),
    }
}

pub fn stability_cmd(body: toml::Value) -> Result<Vec<Check>, UsageError> {
    let j: StabilityJob = job::typed("stability", body)?;
    let expect = match j.expect.as_deref() {
        None => None,
        Some(s @ ("stable" | "unstable" | "polystable" | "inconclusive")) => Some(s.to_string()),
        Some(other) => return Err(at("stability.expect", format!("unknown verdict {other:?}"))),
    };
    let pair = match build_pair(&j)? {
        Ok(p) => p,
        Err(e) => return Ok(vec![Check::refused("pair-type", e, STABILITY)]),
    };
    let mut out = Vec::new();
    let ty: Vec<String> = pair
        .pair_type
        .singularities
        .iter()
        .map(|s| format!("{} at {} (t = {})", s.weight, s.z, s.t))
        .collect();
    out.push(Check::new(
        "pair-type",
        Status::Pass,
        ty.join("; "),
        STABILITY,
    ));
    out.push(Check::new(
        "t-degree",
        Status::Pass,
        format!("{} (c1 = {})", t_degree(&pair), pair.c1()),
        AVERAGE,
    ));
    let v = match stability(&pair) {
        Ok(v) => v,
        Err(e) => {
            out.push(Check::refused("verdict", e, STABILITY));
            return Ok(out);
        }
    };
    let status = if v.verdict == Verdict::Inconclusive {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    out.push(Check::new(
        "verdict",
        status,
        format!(
            "{} at slope {} ({})",
            verdict_name(v.verdict),
            v.slope,
            v.note
        ),
        STABILITY,
    ));
    out.push(certificate_check(&pair, &v));
    if let Some(e) = expect {
        out.push(Check::new(
            "expected",
            Status::from_bool(e == verdict_name(v.verdict)),
            format!("expected {e}"),
            STABILITY,
        ));
    }
    Ok(out)
}

pub fn dims(body: toml::Value) -> Result<Vec<Check>, UsageError> {
    let j: job::DimsJob = job::typed("dims", body)?;
    if j.rank == 0 {
        return Err(at("dims.rank", "rank must be positive"));
    }
    let mut sing = Vec::new();
    for (i, w) in j.weights.iter().enumerate() {
        let p = format!("dims.weights[{i}]");
        let wv = weight(&p, w)?;
        if wv.rank() != j.rank {
            return Err(at(p, "length differs from the rank"));
        }
        // Only the weights enter the counts; the points and times are placeholders.
        sing.push(SingularityDatum {
            z: Point::int(i as i64),
            t: num_rational::Ratio::new(1.into(), 2.into()),
            weight: wv,
        });
    }
    let pt = PairType::unchecked(sing, num_rational::Ratio::from_integer(1.into()));
    let r = dimension_report(j.genus, &pt, j.rank, j.simple, j.generic);
    let mut out = vec![Check::new(
        "contribution",
        Status::Pass,
        format!("sum [k] = {}", r.contribution_sum),
        DIMS,
    )];
    match (r.moduli_complex_dim, r.moduli_real_dim) {
        (Some(c), Some(re)) => out.push(Check::new(
            "moduli-dims",
            Status::Pass,
            format!("complex {c}, real {re}"),
            DIMS,
        )),
        _ => out.push(Check::refused(
            "moduli-dims",
            format!(
                "zero type; flat-case real rank {}",
                r.flat_real_rank.unwrap_or(0)
            ),
            DIMS,
        )),
    }
    out.push(Check::new(
        "gauge-index",
        Status::Pass,
        r.gauge_index.to_string(),
        "index of the deformation complex",
    ));
    if j.simple || j.generic {
        out.push(match r.h {
            Some((a, b, c)) => Check::new(
                "h-dims",
                Status::Pass,
                format!("({a}, {b}, {c})"),
                "hypercohomology dimensions",
            ),
            None => Check::refused(
                "h-dims",
                r.flags
                    .iter()
                    .find(|f| f.starts_with("h dimensions"))
                    .cloned()
                    .unwrap_or_default(),
                "hypercohomology dimensions",
            ),
        });
    }
    let mut su2_total = None;
    if let Some(polar) = &j.su2_polar {
        let d = divisor("dims.su2_polar", polar)?;
        match su2_counts(j.genus, &d) {
            Ok(s) => {
                let from_weights: i64 = d.terms().iter().map(|(_, m)| 2 * m).sum();
                out.push(Check::new(
                    "su2-count",
                    Status::from_bool(s.total == from_weights),
                    format!(
                        "total {}, f {}, prym {}, genus of S {}",
                        s.total, s.f_dim, s.prym_dim, s.genus_s
                    ),
                    "SL(2) parameter count",
                ));
                su2_total = Some(s.total);
                match u2_count(j.genus, d.degree()) {
                    Ok(u) => out.push(Check::new(
                        "u2-count",
                        Status::Pass,
                        u.to_string(),
                        "U(2) parameter count",
                    )),
                    Err(e) => out.push(Check::refused("u2-count", e, "U(2) parameter count")),
                }
            }
            Err(e) => out.push(Check::refused("su2-count", e, "SL(2) parameter count")),
        }
    }
    out.push(Check::new(
        "su-n",
        Status::Pass,
        format!("{} (remark-level)", r.su_n_remark_level),
        DIMS,
    ));
    if let Some(e) = j.expect {
        let pairs = [
            ("complex", e.complex, r.moduli_complex_dim),
            ("real", e.real, r.moduli_real_dim),
            ("index", e.index, Some(r.gauge_index)),
            ("su2_total", e.su2_total, su2_total),
        ];
        for (name, want, got) in pairs {
            if let Some(w) = want {
                out.push(Check::new(
                    format!("expected-{name}"),
                    Status::from_bool(got == Some(w)),
                    format!(
                        "expected {w}, got {}",
                        got.map_or("none".into(), |g| g.to_string())
                    ),
                    DIMS,
                ));
            }
        }
    }
    Ok(out)
}

fn cayley_hamilton(m: &MeroMatrix) -> monopair::Result<bool> {
    let c = monic_char_coeffs(m)?;
    let n = m.rows();
    let mut power = MeroMatrix::identity(n);
    let mut acc = MeroMatrix::zeros(n, n);
    for ck in &c {
        acc = acc.add(&power.scale(ck))?;
        power = power.mul(m)?;
    }
    let zero = acc.entries().all(|f| f.is_zero());
    Ok(zero)
}

pub fn spectral(body: toml::Value) -> Result<Vec<Check>, UsageError> {
    let j: job::SpectralJob = job::typed("spectral", body)?;
    let mut out = Vec::new();
    let (genus_s, branch_count, smooth) = match (&j.rho, &j.trace) {
        (Some(rows), None) => {
            let rho = job::matrix("spectral.rho", rows)?;
            match char_poly_of(&rho) {
                Ok(c) => out.push(Check::new(
                    "char-poly",
                    Status::Pass,
                    c.iter().map(RF::to_expr).collect::<Vec<_>>().join(" | "),
                    "det(rho - lambda), leading coefficient first",
                )),
                Err(e) => return Ok(vec![Check::refused("char-poly", e, SPECTRAL)]),
            }
            out.push(match cayley_hamilton(&rho) {
                Ok(ok) => Check::new(
                    "cayley-hamilton",
                    Status::from_bool(ok),
                    format!("p(rho) = 0 is {ok}"),
                    SPECTRAL,
                ),
                Err(e) => Check::refused("cayley-hamilton", e, SPECTRAL),
            });
            if rho.rows() != 2 {
                return Ok(out);
            }
            match branch_divisor_of(&rho) {
                Ok(b) => {
                    out.push(Check::new(
                        "branch-divisor",
                        Status::Pass,
                        format!(
                            "{}; (degree, multiplicity) of factors without roots in Q(i): {:?}",
                            b.divisor, b.unresolved
                        ),
                        SPECTRAL,
                    ));
                    let s = b.is_smooth();
                    let g = if s {
                        monopair::dims::spectral_genus(j.genus, b.degree()).ok()
                    } else {
                        None
                    };
                    (g, b.degree(), s)
                }
                Err(e) => {
                    out.push(Check::refused("branch-divisor", e, SPECTRAL));
                    return Ok(out);
                }
            }
        }
        (None, Some(f)) => {
            let f = job::rf("spectral.trace", f)?;
            let d = divisor("spectral.polar", j.polar.as_deref().unwrap_or(&[]))?;
            match sl2_spectral(&f, &d) {
                Ok(s) => {
                    let b = s.branch.expect("rank-2 data has a branch locus");
                    out.push(Check::new(
                        "branch-divisor",
                        Status::Pass,
                        b.divisor.to_string(),
                        SPECTRAL,
                    ));
                    (s.genus_s, b.degree(), s.smooth)
                }
                Err(e) => {
                    out.push(Check::refused("spectral-curve", e, SPECTRAL));
                    return Ok(out);
                }
            }
        }
        _ => return Err(at("spectral", "give exactly one of `rho` and `trace`")),
    };
    out.push(Check::new(
        "spectral-genus",
        if smooth {
            Status::Pass
        } else {
            Status::Inconclusive
        },
        genus_s.map_or("undefined (singular cover)".into(), |g| g.to_string()),
        SPECTRAL,
    ));
    out.push(match prym_dimension(j.genus, branch_count, smooth) {
        Ok(p) => Check::new("prym-dim", Status::Pass, p.to_string(), SPECTRAL),
        Err(e) if !smooth => Check::new("prym-dim", Status::Inconclusive, e.to_string(), SPECTRAL),
        Err(e) => Check::refused("prym-dim", e, SPECTRAL),
    });
    if let Some(e) = j.expect_genus {
        out.push(Check::new(
            "expected-genus",
            Status::from_bool(genus_s == Some(e)),
            format!("expected {e}"),
            SPECTRAL,
        ));
    }
    Ok(out)
}
