//! Seeded random instances and independent oracles for property sweeps.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::exact::{rat, MeroMatrix, Point, Poly, GQ, RF};
use crate::iwahori::WeightVector;
use crate::pairmodel::{build_cyclic_pair, BundlePair, DegreeData, PairType, SingularityDatum};

pub fn small_gq(rng: &mut impl Rng, bound: i64) -> GQ {
    GQ::from_parts(
        rng.gen_range(-bound..=bound),
        rng.gen_range(1..=2),
        rng.gen_range(-bound..=bound),
        1,
    )
}

pub fn random_poly(rng: &mut impl Rng, max_degree: usize, bound: i64) -> Poly {
    let d = rng.gen_range(0..=max_degree);
    Poly::new(
        (0..=d)
            .map(|_| GQ::from_int(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

/// `L diag((z - z0)^k) U` with unipotent lower `L` and upper `U` with constant nonzero diagonal.
#[derive(Clone, Debug)]
pub struct PlantedGerm {
    pub matrix: MeroMatrix,
    pub center: Point,
    /// Planted exponents, sorted non-increasing.
    pub exponents: Vec<i64>,
}

/// Planted germ whose unit factors have entries of degree at most 3.
pub fn planted_germ(rng: &mut impl Rng, rank: usize, exponent_bound: i64) -> PlantedGerm {
    planted_germ_with(rng, rank, exponent_bound, 3)
}

pub fn planted_germ_with(
    rng: &mut impl Rng,
    rank: usize,
    exponent_bound: i64,
    unit_degree: usize,
) -> PlantedGerm {
    let z0 = GQ::from_parts(rng.gen_range(-2..=2), 1, rng.gen_range(-1..=1), 1);
    let ks: Vec<i64> = (0..rank)
        .map(|_| rng.gen_range(-exponent_bound..=exponent_bound))
        .collect();
    let lower = MeroMatrix::from_fn(rank, rank, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => RF::from_poly(random_poly(rng, unit_degree, 3)),
        std::cmp::Ordering::Equal => RF::from_int(1),
        std::cmp::Ordering::Less => RF::zero(),
    });
    let upper = MeroMatrix::from_fn(rank, rank, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => RF::from_poly(random_poly(rng, unit_degree, 3)),
        std::cmp::Ordering::Equal => {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3);
            }
            RF::from_int(c)
        }
        std::cmp::Ordering::Greater => RF::zero(),
    });
    let diag = MeroMatrix::diagonal(
        &ks.iter()
            .map(|k| RF::linear_power(&z0, *k))
            .collect::<Vec<_>>(),
    );
    let matrix = lower
        .mul(&diag)
        .and_then(|m| m.mul(&upper))
        .expect("square factors");
    let mut exponents = ks;
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    PlantedGerm {
        matrix,
        center: Point::Finite(z0),
        exponents,
    }
}

/// Local type from valuations of minors: the smallest `j` exponents sum to the least
/// valuation of a nonzero `j x j` minor.
pub fn minor_valuation_type(m: &MeroMatrix, p: &Point) -> Result<Vec<i64>> {
    let n = m.rows();
    let subsets = |j: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == j)
            .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
            .collect()
    };
    let mut partial = vec![0i64];
    for j in 1..=n {
        let mut best: Option<i64> = None;
        for rows in subsets(j) {
            for cols in subsets(j) {
                let minor = MeroMatrix::from_fn(j, j, |a, b| m.get(rows[a], cols[b]).clone());
                let d = minor.det()?;
                if d.is_zero() {
                    continue;
                }
                let v = d.valuation_at(p)?;
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        partial.push(best.unwrap_or(i64::MAX));
    }
    let mut ex: Vec<i64> = partial.windows(2).map(|w| w[1] - w[0]).collect();
    ex.reverse();
    Ok(ex)
}

/// Random `DegreeData` with charges summing to zero and times in `(0, T]`.
pub fn admissible_degree_data(rng: &mut impl Rng) -> DegreeData {
    let period = rat(rng.gen_range(1..=7), rng.gen_range(1..=4));
    let count = rng.gen_range(0..=6);
    let mut charges: Vec<(i64, BigRational)> = (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=12);
            (
                rng.gen_range(-4..=4),
                rat(rng.gen_range(1..=q), q) * &period,
            )
        })
        .collect();
    let s: i64 = charges.iter().map(|c| c.0).sum();
    if let Some(last) = charges.last_mut() {
        last.0 -= s;
    }
    DegreeData::new(rng.gen_range(-5..=5), charges, period)
}

/// Random rank-2 cyclic pair with two or three singular points.
pub fn random_cyclic_pair(rng: &mut impl Rng) -> Result<BundlePair> {
    let count = rng.gen_range(2..=3);
    let mut zs: Vec<Point> = Vec::new();
    while zs.len() < count {
        let p = if rng.gen_bool(0.15) {
            Point::Infinity
        } else {
            Point::Finite(GQ::from_parts(
                rng.gen_range(-3..=3),
                1,
                rng.gen_range(-2..=2),
                1,
            ))
        };
        if !zs.contains(&p) {
            zs.push(p);
        }
    }
    let weights = loop {
        let mut w: Vec<(i64, i64)> = (0..count)
            .map(|_| (rng.gen_range(-3..=3), rng.gen_range(-3..=3)))
            .collect();
        let s: i64 = w[..count - 1].iter().map(|(a, b)| a + b).sum();
        let a = rng.gen_range(-2..=2);
        w[count - 1] = (a, -s - a);
        if w.iter().any(|(a, b)| a + b != 0) {
            break w;
        }
    };
    let sing = zs
        .into_iter()
        .zip(&weights)
        .map(|(z, (a, b))| {
            let q = rng.gen_range(1..=8);
            SingularityDatum {
                z,
                t: rat(rng.gen_range(1..=q), q),
                weight: WeightVector::sorted(vec![*a, *b]),
            }
        })
        .collect();
    let pt = PairType::new(sing, rat(1, 1))?;
    let perms: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut p = vec![0, 1];
            p.shuffle(rng);
            p
        })
        .collect();
    build_cyclic_pair(rng.gen_range(-2..=2), &perms, &pt)
}

/// `diag(f, g)` with distinct `f, g` and random degrees; times are `(i + 1) / (m + 1)` for the
/// `i`-th of `m` singular points.
pub fn planted_diagonal_pair(rng: &mut impl Rng) -> Result<BundlePair> {
    let pick = |rng: &mut dyn rand::RngCore| -> RF {
        let mut f = RF::constant(GQ::from_int(rng.gen_range(1..=3)));
        for _ in 0..rng.gen_range(1..=3) {
            let a = GQ::from_int(rng.gen_range(-3..=3));
            f = &f * &RF::linear_power(&a, rng.gen_range(-2..=2));
        }
        f
    };
    let (f, g) = loop {
        let (f, g) = (pick(rng), pick(rng));
        if f != g {
            break (f, g);
        }
    };
    let degrees = vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
    let rho = MeroMatrix::diagonal(&[f, g]);
    let m = crate::pairmodel::singular_points(&degrees, &rho)?.len() as i64;
    BundlePair::explicit_inferred(degrees, rho, rat(1, 1), |i, _| rat(i as i64 + 1, m + 1))
}

/// Uniform point of the unit ball in `C^2` at distance at least `floor` from the origin.
pub fn ball_point(rng: &mut impl Rng, floor: f64) -> (Complex64, Complex64) {
    loop {
        let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let r2: f64 = u.iter().map(|x| x * x).sum();
        if r2 < 1.0 && r2 >= floor * floor {
            return (Complex64::new(u[0], u[1]), Complex64::new(u[2], u[3]));
        }
    }
}
