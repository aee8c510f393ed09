//! Points of the projective line and divisors supported on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::gaussian::GQ;
use super::ratfun::RF;
use super::roots::gaussian_roots;
use crate::error::{Error, Result};

/// A point of `P^1` over `Q(i)`. Finite points are ordered lexicographically by
/// (real, imaginary) part; infinity sorts last.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point {
    Finite(GQ),
    Infinity,
}

impl Point {
    pub fn int(n: i64) -> Self {
        Point::Finite(GQ::from_int(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<&GQ> {
        match self {
            Point::Finite(a) => Some(a),
            Point::Infinity => None,
        }
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Point::Finite(a), Point::Finite(b)) => a.lex_cmp(b),
            (Point::Finite(_), Point::Infinity) => Ordering::Less,
            (Point::Infinity, Point::Finite(_)) => Ordering::Greater,
            (Point::Infinity, Point::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(a) => write!(f, "{a}"),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

/// A finite formal sum of points with nonzero integer multiplicities, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Divisor {
    terms: Vec<(Point, i64)>,
}

impl Divisor {
    pub fn new(terms: impl IntoIterator<Item = (Point, i64)>) -> Self {
        let mut acc: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, m) in terms {
            *acc.entry(p).or_insert(0) += m;
        }
        Self {
            terms: acc.into_iter().filter(|(_, m)| *m != 0).collect(),
        }
    }

    pub fn terms(&self) -> &[(Point, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, p: &Point) -> i64 {
        self.terms
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, m)| *m)
    }

    /// Restriction to the finite points.
    pub fn affine(&self) -> Divisor {
        Divisor {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| !p.is_infinity())
                .cloned()
                .collect(),
        }
    }

    pub fn positive_part(&self) -> Divisor {
        Divisor {
            terms: self.terms.iter().filter(|(_, m)| *m > 0).cloned().collect(),
        }
    }

    pub fn negative_part(&self) -> Divisor {
        Divisor {
            terms: self
                .terms
                .iter()
                .filter(|(_, m)| *m < 0)
                .map(|(p, m)| (p.clone(), -m))
                .collect(),
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn neg(&self) -> Divisor {
        Divisor {
            terms: self.terms.iter().map(|(p, m)| (p.clone(), -m)).collect(),
        }
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, m)| format!("{m}*[{p}]"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Principal divisor of `f`, including the point at infinity.
pub fn divisor_of(f: &RF) -> Result<Divisor> {
    if f.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let zeros = gaussian_roots(f.num());
    let poles = gaussian_roots(f.den());
    if !zeros.is_complete() || !poles.is_complete() {
        return Err(Error::UnsupportedSplittingField);
    }
    let mut terms: Vec<(Point, i64)> = Vec::new();
    terms.extend(
        zeros
            .roots
            .into_iter()
            .map(|(r, m)| (Point::Finite(r), m as i64)),
    );
    terms.extend(
        poles
            .roots
            .into_iter()
            .map(|(r, m)| (Point::Finite(r), -(m as i64))),
    );
    terms.push((Point::Infinity, f.valuation_at(&Point::Infinity)?));
    Ok(Divisor::new(terms))
}
