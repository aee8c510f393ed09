//! Truncated Laurent series in a local parameter `w` with explicit precision.
//!
//! A series with precision `Some(m)` knows every coefficient of `w^e` for `e < m`
//! and nothing beyond; `None` marks a finite, exactly known series. Every
//! operation propagates precision so that no coefficient is ever reported
//! beyond what its inputs determine.

use std::fmt;

use num_traits::{One, Zero};

use super::divisor::Point;
use super::gaussian::GQ;
use super::poly::Poly;
use super::ratfun::RF;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    /// Exponent of `coeffs[0]`; `coeffs[0] != 0` unless `coeffs` is empty.
    start: i64,
    coeffs: Vec<GQ>,
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl LaurentSeries {
    /// Builds `sum coeffs[i] w^(start + i) + O(w^prec)`, dropping terms at or beyond `prec`.
    pub fn new(start: i64, coeffs: Vec<GQ>, prec: Option<i64>) -> Self {
        let mut s = Self {
            start,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    pub fn zero_exact() -> Self {
        Self {
            start: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    /// `O(w^prec)`: nothing known except that the series vanishes below `prec`.
    pub fn big_o(prec: i64) -> Self {
        Self {
            start: prec,
            coeffs: Vec::new(),
            prec: Some(prec),
        }
    }

    pub fn one_exact() -> Self {
        Self::monomial(GQ::one(), 0)
    }

    pub fn monomial(c: GQ, e: i64) -> Self {
        Self::new(e, vec![c], None)
    }

    pub fn from_poly(p: &Poly) -> Self {
        Self::new(0, p.coeffs().to_vec(), None)
    }

    fn normalize(&mut self) {
        if let Some(m) = self.prec {
            let keep = (m - self.start).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.start += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.prec.unwrap_or(0);
        }
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Coefficient of `w^e`; `None` when `e` is at or beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<GQ> {
        if self.prec.is_some_and(|m| e >= m) {
            return None;
        }
        if e < self.start {
            return Some(GQ::zero());
        }
        Some(
            self.coeffs
                .get((e - self.start) as usize)
                .cloned()
                .unwrap_or_else(GQ::zero),
        )
    }

    /// Valuation if determined: `None` for an exact zero or when every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Lower bound on the valuation (the precision, for an undetermined series).
    pub fn valuation_lower_bound(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec.unwrap_or(i64::MAX)
        } else {
            self.start
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// True when all known coefficients vanish.
    pub fn is_zero_through_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> Option<GQ> {
        self.coeffs.first().cloned()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(
            self.start,
            self.coeffs.clone(),
            min_prec(self.prec, Some(prec)),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: &GQ) -> Self {
        Self::new(
            self.start,
            self.coeffs.iter().map(|a| a * c).collect(),
            self.prec,
        )
    }

    /// Multiply by `w^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            start: self.start + e,
            coeffs: self.coeffs.clone(),
            prec: self.prec.map(|m| m + e),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = min_prec(self.prec, other.prec);
        if self.coeffs.is_empty() {
            return Self::new(other.start, other.coeffs.clone(), prec);
        }
        if other.coeffs.is_empty() {
            return Self::new(self.start, self.coeffs.clone(), prec);
        }
        let lo = self.start.min(other.start);
        let hi =
            (self.start + self.coeffs.len() as i64).max(other.start + other.coeffs.len() as i64);
        let hi = prec.map_or(hi, |m| hi.min(m));
        let mut v = Vec::with_capacity((hi - lo).max(0) as usize);
        for e in lo..hi {
            let a = self.raw(e);
            let b = other.raw(e);
            v.push(&a + &b);
        }
        Self::new(lo, v, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn raw(&self, e: i64) -> GQ {
        if e < self.start {
            return GQ::zero();
        }
        self.coeffs
            .get((e - self.start) as usize)
            .cloned()
            .unwrap_or_else(GQ::zero)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let va = self.valuation_lower_bound();
        let vb = other.valuation_lower_bound();
        let pa = self
            .prec
            .map(|m| m.saturating_add(if vb == i64::MAX { 0 } else { vb }));
        let pb = other
            .prec
            .map(|m| m.saturating_add(if va == i64::MAX { 0 } else { va }));
        let prec = if self.is_exact_zero() || other.is_exact_zero() {
            None
        } else {
            min_prec(pa, pb)
        };
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(prec.unwrap_or(0), Vec::new(), prec);
        }
        let start = self.start + other.start;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(m) = prec {
            len = len.min((m - start).max(0) as usize);
        }
        let mut v = vec![GQ::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                let t = a * b;
                v[i + j] += &t;
            }
        }
        Self::new(start, v, prec)
    }

    /// Multiplicative inverse. Exact series are inverted to relative order `rel_order`.
    pub fn inv(&self, rel_order: i64) -> Result<Self> {
        let v = match self.valuation() {
            Some(v) => v,
            None if self.is_exact_zero() => return Err(Error::DivisionByZero),
            None => {
                return Err(Error::InsufficientPrecision(
                    "cannot invert a series with undetermined valuation".into(),
                ))
            }
        };
        let rel = match self.prec {
            Some(m) => m - v,
            None => rel_order,
        };
        let rel = rel.max(0) as usize;
        let u0inv = self.coeffs[0].inv()?;
        let mut out: Vec<GQ> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                out.push(u0inv.clone());
                continue;
            }
            let mut acc = GQ::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let t = &self.coeffs[j] * &out[k - j];
                acc += &t;
            }
            out.push(-(&acc * &u0inv));
        }
        Ok(Self::new(-v, out, Some(-v + rel as i64)))
    }

    /// `self / other`, inverting `other` to the relative precision of `self` when both are exact.
    pub fn div(&self, other: &Self, rel_order: i64) -> Result<Self> {
        Ok(self.mul(&other.inv(rel_order)?))
    }

    /// Render with the variable name `var`, e.g. `z^-2 + z^-1 + O(z)`.
    pub fn render(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.start + i as i64;
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            let cs = if c.is_real() || c.re.is_zero() {
                c.to_string()
            } else {
                format!("({c})")
            };
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        if let Some(m) = self.prec {
            parts.push(match m {
                0 => "O(1)".to_string(),
                1 => format!("O({var})"),
                _ => format!("O({var}^{m})"),
            });
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("w"))
    }
}

/// Numerator and denominator of `f` written in the local parameter at `p`
/// (`w = z - a` at a finite point, `w = 1/z` at infinity), with the power of `w`
/// pulled out of the quotient.
pub fn local_parts(f: &RF, p: &Point) -> (i64, Poly, Poly) {
    match p {
        Point::Finite(a) => (0, f.num().shift(a), f.den().shift(a)),
        Point::Infinity => {
            let dn = f.num().degree().max(0);
            let dd = f.den().degree();
            let rn = f.num().reversed(dn as usize + 1);
            let rd = f.den().reversed(dd as usize + 1);
            (dd - dn, rn, rd)
        }
    }
}

/// Exact Laurent expansion of `f` at `p` through `w^order`, i.e. up to `O(w^(order+1))`.
pub fn series_expand(f: &RF, p: &Point, order: i64) -> Result<LaurentSeries> {
    if f.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    let (extra, n, d) = local_parts(f, p);
    let vn = n.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
    let vd = d.coeffs().iter().take_while(|c| c.is_zero()).count() as i64;
    let v = extra + vn - vd;
    let prec = order + 1;
    let count = (prec - v).max(0) as usize;
    let nc = &n.coeffs()[vn as usize..];
    let dc = &d.coeffs()[vd as usize..];
    let d0inv = dc[0].inv()?;
    let mut out: Vec<GQ> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = nc.get(k).cloned().unwrap_or_else(GQ::zero);
        for j in 1..=k.min(dc.len() - 1) {
            let t = &dc[j] * &out[k - j];
            acc -= &t;
        }
        out.push(&acc * &d0inv);
    }
    Ok(LaurentSeries::new(v, out, Some(prec)))
}
