//! Dense univariate polynomials over `Q(i)` in the variable `z`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::GQ;
use crate::error::{Error, Result};

/// Coefficients are stored lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<GQ>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GQ>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GQ::one())
    }

    pub fn constant(c: GQ) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![GQ::zero(), GQ::one()])
    }

    /// `z - a`
    pub fn linear(a: &GQ) -> Self {
        Self::new(vec![-a, GQ::one()])
    }

    pub fn monomial(c: GQ, deg: usize) -> Self {
        let mut v = vec![GQ::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| GQ::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[GQ] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> GQ {
        self.coeffs.get(i).cloned().unwrap_or_else(GQ::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with `deg 0 = -1` by convention.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> GQ {
        self.coeffs.last().cloned().unwrap_or_else(GQ::zero)
    }

    pub fn scale(&self, c: &GQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn eval(&self, x: &GQ) -> GQ {
        let mut acc = GQ::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_c64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &GQ::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division, `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree() < d.degree() {
            return Ok((Poly::zero(), self.clone()));
        }
        let dl = d.lc().inv()?;
        let dd = d.degree() as usize;
        let mut r = self.coeffs.clone();
        let mut q = vec![GQ::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                r[i + j] -= &t;
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Invalid("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.degree() == 0 || b.degree() == 0 {
            return Poly::one();
        }
        if let Some(g) = super::modular::modular_gcd(&a.monic(), &b.monic()) {
            return g;
        }
        Self::euclid_gcd(a, b)
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn euclid_gcd(a: &Poly, b: &Poly) -> Poly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// Taylor shift: the polynomial `q(w) = p(w + a)`.
    pub fn shift(&self, a: &GQ) -> Poly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a * &c[j + 1];
                c[j] += &t;
            }
        }
        Poly::new(c)
    }

    /// Coefficient-reversed polynomial of length `len` (i.e. `z^(len-1) p(1/z)`).
    pub fn reversed(&self, len: usize) -> Poly {
        let mut v = vec![GQ::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[len - 1 - i] = c.clone();
        }
        Poly::new(v)
    }

    /// Order of vanishing at a finite point; `None` for the zero polynomial.
    pub fn order_at(&self, a: &GQ) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let lin = Poly::linear(a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin).expect("linear divisor");
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Yun's square-free decomposition of a monic polynomial: factors `f_1, f_2, ...`
    /// with `p = lc * prod f_i^i`, each `f_i` square-free and pairwise coprime.
    pub fn square_free_decomposition(&self) -> Vec<Poly> {
        if self.degree() <= 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a = Poly::gcd(&f, &df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        loop {
            let g = Poly::gcd(&b, &d);
            out.push(g.clone());
            b = b.exact_div(&g).expect("gcd divides");
            if b.degree() <= 0 {
                break;
            }
            c = d.exact_div(&g).expect("gcd divides");
            d = &c - &b.derivative();
        }
        while out.last().is_some_and(|p| p.degree() <= 0) {
            out.pop();
        }
        out
    }

    /// Square-free part `p / gcd(p, p')`, monic.
    pub fn square_free_part(&self) -> Poly {
        if self.degree() <= 0 {
            return Poly::one();
        }
        let g = Poly::gcd(self, &self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Format with variable name `z`.
    pub fn to_expr(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{i}"),
            };
            let cs = c.to_string();
            let term = if mono.is_empty() {
                if c.is_real() || c.re.is_zero() {
                    cs
                } else {
                    format!("({cs})")
                }
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else if c.is_real() || c.re.is_zero() {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            parts.push(term);
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

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl<'a, 'b> Add<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a, 'b> Sub<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GQ::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] += &t;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}
