//! Rational functions `p(z)/q(z)` over `Q(i)` in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::divisor::Point;
use super::gaussian::GQ;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Normalized so that `gcd(num, den) = 1` and `den` is monic; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

pub type RF = RationalFunction;

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lc = d.lc();
        if !lc.is_one() {
            let inv = lc.inv()?;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(Self { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: GQ) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GQ::from_int(n))
    }

    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    /// `(z - a)^e` for any integer `e`.
    pub fn linear_power(a: &GQ, e: i64) -> Self {
        let p = Poly::linear(a).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Self::from_poly(p)
        } else {
            Self {
                num: Poly::one(),
                den: p,
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == 0
    }

    /// Returns the constant value if the function is constant.
    pub fn as_constant(&self) -> Option<GQ> {
        if self.den.degree() == 0 && self.num.degree() <= 0 {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(Self {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn scale(&self, c: &GQ) -> Self {
        Self {
            num: self.num.scale(c),
            den: if c.is_zero() {
                Poly::one()
            } else {
                self.den.clone()
            },
        }
    }

    /// Order of vanishing at `p` (negative for poles). At infinity this is `deg den - deg num`.
    pub fn valuation_at(&self, p: &Point) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::UndefinedValuation);
        }
        Ok(match p {
            Point::Infinity => self.den.degree() - self.num.degree(),
            Point::Finite(a) => {
                self.num.order_at(a).unwrap_or(0) - self.den.order_at(a).unwrap_or(0)
            }
        })
    }

    /// Value at a finite point; errors at a pole.
    pub fn eval(&self, x: &GQ) -> Result<GQ> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(x) / &d)
    }

    /// Value at a point, `None` at a pole. At infinity this is the limit.
    pub fn value_at(&self, p: &Point) -> Option<GQ> {
        match p {
            Point::Finite(a) => self.eval(a).ok(),
            Point::Infinity => {
                let dn = self.num.degree();
                let dd = self.den.degree();
                if self.is_zero() || dn < dd {
                    Some(GQ::zero())
                } else if dn == dd {
                    Some(self.num.lc())
                } else {
                    None
                }
            }
        }
    }

    pub fn eval_c64(&self, x: Complex64) -> Complex64 {
        self.num.eval_c64(x) / self.den.eval_c64(x)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Substitute `z -> z + a`.
    pub fn shift(&self, a: &GQ) -> Self {
        Self::new(self.num.shift(a), self.den.shift(a)).expect("nonzero denominator")
    }

    pub fn to_expr(&self) -> String {
        let wrap = |p: &Poly| {
            let s = p.to_expr();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
                || (p.degree() == 0 && !(p.lc().is_real() || p.lc().re.is_zero()))
            {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            self.num.to_expr()
        } else {
            format!("{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl From<GQ> for RationalFunction {
    fn from(c: GQ) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl<'a, 'b> Add<&'b RF> for &'a RF {
    type Output = RF;
    fn add(self, rhs: &'b RF) -> RF {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RF::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RF::new(n, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl<'a, 'b> Sub<&'b RF> for &'a RF {
    type Output = RF;
    fn sub(self, rhs: &'b RF) -> RF {
        self + &(-rhs)
    }
}

impl<'a, 'b> Mul<&'b RF> for &'a RF {
    type Output = RF;
    fn mul(self, rhs: &'b RF) -> RF {
        if self.is_zero() || rhs.is_zero() {
            return RF::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RF::from_poly(&self.num * &rhs.num);
        }
        RF::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

/// Panics when dividing by the zero function.
impl<'a, 'b> Div<&'b RF> for &'a RF {
    type Output = RF;
    fn div(self, rhs: &'b RF) -> RF {
        self * &rhs.inv().expect("division by the zero function")
    }
}

impl Neg for &RF {
    type Output = RF;
    fn neg(self) -> RF {
        RF {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RF {
    type Output = RF;
    fn neg(self) -> RF {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<RF> for RF {
            type Output = RF;
            fn $m(self, rhs: RF) -> RF {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a RF> for RF {
            type Output = RF;
            fn $m(self, rhs: &'a RF) -> RF {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(n: i64) -> Point {
        Point::Finite(GQ::from_int(n))
    }

    #[test]
    fn valuation_examples() {
        let z2 = RF::from_poly(Poly::from_ints(&[0, 0, 1]));
        assert_eq!(z2.valuation_at(&pt(0)).unwrap(), 2);
        let f = RF::linear_power(&GQ::one(), -1);
        assert_eq!(f.valuation_at(&pt(1)).unwrap(), -1);
        let g = RF::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[0, 0, 0, 1])).unwrap();
        assert_eq!(g.valuation_at(&Point::Infinity).unwrap(), 1);
        assert_eq!(
            RF::zero().valuation_at(&pt(0)),
            Err(Error::UndefinedValuation)
        );
    }

    #[test]
    fn normalization_cancels_common_factors() {
        let f = RF::new(Poly::from_ints(&[-2, 2]), Poly::from_ints(&[-3, 0, 3])).unwrap();
        assert_eq!(f.num(), &Poly::constant(GQ::from_frac(2, 3)));
        assert_eq!(f.den(), &Poly::from_ints(&[1, 1]));
        assert_eq!(&f * &RF::zero(), RF::zero());
    }

    #[test]
    fn expression_format() {
        let f = RF::new(Poly::from_ints(&[1, 1]), Poly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(f.to_expr(), "(z + 1)/z^2");
    }
}
