//! Square and rectangular matrices over rational functions.

use std::fmt;

use num_traits::{One, Zero};

use super::gaussian::GQ;
use super::ratfun::RF;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeroMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RF>,
}

impl MeroMatrix {
    pub fn from_rows(rows: Vec<Vec<RF>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RF) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| RF::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { RF::one() } else { RF::zero() })
    }

    pub fn diagonal(d: &[RF]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { RF::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RF {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RF) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<RF> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RF> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&RF) -> RF) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &RF) -> Self {
        self.map(|x| x * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j) + other.get(i, j)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.map(|x| -x))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = RF::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * other.get(k, j));
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[RF]) -> Result<Vec<RF>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(RF::zero(), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect())
    }

    pub fn trace(&self) -> RF {
        (0..self.rows.min(self.cols)).fold(RF::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant by fraction-free (Bareiss) elimination with row pivoting.
    pub fn det(&self) -> Result<RF> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(RF::one());
        }
        let mut a: Vec<Vec<RF>> = (0..n).map(|i| self.row(i)).collect();
        let mut sign = false;
        let mut prev = RF::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return Ok(RF::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = &t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<RF>> = (0..n).map(|i| self.row(i)).collect();
        let mut b: Vec<Vec<RF>> = (0..n).map(|i| Self::identity(n).row(i)).collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !a[r][k].is_zero())
                .ok_or(Error::Singular)?;
            a.swap(k, p);
            b.swap(k, p);
            let inv = a[k][k].inv()?;
            for j in 0..n {
                a[k][j] = &a[k][j] * &inv;
                b[k][j] = &b[k][j] * &inv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let ta = &f * &a[k][j];
                    a[i][j] = &a[i][j] - &ta;
                    let tb = &f * &b[k][j];
                    b[i][j] = &b[i][j] - &tb;
                }
            }
        }
        Self::from_rows(b)
    }

    /// Evaluate every entry at a finite point.
    pub fn eval(&self, x: &GQ) -> Result<Vec<Vec<GQ>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(x)).collect())
            .collect()
    }

    /// Substitute `z -> z + a` entrywise.
    pub fn shift(&self, a: &GQ) -> Self {
        self.map(|f| f.shift(a))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }
}

impl fmt::Display for MeroMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self
                    .row(i)
                    .iter()
                    .map(|e| format!("\"{}\"", e.to_expr()))
                    .collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for MeroMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::Poly;

    fn zpow(e: i64) -> RF {
        RF::linear_power(&GQ::zero(), e)
    }

    #[test]
    fn determinant_examples() {
        assert!(MeroMatrix::diagonal(&[zpow(1), zpow(-1)])
            .det()
            .unwrap()
            .is_one());
        let m =
            MeroMatrix::from_rows(vec![vec![zpow(1), RF::one()], vec![zpow(2), zpow(1)]]).unwrap();
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn inverse_example() {
        let m = MeroMatrix::from_rows(vec![vec![RF::zero(), RF::one()], vec![zpow(1), RF::zero()]])
            .unwrap();
        let inv = m.inverse().unwrap();
        let expect = MeroMatrix::from_rows(vec![
            vec![RF::zero(), zpow(-1)],
            vec![RF::one(), RF::zero()],
        ])
        .unwrap();
        assert_eq!(inv, expect);
        assert!(m.mul(&inv).unwrap().is_identity());
        let sing =
            MeroMatrix::from_rows(vec![vec![zpow(1), RF::one()], vec![zpow(2), zpow(1)]]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn bareiss_matches_cofactor_on_3x3() {
        let e = |c: &[i64]| RF::from_poly(Poly::from_ints(c));
        let m = MeroMatrix::from_rows(vec![
            vec![RF::zero(), e(&[1, 1]), e(&[2])],
            vec![e(&[0, 1]), RF::zero(), e(&[1])],
            vec![e(&[3]), e(&[0, 0, 1]), RF::zero()],
        ])
        .unwrap();
        let g = |i: usize, j: usize| m.get(i, j).clone();
        let cof = &(&(&g(0, 0) * &(&(&g(1, 1) * &g(2, 2)) - &(&g(1, 2) * &g(2, 1))))
            - &(&g(0, 1) * &(&(&g(1, 0) * &g(2, 2)) - &(&g(1, 2) * &g(2, 0)))))
            + &(&g(0, 2) * &(&(&g(1, 0) * &g(2, 1)) - &(&g(1, 1) * &g(2, 0))));
        assert_eq!(m.det().unwrap(), cof);
    }
}
