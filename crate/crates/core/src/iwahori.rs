//! Local singularity type of a meromorphic matrix germ and its factorization
//! `M = F diag(w^k_1, ..., w^k_n) G` with `F`, `G` invertible holomorphic germs.
//!
//! `w` is the local parameter at the center (`z - z0`, or `1/z` at infinity).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{series_expand, LaurentSeries, MeroMatrix, Point, GQ};

/// Integer weights sorted non-increasing.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeightVector {
    k: Vec<i64>,
    trk: i64,
}

impl WeightVector {
    /// Errors unless `k` is non-increasing.
    pub fn new(k: Vec<i64>) -> Result<Self> {
        if k.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::OrderingViolated);
        }
        let trk = k.iter().sum();
        Ok(Self { k, trk })
    }

    pub fn sorted(mut k: Vec<i64>) -> Self {
        k.sort_unstable_by(|a, b| b.cmp(a));
        let trk = k.iter().sum();
        Self { k, trk }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            k: vec![0; n],
            trk: 0,
        }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.k
    }

    pub fn rank(&self) -> usize {
        self.k.len()
    }

    pub fn trk(&self) -> i64 {
        self.trk
    }

    pub fn is_zero(&self) -> bool {
        self.k.iter().all(|&x| x == 0)
    }

    /// Weights of the inverse germ.
    pub fn inverse(&self) -> Self {
        Self::sorted(self.k.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.k.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Square matrix of truncated Laurent series at a point, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrixGerm {
    center: Point,
    n: usize,
    entries: Vec<LaurentSeries>,
    order: i64,
}

/// Smallest safe truncation order for an `n x n` germ: `|v(det)| + n max|v(entry)| + 2`.
pub fn required_order(n: usize, det_valuation: i64, max_abs_entry_valuation: i64) -> i64 {
    det_valuation.abs() + n as i64 * max_abs_entry_valuation + 2
}

impl LaurentMatrixGerm {
    /// Entries are truncated to `O(w^order)`; an entry known to less precision is rejected.
    pub fn new(center: Point, n: usize, entries: Vec<LaurentSeries>, order: i64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Shape(format!(
                "{} entries for rank {n}",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.prec().is_some_and(|m| m < order)) {
            return Err(Error::InsufficientPrecision(format!(
                "entry known below order {order}"
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| {
                if e.is_exact_zero() {
                    e
                } else {
                    e.truncate(order)
                }
            })
            .collect();
        Ok(Self {
            center,
            n,
            entries,
            order,
        })
    }

    /// Expand a rational-function matrix at `center`, keeping terms below `w^order`.
    /// Zero entries stay exactly zero.
    pub fn from_matrix(m: &MeroMatrix, center: &Point, order: i64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape("germ must be square".into()));
        }
        let n = m.rows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let f = m.get(i, j);
                entries.push(if f.is_zero() {
                    LaurentSeries::zero_exact()
                } else {
                    series_expand(f, center, order - 1)?
                });
            }
        }
        Self::new(center.clone(), n, entries, order)
    }

    /// Expand with the order given by [`required_order`], computed from exact valuations.
    pub fn from_matrix_auto(m: &MeroMatrix, center: &Point) -> Result<Self> {
        let det = m.det()?;
        if det.is_zero() {
            return Err(Error::SingularGerm);
        }
        let dv = det.valuation_at(center)?;
        let mut maxv = 0;
        for f in m.entries() {
            if !f.is_zero() {
                maxv = maxv.max(f.valuation_at(center)?.abs());
            }
        }
        Self::from_matrix(m, center, required_order(m.rows(), dv, maxv))
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    /// Smallest determined entry valuation.
    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(|e| e.valuation()).min()
    }
}

/// `F diag(w^k) G` with unit germs `F`, `G`, reproducing the input through `order`.
#[derive(Clone, Debug)]
pub struct IwahoriFactorization {
    pub f: Vec<LaurentSeries>,
    pub weights: WeightVector,
    pub g: Vec<LaurentSeries>,
    pub order: i64,
}

fn mat_mul(a: &[LaurentSeries], b: &[LaurentSeries], n: usize) -> Vec<LaurentSeries> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = LaurentSeries::zero_exact();
            for k in 0..n {
                let x = &a[i * n + k];
                let y = &b[k * n + j];
                if x.is_exact_zero() || y.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&x.mul(y));
            }
            out.push(acc);
        }
    }
    out
}

/// Determinant of a series matrix by cofactor expansion (fine for desk-scale ranks).
pub fn series_det(a: &[LaurentSeries], n: usize) -> LaurentSeries {
    let mut memo = HashMap::new();
    let all = (1u32 << n) - 1;
    minor(a, n, all, all, &mut memo)
}

fn minor(
    a: &[LaurentSeries],
    n: usize,
    rows: u32,
    cols: u32,
    memo: &mut HashMap<(u32, u32), LaurentSeries>,
) -> LaurentSeries {
    if rows == 0 {
        return LaurentSeries::one_exact();
    }
    if let Some(v) = memo.get(&(rows, cols)) {
        return v.clone();
    }
    let r = rows.trailing_zeros() as usize;
    let rest = rows & !(1 << r);
    let mut acc = LaurentSeries::zero_exact();
    let mut sign = false;
    for c in 0..n {
        if cols & (1 << c) == 0 {
            continue;
        }
        let e = &a[r * n + c];
        if !e.is_exact_zero() {
            let sub = minor(a, n, rest, cols & !(1 << c), memo);
            let t = e.mul(&sub);
            acc = if sign { acc.sub(&t) } else { acc.add(&t) };
        }
        sign = !sign;
    }
    memo.insert((rows, cols), acc.clone());
    acc
}

fn subsets(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

/// Weights from valuations of gcds of minors: with `d_k` the least valuation of a
/// `k x k` minor, the ascending exponents are `d_k - d_(k-1)`.
pub fn local_type(m: &LaurentMatrixGerm) -> Result<WeightVector> {
    let n = m.n;
    let mut memo = HashMap::new();
    let all = (1u32 << n) - 1;
    let det = minor(&m.entries, n, all, all, &mut memo);
    if det.valuation().is_none() {
        return Err(Error::SingularGerm);
    }
    let mut d = vec![0i64; n + 1];
    for k in 1..=n {
        let mut best: Option<i64> = None;
        let mut undetermined_bound = i64::MAX;
        let sets = subsets(n, k);
        for &rs in &sets {
            for &cs in &sets {
                let s = minor(&m.entries, n, rs, cs, &mut memo);
                match s.valuation() {
                    Some(v) => best = Some(best.map_or(v, |b| b.min(v))),
                    None if s.is_exact_zero() => {}
                    None => undetermined_bound = undetermined_bound.min(s.valuation_lower_bound()),
                }
            }
        }
        let b = best.ok_or_else(|| {
            Error::InsufficientPrecision(format!("no {k}x{k} minor has determined valuation"))
        })?;
        if undetermined_bound <= b {
            return Err(Error::InsufficientPrecision(format!(
                "a {k}x{k} minor vanishes through O(w^{undetermined_bound}), not beyond the candidate valuation {b}"
            )));
        }
        d[k] = b;
    }
    let ascending: Vec<i64> = (1..=n).map(|k| d[k] - d[k - 1]).collect();
    Ok(WeightVector::sorted(ascending))
}

fn identity(n: usize) -> Vec<LaurentSeries> {
    (0..n * n)
        .map(|i| {
            if i / n == i % n {
                LaurentSeries::one_exact()
            } else {
                LaurentSeries::zero_exact()
            }
        })
        .collect()
}

/// Pivoted row/column reduction over the series ring.
///
/// Each step moves an entry of least valuation (ties: lowest row, then lowest
/// column) to the diagonal and clears its row and column. The reduction refuses
/// when an entry that could undercut the pivot is not determined.
pub fn factorize(m: &LaurentMatrixGerm) -> Result<IwahoriFactorization> {
    let n = m.n;
    let weights_oracle = local_type(m)?;
    let mut a = m.entries.clone();
    let mut f = identity(n);
    let mut g = identity(n);
    // Inverses of exact series are taken to this relative order.
    let rel = m.order - m.min_valuation().unwrap_or(0) + 2;
    for s in 0..n {
        let mut piv: Option<(usize, usize, i64)> = None;
        let mut undetermined = i64::MAX;
        for i in s..n {
            for j in s..n {
                let e = &a[i * n + j];
                match e.valuation() {
                    Some(v) => {
                        if piv.is_none_or(|(_, _, pv)| v < pv) {
                            piv = Some((i, j, v));
                        }
                    }
                    None if e.is_exact_zero() => {}
                    None => undetermined = undetermined.min(e.valuation_lower_bound()),
                }
            }
        }
        let (pi, pj, pv) = piv.ok_or(Error::SingularGerm)?;
        if undetermined <= pv {
            return Err(Error::InsufficientPrecision(format!(
                "pivot search at step {s} not determined (entry known only to O(w^{undetermined}))"
            )));
        }
        if pi != s {
            for c in 0..n {
                a.swap(s * n + c, pi * n + c);
            }
            for r in 0..n {
                f.swap(r * n + s, r * n + pi);
            }
        }
        if pj != s {
            for r in 0..n {
                a.swap(r * n + s, r * n + pj);
            }
            for c in 0..n {
                g.swap(s * n + c, pj * n + c);
            }
        }
        let pinv = a[s * n + s].inv(rel)?;
        for i in s + 1..n {
            let e = a[i * n + s].clone();
            if e.is_exact_zero() {
                continue;
            }
            let c = e.mul(&pinv);
            for col in s..n {
                let t = c.mul(&a[s * n + col]);
                a[i * n + col] = a[i * n + col].sub(&t);
            }
            a[i * n + s] = LaurentSeries::zero_exact();
            for r in 0..n {
                let t = c.mul(&f[r * n + i]);
                f[r * n + s] = f[r * n + s].add(&t);
            }
        }
        for j in s + 1..n {
            let e = a[s * n + j].clone();
            if e.is_exact_zero() {
                continue;
            }
            let c = e.mul(&pinv);
            a[s * n + j] = LaurentSeries::zero_exact();
            for col in 0..n {
                let t = c.mul(&g[j * n + col]);
                g[s * n + col] = g[s * n + col].add(&t);
            }
        }
    }
    // a is now diagonal with entries w^e u; move the units into G.
    let mut exps = Vec::with_capacity(n);
    for s in 0..n {
        let d = &a[s * n + s];
        let e = d.valuation().ok_or(Error::SingularGerm)?;
        exps.push(e);
        let u = d.shift(-e);
        for col in 0..n {
            g[s * n + col] = u.mul(&g[s * n + col]);
        }
    }
    // Ascending to non-increasing: reverse the diagonal, F's columns and G's rows.
    exps.reverse();
    let f: Vec<LaurentSeries> = (0..n * n)
        .map(|idx| f[(idx / n) * n + (n - 1 - idx % n)].clone())
        .collect();
    let g: Vec<LaurentSeries> = (0..n * n)
        .map(|idx| g[(n - 1 - idx / n) * n + idx % n].clone())
        .collect();
    let weights = WeightVector::new(exps).map_err(|_| {
        Error::InsufficientPrecision("reduction produced unsorted exponents".into())
    })?;
    if weights != weights_oracle {
        return Err(Error::InsufficientPrecision(format!(
            "reduction weights {weights} disagree with minor weights {weights_oracle}"
        )));
    }
    let fac = IwahoriFactorization {
        f,
        weights,
        g,
        order: 0,
    };
    let order = verify(m, &fac)?;
    Ok(IwahoriFactorization { order, ..fac })
}

/// Multiply back and check the residual; returns the order through which the
/// product is determined.
pub fn verify(m: &LaurentMatrixGerm, fac: &IwahoriFactorization) -> Result<i64> {
    let n = m.n;
    let mut d = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            d.push(if i == j {
                LaurentSeries::monomial(GQ::from_int(1), fac.weights.as_slice()[i])
            } else {
                LaurentSeries::zero_exact()
            });
        }
    }
    let prod = mat_mul(&mat_mul(&fac.f, &d, n), &fac.g, n);
    let mut order = i64::MAX;
    for (p, e) in prod.iter().zip(m.entries.iter()) {
        let r = p.sub(e);
        if !r.is_zero_through_prec() {
            return Err(Error::InsufficientPrecision(format!(
                "nonzero residual {r:?}"
            )));
        }
        order = order.min(r.prec().unwrap_or(i64::MAX));
    }
    for u in [&fac.f, &fac.g] {
        if series_det(u, n).valuation() != Some(0) {
            return Err(Error::InsufficientPrecision("factor is not a unit".into()));
        }
    }
    Ok(order.min(m.order))
}

/// Convenience: singularity type of a rational-function matrix at a point.
pub fn local_type_of_matrix(m: &MeroMatrix, p: &Point) -> Result<WeightVector> {
    local_type(&LaurentMatrixGerm::from_matrix_auto(m, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rf;

    fn mat(rows: &[&[&str]]) -> MeroMatrix {
        MeroMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rf(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn at0(m: &MeroMatrix) -> LaurentMatrixGerm {
        LaurentMatrixGerm::from_matrix_auto(m, &Point::int(0)).unwrap()
    }

    #[test]
    fn local_type_examples() {
        assert_eq!(
            local_type(&at0(&mat(&[&["z", "0"], &["0", "1/z"]])))
                .unwrap()
                .as_slice(),
            &[1, -1]
        );
        assert_eq!(
            local_type(&at0(&mat(&[&["0", "1"], &["z", "0"]])))
                .unwrap()
                .as_slice(),
            &[1, 0]
        );
        assert_eq!(
            local_type(&at0(&mat(&[&["z^2", "0"], &["0", "1"]])))
                .unwrap()
                .as_slice(),
            &[2, 0]
        );
    }

    #[test]
    fn factorize_examples() {
        let m = at0(&mat(&[&["z", "0"], &["0", "1/z"]]));
        let fac = factorize(&m).unwrap();
        assert_eq!(fac.weights.as_slice(), &[1, -1]);
        let m = at0(&mat(&[&["z", "1"], &["0", "z"]]));
        let fac = factorize(&m).unwrap();
        assert_eq!(fac.weights.as_slice(), &[2, 0]);
        assert!(fac.order >= m.order());
    }

    #[test]
    fn singular_and_imprecise_germs_are_refused() {
        let m = mat(&[&["z", "1"], &["z^2", "z"]]);
        assert_eq!(
            LaurentMatrixGerm::from_matrix_auto(&m, &Point::int(0)),
            Err(Error::SingularGerm)
        );
        // det = z^5 - z^6 is invisible below order 3.
        let m = mat(&[&["1", "1"], &["1", "1 + z^5"]]);
        let g = LaurentMatrixGerm::from_matrix(&m, &Point::int(0), 3).unwrap();
        assert_eq!(local_type(&g), Err(Error::SingularGerm));
        // det = -z^2/(1 - z) is invisible below order 3.
        let m = mat(&[&["1 + z", "1/(1-z)"], &["1", "1"]]);
        let g = LaurentMatrixGerm::from_matrix(&m, &Point::int(0), 2).unwrap();
        assert_eq!(local_type(&g), Err(Error::SingularGerm));
        let g = LaurentMatrixGerm::from_matrix(&m, &Point::int(0), 4).unwrap();
        assert_eq!(local_type(&g).unwrap().as_slice(), &[2, 0]);
    }

    #[test]
    fn germ_at_infinity() {
        // diag(z, 1/z) at infinity has weights (1, -1) in w = 1/z.
        let m = mat(&[&["z", "0"], &["0", "1/z"]]);
        let g = LaurentMatrixGerm::from_matrix_auto(&m, &Point::Infinity).unwrap();
        assert_eq!(local_type(&g).unwrap().as_slice(), &[1, -1]);
    }

    #[test]
    fn weight_vector_ordering() {
        assert_eq!(WeightVector::new(vec![0, 1]), Err(Error::OrderingViolated));
        assert_eq!(WeightVector::sorted(vec![-1, 3, 0]).as_slice(), &[3, 0, -1]);
        assert_eq!(
            WeightVector::sorted(vec![2, -1]).inverse().as_slice(),
            &[1, -2]
        );
    }
}
