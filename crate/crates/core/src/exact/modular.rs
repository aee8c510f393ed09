//! Modular gcd in `Q(i)[z]`.
//!
//! Each prime `p = 1 mod 4` splits in `Z[i]`; sending `i` to either square root `s` of `-1`
//! reduces modulo one of the two factors. For monic inputs with `p`-integral coefficients the
//! reduced gcd has degree at least that of the true gcd, with equality for all but finitely
//! many primes. Images from both roots give `a + b s` and `a - b s`, hence `a, b mod p`; these
//! are combined by CRT, lifted by rational reconstruction and checked by exact division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Poly, GQ};

const MAX_PRIMES: usize = 400;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic for `n < 3.2e9`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2, 3, 5, 7] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `p = 1 mod 4` below `2^31`, each with a square root of `-1`.
fn primes() -> impl Iterator<Item = (u64, u64)> {
    (0..)
        .map(|k| (1u64 << 31) - 3 - 4 * k)
        .filter(|p| is_prime(*p))
        .map(|p| {
            let s = (2..)
                .map(|c| pow_mod(c, (p - 1) / 4, p))
                .find(|s| mul_mod(*s, *s, p) == p - 1)
                .expect("non-residue exists");
            (p, s)
        })
}

fn reduce_int(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

fn reduce_rat(r: &BigRational, p: u64) -> Option<u64> {
    let d = reduce_int(r.denom(), p);
    (d != 0).then(|| mul_mod(reduce_int(r.numer(), p), inv_mod(d, p), p))
}

/// Coefficients of a monic polynomial reduced with `i -> s`; `None` if a denominator vanishes.
fn reduce_poly(f: &Poly, p: u64, s: u64) -> Option<Vec<u64>> {
    f.coeffs()
        .iter()
        .map(|c| Some((reduce_rat(&c.re, p)? + mul_mod(reduce_rat(&c.im, p)?, s, p)) % p))
        .collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let inv = inv_mod(*b.last().expect("nonzero divisor"), p);
    let db = b.len() - 1;
    while a.len() > db {
        let c = mul_mod(*a.last().expect("nonempty"), inv, p);
        let shift = a.len() - 1 - db;
        if c != 0 {
            for (j, bc) in b.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p - mul_mod(c, *bc, p)) % p;
            }
        }
        a.pop();
        trim(a);
    }
}

/// Monic gcd of two nonzero polynomials over `F_p`.
fn gcd_mod(mut x: Vec<u64>, mut y: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        rem_mod(&mut x, &y, p);
        std::mem::swap(&mut x, &mut y);
    }
    let inv = inv_mod(*x.last().expect("nonzero gcd"), p);
    x.iter().map(|c| mul_mod(*c, inv, p)).collect()
}

/// `n / d` with `|n|, d <= sqrt(m / 2)` congruent to `u mod m`.
fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Monic gcd of monic polynomials of positive degree, or `None` if the prime budget runs out.
pub(crate) fn modular_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut best: Option<usize> = None;
    // Residues of re and im parts for each coefficient, with the running modulus.
    let mut re: Vec<BigInt> = Vec::new();
    let mut im: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    for (p, s) in primes().take(MAX_PRIMES) {
        let (Some(ap), Some(bp), Some(am), Some(bm)) = (
            reduce_poly(a, p, s),
            reduce_poly(b, p, s),
            reduce_poly(a, p, p - s),
            reduce_poly(b, p, p - s),
        ) else {
            continue;
        };
        let gp = gcd_mod(ap, bp, p);
        let gm = gcd_mod(am, bm, p);
        if gp.len() != gm.len() {
            continue;
        }
        let d = gp.len() - 1;
        if d == 0 {
            return Some(Poly::one());
        }
        match best {
            Some(b) if d > b => continue,
            Some(b) if d == b => {}
            _ => {
                best = Some(d);
                re = vec![BigInt::zero(); d + 1];
                im = vec![BigInt::zero(); d + 1];
                modulus = BigInt::one();
            }
        }
        let inv2 = inv_mod(2, p);
        let inv2s = inv_mod(mul_mod(2, s, p), p);
        let pb = BigInt::from(p);
        let m_inv = BigInt::from(inv_mod(reduce_int(&modulus, p), p));
        for k in 0..=d {
            let x = mul_mod((gp[k] + gm[k]) % p, inv2, p);
            let y = mul_mod((gp[k] + p - gm[k]) % p, inv2s, p);
            for (acc, r) in [(&mut re[k], x), (&mut im[k], y)] {
                // acc + modulus * ((r - acc) / modulus mod p)
                let delta = (BigInt::from(r) - &*acc).mod_floor(&pb) * &m_inv % &pb;
                *acc += &modulus * delta;
            }
        }
        modulus *= &pb;
        let lifted: Option<Vec<GQ>> = (0..=d)
            .map(|k| {
                Some(GQ::new(
                    rational_reconstruct(&re[k], &modulus)?,
                    rational_reconstruct(&im[k], &modulus)?,
                ))
            })
            .collect();
        if let Some(cs) = lifted {
            let g = Poly::new(cs);
            if g.degree() == d as i64
                && a.div_rem(&g).map(|(_, r)| r.is_zero()).unwrap_or(false)
                && b.div_rem(&g).map(|(_, r)| r.is_zero()).unwrap_or(false)
            {
                return Some(g);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;

    #[test]
    fn prime_stream() {
        let ps: Vec<(u64, u64)> = primes().take(5).collect();
        for (p, s) in ps {
            assert_eq!(p % 4, 1);
            assert!(p < 1 << 31);
            assert_eq!(mul_mod(s, s, p), p - 1);
        }
        assert!(is_prime(998_244_353) && !is_prime(998_244_351));
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let q = BigRational::new(BigInt::from(-37), BigInt::from(91));
        let u = (q.numer() * q.denom().modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(rational_reconstruct(&u, &m), Some(q));
    }

    #[test]
    fn gcds() {
        let g = parse_poly("z^2 - 2/3 i z + 5/7").unwrap();
        let a = &g * &parse_poly("z^3 + 11/13 z - i").unwrap();
        let b = &g * &parse_poly("z - 17/3 + 2 i").unwrap();
        assert_eq!(modular_gcd(&a.monic(), &b.monic()).unwrap(), g);
        let c = parse_poly("z^2 + 1").unwrap();
        assert_eq!(
            modular_gcd(&c, &parse_poly("z - 3").unwrap()).unwrap(),
            Poly::one()
        );
        assert_eq!(
            modular_gcd(&c, &parse_poly("z - i").unwrap()).unwrap(),
            parse_poly("z - i").unwrap()
        );
    }
}
