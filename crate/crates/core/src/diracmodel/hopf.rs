//! Forms on `B^4` lifted through the Hopf map `(w1, w2) -> (|w1|^2 - |w2|^2, 2 w1 w2)`.
//!
//! Real coordinates `u1..u4` with `w1 = u1 + i u2`, `w2 = u3 + i u4`. One-forms are complex
//! coefficient vectors on `du1..du4`; two-forms are antisymmetric `4 x 4` arrays. The inner
//! product is `<F, G> = sum_{a<b} F_ab conj(G_ab)`, so `|du1 ^ du2 + du3 ^ du4|^2 = 2`.
//! The formal lift of `ds` is `xi = 2(u2 du1 - u1 du2 - u4 du3 + u3 du4)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

type C = Complex64;
pub type OneForm = [C; 4];

const I: C = C::new(0.0, 1.0);

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoForm(pub [[C; 4]; 4]);

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm([[C::new(0.0, 0.0); 4]; 4])
    }

    pub fn wedge(a: &OneForm, b: &OneForm) -> Self {
        let mut m = [[C::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = a[i] * b[j] - a[j] * b[i];
            }
        }
        TwoForm(m)
    }

    /// `du_a ^ du_b`.
    pub fn basis(a: usize, b: usize) -> Self {
        let mut e = [[C::new(0.0, 0.0); 4]; 4];
        e[a][b] = c(1.0);
        e[b][a] = c(-1.0);
        TwoForm(e)
    }

    pub fn inner(&self, other: &Self) -> C {
        let mut s = C::new(0.0, 0.0);
        for i in 0..4 {
            for j in i + 1..4 {
                s += self.0[i][j] * other.0[i][j].conj();
            }
        }
        s
    }

    pub fn scale(&self, s: C) -> Self {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|x| *x *= s);
        TwoForm(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0;
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += other.0[i][j];
            }
        }
        TwoForm(m)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c(-1.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}

fn lin(terms: &[(C, &OneForm)]) -> OneForm {
    let mut out = [C::new(0.0, 0.0); 4];
    for (s, v) in terms {
        for i in 0..4 {
            out[i] += s * v[i];
        }
    }
    out
}

fn combo(terms: &[(C, &TwoForm)]) -> TwoForm {
    terms
        .iter()
        .fold(TwoForm::zero(), |acc, (s, f)| acc.add(&f.scale(*s)))
}

fn diff1(a: &OneForm, b: &OneForm) -> f64 {
    (0..4).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
}

const DW1: OneForm = [
    C::new(1.0, 0.0),
    C::new(0.0, 1.0),
    C::new(0.0, 0.0),
    C::new(0.0, 0.0),
];
const DW1B: OneForm = [
    C::new(1.0, 0.0),
    C::new(0.0, -1.0),
    C::new(0.0, 0.0),
    C::new(0.0, 0.0),
];
const DW2: OneForm = [
    C::new(0.0, 0.0),
    C::new(0.0, 0.0),
    C::new(1.0, 0.0),
    C::new(0.0, 1.0),
];
const DW2B: OneForm = [
    C::new(0.0, 0.0),
    C::new(0.0, 0.0),
    C::new(1.0, 0.0),
    C::new(0.0, -1.0),
];

/// `omega = du1 ^ du2 + du3 ^ du4`.
pub fn omega() -> TwoForm {
    TwoForm::basis(0, 1).add(&TwoForm::basis(2, 3))
}

/// `d xi = -4 du1 ^ du2 + 4 du3 ^ du4`.
pub fn d_xi() -> TwoForm {
    TwoForm::basis(2, 3)
        .sub(&TwoForm::basis(0, 1))
        .scale(c(4.0))
}

/// Lifted forms at one point of `B^4 \ {0}`.
#[derive(Clone, Debug)]
pub struct HopfLiftFrame {
    pub w1: C,
    pub w2: C,
    pub alpha: f64,
    /// `R^2 = |w1|^2 + |w2|^2`.
    pub r2: f64,
    pub xi: [f64; 4],
    /// Lifts of `dz, dz-bar, dt - i ds, dt + i ds` from the Jacobian of the Hopf map.
    pub dz: OneForm,
    pub dzb: OneForm,
    pub dt_minus: OneForm,
    pub dt_plus: OneForm,
    pub omega_tilde: TwoForm,
    pub eps: [TwoForm; 3],
    pub q: TwoForm,
}

impl HopfLiftFrame {
    /// `alpha = 1 + |z|^2 f(z)` with `z = 2 w1 w2`.
    pub fn new(w1: C, w2: C, f: &(impl Fn(C) -> f64 + ?Sized)) -> Result<Self> {
        let r2 = w1.norm_sqr() + w2.norm_sqr();
        if r2 == 0.0 {
            return Err(Error::Refused("lift evaluated at the origin".into()));
        }
        let z = 2.0 * w1 * w2;
        let alpha = 1.0 + z.norm_sqr() * f(z);
        if !(alpha > 0.0) {
            return Err(Error::Invalid(format!(
                "metric profile alpha = {alpha} is not positive"
            )));
        }
        Ok(Self::with_alpha(w1, w2, alpha))
    }

    pub fn with_alpha(w1: C, w2: C, alpha: f64) -> Self {
        let [u1, u2, u3, u4] = [w1.re, w1.im, w2.re, w2.im];
        let r2 = w1.norm_sqr() + w2.norm_sqr();
        let dt = [2.0 * u1, 2.0 * u2, -2.0 * u3, -2.0 * u4];
        let dx = [2.0 * u3, -2.0 * u4, 2.0 * u1, -2.0 * u2];
        let dy = [2.0 * u4, 2.0 * u3, 2.0 * u2, 2.0 * u1];
        let xi = [2.0 * u2, -2.0 * u1, -2.0 * u4, 2.0 * u3];
        let cv = |v: [f64; 4]| v.map(c);
        let (dt_c, dx_c, dy_c, xi_c) = (cv(dt), cv(dx), cv(dy), cv(xi));
        let dz = lin(&[(c(1.0), &dx_c), (I, &dy_c)]);
        let dzb = lin(&[(c(1.0), &dx_c), (-I, &dy_c)]);
        let dt_minus = lin(&[(c(1.0), &dt_c), (-I, &xi_c)]);
        let dt_plus = lin(&[(c(1.0), &dt_c), (I, &xi_c)]);
        let lift_omega = TwoForm::wedge(&dz, &dzb)
            .scale(I * alpha / 2.0)
            .sub(&TwoForm::wedge(&dt_c, &xi_c));
        let omega_tilde = lift_omega.scale(c(1.0 / (4.0 * r2)));
        let eps = [
            TwoForm::wedge(&dz, &dzb)
                .sub(&TwoForm::wedge(&dt_minus, &dt_plus).scale(c(alpha)))
                .scale(c(0.25)),
            TwoForm::wedge(&dz, &dt_plus).scale(c(0.25)),
            TwoForm::wedge(&dzb, &dt_minus).scale(c(0.25)),
        ];
        let (a, b, cc, d) = Self::w_basis();
        let q = combo(&[
            (c(w1.norm_sqr()), &b),
            (c(w2.norm_sqr()), &a),
            (w2 * w1.conj(), &cc),
            (w1 * w2.conj(), &d),
        ])
        .scale(I / 2.0);
        Self {
            w1,
            w2,
            alpha,
            r2,
            xi,
            dz,
            dzb,
            dt_minus,
            dt_plus,
            omega_tilde,
            eps,
            q,
        }
    }

    /// `dw1 ^ dw1-bar, dw2 ^ dw2-bar, dw1 ^ dw2-bar, dw2 ^ dw1-bar`.
    pub fn w_basis() -> (TwoForm, TwoForm, TwoForm, TwoForm) {
        (
            TwoForm::wedge(&DW1, &DW1B),
            TwoForm::wedge(&DW2, &DW2B),
            TwoForm::wedge(&DW1, &DW2B),
            TwoForm::wedge(&DW2, &DW1B),
        )
    }

    /// Max deviation of the Jacobian lifts from their expressions in `dw, dw-bar`.
    pub fn lift_residual(&self) -> f64 {
        let (w1, w2) = (self.w1, self.w2);
        let (w1b, w2b) = (w1.conj(), w2.conj());
        let two = c(2.0);
        [
            diff1(&self.dz, &lin(&[(two * w1, &DW2), (two * w2, &DW1)])),
            diff1(&self.dzb, &lin(&[(two * w1b, &DW2B), (two * w2b, &DW1B)])),
            diff1(
                &self.dt_minus,
                &lin(&[(two * w1b, &DW1), (-two * w2b, &DW2)]),
            ),
            diff1(
                &self.dt_plus,
                &lin(&[(two * w1, &DW1B), (-two * w2, &DW2B)]),
            ),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Max deviation of the lifted Kahler form and the `eps_i` from their expansions in `w`.
    pub fn expansion_residual(&self) -> f64 {
        let (w1, w2, al) = (self.w1, self.w2, self.alpha);
        let (n1, n2) = (w1.norm_sqr(), w2.norm_sqr());
        let (a, b, cc, d) = Self::w_basis();
        let a_minus_b = a.sub(&b);
        let lift_omega = combo(&[
            (c(al * n2 + n1), &a),
            (c(al * n1 + n2), &b),
            ((al - 1.0) * w2 * w1.conj(), &cc),
            ((al - 1.0) * w1 * w2.conj(), &d),
        ])
        .scale(2.0 * I);
        let e1 = combo(&[
            (c(n2 - n1), &a_minus_b),
            (c((1.0 - al) * n1), &a),
            (c((1.0 - al) * n2), &b),
            ((1.0 + al) * w2 * w1.conj(), &cc),
            ((1.0 + al) * w1 * w2.conj(), &d),
        ]);
        let e2 = combo(&[(w1 * w2, &a_minus_b), (-w2 * w2, &cc), (w1 * w1, &d)]);
        let e3 = combo(&[
            (-(w1 * w2).conj(), &a_minus_b),
            (-(w1 * w1).conj(), &cc),
            ((w2 * w2).conj(), &d),
        ]);
        [
            self.omega_tilde
                .scale(c(4.0 * self.r2))
                .sub(&lift_omega)
                .max_abs(),
            self.eps[0].sub(&e1).max_abs(),
            self.eps[1].sub(&e2).max_abs(),
            self.eps[2].sub(&e3).max_abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// `|Omega~ - (omega + (alpha - 1) Q / R^2)|`.
    pub fn decomposition_residual(&self) -> f64 {
        let rhs = omega().add(&self.q.scale(c((self.alpha - 1.0) / self.r2)));
        self.omega_tilde.sub(&rhs).max_abs()
    }

    /// Max `|<b_i, b_j>|` over distinct members of `{Omega~, eps_1, eps_2, eps_3}`.
    pub fn orthogonality_residual(&self) -> f64 {
        let basis = [self.omega_tilde, self.eps[0], self.eps[1], self.eps[2]];
        let mut m: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                m = m.max(basis[i].inner(&basis[j]).norm());
            }
        }
        m
    }

    /// `| |Omega~|^2 - (alpha^2 + 1) |`.
    pub fn norm_residual(&self) -> f64 {
        (self.omega_tilde.inner(&self.omega_tilde) - c(self.alpha * self.alpha + 1.0)).norm()
    }

    pub fn projection_gram(&self, f: &TwoForm) -> TwoForm {
        let o = &self.omega_tilde;
        o.scale(f.inner(o) / o.inner(o))
    }

    /// Projection onto `Omega~` written through `omega` and `Q`.
    pub fn projection_closed(&self, f: &TwoForm) -> TwoForm {
        let (al, r2) = (self.alpha, self.r2);
        let w = omega();
        let fw = f.inner(&w);
        let fq = f.inner(&self.q);
        let inner = combo(&[
            (fq / r2, &w),
            (fw / r2, &self.q),
            ((al - 1.0) * fq / (r2 * r2), &self.q),
            (-(al + 1.0) / 2.0 * fw, &w),
        ]);
        w.scale(fw / 2.0)
            .add(&inner.scale(c((al - 1.0) / (al * al + 1.0))))
    }

    /// Projection coefficient `Lambda(d xi) = <d xi, Omega~> / |Omega~|^2`.
    pub fn lambda_dxi(&self) -> C {
        d_xi().inner(&self.omega_tilde) / self.omega_tilde.inner(&self.omega_tilde)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HopfReport {
    pub points: usize,
    pub lift: f64,
    pub expansions: f64,
    pub decomposition: f64,
    pub orthogonality: f64,
    pub norm: f64,
    /// Closed form versus Gram projection over a spanning set of `(1,1)`-forms.
    pub projection: f64,
    /// `|P(Omega~) - Omega~|`.
    pub idempotence: f64,
}

impl HopfReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.lift,
            self.expansions,
            self.decomposition,
            self.orthogonality,
            self.norm,
            self.projection,
            self.idempotence,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn merge(self, o: Self) -> Self {
        Self {
            points: self.points + o.points,
            lift: self.lift.max(o.lift),
            expansions: self.expansions.max(o.expansions),
            decomposition: self.decomposition.max(o.decomposition),
            orthogonality: self.orthogonality.max(o.orthogonality),
            norm: self.norm.max(o.norm),
            projection: self.projection.max(o.projection),
            idempotence: self.idempotence.max(o.idempotence),
        }
    }
}

fn probe_forms() -> Vec<TwoForm> {
    let (a, b, cc, d) = HopfLiftFrame::w_basis();
    let mix = combo(&[
        (C::new(0.3, -1.1), &a),
        (C::new(-0.7, 0.2), &b),
        (C::new(1.3, 0.5), &cc),
        (C::new(0.1, 0.9), &d),
    ]);
    vec![a, b, cc, d, mix, d_xi(), omega()]
}

/// Runs every identity check at each `(w1, w2)` with `alpha = 1 + |z|^2 f(z)`.
pub fn hopf_identity_suite(points: &[(C, C)], f: &(dyn Fn(C) -> f64 + Sync)) -> Result<HopfReport> {
    let probes = probe_forms();
    points
        .par_iter()
        .map(|(w1, w2)| {
            let fr = HopfLiftFrame::new(*w1, *w2, f)?;
            let projection = probes
                .iter()
                .map(|p| {
                    fr.projection_closed(p)
                        .sub(&fr.projection_gram(p))
                        .max_abs()
                })
                .fold(0.0, f64::max);
            Ok(HopfReport {
                points: 1,
                lift: fr.lift_residual(),
                expansions: fr.expansion_residual(),
                decomposition: fr.decomposition_residual(),
                orthogonality: fr.orthogonality_residual(),
                norm: fr.norm_residual(),
                projection,
                idempotence: fr
                    .projection_closed(&fr.omega_tilde)
                    .sub(&fr.omega_tilde)
                    .max_abs(),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(HopfReport::default(), HopfReport::merge))
}

/// `(R, |Lambda(d xi)| / R^4)` along the ray through `(w1, w2)` scaled by each factor.
pub fn lambda_dxi_profile(
    w1: C,
    w2: C,
    f: &dyn Fn(C) -> f64,
    scales: &[f64],
) -> Result<Vec<(f64, f64)>> {
    scales
        .iter()
        .map(|s| {
            let fr = HopfLiftFrame::new(w1 * s, w2 * s, f)?;
            Ok((fr.r2.sqrt(), fr.lambda_dxi().norm() / (fr.r2 * fr.r2)))
        })
        .collect()
}
