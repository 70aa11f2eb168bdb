//! Normalized cubic forms and their focal values over prime fields.
//!
//! A normalized form is `(x + A₂ + A₃) dx + (y + B₂ + B₃) dy`. We look for
//! `F = (x² + y²)/2 + F₃ + F₄ + …` with `dF ∧ ω = 0` degree by degree.
//! With `D(F) = y F_x − x F_y` the degree `k` equation reads `D(F_k) = R_k`,
//! and in even degree `R_k = D(G) + η (x² + y²)^{k/2}`; the `η` are the
//! focal values.

use std::fmt;

use serde_json::{json, Value};

use crate::algebra::dual::Dual;
use crate::algebra::form::{Chart, Form1};
use crate::algebra::linalg::{gauss_jordan, rank};
use crate::algebra::poly::{Exponent, Poly};
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

/// Number of coefficients of a normalized cubic form.
pub const PARAMETER_COUNT: usize = 14;

/// `x^i y^j` for the seven nonlinear monomials, in parameter order.
pub const NONLINEAR_MONOMIALS: [(u32, u32); 7] = [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

fn exp(i: u32, j: u32) -> Exponent {
    smallvec::smallvec![i, j]
}

/// The fourteen coefficients `a_ij` of `dx` followed by `b_ij` of `dy`,
/// each in the order of [`NONLINEAR_MONOMIALS`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedForm<T> {
    params: Vec<T>,
}

impl<T: Scalar> NormalizedForm<T> {
    pub fn from_parameters(params: Vec<T>) -> Result<Self> {
        if params.len() != PARAMETER_COUNT {
            return Err(Error::Precondition(format!("{} parameters, expected {PARAMETER_COUNT}", params.len())));
        }
        Ok(NormalizedForm { params })
    }

    /// Reads the parameters of a form that is already normalized.
    pub fn from_form(w: &Form1<T>) -> Result<Self> {
        let mut params = Vec::with_capacity(PARAMETER_COUNT);
        for (coeff, linear) in [(&w.a, exp(1, 0)), (&w.b, exp(0, 1))] {
            for (e, c) in coeff.terms() {
                let d = e[0] + e[1];
                let allowed = (2..=3).contains(&d) || (d == 1 && *e == linear);
                if !allowed {
                    return Err(Error::Precondition(format!("term {c}·x^{}y^{} in a normalized form", e[0], e[1])));
                }
            }
            if coeff.coeff(&linear) != T::one() {
                return Err(Error::Precondition("linear part is not x dx + y dy".into()));
            }
            params.extend(NONLINEAR_MONOMIALS.iter().map(|&(i, j)| coeff.coeff(&exp(i, j))));
        }
        Ok(NormalizedForm { params })
    }

    pub fn parameters(&self) -> &[T] {
        &self.params
    }

    pub fn to_form(&self) -> Form1<T> {
        let half = |offset: usize, linear: Exponent| {
            let mut p = Poly::monomial(2, linear, T::one());
            for (k, &(i, j)) in NONLINEAR_MONOMIALS.iter().enumerate() {
                p.add_term(exp(i, j), self.params[offset + k].clone());
            }
            p
        };
        Form1::affine(half(0, exp(1, 0)), half(7, exp(0, 1)))
    }

    fn parts(&self) -> [Poly<T>; 4] {
        let part = |offset: usize, range: std::ops::Range<usize>| {
            Poly::from_terms(
                2,
                range.map(|k| {
                    let (i, j) = NONLINEAR_MONOMIALS[k];
                    (exp(i, j), self.params[offset + k].clone())
                }),
            )
        };
        [part(0, 0..3), part(0, 3..7), part(7, 0..3), part(7, 3..7)]
    }

    fn lift<S: Scalar>(&self, f: impl Fn(usize, &T) -> S) -> NormalizedForm<S> {
        NormalizedForm { params: self.params.iter().enumerate().map(|(k, c)| f(k, c)).collect() }
    }
}

impl<T: Scalar> fmt::Display for NormalizedForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

/// Translates a zero `a` of `ω` to the origin and brings the linear part to
/// `x dx + y dy` by a linear change of coordinates and a scalar.
pub fn normalize<T: Scalar>(w: &Form1<T>, a: &[T; 2]) -> Result<NormalizedForm<T>> {
    if w.chart != Chart::Affine {
        return Err(Error::Precondition("the form must be given on the affine chart".into()));
    }
    if w.degree() > 3 {
        return Err(Error::Precondition(format!("degree {} exceeds 3", w.degree())));
    }
    let p = w.a.translate(a);
    let q = w.b.translate(a);
    if !p.constant_term().is_zero() || !q.constant_term().is_zero() {
        return Err(Error::NotAZero(format!("({}, {})", a[0], a[1])));
    }
    let s = [[p.coeff(&exp(1, 0)), p.coeff(&exp(0, 1))], [q.coeff(&exp(1, 0)), q.coeff(&exp(0, 1))]];
    if s[0][1] != s[1][0] {
        return Err(Error::NoCenterCertificate("the linear part is not symmetric".into()));
    }
    let (m, c) = congruence_to_identity(&s)?;
    // (x, y) = M (x', y'); the coefficients transform by Mᵀ
    let subs: Vec<Poly<T>> =
        (0..2).map(|r| &Poly::var(2, 0).scale(&m[r][0]) + &Poly::var(2, 1).scale(&m[r][1])).collect();
    let (ps, qs) = (p.substitute(&subs), q.substitute(&subs));
    let c_inv = c.inverse().expect("nonzero pivot");
    let np = (&ps.scale(&m[0][0]) + &qs.scale(&m[1][0])).scale(&c_inv);
    let nq = (&ps.scale(&m[0][1]) + &qs.scale(&m[1][1])).scale(&c_inv);
    NormalizedForm::from_form(&Form1::affine(np, nq))
}

/// `M` and `c` with `Mᵀ S M = c·I`, by completing squares.
fn congruence_to_identity<T: Scalar>(s: &[[T; 2]; 2]) -> Result<([[T; 2]; 2], T)> {
    let det = s[0][0].clone() * s[1][1].clone() - s[0][1].clone() * s[0][1].clone();
    if det.is_zero() {
        return Err(Error::NoCenterCertificate("the linear part is degenerate".into()));
    }
    // a first change making the (1,1) entry nonzero
    let pre: [[T; 2]; 2] = if !s[0][0].is_zero() {
        [[T::one(), T::zero()], [T::zero(), T::one()]]
    } else if !s[1][1].is_zero() {
        [[T::zero(), T::one()], [T::one(), T::zero()]]
    } else {
        [[T::one(), T::zero()], [T::one(), T::one()]]
    };
    let t = congruent(s, &pre);
    // t = [[d1, e], [e, f]]: x ↦ x − (e/d1) y leaves diag(d1, det/d1)
    let d1 = t[0][0].clone();
    let shift = -(t[0][1].clone() / d1.clone());
    let d2 = det.clone() * pre_det_square(&pre) / d1.clone();
    // diag(d1, d2) becomes d1·I once y is scaled by √(d1/d2)
    let ratio = d1.clone() / d2;
    let root = ratio.sqrt().ok_or_else(|| Error::FieldOfDefinition(format!("√({ratio}) for the linear part")))?;
    let complete = [[T::one(), shift.clone() * root.clone()], [T::zero(), root]];
    Ok((mat_mul(&pre, &complete), d1))
}

fn pre_det_square<T: Scalar>(m: &[[T; 2]; 2]) -> T {
    let d = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    d.clone() * d
}

fn mat_mul<T: Scalar>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `Mᵀ S M`.
fn congruent<T: Scalar>(s: &[[T; 2]; 2], m: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let mt = [[m[0][0].clone(), m[1][0].clone()], [m[0][1].clone(), m[1][1].clone()]];
    mat_mul(&mat_mul(&mt, s), m)
}

/// How `D(F_k) = R_k` is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrommerPath {
    /// Diagonal in `u = x + iy`, `v = x − iy`; needs `√−1`.
    Eigenbasis,
    /// Linear solves in the monomial basis of `x, y`.
    Dense,
}

fn check_characteristic<T: Scalar>(n: usize) -> Result<()> {
    let p = T::characteristic();
    if p != 0 && p <= 2 * n as u64 + 2 {
        return Err(Error::Precondition(format!("{n} focal values need characteristic above {}, got {p}", 2 * n + 2)));
    }
    Ok(())
}

/// The first `n` focal values, by the eigenbasis when `√−1` exists.
pub fn focal_values<T: Scalar>(f: &NormalizedForm<T>, n: usize) -> Result<Vec<T>> {
    let path = if T::from_i64(-1).sqrt().is_some() { FrommerPath::Eigenbasis } else { FrommerPath::Dense };
    focal_values_by(f, n, path)
}

pub fn focal_values_by<T: Scalar>(f: &NormalizedForm<T>, n: usize, path: FrommerPath) -> Result<Vec<T>> {
    check_characteristic::<T>(n)?;
    match path {
        FrommerPath::Dense => Ok(dense_run(f, n)),
        FrommerPath::Eigenbasis => {
            let i = T::from_i64(-1)
                .sqrt()
                .ok_or_else(|| Error::Precondition("−1 is not a square; use the dense path".into()))?;
            Ok(eigen_run(f, n, &i))
        }
    }
}

/// `−(F_{k−1,x} B₂ − F_{k−1,y} A₂ + F_{k−2,x} B₃ − F_{k−2,y} A₃)` given
/// derivatives as closures.
fn obstruction<S: Scalar>(
    prev: &Poly<S>,
    prev2: &Poly<S>,
    parts: &[Poly<S>; 4],
    dx: impl Fn(&Poly<S>) -> Poly<S>,
    dy: impl Fn(&Poly<S>) -> Poly<S>,
) -> Poly<S> {
    let [a2, a3, b2, b3] = parts;
    let mut r = &dx(prev) * b2;
    r -= &(&dy(prev) * a2);
    r += &(&dx(prev2) * b3);
    r -= &(&dy(prev2) * a3);
    -r
}

fn eigen_run<S: Scalar>(f: &NormalizedForm<S>, n: usize, i: &S) -> Vec<S> {
    let two_inv = S::from_i64(2).inverse().expect("odd characteristic");
    let u = Poly::var(2, 0);
    let v = Poly::var(2, 1);
    // x = (u + v)/2, y = −i (u − v)/2
    let x = (&u + &v).scale(&two_inv);
    let y = (&u - &v).scale(&(-(i.clone() * two_inv.clone())));
    let parts = f.parts().map(|p| p.substitute(&[x.clone(), y.clone()]));
    let dx = |g: &Poly<S>| &g.derivative(0) + &g.derivative(1);
    let dy = |g: &Poly<S>| (&g.derivative(0) - &g.derivative(1)).scale(i);
    let mut prev2 = Poly::zero(2);
    let mut prev = Poly::monomial(2, exp(1, 1), two_inv);
    let mut values = Vec::with_capacity(n);
    for k in 3..=(2 * n as u32 + 2) {
        let r = obstruction(&prev, &prev2, &parts, dx, dy);
        let mut g = Poly::zero(2);
        for (e, c) in r.terms() {
            if e[0] == e[1] {
                values.push(c.clone());
            } else {
                let w = i.clone() * S::from_i64(e[1] as i64 - e[0] as i64);
                g.add_term(e.clone(), c.clone() / w);
            }
        }
        if k % 2 == 0 && values.len() < (k / 2 - 1) as usize {
            values.push(S::zero());
        }
        prev2 = prev;
        prev = g;
    }
    values
}

/// Matrix of `D` on degree-`k` forms in the basis `x^j y^{k−j}`,
/// `j = 0..=k`, acting on column vectors.
pub fn rotation_operator_matrix<S: Scalar>(k: u32) -> Vec<Vec<S>> {
    let size = k as usize + 1;
    let mut m = vec![vec![S::zero(); size]; size];
    for j in 0..=k {
        let l = k - j;
        // D(x^j y^l) = j x^{j−1} y^{l+1} − l x^{j+1} y^{l−1}
        if j > 0 {
            m[(j - 1) as usize][j as usize] = S::from_i64(j as i64);
        }
        if l > 0 {
            m[(j + 1) as usize][j as usize] = S::from_i64(-(l as i64));
        }
    }
    m
}

/// `(x² + y²)^m` in the basis `x^j y^{2m−j}`.
pub fn rotation_invariant<S: Scalar>(m: u32) -> Vec<S> {
    let mut v = vec![S::zero(); 2 * m as usize + 1];
    for a in 0..=m {
        v[2 * a as usize] = S::from_i64(binomial(m, a));
    }
    v
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Up to a unit, the coefficient of `(uv)^m` when `x^j y^{2m−j}` is written
/// in `u = x + iy`, `v = x − iy`.
fn invariant_component<S: Scalar>(m: u32) -> Vec<S> {
    let k = 2 * m;
    (0..=k)
        .map(|j| {
            let l = k - j;
            if l % 2 == 1 {
                return S::zero();
            }
            let mut acc = 0i64;
            for a in 0..=j.min(m) {
                if m - a > l {
                    continue;
                }
                let sign = if (l - (m - a)) % 2 == 0 { 1 } else { -1 };
                acc += sign * binomial(j, a) * binomial(l, m - a);
            }
            let sign = if (l / 2) % 2 == 0 { 1 } else { -1 };
            S::from_i64(sign * acc)
        })
        .collect()
}

fn to_vector<S: Scalar>(p: &Poly<S>, k: u32) -> Vec<S> {
    (0..=k).map(|j| p.coeff(&exp(j, k - j))).collect()
}

fn from_vector<S: Scalar>(v: &[S], k: u32) -> Poly<S> {
    Poly::from_terms(2, v.iter().enumerate().map(|(j, c)| (exp(j as u32, k - j as u32), c.clone())))
}

/// Solves the square system `m · x = rhs`.
fn solve_square<S: Scalar>(m: &[Vec<S>], rhs: &[S]) -> Vec<S> {
    let mut rows: Vec<Vec<S>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let n = m[0].len();
    let pivots = gauss_jordan(&mut rows);
    assert!(pivots.len() == n && pivots.iter().all(|&p| p < n), "D-system is uniquely solvable");
    (0..n).map(|i| rows[i][n].clone()).collect()
}

fn dense_run<S: Scalar>(f: &NormalizedForm<S>, n: usize) -> Vec<S> {
    let parts = f.parts();
    let dx = |g: &Poly<S>| g.derivative(0);
    let dy = |g: &Poly<S>| g.derivative(1);
    let two_inv = S::from_i64(2).inverse().expect("odd characteristic");
    let mut prev2 = Poly::zero(2);
    let mut prev = from_vector(&rotation_invariant(1), 2).scale(&two_inv);
    let mut values = Vec::with_capacity(n);
    for k in 3..=(2 * n as u32 + 2) {
        let r = to_vector(&obstruction(&prev, &prev2, &parts, dx, dy), k);
        let d = rotation_operator_matrix::<S>(k);
        let g = if k % 2 == 1 {
            solve_square(&d, &r)
        } else {
            let m = k / 2;
            let inv = rotation_invariant::<S>(m);
            let mut system: Vec<Vec<S>> = d
                .iter()
                .zip(&inv)
                .map(|(row, c)| {
                    let mut r = row.clone();
                    r.push(c.clone());
                    r
                })
                .collect();
            let mut constraint = invariant_component::<S>(m);
            constraint.push(S::zero());
            system.push(constraint);
            let mut rhs = r.clone();
            rhs.push(S::zero());
            let mut sol = solve_square(&system, &rhs);
            values.push(sol.pop().expect("η"));
            sol
        };
        prev2 = prev;
        prev = from_vector(&g, k);
    }
    values
}

/// The `n × 14` Jacobian of the first `n` focal values, one dual-number run
/// per parameter.
pub fn jacobian<T: Scalar>(f: &NormalizedForm<T>, n: usize) -> Result<Vec<Vec<T>>> {
    check_characteristic::<T>(n)?;
    let i = T::from_i64(-1).sqrt();
    let mut columns = Vec::with_capacity(PARAMETER_COUNT);
    for slot in 0..PARAMETER_COUNT {
        let seeded = f.lift(|k, c| if k == slot { Dual::variable(c.clone()) } else { Dual::constant(c.clone()) });
        let values = match &i {
            Some(i) => eigen_run(&seeded, n, &Dual::constant(i.clone())),
            None => dense_run(&seeded, n),
        };
        columns.push(values.into_iter().map(|d| d.eps).collect::<Vec<T>>());
    }
    Ok((0..n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect())
}

pub fn jacobian_rank<T: Scalar>(f: &NormalizedForm<T>, n: usize) -> Result<usize> {
    Ok(rank(&jacobian(f, n)?))
}

/// Focal values, and optionally the Jacobian with its rank.
#[derive(Debug, Clone)]
pub struct FocalReport<T> {
    pub characteristic: u64,
    pub values: Vec<T>,
    pub jacobian: Option<Vec<Vec<T>>>,
    pub rank: Option<usize>,
}

impl<T: Scalar> FocalReport<T> {
    pub fn all_vanish(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("characteristic {}\n", self.characteristic);
        for (k, v) in self.values.iter().enumerate() {
            out.push_str(&format!("  η{:<2} = {v}\n", k + 1));
        }
        if let Some(r) = self.rank {
            out.push_str(&format!("Jacobian {}×{PARAMETER_COUNT}, rank {r}\n", self.values.len()));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let s = |v: &[T]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "characteristic": self.characteristic,
            "focal_values": s(&self.values),
            "all_vanish": self.all_vanish(),
            "jacobian": self.jacobian.as_ref().map(|m| m.iter().map(|r| s(r)).collect::<Vec<_>>()),
            "jacobian_rank": self.rank,
        })
    }
}

pub fn focal_report<T: Scalar>(f: &NormalizedForm<T>, n: usize, with_jacobian: bool) -> Result<FocalReport<T>> {
    let values = focal_values(f, n)?;
    let (jacobian, rank) = if with_jacobian {
        let j = jacobian(f, n)?;
        let r = rank(&j);
        (Some(j), Some(r))
    } else {
        (None, None)
    };
    Ok(FocalReport { characteristic: T::characteristic(), values, jacobian, rank })
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::scalar::{Fp, F29, Q};

    fn f29_form(p: &str, q: &str) -> Form1<F29> {
        let v = ["x", "y"];
        let c = |s: &str| parse_poly(s, &v).unwrap().map_coeffs(|c: &Q| F29::from_rational(c).unwrap());
        Form1::affine(c(p), c(q))
    }

    fn random_params(rng: &mut ChaCha8Rng) -> Vec<F29> {
        (0..PARAMETER_COUNT).map(|_| F29::new(rng.gen_range(0..29))).collect()
    }

    #[test]
    fn rotation_operator_solvability() {
        for k in 1..=10u32 {
            let d = rotation_operator_matrix::<Q>(k);
            let r = rank(&d);
            if k % 2 == 1 {
                assert_eq!(r, k as usize + 1);
            } else {
                assert_eq!(r, k as usize);
                // the image and (x² + y²)^{k/2} span everything
                let mut with_invariant = d.clone();
                for (row, c) in with_invariant.iter_mut().zip(rotation_invariant::<Q>(k / 2)) {
                    row.push(c);
                }
                assert_eq!(rank(&with_invariant), k as usize + 1);
                // and (x² + y²)^{k/2} spans the kernel
                let inv = rotation_invariant::<Q>(k / 2);
                let image = crate::algebra::linalg::mat_vec(&d, &inv);
                assert!(image.iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn hamiltonian_and_reversible_forms_have_vanishing_focal_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            // ω = dH with H = (x² + y²)/2 + H₃ + H₄
            let h3: Vec<F29> = (0..4).map(|_| F29::new(rng.gen_range(0..29))).collect();
            let h4: Vec<F29> = (0..5).map(|_| F29::new(rng.gen_range(0..29))).collect();
            let mut h = Poly::zero(2);
            for (j, c) in h3.iter().enumerate() {
                h.add_term(exp(3 - j as u32, j as u32), *c);
            }
            for (j, c) in h4.iter().enumerate() {
                h.add_term(exp(4 - j as u32, j as u32), *c);
            }
            let w = Form1::affine(&Poly::var(2, 0) + &h.derivative(0), &Poly::var(2, 1) + &h.derivative(1));
            let f = NormalizedForm::from_form(&w).unwrap();
            assert!(focal_values_by(&f, 13, FrommerPath::Eigenbasis).unwrap().iter().all(|v| v.is_zero()));
            assert!(focal_values_by(&f, 13, FrommerPath::Dense).unwrap().iter().all(|v| v.is_zero()));

            // P even and Q odd in y: invariant under (x, y) ↦ (x, −y)
            let mut params = random_params(&mut rng);
            for (k, &(_, j)) in NONLINEAR_MONOMIALS.iter().enumerate() {
                if j % 2 == 1 {
                    params[k] = F29::new(0);
                } else {
                    params[7 + k] = F29::new(0);
                }
            }
            let f = NormalizedForm::from_parameters(params).unwrap();
            assert!(focal_values(&f, 13).unwrap().iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn eigenbasis_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let f = NormalizedForm::from_parameters(random_params(&mut rng)).unwrap();
            let e = focal_values_by(&f, 13, FrommerPath::Eigenbasis).unwrap();
            let d = focal_values_by(&f, 13, FrommerPath::Dense).unwrap();
            assert_eq!(e, d);
        }
    }

    #[test]
    fn printed_normal_form_and_a_perturbation() {
        let w = f29_form(
            "x^3 + 4*x^2*y + 3*x*y^2 - 2*y^3 - 4*x^2 + 14*x*y + 6*y^2 + x",
            "-14*x^3 + 5*x^2*y - 2*y^3 - 3*x^2 + 11*x*y + 3*y^2 + y",
        );
        let f = NormalizedForm::from_form(&w).unwrap();
        let report = focal_report(&f, 13, true).unwrap();
        assert!(report.all_vanish());
        assert_eq!(report.rank, Some(11));

        let mut params = f.parameters().to_vec();
        params[3] = params[3] + F29::new(1);
        let g = NormalizedForm::from_parameters(params).unwrap();
        let e = focal_values_by(&g, 13, FrommerPath::Eigenbasis).unwrap();
        assert!(e.iter().any(|v| !v.is_zero()));
        assert_eq!(e, focal_values_by(&g, 13, FrommerPath::Dense).unwrap());
    }

    #[test]
    fn jacobian_at_the_linear_center() {
        let f = NormalizedForm::from_parameters(vec![F29::new(0); PARAMETER_COUNT]).unwrap();
        let j = jacobian(&f, 13).unwrap();
        // to first order η₁ is the mean of Q_x − P_y on the circle:
        // 3 b₃₀ + b₁₂ − a₂₁ − 3 a₀₃ up to a unit
        let expected: Vec<F29> = [0, 0, 0, 0, -1, 0, -3, 0, 0, 0, 3, 0, 1, 0].iter().map(|&c| F29::new(c)).collect();
        let unit = j[0][12];
        assert!(!unit.is_zero());
        assert_eq!(j[0], expected.iter().map(|c| *c * unit).collect::<Vec<_>>());
        assert!(j[1..].iter().all(|r| r.iter().all(|c| c.is_zero())));
        assert_eq!(jacobian_rank(&f, 13).unwrap(), 1);
    }

    #[test]
    fn normalization() {
        let w = f29_form("x + x^2 - 3*y^3", "y + 2*x*y");
        let f = normalize(&w, &[F29::new(0), F29::new(0)]).unwrap();
        assert_eq!(f, NormalizedForm::from_form(&w).unwrap());

        // 2 is not a square mod 29
        let w = f29_form("x + x^2", "2*y + y^3");
        assert!(matches!(normalize(&w, &[F29::new(0), F29::new(0)]), Err(Error::FieldOfDefinition(_))));

        let w = f29_form("x + y", "2*y");
        assert!(matches!(normalize(&w, &[F29::new(0), F29::new(0)]), Err(Error::NoCenterCertificate(_))));
        assert!(matches!(normalize(&w, &[F29::new(1), F29::new(0)]), Err(Error::NotAZero(_))));

        // a translated, sheared and scaled copy of a normalized form
        let base = f29_form("x + x^2 - 3*y^3 + 5*x*y", "y + 2*x*y - x^3");
        let v = ["x", "y"];
        let sub: Vec<Poly<F29>> = ["2*(x - 3) + (y - 1)", "(x - 3) + 4*(y - 1)"]
            .iter()
            .map(|s| parse_poly(s, &v).unwrap().map_coeffs(|c: &Q| F29::from_rational(c).unwrap()))
            .collect();
        // pull back by (x, y) ↦ L (x − 3, y − 1) with L = [[2, 1], [1, 4]]
        let (p, q) = (base.a.substitute(&sub), base.b.substitute(&sub));
        let pulled = Form1::affine(
            &p.scale(&F29::new(2 * 7)) + &q.scale(&F29::new(7)),
            &p.scale(&F29::new(7)) + &q.scale(&F29::new(4 * 7)),
        );
        let f = normalize(&pulled, &[F29::new(3), F29::new(1)]).unwrap();
        let expected = focal_values(&NormalizedForm::from_form(&base).unwrap(), 13).unwrap();
        let got = focal_values(&f, 13).unwrap();
        assert_eq!(got.iter().all(|v| v.is_zero()), expected.iter().all(|v| v.is_zero()));
        assert_eq!(
            jacobian_rank(&f, 13).unwrap(),
            jacobian_rank(&NormalizedForm::from_form(&base).unwrap(), 13).unwrap()
        );
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let f = NormalizedForm::from_parameters(vec![Fp::<23>::new(0); PARAMETER_COUNT]).unwrap();
        assert!(matches!(focal_values(&f, 13), Err(Error::Precondition(_))));
        assert!(focal_values(&f, 10).is_ok());
    }
}
