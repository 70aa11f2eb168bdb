//! Homogenization, the chart at infinity and the prime operator.
//!
//! The affine chart `Z ≠ 0` has coordinates `x = X/Z`, `y = Y/Z`; the chart
//! at infinity `X ≠ 0` has coordinates `y = Y/X`, `z = Z/X`. For a form `F`
//! on the affine chart, `F′` is its homogenization dehomogenized at `X = 1`.
//!
//! Homogenized 2-forms are stored by their coefficient against
//! `Ω = Z dX∧dY + X dY∧dZ + Y dZ∧dX`: since `dx∧dy = Ω/Z³`, the form
//! `Z^{d+3}·K dx∧dy` equals `K^h Ω` with `K^h = Z^d K(X/Z, Y/Z)`. On the chart
//! at infinity `Ω` restricts to `dy∧dz`, so `K′ = K^h(1, y, z)`.

use std::fmt;

use num_traits::Zero;

use crate::algebra::form::{Chart, Form1, Form2};
use crate::algebra::parse::{parse_rational, ParseError};
use crate::algebra::poly::Poly;
use crate::algebra::scalar::{primitive_integer_vector, Scalar, Q};
use crate::error::{Error, Result};

/// Homogeneous coordinates `(X : Y : Z)`.
#[derive(Clone, Debug)]
pub struct ProjPoint<T> {
    pub coords: [T; 3],
}

impl<T: Scalar> ProjPoint<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        assert!(!(x.is_zero() && y.is_zero() && z.is_zero()), "(0:0:0) is not a point");
        ProjPoint { coords: [x, y, z] }
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        ProjPoint::new(T::from_i64(x), T::from_i64(y), T::from_i64(z))
    }

    /// The affine point `(x, y)` as `(x : y : 1)`.
    pub fn affine(x: T, y: T) -> Self {
        ProjPoint::new(x, y, T::one())
    }

    pub fn x(&self) -> &T {
        &self.coords[0]
    }
    pub fn y(&self) -> &T {
        &self.coords[1]
    }
    pub fn z(&self) -> &T {
        &self.coords[2]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords[2].is_zero()
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn canonical(&self) -> Self {
        let i = self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point");
        let inv = self.coords[i].inverse().expect("leading coordinate invertible");
        ProjPoint { coords: self.coords.clone().map(|c| c * inv.clone()) }
    }

    /// Affine coordinates, if the point is not at infinity.
    pub fn to_affine(&self) -> Option<[T; 2]> {
        let inv = self.coords[2].inverse()?;
        Some([self.coords[0].clone() * inv.clone(), self.coords[1].clone() * inv])
    }

    /// Coordinates `(y, z)` in the chart at infinity.
    pub fn to_infinity_chart(&self) -> Option<[T; 2]> {
        let inv = self.coords[0].inverse()?;
        Some([self.coords[1].clone() * inv.clone(), self.coords[2].clone() * inv])
    }

    pub fn scaled(&self, l: &T) -> Self {
        ProjPoint { coords: self.coords.clone().map(|c| c * l.clone()) }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ProjPoint<U> {
        ProjPoint { coords: [f(&self.coords[0]), f(&self.coords[1]), f(&self.coords[2])] }
    }
}

impl<T: Scalar> PartialEq for ProjPoint<T> {
    fn eq(&self, o: &Self) -> bool {
        let [a, b, c] = &self.coords;
        let [d, e, f] = &o.coords;
        (a.clone() * e.clone() - b.clone() * d.clone()).is_zero()
            && (a.clone() * f.clone() - c.clone() * d.clone()).is_zero()
            && (b.clone() * f.clone() - c.clone() * e.clone()).is_zero()
    }
}

impl<T: Scalar> fmt::Display for ProjPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(f, "({} : {} : {})", c.coords[0], c.coords[1], c.coords[2])
    }
}

impl std::str::FromStr for ProjPoint<Q> {
    type Err = ParseError;

    /// `(a : b : c)` with integer or rational entries, not all zero.
    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let bad = || ParseError::BadPoint(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let v = parts.iter().map(|p| parse_rational(p)).collect::<std::result::Result<Vec<Q>, _>>()?;
        if v.iter().all(|c| c.is_zero()) {
            return Err(bad());
        }
        Ok(ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone()))
    }
}

impl ProjPoint<Q> {
    /// Coprime integer coordinates with a positive first nonzero entry.
    pub fn integral_string(&self) -> String {
        let v = primitive_integer_vector(&self.coords, false);
        format!("({}:{}:{})", v[0], v[1], v[2])
    }
}

/// Kind of a homogenized object.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Polynomial,
    OneForm,
    TwoForm,
}

/// Homogenized polynomial or form in `X, Y, Z`.
///
/// Polynomials and 2-forms carry one coefficient (a 2-form against `Ω`).
/// A 1-form `P dx + Q dy` carries `(Z P^h, Z Q^h, -X P^h - Y Q^h)` against
/// `(dX, dY, dZ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousForm<T> {
    pub kind: FormKind,
    pub degree: u32,
    pub coeffs: Vec<Poly<T>>,
}

fn homogenize_poly<T: Scalar>(f: &Poly<T>, d: u32) -> Result<Poly<T>> {
    f.homogenize(d).ok_or(Error::DegreeTooLow { target: d, actual: f.deg() })
}

pub fn homogenize_polynomial<T: Scalar>(f: &Poly<T>, d: u32) -> Result<HomogeneousForm<T>> {
    Ok(HomogeneousForm { kind: FormKind::Polynomial, degree: d, coeffs: vec![homogenize_poly(f, d)?] })
}

pub fn homogenize_form1<T: Scalar>(w: &Form1<T>, d: u32) -> Result<HomogeneousForm<T>> {
    let ph = homogenize_poly(&w.a, d)?;
    let qh = homogenize_poly(&w.b, d)?;
    let x = Poly::var(3, 0);
    let y = Poly::var(3, 1);
    let z = Poly::var(3, 2);
    let dz = -&(&(&x * &ph) + &(&y * &qh));
    Ok(HomogeneousForm { kind: FormKind::OneForm, degree: d, coeffs: vec![&z * &ph, &z * &qh, dz] })
}

pub fn homogenize_form2<T: Scalar>(k: &Form2<T>, d: u32) -> Result<HomogeneousForm<T>> {
    Ok(HomogeneousForm { kind: FormKind::TwoForm, degree: d, coeffs: vec![homogenize_poly(&k.c, d)?] })
}

/// Value of a single-coefficient homogeneous object at a representative.
/// Only ratios of values of equal degree are meaningful.
pub fn eval_homogeneous<T: Scalar>(f: &HomogeneousForm<T>, a: &ProjPoint<T>) -> Result<T> {
    if f.kind == FormKind::OneForm {
        return Err(Error::Precondition("a 1-form has no single value at a point".into()));
    }
    Ok(f.coeffs[0].eval(&a.coords))
}

/// `F^h(1, y, z)` for an affine polynomial homogenized at degree `d`.
pub fn prime_poly_at<T: Scalar>(f: &Poly<T>, d: u32) -> Result<Poly<T>> {
    Ok(homogenize_poly(f, d)?.set_var(0, &T::one()).drop_var(0))
}

pub fn prime_poly<T: Scalar>(f: &Poly<T>) -> Poly<T> {
    prime_poly_at(f, f.deg()).expect("own degree")
}

/// `ω′ = Q′ z dy + (-P′ - y Q′) dz` with `P′, Q′` homogenized at degree `s`.
pub fn prime_form1_at<T: Scalar>(w: &Form1<T>, s: u32) -> Result<Form1<T>> {
    assert_eq!(w.chart, Chart::Affine, "prime is defined on the affine chart");
    let p = prime_poly_at(&w.a, s)?;
    let q = prime_poly_at(&w.b, s)?;
    let y = Poly::var(2, 0);
    let z = Poly::var(2, 1);
    let dy = &q * &z;
    let dz = -&(&p + &(&y * &q));
    Ok(Form1::new(Chart::Infinity, dy, dz))
}

pub fn prime_form1<T: Scalar>(w: &Form1<T>) -> Form1<T> {
    prime_form1_at(w, w.degree()).expect("own degree")
}

/// `K′ = K^h(1, y, z) dy∧dz` with `K` homogenized at degree `d`.
pub fn prime_form2_at<T: Scalar>(k: &Form2<T>, d: u32) -> Result<Form2<T>> {
    assert_eq!(k.chart, Chart::Affine, "prime is defined on the affine chart");
    Ok(Form2::new(Chart::Infinity, prime_poly_at(&k.c, d)?))
}

/// Invertible linear change of `(X, Y)` fixing `Z`; points map by
/// `(X, Y) ↦ A (X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct XyChange<T> {
    pub a: [[T; 2]; 2],
}

impl<T: Scalar> XyChange<T> {
    pub fn identity() -> Self {
        XyChange { a: [[T::one(), T::zero()], [T::zero(), T::one()]] }
    }

    pub fn swap() -> Self {
        XyChange { a: [[T::zero(), T::one()], [T::one(), T::zero()]] }
    }

    /// `X ↦ X + Y`
    pub fn shear() -> Self {
        XyChange { a: [[T::one(), T::one()], [T::zero(), T::one()]] }
    }

    pub fn det(&self) -> T {
        self.a[0][0].clone() * self.a[1][1].clone() - self.a[0][1].clone() * self.a[1][0].clone()
    }

    pub fn inverse(&self) -> Self {
        let inv = self.det().inverse().expect("invertible change");
        let [[a, b], [c, d]] = self.a.clone();
        XyChange { a: [[d * inv.clone(), -b * inv.clone()], [-c * inv.clone(), a * inv]] }
    }

    pub fn apply_point(&self, p: &ProjPoint<T>) -> ProjPoint<T> {
        let [x, y, z] = p.coords.clone();
        ProjPoint::new(
            self.a[0][0].clone() * x.clone() + self.a[0][1].clone() * y.clone(),
            self.a[1][0].clone() * x + self.a[1][1].clone() * y,
            z,
        )
    }

    /// `C ∘ A⁻¹` for a polynomial whose first two variables are `X, Y`.
    pub fn apply_poly(&self, c: &Poly<T>) -> Poly<T> {
        let inv = self.inverse();
        let n = c.arity();
        let mut subs: Vec<Poly<T>> = (0..n).map(|i| Poly::var(n, i)).collect();
        for (i, row) in inv.a.iter().enumerate() {
            subs[i] = &Poly::var(n, 0).scale(&row[0]) + &Poly::var(n, 1).scale(&row[1]);
        }
        c.substitute(&subs)
    }

    /// Push-forward of an affine 1-form: `(P, Q) ↦ A⁻ᵀ (P, Q) ∘ A⁻¹`.
    pub fn apply_form1(&self, w: &Form1<T>) -> Form1<T> {
        let inv = self.inverse();
        let p = self.apply_poly(&w.a);
        let q = self.apply_poly(&w.b);
        let np = &p.scale(&inv.a[0][0]) + &q.scale(&inv.a[1][0]);
        let nq = &p.scale(&inv.a[0][1]) + &q.scale(&inv.a[1][1]);
        Form1::new(w.chart, np, nq)
    }
}

/// A change of `(X, Y)` bringing `a` into the chart `X ≠ 0`: the identity if
/// `X ≠ 0` already, otherwise the swap `X ↔ Y`.
pub fn move_point_into_x_chart<T: Scalar>(a: &ProjPoint<T>) -> Result<(XyChange<T>, ProjPoint<T>)> {
    if !a.x().is_zero() {
        return Ok((XyChange::identity(), a.clone()));
    }
    if a.y().is_zero() {
        return Err(Error::Precondition("(0:0:1) cannot be moved by a change of X and Y".into()));
    }
    let s = XyChange::swap();
    let b = s.apply_point(a);
    Ok((s, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::scalar::q;

    fn pa(s: &str) -> Poly<Q> {
        parse_poly(s, &["x", "y"]).unwrap()
    }
    fn pi(s: &str) -> Poly<Q> {
        parse_poly(s, &["y", "z"]).unwrap()
    }

    #[test]
    fn homogenization_examples() {
        let h = homogenize_polynomial(&pa("x^2 - y^3"), 3).unwrap();
        assert_eq!(h.coeffs[0], parse_poly("x^2*z - y^3", &["x", "y", "z"]).unwrap());
        let one = homogenize_polynomial(&pa("1"), 0).unwrap();
        assert_eq!(one.coeffs[0], Poly::one(3));
        let k = homogenize_form2(&Form2::new(Chart::Affine, pa("5")), 0).unwrap();
        assert_eq!(k.coeffs[0], Poly::constant(3, q(5)));
        assert!(matches!(homogenize_polynomial(&pa("x^3"), 2), Err(Error::DegreeTooLow { target: 2, actual: 3 })));
    }

    #[test]
    fn prime_examples() {
        let dx = Form1::affine(pa("1"), pa("0"));
        assert_eq!(prime_form1(&dx), Form1::new(Chart::Infinity, pi("0"), pi("-1")));
        let dy = Form1::affine(pa("0"), pa("1"));
        assert_eq!(prime_form1(&dy), Form1::new(Chart::Infinity, pi("z"), pi("-y")));
        let w = Form1::affine(pa("-2y"), pa("3x"));
        assert_eq!(prime_form1(&w), Form1::new(Chart::Infinity, pi("3z"), pi("-y")));
        assert_eq!(prime_poly(&pa("x^2 - y^3")), pi("z - y^3"));
    }

    #[test]
    fn evaluation_and_points() {
        let k = homogenize_polynomial(&pa("6"), 2).unwrap();
        assert_eq!(eval_homogeneous(&k, &ProjPoint::from_i64(0, 0, 1)).unwrap(), q(6));
        let c = homogenize_polynomial(&pa("x^2 - y^3"), 3).unwrap();
        assert_eq!(eval_homogeneous(&c, &ProjPoint::from_i64(1, 1, 1)).unwrap(), q(0));
        let w = homogenize_form1(&Form1::affine(pa("1"), pa("0")), 0).unwrap();
        assert!(eval_homogeneous(&w, &ProjPoint::from_i64(1, 1, 1)).is_err());
        assert_eq!(ProjPoint::<Q>::from_i64(2, 4, 6), ProjPoint::from_i64(1, 2, 3));
        assert_eq!(ProjPoint::<Q>::from_i64(-142, -20, -102).integral_string(), "(71:10:51)");
    }

    #[test]
    fn moving_points_into_the_x_chart() {
        let (s, b) = move_point_into_x_chart(&ProjPoint::<Q>::from_i64(0, 1, 0)).unwrap();
        assert_eq!(s, XyChange::swap());
        assert_eq!(b, ProjPoint::from_i64(1, 0, 0));
        let (s, b) = move_point_into_x_chart(&ProjPoint::<Q>::from_i64(1, 2, 3)).unwrap();
        assert_eq!(s, XyChange::identity());
        assert_eq!(b, ProjPoint::from_i64(1, 2, 3));
        let sh = XyChange::<Q>::shear();
        assert_eq!(sh.apply_point(&ProjPoint::from_i64(0, 1, 5)), ProjPoint::from_i64(1, 1, 5));
    }

    #[test]
    fn changes_preserve_integral_curves() {
        // C = x² - y³ is an integral curve of 3x dy - 2y dx; so are the images
        let c = pa("x^2 - y^3");
        let w = Form1::affine(pa("-2y"), pa("3x"));
        for ch in [XyChange::swap(), XyChange::shear()] {
            let c2 = ch.apply_poly(&c);
            let w2 = ch.apply_form1(&w);
            let k = Form1::gradient(Chart::Affine, &c2).wedge(&w2).unwrap();
            assert!(k.c.exact_divide(&c2).is_ok());
        }
    }
}
