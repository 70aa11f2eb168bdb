//! Polynomial differential forms on a two-dimensional chart.

use std::fmt;

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::Error;

/// The affine chart `Z ≠ 0` with coordinates `(x, y)`, or the chart at
/// infinity `X ≠ 0` with coordinates `(y, z)`. Each has a fixed 2-form basis,
/// `dx∧dy` and `dy∧dz` respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    Affine,
    Infinity,
}

impl Chart {
    pub fn coordinates(self) -> [&'static str; 2] {
        match self {
            Chart::Affine => ["x", "y"],
            Chart::Infinity => ["y", "z"],
        }
    }

    fn check(self, other: Chart) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }
}

/// `a du + b dv` for chart coordinates `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form1<T> {
    pub chart: Chart,
    pub a: Poly<T>,
    pub b: Poly<T>,
}

/// `c du∧dv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Form2<T> {
    pub chart: Chart,
    pub c: Poly<T>,
}

impl<T: Scalar> Form1<T> {
    pub fn new(chart: Chart, a: Poly<T>, b: Poly<T>) -> Self {
        assert_eq!(a.arity(), 2);
        assert_eq!(b.arity(), 2);
        Form1 { chart, a, b }
    }

    pub fn affine(p: Poly<T>, q: Poly<T>) -> Self {
        Form1::new(Chart::Affine, p, q)
    }

    /// `dC`
    pub fn gradient(chart: Chart, c: &Poly<T>) -> Self {
        Form1::new(chart, c.derivative(0), c.derivative(1))
    }

    pub fn zero(chart: Chart) -> Self {
        Form1::new(chart, Poly::zero(2), Poly::zero(2))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Maximal coefficient degree.
    pub fn degree(&self) -> u32 {
        self.a.deg().max(self.b.deg())
    }

    pub fn scale(&self, c: &T) -> Self {
        Form1::new(self.chart, self.a.scale(c), self.b.scale(c))
    }

    pub fn add(&self, o: &Self) -> Result<Self, Error> {
        self.chart.check(o.chart)?;
        Ok(Form1::new(self.chart, &self.a + &o.a, &self.b + &o.b))
    }

    pub fn mul_poly(&self, f: &Poly<T>) -> Self {
        Form1::new(self.chart, &self.a * f, &self.b * f)
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Form1<U> {
        Form1::new(self.chart, self.a.map_coeffs(&f), self.b.map_coeffs(&f))
    }

    pub fn try_map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Form1<U>> {
        Some(Form1::new(self.chart, self.a.try_map_coeffs(&f)?, self.b.try_map_coeffs(&f)?))
    }

    pub fn wedge(&self, o: &Self) -> Result<Form2<T>, Error> {
        self.chart.check(o.chart)?;
        Ok(Form2 { chart: self.chart, c: &(&self.a * &o.b) - &(&self.b * &o.a) })
    }

    /// `d(a du + b dv) = (b_u - a_v) du∧dv`
    pub fn exterior_derivative(&self) -> Form2<T> {
        Form2 { chart: self.chart, c: &self.b.derivative(0) - &self.a.derivative(1) }
    }

    /// Both coefficients evaluated at a chart point.
    pub fn eval(&self, pt: &[T; 2]) -> (T, T) {
        (self.a.eval(pt), self.b.eval(pt))
    }
}

impl<T: Scalar> Form2<T> {
    pub fn new(chart: Chart, c: Poly<T>) -> Self {
        assert_eq!(c.arity(), 2);
        Form2 { chart, c }
    }

    pub fn degree(&self) -> u32 {
        self.c.deg()
    }
}

impl<T: Scalar> fmt::Display for Form1<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v] = self.chart.coordinates();
        let a = self.a.to_string_with(&[u, v]);
        let b = self.b.to_string_with(&[u, v]);
        write!(f, "({a}) d{u} + ({b}) d{v}")
    }
}

impl<T: Scalar> fmt::Display for Form2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [u, v] = self.chart.coordinates();
        write!(f, "({}) d{u}∧d{v}", self.c.to_string_with(&[u, v]))
    }
}
