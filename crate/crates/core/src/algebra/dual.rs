//! Dual numbers `a + bε` with `ε² = 0`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Dual<T> {
    pub re: T,
    pub eps: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(re: T, eps: T) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: T) -> Self {
        Dual { re, eps: T::zero() }
    }

    /// `re + ε`, the seed for differentiating with respect to one slot.
    pub fn variable(re: T) -> Self {
        Dual { re, eps: T::one() }
    }
}

impl<T: Scalar> fmt::Display for Dual<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({} + {}ε)", self.re, self.eps)
        }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let eps = self.re.clone() * o.eps + self.eps * o.re.clone();
        Dual::new(self.re * o.re, eps)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.re, -self.eps)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("dual number with non-invertible real part")
    }
}

impl<T: Scalar> Zero for Dual<T> {
    fn zero() -> Self {
        Dual::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl<T: Scalar> One for Dual<T> {
    fn one() -> Self {
        Dual::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn from_i64(n: i64) -> Self {
        Dual::constant(T::from_i64(n))
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        T::from_rational(r).map(Dual::constant)
    }

    fn inverse(&self) -> Option<Self> {
        let inv = self.re.inverse()?;
        let eps = -(self.eps.clone() * inv.clone() * inv.clone());
        Some(Dual::new(inv, eps))
    }

    fn characteristic() -> u64 {
        T::characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Fp;

    type D = Dual<Fp<29>>;

    #[test]
    fn epsilon_squares_to_zero() {
        let e = D::new(Fp::new(0), Fp::new(1));
        assert!((e * e).is_zero());
    }

    #[test]
    fn inverse_and_derivative() {
        let x = D::variable(Fp::new(3));
        let y = x.inverse().unwrap();
        assert_eq!(y * x, D::one());
        // d/dx x^-1 = -1/9
        assert_eq!(y.eps, -Fp::new(9).inverse().unwrap());
        // x^3 + 2x at 3: value 33, slope 29 ≡ 0
        let f = x * x * x + D::from_i64(2) * x;
        assert_eq!(f.re, Fp::new(33));
        assert_eq!(f.eps, Fp::new(0));
    }
}
