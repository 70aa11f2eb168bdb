//! Residue rings `T[t]/(m)` for a square-free modulus `m`.
//!
//! A Galois orbit of points is carried as a single point with coordinates in
//! `T[t]/(m)`. The modulus need not be irreducible: when an inversion or a
//! strict zero test meets a zero divisor, the nontrivial factor of `m` is
//! recorded and [`split_on_demand`] reruns the computation on both factors.

use std::any::Any;
use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use super::upoly::{power_sums, UPoly};

#[derive(Debug, PartialEq)]
pub struct Modulus<T> {
    pub poly: UPoly<T>,
    /// Power sums of the roots, for traces.
    pub power_sums: Vec<T>,
}

impl<T: Scalar> Modulus<T> {
    pub fn new(poly: UPoly<T>) -> Arc<Self> {
        let poly = poly.monic();
        let power_sums = power_sums(&poly);
        Arc::new(Modulus { poly, power_sums })
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }
}

/// Element of `T[t]/(m)`. Constants carry no modulus.
#[derive(Clone, Debug)]
pub struct Residue<T> {
    rep: UPoly<T>,
    modulus: Option<Arc<Modulus<T>>>,
}

thread_local! {
    static SPLIT_WITNESS: RefCell<Option<Box<dyn Any>>> = const { RefCell::new(None) };
}

fn record_split<T: Scalar>(g: UPoly<T>) {
    SPLIT_WITNESS.with(|w| {
        let mut w = w.borrow_mut();
        if w.is_none() {
            *w = Some(Box::new(g));
        }
    });
}

fn take_split<T: Scalar>() -> Option<UPoly<T>> {
    SPLIT_WITNESS.with(|w| w.borrow_mut().take().and_then(|b| b.downcast::<UPoly<T>>().ok().map(|b| *b)))
}

/// Whether the current computation has met a zero divisor. Long loops use
/// this to abandon a run that [`split_on_demand`] will discard anyway.
pub fn split_pending() -> bool {
    SPLIT_WITNESS.with(|w| w.borrow().is_some())
}

/// Runs `f` over `T[t]/(m)`, splitting `m` whenever `f` meets a zero divisor.
/// Returns one result per factor of the final splitting.
pub fn split_on_demand<T: Scalar, R>(
    m: &UPoly<T>,
    mut f: impl FnMut(&Arc<Modulus<T>>) -> R,
) -> Vec<(Arc<Modulus<T>>, R)> {
    let mut pending = vec![m.monic()];
    let mut out = Vec::new();
    while let Some(m) = pending.pop() {
        let modulus = Modulus::new(m.clone());
        let _ = take_split::<T>();
        let r = f(&modulus);
        match take_split::<T>() {
            Some(g) => {
                let g = g.gcd(&m);
                let d = g.degree().unwrap_or(0);
                assert!(d > 0 && d < m.degree().unwrap_or(0), "split witness is a proper factor");
                let h = m.exact_div(&g).expect("factor divides modulus");
                pending.push(h);
                pending.push(g);
            }
            None => out.push((modulus, r)),
        }
    }
    out
}

impl<T: Scalar> Residue<T> {
    pub fn constant(c: T) -> Self {
        Residue { rep: UPoly::constant(c), modulus: None }
    }

    pub fn from_poly(p: &UPoly<T>, m: &Arc<Modulus<T>>) -> Self {
        Residue { rep: p.rem(&m.poly), modulus: Some(m.clone()) }
    }

    /// The class of `t`.
    pub fn generator(m: &Arc<Modulus<T>>) -> Self {
        Residue::from_poly(&UPoly::var(), m)
    }

    pub fn rep(&self) -> &UPoly<T> {
        &self.rep
    }

    pub fn modulus(&self) -> Option<&Arc<Modulus<T>>> {
        self.modulus.as_ref()
    }

    /// The base-field value if the class is constant.
    pub fn as_constant(&self) -> Option<T> {
        match self.rep.degree() {
            None => Some(T::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    /// Sum over the conjugates, `Σ_i a(r_i)` for the roots `r_i` of `m`.
    pub fn trace(&self) -> T {
        match &self.modulus {
            None => self.rep.coeff(0),
            Some(m) => {
                let mut acc = T::zero();
                for (k, c) in self.rep.coeffs().iter().enumerate() {
                    acc = acc + c.clone() * m.power_sums[k].clone();
                }
                acc
            }
        }
    }

    fn join(&self, o: &Self) -> Option<Arc<Modulus<T>>> {
        match (&self.modulus, &o.modulus) {
            (Some(a), Some(b)) => {
                debug_assert!(Arc::ptr_eq(a, b) || a.poly == b.poly, "mixed moduli");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn reduce(rep: UPoly<T>, m: Option<Arc<Modulus<T>>>) -> Self {
        match m {
            Some(m) => Residue { rep: rep.rem(&m.poly), modulus: Some(m) },
            None => Residue { rep, modulus: None },
        }
    }
}

impl<T: Scalar> PartialEq for Residue<T> {
    fn eq(&self, o: &Self) -> bool {
        self.rep == o.rep
    }
}

impl<T: Scalar> fmt::Display for Residue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rep.degree() {
            None | Some(0) => write!(f, "{}", self.rep.coeff(0)),
            _ => write!(f, "({})", self.rep),
        }
    }
}

impl<T: Scalar> Add for Residue<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let m = self.join(&o);
        Residue { rep: &self.rep + &o.rep, modulus: m }
    }
}

impl<T: Scalar> Sub for Residue<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let m = self.join(&o);
        Residue { rep: &self.rep - &o.rep, modulus: m }
    }
}

impl<T: Scalar> Mul for Residue<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let m = self.join(&o);
        Residue::reduce(&self.rep * &o.rep, m)
    }
}

impl<T: Scalar> Neg for Residue<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Residue { rep: -&self.rep, modulus: self.modulus }
    }
}

/// Division by a zero divisor records a split and yields garbage (zero); the
/// surrounding [`split_on_demand`] discards that run.
impl<T: Scalar> Div for Residue<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        match o.inverse() {
            Some(inv) => self * inv,
            None if o.rep.is_zero() => panic!("division by zero in residue ring"),
            None => Residue::constant(T::zero()),
        }
    }
}

impl<T: Scalar> Zero for Residue<T> {
    fn zero() -> Self {
        Residue::constant(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl<T: Scalar> One for Residue<T> {
    fn one() -> Self {
        Residue::constant(T::one())
    }
}

impl<T: Scalar> Scalar for Residue<T> {
    fn from_i64(n: i64) -> Self {
        Residue::constant(T::from_i64(n))
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        T::from_rational(r).map(Residue::constant)
    }

    fn inverse(&self) -> Option<Self> {
        if self.rep.is_zero() {
            return None;
        }
        match &self.modulus {
            None => self.rep.coeff(0).inverse().map(Residue::constant),
            Some(m) => {
                let (g, s) = self.rep.ext_gcd(&m.poly);
                if g.degree() == Some(0) {
                    Some(Residue { rep: s, modulus: Some(m.clone()) })
                } else {
                    record_split(g);
                    None
                }
            }
        }
    }

    fn is_zero_strict(&self) -> bool {
        if self.rep.is_zero() {
            return true;
        }
        if let Some(m) = &self.modulus {
            if self.rep.degree().unwrap_or(0) > 0 {
                let g = self.rep.gcd(&m.poly);
                if g.degree().unwrap_or(0) > 0 {
                    record_split(g);
                }
            }
        }
        false
    }

    fn characteristic() -> u64 {
        T::characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, Q};

    #[test]
    fn arithmetic_in_quadratic_extension() {
        // t^2 + 3t + 4
        let m = Modulus::new(UPoly::<Q>::from_i64s(&[4, 3, 1]));
        let t = Residue::generator(&m);
        let v = t.clone() * t.clone() + Residue::from_i64(3) * t.clone() + Residue::from_i64(4);
        assert!(v.is_zero());
        let inv = t.inverse().unwrap();
        assert_eq!(inv * t.clone(), Residue::one());
        // trace of t is the sum of roots, -3; of 1 it is the degree
        assert_eq!(t.trace(), q(-3));
        assert_eq!(Residue::from_poly(&UPoly::one(), &m).trace(), q(2));
    }

    #[test]
    fn zero_divisor_splits_the_modulus() {
        // (t - 1)(t - 2): the element t - 1 is a zero divisor
        let m = UPoly::<Q>::from_i64s(&[2, -3, 1]);
        let results = split_on_demand(&m, |md| {
            let t = Residue::generator(md);
            let a = t - Residue::one();
            a.inverse().map(|i| i.rep().clone())
        });
        assert_eq!(results.len(), 2);
        let mut degrees: Vec<_> = results.iter().map(|(m, _)| m.degree()).collect();
        degrees.sort();
        assert_eq!(degrees, vec![1, 1]);
        // on the factor t - 1, t - 1 is zero; on t - 2 it is invertible
        for (md, r) in results {
            if md.poly.coeff(0) == q(-1) {
                assert!(r.is_none());
            } else {
                assert_eq!(r, Some(UPoly::one()));
            }
        }
    }
}
