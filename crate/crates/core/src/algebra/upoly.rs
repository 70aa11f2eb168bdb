//! Dense univariate polynomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{Fp, Scalar, Q};

/// Coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UPoly<T> {
    coeffs: Vec<T>,
}

/// Leading coefficient not invertible (only possible over non-fields).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotInvertible;

impl<T: Scalar> UPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        UPoly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn var() -> Self {
        UPoly::new(vec![T::zero(), T::one()])
    }

    /// `t - a`
    pub fn linear_root(a: T) -> Self {
        UPoly::new(vec![-a, T::one()])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        UPoly::new(cs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        UPoly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Evaluation at an element of a ring containing the coefficients.
    pub fn eval_in<R>(&self, x: &R, lift: impl Fn(&T) -> R) -> R
    where
        R: Clone + Add<Output = R> + Mul<Output = R> + Zero,
    {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + lift(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * T::from_i64(i as i64)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(g(t))`
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn try_monic(&self) -> Result<Self, NotInvertible> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = self.lc().inverse().ok_or(NotInvertible)?;
        Ok(self.scale(&inv))
    }

    pub fn monic(&self) -> Self {
        self.try_monic().expect("leading coefficient is not a unit")
    }

    pub fn try_divrem(&self, d: &Self) -> Result<(Self, Self), NotInvertible> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let inv = d.lc().inverse().ok_or(NotInvertible)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].clone() - c.clone() * dc.clone();
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        self.try_divrem(d).expect("leading coefficient is not a unit")
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Quotient if `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.try_divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd. Fails over a residue ring when a zero divisor is met.
    pub fn try_gcd(&self, other: &Self) -> Result<Self, NotInvertible> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.try_divrem(&b)?.1;
            a = b;
            b = r;
        }
        a.try_monic()
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.try_gcd(other).expect("leading coefficient is not a unit")
    }

    /// Returns `(g, s)` with `g = gcd(self, m)` monic and `s·self ≡ g (mod m)`.
    pub fn ext_gcd(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.is_zero() {
            return (r0, s0);
        }
        let inv = r0.lc().inverse().expect("field coefficients");
        (r0.scale(&inv), s0.scale(&inv).rem(m))
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = UPoly::one().rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            base = (&base * &base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Monic product of the distinct irreducible factors. In characteristic
    /// `p`, factors whose multiplicity is divisible by `p` are recovered
    /// through `p`-th roots; this assumes a prime field of coefficients.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::one();
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.pth_root().squarefree_part();
        }
        let g = self.gcd(&d);
        let w = self.exact_div(&g).expect("gcd divides").monic();
        let mut c = g;
        loop {
            let y = c.gcd(&w);
            if y.degree().unwrap_or(0) == 0 {
                break;
            }
            c = c.exact_div(&y).expect("gcd divides");
        }
        if c.degree().unwrap_or(0) == 0 {
            return w;
        }
        (&w * &c.pth_root().squarefree_part()).monic()
    }

    fn pth_root(&self) -> Self {
        let p = T::characteristic() as usize;
        assert!(p > 0, "p-th roots only arise in positive characteristic");
        UPoly::new(self.coeffs.iter().step_by(p).cloned().collect())
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        let d = self.derivative();
        !d.is_zero() && self.gcd(&d).degree().unwrap_or(0) == 0
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> UPoly<U> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> fmt::Display for UPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("t"))
    }
}

impl<T: Scalar> UPoly<T> {
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else if mag.contains(['+', ' ']) {
                out.push_str(&format!("({mag})*{mono}"));
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl<T: Scalar> Add for &UPoly<T> {
    type Output = UPoly<T>;
    fn add(self, o: &UPoly<T>) -> UPoly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &UPoly<T> {
    type Output = UPoly<T>;
    fn sub(self, o: &UPoly<T>) -> UPoly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &UPoly<T> {
    type Output = UPoly<T>;
    fn mul(self, o: &UPoly<T>) -> UPoly<T> {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }
}

impl<T: Scalar> Neg for &UPoly<T> {
    type Output = UPoly<T>;
    fn neg(self) -> UPoly<T> {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

/// Fields in which roots of univariate polynomials can be enumerated.
pub trait RootField: Scalar {
    /// Distinct roots lying in the field itself, in a deterministic order.
    fn roots(f: &UPoly<Self>) -> Vec<Self>;
}

impl<const P: u64> RootField for Fp<P> {
    fn roots(f: &UPoly<Self>) -> Vec<Self> {
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = f.monic();
        // split off the product of linear factors: gcd(t^P - t, f)
        let tp = UPoly::var().pow_mod(P, &f);
        let g = (&tp - &UPoly::var()).gcd(&f);
        let mut out = Vec::new();
        split_linear::<P>(&g, 1, &mut out);
        out.sort();
        out
    }
}

fn split_linear<const P: u64>(g: &UPoly<Fp<P>>, mut seed: u64, out: &mut Vec<Fp<P>>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-g.coeff(0) / g.coeff(1)),
        Some(_) if P == 2 => {
            for a in Fp::<P>::elements() {
                if g.eval(&a).is_zero() {
                    out.push(a);
                }
            }
        }
        Some(_) => loop {
            // equal-degree splitting with deterministic shifts
            let shift = UPoly::new(vec![Fp::<P>::from_u64(seed), Fp::one()]);
            seed += 1;
            let h = &shift.pow_mod((P - 1) / 2, g) - &UPoly::one();
            let d = h.gcd(g);
            let k = d.degree().unwrap_or(0);
            if k > 0 && k < g.degree().unwrap() {
                let rest = g.exact_div(&d).expect("factor");
                split_linear::<P>(&d, seed, out);
                split_linear::<P>(&rest, seed, out);
                return;
            }
        },
    }
}

impl RootField for BigRational {
    fn roots(f: &UPoly<Self>) -> Vec<Self> {
        rational_roots(f)
    }
}

/// Clears denominators and content: an integer polynomial proportional to `f`.
pub fn primitive_integer_poly(f: &UPoly<Q>) -> Vec<BigInt> {
    super::scalar::primitive_integer_vector(f.coeffs(), true)
}

fn eval_mod(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn small_primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| n > 1 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Rational reconstruction of `r mod m` with numerator and denominator
/// bounded by `sqrt(m/2)`.
fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Distinct rational roots via p-adic Newton lifting of simple roots modulo a
/// small prime, rational reconstruction and exact verification.
pub fn rational_roots(f: &UPoly<Q>) -> Vec<Q> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let g = f.squarefree_part();
    let mut out = Vec::new();
    let mut g = g;
    if g.coeff(0).is_zero() {
        out.push(Q::zero());
        g = g.exact_div(&UPoly::var()).expect("t divides");
    }
    if g.degree().unwrap_or(0) == 0 {
        return out;
    }
    let ints = primitive_integer_poly(&g);
    let lc = ints.last().unwrap().abs();
    let c0 = ints[0].abs();
    let height = if lc > c0 { lc.clone() } else { c0.clone() };
    let target = &height * &height * 4u32 + 1u32;
    let deriv: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();

    for p in small_primes_from(1009) {
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() {
            continue;
        }
        let mut simple = true;
        let mut roots_mod_p = Vec::new();
        for r in 0..p {
            let rb = BigInt::from(r);
            if eval_mod(&ints, &rb, &pb).is_zero() {
                if eval_mod(&deriv, &rb, &pb).is_zero() {
                    simple = false;
                    break;
                }
                roots_mod_p.push(rb);
            }
        }
        if !simple {
            continue;
        }
        for r in roots_mod_p {
            let mut m = pb.clone();
            let mut x = r;
            while m < target {
                m = &m * &m;
                let fx = eval_mod(&ints, &x, &m);
                let dfx = eval_mod(&deriv, &x, &m);
                let inv = mod_inverse(&dfx, &m).expect("simple root stays simple");
                x = (&x - fx * inv).mod_floor(&m);
            }
            if let Some(cand) = rational_reconstruct(&x, &m) {
                if g.eval(&cand).is_zero() {
                    out.push(cand);
                }
            }
        }
        break;
    }
    out.sort();
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if (-&e.gcd).is_one() {
        Some((-e.x).mod_floor(m))
    } else {
        None
    }
}

/// Power sums `p_k = Σ r_i^k` (k < n) of the roots of a monic polynomial of
/// degree n, from Newton's identities.
pub fn power_sums<T: Scalar>(m: &UPoly<T>) -> Vec<T> {
    let m = m.monic();
    let n = m.degree().unwrap_or(0);
    // m = t^n + a_{n-1} t^{n-1} + ... ; e_k = (-1)^k a_{n-k}
    let e = |k: usize| -> T {
        let a = m.coeff(n - k);
        if k % 2 == 0 {
            a
        } else {
            -a
        }
    };
    let mut p = vec![T::from_i64(n as i64)];
    for k in 1..n {
        let mut acc = T::zero();
        for i in 1..k {
            let term = e(i) * p[k - i].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        let last = T::from_i64(k as i64) * e(k);
        acc = if k % 2 == 1 { acc + last } else { acc - last };
        p.push(acc);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{q, q_frac};

    type F = Fp<29>;

    fn qp(cs: &[i64]) -> UPoly<Q> {
        UPoly::from_i64s(cs)
    }

    #[test]
    fn division_and_gcd() {
        let a = qp(&[-1, 0, 1]);
        let b = qp(&[-1, 1]);
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, qp(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&qp(&[1, 1])), qp(&[1, 1]));
        assert_eq!(qp(&[1, 0, 1]).gcd(&b), qp(&[1]));
    }

    #[test]
    fn ext_gcd_inverse() {
        let m = qp(&[1, 0, 1]);
        let a = qp(&[2, 3]);
        let (g, s) = a.ext_gcd(&m);
        assert_eq!(g, UPoly::one());
        assert_eq!((&a * &s).rem(&m), UPoly::one());
    }

    #[test]
    fn rational_roots_of_product() {
        // (2t - 3)(t + 5)(t^2 + 1) t
        let f = &(&(&qp(&[-3, 2]) * &qp(&[5, 1])) * &qp(&[1, 0, 1])) * &qp(&[0, 1]);
        assert_eq!(rational_roots(&f), vec![q(-5), q(0), q_frac(3, 2)]);
        let big = &qp(&[-71, 51]) * &qp(&[1234567, -1000003]);
        assert_eq!(rational_roots(&big), vec![q_frac(1234567, 1000003), q_frac(71, 51)]);
    }

    #[test]
    fn prime_field_roots() {
        // t^2 + 3t + 4 splits mod 29
        let f: UPoly<F> = UPoly::from_i64s(&[4, 3, 1]);
        let r = F::roots(&f);
        assert_eq!(r.len(), 2);
        for x in &r {
            assert!(f.eval(x).is_zero());
        }
        let irreducible: UPoly<F> = UPoly::from_i64s(&[2, 0, 1]);
        assert!(F::roots(&irreducible).is_empty());
    }

    #[test]
    fn newton_power_sums() {
        // roots 1, 2, 3
        let m = &(&qp(&[-1, 1]) * &qp(&[-2, 1])) * &qp(&[-3, 1]);
        assert_eq!(power_sums(&m), vec![q(3), q(6), q(14)]);
    }

    #[test]
    fn squarefree() {
        let f = &(&qp(&[-1, 1]) * &qp(&[-1, 1])) * &qp(&[2, 1]);
        assert_eq!(f.squarefree_part(), &qp(&[-1, 1]) * &qp(&[2, 1]));
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        type F = Fp<5>;
        // (t - 1)^5 (t - 2)^2 (t + 1) over F_5
        let l = |a: i64| UPoly::<F>::new(vec![F::new(-a), F::one()]);
        let f = &(&l(1).pow(5) * &l(2).pow(2)) * &l(-1);
        let expected = (&(&l(1) * &l(2)) * &l(-1)).monic();
        assert_eq!(f.squarefree_part(), expected);
        assert_eq!(l(3).pow(10).squarefree_part(), l(3));
    }
}
