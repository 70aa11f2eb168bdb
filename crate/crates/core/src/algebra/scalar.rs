//! Coefficient domains.
//!
//! Everything above this module is written against [`Scalar`], a small
//! extension of the `num-traits` ring traits with exact inversion. The
//! concrete domains are arbitrary-precision rationals, prime fields with a
//! compile-time modulus, dual numbers over either (see [`super::dual`]) and
//! residue rings `T[t]/(m)` (see [`super::residue`]).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact coefficient domain.
///
/// `Div` must only be used with divisors for which [`Scalar::inverse`]
/// succeeds; implementations panic otherwise.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// Image of a rational number, `None` when the denominator is not a unit.
    fn from_rational(r: &BigRational) -> Option<Self>;

    fn inverse(&self) -> Option<Self>;

    /// 0 for characteristic zero domains.
    fn characteristic() -> u64;

    /// A square root, if one exists in the domain.
    fn sqrt(&self) -> Option<Self> {
        None
    }

    /// Elimination strategy hook used by [`super::linalg`]. The default is
    /// plain Gauss-Jordan; rationals override it with fraction-free
    /// elimination.
    fn row_echelon(rows: &mut Vec<Vec<Self>>) -> Vec<usize> {
        super::linalg::gauss_jordan(rows)
    }

    /// Rank of a large matrix. Rationals use a multimodular estimate that
    /// can only undercount, and only at unlucky primes.
    fn large_matrix_rank(rows: &[Vec<Self>]) -> usize {
        super::linalg::rank(rows)
    }

    /// Canonical representative of a projective coordinate vector.
    fn normalize_projective(v: &[Self]) -> Vec<Self> {
        match v.iter().find(|c| !c.is_zero()).and_then(|c| c.inverse()) {
            Some(inv) => v.iter().map(|c| c.clone() * inv.clone()).collect(),
            None => v.to_vec(),
        }
    }

    fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Zero test used at branch points of algorithms that also run over
    /// residue rings, where a nonzero zero divisor must trigger a split.
    fn is_zero_strict(&self) -> bool {
        self.is_zero()
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// The rational numbers.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        q(n)
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(r.clone())
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn characteristic() -> u64 {
        0
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn row_echelon(rows: &mut Vec<Vec<Self>>) -> Vec<usize> {
        super::linalg::bareiss_rational(rows)
    }

    fn large_matrix_rank(rows: &[Vec<Self>]) -> usize {
        super::linalg::rank_multimodular(rows)
    }

    /// Coprime integers, first nonzero entry positive.
    fn normalize_projective(v: &[Self]) -> Vec<Self> {
        primitive_integer_vector(v, false).into_iter().map(BigRational::from_integer).collect()
    }
}

/// Element of the prime field `Z/PZ`, `P < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn from_u64(v: u64) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Representative in `(-P/2, P/2]`.
    pub fn symmetric(self) -> i64 {
        if self.0 > P / 2 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }

    fn pow_mod(self, mut e: u64) -> Self {
        let mut b = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }

    pub fn is_square(self) -> bool {
        self.0 == 0 || P == 2 || self.pow_mod((P - 1) / 2).0 == 1
    }

    /// Every element of the field, `0..P`.
    pub fn elements() -> impl Iterator<Item = Self> {
        (0..P).map(Fp)
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symmetric())
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let s = self.0 as u128 + o.0 as u128;
        Fp((s % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let s = self.0 as u128 + P as u128 - o.0 as u128;
        Fp((s % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero in prime field")
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Scalar for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn from_rational(r: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let n = r.numer().mod_floor(&p).to_u64()?;
        let d = r.denom().mod_floor(&p).to_u64()?;
        let d = Fp::<P>(d).inverse()?;
        Some(Fp(n) * d)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // extended Euclid on i128 to stay exact for 62-bit moduli
        let (mut a, mut b) = (self.0 as i128, P as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let qt = a / b;
            (a, b) = (b, a - qt * b);
            (x0, x1) = (x1, x0 - qt * x1);
        }
        if a != 1 {
            return None;
        }
        Some(Fp(x0.rem_euclid(P as i128) as u64))
    }

    fn characteristic() -> u64 {
        P
    }

    fn sqrt(&self) -> Option<Self> {
        if self.0 == 0 {
            return Some(*self);
        }
        if !self.is_square() {
            return None;
        }
        // Tonelli-Shanks
        let mut q = P - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..P).map(Fp::<P>).find(|z| !z.is_square())?;
        let mut m = s;
        let mut c = z.pow_mod(q);
        let mut t = self.pow_mod(q);
        let mut r = self.pow_mod((q + 1) / 2);
        while t.0 != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt.0 != 1 {
                tt = tt * tt;
                i += 1;
            }
            let b = c.pow_mod(1 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        Some(r)
    }
}

/// Characteristic of the field used in the center-variety computations.
pub const CHAR_29: u64 = 29;
pub type F29 = Fp<29>;

/// Primes for which `Fp` is instantiated at run time.
pub const SUPPORTED_PRIMES: [u64; 26] =
    [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 32003];

/// Evaluates `$body` with `$t` bound to `Fp<p>` for a run-time prime `p`
/// from [`SUPPORTED_PRIMES`]. The body must produce a `Result`.
#[macro_export]
macro_rules! with_prime_field {
    ($p:expr, $t:ident => $body:expr) => {{
        match $p {
            3 => $crate::__prime_arm!(3, $t, $body),
            5 => $crate::__prime_arm!(5, $t, $body),
            7 => $crate::__prime_arm!(7, $t, $body),
            11 => $crate::__prime_arm!(11, $t, $body),
            13 => $crate::__prime_arm!(13, $t, $body),
            17 => $crate::__prime_arm!(17, $t, $body),
            19 => $crate::__prime_arm!(19, $t, $body),
            23 => $crate::__prime_arm!(23, $t, $body),
            29 => $crate::__prime_arm!(29, $t, $body),
            31 => $crate::__prime_arm!(31, $t, $body),
            37 => $crate::__prime_arm!(37, $t, $body),
            41 => $crate::__prime_arm!(41, $t, $body),
            43 => $crate::__prime_arm!(43, $t, $body),
            47 => $crate::__prime_arm!(47, $t, $body),
            53 => $crate::__prime_arm!(53, $t, $body),
            59 => $crate::__prime_arm!(59, $t, $body),
            61 => $crate::__prime_arm!(61, $t, $body),
            67 => $crate::__prime_arm!(67, $t, $body),
            71 => $crate::__prime_arm!(71, $t, $body),
            73 => $crate::__prime_arm!(73, $t, $body),
            79 => $crate::__prime_arm!(79, $t, $body),
            83 => $crate::__prime_arm!(83, $t, $body),
            89 => $crate::__prime_arm!(89, $t, $body),
            97 => $crate::__prime_arm!(97, $t, $body),
            101 => $crate::__prime_arm!(101, $t, $body),
            32003 => $crate::__prime_arm!(32003, $t, $body),
            other => Err($crate::error::Error::Unsupported(format!(
                "GF({other}) is not among the supported primes {:?}",
                $crate::algebra::scalar::SUPPORTED_PRIMES
            ))),
        }
    }};
}

#[doc(hidden)]
#[macro_export]
macro_rules! __prime_arm {
    ($q:literal, $t:ident, $body:expr) => {{
        #[allow(dead_code)]
        type $t = $crate::algebra::scalar::Fp<$q>;
        $body
    }};
}

/// Large primes for multi-modular rank computations.
pub const BIG_PRIME_1: u64 = 2_305_843_009_213_693_951;
pub const BIG_PRIME_2: u64 = 4_611_686_018_427_387_847;

/// Canonical display helpers for rational vectors.
pub fn format_rationals(v: &[Q]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Scales a rational vector to coprime integers. The first nonzero entry is
/// made positive unless `keep_sign` is set.
pub fn primitive_integer_vector(v: &[Q], keep_sign: bool) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() {
        for x in &mut ints {
            *x = &*x / &g;
        }
    }
    if !keep_sign {
        if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in &mut ints {
                    *x = -&*x;
                }
            }
        }
    }
    ints
}

/// Marker for scalars usable as hash keys.
pub trait HashScalar: Scalar + Eq + Hash {}
impl<T: Scalar + Eq + Hash> HashScalar for T {}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp<29>;

    #[test]
    fn prime_field_inverse_and_sqrt() {
        for a in F::elements().skip(1) {
            assert_eq!(a * a.inverse().unwrap(), F::one());
        }
        let minus_one = -F::one();
        let i = minus_one.sqrt().unwrap();
        assert_eq!(i * i, minus_one);
        // 2 is a non-residue mod 29
        assert!(F::new(2).sqrt().is_none());
        assert_eq!(F::new(22).sqrt().map(|r| r * r), Some(F::new(22)));
    }

    #[test]
    fn big_prime_arithmetic() {
        type G = Fp<BIG_PRIME_1>;
        let a = G::new(-5);
        assert_eq!(a * a.inverse().unwrap(), G::one());
        assert_eq!(G::new(4).sqrt().map(|r| r * r), Some(G::new(4)));
    }

    #[test]
    fn rational_reduction() {
        let r = q_frac(1, 2);
        assert_eq!(F::from_rational(&r), Some(F::new(15)));
        assert_eq!(F::from_rational(&q_frac(1, 29)), None);
        assert_eq!(q_frac(9, 4).sqrt(), Some(q_frac(3, 2)));
        assert_eq!(q(2).sqrt(), None);
    }

    #[test]
    fn symmetric_display() {
        assert_eq!(F::new(28).to_string(), "-1");
        assert_eq!(F::new(14).to_string(), "14");
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![q_frac(-1, 2), q(1), q_frac(3, 4)];
        let w = primitive_integer_vector(&v, false);
        assert_eq!(w, vec![BigInt::from(2), BigInt::from(-4), BigInt::from(-3)]);
    }
}
