//! Seeded shears `(x, y) ↦ (x + c·y, y)` used to put bivariate polynomials
//! in general position with respect to projection to the `x`-axis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::scalar::Scalar;

/// Number of shears tried before giving up.
pub const MAX_SHEARS: usize = 8;

pub const DEFAULT_SEED: u64 = 0x5eed_da7b;

/// Deterministic sequence of nonzero shear parameters.
pub fn shear_parameters(seed: u64) -> impl Iterator<Item = i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..MAX_SHEARS).map(move |i| {
        let bound = 7 + 20 * i as i64;
        loop {
            let c = rng.gen_range(-bound..=bound);
            if c != 0 {
                return c;
            }
        }
    })
}

/// `f(x + c·y, y)` for a bivariate polynomial.
pub fn shear<T: Scalar>(f: &Poly<T>, c: &T) -> Poly<T> {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    f.substitute(&[&x + &y.scale(c), y])
}

/// Whether `f` has a nonzero constant coefficient at `y^deg f`.
pub fn is_monic_in_y<T: Scalar>(f: &Poly<T>) -> bool {
    let d = f.deg();
    f.degree_in(1) == Some(d) && !f.coeff(&[0, d].into_iter().collect()).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::scalar::{q, Q};

    #[test]
    fn shear_makes_monic() {
        let f: Poly<Q> = parse_poly("x^2 - x*y + 3", &["x", "y"]).unwrap();
        assert!(!is_monic_in_y(&f));
        let g = shear(&f, &q(2));
        assert!(is_monic_in_y(&g));
        assert_eq!(shear_parameters(1).count(), MAX_SHEARS);
        let a: Vec<i64> = shear_parameters(7).collect();
        let b: Vec<i64> = shear_parameters(7).collect();
        assert_eq!(a, b);
    }
}
