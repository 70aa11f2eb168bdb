//! Degree of the scheme `X = V(C_X, C_Y, C)` from its Hilbert function.

use crate::algebra::poly::{monomials_of_degree, Poly};
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

fn binom2(n: u32) -> usize {
    (n as usize) * (n as usize).saturating_sub(1) / 2
}

/// `dim (k[X,Y,Z] / (C_X, C_Y, C))_d`.
pub fn hilbert_function<T: Scalar>(c: &Poly<T>, d: u32) -> usize {
    let gens = [c.derivative(0), c.derivative(1), c.clone()];
    let columns = monomials_of_degree(3, d);
    let index: std::collections::HashMap<_, _> = columns.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let k = g.deg();
        if k > d {
            continue;
        }
        for m in monomials_of_degree(3, d - k) {
            let mut row = vec![T::zero(); columns.len()];
            for (e, a) in g.mul_monomial(&m, &T::one()).terms() {
                row[index[e]] = a.clone();
            }
            rows.push(row);
        }
    }
    binom2(d + 2) - T::large_matrix_rank(&rows)
}

/// `deg X`, read off where the Hilbert function is constant on the degrees
/// `3e - 1, 3e, 3e + 1`.
pub fn deg_x<T: Scalar>(c: &Poly<T>) -> Result<u32> {
    assert!(c.arity() == 3 && c.is_homogeneous(), "homogeneous curve in X, Y, Z");
    let e = c.deg();
    let values: Vec<usize> = (3 * e - 1..=3 * e + 1).map(|d| hilbert_function(c, d)).collect();
    if values.windows(2).all(|w| w[0] == w[1]) {
        Ok(values[0] as u32)
    } else {
        Err(Error::NoStabilization(values.into_iter().map(|v| v as i64).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::scalar::{F29, Q};

    fn h(s: &str) -> Poly<Q> {
        parse_poly(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn small_curves() {
        assert_eq!(deg_x(&h("x^2 + y^2 - z^2")).unwrap(), 0);
        assert_eq!(deg_x(&h("y^3 - x^2*z")).unwrap(), 4);
        // a node, and a flex at infinity with t_z = 0 + 3 - 1
        assert_eq!(deg_x(&h("y^2*z - x^3 - x^2*z")).unwrap(), 1 + 2);
        let fp: Poly<F29> = h("y^3 - x^2*z").map_coeffs(|c| F29::from_rational(c).unwrap());
        assert_eq!(deg_x(&fp).unwrap(), 4);
    }

    #[test]
    fn double_component_does_not_stabilize() {
        assert!(matches!(deg_x(&h("x^2*(y - z)")), Err(Error::NoStabilization(_))));
    }
}
