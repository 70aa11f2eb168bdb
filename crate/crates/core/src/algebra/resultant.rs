//! Sylvester resultants with fraction-free determinant evaluation.

use super::poly::Poly;
use super::scalar::Scalar;

/// Sylvester matrix of `f` and `g` with respect to `var`, rows of `f` first.
pub fn sylvester_matrix<T: Scalar>(f: &Poly<T>, g: &Poly<T>, var: usize) -> Vec<Vec<Poly<T>>> {
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    let size = m + n;
    let arity = f.arity();
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Poly::zero(arity); size];
        for (k, c) in fc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Poly::zero(arity); size];
        for (k, c) in gc.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by Bareiss elimination; every division is exact.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<Poly<T>>>, arity: usize) -> Poly<T> {
    let n = m.len();
    if n == 0 {
        return Poly::one(arity);
    }
    let mut sign_negative = false;
    let mut prev = Poly::one(arity);
    for k in 0..n {
        let Some(p) = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].num_terms()) else {
            return Poly::zero(arity);
        };
        if p != k {
            m.swap(p, k);
            sign_negative = !sign_negative;
        }
        let piv = m[k][k].clone();
        for i in k + 1..n {
            let f = m[i][k].clone();
            for j in k + 1..n {
                let v = &(&piv * &m[i][j]) - &(&f * &m[k][j]);
                m[i][j] = v.exact_divide(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(arity);
        }
        prev = piv;
    }
    let d = m[n - 1][n - 1].clone();
    if sign_negative {
        -d
    } else {
        d
    }
}

/// `Res_var(f, g)`. The result has the same arity with `var` absent.
pub fn resultant<T: Scalar>(f: &Poly<T>, g: &Poly<T>, var: usize) -> Poly<T> {
    assert!(!f.is_zero() && !g.is_zero(), "resultant of the zero polynomial");
    let arity = f.arity();
    let m = f.degree_in(var).unwrap();
    let n = g.degree_in(var).unwrap();
    if m == 0 {
        return f.pow(n);
    }
    if n == 0 {
        return g.pow(m);
    }
    determinant(sylvester_matrix(f, g, var), arity)
}

/// `Res_var(f, ∂f/∂var)`, the discriminant up to the leading coefficient.
pub fn discriminant_like<T: Scalar>(f: &Poly<T>, var: usize) -> Poly<T> {
    let d = f.derivative(var);
    if d.is_zero() {
        return Poly::zero(f.arity());
    }
    resultant(f, &d, var)
}
