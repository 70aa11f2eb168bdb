//! Local invariants of plane curve germs at the origin of `k[x, y]`.

use crate::algebra::poly::{Exponent, Poly};
use crate::algebra::residue::split_pending;
use crate::algebra::scalar::Scalar;
use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

fn restrict_to_x_axis<T: Scalar>(f: &Poly<T>) -> UPoly<T> {
    let mut c = Vec::new();
    for (e, a) in f.terms() {
        if e[1] == 0 {
            let k = e[0] as usize;
            if c.len() <= k {
                c.resize(k + 1, T::zero());
            }
            c[k] = a.clone();
        }
    }
    UPoly::new(c)
}

/// Degree with a strict test on the leading coefficient.
fn strict_degree<T: Scalar>(u: &UPoly<T>) -> Option<usize> {
    let d = u.degree()?;
    let _ = u.lc().is_zero_strict();
    Some(d)
}

fn strict_order<T: Scalar>(u: &UPoly<T>) -> usize {
    u.coeffs().iter().position(|c| !c.is_zero_strict()).expect("nonzero polynomial")
}

fn divide_by_y<T: Scalar>(f: &Poly<T>) -> Poly<T> {
    Poly::from_terms(
        2,
        f.terms().map(|(e, c)| {
            let mut g: Exponent = e.clone();
            g[1] -= 1;
            (g, c.clone())
        }),
    )
}

/// Local intersection number of `f` and `g` at the origin, by the classical
/// reduction on `deg f(x, 0)` and `deg g(x, 0)`.
pub fn intersection_at_origin<T: Scalar>(f: &Poly<T>, g: &Poly<T>) -> Result<u32> {
    assert!(f.arity() == 2 && g.arity() == 2, "bivariate germs");
    let mut total = 0u32;
    let mut pending = vec![(f.clone(), g.clone())];
    while let Some((mut f, mut g)) = pending.pop() {
        if split_pending() {
            return Ok(0);
        }
        if f.is_zero() || g.is_zero() {
            return Err(Error::NonIsolated("a germ is identically zero".into()));
        }
        if !f.constant_term().is_zero_strict() || !g.constant_term().is_zero_strict() {
            continue;
        }
        let fr = restrict_to_x_axis(&f);
        let gr = restrict_to_x_axis(&g);
        match (strict_degree(&fr), strict_degree(&gr)) {
            (None, None) => return Err(Error::NonIsolated("common component y = 0".into())),
            (None, Some(_)) => {
                total += strict_order(&gr) as u32;
                pending.push((divide_by_y(&f), g));
            }
            (Some(_), None) => {
                total += strict_order(&fr) as u32;
                pending.push((f, divide_by_y(&g)));
            }
            (Some(mut r), Some(mut s)) => {
                let (mut lf, mut lg) = (fr.lc(), gr.lc());
                if r > s {
                    std::mem::swap(&mut f, &mut g);
                    std::mem::swap(&mut r, &mut s);
                    std::mem::swap(&mut lf, &mut lg);
                }
                let mut shift: Exponent = Exponent::from_elem(0, 2);
                shift[0] = (s - r) as u32;
                let reduced = &g.scale(&lf) - &f.mul_monomial(&shift, &lg);
                pending.push((f, reduced));
            }
        }
    }
    Ok(total)
}

/// Milnor number `dim k[[x,y]]/(f_x, f_y)` at the origin.
pub fn milnor_at_origin<T: Scalar>(f: &Poly<T>) -> Result<u32> {
    let fx = f.derivative(0);
    let fy = f.derivative(1);
    if fx.is_zero() || fy.is_zero() {
        // f depends on one variable only; reduced means a union of parallel lines
        let other = if fx.is_zero() { &fy } else { &fx };
        if other.is_zero() || other.constant_term().is_zero_strict() {
            return Err(Error::NonIsolated("singular locus is a curve".into()));
        }
        return Ok(0);
    }
    intersection_at_origin(&fx, &fy)
}

/// Order of `f` at the origin and its tangent cone.
pub fn tangent_cone<T: Scalar>(f: &Poly<T>) -> (u32, Poly<T>) {
    let m = f.lowest_degree().expect("nonzero germ");
    (m, f.homogeneous_part(m))
}

/// Discriminant of the binary cubic `a x³ + b x²y + c xy² + d y³`.
pub fn cubic_discriminant<T: Scalar>(cone: &Poly<T>) -> T {
    let [a, b, c, d] = binary_coefficients(cone, 3);
    let n = T::from_i64;
    b.clone() * b.clone() * c.clone() * c.clone()
        - n(4) * a.clone() * c.clone() * c.clone() * c.clone()
        - n(4) * b.clone() * b.clone() * b.clone() * d.clone()
        - n(27) * a.clone() * a.clone() * d.clone() * d.clone()
        + n(18) * a * b * c * d
}

/// Whether a binary cubic is the cube of a linear form: its Hessian
/// covariant vanishes.
pub fn cubic_is_cube<T: Scalar>(cone: &Poly<T>) -> bool {
    let [a, b, c, d] = binary_coefficients(cone, 3);
    let n = T::from_i64;
    let h0 = b.clone() * b.clone() - n(3) * a.clone() * c.clone();
    let h1 = b.clone() * c.clone() - n(9) * a * d.clone();
    let h2 = c.clone() * c.clone() - n(3) * b * d;
    h0.is_zero_strict() && h1.is_zero_strict() && h2.is_zero_strict()
}

fn binary_coefficients<T: Scalar>(f: &Poly<T>, d: u32) -> [T; 4] {
    let e = |i: u32| -> Exponent { [d - i, i].into_iter().collect() };
    [f.coeff(&e(0)), f.coeff(&e(1)), f.coeff(&e(2)), f.coeff(&e(3))]
}
