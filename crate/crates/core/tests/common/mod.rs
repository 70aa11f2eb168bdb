//! Generators shared by the property and acceptance suites.
#![allow(dead_code)]

use darboux_core::algebra::form::{Chart, Form1};
use darboux_core::algebra::parse::parse_poly;
use darboux_core::algebra::poly::Poly;
use darboux_core::geometry::ade::AdeType;
use darboux_core::{F29, Q};

pub fn f(n: i64) -> F29 {
    F29::new(n)
}

/// Dense polynomial in `arity` variables of total degree ≤ `deg` (exactly
/// `deg` when `homogeneous`), coefficients consumed from `c` cyclically.
pub fn dense(arity: usize, deg: u32, homogeneous: bool, c: &[i64]) -> Poly<F29> {
    let mut p = Poly::zero(arity);
    let mut k = 0;
    let mut push = |e: Vec<u32>| {
        p.add_term(e.into_iter().collect(), f(c[k % c.len()]));
        k += 1;
    };
    let lo = if homogeneous { deg } else { 0 };
    for d in lo..=deg {
        match arity {
            2 => (0..=d).for_each(|j| push(vec![d - j, j])),
            3 => (0..=d).for_each(|i| (0..=d - i).for_each(|j| push(vec![i, j, d - i - j]))),
            _ => unreachable!(),
        }
    }
    p
}

pub fn x() -> Poly<F29> {
    Poly::var(2, 0)
}

pub fn y() -> Poly<F29> {
    Poly::var(2, 1)
}

/// Affine line `a x + b y + c` with `(a, b) ≠ 0`.
pub fn line(a: i64, b: i64, c: i64) -> Poly<F29> {
    let (a, b) = if a % 29 == 0 && b % 29 == 0 { (1, b) } else { (a, b) };
    &(&x().scale(&f(a)) + &y().scale(&f(b))) + &Poly::constant(2, f(c))
}

/// A form with `c` as integral curve: `A dc + c (u dx + v dy)`.
pub fn form_with_integral_curve(c: &Poly<F29>, a: &Poly<F29>, u: &Poly<F29>, v: &Poly<F29>) -> Form1<F29> {
    let dc = Form1::gradient(Chart::Affine, c);
    let rest = Form1::affine(c * u, c * v);
    dc.mul_poly(a).add(&rest).unwrap()
}

pub fn simple_types() -> Vec<AdeType> {
    let mut v: Vec<AdeType> = (1..=8).map(AdeType::A).collect();
    v.extend((4..=8).map(AdeType::D));
    v.extend([AdeType::E6, AdeType::E7, AdeType::E8]);
    v
}

pub fn normal_form(t: AdeType) -> Poly<Q> {
    let s = match t {
        AdeType::A(k) => format!("x^2 + y^{}", k + 1),
        AdeType::D(k) => format!("x^2*y + y^{}", k - 1),
        AdeType::E6 => "x^3 + y^4".into(),
        AdeType::E7 => "x^3 + x*y^3".into(),
        AdeType::E8 => "x^3 + y^5".into(),
        other => unreachable!("{other}"),
    };
    parse_poly(&s, &["x", "y"]).unwrap()
}
