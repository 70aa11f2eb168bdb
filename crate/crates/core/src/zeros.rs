//! Zero counts for forms with a prescribed integral curve, and the zeros of
//! a given form.
//!
//! A zero of `ω = P dx + Q dy` of degree `s` is a common zero of `P^h` and
//! `Q^h`, both homogenized at degree `s`; there are `s²` of them with
//! multiplicity when they are isolated.

use std::fmt;

use num_traits::{One, Zero as _};
use serde_json::{json, Value};

use crate::algebra::form::{Chart, Form1};
use crate::algebra::poly::Poly;
use crate::algebra::residue::{split_on_demand, Residue};
use crate::algebra::resultant::resultant;
use crate::algebra::scalar::Scalar;
use crate::algebra::shear::{is_monic_in_y, shear, shear_parameters, DEFAULT_SEED, MAX_SHEARS};
use crate::algebra::upoly::{RootField, UPoly};
use crate::darboux::CurveConfiguration;
use crate::error::{Error, Result};
use crate::eta::EtaContext;
use crate::geometry::local::intersection_at_origin;
use crate::geometry::points::{common_fiber_root, infinity_orbits, root_moduli, Fiber, PointOrbit};
use crate::projective::ProjPoint;

/// `(c₁(K), c₂(K))` for `0 → K → E → L → Q → 0` with `E` of rank `r`, `L` a
/// line bundle and `Q` of length `ℓ`.
pub fn chern_c2_kernel(r: i64, c1_e: i64, c2_e: i64, c1_l: i64, length: i64) -> (i64, i64) {
    debug_assert!(r >= 1);
    (c1_e - c1_l, c2_e - c1_e * c1_l + c1_l * c1_l - length)
}

/// Upper bound for the number of zeros outside an integral curve of degree
/// `d` of a form of degree `s`.
pub fn zeros_outside_bound(s: i64, d: i64, deg_x: i64) -> i64 {
    s * s + d * (d - s - 1) - deg_x
}

/// Number of zeros on the line at infinity, when the count is forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfinityCount {
    Exactly(i64),
    NotApplicable,
}

impl fmt::Display for InfinityCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfinityCount::Exactly(n) => write!(f, "{n}"),
            InfinityCount::NotApplicable => write!(f, "not applicable"),
        }
    }
}

pub fn zeros_at_infinity_count(s: i64, d: i64, deg_x_infinity: i64, char_ok: bool) -> InfinityCount {
    if char_ok && deg_x_infinity <= d - s - 2 {
        InfinityCount::Exactly(s - 1)
    } else {
        InfinityCount::NotApplicable
    }
}

/// Where a zero lies relative to the curve and the line at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroLocation {
    OnCurve,
    AtInfinity,
    Outside,
}

impl ZeroLocation {
    fn key(self) -> &'static str {
        match self {
            ZeroLocation::OnCurve => "on_curve",
            ZeroLocation::AtInfinity => "at_infinity",
            ZeroLocation::Outside => "outside",
        }
    }
}

/// A zero, or a Galois orbit of zeros sharing one multiplicity.
#[derive(Debug, Clone)]
pub struct Zero<T: Scalar> {
    pub orbit: PointOrbit<T>,
    pub multiplicity: u32,
    pub location: ZeroLocation,
}

impl<T: Scalar> Zero<T> {
    /// Orbits of degree above one have no coordinates in the base field.
    pub fn is_unresolved(&self) -> bool {
        self.orbit.degree() > 1
    }
}

#[derive(Debug, Clone)]
pub struct ZeroReport<T: Scalar> {
    pub form_degree: u32,
    pub zeros: Vec<Zero<T>>,
    /// Bound on the zeros outside the curve, when one was supplied.
    pub bound: Option<i64>,
}

impl<T: Scalar> ZeroReport<T> {
    pub fn at(&self, location: ZeroLocation) -> impl Iterator<Item = &Zero<T>> {
        self.zeros.iter().filter(move |z| z.location == location)
    }

    /// Zeros outside `C ∪ L∞` counted with multiplicity.
    pub fn weighted_outside_count(&self) -> usize {
        self.at(ZeroLocation::Outside).map(|z| z.orbit.degree() * z.multiplicity as usize).sum()
    }

    /// Zeros outside `C ∪ L∞` as a set.
    pub fn outside_count(&self) -> usize {
        self.at(ZeroLocation::Outside).map(|z| z.orbit.degree()).sum()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.orbit.degree() * z.multiplicity as usize).sum()
    }

    pub fn outside_points(&self) -> Vec<ProjPoint<T>> {
        self.at(ZeroLocation::Outside).filter_map(|z| z.orbit.as_rational()).collect()
    }

    /// Attaches the bound for zeros off the curve; the weighted count must
    /// respect it.
    pub fn with_bound(mut self, bound: i64) -> Result<Self> {
        let n = self.weighted_outside_count() as i64;
        if n > bound {
            return Err(Error::Internal(format!("{n} zeros outside the curve exceed the bound {bound}")));
        }
        self.bound = Some(bound);
        Ok(self)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "zeros of a form of degree {} ({} with multiplicity)\n",
            self.form_degree,
            self.total_multiplicity()
        );
        for z in &self.zeros {
            let what = if z.is_unresolved() {
                format!("unresolved factor of degree {}: {}", z.orbit.degree(), z.orbit)
            } else {
                z.orbit.to_string()
            };
            out.push_str(&format!("  {:<12} multiplicity {}  {}\n", z.location.key(), z.multiplicity, what));
        }
        out.push_str(&format!(
            "outside C and L∞: {} point(s), {} with multiplicity",
            self.outside_count(),
            self.weighted_outside_count()
        ));
        if let Some(b) = self.bound {
            out.push_str(&format!(", bound {b}"));
        }
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> Value {
        let zeros: Vec<Value> = self
            .zeros
            .iter()
            .map(|z| {
                json!({
                    "point": z.orbit.to_string(),
                    "orbit_degree": z.orbit.degree(),
                    "multiplicity": z.multiplicity,
                    "location": z.location.key(),
                    "unresolved": z.is_unresolved(),
                })
            })
            .collect();
        json!({
            "form_degree": self.form_degree,
            "total_multiplicity": self.total_multiplicity(),
            "zeros": zeros,
            "outside_count": self.outside_count(),
            "outside_weighted_count": self.weighted_outside_count(),
            "bound": self.bound,
        })
    }
}

fn order_of_vanishing<T: Scalar>(r: &UPoly<T>, m: &UPoly<T>) -> u32 {
    let mut r = r.clone();
    let mut k = 0;
    while let Some(q) = r.exact_div(m) {
        r = q;
        k += 1;
    }
    k
}

/// Affine zeros as orbits, each with the vanishing order of `Res_y(P, Q)`
/// along it, after a shear that separates the zeros by `x`.
fn affine_zeros<T: RootField>(p: &Poly<T>, q: &Poly<T>) -> Result<Vec<(PointOrbit<T>, u32)>> {
    'shears: for c in shear_parameters(DEFAULT_SEED ^ 0x2e05) {
        let c = T::from_i64(c);
        let (ps, qs) = (shear(p, &c), shear(q, &c));
        let (f, g) = if is_monic_in_y(&ps) {
            (ps, qs)
        } else if is_monic_in_y(&qs) {
            (qs, ps)
        } else {
            continue;
        };
        let r = if f.degree_in(1) == Some(0) { f.clone() } else { resultant(&f, &g, 1) };
        if r.is_zero() {
            return Err(Error::NonIsolated("P and Q have a common factor".into()));
        }
        let r = r.to_upoly(0).expect("univariate");
        let mut found = Vec::new();
        for m in root_moduli(&r.squarefree_part()) {
            for (md, fib) in split_on_demand(&m, |md| common_fiber_root(&[f.clone(), g.clone()], md)) {
                match fib {
                    Fiber::Empty => {}
                    Fiber::Several => continue 'shears,
                    Fiber::Single(y) => {
                        let x = Residue::generator(&md) + Residue::constant(c.clone()) * y.clone();
                        let mult = order_of_vanishing(&r, &md.poly);
                        found.push((PointOrbit::from_residues(&md, [x, y, Residue::one()]), mult));
                    }
                }
            }
        }
        return Ok(found);
    }
    Err(Error::ShearsExhausted(MAX_SHEARS))
}

/// Intersection multiplicity of two homogeneous polynomials along an orbit,
/// one result per piece of the splitting the computation forces.
fn local_multiplicities<T: Scalar>(
    f: &Poly<T>,
    g: &Poly<T>,
    orbit: &PointOrbit<T>,
) -> Result<Vec<(PointOrbit<T>, u32)>> {
    let Some(m) = orbit.modulus() else {
        return Ok(vec![(orbit.clone(), intersection_at_origin(&orbit.germ(f), &orbit.germ(g))?)]);
    };
    split_on_demand(m, |md| {
        let o = orbit.restrict(md);
        intersection_at_origin(&o.germ(f), &o.germ(g)).map(|k| (o, k))
    })
    .into_iter()
    .map(|(_, r)| r)
    .collect()
}

fn locate<T: Scalar>(orbit: &PointOrbit<T>, curve: Option<&Poly<T>>) -> Vec<(PointOrbit<T>, ZeroLocation)> {
    let off_curve = |o: &PointOrbit<T>| {
        if o.is_at_infinity() {
            ZeroLocation::AtInfinity
        } else {
            ZeroLocation::Outside
        }
    };
    let Some(c) = curve else {
        return vec![(orbit.clone(), off_curve(orbit))];
    };
    let classify = |o: &PointOrbit<T>| {
        if o.eval(c).is_zero_strict() {
            ZeroLocation::OnCurve
        } else {
            off_curve(o)
        }
    };
    match orbit.modulus() {
        None => vec![(orbit.clone(), classify(orbit))],
        Some(m) => split_on_demand(m, |md| {
            let o = orbit.restrict(md);
            let loc = classify(&o);
            (o, loc)
        })
        .into_iter()
        .map(|(_, r)| r)
        .collect(),
    }
}

/// All zeros of an affine form in the projective plane, classified against
/// the product of the configuration (if given) and the line at infinity.
pub fn find_zeros<T: RootField>(w: &Form1<T>, cfg: Option<&CurveConfiguration<T>>) -> Result<ZeroReport<T>> {
    if w.chart != Chart::Affine {
        return Err(Error::Precondition("the form must be given on the affine chart".into()));
    }
    let s = w.degree();
    if w.a.is_zero() || w.b.is_zero() {
        return Err(Error::NonIsolated("a coefficient of the form vanishes identically".into()));
    }
    let ph = w.a.homogenize(s).expect("degree s");
    let qh = w.b.homogenize(s).expect("degree s");
    let curve = cfg.map(|c| c.product());

    let mut found = affine_zeros(&w.a, &w.b)?;
    // common roots of the top-degree parts
    let top = ph.set_var(2, &T::zero());
    let top_q = qh.set_var(2, &T::zero());
    if !top.is_zero() || !top_q.is_zero() {
        let common = binary_gcd(&top, &top_q);
        if !common.is_constant() {
            for orbit in infinity_orbits(&common) {
                found.extend(local_multiplicities(&ph, &qh, &orbit)?);
            }
        }
    }

    let mut zeros = Vec::new();
    for (orbit, multiplicity) in found {
        for (orbit, location) in locate(&orbit, curve.as_ref()) {
            zeros.push(Zero { orbit, multiplicity, location });
        }
    }
    Ok(ZeroReport { form_degree: s, zeros, bound: None })
}

/// Greatest common divisor of two binary forms in `X, Y`, up to a scalar.
fn binary_gcd<T: RootField>(f: &Poly<T>, g: &Poly<T>) -> Poly<T> {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    let x_power = |p: &Poly<T>| p.terms().map(|(e, _)| e[0]).min().unwrap_or(0);
    let dehom = |p: &Poly<T>| p.set_var(0, &T::one()).drop_var(2).drop_var(0).to_upoly(0).expect("univariate");
    let h = dehom(f).gcd(&dehom(g));
    let k = x_power(f).min(x_power(g));
    let dh = h.degree().unwrap_or(0) as u32;
    Poly::from_terms(
        3,
        h.coeffs().iter().enumerate().map(|(i, c)| (smallvec::smallvec![dh - i as u32 + k, i as u32, 0], c.clone())),
    )
}

/// Whether every cofactor vanishes at a zero `a` of `ω` off the curve.
pub fn cofactor_vanishing_check<T: Scalar>(
    w: &Form1<T>,
    cfg: &CurveConfiguration<T>,
    a: &ProjPoint<T>,
) -> Result<bool> {
    let ctx = EtaContext::new(w, cfg)?;
    let lifted = a.coords.clone().map(Residue::constant);
    if !cfg.product().eval(&a.coords).is_zero() {
        if !ctx.is_zero_of_form(&lifted) {
            return Err(Error::NotAZero(a.to_string()));
        }
        let eta = ctx.eta(&lifted);
        return Ok(eta[..cfg.len()].iter().all(|v| v.is_zero()));
    }
    Err(Error::Precondition(format!("{a} lies on the curve")))
}

/// Whether `dω^h` vanishes at `a`.
pub fn d_omega_vanishes<T: Scalar>(w: &Form1<T>, cfg: &CurveConfiguration<T>, a: &ProjPoint<T>) -> Result<bool> {
    let ctx = EtaContext::new(w, cfg)?;
    let eta = ctx.eta(&a.coords.clone().map(Residue::constant));
    Ok(eta.last().expect("dω entry").is_zero())
}
