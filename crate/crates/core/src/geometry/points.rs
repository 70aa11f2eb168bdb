//! Singular points of a configuration together with the line at infinity.
//!
//! Points that are not defined over the base field are carried as Galois
//! orbits with coordinates in `T[t]/(m)`; see [`crate::algebra::residue`].

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::ade::{classify, union_milnor, weighted_degree, AdeType, GermInvariants, SingularityType};
use super::local::{cubic_discriminant, cubic_is_cube, intersection_at_origin, milnor_at_origin, tangent_cone};
use crate::algebra::poly::Poly;
use crate::algebra::residue::{split_on_demand, Modulus, Residue};
use crate::algebra::resultant::resultant;
use crate::algebra::scalar::Scalar;
use crate::algebra::shear::{is_monic_in_y, shear, shear_parameters, DEFAULT_SEED, MAX_SHEARS};
use crate::algebra::upoly::{RootField, UPoly};
use crate::darboux::CurveConfiguration;
use crate::error::{Error, Result};
use crate::projective::ProjPoint;

/// A point, or a Galois orbit of points, of the projective plane.
#[derive(Clone, Debug)]
pub struct PointOrbit<T: Scalar> {
    modulus: Option<Arc<Modulus<T>>>,
    coords: [Residue<T>; 3],
}

impl<T: Scalar> PointOrbit<T> {
    pub fn rational(p: &ProjPoint<T>) -> Self {
        let v = T::normalize_projective(&p.coords);
        PointOrbit { modulus: None, coords: [0, 1, 2].map(|i| Residue::constant(v[i].clone())) }
    }

    pub(crate) fn from_residues(modulus: &Arc<Modulus<T>>, coords: [Residue<T>; 3]) -> Self {
        let o = PointOrbit { modulus: Some(modulus.clone()), coords };
        o.restrict(modulus)
    }

    /// The same orbit over a factor of its modulus; degree one factors give
    /// rational points.
    pub(crate) fn restrict(&self, m: &Arc<Modulus<T>>) -> Self {
        if m.degree() == 1 {
            let v: Vec<T> = self.coords.iter().map(|c| c.rep().rem(&m.poly).coeff(0)).collect();
            return PointOrbit::rational(&ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone()));
        }
        PointOrbit { modulus: Some(m.clone()), coords: self.coords.clone().map(|c| Residue::from_poly(c.rep(), m)) }
    }

    /// Number of geometric points in the orbit.
    pub fn degree(&self) -> usize {
        self.modulus.as_ref().map_or(1, |m| m.degree())
    }

    pub fn modulus(&self) -> Option<&UPoly<T>> {
        self.modulus.as_ref().map(|m| &m.poly)
    }

    pub fn coords(&self) -> &[Residue<T>; 3] {
        &self.coords
    }

    pub fn as_rational(&self) -> Option<ProjPoint<T>> {
        let v: Option<Vec<T>> = self.coords.iter().map(|c| c.as_constant()).collect();
        v.map(|v| ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone()))
    }

    pub fn is_at_infinity(&self) -> bool {
        self.coords[2].rep().is_zero()
    }

    /// Coordinates over `T[t]/(m)` as a projective point.
    pub fn point(&self) -> ProjPoint<Residue<T>> {
        let [x, y, z] = self.coords.clone();
        ProjPoint::new(x, y, z)
    }

    /// Value of a homogeneous polynomial in `X, Y, Z`.
    pub fn eval(&self, f: &Poly<T>) -> Residue<T> {
        f.eval_in(&self.coords, |c| Residue::constant(c.clone()))
    }

    /// Local equation of `f` at the point in affine coordinates centred at
    /// it: `Z = 1` for affine points, `X = 1` (or `Y = 1`) at infinity.
    pub fn germ(&self, f: &Poly<T>) -> Poly<Residue<T>> {
        local_germ(&f.map_coeffs(|c| Residue::constant(c.clone())), &self.coords)
    }

    pub fn contains(&self, p: &ProjPoint<T>) -> bool {
        match self.as_rational() {
            Some(q) => q == *p,
            None => false,
        }
    }
}

impl<T: Scalar> fmt::Display for PointOrbit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_rational() {
            let v = T::normalize_projective(&p.coords);
            return write!(f, "({} : {} : {})", v[0], v[1], v[2]);
        }
        let s: Vec<String> = self.coords.iter().map(|c| c.rep().to_string_in("t")).collect();
        let m = self.modulus().expect("irrational orbit has a modulus");
        write!(f, "({} : {} : {}) for {} = 0", s[0], s[1], s[2], m.to_string_in("t"))
    }
}

/// Chart centred at a point: the pivot coordinate is set to 1 and the other
/// two become local coordinates, in order.
fn local_germ<S: Scalar>(f: &Poly<S>, a: &[S; 3]) -> Poly<S> {
    let pivot = if !a[2].is_zero() {
        2
    } else if !a[0].is_zero() {
        0
    } else {
        1
    };
    let inv = a[pivot].inverse().expect("pivot coordinate invertible");
    let mut subs = Vec::with_capacity(3);
    let mut local = 0;
    for (i, c) in a.iter().enumerate() {
        if i == pivot {
            subs.push(Poly::one(2));
        } else {
            subs.push(&Poly::var(2, local) + &Poly::constant(2, c.clone() * inv.clone()));
            local += 1;
        }
    }
    f.substitute(&subs)
}

fn passes<S: Scalar>(germ: &Poly<S>) -> bool {
    germ.constant_term().is_zero_strict()
}

/// Milnor number of a homogeneous curve at a point of it.
pub fn milnor_number<T: Scalar>(c: &Poly<T>, a: &ProjPoint<T>) -> Result<u32> {
    let g = local_germ(c, &a.coords);
    if !passes(&g) {
        return Err(Error::Precondition(format!("the point {a} is not on the curve")));
    }
    milnor_at_origin(&g)
}

/// Local intersection number of two homogeneous curves at a point.
pub fn intersection_multiplicity<T: Scalar>(c: &Poly<T>, d: &Poly<T>, a: &ProjPoint<T>) -> Result<u32> {
    intersection_at_origin(&local_germ(c, &a.coords), &local_germ(d, &a.coords))
}

/// `t_z = t + i - 1` for a point on the line at infinity.
pub fn modified_tjurina(t: u32, i: u32) -> u32 {
    assert!(i >= 1, "the point lies on the line at infinity");
    t + i - 1
}

fn germ_type<S: Scalar>(germs: &[Poly<S>]) -> Result<(SingularityType, Vec<u32>, Vec<u32>)> {
    let k = germs.len();
    let mut milnors = Vec::with_capacity(k);
    let mut cones = Vec::with_capacity(k);
    for g in germs {
        milnors.push(milnor_at_origin(g)?);
        cones.push(tangent_cone(g));
    }
    let mut inter = vec![vec![0u32; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let n = intersection_at_origin(&germs[i], &germs[j])?;
            inter[i][j] = n;
            inter[j][i] = n;
        }
    }
    let milnor = union_milnor(&milnors, &inter);
    let multiplicity: u32 = cones.iter().map(|(m, _)| m).sum();
    let (mut repeated, mut triple) = (false, false);
    if multiplicity == 3 {
        let cone = cones.iter().fold(Poly::one(2), |acc, (_, c)| &acc * c);
        repeated = cubic_discriminant(&cone).is_zero_strict();
        triple = repeated && cubic_is_cube(&cone);
    }
    let inv = GermInvariants { multiplicity, milnor, cone_repeated: repeated, cone_triple: triple };
    let ty = match classify(&inv) {
        Some(t) => SingularityType::simple(t),
        None => SingularityType::unsupported(milnor),
    };
    let contact = (0..k).map(|i| inter[i].iter().sum()).collect();
    Ok((ty, milnors, contact))
}

/// Index of a curve through a point: a component or the line at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentRef {
    Infinity,
    Curve(usize),
}

/// A curve through a point and its local data there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Member {
    pub component: ComponentRef,
    pub milnor: u32,
    /// Intersection number with the union of the other members.
    pub contact: u32,
    /// Weighted degree of the local equation under the weights of the union
    /// germ; `None` when the union is not simple.
    pub weighted_degree: Option<u32>,
}

/// A point of `C ∪ L∞` with the local data of every curve through it.
#[derive(Debug, Clone)]
pub struct PointOnConfig<T: Scalar> {
    pub orbit: PointOrbit<T>,
    pub label: String,
    pub members: Vec<Member>,
    /// Type of the union of all members, the line at infinity included.
    pub union_type: SingularityType,
    /// Milnor (= Tjurina) number of `C` alone.
    pub curve_milnor: u32,
    /// `I(C, L∞)` at points at infinity, 0 elsewhere.
    pub infinity_contact: u32,
}

impl<T: Scalar> PointOnConfig<T> {
    /// Local analysis of a point (or a whole orbit) of `C ∪ L∞`. The orbit
    /// may split when its points are not all alike.
    pub fn analyze(cfg: &CurveConfiguration<T>, orbit: &PointOrbit<T>) -> Result<Vec<Self>> {
        match &orbit.modulus {
            None => Ok(vec![analyze_point(cfg, orbit)?]),
            Some(m) => split_on_demand(&m.poly, |md| analyze_point(cfg, &orbit.restrict(md)))
                .into_iter()
                .map(|(_, r)| r)
                .collect(),
        }
    }

    /// A point where something beyond a transverse crossing of two curves
    /// happens.
    pub fn is_eta_geometric(&self) -> bool {
        match self.union_type.tag {
            Some(AdeType::Smooth) => false,
            Some(AdeType::A(1)) => self.members.len() != 2,
            Some(_) => true,
            None => self.members.len() > 1 || self.union_type.milnor > 0,
        }
    }

    /// Contribution to `deg X`: `t` at affine points, `t_z` at infinity.
    pub fn deg_x_contribution(&self) -> u32 {
        if self.orbit.is_at_infinity() {
            if self.infinity_contact == 0 {
                0
            } else {
                modified_tjurina(self.curve_milnor, self.infinity_contact)
            }
        } else {
            self.curve_milnor
        }
    }

    pub fn member(&self, c: ComponentRef) -> Option<&Member> {
        self.members.iter().find(|m| m.component == c)
    }

    /// The row `(K_z, K_1, …, K_r, dω)` predicted by the weights of the
    /// union germ.
    pub fn geometric_row(&self, r: usize) -> Result<Vec<i64>> {
        let w = self
            .union_type
            .weights
            .ok_or_else(|| Error::Unclassifiable(format!("{} at {}", self.union_type, self.label)))?;
        let mut row = vec![0i64; r + 2];
        for m in &self.members {
            let d = m.weighted_degree.ok_or_else(|| {
                Error::Unclassifiable(format!("branch degrees at {} ({})", self.label, self.union_type))
            })? as i64;
            match m.component {
                ComponentRef::Infinity => row[0] += d,
                ComponentRef::Curve(i) => row[i + 1] += d,
            }
        }
        row[r + 1] = (w.wx + w.wy) as i64;
        Ok(row)
    }
}

fn analyze_point<T: Scalar>(cfg: &CurveConfiguration<T>, orbit: &PointOrbit<T>) -> Result<PointOnConfig<T>> {
    let mut refs = Vec::new();
    let mut germs = Vec::new();
    if orbit.is_at_infinity() {
        refs.push(ComponentRef::Infinity);
        germs.push(orbit.germ(&Poly::var(3, 2)));
    }
    for (i, c) in cfg.components().iter().enumerate() {
        let g = orbit.germ(c);
        if passes(&g) {
            refs.push(ComponentRef::Curve(i));
            germs.push(g);
        }
    }
    if germs.is_empty() {
        return Err(Error::NotOnConfiguration(orbit.to_string()));
    }
    let (union_type, milnors, contact) = germ_type(&germs)?;
    let curve_start = usize::from(orbit.is_at_infinity());
    let curve_milnor = if germs.len() > curve_start { germ_type(&germs[curve_start..])?.0.milnor } else { 0 };
    let infinity_contact = if curve_start == 1 { contact[0] } else { 0 };
    let members = refs
        .iter()
        .enumerate()
        .map(|(i, &component)| Member {
            component,
            milnor: milnors[i],
            contact: contact[i],
            weighted_degree: union_type.weights.and_then(|w| match germs.len() {
                1 => Some(w.degree),
                _ => weighted_degree(w, milnors[i], contact[i]),
            }),
        })
        .collect();
    Ok(PointOnConfig {
        orbit: orbit.clone(),
        label: String::new(),
        members,
        union_type,
        curve_milnor,
        infinity_contact,
    })
}

pub(crate) enum Fiber<T: Scalar> {
    Empty,
    Single(Residue<T>),
    Several,
}

/// Common roots in `y` of bivariate polynomials on the fiber `x = t` over
/// `T[t]/(m)`.
pub(crate) fn common_fiber_root<T: Scalar>(polys: &[Poly<T>], md: &Arc<Modulus<T>>) -> Fiber<T> {
    let t = Residue::generator(md);
    let zero = Residue::zero();
    let along = |f: &Poly<T>| -> UPoly<Residue<T>> {
        UPoly::new(
            f.coefficients_in(1)
                .iter()
                .map(|c| c.eval_in(&[t.clone(), zero.clone()], |a| Residue::constant(a.clone())))
                .collect(),
        )
    };
    let h = polys[1..].iter().try_fold(along(&polys[0]), |h, f| h.try_gcd(&along(f))).and_then(|h| {
        // distinct roots only
        let r = h.try_gcd(&h.derivative())?;
        h.try_divrem(&r)?.0.try_monic()
    });
    match h {
        Err(_) => Fiber::Empty,
        Ok(h) => match h.degree() {
            Some(0) | None => Fiber::Empty,
            Some(1) => Fiber::Single(-h.coeff(0)),
            Some(_) => Fiber::Several,
        },
    }
}

/// The moduli of the orbits of roots of a square-free `u`: one linear
/// modulus per root in `T`, and one for the rest.
pub fn root_moduli<T: RootField>(u: &UPoly<T>) -> Vec<UPoly<T>> {
    if u.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rest = u.monic();
    let mut out = Vec::new();
    for r in T::roots(u) {
        let lin = UPoly::linear_root(r);
        rest = rest.exact_div(&lin).expect("root divides");
        out.push(lin);
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

/// Singular points of the affine curve `f(x, y) = 0`, as orbits.
pub fn affine_singular_orbits<T: RootField>(f: &Poly<T>) -> Result<Vec<PointOrbit<T>>> {
    if f.deg() <= 1 {
        return Ok(Vec::new());
    }
    'shears: for c in shear_parameters(DEFAULT_SEED) {
        let c = T::from_i64(c);
        let g = shear(f, &c);
        if !is_monic_in_y(&g) {
            continue;
        }
        let r1 = resultant(&g, &g.derivative(1), 1);
        if r1.is_zero() {
            return Err(Error::Precondition("the curve has a multiple component".into()));
        }
        let gx = g.derivative(0);
        let r = if gx.is_zero() {
            r1
        } else {
            let r2 = resultant(&g, &gx, 1);
            if r2.is_zero() {
                r1
            } else {
                let a = r1.to_upoly(0).expect("univariate");
                let b = r2.to_upoly(0).expect("univariate");
                Poly::from_upoly(2, 0, &a.gcd(&b))
            }
        };
        let r = r.to_upoly(0).expect("univariate").squarefree_part();
        let mut found = Vec::new();
        for m in root_moduli(&r) {
            for (md, fib) in
                split_on_demand(&m, |md| common_fiber_root(&[g.clone(), g.derivative(0), g.derivative(1)], md))
            {
                match fib {
                    Fiber::Empty => {}
                    Fiber::Several => continue 'shears,
                    Fiber::Single(y) => {
                        let x = Residue::generator(&md) + Residue::constant(c.clone()) * y.clone();
                        found.push(PointOrbit::from_residues(&md, [x, y, Residue::one()]));
                    }
                }
            }
        }
        return Ok(found);
    }
    Err(Error::ShearsExhausted(MAX_SHEARS))
}

/// Points of the homogeneous curve `f` on the line `Z = 0`, as orbits.
pub fn infinity_orbits<T: RootField>(f: &Poly<T>) -> Vec<PointOrbit<T>> {
    let h = f.set_var(2, &T::zero());
    let e = f.deg();
    let u = h.set_var(0, &T::one()).drop_var(2).drop_var(0).to_upoly(0).expect("univariate");
    let mut out = Vec::new();
    if u.degree() != Some(e as usize) {
        out.push(PointOrbit::rational(&ProjPoint::from_i64(0, 1, 0)));
    }
    for m in root_moduli(&u.squarefree_part()) {
        let md = Modulus::new(m);
        let t = Residue::generator(&md);
        out.push(PointOrbit::from_residues(&md, [Residue::one(), t, Residue::zero()]));
    }
    out
}

/// A point named in the input, optionally with its expected type and the
/// components expected through it.
#[derive(Debug, Clone)]
pub struct DeclaredPoint<T: Scalar> {
    pub label: String,
    pub point: ProjPoint<T>,
    pub expected_type: Option<AdeType>,
    pub components: Option<Vec<String>>,
}

/// Every point of `C` that is singular on `C ∪ L∞`, plus every point of `C`
/// at infinity and every declared point, classified.
pub fn configuration_points<T: RootField>(
    cfg: &CurveConfiguration<T>,
    declared: &[DeclaredPoint<T>],
) -> Result<Vec<PointOnConfig<T>>> {
    let product = cfg.product();
    let mut orbits = affine_singular_orbits(&product.set_var(2, &T::one()).drop_var(2))?;
    orbits.extend(infinity_orbits(&product));
    let mut points = Vec::new();
    for o in &orbits {
        points.extend(PointOnConfig::analyze(cfg, o)?);
    }
    for d in declared {
        let found = points.iter().position(|p| p.orbit.contains(&d.point));
        let idx = match found {
            Some(i) => i,
            None => {
                let orbit = PointOrbit::rational(&d.point);
                let p = analyze_point(cfg, &orbit)
                    .map_err(|_| Error::NotOnConfiguration(format!("{} = {}", d.label, d.point)))?;
                points.push(p);
                points.len() - 1
            }
        };
        check_declaration(cfg, &points[idx], d)?;
        points[idx].label = d.label.clone();
    }
    let mut n = 0;
    for p in &mut points {
        if p.label.is_empty() {
            n += 1;
            p.label = format!("P{n}");
        }
    }
    Ok(points)
}

fn check_declaration<T: Scalar>(cfg: &CurveConfiguration<T>, p: &PointOnConfig<T>, d: &DeclaredPoint<T>) -> Result<()> {
    if let Some(t) = d.expected_type {
        if p.union_type.tag != Some(t) {
            return Err(Error::Unclassifiable(format!("{} was declared {t} but is {}", d.label, p.union_type)));
        }
    }
    if let Some(names) = &d.components {
        let mut through: Vec<&str> = p
            .members
            .iter()
            .filter_map(|m| match m.component {
                ComponentRef::Curve(i) => Some(cfg.names()[i].as_str()),
                ComponentRef::Infinity => None,
            })
            .collect();
        let mut want: Vec<&str> = names.iter().map(String::as_str).collect();
        through.sort_unstable();
        want.sort_unstable();
        if through != want {
            return Err(Error::NotOnConfiguration(format!(
                "{} lies on {{{}}}, declared {{{}}}",
                d.label,
                through.join(", "),
                want.join(", ")
            )));
        }
    }
    Ok(())
}

/// The η-geometric points of the configuration: singular points of
/// `C ∪ L∞` other than transverse crossings of exactly two curves.
pub fn eta_geometric_points<T: RootField>(
    cfg: &CurveConfiguration<T>,
    declared: &[DeclaredPoint<T>],
) -> Result<Vec<PointOnConfig<T>>> {
    let points = configuration_points(cfg, declared)?;
    let mut out = Vec::new();
    for p in points {
        if p.is_eta_geometric() {
            if !p.union_type.is_supported() {
                return Err(Error::Unclassifiable(format!("{} = {}", p.label, p.orbit)));
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// `Σ t(P) + Σ t_z(P)` over the points found, counted with orbit degree.
pub fn expected_deg_x<T: Scalar>(points: &[PointOnConfig<T>]) -> u32 {
    points.iter().map(|p| p.orbit.degree() as u32 * p.deg_x_contribution()).sum()
}
