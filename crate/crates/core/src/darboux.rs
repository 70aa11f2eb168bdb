//! The inverse problem: Darboux matrices, spaces of forms with prescribed
//! integral curves, cofactors and the relation certificate.

use std::fmt;

use crate::algebra::form::{Chart, Form1, Form2};
use crate::algebra::linalg::nullspace;
use crate::algebra::poly::{exponent_degree, monomials_of_degree, Exponent, Poly};
use crate::algebra::resultant::{discriminant_like, resultant};
use crate::algebra::scalar::Scalar;
use crate::algebra::shear::{is_monic_in_y, shear, shear_parameters, DEFAULT_SEED};
use crate::error::{Error, Result};

/// Reduced plane curves `C₁, …, C_r`, homogeneous in `X, Y, Z`, none of
/// them containing the line at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveConfiguration<T> {
    names: Vec<String>,
    components: Vec<Poly<T>>,
}

impl<T: Scalar> CurveConfiguration<T> {
    /// Validates homogeneity, square-freeness, pairwise coprimality and the
    /// absence of the line at infinity.
    pub fn new(names: Vec<String>, components: Vec<Poly<T>>) -> Result<Self> {
        if names.len() != components.len() || components.is_empty() {
            return Err(Error::InvalidConfiguration("one name per component required".into()));
        }
        for (n, c) in names.iter().zip(&components) {
            if c.arity() != 3 || !c.is_homogeneous() || c.deg() == 0 {
                return Err(Error::InvalidConfiguration(format!(
                    "{n} must be a nonconstant homogeneous polynomial in X, Y, Z"
                )));
            }
            if c.set_var(2, &T::zero()).is_zero() {
                return Err(Error::InvalidConfiguration(format!("{n} contains the line at infinity")));
            }
        }
        let cfg = CurveConfiguration { names, components };
        cfg.check_reduced()?;
        Ok(cfg)
    }

    /// Skips validation; for components already known to be reduced.
    pub fn new_unchecked(names: Vec<String>, components: Vec<Poly<T>>) -> Self {
        CurveConfiguration { names, components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn components(&self) -> &[Poly<T>] {
        &self.components
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.deg()).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.degrees().iter().sum()
    }

    pub fn product(&self) -> Poly<T> {
        self.components.iter().fold(Poly::one(3), |acc, c| &acc * c)
    }

    /// Components restricted to the affine chart `Z = 1`.
    pub fn affine_components(&self) -> Vec<Poly<T>> {
        self.components.iter().map(|c| c.dehomogenize_last()).collect()
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CurveConfiguration<U> {
        CurveConfiguration {
            names: self.names.clone(),
            components: self.components.iter().map(|c| c.map_coeffs(&f)).collect(),
        }
    }

    pub fn try_map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> Option<U>) -> Option<CurveConfiguration<U>> {
        Some(CurveConfiguration {
            names: self.names.clone(),
            components: self.components.iter().map(|c| c.try_map_coeffs(&f)).collect::<Option<Vec<_>>>()?,
        })
    }

    /// Applies `f` to every component (for coordinate changes).
    pub fn map_components(&self, f: impl Fn(&Poly<T>) -> Poly<T>) -> Self {
        CurveConfiguration { names: self.names.clone(), components: self.components.iter().map(f).collect() }
    }

    fn check_reduced(&self) -> Result<()> {
        let affine = self.affine_components();
        for c in shear_parameters(DEFAULT_SEED) {
            let c = T::from_i64(c);
            let sheared: Vec<Poly<T>> = affine.iter().map(|f| shear(f, &c)).collect();
            if !sheared.iter().all(is_monic_in_y) {
                continue;
            }
            for (i, f) in sheared.iter().enumerate() {
                if f.deg() > 1 && discriminant_like(f, 1).is_zero() {
                    return Err(Error::InvalidConfiguration(format!("{} has a multiple factor", self.names[i])));
                }
            }
            for i in 0..sheared.len() {
                for j in i + 1..sheared.len() {
                    if resultant(&sheared[i], &sheared[j], 1).is_zero() {
                        return Err(Error::InvalidConfiguration(format!(
                            "{} and {} share a component",
                            self.names[i], self.names[j]
                        )));
                    }
                }
            }
            return Ok(());
        }
        Err(Error::ShearsExhausted(crate::algebra::shear::MAX_SHEARS))
    }
}

/// The `r × (r+2)` matrix with rows `(C_iX, C_iY, 0, …, C_i, …, 0)`.
pub fn darboux_matrix<T: Scalar>(cfg: &CurveConfiguration<T>) -> Vec<Vec<Poly<T>>> {
    let r = cfg.len();
    cfg.components()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut row = vec![Poly::zero(3); r + 2];
            row[0] = c.derivative(0);
            row[1] = c.derivative(1);
            row[2 + i] = c.clone();
            row
        })
        .collect()
}

/// A homogeneous solution `(P, Q, K₁, …, K_r)` of the Darboux matrix
/// identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxSolution<T> {
    pub p: Poly<T>,
    pub q: Poly<T>,
    pub cofactors: Vec<Poly<T>>,
}

impl<T: Scalar> DarbouxSolution<T> {
    /// `P(x, y, 1) dx + Q(x, y, 1) dy`.
    pub fn affine_form(&self) -> Form1<T> {
        Form1::affine(self.p.dehomogenize_last(), self.q.dehomogenize_last())
    }

    /// The vector `M · (Q, -P, -K₁, …, -K_r)ᵗ`.
    pub fn residual(&self, cfg: &CurveConfiguration<T>) -> Vec<Poly<T>> {
        let m = darboux_matrix(cfg);
        let mut v = vec![self.q.clone(), -&self.p];
        v.extend(self.cofactors.iter().map(|k| -k));
        m.iter().map(|row| row.iter().zip(&v).fold(Poly::zero(3), |acc, (a, b)| &acc + &(a * b))).collect()
    }
}

/// Degree-`d` forms admitting every component as an integral curve.
#[derive(Debug, Clone)]
pub struct SolutionSpace<T> {
    pub degree: u32,
    pub basis: Vec<DarbouxSolution<T>>,
    /// Dimension of the trivial subspace `F · dC`, `deg F = d - e + 1`.
    pub trivial_dimension: usize,
}

impl<T> SolutionSpace<T> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The headline number: dimension modulo trivial forms.
    pub fn dimension_mod_trivial(&self) -> usize {
        self.basis.len() - self.trivial_dimension
    }
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Solves `C_iX Q - C_iY P - C_i K_i = 0` for homogeneous `P, Q` of degree `d`
/// and `K_i` of degree `d - 1`, by linear algebra on monomial coefficients.
pub fn solve_inverse<T: Scalar>(cfg: &CurveConfiguration<T>, d: u32) -> Result<SolutionSpace<T>> {
    if d == 0 {
        return Err(Error::Precondition("form degree must be at least 1".into()));
    }
    let r = cfg.len();
    let mons_d = monomials_of_degree(3, d);
    let mons_k = monomials_of_degree(3, d - 1);
    let nd = mons_d.len();
    let nk = mons_k.len();
    let ncols = 2 * nd + r * nk;
    // unknown layout: P | Q | K_1 | … | K_r
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (i, c) in cfg.components().iter().enumerate() {
        let cx = c.derivative(0);
        let cy = c.derivative(1);
        let out_deg = c.deg() - 1 + d;
        let out_mons = monomials_of_degree(3, out_deg);
        let index = |e: &Exponent| out_mons.iter().position(|m| m == e).expect("degree matches");
        let mut block = vec![vec![T::zero(); ncols]; out_mons.len()];
        let mut put = |poly: &Poly<T>, m: &Exponent, col: usize, sign: bool| {
            for (e, a) in poly.terms() {
                let f: Exponent = e.iter().zip(m).map(|(x, y)| x + y).collect();
                let row = index(&f);
                let v = if sign { a.clone() } else { -a.clone() };
                block[row][col] = block[row][col].clone() + v;
            }
        };
        for (j, m) in mons_d.iter().enumerate() {
            put(&cy, m, j, false); // -C_Y P
            put(&cx, m, nd + j, true); // C_X Q
        }
        for (j, m) in mons_k.iter().enumerate() {
            put(c, m, 2 * nd + i * nk + j, false); // -C_i K_i
        }
        rows.extend(block);
    }
    let kernel = nullspace(&rows, ncols);
    let from_slice = |v: &[T], mons: &[Exponent]| Poly::from_terms(3, mons.iter().cloned().zip(v.iter().cloned()));
    let basis = kernel
        .iter()
        .map(|v| DarbouxSolution {
            p: from_slice(&v[..nd], &mons_d),
            q: from_slice(&v[nd..2 * nd], &mons_d),
            cofactors: (0..r).map(|i| from_slice(&v[2 * nd + i * nk..2 * nd + (i + 1) * nk], &mons_k)).collect(),
        })
        .collect();
    let e = cfg.total_degree() as i64;
    let trivial_dimension = binom2(d as i64 - e + 3) as usize;
    Ok(SolutionSpace { degree: d, basis, trivial_dimension })
}

/// `F · dC` for the product `C` of all components: the trivial forms.
pub fn trivial_form<T: Scalar>(cfg: &CurveConfiguration<T>, f: &Poly<T>) -> (Poly<T>, Poly<T>) {
    let c = cfg.product();
    (f * &c.derivative(0), f * &c.derivative(1))
}

/// `K` with `dC ∧ ω = C·K`.
pub fn cofactor<T: Scalar>(c: &Poly<T>, w: &Form1<T>) -> Result<Form2<T>> {
    let dc = Form1::gradient(w.chart, c);
    let k = dc.wedge(w)?;
    match k.c.exact_divide(c) {
        Ok(q) => Ok(Form2::new(w.chart, q)),
        Err(e) => Err(Error::NotIntegral {
            curve: c.to_string_with(&w.chart.coordinates()),
            remainder: e.remainder.to_string_with(&w.chart.coordinates()),
        }),
    }
}

pub fn is_integral_curve<T: Scalar>(c: &Poly<T>, w: &Form1<T>) -> bool {
    cofactor(c, w).is_ok()
}

/// `binom(d-e+3, 2) + binom(d+1, 2) - (e-1)² + deg X`, the first summand
/// being zero when `e > d + 1`.
pub fn expected_dimension(e: i64, d: i64, deg_x: i64) -> i64 {
    let first = if e > d + 1 { 0 } else { binom2(d - e + 3) };
    first + binom2(d + 1) - (e - 1) * (e - 1) + deg_x
}

/// Outcome of checking `Σ λ_i K_i + λ_{r+1} dω ≡ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate<T> {
    pub lambda: Vec<T>,
    pub cofactors: Vec<Form2<T>>,
    pub d_omega: Form2<T>,
    pub exponents: Exponents<T>,
}

/// `∏ C_i^{α_i}` is an integrating factor, or `∏ C_i^{λ_i}` a first integral.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponents<T> {
    IntegratingFactor(Vec<T>),
    FirstIntegral(Vec<T>),
}

impl<T: Scalar> fmt::Display for Exponents<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (label, v) = match self {
            Exponents::IntegratingFactor(v) => ("integrating factor exponents", v),
            Exponents::FirstIntegral(v) => ("first integral exponents", v),
        };
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        write!(f, "{label}: ({})", s.join(", "))
    }
}

/// Verifies the relation as a polynomial identity on the affine chart.
/// `components` are affine equations.
pub fn verify_relation<T: Scalar>(
    w: &Form1<T>,
    components: &[Poly<T>],
    lambda: &[T],
) -> Result<RelationCertificate<T>> {
    let r = components.len();
    if lambda.len() != r + 1 {
        return Err(Error::Precondition(format!("relation needs {} coefficients", r + 1)));
    }
    if lambda.iter().all(|l| l.is_zero()) {
        return Err(Error::Precondition("the zero relation certifies nothing".into()));
    }
    let cofactors = components.iter().map(|c| cofactor(c, w)).collect::<Result<Vec<_>>>()?;
    let d_omega = w.exterior_derivative();
    let mut q = d_omega.c.scale(&lambda[r]);
    for (k, l) in cofactors.iter().zip(lambda) {
        q += &k.c.scale(l);
    }
    if !q.is_zero() {
        return Err(Error::RelationFails(q.to_string_with(&w.chart.coordinates())));
    }
    let last = lambda[r].clone();
    let exponents = match last.inverse() {
        Some(inv) => Exponents::IntegratingFactor(lambda[..r].iter().map(|l| -(l.clone() * inv.clone())).collect()),
        None => Exponents::FirstIntegral(lambda[..r].to_vec()),
    };
    Ok(RelationCertificate { lambda: lambda.to_vec(), cofactors, d_omega, exponents })
}

/// `K_{CD} = K_C + K_D` for coprime integral curves `C, D`.
pub fn cofactor_additivity_check<T: Scalar>(c: &Poly<T>, d: &Poly<T>, w: &Form1<T>) -> Result<bool> {
    if c == d || c.exact_divide(d).is_ok() || d.exact_divide(c).is_ok() {
        return Err(Error::Precondition("the curves must be coprime".into()));
    }
    let kc = cofactor(c, w)?;
    let kd = cofactor(d, w)?;
    let kcd = cofactor(&(c * d), w)?;
    Ok(kcd.c == &kc.c + &kd.c)
}

/// Monomial index helper shared with other modules: position of `e` among
/// the degree-`deg(e)` monomials in three variables.
pub fn monomial_index(e: &Exponent) -> usize {
    monomials_of_degree(3, exponent_degree(e)).iter().position(|m| m == e).expect("monomial")
}

/// Converts a homogeneous 2-form coefficient to the affine chart.
pub fn affine_form2<T: Scalar>(k: &Poly<T>) -> Form2<T> {
    Form2::new(Chart::Affine, k.dehomogenize_last())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::scalar::{q, Q};

    fn h(s: &str) -> Poly<Q> {
        parse_poly(s, &["x", "y", "z"]).unwrap()
    }
    fn a(s: &str) -> Poly<Q> {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn cusp_cofactor() {
        let w = Form1::affine(a("-2y"), a("3x"));
        assert_eq!(cofactor(&a("x^2 - y^3"), &w).unwrap().c, a("6"));
        let c = a("x^3 + x*y - 2");
        assert!(cofactor(&c, &Form1::gradient(Chart::Affine, &c)).unwrap().c.is_zero());
        let rot = Form1::affine(a("y"), a("-x"));
        assert!(matches!(cofactor(&a("x^2 + y^2 - 1"), &rot), Err(Error::NotIntegral { .. })));
        assert!(!is_integral_curve(&a("x^2 + y^2 - 1"), &rot));
    }

    #[test]
    fn expected_dimension_formula() {
        assert_eq!(expected_dimension(6, 3, 20), 1);
        assert_eq!(expected_dimension(6, 3, 19), 0);
        assert_eq!(expected_dimension(2, 1, 0), 1);
    }

    #[test]
    fn circle_in_degree_one() {
        let cfg = CurveConfiguration::new(vec!["C".into()], vec![h("x^2 + y^2 - z^2")]).unwrap();
        let s = solve_inverse(&cfg, 1).unwrap();
        // only the exact form dC survives
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.trivial_dimension, 1);
        let w = s.basis[0].affine_form();
        assert!(w.exterior_derivative().c.is_zero());
        for b in &s.basis {
            assert!(b.residual(&cfg).iter().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn configuration_validation() {
        assert!(CurveConfiguration::new(vec!["C".into()], vec![h("(x - y)^2*z")]).is_err());
        assert!(CurveConfiguration::new(vec!["C".into()], vec![h("(x - y)^2 + z^2")]).is_ok());
        assert!(CurveConfiguration::new(vec!["C".into()], vec![h("(x - y)^2")]).is_err());
        let two = CurveConfiguration::new(vec!["A".into(), "B".into()], vec![h("x*y - z^2"), h("2x*y - 2z^2")]);
        assert!(two.is_err());
    }

    #[test]
    fn relation_on_the_cusp() {
        let w = Form1::affine(a("-2y"), a("3x"));
        let comps = [a("x^2 - y^3")];
        let ok = verify_relation(&w, &comps, &[q(-5), q(6)]).unwrap();
        assert_eq!(ok.exponents, Exponents::IntegratingFactor(vec![q(5) / q(6)]));
        assert!(matches!(verify_relation(&w, &comps, &[q(1), q(1)]), Err(Error::RelationFails(_))));
        let c = a("x*y + 1");
        let exact = Form1::gradient(Chart::Affine, &c);
        let fi = verify_relation(&exact, &[c], &[q(0), q(1)]).unwrap();
        assert_eq!(fi.exponents, Exponents::IntegratingFactor(vec![q(0)]));
    }

    #[test]
    fn additivity_on_lines() {
        // x and y are integral curves of a·y dx + b·x dy
        let w = Form1::affine(a("2y"), a("-5x"));
        assert!(cofactor_additivity_check(&a("x"), &a("y"), &w).unwrap());
        assert!(cofactor_additivity_check(&a("x"), &a("x"), &w).is_err());
    }
}
