//! The η and η′ invariants, the matrix `M_η′` and integrability
//! certificates.
//!
//! Rows of `M_η′` have the columns `(K_z, K_1, …, K_r, dω)`. At affine points
//! the `K_z` entry is 0 and the rest is `η`; at points at infinity the row is
//! `η′`, computed in the chart `X = 1` (or `Y = 1` for `(0:1:0)`).

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::form::{Chart, Form1, Form2};
use crate::algebra::linalg::{nullspace, rank};
use crate::algebra::poly::{monomials_of_degree, Poly};
use crate::algebra::residue::Residue;
use crate::algebra::scalar::Scalar;
use crate::darboux::{cofactor, verify_relation, CurveConfiguration, RelationCertificate};
use crate::error::{Error, Result};
use crate::geometry::points::{PointOnConfig, PointOrbit};
use crate::projective::{homogenize_form1, prime_form1, ProjPoint, XyChange};

/// A point of projective space given by a tuple, or the degenerate tuple
/// `(0 : … : 0)`.
#[derive(Debug, Clone)]
pub struct EtaValue<T>(Vec<T>);

impl<T: Scalar> EtaValue<T> {
    pub fn new(v: Vec<T>) -> Self {
        EtaValue(v)
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn normalized(&self) -> Vec<T> {
        T::normalize_projective(&self.0)
    }
}

impl<T: Scalar> PartialEq for EtaValue<T> {
    fn eq(&self, o: &Self) -> bool {
        self.len() == o.len() && proportional(&self.0, &o.0) && self.is_degenerate() == o.is_degenerate()
    }
}

impl<T: Scalar> fmt::Display for EtaValue<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.normalized().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", s.join(" : "))
    }
}

/// All 2×2 minors vanish.
fn proportional<S: Scalar>(a: &[S], b: &[S]) -> bool {
    (0..a.len())
        .all(|i| (i + 1..a.len()).all(|j| (a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone()).is_zero()))
}

/// `K_z = dz∧ω′ / z` in the basis `dy∧dz` of the chart at infinity.
pub fn k_z<T: Scalar>(w: &Form1<T>) -> Result<Form2<T>> {
    let wp = prime_form1(w);
    // dz ∧ (a dy + b dz) = -a dy∧dz
    let num = -&wp.a;
    num.exact_divide(&Poly::var(2, 1))
        .map(|c| Form2::new(Chart::Infinity, c))
        .map_err(|_| Error::Internal("dz∧ω′ is not divisible by z".into()))
}

/// `(k_z : k_1 : … : w) ↦ (k_1 - e_1 k_z : … : w - (s + 2) k_z)`.
pub fn project_eta<T: Scalar>(eta_prime: &EtaValue<T>, degrees: &[u32], s: u32) -> EtaValue<T> {
    let v = eta_prime.entries();
    assert_eq!(v.len(), degrees.len() + 2, "η′ has one entry per component plus two");
    let kz = v[0].clone();
    let mut out: Vec<T> =
        degrees.iter().zip(&v[1..]).map(|(&e, k)| k.clone() - T::from_i64(e as i64) * kz.clone()).collect();
    out.push(v[v.len() - 1].clone() - T::from_i64(s as i64 + 2) * kz);
    EtaValue(out)
}

/// Cofactors and `dω` in one chart at infinity, as polynomials in `(y, z)`.
#[derive(Debug, Clone)]
struct InfinityChart<T: Scalar> {
    k_z: Poly<T>,
    cofactors: Vec<Poly<T>>,
    d_omega: Poly<T>,
}

impl<T: Scalar> InfinityChart<T> {
    fn new(w: &Form1<T>, components: &[Poly<T>]) -> Result<Self> {
        let wp = prime_form1(w);
        let cofactors = components
            .iter()
            .map(|c| cofactor(&c.set_var(0, &T::one()).drop_var(0), &wp).map(|k| k.c))
            .collect::<Result<Vec<_>>>()?;
        Ok(InfinityChart { k_z: k_z(w)?.c, cofactors, d_omega: wp.exterior_derivative().c })
    }

    fn row(&self, yz: &[Residue<T>; 2]) -> Vec<Residue<T>> {
        let ev = |p: &Poly<T>| p.eval_in(yz, |c| Residue::constant(c.clone()));
        let mut row = vec![ev(&self.k_z)];
        row.extend(self.cofactors.iter().map(ev));
        row.push(ev(&self.d_omega));
        row
    }
}

/// Everything needed to evaluate η and η′ rows for one form and
/// configuration.
#[derive(Debug, Clone)]
pub struct EtaContext<T: Scalar> {
    form: Form1<T>,
    cfg: CurveConfiguration<T>,
    degree: u32,
    cofactors_h: Vec<Poly<T>>,
    d_omega_h: Poly<T>,
    omega_h: Vec<Poly<T>>,
    chart_x: InfinityChart<T>,
    chart_y: InfinityChart<T>,
}

impl<T: Scalar> EtaContext<T> {
    pub fn new(form: &Form1<T>, cfg: &CurveConfiguration<T>) -> Result<Self> {
        if form.chart != Chart::Affine {
            return Err(Error::Precondition("the form must be given on the affine chart".into()));
        }
        let s = form.degree();
        if s == 0 {
            return Err(Error::Precondition("the form must have positive degree".into()));
        }
        let h = |p: &Poly<T>| p.homogenize(s - 1).ok_or(Error::DegreeTooLow { target: s - 1, actual: p.deg() });
        let mut cofactors_h = Vec::new();
        for c in cfg.affine_components() {
            cofactors_h.push(h(&cofactor(&c, form)?.c)?);
        }
        let d_omega_h = h(&form.exterior_derivative().c)?;
        let omega_h = homogenize_form1(form, s)?.coeffs;
        let chart_x = InfinityChart::new(form, cfg.components())?;
        let swap = XyChange::swap();
        let swapped: Vec<Poly<T>> = cfg.components().iter().map(|c| swap.apply_poly(c)).collect();
        let chart_y = InfinityChart::new(&swap.apply_form1(form), &swapped)?;
        Ok(EtaContext {
            form: form.clone(),
            cfg: cfg.clone(),
            degree: s,
            cofactors_h,
            d_omega_h,
            omega_h,
            chart_x,
            chart_y,
        })
    }

    pub fn form(&self) -> &Form1<T> {
        &self.form
    }

    pub fn configuration(&self) -> &CurveConfiguration<T> {
        &self.cfg
    }

    pub fn form_degree(&self) -> u32 {
        self.degree
    }

    /// The projection centre `(1, e_1, …, e_r, s + 2)`.
    pub fn center(&self) -> Vec<i64> {
        let mut c = vec![1];
        c.extend(self.cfg.degrees().iter().map(|&e| e as i64));
        c.push(self.degree as i64 + 2);
        c
    }

    fn ev(p: &Poly<T>, a: &[Residue<T>; 3]) -> Residue<T> {
        p.eval_in(a, |c| Residue::constant(c.clone()))
    }

    /// Whether every coefficient of `ω^h` vanishes at `a`.
    pub fn is_zero_of_form(&self, a: &[Residue<T>; 3]) -> bool {
        self.omega_h.iter().all(|p| Self::ev(p, a).is_zero())
    }

    /// `(K_1^h(a), …, K_r^h(a), dω^h(a))`.
    pub fn eta(&self, a: &[Residue<T>; 3]) -> Vec<Residue<T>> {
        let mut v: Vec<Residue<T>> = self.cofactors_h.iter().map(|k| Self::ev(k, a)).collect();
        v.push(Self::ev(&self.d_omega_h, a));
        v
    }

    /// `(K_z(a), K_{C_1′}(a), …, d(ω′)(a))` in a chart at infinity
    /// containing `a`.
    pub fn eta_prime(&self, a: &[Residue<T>; 3]) -> Result<Vec<Residue<T>>> {
        if let Some(inv) = a[0].inverse() {
            let yz = [a[1].clone() * inv.clone(), a[2].clone() * inv];
            return Ok(self.chart_x.row(&yz));
        }
        if let Some(inv) = a[1].inverse() {
            let xz = [a[0].clone() * inv.clone(), a[2].clone() * inv];
            return Ok(self.chart_y.row(&xz));
        }
        Err(Error::Precondition("(0:0:1) is not in a chart at infinity".into()))
    }

    /// The row of `M_η′` at `a`.
    pub fn row(&self, a: &[Residue<T>; 3]) -> Result<Vec<Residue<T>>> {
        if a[2].is_zero() {
            self.eta_prime(a)
        } else {
            let mut row = vec![Residue::zero()];
            row.extend(self.eta(a));
            Ok(row)
        }
    }
}

fn lift<T: Scalar>(a: &ProjPoint<T>) -> [Residue<T>; 3] {
    a.coords.clone().map(Residue::constant)
}

fn lower<T: Scalar>(v: Vec<Residue<T>>) -> EtaValue<T> {
    EtaValue(v.into_iter().map(|c| c.as_constant().expect("rational point")).collect())
}

/// η at a rational point, from homogenized cofactors and `dω`.
pub fn eta_at<T: Scalar>(w: &Form1<T>, cfg: &CurveConfiguration<T>, a: &ProjPoint<T>) -> Result<EtaValue<T>> {
    Ok(lower(EtaContext::new(w, cfg)?.eta(&lift(a))))
}

/// η′ at a rational point of a chart at infinity.
pub fn eta_prime_at<T: Scalar>(w: &Form1<T>, cfg: &CurveConfiguration<T>, a: &ProjPoint<T>) -> Result<EtaValue<T>> {
    Ok(lower(EtaContext::new(w, cfg)?.eta_prime(&lift(a))?))
}

/// Rows over the base field spanning the same space as the rows at all
/// points of an orbit: `Tr(t^j · row)` for `j < deg m`.
pub fn trace_rows<T: Scalar>(row: &[Residue<T>], degree: usize) -> Vec<Vec<T>> {
    if row.iter().all(|c| c.modulus().is_none()) {
        return vec![row.iter().map(|c| c.as_constant().expect("constant")).collect()];
    }
    let m = row.iter().find_map(|c| c.modulus().cloned()).expect("modulus");
    let t = Residue::generator(&m);
    let mut power = Residue::one();
    let mut out = Vec::with_capacity(degree);
    for _ in 0..degree {
        out.push(row.iter().map(|c| (power.clone() * c.clone()).trace()).collect());
        power = power * t.clone();
    }
    out
}

/// One row of `M_η′`: a point or an orbit of points.
#[derive(Debug, Clone)]
pub struct EtaRow<T: Scalar> {
    pub label: String,
    pub point: String,
    /// Number of points in the orbit.
    pub multiplicity: usize,
    pub singularity: String,
    pub computed: Vec<Residue<T>>,
    pub geometric: Option<Vec<i64>>,
    /// Base-field rows spanning the rows of the orbit.
    pub basis: Vec<Vec<T>>,
}

impl<T: Scalar> EtaRow<T> {
    /// The computed row up to scaling, when that has entries in the base
    /// field.
    pub fn rational_row(&self) -> Option<Vec<T>> {
        let Some(pivot) = self.computed.iter().find_map(|c| c.inverse()) else {
            return self.computed.iter().map(|c| c.as_constant()).collect();
        };
        let v: Option<Vec<T>> = self.computed.iter().map(|c| (c.clone() * pivot.clone()).as_constant()).collect();
        v.map(|v| T::normalize_projective(&v))
    }

    fn display_entries(&self) -> Vec<String> {
        match self.rational_row() {
            Some(v) => v.iter().map(|c| c.to_string()).collect(),
            None => self.computed.iter().map(|c| c.to_string()).collect(),
        }
    }
}

/// The matrix `M_η′` with its projection-centre row.
#[derive(Debug, Clone)]
pub struct EtaMatrix<T: Scalar> {
    pub columns: Vec<String>,
    pub rows: Vec<EtaRow<T>>,
    pub center: Vec<i64>,
}

impl<T: Scalar> EtaMatrix<T> {
    /// Base-field matrix: the span rows of every orbit, then the centre.
    pub fn matrix(&self) -> Vec<Vec<T>> {
        let mut m: Vec<Vec<T>> = self.rows.iter().flat_map(|r| r.basis.iter().cloned()).collect();
        m.push(self.center.iter().map(|&c| T::from_i64(c)).collect());
        m
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix())
    }

    pub fn kernel(&self) -> Vec<Vec<T>> {
        nullspace(&self.matrix(), self.columns.len())
    }

    /// One normalized row per geometric point, orbits repeated.
    pub fn expanded_rows(&self) -> Vec<Option<Vec<T>>> {
        self.rows.iter().flat_map(|r| std::iter::repeat(r.rational_row()).take(r.multiplicity)).collect()
    }

    pub fn to_text(&self) -> String {
        let mut rows: Vec<(String, Vec<String>)> = Vec::new();
        for r in &self.rows {
            let tag = if r.multiplicity > 1 {
                format!("{} ({}, {} points)", r.label, r.singularity, r.multiplicity)
            } else {
                format!("{} ({})", r.label, r.singularity)
            };
            rows.push((tag, r.display_entries()));
        }
        rows.push(("center".into(), self.center.iter().map(|c| c.to_string()).collect()));
        let ncol = self.columns.len();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for (_, v) in &rows {
            for (i, e) in v.iter().enumerate().take(ncol) {
                widths[i] = widths[i].max(e.chars().count());
            }
        }
        let label_w = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
        let line = |label: &str, v: &[String]| {
            let cells: Vec<String> = v.iter().enumerate().map(|(i, e)| format!("{e:>w$}", w = widths[i])).collect();
            format!("  {label:<label_w$}  [ {} ]\n", cells.join("  "))
        };
        let mut out = line("", &self.columns);
        for (l, v) in &rows {
            out.push_str(&line(l, v));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "label": r.label,
                    "point": r.point,
                    "multiplicity": r.multiplicity,
                    "singularity": r.singularity,
                    "row": r.display_entries(),
                    "geometric": r.geometric,
                })
            })
            .collect();
        json!({ "columns": self.columns, "rows": rows, "center": self.center })
    }
}

/// Builds `M_η′` from computed rows at the given points, checking each row
/// against the weighted degrees of the point.
pub fn assemble_m<T: Scalar>(ctx: &EtaContext<T>, points: &[PointOnConfig<T>]) -> Result<EtaMatrix<T>> {
    let r = ctx.cfg.len();
    let mut columns = vec!["K_z".to_string()];
    columns.extend(ctx.cfg.names().iter().map(|n| format!("K_{n}")));
    columns.push("dω".into());
    let mut rows = Vec::new();
    for p in points {
        let a = p.orbit.coords();
        if !ctx.is_zero_of_form(a) {
            return Err(Error::NotAZero(format!("{} = {}", p.label, p.orbit)));
        }
        let computed = ctx.row(a)?;
        let geometric = p.geometric_row(r).ok();
        if let Some(g) = &geometric {
            let g: Vec<Residue<T>> = g.iter().map(|&c| Residue::from_i64(c)).collect();
            if !proportional(&computed, &g) {
                let shown: Vec<String> = computed.iter().map(|c| c.to_string()).collect();
                let want: Vec<String> = g.iter().map(|c| c.to_string()).collect();
                return Err(Error::GeometricMismatch {
                    point: p.label.clone(),
                    computed: format!("({})", shown.join(", ")),
                    predicted: format!("({})", want.join(", ")),
                });
            }
        }
        let basis = trace_rows(&computed, p.orbit.degree());
        rows.push(EtaRow {
            label: p.label.clone(),
            point: p.orbit.to_string(),
            multiplicity: p.orbit.degree(),
            singularity: p.union_type.to_string(),
            computed,
            geometric,
            basis,
        });
    }
    Ok(EtaMatrix { columns, rows, center: ctx.center() })
}

/// Whether the points impose independent conditions on curves of degree
/// `m`, i.e. lie on no such curve.
pub fn points_not_on_curve<T: Scalar>(points: &[PointOrbit<T>], m: u32) -> bool {
    let monomials = monomials_of_degree(3, m);
    let mut rows = Vec::new();
    for p in points {
        let vals: Vec<Residue<T>> = monomials
            .iter()
            .map(|e| Poly::monomial(3, e.clone(), T::one()).eval_in(p.coords(), |c| Residue::constant(c.clone())))
            .collect();
        rows.extend(trace_rows(&vals, p.degree()));
    }
    rank(&rows) == monomials.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the four checks: rank, general position, kernel, relation.
#[derive(Debug, Clone)]
pub struct IntegrabilityCertificate<T: Scalar> {
    pub matrix: EtaMatrix<T>,
    pub rank: usize,
    pub kernel: Option<Vec<T>>,
    pub relation: Option<RelationCertificate<T>>,
    pub stages: Vec<Stage>,
    pub verified: bool,
    form: String,
    components: Vec<(String, String)>,
}

/// Runs the η′ criterion and checks the resulting relation symbolically.
pub fn certify<T: Scalar>(ctx: &EtaContext<T>, points: &[PointOnConfig<T>]) -> Result<IntegrabilityCertificate<T>> {
    let r = ctx.cfg.len();
    let matrix = assemble_m(ctx, points)?;
    let rk = matrix.rank();
    let mut stages = Vec::new();
    let rank_ok = rk <= r + 1;
    stages.push(Stage { name: "rank", passed: rank_ok, detail: format!("rank {rk}, bound {}", r + 1) });

    let m = ctx.degree - 1;
    let orbits: Vec<PointOrbit<T>> = points.iter().map(|p| p.orbit.clone()).collect();
    let npts: usize = orbits.iter().map(|o| o.degree()).sum();
    let gp = points_not_on_curve(&orbits, m);
    stages.push(Stage {
        name: "general position",
        passed: gp,
        detail: format!("{npts} points {} on a curve of degree {m}", if gp { "do not lie" } else { "lie" }),
    });

    let mut kernel = None;
    if rank_ok {
        let basis = matrix.kernel();
        let v = T::normalize_projective(&basis[0]);
        let detail = if basis.len() > 1 {
            format!("kernel of dimension {}; using the first basis vector", basis.len())
        } else {
            "one-dimensional kernel".into()
        };
        kernel = Some(v);
        stages.push(Stage { name: "kernel", passed: true, detail });
    } else {
        stages.push(Stage { name: "kernel", passed: false, detail: "matrix has full column rank".into() });
    }

    let mut relation = None;
    match &kernel {
        Some(v) => {
            let lambda = &v[1..];
            match verify_relation(&ctx.form, &ctx.cfg.affine_components(), lambda) {
                Ok(cert) => {
                    stages.push(Stage { name: "relation", passed: true, detail: cert.exponents.to_string() });
                    relation = Some(cert);
                }
                Err(Error::RelationFails(rem)) if gp => {
                    return Err(Error::Internal(format!(
                        "the η′ criterion holds but the relation leaves the remainder {rem}"
                    )));
                }
                Err(Error::RelationFails(rem)) => {
                    stages.push(Stage { name: "relation", passed: false, detail: format!("remainder {rem}") });
                }
                Err(Error::Precondition(msg)) => {
                    stages.push(Stage { name: "relation", passed: false, detail: msg });
                }
                Err(e) => return Err(e),
            }
        }
        None => stages.push(Stage { name: "relation", passed: false, detail: "not run".into() }),
    }
    let verified = stages.iter().all(|s| s.passed);
    let components = ctx
        .cfg
        .names()
        .iter()
        .cloned()
        .zip(ctx.cfg.components().iter().map(|c| c.to_string_with(&["X", "Y", "Z"])))
        .collect();
    Ok(IntegrabilityCertificate {
        matrix,
        rank: rk,
        kernel,
        relation,
        stages,
        verified,
        form: ctx.form.to_string(),
        components,
    })
}

impl<T: Scalar> IntegrabilityCertificate<T> {
    fn join(v: &[T]) -> String {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("Darboux integrability certificate\n\n");
        out.push_str(&format!("form: {}\n", self.form));
        for (n, c) in &self.components {
            out.push_str(&format!("{n}: {c}\n"));
        }
        out.push_str("\nM_η′:\n");
        out.push_str(&self.matrix.to_text());
        out.push_str(&format!("\nrank: {}\n", self.rank));
        if let Some(v) = &self.kernel {
            out.push_str(&format!("kernel: ({})\n", Self::join(v)));
        }
        if let Some(rel) = &self.relation {
            out.push_str(&format!("relation λ on (K_1, …, K_r, dω): ({})\n", Self::join(&rel.lambda)));
            out.push_str(&format!("{}\n", rel.exponents));
        }
        out.push_str("\nchecks:\n");
        for s in &self.stages {
            out.push_str(&format!("  [{}] {}: {}\n", if s.passed { "pass" } else { "FAIL" }, s.name, s.detail));
        }
        out.push_str(&format!("\nverified: {}\n", self.verified));
        out
    }

    pub fn to_json(&self) -> Value {
        let strs = |v: &[T]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "form": self.form,
            "components": self.components.iter().map(|(n, c)| json!({"name": n, "equation": c})).collect::<Vec<_>>(),
            "matrix": self.matrix.to_json(),
            "rank": self.rank,
            "kernel": self.kernel.as_ref().map(|v| strs(v)),
            "lambda": self.relation.as_ref().map(|r| strs(&r.lambda)),
            "exponents": self.relation.as_ref().map(|r| r.exponents.to_string()),
            "stages": self.stages.iter().map(|s| json!({"name": s.name, "passed": s.passed, "detail": s.detail})).collect::<Vec<_>>(),
            "verified": self.verified,
        })
    }
}
