//! The construction pipeline for codimension-11 center components, with its
//! geometric helpers.
//!
//! [`run_blueprint`] takes a [`JobConfig`] through seven stages: the sextic,
//! the line at infinity, the form, the η′ certificate, the zeros, the
//! reduction mod `p` with focal values, and the family. A check that comes
//! out false is recorded and the run continues; an error halts the run and
//! is reported with the stage it happened in.

use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::algebra::form::Form1;
use crate::algebra::linalg::nullspace;
use crate::algebra::poly::{monomials_of_degree, Poly};
use crate::algebra::scalar::{primitive_integer_vector, Scalar, Q};
use crate::algebra::upoly::UPoly;
use crate::config::{reduce_form, JobConfig};
use crate::darboux::{expected_dimension, solve_inverse, CurveConfiguration};
use crate::error::{Error, Result};
use crate::eta::{certify, EtaContext, IntegrabilityCertificate};
use crate::frommer::{focal_report, normalize, NormalizedForm};
use crate::geometry::hilbert::deg_x;
use crate::geometry::points::{
    configuration_points, eta_geometric_points, expected_deg_x, DeclaredPoint, PointOnConfig,
};
use crate::projective::ProjPoint;
use crate::zeros::{
    cofactor_vanishing_check, d_omega_vanishes, find_zeros, zeros_outside_bound, ZeroLocation, ZeroReport,
};

/// Number of focal values computed at the reduction stage.
pub const FOCAL_COUNT: usize = 13;
/// Jacobian rank of a codimension-11 component.
pub const EXPECTED_RANK: usize = 11;
const SEXTIC_MILNOR: u32 = 18;

/// The image of `(s:t) ↦ (f₀ : f₁ : f₂)` for binary forms of one degree `n`,
/// which must be a curve of degree `n`.
pub fn implicitize(forms: &[Poly<Q>; 3]) -> Result<Poly<Q>> {
    let n = forms[0].deg();
    for f in forms {
        if f.arity() != 2 || f.is_zero() || !f.is_homogeneous() || f.deg() != n {
            return Err(Error::Precondition("a parametrization needs three nonzero binary forms of one degree".into()));
        }
    }
    if n == 0 {
        return Err(Error::Precondition("a constant map has no image curve".into()));
    }
    if !common_binary_factor(forms).is_constant() {
        return Err(Error::Precondition("the coordinate forms share a factor".into()));
    }
    let mons = monomials_of_degree(3, n);
    let samples = mons.len().max((n * n + 1) as usize) + 2;
    let params = (0..samples as i64 - 1).map(|i| [Q::from_i64(i), Q::from_i64(1)]).chain([[Q::from_i64(1), Q::zero()]]);
    let rows: Vec<Vec<Q>> = params
        .map(|st| {
            let image: Vec<Q> = forms.iter().map(|f| f.eval(&st)).collect();
            mons.iter().map(|e| Poly::monomial(3, e.clone(), Q::from_i64(1)).eval(&image)).collect()
        })
        .collect();
    let kernel = nullspace(&rows, mons.len());
    if kernel.len() != 1 {
        return Err(Error::Precondition(format!(
            "curves of degree {n} through the image form a space of dimension {}; the map is not birational",
            kernel.len()
        )));
    }
    let coeffs = primitive_integer_vector(&kernel[0], false);
    let f = Poly::from_terms(3, mons.into_iter().zip(coeffs.into_iter().map(Q::from_integer)));
    if !f.substitute(forms).is_zero() {
        return Err(Error::Internal("interpolated curve does not contain the image".into()));
    }
    Ok(f)
}

fn common_binary_factor(forms: &[Poly<Q>; 3]) -> Poly<Q> {
    let t_power = forms.iter().map(|f| f.terms().map(|(e, _)| e[1]).min().unwrap_or(0)).min().unwrap_or(0);
    let dehom = |f: &Poly<Q>| f.set_var(1, &Q::from_i64(1)).to_upoly(0).expect("univariate");
    let g = forms.iter().map(dehom).fold(UPoly::zero(), |acc, u| acc.gcd(&u));
    let mut out = Poly::from_upoly(2, 0, &g);
    for _ in 0..t_power {
        out = &out * &Poly::var(2, 1);
    }
    out
}

/// `c` with `F·H - G² = c·C`, `c ≠ 0`, when it exists.
pub fn contact_factor<T: Scalar>(m: &[Poly<T>; 3], c: &Poly<T>) -> Option<T> {
    let det = &(&m[0] * &m[2]) - &(&m[1] * &m[1]);
    let (e, lead) = c.leading_term()?;
    let factor = det.coeff(e) / lead.clone();
    (!factor.is_zero() && det == c.scale(&factor)).then_some(factor)
}

/// Whether `det [[F, G], [G, H]]` is a nonzero multiple of `C`.
pub fn contact_matrix_check<T: Scalar>(m: &[Poly<T>; 3], c: &Poly<T>) -> bool {
    contact_factor(m, c).is_some()
}

/// `c` with `f = c·g`, when it exists.
pub fn poly_ratio<T: Scalar>(f: &Poly<T>, g: &Poly<T>) -> Option<T> {
    let (e, lead) = g.leading_term()?;
    let c = f.coeff(e) / lead.clone();
    (*f == g.scale(&c)).then_some(c)
}

/// `c` with `a = c·b`, when it exists.
pub fn form_ratio<T: Scalar>(a: &Form1<T>, b: &Form1<T>) -> Option<T> {
    if a.chart != b.chart || b.is_zero() {
        return None;
    }
    let (e, lead) = b.a.leading_term().or_else(|| b.b.leading_term())?;
    let source = if b.a.is_zero() { &a.b } else { &a.a };
    let c = source.coeff(e) / lead.clone();
    (a.a == b.a.scale(&c) && a.b == b.b.scale(&c)).then_some(c)
}

/// The form with coprime integer coefficients, leading coefficient of `P`
/// positive.
pub fn primitive_form(w: &Form1<Q>) -> Form1<Q> {
    let coeffs: Vec<Q> = w.a.terms().chain(w.b.terms()).map(|(_, c)| c.clone()).collect();
    if coeffs.is_empty() {
        return w.clone();
    }
    let ints = primitive_integer_vector(&coeffs, true);
    let c = Q::from_integer(ints[0].clone()) / coeffs[0].clone();
    let c = if c < Q::zero() { -c } else { c };
    w.scale(&c)
}

/// `ω(x + a, y + b)`.
pub fn translate_form<T: Scalar>(w: &Form1<T>, a: &[T; 2]) -> Form1<T> {
    Form1::new(w.chart, w.a.translate(a), w.b.translate(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlueprintStage {
    Configuration,
    Bitangency,
    Construction,
    Certificate,
    Zeros,
    Reduction,
    Family,
}

impl BlueprintStage {
    pub const ALL: [BlueprintStage; 7] = [
        BlueprintStage::Configuration,
        BlueprintStage::Bitangency,
        BlueprintStage::Construction,
        BlueprintStage::Certificate,
        BlueprintStage::Zeros,
        BlueprintStage::Reduction,
        BlueprintStage::Family,
    ];

    pub fn key(self) -> &'static str {
        match self {
            BlueprintStage::Configuration => "configuration",
            BlueprintStage::Bitangency => "bitangency",
            BlueprintStage::Construction => "construction",
            BlueprintStage::Certificate => "certificate",
            BlueprintStage::Zeros => "zeros",
            BlueprintStage::Reduction => "reduction",
            BlueprintStage::Family => "family",
        }
    }

    /// The blueprint condition the stage establishes.
    pub fn condition(self) -> &'static str {
        match self {
            BlueprintStage::Configuration => "(1)",
            BlueprintStage::Bitangency => "(2)",
            BlueprintStage::Construction => "(3)",
            BlueprintStage::Certificate => "(a) (b)",
            BlueprintStage::Zeros => "(c)",
            BlueprintStage::Reduction => "(d)",
            BlueprintStage::Family => "(e)",
        }
    }
}

impl fmt::Display for BlueprintStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Declared data that is carried along without verification.
    Recorded,
}

impl CheckStatus {
    fn from_bool(b: bool) -> Self {
        if b {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Recorded => "recorded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: BlueprintStage,
    pub checks: Vec<Check>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

/// Where and why a run stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageFailure {
    pub stage: BlueprintStage,
    pub message: String,
}

/// Focal values of one normalized form over `GF(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocalSummary {
    pub source: String,
    pub prime: u64,
    pub normalized: String,
    pub values: Vec<String>,
    pub vanishing: usize,
    pub rank: usize,
}

impl FocalSummary {
    pub fn all_vanish(&self) -> bool {
        self.vanishing == self.values.len()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub construction: Option<String>,
    pub stages: Vec<StageReport>,
    pub halted: Option<StageFailure>,
    pub deg_x: Option<u32>,
    pub dimension: Option<usize>,
    /// The solved form in working coordinates, coprime integer coefficients.
    pub form: Option<Form1<Q>>,
    pub certificate: Option<IntegrabilityCertificate<Q>>,
    pub zeros: Option<ZeroReport<Q>>,
    pub focal: Vec<FocalSummary>,
    pub notes: Vec<String>,
}

impl PipelineReport {
    pub fn stage(&self, s: BlueprintStage) -> Option<&StageReport> {
        self.stages.iter().find(|r| r.stage == s)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.stages.iter().flat_map(|s| &s.checks).find(|c| c.name == name)
    }

    pub fn check_names(&self) -> impl Iterator<Item = &str> {
        self.stages.iter().flat_map(|s| &s.checks).map(|c| c.name.as_str())
    }

    /// Every stage ran and no check failed.
    pub fn passed(&self) -> bool {
        self.halted.is_none() && self.stages.iter().all(StageReport::passed)
    }

    pub fn kernel(&self) -> Option<&[Q]> {
        self.certificate.as_ref().and_then(|c| c.kernel.as_deref())
    }

    pub fn outside_zeros(&self) -> Vec<ProjPoint<Q>> {
        self.zeros.as_ref().map(|z| z.outside_points()).unwrap_or_default()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.construction {
            Some(id) => out.push_str(&format!("construction {id}\n")),
            None => out.push_str("blueprint run\n"),
        }
        if let Some(w) = &self.form {
            out.push_str(&format!("form: {w}\n"));
        }
        for s in &self.stages {
            out.push_str(&format!(
                "\n[{}] {} {}\n",
                if s.passed() { "pass" } else { "FAIL" },
                s.stage,
                s.stage.condition()
            ));
            for c in &s.checks {
                let tag = match c.status {
                    CheckStatus::Pass => "ok  ",
                    CheckStatus::Fail => "FAIL",
                    CheckStatus::Recorded => "note",
                };
                if c.detail.is_empty() {
                    out.push_str(&format!("  {tag} {}\n", c.name));
                } else {
                    out.push_str(&format!("  {tag} {}: {}\n", c.name, c.detail));
                }
            }
        }
        if let Some(h) = &self.halted {
            out.push_str(&format!("\nhalted at {}: {}\n", h.stage, h.message));
        }
        if let Some(cert) = &self.certificate {
            out.push_str("\nM_η′:\n");
            out.push_str(&cert.matrix.to_text());
        }
        if let Some(z) = &self.zeros {
            out.push('\n');
            out.push_str(&z.to_text());
        }
        for f in &self.focal {
            out.push_str(&format!(
                "\nfocal values of {} over GF({}): {} of {} vanish, Jacobian rank {}\n  normalized: {}\n",
                f.source,
                f.prime,
                f.vanishing,
                f.values.len(),
                f.rank,
                f.normalized
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("\nnote: {n}"));
        }
        if !self.notes.is_empty() {
            out.push('\n');
        }
        out.push_str(&format!("\nresult: {}\n", if self.passed() { "pass" } else { "FAIL" }));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "construction": self.construction,
            "passed": self.passed(),
            "halted": self.halted.as_ref().map(|h| json!({"stage": h.stage.key(), "message": h.message})),
            "stages": self.stages.iter().map(|s| json!({
                "stage": s.stage.key(),
                "condition": s.stage.condition(),
                "passed": s.passed(),
                "checks": s.checks.iter().map(|c| json!({
                    "name": c.name, "status": c.status.key(), "detail": c.detail,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "deg_x": self.deg_x,
            "dimension": self.dimension,
            "form": self.form.as_ref().map(|w| w.to_string()),
            "certificate": self.certificate.as_ref().map(|c| c.to_json()),
            "zeros": self.zeros.as_ref().map(|z| z.to_json()),
            "focal": self.focal.iter().map(|f| json!({
                "source": f.source,
                "prime": f.prime,
                "normalized": f.normalized,
                "values": f.values,
                "vanishing": f.vanishing,
                "rank": f.rank,
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

struct Run<'a> {
    job: &'a JobConfig,
    report: PipelineReport,
    cfg: Option<CurveConfiguration<Q>>,
    declared: Vec<DeclaredPoint<Q>>,
    points: Vec<PointOnConfig<Q>>,
}

fn fmt_vec(v: &[Q]) -> String {
    format!("({})", v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    a.len() == b.len() && primitive_integer_vector(a, false) == primitive_integer_vector(b, false)
}

impl Run<'_> {
    fn push(&mut self, stage: BlueprintStage, name: &str, status: CheckStatus, detail: String) {
        let check = Check { name: name.to_string(), status, detail };
        match self.report.stages.iter_mut().find(|s| s.stage == stage) {
            Some(s) => s.checks.push(check),
            None => self.report.stages.push(StageReport { stage, checks: vec![check] }),
        }
    }

    fn check(&mut self, stage: BlueprintStage, name: &str, ok: bool, detail: String) {
        self.push(stage, name, CheckStatus::from_bool(ok), detail);
    }

    fn cfg(&self) -> &CurveConfiguration<Q> {
        self.cfg.as_ref().expect("configuration stage ran")
    }

    fn configuration(&mut self) -> Result<()> {
        use BlueprintStage::Configuration as S;
        let cfg = self.job.configuration::<Q>()?;
        let e = cfg.total_degree();
        self.check(
            S,
            "sextic",
            e == 6,
            format!("components {} of degrees {:?}, total {e}", cfg.names().join(", "), cfg.degrees()),
        );
        for c in &self.job.contacts {
            let curve = self.job.curve(&c.curve)?;
            let factor = contact_factor(&c.entries, curve);
            let detail = match &factor {
                Some(f) => format!("det M = {f}·{}", c.curve),
                None => format!("det M is not a multiple of {}", c.curve),
            };
            self.check(S, &format!("contact matrix for {}", c.curve), factor.is_some(), detail);
        }
        self.declared = self.job.declared_points()?;
        let points = configuration_points(&cfg, &self.declared)?;
        let singular: Vec<&PointOnConfig<Q>> = points.iter().filter(|p| p.curve_milnor > 0).collect();
        let mu: u32 = singular.iter().map(|p| p.orbit.degree() as u32 * p.curve_milnor).sum();
        let simple = singular.iter().all(|p| p.union_type.is_supported());
        let listing: Vec<String> = singular
            .iter()
            .map(|p| {
                let n = p.orbit.degree();
                if n > 1 {
                    format!("{} μ={} ×{n}", p.label, p.curve_milnor)
                } else {
                    format!("{} μ={}", p.label, p.curve_milnor)
                }
            })
            .collect();
        self.check(S, "simple singularities", simple, listing.join(", "));
        self.check(S, "submaximal", mu == SEXTIC_MILNOR, format!("total Milnor number {mu}"));
        let dx = deg_x(&cfg.product())?;
        let from_points = expected_deg_x(&points);
        self.check(S, "deg X", dx == from_points, format!("Hilbert function {dx}, Tjurina sum {from_points}"));
        if let Some(want) = self.job.expect.deg_x {
            self.check(S, "deg X as expected", dx == want, format!("{dx}, expected {want}"));
        }
        self.report.deg_x = Some(dx);
        self.points = points;
        self.cfg = Some(cfg);
        Ok(())
    }

    fn bitangency(&mut self) -> Result<()> {
        use BlueprintStage::Bitangency as S;
        if let Some(name) = &self.job.infinity {
            let line = self.job.working_curve(name)?;
            let ok = poly_ratio(&line, &Poly::var(3, 2)).is_some();
            self.check(
                S,
                "line sent to infinity",
                ok,
                format!("{name} becomes {}", line.to_string_with(&["x", "y", "z"])),
            );
        }
        let at_inf: Vec<&PointOnConfig<Q>> =
            self.points.iter().filter(|p| p.orbit.is_at_infinity() && p.infinity_contact > 0).collect();
        let tangent: usize = at_inf.iter().filter(|p| p.infinity_contact >= 2).map(|p| p.orbit.degree()).sum();
        let listing: Vec<String> =
            at_inf.iter().map(|p| format!("{} {} I={}", p.label, p.orbit, p.infinity_contact)).collect();
        self.check(S, "bitangent", tangent >= 2, format!("{tangent} points of contact ≥ 2; {}", listing.join("; ")));
        Ok(())
    }

    fn construction(&mut self) -> Result<Form1<Q>> {
        use BlueprintStage::Construction as S;
        let d = self.job.degree.unwrap_or(3);
        let space = solve_inverse(self.cfg(), d)?;
        let dim = space.dimension_mod_trivial();
        let e = self.cfg().total_degree() as i64;
        let dx = self.report.deg_x.expect("deg X computed") as i64;
        let predicted = expected_dimension(e, d as i64, dx);
        self.report.dimension = Some(dim);
        self.check(
            S,
            "dimension",
            dim as i64 == predicted.max(0) || (predicted <= 0 && dim > 0),
            format!("{dim} modulo trivial forms, predicted {predicted}"),
        );
        if let Some(want) = self.job.expect.dimension {
            self.check(S, "dimension as expected", dim == want, format!("{dim}, expected {want}"));
        }
        if dim == 0 {
            return Err(Error::Precondition(format!("no degree-{d} form has every component as an integral curve")));
        }
        let w = primitive_form(&space.basis[0].affine_form());
        for entry in &self.job.forms {
            let (candidate, how) = if entry.translated {
                let zero = self.job.expect.zero.as_ref().ok_or_else(|| {
                    Error::Config(format!("form {} is translated but no zero is expected", entry.name))
                })?;
                let a = zero.to_affine().ok_or_else(|| Error::Config("the expected zero is at infinity".into()))?;
                (translate_form(&w, &a), format!("translated to {}", zero.integral_string()))
            } else {
                (w.clone(), "as solved".to_string())
            };
            let ratio = form_ratio(&entry.form, &candidate);
            let detail = match &ratio {
                Some(c) => format!("printed = {c} · solved form {how}"),
                None => format!("not proportional to the solved form {how}"),
            };
            self.check(S, &format!("printed form {}", entry.name), ratio.is_some(), detail);
            if entry.translated {
                let f = &entry.form;
                let constant = f.a.constant_term().is_zero() && f.b.constant_term().is_zero();
                let py = f.a.coeff(&smallvec::smallvec![0, 1]);
                let qx = f.b.coeff(&smallvec::smallvec![1, 0]);
                self.check(
                    S,
                    &format!("linear part of {}", entry.name),
                    constant && py == qx,
                    format!("constant term {}, ∂P/∂y = {py}, ∂Q/∂x = {qx}", if constant { "zero" } else { "nonzero" }),
                );
            }
        }
        self.report.form = Some(w.clone());
        Ok(w)
    }

    fn certificate(&mut self, w: &Form1<Q>) -> Result<()> {
        use BlueprintStage::Certificate as S;
        let ctx = EtaContext::new(w, self.cfg())?;
        let points = eta_geometric_points(self.cfg(), &self.declared)?;
        let cert = certify(&ctx, &points)?;
        for stage in &cert.stages {
            let name = match stage.name {
                "rank" => "(a) rank",
                "general position" => "(b) general position",
                other => other,
            };
            self.check(S, name, stage.passed, stage.detail.clone());
        }
        if let Some(printed) = &self.job.expect.kernel {
            let perm = self.job.printed_column_permutation(&cert.matrix.columns)?;
            let want: Vec<Q> = perm.iter().map(|&i| printed[i].clone()).collect();
            let ok = cert.kernel.as_deref().is_some_and(|k| proportional(k, &want));
            let got = cert.kernel.as_deref().map(fmt_vec).unwrap_or_else(|| "none".into());
            self.check(S, "kernel as expected", ok, format!("{got}, expected {}", fmt_vec(&want)));
        }
        if !self.job.rows.is_empty() {
            let (ok, detail) = self.compare_rows(&cert);
            self.check(S, "printed M_η′ rows", ok, detail);
        }
        self.report.certificate = Some(cert);
        Ok(())
    }

    /// Multiset comparison of projective rows, the printed ones permuted
    /// into working column order.
    fn compare_rows(&self, cert: &IntegrabilityCertificate<Q>) -> (bool, String) {
        let canon = |v: &[Q]| primitive_integer_vector(v, false);
        let mut computed = Vec::new();
        for r in &cert.matrix.rows {
            let row = match (&r.geometric, r.rational_row()) {
                (Some(g), _) => g.iter().map(|&c| Q::from_i64(c)).collect(),
                (None, Some(v)) => v,
                (None, None) => return (false, format!("row at {} is not rational", r.label)),
            };
            for _ in 0..r.multiplicity {
                computed.push(canon(&row));
            }
        }
        computed.push(canon(&cert.matrix.center.iter().map(|&c| Q::from_i64(c)).collect::<Vec<_>>()));
        let perm = match self.job.printed_column_permutation(&cert.matrix.columns) {
            Ok(p) => p,
            Err(e) => return (false, e.to_string()),
        };
        let mut printed: Vec<_> = self
            .job
            .rows
            .iter()
            .map(|r| canon(&perm.iter().map(|&i| r.entries[i].clone()).collect::<Vec<_>>()))
            .collect();
        computed.sort();
        printed.sort();
        let ok = computed == printed;
        (
            ok,
            format!(
                "{} computed rows, {} printed, {}",
                computed.len(),
                printed.len(),
                if ok { "equal up to row scaling" } else { "different" }
            ),
        )
    }

    fn zeros(&mut self, w: &Form1<Q>) -> Result<()> {
        use BlueprintStage::Zeros as S;
        let e = self.cfg().total_degree() as i64;
        let bound = zeros_outside_bound(w.degree() as i64, e, self.report.deg_x.expect("deg X") as i64);
        let report = find_zeros(w, Some(self.cfg()))?.with_bound(bound)?;
        let outside = report.weighted_outside_count();
        let s = w.degree() as usize;
        self.check(
            S,
            "(c) zero outside",
            outside > 0,
            format!("{outside} outside C ∪ L∞ with multiplicity, bound {bound}"),
        );
        self.check(
            S,
            "Bézout count",
            report.total_multiplicity() == s * s,
            format!("{} zeros with multiplicity", report.total_multiplicity()),
        );
        let rational = report.outside_points();
        if let Some(want) = &self.job.expect.zero {
            let shown: Vec<String> = rational.iter().map(|p| p.integral_string()).collect();
            self.check(
                S,
                "zero as expected",
                rational.contains(want),
                format!("outside zeros [{}], expected {}", shown.join(", "), want.integral_string()),
            );
        }
        for p in &rational {
            let k = cofactor_vanishing_check(w, self.cfg(), p)?;
            self.check(S, &format!("cofactors vanish at {}", p.integral_string()), k, String::new());
            let dw = d_omega_vanishes(w, self.cfg(), p)?;
            self.check(S, &format!("dω vanishes at {}", p.integral_string()), dw, String::new());
        }
        debug_assert!(report.at(ZeroLocation::Outside).count() >= rational.len());
        self.report.zeros = Some(report);
        Ok(())
    }

    fn reduction(&mut self, w: &Form1<Q>) -> Result<()> {
        use BlueprintStage::Reduction as S;
        let p = self.job.prime.unwrap_or(29);
        let rank = self.job.expect.rank.unwrap_or(EXPECTED_RANK);
        let zero = self.report.outside_zeros().into_iter().find_map(|z| z.to_affine());
        match zero {
            None => self.check(S, "(d) normalization", false, "no rational affine zero outside the curve".into()),
            Some(a) => {
                let summary = crate::with_prime_field!(p, F => reduce_and_normalize::<F>(w, &a))?;
                self.record_focal(summary, rank);
            }
        }
        for entry in &self.job.normals {
            let summary = crate::with_prime_field!(entry.prime, F => printed_normal::<F>(&entry.name, &entry.form))?;
            self.record_focal(summary, rank);
        }
        Ok(())
    }

    fn record_focal(&mut self, f: FocalSummary, rank: usize) {
        use BlueprintStage::Reduction as S;
        self.check(
            S,
            &format!("(d) focal values of {}", f.source),
            f.all_vanish(),
            format!("{} of {} vanish over GF({})", f.vanishing, f.values.len(), f.prime),
        );
        self.check(
            S,
            &format!("(d) Jacobian rank of {}", f.source),
            f.rank == rank,
            format!("{}, expected {rank}", f.rank),
        );
        self.report.focal.push(f);
    }

    fn family(&mut self) {
        let detail = self.job.family.clone().unwrap_or_else(|| "declared, not verified".into());
        self.push(BlueprintStage::Family, "(e) one-parameter family", CheckStatus::Recorded, detail);
    }

    fn all(&mut self) -> std::result::Result<(), StageFailure> {
        let at = |stage| move |e: Error| StageFailure { stage, message: e.to_string() };
        self.configuration().map_err(at(BlueprintStage::Configuration))?;
        self.bitangency().map_err(at(BlueprintStage::Bitangency))?;
        let w = self.construction().map_err(at(BlueprintStage::Construction))?;
        self.certificate(&w).map_err(at(BlueprintStage::Certificate))?;
        self.zeros(&w).map_err(at(BlueprintStage::Zeros))?;
        self.reduction(&w).map_err(at(BlueprintStage::Reduction))?;
        self.family();
        Ok(())
    }
}

fn summarize<F: Scalar>(source: String, f: &NormalizedForm<F>) -> Result<FocalSummary> {
    let r = focal_report(f, FOCAL_COUNT, true)?;
    Ok(FocalSummary {
        source,
        prime: F::characteristic(),
        normalized: f.to_string(),
        vanishing: r.values.iter().filter(|v| v.is_zero()).count(),
        values: r.values.iter().map(|v| v.to_string()).collect(),
        rank: r.rank.unwrap_or(0),
    })
}

fn reduce_and_normalize<F: Scalar>(w: &Form1<Q>, a: &[Q; 2]) -> Result<FocalSummary> {
    let wp: Form1<F> = reduce_form(w)?;
    let ap = [0, 1].map(|i| F::from_rational(&a[i]));
    let [Some(x), Some(y)] = ap else {
        return Err(Error::FieldOfDefinition(format!("the zero does not reduce mod {}", F::characteristic())));
    };
    let f = normalize(&wp, &[x, y])?;
    summarize("the solved form".into(), &f)
}

fn printed_normal<F: Scalar>(name: &str, w: &Form1<Q>) -> Result<FocalSummary> {
    let wp: Form1<F> = reduce_form(w)?;
    let f = NormalizedForm::from_form(&wp)?;
    summarize(format!("printed {name}"), &f)
}

/// Runs every stage on a configuration. Never panics on bad input: errors
/// end up in [`PipelineReport::halted`].
pub fn run_blueprint(job: &JobConfig) -> PipelineReport {
    let report = PipelineReport {
        construction: job.construction.clone(),
        stages: Vec::new(),
        halted: None,
        deg_x: None,
        dimension: None,
        form: None,
        certificate: None,
        zeros: None,
        focal: Vec::new(),
        notes: job.notes.clone(),
    };
    let mut run = Run { job, report, cfg: None, declared: Vec::new(), points: Vec::new() };
    if job.field != crate::algebra::parse::FieldSpec::Rationals {
        run.report.halted = Some(StageFailure {
            stage: BlueprintStage::Configuration,
            message: "the blueprint runs over QQ; the reduction prime is set with `prime`".into(),
        });
        return run.report;
    }
    if let Err(f) = run.all() {
        run.report.halted = Some(f);
    }
    run.report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn b(s: &str) -> Poly<Q> {
        parse_poly(s, &["s", "t"]).unwrap()
    }
    fn h(s: &str) -> Poly<Q> {
        parse_poly(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn conic_from_veronese() {
        let f = implicitize(&[b("s^2"), b("s*t"), b("t^2")]).unwrap();
        assert!(poly_ratio(&f, &h("x*z - y^2")).is_some());
    }

    #[test]
    fn common_factor_is_rejected() {
        assert!(implicitize(&[b("s^3"), b("s^2*t"), b("s*t^2")]).is_err());
        assert!(implicitize(&[b("s^2"), b("s^2"), b("t^2")]).is_err());
    }

    #[test]
    fn quartic_with_flex_and_hyperflex() {
        let f = implicitize(&[b("s^4"), b("s*t^3"), b("(s - t)^2*(s + 4*t)^2")]).unwrap();
        assert_eq!(f.deg(), 4);
        // oracle: direct substitution at a few parameter values
        for (s, t) in [(2, 3), (-1, 5), (7, -2)] {
            let st = [Q::from_i64(s), Q::from_i64(t)];
            let pt: Vec<Q> = [b("s^4"), b("s*t^3"), b("(s - t)^2*(s + 4*t)^2")].iter().map(|g| g.eval(&st)).collect();
            assert!(f.eval(&pt).is_zero());
        }
    }

    #[test]
    fn contact_matrices() {
        let m = [h("-x^2 - 4*x*y - 2*x*z - 4*y*z + 3*z^2"), h("2*x*y + x*z + 4*y*z - z^2"), h("-4*y*z - z^2")];
        let c4 = h("(x*y - z^2)^2 - x*z^3");
        assert_eq!(contact_factor(&m, &c4), Some(Q::from_i64(-4)));
        let id = [h("1"), h("0"), h("1")];
        assert!(contact_matrix_check(&id, &h("1")));
        let m2 = [h("x"), h("y"), h("z")];
        assert!(!contact_matrix_check(&m2, &h("x^2 + y^2 + z^2")));
    }
}
