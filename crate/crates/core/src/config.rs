//! Job configuration files.
//!
//! One directive per line, `#` starts a comment:
//!
//! ```text
//! construction 11_2
//! field QQ
//! curve C4 = (x*y - z^2)^2 - x*z^3
//! parametrized Q4 = s^4, s*t^3, (s - t)^2*(s + 4*t)^2
//! contact C4 = F ; G ; H
//! substitute z = z - 4*y
//! components C4, C2
//! point A = (1:0:0) type D5 components C4
//! form w = [P] dx + [Q] dy
//! form printed translated = [P] dx + [Q] dy
//! normal printed GF(29) = [P] dx + [Q] dy
//! degree 3
//! prime 29
//! expect kernel (2, 1, 2, -2)
//! expect zero (71:10:51)
//! expect dimension 1
//! expect deg_x 20
//! expect rank 11
//! infinity L
//! columns z, C4, C2, dw
//! row A = 2, 6, 0, 5
//! family lambda = 1
//! note free text
//! ```
//!
//! Curves and declared points are written in the original coordinates; the
//! substitution moves them to working coordinates, in which the line at
//! infinity is `z = 0`. Forms, expected zeros and kernels refer to working
//! coordinates. A declared type is that of `C ∪ L∞` at the point. A form
//! marked `translated` has its expected zero moved to the origin.
//!
//! `row` lines give a printed `M_η′`, projection centre included, with the
//! columns listed by `columns`: curve names, `z` (or the curve named by
//! `infinity`) for `K_z`, and `dw` for `dω`.

use std::path::Path;

use num_traits::Zero;

use crate::algebra::form::Form1;
use crate::algebra::linalg::rref;
use crate::algebra::parse::{parse_poly, parse_rational, FieldSpec};
use crate::algebra::poly::Poly;
use crate::algebra::scalar::{Scalar, Q};
use crate::blueprint::implicitize;
use crate::darboux::CurveConfiguration;
use crate::error::{Error, Result};
use crate::geometry::ade::AdeType;
use crate::geometry::points::DeclaredPoint;
use crate::projective::ProjPoint;

const XYZ: [&str; 3] = ["x", "y", "z"];

/// A simultaneous linear substitution of `x, y, z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    images: [Poly<Q>; 3],
    /// Rows of the matrix `S` with `old = S · new`.
    matrix: [[Q; 3]; 3],
    inverse: [[Q; 3]; 3],
}

impl Substitution {
    pub fn new(images: [Poly<Q>; 3]) -> Result<Self> {
        let mut matrix: [[Q; 3]; 3] = Default::default();
        for (r, img) in images.iter().enumerate() {
            if !img.is_zero() && (!img.is_homogeneous() || img.deg() != 1) {
                return Err(Error::Config(format!("substitution image {img} is not a linear form")));
            }
            for c in 0..3 {
                let mut e = smallvec::smallvec![0, 0, 0];
                e[c] = 1;
                matrix[r][c] = img.coeff(&e);
            }
        }
        let aug: Vec<Vec<Q>> = (0..3)
            .map(|r| {
                let mut row = matrix[r].to_vec();
                row.extend((0..3).map(|c| if r == c { Q::from_i64(1) } else { Q::zero() }));
                row
            })
            .collect();
        let (red, pivots) = rref(&aug);
        if pivots != [0, 1, 2] {
            return Err(Error::Config("substitution is not invertible".into()));
        }
        let mut inverse: [[Q; 3]; 3] = Default::default();
        for r in 0..3 {
            for c in 0..3 {
                inverse[r][c] = red[r][3 + c].clone();
            }
        }
        Ok(Substitution { images, matrix, inverse })
    }

    pub fn identity() -> Self {
        Substitution::new([0, 1, 2].map(|i| Poly::var(3, i))).expect("identity")
    }

    /// `f ∘ S`, the equation in working coordinates.
    pub fn apply(&self, f: &Poly<Q>) -> Poly<Q> {
        f.substitute(&self.images)
    }

    /// Working coordinates of a point given in original coordinates.
    pub fn point(&self, p: &ProjPoint<Q>) -> ProjPoint<Q> {
        let v: Vec<Q> = (0..3)
            .map(|r| (0..3).fold(Q::zero(), |acc, c| acc + self.inverse[r][c].clone() * p.coords[c].clone()))
            .collect();
        ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone())
    }

    /// Original coordinates of a point given in working coordinates.
    pub fn original_point(&self, p: &ProjPoint<Q>) -> ProjPoint<Q> {
        let v: Vec<Q> = (0..3)
            .map(|r| (0..3).fold(Q::zero(), |acc, c| acc + self.matrix[r][c].clone() * p.coords[c].clone()))
            .collect();
        ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone())
    }
}

#[derive(Debug, Clone)]
pub struct FormEntry {
    pub name: String,
    pub form: Form1<Q>,
    pub translated: bool,
}

#[derive(Debug, Clone)]
pub struct NormalEntry {
    pub name: String,
    pub prime: u64,
    pub form: Form1<Q>,
}

/// A symmetric matrix `[[F, G], [G, H]]` whose determinant should be a
/// multiple of a curve.
#[derive(Debug, Clone)]
pub struct ContactEntry {
    pub curve: String,
    pub entries: [Poly<Q>; 3],
}

#[derive(Debug, Clone)]
pub struct PointEntry {
    pub label: String,
    pub point: ProjPoint<Q>,
    pub expected_type: Option<AdeType>,
    pub components: Option<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct PrintedRow {
    pub label: String,
    pub entries: Vec<Q>,
}

#[derive(Debug, Clone, Default)]
pub struct Expectations {
    pub kernel: Option<Vec<Q>>,
    pub zero: Option<ProjPoint<Q>>,
    pub dimension: Option<usize>,
    pub deg_x: Option<u32>,
    pub rank: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub construction: Option<String>,
    pub field: FieldSpec,
    pub curves: Vec<(String, Poly<Q>)>,
    pub contacts: Vec<ContactEntry>,
    pub substitution: Substitution,
    pub components: Vec<String>,
    pub points: Vec<PointEntry>,
    pub forms: Vec<FormEntry>,
    pub normals: Vec<NormalEntry>,
    pub degree: Option<u32>,
    pub prime: Option<u64>,
    pub expect: Expectations,
    pub family: Option<String>,
    pub infinity: Option<String>,
    pub printed_columns: Option<Vec<String>>,
    pub rows: Vec<PrintedRow>,
    pub notes: Vec<String>,
}

/// Parses `[P] dx + [Q] dy` in the affine chart.
pub fn parse_form(s: &str) -> Result<Form1<Q>> {
    let bad = || Error::Config(format!("expected `[P] dx + [Q] dy`, got {s:?}"));
    let s = s.trim();
    let rest = s.strip_prefix('[').ok_or_else(bad)?;
    let (p, rest) = rest.split_once(']').ok_or_else(bad)?;
    let rest = rest.trim_start().strip_prefix("dx").ok_or_else(bad)?.trim_start();
    let (sign, rest) = match rest.chars().next() {
        Some('+') => (1, &rest[1..]),
        Some('-') => (-1, &rest[1..]),
        _ => return Err(bad()),
    };
    let rest = rest.trim_start().strip_prefix('[').ok_or_else(bad)?;
    let (q, rest) = rest.split_once(']').ok_or_else(bad)?;
    if rest.trim() != "dy" {
        return Err(bad());
    }
    let v = ["x", "y"];
    let q = parse_poly(q, &v)?;
    Ok(Form1::affine(parse_poly(p, &v)?, if sign < 0 { -q } else { q }))
}

fn parse_vector(s: &str) -> Result<Vec<Q>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Config(format!("expected (a, b, …), got {s:?}")))?;
    inner.split(',').map(|c| parse_rational(c).map_err(Error::from)).collect()
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(|n| n.trim().to_string()).filter(|n| !n.is_empty()).collect()
}

fn name_ok(n: &str) -> bool {
    !n.is_empty() && n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_point_entry(rest: &str) -> Result<PointEntry> {
    let (label, rest) = rest.split_once('=').ok_or_else(|| Error::Config("point needs `LABEL = (a:b:c)`".into()))?;
    let close = rest.find(')').ok_or_else(|| Error::Config("unterminated point".into()))?;
    let point: ProjPoint<Q> = rest[..=close].parse()?;
    let mut expected_type = None;
    let mut components = None;
    let tail = rest[close + 1..].trim();
    let mut words = tail.splitn(2, char::is_whitespace);
    let mut key = words.next().unwrap_or("");
    let mut remainder = words.next().unwrap_or("").trim();
    while !key.is_empty() {
        match key {
            "type" => {
                let (t, r) = remainder.split_once(char::is_whitespace).unwrap_or((remainder, ""));
                expected_type = Some(t.parse::<AdeType>().map_err(|e| Error::Config(format!("{e}")))?);
                remainder = r.trim();
            }
            "components" => {
                components = Some(split_names(remainder));
                remainder = "";
            }
            other => return Err(Error::Config(format!("unknown point attribute {other:?}"))),
        }
        let mut w = remainder.splitn(2, char::is_whitespace);
        key = w.next().unwrap_or("");
        remainder = w.next().unwrap_or("").trim();
    }
    Ok(PointEntry { label: label.trim().to_string(), point, expected_type, components })
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = JobConfig {
            construction: None,
            field: FieldSpec::Rationals,
            curves: Vec::new(),
            contacts: Vec::new(),
            substitution: Substitution::identity(),
            components: Vec::new(),
            points: Vec::new(),
            forms: Vec::new(),
            normals: Vec::new(),
            degree: None,
            prime: None,
            expect: Expectations::default(),
            family: None,
            infinity: None,
            printed_columns: None,
            rows: Vec::new(),
            notes: Vec::new(),
        };
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cfg.directive(line).map_err(|e| Error::Config(format!("line {}: {e}", no + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        JobConfig::parse(&text)
    }

    fn directive(&mut self, line: &str) -> Result<()> {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let named = |rest: &str| -> Result<(String, String)> {
            let (n, v) =
                rest.split_once('=').ok_or_else(|| Error::Config(format!("expected `NAME = …` in {rest:?}")))?;
            let n = n.trim().to_string();
            Ok((n, v.trim().to_string()))
        };
        match key {
            "construction" => self.construction = Some(rest.to_string()),
            "field" => self.field = rest.parse()?,
            "curve" => {
                let (n, v) = named(rest)?;
                if !name_ok(&n) {
                    return Err(Error::Config(format!("bad curve name {n:?}")));
                }
                self.curves.push((n, parse_poly(&v, &XYZ)?));
            }
            "parametrized" => {
                let (n, v) = named(rest)?;
                let forms =
                    v.split(',').map(|f| parse_poly(f, &["s", "t"])).collect::<std::result::Result<Vec<_>, _>>()?;
                let forms: [Poly<Q>; 3] =
                    forms.try_into().map_err(|_| Error::Config("a parametrization has three coordinates".into()))?;
                self.curves.push((n, implicitize(&forms)?));
            }
            "contact" => {
                let (n, v) = named(rest)?;
                let entries = v.split(';').map(|e| parse_poly(e, &XYZ)).collect::<std::result::Result<Vec<_>, _>>()?;
                let entries: [Poly<Q>; 3] =
                    entries.try_into().map_err(|_| Error::Config("a contact matrix is `F ; G ; H`".into()))?;
                self.contacts.push(ContactEntry { curve: n, entries });
            }
            "substitute" => {
                let mut images = [0, 1, 2].map(|i| Poly::var(3, i));
                for part in rest.split(',') {
                    let (v, e) =
                        part.split_once('=').ok_or_else(|| Error::Config(format!("bad substitution {part:?}")))?;
                    let idx = XYZ
                        .iter()
                        .position(|n| *n == v.trim())
                        .ok_or_else(|| Error::Config(format!("cannot substitute {v:?}")))?;
                    images[idx] = parse_poly(e, &XYZ)?;
                }
                self.substitution = Substitution::new(images)?;
            }
            "components" => self.components = split_names(rest),
            "point" => self.points.push(parse_point_entry(rest)?),
            "form" => {
                let (head, v) = named(rest)?;
                let mut words = head.split_whitespace();
                let name = words.next().unwrap_or("").to_string();
                let translated = match words.next() {
                    None => false,
                    Some("translated") => true,
                    Some(w) => return Err(Error::Config(format!("unknown form attribute {w:?}"))),
                };
                self.forms.push(FormEntry { name, form: parse_form(&v)?, translated });
            }
            "normal" => {
                let (head, v) = named(rest)?;
                let (name, field) = head
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| Error::Config("normal needs `NAME GF(p) = …`".into()))?;
                let prime = match field.trim().parse()? {
                    FieldSpec::Prime(p) => p,
                    FieldSpec::Rationals => return Err(Error::Config("normal forms live over GF(p)".into())),
                };
                self.normals.push(NormalEntry { name: name.to_string(), prime, form: parse_form(&v)? });
            }
            "degree" => self.degree = Some(rest.parse().map_err(|_| Error::Config(format!("bad degree {rest:?}")))?),
            "prime" => {
                self.prime = match rest.parse::<FieldSpec>().or_else(|_| format!("GF({rest})").parse())? {
                    FieldSpec::Prime(p) => Some(p),
                    FieldSpec::Rationals => None,
                }
            }
            "expect" => {
                let (what, v) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let v = v.trim();
                let int = |v: &str| v.parse::<usize>().map_err(|_| Error::Config(format!("bad count {v:?}")));
                match what {
                    "kernel" => self.expect.kernel = Some(parse_vector(v)?),
                    "zero" => self.expect.zero = Some(v.parse()?),
                    "dimension" => self.expect.dimension = Some(int(v)?),
                    "deg_x" => self.expect.deg_x = Some(int(v)? as u32),
                    "rank" => self.expect.rank = Some(int(v)?),
                    other => return Err(Error::Config(format!("unknown expectation {other:?}"))),
                }
            }
            "family" => self.family = Some(rest.to_string()),
            "infinity" => self.infinity = Some(rest.to_string()),
            "columns" => self.printed_columns = Some(split_names(rest)),
            "row" => {
                let (label, v) = named(rest)?;
                let entries =
                    v.split(',').map(|c| parse_rational(c).map_err(Error::from)).collect::<Result<Vec<_>>>()?;
                self.rows.push(PrintedRow { label, entries });
            }
            "note" => self.notes.push(rest.to_string()),
            other => return Err(Error::Config(format!("unknown directive {other:?}"))),
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let known = |n: &str| self.curves.iter().any(|(c, _)| c == n);
        for n in &self.components {
            if !known(n) {
                return Err(Error::Config(format!("component {n:?} is not a declared curve")));
            }
        }
        for p in &self.points {
            for n in p.components.iter().flatten() {
                if !self.components.contains(n) {
                    return Err(Error::Config(format!("point {} names {n:?}, which is not a component", p.label)));
                }
            }
        }
        for c in &self.contacts {
            if !known(&c.curve) {
                return Err(Error::Config(format!("contact names unknown curve {:?}", c.curve)));
            }
        }
        if let Some(n) = &self.infinity {
            if !known(n) {
                return Err(Error::Config(format!("infinity names unknown curve {n:?}")));
            }
        }
        let width = self.printed_columns.as_ref().map(Vec::len).unwrap_or(self.components.len() + 2);
        if self.rows.iter().any(|r| r.entries.len() != width) {
            return Err(Error::Config(format!("printed rows must have {width} entries")));
        }
        let mut names: Vec<&str> =
            self.forms.iter().map(|f| f.name.as_str()).chain(self.normals.iter().map(|f| f.name.as_str())).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("form names must be distinct".into()));
        }
        Ok(())
    }

    /// A curve in original coordinates.
    pub fn curve(&self, name: &str) -> Result<&Poly<Q>> {
        self.curves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c)
            .ok_or_else(|| Error::Config(format!("unknown curve {name:?}")))
    }

    /// A curve in working coordinates.
    pub fn working_curve(&self, name: &str) -> Result<Poly<Q>> {
        Ok(self.substitution.apply(self.curve(name)?))
    }

    pub fn configuration<T: Scalar>(&self) -> Result<CurveConfiguration<T>> {
        if self.components.is_empty() {
            return Err(Error::Config("no components declared".into()));
        }
        let mut comps = Vec::new();
        for n in &self.components {
            comps.push(reduce_poly(&self.working_curve(n)?)?);
        }
        CurveConfiguration::new(self.components.clone(), comps)
    }

    pub fn declared_points<T: Scalar>(&self) -> Result<Vec<DeclaredPoint<T>>> {
        self.points
            .iter()
            .map(|p| {
                let w = self.substitution.point(&p.point);
                Ok(DeclaredPoint {
                    label: p.label.clone(),
                    point: reduce_point(&w)?,
                    expected_type: p.expected_type,
                    components: p.components.clone(),
                })
            })
            .collect()
    }

    /// For each working column `K_z, K_1, …, K_r, dω`, its position among
    /// the printed columns.
    pub fn printed_column_permutation(&self, working: &[String]) -> Result<Vec<usize>> {
        let Some(printed) = &self.printed_columns else {
            return Ok((0..working.len()).collect());
        };
        let keys: Vec<String> = printed
            .iter()
            .map(|c| {
                if c == "z" || Some(c) == self.infinity.as_ref() {
                    "K_z".to_string()
                } else if c == "dw" {
                    "dω".to_string()
                } else {
                    format!("K_{c}")
                }
            })
            .collect();
        working
            .iter()
            .map(|w| {
                keys.iter()
                    .position(|k| k == w)
                    .ok_or_else(|| Error::Config(format!("column {w} is missing from the printed columns")))
            })
            .collect()
    }

    pub fn form_entry(&self, name: &str) -> Result<&FormEntry> {
        self.forms.iter().find(|f| f.name == name).ok_or_else(|| Error::Config(format!("unknown form {name:?}")))
    }

    pub fn form<T: Scalar>(&self, name: &str) -> Result<Form1<T>> {
        reduce_form(&self.form_entry(name)?.form)
    }
}

pub fn reduce_poly<T: Scalar>(f: &Poly<Q>) -> Result<Poly<T>> {
    f.try_map_coeffs(T::from_rational).ok_or_else(|| {
        Error::FieldOfDefinition(format!("a denominator of {f} vanishes in characteristic {}", T::characteristic()))
    })
}

pub fn reduce_form<T: Scalar>(w: &Form1<Q>) -> Result<Form1<T>> {
    Ok(Form1::new(w.chart, reduce_poly(&w.a)?, reduce_poly(&w.b)?))
}

pub fn reduce_point<T: Scalar>(p: &ProjPoint<Q>) -> Result<ProjPoint<T>> {
    let ints = crate::algebra::scalar::primitive_integer_vector(&p.coords, false);
    let v: Option<Vec<T>> = ints.iter().map(|c| T::from_rational(&Q::from_integer(c.clone()))).collect();
    let v = v.expect("integers reduce");
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::FieldOfDefinition(format!("{p} reduces to zero")));
    }
    Ok(ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone()))
}
