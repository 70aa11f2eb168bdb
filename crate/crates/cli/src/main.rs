use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use darboux_core::algebra::form::Form1;
use darboux_core::algebra::parse::{parse_poly, FieldSpec};
use darboux_core::algebra::poly::Poly;
use darboux_core::algebra::upoly::RootField;
use darboux_core::blueprint::run_blueprint;
use darboux_core::config::{parse_form, reduce_form, reduce_point, reduce_poly, JobConfig};
use darboux_core::darboux::{cofactor, solve_inverse, CurveConfiguration};
use darboux_core::eta::{certify, eta_at, eta_prime_at, EtaContext};
use darboux_core::frommer::{focal_report, normalize, NormalizedForm};
use darboux_core::geometry::points::eta_geometric_points;
use darboux_core::projective::ProjPoint;
use darboux_core::zeros::find_zeros;
use darboux_core::{with_prime_field, Q};

mod fixtures;

#[derive(Parser)]
#[command(name = "darboux", version, about = "Darboux integrability certificates and focal values")]
struct Cli {
    /// Coefficient field: QQ or GF(p).
    #[arg(long, global = true, default_value = "QQ")]
    field: FieldSpec,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forms of a given degree having every declared component as an integral curve.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Cofactor of a curve with respect to a form.
    Cofactor {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Curve name from the config, or a polynomial in x, y (or x, y, z).
        #[arg(long)]
        curve: String,
        /// Form name from the config, or `[P] dx + [Q] dy`.
        #[arg(long)]
        form: String,
    },
    /// η of a form at a point, or η′ in the chart at infinity.
    Eta {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        form: String,
        /// Point label from the config, or `(a:b:c)`.
        #[arg(long)]
        point: String,
        /// Curves making up the configuration when no config is given.
        #[arg(long = "curve")]
        curves: Vec<String>,
        #[arg(long)]
        prime_chart: bool,
    },
    /// Assemble M_η′ and run the integrability certificate.
    Certify {
        #[arg(long)]
        config: PathBuf,
        /// Use this form instead of solving in the configured degree.
        #[arg(long)]
        form: Option<String>,
    },
    /// Zeros of a form, split by position relative to the curves and the line at infinity.
    Zeros {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        form: String,
    },
    /// Frommer focal values of a normalized form over GF(p).
    Frommer {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        form: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 13)]
        count: usize,
        #[arg(long)]
        jacobian: bool,
        /// Normalize at this affine zero first.
        #[arg(long)]
        zero: Option<String>,
    },
    /// Run the full pipeline on a bundled construction.
    Paper {
        #[arg(long)]
        construction: String,
    },
}

/// Text and JSON renderings of one command's result.
struct Output {
    text: String,
    json: Value,
}

fn load(path: &Option<PathBuf>) -> Result<Option<JobConfig>> {
    path.as_ref().map(|p| JobConfig::from_file(p).with_context(|| format!("reading {}", p.display()))).transpose()
}

fn require(path: &PathBuf) -> Result<JobConfig> {
    JobConfig::from_file(path).with_context(|| format!("reading {}", path.display()))
}

fn lookup_curve(job: Option<&JobConfig>, s: &str) -> Result<Poly<Q>> {
    if let Some(job) = job {
        if job.curves.iter().any(|(n, _)| n == s) {
            return Ok(job.working_curve(s)?);
        }
    }
    let bad = |e| anyhow!("curve {s:?}: {e}");
    if s.contains('z') {
        let f = parse_poly(s, &["x", "y", "z"]).map_err(bad)?;
        if !f.is_homogeneous() {
            bail!("curve {s:?} mentions z but is not homogeneous");
        }
        return Ok(f);
    }
    let f = parse_poly(s, &["x", "y"]).map_err(bad)?;
    let d = f.total_degree().ok_or_else(|| anyhow!("curve {s:?} is zero"))?;
    Ok(f.homogenize(d).expect("degree fits"))
}

fn lookup_form(job: Option<&JobConfig>, s: &str) -> Result<Form1<Q>> {
    if let Some(job) = job {
        if let Some(f) = job.forms.iter().find(|f| f.name == s) {
            return Ok(f.form.clone());
        }
        if let Some(f) = job.normals.iter().find(|f| f.name == s) {
            return Ok(f.form.clone());
        }
    }
    Ok(parse_form(s).with_context(|| format!("form {s:?}"))?)
}

fn lookup_point(job: Option<&JobConfig>, s: &str) -> Result<ProjPoint<Q>> {
    if let Some(job) = job {
        if let Some(p) = job.points.iter().find(|p| p.label == s) {
            return Ok(job.substitution.point(&p.point));
        }
    }
    Ok(s.parse().map_err(|e| anyhow!("point {s:?}: {e}"))?)
}

fn configuration<T: RootField>(job: Option<&JobConfig>, extra: &[String]) -> Result<CurveConfiguration<T>> {
    if !extra.is_empty() {
        let comps =
            extra.iter().map(|c| lookup_curve(job, c).and_then(|f| Ok(reduce_poly(&f)?))).collect::<Result<_>>()?;
        return Ok(CurveConfiguration::new(extra.to_vec(), comps)?);
    }
    match job {
        Some(job) => Ok(job.configuration()?),
        None => bail!("no curves: pass --config or --curve"),
    }
}

fn solve<T: RootField>(job: &JobConfig, degree: Option<u32>) -> Result<Output> {
    let cfg = configuration::<T>(Some(job), &[])?;
    let d = degree.or(job.degree).unwrap_or(3);
    let space = solve_inverse(&cfg, d)?;
    let forms: Vec<String> = space.basis.iter().map(|b| b.affine_form().to_string()).collect();
    let mut text = format!(
        "degree {d}: dimension {}, trivial {}, modulo trivial {}\n",
        space.dimension(),
        space.trivial_dimension,
        space.dimension_mod_trivial()
    );
    for f in &forms {
        text.push_str(&format!("  {f}\n"));
    }
    let json = json!({
        "degree": d,
        "dimension": space.dimension(),
        "trivial_dimension": space.trivial_dimension,
        "dimension_mod_trivial": space.dimension_mod_trivial(),
        "basis": forms,
    });
    Ok(Output { text, json })
}

fn cofactor_cmd<T: RootField>(job: Option<&JobConfig>, curve: &str, form: &str) -> Result<Output> {
    let c: Poly<T> = reduce_poly(&lookup_curve(job, curve)?)?;
    let w: Form1<T> = reduce_form(&lookup_form(job, form)?)?;
    let k = cofactor(&c.dehomogenize_last(), &w)?;
    let dw = w.exterior_derivative();
    Ok(Output {
        text: format!("K = {k}\ndω = {dw}\n"),
        json: json!({ "cofactor": k.to_string(), "d_omega": dw.to_string() }),
    })
}

fn eta_cmd<T: RootField>(
    job: Option<&JobConfig>,
    form: &str,
    point: &str,
    curves: &[String],
    prime_chart: bool,
) -> Result<Output> {
    let cfg = configuration::<T>(job, curves)?;
    let w: Form1<T> = reduce_form(&lookup_form(job, form)?)?;
    let a: ProjPoint<T> = reduce_point(&lookup_point(job, point)?)?;
    let v = if prime_chart { eta_prime_at(&w, &cfg, &a)? } else { eta_at(&w, &cfg, &a)? };
    let key = if prime_chart { "eta_prime" } else { "eta" };
    let entries: Vec<String> = v.entries().iter().map(|c| c.to_string()).collect();
    Ok(Output {
        text: format!("{} at {a} = {v}\n", if prime_chart { "η′" } else { "η" }),
        json: json!({ "point": a.to_string(), key: entries, "degenerate": v.is_degenerate() }),
    })
}

fn certify_cmd<T: RootField>(job: &JobConfig, form: Option<&str>) -> Result<Output> {
    let cfg = configuration::<T>(Some(job), &[])?;
    let w: Form1<T> = match form {
        Some(f) => reduce_form(&lookup_form(Some(job), f)?)?,
        None => {
            let space = solve_inverse(&cfg, job.degree.unwrap_or(3))?;
            let first = space.basis.first().ok_or_else(|| anyhow!("no form of the configured degree"))?;
            first.affine_form()
        }
    };
    let ctx = EtaContext::new(&w, &cfg)?;
    let points = eta_geometric_points(&cfg, &job.declared_points()?)?;
    let cert = certify(&ctx, &points)?;
    Ok(Output { text: cert.to_text(), json: json!({ "form": w.to_string(), "certificate": cert.to_json() }) })
}

fn zeros_cmd<T: RootField>(job: Option<&JobConfig>, form: &str) -> Result<Output> {
    let w: Form1<T> = reduce_form(&lookup_form(job, form)?)?;
    let cfg = match job {
        Some(j) if !j.components.is_empty() => Some(j.configuration::<T>()?),
        _ => None,
    };
    let report = find_zeros(&w, cfg.as_ref())?;
    Ok(Output { text: report.to_text(), json: report.to_json() })
}

fn frommer_cmd<T: RootField>(
    job: Option<&JobConfig>,
    form: &str,
    count: usize,
    with_jacobian: bool,
    zero: Option<&str>,
) -> Result<Output> {
    let w: Form1<T> = reduce_form(&lookup_form(job, form)?)?;
    let f = match zero {
        Some(z) => {
            let p: ProjPoint<T> = reduce_point(&lookup_point(job, z)?)?;
            let a = p.to_affine().ok_or_else(|| anyhow!("{p} is at infinity"))?;
            normalize(&w, &a)?
        }
        None => NormalizedForm::from_form(&w)?,
    };
    let report = focal_report(&f, count, with_jacobian)?;
    let mut json = report.to_json();
    json["normalized"] = json!(f.to_string());
    Ok(Output { text: format!("normalized: {f}\n{}", report.to_text()), json })
}

fn paper(id: &str) -> Result<Output> {
    let text = fixtures::source(id)
        .ok_or_else(|| anyhow!("unknown construction {id:?}; known: {}", fixtures::IDS.join(", ")))?;
    let job = JobConfig::parse(text)?;
    let report = run_blueprint(&job);
    Ok(Output { text: report.to_text(), json: report.to_json() })
}

/// Runs `$body` with `$t` bound to the scalar type of `$field`.
macro_rules! over_field {
    ($field:expr, $t:ident => $body:expr) => {
        match $field {
            FieldSpec::Rationals => {
                type $t = Q;
                $body
            }
            FieldSpec::Prime(p) => {
                with_prime_field!(p, $t => Ok::<_, darboux_core::Error>($body)).map_err(anyhow::Error::from).and_then(|r| r)
            }
        }
    };
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Solve { config, degree } => {
            let job = require(&config)?;
            over_field!(cli.field, T => solve::<T>(&job, degree))
        }
        Command::Cofactor { config, curve, form } => {
            let job = load(&config)?;
            over_field!(cli.field, T => cofactor_cmd::<T>(job.as_ref(), &curve, &form))
        }
        Command::Eta { config, form, point, curves, prime_chart } => {
            let job = load(&config)?;
            over_field!(cli.field, T => eta_cmd::<T>(job.as_ref(), &form, &point, &curves, prime_chart))
        }
        Command::Certify { config, form } => {
            let job = require(&config)?;
            over_field!(cli.field, T => certify_cmd::<T>(&job, form.as_deref()))
        }
        Command::Zeros { config, form } => {
            let job = load(&config)?;
            over_field!(cli.field, T => zeros_cmd::<T>(job.as_ref(), &form))
        }
        Command::Frommer { config, form, prime, count, jacobian, zero } => {
            let job = load(&config)?;
            over_field!(FieldSpec::Prime(prime), T => frommer_cmd::<T>(job.as_ref(), &form, count, jacobian, zero.as_deref()))
        }
        Command::Paper { construction } => paper(&construction),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let json = cli.json;
    let out = run(cli)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&out.json)?);
    } else {
        print!("{}", out.text);
    }
    Ok(())
}
