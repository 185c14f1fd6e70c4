//! Command implementations. Each command is split into a validating `plan_*`
//! step that touches no output file and a `run_*` step that computes and
//! writes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::{
    DensityScanConfig, FrameBoundsConfig, GeneratorsConfig, Loaded, SidedFunction,
    UncertaintyConfig, VerifyConfig,
};
use crate::analysis::{
    check_frame_inputs, equivalence_report_with, frame_bounds_estimate, projection_residual,
    system_gram, uncertainty_moments, BoundsMethod, EquivalenceReport, FrameBoundsReport, Grid,
    PhaseConvention,
};
use crate::error::{Error, Result};
use crate::funcmodel::{fmt17, unwarp_op, warp_op, write_samples_csv, Domain, FuncExpr};
use crate::params::{make_params, DilationParams};
use crate::systems::{md_to_gabor, GaborSystemSpec, IndexRange, MdSystemSpec, System};

/// Options shared by all config-driven commands.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub timestamp: bool,
}

/// What a finished command reports back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ToleranceExceeded(String),
}

fn unix_time(enabled: bool) -> Option<u64> {
    enabled.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Io(e.into()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn require_md(system: System, command: &str) -> Result<MdSystemSpec> {
    match system {
        System::Md(s) => Ok(s),
        System::Gabor(_) => Err(Error::Config(format!("`{command}` needs an md system"))),
    }
}

fn require_realline(grid: &Grid, what: &str) -> Result<()> {
    grid.check_domain(Domain::RealLine)
        .map_err(|e| Error::Config(format!("{what}: {e}")))
}

pub fn params_report(b: f64, p: u32, q: u32) -> Result<String> {
    let prm = make_params(b, p, q)?;
    let mut out = String::new();
    if prm.was_reduced() {
        out.push_str(&format!(
            "note: {p}/{q} reduced to {}/{}\n",
            prm.p(),
            prm.q()
        ));
    }
    out.push_str(&format!("b = {}\n", prm.b()));
    out.push_str(&format!("p = {}\n", prm.p()));
    out.push_str(&format!("q = {}\n", prm.q()));
    out.push_str(&format!("a = {}\n", prm.a()));
    out.push_str(&format!("log_b(a) = {}\n", prm.log_b_a()));
    out.push_str(&classification_line(&prm));
    out.push('\n');
    Ok(out)
}

fn classification_line(prm: &DilationParams) -> String {
    let class = prm.sampling().as_str();
    if prm.p() > prm.q() {
        format!("{class}; frame property impossible (density)")
    } else {
        format!("{class}, a={}", prm.a())
    }
}

pub struct GeneratorsPlan {
    spec: MdSystemSpec,
    gabor: GaborSystemSpec,
    grid: Grid,
}

#[derive(Serialize)]
struct WindowEntry {
    l: usize,
    r: u32,
    window: usize,
    file: String,
}

#[derive(Serialize)]
struct GeneratorsManifest<'a> {
    b: f64,
    p: u32,
    q: u32,
    a: f64,
    alpha: f64,
    beta: f64,
    j_range: IndexRange,
    k_range: IndexRange,
    m_range: IndexRange,
    grid: &'a Grid,
    windows: Vec<WindowEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
}

pub fn plan_generators(cfg: &Loaded<GeneratorsConfig>) -> Result<GeneratorsPlan> {
    let spec = require_md(cfg.config.system.build(&cfg.base_dir)?, "generators")?;
    require_realline(&cfg.config.grid, "grid")?;
    let gabor = md_to_gabor(&spec)?;
    Ok(GeneratorsPlan {
        spec,
        gabor,
        grid: cfg.config.grid,
    })
}

pub fn run_generators(plan: &GeneratorsPlan, opts: &RunOptions) -> Result<Outcome> {
    let prm = *plan.spec.params();
    let q = prm.q() as usize;
    let xs = plan.grid.points();
    let mut windows = Vec::new();
    for (w, g) in plan.gabor.generators().iter().enumerate() {
        let (l, r) = (w / q, (w % q) as u32);
        let file = format!("window_l{l}_r{r}.csv");
        let mut out = create(&opts.out.join(&file))?;
        write_samples_csv(&mut out, &xs, &g.sample(&xs))?;
        out.flush()?;
        windows.push(WindowEntry {
            l,
            r,
            window: w,
            file,
        });
    }
    let manifest = GeneratorsManifest {
        b: prm.b(),
        p: prm.p(),
        q: prm.q(),
        a: prm.a(),
        alpha: plan.gabor.alpha(),
        beta: plan.gabor.beta(),
        j_range: plan.spec.j_range(),
        k_range: plan.gabor.k_range(),
        m_range: plan.gabor.m_range(),
        grid: &plan.grid,
        windows,
        generated_unix: unix_time(opts.timestamp),
    };
    write_json(&opts.out.join("manifest.json"), &manifest)?;
    Ok(Outcome::Ok)
}

pub struct VerifyPlan {
    spec: MdSystemSpec,
    grid_realline: Grid,
    grid_halfline: Option<Grid>,
    tol_pointwise: f64,
    tol_gram: f64,
    convention: PhaseConvention,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    pass: bool,
    tol_pointwise: f64,
    tol_gram: f64,
    report: &'a EquivalenceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
}

pub fn plan_verify(cfg: &Loaded<VerifyConfig>, tol: Option<f64>) -> Result<VerifyPlan> {
    let c = &cfg.config;
    let spec = require_md(c.system.build(&cfg.base_dir)?, "verify")?;
    require_realline(&c.grid_realline, "grid_realline")?;
    if let Some(g) = &c.grid_halfline {
        g.check_domain(Domain::PositiveHalfLine)
            .map_err(|e| Error::Config(format!("grid_halfline: {e}")))?;
    }
    let (tol_pointwise, tol_gram) = match tol {
        Some(t) => (t, t),
        None => (c.tol_pointwise, c.tol_gram),
    };
    for (name, t) in [("tol_pointwise", tol_pointwise), ("tol_gram", tol_gram)] {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::OutOfRange {
                name,
                detail: format!("{t} must be positive and finite"),
            });
        }
    }
    Ok(VerifyPlan {
        spec,
        grid_realline: c.grid_realline,
        grid_halfline: c.grid_halfline,
        tol_pointwise,
        tol_gram,
        convention: c.phase_convention,
    })
}

pub fn run_verify(plan: &VerifyPlan, opts: &RunOptions) -> Result<Outcome> {
    let report = equivalence_report_with(
        &plan.spec,
        plan.grid_halfline.as_ref(),
        &plan.grid_realline,
        plan.convention,
    )?;
    let pass = report.max_pointwise_deviation <= plan.tol_pointwise
        && report.max_gram_deviation <= plan.tol_gram;
    let out = VerifyOutput {
        pass,
        tol_pointwise: plan.tol_pointwise,
        tol_gram: plan.tol_gram,
        report: &report,
        generated_unix: unix_time(opts.timestamp),
    };
    write_json(&opts.out.join("equivalence.json"), &out)?;
    if pass {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::ToleranceExceeded(format!(
            "pointwise {:e} (tol {:e}), gram {:e} (tol {:e})",
            report.max_pointwise_deviation,
            plan.tol_pointwise,
            report.max_gram_deviation,
            plan.tol_gram
        )))
    }
}

pub struct FrameBoundsPlan {
    system: System,
    grid: Grid,
    test_margin: f64,
    method: BoundsMethod,
}

#[derive(Serialize)]
struct FrameBoundsOutput<'a> {
    #[serde(flatten)]
    report: &'a FrameBoundsReport,
    gram_file: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_unix: Option<u64>,
}

pub fn plan_frame_bounds(cfg: &Loaded<FrameBoundsConfig>) -> Result<FrameBoundsPlan> {
    let c = &cfg.config;
    let system = c.system.build(&cfg.base_dir)?;
    check_frame_inputs(&system, &c.grid, c.test_margin)?;
    Ok(FrameBoundsPlan {
        system,
        grid: c.grid,
        test_margin: c.test_margin,
        method: c.method,
    })
}

pub fn run_frame_bounds(plan: &FrameBoundsPlan, opts: &RunOptions) -> Result<Outcome> {
    let report = frame_bounds_estimate(&plan.system, &plan.grid, plan.test_margin, plan.method)?;
    let gram = system_gram(&plan.system, &plan.grid)?;
    let mut w = create(&opts.out.join("gram.csv"))?;
    gram.write_csv(&mut w)?;
    w.flush()?;
    let out = FrameBoundsOutput {
        report: &report,
        gram_file: "gram.csv",
        generated_unix: unix_time(opts.timestamp),
    };
    write_json(&opts.out.join("frame_bounds.json"), &out)?;
    Ok(Outcome::Ok)
}

pub struct DensityScanPlan {
    systems: Vec<(DilationParams, System)>,
    probe: FuncExpr,
    grid: Grid,
    test_margin: f64,
}

fn half_line_function(f: &SidedFunction, b: f64, base_dir: &Path) -> Result<FuncExpr> {
    let expr = f.generator.build(f.domain, base_dir)?;
    match f.domain {
        Domain::PositiveHalfLine => Ok(expr),
        Domain::RealLine => unwarp_op(&expr, b),
    }
}

pub fn plan_density_scan(cfg: &Loaded<DensityScanConfig>) -> Result<DensityScanPlan> {
    let c = &cfg.config;
    if c.pairs.is_empty() {
        return Err(Error::Config("`pairs` is empty".into()));
    }
    let gens = c
        .generators
        .iter()
        .map(|g| g.build(Domain::PositiveHalfLine, &cfg.base_dir))
        .collect::<Result<Vec<_>>>()?;
    let mut systems = Vec::with_capacity(c.pairs.len());
    for &(p, q) in &c.pairs {
        let prm = make_params(c.b, p, q)?;
        let system = System::Md(MdSystemSpec::new(gens.clone(), prm, c.j_range, c.m_range)?);
        check_frame_inputs(&system, &c.grid, c.test_margin)?;
        systems.push((prm, system));
    }
    Ok(DensityScanPlan {
        systems,
        probe: half_line_function(&c.probe, c.b, &cfg.base_dir)?,
        grid: c.grid,
        test_margin: c.test_margin,
    })
}

pub fn run_density_scan(plan: &DensityScanPlan, opts: &RunOptions) -> Result<Outcome> {
    let mut rows = Vec::with_capacity(plan.systems.len());
    for (prm, system) in &plan.systems {
        let bounds = frame_bounds_estimate(
            system,
            &plan.grid,
            plan.test_margin,
            BoundsMethod::FrameOperatorEigs,
        )?;
        let residual = projection_residual(&plan.probe, system, &plan.grid)?;
        rows.push([
            prm.p().to_string(),
            prm.q().to_string(),
            fmt17(prm.log_b_a()),
            prm.sampling().as_str().to_string(),
            fmt17(bounds.a_est),
            fmt17(bounds.b_est),
            fmt17(residual),
        ]);
    }
    let mut wtr = csv::Writer::from_writer(create(&opts.out.join("density_scan.csv"))?);
    wtr.write_record([
        "p",
        "q",
        "log_b_a",
        "classification",
        "a_est",
        "b_est",
        "residual",
    ])?;
    for row in rows {
        wtr.write_record(row)?;
    }
    wtr.flush()?;
    Ok(Outcome::Ok)
}

pub struct UncertaintyPlan {
    functions: Vec<(String, FuncExpr, f64, f64)>,
    grids: Vec<Grid>,
}

pub fn plan_uncertainty(cfg: &Loaded<UncertaintyConfig>) -> Result<UncertaintyPlan> {
    let c = &cfg.config;
    if c.sizes.is_empty() || c.functions.is_empty() {
        return Err(Error::Config(
            "`sizes` and `functions` must be nonempty".into(),
        ));
    }
    let grids = c
        .sizes
        .iter()
        .map(|&n| {
            if n < 4 || !n.is_power_of_two() {
                return Err(Error::Config(format!(
                    "size {n} is not a power of two >= 4"
                )));
            }
            Grid::new(c.lo, c.hi, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut functions = Vec::with_capacity(c.functions.len());
    for f in &c.functions {
        let expr = f.generator.build(f.domain, &cfg.base_dir)?;
        let expr = match (f.domain, f.b) {
            (Domain::RealLine, None) => expr,
            (Domain::PositiveHalfLine, Some(b)) => warp_op(&expr, b)?,
            (Domain::RealLine, Some(_)) => {
                return Err(Error::Config(format!(
                    "`{}`: `b` only applies to half-line functions",
                    f.label
                )))
            }
            (Domain::PositiveHalfLine, None) => {
                return Err(Error::Config(format!(
                    "`{}`: half-line functions need `b`",
                    f.label
                )))
            }
        };
        if !(f.u.is_finite() && f.eta.is_finite()) {
            return Err(Error::NonFinite("u/eta"));
        }
        functions.push((f.label.clone(), expr, f.u, f.eta));
    }
    Ok(UncertaintyPlan { functions, grids })
}

pub fn run_uncertainty(plan: &UncertaintyPlan, opts: &RunOptions) -> Result<Outcome> {
    let mut rows = Vec::new();
    for (label, g, u, eta) in &plan.functions {
        for grid in &plan.grids {
            let r = uncertainty_moments(g, *u, *eta, grid)?;
            rows.push([
                label.clone(),
                r.n.to_string(),
                fmt17(r.time_moment),
                fmt17(r.freq_moment),
                fmt17(r.product),
            ]);
        }
    }
    let mut wtr = csv::Writer::from_writer(create(&opts.out.join("uncertainty.csv"))?);
    wtr.write_record(["label", "n", "time_moment", "freq_moment", "product"])?;
    for row in rows {
        wtr.write_record(row)?;
    }
    wtr.flush()?;
    Ok(Outcome::Ok)
}
