use std::fs;
use std::path::Path;

use geofreq::classify::{
    classify_components, classify_samples, features_from_samples, ConditionLabel, FeatureVector,
    DEFAULT_RELATIVE_TOL,
};
use geofreq::fixtures::{Fixture, HARMONIC_ORDERS};
use geofreq::geomfreq::{
    geometric_frequency_series, series_from_samples, DerivativeSource, GfSample,
};
use geofreq::lagrange::{components_series, harmonic_components, make_field, Frame};
use geofreq::signalmodel::{numeric_derivative, synthesize, SampleGrid, SignalSpec};

use crate::config::{CommandKind, RunConfig};
use crate::csvio::{read_signal, signal_header, Sink};
use crate::error::{CliError, CliResult};

const DECOMPOSE_HEADER: [&str; 9] = [
    "t",
    "rho_t",
    "rho_s",
    "rho_r",
    "rho_v",
    "omega_t_z",
    "omega_r_z",
    "half_w_z",
    "omega_v_z",
];

const ANALYZE_HEADER: [&str; 6] = ["t", "rho", "omega_x", "omega_y", "omega_z", "flagged"];

pub fn run(cfg: &RunConfig) -> CliResult<()> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::Synth => run_synth(cfg),
        CommandKind::Analyze => run_analyze(cfg),
        CommandKind::Decompose => run_decompose(cfg),
        CommandKind::Classify => run_classify(cfg),
        CommandKind::Figures => run_figures(cfg),
    }
}

fn require_case(cfg: &RunConfig) -> CliResult<Fixture> {
    cfg.case
        .ok_or_else(|| CliError::Usage("--case is required for this command".into()))
}

fn require_input(cfg: &RunConfig) -> CliResult<&Path> {
    cfg.input
        .as_deref()
        .ok_or_else(|| CliError::Usage("--in is required for this command".into()))
}

fn grid(cfg: &RunConfig) -> CliResult<SampleGrid> {
    Ok(SampleGrid::with_duration(0.0, cfg.dt, cfg.duration)?)
}

pub fn run_synth(cfg: &RunConfig) -> CliResult<()> {
    let spec = require_case(cfg)?.spec(cfg.f0);
    let g = grid(cfg)?;
    let bundle = synthesize(&spec, &g)?;
    let mut out = Sink::open(cfg.output.as_deref())?;
    out.header(&signal_header(spec.dim()))?;
    let mut row = Vec::with_capacity(spec.dim() + 1);
    for (t, v) in g.times().zip(&bundle.v) {
        row.clear();
        row.push(t);
        row.extend_from_slice(v.as_slice());
        out.floats(&row)?;
    }
    out.finish()
}

fn load_series(path: &Path) -> CliResult<Vec<GfSample>> {
    let table = read_signal(path)?;
    let d = numeric_derivative(&table.values, table.dt())?;
    Ok(series_from_samples(&table.times, &table.values, &d)?)
}

/// Writes the geometric frequency of an input signal using a numeric
/// derivative. Samples below the magnitude guard are written as NaN with
/// `flagged = 1` and the run exits with the singularity code.
pub fn run_analyze(cfg: &RunConfig) -> CliResult<()> {
    let series = load_series(require_input(cfg)?)?;
    let mut out = Sink::open(cfg.output.as_deref())?;
    out.header(&ANALYZE_HEADER)?;
    let mut flagged = 0usize;
    for s in &series {
        let (rho, om, flag) = match &s.gf {
            Some(gf) => {
                let om = match &gf.omega {
                    Some(o) => [o[0], o[1], o[2]],
                    None => [0.0, 0.0, gf.omega_z()],
                };
                (gf.rho, om, "0")
            }
            None => {
                flagged += 1;
                (f64::NAN, [f64::NAN; 3], "1")
            }
        };
        let nums = [s.t, rho, om[0], om[1], om[2]].map(crate::csvio::fmt_float);
        out.fields(nums.iter().map(String::as_str).chain([flag]))?;
    }
    out.finish()?;
    if flagged > 0 {
        return Err(CliError::Singular(format!(
            "{flagged} of {} samples have |v| below the magnitude guard",
            series.len()
        )));
    }
    Ok(())
}

fn write_components(
    path: Option<&Path>,
    spec: &SignalSpec,
    frame: Frame,
    g: &SampleGrid,
) -> CliResult<()> {
    let field = make_field(spec, frame)?;
    let comps = components_series(&field, spec, g)?;
    let mut out = Sink::open(path)?;
    out.header(&DECOMPOSE_HEADER)?;
    for (t, c) in g.times().zip(&comps) {
        out.floats(&[
            t,
            c.rho_t,
            c.rho_s,
            c.rho_r,
            c.rho_v,
            c.omega_t[2],
            c.omega_r[2],
            c.half_w[2],
            c.omega_v[2],
        ])?;
    }
    out.finish()
}

pub fn run_decompose(cfg: &RunConfig) -> CliResult<()> {
    let spec = require_case(cfg)?.spec(cfg.f0);
    write_components(cfg.output.as_deref(), &spec, cfg.frame, &grid(cfg)?)
}

fn print_report(label: ConditionLabel, features: &FeatureVector) {
    println!("{label}");
    print!("{}", features.report());
}

/// Sampled path with `--in`, exact component path with `--case`.
pub fn run_classify(cfg: &RunConfig) -> CliResult<()> {
    let omega0 = cfg.omega0();
    let tol = DEFAULT_RELATIVE_TOL * omega0;
    match (&cfg.input, cfg.case) {
        (Some(path), None) => {
            let series = load_series(path)?;
            if series.iter().all(GfSample::is_flagged) {
                return Err(CliError::Singular(
                    "every sample is below the magnitude guard".into(),
                ));
            }
            let features = features_from_samples(&series, omega0)?;
            print_report(classify_samples(&series, omega0, tol)?, &features);
        }
        (None, Some(case)) => {
            let spec = case.spec(cfg.f0);
            let g = grid(cfg)?;
            let field = make_field(&spec, cfg.frame)?;
            let label = classify_components(&components_series(&field, &spec, &g)?, tol)?;
            let bundle = synthesize(&spec, &g)?;
            let series = geometric_frequency_series(&bundle, DerivativeSource::Analytic)?;
            print_report(label, &features_from_samples(&series, omega0)?);
        }
        _ => {
            return Err(CliError::Usage(
                "classify takes exactly one of --in or --case".into(),
            ));
        }
    }
    Ok(())
}

/// Component curves for the unbalanced and harmonic fixtures, plus the
/// per-harmonic distortion terms.
pub fn run_figures(cfg: &RunConfig) -> CliResult<()> {
    let dir = cfg
        .output
        .as_deref()
        .ok_or_else(|| CliError::Usage("figures requires --out <directory>".into()))?;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let g = grid(cfg)?;

    let unbalanced = Fixture::Unbalanced.spec(cfg.f0);
    write_components(
        Some(&dir.join("unbalanced_components.csv")),
        &unbalanced,
        Frame::Fundamental,
        &g,
    )?;

    let harmonic = Fixture::Harmonic.spec(cfg.f0);
    write_components(
        Some(&dir.join("harmonic_components.csv")),
        &harmonic,
        Frame::Fundamental,
        &g,
    )?;
    let h = HARMONIC_ORDERS[0];
    write_components(
        Some(&dir.join(format!("harmonic_frame{h}_components.csv"))),
        &harmonic,
        Frame::Harmonic(h),
        &g,
    )?;

    let field = make_field(&harmonic, Frame::Fundamental)?;
    let orders: Vec<u32> = field
        .forcing()
        .iter()
        .map(|f| f.order)
        .filter(|&k| k > 1)
        .collect();
    let mut out = Sink::open(Some(&dir.join("harmonic_terms.csv")))?;
    let mut header = vec!["t".to_string()];
    for h in &orders {
        header.push(format!("rho_{h}"));
        header.push(format!("omega_{h}_z"));
    }
    out.header(&header)?;
    for t in g.times() {
        let terms = harmonic_components(&field, t, &harmonic.flux(t))?;
        let mut row = vec![t];
        for c in terms.iter().filter(|c| c.order > 1) {
            row.push(c.rho);
            row.push(c.omega_z);
        }
        out.floats(&row)?;
    }
    out.finish()
}
