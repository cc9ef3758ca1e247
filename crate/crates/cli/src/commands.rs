use std::io::Write;
use std::path::Path;

use noncross::catalan::{enumeration_summary, DEFAULT_ENUMERATION_CAP};
use noncross::edge::{solve_edge_with, EdgeOptions};
use noncross::freeprob::{moments_from_cumulants_recursive, moments_from_cumulants_recursive_hp, CumulantSpec};
use noncross::ldp::{entropy, rate_j_marginal, relative_entropy_vs_geom, theta, ExtReal, PmfOnN};
use noncross::lln::lln_curve;
use noncross::precision::Scalar;
use noncross::sampling::{empirical_stats, sample_batch, Sampler};
use noncross::verify::{self, VerifyConfig};
use noncross::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, Precision, RunConfig};
use crate::output::{csv_document, csv_table, json_document, json_lines, num, Meta};
use crate::Common;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Range { .. } | Error::Domain(_) | Error::Validation(_) | Error::Precondition(_) => EXIT_USAGE,
            Error::SamplingBudget { .. } | Error::Precision { .. } | Error::Solver { .. } => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<u8, CliError>;

fn config(subcommand: &str, common: &Common) -> RunConfig {
    let mut c = RunConfig::new(subcommand, common.seed);
    c.format = common.format;
    c
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    match &common.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError {
            code: EXIT_USAGE,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::usage(format!("cannot write output: {e}")))
        }
    }
}

fn read_spec(path: &Path) -> Result<CumulantSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(CumulantSpec::from_json(&text)?)
}

fn format_of(common: &Common) -> Format {
    common.format.unwrap_or(Format::Json)
}

fn document(common: &Common, meta: &Meta, data: &impl Serialize, header: &[&str], rows: Vec<Vec<String>>) -> String {
    match format_of(common) {
        Format::Json => json_document(meta, data),
        Format::Csv => csv_document(meta, header, &rows),
    }
}

pub fn enumerate(n: Option<usize>, n_range: Option<Vec<usize>>, common: &Common) -> CliResult {
    let ns = match (n, n_range.clone()) {
        (Some(n), _) => vec![n],
        (None, Some(ns)) => ns,
        (None, None) => return Err(CliError::usage("give --n or --n-range")),
    };
    if ns.contains(&0) {
        return Err(CliError::usage("n must be at least 1"));
    }
    let mut cfg = config("enumerate", common);
    cfg.n = n;
    cfg.n_range = n_range;
    let summaries = ns
        .iter()
        .map(|&n| enumeration_summary(n, DEFAULT_ENUMERATION_CAP))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = summaries
        .iter()
        .map(|s| {
            vec![
                s.n.to_string(),
                s.catalan.to_string(),
                s.narayana_row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                s.mean_blocks.to_string(),
                s.mean_singletons.to_string(),
            ]
        })
        .collect();
    let meta = Meta::new(&cfg);
    let header = ["n", "catalan", "narayana_row", "mean_blocks", "mean_singletons"];
    emit(common, &document(common, &meta, &summaries, &header, rows))?;
    Ok(EXIT_OK)
}

pub fn sample(n: usize, samples: usize, sampler: Sampler, common: &Common) -> CliResult {
    if n == 0 {
        return Err(CliError::usage("n must be at least 1"));
    }
    let mut cfg = config("sample", common);
    cfg.n = Some(n);
    cfg.samples = Some(samples);
    cfg.sampler = Some(sampler);
    let meta = Meta::new(&cfg);
    let mut records = Vec::with_capacity(samples);
    let mut rows = Vec::with_capacity(samples);
    let mut failures = 0;
    for result in sample_batch(n, sampler, common.seed, 0, samples) {
        match result {
            Ok(r) => {
                let stats = empirical_stats(&r.path);
                records.push(json!({
                    "stream": r.stream,
                    "path": r.path.to_string(),
                    "attempts": r.attempts,
                    "blocks": stats.r,
                    "sigma": stats.sigma.to_string(),
                    "tau": stats.tau.to_string(),
                }));
                rows.push(vec![
                    r.stream.to_string(),
                    r.path.to_string(),
                    r.attempts.map(|a| a.to_string()).unwrap_or_default(),
                    stats.r.to_string(),
                    stats.sigma.to_string(),
                    stats.tau.to_string(),
                ]);
            }
            Err(e @ Error::SamplingBudget { .. }) => {
                failures += 1;
                records.push(json!({ "error": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let text = match format_of(common) {
        Format::Json => json_lines(&meta, &records),
        Format::Csv => csv_document(&meta, &["stream", "path", "attempts", "blocks", "sigma", "tau"], &rows),
    };
    emit(common, &text)?;
    if failures > 0 {
        eprintln!("warning: {failures} of {samples} samples exhausted the attempt budget");
        return Ok(EXIT_NUMERIC);
    }
    Ok(EXIT_OK)
}

pub fn lln(n_range: Vec<usize>, samples: usize, sampler: Sampler, common: &Common) -> CliResult {
    if n_range.contains(&0) {
        return Err(CliError::usage("n must be at least 1"));
    }
    let mut cfg = config("lln", common);
    cfg.n_range = Some(n_range.clone());
    cfg.samples = Some(samples);
    cfg.sampler = Some(sampler);
    let curve = lln_curve(&n_range, samples, common.seed, sampler)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let meta = Meta::new(&cfg);
    emit(common, &document(common, &meta, &curve, &LLN_HEADER, lln_rows(&curve)))?;
    Ok(EXIT_OK)
}

const LLN_HEADER: [&str; 7] = ["n", "reps", "failures", "mean_beta", "sd_beta", "mean_sigma", "mean_tau"];

fn lln_rows(curve: &noncross::lln::LlnCurve) -> Vec<Vec<String>> {
    curve
        .points
        .iter()
        .map(|p| {
            vec![
                p.n.to_string(),
                p.reps.to_string(),
                p.failures.to_string(),
                num(p.mean_beta),
                num(p.sd_beta),
                num(p.mean_sigma),
                num(p.mean_tau),
            ]
        })
        .collect()
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    cumulant: f64,
    moment: Value,
    log_moment: Option<f64>,
    rate: Option<f64>,
}

pub fn moments(spec_path: &Path, n: usize, precision: Precision, common: &Common) -> CliResult {
    const N_LIMIT: usize = 5000;
    if n == 0 || n > N_LIMIT {
        return Err(CliError::usage(format!("n must be in 1..={N_LIMIT}")));
    }
    let spec = read_spec(spec_path)?;
    let mut cfg = config("moments", common);
    cfg.n = Some(n);
    cfg.precision = precision;
    cfg.spec = Some(spec.clone());
    let k = spec.cumulants(n);
    let mut table = Vec::with_capacity(n);
    match precision {
        Precision::F64 => {
            let m = moments_from_cumulants_recursive(&spec, n);
            for i in 1..=n {
                let v = m.get(i).expect("computed");
                let log = (v > 0.0).then(|| v.ln());
                table.push(MomentRow {
                    n: i,
                    cumulant: k[i - 1],
                    moment: json!(v),
                    log_moment: log,
                    rate: log.map(|l| l / i as f64),
                });
            }
        }
        Precision::High => {
            let m = moments_from_cumulants_recursive_hp(&spec, n);
            for (i, v) in m.iter().enumerate().skip(1) {
                let log = (!v.is_zero() && v.abs() == *v).then(|| v.ln().to_f64());
                table.push(MomentRow {
                    n: i,
                    cumulant: k[i - 1],
                    moment: json!(v.to_decimal_string(40)),
                    log_moment: log,
                    rate: log.map(|l| l / i as f64),
                });
            }
        }
    }
    let rows = table
        .iter()
        .map(|r| {
            let moment = match &r.moment {
                Value::String(s) => s.clone(),
                v => num(v.as_f64().unwrap_or(f64::NAN)),
            };
            vec![
                r.n.to_string(),
                num(r.cumulant),
                moment,
                r.log_moment.map(num).unwrap_or_default(),
                r.rate.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let meta = Meta::new(&cfg);
    let header = ["n", "cumulant", "moment", "log_moment", "rate"];
    emit(common, &document(common, &meta, &table, &header, rows))?;
    Ok(EXIT_OK)
}

pub fn edge(spec_path: &Path, trace: bool, common: &Common) -> CliResult {
    let spec = read_spec(spec_path)?;
    let mut cfg = config("edge", common);
    cfg.spec = Some(spec.clone());
    cfg.trace = trace;
    let opts = EdgeOptions { trace, ..EdgeOptions::default() };
    let result = solve_edge_with(&spec, &opts)?;
    let meta = Meta::new(&cfg);
    let text = match format_of(common) {
        Format::Json => json_document(&meta, &result),
        Format::Csv => {
            let mut text = csv_document(
                &meta,
                &["log_rho", "rho", "theta_star", "m_star", "objective_residual", "derivative", "truncation"],
                &[vec![
                    num(result.log_rho),
                    num(result.rho),
                    num(result.theta_star),
                    num(result.m_star),
                    num(result.objective_residual),
                    num(result.diagnostics.derivative),
                    result.diagnostics.truncation.to_string(),
                ]],
            );
            if let Some(points) = &result.trace {
                text.push('\n');
                let rows: Vec<Vec<String>> = points.iter().map(|p| vec![num(p.theta), num(p.objective)]).collect();
                text.push_str(&csv_table(&["theta", "objective"], &rows));
            }
            text
        }
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}

pub fn verify(filter: Option<String>, common: &Common) -> CliResult {
    if let Some(f) = &filter {
        if verify::select(Some(f)).is_empty() {
            return Err(CliError::usage(format!("no criterion matches {f:?}")));
        }
    }
    let mut cfg = config("verify", common);
    cfg.filter = filter.clone();
    let report = verify::run(&VerifyConfig { seed: common.seed, filter }, |c, elapsed| {
        eprintln!(
            "criterion {:>2} {:<20} {} in {:.2} s",
            c.id,
            c.key,
            if c.passed { "passed" } else { "FAILED" },
            elapsed.as_secs_f64()
        );
    });
    let meta = Meta::new(&cfg);
    let text = match common.format {
        Some(Format::Json) => json_document(&meta, &report),
        Some(Format::Csv) => {
            let rows = report
                .criteria
                .iter()
                .flat_map(|c| {
                    c.checks.iter().map(move |k| {
                        vec![c.id.to_string(), c.key.to_string(), k.name.clone(), k.passed.to_string(), k.detail.clone()]
                    })
                })
                .collect::<Vec<_>>();
            csv_document(&meta, &["criterion", "key", "check", "passed", "detail"], &rows)
        }
        None => format!("{}{}", meta.comment_line(), report.to_text()),
    };
    emit(common, &text)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[derive(Serialize)]
struct RateRow {
    measure: &'static str,
    mean: f64,
    entropy: f64,
    relative_entropy_vs_geom: ExtReal,
    theta: Option<f64>,
    rate_j_marginal: ExtReal,
}

fn reference_measures() -> Result<Vec<(&'static str, PmfOnN)>, Error> {
    Ok(vec![
        ("geometric, success 1/2", PmfOnN::geometric_half()),
        ("geometric, success 2/3", PmfOnN::geometric(2.0 / 3.0)?),
        ("geometric, mean 3", PmfOnN::geometric_with_mean(3.0)?),
        ("point mass 1", PmfOnN::point_mass(1)?),
        ("point mass 2", PmfOnN::point_mass(2)?),
        ("point mass 3", PmfOnN::point_mass(3)?),
        ("uniform on 1..3", PmfOnN::from_weights(vec![1.0 / 3.0; 3])?),
        ("1/2 point mass 1 + 1/2 point mass 3", PmfOnN::from_weights(vec![0.5, 0.0, 0.5])?),
    ])
}

pub fn verify_ldp(n_range: Vec<usize>, samples: usize, sampler: Sampler, log2: bool, common: &Common) -> CliResult {
    let mut cfg = config("verify", common);
    cfg.suite = Some("ldp".into());
    cfg.n_range = Some(n_range.clone());
    cfg.samples = Some(samples);
    cfg.sampler = Some(sampler);
    let unit = if log2 { std::f64::consts::LN_2 } else { 1.0 };
    let scale = |x: ExtReal| match x {
        ExtReal::Finite(v) => ExtReal::Finite(v / unit),
        inf => inf,
    };
    let mut rates = Vec::new();
    for (name, p) in reference_measures()? {
        let mean = p.mean().unwrap_or(f64::INFINITY);
        rates.push(RateRow {
            measure: name,
            mean,
            entropy: entropy(&p)? / unit,
            relative_entropy_vs_geom: scale(relative_entropy_vs_geom(&p)?),
            theta: theta(mean).ok().map(|t| t / unit),
            rate_j_marginal: scale(rate_j_marginal(&p)),
        });
    }
    let curve = lln_curve(&n_range, samples, common.seed, sampler)?;
    for w in &curve.warnings {
        eprintln!("warning: {w}");
    }
    let meta = Meta::new(&cfg);
    let units = if log2 { "bits" } else { "nats" };
    let text = match format_of(common) {
        Format::Json => json_document(&meta, &json!({ "units": units, "rates": rates, "lln": curve })),
        Format::Csv => {
            let ext = |x: ExtReal| match x {
                ExtReal::Finite(v) => num(v),
                ExtReal::PosInfinity => "inf".into(),
            };
            let rows: Vec<Vec<String>> = rates
                .iter()
                .map(|r| {
                    vec![
                        r.measure.to_string(),
                        num(r.mean),
                        num(r.entropy),
                        ext(r.relative_entropy_vs_geom),
                        r.theta.map(num).unwrap_or_default(),
                        ext(r.rate_j_marginal),
                    ]
                })
                .collect();
            let mut text = csv_document(
                &meta,
                &["measure", "mean", "entropy", "relative_entropy_vs_geom", "theta", "rate_j_marginal"],
                &rows,
            );
            text.push('\n');
            text.push_str(&csv_table(&LLN_HEADER, &lln_rows(&curve)));
            text
        }
    };
    emit(common, &text)?;
    Ok(EXIT_OK)
}
