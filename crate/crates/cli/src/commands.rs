use std::collections::HashSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use lotkaian_core::corestats::{bin_linear, bin_log1p, h_index, truncate_at_h, Histogram};
use lotkaian_core::genmodels::{
    polya_urn, sample_lognormal, sample_poisson, sample_zeta, simon_process, UrnColor,
};
use lotkaian_core::ingest::{parse_citation_csv, ParseOptions};
use lotkaian_core::loglog::EmptyBinPolicy;
use lotkaian_core::powerlaw::{
    exponent_domain, fit_power_law, gof_pvalue, scan_xmin, BootstrapConfig, VerdictThresholds,
};
use lotkaian_core::report::{emit_tables, render_figures, TableFormat};
use lotkaian_core::rng::derive_seed;
use lotkaian_core::{analyze_dataset, AnalysisConfig, AnalysisReport, AuthorDataset, Error, XminPolicy};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{AnalyzeArgs, BinsArgs, Command, FitArgs, FormatArg, Model, ReportArgs, ScaleArg, SimulateArgs};
use crate::CliError;

pub const TABLES_STEM: &str = "summary_tables";

/// Run a parsed command. `Ok(true)` means it succeeded with warnings.
pub fn dispatch(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Analyze(a) => {
            let outcome = cmd_analyze(&a)?;
            for dir in &outcome.author_dirs {
                println!("{}", dir.display());
            }
            Ok(outcome.has_warnings())
        }
        Command::Fit(a) => cmd_fit(&a).map(|_| false),
        Command::Simulate(a) => cmd_simulate(&a).map(|_| false),
        Command::Bins(a) => cmd_bins(&a).map(|_| false),
        Command::Report(a) => cmd_report(&a).map(|_| false),
    }
}

fn failed(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Failed(format!("{}: {e}", path.display()))
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| failed(path, e))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| failed(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| failed(path, e))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Lowercase ASCII slug for directory names.
pub fn slugify(name: &str) -> String {
    let mut slug = String::new();
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            slug.push(c.to_ascii_lowercase());
        } else if !slug.ends_with('-') {
            slug.push('-');
        }
    }
    let slug = slug.trim_matches('-');
    if slug.is_empty() {
        "author".to_string()
    } else {
        slug.to_string()
    }
}

fn unique_slugs(names: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    names
        .iter()
        .map(|name| {
            let base = slugify(name);
            let mut slug = base.clone();
            let mut k = 2;
            while !seen.insert(slug.clone()) {
                slug = format!("{base}-{k}");
                k += 1;
            }
            slug
        })
        .collect()
}

fn delimiter(c: char) -> Result<u8, CliError> {
    u8::try_from(c)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| CliError::Usage(format!("delimiter {c:?} is not a single ASCII character")))
}

fn load_dataset(path: &Path, author: Option<&str>, prize_year: Option<i32>, delim: u8) -> Result<AuthorDataset, CliError> {
    let raw = read_input(path)?;
    let author = match author {
        Some(a) => a.to_string(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "author".to_string()),
    };
    let options = ParseOptions {
        delimiter: delim,
        author,
        prize_year,
        source: file_name(path),
    };
    parse_citation_csv(&raw, &options).map_err(|e| failed(path, e))
}

/// What `analyze` produced.
#[derive(Debug)]
pub struct AnalyzeOutcome {
    pub reports: Vec<AnalysisReport>,
    /// One directory per author, in input order.
    pub author_dirs: Vec<PathBuf>,
    pub tables: Vec<PathBuf>,
}

impl AnalyzeOutcome {
    pub fn has_warnings(&self) -> bool {
        self.reports.iter().any(|r| !r.warnings.is_empty())
    }
}

fn analysis_config(a: &AnalyzeArgs) -> AnalysisConfig {
    AnalysisConfig {
        x_min: a.fit.xmin,
        bootstrap_replicas: a.fit.bootstrap,
        seed: a.fit.seed,
        bins: usize::from(a.bins),
        regression_mode: a.mode.into(),
        empty_bins: if a.keep_empty_bins { EmptyBinPolicy::SubstituteOne } else { EmptyBinPolicy::Drop },
        merge_threshold: if a.no_merge { None } else { Some(a.merge_threshold) },
        ..AnalysisConfig::default()
    }
}

/// Invocation record embedded in every output. Thread count and output
/// location are left out so that they cannot change the bytes written.
fn run_config(a: &AnalyzeArgs, inputs: &[String]) -> Value {
    json!({
        "command": "analyze",
        "inputs": inputs,
        "xmin": a.fit.xmin.to_string(),
        "bootstrap": a.fit.bootstrap,
        "seed": a.fit.seed,
        "bins": a.bins,
        "mode": format!("{:?}", a.mode).to_lowercase(),
        "keep_empty_bins": a.keep_empty_bins,
        "merge_threshold": if a.no_merge { Value::Null } else { json!(a.merge_threshold) },
    })
}

fn thread_pool(jobs: Option<u16>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(usize::from(j));
    }
    builder
        .build()
        .map_err(|e| CliError::Failed(format!("cannot start worker threads: {e}")))
}

pub fn cmd_analyze(a: &AnalyzeArgs) -> Result<AnalyzeOutcome, CliError> {
    if a.author.is_some() && a.inputs.len() > 1 {
        return Err(CliError::Usage("--author can only be used with a single input".into()));
    }
    let delim = delimiter(a.delimiter)?;
    let datasets = a
        .inputs
        .iter()
        .map(|p| load_dataset(p, a.author.as_deref(), a.prize_year, delim))
        .collect::<Result<Vec<_>, _>>()?;

    let base = analysis_config(a);
    let inputs: Vec<String> = a.inputs.iter().map(|p| file_name(p)).collect();
    let run_config = run_config(a, &inputs);

    let pool = thread_pool(a.jobs)?;
    let results: Vec<Result<AnalysisReport, Error>> = pool.install(|| {
        datasets
            .par_iter()
            .enumerate()
            .map(|(i, ds)| {
                let config = AnalysisConfig {
                    seed: derive_seed(base.seed, i as u64),
                    ..base.clone()
                };
                analyze_dataset(ds, &config)
            })
            .collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    for (path, result) in a.inputs.iter().zip(results) {
        let mut report = result.map_err(|e| failed(path, e))?;
        report.run_config = Some(run_config.clone());
        for w in &report.warnings {
            warn!("{}: {}", report.author.name, w.message);
        }
        reports.push(report);
    }

    fs::create_dir_all(&a.out).map_err(|e| failed(&a.out, e))?;
    let names: Vec<String> = reports.iter().map(|r| r.author.name.clone()).collect();
    let mut author_dirs = Vec::new();
    for (report, slug) in reports.iter().zip(unique_slugs(&names)) {
        let dir = a.out.join(slug);
        write_author(&dir, report)?;
        info!("wrote {}", dir.display());
        author_dirs.push(dir);
    }
    let formats = match a.format {
        Some(f) => vec![f],
        None => vec![FormatArg::Json, FormatArg::Csv],
    };
    let tables = write_tables(&a.out, &reports, &formats, Some(&run_config))?;
    Ok(AnalyzeOutcome { reports, author_dirs, tables })
}

fn write_author(dir: &Path, report: &AnalysisReport) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| failed(dir, e))?;
    let json = report.to_json().map_err(|e| failed(dir, e))?;
    write_file(&dir.join("report.json"), &json)?;
    for (name, svg) in render_figures(report) {
        write_file(&dir.join(name), &svg)?;
    }
    Ok(())
}

fn extension(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    }
}

fn write_tables(
    out: &Path,
    reports: &[AnalysisReport],
    formats: &[FormatArg],
    run_config: Option<&Value>,
) -> Result<Vec<PathBuf>, CliError> {
    let mut written = Vec::new();
    for &f in formats {
        let path = out.join(format!("{TABLES_STEM}.{}", extension(f)));
        let body = emit_tables(reports, f.into(), run_config).map_err(|e| failed(&path, e))?;
        write_file(&path, &body)?;
        written.push(path);
    }
    Ok(written)
}

/// Non-negative integers separated by whitespace or commas.
pub fn parse_values(raw: &str) -> Result<Vec<u64>, String> {
    raw.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| format!("not a non-negative integer: {t:?}")))
        .collect()
}

fn cmd_fit(a: &FitArgs) -> Result<(), CliError> {
    let raw = read_input(&a.values)?;
    let text = String::from_utf8_lossy(&raw);
    let mut values = parse_values(&text).map_err(|e| failed(&a.values, e))?;
    values.sort_unstable_by(|x, y| y.cmp(x));
    let err = |e: Error| failed(&a.values, e);

    let (tail, fit) = match a.fit.xmin {
        XminPolicy::HIndex => {
            let h = h_index(&values).map_err(err)?.h;
            if h == 0 {
                return Err(err(Error::EmptyCore));
            }
            let tail = values[..h].to_vec();
            let fit = fit_power_law(&tail, h as u64).map_err(err)?;
            (tail, fit)
        }
        XminPolicy::Scan => {
            let positive: Vec<u64> = values.iter().copied().filter(|&v| v > 0).collect();
            let fit = scan_xmin(&positive).map_err(err)?;
            (positive.into_iter().filter(|&v| v >= fit.x_min).collect(), fit)
        }
        XminPolicy::Explicit(x_min) => {
            let tail: Vec<u64> = values.iter().copied().filter(|&v| v >= x_min).collect();
            let fit = fit_power_law(&tail, x_min).map_err(err)?;
            (tail, fit)
        }
    };
    let fit = if a.fit.bootstrap > 0 {
        let config = BootstrapConfig::new(a.fit.bootstrap, a.fit.seed);
        let p = gof_pvalue(&tail, &fit, config).map_err(err)?;
        fit.with_p_value(p, &VerdictThresholds::default())
    } else {
        fit
    };
    let out = json!({
        "xmin_policy": a.fit.xmin.to_string(),
        "n_values": values.len(),
        "fit": fit,
        "verdict": fit.verdict.map(|v| v.label()),
        "exponent_domain": exponent_domain(fit.alpha),
    });
    print_json(&out)
}

fn print_json(value: &Value) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    emit(&format!("{s}\n"))
}

fn emit(s: &str) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(s.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| CliError::Failed(format!("stdout: {e}")))
}

fn lines<T: ToString>(values: &[T]) -> String {
    let mut s = String::new();
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let bad = |e: Error| CliError::Failed(e.to_string());
    let seed = a.seed;
    let (params, values, text): (Value, Value, String) = match a.model {
        Model::Zeta { alpha, xmin, n } => {
            let v = sample_zeta(alpha, xmin, n, seed).map_err(bad)?;
            (json!({"model": "zeta", "alpha": alpha, "xmin": xmin, "n": n}), json!(v), lines(&v))
        }
        Model::Poisson { lambda, n } => {
            let v = sample_poisson(lambda, n, seed).map_err(bad)?;
            (json!({"model": "poisson", "lambda": lambda, "n": n}), json!(v), lines(&v))
        }
        Model::Lognormal { mu, sigma, n } => {
            let v = sample_lognormal(mu, sigma, n, seed).map_err(bad)?;
            (json!({"model": "lognormal", "mu": mu, "sigma": sigma, "n": n}), json!(v), lines(&v))
        }
        Model::Urn { white, black, additions, draws } => {
            let (seq, state) = polya_urn(white, black, additions, draws, seed).map_err(bad)?;
            let bits: Vec<u8> = seq.iter().map(|c| u8::from(*c == UrnColor::White)).collect();
            let params = json!({
                "model": "urn", "white": white, "black": black,
                "additions": additions, "draws": draws, "final_state": state,
            });
            (params, json!(bits), lines(&bits))
        }
        Model::Simon { p_new, units } => {
            let state = simon_process(p_new, units, seed).map_err(bad)?;
            let text = lines(&state.element_sizes);
            (json!({"model": "simon", "p_new": p_new, "units": units}), json!(state.element_sizes), text)
        }
    };
    if a.json {
        let mut record = params;
        record["seed"] = json!(seed);
        record["values"] = values;
        print_json(&record)
    } else {
        emit(&text)
    }
}

fn keep_degenerate(result: lotkaian_core::Result<Histogram>) -> lotkaian_core::Result<Histogram> {
    match result {
        Err(Error::DegenerateRange { histogram }) => Ok(*histogram),
        other => other,
    }
}

fn cmd_bins(a: &BinsArgs) -> Result<(), CliError> {
    let delim = b',';
    let dataset = load_dataset(&a.input, None, None, delim)?;
    let err = |e: Error| failed(&a.input, e);
    let sample = if a.core { truncate_at_h(&dataset).map_err(err)?.0 } else { dataset };
    let cites = sample.cites();
    let bins = usize::from(a.bins);
    let hist = keep_degenerate(match a.scale {
        ScaleArg::Linear => bin_linear(&cites, bins),
        ScaleArg::Log1p => bin_log1p(&cites, bins),
    })
    .map_err(err)?;
    match a.format {
        FormatArg::Json => print_json(&json!(hist)),
        FormatArg::Csv => {
            let mut s = String::from("bin,lower,upper,count\n");
            for (i, count) in hist.counts.iter().enumerate() {
                let (lo, hi) = hist.bin_interval(i + 1);
                s.push_str(&format!("{},{lo},{hi},{count}\n", i + 1));
            }
            emit(&s)
        }
    }
}

fn cmd_report(a: &ReportArgs) -> Result<(), CliError> {
    let reports = a
        .reports
        .iter()
        .map(|p| {
            let raw = fs::read_to_string(p).map_err(|e| failed(p, e))?;
            AnalysisReport::from_json(&raw).map_err(|e| failed(p, e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let run_config = reports.first().and_then(|r| r.run_config.clone());
    let shared = run_config
        .as_ref()
        .filter(|c| reports.iter().all(|r| r.run_config.as_ref() == Some(c)));
    if let Some(out) = &a.out {
        fs::create_dir_all(out).map_err(|e| failed(out, e))?;
        let names: Vec<String> = reports.iter().map(|r| r.author.name.clone()).collect();
        for (report, slug) in reports.iter().zip(unique_slugs(&names)) {
            write_author(&out.join(slug), report)?;
        }
        write_tables(out, &reports, &[FormatArg::Json, FormatArg::Csv], shared)?;
    }
    let format: TableFormat = a.format.into();
    let body = emit_tables(&reports, format, shared).map_err(|e| CliError::Failed(e.to_string()))?;
    emit(&body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slugs_are_lowercase_and_unique() {
        assert_eq!(slugify("P. Krugman"), "p-krugman");
        assert_eq!(slugify("***"), "author");
        let names = vec!["A B".to_string(), "a-b".to_string(), "a b".to_string()];
        assert_eq!(unique_slugs(&names), ["a-b", "a-b-2", "a-b-3"]);
    }

    #[test]
    fn values_accept_commas_and_newlines() {
        assert_eq!(parse_values("3, 1\n 2\n").unwrap(), [3, 1, 2]);
        assert!(parse_values("3 -1").is_err());
    }
}
