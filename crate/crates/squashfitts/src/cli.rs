//! `squashfitts` subcommands.
//!
//! Exit status is 0 on success, 1 for data or fit failures, 2 for usage or
//! environment failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use squashfitts_core::{
    figure_series, fit_model, run_analysis, AnalysisOptions, DerivedTrial, Figure, FitResult,
    ModelKind, ReportDocument, ShotKind, TrialSet,
};

use crate::dataset::{
    bundled_csv, parse_csv_with, write_csv, Dataset, ParseOptions, ValidationReport,
};
use crate::plot::{emit_series_csv, emit_svg, PlotStyle};
use crate::reference::GROUP_TOLERANCE;
use crate::report::{build_json_report, render_stats_text, render_summary};
use crate::Error;

#[derive(Debug, Parser)]
#[command(
    name = "squashfitts",
    version,
    about = "Index of difficulty and throughput analysis for squash shot retrieval"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: CliConfig,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a dataset and list errors and warnings on stderr.
    Validate,
    /// Write the dataset with derived speed, ID and information rate.
    Derive,
    /// Print ID / MT / IR statistics per person and shot, and per shot.
    Stats,
    /// Fit a model and print its coefficients and goodness of fit.
    Fit,
    /// Write SVG plots and point CSVs for figures 4 to 8 into a directory.
    Figures,
    /// Write the JSON report and a text summary with cross-checks.
    Report,
}

#[derive(Debug, Args)]
pub struct CliConfig {
    /// Trial CSV path, or `bundled` for the shipped reference dataset.
    #[arg(long, global = true, default_value = "bundled")]
    pub input: String,
    /// Output file or directory; `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub output: String,
    /// Leave a shot out of the overall fit (repeatable).
    #[arg(long = "exclude-shot", global = true, value_name = "KIND")]
    pub exclude_shot: Vec<String>,
    /// Model for `fit`: squash, fitts, mackenzie, welford, steering.
    #[arg(long, global = true, default_value = "squash")]
    pub model: String,
    /// Treat `t_s` as slowed-video readings and divide by this factor.
    #[arg(long, global = true)]
    pub slowdown: Option<f64>,
    /// Tolerance for the group-statistics cross-checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

impl CliConfig {
    fn excluded(&self) -> Result<Vec<ShotKind>, Error> {
        let shots = self
            .exclude_shot
            .iter()
            .map(|s| s.parse::<ShotKind>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::Usage(e.to_string()))?;
        Ok(shots)
    }

    fn analysis_options(&self) -> Result<AnalysisOptions, Error> {
        AnalysisOptions::excluding(self.excluded()?).map_err(|e| Error::Usage(e.to_string()))
    }

    fn tolerance(&self) -> Result<f64, Error> {
        match self.tolerance {
            None => Ok(GROUP_TOLERANCE),
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(Error::Usage(format!(
                "--tolerance must be positive, got {t}"
            ))),
        }
    }

    fn parse_options(&self) -> Result<ParseOptions, Error> {
        if let Some(f) = self.slowdown {
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::Usage(format!(
                    "--slowdown must be positive, got {f}"
                )));
            }
        }
        Ok(ParseOptions {
            slowdown_factor: self.slowdown,
            ..ParseOptions::default()
        })
    }

    fn output_dir(&self) -> Result<PathBuf, Error> {
        if self.output == "-" {
            return Err(Error::Usage(
                "this command writes several files; pass --output <dir>".into(),
            ));
        }
        let dir = PathBuf::from(&self.output);
        fs::create_dir_all(&dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
        Ok(dir)
    }
}

fn read_input(config: &CliConfig) -> Result<String, Error> {
    if config.input == "bundled" {
        return Ok(bundled_csv().to_string());
    }
    let path = PathBuf::from(&config.input);
    fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
}

fn load(config: &CliConfig) -> Result<(Dataset, ValidationReport), Error> {
    let text = read_input(config)?;
    Ok(parse_csv_with(&text, &config.parse_options()?))
}

/// Loads and requires a clean, non-empty dataset.
fn load_valid(config: &CliConfig, err: &mut dyn Write) -> Result<Dataset, Error> {
    let (dataset, report) = load(config)?;
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    for w in &report.warnings {
        let _ = writeln!(err, "warning: row {}: {}", w.row, w.message);
    }
    if dataset.trials.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(dataset)
}

fn analyze(config: &CliConfig, err: &mut dyn Write) -> Result<ReportDocument, Error> {
    let dataset = load_valid(config, err)?;
    let options = config.analysis_options()?;
    Ok(run_analysis(&dataset.trials, &options)?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(config: &CliConfig, contents: &str, out: &mut dyn Write) -> Result<(), Error> {
    if config.output == "-" {
        out.write_all(contents.as_bytes())
            .map_err(|source| Error::Io {
                path: PathBuf::from("-"),
                source,
            })
    } else {
        write_file(Path::new(&config.output), contents)
    }
}

fn cmd_validate(config: &CliConfig, err: &mut dyn Write) -> Result<u8, Error> {
    let (dataset, report) = load(config)?;
    let _ = writeln!(err, "{} trial(s) read", dataset.trials.len());
    let _ = writeln!(err, "{report}");
    Ok(if report.is_ok() { 0 } else { 1 })
}

fn cmd_derive(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let dataset = load_valid(config, err)?;
    emit(config, &write_csv(&dataset, true)?, out)?;
    Ok(0)
}

fn cmd_stats(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let report = analyze(config, err)?;
    emit(config, &render_stats_text(&report), out)?;
    Ok(0)
}

fn cmd_fit(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let kind: ModelKind = config
        .model
        .parse()
        .map_err(|e: squashfitts_core::Error| Error::Usage(e.to_string()))?;
    if kind != ModelKind::SquashID {
        return Err(Error::Usage(format!(
            "model `{kind}` needs pointing trials (amplitude, width); squash datasets fit with `squash`"
        )));
    }
    let dataset = load_valid(config, err)?;
    let options = config.analysis_options()?;
    let derived: Vec<DerivedTrial> = dataset
        .trials
        .iter()
        .filter(|t| !options.exclude.contains(&t.shot))
        .map(squashfitts_core::derive_trial)
        .collect::<Result<_, _>>()?;
    let fit = fit_model(kind, TrialSet::Squash(&derived))?;
    let mut text = format!(
        "model: {kind}\nsubset: {}\n",
        squashfitts_core::subset_label(&options.exclude)
    );
    match fit {
        FitResult::Linear(f) => text.push_str(&format!(
            "n: {}\nslope: {}\nintercept: {}\npearson_r: {}\nr_squared: {}\n",
            f.n, f.slope, f.intercept, f.pearson_r, f.r_squared
        )),
        FitResult::Welford(f) => text.push_str(&format!(
            "n: {}\na: {}\nb1: {}\nb2: {}\nr_squared: {}\n",
            f.n, f.a, f.b1, f.b2, f.r_squared
        )),
    }
    emit(config, &text, out)?;
    Ok(0)
}

fn cmd_figures(config: &CliConfig, err: &mut dyn Write) -> Result<u8, Error> {
    let report = analyze(config, err)?;
    let dir = config.output_dir()?;
    let style = PlotStyle::default();
    for figure in Figure::ALL {
        let series = figure_series(&report, figure)?;
        let svg = dir.join(format!("{}.svg", figure.file_stem()));
        let csv = dir.join(format!("{}.csv", figure.file_stem()));
        write_file(&svg, &emit_svg(&series, &style)?)?;
        write_file(&csv, &emit_series_csv(&series))?;
        let _ = writeln!(err, "wrote {} and {}", svg.display(), csv.display());
    }
    Ok(0)
}

fn cmd_report(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let tolerance = config.tolerance()?;
    let report = analyze(config, err)?;
    let doc = build_json_report(&report, tolerance);
    let mut json = serde_json::to_string_pretty(&doc).expect("report is always serializable");
    json.push('\n');
    let summary = render_summary(&doc);
    if config.output == "-" {
        let _ = err.write_all(summary.as_bytes());
        out.write_all(json.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("-"),
            source,
        })?;
    } else {
        let dir = config.output_dir()?;
        write_file(&dir.join("report.json"), &json)?;
        write_file(&dir.join("summary.txt"), &summary)?;
        let _ = err.write_all(summary.as_bytes());
    }
    Ok(0)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, Error> {
    let config = &cli.config;
    config.tolerance()?;
    match cli.command {
        Command::Validate => cmd_validate(config, err),
        Command::Derive => cmd_derive(config, out, err),
        Command::Stats => cmd_stats(config, out, err),
        Command::Fit => cmd_fit(config, out, err),
        Command::Figures => cmd_figures(config, err),
        Command::Report => cmd_report(config, out, err),
    }
}

/// Parses arguments, runs one subcommand, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
