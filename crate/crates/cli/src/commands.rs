use std::fs;
use std::path::{Path, PathBuf};

use kerr_stokes::{Issue, OmegaGrid, ScenarioResult};

use crate::error::CliError;
use crate::verify::{self, Fault, Report};
use crate::{config, output, presets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub config: PathBuf,
    /// Output file; standard output when absent.
    pub out: Option<PathBuf>,
    pub format: Format,
    pub grid: Option<OmegaGrid>,
    pub optimize_at: Option<f64>,
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Path of the JSON sidecar that accompanies a CSV result.
pub fn meta_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.meta.json"))
}

pub struct RunOutcome {
    pub result: ScenarioResult,
    /// Rendered output when no file was requested.
    pub stdout: Option<String>,
    pub written: Vec<PathBuf>,
}

pub fn cmd_run(opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let mut cfg = config::load(&opts.config)?;
    if let Some(grid) = opts.grid {
        cfg.grid = grid;
    }
    if opts.optimize_at.is_some() {
        cfg.optimize_at = opts.optimize_at;
    }
    let validated = cfg.validate().map_err(CliError::Validation)?;
    let result = kerr_stokes::scenario::run(&validated)?;

    let rendered = match opts.format {
        Format::Csv => output::csv_string(&result.spectrum),
        Format::Json => output::pretty(&output::result_json(&result)),
    };
    let mut written = Vec::new();
    let stdout = match &opts.out {
        Some(path) => {
            write(path, &rendered)?;
            written.push(path.clone());
            if opts.format == Format::Csv {
                let meta = meta_path(path);
                write(&meta, &output::pretty(&output::meta_json(&result)))?;
                written.push(meta);
            }
            None
        }
        None => Some(rendered),
    };
    Ok(RunOutcome { result, stdout, written })
}

pub fn cmd_figure(figure_id: u32, out_dir: &Path, grid: Option<OmegaGrid>) -> Result<Vec<PathBuf>, CliError> {
    let mut preset = presets::figure(figure_id).ok_or(CliError::UnknownFigure(figure_id))?;
    if let Some(grid) = grid {
        preset = preset.with_grid(grid);
    }
    let mut results = Vec::with_capacity(preset.curves.len());
    for curve in &preset.curves {
        let validated = curve.config.validate().map_err(|issues| {
            CliError::Validation(
                issues
                    .into_iter()
                    .map(|i| Issue { path: format!("curve {}: {}", curve.label, i.path), message: i.message })
                    .collect(),
            )
        })?;
        results.push((preset.file_name(curve), kerr_stokes::scenario::run(&validated)?));
    }
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    let mut written = Vec::with_capacity(results.len());
    for (name, result) in results {
        let path = out_dir.join(name);
        write(&path, &output::csv_string(&result.spectrum))?;
        written.push(path);
    }
    Ok(written)
}

/// Runs the verification suite and writes its report. Fails with exit
/// code 4 when any check fails; the report is written either way.
pub fn cmd_verify(report_path: Option<&Path>, fault: Option<Fault>) -> Result<Report, CliError> {
    let report = verify::run_suite(fault);
    if let Some(path) = report_path {
        write(path, &report.render())?;
    }
    Ok(report)
}
