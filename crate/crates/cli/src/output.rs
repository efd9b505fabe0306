//! CSV and JSON emission.
//!
//! Numbers are written with 17 significant digits in scientific notation
//! and `\n` line endings, independent of locale.

use std::io::{self, Write};

use kerr_stokes::{ScenarioResult, SpectrumSeries};
use serde::Serialize;
use serde_json::json;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "omega,s_value,s_star";

pub fn write_csv<W: Write>(mut w: W, series: &SpectrumSeries) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for ((omega, s), star) in series.omega_grid.iter().zip(&series.values).zip(&series.normalized) {
        writeln!(w, "{omega:.16e},{s:.16e},{star:.16e}")?;
    }
    Ok(())
}

pub fn csv_string(series: &SpectrumSeries) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, series).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

#[derive(Serialize)]
struct Bundle<'a> {
    schema_version: u32,
    #[serde(flatten)]
    result: &'a ScenarioResult,
}

/// Full result bundle.
pub fn result_json(result: &ScenarioResult) -> serde_json::Value {
    serde_json::to_value(Bundle { schema_version: SCHEMA_VERSION, result }).expect("result serializes")
}

/// Everything but the spectrum; written next to a CSV file.
pub fn meta_json(result: &ScenarioResult) -> serde_json::Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": result.kind,
        "stokes_index": result.stokes_index,
        "analysis_time": result.analysis_time,
        "tau_r": result.tau_r,
        "reference_intensity": result.spectrum.reference_intensity,
        "arrangement": result.arrangement,
        "summary": result.summary,
        "kernel": result.kernel,
        "optimum": result.optimum,
        "warnings": result.warnings,
    })
}

pub fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use kerr_stokes::{Arrangement, PulseSpec, ScenarioConfig, StokesIndex};

    fn result() -> ScenarioResult {
        ScenarioConfig::new(
            Arrangement::CohSq { p1: PulseSpec::coherent(1.0), p2: PulseSpec::with_peak_spm_phase(1.0, 1.0) },
            StokesIndex::S2,
        )
        .optimized_at(0.0)
        .run()
        .unwrap()
    }

    #[test]
    fn csv_layout() {
        let csv = csv_string(&result().spectrum);
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 512 + 2);
        assert_eq!(lines[513], "");
        assert!(!csv.contains('\r'));
        assert!(lines[1].starts_with("0.0000000000000000e0,"));
        let fields: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
        assert!((fields[1] - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
        for line in &lines[1..513] {
            for field in line.split(',') {
                let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
                assert_eq!(mantissa.len(), 18, "{field}");
            }
        }
    }

    #[test]
    fn json_has_schema_version() {
        let r = result();
        let v = result_json(&r);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["spectrum"]["values"].as_array().unwrap().len(), 512);
        assert!(v["optimum"]["s_min_numeric"].is_number());
        let m = meta_json(&r);
        assert!(m.get("spectrum").is_none());
        assert_eq!(m["stokes_index"], "S2");
    }
}
