//! Steady-state grid runs.

use std::path::{Path, PathBuf};

use super::config::SweepSpec;
use super::manifest::{RunKind, RunManifest};
use super::output::{emit, table_csv, write_json, Format};
use crate::analytics::{sweep_steady, SweepTable};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub table: SweepTable,
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

/// Evaluates the grid in memory.
pub fn simulate_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    sweep_steady(&spec.grid()?)
}

/// Writes one `{name}_{table}.csv` per selected table (or a single
/// `{name}.json` holding the whole table) plus the manifest. Failed grid
/// points are NaN in the data and listed in the manifest.
pub fn run_sweep(spec: &SweepSpec, dir: &Path, format: Format) -> Result<SweepRun> {
    std::fs::create_dir_all(dir)?;
    let grid = spec.grid()?;
    let table = sweep_steady(&grid)?;
    let mut manifest = RunManifest::new(&spec.name, RunKind::Sweep, spec)?;
    manifest.resolved_params = Some(grid.base);
    match format {
        Format::Csv => {
            for &kind in &spec.tables {
                let file = format!("{}_{}.csv", spec.name, kind.name());
                emit(dir, &file, &table_csv(&table, kind), &mut manifest.files)?;
            }
        }
        Format::Json => {
            let path = dir.join(format!("{}.json", spec.name));
            write_json(&path, &table)?;
            manifest.files.push(path);
        }
    }
    if !table.failures.is_empty() {
        manifest
            .warnings
            .push(format!("{} grid points failed", table.failures.len()));
        manifest.failures = table.failures.clone();
    }
    let manifest_path = manifest.write(dir)?;
    Ok(SweepRun {
        table,
        manifest,
        manifest_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{Axis, AxisScale, SweepParam};
    use crate::scenario::config::{ParamsConfig, TableKind};

    fn point(param: SweepParam, v: f64) -> Axis {
        Axis {
            param,
            start: v,
            stop: v,
            points: 1,
            scale: AxisScale::Linear,
        }
    }

    #[test]
    fn degenerate_grid_gives_single_row_tables() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            name: "one".into(),
            params: ParamsConfig::default(),
            x: point(SweepParam::K, 1.0),
            y: point(SweepParam::L, 1.0),
            tables: vec![TableKind::EAInf, TableKind::EBInf],
        };
        let run = run_sweep(&spec, dir.path(), Format::Csv).unwrap();
        assert_eq!(run.manifest.files.len(), 2);
        let csv = std::fs::read_to_string(dir.path().join("one_E_B_inf.csv")).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "Gamma_over_g\\F_over_g,1.00000000000e0");
        let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        let want = crate::analytics::steady_energy_analytic(1.0, 1.0, 1.0).unwrap().e_b_inf;
        assert!((v - want).abs() < 1e-11);
    }

    #[test]
    fn failures_are_listed_in_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SweepSpec {
            name: "bad".into(),
            params: ParamsConfig::default(),
            x: point(SweepParam::K, 0.0),
            y: point(SweepParam::Delta, 1.0),
            tables: vec![TableKind::EBInf],
        };
        let run = run_sweep(&spec, dir.path(), Format::Json).unwrap();
        assert_eq!(run.manifest.failures.len(), 1);
        assert!(!run.manifest.is_clean());
        let json: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("bad.json")).unwrap(),
        )
        .unwrap();
        assert!(json["e_b"][0][0].is_null());
    }
}
