//! CSV/JSON writers. Numbers are printed with 12 significant digits so
//! repeated runs diff cleanly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{Column, TableKind};
use crate::analytics::SweepTable;
use crate::error::Result;
use crate::observables::ObservableRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.11e}")
    }
}

pub fn column_value(r: &ObservableRecord, c: Column) -> f64 {
    match c {
        Column::EA => r.e_a,
        Column::EB => r.e_b,
        Column::WB => r.w_b,
        Column::SzB => r.sz_b,
        Column::SAb => r.s_ab,
        Column::SBa => r.s_ba,
        Column::PurityA => r.purity_a,
        Column::PurityB => r.purity_b,
        Column::TraceErr => r.trace_err,
    }
}

pub fn records_csv(records: &[ObservableRecord], columns: &[Column]) -> String {
    let mut out = String::from("t");
    for c in columns {
        out.push(',');
        out.push_str(c.name());
    }
    out.push('\n');
    for r in records {
        out.push_str(&fmt_num(r.t));
        for &c in columns {
            out.push(',');
            out.push_str(&fmt_num(column_value(r, c)));
        }
        out.push('\n');
    }
    out
}

/// Array of objects with the same keys and rounding as the CSV.
pub fn records_json(records: &[ObservableRecord], columns: &[Column]) -> Result<String> {
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = records
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            m.insert("t".into(), json_num(r.t));
            for &c in columns {
                m.insert(c.name().into(), json_num(column_value(r, c)));
            }
            m
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

fn json_num(x: f64) -> serde_json::Value {
    // Round-trip through the CSV text so both formats carry the same digits.
    fmt_num(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// Rectangular table: first header cell is `y\x`, then one column per x
/// value; each row starts with its y value.
pub fn table_csv(table: &SweepTable, kind: TableKind) -> String {
    let values = match kind {
        TableKind::EAInf => &table.e_a,
        TableKind::EBInf => &table.e_b,
    };
    let mut out = format!("{}\\{}", table.y_param.label(), table.x_param.label());
    for x in &table.x {
        let _ = write!(out, ",{}", fmt_num(*x));
    }
    out.push('\n');
    for (y, row) in table.y.iter().zip(values) {
        out.push_str(&fmt_num(*y));
        for v in row {
            let _ = write!(out, ",{}", fmt_num(*v));
        }
        out.push('\n');
    }
    out
}

/// Compact single-line JSON.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// Writes `contents` to `dir/file_name`, recording the path.
pub fn emit(dir: &Path, file_name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(file_name);
    fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::SweepParam;

    fn record(t: f64) -> ObservableRecord {
        ObservableRecord {
            t,
            e_a: 1.0,
            e_b: 0.0,
            w_b: 0.0,
            sz_b: -1.0,
            s_ab: 0.0,
            s_ba: 0.0,
            purity_a: 1.0,
            purity_b: 1.0,
            trace_err: 0.0,
        }
    }

    #[test]
    fn csv_header_and_precision() {
        let csv = records_csv(&[record(0.1)], &Column::ALL);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,E_A,E_B,W_B,sz_B,S_AB,S_BA,purity_A,purity_B,trace_err"
        );
        let row = lines.next().unwrap();
        let first = row.split(',').next().unwrap();
        assert_eq!(first, "1.00000000000e-1");
        let mantissa = first.split('e').next().unwrap().replace('.', "");
        assert_eq!(mantissa.len(), 12);
        assert_eq!(row.split(',').count(), 10);
    }

    #[test]
    fn csv_subset_keeps_order() {
        let csv = records_csv(&[record(0.0)], &[Column::EA, Column::SBa]);
        assert_eq!(csv.lines().next().unwrap(), "t,E_A,S_BA");
    }

    #[test]
    fn json_mirrors_csv_values() {
        let json = records_json(&[record(1.0 / 3.0)], &[Column::EA]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let t = v[0]["t"].as_f64().unwrap();
        assert_eq!(t, "3.33333333333e-1".parse::<f64>().unwrap());
        assert_eq!(v[0]["E_A"].as_f64(), Some(1.0));
        assert!(v[0].get("E_B").is_none());
    }

    #[test]
    fn table_layout() {
        let t = SweepTable {
            x_param: SweepParam::Delta,
            y_param: SweepParam::N,
            x: vec![0.0, 1.0],
            y: vec![0.5],
            e_a: vec![vec![0.25, f64::NAN]],
            e_b: vec![vec![0.5, 0.75]],
            failures: vec![],
        };
        let csv = table_csv(&t, TableKind::EAInf);
        assert_eq!(
            csv,
            "n\\Delta,0.00000000000e0,1.00000000000e0\n5.00000000000e-1,2.50000000000e-1,nan\n"
        );
        assert!(table_csv(&t, TableKind::EBInf).contains("7.50000000000e-1"));
    }
}
