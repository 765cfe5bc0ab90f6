//! Sweep CSV schema and the locale-independent number format shared by
//! every emitted file.

use std::fmt::Write as _;

pub const SWEEP_HEADER: &str = "energy,n_modes,p_opt,r_holevo,r_dolinar,r_hadamard,r_pppm";

/// One sweep row.
#[derive(Debug, Clone, Copy)]
pub struct SweepRecord {
    pub energy: f64,
    pub n_modes: usize,
    pub p_opt: f64,
    pub r_holevo: f64,
    pub r_dolinar: f64,
    pub r_hadamard: f64,
    pub r_pppm: f64,
}

/// 12 significant digits, '.' decimal separator, bit-comparable across
/// runs.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_sweep_csv(records: &[SweepRecord]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_sig(r.energy),
            r.n_modes,
            fmt_sig(r.p_opt),
            fmt_sig(r.r_holevo),
            fmt_sig(r.r_dolinar),
            fmt_sig(r.r_hadamard),
            fmt_sig(r.r_pppm),
        );
    }
    out
}

/// A parsed sweep CSV: header names plus rows of numeric values
/// (n_modes is stored as f64 alongside the rates for uniform access).
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

pub fn parse_sweep_csv(text: &str) -> Result<SweepTable, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?;
    let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if columns.is_empty() || !columns.contains(&"energy".to_string()) {
        return Err(format!("missing 'energy' column in header '{header}'"));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != columns.len() {
            return Err(format!(
                "line {}: {} fields, header has {}",
                lineno + 2,
                fields.len(),
                columns.len()
            ));
        }
        let mut row = Vec::with_capacity(fields.len());
        for f in fields {
            row.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: bad number '{f}': {e}", lineno + 2))?,
            );
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("CSV has no data rows".into());
    }
    Ok(SweepTable { columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(0.1), "1.00000000000e-1");
        assert_eq!(fmt_sig(123.456), "1.23456000000e2");
        let x = 0.597204015460445;
        let parsed: f64 = fmt_sig(x).parse().unwrap();
        assert!((parsed - x).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let records = vec![
            SweepRecord {
                energy: 0.02,
                n_modes: 4,
                p_opt: 1.0,
                r_holevo: 0.2,
                r_dolinar: 0.1,
                r_hadamard: 0.15,
                r_pppm: 0.15,
            },
            SweepRecord {
                energy: 0.1,
                n_modes: 4,
                p_opt: 0.99,
                r_holevo: 0.43,
                r_dolinar: 0.25,
                r_hadamard: 0.19,
                r_pppm: 0.2,
            },
        ];
        let text = write_sweep_csv(&records);
        let table = parse_sweep_csv(&text).unwrap();
        assert_eq!(table.columns.len(), 7);
        assert_eq!(table.rows.len(), 2);
        let e = table.column_index("energy").unwrap();
        assert!((table.rows[1][e] - 0.1).abs() < 1e-13);
    }

    #[test]
    fn rejects_malformed_csv() {
        assert!(parse_sweep_csv("").is_err());
        assert!(parse_sweep_csv("a,b\n1").is_err());
        assert!(parse_sweep_csv("energy,n_modes\n1,x").is_err());
        assert!(parse_sweep_csv("energy,n_modes\n").is_err());
    }
}
