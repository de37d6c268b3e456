//! CSV result tables and the audit that re-checks them.
//!
//! Columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `sweep` | `single`, `power` or `overlap` |
//! | `x` | sweep variable (dBm or w_o/W) |
//! | `duplex` | `FDD` / `TDD` |
//! | `altitude_km` | satellite altitude |
//! | `access_weight` | ε |
//! | `total_power_dbm` | P |
//! | `overlap_fraction` | w_o/W |
//! | `solver` | `exact`, `pso`, `oracle` |
//! | `status` | `ok` or `error: ...` |
//! | `zeta_mbps`, `rate_access_mbps`, `rate_backhaul_mbps`, `throughput_mbps` | rates |
//! | `p_ue_w`, `p_bs_w`, `w_a_mhz`, `w_b_mhz` | allocation |
//! | `iterations`, `converged` | solver bookkeeping |
//!
//! Numbers carry 9 significant digits. Failed rows leave the result columns empty.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::config::ExperimentConfig;
use super::sweep::{SweepAxis, SweepRow};
use crate::allocator::SolverKind;
use crate::ratemodel::{evaluate, validate, Allocation, DuplexMode};
use crate::{Error, Result};

pub const COLUMNS: [&str; 19] = [
    "sweep",
    "x",
    "duplex",
    "altitude_km",
    "access_weight",
    "total_power_dbm",
    "overlap_fraction",
    "solver",
    "status",
    "zeta_mbps",
    "rate_access_mbps",
    "rate_backhaul_mbps",
    "throughput_mbps",
    "p_ue_w",
    "p_bs_w",
    "w_a_mhz",
    "w_b_mhz",
    "iterations",
    "converged",
];

/// Relative agreement required between recorded and recomputed values.
pub const AUDIT_TOLERANCE: f64 = 1e-6;

/// `v` with 9 significant digits, fixed notation for moderate exponents,
/// trailing zeros trimmed.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn record(row: &SweepRow) -> Vec<String> {
    let mut out = vec![
        row.axis.to_string(),
        format_sig9(row.x),
        row.duplex.to_string(),
        format_sig9(row.altitude / 1e3),
        format_sig9(row.access_weight),
        format_sig9(row.total_power_dbm),
        format_sig9(row.overlap_fraction),
        row.solver.to_string(),
    ];
    match &row.outcome {
        Ok(res) => {
            let r = &res.report;
            let a = &res.allocation;
            out.push("ok".into());
            out.extend(
                [
                    r.maxmin_level / 1e6,
                    r.rate_access / 1e6,
                    r.rate_backhaul / 1e6,
                    r.throughput / 1e6,
                    a.p_ue,
                    a.p_bs,
                    a.w_a / 1e6,
                    a.w_b / 1e6,
                ]
                .map(format_sig9),
            );
            out.push(res.iterations_used.to_string());
            out.push(res.converged.to_string());
        }
        Err(msg) => {
            out.push(format!("error: {msg}"));
            out.extend(std::iter::repeat_n(
                String::new(),
                COLUMNS.len() - out.len(),
            ));
        }
    }
    out
}

/// Writes `rows` as RFC 4180 CSV (CRLF line ends) in the given order.
pub fn write_csv_to<W: Write>(rows: &[SweepRow], sink: W) -> Result<W> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(sink);
    let to_io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    };
    let wrap = |e: csv::Error| Error::io("<csv>", to_io(e));
    w.write_record(COLUMNS).map_err(wrap)?;
    for row in rows {
        w.write_record(record(row)).map_err(wrap)?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<csv>", std::io::Error::other(e.to_string())))
}

pub fn write_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut file = write_csv_to(rows, file).map_err(|e| relabel(e, path))?;
    file.flush().map_err(|e| Error::io(path, e))
}

fn relabel(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    }
}

/// One parsed CSV line. Result fields are `None` on failed rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    /// 1-based line in the file.
    pub line: usize,
    pub axis: SweepAxis,
    pub x: f64,
    pub duplex: DuplexMode,
    pub altitude_km: f64,
    pub access_weight: f64,
    pub total_power_dbm: f64,
    pub overlap_fraction: f64,
    pub solver: SolverKind,
    pub status: String,
    pub zeta_mbps: Option<f64>,
    pub rate_access_mbps: Option<f64>,
    pub rate_backhaul_mbps: Option<f64>,
    pub throughput_mbps: Option<f64>,
    pub allocation: Option<Allocation>,
}

impl TableRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Parses a table written by [`write_csv`]. The header must match [`COLUMNS`].
pub fn read_table<R: Read>(source: R, source_name: &str) -> Result<Vec<TableRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let parse_err = |line: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        column: 0,
        message,
    };
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        parse_err(line, e.to_string())
    };

    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(parse_err(
            1,
            format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        ));
    }

    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            field(i).parse::<f64>().map_err(|e| {
                parse_err(line, format!("column {}: {e} ({:?})", COLUMNS[i], field(i)))
            })
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if field(i).is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let named = |i: usize, e: Error| parse_err(line, format!("column {}: {e}", COLUMNS[i]));

        let p_ue = opt(13)?;
        let p_bs = opt(14)?;
        let w_a = opt(15)?;
        let w_b = opt(16)?;
        let allocation = match (p_ue, p_bs, w_a, w_b) {
            (Some(p_ue), Some(p_bs), Some(w_a), Some(w_b)) => {
                Some(Allocation::new(p_ue, p_bs, w_a * 1e6, w_b * 1e6))
            }
            _ => None,
        };
        rows.push(TableRow {
            line,
            axis: field(0).parse().map_err(|e| named(0, e))?,
            x: num(1)?,
            duplex: field(2).parse().map_err(|e| named(2, e))?,
            altitude_km: num(3)?,
            access_weight: num(4)?,
            total_power_dbm: num(5)?,
            overlap_fraction: num(6)?,
            solver: field(7).parse().map_err(|e| named(7, e))?,
            status: field(8).to_string(),
            zeta_mbps: opt(9)?,
            rate_access_mbps: opt(10)?,
            rate_backhaul_mbps: opt(11)?,
            throughput_mbps: opt(12)?,
            allocation,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<TableRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_table(file, &path.display().to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditFinding {
    pub line: usize,
    /// Empty when the row checks out.
    pub problems: Vec<String>,
}

impl AuditFinding {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
    }
}

fn close(recorded: f64, recomputed: f64) -> bool {
    (recorded - recomputed).abs() <= AUDIT_TOLERANCE * recorded.abs().max(recomputed.abs()) + 1e-12
}

/// Rebuilds each successful row's scenario from `cfg` plus the row's own
/// parameters, re-validates the allocation and re-evaluates its rates.
/// Failed rows are skipped.
pub fn audit(cfg: &ExperimentConfig, rows: &[TableRow]) -> Vec<AuditFinding> {
    rows.iter()
        .filter(|r| r.is_ok())
        .map(|row| AuditFinding {
            line: row.line,
            problems: audit_row(cfg, row),
        })
        .collect()
}

fn audit_row(cfg: &ExperimentConfig, row: &TableRow) -> Vec<String> {
    let Some(alloc) = row.allocation else {
        return vec!["ok row without an allocation".into()];
    };
    let scenario = cfg
        .scenario
        .with_power_dbm(row.total_power_dbm)
        .with_duplex(row.duplex)
        .at_altitude(row.altitude_km * 1e3)
        .with_access_weight(row.access_weight)
        .with_overlap_fraction(row.overlap_fraction);
    let scn = match scenario.params() {
        Ok(s) => s,
        Err(e) => return vec![format!("scenario rebuild failed: {e}")],
    };
    let mut problems: Vec<String> = validate(&scn, &alloc, AUDIT_TOLERANCE)
        .into_iter()
        .map(|c| format!("constraint {c} violated"))
        .collect();
    let report = match evaluate(&scn, &alloc) {
        Ok(r) => r,
        Err(e) => {
            problems.push(e.to_string());
            return problems;
        }
    };
    let checks = [
        ("zeta_mbps", row.zeta_mbps, report.maxmin_level),
        ("rate_access_mbps", row.rate_access_mbps, report.rate_access),
        (
            "rate_backhaul_mbps",
            row.rate_backhaul_mbps,
            report.rate_backhaul,
        ),
        ("throughput_mbps", row.throughput_mbps, report.throughput),
    ];
    for (name, recorded, recomputed) in checks {
        let recomputed = recomputed / 1e6;
        match recorded {
            Some(v) if close(v, recomputed) => {}
            Some(v) => problems.push(format!("{name}: recorded {v}, recomputed {recomputed}")),
            None => problems.push(format!("{name} missing")),
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expcli::config::parse_config;
    use crate::expcli::sweep::run_single;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(40.0), "40");
        assert_eq!(format_sig9(0.1), "0.1");
        assert_eq!(format_sig9(123.456789012), "123.456789");
        assert_eq!(format_sig9(-2.5e-7), "-2.5e-7");
        assert_eq!(format_sig9(1.234567891e12), "1.23456789e12");
        assert_eq!(format_sig9(999_999_999.6), "1e9");
        assert_eq!(format_sig9(f64::NAN), "NaN");
        let v = 265.0969889218;
        let back: f64 = format_sig9(v).parse().unwrap();
        assert!((back / v - 1.0).abs() < 5e-9);
    }

    #[test]
    fn empty_table_is_header_only() {
        let bytes = write_csv_to(&[], Vec::new()).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text, format!("{}\r\n", COLUMNS.join(",")));
        assert!(read_table(text.as_bytes(), "t").unwrap().is_empty());
    }

    #[test]
    fn one_row_two_lines() {
        let cfg = parse_config(r#"{"solvers": ["exact"]}"#, "t").unwrap();
        let rows = run_single(&cfg);
        let text = String::from_utf8(write_csv_to(&rows, Vec::new()).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].matches(',').count(), COLUMNS.len() - 1);
        assert!(lines[1].starts_with("single,40,FDD,600,0.1,40,0,exact,ok,"));
    }

    #[test]
    fn error_rows_are_quoted_and_skipped_by_audit() {
        let cfg = ExperimentConfig::default();
        let row = SweepRow {
            axis: SweepAxis::Power,
            x: 40.0,
            duplex: DuplexMode::Tdd,
            altitude: 600e3,
            access_weight: 0.1,
            total_power_dbm: 40.0,
            overlap_fraction: 0.0,
            solver: SolverKind::Pso,
            outcome: Err("boom, \"quoted\"".into()),
        };
        let text = String::from_utf8(write_csv_to(&[row], Vec::new()).unwrap()).unwrap();
        assert!(text.contains("\"error: boom, \"\"quoted\"\"\""));
        let parsed = read_table(text.as_bytes(), "t").unwrap();
        assert_eq!(parsed.len(), 1);
        assert!(!parsed[0].is_ok());
        assert!(parsed[0].allocation.is_none());
        assert!(audit(&cfg, &parsed).is_empty());
    }

    #[test]
    fn audit_accepts_solver_output_and_flags_tampering() {
        let cfg = parse_config(
            r#"{"solvers": ["exact", "oracle", "pso"], "oracle_resolution": 30}"#,
            "t",
        )
        .unwrap();
        let rows = run_single(&cfg);
        let text = String::from_utf8(write_csv_to(&rows, Vec::new()).unwrap()).unwrap();
        let parsed = read_table(text.as_bytes(), "t").unwrap();
        assert_eq!(parsed.len(), 3);
        let findings = audit(&cfg, &parsed);
        assert!(findings.iter().all(AuditFinding::passed), "{findings:?}");

        let mut tampered = parsed.clone();
        tampered[0].throughput_mbps = tampered[0].throughput_mbps.map(|t| t * 1.01);
        let mut alloc = tampered[1].allocation.unwrap();
        alloc.p_ue *= 2.0;
        tampered[1].allocation = Some(alloc);
        let findings = audit(&cfg, &tampered);
        assert!(!findings[0].passed());
        assert!(findings[1].problems.iter().any(|p| p.contains("1a")));
        assert!(findings[2].passed());
    }

    #[test]
    fn malformed_tables() {
        assert!(matches!(
            read_table("a,b\n1,2\n".as_bytes(), "t"),
            Err(Error::Parse { .. })
        ));
        let header = COLUMNS.join(",");
        let bad = format!("{header}\npower,zz,FDD,600,0.1,40,0,exact,ok,,,,,,,,,,\n");
        match read_table(bad.as_bytes(), "t").unwrap_err() {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("column x"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let short = format!("{header}\npower,40\n");
        assert!(read_table(short.as_bytes(), "t").is_err());
    }
}
