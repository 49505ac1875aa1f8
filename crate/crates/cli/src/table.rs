//! CSV encoding of sweeps.
//!
//! Header `omega_t,mode,R,S,U,purity,concurrence`, plus
//! `purity_oracle,concurrence_oracle` when the oracle ran. Numbers carry 17
//! significant digits, lines end in LF.

use hvh_core::spin_oscillator::Rsu;

use crate::error::{CliError, Result};
use crate::sweep::{RowMode, SweepRow};

pub const HEADER: [&str; 7] = ["omega_t", "mode", "R", "S", "U", "purity", "concurrence"];
pub const ORACLE_HEADER: [&str; 2] = ["purity_oracle", "concurrence_oracle"];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv(rows: &[SweepRow]) -> Result<String> {
    let with_oracle = rows.first().is_some_and(|r| r.oracle.is_some());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header: Vec<&str> = HEADER.to_vec();
    if with_oracle {
        header.extend(ORACLE_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        if r.oracle.is_some() != with_oracle {
            return Err(CliError::Csv("rows disagree on oracle columns".into()));
        }
        let mut rec = vec![format_number(r.omega_t), r.mode.as_str().to_string()];
        rec.extend([r.rsu.r, r.rsu.s, r.rsu.u, r.purity, r.concurrence].map(format_number));
        if let Some((p, c)) = r.oracle {
            rec.extend([p, c].map(format_number));
        }
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Csv(e.to_string()))
}

fn parse_field(s: &str, line: u64, name: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| CliError::Csv(format!("line {line}: {name} {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Csv(format!("line {line}: {name} {s:?} is not finite")));
    }
    Ok(v)
}

/// Inverse of [`write_csv`].
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    if text.contains('\r') {
        return Err(CliError::Csv("expected LF line endings".into()));
    }
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rd.headers()?.clone();
    let names: Vec<&str> = header.iter().collect();
    let with_oracle = if names == HEADER {
        false
    } else if names.len() == HEADER.len() + 2 && names[..7] == HEADER && names[7..] == ORACLE_HEADER {
        true
    } else {
        return Err(CliError::Csv(format!("unexpected header {names:?}")));
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let f = |i: usize| parse_field(&rec[i], line, names[i]);
        let mode = match &rec[1] {
            "quantum" => RowMode::Quantum,
            "hybrid" => RowMode::Hybrid,
            other => return Err(CliError::Csv(format!("line {line}: unknown mode {other:?}"))),
        };
        rows.push(SweepRow {
            omega_t: f(0)?,
            mode,
            rsu: Rsu::new(f(2)?, f(3)?, f(4)?),
            purity: f(5)?,
            concurrence: f(6)?,
            oracle: if with_oracle { Some((f(7)?, f(8)?)) } else { None },
        });
    }
    Ok(rows)
}
