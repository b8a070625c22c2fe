use anyhow::{ensure, Result};
use bcrsp::protocol::build_correction_table;
use serde::Serialize;

use crate::{csv_string, json_string, Format, Report};

pub const MAX_TABLE_DIM: usize = 6;

/// Attached to the qutrit table, whose commonly printed form lists the two
/// correction columns the other way round.
pub const SWAP_NOTE: &str = "the widely printed qutrit feed-forward table swaps the A1 and B2 correction \
columns relative to this rule; the columns below follow the rule";

#[derive(Serialize)]
struct Row {
    l: usize,
    n: usize,
    m: usize,
    k: usize,
    a1_correction: usize,
    b2_correction: usize,
}

#[derive(Serialize)]
struct TableJson<'a> {
    dimension: usize,
    rule: &'static str,
    note: Option<&'static str>,
    rows: &'a [Row],
}

const RULE: &str = "A1 takes U_(m+n mod N), B2 takes U_(k+l mod N)";

pub(crate) fn cmd_table(n: usize, format: Format) -> Result<Report> {
    ensure!(n <= MAX_TABLE_DIM, "table dimension is limited to {MAX_TABLE_DIM}, got {n}");
    let rows: Vec<Row> = build_correction_table(n)?
        .into_iter()
        .map(|e| Row {
            l: e.outcome.l,
            n: e.outcome.n,
            m: e.outcome.m,
            k: e.outcome.k,
            a1_correction: e.rule.a1_index,
            b2_correction: e.rule.b2_index,
        })
        .collect();
    let note = (n == 3).then_some(SWAP_NOTE);
    let body = match format {
        Format::Csv => {
            let mut s = format!("# dimension {n}: {RULE}\n");
            if let Some(note) = note {
                s.push_str(&format!("# note: {note}\n"));
            }
            s + &csv_string(&rows)?
        }
        Format::Json => json_string(&TableJson { dimension: n, rule: RULE, note, rows: &rows })?,
    };
    Ok(Report { body, ok: true })
}
