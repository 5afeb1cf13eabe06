//! CSV files for sweep results.

use serde::{Deserialize, Serialize};

use crate::error::{PolarError, Result};
use crate::quantum::QsimRecord;

use super::sweep::ResultRecord;

pub const RESULT_HEADER: &str =
    "param_db,blocks,bit_errors,block_errors,ber,bler,seconds,seed,decoder";
pub const QSIM_HEADER: &str = "p,blocks,logical_errors,rate,ci_low,ci_high,c,seed";

fn csv_err(e: csv::Error) -> PolarError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    PolarError::Parse {
        line,
        msg: e.to_string(),
    }
}

fn emit<R: Serialize>(header: &str, records: &[R]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.serialize(r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output");
    format!("{header}\n{body}")
}

fn parse<R: for<'de> Deserialize<'de>>(header: &str, text: &str) -> Result<Vec<R>> {
    let first = text.lines().next().unwrap_or("");
    if first.trim_end() != header {
        return Err(PolarError::Parse {
            line: 1,
            msg: format!("expected header {header:?}"),
        });
    }
    csv::ReaderBuilder::new()
        .from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(csv_err))
        .collect()
}

pub fn emit_csv(records: &[ResultRecord]) -> String {
    emit(RESULT_HEADER, records)
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRecord>> {
    parse(RESULT_HEADER, text)
}

#[derive(Serialize, Deserialize)]
struct QsimRow {
    p: f64,
    blocks: u64,
    logical_errors: u64,
    rate: f64,
    ci_low: f64,
    ci_high: f64,
    c: usize,
    seed: u64,
}

pub fn emit_qsim_csv(records: &[QsimRecord]) -> String {
    let rows: Vec<QsimRow> = records
        .iter()
        .map(|r| QsimRow {
            p: r.p,
            blocks: r.blocks,
            logical_errors: r.logical_errors,
            rate: r.rate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            c: r.c,
            seed: r.seed,
        })
        .collect();
    emit(QSIM_HEADER, &rows)
}

pub fn parse_qsim_csv(text: &str) -> Result<Vec<QsimRecord>> {
    let rows: Vec<QsimRow> = parse(QSIM_HEADER, text)?;
    Ok(rows
        .into_iter()
        .map(|r| QsimRecord {
            p: r.p,
            blocks: r.blocks,
            logical_errors: r.logical_errors,
            rate: r.rate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            c: r.c,
            seed: r.seed,
        })
        .collect())
}
