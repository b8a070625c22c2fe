use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use bcrsp::optics::{fourier_matrix, reck_decompose, InterferometerNetwork};
use bcrsp::qudit::Operator;
use bcrsp::C64;
use serde::{Deserialize, Serialize};

use crate::{json_string, Format, Report};

/// Networks are accepted when they rebuild the input this closely.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// `charlie4` is the four-dimensional Fourier measurement basis, one basis
/// vector per row.
pub fn builtin_matrix(name: &str, dimension: usize) -> Option<Result<Operator>> {
    match name {
        "charlie4" => Some(fourier_matrix(4).map_err(Into::into)),
        "identity" => Some(if dimension == 0 {
            Err(anyhow::anyhow!("identity needs a positive dimension"))
        } else {
            Ok(Operator::identity(dimension))
        }),
        _ => None,
    }
}

/// Rows of real numbers or `[re, im]` pairs.
fn read_matrix(path: &Path) -> Result<Operator> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&text).context("matrix must be a JSON array of rows")?;
    let rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Real(x) => C64::new(x, 0.0),
                    Entry::Complex([re, im]) => C64::new(re, im),
                })
                .collect()
        })
        .collect();
    let op = Operator::from_rows(rows)?;
    ensure!(op.is_square(), "matrix must be square");
    Ok(op)
}

#[derive(Serialize)]
struct DecomposeJson<'a> {
    source: &'a str,
    beam_splitters: usize,
    phase_shifters: usize,
    reconstruction_error: f64,
    network: &'a InterferometerNetwork,
}

pub(crate) fn cmd_decompose(source: &str, dimension: usize, format: Format) -> Result<Report> {
    if format != Format::Json {
        bail!("decompose emits JSON only");
    }
    let u = match builtin_matrix(source, dimension) {
        Some(m) => m?,
        None => read_matrix(Path::new(source))?,
    };
    let network = reck_decompose(&u)?;
    let err = network.reconstruction_error(&u);
    let body = json_string(&DecomposeJson {
        source,
        beam_splitters: network.beam_splitters(),
        phase_shifters: network.phase_shifters(),
        reconstruction_error: err,
        network: &network,
    })?;
    Ok(Report { body, ok: err <= RECONSTRUCTION_TOL })
}
