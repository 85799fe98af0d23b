//! File formats: numeric CSV matrices, energy traces, and topology files.
//!
//! CSVs use `.` as the decimal separator and LF line endings. Matrix CSVs
//! are row-major, full N×N including the diagonal, no header. Scalars are
//! written with the shortest representation that round-trips, so loading
//! an artifact back reproduces the exact values.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hopfield::SolverResult;
use crate::matrix::{BoolMatrix, SquareMatrix};
use crate::route::ActivationGrid;
use crate::scalar::Scalar;
use crate::topology::{build_constellation, ConstellationTopology, PlanarTopology};
use crate::traffic::ThroughputMatrix;

pub const ENERGY_TRACE_HEADER: &str = "sweep,energy,flips";

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_string(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_error(origin: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_scalar<S: Scalar>(field: &str) -> std::result::Result<S, String> {
    field
        .trim()
        .parse::<f64>()
        .map(S::from_f64_lossy)
        .map_err(|_| format!("`{}` is not a number", field.trim()))
}

// ---------------------------------------------------------------------------
// Numeric matrices

pub fn matrix_to_csv<S: Scalar>(m: &SquareMatrix<S>) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_matrix_csv<S: Scalar>(text: &str, origin: &Path) -> Result<SquareMatrix<S>> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<S> = line
            .split(',')
            .map(|field| parse_scalar(field).map_err(|msg| parse_error(origin, idx + 1, msg)))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_error(origin, 1, "empty matrix"));
    }
    for (idx, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(parse_error(
                origin,
                idx + 1,
                format!("expected {n} columns, got {}", row.len()),
            ));
        }
    }
    Ok(SquareMatrix::from_rows(rows).expect("shape checked above"))
}

pub fn read_matrix_csv<S: Scalar>(path: &Path) -> Result<SquareMatrix<S>> {
    parse_matrix_csv(&read_to_string(path)?, path)
}

pub fn write_matrix_csv<S: Scalar>(path: &Path, m: &SquareMatrix<S>) -> Result<()> {
    write_string(path, &matrix_to_csv(m))
}

pub fn parse_throughput_csv<S: Scalar>(text: &str, origin: &Path) -> Result<ThroughputMatrix<S>> {
    ThroughputMatrix::new(parse_matrix_csv(text, origin)?)
}

pub fn read_throughput_csv<S: Scalar>(path: &Path) -> Result<ThroughputMatrix<S>> {
    parse_throughput_csv(&read_to_string(path)?, path)
}

// ---------------------------------------------------------------------------
// Boolean grids (adjacency matrices, activation grids)

pub fn bool_matrix_to_csv(m: &BoolMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.n() {
        let row: Vec<&str> = (0..m.n()).map(|j| if m.get(i, j) { "1" } else { "0" }).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Rows are nodes, columns are hops.
pub fn grid_to_csv(grid: &ActivationGrid) -> String {
    let mut out = String::new();
    for node in 0..grid.n_nodes {
        let row: Vec<&str> = (0..grid.n_hops)
            .map(|hop| if grid.get(node, hop) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_bool_rows(text: &str, origin: &Path) -> Result<Vec<Vec<bool>>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<bool> = line
            .split(',')
            .map(|field| match field.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_error(
                    origin,
                    idx + 1,
                    format!("`{other}` is not 0 or 1"),
                )),
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Energy traces

/// One row of the per-sweep trace artifact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow<S> {
    pub sweep: usize,
    pub energy: S,
    pub flips: usize,
}

pub fn energy_trace_to_csv<S: Scalar>(result: &SolverResult<S>) -> String {
    let mut out = String::from(ENERGY_TRACE_HEADER);
    out.push('\n');
    for (sweep, (energy, flips)) in result
        .energy_trace
        .iter()
        .zip(&result.flips_per_sweep)
        .enumerate()
    {
        out.push_str(&format!("{sweep},{energy},{flips}\n"));
    }
    out
}

pub fn parse_energy_trace_csv<S: Scalar>(text: &str, origin: &Path) -> Result<Vec<TraceRow<S>>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == ENERGY_TRACE_HEADER => {}
        _ => {
            return Err(parse_error(
                origin,
                1,
                format!("expected header `{ENERGY_TRACE_HEADER}`"),
            ))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_error(origin, idx + 1, "expected 3 fields"));
        }
        let sweep = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_error(origin, idx + 1, "bad sweep index"))?;
        let energy =
            parse_scalar(fields[1]).map_err(|msg| parse_error(origin, idx + 1, msg))?;
        let flips = fields[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| parse_error(origin, idx + 1, "bad flip count"))?;
        rows.push(TraceRow {
            sweep,
            energy,
            flips,
        });
    }
    Ok(rows)
}

pub fn read_energy_trace_csv<S: Scalar>(path: &Path) -> Result<Vec<TraceRow<S>>> {
    parse_energy_trace_csv(&read_to_string(path)?, path)
}

// ---------------------------------------------------------------------------
// Line-oriented `key = value` text

/// A parsed `key = value` line; `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyValue {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Parses line-oriented `key = value` text. Blank lines and lines starting
/// with `#` are skipped; anything else must contain `=`.
pub fn parse_key_values(text: &str, origin: &Path) -> Result<Vec<KeyValue>> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(parse_error(origin, idx + 1, "expected `key = value`"));
        };
        pairs.push(KeyValue {
            line: idx + 1,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(pairs)
}

// ---------------------------------------------------------------------------
// Topology files

/// Parsed topology file: a planar point set or a constellation grid.
#[derive(Debug, Clone)]
pub enum TopologyFile<S> {
    Planar(PlanarTopology<S>),
    Constellation(ConstellationTopology<S>),
}

impl<S: Scalar> TopologyFile<S> {
    pub fn n(&self) -> usize {
        match self {
            TopologyFile::Planar(t) => t.n(),
            TopologyFile::Constellation(t) => t.n(),
        }
    }
}

fn parse_point_list(value: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    let v = value.trim();
    let inner = v
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or("expected a bracketed list like [[x, y], [x, y]]")?;
    let mut points = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = i + 1;
                }
                depth += 1;
            }
            ']' => {
                if depth == 0 {
                    return Err("unbalanced brackets".into());
                }
                depth -= 1;
                if depth == 0 {
                    let fields: Vec<&str> = inner[start..i].split(',').collect();
                    if fields.len() != 2 {
                        return Err(format!(
                            "point `{}` must have exactly two coordinates",
                            &inner[start..i]
                        ));
                    }
                    let x: f64 = fields[0]
                        .trim()
                        .parse()
                        .map_err(|_| format!("`{}` is not a number", fields[0].trim()))?;
                    let y: f64 = fields[1]
                        .trim()
                        .parse()
                        .map_err(|_| format!("`{}` is not a number", fields[1].trim()))?;
                    points.push((x, y));
                }
            }
            c if depth == 0 && c != ',' && !c.is_whitespace() => {
                return Err(format!("unexpected `{c}` between points"));
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err("unbalanced brackets".into());
    }
    Ok(points)
}

/// Reads a topology file.
///
/// Planar files carry `nodes = [[x, y], ...]`. Constellation files carry
/// `planes` and `sats_per_plane`, with optional `seam` (default true),
/// `intra_cost` and `inter_cost` (default 1).
pub fn parse_topology_file<S: Scalar>(text: &str, origin: &Path) -> Result<TopologyFile<S>> {
    let pairs = parse_key_values(text, origin)?;
    if pairs.is_empty() {
        return Err(parse_error(origin, 1, "empty topology file"));
    }

    let mut nodes: Option<(usize, Vec<(f64, f64)>)> = None;
    let mut planes: Option<usize> = None;
    let mut sats: Option<usize> = None;
    let mut seam = true;
    let mut intra_cost = 1.0f64;
    let mut inter_cost = 1.0f64;
    let mut constellation_keys = false;

    for kv in &pairs {
        let err = |msg: String| parse_error(origin, kv.line, msg);
        match kv.key.as_str() {
            "nodes" => {
                let points = parse_point_list(&kv.value).map_err(|m| err(m.to_string()))?;
                nodes = Some((kv.line, points));
            }
            "planes" => {
                constellation_keys = true;
                planes = Some(kv.value.parse().map_err(|_| {
                    err(format!("`{}` is not a positive integer", kv.value))
                })?);
            }
            "sats_per_plane" => {
                constellation_keys = true;
                sats = Some(kv.value.parse().map_err(|_| {
                    err(format!("`{}` is not a positive integer", kv.value))
                })?);
            }
            "seam" => {
                constellation_keys = true;
                seam = match kv.value.as_str() {
                    "true" => true,
                    "false" => false,
                    other => return Err(err(format!("`{other}` is not true/false"))),
                };
            }
            "intra_cost" => {
                constellation_keys = true;
                intra_cost = kv
                    .value
                    .parse()
                    .map_err(|_| err(format!("`{}` is not a number", kv.value)))?;
            }
            "inter_cost" => {
                constellation_keys = true;
                inter_cost = kv
                    .value
                    .parse()
                    .map_err(|_| err(format!("`{}` is not a number", kv.value)))?;
            }
            other => {
                return Err(err(format!("unknown topology key `{other}`")));
            }
        }
    }

    match (nodes, constellation_keys) {
        (Some(_), true) => Err(parse_error(
            origin,
            pairs[0].line,
            "file mixes planar `nodes` with constellation keys",
        )),
        (Some((line, points)), false) => {
            let locations = points
                .into_iter()
                .map(|(x, y)| (S::from_f64_lossy(x), S::from_f64_lossy(y)))
                .collect();
            PlanarTopology::new(locations)
                .map(TopologyFile::Planar)
                .map_err(|e| parse_error(origin, line, e.to_string()))
        }
        (None, _) => {
            let line = pairs[0].line;
            let planes =
                planes.ok_or_else(|| parse_error(origin, line, "missing key `planes`"))?;
            let sats = sats
                .ok_or_else(|| parse_error(origin, line, "missing key `sats_per_plane`"))?;
            build_constellation(
                planes,
                sats,
                seam,
                S::from_f64_lossy(intra_cost),
                S::from_f64_lossy(inter_cost),
            )
            .map(TopologyFile::Constellation)
            .map_err(|e| parse_error(origin, line, e.to_string()))
        }
    }
}

pub fn read_topology_file<S: Scalar>(path: &Path) -> Result<TopologyFile<S>> {
    parse_topology_file(&read_to_string(path)?, path)
}
