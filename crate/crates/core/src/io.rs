//! Text formats: graph edge lists, dense CSV matrices, marginal vectors and
//! couplings.
//!
//! Edge list: one edge per line as two whitespace-separated 0-based node
//! indices, `#` starts a comment line, and an optional `n <count>` line fixes
//! the node count (otherwise `1 + max index`).
//!
//! Dense matrices are plain CSV of reals without a header. Coupling files
//! prefix the rows with an `n,m` line.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::types::{Coupling, DistanceMatrix, Graph, ProbabilityVector};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(line_no, format!("expected two fields, found {}", fields.len())));
        }
        if fields[0] == "n" {
            if declared.is_some() {
                return Err(parse_err(line_no, "node count declared twice"));
            }
            let n = fields[1]
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid node count '{}'", fields[1])))?;
            declared = Some((n, line_no));
            continue;
        }
        let mut ends = [0usize; 2];
        for (slot, f) in ends.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid node index '{f}'")))?;
        }
        if ends[0] == ends[1] {
            return Err(parse_err(line_no, format!("self-loop at node {}", ends[0])));
        }
        edges.push((ends[0], ends[1], line_no));
    }
    let max_index = edges.iter().map(|&(u, v, _)| u.max(v)).max();
    let n = match (declared, max_index) {
        (Some((n, _)), _) => n,
        (None, Some(m)) => m + 1,
        (None, None) => return Err(parse_err(0, "edge list declares no nodes")),
    };
    if let Some(&(u, v, line_no)) = edges.iter().find(|&&(u, v, _)| u.max(v) >= n) {
        return Err(parse_err(line_no, format!("edge ({u}, {v}) exceeds declared node count {n}")));
    }
    Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

/// Always writes the `n` header so isolated trailing nodes survive a round
/// trip.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.num_nodes());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses headerless CSV rows of reals, returning each row with its line
/// number.
fn csv_rows(text: &str) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let values = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(line, format!("invalid number '{f}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line, values));
    }
    Ok(rows)
}

fn rows_to_matrix(rows: &[(usize, Vec<f64>)], expected_cols: Option<usize>) -> Result<Array2<f64>> {
    let cols = match (expected_cols, rows.first()) {
        (Some(c), _) => c,
        (None, Some((_, r))) => r.len(),
        (None, None) => return Err(parse_err(0, "matrix has no rows")),
    };
    for (line, r) in rows {
        if r.len() != cols {
            return Err(parse_err(*line, format!("expected {cols} columns, found {}", r.len())));
        }
    }
    let flat: Vec<f64> = rows.iter().flat_map(|(_, r)| r.iter().copied()).collect();
    Array2::from_shape_vec((rows.len(), cols), flat).map_err(|e| parse_err(0, e.to_string()))
}

pub fn parse_dense_matrix(text: &str) -> Result<Array2<f64>> {
    rows_to_matrix(&csv_rows(text)?, None)
}

/// Reads a square CSV distance matrix.
pub fn parse_distance_matrix(text: &str) -> Result<DistanceMatrix> {
    let a = parse_dense_matrix(text)?;
    if a.nrows() != a.ncols() {
        return Err(Error::mismatch("distance matrix rows vs columns", a.nrows(), a.ncols()));
    }
    DistanceMatrix::new(a)
}

pub fn read_distance_matrix(path: impl AsRef<Path>) -> Result<DistanceMatrix> {
    parse_distance_matrix(&fs::read_to_string(path)?)
}

/// Values separated by commas and/or newlines.
pub fn parse_vector(text: &str) -> Result<ProbabilityVector> {
    let values: Vec<f64> = csv_rows(text)?.into_iter().flat_map(|(_, r)| r).collect();
    ProbabilityVector::new(values)
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<ProbabilityVector> {
    parse_vector(&fs::read_to_string(path)?)
}

/// `n,m` on the first line, then the rows. Values use the shortest
/// representation that round-trips exactly.
pub fn format_coupling(pi: &Coupling) -> String {
    let (n, m) = pi.shape();
    let mut out = format!("{n},{m}\n");
    for row in pi.as_array().rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_coupling(text: &str) -> Result<Coupling> {
    let rows = csv_rows(text)?;
    let ((line, header), body) = rows.split_first().ok_or_else(|| parse_err(0, "coupling file is empty"))?;
    let dims: Vec<usize> = header
        .iter()
        .map(|v| {
            if v.fract() == 0.0 && *v >= 1.0 {
                Ok(*v as usize)
            } else {
                Err(parse_err(*line, format!("invalid dimension {v}")))
            }
        })
        .collect::<Result<_>>()?;
    if dims.len() != 2 {
        return Err(parse_err(*line, "header must be 'n,m'"));
    }
    if body.len() != dims[0] {
        let last = body.last().map_or(*line, |(l, _)| *l);
        return Err(parse_err(last, format!("header declares {} rows, found {}", dims[0], body.len())));
    }
    Coupling::new(rows_to_matrix(body, Some(dims[1]))?)
}

pub fn read_coupling(path: impl AsRef<Path>) -> Result<Coupling> {
    parse_coupling(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn edge_list_with_comments_and_header() {
        let g = parse_edge_list("# toy\nn 4\n0 1\n2 1\n\n1 0\n").unwrap();
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        let h = parse_edge_list("0 3\n").unwrap();
        assert_eq!(h.num_nodes(), 4);
        assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let cases = [
            ("0 1\n1 x\n", 2),
            ("0 1\n\n1 2 3\n", 3),
            ("n 2\n0 5\n", 2),
            ("# c\n4 4\n", 2),
        ];
        for (text, line) in cases {
            match parse_edge_list(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn dense_matrix_parsing() {
        let d = parse_distance_matrix("0, 1\n1, 0\n").unwrap();
        assert_eq!(d.as_array(), &array![[0.0, 1.0], [1.0, 0.0]]);
        assert!(matches!(
            parse_distance_matrix("0,1,2\n1,0,1\n"),
            Err(Error::DimensionMismatch { .. })
        ));
        match parse_dense_matrix("0,1\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_dense_matrix("0,1\n1,abc\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coupling_round_trip_is_exact() {
        let pi = Coupling::new(array![[0.1, 0.2 / 3.0], [1.0 / 7.0, 1.0 - 0.1 - 0.2 / 3.0 - 1.0 / 7.0]]).unwrap();
        let text = format_coupling(&pi);
        assert!(text.starts_with("2,2\n"));
        assert_eq!(parse_coupling(&text).unwrap(), pi);
    }

    #[test]
    fn coupling_header_mismatch() {
        assert!(matches!(parse_coupling("3,2\n0.5,0\n0,0.5\n"), Err(Error::Parse { .. })));
        assert!(parse_coupling("2,3\n0.5,0\n0,0.5\n").is_err());
    }

    #[test]
    fn vectors_accept_commas_or_newlines() {
        assert_eq!(parse_vector("0.25,0.75\n").unwrap().as_slice(), &[0.25, 0.75]);
        assert_eq!(parse_vector("0.5\n0.5\n").unwrap().as_slice(), &[0.5, 0.5]);
    }
}
