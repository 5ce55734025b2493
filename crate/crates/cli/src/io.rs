//! Label, membership-matrix, and DOT file formats.

use std::io::Write;
use std::path::Path;

use bigclust::metrics::LabeledPartition;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Reads a label file: one integer per line, with an optional single header
/// line (anything that does not parse as an integer).
pub fn read_labels(path: &Path) -> Result<LabeledPartition, String> {
    let body = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut labels = Vec::new();
    for (idx, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<usize>() {
            Ok(v) => labels.push(v),
            Err(_) if idx == 0 => continue, // header
            Err(_) => return Err(format!("{}: line {} is not a label", path.display(), idx + 1)),
        }
    }
    if labels.is_empty() {
        return Err(format!("{}: no labels found", path.display()));
    }
    Ok(LabeledPartition::from_labels(labels))
}

pub fn write_labels(path: &Path, labels: &[usize]) -> std::io::Result<()> {
    let mut out = String::from("label\n");
    for l in labels {
        out.push_str(&format!("{l}\n"));
    }
    std::fs::write(path, out)
}

/// On-disk form of a membership matrix (row-major rows).
#[derive(Serialize, Deserialize)]
pub struct StoredWeights {
    pub r: usize,
    pub k: usize,
    pub b: Vec<Vec<f64>>,
}

pub fn write_weights(path: &Path, b: &DMatrix<f64>) -> std::io::Result<()> {
    let stored = StoredWeights {
        r: b.nrows(),
        k: b.ncols(),
        b: (0..b.nrows()).map(|i| b.row(i).iter().copied().collect()).collect(),
    };
    let mut body = serde_json::to_string_pretty(&stored).expect("serializable");
    body.push('\n');
    std::fs::write(path, body)
}

pub fn read_weights(path: &Path) -> Result<DMatrix<f64>, String> {
    let body = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let stored: StoredWeights =
        serde_json::from_str(&body).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored.b.len() != stored.r || stored.b.iter().any(|row| row.len() != stored.k) {
        return Err(format!("{}: matrix shape does not match r/k", path.display()));
    }
    Ok(DMatrix::from_fn(stored.r, stored.k, |i, j| stored.b[i][j]))
}

/// Writes the data matrix transposed to the ingestion convention: one row
/// per sample, one column per member.
pub fn write_data_csv(path: &Path, x: &DMatrix<f64>) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    let (r, n) = x.shape();
    let header: Vec<String> = (0..r).map(|i| format!("m{i}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for t in 0..n {
        let row: Vec<String> = (0..r).map(|i| format!("{}", x[(i, t)])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()
}

/// DOT edge list of the learned bipartite graph: member-to-center edges with
/// weight above the threshold.
pub fn write_dot(
    path: &Path,
    b: &DMatrix<f64>,
    names: &[String],
    threshold: f64,
) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "graph clusters {{")?;
    for i in 0..b.nrows() {
        for j in 0..b.ncols() {
            if b[(i, j)] > threshold {
                writeln!(
                    w,
                    "  \"{}\" -- \"c{}\" [weight={:.6}];",
                    escape(&names[i]),
                    j,
                    b[(i, j)]
                )?;
            }
        }
    }
    writeln!(w, "}}")?;
    w.flush()
}

fn escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}
