//! Rendering experiment results: CSV files and aligned text tables.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::cluster::Partition;
use crate::experiments::CellResult;

fn is_sweep(cell: &CellResult) -> bool {
    cell.spec.block_size.is_some() || cell.spec.cont_prob.is_some()
}

fn csv_row(cell: &CellResult) -> String {
    let s = &cell.spec;
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        s.scenario,
        s.delta,
        s.series_len,
        s.metric.as_str(),
        s.method.as_str(),
        cell.rate,
        s.runs,
        s.replicates,
        s.alpha,
        cell.seed
    )
}

/// Rejection rates at default tuning, one row per grid cell.
pub fn rejection_csv(cells: &[CellResult], seed: u64) -> String {
    let mut out = format!("# seed: {seed}\nscenario,delta,T,metric,method,rate,N,B,alpha,seed\n");
    for cell in cells.iter().filter(|c| !is_sweep(c)) {
        out.push_str(&csv_row(cell));
        out.push('\n');
    }
    out
}

/// Rejection rates of tuning-sweep cells: the same columns plus the swept
/// parameter and its value, for rate-versus-tuning curves.
pub fn sweep_csv(cells: &[CellResult], seed: u64) -> String {
    let mut out = format!(
        "# seed: {seed}\nscenario,delta,T,metric,method,param,value,rate,N,B,alpha,seed\n"
    );
    for cell in cells.iter().filter(|c| is_sweep(c)) {
        let s = &cell.spec;
        let (param, value) = match (s.block_size, s.cont_prob) {
            (Some(b), _) => ("block_size", b.to_string()),
            (_, Some(p)) => ("cont_prob", p.to_string()),
            _ => unreachable!("filtered to sweep cells"),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{param},{value},{},{},{},{},{}",
            s.scenario,
            s.delta,
            s.series_len,
            s.metric.as_str(),
            s.method.as_str(),
            cell.rate,
            s.runs,
            s.replicates,
            s.alpha,
            cell.seed
        );
    }
    out
}

fn column_label(cell: &CellResult) -> String {
    let s = &cell.spec;
    let mut label = format!("{}/{}", s.metric.as_str(), s.method.as_str());
    if let Some(b) = s.block_size {
        let _ = write!(label, "(b={b})");
    }
    if let Some(p) = s.cont_prob {
        let _ = write!(label, "(p={p})");
    }
    label
}

/// Aligned per-scenario tables: one row per (offset, length), one column
/// per metric/method combination (annotated with the tuning constant for
/// sweep cells), in the order the cells were produced.
pub fn text_tables(cells: &[CellResult]) -> String {
    let mut scenarios: Vec<u8> = Vec::new();
    for cell in cells {
        if !scenarios.contains(&cell.spec.scenario) {
            scenarios.push(cell.spec.scenario);
        }
    }
    scenarios.sort_unstable();

    let mut out = String::new();
    for scenario in scenarios {
        let group: Vec<&CellResult> =
            cells.iter().filter(|c| c.spec.scenario == scenario).collect();
        let first = group[0];
        let _ = writeln!(
            out,
            "Scenario {scenario}  (N={}, B={}, alpha={})",
            first.spec.runs, first.spec.replicates, first.spec.alpha
        );

        let mut columns: Vec<String> = Vec::new();
        let mut rows: Vec<(u64, usize)> = Vec::new();
        let mut values: HashMap<(u64, usize, usize), f64> = HashMap::new();
        for cell in &group {
            let label = column_label(cell);
            let col = match columns.iter().position(|c| *c == label) {
                Some(i) => i,
                None => {
                    columns.push(label);
                    columns.len() - 1
                }
            };
            let row = (cell.spec.delta.to_bits(), cell.spec.series_len);
            if !rows.contains(&row) {
                rows.push(row);
            }
            values.insert((row.0, row.1, col), cell.rate);
        }

        let widths: Vec<usize> = columns.iter().map(|c| c.len().max(6) + 2).collect();
        let _ = write!(out, "{:>7} {:>5}", "delta", "T");
        for (label, width) in columns.iter().zip(&widths) {
            let _ = write!(out, "{label:>width$}");
        }
        out.push('\n');
        for (delta_bits, len) in rows {
            let _ = write!(out, "{:>7.3} {:>5}", f64::from_bits(delta_bits), len);
            for (col, width) in widths.iter().enumerate() {
                match values.get(&(delta_bits, len, col)) {
                    Some(rate) => {
                        let _ = write!(out, "{rate:>width$.3}");
                    }
                    None => {
                        let _ = write!(out, "{:>width$}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

/// A numeric matrix as bare CSV rows.
pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Cluster assignments, one row per series.
pub fn partition_csv(partition: &Partition) -> String {
    let mut out = String::from("series,cluster\n");
    for (i, c) in partition.assignments.iter().enumerate() {
        let _ = writeln!(out, "{i},{c}");
    }
    out
}

/// Embedding coordinates, one row per series.
pub fn coords_csv(coords: &DMatrix<f64>) -> String {
    let mut out = String::from("series");
    for k in 0..coords.ncols() {
        let _ = write!(out, ",coord{}", k + 1);
    }
    out.push('\n');
    for i in 0..coords.nrows() {
        let _ = write!(out, "{i}");
        for k in 0..coords.ncols() {
            let _ = write!(out, ",{}", coords[(i, k)]);
        }
        out.push('\n');
    }
    out
}
