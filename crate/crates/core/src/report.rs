//! Distribution tables: counts per pattern or constraint type and system.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::Cip;
use crate::constraint::{ConstraintRecord, ConstraintType};
use crate::trace::TraceLink;

/// Column used for links that carry no system label.
pub const UNLABELED: &str = "unlabeled";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Pattern,
    ConstraintType,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Axis> {
        match s {
            "pattern" => Some(Axis::Pattern),
            "constraint-type" | "type" => Some(Axis::ConstraintType),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Pattern => "pattern",
            Axis::ConstraintType => "constraint-type",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributionTable {
    pub schema_version: &'static str,
    pub axis: Axis,
    pub rows: Vec<String>,
    /// System names, sorted.
    pub columns: Vec<String>,
    /// `cells[row][column]`.
    pub cells: Vec<Vec<usize>>,
    pub row_totals: Vec<usize>,
    pub column_totals: Vec<usize>,
    pub total: usize,
}

/// Count `(row, system)` observations. Rows appear in `row_order` first,
/// then any others in sorted order. Rows listed in `fixed_rows` are kept
/// even when their count is zero.
fn tabulate(axis: Axis, observations: &[(String, String)], row_order: &[&str], fixed_rows: bool) -> DistributionTable {
    let columns: Vec<String> = observations
        .iter()
        .map(|(_, s)| s.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let present: BTreeSet<&str> = observations.iter().map(|(r, _)| r.as_str()).collect();
    let mut rows: Vec<String> = row_order
        .iter()
        .filter(|r| fixed_rows || present.contains(*r))
        .map(|r| r.to_string())
        .collect();
    for r in &present {
        if !row_order.contains(r) {
            rows.push(r.to_string());
        }
    }
    let mut cells = vec![vec![0usize; columns.len()]; rows.len()];
    for (r, s) in observations {
        let i = rows.iter().position(|x| x == r).expect("row collected");
        let j = columns.binary_search(s).expect("column collected");
        cells[i][j] += 1;
    }
    let row_totals: Vec<usize> = cells.iter().map(|r| r.iter().sum()).collect();
    let column_totals: Vec<usize> = (0..columns.len()).map(|j| cells.iter().map(|r| r[j]).sum()).collect();
    DistributionTable {
        schema_version: "1",
        axis,
        total: row_totals.iter().sum(),
        rows,
        columns,
        cells,
        row_totals,
        column_totals,
    }
}

/// Enforcing statements per pattern and system. Rows follow catalog order.
pub fn pattern_distribution(links: &[TraceLink]) -> DistributionTable {
    let obs: Vec<(String, String)> = links
        .iter()
        .map(|l| {
            let system = l.system.clone().unwrap_or_else(|| UNLABELED.to_string());
            (l.enforcing.pattern.clone(), system)
        })
        .collect();
    let order: Vec<&str> = Cip::ALL.iter().map(|c| c.name()).collect();
    tabulate(Axis::Pattern, &obs, &order, false)
}

/// Constraints per type and system. All four types are always listed.
pub fn type_distribution(records: &[ConstraintRecord]) -> DistributionTable {
    let obs: Vec<(String, String)> = records
        .iter()
        .map(|r| {
            let system = if r.system.is_empty() { UNLABELED.to_string() } else { r.system.clone() };
            (r.constraint_type().as_str().to_string(), system)
        })
        .collect();
    let order: Vec<&str> = ConstraintType::ALL.iter().map(|t| t.as_str()).collect();
    tabulate(Axis::ConstraintType, &obs, &order, true)
}

impl DistributionTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Header row, one row per axis value, then a `total` row. The last
    /// column holds row totals.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![self.axis.as_str().to_string()];
        header.extend(self.columns.iter().cloned());
        header.push("total".into());
        w.write_record(&header).expect("in-memory write");
        for (i, row) in self.rows.iter().enumerate() {
            let mut rec = vec![row.clone()];
            rec.extend(self.cells[i].iter().map(usize::to_string));
            rec.push(self.row_totals[i].to_string());
            w.write_record(&rec).expect("in-memory write");
        }
        let mut rec = vec!["total".to_string()];
        rec.extend(self.column_totals.iter().map(usize::to_string));
        rec.push(self.total.to_string());
        w.write_record(&rec).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Aligned plain-text table. `color` bolds the header and totals.
    pub fn to_table(&self, color: bool) -> String {
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec![self.axis.as_str().to_string()];
        header.extend(self.columns.iter().cloned());
        header.push("total".into());
        grid.push(header);
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = vec![row.clone()];
            r.extend(self.cells[i].iter().map(usize::to_string));
            r.push(self.row_totals[i].to_string());
            grid.push(r);
        }
        let mut last = vec!["total".to_string()];
        last.extend(self.column_totals.iter().map(usize::to_string));
        last.push(self.total.to_string());
        grid.push(last);
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
            .collect();
        let n = grid.len();
        let mut out = String::new();
        for (i, r) in grid.iter().enumerate() {
            let mut line = String::new();
            for (j, cell) in r.iter().enumerate() {
                if j > 0 {
                    line.push_str("  ");
                }
                let pad = widths[j] - cell.chars().count();
                if j == 0 {
                    line.push_str(cell);
                    line.push_str(&" ".repeat(pad));
                } else {
                    line.push_str(&" ".repeat(pad));
                    line.push_str(cell);
                }
            }
            let line = line.trim_end();
            if color && (i == 0 || i == n - 1) {
                let _ = writeln!(out, "\x1b[1m{line}\x1b[0m");
            } else {
                let _ = writeln!(out, "{line}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn unknown_rows_follow_ordered_ones() {
        let t = tabulate(Axis::Pattern, &obs(&[("z", "S"), ("b", "S"), ("a", "T")]), &["b", "a"], false);
        assert_eq!(t.rows, ["b", "a", "z"]);
        assert_eq!(t.columns, ["S", "T"]);
        assert_eq!(t.cells, vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn table_has_no_escapes_without_color() {
        let t = tabulate(Axis::Pattern, &obs(&[("a", "S")]), &[], false);
        assert!(!t.to_table(false).contains('\x1b'));
        assert!(t.to_table(true).contains('\x1b'));
    }
}
