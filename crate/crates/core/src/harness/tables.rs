use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::csv_escape;
use crate::learn::{EvaluationReport, MeanReport};

/// One table cell. Absent metrics print as `-` in CSV and `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Count(usize),
    Num(Option<f64>),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => csv_escape(s),
            Cell::Count(n) => n.to_string(),
            Cell::Num(Some(v)) => format!("{v:.4}"),
            Cell::Num(None) => "-".into(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }
}

/// Accuracy and per-class precision, recall and F1 in a fixed class order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub name: String,
    pub accuracy: f64,
    pub precision: Vec<Option<f64>>,
    pub recall: Vec<Option<f64>>,
    pub f1: Vec<Option<f64>>,
}

impl ScoreRow {
    pub fn from_mean(name: &str, m: &MeanReport) -> Self {
        Self {
            name: name.to_string(),
            accuracy: m.accuracy,
            precision: m.precision.clone(),
            recall: m.recall.clone(),
            f1: m.f1.clone(),
        }
    }

    pub fn from_report(name: &str, r: &EvaluationReport) -> Self {
        Self {
            name: name.to_string(),
            accuracy: r.accuracy,
            precision: r.per_class.iter().map(|c| c.precision).collect(),
            recall: r.per_class.iter().map(|c| c.recall).collect(),
            f1: r.per_class.iter().map(|c| c.f1).collect(),
        }
    }

    /// Metrics of the constant predictor for `classes[label]`, straight from
    /// the class supports.
    pub fn analytic_baseline(name: &str, label: usize, supports: &[usize]) -> Self {
        let total: usize = supports.iter().sum();
        let n = supports[label];
        let ratio = |a: usize, b: usize| (b > 0).then(|| a as f64 / b as f64);
        let mut row = Self {
            name: name.to_string(),
            accuracy: n as f64 / total as f64,
            precision: vec![],
            recall: vec![],
            f1: vec![],
        };
        for (c, &support) in supports.iter().enumerate() {
            let (p, r) = if c == label {
                (ratio(n, total), ratio(n, support))
            } else {
                (None, ratio(0, support))
            };
            let f = match (p, r) {
                (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
                (Some(_), Some(_)) => Some(0.0),
                _ => None,
            };
            row.precision.push(p);
            row.recall.push(r);
            row.f1.push(f);
        }
        row
    }

    pub fn class_f1(&self, classes: &[String], label: &str) -> Option<f64> {
        classes.iter().position(|c| c == label).and_then(|i| self.f1[i])
    }

    pub fn class_recall(&self, classes: &[String], label: &str) -> Option<f64> {
        classes.iter().position(|c| c == label).and_then(|i| self.recall[i])
    }
}

/// `features,accuracy,precision_<c>..,recall_<c>..,f1_<c>..`
pub fn score_table(name: &str, classes: &[String], rows: &[ScoreRow]) -> Table {
    let mut columns = vec!["features".to_string(), "accuracy".to_string()];
    for metric in ["precision", "recall", "f1"] {
        columns.extend(classes.iter().map(|c| format!("{metric}_{c}")));
    }
    let mut t = Table::new(name, columns);
    for r in rows {
        let mut row: Vec<Cell> = vec![r.name.as_str().into(), r.accuracy.into()];
        for v in [&r.precision, &r.recall, &r.f1] {
            row.extend(v.iter().map(|x| Cell::from(*x)));
        }
        t.push(row);
    }
    t
}
