use std::fmt;

use crate::format::fmt_g;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    pub left: f64,
    pub right: f64,
    /// `|left − right|`.
    pub difference: f64,
    pub pass: bool,
}

/// Pairs of quantities that should agree, one verdict per row.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub title: String,
    pub left_heading: String,
    pub right_heading: String,
    pub tolerance: f64,
    rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn new(
        title: impl Into<String>,
        left_heading: impl Into<String>,
        right_heading: impl Into<String>,
        tolerance: f64,
    ) -> Self {
        Self {
            title: title.into(),
            left_heading: left_heading.into(),
            right_heading: right_heading.into(),
            tolerance,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, left: f64, right: f64) {
        let difference = (left - right).abs();
        self.rows.push(ComparisonRow {
            label: label.into(),
            left,
            right,
            difference,
            pass: difference <= self.tolerance,
        });
    }

    pub fn rows(&self) -> &[ComparisonRow] {
        &self.rows
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn max_difference(&self) -> f64 {
        self.rows.iter().map(|r| r.difference).fold(0.0, f64::max)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = self
            .rows
            .iter()
            .map(|r| r.label.chars().count())
            .max()
            .unwrap_or(0)
            .max(8);
        writeln!(
            f,
            "  {:<width$}  {:>16}  {:>16}  {:>12}  verdict",
            "quantity", self.left_heading, self.right_heading, "|diff|"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "  {:<width$}  {:>16}  {:>16}  {:>12}  {}",
                r.label,
                fmt_g(r.left),
                fmt_g(r.right),
                fmt_g(r.difference),
                if r.pass { "pass" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "  overall: {}",
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}
