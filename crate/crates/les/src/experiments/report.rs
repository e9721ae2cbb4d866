//! Pass/fail reports with the data behind every fitted slope.

use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Contributes to the exit status.
    Assert,
    /// Descriptive only.
    Info,
}

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub id: String,
    pub kind: RowKind,
    pub passed: Option<bool>,
    pub value: Option<f64>,
    pub detail: String,
    /// The (step-or-width, error) pairs a slope was fitted from, if any.
    pub data: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub title: String,
    pub params: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    pub fn new(title: impl Into<String>, params: Vec<(String, String)>) -> Self {
        Self {
            title: title.into(),
            params,
            rows: Vec::new(),
        }
    }

    pub fn assert_row(
        &mut self,
        id: impl Into<String>,
        passed: bool,
        value: Option<f64>,
        detail: impl Into<String>,
        data: Vec<(f64, f64)>,
    ) {
        self.rows.push(ReportRow {
            id: id.into(),
            kind: RowKind::Assert,
            passed: Some(passed),
            value,
            detail: detail.into(),
            data,
        });
    }

    pub fn info_row(
        &mut self,
        id: impl Into<String>,
        value: Option<f64>,
        detail: impl Into<String>,
        data: Vec<(f64, f64)>,
    ) {
        self.rows.push(ReportRow {
            id: id.into(),
            kind: RowKind::Info,
            passed: None,
            value,
            detail: detail.into(),
            data,
        });
    }

    pub fn row(&self, id: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn all_passed(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.kind == RowKind::Assert)
            .all(|r| r.passed == Some(true))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.title));
        for (k, v) in &self.params {
            out.push_str(&format!("#   {k} = {v}\n"));
        }
        let width = self.rows.iter().map(|r| r.id.len()).max().unwrap_or(0).max(8);
        for r in &self.rows {
            let status = match (r.kind, r.passed) {
                (RowKind::Assert, Some(true)) => "PASS",
                (RowKind::Assert, _) => "FAIL",
                (RowKind::Info, _) => "info",
            };
            let value = r
                .value
                .map(|v| format!("{v:.6e}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{status}  {id:width$}  {value:>13}  {detail}\n",
                id = r.id,
                detail = r.detail,
            ));
            if !r.data.is_empty() {
                let pts = r
                    .data
                    .iter()
                    .map(|(h, e)| format!("({h:.6e}, {e:.6e})"))
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push_str(&format!("      data: {pts}\n"));
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.all_passed() { "ALL PASSED" } else { "FAILURES" }
        ));
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// A CSV file with a provenance header block (`# key = value` lines).
pub fn write_csv(
    path: &Path,
    params: &[(String, String)],
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> Result<()> {
    use std::io::Write;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (k, v) in params {
        writeln!(f, "# {k} = {v}")?;
    }
    writeln!(f, "{}", columns.join(","))?;
    for row in rows {
        let line = row
            .iter()
            .map(|v| format!("{v:.12e}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(f, "{line}")?;
    }
    Ok(())
}
