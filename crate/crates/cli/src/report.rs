//! Report data structures and their three renderings.
//!
//! Every command produces one serializable report struct. JSON is the
//! lossless form: the structs in this module and the core types they embed
//! all re-parse from their own JSON output. CSV is a flat numeric table
//! (comma-delimited, no quoting; no cell ever contains a comma). Text is for
//! humans and is the only place decimal approximations appear; they are
//! computed by exact rounding, never through floats.
//!
//! Rendering is deliberately allocation-happy and single-threaded: reports
//! are small and byte-stability matters more than speed here. Field order is
//! fixed by struct declaration order, rationals render as `num/den` in
//! lowest terms, and nothing in a report depends on worker counts, clocks,
//! or the environment.

use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use razak_forge_core::arith::{rational_string, six_decimals, ExactRational};
use razak_forge_core::rank::DemoReport;
use razak_forge_core::solve::{CorrectedInstance, SearchBounds, UnitalInstance};
use razak_forge_core::tower::{PerforationReport, Schedule, SearchOutcome, Stage};

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Human-readable tables and verdict lines.
    Text,
    /// Lossless machine form.
    Json,
    /// Flat numeric rows with a header line.
    Csv,
}

/// Writes a rendered report to stdout or the `--out` file.
pub fn emit(report: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(report.as_bytes()).and_then(|()| stdout.flush()) {
                Ok(()) => Ok(()),
                // A closed read end (`razak-forge ... | head`) means the
                // consumer is done, not that the report failed.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(format!("cannot write to stdout: {e}")),
            }
        }
        Some(path) => std::fs::write(path, report)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports always serialize");
    text.push('\n');
    text
}

fn csv_lines(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Fixed-width table: every column as wide as its widest cell, cells
/// right-aligned, two spaces between columns.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let push_row = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(&" ".repeat(widths[i] - cell.len()));
            out.push_str(cell);
        }
        out.push('\n');
    };
    push_row(&mut headers.iter().copied(), &mut out);
    for row in rows {
        push_row(&mut row.iter().map(String::as_str), &mut out);
    }
    out
}

/// `num/den (~0.xxxxxx)`: the exact value with its six-decimal reading.
fn approx(r: &ExactRational) -> String {
    format!("{} (~{})", rational_string(r), six_decimals(r))
}

/// One named zero-or-not symbolic identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityStatus {
    pub name: String,
    pub zero: bool,
}

fn zero_count(identities: &[IdentityStatus]) -> usize {
    identities.iter().filter(|i| i.zero).count()
}

/// Outcome of `verify-family`: the symbolic residuals and the finite sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    /// Sweep radius: parameters ran over `[1, sweep]` in each coordinate.
    pub sweep: u64,
    pub instances_total: u64,
    pub instances_pass: u64,
    pub identities: Vec<IdentityStatus>,
    /// True when every instance passed and every residual is zero.
    pub certified: bool,
}

impl FamilyReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => csv_lines(
                &[
                    "sweep",
                    "instances_total",
                    "instances_pass",
                    "identities_zero",
                    "identities_total",
                ],
                &[vec![
                    self.sweep.to_string(),
                    self.instances_total.to_string(),
                    self.instances_pass.to_string(),
                    zero_count(&self.identities).to_string(),
                    self.identities.len().to_string(),
                ]],
            ),
            Format::Text => format!(
                "{}/{} instances pass; {}/{} symbolic identities zero\n",
                self.instances_pass,
                self.instances_total,
                zero_count(&self.identities),
                self.identities.len(),
            ),
        }
    }
}

/// The solutions found by `enumerate`, tagged by system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "system", content = "solutions", rename_all = "lowercase")]
pub enum SolutionSet {
    Unital(Vec<UnitalInstance>),
    Corrected(Vec<CorrectedInstance>),
}

/// Outcome of `enumerate`: every solution in the box, in sorted order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub bounds: SearchBounds,
    pub count: usize,
    #[serde(flatten)]
    pub solutions: SolutionSet,
}

const UNITAL_COLUMNS: [&str; 9] = ["k", "l", "m", "s", "a0", "a1", "b0", "b1", "p"];
const CORRECTED_COLUMNS: [&str; 11] = ["k", "l", "m", "s", "a0", "a1", "b0", "b1", "p", "r", "q"];

fn unital_row(i: &UnitalInstance) -> Vec<String> {
    [i.k, i.ell, i.m, i.s, i.a0, i.a1, i.b0, i.b1, i.p]
        .iter()
        .map(u64::to_string)
        .collect()
}

fn corrected_row(i: &CorrectedInstance) -> Vec<String> {
    [i.k, i.ell, i.m, i.s, i.a0, i.a1, i.b0, i.b1, i.p, i.r, i.q]
        .iter()
        .map(u64::to_string)
        .collect()
}

impl EnumerateReport {
    fn columns_and_rows(&self) -> (&'static [&'static str], Vec<Vec<String>>) {
        match &self.solutions {
            SolutionSet::Unital(list) => (&UNITAL_COLUMNS, list.iter().map(unital_row).collect()),
            SolutionSet::Corrected(list) => {
                (&CORRECTED_COLUMNS, list.iter().map(corrected_row).collect())
            }
        }
    }

    pub fn render(&self, format: Format) -> String {
        let (columns, rows) = self.columns_and_rows();
        match format {
            Format::Json => json(self),
            Format::Csv => csv_lines(columns, &rows),
            Format::Text => {
                let mut out = String::new();
                if !rows.is_empty() {
                    out.push_str(&table(columns, &rows));
                }
                out.push_str(&format!("{} solutions\n", self.count));
                out
            }
        }
    }
}

/// Outcome of `certify-obstruction`: the symbolic collapse certificate plus
/// an enumeration check that every unital solution in the box obeys it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub bounds: SearchBounds,
    pub identities: Vec<IdentityStatus>,
    pub symbolic_certified: bool,
    pub solutions_checked: usize,
    pub collapse_holds: bool,
    /// Solutions violating `b0 = 0` or `a0 = m`; empty when certified.
    pub violations: Vec<UnitalInstance>,
    pub certified: bool,
}

impl ObstructionReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => csv_lines(
                &[
                    "k_max",
                    "l_max",
                    "m_max",
                    "s_max",
                    "solutions_checked",
                    "identities_zero",
                    "identities_total",
                    "collapse_holds",
                ],
                &[vec![
                    self.bounds.k.to_string(),
                    self.bounds.ell.to_string(),
                    self.bounds.m.to_string(),
                    self.bounds.s.to_string(),
                    self.solutions_checked.to_string(),
                    zero_count(&self.identities).to_string(),
                    self.identities.len().to_string(),
                    u8::from(self.collapse_holds).to_string(),
                ]],
            ),
            Format::Text => {
                let mut out = format!(
                    "{}/{} collapse identities zero\n",
                    zero_count(&self.identities),
                    self.identities.len(),
                );
                if self.collapse_holds {
                    out.push_str(&format!(
                        "all {} unital solutions have b0=0 and a0=m\n",
                        self.solutions_checked
                    ));
                } else {
                    out.push_str(&format!(
                        "{} of {} unital solutions violate the collapse\n",
                        self.violations.len(),
                        self.solutions_checked
                    ));
                }
                out
            }
        }
    }
}

fn stage_cells(stage: &Stage, with_decimals: bool) -> Vec<String> {
    let mut cells = vec![
        stage.index.to_string(),
        stage.map.k.to_string(),
        stage.map.ell.to_string(),
        stage.m_cum.to_string(),
        stage.map.p.to_string(),
        stage.d.to_string(),
        rational_string(&stage.f),
    ];
    if with_decimals {
        cells.push(six_decimals(&stage.f));
    }
    cells.push(rational_string(&stage.deficit()));
    cells
}

const STAGE_CSV_COLUMNS: [&str; 8] = ["stage", "k", "l", "m", "p", "d", "f", "deficit"];
const STAGE_TEXT_COLUMNS: [&str; 9] = ["stage", "k", "l", "m", "p", "d", "f", "f~", "deficit"];

/// Outcome of `tower build`: the stage table for a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerBuildReport {
    pub schedule: Schedule,
    /// Group size when the tower was telescoped after building.
    pub telescope: Option<usize>,
    pub stages: Vec<Stage>,
}

impl TowerBuildReport {
    pub fn render(&self, format: Format) -> String {
        let rows = |with_decimals| {
            self.stages
                .iter()
                .map(|s| stage_cells(s, with_decimals))
                .collect::<Vec<_>>()
        };
        match format {
            Format::Json => json(self),
            Format::Csv => csv_lines(&STAGE_CSV_COLUMNS, &rows(false)),
            Format::Text => table(&STAGE_TEXT_COLUMNS, &rows(true)),
        }
    }
}

/// Outcome of `tower report`: the stage table plus the product criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReportDoc {
    pub schedule: Schedule,
    pub telescope: Option<usize>,
    pub stages: Vec<Stage>,
    pub report: PerforationReport,
}

fn optional_rational(value: &Option<ExactRational>, detailed: bool) -> String {
    match value {
        Some(v) if detailed => approx(v),
        Some(v) => rational_string(v),
        None => "none".to_string(),
    }
}

fn verdict_block(report: &PerforationReport) -> String {
    let mut lines = vec![
        format!("verdict: {}", report.verdict),
        format!("partial product: {}", approx(&report.partial_product)),
        format!(
            "offset partial product: {}",
            optional_rational(&report.offset_partial_product, false)
        ),
        format!("deficit sum: {}", rational_string(&report.deficit_sum)),
        format!(
            "max deficit ratio: {} (threshold {})",
            match &report.max_ratio {
                Some(v) => rational_string(v),
                None => "undefined".to_string(),
            },
            rational_string(&report.ratio_bound),
        ),
        format!(
            "tail bound: {}",
            optional_rational(&report.tail_bound, false)
        ),
        format!(
            "certified lower bound: {}",
            optional_rational(&report.certified_lower_bound, true)
        ),
    ];
    if !report.notes.is_empty() {
        lines.push("notes:".to_string());
        for note in &report.notes {
            lines.push(format!("  - {note}"));
        }
    }
    lines.push(String::new());
    lines.join("\n")
}

impl TowerReportDoc {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                // Stage rows plus the consecutive deficit ratio; the verdict
                // itself is not row data and lives in json/text only.
                let mut columns: Vec<&str> = STAGE_CSV_COLUMNS.to_vec();
                columns.push("ratio");
                let mut rows = Vec::with_capacity(self.stages.len());
                for (i, stage) in self.stages.iter().enumerate() {
                    let mut cells = stage_cells(stage, false);
                    cells.push(if i == 0 {
                        String::new()
                    } else {
                        let previous = self.stages[i - 1].deficit();
                        let current = stage.deficit();
                        if previous == ExactRational::from_integer(0.into()) {
                            "undefined".to_string()
                        } else {
                            rational_string(&(current / previous))
                        }
                    });
                    rows.push(cells);
                }
                csv_lines(&columns, &rows)
            }
            Format::Text => {
                let rows: Vec<Vec<String>> =
                    self.stages.iter().map(|s| stage_cells(s, true)).collect();
                let mut out = table(&STAGE_TEXT_COLUMNS, &rows);
                out.push('\n');
                out.push_str(&verdict_block(&self.report));
                out
            }
        }
    }
}

/// Outcome of `tower search`: every candidate evaluated, best one marked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TowerSearchReport {
    pub k1: u64,
    pub stages: usize,
    pub outcome: SearchOutcome,
}

impl TowerSearchReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => json(self),
            Format::Csv => {
                let columns = [
                    "candidate",
                    "label",
                    "verdict",
                    "partial_product",
                    "certified_lower_bound",
                    "best",
                ];
                let rows: Vec<Vec<String>> = self
                    .outcome
                    .evaluated
                    .iter()
                    .enumerate()
                    .map(|(i, eval)| {
                        vec![
                            i.to_string(),
                            // Labels like "u=k,s=1" would split a CSV row, so
                            // the comma becomes a semicolon here.
                            eval.label.replace(',', ";"),
                            serde_variant_name(eval.report.verdict),
                            rational_string(&eval.report.partial_product),
                            optional_rational(&eval.report.certified_lower_bound, false),
                            u8::from(self.outcome.best == Some(i)).to_string(),
                        ]
                    })
                    .collect();
                csv_lines(&columns, &rows)
            }
            Format::Text => {
                let mut out = String::new();
                for eval in &self.outcome.evaluated {
                    match &eval.report.certified_lower_bound {
                        Some(bound) => out.push_str(&format!(
                            "candidate {}: {}, lower bound {}\n",
                            eval.label,
                            eval.report.verdict,
                            approx(bound)
                        )),
                        None => out.push_str(&format!(
                            "candidate {}: {}\n",
                            eval.label, eval.report.verdict
                        )),
                    }
                }
                match self.outcome.best {
                    Some(i) => {
                        out.push_str(&format!("best: {}\n", self.outcome.evaluated[i].label))
                    }
                    None => out.push_str("best: none\n"),
                }
                out
            }
        }
    }
}

fn serde_variant_name(verdict: razak_forge_core::tower::PerforationVerdict) -> String {
    serde_json::to_value(verdict)
        .expect("verdict serializes")
        .as_str()
        .expect("verdict is a string")
        .to_string()
}

/// Renders a rank demo report (the struct itself lives in the core crate).
pub fn render_demo(report: &DemoReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let comparison_flag = |holds: bool| u8::from(holds).to_string();
            csv_lines(
                &[
                    "stage",
                    "k",
                    "n",
                    "weighted_holds",
                    "unweighted_holds",
                    "pushforward_preserved",
                ],
                &[vec![
                    report.stage_index.to_string(),
                    report.k.to_string(),
                    report.n.to_string(),
                    comparison_flag(report.weighted.holds),
                    comparison_flag(report.unweighted.holds),
                    match report.pushforward_preserved {
                        Some(preserved) => comparison_flag(preserved),
                        None => String::new(),
                    },
                ]],
            )
        }
        Format::Text => {
            let describe = |comparison: &razak_forge_core::rank::Comparison| match &comparison
                .witness
            {
                None => "holds".to_string(),
                Some(w) => format!("fails at {:?}: {} > {}", w.point, w.left, w.right),
            };
            let mut out = format!(
                "stage {}, grid dimension {}, resolution {}\n",
                report.stage_index,
                report.grid.dimension(),
                report.grid.resolution(),
            );
            out.push_str(&format!(
                "weighted comparison, (k+1)*rank(a) <= k*rank(b) at k={}: {}\n",
                report.k,
                describe(&report.weighted)
            ));
            out.push_str(&format!(
                "direct comparison, rank(a) <= n*rank(b) at n={}: {}\n",
                report.n,
                describe(&report.unweighted)
            ));
            out.push_str(&format!(
                "pushforward check: {}\n",
                match report.pushforward_preserved {
                    Some(true) => "weighted comparison preserved",
                    Some(false) => "weighted comparison changed",
                    None => "not run",
                }
            ));
            if !report.notes.is_empty() {
                out.push_str("notes:\n");
                for note in &report.notes {
                    out.push_str(&format!("  - {note}\n"));
                }
            }
            out.push_str(&format!("disclaimer: {}\n", report.disclaimer));
            out
        }
    }
}
