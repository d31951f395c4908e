//! Supersingular Hurwitz curves in a range of genera and primes, in the
//! layout of the published classification table.

use serde::{Deserialize, Serialize};

use super::{classify, ClassifyOptions, Counter, ReportError};
use crate::arith::primes_below;
use crate::curves::{hurwitz_genus, CurveId};

/// The published table: columns `n,l,p,g,L,nwn`, with `L` the coefficients
/// `C_0..C_{2g}`.
pub const GOLDEN_CSV: &str = include_str!("../../data/table1.csv");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u64,
    pub l: u64,
    pub p: u64,
    pub g: u64,
    /// Comma-joined `C_0..C_{2g}`.
    #[serde(rename = "L")]
    pub coefficients: String,
    pub nwn: String,
}

impl TableRow {
    pub fn key(&self) -> (u64, u64, u64) {
        (self.n, self.l, self.p)
    }

    fn order(&self) -> (u64, u64, u64, u64) {
        (self.g, self.n, self.l, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableOptions {
    /// Primes `p < p_max`.
    pub p_max: u64,
    /// Genera `1 <= g < g_max`.
    pub g_max: u64,
    /// Add the genus-6 rows that appear in the published table.
    pub include_genus_6: bool,
    pub classify: ClassifyOptions,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            p_max: 37,
            g_max: 5,
            include_genus_6: false,
            classify: ClassifyOptions::default(),
        }
    }
}

/// Rows of the committed golden table.
pub fn golden_rows() -> Vec<TableRow> {
    parse_csv(GOLDEN_CSV).expect("committed golden table parses")
}

pub fn parse_csv(text: &str) -> Result<Vec<TableRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

/// The row for `H_{n,l}` over `F_p`, or `None` when it is not supersingular.
pub fn table_row(
    n: u64,
    l: u64,
    p: u64,
    options: &ClassifyOptions,
    counter: &mut Counter<'_>,
) -> Result<Option<TableRow>, ReportError> {
    let report = classify(CurveId::Hurwitz { n, l }, p, options, counter)?;
    if !report.supersingular {
        return Ok(None);
    }
    Ok(Some(TableRow {
        n,
        l,
        p,
        g: report.genus,
        coefficients: report.l_coefficients.join(","),
        nwn: report.nwn_text.unwrap_or_default(),
    }))
}

/// A `(n, l, p)` whose classification failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableFailure {
    pub n: u64,
    pub l: u64,
    pub p: u64,
    pub error: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableOutput {
    pub rows: Vec<TableRow>,
    pub failures: Vec<TableFailure>,
}

/// Candidates `(n, l, p)`: `1 <= l <= n`, `1 <= g < g_max`, `p < p_max`,
/// `p ∤ m`, plus the published genus-6 rows when requested.
pub fn candidates(options: &TableOptions) -> Vec<(u64, u64, u64)> {
    let primes = primes_below(options.p_max);
    let mut out = Vec::new();
    let mut n = 1u64;
    // genus >= (3n^2 - 12n + 8) / 8
    while n <= 4 || 3 * n * n - 12 * n + 8 < 8 * options.g_max {
        for l in 1..=n {
            let g = hurwitz_genus(n, l);
            if g == 0 || g >= options.g_max {
                continue;
            }
            let m = n * n + l * l - n * l;
            out.extend(primes.iter().filter(|&&p| !m.is_multiple_of(p)).map(|&p| (n, l, p)));
        }
        n += 1;
    }
    if options.include_genus_6 {
        for row in golden_rows() {
            let key = row.key();
            if row.g == 6 && row.p < options.p_max && !out.contains(&key) {
                out.push(key);
            }
        }
    }
    out
}

/// Every supersingular row among the candidates, sorted by genus, then
/// `n`, `l`, `p`. Failures are collected rather than skipped.
pub fn table(options: &TableOptions, counter: &mut Counter<'_>) -> TableOutput {
    let mut output = TableOutput::default();
    for (n, l, p) in candidates(options) {
        match table_row(n, l, p, &options.classify, counter) {
            Ok(Some(row)) => output.rows.push(row),
            Ok(None) => {}
            Err(err) => output.failures.push(TableFailure {
                n,
                l,
                p,
                error: err.to_string(),
            }),
        }
    }
    output.rows.sort_by_key(TableRow::order);
    output
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut writer = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    // header cells are unquoted
    let text = String::from_utf8(bytes).expect("utf-8 output");
    match text.split_once('\n') {
        Some((_, body)) => format!("n,l,p,g,L,nwn\n{body}"),
        None => "n,l,p,g,L,nwn\n".to_string(),
    }
}

pub fn render_json(rows: &[TableRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

/// Human-readable layout with the L-polynomial written highest degree
/// first.
pub fn render_text(rows: &[TableRow]) -> String {
    let mut out = format!("{:>3} {:>3} {:>3} {:>3}  {:<48} {}\n", "n", "l", "p", "g", "L-polynomial", "NWNs");
    for row in rows {
        let coeffs: Vec<num_bigint::BigInt> = row
            .coefficients
            .split(',')
            .map(|c| c.parse().expect("integer coefficient"))
            .collect();
        let l = crate::zeta::LPolynomial {
            coeffs,
            p: row.p,
            r: 1,
            g: row.g,
        };
        out.push_str(&format!(
            "{:>3} {:>3} {:>3} {:>3}  {:<48} {}\n",
            row.n,
            row.l,
            row.p,
            row.g,
            l.to_string(),
            row.nwn
        ));
    }
    out
}

/// Differences between computed rows and the golden table, keyed by
/// `(n, l, p)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoldenComparison {
    pub matching: usize,
    pub missing: Vec<TableRow>,
    /// `(computed, golden)`.
    pub differing: Vec<(TableRow, TableRow)>,
    pub extra: Vec<TableRow>,
}

impl GoldenComparison {
    pub fn is_exact(&self) -> bool {
        self.missing.is_empty() && self.differing.is_empty() && self.extra.is_empty()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.missing {
            out.push(format!("missing {:?}", g.key()));
        }
        for (r, g) in &self.differing {
            out.push(format!(
                "differs {:?}: L = {} nwn = {} (golden L = {} nwn = {})",
                r.key(),
                r.coefficients,
                r.nwn,
                g.coefficients,
                g.nwn
            ));
        }
        for r in &self.extra {
            out.push(format!("extra {:?}: L = {} nwn = {}", r.key(), r.coefficients, r.nwn));
        }
        out
    }
}

pub fn compare_with_golden(rows: &[TableRow]) -> GoldenComparison {
    let golden = golden_rows();
    let mut cmp = GoldenComparison::default();
    for g in &golden {
        match rows.iter().find(|r| r.key() == g.key()) {
            None => cmp.missing.push(g.clone()),
            Some(r) if r != g => cmp.differing.push((r.clone(), g.clone())),
            Some(_) => cmp.matching += 1,
        }
    }
    cmp.extra = rows
        .iter()
        .filter(|r| !golden.iter().any(|g| g.key() == r.key()))
        .cloned()
        .collect();
    cmp
}
