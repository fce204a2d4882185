//! Bundled reference tables and their re-derivation.

use std::collections::{BTreeMap, BTreeSet};

use chyp::quadrangle::{ExampleRecord, Params};
use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::SweepError;
use crate::filter;
use crate::sweep::{evaluate_units, thread_pool};

/// Extreme values of genus, Euler number and `e / chi`.
pub const EXTREMES_CSV: &str = include_str!("../data/extremes.csv");
/// Every example with `e >= chi / 3`, all with `n <= 53`.
pub const REAL_HYPERBOLIC_CSV: &str = include_str!("../data/real_hyperbolic.csv");
/// Every example with `n = 101`.
pub const N101_CSV: &str = include_str!("../data/n101.csv");

/// Largest `n` covered by the real-hyperbolic table.
pub const REAL_HYPERBOLIC_N_MAX: i64 = 53;

/// One reference row; `tau3` is `3 tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
pub struct TableRow {
    pub n: i64,
    pub l: i64,
    pub k: i64,
    pub p: i64,
    pub genus: i64,
    pub chi: i64,
    pub e: i64,
    pub tau3: i64,
}

impl TableRow {
    pub fn params(&self) -> Params {
        Params::new(self.n, self.l, self.k, self.p)
    }

    fn from_record(r: &ExampleRecord) -> Self {
        let Params { n, l, k, p } = r.params;
        TableRow { n, l, k, p, genus: r.genus, chi: r.chi, e: r.e, tau3: r.tau3 }
    }
}

pub fn parse_table(text: &str) -> Result<Vec<TableRow>, SweepError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader.deserialize().map(|r| r.map_err(SweepError::from)).collect()
}

/// Outcome of the table verification; it passes when `diffs` is empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TablesReport {
    pub extremes_rows: usize,
    pub real_hyperbolic_rows: usize,
    pub n101_rows: usize,
    /// Rows kept by the `e >= chi / 3` filter over the sweep up to [`REAL_HYPERBOLIC_N_MAX`].
    pub real_hyperbolic_filtered: usize,
    /// Accepted tuples at `n = 101` grouped by `e`, with the set of `3 tau` values in each group.
    pub n101_groups: BTreeMap<i64, (usize, BTreeSet<i64>)>,
    /// One line per disagreement.
    pub diffs: Vec<String>,
}

impl TablesReport {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Compares a reference table with recomputed records, reporting missing, extra and differing rows.
fn diff_sets(name: &str, want: &[TableRow], got: &[TableRow], diffs: &mut Vec<String>) {
    let by_params = |rows: &[TableRow]| rows.iter().map(|r| (r.params(), *r)).collect::<BTreeMap<_, _>>();
    let (want, got) = (by_params(want), by_params(got));
    for (p, w) in &want {
        match got.get(p) {
            None => diffs.push(format!("{name}: {p:?} expected but not produced")),
            Some(g) if g != w => diffs.push(format!("{name}: {p:?} expected {w:?}, got {g:?}")),
            Some(_) => {}
        }
    }
    for p in got.keys().filter(|p| !want.contains_key(p)) {
        diffs.push(format!("{name}: {p:?} produced but not in the table"));
    }
}

/// Re-derives every bundled table, including the two whole-set comparisons.
pub fn verify_tables(cfg: &SweepConfig) -> Result<TablesReport, SweepError> {
    let extremes = parse_table(EXTREMES_CSV)?;
    let real_hyp = parse_table(REAL_HYPERBOLIC_CSV)?;
    let n101 = parse_table(N101_CSV)?;
    let pool = thread_pool(cfg)?;
    let mut ns: Vec<i64> = (3..=REAL_HYPERBOLIC_N_MAX).collect();
    ns.extend(extremes.iter().map(|r| r.n).filter(|&n| n > REAL_HYPERBOLIC_N_MAX));
    ns.push(101);
    ns.sort_unstable();
    ns.dedup();
    let units = evaluate_units(&pool, &ns, cfg);

    let mut report = TablesReport {
        extremes_rows: extremes.len(),
        real_hyperbolic_rows: real_hyp.len(),
        n101_rows: n101.len(),
        ..TablesReport::default()
    };
    for unit in &units {
        report.diffs.extend(unit.violations.iter().map(|v| format!("law violation: {v}")));
        report.diffs.extend(unit.tuple_errors.iter().map(|(p, e)| format!("{p:?}: evaluation error: {e}")));
    }
    let accepted: BTreeMap<Params, TableRow> =
        units.iter().flat_map(|u| u.records.iter()).map(|r| (r.params, TableRow::from_record(r))).collect();

    for (name, table) in [("extremes", &extremes), ("real-hyperbolic", &real_hyp)] {
        for row in table.iter() {
            match accepted.get(&row.params()) {
                None => report.diffs.push(format!("{name}: {:?} is not accepted", row.params())),
                Some(got) if got != row => report.diffs.push(format!("{name}: expected {row:?}, got {got:?}")),
                Some(_) => {}
            }
        }
    }

    let swept: Vec<ExampleRecord> = units
        .iter()
        .filter(|u| u.n <= REAL_HYPERBOLIC_N_MAX)
        .flat_map(|u| u.records.iter().copied())
        .collect();
    let filtered: Vec<TableRow> =
        swept.iter().filter(|r| filter::real_hyperbolic(r)).map(TableRow::from_record).collect();
    report.real_hyperbolic_filtered = filtered.len();
    diff_sets("real-hyperbolic filter", &real_hyp, &filtered, &mut report.diffs);

    let got101: Vec<TableRow> =
        units.iter().filter(|u| u.n == 101).flat_map(|u| u.records.iter()).map(TableRow::from_record).collect();
    for r in &got101 {
        let g = report.n101_groups.entry(r.e).or_default();
        g.0 += 1;
        g.1.insert(r.tau3);
    }
    diff_sets("n = 101", &n101, &got101, &mut report.diffs);
    Ok(report)
}
