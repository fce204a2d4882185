//! Parallel evaluation of the `(n, l, k, p)` family, one work unit per `n`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use chyp::isometry::SliceTag;
use chyp::potential::toledo_by_integral;
use chyp::quadrangle::{
    compute_f_terms, evaluate, terms_with_trivial_c_order, verify_identities, Cond, ExampleRecord, Params,
    QuadrangleData,
};
use chyp::triangle::classify_triangle;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::SweepError;

/// Boundary samples used when looking for a generic point with `o(z, Wz, phi' z) = 0`.
pub const TRIVIAL_ORDER_SAMPLES: usize = 64;
/// Band used to classify the two triangles of an accepted tuple.
pub const CLASSIFY_TOL: f64 = 1e-8;

/// Everything learned about the tuples of one `n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UnitResult {
    pub n: i64,
    /// Accepted tuples in `(l, k, p)` order.
    pub records: Vec<ExampleRecord>,
    /// Rejected tuples whose failing conditions all lie within the marginal band.
    pub near_misses: Vec<Params>,
    /// Rejected tuples that pass every condition except the bisector transversality along `M1`.
    pub q7_only: Vec<Params>,
    /// Accepted tuples whose invariants could not be computed.
    pub tuple_errors: Vec<(Params, String)>,
    /// Law or identity violations on accepted tuples.
    pub violations: Vec<String>,
}

/// Optional cross-checks on an accepted tuple; returns the list of failures.
pub fn verify_accepted(data: &QuadrangleData, record: &ExampleRecord, z_seed: f64) -> Vec<String> {
    let params = data.params;
    let mut bad = Vec::new();
    if let Err(e) = verify_identities(data) {
        bad.push(format!("{params:?}: identities: {e}"));
    }
    match toledo_by_integral(data).map(|cycle| cycle * params.cover_degree()) {
        Ok(tau) if tau == Ratio::new(record.tau3, 3) => {}
        Ok(tau) => bad.push(format!("{params:?}: Toledo integral gives {tau}, expected {}", record.tau())),
        Err(e) => bad.push(format!("{params:?}: Toledo integral: {e}")),
    }
    for (name, tri) in [("C", data.triangle_c()), ("S", data.triangle_s())] {
        match classify_triangle(&tri, CLASSIFY_TOL) {
            Ok(c) if c.tag == SliceTag::Elliptic => {}
            Ok(c) => bad.push(format!("{params:?}: triangle {name} is {:?}", c.tag)),
            Err(e) => bad.push(format!("{params:?}: triangle {name}: {e}")),
        }
    }
    match compute_f_terms(data, z_seed) {
        Ok(t) if (t.lambda_y, t.lambda_z) == (0, 0) => {}
        Ok(t) => bad.push(format!("{params:?}: lambda terms {:?}", (t.lambda_y, t.lambda_z))),
        Err(e) => bad.push(format!("{params:?}: f terms: {e}")),
    }
    match terms_with_trivial_c_order(data, TRIVIAL_ORDER_SAMPLES) {
        Ok(Some(t)) if i64::from(t.o_y) == record.f => {}
        Ok(Some(t)) => bad.push(format!("{params:?}: o(y,Uy,phi^-1 y) = {} but f = {}", t.o_y, record.f)),
        Ok(None) => bad.push(format!("{params:?}: no generic z with o(z,Wz,phi' z) = 0")),
        Err(e) => bad.push(format!("{params:?}: cyclic orders: {e}")),
    }
    bad
}

/// Evaluates every admissible tuple with first parameter `n`, sequentially and in order.
pub fn evaluate_n(n: i64, cfg: &SweepConfig) -> UnitResult {
    let mut unit = UnitResult { n, ..UnitResult::default() };
    for params in Params::enumerate(n) {
        let (report, data) = evaluate(params, cfg.margin, cfg.marginal_band);
        if !report.accepted {
            if report.near_miss {
                unit.near_misses.push(params);
            }
            if !report.result(Cond::Q7).passed && report.passes_all_but(Cond::Q7) {
                unit.q7_only.push(params);
            }
            continue;
        }
        let Some(data) = data else {
            unit.tuple_errors.push((params, "accepted without construction data".into()));
            continue;
        };
        let f = match compute_f_terms(&data, cfg.z_seed) {
            Ok(t) => t.f(),
            Err(e) => {
                unit.tuple_errors.push((params, e.to_string()));
                continue;
            }
        };
        let record = ExampleRecord::new(params, f, report.marginal);
        if let Err(e) = record.check_laws() {
            unit.violations.push(e);
        }
        if cfg.verify_identities {
            unit.violations.extend(verify_accepted(&data, &record, cfg.z_seed));
        }
        unit.records.push(record);
    }
    unit
}

/// Counts over a set of units; the totals are sums of the per-`n` entries.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub total_accepted: u64,
    pub integer_tau_count: u64,
    pub marginal_count: u64,
    pub near_miss_count: u64,
    pub tuple_error_count: u64,
    pub per_n_counts: BTreeMap<i64, u64>,
    #[serde(with = "duration_secs")]
    pub wall_time: Duration,
    /// Accepted tuples with a condition slack inside the marginal band.
    pub marginal: Vec<Params4>,
    /// Rejected tuples whose failures are all inside the marginal band.
    pub near_misses: Vec<Params4>,
    /// Rejected tuples failing only the bisector transversality along `M1`.
    pub q7_only: Vec<Params4>,
}

/// `(n, l, k, p)` as a plain array for serialization.
pub type Params4 = [i64; 4];

fn p4(p: &Params) -> Params4 {
    [p.n, p.l, p.k, p.p]
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?.max(0.0)))
    }
}

impl CensusSummary {
    /// Adds one unit; units must arrive in increasing `n`.
    pub fn absorb(&mut self, unit: &UnitResult) {
        let accepted = unit.records.len() as u64;
        self.total_accepted += accepted;
        self.per_n_counts.insert(unit.n, accepted);
        self.integer_tau_count += unit.records.iter().filter(|r| r.tau3 % 3 == 0).count() as u64;
        for r in unit.records.iter().filter(|r| r.marginal) {
            self.marginal_count += 1;
            self.marginal.push(p4(&r.params));
        }
        self.near_miss_count += unit.near_misses.len() as u64;
        self.near_misses.extend(unit.near_misses.iter().map(p4));
        self.q7_only.extend(unit.q7_only.iter().map(p4));
        self.tuple_error_count += unit.tuple_errors.len() as u64;
    }

    /// The `n` values in the summary with no accepted tuple.
    pub fn empty_ns(&self) -> Vec<i64> {
        self.per_n_counts.iter().filter(|(_, &c)| c == 0).map(|(&n, _)| n).collect()
    }

    pub fn totals_consistent(&self) -> bool {
        self.per_n_counts.values().sum::<u64>() == self.total_accepted
            && self.marginal.len() as u64 == self.marginal_count
            && self.near_misses.len() as u64 == self.near_miss_count
    }
}

pub fn thread_pool(cfg: &SweepConfig) -> Result<rayon::ThreadPool, SweepError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        b = b.num_threads(t);
    }
    b.build().map_err(|e| SweepError::Config(format!("thread pool: {e}")))
}

/// Evaluates the given `n` values in parallel and returns the units in the order given.
pub fn evaluate_units(pool: &rayon::ThreadPool, ns: &[i64], cfg: &SweepConfig) -> Vec<UnitResult> {
    pool.install(|| ns.par_iter().map(|&n| evaluate_n(n, cfg)).collect())
}

/// Result of a full sweep: every accepted record in `(n, l, k, p)` order plus the summary.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<ExampleRecord>,
    pub summary: CensusSummary,
    pub tuple_errors: Vec<(Params, String)>,
    pub violations: Vec<String>,
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput, SweepError> {
    cfg.validate()?;
    let start = Instant::now();
    let pool = thread_pool(cfg)?;
    let ns: Vec<i64> = (cfg.n_min..=cfg.n_max).collect();
    let units = evaluate_units(&pool, &ns, cfg);
    let mut out = SweepOutput {
        records: Vec::new(),
        summary: CensusSummary::default(),
        tuple_errors: Vec::new(),
        violations: Vec::new(),
    };
    for unit in units {
        out.summary.absorb(&unit);
        out.records.extend(unit.records);
        out.tuple_errors.extend(unit.tuple_errors);
        out.violations.extend(unit.violations);
    }
    out.summary.wall_time = start.elapsed();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_for_ten_contains_the_table_row() {
        let unit = evaluate_n(10, &SweepConfig::default());
        assert_eq!(unit.records.len(), 1);
        let r = &unit.records[0];
        assert_eq!(r.params, Params::new(10, 6, 3, 1));
        assert_eq!((r.genus, r.chi, r.e, r.tau3), (4, -6, -2, -16));
        assert!(unit.violations.is_empty() && unit.tuple_errors.is_empty());
    }

    #[test]
    fn summary_totals_match_per_n() {
        let cfg = SweepConfig { n_min: 3, n_max: 16, threads: Some(1), ..SweepConfig::default() };
        let out = run_sweep(&cfg).unwrap();
        assert!(out.summary.totals_consistent());
        assert_eq!(out.records.len() as u64, out.summary.total_accepted);
        assert!(out.records.windows(2).all(|w| w[0].params < w[1].params));
    }
}
