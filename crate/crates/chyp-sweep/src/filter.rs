//! Record filters; a record is kept when it satisfies every requested filter.

use std::collections::BTreeSet;

use chyp::quadrangle::ExampleRecord;
use num_rational::Ratio;

use crate::config::Filter;

pub fn integer_tau(r: &ExampleRecord) -> bool {
    r.tau3 % 3 == 0
}

/// `e >= chi / 3`, in integers.
pub fn real_hyperbolic(r: &ExampleRecord) -> bool {
    3 * r.e >= r.chi
}

/// Records with genus among the two smallest values, `e` among the two largest, or minimal `e / chi`.
pub fn extremes(records: &[ExampleRecord]) -> Vec<bool> {
    let genera: BTreeSet<i64> = records.iter().map(|r| r.genus).collect();
    let es: BTreeSet<i64> = records.iter().map(|r| r.e).collect();
    let low_genus: Vec<i64> = genera.iter().take(2).copied().collect();
    let high_e: Vec<i64> = es.iter().rev().take(2).copied().collect();
    let ratio = |r: &ExampleRecord| Ratio::new(r.e, r.chi);
    let min_ratio = records.iter().map(ratio).min();
    records
        .iter()
        .map(|r| low_genus.contains(&r.genus) || high_e.contains(&r.e) || Some(ratio(r)) == min_ratio)
        .collect()
}

/// The records passing all `filters`, in their original order.
pub fn apply(records: &[ExampleRecord], filters: &[Filter]) -> Vec<ExampleRecord> {
    let extreme = if filters.contains(&Filter::Extremes) { extremes(records) } else { vec![true; records.len()] };
    records
        .iter()
        .zip(extreme)
        .filter(|(r, ex)| {
            *ex && filters.iter().all(|f| match f {
                Filter::IntegerTau => integer_tau(r),
                Filter::RealHyperbolic => real_hyperbolic(r),
                Filter::Extremes => true,
            })
        })
        .map(|(r, _)| *r)
        .collect()
}
