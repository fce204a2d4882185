//! Enumeration, census and table verification for the `M(n,l,k,p)` family.
//!
//! Work is split into one unit per `n`; units run in parallel and are merged in
//! increasing `n`, so every output is ordered by `(n, l, k, p)` whatever the thread count.

pub mod census;
pub mod check;
pub mod config;
pub mod error;
pub mod filter;
pub mod record;
pub mod sweep;
pub mod tables;

pub use config::{Filter, Format, SweepConfig};
pub use error::SweepError;
pub use sweep::{run_sweep, CensusSummary, SweepOutput};
