use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fidcore::EmpiricalDistribution;
use crate::inference::summary::{interval, IntervalSpec};
use crate::numerics::RandomStream;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// Completed replications.
    pub replications: usize,
    pub hits: usize,
    /// `hits / replications`.
    pub rate: f64,
    /// Binomial standard error of `rate`.
    pub std_error: f64,
    /// Replications whose simulation or procedure failed; excluded above.
    pub failures: usize,
    /// First failure message, if any.
    pub first_failure: Option<String>,
}

/// Repeated-sampling coverage of fiducial intervals.
///
/// Replication `r` runs on `stream.fork(r)`: `simulate` draws data at the true
/// parameter, `procedure` turns it into a fiducial cloud, and a hit is
/// recorded when the interval from `spec` contains `truth`. Replications run
/// in parallel; the report is independent of scheduling.
pub fn coverage_experiment<D, S, P>(
    simulate: S,
    procedure: P,
    truth: f64,
    spec: &IntervalSpec,
    replications: usize,
    stream: &RandomStream,
) -> Result<CoverageReport>
where
    S: Fn(&mut RandomStream) -> Result<D> + Sync,
    P: Fn(&D, &mut RandomStream) -> Result<EmpiricalDistribution> + Sync,
{
    if replications == 0 {
        return Err(Error::Argument("need at least one replication".into()));
    }
    let outcomes: Vec<Result<bool>> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut s = stream.fork(r);
            let data = simulate(&mut s)?;
            let d = procedure(&data, &mut s)?;
            Ok(interval(&d, spec)?.contains(truth))
        })
        .collect();
    let mut hits = 0;
    let mut failures = 0;
    let mut first_failure = None;
    for o in outcomes {
        match o {
            Ok(true) => hits += 1,
            Ok(false) => {}
            Err(e) => {
                failures += 1;
                first_failure.get_or_insert_with(|| e.to_string());
            }
        }
    }
    let done = replications - failures;
    if done == 0 {
        return Err(Error::Domain(format!(
            "every replication failed: {}",
            first_failure.unwrap_or_default()
        )));
    }
    let rate = hits as f64 / done as f64;
    Ok(CoverageReport {
        replications: done,
        hits,
        rate,
        std_error: (rate * (1.0 - rate) / done as f64).sqrt(),
        failures,
        first_failure,
    })
}
