//! Experiment records, parameter sweeps, and scaling fits.

use std::collections::HashSet;
use std::fmt;
use std::fs::OpenOptions;
use std::io;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::env::{Session, TrimAudit};
use crate::error::{GenError, SearchError};
use crate::generators::{Family, FamilySpec, TargetStrategy};
use crate::search::{
    baseline_full, baseline_rounds, bifurcation_search, ceil_sqrt, SearchParams, SearchResult,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("{context}: {source}")]
    Search {
        context: String,
        source: SearchError,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot fit: {0}")]
    Fit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Bifurcation,
    Rounds,
    Full,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Bifurcation, Algo::Rounds, Algo::Full];

    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Bifurcation => "bifurcation",
            Algo::Rounds => "rounds",
            Algo::Full => "full",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bifurcation" => Ok(Algo::Bifurcation),
            "rounds" => Ok(Algo::Rounds),
            "full" => Ok(Algo::Full),
            other => Err(format!(
                "unknown algorithm `{other}` (bifurcation, rounds, full)"
            )),
        }
    }
}

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub family: Family,
    pub n: u32,
    pub t: u32,
    /// ψ used by bifurcation search; 0 for the baselines.
    pub psi: u64,
    pub algo: Algo,
    pub seed: u64,
    pub steps: u64,
    pub oracle_calls: u64,
    pub found: bool,
    pub target_inorder_rank: u32,
    /// `steps + n·oracle_calls`.
    pub cost_linear_decider: u64,
}

pub const CSV_HEADER: &str =
    "family,n,t,psi,algo,seed,steps,oracle_calls,found,target_inorder_rank,cost_linear_decider";

/// A record plus everything the run measured.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: ExperimentRecord,
    pub result: SearchResult,
    pub params: Option<SearchParams>,
    pub audit: TrimAudit,
}

/// Fork count of the instance a spec builds, without building it.
pub fn instance_forks(family: Family, t: u32) -> u32 {
    match family {
        Family::Path => 0,
        Family::CompletePath => {
            let h = ceil_sqrt(u64::from(t)) as u32;
            (1u32 << h.min(31)) - 1
        }
        Family::Random | Family::Comb => t,
    }
}

/// ψ recorded for `algo` on a spec; `psi = None` means `⌈√t⌉` of the
/// instance's fork count.
pub fn resolved_psi(algo: Algo, family: Family, t: u32, psi: Option<u64>) -> u64 {
    match algo {
        Algo::Bifurcation => {
            psi.unwrap_or_else(|| SearchParams::default_psi(instance_forks(family, t)))
        }
        _ => 0,
    }
}

/// Builds the instance for `spec` and runs `algo` on it with a trim audit.
/// The algorithms see the instance's true fork count.
pub fn run_experiment(
    spec: &FamilySpec,
    algo: Algo,
    psi: Option<u64>,
) -> Result<RunOutcome, HarnessError> {
    let tree = spec.build()?;
    let mut session = Session::audited(&tree);
    let context = || {
        format!(
            "{} n={} t={} seed={} algo={algo}",
            spec.family, spec.n, spec.t, spec.seed
        )
    };
    let wrap = |source| HarnessError::Search {
        context: context(),
        source,
    };

    let (result, params) = match algo {
        Algo::Bifurcation => {
            let psi = psi.unwrap_or_else(|| SearchParams::default_psi(tree.t()));
            let params = SearchParams::new(tree.n(), tree.t(), psi).map_err(wrap)?;
            (
                bifurcation_search(&mut session, &params).map_err(wrap)?,
                Some(params),
            )
        }
        Algo::Rounds => (
            baseline_rounds(&mut session, tree.n(), tree.t()).map_err(wrap)?,
            None,
        ),
        Algo::Full => (baseline_full(&mut session).map_err(wrap)?, None),
    };
    let record = ExperimentRecord {
        family: spec.family,
        n: spec.n,
        t: spec.t,
        psi: params.map_or(0, |p| p.psi),
        algo,
        seed: spec.seed,
        steps: result.steps,
        oracle_calls: result.oracle_calls,
        found: result.found == tree.target(),
        target_inorder_rank: tree.inorder_rank(tree.target()),
        cost_linear_decider: result.steps + u64::from(spec.n) * result.oracle_calls,
    };
    let audit = session.audit().cloned().unwrap_or_default();
    Ok(RunOutcome {
        record,
        result,
        params,
        audit,
    })
}

/// Cartesian grid of experiments. Trial `k` of a cell uses seed
/// `base_seed + k`.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub families: Vec<Family>,
    pub ns: Vec<u32>,
    pub ts: Vec<u32>,
    /// `None` selects `⌈√t⌉`.
    pub psis: Vec<Option<u64>>,
    pub algos: Vec<Algo>,
    pub trials: u64,
    pub base_seed: u64,
    pub target: TargetStrategy,
}

impl SweepGrid {
    /// Every `(spec, algo, psi)` of the grid, in output order.
    pub fn cells(&self) -> Vec<(FamilySpec, Algo, Option<u64>)> {
        let mut out = Vec::new();
        for &family in &self.families {
            for &n in &self.ns {
                for &t in &self.ts {
                    for &psi in &self.psis {
                        for trial in 0..self.trials {
                            let spec = FamilySpec {
                                family,
                                n,
                                t,
                                seed: self.base_seed + trial,
                                target: self.target,
                            };
                            for &algo in &self.algos {
                                out.push((spec, algo, psi));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

type RecordKey = (Family, u32, u32, u64, Algo, u64);

fn key_of(r: &ExperimentRecord) -> RecordKey {
    (r.family, r.n, r.t, r.psi, r.algo, r.seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepSummary {
    pub written: usize,
    pub skipped: usize,
}

/// Runs the grid and appends one record per run to the CSV at `out`.
/// Rows already present in the file are not run again, so an interrupted
/// sweep can be resumed with the same command. Runs execute in parallel;
/// rows are written in grid order.
pub fn sweep(grid: &SweepGrid, out: &Path) -> Result<SweepSummary, HarnessError> {
    let existing: HashSet<RecordKey> = if out.exists() && std::fs::metadata(out)?.len() > 0 {
        read_records(out)?.iter().map(key_of).collect()
    } else {
        HashSet::new()
    };
    let mut seen = existing.clone();
    let mut pending = Vec::new();
    let mut skipped = 0;
    for (spec, algo, psi) in grid.cells() {
        let key = (
            spec.family,
            spec.n,
            spec.t,
            resolved_psi(algo, spec.family, spec.t, psi),
            algo,
            spec.seed,
        );
        if seen.insert(key) {
            pending.push((spec, algo, psi));
        } else {
            skipped += 1;
        }
    }

    let records: Vec<ExperimentRecord> = pending
        .par_iter()
        .map(|(spec, algo, psi)| run_experiment(spec, *algo, *psi).map(|o| o.record))
        .collect::<Result<_, _>>()?;

    let write_header = existing.is_empty() && (!out.exists() || std::fs::metadata(out)?.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(out)?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(write_header)
        .from_writer(file);
    for r in &records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(SweepSummary {
        written: records.len(),
        skipped,
    })
}

/// Writes records (with header) to any writer.
pub fn write_records<W: io::Write>(records: &[ExperimentRecord], w: W) -> Result<(), HarnessError> {
    let mut writer = csv::Writer::from_writer(w);
    for r in records {
        writer.serialize(r)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let mut reader = csv::Reader::from_path(path)?;
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}

/// Quantity a scaling fit is computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Steps,
    OracleCalls,
    Cost,
}

impl Metric {
    fn of(self, r: &ExperimentRecord) -> f64 {
        match self {
            Metric::Steps => r.steps as f64,
            Metric::OracleCalls => r.oracle_calls as f64,
            Metric::Cost => r.cost_linear_decider as f64,
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "steps" => Ok(Metric::Steps),
            "oracle_calls" | "calls" => Ok(Metric::OracleCalls),
            "cost" => Ok(Metric::Cost),
            other => Err(format!(
                "unknown metric `{other}` (steps, oracle_calls, cost)"
            )),
        }
    }
}

/// Least-squares fit of `ln(mean metric) = c + a·ln n + b·ln t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub algo: Algo,
    pub n_exponent: f64,
    pub t_exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual_rms: f64,
    pub residuals: Vec<f64>,
    /// Number of `(n, t)` cells fitted.
    pub cells: usize,
}

/// Fits one power law per algorithm over per-cell means. Records with
/// `t = 0` are ignored. Each algorithm needs at least three distinct values
/// of both `n` and `t`.
pub fn fit_scaling(
    records: &[ExperimentRecord],
    metric: Metric,
) -> Result<Vec<FitReport>, HarnessError> {
    let mut algos: Vec<Algo> = records.iter().map(|r| r.algo).collect();
    algos.sort();
    algos.dedup();
    let mut reports = Vec::new();
    for algo in algos {
        let mut cells: Vec<((u32, u32), (f64, usize))> = Vec::new();
        for r in records.iter().filter(|r| r.algo == algo && r.t > 0) {
            match cells.iter_mut().find(|(k, _)| *k == (r.n, r.t)) {
                Some((_, (sum, count))) => {
                    *sum += metric.of(r);
                    *count += 1;
                }
                None => cells.push(((r.n, r.t), (metric.of(r), 1))),
            }
        }
        let distinct = |f: fn(&(u32, u32)) -> u32| {
            let mut v: Vec<u32> = cells.iter().map(|(k, _)| f(k)).collect();
            v.sort();
            v.dedup();
            v.len()
        };
        if distinct(|k| k.0) < 3 || distinct(|k| k.1) < 3 {
            return Err(HarnessError::Fit(format!(
                "{algo}: need at least 3 distinct values of both n and t"
            )));
        }
        let rows = cells.len();
        let x = DMatrix::from_fn(rows, 3, |i, j| match j {
            0 => 1.0,
            1 => f64::from(cells[i].0 .0).ln(),
            _ => f64::from(cells[i].0 .1).ln(),
        });
        let y = DVector::from_fn(rows, |i, _| {
            let (sum, count) = cells[i].1;
            (sum / count as f64).max(f64::MIN_POSITIVE).ln()
        });
        let coef = x
            .clone()
            .svd(true, true)
            .solve(&y, 1e-12)
            .map_err(|e| HarnessError::Fit(format!("{algo}: {e}")))?;
        let residuals: Vec<f64> = (&y - &x * &coef).iter().copied().collect();
        let residual_rms = (residuals.iter().map(|r| r * r).sum::<f64>() / rows as f64).sqrt();
        reports.push(FitReport {
            algo,
            intercept: coef[0],
            n_exponent: coef[1],
            t_exponent: coef[2],
            residual_rms,
            residuals,
            cells: rows,
        });
    }
    Ok(reports)
}
