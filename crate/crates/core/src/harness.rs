//! Seeded Monte Carlo sweeps, summaries and CSV output.
//!
//! Work items are `(method, swept value, trial)` triples. Each item builds
//! its generator from `(master_seed, swept value bits, trial index)`, draws
//! its realization and runs one method, so results do not depend on worker
//! count or scheduling. All methods at the same point and trial index share
//! the realization and the random initial directions.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{draw_realization, linear_to_db};
use crate::config::{ConfigError, SweepConfig};
use crate::numerics::NumericsError;
use crate::optimizer::{run_algorithm, Method};
use crate::rng::trial_rng;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{method} at swept value {swept_value}, trial {trial_index}: {source}")]
    Numerics {
        method: Method,
        swept_value: f64,
        trial_index: usize,
        #[source]
        source: NumericsError,
    },
    #[error("cannot summarize an empty set of trials")]
    EmptyInput,
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialMetrics {
    pub method: Method,
    pub swept_value: f64,
    pub trial_index: usize,
    pub throughput_su_total: f64,
    pub throughput_su1: f64,
    pub throughput_su2: f64,
    pub sinr_pu_db: f64,
    pub interference_pr_normalized: f64,
    pub iterations: usize,
    pub converged: bool,
    pub qos_infeasible: bool,
    pub degenerate: bool,
}

/// Rows plus the per-iteration throughput trace of each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<TrialMetrics>,
    pub traces: Vec<Vec<f64>>,
}

/// Generator coordinates for one trial, independent of the method.
pub fn trial_coordinates(swept_value: f64, trial_index: usize) -> [u64; 2] {
    [swept_value.to_bits(), trial_index as u64]
}

/// Runs one trial of one method.
pub fn run_trial(
    cfg: &SweepConfig,
    method: Method,
    swept_value: f64,
    trial_index: usize,
) -> Result<(TrialMetrics, Vec<f64>), HarnessError> {
    let point = cfg.point(swept_value)?;
    let mut rng = trial_rng(cfg.master_seed, &trial_coordinates(swept_value, trial_index));
    let real = draw_realization(&point.channel, &mut rng)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let trace = run_algorithm(&real, &point.powers, &point.qos, method, &point.settings, &mut rng)
        .map_err(|source| HarnessError::Numerics {
            method,
            swept_value,
            trial_index,
            source,
        })?;
    let q = &trace.final_quality;
    let su1 = (1.0 + q.sinr_su[0]).log2();
    let su2 = (1.0 + q.sinr_su[1]).log2();
    let metrics = TrialMetrics {
        method,
        swept_value,
        trial_index,
        throughput_su_total: su1 + su2,
        throughput_su1: su1,
        throughput_su2: su2,
        sinr_pu_db: linear_to_db(q.sinr_pu),
        interference_pr_normalized: q.interference_pr_normalized,
        iterations: trace.iterations(),
        converged: trace.converged_at.is_some(),
        qos_infeasible: trace.qos_infeasible,
        degenerate: trace.degenerate,
    };
    Ok((metrics, trace.throughput_per_iteration))
}

/// Runs every `(method, swept value, trial)` combination on `workers`
/// threads. Rows come back ordered by method (config order), swept value,
/// then trial index.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let items: Vec<(Method, f64, usize)> = cfg
        .methods
        .iter()
        .flat_map(|&m| {
            cfg.swept_values
                .iter()
                .flat_map(move |&v| (0..cfg.trials).map(move |t| (m, v, t)))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let results: Vec<(TrialMetrics, Vec<f64>)> = pool.install(|| {
        items
            .par_iter()
            .map(|&(m, v, t)| run_trial(cfg, m, v, t))
            .collect::<Result<_, _>>()
    })?;
    let (rows, traces) = results.into_iter().unzip();
    Ok(SweepResult { rows, traces })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation (0 for a single value).
    pub std: f64,
}

impl Stat {
    /// Moments of data shifted by the first value, which keeps constant
    /// input exact.
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let shift = values[0];
        let (sum, sum_sq) = values.iter().fold((0.0, 0.0), |(s, q), x| {
            let d = x - shift;
            (s + d, q + d * d)
        });
        let mean = shift + sum / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0).sqrt()
        };
        Self { mean, std }
    }
}

pub const SUMMARY_METRICS: [&str; 6] = [
    "throughput_su_total",
    "throughput_su1",
    "throughput_su2",
    "sinr_pu_db",
    "interference_pr_normalized",
    "iterations",
];

fn metric_values(row: &TrialMetrics) -> [f64; 6] {
    [
        row.throughput_su_total,
        row.throughput_su1,
        row.throughput_su2,
        row.sinr_pu_db,
        row.interference_pr_normalized,
        row.iterations as f64,
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: Method,
    pub swept_value: f64,
    pub trials: usize,
    /// One entry per name in [`SUMMARY_METRICS`].
    pub stats: [Stat; 6],
    pub converged_count: usize,
    pub qos_infeasible_count: usize,
    pub degenerate_count: usize,
}

impl SummaryRow {
    pub fn stat(&self, metric: &str) -> Option<Stat> {
        SUMMARY_METRICS
            .iter()
            .position(|&m| m == metric)
            .map(|i| self.stats[i])
    }
}

/// Mean and spread per `(method, swept value)`, in order of first
/// appearance.
pub fn summarize(rows: &[TrialMetrics]) -> Result<Vec<SummaryRow>, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let mut groups: Vec<((Method, u64), Vec<&TrialMetrics>)> = Vec::new();
    for row in rows {
        let key = (row.method, row.swept_value.to_bits());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    Ok(groups
        .into_iter()
        .map(|((method, _), group)| {
            let columns: Vec<[f64; 6]> = group.iter().map(|r| metric_values(r)).collect();
            let stats = std::array::from_fn(|i| {
                Stat::of(&columns.iter().map(|c| c[i]).collect::<Vec<_>>())
            });
            SummaryRow {
                method,
                swept_value: group[0].swept_value,
                trials: group.len(),
                stats,
                converged_count: group.iter().filter(|r| r.converged).count(),
                qos_infeasible_count: group.iter().filter(|r| r.qos_infeasible).count(),
                degenerate_count: group.iter().filter(|r| r.degenerate).count(),
            }
        })
        .collect())
}

/// 12 significant digits, scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn metadata(cfg: &SweepConfig, kind: &str) -> String {
    let mut out = format!("## idle-space {kind}\n");
    for (k, v) in cfg.entries() {
        let _ = writeln!(out, "# {k} = {v}");
    }
    let _ = writeln!(out, "## swept_variable: {}", cfg.swept_variable().key());
    out.push_str("## interference_pr_normalized: interference power at the primary receiver (mW) divided by p_max (mW)\n");
    out.push_str("## seeding: ChaCha20 per trial, subseed = splitmix64 fold of (master_seed, swept_value bits, trial_index)\n");
    out
}

pub const TRIAL_COLUMNS: [&str; 12] = [
    "method",
    "swept_value",
    "trial_index",
    "throughput_su_total",
    "throughput_su1",
    "throughput_su2",
    "sinr_pu_db",
    "interference_pr_normalized",
    "iterations",
    "converged",
    "qos_infeasible",
    "degenerate",
];

/// Per-trial CSV. Lines starting with `#` carry the resolved config;
/// stripping one leading `#` from them yields a loadable config file.
pub fn trials_csv(cfg: &SweepConfig, rows: &[TrialMetrics]) -> String {
    let mut out = metadata(cfg, "trials");
    out.push_str(&TRIAL_COLUMNS.join(","));
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.method,
            fmt_num(r.swept_value),
            r.trial_index,
            fmt_num(r.throughput_su_total),
            fmt_num(r.throughput_su1),
            fmt_num(r.throughput_su2),
            fmt_num(r.sinr_pu_db),
            fmt_num(r.interference_pr_normalized),
            r.iterations,
            r.converged,
            r.qos_infeasible,
            r.degenerate,
        );
    }
    out
}

pub fn summary_csv(cfg: &SweepConfig, summary: &[SummaryRow]) -> String {
    let mut out = metadata(cfg, "summary");
    let mut header = vec!["method".to_string(), "swept_value".into(), "trials".into()];
    for m in SUMMARY_METRICS {
        header.push(format!("{m}_mean"));
        header.push(format!("{m}_std"));
    }
    header.extend(["converged_count", "qos_infeasible_count", "degenerate_count"].map(String::from));
    out.push_str(&header.join(","));
    out.push('\n');
    for s in summary {
        let mut fields = vec![s.method.to_string(), fmt_num(s.swept_value), s.trials.to_string()];
        for st in &s.stats {
            fields.push(fmt_num(st.mean));
            fields.push(fmt_num(st.std));
        }
        fields.push(s.converged_count.to_string());
        fields.push(s.qos_infeasible_count.to_string());
        fields.push(s.degenerate_count.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Long-format per-iteration throughput, one line per (trial, iteration).
pub fn trace_csv(cfg: &SweepConfig, result: &SweepResult) -> String {
    let mut out = metadata(cfg, "iteration trace");
    out.push_str("method,swept_value,trial_index,iteration,throughput_su_total\n");
    for (row, trace) in result.rows.iter().zip(&result.traces) {
        for (i, l) in trace.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.method,
                fmt_num(row.swept_value),
                row.trial_index,
                i + 1,
                fmt_num(*l)
            );
        }
    }
    out
}

/// Mean/std throughput per iteration across trials. A trial that stopped
/// early contributes its final value to later iterations.
pub fn trace_summary_csv(cfg: &SweepConfig, result: &SweepResult) -> String {
    let mut out = metadata(cfg, "iteration trace summary");
    out.push_str("method,swept_value,iteration,trials,throughput_su_total_mean,throughput_su_total_std\n");
    type Group<'a> = ((Method, u64), Vec<&'a Vec<f64>>);
    let mut groups: Vec<Group> = Vec::new();
    for (row, trace) in result.rows.iter().zip(&result.traces) {
        let key = (row.method, row.swept_value.to_bits());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(trace),
            None => groups.push((key, vec![trace])),
        }
    }
    for ((method, bits), traces) in groups {
        let len = traces.iter().map(|t| t.len()).max().unwrap_or(0);
        for it in 0..len {
            let vals: Vec<f64> = traces
                .iter()
                .map(|t| t[it.min(t.len() - 1)])
                .collect();
            let st = Stat::of(&vals);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                method,
                fmt_num(f64::from_bits(bits)),
                it + 1,
                vals.len(),
                fmt_num(st.mean),
                fmt_num(st.std)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    fn row(method: Method, v: f64, t: usize, x: f64) -> TrialMetrics {
        TrialMetrics {
            method,
            swept_value: v,
            trial_index: t,
            throughput_su_total: x,
            throughput_su1: x / 2.0,
            throughput_su2: x / 2.0,
            sinr_pu_db: 10.0,
            interference_pr_normalized: 0.0,
            iterations: 2,
            converged: true,
            qos_infeasible: t % 2 == 1,
            degenerate: false,
        }
    }

    #[test]
    fn summary_single_row() {
        let s = summarize(&[row(Method::Proposed, 1.0, 0, 3.5)]).unwrap();
        assert_eq!(s.len(), 1);
        let st = s[0].stat("throughput_su_total").unwrap();
        assert_eq!((st.mean, st.std), (3.5, 0.0));
    }

    #[test]
    fn summary_two_rows_mean() {
        let s = summarize(&[row(Method::Proposed, 1.0, 0, 2.0), row(Method::Proposed, 1.0, 1, 5.0)])
            .unwrap();
        assert_eq!(s[0].stat("throughput_su_total").unwrap().mean, 3.5);
        assert_eq!(s[0].qos_infeasible_count, 1);
        assert_eq!(s[0].trials, 2);
    }

    #[test]
    fn summary_constant_has_zero_std() {
        let rows: Vec<_> = (0..100).map(|t| row(Method::NoNullSpace, 2.0, t, 0.7)).collect();
        let s = summarize(&rows).unwrap();
        assert_eq!(s[0].stat("throughput_su_total").unwrap().std, 0.0);
        assert_eq!(s[0].stat("iterations").unwrap().mean, 2.0);
    }

    #[test]
    fn summary_groups_by_method_and_value() {
        let rows = vec![
            row(Method::Proposed, 1.0, 0, 1.0),
            row(Method::Proposed, 2.0, 0, 1.0),
            row(Method::NoNullSpace, 1.0, 0, 1.0),
            row(Method::Proposed, 1.0, 1, 3.0),
        ];
        let s = summarize(&rows).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].trials, 2);
        assert_eq!(s[0].stat("throughput_su_total").unwrap().mean, 2.0);
        assert!(s[0].stat("nonexistent").is_none());
    }

    #[test]
    fn empty_summary_is_error() {
        assert!(matches!(summarize(&[]), Err(HarnessError::EmptyInput)));
    }

    #[test]
    fn number_format_has_twelve_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000e0");
        assert_eq!(fmt_num(-0.000123456789012345), "-1.23456789012e-4");
    }

    #[test]
    fn single_trial_sweep_has_one_row() {
        let mut cfg = SweepConfig::for_experiment(Experiment::PowerSweep);
        cfg.swept_values = vec![20.0];
        cfg.methods = vec![Method::Proposed];
        cfg.trials = 1;
        cfg.fixed.k = 8;
        let out = run_sweep(&cfg, 1).unwrap();
        assert_eq!(out.rows.len(), 1);
        assert_eq!(out.traces.len(), 1);
        let csv = trials_csv(&cfg, &out.rows);
        let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0], TRIAL_COLUMNS.join(","));
    }

    #[test]
    fn invalid_config_fails_before_running() {
        let mut cfg = SweepConfig::for_experiment(Experiment::PowerSweep);
        cfg.trials = 0;
        assert!(matches!(run_sweep(&cfg, 1), Err(HarnessError::Config(_))));
    }

    #[test]
    fn metadata_reparses_to_same_config() {
        let mut cfg = SweepConfig::for_experiment(Experiment::QosSweep);
        cfg.trials = 3;
        cfg.master_seed = 99;
        let csv = trials_csv(&cfg, &[]);
        let text: String = csv
            .lines()
            .filter(|l| l.starts_with("# "))
            .map(|l| format!("{}\n", &l[2..]))
            .collect();
        assert_eq!(crate::config::parse_config(&text).unwrap(), cfg);
    }
}
