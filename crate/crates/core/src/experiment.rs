//! Batch competitive-ratio experiments and their CSV output.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::allocation::{
    check_brute_force_size, ratio_against, ReferenceKind, Strategy, WeightMatrix,
};
use crate::error::{Error, Result};
use crate::profiles::{generate, ProfileKind, ProfileSpec};

/// Exact header of the records CSV.
pub const RECORD_HEADER: [&str; 10] = [
    "trial",
    "n",
    "m",
    "profile",
    "strategy",
    "utility",
    "offline_bound",
    "reference_kind",
    "ratio",
    "seed",
];

/// Significant digits for reals in the records CSV.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// One strategy's outcome on one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub n: usize,
    pub m: usize,
    pub profile: String,
    pub strategy: Strategy,
    pub utility: f64,
    pub offline_bound: f64,
    pub reference_kind: ReferenceKind,
    pub ratio: f64,
    /// Seed the trial's matrix was drawn with.
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub profile: ProfileKind,
    pub users: usize,
    pub basestations: usize,
    pub trials: usize,
    pub strategies: Vec<Strategy>,
    pub reference: ReferenceKind,
    pub seed: u64,
}

/// Seed of trial `t` under base seed `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ trial as u64
}

/// Run every strategy on the same matrix and compare each against one
/// shared offline reference.
pub fn evaluate_matrix(
    w: &WeightMatrix<f64>,
    profile: &str,
    strategies: &[Strategy],
    reference: ReferenceKind,
    trial: usize,
    seed: u64,
) -> Result<Vec<ExperimentRecord>> {
    let offline = reference.reference(w)?;
    strategies
        .iter()
        .map(|&strategy| {
            let report = ratio_against(w, strategy, reference, offline)?;
            Ok(ExperimentRecord {
                trial,
                n: w.users(),
                m: w.basestations(),
                profile: profile.to_string(),
                strategy,
                utility: report.online_utility,
                offline_bound: report.offline_reference,
                reference_kind: reference,
                ratio: report.ratio,
                seed,
            })
        })
        .collect()
}

/// Trials run in parallel; records come back in (trial, strategy) order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    if config.reference == ReferenceKind::BruteForceOptimum {
        check_brute_force_size(config.users, config.basestations)?;
    }
    let per_trial: Vec<Vec<ExperimentRecord>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(config.seed, trial);
            let w = generate(&ProfileSpec {
                kind: config.profile,
                users: config.users,
                basestations: config.basestations,
                seed,
            })?;
            evaluate_matrix(
                &w,
                config.profile.name(),
                &config.strategies,
                config.reference,
                trial,
                seed,
            )
        })
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Formats like C's `%.{digits}g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_records_csv<W: Write>(records: &[ExperimentRecord], writer: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    out.write_record(RECORD_HEADER)?;
    let real = |x: f64| format_significant(x, SIGNIFICANT_DIGITS);
    for r in records {
        out.write_record([
            r.trial.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.profile.clone(),
            r.strategy.name().to_string(),
            real(r.utility),
            real(r.offline_bound),
            r.reference_kind.name().to_string(),
            real(r.ratio),
            r.seed.to_string(),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Aggregate over trials for one (profile, strategy, n).
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub profile: String,
    pub strategy: Strategy,
    pub n: usize,
    pub trials: usize,
    pub mean_ratio: f64,
    pub max_ratio: f64,
    pub mean_utility: f64,
}

pub fn summarize(records: &[ExperimentRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut groups: BTreeMap<(&str, Strategy, usize), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.profile, r.strategy, r.n)).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|((profile, strategy, n), rs)| {
            let count = rs.len() as f64;
            SummaryRow {
                profile: profile.to_string(),
                strategy,
                n,
                trials: rs.len(),
                mean_ratio: rs.iter().map(|r| r.ratio).sum::<f64>() / count,
                max_ratio: rs.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max),
                mean_utility: rs.iter().map(|r| r.utility).sum::<f64>() / count,
            }
        })
        .collect())
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<14} {:<16} {:>5} {:>7} {:>12} {:>12} {:>14}",
        "profile", "strategy", "n", "trials", "mean_ratio", "max_ratio", "mean_utility"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<14} {:<16} {:>5} {:>7} {:>12.6} {:>12.6} {:>14.6}",
            r.profile, r.strategy, r.n, r.trials, r.mean_ratio, r.max_ratio, r.mean_utility
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            profile: ProfileKind::IidTen,
            users: 6,
            basestations: 2,
            trials,
            strategies: vec![Strategy::Greedy, Strategy::MaxWeight],
            reference: ReferenceKind::BruteForceOptimum,
            seed: 11,
        }
    }

    fn record(ratio: f64, utility: f64) -> ExperimentRecord {
        ExperimentRecord {
            trial: 0,
            n: 4,
            m: 2,
            profile: "iid-ten".into(),
            strategy: Strategy::Greedy,
            utility,
            offline_bound: ratio * utility,
            reference_kind: ReferenceKind::AnalyticUpperBound,
            ratio,
            seed: 0,
        }
    }

    #[test]
    fn zero_trials_yield_no_records() {
        assert!(run_experiment(&config(0)).unwrap().is_empty());
    }

    #[test]
    fn records_are_ordered_and_paired() {
        let recs = run_experiment(&config(4)).unwrap();
        assert_eq!(recs.len(), 8);
        for (k, r) in recs.iter().enumerate() {
            assert_eq!(r.trial, k / 2);
            assert_eq!(r.seed, 11 ^ (k / 2) as u64);
            assert!(r.ratio >= 1.0 - 1e-9 && r.ratio <= 2.0 + 1e-9);
        }
        // Paired: both strategies see the same offline optimum.
        for pair in recs.chunks(2) {
            assert_eq!(pair[0].offline_bound, pair[1].offline_bound);
            assert_eq!(pair[0].strategy, Strategy::Greedy);
            assert_eq!(pair[1].strategy, Strategy::MaxWeight);
        }
        assert_eq!(recs, run_experiment(&config(4)).unwrap());
    }

    #[test]
    fn brute_force_on_large_instance_is_rejected() {
        let mut c = config(1);
        c.users = 20;
        c.basestations = 10;
        assert!(matches!(run_experiment(&c), Err(Error::InstanceTooLarge(_))));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(4.795790545596741, 12), "4.7957905456");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(-2.5, 12), "-2.5");
        assert_eq!(format_significant(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_significant(0.000012345, 12), "1.2345e-05");
        assert_eq!(format_significant(0.00012345, 12), "0.00012345");
        assert_eq!(format_significant(9.9999999999999, 12), "10");
        assert_eq!(format_significant(f64::INFINITY, 12), "inf");
    }

    #[test]
    fn records_csv_header_is_exact() {
        let mut buf = Vec::new();
        write_records_csv(&[record(1.25, 2.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "trial,n,m,profile,strategy,utility,offline_bound,reference_kind,ratio,seed"
        );
        assert_eq!(
            lines.next().unwrap(),
            "0,4,2,iid-ten,greedy,2,2.5,analytic_upper_bound,1.25,0"
        );
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn summary_examples() {
        let rows = summarize(&[record(1.5, 1.0)]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!((rows[0].mean_ratio, rows[0].max_ratio), (1.5, 1.5));

        let rows = summarize(&[record(1.2, 1.0), record(1.6, 3.0)]).unwrap();
        assert!((rows[0].mean_ratio - 1.4).abs() < 1e-15);
        assert_eq!(rows[0].max_ratio, 1.6);
        assert_eq!(rows[0].mean_utility, 2.0);
        assert!(matches!(summarize(&[]), Err(Error::EmptyRecords)));
    }

    #[test]
    fn summary_is_ordered_by_profile_strategy_n() {
        let mut a = record(1.1, 1.0);
        a.profile = "mixed-half".into();
        let mut b = record(1.1, 1.0);
        b.strategy = Strategy::MaxWeight;
        let mut c = record(1.1, 1.0);
        c.n = 2;
        let rows = summarize(&[b, a, c, record(1.0, 1.0)]).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.profile.as_str(), r.strategy, r.n)).collect();
        assert_eq!(
            keys,
            vec![
                ("iid-ten", Strategy::Greedy, 2),
                ("iid-ten", Strategy::Greedy, 4),
                ("iid-ten", Strategy::MaxWeight, 4),
                ("mixed-half", Strategy::Greedy, 4),
            ]
        );
    }
}
