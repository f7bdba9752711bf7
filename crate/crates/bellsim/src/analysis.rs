//! Setting-conditioned statistics over trial data: per-cell correlation
//! estimates, the empirical CHSH statistic with its standard error and a
//! z score against the classical boundary S = 2, and no-signalling
//! diagnostics comparing each party's marginal across the remote settings.
//!
//! Every estimator conditions on the observed setting labels. Cell
//! accumulators are exact integer sums, so results are independent of trial
//! order and of how a dataset is split into parts.

use crate::experiment::{AliceSetting, BobSetting, TrialRecord};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("cell ({alice}, {bob}) holds no trials; the statistic is undefined")]
    UndefinedCell { alice: &'static str, bob: &'static str },
}

/// The four setting cells in report order: l1=(a,b), l2=(a′,b), l3=(a,b′),
/// l4=(a′,b′). S combines them as l1 + l2 + l3 − l4.
pub const CELLS: [(AliceSetting, BobSetting); 4] = [
    (AliceSetting::A, BobSetting::B),
    (AliceSetting::APrime, BobSetting::B),
    (AliceSetting::A, BobSetting::BPrime),
    (AliceSetting::APrime, BobSetting::BPrime),
];

fn cell_index(alice: AliceSetting, bob: BobSetting) -> usize {
    usize::from(alice == AliceSetting::APrime) + 2 * usize::from(bob == BobSetting::BPrime)
}

/// Correlation estimate for one setting cell. Stores the exact count and the
/// exact integer sum of outcome products — the sufficient statistics — so
/// pooling two estimates of the same cell is exact, not a float compromise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionalEstimate {
    pub cell: (AliceSetting, BobSetting),
    pub count: u64,
    pub sum_products: i64,
}

impl ConditionalEstimate {
    pub fn empty(cell: (AliceSetting, BobSetting)) -> Self {
        ConditionalEstimate { cell, count: 0, sum_products: 0 }
    }

    /// Mean outcome product; undefined (None) for an empty cell.
    pub fn mean(&self) -> Option<f64> {
        (self.count >= 1).then(|| self.sum_products as f64 / self.count as f64)
    }

    /// √((1 − mean²)/count); defined for count ≥ 2.
    pub fn standard_error(&self) -> Option<f64> {
        if self.count < 2 {
            return None;
        }
        let m = self.mean().expect("count >= 2");
        Some(((1.0 - m * m) / self.count as f64).sqrt())
    }

    /// Exact pooling of two estimates of the same cell.
    pub fn merged(&self, other: &Self) -> Self {
        assert_eq!(self.cell, other.cell, "pooling different cells");
        ConditionalEstimate {
            cell: self.cell,
            count: self.count + other.count,
            sum_products: self.sum_products + other.sum_products,
        }
    }
}

/// One pass over the trials, one exact accumulator per setting cell.
/// Empty cells stay explicitly empty — their means are None, never 0.
pub fn estimate_correlations(trials: &[TrialRecord]) -> [ConditionalEstimate; 4] {
    let mut out = CELLS.map(ConditionalEstimate::empty);
    for r in trials {
        let k = cell_index(r.alice_setting, r.bob_setting);
        out[k].count += 1;
        out[k].sum_products += i64::from(r.alice_outcome) * i64::from(r.bob_outcome);
    }
    out
}

/// S = l̂1 + l̂2 + l̂3 − l̂4 with its standard error, treating the four cells
/// as independent samples (settings are independent coins per trial).
/// A cell with a single trial contributes its degenerate SE of 0.
pub fn chsh_statistic(estimates: &[ConditionalEstimate; 4]) -> Result<(f64, f64), AnalysisError> {
    let mut means = [0.0f64; 4];
    let mut var_sum = 0.0f64;
    for (i, est) in estimates.iter().enumerate() {
        let mean = est.mean().ok_or(AnalysisError::UndefinedCell {
            alice: est.cell.0.label(),
            bob: est.cell.1.label(),
        })?;
        means[i] = mean;
        if let Some(se) = est.standard_error() {
            var_sum += se * se;
        }
    }
    let s = means[0] + means[1] + means[2] - means[3];
    Ok((s, var_sum.sqrt()))
}

/// z score of S against the classical boundary 2. By convention 0 when
/// S = 2 with zero standard error (a strategy source hitting the bound
/// exactly), and ±∞ when S ≠ 2 with zero standard error.
pub fn z_against_two(s: f64, standard_error: f64) -> f64 {
    if standard_error == 0.0 {
        if s == 2.0 {
            return 0.0;
        }
        return if s > 2.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    (s - 2.0) / standard_error
}

/// One no-signalling diagnostic: a party's empirical outcome mean under a
/// fixed local setting, compared across the two remote settings.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignallingEntry {
    pub party: &'static str,
    pub local_setting: &'static str,
    pub remote_settings: (&'static str, &'static str),
    /// mean(first remote) − mean(second remote); None when a cell is empty.
    pub difference: Option<f64>,
    /// Two-sample z for the difference; None when a cell is empty, 0 when
    /// both variances vanish with zero difference.
    pub z: Option<f64>,
}

/// The four marginal comparisons: Alice at a and a′ across b/b′, Bob at b
/// and b′ across a/a′.
pub fn no_signalling_check(trials: &[TrialRecord]) -> Vec<NoSignallingEntry> {
    let mut count = [0u64; 4];
    let mut alice_sum = [0i64; 4];
    let mut bob_sum = [0i64; 4];
    for r in trials {
        let k = cell_index(r.alice_setting, r.bob_setting);
        count[k] += 1;
        alice_sum[k] += i64::from(r.alice_outcome);
        bob_sum[k] += i64::from(r.bob_outcome);
    }
    let compare = |sums: &[i64; 4], first: usize, second: usize| -> (Option<f64>, Option<f64>) {
        if count[first] == 0 || count[second] == 0 {
            return (None, None);
        }
        let m1 = sums[first] as f64 / count[first] as f64;
        let m2 = sums[second] as f64 / count[second] as f64;
        let diff = m1 - m2;
        let var = (1.0 - m1 * m1) / count[first] as f64 + (1.0 - m2 * m2) / count[second] as f64;
        let z = if var == 0.0 {
            if diff == 0.0 {
                0.0
            } else if diff > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            diff / var.sqrt()
        };
        (Some(diff), Some(z))
    };
    // cell indices: 0=(a,b), 1=(a',b), 2=(a,b'), 3=(a',b')
    let specs = [
        ("alice", "a", ("b", "b'"), 0usize, 2usize, &alice_sum),
        ("alice", "a'", ("b", "b'"), 1, 3, &alice_sum),
        ("bob", "b", ("a", "a'"), 0, 1, &bob_sum),
        ("bob", "b'", ("a", "a'"), 2, 3, &bob_sum),
    ];
    specs
        .into_iter()
        .map(|(party, local, remotes, i, j, sums)| {
            let (difference, z) = compare(sums, i, j);
            NoSignallingEntry {
                party,
                local_setting: local,
                remote_settings: remotes,
                difference,
                z,
            }
        })
        .collect()
}

/// Provenance carried into a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportMetadata {
    pub trials: u64,
    pub settings_degrees: [f64; 4],
    pub source: String,
    pub seed: Option<u64>,
    pub config_hash: Option<u64>,
}

impl ReportMetadata {
    /// Metadata for a bare dataset with no known generating config.
    pub fn from_trial_count(trials: u64) -> Self {
        ReportMetadata {
            trials,
            settings_degrees: [f64::NAN; 4],
            source: "unknown".to_string(),
            seed: None,
            config_hash: None,
        }
    }
}

/// Everything the analyst reports: the four conditioned estimates, the CHSH
/// statistic with uncertainty, the z score against 2, and the no-signalling
/// diagnostics.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub estimates: [ConditionalEstimate; 4],
    pub s: f64,
    pub s_standard_error: f64,
    pub z_against_2: f64,
    pub no_signalling: Vec<NoSignallingEntry>,
    pub metadata: ReportMetadata,
}

/// Runs the full analysis. Errors when any setting cell is empty: the CHSH
/// combination has no meaning until all four questions have been asked.
pub fn evaluate_report(
    trials: &[TrialRecord],
    metadata: ReportMetadata,
) -> Result<AnalysisReport, AnalysisError> {
    let estimates = estimate_correlations(trials);
    let (s, s_standard_error) = chsh_statistic(&estimates)?;
    let z = z_against_two(s, s_standard_error);
    let no_signalling = no_signalling_check(trials);
    Ok(AnalysisReport {
        estimates,
        s,
        s_standard_error,
        z_against_2: z,
        no_signalling,
        metadata,
    })
}

impl AnalysisReport {
    /// Human-readable aligned table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.metadata;
        out.push_str("CHSH analysis\n");
        out.push_str(&format!("  trials: {}    source: {}\n", m.trials, m.source));
        if m.settings_degrees.iter().all(|v| v.is_finite()) {
            let [a, ap, b, bp] = m.settings_degrees;
            out.push_str(&format!("  settings [deg]: a={a} a'={ap} b={b} b'={bp}\n"));
        }
        if let Some(seed) = m.seed {
            out.push_str(&format!("  seed: {seed}\n"));
        }
        if let Some(hash) = m.config_hash {
            out.push_str(&format!("  config hash: {hash:#018x}\n"));
        }
        out.push('\n');
        out.push_str("  cell       count        mean          se\n");
        for (i, est) in self.estimates.iter().enumerate() {
            let label = format!("l{} ({:<2},{:<2})", i + 1, est.cell.0.label(), est.cell.1.label());
            match est.mean() {
                Some(mean) => {
                    let se = est
                        .standard_error()
                        .map(|v| format!("{v:.6}"))
                        .unwrap_or_else(|| "-".to_string());
                    out.push_str(&format!(
                        "  {label}  {:>8}  {:>+10.6}  {:>10}\n",
                        est.count, mean, se
                    ));
                }
                None => out.push_str(&format!("  {label}  {:>8}   (no trials)\n", est.count)),
            }
        }
        out.push('\n');
        out.push_str(&format!(
            "  S = {:.6} +/- {:.6}    z against 2 = {:.3}\n",
            self.s, self.s_standard_error, self.z_against_2
        ));
        out.push_str("  no-signalling (marginal difference across remote settings):\n");
        for e in &self.no_signalling {
            let body = match (e.difference, e.z) {
                (Some(d), Some(z)) => format!("{d:+.6} (z = {z:+.3})"),
                _ => "(undefined: empty cell)".to_string(),
            };
            out.push_str(&format!(
                "    {:<5} @ {:<2}  {} vs {}  {}\n",
                e.party, e.local_setting, e.remote_settings.0, e.remote_settings.1, body
            ));
        }
        out
    }

    /// Flat machine-readable `key = value` document with fixed field names:
    /// `l1.count`, `l1.mean`, `l1.se`, …, `S`, `S.se`, `z2`,
    /// `ns.<party>.<setting>.diff`, `ns.<party>.<setting>.z`, `meta.*`.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (i, est) in self.estimates.iter().enumerate() {
            let k = i + 1;
            out.push_str(&format!("l{k}.count = {}\n", est.count));
            if let Some(mean) = est.mean() {
                out.push_str(&format!("l{k}.mean = {mean}\n"));
            }
            if let Some(se) = est.standard_error() {
                out.push_str(&format!("l{k}.se = {se}\n"));
            }
        }
        out.push_str(&format!("S = {}\n", self.s));
        out.push_str(&format!("S.se = {}\n", self.s_standard_error));
        out.push_str(&format!("z2 = {}\n", self.z_against_2));
        for e in &self.no_signalling {
            if let (Some(d), Some(z)) = (e.difference, e.z) {
                out.push_str(&format!("ns.{}.{}.diff = {d}\n", e.party, e.local_setting));
                out.push_str(&format!("ns.{}.{}.z = {z}\n", e.party, e.local_setting));
            }
        }
        let m = &self.metadata;
        out.push_str(&format!("meta.trials = {}\n", m.trials));
        out.push_str(&format!("meta.source = {}\n", m.source));
        if m.settings_degrees.iter().all(|v| v.is_finite()) {
            let [a, ap, b, bp] = m.settings_degrees;
            out.push_str(&format!("meta.a_deg = {a}\n"));
            out.push_str(&format!("meta.a_prime_deg = {ap}\n"));
            out.push_str(&format!("meta.b_deg = {b}\n"));
            out.push_str(&format!("meta.b_prime_deg = {bp}\n"));
        }
        if let Some(seed) = m.seed {
            out.push_str(&format!("meta.seed = {seed}\n"));
        }
        if let Some(hash) = m.config_hash {
            out.push_str(&format!("meta.config_hash = {hash:#018x}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::born::{correlation_theory, AngleSettings};
    use crate::experiment::{run_experiment, ExperimentConfig, Source};
    use crate::lhv::DeterministicStrategy;
    use crate::rng::TrialRng;

    fn record(
        trial: u64,
        alice: AliceSetting,
        bob: BobSetting,
        out_a: i8,
        out_b: i8,
    ) -> TrialRecord {
        TrialRecord {
            trial,
            alice_setting: alice,
            bob_setting: bob,
            alice_outcome: out_a,
            bob_outcome: out_b,
        }
    }

    fn metadata(trials: u64) -> ReportMetadata {
        ReportMetadata {
            trials,
            settings_degrees: [0.0, 90.0, 225.0, 135.0],
            source: "test".to_string(),
            seed: None,
            config_hash: None,
        }
    }

    #[test]
    fn four_single_trials_give_their_products() {
        use AliceSetting::*;
        use BobSetting::*;
        let trials = vec![
            record(0, A, B, 1, 1),
            record(1, APrime, B, 1, -1),
            record(2, A, BPrime, -1, -1),
            record(3, APrime, BPrime, -1, -1),
        ];
        let est = estimate_correlations(&trials);
        let means: Vec<f64> = est.iter().map(|e| e.mean().unwrap()).collect();
        assert_eq!(means, vec![1.0, -1.0, 1.0, 1.0]);
        assert!(est.iter().all(|e| e.count == 1));
        // single-trial cells have no standard error
        assert!(est.iter().all(|e| e.standard_error().is_none()));
    }

    #[test]
    fn empty_cell_is_undefined_not_zero() {
        use AliceSetting::*;
        use BobSetting::*;
        let trials = vec![
            record(0, A, B, 1, 1),
            record(1, APrime, B, 1, 1),
            record(2, A, BPrime, 1, 1),
        ];
        let est = estimate_correlations(&trials);
        assert!(est[3].mean().is_none());
        assert_eq!(est[3].count, 0);
        match chsh_statistic(&est) {
            Err(AnalysisError::UndefinedCell { alice: "a'", bob: "b'" }) => {}
            other => panic!("expected undefined (a',b'), got {other:?}"),
        }
    }

    #[test]
    fn chsh_statistic_frozen_combinations() {
        // means ≈ (+√2/2, +√2/2, +√2/2, −√2/2) realized as exact rationals
        let mk = |sum: i64| ConditionalEstimate {
            cell: CELLS[0],
            count: 1_000_000,
            sum_products: sum,
        };
        let est = [
            ConditionalEstimate { cell: CELLS[0], ..mk(707107) },
            ConditionalEstimate { cell: CELLS[1], ..mk(707107) },
            ConditionalEstimate { cell: CELLS[2], ..mk(707107) },
            ConditionalEstimate { cell: CELLS[3], ..mk(-707107) },
        ];
        let (s, se) = chsh_statistic(&est).unwrap();
        assert!((s - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-5);
        assert!(se > 0.0 && se < 0.002);

        let ones = CELLS.map(|cell| ConditionalEstimate { cell, count: 100, sum_products: 100 });
        let (s, se) = chsh_statistic(&ones).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(se, 0.0);
        assert_eq!(z_against_two(s, se), 0.0);
    }

    #[test]
    fn pooling_concatenated_datasets_is_exact() {
        let cfg1 = ExperimentConfig::standard(4_001, 31, Source::Quantum);
        let cfg2 = ExperimentConfig::standard(2_999, 32, Source::Quantum);
        let part1 = run_experiment(&cfg1).unwrap();
        let part2 = run_experiment(&cfg2).unwrap();
        let mut all = part1.clone();
        all.extend(part2.iter().copied());

        let e1 = estimate_correlations(&part1);
        let e2 = estimate_correlations(&part2);
        let pooled = estimate_correlations(&all);
        for k in 0..4 {
            let merged = e1[k].merged(&e2[k]);
            assert_eq!(merged, pooled[k]);
            // and the float means agree bitwise, since the integer sums do
            assert_eq!(merged.mean(), pooled[k].mean());
        }
    }

    #[test]
    fn report_is_invariant_under_trial_shuffling() {
        let cfg = ExperimentConfig::standard(20_000, 8, Source::Quantum);
        let records = run_experiment(&cfg).unwrap();
        let mut shuffled = records.clone();
        let mut rng = TrialRng::new(999, 0);
        for i in (1..shuffled.len()).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        assert_ne!(records, shuffled);
        let r1 = evaluate_report(&records, metadata(20_000)).unwrap();
        let r2 = evaluate_report(&shuffled, metadata(20_000)).unwrap();
        assert_eq!(r1.s.to_bits(), r2.s.to_bits());
        assert_eq!(r1.s_standard_error.to_bits(), r2.s_standard_error.to_bits());
        assert_eq!(r1.estimates, r2.estimates);
        assert_eq!(r1.no_signalling, r2.no_signalling);
    }

    #[test]
    fn strategy_dataset_reproduces_its_strategy_value_exactly() {
        let strat = DeterministicStrategy::new(1, 1, 1, 1).unwrap();
        let cfg = ExperimentConfig::standard(4_000, 2, Source::Strategy(strat));
        let records = run_experiment(&cfg).unwrap();
        let report = evaluate_report(&records, metadata(4_000)).unwrap();
        assert_eq!(report.s, 2.0);
        assert_eq!(report.s_standard_error, 0.0);
        assert_eq!(report.z_against_2, 0.0);
    }

    #[test]
    fn quantum_run_violates_the_classical_bound() {
        let cfg = ExperimentConfig::standard(400_000, 20250819, Source::Quantum);
        let records = run_experiment(&cfg).unwrap();
        let report = evaluate_report(&records, metadata(400_000)).unwrap();
        let target = 2.0 * std::f64::consts::SQRT_2;
        assert!((report.s - target).abs() < 0.01, "S = {}", report.s);
        assert!(report.z_against_2 > 40.0, "z = {}", report.z_against_2);
        for e in &report.no_signalling {
            assert!(e.z.unwrap().abs() <= 4.0, "{e:?}");
        }
    }

    #[test]
    fn lhv_run_respects_the_classical_bound() {
        let cfg = ExperimentConfig::standard(500_000, 6, Source::Lhv("sign".into()));
        let records = run_experiment(&cfg).unwrap();
        let report = evaluate_report(&records, metadata(500_000)).unwrap();
        assert!(report.s <= 2.0 + 3.0 * report.s_standard_error, "S = {}", report.s);
    }

    #[test]
    fn theory_agreement_of_every_cell_mean() {
        let cfg = ExperimentConfig::standard(200_000, 14, Source::Quantum);
        let settings = AngleSettings::from_degrees(0.0, 90.0, 225.0, 135.0);
        let records = run_experiment(&cfg).unwrap();
        let est = estimate_correlations(&records);
        let angles = [
            settings.a() - settings.b(),
            settings.a_prime() - settings.b(),
            settings.a() - settings.b_prime(),
            settings.a_prime() - settings.b_prime(),
        ];
        for (e, angle) in est.iter().zip(angles) {
            let want = correlation_theory(angle);
            let diff = (e.mean().unwrap() - want).abs();
            assert!(diff < 5.0 * e.standard_error().unwrap(), "cell {:?}", e.cell);
        }
    }

    #[test]
    fn signalling_artifact_is_reported() {
        use AliceSetting::*;
        use BobSetting::*;
        let mut trials = Vec::new();
        for t in 0..10 {
            trials.push(record(t, A, B, 1, 1));
            trials.push(record(t + 10, A, BPrime, -1, 1));
            trials.push(record(t + 20, APrime, B, 1, 1));
            trials.push(record(t + 30, APrime, BPrime, 1, 1));
        }
        let ns = no_signalling_check(&trials);
        let alice_a = &ns[0];
        assert_eq!(alice_a.party, "alice");
        assert_eq!(alice_a.local_setting, "a");
        assert_eq!(alice_a.difference, Some(2.0));
        assert_eq!(alice_a.z, Some(f64::INFINITY));
    }

    #[test]
    fn empty_dataset_gives_undefined_diagnostics() {
        let ns = no_signalling_check(&[]);
        assert_eq!(ns.len(), 4);
        for e in &ns {
            assert_eq!(e.difference, None);
            assert_eq!(e.z, None);
        }
    }

    #[test]
    fn reported_uncertainty_matches_the_spread_across_runs() {
        // 200 independent runs: the standard deviation of S should match the
        // reported standard error within 20%.
        let mut s_values = Vec::with_capacity(200);
        let mut se_sum = 0.0;
        for seed in 0..200u64 {
            let cfg = ExperimentConfig::standard(10_000, 100_000 + seed, Source::Quantum);
            let records = run_experiment(&cfg).unwrap();
            let report = evaluate_report(&records, metadata(10_000)).unwrap();
            s_values.push(report.s);
            se_sum += report.s_standard_error;
        }
        let mean_s: f64 = s_values.iter().sum::<f64>() / s_values.len() as f64;
        let var: f64 = s_values.iter().map(|s| (s - mean_s).powi(2)).sum::<f64>()
            / (s_values.len() - 1) as f64;
        let spread = var.sqrt();
        let mean_se = se_sum / s_values.len() as f64;
        let ratio = spread / mean_se;
        assert!((0.8..=1.2).contains(&ratio), "spread {spread} vs mean SE {mean_se}");
    }

    #[test]
    fn renderings_carry_the_contract_fields() {
        let cfg = ExperimentConfig::standard(4_000, 2, Source::Quantum);
        let records = run_experiment(&cfg).unwrap();
        let mut md = metadata(4_000);
        md.seed = Some(2);
        md.config_hash = Some(cfg.config_hash());
        let report = evaluate_report(&records, md).unwrap();

        let kv = report.to_kv();
        for key in [
            "l1.count = ", "l1.mean = ", "l1.se = ", "l4.mean = ", "S = ", "S.se = ", "z2 = ",
            "ns.alice.a.diff = ", "ns.alice.a.z = ", "ns.alice.a'.diff = ", "ns.bob.b.diff = ",
            "ns.bob.b'.z = ", "meta.trials = ", "meta.source = ", "meta.seed = ",
            "meta.config_hash = ",
        ] {
            assert!(kv.lines().any(|l| l.starts_with(key)), "missing '{key}' in:\n{kv}");
        }

        let text = report.to_text();
        for needle in ["CHSH analysis", "S = ", "no-signalling", "l1 (a ,b )"] {
            assert!(text.contains(needle), "missing '{needle}' in:\n{text}");
        }
    }
}
