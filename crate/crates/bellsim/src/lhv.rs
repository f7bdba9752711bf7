//! Local-hidden-variable baselines: the 16 deterministic strategies with
//! their ±2 CHSH values, and samplers for factorized models where each
//! party's outcome depends only on the local setting and a shared hidden
//! value drawn per trial.

use crate::born::AngleSettings;
use crate::rng::TrialRng;
use crate::spin::Direction;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LhvError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: u64, need: u64 },
    #[error("outcomes are ±1, got {value}")]
    BadOutcome { value: i8 },
}

/// Pre-assigned ±1 answers to all four possible questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub a: i8,
    pub a_prime: i8,
    pub b: i8,
    pub b_prime: i8,
}

impl DeterministicStrategy {
    pub fn new(a: i8, a_prime: i8, b: i8, b_prime: i8) -> Result<Self, LhvError> {
        for v in [a, a_prime, b, b_prime] {
            if v != 1 && v != -1 {
                return Err(LhvError::BadOutcome { value: v });
            }
        }
        Ok(DeterministicStrategy { a, a_prime, b, b_prime })
    }

    /// All 16 strategies in a fixed enumeration order.
    pub fn all() -> Vec<DeterministicStrategy> {
        let pm = [1i8, -1];
        let mut out = Vec::with_capacity(16);
        for a in pm {
            for a_prime in pm {
                for b in pm {
                    for b_prime in pm {
                        out.push(DeterministicStrategy { a, a_prime, b, b_prime });
                    }
                }
            }
        }
        out
    }
}

/// A·B + A′·B + A·B′ − A′·B′ — always ±2 for pre-assigned answers, because
/// B + B′ and B − B′ cannot both be nonzero.
pub fn chsh_of_strategy(s: &DeterministicStrategy) -> i32 {
    let (a, ap, b, bp) =
        (i32::from(s.a), i32::from(s.a_prime), i32::from(s.b), i32::from(s.b_prime));
    a * b + ap * b + a * bp - ap * bp
}

/// Exhaustive sweep of all 16 strategies: the maximum CHSH value and every
/// strategy attaining it.
pub fn enumerate_strategy_bound() -> (i32, Vec<DeterministicStrategy>) {
    let mut max = i32::MIN;
    let mut argmax = Vec::new();
    for s in DeterministicStrategy::all() {
        let v = chsh_of_strategy(&s);
        match v.cmp(&max) {
            std::cmp::Ordering::Greater => {
                max = v;
                argmax = vec![s];
            }
            std::cmp::Ordering::Equal => argmax.push(s),
            std::cmp::Ordering::Less => {}
        }
    }
    (max, argmax)
}

/// A factorized hidden-variable model: a per-trial hidden draw plus two local
/// response functions. Locality is enforced by the shape of the interface —
/// each response sees only its own setting and the hidden value.
pub trait HiddenVariableModel {
    type Hidden;

    fn draw(&self, rng: &mut TrialRng) -> Self::Hidden;
    fn response_a(&self, setting: &Direction, hidden: &Self::Hidden) -> i8;
    fn response_b(&self, setting: &Direction, hidden: &Self::Hidden) -> i8;
}

/// sign with the tie broken upward: −1 for negative, +1 otherwise.
/// The tie at exactly 0 has measure zero under the uniform hidden draw.
pub fn sign_pm(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Default model: hidden value λ uniform on the unit sphere,
/// A = sign(a·λ), B = −sign(b·λ). Anti-correlated at equal settings, so it
/// mimics the singlet at angle 0 while staying local.
#[derive(Debug, Clone, Copy, Default)]
pub struct VectorSignModel;

impl HiddenVariableModel for VectorSignModel {
    type Hidden = Direction;

    fn draw(&self, rng: &mut TrialRng) -> Direction {
        Direction::sample_uniform(rng)
    }

    fn response_a(&self, setting: &Direction, hidden: &Direction) -> i8 {
        sign_pm(setting.dot(hidden))
    }

    fn response_b(&self, setting: &Direction, hidden: &Direction) -> i8 {
        -sign_pm(setting.dot(hidden))
    }
}

/// Degenerate model whose responses ignore the hidden value entirely.
#[derive(Debug, Clone, Copy)]
pub struct ConstantModel {
    pub a_value: i8,
    pub b_value: i8,
}

impl HiddenVariableModel for ConstantModel {
    type Hidden = ();

    fn draw(&self, _rng: &mut TrialRng) {}

    fn response_a(&self, _setting: &Direction, _hidden: &()) -> i8 {
        self.a_value
    }

    fn response_b(&self, _setting: &Direction, _hidden: &()) -> i8 {
        self.b_value
    }
}

/// One trial of the model: λ drawn deterministically from (seed, trial_index),
/// then both responses evaluated at the given settings.
pub fn lhv_sample<M: HiddenVariableModel>(
    model: &M,
    a: &Direction,
    b: &Direction,
    seed: u64,
    trial_index: u64,
) -> (i8, i8) {
    let mut rng = TrialRng::new(seed, trial_index);
    let hidden = model.draw(&mut rng);
    (model.response_a(a, &hidden), model.response_b(b, &hidden))
}

/// Monte-Carlo CHSH for a hidden-variable model: each of the four setting
/// cells gets ~n/4 independent trials (disjoint trial-index ranges), and the
/// four correlation estimates combine as E₁+E₂+E₃−E₄ with the standard error
/// propagated across independent cells.
pub fn lhv_chsh_mc<M: HiddenVariableModel>(
    model: &M,
    settings: &AngleSettings,
    n: u64,
    seed: u64,
) -> Result<(f64, f64), LhvError> {
    const MIN_SAMPLES: u64 = 1000;
    if n < MIN_SAMPLES {
        return Err(LhvError::TooFewSamples { got: n, need: MIN_SAMPLES });
    }
    let dir = Direction::from_planar_angle;
    let cells = [
        (dir(settings.a()), dir(settings.b())),
        (dir(settings.a_prime()), dir(settings.b())),
        (dir(settings.a()), dir(settings.b_prime())),
        (dir(settings.a_prime()), dir(settings.b_prime())),
    ];
    let mut means = [0.0f64; 4];
    let mut variances = [0.0f64; 4];
    let mut next_index = 0u64;
    for (i, (da, db)) in cells.iter().enumerate() {
        let count = n / 4 + u64::from((i as u64) < n % 4);
        let mut sum: i64 = 0;
        for t in 0..count {
            let (ra, rb) = lhv_sample(model, da, db, seed, next_index + t);
            sum += i64::from(ra) * i64::from(rb);
        }
        next_index += count;
        let mean = sum as f64 / count as f64;
        means[i] = mean;
        variances[i] = (1.0 - mean * mean) / count as f64;
    }
    let s = means[0] + means[1] + means[2] - means[3];
    let se = variances.iter().sum::<f64>().sqrt();
    Ok((s, se))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn strategy_constructor_validates_signs() {
        assert!(DeterministicStrategy::new(1, -1, 1, 1).is_ok());
        assert!(matches!(
            DeterministicStrategy::new(1, 0, 1, 1),
            Err(LhvError::BadOutcome { value: 0 })
        ));
    }

    #[test]
    fn chsh_of_strategy_frozen_values() {
        let s = |a, ap, b, bp| DeterministicStrategy::new(a, ap, b, bp).unwrap();
        assert_eq!(chsh_of_strategy(&s(1, 1, 1, 1)), 2);
        assert_eq!(chsh_of_strategy(&s(1, 1, 1, -1)), 2);
        assert_eq!(chsh_of_strategy(&s(1, -1, 1, 1)), 2);
        assert_eq!(chsh_of_strategy(&s(-1, 1, 1, 1)), -2);
    }

    #[test]
    fn every_strategy_evaluates_to_plus_or_minus_two() {
        let all = DeterministicStrategy::all();
        assert_eq!(all.len(), 16);
        for s in &all {
            let v = chsh_of_strategy(s);
            assert!(v == 2 || v == -2, "strategy {s:?} gave {v}");
        }
    }

    #[test]
    fn strategy_bound_is_two_with_eight_maximizers() {
        let (max, argmax) = enumerate_strategy_bound();
        assert_eq!(max, 2);
        assert_eq!(argmax.len(), 8);
        let min = DeterministicStrategy::all()
            .iter()
            .map(chsh_of_strategy)
            .min()
            .unwrap();
        assert_eq!(min, -2);
    }

    #[test]
    fn lhv_sample_is_deterministic_in_seed_and_index() {
        let a = Direction::from_planar_angle(0.3);
        let b = Direction::from_planar_angle(1.9);
        let first = lhv_sample(&VectorSignModel, &a, &b, 42, 7);
        let second = lhv_sample(&VectorSignModel, &a, &b, 42, 7);
        assert_eq!(first, second);
    }

    #[test]
    fn hidden_value_equal_to_setting_forces_plus_one() {
        // A model pinned to a fixed hidden direction shows the trait accepts
        // arbitrary hidden spaces and that sign(a·a) = sign(1) = +1.
        struct Pinned(Direction);
        impl HiddenVariableModel for Pinned {
            type Hidden = Direction;
            fn draw(&self, _rng: &mut TrialRng) -> Direction {
                self.0
            }
            fn response_a(&self, setting: &Direction, hidden: &Direction) -> i8 {
                sign_pm(setting.dot(hidden))
            }
            fn response_b(&self, setting: &Direction, hidden: &Direction) -> i8 {
                -sign_pm(setting.dot(hidden))
            }
        }
        let a = Direction::from_planar_angle(0.77);
        let (ra, _) = lhv_sample(&Pinned(a), &a, &Direction::from_planar_angle(2.0), 0, 0);
        assert_eq!(ra, 1);
    }

    #[test]
    fn sign_model_correlation_matches_the_closed_form() {
        // E(AB) for the sign model is −1 + 2θ/π at angular distance θ.
        let n = 1_000_000u64;
        for (k, theta_deg) in [30.0f64, 90.0, 135.0].iter().enumerate() {
            let theta = theta_deg * std::f64::consts::PI / 180.0;
            let a = Direction::from_planar_angle(0.0);
            let b = Direction::from_planar_angle(theta);
            let mut sum = 0i64;
            for t in 0..n {
                let (ra, rb) = lhv_sample(&VectorSignModel, &a, &b, 1000 + k as u64, t);
                sum += i64::from(ra) * i64::from(rb);
            }
            let mean = sum as f64 / n as f64;
            let want = -1.0 + 2.0 * theta / std::f64::consts::PI;
            assert!((mean - want).abs() < 0.005, "theta {theta_deg}: {mean} vs {want}");
        }
    }

    #[test]
    fn alice_marginal_ignores_bobs_setting() {
        // Disjoint trial ranges so the two cells are independent samples.
        let a = Direction::from_planar_angle(0.4);
        let b = Direction::from_planar_angle(2.1);
        let bp = Direction::from_planar_angle(5.0);
        let n = 250_000u64;
        let mut sum_b = 0i64;
        let mut sum_bp = 0i64;
        for t in 0..n {
            sum_b += i64::from(lhv_sample(&VectorSignModel, &a, &b, 77, t).0);
            sum_bp += i64::from(lhv_sample(&VectorSignModel, &a, &bp, 77, n + t).0);
        }
        let (m1, m2) = (sum_b as f64 / n as f64, sum_bp as f64 / n as f64);
        let se = (((1.0 - m1 * m1) + (1.0 - m2 * m2)) / n as f64).sqrt();
        assert!((m1 - m2).abs() <= 4.0 * se, "diff {} vs 4se {}", m1 - m2, 4.0 * se);
    }

    #[test]
    fn chsh_mc_rejects_tiny_runs() {
        let e = lhv_chsh_mc(&VectorSignModel, &AngleSettings::maximal_violation(), 999, 0);
        assert!(matches!(e, Err(LhvError::TooFewSamples { got: 999, need: 1000 })));
    }

    #[test]
    fn constant_model_saturates_the_bound_exactly() {
        let model = ConstantModel { a_value: 1, b_value: 1 };
        let (s, se) = lhv_chsh_mc(&model, &AngleSettings::maximal_violation(), 4000, 5).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn sign_model_respects_the_classical_bound_at_canonical_settings() {
        let (s, se) =
            lhv_chsh_mc(&VectorSignModel, &AngleSettings::maximal_violation(), 1_000_000, 2024)
                .unwrap();
        assert!(s <= 2.0 + 3.0 * se, "S {s}, SE {se}");
        // At these settings the sign model attains the bound in expectation.
        assert!((s - 2.0).abs() < 0.02, "S {s} strayed from 2");
    }

    #[test]
    fn sign_model_never_breaks_the_bound_across_seeds() {
        for seed in 0..100u64 {
            let mut rng = TrialRng::new(seed, 0);
            let settings = AngleSettings::new(
                rng.next_f64() * TAU,
                rng.next_f64() * TAU,
                rng.next_f64() * TAU,
                rng.next_f64() * TAU,
            );
            let (s, se) = lhv_chsh_mc(&VectorSignModel, &settings, 10_000, seed).unwrap();
            assert!(s <= 2.0 + 5.0 * se, "seed {seed}: S {s}, SE {se}");
        }
    }
}
