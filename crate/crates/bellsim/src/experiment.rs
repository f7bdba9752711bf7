//! Trial generation and replay for the two-party experiment: per-trial coin
//! flips choose the settings, outcomes come from the quantum joint law, a
//! hidden-variable model, or a fixed strategy, and datasets round-trip
//! through a plain CSV format.

use crate::born::{joint_outcome_probability, AngleSettings};
use crate::lhv::{DeterministicStrategy, HiddenVariableModel, VectorSignModel};
use crate::rng::TrialRng;
use crate::spin::Direction;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {detail}")]
    InvalidConfig { detail: String },
    #[error("unknown source '{name}': expected quantum, lhv:sign, or strategy:<s,s,s,s> with signs ±1")]
    UnknownSource { name: String },
    #[error("line {line}: {detail}")]
    ParseError { line: usize, detail: String },
    #[error("line {line}: outcome must be -1 or 1, got '{value}'")]
    BadOutcome { line: usize, value: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Alice's two measurement settings, serialized as `a` and `a'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AliceSetting {
    A,
    APrime,
}

impl AliceSetting {
    pub fn label(&self) -> &'static str {
        match self {
            AliceSetting::A => "a",
            AliceSetting::APrime => "a'",
        }
    }
}

impl fmt::Display for AliceSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Bob's two measurement settings, serialized as `b` and `b'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BobSetting {
    B,
    BPrime,
}

impl BobSetting {
    pub fn label(&self) -> &'static str {
        match self {
            BobSetting::B => "b",
            BobSetting::BPrime => "b'",
        }
    }
}

impl fmt::Display for BobSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One completed run: which questions were asked and the two ±1 answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub alice_setting: AliceSetting,
    pub bob_setting: BobSetting,
    pub alice_outcome: i8,
    pub bob_outcome: i8,
}

/// Where outcomes come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Singlet joint law P(u,v) = (1 − u·v·cos(angle))/4.
    Quantum,
    /// A named hidden-variable model; `sign` is the bundled one.
    Lhv(String),
    /// Fixed ±1 answers for all four questions.
    Strategy(DeterministicStrategy),
}

impl Source {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let unknown = || ExperimentError::UnknownSource { name: text.to_string() };
        if text == "quantum" {
            return Ok(Source::Quantum);
        }
        if let Some(name) = text.strip_prefix("lhv:") {
            if name.is_empty() {
                return Err(unknown());
            }
            return Ok(Source::Lhv(name.to_string()));
        }
        if let Some(signs) = text.strip_prefix("strategy:") {
            let parts: Vec<&str> = signs.split(',').collect();
            if parts.len() != 4 {
                return Err(unknown());
            }
            let mut vals = [0i8; 4];
            for (i, p) in parts.iter().enumerate() {
                vals[i] = match p.trim() {
                    "1" | "+1" => 1,
                    "-1" => -1,
                    _ => return Err(unknown()),
                };
            }
            let s = DeterministicStrategy::new(vals[0], vals[1], vals[2], vals[3])
                .expect("signs validated above");
            return Ok(Source::Strategy(s));
        }
        Err(unknown())
    }

    pub fn render(&self) -> String {
        fn sgn(v: i8) -> &'static str {
            if v > 0 {
                "+1"
            } else {
                "-1"
            }
        }
        match self {
            Source::Quantum => "quantum".to_string(),
            Source::Lhv(name) => format!("lhv:{name}"),
            Source::Strategy(s) => {
                format!("strategy:{},{},{},{}", sgn(s.a), sgn(s.a_prime), sgn(s.b), sgn(s.b_prime))
            }
        }
    }
}

/// Full description of a simulated experiment. Angles are kept in degrees
/// exactly as given so configs round-trip byte-for-byte.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub trials: u64,
    pub seed: u64,
    pub source: Source,
    pub a_deg: f64,
    pub a_prime_deg: f64,
    pub b_deg: f64,
    pub b_prime_deg: f64,
    /// P(Alice asks a); the complement picks a′.
    pub p_alice_base: f64,
    /// P(Bob asks b); the complement picks b′.
    pub p_bob_base: f64,
}

impl ExperimentConfig {
    /// Config at the canonical violation angles with fair setting coins.
    pub fn standard(trials: u64, seed: u64, source: Source) -> Self {
        ExperimentConfig {
            trials,
            seed,
            source,
            a_deg: 0.0,
            a_prime_deg: 90.0,
            b_deg: 225.0,
            b_prime_deg: 135.0,
            p_alice_base: 0.5,
            p_bob_base: 0.5,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |detail: String| Err(ExperimentError::InvalidConfig { detail });
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        for (key, v) in [
            ("a_deg", self.a_deg),
            ("a_prime_deg", self.a_prime_deg),
            ("b_deg", self.b_deg),
            ("b_prime_deg", self.b_prime_deg),
        ] {
            if !v.is_finite() {
                return bad(format!("{key} must be finite, got {v}"));
            }
        }
        for (key, p) in [("p_alice_base", self.p_alice_base), ("p_bob_base", self.p_bob_base)] {
            if !(p > 0.0 && p < 1.0) {
                return bad(format!("{key} must lie strictly inside (0,1), got {p}"));
            }
        }
        Ok(())
    }

    pub fn settings(&self) -> AngleSettings {
        AngleSettings::from_degrees(self.a_deg, self.a_prime_deg, self.b_deg, self.b_prime_deg)
    }

    /// Parses the flat `key = value` format (see `render`); `#` starts a
    /// comment, blank lines are ignored, unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut trials: Option<u64> = None;
        let mut seed: Option<u64> = None;
        let mut source: Option<Source> = None;
        let mut cfg = ExperimentConfig::standard(1, 0, Source::Quantum);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ExperimentError::ParseError {
                line,
                detail: format!("expected 'key = value', got '{raw}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let num = |what: &str| -> Result<f64, ExperimentError> {
                what.parse::<f64>().map_err(|_| ExperimentError::ParseError {
                    line,
                    detail: format!("'{key}' needs a number, got '{what}'"),
                })
            };
            match key {
                "trials" => {
                    trials = Some(value.parse().map_err(|_| ExperimentError::ParseError {
                        line,
                        detail: format!("'trials' needs a nonnegative integer, got '{value}'"),
                    })?)
                }
                "seed" => {
                    seed = Some(value.parse().map_err(|_| ExperimentError::ParseError {
                        line,
                        detail: format!("'seed' needs a nonnegative integer, got '{value}'"),
                    })?)
                }
                "source" => source = Some(Source::parse(value)?),
                "a_deg" => cfg.a_deg = num(value)?,
                "a_prime_deg" => cfg.a_prime_deg = num(value)?,
                "b_deg" => cfg.b_deg = num(value)?,
                "b_prime_deg" => cfg.b_prime_deg = num(value)?,
                "p_alice_base" => cfg.p_alice_base = num(value)?,
                "p_bob_base" => cfg.p_bob_base = num(value)?,
                other => {
                    return Err(ExperimentError::ParseError {
                        line,
                        detail: format!("unknown key '{other}'"),
                    })
                }
            }
        }
        let missing = |what: &str| ExperimentError::ParseError {
            line: 0,
            detail: format!("missing required key '{what}'"),
        };
        cfg.trials = trials.ok_or_else(|| missing("trials"))?;
        cfg.seed = seed.ok_or_else(|| missing("seed"))?;
        cfg.source = source.ok_or_else(|| missing("source"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical text form; `parse(render(c)) == c` for valid configs.
    pub fn render(&self) -> String {
        format!(
            "trials = {}\nseed = {}\nsource = {}\na_deg = {}\na_prime_deg = {}\nb_deg = {}\nb_prime_deg = {}\np_alice_base = {}\np_bob_base = {}\n",
            self.trials,
            self.seed,
            self.source.render(),
            self.a_deg,
            self.a_prime_deg,
            self.b_deg,
            self.b_prime_deg,
            self.p_alice_base,
            self.p_bob_base,
        )
    }

    /// FNV-1a hash of the canonical text form, for provenance lines in
    /// reports: two runs with equal hashes analyzed the same configuration.
    pub fn config_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.render().bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

fn quantum_outcomes(angle: f64, rng: &mut TrialRng) -> (i8, i8) {
    // One uniform draw against the cumulative joint law, cells in the fixed
    // order (+,+), (+,−), (−,+), (−,−).
    let r = rng.next_f64();
    let mut acc = 0.0;
    for (u, v) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
        acc += joint_outcome_probability(u, v, angle);
        if r < acc {
            return (u, v);
        }
    }
    (-1, -1)
}

/// Simulates `cfg.trials` runs. Each trial derives its own random stream
/// from (seed, trial index): first the two setting coins, then whatever
/// randomness the source needs — so trial i's data never depends on how many
/// draws trial j consumed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ExperimentError> {
    cfg.validate()?;
    if let Source::Lhv(name) = &cfg.source {
        if name != "sign" {
            return Err(ExperimentError::UnknownSource { name: format!("lhv:{name}") });
        }
    }
    let settings = cfg.settings();
    let mut out = Vec::with_capacity(cfg.trials.min(1 << 24) as usize);
    for trial in 0..cfg.trials {
        let mut rng = TrialRng::new(cfg.seed, trial);
        let alice_setting =
            if rng.next_bool(cfg.p_alice_base) { AliceSetting::A } else { AliceSetting::APrime };
        let bob_setting =
            if rng.next_bool(cfg.p_bob_base) { BobSetting::B } else { BobSetting::BPrime };
        let alice_angle = match alice_setting {
            AliceSetting::A => settings.a(),
            AliceSetting::APrime => settings.a_prime(),
        };
        let bob_angle = match bob_setting {
            BobSetting::B => settings.b(),
            BobSetting::BPrime => settings.b_prime(),
        };
        let (alice_outcome, bob_outcome) = match &cfg.source {
            Source::Quantum => quantum_outcomes(alice_angle - bob_angle, &mut rng),
            Source::Lhv(_) => {
                let model = VectorSignModel;
                let hidden = model.draw(&mut rng);
                let da = Direction::from_planar_angle(alice_angle);
                let db = Direction::from_planar_angle(bob_angle);
                (model.response_a(&da, &hidden), model.response_b(&db, &hidden))
            }
            Source::Strategy(s) => {
                let a = match alice_setting {
                    AliceSetting::A => s.a,
                    AliceSetting::APrime => s.a_prime,
                };
                let b = match bob_setting {
                    BobSetting::B => s.b,
                    BobSetting::BPrime => s.b_prime,
                };
                (a, b)
            }
        };
        out.push(TrialRecord { trial, alice_setting, bob_setting, alice_outcome, bob_outcome });
    }
    Ok(out)
}

pub const TRIALS_HEADER: &str = "trial,alice_setting,bob_setting,alice_outcome,bob_outcome";

/// Renders records in the exact CSV format of [`read_trials`].
pub fn render_trials(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(24 * (records.len() + 1));
    out.push_str(TRIALS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.trial, r.alice_setting, r.bob_setting, r.alice_outcome, r.bob_outcome
        ));
    }
    out
}

/// Writes the CSV rendering to `path`, returning the byte count.
pub fn write_trials(records: &[TrialRecord], path: &Path) -> Result<u64, ExperimentError> {
    let text = render_trials(records);
    std::fs::write(path, &text)?;
    Ok(text.len() as u64)
}

/// Parses the exact CSV format produced by [`render_trials`].
pub fn parse_trials(text: &str) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut lines = text.split('\n').enumerate();
    match lines.next() {
        Some((_, header)) if header == TRIALS_HEADER => {}
        Some((_, other)) => {
            return Err(ExperimentError::ParseError {
                line: 1,
                detail: format!("expected header '{TRIALS_HEADER}', got '{other}'"),
            })
        }
        None => {
            return Err(ExperimentError::ParseError { line: 1, detail: "empty input".into() })
        }
    }
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.is_empty() {
            continue; // trailing newline
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 5 {
            return Err(ExperimentError::ParseError {
                line,
                detail: format!("expected 5 comma-separated fields, got {}", fields.len()),
            });
        }
        let trial = fields[0].parse::<u64>().map_err(|_| ExperimentError::ParseError {
            line,
            detail: format!("bad trial index '{}'", fields[0]),
        })?;
        let alice_setting = match fields[1] {
            "a" => AliceSetting::A,
            "a'" => AliceSetting::APrime,
            other => {
                return Err(ExperimentError::ParseError {
                    line,
                    detail: format!("alice_setting must be a or a', got '{other}'"),
                })
            }
        };
        let bob_setting = match fields[2] {
            "b" => BobSetting::B,
            "b'" => BobSetting::BPrime,
            other => {
                return Err(ExperimentError::ParseError {
                    line,
                    detail: format!("bob_setting must be b or b', got '{other}'"),
                })
            }
        };
        let outcome = |field: &str| -> Result<i8, ExperimentError> {
            match field {
                "1" => Ok(1),
                "-1" => Ok(-1),
                other => {
                    Err(ExperimentError::BadOutcome { line, value: other.to_string() })
                }
            }
        };
        let alice_outcome = outcome(fields[3])?;
        let bob_outcome = outcome(fields[4])?;
        out.push(TrialRecord { trial, alice_setting, bob_setting, alice_outcome, bob_outcome });
    }
    Ok(out)
}

/// Reads a trial file written by [`write_trials`].
pub fn read_trials(path: &Path) -> Result<Vec<TrialRecord>, ExperimentError> {
    let text = std::fs::read_to_string(path)?;
    parse_trials(&text)
}
