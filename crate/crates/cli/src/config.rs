//! JSON run configuration.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use bcrsp::noise::{default_gamma_grid, NoiseFactor, NoiseKind, OutcomePolicy};
use bcrsp::protocol::{OutcomeTuple, PhaseVector};
use serde::Deserialize;

/// A phase given either in radians or as a pi fraction such as `"2pi/3"`,
/// `"-pi/2"` or `"3*pi/4"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Phase {
    Radians(f64),
    Text(String),
}

impl Phase {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Phase::Radians(x) => Ok(*x),
            Phase::Text(s) => parse_phase(s),
        }
    }
}

pub fn parse_phase(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().with_context(|| format!("bad phase {s:?}"));
    };
    let coef = &t[..pos];
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().with_context(|| format!("bad coefficient in phase {s:?}"))?,
    };
    let rest = &t[pos + 2..];
    let d = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/').with_context(|| format!("bad phase {s:?}"))?;
        d.parse::<f64>().with_context(|| format!("bad denominator in phase {s:?}"))?
    };
    ensure!(d != 0.0, "zero denominator in phase {s:?}");
    Ok(c * PI / d)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub kind: String,
    #[serde(default)]
    pub gamma: Option<f64>,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

/// Configuration document as read from JSON.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    /// Missing lists mean all phases zero.
    #[serde(default)]
    pub alice_phases: Option<Vec<Phase>>,
    #[serde(default)]
    pub bob_phases: Option<Vec<Phase>>,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    /// `[l, n, m, k]`: forced in `run`, conditioned on in `sweep`.
    #[serde(default)]
    pub outcome: Option<[usize; 4]>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default = "yes")]
    pub charlie_consents: bool,
    #[serde(default)]
    pub gamma_grid: Option<Vec<f64>>,
}

/// A checked configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub alice: PhaseVector,
    pub bob: PhaseVector,
    pub noise: Option<(NoiseKind, Option<f64>)>,
    pub outcome: Option<OutcomeTuple>,
    pub seed: u64,
    pub trials: usize,
    pub charlie_consents: bool,
    pub gamma_grid: Option<Vec<f64>>,
}

impl Config {
    pub fn dim(&self) -> usize {
        self.alice.dim()
    }

    pub fn policy(&self) -> OutcomePolicy {
        self.outcome.map_or(OutcomePolicy::Averaged, OutcomePolicy::Conditioned)
    }

    /// Explicit grid, else the single configured gamma, else `0, 0.1, ..., 1`.
    pub fn grid(&self) -> Vec<f64> {
        match (&self.gamma_grid, self.noise.and_then(|n| n.1)) {
            (Some(g), _) => g.clone(),
            (None, Some(g)) => vec![g],
            (None, None) => default_gamma_grid(),
        }
    }
}

fn phases(n: usize, list: &Option<Vec<Phase>>, who: &str) -> Result<PhaseVector> {
    let values = match list {
        None => vec![0.0; n.saturating_sub(1)],
        Some(l) => l.iter().map(Phase::radians).collect::<Result<_>>()?,
    };
    PhaseVector::new(n, values).with_context(|| format!("{who} phases"))
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).context("invalid config JSON")
    }

    /// Reads `path`, or stdin for `None` and `-`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let text = match path {
            Some(p) if p != Path::new("-") => {
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
            }
            _ => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).context("reading config from stdin")?;
                s
            }
        };
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<Config> {
        let n = self.dimension;
        ensure!(n >= 2, "dimension must be at least 2, got {n}");
        ensure!(self.trials >= 1, "trials must be at least 1");
        let alice = phases(n, &self.alice_phases, "alice")?;
        let bob = phases(n, &self.bob_phases, "bob")?;
        let noise = match &self.noise {
            None => None,
            Some(spec) => {
                let kind: NoiseKind = spec.kind.parse()?;
                if let Some(g) = spec.gamma {
                    NoiseFactor::new(g)?;
                }
                Some((kind, spec.gamma))
            }
        };
        let outcome = match self.outcome {
            None => None,
            Some([l, nn, m, k]) => {
                let t = OutcomeTuple::new(l, nn, m, k);
                t.validate(n)?;
                Some(t)
            }
        };
        if let Some(grid) = &self.gamma_grid {
            if grid.is_empty() {
                bail!("gamma_grid is empty");
            }
            for &g in grid {
                NoiseFactor::new(g)?;
            }
        }
        Ok(Config {
            alice,
            bob,
            noise,
            outcome,
            seed: self.seed,
            trials: self.trials,
            charlie_consents: self.charlie_consents,
            gamma_grid: self.gamma_grid.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_fractions() {
        let cases = [
            ("2pi/3", 2.0 * PI / 3.0),
            ("pi", PI),
            ("-pi/2", -PI / 2.0),
            ("3*pi/4", 0.75 * PI),
            (" 0.5 pi ", 0.5 * PI),
            ("1.25", 1.25),
        ];
        for (s, v) in cases {
            assert!((parse_phase(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        for bad in ["pi/0", "2pi/", "x", "pi2", "2pi/3/4"] {
            assert!(parse_phase(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_json(r#"{"dimension": 3}"#).unwrap().validate().unwrap();
        assert_eq!(c.trials, 1);
        assert!(c.charlie_consents);
        assert!(c.alice.is_zero());
        assert_eq!(c.grid().len(), 11);
        assert_eq!(c.policy(), OutcomePolicy::Averaged);
    }

    #[test]
    fn mixed_phase_forms() {
        let c = RunConfig::from_json(r#"{"dimension": 3, "alice_phases": [0.5, "2pi/3"]}"#)
            .unwrap()
            .validate()
            .unwrap();
        assert_eq!(c.alice.phases()[0], 0.5);
        assert!((c.alice.phases()[1] - 2.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_configs_rejected() {
        for doc in [
            r#"{"dimension": 3, "trials": 0}"#,
            r#"{"dimension": 1}"#,
            r#"{"dimension": 3, "alice_phases": [0.1]}"#,
            r#"{"dimension": 3, "noise": {"kind": "amplitude_damping"}}"#,
            r#"{"dimension": 3, "noise": {"kind": "dephasing", "gamma": 1.5}}"#,
            r#"{"dimension": 3, "outcome": [0, 0, 3, 0]}"#,
            r#"{"dimension": 3, "gamma_grid": []}"#,
        ] {
            assert!(RunConfig::from_json(doc).unwrap().validate().is_err(), "{doc}");
        }
        assert!(RunConfig::from_json(r#"{"dimension": 3, "colour": 1}"#).is_err());
    }
}
