use anyhow::Result;
use bcrsp::noise::{kraus_set, noisy_protocol_run, NoiseKind, OutcomePolicy};
use bcrsp::optics::{correction_circuit, ghz_via_cnot, reck_decompose, Element, InterferometerNetwork};
use bcrsp::protocol::{
    build_correction_table, correction_unitary, equatorial_state, ghz_state, joint_probability, run_protocol,
    verify_decomposition, OutcomeSelection, OutcomeTuple, PhaseVector,
};
use bcrsp::qudit::{fidelity, Operator};
use bcrsp::session::{Session, SessionStatus};
use bcrsp::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{csv_string, json_string, Format, Report};

/// One invariant: the worst value seen and the bound it must stay under.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
}

fn check(check: &'static str, value: f64, tolerance: f64) -> CheckResult {
    CheckResult { check, passed: value <= tolerance, value, tolerance }
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Result<Operator> {
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n);
    while rows.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for r in &rows {
            let p: C64 = r.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= p * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    Ok(Operator::from_rows(rows)?)
}

fn recovery(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        for _ in 0..3 {
            let a = PhaseVector::random(n, rng)?;
            let b = PhaseVector::random(n, rng)?;
            for t in OutcomeTuple::all(n) {
                let r = run_protocol(&a, &b, OutcomeSelection::Forced(t))?;
                worst = worst.max(1.0 - r.alice_final.overlap(&equatorial_state(&b))?);
                worst = worst.max(1.0 - r.bob_final.overlap(&equatorial_state(&a))?);
            }
        }
    }
    Ok(worst)
}

fn uniformity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let a = PhaseVector::random(n, rng)?;
        let b = PhaseVector::random(n, rng)?;
        let expect = 1.0 / (n as f64).powi(4);
        for t in OutcomeTuple::all(n) {
            worst = worst.max((joint_probability(&a, &b, t)? - expect).abs());
        }
    }
    Ok(worst)
}

fn decomposition(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=4 {
        let a = PhaseVector::random(n, rng)?;
        let b = PhaseVector::random(n, rng)?;
        worst = worst.max(verify_decomposition(&a, &b)?.max_deviation);
    }
    Ok(worst)
}

fn table_rule() -> Result<f64> {
    let mut bad = 0;
    for n in 2..=4 {
        for e in build_correction_table(n)? {
            let o = e.outcome;
            bad += usize::from(e.rule.a1_index != (o.m + o.n) % n || e.rule.b2_index != (o.k + o.l) % n);
        }
    }
    Ok(bad as f64)
}

fn kraus_completeness() -> Result<f64> {
    let mut worst = 0.0f64;
    for kind in NoiseKind::ALL {
        for n in 2..=5 {
            for i in 0..20 {
                worst = worst.max(kraus_set(kind, i as f64 / 19.0, n)?.completeness_deviation());
            }
        }
    }
    Ok(worst)
}

fn noiseless_channels(rng: &mut ChaCha8Rng) -> Result<f64> {
    let a = PhaseVector::random(3, rng)?;
    let b = PhaseVector::random(3, rng)?;
    let mut worst = 0.0f64;
    for kind in NoiseKind::ALL {
        let r = noisy_protocol_run(&a, &b, kind, 0.0, OutcomePolicy::Averaged)?;
        worst = worst.max((1.0 - r.fidelity_a1).abs()).max((1.0 - r.fidelity_b2).abs());
    }
    Ok(worst)
}

fn reck(rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [2, 3, 4, 8] {
        for _ in 0..20 {
            let u = random_unitary(n, rng)?;
            worst = worst.max(reck_decompose(&u)?.reconstruction_error(&u));
        }
    }
    Ok(worst)
}

fn ghz() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=16 {
        let a = ghz_via_cnot(n)?;
        let b = ghz_state(n)?;
        let d = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}

fn corrections() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 2..=8 {
        for k in 0..n {
            let ps = correction_circuit(k, n)?.into_iter().map(Element::PhaseShifter).collect();
            let net = InterferometerNetwork::new(n, ps)?;
            worst = worst.max(net.matrix().max_abs_diff(&correction_unitary(k, n)?));
        }
    }
    Ok(worst)
}

/// Counts transcript mistakes; also folds in the distance of the abandoned
/// A1 fidelity from `1/sqrt(N)`.
fn sessions(seed: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = 3;
    let a = PhaseVector::random(n, rng)?;
    let b = PhaseVector::random(n, rng)?;
    let mut full = Session::new(a.clone(), b.clone(), n, true, seed)?;
    let mut miss = f64::from(u8::from(full.run_to_end()? != SessionStatus::Completed));
    miss += (full.messages().len() as f64 - 8.0).abs();
    miss += f64::from(u8::from(!full.messages().windows(2).all(|w| w[0].step <= w[1].step)));
    let mut cut = Session::new(a, b.clone(), n, false, seed)?;
    miss += f64::from(u8::from(cut.run_to_end()? != SessionStatus::Aborted));
    miss += (cut.messages().len() as f64 - 4.0).abs();
    if let Some((a1, _)) = cut.abandoned_states() {
        miss += (fidelity(&equatorial_state(&b), a1)? - 1.0 / (n as f64).sqrt()).abs();
    }
    Ok(miss)
}

/// Every invariant, seeded for reproducibility.
pub fn verify_suite(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        check("recovery_exhaustive_n2_4", recovery(&mut rng)?, 1e-10),
        check("outcome_uniformity", uniformity(&mut rng)?, 1e-10),
        check("decomposition_identity", decomposition(&mut rng)?, 1e-10),
        check("correction_table_rule", table_rule()?, 0.0),
        check("kraus_completeness", kraus_completeness()?, 1e-10),
        check("noiseless_channels", noiseless_channels(&mut rng)?, 1e-12),
        check("reck_round_trip", reck(&mut rng)?, 1e-10),
        check("ghz_from_cnot", ghz()?, 0.0),
        check("correction_circuits", corrections()?, 1e-12),
        check("session_transcripts", sessions(seed, &mut rng)?, 1e-10),
    ])
}

pub(crate) fn cmd_verify(seed: u64, format: Format) -> Result<Report> {
    let results = verify_suite(seed)?;
    let ok = results.iter().all(|r| r.passed);
    let body = match format {
        Format::Csv => csv_string(&results)?,
        Format::Json => json_string(&results)?,
    };
    Ok(Report { body, ok })
}
