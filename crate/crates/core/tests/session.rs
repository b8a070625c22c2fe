use bcrsp::protocol::{
    equatorial_state, fourier_basis, run_protocol, sender_basis, OutcomeSelection, PhaseVector, Register, Site,
};
use bcrsp::qudit::fidelity;
use bcrsp::session::{
    PartyId, Session, SessionError, SessionStatus, Transcript, TranscriptStatus, TRANSCRIPT_VERSION,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn phases(n: usize, seed: u64) -> (PhaseVector, PhaseVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (PhaseVector::random(n, &mut rng).unwrap(), PhaseVector::random(n, &mut rng).unwrap())
}

const GOLDEN: &str = r#"{
  "version": 1,
  "dimension": 3,
  "status": "completed",
  "messages": [
    {
      "from": "Alice",
      "to": "Bob",
      "step": 1,
      "kind": "outcome",
      "basis_label": "A2:tau",
      "outcome_index": 0
    },
    {
      "from": "Alice",
      "to": "Charlie",
      "step": 1,
      "kind": "outcome",
      "basis_label": "A2:tau",
      "outcome_index": 0
    },
    {
      "from": "Bob",
      "to": "Alice",
      "step": 1,
      "kind": "outcome",
      "basis_label": "B1:tau_tilde",
      "outcome_index": 2
    },
    {
      "from": "Bob",
      "to": "Charlie",
      "step": 1,
      "kind": "outcome",
      "basis_label": "B1:tau_tilde",
      "outcome_index": 2
    },
    {
      "from": "Charlie",
      "to": "Alice",
      "step": 2,
      "kind": "outcome",
      "basis_label": "C1:tau_bar",
      "outcome_index": 2
    },
    {
      "from": "Charlie",
      "to": "Alice",
      "step": 2,
      "kind": "outcome",
      "basis_label": "C2:tau_bar",
      "outcome_index": 2
    },
    {
      "from": "Charlie",
      "to": "Bob",
      "step": 2,
      "kind": "outcome",
      "basis_label": "C1:tau_bar",
      "outcome_index": 2
    },
    {
      "from": "Charlie",
      "to": "Bob",
      "step": 2,
      "kind": "outcome",
      "basis_label": "C2:tau_bar",
      "outcome_index": 2
    }
  ]
}"#;

#[test]
fn golden_transcript() {
    let (a, b) = phases(3, 9);
    let mut s = Session::new(a, b, 3, true, 2024).unwrap();
    s.run_to_end().unwrap();
    assert_eq!(s.export_transcript().unwrap().to_json(), GOLDEN);
}

#[test]
fn transcript_round_trips() {
    let (a, b) = phases(4, 1);
    let mut s = Session::new(a, b, 4, true, 8).unwrap();
    s.run_to_end().unwrap();
    let t = s.export_transcript().unwrap();
    let back = Transcript::from_json(&t.to_json()).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.version, TRANSCRIPT_VERSION);
    assert_eq!(back.announcements(), 8);

    let bumped = t.to_json().replacen("\"version\": 1", "\"version\": 2", 1);
    assert!(Transcript::from_json(&bumped).is_err());
    assert!(matches!(Transcript::from_json("{"), Err(SessionError::Parse(_))));
}

#[test]
fn export_requires_terminal_state() {
    let (a, b) = phases(2, 3);
    let mut s = Session::new(a, b, 2, true, 0).unwrap();
    s.advance().unwrap();
    assert!(matches!(s.export_transcript(), Err(SessionError::NotTerminal(SessionStatus::SendersMeasured))));
}

#[test]
fn aborted_session_leaves_mixed_receivers() {
    let n = 3;
    let (a, b) = phases(n, 5);
    let mut s = Session::new(a.clone(), b.clone(), n, false, 11).unwrap();
    assert_eq!(s.run_to_end().unwrap(), SessionStatus::Aborted);
    assert!(s.result().is_none());
    assert_eq!(s.messages().len(), 4);
    assert!(s.messages().iter().all(|m| m.step == 1));
    let t = s.export_transcript().unwrap();
    assert_eq!(t.status, TranscriptStatus::Aborted);
    let (a1, b2) = s.abandoned_states().unwrap();
    let bound = 1.0 / (n as f64).sqrt();
    assert!((fidelity(&equatorial_state(&b), a1).unwrap() - bound).abs() < 1e-10);
    assert!((fidelity(&equatorial_state(&a), b2).unwrap() - bound).abs() < 1e-10);
    assert!(s.party(PartyId::Alice).correction.is_none());
}

#[test]
fn parties_only_know_what_they_were_told() {
    let (a, b) = phases(3, 6);
    let mut s = Session::new(a, b, 3, true, 4).unwrap();
    s.run_to_end().unwrap();
    let alice = s.party(PartyId::Alice);
    let bob = s.party(PartyId::Bob);
    let charlie = s.party(PartyId::Charlie);
    assert_eq!(alice.measured.iter().map(|x| x.0).collect::<Vec<_>>(), [Site::A2]);
    assert_eq!(bob.measured.iter().map(|x| x.0).collect::<Vec<_>>(), [Site::B1]);
    assert_eq!(charlie.measured.iter().map(|x| x.0).collect::<Vec<_>>(), [Site::C1, Site::C2]);
    assert_eq!(alice.inbox.len(), 3);
    assert_eq!(bob.inbox.len(), 3);
    assert_eq!(charlie.inbox.len(), 2);
    assert!(alice.inbox.iter().all(|m| m.to == PartyId::Alice));
    let r = s.result().unwrap();
    assert_eq!(alice.correction, Some(r.corrections.a1_index));
    assert_eq!(bob.correction, Some(r.corrections.b2_index));
}

/// Bob measuring B1 before Alice measures A2 yields the same branch.
#[test]
fn sender_order_is_irrelevant() {
    let n = 3;
    let (a, b) = phases(n, 2);
    let sa = sender_basis(&a);
    let sb = sender_basis(&b);
    let f = fourier_basis(n).unwrap();
    for l in 0..n {
        for nn in 0..n {
            let reg = Register::channel(n).unwrap();
            let (p1, r1) = reg.project(Site::A2, &sa.vectors()[l]).unwrap();
            let (p2, r1) = r1.unwrap().project(Site::B1, &sb.vectors()[nn]).unwrap();
            let (q1, r2) = reg.project(Site::B1, &sb.vectors()[nn]).unwrap();
            let (q2, r2) = r2.unwrap().project(Site::A2, &sa.vectors()[l]).unwrap();
            assert!((p1 * p2 - q1 * q2).abs() < 1e-14);
            let (r1, r2) = (r1.unwrap(), r2.unwrap());
            assert_eq!(r1.sites(), r2.sites());
            assert!(r1.state().phase_aligned_deviation(r2.state()) < 1e-12);
            let (_, c1) = r1.project(Site::C1, &f.vectors()[0]).unwrap();
            let (_, c2) = r2.project(Site::C1, &f.vectors()[0]).unwrap();
            assert!(c1.unwrap().state().phase_aligned_deviation(c2.unwrap().state()) < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn session_matches_sampled_run(seed in any::<u64>(), n in 2usize..6) {
        let (a, b) = phases(n, seed ^ 0x5eed);
        let mut s = Session::new(a.clone(), b.clone(), n, true, seed).unwrap();
        prop_assert_eq!(s.run_to_end().unwrap(), SessionStatus::Completed);
        let direct = run_protocol(&a, &b, OutcomeSelection::Sampled { seed }).unwrap();
        prop_assert_eq!(s.result().unwrap(), &direct);
    }

    #[test]
    fn steps_never_decrease(seed in any::<u64>(), consent in any::<bool>()) {
        let (a, b) = phases(3, seed);
        let mut s = Session::new(a, b, 3, consent, seed).unwrap();
        s.run_to_end().unwrap();
        let steps: Vec<u32> = s.messages().iter().map(|m| m.step).collect();
        prop_assert!(steps.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(steps.len(), if consent { 8 } else { 4 });
    }
}
