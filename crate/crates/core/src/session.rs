//! The three parties as explicit state machines exchanging classical
//! messages over an ordered, lossless, in-process channel.
//!
//! A session runs the same measurement code and the same random draws as
//! [`run_protocol`](crate::protocol::run_protocol) with a sampled outcome, so
//! for equal seeds the final states agree bit for bit.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::{
    finish, fourier_basis, measure_site, sender_basis, Choice, CorrectionRule, OutcomeTuple, PhaseVector,
    ProtocolError, ProtocolResult, Register, Site,
};
use crate::qudit::BranchEnsemble;

pub const TRANSCRIPT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartyId {
    Alice,
    Bob,
    Charlie,
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MessageKind {
    Outcome,
}

/// One classical announcement. Field order is the serialised order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub from: PartyId,
    pub to: PartyId,
    pub step: u32,
    pub kind: MessageKind,
    /// Measured site and basis, e.g. `A2:tau`.
    pub basis_label: String,
    pub outcome_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranscriptStatus {
    Completed,
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub version: u32,
    pub dimension: usize,
    pub status: TranscriptStatus,
    pub messages: Vec<ClassicalMessage>,
}

impl Transcript {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, SessionError> {
        let t: Transcript = serde_json::from_str(s).map_err(|e| SessionError::Parse(e.to_string()))?;
        if t.version != TRANSCRIPT_VERSION {
            return Err(SessionError::Parse(format!("unsupported transcript version {}", t.version)));
        }
        Ok(t)
    }

    /// Number of outcome announcements.
    pub fn announcements(&self) -> usize {
        self.messages.iter().filter(|m| m.kind == MessageKind::Outcome).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionStatus {
    /// Channel shared, nobody has measured.
    Ready,
    /// Alice and Bob have measured and announced.
    SendersMeasured,
    /// Charlie has measured and announced.
    ControllerMeasured,
    Completed,
    Aborted,
}

impl SessionStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, SessionStatus::Completed | SessionStatus::Aborted)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SessionError {
    #[error("session already finished ({0:?})")]
    Terminal(SessionStatus),
    #[error("session has not finished yet ({0:?})")]
    NotTerminal(SessionStatus),
    #[error("invalid transcript: {0}")]
    Parse(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// What one party has seen so far.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartyView {
    /// Own measurement outcomes, keyed by site label.
    pub measured: Vec<(Site, usize)>,
    pub inbox: Vec<ClassicalMessage>,
    /// Correction index applied at Step 3.
    pub correction: Option<usize>,
}

impl PartyView {
    fn own(&self, site: Site) -> Option<usize> {
        self.measured.iter().find(|(s, _)| *s == site).map(|&(_, o)| o)
    }

    fn heard(&self, label: &str) -> Option<usize> {
        self.inbox.iter().find(|m| m.basis_label == label).map(|m| m.outcome_index)
    }
}

const ALICE_LABEL: &str = "A2:tau";
const BOB_LABEL: &str = "B1:tau_tilde";
const C1_LABEL: &str = "C1:tau_bar";
const C2_LABEL: &str = "C2:tau_bar";

#[derive(Debug, Clone)]
pub struct Session {
    alice_phases: PhaseVector,
    bob_phases: PhaseVector,
    dim: usize,
    charlie_consents: bool,
    rng: ChaCha8Rng,
    register: Option<Register>,
    status: SessionStatus,
    alice: PartyView,
    bob: PartyView,
    charlie: PartyView,
    messages: Vec<ClassicalMessage>,
    probability: f64,
    result: Option<ProtocolResult>,
    residual: Option<(BranchEnsemble, BranchEnsemble)>,
}

impl Session {
    /// Shares the two GHZ states; every party starts in Step 1.
    pub fn new(
        alice: PhaseVector,
        bob: PhaseVector,
        n: usize,
        charlie_consents: bool,
        seed: u64,
    ) -> Result<Self, SessionError> {
        for p in [&alice, &bob] {
            if p.dim() != n {
                return Err(ProtocolError::DimensionMismatch { alice: alice.dim(), bob: bob.dim() }.into());
            }
        }
        let register = Register::channel(n)?;
        Ok(Self {
            alice_phases: alice,
            bob_phases: bob,
            dim: n,
            charlie_consents,
            rng: ChaCha8Rng::seed_from_u64(seed),
            register: Some(register),
            status: SessionStatus::Ready,
            alice: PartyView::default(),
            bob: PartyView::default(),
            charlie: PartyView::default(),
            messages: Vec::new(),
            probability: 1.0,
            result: None,
            residual: None,
        })
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn messages(&self) -> &[ClassicalMessage] {
        &self.messages
    }

    pub fn party(&self, id: PartyId) -> &PartyView {
        match id {
            PartyId::Alice => &self.alice,
            PartyId::Bob => &self.bob,
            PartyId::Charlie => &self.charlie,
        }
    }

    /// Final result of a completed session.
    pub fn result(&self) -> Option<&ProtocolResult> {
        self.result.as_ref()
    }

    /// Reduced states of A1 and B2 at the moment an aborted session was
    /// abandoned, with Charlie's particles traced out.
    pub fn abandoned_states(&self) -> Option<&(BranchEnsemble, BranchEnsemble)> {
        self.residual.as_ref()
    }

    fn view_mut(&mut self, id: PartyId) -> &mut PartyView {
        match id {
            PartyId::Alice => &mut self.alice,
            PartyId::Bob => &mut self.bob,
            PartyId::Charlie => &mut self.charlie,
        }
    }

    fn send(&mut self, from: PartyId, to: PartyId, step: u32, label: &str, outcome_index: usize) {
        let msg = ClassicalMessage {
            from,
            to,
            step,
            kind: MessageKind::Outcome,
            basis_label: label.to_string(),
            outcome_index,
        };
        self.view_mut(to).inbox.push(msg.clone());
        self.messages.push(msg);
    }

    fn measure(&mut self, site: Site, basis: &crate::qudit::MeasurementBasis) -> Result<usize, SessionError> {
        let reg = self.register.take().expect("register present before Step 3");
        let (o, p, rest) = measure_site(&reg, site, basis, Choice::Sample(&mut self.rng))?;
        self.probability *= p;
        self.register = Some(rest);
        Ok(o)
    }

    /// Executes the next step and returns the new status.
    pub fn advance(&mut self) -> Result<SessionStatus, SessionError> {
        match self.status {
            SessionStatus::Ready => self.step_one()?,
            SessionStatus::SendersMeasured => self.step_two()?,
            SessionStatus::ControllerMeasured => self.step_three()?,
            s @ (SessionStatus::Completed | SessionStatus::Aborted) => return Err(SessionError::Terminal(s)),
        }
        Ok(self.status)
    }

    /// Advances until the session is terminal.
    pub fn run_to_end(&mut self) -> Result<SessionStatus, SessionError> {
        while !self.status.is_terminal() {
            self.advance()?;
        }
        Ok(self.status)
    }

    /// Alice measures A2 and Bob measures B1; both announce to the other two.
    fn step_one(&mut self) -> Result<(), SessionError> {
        let l = self.measure(Site::A2, &sender_basis(&self.alice_phases))?;
        self.alice.measured.push((Site::A2, l));
        let n = self.measure(Site::B1, &sender_basis(&self.bob_phases))?;
        self.bob.measured.push((Site::B1, n));
        self.send(PartyId::Alice, PartyId::Bob, 1, ALICE_LABEL, l);
        self.send(PartyId::Alice, PartyId::Charlie, 1, ALICE_LABEL, l);
        self.send(PartyId::Bob, PartyId::Alice, 1, BOB_LABEL, n);
        self.send(PartyId::Bob, PartyId::Charlie, 1, BOB_LABEL, n);
        self.status = SessionStatus::SendersMeasured;
        Ok(())
    }

    /// Charlie either measures C1 and C2 and announces both results to both
    /// senders, or declines and the session is abandoned.
    fn step_two(&mut self) -> Result<(), SessionError> {
        if !self.charlie_consents {
            let reg = self.register.take().expect("register present before Step 3");
            self.residual = Some((reg.reduced(Site::A1)?, reg.reduced(Site::B2)?));
            self.status = SessionStatus::Aborted;
            return Ok(());
        }
        let fourier = fourier_basis(self.dim)?;
        let m = self.measure(Site::C1, &fourier)?;
        let k = self.measure(Site::C2, &fourier)?;
        self.charlie.measured.extend([(Site::C1, m), (Site::C2, k)]);
        for to in [PartyId::Alice, PartyId::Bob] {
            self.send(PartyId::Charlie, to, 2, C1_LABEL, m);
            self.send(PartyId::Charlie, to, 2, C2_LABEL, k);
        }
        self.status = SessionStatus::ControllerMeasured;
        Ok(())
    }

    /// Alice corrects A1 and Bob corrects B2 using only what they measured
    /// and received.
    fn step_three(&mut self) -> Result<(), SessionError> {
        let missing = |site| ProtocolError::MissingSite(site);
        let l = self.alice.own(Site::A2).ok_or(missing(Site::A2))?;
        let n = self.alice.heard(BOB_LABEL).ok_or(missing(Site::B1))?;
        let m = self.alice.heard(C1_LABEL).ok_or(missing(Site::C1))?;
        let k = self.bob.heard(C2_LABEL).ok_or(missing(Site::C2))?;
        let outcome = OutcomeTuple::new(l, n, m, k);
        let reg = self.register.take().expect("register present before Step 3");
        let result = finish(reg, &self.alice_phases, &self.bob_phases, outcome, self.probability)?;
        let rule: CorrectionRule = result.corrections;
        self.alice.correction = Some(rule.a1_index);
        self.bob.correction = Some(rule.b2_index);
        self.result = Some(result);
        self.status = SessionStatus::Completed;
        Ok(())
    }

    pub fn export_transcript(&self) -> Result<Transcript, SessionError> {
        let status = match self.status {
            SessionStatus::Completed => TranscriptStatus::Completed,
            SessionStatus::Aborted => TranscriptStatus::Aborted,
            s => return Err(SessionError::NotTerminal(s)),
        };
        Ok(Transcript {
            version: TRANSCRIPT_VERSION,
            dimension: self.dim,
            status,
            messages: self.messages.clone(),
        })
    }
}
