//! Two-party session engine shared by all three protocols.
//!
//! A session is a strictly ordered exchange of classical [`Message`]s over a
//! [`Channel`]. Quantum states travel alongside as simulator-internal values;
//! a receiving strategy only ever learns about them through the measurement
//! operations its protocol module exposes. Each party sees exactly the
//! messages addressed to it.

mod strategy;
mod transcript;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::BitString;
use crate::bitwise::{self, SecurityParams};
use crate::codebook::{self, CodebookParams};
use crate::cointoss::{self, CoinTossParams};
use crate::{Error, Result};

pub use crate::rng::{derive_seed, rng_stream, Stream};
pub use strategy::{registered_strategies, StrategyDescriptor};
pub use transcript::{Transcript, TRANSCRIPT_FORMAT, TRANSCRIPT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    BitwiseCommit,
    CodebookCommit,
    CoinToss,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [
        Protocol::BitwiseCommit,
        Protocol::CodebookCommit,
        Protocol::CoinToss,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::BitwiseCommit => "bitwise_commit",
            Protocol::CodebookCommit => "codebook_commit",
            Protocol::CoinToss => "coin_toss",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bitwise_commit" | "bitwise" => Ok(Protocol::BitwiseCommit),
            "codebook_commit" | "codebook" => Ok(Protocol::CodebookCommit),
            "coin_toss" | "cointoss" => Ok(Protocol::CoinToss),
            other => Err(Error::domain(format!("unknown protocol `{other}`"))),
        }
    }
}

/// Terminal outcome of a session. The serialized names are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected,
    Completed,
    CheatDetected,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
            Verdict::Completed => "completed",
            Verdict::CheatDetected => "cheat_detected",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classical message contents, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// Bit-wise commitment: `count` qubits handed over.
    CommitQubits { count: usize },
    /// Codebook commitment: one state of dimension `dim` from codebook `codebook`.
    CommitState { dim: usize, codebook: String },
    /// Bit-wise unveiling.
    UnveilBits { claimed: BitString },
    /// Codebook unveiling: the string and its index.
    UnveilIndex { claimed: BitString, index: usize },
    /// Receiver's decision on an unveiling.
    UnveilVerdict {
        accepted: bool,
        failing_index: Option<usize>,
    },
    /// Coin toss: one half of each of `batches × pairs` pairs handed over.
    SendHalves { batches: usize, pairs: usize },
    /// Coin toss: batches to be tested, and the one kept.
    ChooseTests { tested: Vec<usize>, kept: usize },
    /// Coin toss: partner particles of the tested batches.
    SendPartners { batches: Vec<usize> },
    /// Coin toss: outcome of the singlet tests.
    TestResult {
        passed: bool,
        failed_batch: Option<usize>,
    },
    /// Coin toss: the sender's σ_z outcomes on the kept batch.
    AnnounceOutcome { bits: BitString },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::CommitQubits { .. } => "commit_qubits",
            Payload::CommitState { .. } => "commit_state",
            Payload::UnveilBits { .. } => "unveil_bits",
            Payload::UnveilIndex { .. } => "unveil_index",
            Payload::UnveilVerdict { .. } => "unveil_verdict",
            Payload::SendHalves { .. } => "send_halves",
            Payload::ChooseTests { .. } => "choose_tests",
            Payload::SendPartners { .. } => "send_partners",
            Payload::TestResult { .. } => "test_result",
            Payload::AnnounceOutcome { .. } => "announce_outcome",
        }
    }

    /// Whether this kind is part of `protocol`'s grammar.
    pub fn belongs_to(&self, protocol: Protocol) -> bool {
        match self {
            Payload::CommitQubits { .. } | Payload::UnveilBits { .. } => {
                protocol == Protocol::BitwiseCommit
            }
            Payload::CommitState { .. } | Payload::UnveilIndex { .. } => {
                protocol == Protocol::CodebookCommit
            }
            Payload::UnveilVerdict { .. } => {
                matches!(protocol, Protocol::BitwiseCommit | Protocol::CodebookCommit)
            }
            Payload::SendHalves { .. }
            | Payload::ChooseTests { .. }
            | Payload::SendPartners { .. }
            | Payload::TestResult { .. }
            | Payload::AnnounceOutcome { .. } => protocol == Protocol::CoinToss,
        }
    }

    /// Unveiling follows the committer's own commit message: nothing is
    /// exchanged in between.
    pub fn allows_consecutive(&self) -> bool {
        matches!(
            self,
            Payload::UnveilBits { .. } | Payload::UnveilIndex { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub seq: u64,
    pub sender: Party,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Message {
    pub fn recipient(&self) -> Party {
        self.sender.other()
    }
}

/// Checks the message grammar: increasing `seq`, alternating senders, and
/// kinds drawn from `protocol`.
pub fn check_message_order(protocol: Protocol, messages: &[Message]) -> Result<()> {
    let mut prev: Option<&Message> = None;
    for msg in messages {
        if !msg.payload.belongs_to(protocol) {
            return Err(Error::ProtocolViolation(format!(
                "message kind `{}` is not part of {protocol}",
                msg.payload.kind()
            )));
        }
        if let Some(p) = prev {
            if msg.seq <= p.seq {
                return Err(Error::ProtocolViolation(format!(
                    "sequence number {} does not follow {}",
                    msg.seq, p.seq
                )));
            }
            if msg.sender == p.sender && !msg.payload.allows_consecutive() {
                return Err(Error::ProtocolViolation(format!(
                    "{} sent `{}` twice in a row",
                    msg.sender,
                    msg.payload.kind()
                )));
            }
        }
        prev = Some(msg);
    }
    Ok(())
}

/// Observer hook: called with `(recipient, message)` for every delivery.
pub type Observer<'a> = dyn FnMut(Party, &Message) + 'a;

/// Ordered classical channel between the two parties.
pub struct Channel<'c, 'o> {
    protocol: Protocol,
    messages: Vec<Message>,
    observer: &'c mut Observer<'o>,
}

impl<'c, 'o> Channel<'c, 'o> {
    pub fn new(protocol: Protocol, observer: &'c mut Observer<'o>) -> Self {
        Self {
            protocol,
            messages: Vec::new(),
            observer,
        }
    }

    /// Appends a message, enforcing the grammar, and delivers it.
    pub fn send(&mut self, sender: Party, payload: Payload) -> Result<()> {
        let msg = Message {
            seq: self.messages.len() as u64 + 1,
            sender,
            payload,
        };
        let start = self.messages.len().saturating_sub(1);
        check_message_order(
            self.protocol,
            &[&self.messages[start..], std::slice::from_ref(&msg)].concat(),
        )?;
        (self.observer)(msg.recipient(), &msg);
        self.messages.push(msg);
        Ok(())
    }

    /// Most recent message addressed to `party`.
    pub fn last_received(&self, party: Party) -> Result<&Payload> {
        self.messages
            .iter()
            .rev()
            .find(|m| m.recipient() == party)
            .map(|m| &m.payload)
            .ok_or_else(|| Error::ProtocolViolation(format!("{party} has received nothing yet")))
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn into_messages(self) -> Vec<Message> {
        self.messages
    }
}

pub(crate) fn unexpected(party: Party, payload: &Payload, wanted: &str) -> Error {
    Error::ProtocolViolation(format!(
        "{party} expected `{wanted}` but received `{}`",
        payload.kind()
    ))
}

/// Parameters of one session, tagged by protocol.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolParams {
    BitwiseCommit(SecurityParams),
    CodebookCommit(CodebookParams),
    CoinToss(CoinTossParams),
}

impl ProtocolParams {
    pub fn protocol(&self) -> Protocol {
        match self {
            ProtocolParams::BitwiseCommit(_) => Protocol::BitwiseCommit,
            ProtocolParams::CodebookCommit(_) => Protocol::CodebookCommit,
            ProtocolParams::CoinToss(_) => Protocol::CoinToss,
        }
    }

    pub(crate) fn to_value(&self) -> serde_json::Value {
        let v = match self {
            ProtocolParams::BitwiseCommit(p) => serde_json::to_value(p),
            ProtocolParams::CodebookCommit(p) => serde_json::to_value(p),
            ProtocolParams::CoinToss(p) => serde_json::to_value(p),
        };
        v.expect("parameter structs serialize")
    }

    pub(crate) fn from_value(protocol: Protocol, value: serde_json::Value) -> Result<Self> {
        let err = |e: serde_json::Error| Error::Deserialize(format!("params: {e}"));
        Ok(match protocol {
            Protocol::BitwiseCommit => {
                ProtocolParams::BitwiseCommit(serde_json::from_value(value).map_err(err)?)
            }
            Protocol::CodebookCommit => {
                ProtocolParams::CodebookCommit(serde_json::from_value(value).map_err(err)?)
            }
            Protocol::CoinToss => {
                ProtocolParams::CoinToss(serde_json::from_value(value).map_err(err)?)
            }
        })
    }
}

/// Named numeric observations recorded by the engine at the end of a session.
pub type SessionStats = BTreeMap<String, f64>;

/// Runs one session to a terminal verdict.
pub fn run_session(
    params: &ProtocolParams,
    alice: &StrategyDescriptor,
    bob: &StrategyDescriptor,
    seed: u64,
) -> Result<Transcript> {
    run_session_observed(params, alice, bob, seed, &mut |_, _| {})
}

/// [`run_session`], reporting every delivery to `observer`.
pub fn run_session_observed(
    params: &ProtocolParams,
    alice: &StrategyDescriptor,
    bob: &StrategyDescriptor,
    seed: u64,
    observer: &mut Observer<'_>,
) -> Result<Transcript> {
    for (d, party) in [(alice, Party::Alice), (bob, Party::Bob)] {
        if d.party != party {
            return Err(Error::InvalidStrategy(format!(
                "descriptor for {} used as {party}",
                d.party
            )));
        }
    }
    match params {
        ProtocolParams::BitwiseCommit(p) => {
            let a = bitwise::AliceStrategy::from_descriptor(alice)?;
            let b = bitwise::BobStrategy::from_descriptor(bob)?;
            bitwise::run_session(p, &a, &b, seed, observer)
        }
        ProtocolParams::CodebookCommit(p) => {
            let a = codebook::AliceStrategy::from_descriptor(alice)?;
            let b = codebook::BobStrategy::from_descriptor(bob)?;
            codebook::run_session(p, &a, &b, seed, observer)
        }
        ProtocolParams::CoinToss(p) => {
            let a = cointoss::AliceStrategy::from_descriptor(alice)?;
            let b = cointoss::BobStrategy::from_descriptor(bob)?;
            Ok(cointoss::run_coin_toss_observed(p, &a, &b, seed, observer)?.transcript)
        }
    }
}
