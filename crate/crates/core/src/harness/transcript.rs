//! JSON-lines transcript format.
//!
//! ```text
//! {"type":"header","format":"mistrust-transcript","version":1,"protocol":…,"seed":…,"params":{…},"alice":{…},"bob":{…}}
//! {"type":"message","seq":1,"sender":"alice","kind":…,…}
//! …
//! {"type":"footer","verdict":…,"messages":…,"stats":{…}}
//! ```
//!
//! Floats carry 17 significant digits, so a read-back transcript compares
//! equal to the original and re-serializes to identical bytes.

use serde::{Deserialize, Serialize};

use super::{
    check_message_order, Message, Party, Protocol, ProtocolParams, SessionStats,
    StrategyDescriptor, Verdict,
};
use crate::fmt::to_json;
use crate::{Error, Result};

pub const TRANSCRIPT_FORMAT: &str = "mistrust-transcript";
pub const TRANSCRIPT_VERSION: u32 = 1;

/// Complete, immutable record of one session.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub params: ProtocolParams,
    pub seed: u64,
    pub alice: StrategyDescriptor,
    pub bob: StrategyDescriptor,
    pub messages: Vec<Message>,
    pub verdict: Verdict,
    pub stats: SessionStats,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    protocol: Protocol,
    seed: u64,
    params: serde_json::Value,
    alice: StrategyDescriptor,
    bob: StrategyDescriptor,
}

#[derive(Serialize, Deserialize)]
struct Footer {
    verdict: Verdict,
    messages: usize,
    stats: SessionStats,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line {
    Header(Header),
    Message(Message),
    Footer(Footer),
}

impl Transcript {
    pub fn protocol(&self) -> Protocol {
        self.params.protocol()
    }

    /// Message grammar and descriptor sanity.
    pub fn validate(&self) -> Result<()> {
        if self.alice.party != Party::Alice || self.bob.party != Party::Bob {
            return Err(Error::ProtocolViolation(
                "strategy descriptors assigned to the wrong parties".into(),
            ));
        }
        check_message_order(self.protocol(), &self.messages)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &Line| {
            out.push_str(&to_json(line).expect("transcript lines serialize"));
            out.push('\n');
        };
        push(&Line::Header(Header {
            format: TRANSCRIPT_FORMAT.to_owned(),
            version: TRANSCRIPT_VERSION,
            protocol: self.protocol(),
            seed: self.seed,
            params: self.params.to_value(),
            alice: self.alice.clone(),
            bob: self.bob.clone(),
        }));
        for m in &self.messages {
            push(&Line::Message(m.clone()));
        }
        push(&Line::Footer(Footer {
            verdict: self.verdict,
            messages: self.messages.len(),
            stats: self.stats.clone(),
        }));
        out
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)
            .map_err(|e| Error::Deserialize(format!("transcript is not UTF-8: {e}")))?;
        Self::from_jsonl(text)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let parse = |(no, line): (usize, &str)| -> Result<Line> {
            serde_json::from_str(line)
                .map_err(|e| Error::Deserialize(format!("line {}: {e}", no + 1)))
        };

        let header = match lines.next().map(parse).transpose()? {
            Some(Line::Header(h)) => h,
            Some(_) => return Err(Error::Deserialize("first line is not a header".into())),
            None => return Err(Error::Deserialize("empty transcript".into())),
        };
        if header.format != TRANSCRIPT_FORMAT {
            return Err(Error::Deserialize(format!(
                "unknown format `{}`",
                header.format
            )));
        }
        if header.version != TRANSCRIPT_VERSION {
            return Err(Error::Deserialize(format!(
                "unsupported version {}",
                header.version
            )));
        }
        let params = ProtocolParams::from_value(header.protocol, header.params)?;

        let mut messages = Vec::new();
        let mut footer = None;
        for item in lines {
            if footer.is_some() {
                return Err(Error::Deserialize(format!(
                    "line {}: content after footer",
                    item.0 + 1
                )));
            }
            match parse(item)? {
                Line::Message(m) => messages.push(m),
                Line::Footer(f) => footer = Some(f),
                Line::Header(_) => {
                    return Err(Error::Deserialize(format!(
                        "line {}: second header",
                        item.0 + 1
                    )))
                }
            }
        }
        let footer = footer.ok_or_else(|| Error::Deserialize("missing footer".into()))?;
        if footer.messages != messages.len() {
            return Err(Error::Deserialize(format!(
                "footer counts {} messages, found {}",
                footer.messages,
                messages.len()
            )));
        }
        let transcript = Transcript {
            params,
            seed: header.seed,
            alice: header.alice,
            bob: header.bob,
            messages,
            verdict: footer.verdict,
            stats: footer.stats,
        };
        transcript
            .validate()
            .map_err(|e| Error::Deserialize(e.to_string()))?;
        Ok(transcript)
    }
}
