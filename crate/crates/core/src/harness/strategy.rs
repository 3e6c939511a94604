use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Party, Protocol};
use crate::{Error, Result};

/// Names a party's strategy and its numeric parameters.
///
/// The textual form is `name` or `name:key=value,key=value`, for example
/// `tamper:fraction=0.5,target=1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyDescriptor {
    pub party: Party,
    pub name: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

/// Strategy names accepted for each protocol and party.
pub fn registered_strategies(protocol: Protocol, party: Party) -> &'static [&'static str] {
    match (protocol, party) {
        (Protocol::BitwiseCommit, Party::Alice) => &["honest", "cheat"],
        (Protocol::BitwiseCommit, Party::Bob) => &["honest", "helstrom"],
        (Protocol::CodebookCommit, Party::Alice) => &["honest", "cheat"],
        (Protocol::CodebookCommit, Party::Bob) => &["honest"],
        (Protocol::CoinToss, Party::Alice) => &["honest", "tamper"],
        (Protocol::CoinToss, Party::Bob) => &["honest", "best_of_m"],
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c == '_')
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl StrategyDescriptor {
    pub fn new(party: Party, name: impl Into<String>) -> Self {
        Self {
            party,
            name: name.into(),
            parameters: BTreeMap::new(),
        }
    }

    pub fn honest(party: Party) -> Self {
        Self::new(party, "honest")
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_owned(), value);
        self
    }

    pub fn parse(party: Party, text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidStrategy(msg);
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (text.trim(), None),
        };
        if !is_identifier(name) {
            return Err(bad(format!("`{name}` is not a strategy name")));
        }
        let mut parameters = BTreeMap::new();
        if let Some(rest) = rest {
            for item in rest.split(',') {
                let Some((key, value)) = item.split_once('=') else {
                    return Err(bad(format!("expected key=value, got `{item}`")));
                };
                let key = key.trim();
                if !is_identifier(key) {
                    return Err(bad(format!("`{key}` is not a parameter name")));
                }
                let value: f64 = value.trim().parse().map_err(|_| {
                    bad(format!("parameter `{key}` has non-numeric value `{value}`"))
                })?;
                if !value.is_finite() {
                    return Err(bad(format!("parameter `{key}` must be finite")));
                }
                if parameters.insert(key.to_owned(), value).is_some() {
                    return Err(bad(format!("parameter `{key}` given twice")));
                }
            }
        }
        Ok(Self {
            party,
            name: name.to_owned(),
            parameters,
        })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.parameters.get(key).copied()
    }

    /// Fails on the first parameter not in `allowed`.
    pub(crate) fn expect_keys(&self, allowed: &[&str]) -> Result<()> {
        match self
            .parameters
            .keys()
            .find(|k| !allowed.contains(&k.as_str()))
        {
            Some(k) => Err(Error::InvalidStrategy(format!(
                "strategy `{}` takes no parameter `{k}`",
                self.name
            ))),
            None => Ok(()),
        }
    }

    pub(crate) fn unknown(&self) -> Error {
        Error::UnknownStrategy {
            party: self.party.to_string(),
            name: self.name.clone(),
        }
    }

    /// Reads a 0/1 parameter.
    pub(crate) fn bit(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some(0.0) => Ok(Some(false)),
            Some(1.0) => Ok(Some(true)),
            Some(v) => Err(Error::InvalidStrategy(format!(
                "`{key}` must be 0 or 1, got {v}"
            ))),
        }
    }

    /// Reads a nonnegative integer parameter.
    pub(crate) fn count(&self, key: &str) -> Result<Option<usize>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e15 => Ok(Some(v as usize)),
            Some(v) => Err(Error::InvalidStrategy(format!(
                "`{key}` must be a nonnegative integer, got {v}"
            ))),
        }
    }
}

impl fmt::Display for StrategyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.parameters.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let d = StrategyDescriptor::parse(Party::Alice, "tamper:fraction=0.5,target=1").unwrap();
        assert_eq!(d.name, "tamper");
        assert_eq!(d.get("fraction"), Some(0.5));
        assert_eq!(d.bit("target").unwrap(), Some(true));
        assert_eq!(d.to_string(), "tamper:fraction=0.5,target=1");
        assert_eq!(
            StrategyDescriptor::parse(Party::Bob, "honest").unwrap(),
            StrategyDescriptor::honest(Party::Bob)
        );
    }

    #[test]
    fn parse_errors() {
        for bad in [
            "",
            "Tamper",
            "tamper:",
            "tamper:fraction",
            "tamper:f=x",
            "t:a=1,a=2",
            "t:a=inf",
        ] {
            assert!(
                StrategyDescriptor::parse(Party::Alice, bad).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn integer_and_bit_params() {
        let d = StrategyDescriptor::new(Party::Alice, "x")
            .with("r", 3.0)
            .with("b", 2.0);
        assert_eq!(d.count("r").unwrap(), Some(3));
        assert!(d.bit("b").is_err());
        assert!(d.with("r", 1.5).count("r").is_err());
    }
}
