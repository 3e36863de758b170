//! Scripted event traces: one instant per line.
//!
//! Each token is `name` (signal present) or `name=int` (signal present
//! with a payload). A blank line is an instant without events. Lines that
//! hold nothing but a `;` comment are skipped and do not count as instants.

use super::expr::is_ident;
use super::DslError;

/// Events of one instant, in the order they were written.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstantEvents {
    events: Vec<(String, Option<i64>)>,
}

impl InstantEvents {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails if `name` already has an event in this instant.
    pub fn insert(&mut self, name: impl Into<String>, payload: Option<i64>) -> Result<(), String> {
        let name = name.into();
        if self.events.iter().any(|(n, _)| *n == name) {
            return Err(name);
        }
        self.events.push((name, payload));
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Option<i64>)> {
        self.events.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceFile {
    pub instants: Vec<InstantEvents>,
}

impl TraceFile {
    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }
}

pub fn parse_trace(text: &str) -> Result<TraceFile, DslError> {
    let mut instants = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, had_comment) = match raw.split_once(';') {
            Some((before, _)) => (before, true),
            None => (raw, false),
        };
        if had_comment && content.trim().is_empty() {
            continue;
        }
        let mut events = InstantEvents::new();
        for tok in content.split_whitespace() {
            let col = tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
            let bad = |msg: String| DslError::Parse {
                line: line_no,
                col,
                msg,
            };
            let (name, payload) = match tok.split_once('=') {
                Some((n, v)) => {
                    let v = v
                        .parse::<i64>()
                        .map_err(|_| bad(format!("bad integer in `{tok}`")))?;
                    (n, Some(v))
                }
                None => (tok, None),
            };
            if !is_ident(name) {
                return Err(bad(format!("bad signal name `{name}`")));
            }
            events
                .insert(name, payload)
                .map_err(|name| DslError::DuplicateAssignment {
                    name,
                    line: line_no,
                })?;
        }
        instants.push(events);
    }
    Ok(TraceFile { instants })
}
