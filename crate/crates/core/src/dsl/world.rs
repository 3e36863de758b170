//! The event environment seen by conditions and host actions.
//!
//! Signals and per-instant values live for exactly one instant. Cells are
//! persistent integer storage and are the only state that survives an
//! instant boundary.

use std::collections::BTreeMap;

use super::trace::InstantEvents;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct World {
    signals: BTreeMap<String, bool>,
    cells: BTreeMap<String, i64>,
    values: BTreeMap<String, i64>,
    output: Vec<String>,
}

impl World {
    pub fn new() -> Self {
        Self::default()
    }

    /// Absent signals read as false.
    pub fn signal(&self, name: &str) -> bool {
        self.signals.get(name).copied().unwrap_or(false)
    }

    pub fn set_signal(&mut self, name: impl Into<String>, present: bool) {
        self.signals.insert(name.into(), present);
    }

    /// Unset cells read as 0.
    pub fn cell(&self, name: &str) -> i64 {
        self.cells.get(name).copied().unwrap_or(0)
    }

    pub fn set_cell(&mut self, name: impl Into<String>, value: i64) {
        self.cells.insert(name.into(), value);
    }

    pub fn cells(&self) -> &BTreeMap<String, i64> {
        &self.cells
    }

    /// Per-instant payload attached to a signal, 0 when absent.
    pub fn value(&self, name: &str) -> i64 {
        self.values.get(name).copied().unwrap_or(0)
    }

    pub fn set_value(&mut self, name: impl Into<String>, value: i64) {
        self.values.insert(name.into(), value);
    }

    pub fn emit(&mut self, line: impl Into<String>) {
        self.output.push(line.into());
    }

    /// Everything emitted so far in the current instant.
    pub fn output(&self) -> &[String] {
        &self.output
    }

    pub fn take_output(&mut self) -> Vec<String> {
        std::mem::take(&mut self.output)
    }

    pub fn clear_output(&mut self) {
        self.output.clear();
    }

    /// Starts a new instant: drops last instant's signals, payloads and
    /// output, then installs `events`.
    pub fn apply_instant(&mut self, events: &InstantEvents) {
        self.end_instant();
        self.output.clear();
        for (name, payload) in events.iter() {
            self.signals.insert(name.to_string(), true);
            if let Some(v) = payload {
                self.values.insert(name.to_string(), v);
            }
        }
    }

    /// Consumes the per-instant signal assignments.
    pub fn end_instant(&mut self) {
        self.signals.clear();
        self.values.clear();
    }
}
