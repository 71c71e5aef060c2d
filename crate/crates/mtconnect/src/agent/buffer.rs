use std::collections::{BTreeMap, VecDeque};

use chrono::{DateTime, Utc};

use crate::error::AgentError;

/// One stored value with its agent-assigned sequence number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub sequence: u64,
    pub timestamp: DateTime<Utc>,
    pub data_item_id: String,
    pub value: String,
}

/// A page of observations and the cursor for the next request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplePage {
    pub observations: Vec<Observation>,
    pub next_sequence: u64,
}

/// Fixed-capacity ring of observations. Sequences start at 1, are assigned
/// on append and never reused; `first_sequence == next_sequence - len`.
#[derive(Debug, Clone)]
pub struct ObservationBuffer {
    capacity: usize,
    entries: VecDeque<Observation>,
    next_sequence: u64,
    /// Latest evicted observation per item, so as-of queries still see
    /// values older than the retained window.
    checkpoint: BTreeMap<String, Observation>,
    latest: BTreeMap<String, Observation>,
}

impl ObservationBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "observation buffer capacity must be positive");
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity.min(1 << 16)),
            next_sequence: 1,
            checkpoint: BTreeMap::new(),
            latest: BTreeMap::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn first_sequence(&self) -> u64 {
        self.next_sequence - self.entries.len() as u64
    }

    pub fn next_sequence(&self) -> u64 {
        self.next_sequence
    }

    /// `next_sequence - 1`; 0 before the first append.
    pub fn last_sequence(&self) -> u64 {
        self.next_sequence - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = &Observation> {
        self.entries.iter()
    }

    /// Appends one observation, evicting the oldest at capacity.
    pub fn push(&mut self, timestamp: DateTime<Utc>, data_item_id: &str, value: &str) -> u64 {
        if self.entries.len() == self.capacity {
            let old = self.entries.pop_front().expect("full buffer is non-empty");
            self.checkpoint.insert(old.data_item_id.clone(), old);
        }
        let obs = Observation {
            sequence: self.next_sequence,
            timestamp,
            data_item_id: data_item_id.to_string(),
            value: value.to_string(),
        };
        self.latest.insert(obs.data_item_id.clone(), obs.clone());
        self.entries.push_back(obs);
        self.next_sequence += 1;
        self.next_sequence - 1
    }

    /// Up to `count` observations with sequence >= `from`, ascending.
    pub fn sample(&self, from: u64, count: u64) -> Result<SamplePage, AgentError> {
        if count == 0 {
            return Err(AgentError::InvalidRequest("count must be at least 1".into()));
        }
        let first = self.first_sequence();
        if from < first {
            return Err(AgentError::OutOfRange {
                requested: from,
                first,
                next: self.next_sequence,
            });
        }
        if from >= self.next_sequence {
            return Ok(SamplePage {
                observations: Vec::new(),
                next_sequence: self.next_sequence,
            });
        }
        let start = (from - first) as usize;
        let observations: Vec<Observation> = self
            .entries
            .iter()
            .skip(start)
            .take(count.min(self.capacity as u64) as usize)
            .cloned()
            .collect();
        let next_sequence = observations.last().map_or(self.next_sequence, |o| o.sequence + 1);
        Ok(SamplePage {
            observations,
            next_sequence,
        })
    }

    /// Latest observation per item, as of sequence `at` when given.
    pub fn current(&self, at: Option<u64>) -> Result<BTreeMap<String, Observation>, AgentError> {
        let Some(at) = at else {
            return Ok(self.latest.clone());
        };
        let first = self.first_sequence();
        if at < first || at >= self.next_sequence {
            return Err(AgentError::OutOfRange {
                requested: at,
                first,
                next: self.next_sequence,
            });
        }
        let mut out = self.checkpoint.clone();
        for o in self.entries.iter().take_while(|o| o.sequence <= at) {
            out.insert(o.data_item_id.clone(), o.clone());
        }
        Ok(out)
    }
}
