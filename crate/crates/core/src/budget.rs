use std::time::{Duration, Instant};

use crate::error::{BudgetExceeded, BudgetKind};

/// Limits for exhaustive searches. `Budget::default()` is unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }

    pub fn millis(ms: u64) -> Self {
        Budget {
            max_nodes: None,
            max_time: Some(Duration::from_millis(ms)),
        }
    }

    pub fn meter(&self) -> Meter {
        Meter {
            budget: *self,
            started: Instant::now(),
            nodes: 0,
        }
    }
}

/// Counts search nodes against a [`Budget`].
#[derive(Debug, Clone)]
pub struct Meter {
    budget: Budget,
    started: Instant,
    nodes: u64,
}

impl Meter {
    pub fn tick(&mut self) -> Result<(), BudgetExceeded> {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                return Err(BudgetExceeded {
                    kind: BudgetKind::Nodes,
                    limit: max,
                });
            }
        }
        if let Some(max) = self.budget.max_time {
            if self.nodes.is_multiple_of(256) && self.started.elapsed() > max {
                return Err(BudgetExceeded {
                    kind: BudgetKind::Millis,
                    limit: max.as_millis() as u64,
                });
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }
}
