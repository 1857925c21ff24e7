//! Cooperative cancellation and wall-clock budgets.
//!
//! Long-running eliminations poll a [`Budget`] between reduction steps, so
//! a timeout or an external cancellation never leaves the process hanging.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// A deadline plus a shared cancellation flag.
///
/// Cloning is cheap; clones share the cancellation flag but keep the same
/// deadline.
#[derive(Clone, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    started: Instant,
    cancel: Arc<AtomicBool>,
}

/// Raised when a computation exhausts its budget.
#[derive(Debug, Clone, thiserror::Error)]
pub enum BudgetError {
    #[error("wall-clock budget exhausted after {0:.1?}")]
    Timeout(Duration),
    #[error("cancelled by caller")]
    Cancelled,
}

impl Budget {
    /// A budget that never expires.
    pub fn unlimited() -> Self {
        Budget {
            deadline: None,
            started: Instant::now(),
            cancel: Arc::new(AtomicBool::new(false)),
        }
    }

    /// A budget expiring `limit` from now.
    pub fn with_timeout(limit: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + limit),
            started: Instant::now(),
            cancel: Arc::new(AtomicBool::new(false)),
        }
    }

    /// Request cancellation; every clone observes it.
    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::Relaxed);
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    /// Poll point. Cheap enough to call inside reduction loops.
    pub fn check(&self) -> Result<(), BudgetError> {
        if self.cancel.load(Ordering::Relaxed) {
            return Err(BudgetError::Cancelled);
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(BudgetError::Timeout(self.elapsed()));
            }
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
