//! Work budgets shared by every exhaustive routine.
//!
//! A budget is a count of elementary work units (box points, subsets, minors,
//! search nodes). Routines whose work is known up front refuse before
//! starting; pruned searches count visited nodes and abort once the budget is
//! spent. Either way the caller gets [`Error::BudgetExceeded`], never a
//! truncated answer.

use crate::error::{Error, Result};
use num_bigint::BigUint;

/// Environment variable that overrides [`Budget::default`].
pub const BUDGET_ENV: &str = "VERTEXLAB_BUDGET";

/// Default budget: 2^28 work units.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn unlimited() -> Self {
        Budget { limit: u64::MAX }
    }

    /// Reads `VERTEXLAB_BUDGET`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => raw.trim().parse::<u64>().map(Budget::new).map_err(|_| {
                Error::invalid(format!(
                    "{BUDGET_ENV} must be a nonnegative integer, got {raw:?}"
                ))
            }),
            Err(_) => Ok(Budget::default()),
        }
    }

    /// Fails unless `needed` units fit.
    pub fn check(&self, what: &'static str, needed: &BigUint) -> Result<()> {
        if *needed > BigUint::from(self.limit) {
            Err(Error::BudgetExceeded {
                what,
                needed: needed.to_string(),
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_u64(&self, what: &'static str, needed: u64) -> Result<()> {
        self.check(what, &BigUint::from(needed))
    }

    /// Checks that `2^bits` units fit.
    pub fn check_pow2(&self, what: &'static str, bits: usize) -> Result<()> {
        self.check(what, &(BigUint::from(1u8) << bits))
    }

    pub fn meter(&self, what: &'static str) -> Meter {
        Meter {
            what,
            used: 0,
            limit: self.limit,
        }
    }
}

/// Running work counter for searches whose size is not known in advance.
#[derive(Debug)]
pub struct Meter {
    what: &'static str,
    used: u64,
    limit: u64,
}

impl Meter {
    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                what: self.what,
                needed: format!("more than {}", self.limit),
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_refuses_over_limit() {
        let b = Budget::new(10);
        assert!(b.check_u64("x", 10).is_ok());
        assert!(b.check_u64("x", 11).unwrap_err().is_budget());
        assert!(b.check_pow2("x", 4).is_err());
    }

    #[test]
    fn meter_stops() {
        let mut m = Budget::new(2).meter("search");
        assert!(m.tick().is_ok());
        assert!(m.tick().is_ok());
        assert!(m.tick().is_err());
    }
}
