//! Per-run spend accounting.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Usage;
use crate::error::{Error, Result};

/// USD per 1K tokens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Price {
    pub prompt_per_1k: f64,
    pub completion_per_1k: f64,
}

impl Price {
    pub fn new(prompt_per_1k: f64, completion_per_1k: f64) -> Self {
        Price {
            prompt_per_1k,
            completion_per_1k,
        }
    }

    pub fn cost(&self, usage: &Usage) -> f64 {
        usage.prompt_tokens as f64 / 1000.0 * self.prompt_per_1k
            + usage.completion_tokens as f64 / 1000.0 * self.completion_per_1k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Charge {
    pub cost: f64,
    pub spent_usd: f64,
    pub exceeded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetLedger {
    pub limit_usd: f64,
    pub spent_usd: f64,
    pub price_table: BTreeMap<String, Price>,
    pub calls: u64,
    /// Largest single-call cost seen so far.
    pub max_call_usd: f64,
}

/// Completion tokens assumed for a call before any call has been observed.
pub const ASSUMED_COMPLETION_TOKENS: u64 = 512;

impl BudgetLedger {
    pub fn new(limit_usd: f64, price_table: BTreeMap<String, Price>) -> Self {
        BudgetLedger {
            limit_usd,
            spent_usd: 0.0,
            price_table,
            calls: 0,
            max_call_usd: 0.0,
        }
    }

    pub fn price(&self, model: &str) -> Result<Price> {
        self.price_table
            .get(model)
            .copied()
            .ok_or_else(|| Error::UnknownModelPrice(model.to_string()))
    }

    pub fn charge(&mut self, model: &str, usage: &Usage) -> Result<Charge> {
        let cost = self.price(model)?.cost(usage);
        self.spent_usd += cost.max(0.0);
        self.calls += 1;
        self.max_call_usd = self.max_call_usd.max(cost);
        Ok(Charge {
            cost,
            spent_usd: self.spent_usd,
            exceeded: self.exceeded(),
        })
    }

    pub fn exceeded(&self) -> bool {
        self.spent_usd > self.limit_usd
    }

    pub fn remaining(&self) -> f64 {
        (self.limit_usd - self.spent_usd).max(0.0)
    }

    /// Expected cost of one call: the priciest call so far, or a prompt-size
    /// estimate when that is larger.
    pub fn estimate_call(&self, model: &str, prompt_tokens: u64) -> Result<f64> {
        let p = self.price(model)?;
        let guess = p.cost(&Usage {
            prompt_tokens,
            completion_tokens: ASSUMED_COMPLETION_TOKENS,
        });
        Ok(self.max_call_usd.max(guess))
    }

    /// How many of `wanted` calls may start now, reserving `estimate` per
    /// call: call `i` is permitted while `spent + i * estimate < limit`.
    pub fn permitted_calls(&self, wanted: usize, estimate: f64) -> usize {
        (0..wanted)
            .take_while(|&i| self.spent_usd + i as f64 * estimate < self.limit_usd)
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ledger(limit: f64) -> BudgetLedger {
        let mut t = BTreeMap::new();
        t.insert("m".to_string(), Price::new(0.01, 0.03));
        BudgetLedger::new(limit, t)
    }

    #[test]
    fn charge_formula() {
        let mut l = ledger(1.0);
        let c = l
            .charge(
                "m",
                &Usage {
                    prompt_tokens: 2000,
                    completion_tokens: 1000,
                },
            )
            .unwrap();
        assert!((c.cost - 0.05).abs() < 1e-12);
        assert_eq!(l.calls, 1);
    }

    #[test]
    fn zero_usage_counts_the_call() {
        let mut l = ledger(1.0);
        l.charge("m", &Usage::default()).unwrap();
        assert_eq!((l.spent_usd, l.calls), (0.0, 1));
    }

    #[test]
    fn crossing_the_limit_sets_exceeded() {
        let mut l = ledger(1.0);
        l.spent_usd = 0.98;
        let c = l
            .charge(
                "m",
                &Usage {
                    prompt_tokens: 1000,
                    completion_tokens: 1000,
                },
            )
            .unwrap();
        assert!(c.exceeded && l.exceeded());
        assert!(matches!(
            l.charge("other", &Usage::default()),
            Err(Error::UnknownModelPrice(_))
        ));
    }

    #[test]
    fn reservations() {
        let mut l = ledger(1.0);
        assert_eq!(l.permitted_calls(3, 0.4), 3);
        l.spent_usd = 0.5;
        assert_eq!(l.permitted_calls(3, 0.4), 2);
        l.spent_usd = 1.0;
        assert_eq!(l.permitted_calls(3, 0.4), 0);
    }

    proptest! {
        #[test]
        fn spend_never_decreases(usages in proptest::collection::vec((0u64..50_000, 0u64..50_000), 0..200)) {
            let mut l = ledger(1.0);
            let mut prev = l.spent_usd;
            for (p, c) in usages {
                l.charge("m", &Usage { prompt_tokens: p, completion_tokens: c }).unwrap();
                prop_assert!(l.spent_usd >= prev);
                prop_assert_eq!(l.exceeded(), l.spent_usd > l.limit_usd);
                prev = l.spent_usd;
            }
        }
    }
}
