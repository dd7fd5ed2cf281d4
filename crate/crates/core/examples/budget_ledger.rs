//! Charging model calls against a spend limit.

use std::collections::BTreeMap;

use tracelocate::llm::{BudgetLedger, Price, Usage};

fn main() -> tracelocate::Result<()> {
    let prices = BTreeMap::from([("small".to_string(), Price::new(0.5, 1.5))]);
    let mut ledger = BudgetLedger::new(10.0, prices);
    let usage = Usage { prompt_tokens: 3000, completion_tokens: 800 };
    println!("estimate for a 3000 token prompt: ${:.4}", ledger.estimate_call("small", 3000)?);
    for i in 1.. {
        let charge = ledger.charge("small", &usage)?;
        println!("call {i}: +${:.4} total ${:.4}", charge.cost, charge.spent_usd);
        if charge.exceeded {
            println!("limit ${} reached", ledger.limit_usd);
            break;
        }
    }
    Ok(())
}
