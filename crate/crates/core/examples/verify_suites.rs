// Runs the built-in exact verification suites, as `cokfluct verify` does.

use cokfluct::oracles::{run_suite, Suite};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for suite in [Suite::Cok, Suite::Decomposition] {
        let outcome = run_suite(suite)?;
        println!("== {suite}");
        for check in &outcome.checks {
            println!("{check}");
        }
        assert!(outcome.ok());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
