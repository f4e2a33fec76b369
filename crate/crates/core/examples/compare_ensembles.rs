// The matrix-product ensemble against the block triangular ensemble at the same k:
// total variation distance between centered rank-vector distributions.

use cokfluct::ensembles::{EnsembleSpec, Layout};
use cokfluct::experiments::{compare_ensembles, run_experiment, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let config = ExperimentConfig::new(400).with_lambdas(vec!["1".parse()?]).with_d(1);
    let product = run_experiment(&EnsembleSpec::new(2, Layout::MatrixProduct { n: 10, k: 8 }, 1), &config)?;
    let blocks = run_experiment(&EnsembleSpec::new(2, Layout::constant_blocks(6, 8), 2), &config)?;
    let c = compare_ensembles(&product, &blocks)?;
    println!("TV distance {:.4} over {} vectors", c.tv_distance, c.support_size);
    for g in &c.moment_gaps {
        println!("lambda {}: {:.3} vs {:.3}", g.lambda, g.mean_a, g.mean_b);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
