// A small Monte Carlo run on the block triangular ensemble: rescaled Hom-moments and
// the centered rank-vector histogram.

use cokfluct::ensembles::{EnsembleSpec, Layout};
use cokfluct::experiments::{run_experiment, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = EnsembleSpec::new(2, Layout::constant_blocks(6, 8), 2024);
    let config = ExperimentConfig::new(300)
        .with_groups(vec!["1".parse()?, "1,1".parse()?])
        .with_lambdas(vec!["1".parse()?, "2".parse()?])
        .with_d(2);
    let report = run_experiment(&spec, &config)?;
    println!("{} trials, centering {}", report.trials, report.centering);
    for h in &report.hom_moments {
        println!("{}: E|Hom| / k^{} = {:.3}, CI {:?}, limit {}", h.group_name, h.ell, h.rescaled, h.ci, h.target);
    }
    for l in &report.l_moments {
        println!("lambda {}: {:.3} vs {:.3}", l.lambda, l.mean, l.target_value);
    }
    for bin in report.centered_histogram.iter().take(5) {
        println!("{} x {}", bin.vector, bin.count);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
