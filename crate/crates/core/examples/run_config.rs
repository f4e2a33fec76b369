// Building a run config in code, writing a complete run directory, and reading the
// report back.

use cokfluct::cli::{read_report, write_run, RunConfig};
use cokfluct::ensembles::{EnsembleSpec, Layout};
use cokfluct::experiments::{aggregate, run_trials, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = EnsembleSpec::new(2, Layout::MatrixProduct { n: 8, k: 4 }, 5);
    let experiment = ExperimentConfig::new(100).with_groups(vec!["1".parse()?]).with_lambdas(vec!["1".parse()?]);
    let config = RunConfig::new(spec, experiment);
    println!("{}", config.to_json()?);

    let records = run_trials(&config.ensemble, config.experiment.trials, None)?;
    let report = aggregate(&config.ensemble, &config.experiment, &records)?;
    let dir = std::env::temp_dir().join(format!("cokfluct-example-{}", std::process::id()));
    for path in write_run(&dir, &config, &report, &records)? {
        println!("wrote {}", path.display());
    }
    let back = read_report(&dir)?;
    assert_eq!(back.trials, report.trials);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
