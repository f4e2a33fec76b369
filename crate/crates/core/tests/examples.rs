mod compare_ensembles_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/compare_ensembles.rs"));
}

#[test]
fn compare_ensembles_example_runs() {
    compare_ensembles_example::run_example().expect("compare_ensembles example should run");
}

mod exact_oracles_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/exact_oracles.rs"));
}

#[test]
fn exact_oracles_example_runs() {
    exact_oracles_example::run_example().expect("exact_oracles example should run");
}

mod hom_moment_experiment_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hom_moment_experiment.rs"));
}

#[test]
fn hom_moment_experiment_example_runs() {
    hom_moment_experiment_example::run_example().expect("hom_moment_experiment example should run");
}

mod limit_values_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/limit_values.rs"));
}

#[test]
fn limit_values_example_runs() {
    limit_values_example::run_example().expect("limit_values example should run");
}

mod padic_elimination_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/padic_elimination.rs"));
}

#[test]
fn padic_elimination_example_runs() {
    padic_elimination_example::run_example().expect("padic_elimination example should run");
}

mod partitions_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/partitions.rs"));
}

#[test]
fn partitions_example_runs() {
    partitions_example::run_example().expect("partitions example should run");
}

mod run_config_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/run_config.rs"));
}

#[test]
fn run_config_example_runs() {
    run_config_example::run_example().expect("run_config example should run");
}

mod sample_ensembles_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sample_ensembles.rs"));
}

#[test]
fn sample_ensembles_example_runs() {
    sample_ensembles_example::run_example().expect("sample_ensembles example should run");
}

mod smith_normal_form_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/smith_normal_form.rs"));
}

#[test]
fn smith_normal_form_example_runs() {
    smith_normal_form_example::run_example().expect("smith_normal_form example should run");
}

mod subgroup_lattice_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/subgroup_lattice.rs"));
}

#[test]
fn subgroup_lattice_example_runs() {
    subgroup_lattice_example::run_example().expect("subgroup_lattice example should run");
}

mod verify_suites_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_suites.rs"));
}

#[test]
fn verify_suites_example_runs() {
    verify_suites_example::run_example().expect("verify_suites example should run");
}
