// Deterministic sampling of the three layouts, and the bidiagonal embedding having the
// same cokernel as the product of its factors.

use cokfluct::ensembles::{EnsembleSpec, EntryDistribution, KSchedule, Layout, Sampler};
use cokfluct::oracles::verify_cok_identity;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = EnsembleSpec::new(3, Layout::MatrixProduct { n: 3, k: 4 }, 99)
        .with_a(EntryDistribution::UniformRange { low: -5, high: 5 });
    let sampler = Sampler::new(&spec)?;
    let f = sampler.factors(0)?;
    println!("trial 0 factors: {:?}", f.factors());
    assert_eq!(f.factors(), sampler.factors(0)?.factors());
    println!("embedding matches product: {}", verify_cok_identity(&f.to_int())?);

    let blocks = EnsembleSpec::new(2, Layout::cycling_blocks(4, 5), 1)
        .with_b(EntryDistribution::Bernoulli { q: 0.2 });
    let sample = Sampler::new(&blocks)?.blocks(3)?;
    println!("block sizes {:?}, dimension {}", sample.sizes(), sample.dim());

    let bad = EnsembleSpec::new(2, Layout::constant_blocks(4, 2), 1).with_a(EntryDistribution::Constant { value: 2 });
    println!("unbalanced A entries: {}", bad.validate().unwrap_err());

    let schedule = KSchedule::new(2, 0.5, (3..8).collect());
    for (m, k) in schedule.realized() {
        println!("m = {m}: k = {k}, offset {:.4}", schedule.fractional_offset(k));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
