// Exact rational checks at tiny scale: the Hom-moment identity, balanced sums, the
// residual bound, and the w = 0 decomposition of the block moment sum.

use cokfluct::oracles::{
    verify_balanced_sums, verify_moment_identity, verify_residual_bound, verify_w0_decomposition, EntryLaw,
    FiniteSupportMatrixLaw, W0BlockLaw,
};
use cokfluct::pgroups::AbelianPGroup;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let z3 = AbelianPGroup::cyclic(3, 1)?;
    let law = FiniteSupportMatrixLaw::iid(2, 2, EntryLaw::uniform(&[0, 1, 2]))?;
    let r = verify_moment_identity(&law, &z3)?;
    println!("E|Hom(cok M, Z/3)| = {} = {}: {}", r.lhs, r.rhs, r.equal);

    let z2 = AbelianPGroup::cyclic(2, 1)?;
    let s = verify_balanced_sums(&FiniteSupportMatrixLaw::iid(6, 6, EntryLaw::bernoulli(3, 10)?)?, &z2)?;
    println!("Bernoulli(3/10), n = 6: S_min = {}, S_max = {}", s.s_min, s.s_max);

    let z4 = AbelianPGroup::cyclic(2, 2)?.elements()?;
    let half = z4.generated(&[2]);
    let r = verify_residual_bound(&EntryLaw::uniform(&[0, 1, 2, 3]), &z4, &half, &[1], &[0, 0])?;
    println!("residual: {} <= {} (eps = {})", r.probability, r.bound, r.epsilon);

    let blocks = W0BlockLaw::without_b(vec![1, 1, 1], EntryLaw::uniform(&[0, 1]))?;
    for i in 0..=1 {
        let d = verify_w0_decomposition(&blocks, &z2, i)?;
        println!("i = {i}: sum {} next to {}; sequence count {} = {}", d.sum, d.target, d.sequence_count, d.count_target);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
