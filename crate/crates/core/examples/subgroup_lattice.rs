// Subgroups of a finite abelian p-group, chain counts two ways, and Hom counts.

use cokfluct::pgroups::{chain_counts_by_type, enumerate_subgroups, hom_count, AbelianPGroup, Partition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = AbelianPGroup::new(2, "2,1".parse()?)?;
    let lattice = enumerate_subgroups(&g)?;
    println!("{g} has order {} and {} subgroups", g.order(), lattice.len());
    for (i, h) in lattice.subgroups().iter().enumerate() {
        println!("  H{i}: order {}, covers {:?}", h.order(), lattice.covers(i));
    }
    let by_lattice = lattice.chain_counts();
    let by_type = chain_counts_by_type(g.lambda(), g.p());
    println!("chain counts c(G, i): {by_lattice:?}");
    assert_eq!(by_lattice, by_type);

    // Too big for the lattice, fine for the type recursion.
    let big = AbelianPGroup::elementary(2, 12)?;
    println!("lattice of {big}: {}", enumerate_subgroups(&big).map(|_| "ok".to_string()).unwrap_or_else(|e| e.to_string()));
    println!("c((Z/2)^12, 12) = {}", chain_counts_by_type(big.lambda(), 2)[12]);

    let lambda = Partition::new(vec![3, 1])?;
    let mu = Partition::new(vec![2, 2])?;
    println!("|Hom(G_{lambda}, G_{mu})| at p = 3: {}", hom_count(&lambda, &mu, 3));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
