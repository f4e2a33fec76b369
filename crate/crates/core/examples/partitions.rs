// Partitions as group types: conjugates, sizes, enumeration.

use cokfluct::pgroups::{partitions_of, Partition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let lambda: Partition = "4,2,1".parse()?;
    println!("lambda = {lambda}, |lambda| = {}, conjugate = {}", lambda.size(), lambda.conjugate());
    assert_eq!(lambda.conjugate().parts(), &[3, 2, 1, 1]);
    assert_eq!(lambda.conjugate().conjugate(), lambda);
    println!("first two conjugate parts: {:?}", lambda.conjugate_prefix(2));

    for n in 0..=6 {
        println!("p({n}) = {}", partitions_of(n).len());
    }
    assert_eq!(partitions_of(6).len(), 11);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
