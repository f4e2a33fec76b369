// Smith normal form of a small integer matrix and the Sylow type of its cokernel.

use cokfluct::{cokernel_partition, snf_diagonal, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]])?;
    let diag = snf_diagonal(&m);
    println!("invariant factors: {diag:?}");
    assert_eq!(diag.iter().map(|d| d.to_string()).collect::<Vec<_>>(), ["2", "6", "12"]);

    for p in [2, 3, 5] {
        let sylow = cokernel_partition(&m, p);
        println!("p = {p}: type {}, free rank {}", sylow.partition, sylow.free_rank);
    }

    let singular = IntMatrix::from_rows(&[[1, 2], [2, 4]])?;
    let sylow = cokernel_partition(&singular, 2);
    println!("singular matrix: free rank {}", sylow.free_rank);
    assert_eq!(sylow.free_rank, 1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
