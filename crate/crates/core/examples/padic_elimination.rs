// Elementary-divisor valuations over Z/p^N: dense elimination, the per-block streaming
// eliminator, and what saturation looks like when the precision is too low.

use cokfluct::ensembles::{EnsembleSpec, Layout, Sampler};
use cokfluct::{cokernel_partition, padic_valuations, streaming_block_eliminate, Modulus, PadicMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = PadicMatrix::from_i64(3, 3, Modulus::new(2, 8)?, &[4, 0, 0, 0, 2, 0, 0, 0, 1])?;
    let v = padic_valuations(&m);
    println!("valuations {:?}, units {}, partition {}", v.valuations, v.unit_count, v.partition());

    let low = PadicMatrix::from_i64(2, 2, Modulus::new(2, 3)?, &[16, 0, 0, 2])?;
    let v = padic_valuations(&low);
    println!("at precision 3: valuations {:?}, saturated {}", v.valuations, v.saturated_count);
    assert_eq!(v.saturated_count, 1);

    let spec = EnsembleSpec::new(2, Layout::constant_blocks(6, 5), 7);
    let sample = Sampler::new(&spec)?.blocks(0)?;
    let modulus = Modulus::new(2, 32)?;
    let streamed = streaming_block_eliminate(&sample.to_block_matrix(modulus));
    let dense = padic_valuations(&sample.to_padic(modulus));
    let exact = cokernel_partition(&sample.to_int_matrix(), 2);
    println!("streaming {} / dense {} / exact {}", streamed.partition(), dense.partition(), exact.partition);
    assert_eq!(streamed.partition(), exact.partition);
    assert_eq!(dense.partition(), exact.partition);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
