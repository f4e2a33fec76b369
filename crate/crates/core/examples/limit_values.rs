// Limiting values: rescaled Hom-moments, fluctuation-law moments, centering.

use cokfluct::pgroups::AbelianPGroup;
use cokfluct::theory::{centering, l_moment, limit_rescaled_hom_moment, FluctuationParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for parts in ["1", "1,1", "2", "2,1", "1,1,1"] {
        let g = AbelianPGroup::new(2, parts.parse()?)?;
        println!("E|Hom(cok, {g})| / k^{} -> {}", g.ell(), limit_rescaled_hom_moment(&g)?);
    }

    let params = FluctuationParams::new(3, 0.25, 2)?;
    println!("p = 3, zeta = 0.25: chi = {:.6}", params.chi());
    for parts in ["1", "2", "1,1", "2,1"] {
        let m = l_moment(&parts.parse()?, &params)?;
        println!("E 3^<L,({parts})> = {} * {:.6} = {:.6}", m.exact, m.scale, m.value());
    }
    for k in [9, 10, 27, 40] {
        println!("centering for k = {k}: {}", centering(k, &params));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
