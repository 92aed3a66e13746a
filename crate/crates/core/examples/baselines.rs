//! NSGA-II and SPEA-II on the same scenario, compared by set coverage.

use coalition::{generate_scenario, run_nsga2, run_spea2, set_coverage, EvoParams, Front, GenerationRanges};

fn main() -> coalition::Result<()> {
    let scenario = generate_scenario(11, 30, &GenerationRanges::default())?;
    let params = EvoParams::new(100, 100, 11);

    let nsga2 = run_nsga2(&scenario, &params)?;
    let spea2 = run_spea2(&scenario, &params)?;
    let fa = Front::from_solutions(&nsga2.front);
    let fb = Front::from_solutions(&spea2.front);

    println!("nsga2: {} points in {:.3}s", fa.len(), nsga2.timing.total);
    println!("spea2: {} points in {:.3}s", fb.len(), spea2.timing.total);
    if !fa.is_empty() && !fb.is_empty() {
        println!("C(nsga2, spea2) = {:.3}", set_coverage(&fa, &fb)?);
        println!("C(spea2, nsga2) = {:.3}", set_coverage(&fb, &fa)?);
    }
    Ok(())
}
