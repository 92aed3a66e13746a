//! Exact front by enumeration, used to score a short swarm run.

use coalition::{brute_force_front, error_ratio, generate_scenario, qmopso, Front, GenerationRanges, QmopsoParams};

fn main() -> coalition::Result<()> {
    let scenario = generate_scenario(5, 12, &GenerationRanges::default())?;
    let oracle = brute_force_front(&scenario)?;
    println!("{} feasible coalitions, {} on the exact front", oracle.feasible_coalitions, oracle.front.len());

    for iterations in [0, 5, 50] {
        let params = QmopsoParams { population: 40, iterations, seed: 5, ..QmopsoParams::default() };
        let found = Front::from_solutions(qmopso::run_on_scenario(&scenario, &params)?.repository.entries());
        let er = if found.is_empty() { 1.0 } else { error_ratio(&found, &oracle.front)? };
        println!("{iterations:>3} iterations: {} points, error ratio {er:.3}", found.len());
    }
    Ok(())
}
