//! Filters, optimizes, ranks and deploys coalitions from one fleet until
//! no admissible coalition remains, then releases them.

use coalition::{generate_scenario, Fleet, GenerationRanges, RunConfig, Thresholds};

fn main() -> coalition::Result<()> {
    let scenario = generate_scenario(21, 40, &GenerationRanges::default())?;
    let mut fleet = Fleet::new(scenario);
    let config = RunConfig {
        population: 80,
        iterations: 60,
        thresholds: Some(Thresholds { max_time: None, max_cost: None, max_robots: Some(6) }),
        ..RunConfig::default()
    };

    loop {
        let result = fleet.run(&config)?;
        let Some(chosen) = result.selected_solution() else {
            println!("no admissible coalition among {} candidates", result.candidates.len());
            break;
        };
        let o = chosen.evaluation.objectives;
        println!(
            "deployed {:?} (time {:.1}, cost {:.1}) from {} candidates, {} busy",
            chosen.members,
            o.time,
            o.cost,
            result.candidates.len(),
            fleet.busy()
        );
    }
    for c in fleet.deployed().to_vec() {
        fleet.release(&c)?;
    }
    println!("released; {} busy", fleet.busy());
    Ok(())
}
