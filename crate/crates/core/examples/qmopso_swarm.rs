//! Runs the quantum-inspired swarm and watches the repository grow.

use coalition::qmopso::run_with_observer;
use coalition::{generate_scenario, Evaluator, GenerationRanges, QmopsoParams};

fn main() -> coalition::Result<()> {
    let scenario = generate_scenario(3, 14, &GenerationRanges::default())?;
    let params = QmopsoParams {
        population: 60,
        iterations: 50,
        seed: 3,
        ..QmopsoParams::default()
    };
    let evaluator = Evaluator::new(&scenario, params.feasibility)?;
    let outcome = run_with_observer(&evaluator, &params, |t, rep, swarm| {
        if t % 10 == 0 {
            let mean_v: f64 =
                swarm.iter().flat_map(|p| p.velocity.iter()).sum::<f64>() / (swarm.len() * scenario.len()) as f64;
            println!("iteration {t:>3}: repository {:>2}, mean velocity {mean_v:.3}", rep.len());
        }
    })?;

    println!("\nfront after {} iterations:", params.iterations);
    for s in outcome.repository.front().points {
        let o = s.objectives;
        println!("  {:?}  time {:.1}  cost {:.1}  size {}", s.coalition.members().collect::<Vec<_>>(), o.time, o.cost, o.size);
    }
    println!("total {:.4}s", outcome.timing.total);
    Ok(())
}
