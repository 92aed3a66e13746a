//! Ranks a few trade-offs under different criteria weights.

use coalition::{promethee_rank, CriteriaWeights, ObjectiveVector};

fn main() -> coalition::Result<()> {
    let options = [
        ObjectiveVector::new(40.0, 300.0, 5),
        ObjectiveVector::new(90.0, 120.0, 3),
        ObjectiveVector::new(150.0, 60.0, 2),
    ];
    for (label, w) in [
        ("default", CriteriaWeights::default()),
        ("cheap", CriteriaWeights::new(0.1, 0.8, 0.1)?),
        ("small", CriteriaWeights::new(0.1, 0.1, 0.8)?),
    ] {
        let r = promethee_rank(&options, &w)?;
        let flows: Vec<String> = r.net_flows.iter().map(|f| format!("{f:+.2}")).collect();
        println!("{label:>8}: order {:?}, flows [{}]", r.order, flows.join(", "));
    }
    Ok(())
}
