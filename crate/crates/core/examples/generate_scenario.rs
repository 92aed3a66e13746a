//! Generates a random fleet and task, prints it as TOML and reads it back.
//!
//! `cargo run --example generate_scenario -- [seed] [robots]`

use coalition::{generate_scenario, GenerationRanges, Scenario};

fn main() -> coalition::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let robots = args.next().and_then(|s| s.parse().ok()).unwrap_or(6);

    let scenario = generate_scenario(seed, robots, &GenerationRanges::default())?;
    let text = scenario.to_toml_string()?;
    println!("{text}");

    let back = Scenario::from_toml_str(&text)?;
    assert_eq!(back, scenario);
    eprintln!(
        "{} robots, {} sensing / {} actuating kinds, {} locational constraints",
        back.len(),
        back.sensing_width(),
        back.actuating_width(),
        back.task.constraints().count()
    );
    Ok(())
}
