//! TOML scenario files.
//!
//! ```toml
//! seed = 7
//!
//! [target]
//! x = 512.0
//! y = 88.5
//!
//! [[task.subtasks]]
//! sensing_req = [1.0, 0.0, 2.0]
//! actuating_req = [2.0, 1.0, 0.0]
//! locational_constraints = [{ relation = "same-robot", left = "s1", right = "a1" }]
//!
//! [task.thresholds]   # optional; every key optional
//! max_time = 250.0
//! max_cost = 400.0
//! max_robots = 6
//!
//! [[robots]]
//! id = 0
//! sensing = [1.0, 3.0, 0.0]
//! actuating = [2.0, 0.0, 1.0]
//! position = { x = 10.0, y = 20.0 }
//! speed = 4.5
//! deploy_cost = 33.0
//! battery = 71.0
//! state = "idle"      # optional; idle | allocated | busy
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Scenario;

impl Scenario {
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(format!("scenario serialization: {e}")))
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let scenario: Scenario =
            toml::from_str(text).map_err(|e| Error::invalid(format!("scenario file: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let scenario: Scenario = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use crate::generate::{generate_scenario, GenerationRanges};
    use crate::model::*;

    #[test]
    fn generated_scenarios_round_trip() {
        for seed in 0..5 {
            let mut s = generate_scenario(seed, 12, &GenerationRanges::default()).unwrap();
            s.task.thresholds.max_cost = Some(123.456);
            s.task.subtasks[1]
                .locational_constraints
                .push(LocationalConstraint::different(
                    CapabilityKind::Sensing(2),
                    CapabilityKind::Actuating(0),
                ));
            s.robots[3].state = RobotState::Busy;
            let text = s.to_toml_string().unwrap();
            assert_eq!(Scenario::from_toml_str(&text).unwrap(), s);
        }
    }

    #[test]
    fn documented_layout_parses() {
        let text = r#"
seed = 7

[target]
x = 512.0
y = 88.5

[[task.subtasks]]
sensing_req = [1.0, 0.0, 2.0]
actuating_req = [2.0, 1.0, 0.0]
locational_constraints = [{ relation = "same-robot", left = "s1", right = "a1" }]

[task.thresholds]
max_robots = 6

[[robots]]
id = 0
sensing = [1.0, 3.0, 0.0]
actuating = [2.0, 0.0, 1.0]
position = { x = 10.0, y = 20.0 }
speed = 4.5
deploy_cost = 33.0
battery = 71.0
"#;
        let s = Scenario::from_toml_str(text).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.robots[0].state, RobotState::Idle);
        assert_eq!(s.task.thresholds.max_robots, Some(6));
        assert_eq!(s.task.thresholds.max_time, None);
        let c = s.task.constraints().next().unwrap();
        assert_eq!(c.relation, Relation::SameRobot);
        assert_eq!(c.left, CapabilityKind::Sensing(0));
    }

    #[test]
    fn invalid_files_are_rejected() {
        let s = generate_scenario(1, 3, &GenerationRanges::default()).unwrap();
        let text = s.to_toml_string().unwrap().replacen("id = 1", "id = 5", 1);
        assert!(Scenario::from_toml_str(&text).is_err());
        let negative = s.to_toml_string().unwrap().replacen("speed = ", "speed = -", 1);
        assert!(Scenario::from_toml_str(&negative).is_err());
    }

    #[test]
    fn load_reports_path() {
        let err = Scenario::load("/nonexistent/scenario.toml").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/scenario.toml"));
    }
}
