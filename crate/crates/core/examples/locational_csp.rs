//! Builds the robot-assignment CSP for a hand-made coalition and solves it.

use coalition::csp::max_satisfied_constraints;
use coalition::{
    build_csp, feasibility_degree, solve_csp, CapabilityKind, CapabilityVector, Coalition, FeasibilityWeights,
    LocationalConstraint, Point, Robot, RobotState, Scenario, SubTask, Task, Thresholds,
};

fn robot(id: usize, sensing: [f64; 2], actuating: [f64; 1], x: f64) -> Robot {
    Robot {
        id,
        sensing: CapabilityVector::new(sensing.to_vec()).unwrap(),
        actuating: CapabilityVector::new(actuating.to_vec()).unwrap(),
        position: Point::new(x, 0.0),
        speed: 1.0,
        deploy_cost: 10.0,
        battery: 80.0,
        state: RobotState::Idle,
    }
}

fn main() -> coalition::Result<()> {
    let camera = CapabilityKind::Sensing(0);
    let lidar = CapabilityKind::Sensing(1);
    let gripper = CapabilityKind::Actuating(0);
    let task = Task {
        subtasks: vec![SubTask {
            sensing_req: CapabilityVector::new(vec![1.0, 1.0])?,
            actuating_req: CapabilityVector::new(vec![1.0])?,
            locational_constraints: vec![
                // The camera must ride on the robot that grips; lidar elsewhere.
                LocationalConstraint::same(camera, gripper),
                LocationalConstraint::different(lidar, gripper),
            ],
        }],
        thresholds: Thresholds::default(),
    };
    let robots = vec![
        robot(0, [1.0, 1.0], [0.0], 5.0),
        robot(1, [0.0, 1.0], [1.0], 8.0),
        robot(2, [1.0, 0.0], [1.0], 3.0),
    ];
    let scenario = Scenario::new(0, Point::new(0.0, 0.0), robots, task)?;

    for members in [&[0, 1][..], &[0, 2], &[1, 2], &[0, 1, 2]] {
        let coalition = Coalition::from_members(scenario.len(), members)?;
        let csp = build_csp(&scenario.task, &coalition, &scenario)?;
        let report = feasibility_degree(&coalition, &scenario, FeasibilityWeights::default())?;
        let best = max_satisfied_constraints(&csp);
        match solve_csp(&csp) {
            Some(assignment) => println!("{members:?}: assignment {assignment:?}, degree {}", report.degree),
            None => println!(
                "{members:?}: unsatisfiable ({} of {} constraints at best), degree {:.3}",
                best.satisfied, best.total, report.degree
            ),
        }
    }
    Ok(())
}
