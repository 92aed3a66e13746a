//! Front metrics, reference fronts, the enumeration oracle and Promethee II.

pub mod metrics;
pub mod oracle;
pub mod promethee;

pub use metrics::{error_ratio, reference_front, set_coverage, spacing, Front, FrontPoint, OBJECTIVE_TOLERANCE};
pub use oracle::{brute_force_front, is_feasible_coalition, OracleFront, ENUMERATION_LIMIT};
pub use promethee::{promethee_rank, CriteriaWeights, Ranking};
