use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid building: {0}")]
    InvalidBuilding(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate link: UAV coincides with user at ({x}, {y}, {z})")]
    DegenerateLink { x: f64, y: f64, z: f64 },

    #[error("{quantity} out of domain: {value}")]
    Domain { quantity: &'static str, value: f64 },

    #[error("lattice needs {required} evaluations but the budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("every initial particle has a non-finite cost")]
    InitializationFailed,

    #[error("no lattice point has a finite cost")]
    NoFeasiblePoint,

    #[error("cost is not finite at the start point")]
    NonFiniteStart,

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
