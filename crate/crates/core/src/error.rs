use thiserror::Error;

/// Errors shared by the simulation and closed-form modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the documented domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form denominator vanished at this phase parameter.
    #[error("singular parameter: {expression} vanishes at phi = {phi}")]
    SingularParameter { phi: f64, expression: &'static str },

    /// The requested quantity is undefined for the zero solution.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// A branch-specific denominator of one of the decay-rate forms vanished,
    /// which cannot happen on a valid solution branch.
    #[error("decay-rate form {form} is degenerate: denominator {denominator} vanishes")]
    BranchDegenerate {
        form: usize,
        denominator: &'static str,
    },

    /// A series evaluation point lies outside the convergence region.
    #[error("series diverges: term ratio modulus {ratio} is not below {bound}")]
    DivergentSeries { ratio: f64, bound: f64 },

    /// Weight reached the lattice truncation boundary, so the finite window
    /// no longer represents the infinite line.
    #[error("boundary leak: edge weight fraction {fraction:e} exceeds threshold")]
    BoundaryLeak { fraction: f64 },

    /// Not enough usable data points for a fit.
    #[error("insufficient data: need {needed} points, found {found}")]
    InsufficientData { needed: usize, found: usize },

    /// The candidate state decays (or grows) too fast for the requested
    /// half-width to stay inside double-precision range.
    #[error(
        "half-width cap {cap} for |theta_s|^2 = {theta_s_abs_sq} leaves no sites beyond margin {margin}"
    )]
    OverflowCap {
        cap: i64,
        theta_s_abs_sq: f64,
        margin: i64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
