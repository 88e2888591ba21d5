//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A conserved state failed the admissibility predicate where an
    /// admissible one was required.
    #[error("inadmissible state at {context}: D = {d:.6e}, q = {q:.6e}")]
    Inadmissible { context: String, d: f64, q: f64 },

    /// The pressure equation root finder did not converge. Given the
    /// uniqueness guarantee for admissible inputs this signals a bug or a
    /// state outside the admissible set.
    #[error("pressure recovery failed at {context}: {iters} iterations, scaled residual {residual:.3e}")]
    RecoveryFailed {
        context: String,
        iters: usize,
        residual: f64,
    },

    /// A cell average handed to the scaling limiter was itself outside the
    /// admissible set, so no scaling toward it can help.
    #[error("limiter precondition violated on {mesh} cell {cell}: cell average has D = {d:.6e}, q = {q:.6e}")]
    LimiterPrecondition {
        mesh: &'static str,
        cell: usize,
        d: f64,
        q: f64,
    },

    /// A stage of the time loop failed; wraps the inner failure with step
    /// and time information.
    #[error("stage failure at step {step}, t = {time:.8e}: {source}")]
    Stage {
        step: usize,
        time: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("multi-step integrator needs 4 history levels, have {have}")]
    InsufficientHistory { have: usize },

    #[error("unsupported polynomial degree K = {0}; supported K in {{0, 1, 2}}")]
    UnsupportedDegree(usize),

    #[error("problem `{0}` has no exact solution")]
    NoExactSolution(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("property violation: {0}")]
    PropertyViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wrap an error with step/time diagnostics.
    pub fn at_step(self, step: usize, time: f64) -> Error {
        Error::Stage {
            step,
            time,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
