use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("seed pair (0, 0) generates the zero sequence")]
    ZeroSeed,

    #[error("{name} must be {requirement}, got {value}")]
    OutOfRange {
        name: &'static str,
        requirement: &'static str,
        value: String,
    },

    #[error("cannot parse {0:?} as a nonnegative rational (use p/q or a decimal)")]
    Parse(String),

    #[error("level {requested} exceeds the enumeration cap of {cap}")]
    LevelCap { requested: u32, cap: u32 },

    #[error("row {level} holds {states} aggregated states, over the budget of {budget}")]
    StateBudget {
        level: u32,
        states: usize,
        budget: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("polynomial has no real root")]
    NoRealRoot,

    #[error(
        "bracket [{lo}, {hi}] does not straddle a sign change of gamma \
         (gamma({lo}) = {gamma_lo:.6}, gamma({hi}) = {gamma_hi:.6})"
    )]
    SameSignBracket {
        lo: f64,
        hi: f64,
        gamma_lo: f64,
        gamma_hi: f64,
    },
}

impl Error {
    /// True for the errors raised by the enumeration memory guard.
    pub fn is_resource_guard(&self) -> bool {
        matches!(self, Error::LevelCap { .. } | Error::StateBudget { .. })
    }

    pub(crate) fn out_of_range(
        name: &'static str,
        requirement: &'static str,
        value: impl std::fmt::Display,
    ) -> Self {
        Error::OutOfRange {
            name,
            requirement,
            value: value.to_string(),
        }
    }
}
