//! Error type shared across the crate.

/// Errors produced while validating inputs or solving.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A settings grid must describe at least two observers.
    #[error("a settings grid needs at least 2 parties, got {0}")]
    TooFewParties(usize),

    /// Every observer must have at least one analyzer setting.
    #[error("party {0} has no settings")]
    EmptyParty(usize),

    /// An angle was NaN or infinite.
    #[error("non-finite angle for party {party}, setting {setting}")]
    NonFiniteAngle { party: usize, setting: usize },

    /// A bare direction (no grid context) was built from non-finite angles.
    #[error("non-finite analyzer direction: theta = {theta}, phi = {phi}")]
    NonFiniteDirection { theta: f64, phi: f64 },

    /// An operation restricted to equatorial-plane settings received a
    /// direction with a polar component.
    #[error(
        "party {party}, setting {setting} is not coplanar: theta = {theta} (expected pi/2 exactly)"
    )]
    NotCoplanar {
        party: usize,
        setting: usize,
        theta: f64,
    },

    /// The three-qubit probability formula was handed a different party count.
    #[error("joint probability formula is defined for exactly 3 parties, got {0}")]
    NotThreeParties(usize),

    /// Outcome and direction lists must be the same length.
    #[error("got {outcomes} outcomes for {parties} parties")]
    OutcomeCountMismatch { outcomes: usize, parties: usize },

    /// Visibility must be a noise weight in [0, 1].
    #[error("visibility {0} is outside [0, 1]")]
    VisibilityRange(f64),

    /// A correlation tensor entry left the physical range.
    #[error("correlation tensor entry {index} = {value} is outside [-1, 1]")]
    EntryRange { index: usize, value: f64 },

    /// Tensor dimensions and value count disagree.
    #[error("tensor with dims {dims:?} needs {expected} values, got {got}")]
    TensorShape {
        dims: Vec<usize>,
        expected: usize,
        got: usize,
    },

    /// Strategy enumeration would exceed the configured size limit.
    #[error(
        "{total} total settings exceed the enumeration cap of {cap} \
         (2^{total} deterministic strategies)"
    )]
    CapExceeded { total: usize, cap: usize },

    /// A prebuilt strategy basis was paired with a grid of another shape.
    #[error("strategy basis for counts {basis:?} cannot serve a grid with counts {grid:?}")]
    BasisMismatch { basis: Vec<usize>, grid: Vec<usize> },

    /// A strategy's per-party assignment counts do not match the grid.
    #[error("strategy assigns {got} values to party {party}, grid has {expected} settings")]
    StrategyShape {
        party: usize,
        got: usize,
        expected: usize,
    },

    /// Invalid search configuration (coefficients, tolerance, restarts).
    #[error("invalid optimizer configuration: {0}")]
    BadConfig(String),

    /// The LP solver lost numerical footing; solutions from well-posed
    /// problems built by this crate should never trigger this.
    #[error("numerical failure in the LP solver: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
