use thiserror::Error;

/// Everything that can go wrong when building or querying monoids and acts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("multiplication is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element 0 is not a two-sided identity (fails at {0})")]
    IdentityLawFails(usize),
    #[error("index {index} out of range (size {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("unit law fails at carrier element {0}")]
    UnitLawFails(usize),
    #[error("action is not associative: {0}.({1}.{2}) != ({0}{1}).{2}")]
    AssociativityFails(usize, usize, usize),
    #[error("acts are over different monoids")]
    MonoidMismatch,
    #[error("constraints are not extendable to an equivariant map (element {0})")]
    InconsistentConstraints(usize),
    #[error("map is not equivariant at s={s}, x={x}")]
    NotEquivariant { s: usize, x: usize },
    #[error("homomorphisms do not share a source")]
    SourceMismatch,
    #[error("homomorphisms do not share a target")]
    TargetMismatch,
    #[error("homomorphisms cannot be composed or are not parallel")]
    ShapeMismatch,
    #[error("map is not a monomorphism")]
    NotMono,
    #[error("square does not commute")]
    NotCommutative,
    #[error("parameter sets are not aligned")]
    ParamMismatch,
    #[error("tuples have different lengths")]
    TupleLengthMismatch,
    #[error("{0} is not in the parameter set")]
    NotASubset(usize),
    #[error("base is not closed under the action (element {0})")]
    BaseNotSubact(usize),
    #[error("element {0} lies in the base")]
    ElementInBase(usize),
    #[error("base is not contained in the required subact (element {0})")]
    BaseNotContained(usize),
    #[error("types over the base differ at element {0}")]
    RestrictionsDiffer(usize),
    #[error("{side} type forks over the base at element {element}")]
    ForkingDetected { side: Side, element: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_index(index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, bound })
    }
}
