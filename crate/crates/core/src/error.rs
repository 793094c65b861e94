use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Point and arrow names are carried as
/// strings so messages stay readable after the value that produced them is gone.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("axiom violation at ({point}, {other}): {reason}")]
    AxiomViolation {
        point: String,
        other: String,
        reason: &'static str,
    },
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("point set is not open: {0}")]
    NotOpen(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("map is not continuous at `{0}`")]
    NotContinuous(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    AssociativityViolation(String, String, String),
    #[error("unit law fails at `{0}`")]
    UnitViolation(String),
    #[error("inverse law fails at `{0}`")]
    InverseViolation(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("not a wide subgroupoid: {0}")]
    NotWide(String),
    #[error("carrier mismatch")]
    CarrierMismatch,
    #[error("action is not equivariant: {0}")]
    NotEquivariant(String),
    #[error("action is not free: {0}")]
    NonFreeAction(String),
    #[error("not a groupoid morphism: {0}")]
    NotAMorphism(String),

    #[error("{what} has size {size}, above the bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("arrow topology is not compatible with the groupoid: {0}")]
    NotTopological(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("not a cover: {0}")]
    NotACover(String),
    #[error("cover is not path compatible: charts {i} and {j} differ at `{x}`: {left} vs {right}")]
    NotPathCompatible {
        i: usize,
        j: usize,
        x: String,
        left: String,
        right: String,
    },
    #[error("not a retraction: {0}")]
    NotARetraction(String),
    #[error("no continuous section of the target map exists")]
    NoSection,
    #[error("trivialization is not an isomorphism: {0}")]
    NotAnIso(String),

    #[error("point `{0}` is not in the carrier")]
    PointNotInCarrier(String),
    #[error("atlas charts {i} and {j} disagree at `{x}`")]
    CompViolation { i: usize, j: usize, x: String },
    #[error("germs have different basepoints")]
    BasepointMismatch,
    #[error("section is not continuous at `{0}`")]
    DiscontinuousSection(String),
    #[error("not an atlas: {0}")]
    NotAnAtlas(String),

    #[error("walk step ({0}, {1}) is not comparable")]
    NonComparableStep(String, String),
    #[error("invalid connection: {0}")]
    InvalidConnection(String),
    #[error("invalid geodesic structure: {0}")]
    InvalidGeodesics(String),
    #[error("connection is not flat on chart {0}")]
    NotFlat(usize),
    #[error("chart germs differ for charts {i} and {j} at `{x}`")]
    OverlapMismatch { i: usize, j: usize, x: String },

    #[error("morphism is not the identity on objects")]
    NotIdentityOnObjects,
}

impl Error {
    pub(crate) fn too_large(what: &'static str, size: usize, bound: usize) -> Self {
        Error::TooLarge { what, size, bound }
    }

    /// True for guard-bound failures, which callers usually report differently
    /// from malformed input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
