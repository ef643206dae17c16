use dimerwall_exact::ExactError;

/// Every failure the library reports. Variants map one-to-one onto the
/// stable error names used in diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed model file: {0}")]
    Parse(String),
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown catalog model `{0}`")]
    UnknownModel(String),
    #[error("model too large: {0}")]
    TooLarge(String),

    #[error("edge `{0}` does not join a black node to a white node")]
    NotBipartite(String),
    #[error("node `{0}` is univalent")]
    UnivalentNode(String),
    #[error("not a cellular embedding in the torus: {0}")]
    NotTorusCellular(String),
    #[error("the graph is disconnected")]
    Disconnected,
    #[error("invalid rotation at node `{node}`: {reason}")]
    InvalidRotation { node: String, reason: String },
    #[error("the model has no perfect matching")]
    NoPerfectMatching,
    #[error("degenerate model: edges {0:?} lie in no perfect matching")]
    DegenerateModel(Vec<String>),

    #[error("invalid stability parameter: {0}")]
    InvalidParameter(String),
    #[error("stability parameter is not generic: θ(χ_R) = 0 for R = {0:?}")]
    NonGenericParameter(Vec<usize>),
    #[error("arrow pattern violates the relations")]
    InadmissiblePattern,
    #[error("weight lattice has rank {0}, expected 3")]
    RankError(usize),
    #[error("matching valuations are not of the form (h(D), 1): {0}")]
    WeightMismatch(String),
    #[error("fan consistency check failed: {0}")]
    FanConsistency(String),
    #[error("vertex {0} is not reachable from v0")]
    Unreachable(usize),
    #[error("curve {0} is not compact")]
    NonCompactCurve(usize),
    #[error("divisor {0} is not compact")]
    NonCompactDivisor(usize),

    #[error("facet index {index} out of range ({count} facets)")]
    FacetOutOfRange { index: usize, count: usize },
    #[error("several destabilizing subsets support one facet: {0}")]
    WallAmbiguity(String),
    #[error("wall of type II: {0}")]
    TypeII(String),
    #[error("contraction is not primitive: {0}")]
    NonPrimitiveContraction(String),
    #[error("boundary topology contradicts wall type: {0}")]
    TopologyMismatch(String),
    #[error("geometric chamber differs from the census chamber: {0}")]
    GeometryMismatch(String),
    #[error("degree constraint violated: {0}")]
    DegreeViolation(String),
    #[error("integer overflow in {0}")]
    Overflow(String),

    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl Error {
    /// Stable machine-readable name.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            Parse(_) => "Parse",
            UnsupportedVersion(_) => "UnsupportedVersion",
            UnknownNode(_) => "UnknownNode",
            DuplicateId(_) => "DuplicateId",
            UnknownModel(_) => "UnknownModel",
            TooLarge(_) => "TooLarge",
            NotBipartite(_) => "NotBipartite",
            UnivalentNode(_) => "UnivalentNode",
            NotTorusCellular(_) => "NotTorusCellular",
            Disconnected => "Disconnected",
            InvalidRotation { .. } => "InvalidRotation",
            NoPerfectMatching => "NoPerfectMatching",
            DegenerateModel(_) => "DegenerateModel",
            InvalidParameter(_) => "InvalidParameter",
            NonGenericParameter(_) => "NonGenericParameter",
            InadmissiblePattern => "InadmissiblePattern",
            RankError(_) => "RankError",
            WeightMismatch(_) => "WeightMismatch",
            FanConsistency(_) => "FanConsistency",
            Unreachable(_) => "Unreachable",
            NonCompactCurve(_) => "NonCompactCurve",
            NonCompactDivisor(_) => "NonCompactDivisor",
            FacetOutOfRange { .. } => "FacetOutOfRange",
            WallAmbiguity(_) => "WallAmbiguity",
            TypeII(_) => "TypeII",
            NonPrimitiveContraction(_) => "NonPrimitiveContraction",
            TopologyMismatch(_) => "TopologyMismatch",
            GeometryMismatch(_) => "GeometryMismatch",
            DegreeViolation(_) => "DegreeViolation",
            Overflow(_) => "Overflow",
            Exact(ExactError::EmptyInterior) => "EmptyInterior",
            Exact(ExactError::DegeneratePolygon) => "DegeneratePolygon",
            Exact(ExactError::DimensionMismatch { .. }) => "DimensionMismatch",
        }
    }

    /// Errors that signal a broken mathematical invariant rather than bad
    /// input.
    pub fn is_invariant_violation(&self) -> bool {
        use Error::*;
        matches!(
            self,
            WeightMismatch(_)
                | FanConsistency(_)
                | Unreachable(_)
                | WallAmbiguity(_)
                | TypeII(_)
                | NonPrimitiveContraction(_)
                | TopologyMismatch(_)
                | GeometryMismatch(_)
                | DegreeViolation(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
