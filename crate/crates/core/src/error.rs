use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid group parameters: {0}")]
    InvalidParams(String),
    #[error("invalid group element: {0}")]
    InvalidElement(String),
    #[error("degenerate box: {0}")]
    DegenerateBox(String),
    #[error("space `{0}` has infinite volume")]
    InfiniteVolume(String),
    #[error("region is not covered by the chart atlas: {0}")]
    OutsideAtlas(String),
    #[error("translate is not well defined: {0}")]
    NotWellDefined(String),
    #[error("support too small: {0}")]
    InsufficientSupport(String),
    #[error("sofic map is not normalized: {0}")]
    NotNormalized(String),
    #[error("unregistered pair: {0}")]
    UnregisteredPair(String),
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("section failure: {0}")]
    SectionFailure(String),
    #[error("space `{0}` has no finite carrier")]
    InfiniteCarrier(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
