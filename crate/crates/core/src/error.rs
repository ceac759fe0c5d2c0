use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("domain is not convex")]
    NonConvexDomain,
    #[error("origin ({x}, {y}) is not strictly inside the domain")]
    OriginOutside { x: f64, y: f64 },
    #[error("{what} = {value} is outside its valid range")]
    OutOfDomain { what: &'static str, value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph has {n} nodes; exhaustive enumeration is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("graph has {n} nodes; at least 3 are required")]
    DegenerateN { n: usize },
    #[error("coincident nodes make the connectivity threshold unbounded")]
    DegenerateDistance,
    #[error("no bin has at least {min_count} samples")]
    InsufficientData { min_count: usize },
}

impl Error {
    pub(crate) fn out_of_domain(what: &'static str, value: f64) -> Self {
        Error::OutOfDomain { what, value }
    }
}
