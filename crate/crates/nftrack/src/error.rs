use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("index out of range: strip {strip} of {strips}, element {element} of {elements}")]
    Index {
        strip: usize,
        strips: usize,
        element: usize,
        elements: usize,
    },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("root not found: {0}")]
    NoRoot(String),
    #[error("transmit power {power} W exceeds budget {budget} W")]
    Power { power: f64, budget: f64 },
    #[error("not enough pilots: {pilots} pilots for {arcs} radial samples")]
    Pilots { pilots: usize, arcs: usize },
    #[error("unknown preset `{0}`")]
    Preset(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
