use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("subgroup of Z_{modulus}^2 generated by {generators:?} is not invariant under the order-{d} twist")]
    NotInvariant {
        modulus: u32,
        d: u32,
        generators: Vec<[u32; 2]>,
    },

    #[error("group of order {order} exceeds the capacity bound {bound}")]
    Capacity { order: usize, bound: usize },

    #[error("exceptional group (order {order}) admits no rigid action on a curve of genus at least two")]
    Exceptional { order: usize },

    /// A structural fact that must hold for every valid input was violated.
    #[error("internal contradiction: {0}")]
    Contradiction(String),

    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn contradiction(msg: impl Into<String>) -> Self {
        Error::Contradiction(msg.into())
    }
}
