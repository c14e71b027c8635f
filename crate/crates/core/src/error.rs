use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("generator index {gen} out of range for free group of rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("subgroup has infinite index")]
    InfiniteIndex,

    #[error("{0} is not an element of the amalgamated subgroup")]
    NotInSubgroup(String),

    #[error("{what} exceeded the cap of {cap} elements")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("IndexTooSmall: [G:H] = {index}, need at least 3")]
    IndexTooSmall { index: usize },

    #[error("RankTooSmall: ambient free rank {rank} has no non-abelian free subgroup")]
    RankTooSmall { rank: usize },

    #[error("NotNormal: the subgroup N is not normal in G")]
    NotNormal,

    #[error("NotContained: basis word {0} of N is not in H")]
    NotContained(String),

    #[error("NRankTooSmall: N has rank {rank}, need a non-abelian free subgroup (rank >= 2)")]
    NormalRankTooSmall { rank: usize },

    #[error("relator {0} is not killed by the supplied permutations")]
    RelatorViolated(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
