//! The fiber-product subgroup `{(u, v) : u = v in Q}` of `F_s x F_s` for a
//! finite presentation of `Q`, and the reduction of its membership problem
//! to the word problem of `Q`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{PermRep, Word};

pub const DEFAULT_BALL_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    rank: usize,
    relators: Vec<Word>,
}

impl FinitePresentation {
    pub fn new(rank: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if r.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: r.rank(),
                });
            }
            if r.is_identity() {
                return Err(Error::Parse("relators must be nonempty".into()));
            }
        }
        Ok(FinitePresentation { rank, relators })
    }

    /// `"rank=2; relators=abAB,aaa"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rank = None;
        let mut relators_text = "";
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "rank" => {
                    rank = Some(value.trim().parse::<usize>().map_err(|e| {
                        Error::Parse(format!("bad rank {value:?}: {e}"))
                    })?)
                }
                "relators" => relators_text = value,
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let rank = rank.ok_or_else(|| Error::Parse("missing rank".into()))?;
        let relators = relators_text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Word::parse(s, rank))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rank, relators)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(Word::to_string).collect();
        write!(f, "rank={}; relators={}", self.rank, rels.join(","))
    }
}

/// An element of `F_s x F_s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairWord {
    pub left: Word,
    pub right: Word,
}

impl PairWord {
    pub fn new(left: Word, right: Word) -> Self {
        assert_eq!(left.rank(), right.rank());
        PairWord { left, right }
    }

    pub fn identity(rank: usize) -> Self {
        PairWord::new(Word::identity(rank), Word::identity(rank))
    }

    /// `"(word, word)"`, with `1` or the empty string for the identity.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("pair {text:?} must look like (u, v)")))?;
        let (l, r) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("pair {text:?} needs a comma")))?;
        Ok(PairWord::new(Word::parse(l, rank)?, Word::parse(r, rank)?))
    }

    pub fn multiply(&self, other: &PairWord) -> PairWord {
        PairWord::new(&self.left * &other.left, &self.right * &other.right)
    }

    pub fn inverse(&self) -> PairWord {
        PairWord::new(self.left.inverse(), self.right.inverse())
    }

    /// `left * right^-1`, trivial in `Q` exactly for members.
    pub fn difference(&self) -> Word {
        &self.left * &self.right.inverse()
    }
}

impl fmt::Display for PairWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            self.left.to_string_or_one(),
            self.right.to_string_or_one()
        )
    }
}

/// Decides `w = 1` in some presented group.
pub trait WordProblemOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool>;
}

impl<F: Fn(&Word) -> Result<bool>> WordProblemOracle for F {
    fn is_trivial(&self, w: &Word) -> Result<bool> {
        self(w)
    }
}

/// `{(a_i, a_i)} U {(1, r_j)}`.
pub fn mihailova_generators(p: &FinitePresentation) -> Vec<PairWord> {
    let diagonal = (0..p.rank).map(|i| {
        let a = Word::generator(p.rank, i);
        PairWord::new(a.clone(), a)
    });
    let relators = p
        .relators
        .iter()
        .map(|r| PairWord::new(Word::identity(p.rank), r.clone()));
    diagonal.chain(relators).collect()
}

pub fn fiber_membership(pair: &PairWord, oracle: &dyn WordProblemOracle) -> Result<bool> {
    oracle.is_trivial(&pair.difference())
}

/// Word-problem oracle from a permutation representation of the presented
/// group. Sound as a decision procedure only when the representation is
/// faithful, which the caller vouches for.
#[derive(Debug, Clone)]
pub struct PermutationOracle {
    rep: PermRep,
}

pub fn finite_quotient_oracle(p: &FinitePresentation, images: PermRep) -> Result<PermutationOracle> {
    if images.rank() != p.rank {
        return Err(Error::RankMismatch {
            left: p.rank,
            right: images.rank(),
        });
    }
    let oracle = PermutationOracle { rep: images };
    for r in &p.relators {
        if !oracle.evaluates_to_identity(r) {
            return Err(Error::RelatorViolated(r.to_string()));
        }
    }
    Ok(oracle)
}

impl PermutationOracle {
    fn evaluates_to_identity(&self, w: &Word) -> bool {
        (0..self.rep.degree()).all(|i| self.rep.act(i, w) == i)
    }

    pub fn representation(&self) -> &PermRep {
        &self.rep
    }

    /// Image of `w` as a permutation in one-line form.
    pub fn image(&self, w: &Word) -> Vec<usize> {
        (0..self.rep.degree()).map(|i| self.rep.act(i, w)).collect()
    }
}

impl WordProblemOracle for PermutationOracle {
    fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.evaluates_to_identity(w))
    }
}

/// Products of at most `radius` generators and inverses.
pub fn enumerate_ball(gens: &[PairWord], radius: usize, cap: usize) -> Result<BTreeSet<PairWord>> {
    let rank = match gens.first() {
        Some(g) => g.left.rank(),
        None => 0,
    };
    let letters: Vec<PairWord> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut ball = BTreeSet::from([PairWord::identity(rank)]);
    let mut frontier = vec![PairWord::identity(rank)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &letters {
                let y = x.multiply(g);
                if ball.contains(&y) {
                    continue;
                }
                if ball.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "fiber-product ball",
                        cap,
                    });
                }
                ball.insert(y.clone());
                next.push(y);
            }
        }
        frontier = next;
    }
    Ok(ball)
}
