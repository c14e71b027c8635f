use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::factor::{FactorContext, FreeFactor};
use crate::error::{Error, Result};
use crate::freegroup::Word;

/// Which of the two copies of the factor a syllable lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Side::One => 1,
            Side::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Side> {
        match n {
            1 => Some(Side::One),
            2 => Some(Side::Two),
            _ => None,
        }
    }
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

/// Normal form `t_1^(c_1) ... t_k^(c_k) * tail`: alternating copies,
/// non-identity coset representatives, and a tail in the amalgamated
/// subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmalgamElement<E> {
    syllables: Vec<(Side, E)>,
    tail: E,
}

impl<E> AmalgamElement<E> {
    pub fn syllables(&self) -> &[(Side, E)] {
        &self.syllables
    }

    pub fn tail(&self) -> &E {
        &self.tail
    }

    /// Number of syllables.
    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }
}

impl<E: Serialize> Serialize for AmalgamElement<E> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AmalgamElement", 2)?;
        st.serialize_field("syllables", &self.syllables)?;
        st.serialize_field("tail", &self.tail)?;
        st.end()
    }
}

/// The double `A *_B A` over a factor context. All arithmetic goes through
/// here; elements are always in normal form.
#[derive(Debug, Clone)]
pub struct Double<F> {
    factor: F,
}

impl<F: FactorContext> Double<F> {
    pub fn new(factor: F) -> Self {
        Double { factor }
    }

    pub fn factor(&self) -> &F {
        &self.factor
    }

    pub fn identity(&self) -> AmalgamElement<F::Elem> {
        AmalgamElement {
            syllables: Vec::new(),
            tail: self.factor.identity(),
        }
    }

    pub fn is_identity(&self, u: &AmalgamElement<F::Elem>) -> bool {
        u.syllables.is_empty() && self.factor.is_identity(&u.tail)
    }

    /// Right-multiplies `u` in place by `g` taken in copy `side`.
    ///
    /// The tail is absorbed into `g`; if the last syllable is in the same
    /// copy it is absorbed as well, and the product is split again into a
    /// representative and a new tail. A vanishing representative leaves the
    /// previous syllable untouched, since multiplying a representative by an
    /// element of `B` on the right stays in its coset.
    pub fn push(&self, u: &mut AmalgamElement<F::Elem>, side: Side, g: &F::Elem) {
        let mut x = self.factor.multiply(&u.tail, g);
        if let Some((last, _)) = u.syllables.last() {
            if *last == side {
                let (_, t) = u.syllables.pop().expect("checked non-empty");
                x = self.factor.multiply(&t, &x);
            }
        }
        let (coset, rest) = self.factor.decompose(&x);
        if coset != 0 {
            u.syllables.push((side, self.factor.rep(coset)));
        }
        u.tail = rest;
    }

    /// Multiplies the tail by an element known to lie in `B`.
    fn push_subgroup(&self, u: &mut AmalgamElement<F::Elem>, b: &F::Elem) {
        debug_assert!(self.factor.in_subgroup(b));
        u.tail = self.factor.multiply(&u.tail, b);
    }

    /// Normal form of a product of factor elements, each in a given copy.
    pub fn normal_form<'a, I>(&self, items: I) -> AmalgamElement<F::Elem>
    where
        I: IntoIterator<Item = (Side, &'a F::Elem)>,
        F::Elem: 'a,
    {
        let mut u = self.identity();
        for (side, g) in items {
            self.push(&mut u, side, g);
        }
        u
    }

    /// Single-syllable element `g^(side)`.
    pub fn embed(&self, side: Side, g: &F::Elem) -> AmalgamElement<F::Elem> {
        self.normal_form([(side, g)])
    }

    pub fn multiply(
        &self,
        u: &AmalgamElement<F::Elem>,
        v: &AmalgamElement<F::Elem>,
    ) -> AmalgamElement<F::Elem> {
        let mut out = u.clone();
        for (side, t) in &v.syllables {
            self.push(&mut out, *side, t);
        }
        self.push_subgroup(&mut out, &v.tail);
        out
    }

    pub fn invert(&self, u: &AmalgamElement<F::Elem>) -> AmalgamElement<F::Elem> {
        let mut out = self.identity();
        self.push_subgroup(&mut out, &self.factor.invert(&u.tail));
        for (side, t) in u.syllables.iter().rev() {
            self.push(&mut out, *side, &self.factor.invert(t));
        }
        out
    }

    /// `u v u^-1 v^-1`.
    pub fn commutator(
        &self,
        u: &AmalgamElement<F::Elem>,
        v: &AmalgamElement<F::Elem>,
    ) -> AmalgamElement<F::Elem> {
        let uv = self.multiply(u, v);
        let uvu = self.multiply(&uv, &self.invert(u));
        self.multiply(&uvu, &self.invert(v))
    }

    /// Checks the normal-form invariants of an element.
    pub fn is_normal_form(&self, u: &AmalgamElement<F::Elem>) -> bool {
        let alternating = u.syllables.windows(2).all(|w| w[0].0 != w[1].0);
        let reps = u.syllables.iter().all(|(_, t)| {
            let (coset, _) = self.factor.decompose(t);
            coset != 0 && self.factor.rep(coset) == *t
        });
        alternating && reps && self.factor.in_subgroup(&u.tail)
    }

    /// The same element, with syllables and tail mapped through `f`
    /// (applied to representatives and tail alike) and re-normalized in
    /// `target`.
    pub fn map_into<G: FactorContext>(
        &self,
        u: &AmalgamElement<F::Elem>,
        target: &Double<G>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> AmalgamElement<G::Elem> {
        let mut out = target.identity();
        for (side, t) in &u.syllables {
            target.push(&mut out, *side, &f(t));
        }
        let tail = f(&u.tail);
        let last = out.syllables.last().map_or(Side::One, |(s, _)| *s);
        target.push(&mut out, last, &tail);
        out
    }
}

impl Double<FreeFactor> {
    pub fn rank(&self) -> usize {
        self.factor.rank()
    }

    /// Element of `H`, lying in both copies at once.
    pub fn embed_subgroup_element(&self, h: &Word) -> Result<AmalgamElement<Word>> {
        if !self.factor.in_subgroup(h) {
            return Err(Error::NotInSubgroup(h.to_string_or_one()));
        }
        Ok(AmalgamElement {
            syllables: Vec::new(),
            tail: h.clone(),
        })
    }

    /// Parses `"1:a 2:A 1:ab"`, optionally ending in `"h:word"`. The word
    /// `"identity"` is accepted for the identity.
    pub fn parse(&self, text: &str) -> Result<AmalgamElement<Word>> {
        let rank = self.rank();
        let mut items: Vec<(Side, Word)> = Vec::new();
        let mut tail: Option<Word> = None;
        for token in text.split_whitespace() {
            if token == "identity" {
                continue;
            }
            if tail.is_some() {
                return Err(Error::Parse(format!(
                    "token {token:?} after the h: tail in {text:?}"
                )));
            }
            let (prefix, word) = token
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("syllable {token:?} lacks a copy prefix")))?;
            let word = Word::parse(word, rank)?;
            match prefix {
                "1" => items.push((Side::One, word)),
                "2" => items.push((Side::Two, word)),
                "h" => {
                    if !self.factor.in_subgroup(&word) {
                        return Err(Error::NotInSubgroup(word.to_string_or_one()));
                    }
                    tail = Some(word);
                }
                _ => return Err(Error::Parse(format!("unknown copy prefix in {token:?}"))),
            }
        }
        let mut u = self.normal_form(items.iter().map(|(s, w)| (*s, w)));
        if let Some(h) = tail {
            self.push_subgroup(&mut u, &h);
        }
        Ok(u)
    }

    /// The identification map onto `G`: forget the copies.
    pub fn phi1(&self, u: &AmalgamElement<Word>) -> Word {
        let mut out = Word::identity(self.rank());
        for (_, t) in &u.syllables {
            out = &out * t;
        }
        &out * &u.tail
    }
}

impl fmt::Display for AmalgamElement<Word> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() && self.tail.is_identity() {
            return write!(f, "identity");
        }
        let mut first = true;
        for (side, t) in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", side.number(), t)?;
            first = false;
        }
        if !self.tail.is_identity() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "h:{}", self.tail)?;
        }
        Ok(())
    }
}

impl fmt::Display for AmalgamElement<usize> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(side, t)| format!("{}:#{}", side.number(), t))
            .chain(std::iter::once(format!("h:#{}", self.tail)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
