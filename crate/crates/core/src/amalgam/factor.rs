use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::Result;
use crate::freegroup::{FiniteGroupTable, SubgroupGraph, Transversal, Word};

/// One factor `A` of a double `A *_B A` together with the amalgamated
/// subgroup `B` and a fixed left transversal of `B` in `A`.
pub trait FactorContext {
    type Elem: Clone + Eq + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn in_subgroup(&self, a: &Self::Elem) -> bool;

    /// `a = rep(t) * rest` with `rest` in `B`; `t = 0` iff `a` is in `B`.
    fn decompose(&self, a: &Self::Elem) -> (usize, Self::Elem);

    fn rep(&self, coset: usize) -> Self::Elem;

    fn coset_count(&self) -> usize;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }
}

/// `G = F_r` with a finite-index subgroup `H`.
#[derive(Debug, Clone)]
pub struct FreeFactor {
    rank: usize,
    h: SubgroupGraph,
    transversal: Transversal,
}

impl FreeFactor {
    pub fn new(h: SubgroupGraph) -> Result<Self> {
        let transversal = Transversal::new(&h)?;
        Ok(FreeFactor {
            rank: h.rank_of_ambient(),
            h,
            transversal,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn subgroup(&self) -> &SubgroupGraph {
        &self.h
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }
}

impl FactorContext for FreeFactor {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity(self.rank)
    }

    fn multiply(&self, a: &Word, b: &Word) -> Word {
        a * b
    }

    fn invert(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn in_subgroup(&self, a: &Word) -> bool {
        self.h.contains(a)
    }

    fn decompose(&self, a: &Word) -> (usize, Word) {
        self.transversal.decompose(&self.h, a)
    }

    fn rep(&self, coset: usize) -> Word {
        self.transversal.rep(coset).clone()
    }

    fn coset_count(&self) -> usize {
        self.transversal.len()
    }

    fn is_identity(&self, a: &Word) -> bool {
        a.is_identity()
    }
}

/// Finite group `Q` (elements are table indices) with subgroup `P`.
/// The representative of each left coset `qP` is its least element index.
#[derive(Debug, Clone)]
pub struct FiniteFactor {
    q: Arc<FiniteGroupTable>,
    in_p: Vec<bool>,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl FiniteFactor {
    /// `p_gens` generate `P`.
    pub fn new(q: Arc<FiniteGroupTable>, p_gens: &[usize]) -> Self {
        let p = q.subgroup_closure(p_gens);
        let mut in_p = vec![false; q.order()];
        for &x in &p {
            in_p[x] = true;
        }
        let mut coset_of = vec![usize::MAX; q.order()];
        let mut reps = Vec::new();
        for x in 0..q.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &y in &p {
                coset_of[q.multiply(x, y)] = id;
            }
        }
        FiniteFactor {
            q,
            in_p,
            coset_of,
            reps,
        }
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.q
    }

    pub fn subgroup_order(&self) -> usize {
        self.in_p.iter().filter(|&&b| b).count()
    }
}

impl FactorContext for FiniteFactor {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.q.identity()
    }

    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.q.multiply(*a, *b)
    }

    fn invert(&self, a: &usize) -> usize {
        self.q.inverse(*a)
    }

    fn in_subgroup(&self, a: &usize) -> bool {
        self.in_p[*a]
    }

    fn decompose(&self, a: &usize) -> (usize, usize) {
        let t = self.coset_of[*a];
        let rep = self.reps[t];
        (t, self.q.multiply(self.q.inverse(rep), *a))
    }

    fn rep(&self, coset: usize) -> usize {
        self.reps[coset]
    }

    fn coset_count(&self) -> usize {
        self.reps.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_factor_cosets() {
        let h = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let q = Arc::new(h.coset_action().unwrap().image_group().unwrap());
        // P = image of the point stabilizer, order 2 in S3
        let p_gens: Vec<usize> = h.basis().iter().map(|w| q.evaluate(w)).collect();
        let f = FiniteFactor::new(q.clone(), &p_gens);
        assert_eq!(f.subgroup_order(), 2);
        assert_eq!(f.coset_count(), 3);
        assert_eq!(f.rep(0), 0);
        for x in 0..q.order() {
            let (t, rest) = f.decompose(&x);
            assert!(f.in_subgroup(&rest));
            assert_eq!(f.multiply(&f.rep(t), &rest), x);
            assert_eq!(t == 0, f.in_subgroup(&x));
            assert!(f.rep(t) <= x);
        }
    }

    #[test]
    fn free_factor_decomposition() {
        let h = SubgroupGraph::parse_generators(2, "bA, abAA, aaa, aab").unwrap();
        let f = FreeFactor::new(h).unwrap();
        let a = Word::parse("A", 2).unwrap();
        let (t, rest) = f.decompose(&a);
        assert_eq!(f.rep(t).to_string(), "aa");
        assert_eq!(rest.to_string(), "AAA");
        assert!(FreeFactor::new(SubgroupGraph::parse_generators(2, "a").unwrap()).is_err());
    }
}
