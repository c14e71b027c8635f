use std::sync::Arc;

use super::element::{AmalgamElement, Double};
use super::factor::{FiniteFactor, FreeFactor};
use crate::error::{Error, Result};
use crate::freegroup::{FiniteGroupTable, SubgroupGraph, Word, DEFAULT_ELEMENT_CAP};

/// Quotient map `L = G *_H G -> L/N = Q *_P Q` for `N` normal in `G` and
/// contained in `H`, with `Q = G/N` and `P = H/N`.
#[derive(Debug, Clone)]
pub struct Projection {
    n: SubgroupGraph,
    q: Arc<FiniteGroupTable>,
    target: Double<FiniteFactor>,
}

impl Projection {
    pub fn new(source: &Double<FreeFactor>, n: SubgroupGraph) -> Result<Self> {
        Self::with_cap(source, n, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(source: &Double<FreeFactor>, n: SubgroupGraph, cap: usize) -> Result<Self> {
        if !n.is_normal() {
            return Err(Error::NotNormal);
        }
        let h = source.factor().subgroup();
        if let Some(w) = n.basis().iter().find(|w| !h.contains(w)) {
            return Err(Error::NotContained(w.to_string()));
        }
        let q = Arc::new(FiniteGroupTable::generated_by(&n.coset_action()?, cap)?);
        let p_gens: Vec<usize> = h.basis().iter().map(|w| q.evaluate(w)).collect();
        let target = Double::new(FiniteFactor::new(q.clone(), &p_gens));
        Ok(Projection { n, q, target })
    }

    pub fn kernel(&self) -> &SubgroupGraph {
        &self.n
    }

    pub fn quotient(&self) -> &FiniteGroupTable {
        &self.q
    }

    pub fn target(&self) -> &Double<FiniteFactor> {
        &self.target
    }

    pub fn map_word(&self, w: &Word) -> usize {
        self.q.evaluate(w)
    }

    /// The projection `phi2`.
    pub fn apply(&self, source: &Double<FreeFactor>, u: &AmalgamElement<Word>) -> AmalgamElement<usize> {
        source.map_into(u, &self.target, |w| self.q.evaluate(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::Side;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn rips() -> (Double<FreeFactor>, Projection) {
        let h = SubgroupGraph::parse_generators(2, "bA, abAA, aaa, aab").unwrap();
        let l = Double::new(FreeFactor::new(h.clone()).unwrap());
        let p = Projection::new(&l, h).unwrap();
        (l, p)
    }

    #[test]
    fn kernel_elements_vanish() {
        let (l, p) = rips();
        for n in ["bA", "aaa", "abAA", "aabbAbaa"] {
            let u = l.embed_subgroup_element(&w(n)).unwrap();
            let image = p.apply(&l, &u);
            assert!(p.target().is_identity(&image), "{n}");
        }
    }

    #[test]
    fn kernel_basis_element_survives() {
        let (l, p) = rips();
        let k = l.normal_form([(Side::One, &w("a")), (Side::Two, &w("A"))]);
        let image = p.apply(&l, &k);
        assert!(!p.target().is_identity(&image));
        assert_eq!(image.len(), 2);
        assert_eq!(p.quotient().order(), 3);
        // P is trivial when N = H
        assert_eq!(p.target().factor().subgroup_order(), 1);
    }

    #[test]
    fn tail_outside_n_maps_into_p() {
        let h = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let n = h.normal_core().unwrap();
        let l = Double::new(FreeFactor::new(h.clone()).unwrap());
        let p = Projection::new(&l, n.clone()).unwrap();
        let outside = h.basis().into_iter().find(|x| !n.contains(x)).unwrap();
        let image = p.apply(&l, &l.embed_subgroup_element(&outside).unwrap());
        assert!(image.is_empty());
        assert_ne!(*image.tail(), 0);
    }

    #[test]
    fn bad_kernels_rejected() {
        let (l, _) = rips();
        let not_normal = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(Projection::new(&l, not_normal).unwrap_err(), Error::NotNormal);
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert!(matches!(
            Projection::new(&l, whole).unwrap_err(),
            Error::NotContained(_)
        ));
    }
}
