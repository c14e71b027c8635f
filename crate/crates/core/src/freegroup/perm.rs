use std::collections::{HashMap, VecDeque};

use super::graph::{check_permutation, SubgroupGraph};
use super::word::Word;
use crate::error::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Right action of `F_r` on `{0..degree}`, one permutation per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermRep {
    perms: Vec<Vec<usize>>,
}

impl PermRep {
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let degree = perms.first().map_or(1, Vec::len);
        for p in &perms {
            check_permutation(p, degree)?;
        }
        Ok(PermRep { perms })
    }

    pub(crate) fn new_unchecked(perms: Vec<Vec<usize>>) -> Self {
        PermRep { perms }
    }

    pub fn degree(&self) -> usize {
        self.perms.first().map_or(1, Vec::len)
    }

    pub fn rank(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Image of point `i` under `w`, acting on the right letter by letter.
    pub fn act(&self, i: usize, w: &Word) -> usize {
        w.letters().iter().fold(i, |p, l| {
            let perm = &self.perms[l.gen];
            if l.inverse {
                perm.iter().position(|&x| x == p).expect("bijection")
            } else {
                perm[p]
            }
        })
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for p in &self.perms {
                if !seen[p[i]] {
                    seen[p[i]] = true;
                    queue.push_back(p[i]);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn image_group(&self) -> Result<FiniteGroupTable> {
        FiniteGroupTable::generated_by(self, DEFAULT_ELEMENT_CAP)
    }
}

/// A finite permutation group with its elements enumerated.
///
/// Elements are indexed in breadth-first order of right multiplication by
/// generator images; index 0 is the identity. `a * b` means "apply `a`,
/// then `b`", matching the right action of words.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    elements: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
    gens: Vec<usize>,
    gen_inverses: Vec<usize>,
    inverses: Vec<usize>,
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&i| b[i as usize]).collect()
}

impl FiniteGroupTable {
    pub fn generated_by(rep: &PermRep, cap: usize) -> Result<Self> {
        let degree = rep.degree();
        let identity: Vec<u32> = (0..degree as u32).collect();
        let gen_perms: Vec<Vec<u32>> = rep
            .perms()
            .iter()
            .map(|p| p.iter().map(|&x| x as u32).collect())
            .collect();

        let mut elements = vec![identity.clone()];
        let mut lookup = HashMap::from([(identity, 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            for g in &gen_perms {
                let next = compose(&elements[frontier], g);
                if !lookup.contains_key(&next) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "permutation group closure",
                            cap,
                        });
                    }
                    lookup.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
            frontier += 1;
        }

        let inverses = elements
            .iter()
            .map(|e| {
                let mut inv = vec![0u32; e.len()];
                for (i, &x) in e.iter().enumerate() {
                    inv[x as usize] = i as u32;
                }
                lookup[&inv]
            })
            .collect::<Vec<_>>();
        let gens: Vec<usize> = gen_perms.iter().map(|g| lookup[g]).collect();
        let gen_inverses = gens.iter().map(|&g| inverses[g]).collect();
        Ok(FiniteGroupTable {
            elements,
            lookup,
            gens,
            gen_inverses,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &[u32] {
        &self.elements[i]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.lookup[&compose(&self.elements[a], &self.elements[b])]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn generator_images(&self) -> &[usize] {
        &self.gens
    }

    /// Image of a word of the ambient free group.
    pub fn evaluate(&self, w: &Word) -> usize {
        w.letters().iter().fold(self.identity(), |acc, l| {
            let g = if l.inverse {
                self.gen_inverses[l.gen]
            } else {
                self.gens[l.gen]
            };
            self.multiply(acc, g)
        })
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.multiply(a, b) == self.multiply(b, a)))
    }

    /// Subgroup generated by the given elements, as a sorted index list.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.multiply(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| member[i]).collect()
    }

    /// Stallings graph of the kernel of `F_r -> self`: the Cayley graph under
    /// right translation by generator images.
    pub fn kernel_graph(&self) -> SubgroupGraph {
        let fwd = (0..self.order())
            .map(|e| self.gens.iter().map(|&g| Some(self.multiply(e, g))).collect())
            .collect();
        SubgroupGraph::canonical(self.gens.len(), fwd, 0)
    }
}

impl SubgroupGraph {
    /// Largest subgroup of `self` normal in the ambient free group: the kernel
    /// of the action on cosets.
    pub fn normal_core(&self) -> Result<SubgroupGraph> {
        self.normal_core_with_cap(DEFAULT_ELEMENT_CAP)
    }

    pub fn normal_core_with_cap(&self, cap: usize) -> Result<SubgroupGraph> {
        let rep = self.coset_action()?;
        Ok(FiniteGroupTable::generated_by(&rep, cap)?.kernel_graph())
    }
}
