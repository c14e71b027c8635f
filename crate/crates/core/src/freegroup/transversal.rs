use super::graph::{positive_first_bfs, SubgroupGraph};
use super::word::{Letter, Word};
use crate::error::Result;

/// Left coset representatives of a finite-index subgroup `H`.
///
/// Coset `i` is `reps[i] H`; `reps[0]` is the empty word. The left coset
/// `gH` is identified with the graph vertex reached by reading `g^-1` from
/// the base, and the representatives come from a spanning tree of the left
/// multiplication action, so every suffix of a representative is again a
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    reps: Vec<Word>,
    vertex_of: Vec<usize>,
    coset_of_vertex: Vec<usize>,
}

impl Transversal {
    pub fn new(h: &SubgroupGraph) -> Result<Self> {
        let m = h.finite_index()?;
        let rank = h.rank_of_ambient();
        // left multiplication by y sends the coset at vertex v to v . y^-1
        let order = positive_first_bfs(m, rank, 0, |v, l| h.step(v, l.inv()));
        let mut reps: Vec<Option<Word>> = vec![None; m];
        let mut vertex_of = Vec::with_capacity(m);
        let mut coset_of_vertex = vec![usize::MAX; m];
        for (v, parent) in order {
            let rep = match parent {
                None => Word::identity(rank),
                Some((p, l)) => {
                    let tail = reps[p].as_ref().expect("parent visited first");
                    &letter_word(rank, l) * tail
                }
            };
            coset_of_vertex[v] = vertex_of.len();
            vertex_of.push(v);
            reps[v] = Some(rep);
        }
        let reps = vertex_of
            .iter()
            .map(|&v| reps[v].clone().expect("every coset reached"))
            .collect();
        Ok(Transversal {
            reps,
            vertex_of,
            coset_of_vertex,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    pub fn rep(&self, coset: usize) -> &Word {
        &self.reps[coset]
    }

    /// Graph vertex (right coset `H t^-1`) belonging to left coset `t H`.
    pub fn vertex_of(&self, coset: usize) -> usize {
        self.vertex_of[coset]
    }

    pub fn coset_of(&self, h: &SubgroupGraph, g: &Word) -> usize {
        let v = h
            .read_from(0, &g.inverse())
            .expect("finite-index graphs are complete");
        self.coset_of_vertex[v]
    }

    /// `g = reps[t] * rest` with `rest` in `H`.
    pub fn decompose(&self, h: &SubgroupGraph, g: &Word) -> (usize, Word) {
        let t = self.coset_of(h, g);
        let rest = &self.reps[t].inverse() * g;
        debug_assert!(h.contains(&rest));
        (t, rest)
    }
}

fn letter_word(rank: usize, l: Letter) -> Word {
    Word::reduce(rank, [l]).expect("letter in range")
}

/// Left coset decomposition `g = reps[t] * h`.
pub fn left_coset_decompose(g: &Word, h: &SubgroupGraph, t: &Transversal) -> (usize, Word) {
    t.decompose(h, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn cyclic(m: usize) -> SubgroupGraph {
        let cyc: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        SubgroupGraph::from_permutations(&[cyc.clone(), cyc]).unwrap()
    }

    #[test]
    fn transversal_examples() {
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert_eq!(Transversal::new(&whole).unwrap().reps(), &[w("")]);
        assert_eq!(Transversal::new(&cyclic(3)).unwrap().reps(), &[w(""), w("a"), w("aa")]);
        assert_eq!(Transversal::new(&cyclic(2)).unwrap().reps(), &[w(""), w("a")]);
        let inf = SubgroupGraph::parse_generators(2, "a").unwrap();
        assert_eq!(Transversal::new(&inf), Err(Error::InfiniteIndex));
    }

    #[test]
    fn decompose_examples() {
        let h = cyclic(3);
        let t = Transversal::new(&h).unwrap();
        assert_eq!(left_coset_decompose(&w(""), &h, &t), (0, w("")));
        let (c, rest) = left_coset_decompose(&w("b"), &h, &t);
        assert_eq!(t.rep(c), &w("a"));
        assert_eq!(rest, w("Ab"));
        assert_eq!(left_coset_decompose(&w("aaa"), &h, &t), (0, w("aaa")));
    }

    #[test]
    fn reps_are_suffix_closed_and_sound() {
        // a -> (0 1), b -> (1 2): the right tree paths "", "a", "ab" are not a
        // left transversal here, the left-action tree must be used
        let h = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        let t = Transversal::new(&h).unwrap();
        assert_eq!(t.len(), 3);
        for (i, r) in t.reps().iter().enumerate() {
            assert_eq!(t.decompose(&h, r), (i, Word::identity(2)));
            for k in 0..=r.len() {
                let suffix = Word::reduce(2, r.letters()[k..].iter().copied()).unwrap();
                assert!(t.reps().contains(&suffix), "{suffix} missing");
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let between = &t.rep(i).inverse() * t.rep(j);
                assert_eq!(h.contains(&between), i == j);
            }
        }
    }
}
