use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::word::{Letter, Word};
use crate::error::{Error, Result};

/// Serializes as a number, or the string `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl Index {
    pub fn finite(self) -> Option<usize> {
        match self {
            Index::Finite(m) => Some(m),
            Index::Infinite => None,
        }
    }
}

impl Serialize for Index {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Index::Finite(m) => s.serialize_u64(*m as u64),
            Index::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(m) => write!(f, "{m}"),
            Index::Infinite => write!(f, "infinite"),
        }
    }
}

/// Folded core Stallings graph of a finitely generated subgroup of `F_rank`.
///
/// Vertex 0 is the base. Vertices are numbered in the order of
/// [`SubgroupGraph::spanning_tree`], so two graphs of the same subgroup are
/// structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupGraph {
    rank: usize,
    fwd: Vec<Vec<Option<usize>>>,
    bwd: Vec<Vec<Option<usize>>>,
}

/// Discovery record of a spanning-tree traversal: the vertex and the
/// `(parent, letter)` edge it was reached through.
pub type TreeStep = (usize, Option<(usize, Letter)>);

/// Breadth-first traversal that prefers positive letters globally: negative
/// letters are only followed once the positive closure of everything visited
/// so far is exhausted, and then one edge at a time. Within each phase
/// generators are tried in increasing order.
pub(crate) fn positive_first_bfs(
    n: usize,
    rank: usize,
    base: usize,
    step: impl Fn(usize, Letter) -> Option<usize>,
) -> Vec<TreeStep> {
    let mut visited = vec![false; n];
    let mut order: Vec<TreeStep> = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    visited[base] = true;
    order.push((base, None));
    queue.push_back(base);
    let mut neg_scan = 0;
    loop {
        while let Some(u) = queue.pop_front() {
            for gen in 0..rank {
                let l = Letter::pos(gen);
                if let Some(v) = step(u, l) {
                    if !visited[v] {
                        visited[v] = true;
                        order.push((v, Some((u, l))));
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut found = None;
        while neg_scan < order.len() && found.is_none() {
            let u = order[neg_scan].0;
            for gen in 0..rank {
                let l = Letter::neg(gen);
                if let Some(v) = step(u, l) {
                    if !visited[v] {
                        found = Some((v, u, l));
                        break;
                    }
                }
            }
            if found.is_none() {
                neg_scan += 1;
            }
        }
        match found {
            Some((v, u, l)) => {
                visited[v] = true;
                order.push((v, Some((u, l))));
                queue.push_back(v);
            }
            None => break,
        }
    }
    order
}

struct Folder {
    rank: usize,
    parent: Vec<usize>,
    adj: Vec<BTreeMap<Letter, usize>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    fn new(rank: usize) -> Self {
        let mut f = Folder {
            rank,
            parent: Vec::new(),
            adj: Vec::new(),
            pending: Vec::new(),
        };
        f.add_vertex();
        f
    }

    fn add_vertex(&mut self) -> usize {
        let v = self.parent.len();
        self.parent.push(v);
        self.adj.push(BTreeMap::new());
        v
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_edge(&mut self, u: usize, l: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        self.attach(u, l, v);
        self.attach(v, l.inv(), u);
    }

    fn attach(&mut self, u: usize, l: Letter, v: usize) {
        match self.adj[u].get(&l).copied() {
            Some(w) => {
                let w = self.find(w);
                if w != v {
                    self.pending.push((w, v));
                }
            }
            None => {
                self.adj[u].insert(l, v);
            }
        }
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            // keep the smaller id so the base (0) always survives
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            let entries = std::mem::take(&mut self.adj[gone]);
            for (l, t) in entries {
                self.add_edge(keep, l, t);
            }
        }
    }

    fn into_table(mut self) -> Vec<Vec<Option<usize>>> {
        let n = self.parent.len();
        let mut fwd = vec![vec![None; self.rank]; n];
        for u in 0..n {
            if self.find(u) != u {
                continue;
            }
            let targets: Vec<(Letter, usize)> =
                self.adj[u].iter().map(|(&l, &t)| (l, t)).collect();
            for (l, t) in targets {
                if !l.inverse {
                    fwd[u][l.gen] = Some(self.find(t));
                }
            }
        }
        fwd
    }
}

impl SubgroupGraph {
    /// Stallings folding of the petal graph of `gens`.
    pub fn from_generators(rank: usize, gens: &[Word]) -> Result<Self> {
        let mut folder = Folder::new(rank);
        for g in gens {
            if g.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: g.rank(),
                });
            }
            let letters = g.letters();
            if letters.is_empty() {
                continue;
            }
            let mut cur = 0;
            for (i, &l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    folder.add_vertex()
                };
                folder.add_edge(cur, l, next);
                folder.fold();
                cur = next;
            }
        }
        Ok(Self::canonical(rank, folder.into_table(), 0))
    }

    /// Parses a comma-separated generator list.
    pub fn parse_generators(rank: usize, text: &str) -> Result<Self> {
        let gens = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Word::parse(s, rank))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generators(rank, &gens)
    }

    /// Stabilizer of point 0 under the right action `i -> perms[g][i]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self> {
        let rank = perms.len();
        let degree = perms.first().map_or(1, Vec::len);
        for p in perms {
            check_permutation(p, degree)?;
        }
        let fwd = (0..degree)
            .map(|i| perms.iter().map(|p| Some(p[i])).collect())
            .collect();
        Ok(Self::canonical(rank, fwd, 0))
    }

    /// Builds from a (possibly partial) folded transition table: trims hanging
    /// trees, drops unreachable vertices, and renumbers canonically.
    pub(crate) fn canonical(rank: usize, fwd: Vec<Vec<Option<usize>>>, base: usize) -> Self {
        let n = fwd.len();
        let mut bwd = vec![vec![None; rank]; n];
        for (u, row) in fwd.iter().enumerate() {
            for (g, t) in row.iter().enumerate() {
                if let Some(v) = *t {
                    bwd[v][g] = Some(u);
                }
            }
        }
        let mut fwd = fwd;

        let mut alive = vec![true; n];
        let degree = |fwd: &Vec<Vec<Option<usize>>>, bwd: &Vec<Vec<Option<usize>>>, v: usize| {
            fwd[v].iter().flatten().count() + bwd[v].iter().flatten().count()
        };
        let mut stack: Vec<usize> = (0..n).filter(|&v| v != base).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] || v == base || degree(&fwd, &bwd, v) > 1 {
                continue;
            }
            alive[v] = false;
            for g in 0..rank {
                if let Some(t) = fwd[v][g].take() {
                    bwd[t][g] = None;
                    stack.push(t);
                }
                if let Some(s) = bwd[v][g].take() {
                    fwd[s][g] = None;
                    stack.push(s);
                }
            }
        }

        let order = positive_first_bfs(n, rank, base, |v, l| {
            if l.inverse {
                bwd[v][l.gen]
            } else {
                fwd[v][l.gen]
            }
        });
        let mut renumber = vec![usize::MAX; n];
        for (new, &(old, _)) in order.iter().enumerate() {
            renumber[old] = new;
        }
        let m = order.len();
        let mut nfwd = vec![vec![None; rank]; m];
        let mut nbwd = vec![vec![None; rank]; m];
        for &(old, _) in &order {
            for g in 0..rank {
                if let Some(t) = fwd[old][g] {
                    nfwd[renumber[old]][g] = Some(renumber[t]);
                    nbwd[renumber[t]][g] = Some(renumber[old]);
                }
            }
        }
        SubgroupGraph {
            rank,
            fwd: nfwd,
            bwd: nbwd,
        }
    }

    pub fn rank_of_ambient(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.fwd.len()
    }

    pub fn edge_count(&self) -> usize {
        self.fwd.iter().map(|row| row.iter().flatten().count()).sum()
    }

    /// `(from, generator, to)` for every edge.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.fwd.iter().enumerate() {
            for (g, t) in row.iter().enumerate() {
                if let Some(v) = t {
                    out.push((u, g, *v));
                }
            }
        }
        out
    }

    /// Target of reading `l` from `v`, if the edge exists.
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.inverse {
            self.bwd[v][l.gen]
        } else {
            self.fwd[v][l.gen]
        }
    }

    /// Vertex reached by reading `w` from `start`.
    pub fn read_from(&self, start: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(start, |v, &l| self.step(v, l))
    }

    pub fn contains(&self, w: &Word) -> bool {
        assert_eq!(w.rank(), self.rank, "rank mismatch in membership test");
        self.read_from(0, w) == Some(0)
    }

    pub fn is_complete(&self) -> bool {
        self.fwd
            .iter()
            .chain(self.bwd.iter())
            .all(|row| row.iter().all(Option::is_some))
    }

    pub fn index(&self) -> Index {
        if self.is_complete() {
            Index::Finite(self.vertex_count())
        } else {
            Index::Infinite
        }
    }

    pub fn finite_index(&self) -> Result<usize> {
        self.index().finite().ok_or(Error::InfiniteIndex)
    }

    /// Free rank, `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn spanning_tree(&self) -> Vec<TreeStep> {
        positive_first_bfs(self.vertex_count(), self.rank, 0, |v, l| self.step(v, l))
    }

    /// Tree path from the base to every vertex. Prefix-closed, so the paths
    /// form a right Schreier transversal when the index is finite.
    pub fn tree_paths(&self) -> Vec<Word> {
        let mut paths: Vec<Option<Word>> = vec![None; self.vertex_count()];
        for (v, parent) in self.spanning_tree() {
            paths[v] = Some(match parent {
                None => Word::identity(self.rank),
                Some((p, l)) => {
                    let prefix = paths[p].as_ref().expect("parent visited first");
                    prefix * &Word::reduce(self.rank, [l]).expect("letter in range")
                }
            });
        }
        paths.into_iter().map(|p| p.expect("connected")).collect()
    }

    fn tree_edges(&self) -> HashSet<(usize, usize)> {
        self.spanning_tree()
            .into_iter()
            .filter_map(|(v, parent)| {
                parent.map(|(p, l)| if l.inverse { (v, l.gen) } else { (p, l.gen) })
            })
            .collect()
    }

    /// `(from, generator, to)` of every edge outside the spanning tree, in
    /// basis order.
    pub fn non_tree_edges(&self) -> Vec<(usize, usize, usize)> {
        let tree = self.tree_edges();
        self.edges()
            .into_iter()
            .filter(|&(u, g, _)| !tree.contains(&(u, g)))
            .collect()
    }

    /// Free basis: one word per non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let paths = self.tree_paths();
        self.non_tree_edges()
            .into_iter()
            .map(|(u, g, v)| {
                let edge = Word::generator(self.rank, g);
                &(&paths[u] * &edge) * &paths[v].inverse()
            })
            .collect()
    }

    /// Rewrites `w` as a sequence of basis elements `(index, inverted)`, or
    /// `None` if `w` is not in the subgroup.
    pub fn rewrite(&self, w: &Word) -> Option<Vec<(usize, bool)>> {
        let basis_of: std::collections::HashMap<(usize, usize), usize> = self
            .non_tree_edges()
            .into_iter()
            .enumerate()
            .map(|(i, (u, g, _))| ((u, g), i))
            .collect();
        let mut out = Vec::new();
        let mut v = 0;
        for &l in w.letters() {
            let t = self.step(v, l)?;
            let key = if l.inverse { (t, l.gen) } else { (v, l.gen) };
            if let Some(&i) = basis_of.get(&key) {
                out.push((i, l.inverse));
            }
            v = t;
        }
        (v == 0).then_some(out)
    }

    /// Right action of the generators on the vertices (= right cosets).
    pub fn coset_action(&self) -> Result<super::PermRep> {
        self.finite_index()?;
        let perms = (0..self.rank)
            .map(|g| self.fwd.iter().map(|row| row[g].expect("complete")).collect())
            .collect();
        Ok(super::PermRep::new_unchecked(perms))
    }

    /// For finite index, checks `x w x^-1` for every generator `x` and basis
    /// word `w`. A nontrivial finitely generated normal subgroup of a free
    /// group has finite index, so infinite index means not normal unless
    /// the subgroup is trivial.
    pub fn is_normal(&self) -> bool {
        if self.is_trivial() {
            return true;
        }
        if self.index() == Index::Infinite {
            return false;
        }
        let basis = self.basis();
        (0..self.rank).all(|g| {
            let x = Word::generator(self.rank, g);
            basis.iter().all(|w| self.contains(&w.conjugate_by(&x)))
        })
    }

    /// `other` is a subgroup of `self`.
    pub fn contains_subgroup(&self, other: &SubgroupGraph) -> bool {
        other.basis().iter().all(|w| self.contains(w))
    }

    /// DOT rendering: vertex 0 is the base, edges are labelled by generator
    /// letter.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "digraph subgroup {{").unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        for v in 0..self.vertex_count() {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            writeln!(s, "  {v} [shape={shape}];").unwrap();
        }
        for (u, g, v) in self.edges() {
            writeln!(s, "  {u} -> {v} [label=\"{}\"];", Letter::pos(g).to_char()).unwrap();
        }
        s.push_str("}\n");
        s
    }

    pub fn to_adjacency(&self) -> Adjacency {
        Adjacency {
            vertices: self.vertex_count(),
            base: 0,
            edges: self.edges().into_iter().map(|(u, g, v)| [u, g, v]).collect(),
        }
    }
}

/// JSON adjacency form of a subgroup graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Adjacency {
    pub vertices: usize,
    pub base: usize,
    pub edges: Vec<[usize; 3]>,
}

pub(crate) fn check_permutation(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidPermutation(format!(
            "expected degree {degree}, got {}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &i in p {
        if i >= degree || seen[i] {
            return Err(Error::InvalidPermutation(format!("{p:?} is not a bijection")));
        }
        seen[i] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn rips() -> SubgroupGraph {
        SubgroupGraph::parse_generators(2, "bA, abAA, aaa, aab").unwrap()
    }

    #[test]
    fn trivial_and_whole_group() {
        let triv = SubgroupGraph::from_generators(2, &[]).unwrap();
        assert_eq!((triv.vertex_count(), triv.edge_count()), (1, 0));
        assert_eq!(triv.index(), Index::Infinite);
        assert_eq!(triv.rank(), 0);

        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert_eq!((whole.vertex_count(), whole.edge_count()), (1, 2));
        assert_eq!(whole.index(), Index::Finite(1));
        assert_eq!(whole.rank(), 2);
    }

    #[test]
    fn rips_subgroup_shape() {
        let h = rips();
        assert_eq!((h.vertex_count(), h.edge_count()), (3, 6));
        assert_eq!(h.index(), Index::Finite(3));
        assert_eq!(h.rank(), 4);
        let basis: Vec<String> = h.basis().iter().map(Word::to_string).collect();
        assert_eq!(basis, ["bA", "abAA", "aaa", "aab"]);
        assert_eq!(h.tree_paths(), vec![w(""), w("a"), w("aa")]);
    }

    #[test]
    fn membership_examples() {
        let h = SubgroupGraph::parse_generators(2, "a, baB").unwrap();
        assert!(!h.contains(&w("b")));
        assert!(h.contains(&w("")));
        assert!(h.contains(&w("bAAB")));
        assert_eq!(h.index(), Index::Infinite);
        assert_eq!(h.rank(), 2);
        assert!(rips().contains(&w("aaa")));
        assert!(!rips().contains(&w("a")));
    }

    #[test]
    fn hanging_trees_are_trimmed() {
        // a b A folds to a lollipop: base -a-> v with a b-loop at v
        let h = SubgroupGraph::parse_generators(2, "abA").unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (2, 2));
        assert_eq!(h.rank(), 1);
        // nothing hangs off a non-base vertex
        for v in 1..h.vertex_count() {
            let deg: usize = (0..2)
                .map(|g| {
                    h.step(v, Letter::pos(g)).is_some() as usize
                        + h.step(v, Letter::neg(g)).is_some() as usize
                })
                .sum();
            assert!(deg >= 2);
        }
    }

    #[test]
    fn generator_order_does_not_matter() {
        let a = SubgroupGraph::parse_generators(2, "aab, bA, abAA, aaa").unwrap();
        assert_eq!(a, rips());
    }

    #[test]
    fn rewrite_reconstructs_word() {
        let h = rips();
        let basis = h.basis();
        let target = w("abbaBBAaa");
        let seq = h.rewrite(&target).unwrap();
        let rebuilt = seq.iter().fold(Word::identity(2), |acc, &(i, inv)| {
            let b = if inv { basis[i].inverse() } else { basis[i].clone() };
            &acc * &b
        });
        assert_eq!(rebuilt, target);
        assert!(h.rewrite(&w("ab")).is_none());
    }

    #[test]
    fn normality() {
        assert!(rips().is_normal());
        let s3 = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.index(), Index::Finite(3));
        assert!(!s3.is_normal());
        assert!(SubgroupGraph::from_generators(2, &[]).unwrap().is_normal());
        assert!(!SubgroupGraph::parse_generators(2, "a").unwrap().is_normal());
    }

    #[test]
    fn coset_action_examples() {
        let rep = rips().coset_action().unwrap();
        assert_eq!(rep.perms(), &[vec![1, 2, 0], vec![1, 2, 0]]);
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert_eq!(whole.coset_action().unwrap().perms(), &[vec![0], vec![0]]);
        let s3 = SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.coset_action().unwrap().perms(), &[vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(
            SubgroupGraph::parse_generators(2, "a").unwrap().coset_action(),
            Err(Error::InfiniteIndex)
        );
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(SubgroupGraph::from_permutations(&[vec![0, 0]]).is_err());
        assert!(SubgroupGraph::from_permutations(&[vec![0, 1], vec![0]]).is_err());
    }

    #[test]
    fn dot_and_json_forms() {
        let h = rips();
        let dot = h.to_dot();
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.contains("0 [shape=doublecircle]"));
        let adj = h.to_adjacency();
        assert_eq!(adj.vertices, 3);
        assert_eq!(adj.edges[0], [0, 0, 1]);
        let json = serde_json::to_string(&adj).unwrap();
        assert!(json.starts_with("{\"vertices\":3,\"base\":0,\"edges\":[[0,0,1]"));
    }
}
