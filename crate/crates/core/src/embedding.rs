//! The kernel of the identification map, explicit `F2 x F2` witnesses in
//! doubles, and the virtual-product bookkeeping.

use std::thread;

use serde::Serialize;

use crate::amalgam::{FreeDouble, FreeElement, FreeFactor, Projection, Side};
use crate::error::{Error, Result};
use crate::freegroup::{Index, Letter, SubgroupGraph, Word};
use crate::sample::{reduced_letters, sample_rng};

/// `L = G *_H G` together with a normal `N <= H` and the projection onto
/// `L/N`.
#[derive(Debug, Clone)]
pub struct DoubleContext {
    double: FreeDouble,
    projection: Projection,
}

impl DoubleContext {
    /// `n` defaults to the normal core of `h`.
    pub fn new(h: SubgroupGraph, n: Option<SubgroupGraph>) -> Result<Self> {
        let n = match n {
            Some(n) => n,
            None => h.normal_core()?,
        };
        if n.rank_of_ambient() != h.rank_of_ambient() {
            return Err(Error::RankMismatch {
                left: h.rank_of_ambient(),
                right: n.rank_of_ambient(),
            });
        }
        let double = FreeDouble::new(FreeFactor::new(h)?);
        let projection = Projection::new(&double, n)?;
        Ok(DoubleContext { double, projection })
    }

    pub fn double(&self) -> &FreeDouble {
        &self.double
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn h(&self) -> &SubgroupGraph {
        self.double.factor().subgroup()
    }

    pub fn n(&self) -> &SubgroupGraph {
        self.projection.kernel()
    }

    pub fn rank(&self) -> usize {
        self.double.rank()
    }

    /// `[G:H]`.
    pub fn h_index(&self) -> usize {
        self.double.factor().index()
    }

    pub fn phi1(&self, u: &FreeElement) -> Word {
        self.double.phi1(u)
    }

    pub fn phi2(&self, u: &FreeElement) -> crate::amalgam::AmalgamElement<usize> {
        self.projection.apply(&self.double, u)
    }

    pub fn kernel_basis(&self) -> Vec<FreeElement> {
        kernel_basis(&self.double)
    }
}

/// Free basis of `ker phi1`: `t^(1) (t^(2))^-1` for every non-identity
/// transversal representative `t`.
pub fn kernel_basis(double: &FreeDouble) -> Vec<FreeElement> {
    double
        .factor()
        .transversal()
        .reps()
        .iter()
        .skip(1)
        .map(|t| double.normal_form([(Side::One, t), (Side::Two, &t.inverse())]))
        .collect()
}

/// Every abstractly reduced product of length `1..=max_len` in `gens` and
/// their inverses, checked for being non-identity. Returns `(checked,
/// failures)`.
pub fn check_no_short_relations(double: &FreeDouble, gens: &[FreeElement], max_len: usize) -> (usize, usize) {
    let letters: Vec<(Letter, FreeElement)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(Letter::pos(i), g.clone()), (Letter::neg(i), double.invert(g))])
        .collect();
    let mut checked = 0;
    let mut failures = 0;
    // depth-first over reduced words, carrying the evaluated prefix
    let mut stack: Vec<(Option<Letter>, FreeElement, usize)> = vec![(None, double.identity(), 0)];
    while let Some((last, value, depth)) = stack.pop() {
        if depth == max_len {
            continue;
        }
        for (l, g) in &letters {
            if last.is_some_and(|p| p.cancels(*l)) {
                continue;
            }
            let next = double.multiply(&value, g);
            checked += 1;
            if double.is_identity(&next) {
                failures += 1;
            }
            stack.push((Some(*l), next, depth + 1));
        }
    }
    (checked, failures)
}

/// Four elements of `L` generating `F2 x F2`: `x1, x2` in `N`, `y1, y2` in
/// `ker phi1`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub x1: FreeElement,
    pub x2: FreeElement,
    pub y1: FreeElement,
    pub y2: FreeElement,
    context: DoubleContext,
}

impl Witness {
    pub fn context(&self) -> &DoubleContext {
        &self.context
    }

    pub fn record(&self) -> WitnessRecord {
        WitnessRecord {
            x1: self.x1.to_string(),
            x2: self.x2.to_string(),
            y1: self.y1.to_string(),
            y2: self.y2.to_string(),
            context: ContextRecord {
                rank: self.context.rank(),
                h_generators: self.context.h().basis().iter().map(Word::to_string).collect(),
                n_generators: self.context.n().basis().iter().map(Word::to_string).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub x1: String,
    pub x2: String,
    pub y1: String,
    pub y2: String,
    pub context: ContextRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContextRecord {
    pub rank: usize,
    #[serde(rename = "H-generators")]
    pub h_generators: Vec<String>,
    #[serde(rename = "N-generators")]
    pub n_generators: Vec<String>,
}

pub fn build_witness(h: SubgroupGraph, n: Option<SubgroupGraph>) -> Result<Witness> {
    let rank = h.rank_of_ambient();
    if rank < 2 {
        return Err(Error::RankTooSmall { rank });
    }
    let m = h.finite_index()?;
    if m < 3 {
        return Err(Error::IndexTooSmall { index: m });
    }
    let context = DoubleContext::new(h, n)?;
    let n_basis = context.n().basis();
    if n_basis.len() < 2 {
        return Err(Error::NormalRankTooSmall {
            rank: n_basis.len(),
        });
    }
    let double = context.double();
    let x1 = double.embed_subgroup_element(&n_basis[0])?;
    let x2 = double.embed_subgroup_element(&n_basis[1])?;
    let mut ys = context.kernel_basis().into_iter();
    let y1 = ys.next().expect("index >= 3");
    let y2 = ys.next().expect("index >= 3");
    Ok(Witness {
        x1,
        x2,
        y1,
        y2,
        context,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub commutators_checked: usize,
    pub commutators_pass: bool,
    pub injectivity_samples: usize,
    pub injectivity_failures: usize,
    pub kernel_conditions: bool,
    pub seed: u64,
    pub max_len: usize,
}

fn evaluate(double: &FreeDouble, letters: &[Letter], gens: &[FreeElement; 4]) -> FreeElement {
    letters.iter().fold(double.identity(), |acc, l| {
        let g = &gens[2 * l.gen + l.inverse as usize];
        double.multiply(&acc, g)
    })
}

/// Exact commutator and kernel checks, plus `samples` seeded draws of
/// non-identity abstract words `u, v` (length `<= max_len`) checking that
/// `u(x1, x2) * v(y1, y2)` is not the identity.
pub fn verify_witness(w: &Witness, samples: usize, max_len: usize, seed: u64) -> VerificationReport {
    let double = w.context.double();
    let xs = [&w.x1, &w.x2];
    let ys = [&w.y1, &w.y2];
    let commutators_pass = xs.iter().all(|x| {
        ys.iter()
            .all(|y| double.is_identity(&double.commutator(x, y)))
    });
    let kernel_conditions = ys.iter().all(|y| w.context.phi1(y).is_identity())
        && xs
            .iter()
            .all(|x| w.context.projection().target().is_identity(&w.context.phi2(x)))
        && xs.iter().chain(ys.iter()).all(|e| !double.is_identity(e));

    let x_letters = [
        w.x1.clone(),
        double.invert(&w.x1),
        w.x2.clone(),
        double.invert(&w.x2),
    ];
    let y_letters = [
        w.y1.clone(),
        double.invert(&w.y1),
        w.y2.clone(),
        double.invert(&w.y2),
    ];
    let run = |range: std::ops::Range<usize>| -> usize {
        range
            .filter(|&i| {
                let mut rng = sample_rng(seed, i as u64);
                let u = reduced_letters(&mut rng, 2, 1, max_len);
                let v = reduced_letters(&mut rng, 2, 1, max_len);
                let product = double.multiply(
                    &evaluate(double, &u, &x_letters),
                    &evaluate(double, &v, &y_letters),
                );
                double.is_identity(&product)
            })
            .count()
    };
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).clamp(1, 8);
    let chunk = samples.div_ceil(workers).max(1);
    let injectivity_failures = thread::scope(|s| {
        let handles: Vec<_> = (0..samples)
            .step_by(chunk)
            .map(|start| {
                let run = &run;
                s.spawn(move || run(start..(start + chunk).min(samples)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling worker")).sum()
    });

    VerificationReport {
        pass: commutators_pass && kernel_conditions && injectivity_failures == 0,
        commutators_checked: 4,
        commutators_pass,
        injectivity_samples: samples,
        injectivity_failures,
        kernel_conditions,
        seed,
        max_len,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct VirtualProductReport {
    /// Index `[G:H] >= 3` and both free factors non-abelian.
    pub applicable: bool,
    pub ambient_rank: usize,
    pub h_index: usize,
    /// `rank(N) = [G:N](r-1) + 1`.
    pub r1: usize,
    /// `[G:H] - 1`.
    pub r2: usize,
    /// `[L : K1 x K2] = [G:N]`.
    pub index: usize,
}

pub fn virtual_product_report(ctx: &DoubleContext) -> VirtualProductReport {
    let h_index = ctx.h_index();
    let r1 = ctx.n().rank();
    let r2 = h_index - 1;
    let index = match ctx.n().index() {
        Index::Finite(k) => k,
        Index::Infinite => unreachable!("normal subgroups in a context have finite index"),
    };
    VirtualProductReport {
        applicable: h_index >= 3 && r1 >= 2 && r2 >= 2,
        ambient_rank: ctx.rank(),
        h_index,
        r1,
        r2,
        index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(m: usize) -> SubgroupGraph {
        let cyc: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        SubgroupGraph::from_permutations(&[cyc.clone(), cyc]).unwrap()
    }

    fn s3_stab() -> SubgroupGraph {
        SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn kernel_basis_sizes() {
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert!(DoubleContext::new(whole, None).unwrap().kernel_basis().is_empty());
        let ctx = DoubleContext::new(cyclic(3), None).unwrap();
        let basis: Vec<String> = ctx.kernel_basis().iter().map(|k| k.to_string()).collect();
        assert_eq!(basis, ["1:a 2:aa h:AAA", "1:aa 2:a h:AAA"]);
        assert_eq!(DoubleContext::new(cyclic(2), None).unwrap().kernel_basis().len(), 1);
    }

    #[test]
    fn kernel_basis_is_the_expected_product() {
        let ctx = DoubleContext::new(cyclic(3), None).unwrap();
        let d = ctx.double();
        let a = Word::parse("a", 2).unwrap();
        let aa = Word::parse("aa", 2).unwrap();
        let y1 = d.multiply(&d.embed(Side::One, &a), &d.invert(&d.embed(Side::Two, &a)));
        let y2 = d.multiply(&d.embed(Side::One, &aa), &d.invert(&d.embed(Side::Two, &aa)));
        assert_eq!(ctx.kernel_basis(), vec![y1, y2]);
    }

    #[test]
    fn rips_witness() {
        let w = build_witness(cyclic(3), None).unwrap();
        assert_eq!(w.x1.to_string(), "h:bA");
        assert_eq!(w.x2.to_string(), "h:abAA");
        assert_eq!(w.y1.to_string(), "1:a 2:aa h:AAA");
        assert_eq!(w.y2.to_string(), "1:aa 2:a h:AAA");
        let d = w.context().double();
        assert!(d.is_identity(&d.commutator(&w.x1, &w.y1)));
        let r = verify_witness(&w, 200, 12, 0xC0FFEE);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.injectivity_samples, 200);
    }

    #[test]
    fn x_times_y_is_not_identity() {
        let w = build_witness(cyclic(3), None).unwrap();
        let d = w.context().double();
        let p = d.multiply(&w.x1, &w.y1);
        assert!(!d.is_identity(&p));
        assert_eq!(w.context().phi1(&p), Word::parse("bA", 2).unwrap());
    }

    #[test]
    fn hypothesis_errors() {
        assert_eq!(
            build_witness(cyclic(2), None).unwrap_err(),
            Error::IndexTooSmall { index: 2 }
        );
        let rank1 = SubgroupGraph::from_permutations(&[vec![1, 2, 0]]).unwrap();
        assert_eq!(build_witness(rank1, None).unwrap_err(), Error::RankTooSmall { rank: 1 });
        assert_eq!(
            build_witness(cyclic(3), Some(s3_stab())).unwrap_err(),
            Error::NotNormal
        );
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        assert!(matches!(
            build_witness(cyclic(3), Some(whole)).unwrap_err(),
            Error::NotContained(_)
        ));
        assert_eq!(
            build_witness(SubgroupGraph::parse_generators(2, "a").unwrap(), None).unwrap_err(),
            Error::InfiniteIndex
        );
    }

    #[test]
    fn explicit_n_inside_core() {
        // ker(F2 -> Z/6) is normal and lies in ker(F2 -> Z/3)
        let w = build_witness(cyclic(3), Some(cyclic(6))).unwrap();
        assert!(verify_witness(&w, 50, 8, 1).pass);
        assert_eq!(virtual_product_report(w.context()).index, 6);
    }

    #[test]
    fn virtual_product_numbers() {
        let rips = virtual_product_report(&DoubleContext::new(cyclic(3), None).unwrap());
        assert_eq!((rips.r1, rips.r2, rips.index, rips.applicable), (4, 2, 3, true));
        let s3 = virtual_product_report(&DoubleContext::new(s3_stab(), None).unwrap());
        assert_eq!((s3.r1, s3.r2, s3.index, s3.applicable), (7, 2, 6, true));
        let whole = SubgroupGraph::parse_generators(2, "a,b").unwrap();
        let degenerate = virtual_product_report(&DoubleContext::new(whole, None).unwrap());
        assert_eq!((degenerate.r2, degenerate.applicable), (0, false));
    }

    #[test]
    fn short_kernel_products_are_nontrivial() {
        let ctx = DoubleContext::new(cyclic(4), None).unwrap();
        let basis = ctx.kernel_basis();
        let (checked, failures) = check_no_short_relations(ctx.double(), &basis, 3);
        // 6 + 6*5 + 6*25
        assert_eq!(checked, 186);
        assert_eq!(failures, 0);
    }
}
