//! Named subgroups of F2.

use doublegroup::freegroup::SubgroupGraph;
use doublegroup::{Error, Result};

pub const NAMES: [&str; 3] = ["rips", "index2", "s3stab"];

/// Generators for `rips`, the kernel of F2 -> Z/3 sending a, b to 1.
pub const RIPS_GENERATORS: &str = "bA,abAA,aaa,aab";

pub fn subgroup(name: &str) -> Result<SubgroupGraph> {
    match name {
        "rips" => SubgroupGraph::parse_generators(2, RIPS_GENERATORS),
        // kernel of F2 -> Z/2, a, b -> 1
        "index2" => SubgroupGraph::from_permutations(&[vec![1, 0], vec![1, 0]]),
        // stabilizer of 0 under a -> (0 1), b -> (0 1 2); not normal
        "s3stab" => SubgroupGraph::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]),
        other => Err(Error::Parse(format!(
            "unknown preset {other:?}, expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use doublegroup::freegroup::Index;

    #[test]
    fn preset_shapes() {
        let rips = subgroup("rips").unwrap();
        assert_eq!((rips.index(), rips.rank(), rips.is_normal()), (Index::Finite(3), 4, true));
        assert_eq!(subgroup("index2").unwrap().index(), Index::Finite(2));
        let s3 = subgroup("s3stab").unwrap();
        assert_eq!((s3.index(), s3.is_normal()), (Index::Finite(3), false));
        assert!(subgroup("nope").is_err());
    }
}
