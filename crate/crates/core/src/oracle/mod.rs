//! Independent brute-force ground truth and the verification suites.
//!
//! Nothing here shares a computation path with the implementations it
//! checks: the spectrum is a direct double loop, leaf vectors are averaged
//! over enumerated points, entropies are recomputed from joint
//! distributions, and the minimum-depth solver explores every mask. The
//! suites in [`run_suite`] run all of it, exhaustively at small sizes and
//! seeded-randomly beyond.

mod rng;
mod solver;
mod suites;

pub use rng::SplitMix64;
pub use solver::{min_pdt_depth, min_plain_dt_depth, DepthCertificate, SOLVER_MAX_ARITY};
pub use suites::{
    entropy_fact_suite, enumerate_trees, fourier_suite, gf2_suite, inequality_suite, moments_suite,
    refine_suite, run_suite, solver_suite, split_suite, CheckResult, Counterexample, SuiteConfig,
    SuiteReport,
};

use crate::boolfn::{BooleanFunction, FourierSpectrum};
use crate::gf2::parity;
use crate::pdt::{Node, ParityDecisionTree};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{context} handles arity up to {max}, got {arity}")]
    ArityTooLarge {
        arity: usize,
        max: usize,
        context: &'static str,
    },
}

pub const BRUTE_FORCE_MAX_ARITY: usize = 12;
pub const ENUMERATION_MAX_ARITY: usize = 4;

/// The spectrum by its definition: c(S) = Σ_x f(x)χ_S(x), a direct double
/// loop over (S, x) with no butterfly anywhere near it.
pub fn brute_force_spectrum(f: &BooleanFunction) -> Result<FourierSpectrum, OracleError> {
    if f.arity() > BRUTE_FORCE_MAX_ARITY {
        return Err(OracleError::ArityTooLarge {
            arity: f.arity(),
            max: BRUTE_FORCE_MAX_ARITY,
            context: "brute-force spectrum",
        });
    }
    let points = f.point_count();
    let scaled = (0..points)
        .map(|s| {
            (0..points)
                .map(|x| {
                    if f.bit_at(x) ^ parity(s & x) {
                        -1i64
                    } else {
                        1
                    }
                })
                .sum()
        })
        .collect();
    Ok(FourierSpectrum::from_scaled(f.arity(), scaled))
}

/// All 2^(2^n) functions of arity n in ascending table-code order.
pub fn enumerate_functions(n: usize) -> Result<impl Iterator<Item = BooleanFunction>, OracleError> {
    if n == 0 || n > ENUMERATION_MAX_ARITY {
        return Err(OracleError::ArityTooLarge {
            arity: n,
            max: ENUMERATION_MAX_ARITY,
            context: "function enumeration",
        });
    }
    Ok((0..1u64 << (1 << n))
        .map(move |code| BooleanFunction::from_table_code(n, code).expect("code in range")))
}

/// A complete tree of exactly the requested depth with masks uniform over
/// the nonempty subsets and uniform ±1 leaf labels. Fully determined by the
/// seed; per node the generator draws the mask, then the +1 subtree, then
/// the −1 subtree.
pub fn random_pdt(arity: usize, depth: usize, seed: u64) -> ParityDecisionTree {
    let mut rng = SplitMix64::new(seed);
    random_pdt_with(&mut rng, arity, depth)
}

pub(crate) fn random_pdt_with(
    rng: &mut SplitMix64,
    arity: usize,
    depth: usize,
) -> ParityDecisionTree {
    ParityDecisionTree::new(arity, random_node(rng, arity, depth))
        .expect("generated masks are nonempty and in range")
}

fn random_node(rng: &mut SplitMix64, arity: usize, depth: usize) -> Node {
    if depth == 0 {
        Node::Leaf(rng.sign())
    } else {
        let mask = 1 + rng.below((1u64 << arity) - 1);
        let pos = random_node(rng, arity, depth - 1);
        let neg = random_node(rng, arity, depth - 1);
        Node::query(mask, pos, neg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::integer;

    #[test]
    fn brute_force_matches_known_expansion() {
        let sp = brute_force_spectrum(&BooleanFunction::majority3()).unwrap();
        assert_eq!(sp.coefficient_scaled(0b001), 4);
        assert_eq!(sp.coefficient_scaled(0b010), 4);
        assert_eq!(sp.coefficient_scaled(0b100), 4);
        assert_eq!(sp.coefficient_scaled(0b111), -4);
        assert_eq!(sp.nonzero().count(), 4);
    }

    #[test]
    fn brute_force_agrees_with_fast_transform() {
        let mut rng = SplitMix64::new(1);
        for _ in 0..32 {
            let f = BooleanFunction::from_table_code(3, rng.below(256)).unwrap();
            assert_eq!(brute_force_spectrum(&f).unwrap(), f.spectrum().unwrap());
        }
    }

    #[test]
    fn brute_force_constant() {
        let f = BooleanFunction::constant(3, crate::sign::Sign::Minus).unwrap();
        let sp = brute_force_spectrum(&f).unwrap();
        assert_eq!(sp.coefficient_scaled(0), -8);
        assert_eq!(sp.nonzero().count(), 1);
    }

    #[test]
    fn brute_force_rejects_big_arities() {
        let f = BooleanFunction::parity(13).unwrap();
        assert!(matches!(
            brute_force_spectrum(&f),
            Err(OracleError::ArityTooLarge { .. })
        ));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_functions(1).unwrap().count(), 4);
        assert_eq!(enumerate_functions(3).unwrap().count(), 256);
        let balanced = enumerate_functions(2)
            .unwrap()
            .filter(|f| f.is_balanced())
            .count();
        assert_eq!(balanced, 6);
        assert!(enumerate_functions(5).is_err());
    }

    #[test]
    fn random_trees_at_full_width_respect_the_moment_bound() {
        // n = 8, depth = 5: E(Σℓ)² ≤ 2·5 for every seed.
        let bound = crate::rational::integer(10);
        for seed in 0..2_000u64 {
            let tree = random_pdt(8, 5, seed);
            assert!(tree.second_moment() <= bound, "seed {seed}");
        }
    }

    #[test]
    fn random_pdt_is_deterministic_and_complete() {
        let a = random_pdt(4, 3, 7);
        let b = random_pdt(4, 3, 7);
        assert_eq!(a.serialize(), b.serialize());
        assert_eq!(a.depth(), 3);
        assert_eq!(a.leaf_ids().len(), 8);
        let mass: crate::rational::Rational =
            a.leaf_summaries().iter().map(|l| l.mass.clone()).sum();
        assert_eq!(mass, integer(1));
        let leaf = random_pdt(5, 0, 11);
        assert_eq!(leaf.depth(), 0);
    }
}
