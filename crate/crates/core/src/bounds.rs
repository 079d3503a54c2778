//! Inequality checkers and entropy calculators over functions and trees.
//!
//! The registered checks, by the names the CLI accepts:
//!
//! - `theorem1`: Σ_i f̂(i) ≤ √(4 ln2 · σ² · d) for any tree of depth d
//!   computing f, σ² = 4μ(1−μ).
//! - `theorem4`: the coarser Σ_i f̂(i) ≤ √(2d).
//! - `lemma1`:   E_{ℓ∈T}[(Σ_i ℓ_i)²] ≤ 2d, for every tree.
//! - `lemma3`:   Σ_i f̂(i) ≤ E_{ℓ∈T}|Σ_i ℓ_i|, exact on both sides.
//! - the entropy chain: 1 − (Σf̂(i))²/(8 ln2 μ(1−μ)n²) ≥ H(X_i | f(X))
//!   ≥ H(X_i | leaf_T(X)) ≥ 1 − E[(Σℓ_i)²]/n², with the two conditional
//!   entropies computed from closed forms.
//!
//! Floating-point policy: exact rationals are compared exactly (tolerance
//! zero). Where √ or ln2 enters, `holds` is decided by clearing the
//! radical (`lhs ≤ √(ln2·q)` becomes `lhs ≤ 0 ∨ lhs²/q ≤ ln2`) against a
//! 50-digit rational enclosure of ln 2, so a wrong verdict would need the
//! exact value within 10⁻⁵⁰ of the boundary. Chain comparisons between two
//! transcendental sides use a one-sided 10⁻⁹ tolerance that can only mask
//! a false violation, never manufacture a false pass.

use crate::boolfn::{BoolFnError, BooleanFunction};
use crate::pdt::{second_moment_of, ParityDecisionTree};
use crate::rational::{integer, ratio, significant, to_f64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::f64::consts::LN_2;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("tree arity {tree} does not match function arity {function}")]
    ArityMismatch { tree: usize, function: usize },
    #[error("tree does not compute the function; first counterexample at point {point}")]
    DoesNotCompute { point: u64 },
    #[error("constant function: {context}")]
    ConstantFunction { context: &'static str },
    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },
    #[error("exhaustive survey covers 2^(2^n) functions; arity {arity} exceeds 4")]
    SurveyArity { arity: usize },
    #[error(transparent)]
    Function(#[from] BoolFnError),
}

/// h(t) = −t·log₂t − (1−t)·log₂(1−t), with h(0) = h(1) = 0 by continuity.
pub fn binary_entropy(t: f64) -> Result<f64, BoundsError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BoundsError::InvalidProbability { value: t });
    }
    Ok(entropy(t))
}

fn entropy(t: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&t));
    if t == 0.0 || t == 1.0 {
        return 0.0;
    }
    -t * t.log2() - (1.0 - t) * (1.0 - t).log2()
}

/// A 50-digit rational enclosure (lo, hi) of ln 2; lo < ln 2 < hi with
/// hi − lo = 10⁻⁵⁰.
fn ln2_interval() -> (Rational, Rational) {
    let digits =
        BigInt::parse_bytes(b"69314718055994530941723212145817656807550013436025", 10).unwrap();
    let scale = BigInt::from(10).pow(50u32);
    let lo = Rational::new(digits.clone(), scale.clone());
    let hi = Rational::new(digits + BigInt::one(), scale);
    (lo, hi)
}

/// Does lhs ≤ √(ln2 · q) hold, for exact rational lhs and q > 0? Decided by
/// comparing lhs²/q against the ln 2 enclosure; an exact value inside the
/// 10⁻⁵⁰ window counts as holding, which the one-sided tolerance permits.
fn holds_against_sqrt_ln2(lhs: &Rational, q: &Rational) -> bool {
    if !lhs.is_positive() {
        return true;
    }
    let ratio = lhs * lhs / q;
    let (lo, hi) = ln2_interval();
    if ratio <= lo {
        true
    } else {
        ratio <= hi
    }
}

/// ⌈q / ln2⌉ for q ≥ 0, decided against the enclosure; if the two ends
/// disagree (exact value within 10⁻⁴⁹ of an integer) the smaller, still
/// valid, bound is returned.
fn ceil_over_ln2(q: &Rational) -> BigInt {
    let (lo, hi) = ln2_interval();
    let from_hi = crate::rational::ceil_nonnegative(&(q / hi));
    let from_lo = crate::rational::ceil_nonnegative(&(q / lo));
    if from_hi == from_lo {
        from_hi
    } else {
        from_hi.min(from_lo)
    }
}

/// A report value: exact where the quantity is rational, 12-significant-digit
/// float otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Real(f64),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => to_f64(q),
            Value::Real(x) => *x,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Value::Exact(q) if q.is_zero())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Real(x) => write!(f, "{}", significant(*x, 12)),
        }
    }
}

/// Identifies the inputs a report was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct InputsDigest {
    pub function_id: String,
    pub tree_id: String,
    pub depth: usize,
    pub variance: Rational,
    pub mu: Rational,
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn digest(f: &BooleanFunction, t: &ParityDecisionTree) -> InputsDigest {
    InputsDigest {
        function_id: format!("fnv:{:016x}", fnv64(f.serialize().as_bytes())),
        tree_id: format!("fnv:{:016x}", fnv64(t.serialize().as_bytes())),
        depth: t.depth(),
        variance: f.variance(),
        mu: f.mu(),
    }
}

/// One checked inequality: left side, bound, slack = rhs − lhs, verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub name: &'static str,
    pub lhs: Value,
    pub rhs_bound: Value,
    pub slack: Value,
    pub holds: bool,
    pub inputs: InputsDigest,
}

impl InequalityReport {
    /// Exact-rational checks flag equality via zero slack.
    pub fn is_equality(&self) -> bool {
        self.slack.is_exact_zero()
    }

    /// One line per check: `name lhs rhs slack holds`, tab-separated.
    pub fn tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            self.name, self.lhs, self.rhs_bound, self.slack, self.holds
        )
    }

    /// The full report, one `field: value` line each.
    pub fn structured_text(&self) -> String {
        format!(
            "check: {}\nlhs: {}\nrhs: {}\nslack: {}\nholds: {}\nfunction: {}\ntree: {}\ndepth: {}\nvariance: {}\nmu: {}\n",
            self.name,
            self.lhs,
            self.rhs_bound,
            self.slack,
            self.holds,
            self.inputs.function_id,
            self.inputs.tree_id,
            self.inputs.depth,
            self.inputs.variance,
            self.inputs.mu,
        )
    }
}

/// The conditional-entropy chain evaluated on one (f, T) pair.
///
/// `eq1_bound ≥ h_given_f ≥ h_given_leaf ≥ eq3_bound` must hold within the
/// one-sided tolerance; `h_given_f` uses the closed form
/// μ·h(½ + Σf̂(i)/(4μn)) + (1−μ)·h(½ − Σf̂(i)/(4(1−μ)n)) and `h_given_leaf`
/// is the mass-weighted E_ℓ h(½ + Σℓ_i/(2n)).
#[derive(Clone, Debug)]
pub struct EntropyReport {
    pub mu: Rational,
    pub h_given_f: f64,
    pub h_given_leaf: f64,
    pub eq1_bound: f64,
    pub eq3_bound: f64,
    pub tolerance: f64,
    pub chain_holds: bool,
    pub inputs: InputsDigest,
}

impl EntropyReport {
    pub fn structured_text(&self) -> String {
        format!(
            "check: entropy\nmu: {}\neq1_bound: {}\nh_given_f: {}\nh_given_leaf: {}\neq3_bound: {}\ntolerance: {:e}\nholds: {}\nfunction: {}\ntree: {}\n",
            self.mu,
            significant(self.eq1_bound, 12),
            significant(self.h_given_f, 12),
            significant(self.h_given_leaf, 12),
            significant(self.eq3_bound, 12),
            self.tolerance,
            self.chain_holds,
            self.inputs.function_id,
            self.inputs.tree_id,
        )
    }

    /// The three chain links rendered as `name lhs rhs slack holds` lines.
    pub fn tsv_lines(&self) -> Vec<String> {
        let link = |name: &str, lhs: f64, rhs: f64| {
            format!(
                "{}\t{}\t{}\t{}\t{}",
                name,
                significant(lhs, 12),
                significant(rhs, 12),
                significant(rhs - lhs, 12),
                lhs <= rhs + self.tolerance
            )
        };
        vec![
            link("entropy.h_given_f_vs_eq1", self.h_given_f, self.eq1_bound),
            link(
                "entropy.h_given_leaf_vs_h_given_f",
                self.h_given_leaf,
                self.h_given_f,
            ),
            link(
                "entropy.eq3_vs_h_given_leaf",
                self.eq3_bound,
                self.h_given_leaf,
            ),
        ]
    }
}

pub const CHAIN_TOLERANCE: f64 = 1e-9;

fn require_computes(f: &BooleanFunction, t: &ParityDecisionTree) -> Result<(), BoundsError> {
    if f.arity() != t.arity() {
        return Err(BoundsError::ArityMismatch {
            tree: t.arity(),
            function: f.arity(),
        });
    }
    match t.counterexample(f).expect("arity already checked") {
        None => Ok(()),
        Some(point) => Err(BoundsError::DoesNotCompute { point }),
    }
}

/// Σ_i f̂(i) ≤ √(4 ln2 · σ² · d). Constant functions short-circuit to the
/// exact 0 ≤ 0 report; the entropy machinery behind the general case has
/// vanishing denominators there.
pub fn theorem1_check(
    f: &BooleanFunction,
    t: &ParityDecisionTree,
) -> Result<InequalityReport, BoundsError> {
    require_computes(f, t)?;
    let inputs = digest(f, t);
    let lhs = f.linear_coefficient_sum();
    let variance = f.variance();
    let depth = t.depth();
    if variance.is_zero() {
        debug_assert!(lhs.is_zero());
        return Ok(InequalityReport {
            name: "theorem1",
            lhs: Value::Exact(lhs),
            rhs_bound: Value::Exact(Rational::zero()),
            slack: Value::Exact(Rational::zero()),
            holds: true,
            inputs,
        });
    }
    // rhs² = ln2 · 4σ²d
    let q = integer(4) * &variance * integer(depth as i64);
    let holds = holds_against_sqrt_ln2(&lhs, &q);
    let rhs = (4.0 * LN_2 * to_f64(&variance) * depth as f64).sqrt();
    Ok(InequalityReport {
        name: "theorem1",
        slack: Value::Real(rhs - to_f64(&lhs)),
        lhs: Value::Exact(lhs),
        rhs_bound: Value::Real(rhs),
        holds,
        inputs,
    })
}

/// The coarser bound Σ_i f̂(i) ≤ √(2d). Both sides square to rationals, so
/// the verdict is fully exact.
pub fn theorem4_check(
    f: &BooleanFunction,
    t: &ParityDecisionTree,
) -> Result<InequalityReport, BoundsError> {
    require_computes(f, t)?;
    let inputs = digest(f, t);
    let lhs = f.linear_coefficient_sum();
    let depth = t.depth();
    let two_d = integer(2 * depth as i64);
    let holds = !lhs.is_positive() || &lhs * &lhs <= two_d;
    let rhs = (2.0 * depth as f64).sqrt();
    Ok(InequalityReport {
        name: "theorem4",
        slack: Value::Real(rhs - to_f64(&lhs)),
        lhs: Value::Exact(lhs),
        rhs_bound: Value::Real(rhs),
        holds,
        inputs,
    })
}

/// E_{ℓ∈T}[(Σℓ_i)²] ≤ 2d, exact on both sides.
pub fn lemma1_check(
    f: &BooleanFunction,
    t: &ParityDecisionTree,
) -> Result<InequalityReport, BoundsError> {
    require_computes(f, t)?;
    let inputs = digest(f, t);
    let lhs = t.second_moment();
    let rhs = integer(2 * t.depth() as i64);
    Ok(InequalityReport {
        name: "lemma1",
        holds: lhs <= rhs,
        slack: Value::Exact(&rhs - &lhs),
        lhs: Value::Exact(lhs),
        rhs_bound: Value::Exact(rhs),
        inputs,
    })
}

/// Σ_i f̂(i) ≤ E_{ℓ∈T}|Σℓ_i|, exact on both sides; equality is legal and
/// flagged via zero slack.
pub fn lemma3_check(
    f: &BooleanFunction,
    t: &ParityDecisionTree,
) -> Result<InequalityReport, BoundsError> {
    require_computes(f, t)?;
    let inputs = digest(f, t);
    let lhs = f.linear_coefficient_sum();
    let rhs = t.first_abs_moment();
    Ok(InequalityReport {
        name: "lemma3",
        holds: lhs <= rhs,
        slack: Value::Exact(&rhs - &lhs),
        lhs: Value::Exact(lhs),
        rhs_bound: Value::Exact(rhs),
        inputs,
    })
}

/// Evaluate the conditional-entropy chain on a non-constant f and a tree
/// computing it.
pub fn entropy_chain(
    f: &BooleanFunction,
    t: &ParityDecisionTree,
) -> Result<EntropyReport, BoundsError> {
    require_computes(f, t)?;
    if f.is_constant() {
        return Err(BoundsError::ConstantFunction {
            context: "the chain's μ(1−μ) denominators vanish; theorem1_check covers this case",
        });
    }
    let inputs = digest(f, t);
    let n = f.arity();
    let n_rat = integer(n as i64);
    let mu = f.mu();
    let one_minus_mu = integer(1) - &mu;
    let sum = f.linear_coefficient_sum();

    // Closed form for H(X_i | f(X)); both h-arguments are exact
    // probabilities before the final float conversion.
    let arg_plus = ratio(1, 2) + &sum / (integer(4) * &mu * &n_rat);
    let arg_minus = ratio(1, 2) - &sum / (integer(4) * &one_minus_mu * &n_rat);
    let h_given_f = to_f64(&mu) * entropy(to_f64(&arg_plus))
        + to_f64(&one_minus_mu) * entropy(to_f64(&arg_minus));

    // H(X_i | leaf_T(X)) = E_ℓ h(½ + Σℓ/(2n)), mass-weighted.
    let leaves = t.leaf_summaries();
    let h_given_leaf: f64 = leaves
        .iter()
        .map(|leaf| {
            let arg = ratio(1, 2) + ratio(leaf.vector_sum(), 2 * n as i64);
            to_f64(&leaf.mass) * entropy(to_f64(&arg))
        })
        .sum();

    let eq1_numer = &sum * &sum / (&mu * &one_minus_mu * &n_rat * &n_rat);
    let eq1_bound = 1.0 - to_f64(&eq1_numer) / (8.0 * LN_2);
    let eq3_bound = 1.0 - to_f64(&(second_moment_of(&leaves) / (&n_rat * &n_rat)));

    let tolerance = CHAIN_TOLERANCE;
    let chain_holds = eq1_bound >= h_given_f - tolerance
        && h_given_f >= h_given_leaf - tolerance
        && h_given_leaf >= eq3_bound - tolerance;

    Ok(EntropyReport {
        mu,
        h_given_f,
        h_given_leaf,
        eq1_bound,
        eq3_bound,
        tolerance,
        chain_holds,
        inputs,
    })
}

/// ⌈(Σ_i f̂(i))² / (4 ln2 · σ²)⌉: a valid depth lower bound for any parity
/// decision tree computing f. Streams the linear coefficients, so it works
/// at the full arity cap.
pub fn depth_lower_bound(f: &BooleanFunction) -> Result<u64, BoundsError> {
    if f.is_constant() {
        return Err(BoundsError::ConstantFunction {
            context: "no nontrivial depth bound for constants",
        });
    }
    let bound = depth_bound_from_linear_sum(&f.linear_coefficient_sum(), &f.variance());
    Ok(u64::try_from(bound).expect("bound fits in u64 for any in-cap arity"))
}

/// The same bound from an already-known linear sum and variance; used where
/// the sum comes from the composition recursion rather than a truth table.
pub fn depth_bound_from_linear_sum(sum: &Rational, variance: &Rational) -> BigInt {
    assert!(variance.is_positive(), "variance must be positive");
    let q = sum * sum / (integer(4) * variance);
    ceil_over_ln2(&q)
}

/// Σ_i over the k-fold majority power of the linear coefficients, by the
/// multiplicativity of level-1 mass under composition with a balanced inner
/// function: the sum is (Σ f̂_maj3(i))^k = (3/2)^k, exactly.
pub fn recmaj_linear_sum(k: u32) -> Rational {
    assert!(k >= 1, "k must be at least 1");
    let base = BooleanFunction::majority3().linear_coefficient_sum();
    let mut acc = base.clone();
    for _ in 1..k {
        acc *= &base;
    }
    acc
}

/// Σ_i f̂(i) / √degree(f): the ratio probed by the low-degree conjecture.
pub fn gs_probe(f: &BooleanFunction) -> Result<f64, BoundsError> {
    if f.is_constant() {
        return Err(BoundsError::ConstantFunction {
            context: "degree 0 makes the ratio undefined",
        });
    }
    let spectrum = f.spectrum()?;
    let degree = spectrum.degree();
    Ok(to_f64(&spectrum.linear_sum()) / (degree as f64).sqrt())
}

/// Exhaustive survey of the probe ratio over every function of the given
/// arity (constants skipped). Ties keep the lowest table code.
#[derive(Clone, Debug, PartialEq)]
pub struct GsSurvey {
    pub arity: usize,
    pub max_ratio: f64,
    pub argmax_code: u64,
}

pub fn gs_survey(arity: usize) -> Result<GsSurvey, BoundsError> {
    if arity == 0 || arity > 4 {
        return Err(BoundsError::SurveyArity { arity });
    }
    let mut best: Option<(f64, u64)> = None;
    for code in 0..(1u64 << (1 << arity)) {
        let f = BooleanFunction::from_table_code(arity, code)?;
        if f.is_constant() {
            continue;
        }
        let ratio = gs_probe(&f)?;
        if best.is_none_or(|(r, _)| ratio > r) {
            best = Some((ratio, code));
        }
    }
    let (max_ratio, argmax_code) = best.expect("non-constant functions exist at every arity");
    Ok(GsSurvey {
        arity,
        max_ratio,
        argmax_code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sign::Sign;

    fn maj3() -> BooleanFunction {
        BooleanFunction::majority3()
    }

    fn maj3_tree() -> ParityDecisionTree {
        ParityDecisionTree::parse("n=3\n(Q 1,2 (Q 1 + -) (Q 3 + -))\n").unwrap()
    }

    #[test]
    fn binary_entropy_basics() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let h34 = binary_entropy(0.75).unwrap();
        assert!((h34 - 0.8112781244591328).abs() < 1e-12);
        // Symmetric, and inside the two-sided quadratic bounds at t = 1/2.
        assert_eq!(binary_entropy(0.25).unwrap(), h34);
        assert!((0.75..=1.0 - 0.25 / (2.0 * LN_2)).contains(&h34));
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn ln2_interval_brackets_f64_ln2() {
        let (lo, hi) = ln2_interval();
        assert!(lo < hi);
        assert!(to_f64(&lo) <= LN_2 && LN_2 <= to_f64(&hi) + 1e-50);
        assert!((to_f64(&lo) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn theorem1_on_maj3() {
        let report = theorem1_check(&maj3(), &maj3_tree()).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, Value::Exact(ratio(3, 2)));
        match report.rhs_bound {
            Value::Real(rhs) => assert!((rhs - 2.3548200450309493).abs() < 1e-12),
            ref other => panic!("expected real bound, got {other:?}"),
        }
        assert_eq!(
            report.tsv_line(),
            "theorem1\t3/2\t2.35482004503\t0.854820045031\ttrue"
        );
    }

    #[test]
    fn theorem1_constant_short_circuit() {
        let f = BooleanFunction::constant(2, Sign::Plus).unwrap();
        let t = ParityDecisionTree::leaf(2, Sign::Plus);
        let report = theorem1_check(&f, &t).unwrap();
        assert!(report.holds);
        assert!(report.is_equality());
        assert_eq!(report.lhs, Value::Exact(integer(0)));
        assert_eq!(report.rhs_bound, Value::Exact(integer(0)));
    }

    #[test]
    fn theorem1_parity_five() {
        let f = BooleanFunction::parity(5).unwrap();
        let t = ParityDecisionTree::parse("n=5\n(Q 1,2,3,4,5 + -)").unwrap();
        let report = theorem1_check(&f, &t).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, Value::Exact(integer(0)));
        // rhs = √(4 ln2 · 1 · 1)
        assert!((report.rhs_bound.as_f64() - 1.6651092223153954).abs() < 1e-12);
    }

    #[test]
    fn theorem1_rejects_non_computing_tree() {
        let err = theorem1_check(&BooleanFunction::parity(3).unwrap(), &maj3_tree()).unwrap_err();
        assert!(matches!(err, BoundsError::DoesNotCompute { .. }));
        let err = theorem1_check(&BooleanFunction::parity(2).unwrap(), &maj3_tree()).unwrap_err();
        assert!(matches!(err, BoundsError::ArityMismatch { .. }));
    }

    #[test]
    fn theorem4_on_maj3() {
        let report = theorem4_check(&maj3(), &maj3_tree()).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, Value::Exact(ratio(3, 2)));
        assert!((report.rhs_bound.as_f64() - 2.0).abs() < 1e-12);
        // For balanced f the coarser bound is the tighter of the two:
        // 2 < 4 ln2.
        let t1 = theorem1_check(&maj3(), &maj3_tree()).unwrap();
        assert!(report.rhs_bound.as_f64() < t1.rhs_bound.as_f64());
    }

    #[test]
    fn theorem4_constant() {
        let f = BooleanFunction::constant(1, Sign::Minus).unwrap();
        let t = ParityDecisionTree::leaf(1, Sign::Minus);
        let report = theorem4_check(&f, &t).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, Value::Exact(integer(0)));
        assert_eq!(report.rhs_bound.as_f64(), 0.0);
    }

    #[test]
    fn lemma1_on_maj3_tree() {
        let report = lemma1_check(&maj3(), &maj3_tree()).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, Value::Exact(ratio(5, 2)));
        assert_eq!(report.rhs_bound, Value::Exact(integer(4)));
        assert_eq!(report.slack, Value::Exact(ratio(3, 2)));
    }

    #[test]
    fn lemma3_equality_on_maj3() {
        let report = lemma3_check(&maj3(), &maj3_tree()).unwrap();
        assert!(report.holds);
        assert!(report.is_equality());
        assert_eq!(report.lhs, Value::Exact(ratio(3, 2)));
        assert_eq!(report.rhs_bound, Value::Exact(ratio(3, 2)));
    }

    #[test]
    fn lemma3_strict_on_full_plain_parity_tree() {
        let f = BooleanFunction::parity(2).unwrap();
        let t = ParityDecisionTree::parse("n=2\n(Q 1 (Q 2 + -) (Q 2 - +))").unwrap();
        let report = lemma3_check(&f, &t).unwrap();
        assert!(report.holds);
        assert!(!report.is_equality());
        assert_eq!(report.lhs, Value::Exact(integer(0)));
        // Leaf-vector sums are 2, 0, 0, −2 at mass 1/4 each.
        assert_eq!(report.rhs_bound, Value::Exact(integer(1)));
    }

    #[test]
    fn entropy_chain_on_maj3() {
        let report = entropy_chain(&maj3(), &maj3_tree()).unwrap();
        assert!(report.chain_holds);
        assert_eq!(report.mu, ratio(1, 2));
        // μ = 1/2, Σf̂ = 3/2, n = 3: both closed-form terms are h(3/4).
        assert!((report.h_given_f - 0.8112781244591328).abs() < 1e-12);
        assert!((report.h_given_leaf - 0.7841591278514218).abs() < 1e-12);
        assert!((report.eq1_bound - 0.8196631198888795).abs() < 1e-12);
        assert!((report.eq3_bound - 0.7222222222222222).abs() < 1e-12);
    }

    #[test]
    fn entropy_chain_dictator_collapses_to_zero() {
        let f = BooleanFunction::dictator(1, 1).unwrap();
        let t = ParityDecisionTree::parse("n=1\n(Q 1 + -)").unwrap();
        let report = entropy_chain(&f, &t).unwrap();
        assert!(report.chain_holds);
        assert!(report.h_given_f.abs() < 1e-12);
        assert!(report.h_given_leaf.abs() < 1e-12);
    }

    #[test]
    fn entropy_chain_tight_on_parity() {
        let f = BooleanFunction::parity(2).unwrap();
        let t = ParityDecisionTree::parse("n=2\n(Q 1,2 + -)").unwrap();
        let report = entropy_chain(&f, &t).unwrap();
        assert!(report.chain_holds);
        assert_eq!(report.h_given_f, 1.0);
        assert_eq!(report.h_given_leaf, 1.0);
        assert_eq!(report.eq1_bound, 1.0);
        assert_eq!(report.eq3_bound, 1.0);
    }

    #[test]
    fn entropy_chain_rejects_constants() {
        let f = BooleanFunction::constant(2, Sign::Plus).unwrap();
        let t = ParityDecisionTree::leaf(2, Sign::Plus);
        assert!(matches!(
            entropy_chain(&f, &t),
            Err(BoundsError::ConstantFunction { .. })
        ));
    }

    #[test]
    fn depth_lower_bound_values() {
        assert_eq!(depth_lower_bound(&maj3()).unwrap(), 1);
        assert_eq!(
            depth_lower_bound(&BooleanFunction::recursive_majority(2).unwrap()).unwrap(),
            2
        );
        // Σf̂ = 0 for parity: the bound degenerates to 0.
        assert_eq!(
            depth_lower_bound(&BooleanFunction::parity(4).unwrap()).unwrap(),
            0
        );
        assert!(matches!(
            depth_lower_bound(&BooleanFunction::constant(2, Sign::Plus).unwrap()),
            Err(BoundsError::ConstantFunction { .. })
        ));
    }

    #[test]
    fn recmaj_linear_sums_match_truth_tables() {
        assert_eq!(recmaj_linear_sum(1), ratio(3, 2));
        assert_eq!(recmaj_linear_sum(2), ratio(9, 4));
        assert_eq!(recmaj_linear_sum(3), ratio(27, 8));
        for k in 1..=2u32 {
            let f = BooleanFunction::recursive_majority(k).unwrap();
            assert_eq!(f.linear_coefficient_sum(), recmaj_linear_sum(k));
        }
    }

    #[test]
    fn gs_probe_values() {
        let dictator = BooleanFunction::dictator(2, 1).unwrap();
        assert!((gs_probe(&dictator).unwrap() - 1.0).abs() < 1e-12);
        assert!((gs_probe(&maj3()).unwrap() - 0.8660254037844387).abs() < 1e-12);
        assert!(matches!(
            gs_probe(&BooleanFunction::constant(2, Sign::Plus).unwrap()),
            Err(BoundsError::ConstantFunction { .. })
        ));
    }

    #[test]
    fn gs_survey_n2_maximum_is_dictator_ratio() {
        let survey = gs_survey(2).unwrap();
        // No 2-variable function beats the dictators' ratio of 1.
        assert!((survey.max_ratio - 1.0).abs() < 1e-12);
        assert!(gs_survey(5).is_err());
    }

    #[test]
    fn gs_survey_n3_matches_independent_scan() {
        let survey = gs_survey(3).unwrap();
        // Re-derive the maximum through the brute-force spectrum path.
        let mut best: Option<(f64, u64)> = None;
        for code in 0..256u64 {
            let f = BooleanFunction::from_table_code(3, code).unwrap();
            if f.is_constant() {
                continue;
            }
            let sp = crate::oracle::brute_force_spectrum(&f).unwrap();
            let ratio = to_f64(&sp.linear_sum()) / (sp.degree() as f64).sqrt();
            if best.is_none_or(|(r, _)| ratio > r) {
                best = Some((ratio, code));
            }
        }
        let (max_ratio, argmax) = best.unwrap();
        assert_eq!(survey.argmax_code, argmax);
        assert!((survey.max_ratio - max_ratio).abs() < 1e-12);
        // The dictators' ratio 1 is attained and nothing at n = 3 beats it.
        assert!((survey.max_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn structured_report_mirrors_fields() {
        let report = theorem1_check(&maj3(), &maj3_tree()).unwrap();
        let text = report.structured_text();
        assert!(text.contains("check: theorem1"));
        assert!(text.contains("lhs: 3/2"));
        assert!(text.contains("variance: 1"));
        assert!(text.contains("mu: 1/2"));
        assert!(text.contains("depth: 2"));
    }
}
