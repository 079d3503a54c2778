//! Parity decision trees: representation, evaluation, exact leaf analysis,
//! moment statistics, correlation-freeness, and refinement.
//!
//! A tree is a full binary tree whose internal nodes query χ_S(x) for a
//! nonempty S ⊆ \[n\]; the edge labelled +1 is taken when the parity is even
//! in bit convention. Every root-to-leaf path accumulates an affine system
//! over GF(2), and everything downstream (leaf mass 2^(−rank), the leaf
//! vector ℓ ∈ {−1,0,+1}^n, the moment statistics E(Σℓ)² and E|Σℓ|) is read
//! off that system exactly.
//!
//! Redundant and contradictory queries are legal: a contradictory path
//! yields a mass-0 dead leaf that is excluded from every expectation.

use crate::boolfn::BooleanFunction;
use crate::gf2::{parity, AffineSystem, SystemSummary};
use crate::rational::{dyadic, Rational};
use crate::sign::Sign;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PdtError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("tree arity {tree} does not match function arity {function}")]
    ArityMismatch { tree: usize, function: usize },
    #[error("point {point} out of range for arity {arity}")]
    PointOutOfRange { point: u64, arity: usize },
    #[error("no leaf with id {leaf_id:?}")]
    UnknownLeaf { leaf_id: String },
    #[error("query mask must be nonempty")]
    EmptyMask,
    #[error("query mask {mask:#b} has indices outside 1..={arity}")]
    MaskOutOfRange { mask: u64, arity: usize },
}

/// One node: a ±1 leaf or a parity query with its two subtrees. The first
/// subtree is the χ = +1 child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(Sign),
    Query {
        mask: u64,
        pos: Box<Node>,
        neg: Box<Node>,
    },
}

impl Node {
    pub fn leaf(sign: Sign) -> Node {
        Node::Leaf(sign)
    }

    pub fn query(mask: u64, pos: Node, neg: Node) -> Node {
        Node::Query {
            mask,
            pos: Box::new(pos),
            neg: Box::new(neg),
        }
    }
}

/// A parity decision tree over a fixed ambient arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityDecisionTree {
    arity: usize,
    root: Node,
}

/// Everything leaf analysis produces for one leaf.
///
/// `vector` is ℓ: entry i−1 is (−1)^bit for a coordinate forced to `bit`
/// by the path's affine system and 0 otherwise, so ℓ_i ≠ 0 exactly when
/// i is forced. `mass` is 2^(−rank) for a consistent system and 0 for a
/// dead leaf; masses over a whole tree sum to exactly 1.
#[derive(Clone, Debug)]
pub struct LeafSummary {
    pub path: String,
    pub label: Sign,
    pub system: AffineSystem,
    pub summary: SystemSummary,
    pub mass: Rational,
    pub vector: Vec<i8>,
    pub path_length: usize,
}

impl LeafSummary {
    /// Σ_i ℓ_i as an integer.
    pub fn vector_sum(&self) -> i64 {
        self.vector.iter().map(|&v| v as i64).sum()
    }

    pub fn is_dead(&self) -> bool {
        !self.summary.consistent
    }
}

fn validate_node(node: &Node, arity: usize) -> Result<(), PdtError> {
    match node {
        Node::Leaf(_) => Ok(()),
        Node::Query { mask, pos, neg } => {
            if *mask == 0 {
                return Err(PdtError::EmptyMask);
            }
            if *mask & !((1u64 << arity) - 1) != 0 {
                return Err(PdtError::MaskOutOfRange { mask: *mask, arity });
            }
            validate_node(pos, arity)?;
            validate_node(neg, arity)
        }
    }
}

impl ParityDecisionTree {
    pub fn new(arity: usize, root: Node) -> Result<Self, PdtError> {
        assert!(arity >= 1, "arity must be at least 1");
        validate_node(&root, arity)?;
        Ok(ParityDecisionTree { arity, root })
    }

    pub fn leaf(arity: usize, sign: Sign) -> Self {
        ParityDecisionTree {
            arity,
            root: Node::Leaf(sign),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn point_count(&self) -> u64 {
        1u64 << self.arity
    }

    /// Label reached by a point, without materializing the path.
    pub fn value_at(&self, point: u64) -> Sign {
        debug_assert!(point < self.point_count());
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(sign) => return *sign,
                Node::Query { mask, pos, neg } => {
                    node = if parity(mask & point) { neg } else { pos };
                }
            }
        }
    }

    /// Follow the path a point defines; returns the leaf label and the
    /// ±-edge path string identifying the leaf.
    pub fn eval(&self, point: u64) -> Result<(Sign, String), PdtError> {
        if point >= self.point_count() {
            return Err(PdtError::PointOutOfRange {
                point,
                arity: self.arity,
            });
        }
        let mut node = &self.root;
        let mut path = String::new();
        loop {
            match node {
                Node::Leaf(sign) => return Ok((*sign, path)),
                Node::Query { mask, pos, neg } => {
                    if parity(mask & point) {
                        path.push('-');
                        node = neg;
                    } else {
                        path.push('+');
                        node = pos;
                    }
                }
            }
        }
    }

    /// The function the tree induces: every point mapped to its leaf label.
    pub fn induced_function(&self) -> BooleanFunction {
        BooleanFunction::from_fn(self.arity, |x| self.value_at(x))
    }

    /// Exhaustive check that the tree computes `f`; `Ok(None)` on success,
    /// `Ok(Some(point))` with the first counterexample otherwise.
    pub fn counterexample(&self, f: &BooleanFunction) -> Result<Option<u64>, PdtError> {
        if f.arity() != self.arity {
            return Err(PdtError::ArityMismatch {
                tree: self.arity,
                function: f.arity(),
            });
        }
        Ok((0..self.point_count()).find(|&x| self.value_at(x) != f.sign_at(x)))
    }

    pub fn computes(&self, f: &BooleanFunction) -> Result<bool, PdtError> {
        Ok(self.counterexample(f)?.is_none())
    }

    /// Maximum number of internal nodes on any root-to-leaf path; a single
    /// leaf has depth 0.
    pub fn depth(&self) -> usize {
        fn go(node: &Node) -> usize {
            match node {
                Node::Leaf(_) => 0,
                Node::Query { pos, neg, .. } => 1 + go(pos).max(go(neg)),
            }
        }
        go(&self.root)
    }

    /// Mass-weighted path length Σ_leaves mass·path_length; dead leaves
    /// contribute nothing.
    pub fn average_depth(&self) -> Rational {
        self.leaf_summaries()
            .iter()
            .map(|leaf| &leaf.mass * Rational::from_integer((leaf.path_length as i64).into()))
            .sum()
    }

    /// All leaf ids in depth-first order, +1 edge first.
    pub fn leaf_ids(&self) -> Vec<String> {
        fn go(node: &Node, path: &mut String, out: &mut Vec<String>) {
            match node {
                Node::Leaf(_) => out.push(path.clone()),
                Node::Query { pos, neg, .. } => {
                    path.push('+');
                    go(pos, path, out);
                    path.pop();
                    path.push('-');
                    go(neg, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut String::new(), &mut out);
        out
    }

    /// Analyze every leaf: build the path's affine system, reduce it once,
    /// and read off mass, leaf vector and the forced/correlated report.
    pub fn leaf_summaries(&self) -> Vec<LeafSummary> {
        fn go(
            arity: usize,
            node: &Node,
            path: &mut String,
            constraints: &mut Vec<(u64, bool)>,
            out: &mut Vec<LeafSummary>,
        ) {
            match node {
                Node::Leaf(label) => {
                    let mut system = AffineSystem::empty(arity);
                    for &(mask, bit) in constraints.iter() {
                        system.push(mask, bit);
                    }
                    let summary = system.analyze();
                    let mass = if summary.consistent {
                        dyadic(summary.rank)
                    } else {
                        Rational::zero()
                    };
                    let mut vector = vec![0i8; arity];
                    for (&i, &bit) in &summary.forced {
                        vector[i] = if bit { -1 } else { 1 };
                    }
                    out.push(LeafSummary {
                        path: path.clone(),
                        label: *label,
                        system,
                        summary,
                        mass,
                        vector,
                        path_length: constraints.len(),
                    });
                }
                Node::Query { mask, pos, neg } => {
                    path.push('+');
                    constraints.push((*mask, false));
                    go(arity, pos, path, constraints, out);
                    constraints.pop();
                    path.pop();
                    path.push('-');
                    constraints.push((*mask, true));
                    go(arity, neg, path, constraints, out);
                    constraints.pop();
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(
            self.arity,
            &self.root,
            &mut String::new(),
            &mut Vec::new(),
            &mut out,
        );
        out
    }

    /// E_{ℓ∈T}[(Σ_i ℓ_i)²], mass-weighted and exact.
    pub fn second_moment(&self) -> Rational {
        second_moment_of(&self.leaf_summaries())
    }

    /// E_{ℓ∈T}|Σ_i ℓ_i|, mass-weighted and exact.
    pub fn first_abs_moment(&self) -> Rational {
        first_abs_moment_of(&self.leaf_summaries())
    }

    /// A tree is correlation-free when no consistent leaf fixes a pairwise
    /// parity x_i ⊕ x_j without fixing both coordinates.
    pub fn is_correlation_free(&self) -> bool {
        self.correlation_witness().is_none()
    }

    /// First offending (leaf id, pair) in depth-first order, 0-based pair.
    pub fn correlation_witness(&self) -> Option<(String, (usize, usize))> {
        self.leaf_summaries().into_iter().find_map(|leaf| {
            if !leaf.summary.consistent {
                return None;
            }
            leaf.summary
                .correlated_pairs
                .iter()
                .next()
                .copied()
                .map(|pair| (leaf.path, pair))
        })
    }

    /// Refine until no consistent leaf has a correlated pair: at each such
    /// leaf, repeatedly query the smallest coordinate appearing in any
    /// correlated pair, re-analyzing after every query. Querying a pair
    /// member fixes its whole correlation class, and re-analysis catches
    /// pairs that only surface once earlier queries land (a weight-3
    /// relation plus a new unit vector yields a fresh weight-2 relation).
    /// Every query added this way is rank-increasing, which bounds the
    /// refined depth by twice the original.
    ///
    /// The result leaves the original tree as a prefix and induces the
    /// same function; already correlation-free trees come back unchanged.
    pub fn refine_correlation_free(&self) -> ParityDecisionTree {
        fn refine_leaf(arity: usize, constraints: &mut Vec<(u64, bool)>, label: Sign) -> Node {
            let mut system = AffineSystem::empty(arity);
            for &(mask, bit) in constraints.iter() {
                system.push(mask, bit);
            }
            let summary = system.analyze();
            if !summary.consistent {
                return Node::Leaf(label);
            }
            let Some(&(low, _)) = summary.correlated_pairs.iter().next() else {
                return Node::Leaf(label);
            };
            let mask = 1u64 << low;
            constraints.push((mask, false));
            let pos = refine_leaf(arity, constraints, label);
            constraints.pop();
            constraints.push((mask, true));
            let neg = refine_leaf(arity, constraints, label);
            constraints.pop();
            Node::Query {
                mask,
                pos: Box::new(pos),
                neg: Box::new(neg),
            }
        }

        fn go(arity: usize, node: &Node, constraints: &mut Vec<(u64, bool)>) -> Node {
            match node {
                Node::Leaf(label) => refine_leaf(arity, constraints, *label),
                Node::Query { mask, pos, neg } => {
                    constraints.push((*mask, false));
                    let new_pos = go(arity, pos, constraints);
                    constraints.pop();
                    constraints.push((*mask, true));
                    let new_neg = go(arity, neg, constraints);
                    constraints.pop();
                    Node::Query {
                        mask: *mask,
                        pos: Box::new(new_pos),
                        neg: Box::new(new_neg),
                    }
                }
            }
        }

        let root = go(self.arity, &self.root, &mut Vec::new());
        ParityDecisionTree {
            arity: self.arity,
            root,
        }
    }

    /// Replace the named leaf with a query node whose two children carry
    /// the old label. Never changes the induced function.
    pub fn split_leaf(&self, leaf_id: &str, mask: u64) -> Result<ParityDecisionTree, PdtError> {
        if mask == 0 {
            return Err(PdtError::EmptyMask);
        }
        if mask & !((1u64 << self.arity) - 1) != 0 {
            return Err(PdtError::MaskOutOfRange {
                mask,
                arity: self.arity,
            });
        }
        let unknown = || PdtError::UnknownLeaf {
            leaf_id: leaf_id.to_string(),
        };
        fn go(
            node: &Node,
            remaining: &[u8],
            mask: u64,
            unknown: &impl Fn() -> PdtError,
        ) -> Result<Node, PdtError> {
            match node {
                Node::Leaf(label) => {
                    if remaining.is_empty() {
                        Ok(Node::query(mask, Node::Leaf(*label), Node::Leaf(*label)))
                    } else {
                        Err(unknown())
                    }
                }
                Node::Query { mask: m, pos, neg } => {
                    let (&edge, rest) = remaining.split_first().ok_or_else(unknown)?;
                    match edge {
                        b'+' => Ok(Node::Query {
                            mask: *m,
                            pos: Box::new(go(pos, rest, mask, unknown)?),
                            neg: neg.clone(),
                        }),
                        b'-' => Ok(Node::Query {
                            mask: *m,
                            pos: pos.clone(),
                            neg: Box::new(go(neg, rest, mask, unknown)?),
                        }),
                        _ => Err(unknown()),
                    }
                }
            }
        }
        let root = go(&self.root, leaf_id.as_bytes(), mask, &unknown)?;
        Ok(ParityDecisionTree {
            arity: self.arity,
            root,
        })
    }

    // ── text format ──────────────────────────────────────────────────────

    /// Parse the tree text format: a header line `n=<int>` followed by
    /// `tree := leaf | "(" "Q" masklist tree tree ")"` with `leaf := + | -`
    /// and `masklist := int ("," int)*` of 1-based indices; the first
    /// subtree is the χ = +1 child. Whitespace-insensitive between tokens.
    pub fn parse(text: &str) -> Result<Self, PdtError> {
        let err = |position: usize, message: &str| PdtError::Parse {
            position,
            message: message.to_string(),
        };
        let header_end = text
            .find('\n')
            .ok_or_else(|| err(0, "missing tree after header"))?;
        let header = text[..header_end].trim();
        let arity: usize = header
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| err(0, "malformed header, expected `n=<int>`"))?;
        if arity == 0 || arity > crate::boolfn::MAX_ARITY {
            return Err(err(
                0,
                &format!("arity {arity} outside 1..={}", crate::boolfn::MAX_ARITY),
            ));
        }
        let body_offset = header_end + 1;
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: body_offset,
            arity,
        };
        let root = parser.tree()?;
        parser.skip_whitespace();
        if parser.pos < parser.bytes.len() {
            return Err(err(parser.pos, "unexpected content after tree"));
        }
        Ok(ParityDecisionTree { arity, root })
    }

    /// Canonical rendering: single spaces between tokens, masks as sorted
    /// comma-joined indices. `parse ∘ serialize` is the identity.
    pub fn serialize(&self) -> String {
        fn go(node: &Node, out: &mut String) {
            match node {
                Node::Leaf(sign) => out.push(sign.symbol()),
                Node::Query { mask, pos, neg } => {
                    out.push_str("(Q ");
                    let mut first = true;
                    for i in 0..64 {
                        if mask >> i & 1 == 1 {
                            if !first {
                                out.push(',');
                            }
                            out.push_str(&(i + 1).to_string());
                            first = false;
                        }
                    }
                    out.push(' ');
                    go(pos, out);
                    out.push(' ');
                    go(neg, out);
                    out.push(')');
                }
            }
        }
        let mut out = format!("n={}\n", self.arity);
        go(&self.root, &mut out);
        out.push('\n');
        out
    }
}

/// Σ mass·(Σℓ)² over already-computed leaf summaries.
pub fn second_moment_of(leaves: &[LeafSummary]) -> Rational {
    leaves
        .iter()
        .map(|leaf| {
            let s = leaf.vector_sum();
            &leaf.mass * Rational::from_integer((s * s).into())
        })
        .sum()
}

/// Σ mass·|Σℓ| over already-computed leaf summaries.
pub fn first_abs_moment_of(leaves: &[LeafSummary]) -> Rational {
    leaves
        .iter()
        .map(|leaf| &leaf.mass * Rational::from_integer(leaf.vector_sum().abs().into()))
        .sum()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> PdtError {
        PdtError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_whitespace(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_whitespace();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), PdtError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.error(format!(
                "expected {:?}, found {:?}",
                byte as char, b as char
            ))),
            None => Err(self.error(format!("expected {:?}, found end of input", byte as char))),
        }
    }

    fn integer(&mut self) -> Result<usize, PdtError> {
        self.skip_whitespace();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an index"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("index too large"))
    }

    fn masklist(&mut self) -> Result<u64, PdtError> {
        let mut mask = 0u64;
        loop {
            self.skip_whitespace();
            let at = self.pos;
            let index = self.integer()?;
            if index == 0 || index > self.arity {
                return Err(PdtError::Parse {
                    position: at,
                    message: format!("index {index} outside 1..={}", self.arity),
                });
            }
            mask |= 1u64 << (index - 1);
            if self.peek() == Some(b',') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(mask)
    }

    fn tree(&mut self) -> Result<Node, PdtError> {
        match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                Ok(Node::Leaf(Sign::Plus))
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(Node::Leaf(Sign::Minus))
            }
            Some(b'(') => {
                self.pos += 1;
                self.expect(b'Q')?;
                let at = self.pos;
                let mask = self.masklist()?;
                if mask == 0 {
                    return Err(PdtError::Parse {
                        position: at,
                        message: "empty query mask".to_string(),
                    });
                }
                let pos = self.tree()?;
                let neg = self.tree()?;
                self.expect(b')')?;
                Ok(Node::query(mask, pos, neg))
            }
            Some(b) => Err(self.error(format!("expected a tree, found {:?}", b as char))),
            None => Err(self.error("expected a tree, found end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, ratio};

    pub(crate) const MAJ3_TREE: &str = "n=3\n(Q 1,2 (Q 1 + -) (Q 3 + -))\n";

    fn maj3_tree() -> ParityDecisionTree {
        ParityDecisionTree::parse(MAJ3_TREE).unwrap()
    }

    #[test]
    fn parse_and_serialize_canonical() {
        let tree = maj3_tree();
        assert_eq!(tree.arity(), 3);
        assert_eq!(tree.serialize(), MAJ3_TREE);
        // Whitespace-insensitive, mask order irrelevant, duplicates fold.
        let messy = "n=3\n ( Q 2 , 1 (Q 1 + -)\n\t(Q 3,3 + -) ) ";
        assert_eq!(
            ParityDecisionTree::parse(messy).unwrap().serialize(),
            MAJ3_TREE
        );
    }

    #[test]
    fn parse_single_leaf_and_redundant_query() {
        let leaf = ParityDecisionTree::parse("n=1\n+").unwrap();
        assert_eq!(leaf.depth(), 0);
        assert_eq!(leaf.serialize(), "n=1\n+\n");
        let redundant = ParityDecisionTree::parse("n=1\n(Q 1 + +)").unwrap();
        assert!(redundant
            .computes(&BooleanFunction::constant(1, Sign::Plus).unwrap())
            .unwrap());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = ParityDecisionTree::parse("n=3\n(Q  + -)").unwrap_err();
        assert!(matches!(err, PdtError::Parse { .. }), "{err:?}");
        let err = ParityDecisionTree::parse("n=3\n(Q 4 + -)").unwrap_err();
        match err {
            PdtError::Parse { position, message } => {
                assert_eq!(position, 7);
                assert!(message.contains("outside"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(ParityDecisionTree::parse("n=3\n(Q 1 + -").is_err());
        assert!(ParityDecisionTree::parse("n=3\n(Q 1 + -)) junk").is_err());
        assert!(ParityDecisionTree::parse("x=3\n+").is_err());
    }

    fn code(bits: [u8; 3]) -> u64 {
        bits.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum()
    }

    #[test]
    fn eval_follows_parity_edges() {
        let tree = maj3_tree();
        // (+1, +1, −1): χ{1,2} = +1, then x1 = +1.
        assert_eq!(
            tree.eval(code([0, 0, 1])).unwrap(),
            (Sign::Plus, "++".to_string())
        );
        // (−1, +1, +1): χ{1,2} = −1, then x3 = +1.
        assert_eq!(
            tree.eval(code([1, 0, 0])).unwrap(),
            (Sign::Plus, "-+".to_string())
        );
        let leaf = ParityDecisionTree::leaf(2, Sign::Minus);
        for x in 0..4 {
            assert_eq!(leaf.eval(x).unwrap(), (Sign::Minus, String::new()));
        }
        assert!(matches!(
            tree.eval(8),
            Err(PdtError::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn computes_maj3() {
        let tree = maj3_tree();
        assert!(tree.computes(&BooleanFunction::majority3()).unwrap());
        let parity3 = BooleanFunction::parity(3).unwrap();
        let witness = tree.counterexample(&parity3).unwrap().unwrap();
        assert_ne!(tree.value_at(witness), parity3.sign_at(witness));
        let constant = ParityDecisionTree::leaf(2, Sign::Plus);
        assert!(constant
            .computes(&BooleanFunction::constant(2, Sign::Plus).unwrap())
            .unwrap());
        assert!(matches!(
            constant.counterexample(&BooleanFunction::majority3()),
            Err(PdtError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn depth_and_average_depth() {
        let tree = maj3_tree();
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.average_depth(), integer(2));
        let leaf = ParityDecisionTree::leaf(1, Sign::Plus);
        assert_eq!(leaf.depth(), 0);
        assert_eq!(leaf.average_depth(), integer(0));
        // Lopsided tree: masses 1/2, 1/4, 1/4.
        let lopsided = ParityDecisionTree::parse("n=2\n(Q 1 + (Q 2 + -))").unwrap();
        assert_eq!(lopsided.depth(), 2);
        assert_eq!(lopsided.average_depth(), ratio(3, 2));
    }

    #[test]
    fn leaf_summaries_maj3_tree() {
        let leaves = maj3_tree().leaf_summaries();
        let expected: Vec<(&str, Vec<i8>)> = vec![
            ("++", vec![1, 1, 0]),
            ("+-", vec![-1, -1, 0]),
            ("-+", vec![0, 0, 1]),
            ("--", vec![0, 0, -1]),
        ];
        assert_eq!(leaves.len(), 4);
        for (leaf, (path, vector)) in leaves.iter().zip(&expected) {
            assert_eq!(&leaf.path, path);
            assert_eq!(&leaf.vector, vector);
            assert_eq!(leaf.mass, ratio(1, 4));
            assert_eq!(leaf.path_length, 2);
        }
        let total: Rational = leaves.iter().map(|l| l.mass.clone()).sum();
        assert_eq!(total, integer(1));
    }

    #[test]
    fn leaf_summaries_unforced_and_dead() {
        // A single pair query forces no coordinate.
        let tree = ParityDecisionTree::parse("n=3\n(Q 1,2 + -)").unwrap();
        for leaf in tree.leaf_summaries() {
            assert_eq!(leaf.vector, vec![0, 0, 0]);
            assert_eq!(leaf.mass, ratio(1, 2));
        }
        // Contradictory path: dead leaf with mass 0.
        let tree = ParityDecisionTree::parse("n=1\n(Q 1 (Q 1 + -) -)").unwrap();
        let leaves = tree.leaf_summaries();
        let dead: Vec<_> = leaves.iter().filter(|l| l.is_dead()).collect();
        assert_eq!(dead.len(), 1);
        assert_eq!(dead[0].path, "+-");
        assert!(dead[0].mass.is_zero());
        let total: Rational = leaves.iter().map(|l| l.mass.clone()).sum();
        assert_eq!(total, integer(1));
    }

    #[test]
    fn second_moment_values() {
        assert_eq!(maj3_tree().second_moment(), ratio(5, 2));
        let pair = ParityDecisionTree::parse("n=3\n(Q 1,2 + -)").unwrap();
        assert_eq!(pair.second_moment(), integer(0));
        let refined = ParityDecisionTree::parse("n=3\n(Q 1,2 (Q 1 + -) (Q 1 + -))").unwrap();
        assert_eq!(refined.second_moment(), integer(2));
    }

    #[test]
    fn first_abs_moment_values() {
        assert_eq!(maj3_tree().first_abs_moment(), ratio(3, 2));
        assert_eq!(
            ParityDecisionTree::leaf(3, Sign::Plus).first_abs_moment(),
            integer(0)
        );
        let single = ParityDecisionTree::parse("n=1\n(Q 1 + -)").unwrap();
        assert_eq!(single.first_abs_moment(), integer(1));
    }

    #[test]
    fn correlation_freeness() {
        // The MAJ3 tree is NOT correlation-free: the root fixes x1 ⊕ x2 on
        // every path, but the χ = −1 branch never fixes x1 or x2. That is
        // exactly why its second moment 5/2 exceeds the correlation-free
        // bound d = 2.
        let (leaf, pair_idx) = maj3_tree().correlation_witness().unwrap();
        assert_eq!(leaf, "-+");
        assert_eq!(pair_idx, (0, 1));

        let pair = ParityDecisionTree::parse("n=3\n(Q 1,2 + -)").unwrap();
        let (leaf, pair_idx) = pair.correlation_witness().unwrap();
        assert_eq!(leaf, "+");
        assert_eq!(pair_idx, (0, 1));

        // Every leaf fixes both x1 and x2 here, so the pair query is fine.
        let fixed = ParityDecisionTree::parse("n=3\n(Q 1,2 (Q 1 + -) (Q 1 + -))").unwrap();
        assert!(fixed.is_correlation_free());

        // Plain decision trees are always correlation-free.
        let plain = ParityDecisionTree::parse("n=2\n(Q 1 (Q 2 + -) (Q 2 - +))").unwrap();
        assert!(plain.is_correlation_free());
    }

    #[test]
    fn refine_single_pair_query() {
        let tree = ParityDecisionTree::parse("n=3\n(Q 1,2 + -)").unwrap();
        let refined = tree.refine_correlation_free();
        assert_eq!(refined.serialize(), "n=3\n(Q 1,2 (Q 1 + +) (Q 1 - -))\n");
        assert!(refined.is_correlation_free());
        assert_eq!(refined.depth(), 2);
        assert_eq!(tree.second_moment(), integer(0));
        assert_eq!(refined.second_moment(), integer(2));
        assert_eq!(refined.induced_function(), tree.induced_function());
    }

    #[test]
    fn refine_is_fixpoint_on_correlation_free_trees() {
        let fixed = ParityDecisionTree::parse("n=3\n(Q 1,2 (Q 1 + -) (Q 1 + -))").unwrap();
        assert_eq!(fixed.refine_correlation_free(), fixed);
        let plain = ParityDecisionTree::parse("n=2\n(Q 1 (Q 2 + -) (Q 2 - +))").unwrap();
        assert_eq!(plain.refine_correlation_free(), plain);
        let leaf = ParityDecisionTree::leaf(4, Sign::Minus);
        assert_eq!(leaf.refine_correlation_free(), leaf);
    }

    #[test]
    fn refine_maj3_tree_fixes_its_correlated_branch() {
        // The χ = −1 branch leaves x1 ⊕ x2 dangling; refinement queries x1
        // below both of its leaves. The extra splits have δ = 0, so the
        // second moment stays exactly 5/2.
        let tree = maj3_tree();
        let refined = tree.refine_correlation_free();
        assert_eq!(
            refined.serialize(),
            "n=3\n(Q 1,2 (Q 1 + -) (Q 3 (Q 1 + +) (Q 1 - -)))\n"
        );
        assert!(refined.is_correlation_free());
        assert_eq!(refined.depth(), 3);
        assert!(refined.depth() <= 2 * tree.depth());
        assert_eq!(refined.second_moment(), ratio(5, 2));
        assert_eq!(refined.induced_function(), tree.induced_function());
    }

    #[test]
    fn refine_handles_cascading_relations() {
        // Queries {1,2,3} and {1}: once x1 lands, e2+e3 enters the row
        // space, so the pair {2,3} only appears after the first query.
        let tree = ParityDecisionTree::parse("n=3\n(Q 1,2,3 (Q 1 + -) (Q 1 + -))").unwrap();
        assert!(!tree.is_correlation_free());
        let refined = tree.refine_correlation_free();
        assert!(refined.is_correlation_free());
        assert!(refined.depth() <= 2 * tree.depth());
        assert_eq!(refined.induced_function(), tree.induced_function());
    }

    #[test]
    fn split_leaf_basics() {
        let leaf = ParityDecisionTree::parse("n=1\n+").unwrap();
        let split = leaf.split_leaf("", 0b1).unwrap();
        assert_eq!(split.serialize(), "n=1\n(Q 1 + +)\n");
        assert_eq!(split.induced_function(), leaf.induced_function());

        let tree = maj3_tree();
        let split = tree.split_leaf("-+", 0b011).unwrap();
        assert_eq!(split.induced_function(), tree.induced_function());
        assert_eq!(
            tree.split_leaf("", 1),
            Err(PdtError::UnknownLeaf { leaf_id: "".into() })
        );
        assert_eq!(
            tree.split_leaf("+++", 1),
            Err(PdtError::UnknownLeaf {
                leaf_id: "+++".into()
            })
        );
        assert_eq!(tree.split_leaf("++", 0), Err(PdtError::EmptyMask));
        assert_eq!(
            tree.split_leaf("++", 0b1000),
            Err(PdtError::MaskOutOfRange {
                mask: 0b1000,
                arity: 3
            })
        );
    }

    #[test]
    fn split_moment_increase_is_mass_times_delta_squared() {
        // Splitting the "++" leaf (vector (1,1,0), mass 1/4) with {3}: the
        // children newly fix x3 to ±1, so δ = 1 and the increase is 1/4·1².
        let tree = maj3_tree();
        let split = tree.split_leaf("++", 0b100).unwrap();
        let increase = split.second_moment() - tree.second_moment();
        assert_eq!(increase, ratio(1, 4));

        // Splitting "-+" with {1} newly fixes the correlated pair x1, x2
        // with opposite signs, so δ = 0 and the moment is unchanged.
        let split = tree.split_leaf("-+", 0b001).unwrap();
        assert_eq!(split.second_moment(), tree.second_moment());
    }
}
