//! Boolean functions f : {−1,1}^n → {−1,1} as exact packed truth tables.
//!
//! Point codes follow the bit convention `x_i = (−1)^(bit i−1 of the code)`,
//! so χ_S(x) = (−1)^⟨mask_S, code⟩ and all parity algebra stays in GF(2).
//! Fourier coefficients are kept as integers c(S) = 2^n·f̂(S); nothing in
//! this module rounds.
//!
//! Two transform paths exist on purpose: the full in-place butterfly is
//! guarded (2^n machine words of memory), while linear coefficients stream
//! over the packed table with word-level popcounts and work at the full
//! arity cap, where the 3^3-variable recursive majority lives.

use crate::rational::Rational;
use crate::sign::Sign;
use num_bigint::BigInt;
use num_traits::One;
use std::fmt;
use thiserror::Error;

/// Hard arity cap: a packed table at n = 27 is 16 MiB.
pub const MAX_ARITY: usize = 27;

/// Default guard for the full transform: 2^24 i64 coefficients ≈ 128 MiB.
pub const DEFAULT_TRANSFORM_GUARD: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("arity {arity} outside 1..={MAX_ARITY}")]
    ArityOutOfRange { arity: usize },
    #[error("point {point} out of range for arity {arity}")]
    PointOutOfRange { point: u64, arity: usize },
    #[error("table has {got} entries, arity {arity} needs {expected}")]
    TableLength {
        arity: usize,
        expected: u64,
        got: u64,
    },
    #[error(
        "arity {arity} exceeds the full-transform guard {guard}; \
         use linear_coefficients, which streams over the table"
    )]
    TransformGuard { arity: usize, guard: usize },
    #[error("composed arity {total} exceeds the cap {MAX_ARITY}")]
    ArityOverflow { total: usize },
    #[error("function power requires k >= 1")]
    ZeroPower,
    #[error("missing or malformed header line, expected `n=<int>`")]
    BadHeader,
    #[error("character at table position {position} is not '+' or '-'")]
    ForeignCharacter { position: usize },
    #[error("unexpected content after the truth table line")]
    TrailingContent,
    #[error("unknown builtin function {name:?}")]
    UnknownBuiltin { name: String },
    #[error("bad builtin spec {spec:?}: {reason}")]
    BadBuiltin { spec: String, reason: String },
}

/// A Boolean function as a packed sign table: bit b of the table is 1
/// exactly when f(point b) = −1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    arity: usize,
    words: Vec<u64>,
}

fn word_count(arity: usize) -> usize {
    if arity < 6 {
        1
    } else {
        1usize << (arity - 6)
    }
}

fn point_count(arity: usize) -> u64 {
    1u64 << arity
}

/// Bits valid in the single word when the table is shorter than 64.
fn table_mask(arity: usize) -> u64 {
    if arity >= 6 {
        !0
    } else {
        (1u64 << (1 << arity)) - 1
    }
}

fn check_arity(arity: usize) -> Result<(), BoolFnError> {
    if (1..=MAX_ARITY).contains(&arity) {
        Ok(())
    } else {
        Err(BoolFnError::ArityOutOfRange { arity })
    }
}

impl BooleanFunction {
    /// Build from per-point signs, indexed by point code.
    pub fn from_signs(arity: usize, signs: &[Sign]) -> Result<Self, BoolFnError> {
        check_arity(arity)?;
        if signs.len() as u64 != point_count(arity) {
            return Err(BoolFnError::TableLength {
                arity,
                expected: point_count(arity),
                got: signs.len() as u64,
            });
        }
        Ok(Self::from_fn(arity, |x| signs[x as usize]))
    }

    /// Build by evaluating a closure on every point code.
    pub fn from_fn(arity: usize, mut f: impl FnMut(u64) -> Sign) -> Self {
        assert!((1..=MAX_ARITY).contains(&arity));
        let words = word_count(arity);
        let points = point_count(arity);
        let mut table = vec![0u64; words];
        for (w, slot) in table.iter_mut().enumerate() {
            let base = (w as u64) << 6;
            let in_word = (points - base).min(64);
            let mut word = 0u64;
            for j in 0..in_word {
                if f(base + j).bit() {
                    word |= 1u64 << j;
                }
            }
            *slot = word;
        }
        BooleanFunction {
            arity,
            words: table,
        }
    }

    /// Build from a table code for tiny arities: bit b of `code` gives the
    /// sign bit at point b. Ascending code order is the enumeration order
    /// over all functions of a given arity.
    pub fn from_table_code(arity: usize, code: u64) -> Result<Self, BoolFnError> {
        check_arity(arity)?;
        if arity > 6 {
            return Err(BoolFnError::ArityOutOfRange { arity });
        }
        Ok(BooleanFunction {
            arity,
            words: vec![code & table_mask(arity)],
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn point_count(&self) -> u64 {
        point_count(self.arity)
    }

    /// Sign bit at a point code; true means f = −1.
    #[inline]
    pub fn bit_at(&self, point: u64) -> bool {
        debug_assert!(point < self.point_count());
        (self.words[(point >> 6) as usize] >> (point & 63)) & 1 == 1
    }

    #[inline]
    pub fn sign_at(&self, point: u64) -> Sign {
        Sign::from_bit(self.bit_at(point))
    }

    /// Range-checked evaluation.
    pub fn evaluate(&self, point: u64) -> Result<Sign, BoolFnError> {
        if point >= self.point_count() {
            return Err(BoolFnError::PointOutOfRange {
                point,
                arity: self.arity,
            });
        }
        Ok(self.sign_at(point))
    }

    /// Number of points with f = +1.
    pub fn positive_count(&self) -> u64 {
        let negatives: u64 = self.words.iter().map(|w| w.count_ones() as u64).sum();
        self.point_count() - negatives
    }

    /// μ = Pr[f = +1] as an exact rational.
    pub fn mu(&self) -> Rational {
        Rational::new(
            BigInt::from(self.positive_count()),
            BigInt::from(self.point_count()),
        )
    }

    /// σ² = 4μ(1−μ): 1 for balanced functions, 0 for constants.
    pub fn variance(&self) -> Rational {
        let mu = self.mu();
        Rational::from_integer(BigInt::from(4))
            * &mu
            * (Rational::from_integer(BigInt::one()) - &mu)
    }

    pub fn is_constant(&self) -> bool {
        let positives = self.positive_count();
        positives == 0 || positives == self.point_count()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.positive_count() == self.point_count()
    }

    /// Full exact spectrum under the default memory guard.
    pub fn spectrum(&self) -> Result<FourierSpectrum, BoolFnError> {
        self.spectrum_within(DEFAULT_TRANSFORM_GUARD)
    }

    /// Full exact spectrum, rejecting arities above `guard`.
    pub fn spectrum_within(&self, guard: usize) -> Result<FourierSpectrum, BoolFnError> {
        let guard = guard.min(MAX_ARITY);
        if self.arity > guard {
            return Err(BoolFnError::TransformGuard {
                arity: self.arity,
                guard,
            });
        }
        let mut values: Vec<i64> = (0..self.point_count())
            .map(|x| self.sign_at(x).value())
            .collect();
        walsh_hadamard(&mut values);
        Ok(FourierSpectrum {
            arity: self.arity,
            scaled: values,
        })
    }

    /// Fourier degree: the size of the largest S with f̂(S) ≠ 0; 0 for
    /// constants. Subject to the transform guard.
    pub fn fourier_degree(&self) -> Result<usize, BoolFnError> {
        Ok(self.spectrum()?.degree())
    }

    /// Σ_x f(x)·x_{var+1} as an integer, streamed word-by-word over the
    /// packed table. `var` is 0-based.
    fn sign_correlation(&self, var: usize) -> i64 {
        debug_assert!(var < self.arity);
        // Within one 64-point word, bit j of the pattern is bit `var` of the
        // point code base+j; for var >= 6 the pattern is constant per word.
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mask = table_mask(self.arity);
        let mut mismatches: u64 = 0;
        if var < 6 {
            let pattern = PATTERNS[var];
            for &w in &self.words {
                mismatches += ((w ^ pattern) & mask).count_ones() as u64;
            }
        } else {
            let stride_bit = var - 6;
            for (idx, &w) in self.words.iter().enumerate() {
                if (idx >> stride_bit) & 1 == 1 {
                    mismatches += (!w).count_ones() as u64;
                } else {
                    mismatches += w.count_ones() as u64;
                }
            }
        }
        self.point_count() as i64 - 2 * mismatches as i64
    }

    /// The n linear Fourier coefficients f̂(i) = (Σ_x f(x)x_i)/2^n, exact.
    /// Streams over the table, so it works beyond the transform guard.
    pub fn linear_coefficients(&self) -> Vec<Rational> {
        let denom = BigInt::from(self.point_count());
        (0..self.arity)
            .map(|v| Rational::new(BigInt::from(self.sign_correlation(v)), denom.clone()))
            .collect()
    }

    /// Σ_i f̂(i), exact, streamed.
    pub fn linear_coefficient_sum(&self) -> Rational {
        let total: i64 = (0..self.arity).map(|v| self.sign_correlation(v)).sum();
        Rational::new(BigInt::from(total), BigInt::from(self.point_count()))
    }

    /// (f ∘ g): block i of g-inputs feeds copy i of g, outer function f.
    /// Block 1 occupies code bits 0..n, so composed coordinate (i−1)n+j is
    /// copy i's input j.
    pub fn compose(&self, inner: &BooleanFunction) -> Result<BooleanFunction, BoolFnError> {
        let m = self.arity;
        let n = inner.arity;
        let total = m * n;
        if total > MAX_ARITY {
            return Err(BoolFnError::ArityOverflow { total });
        }
        let chunk_mask = (1u64 << n) - 1;
        Ok(BooleanFunction::from_fn(total, |x| {
            let mut outer_point = 0u64;
            for block in 0..m {
                let chunk = (x >> (block * n)) & chunk_mask;
                outer_point |= (inner.bit_at(chunk) as u64) << block;
            }
            self.sign_at(outer_point)
        }))
    }

    /// k-fold composition power: power(f, 1) = f, power(f, k) = f ∘ power(f, k−1).
    pub fn power(&self, k: u32) -> Result<BooleanFunction, BoolFnError> {
        if k == 0 {
            return Err(BoolFnError::ZeroPower);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    // ── builders ─────────────────────────────────────────────────────────

    /// 3-bit majority: the sign of x1 + x2 + x3.
    pub fn majority3() -> Self {
        BooleanFunction::from_fn(3, |x| Sign::from_bit((x & 7).count_ones() >= 2))
    }

    /// Π_i x_i on n variables.
    pub fn parity(n: usize) -> Result<Self, BoolFnError> {
        check_arity(n)?;
        Ok(BooleanFunction::from_fn(n, |x| {
            Sign::from_bit(x.count_ones() & 1 == 1)
        }))
    }

    /// f(x) = x_i with 1-based i.
    pub fn dictator(n: usize, i: usize) -> Result<Self, BoolFnError> {
        check_arity(n)?;
        if i == 0 || i > n {
            return Err(BoolFnError::BadBuiltin {
                spec: format!("dictator:{n}:{i}"),
                reason: format!("index {i} outside 1..={n}"),
            });
        }
        Ok(BooleanFunction::from_fn(n, move |x| {
            Sign::from_bit(x >> (i - 1) & 1 == 1)
        }))
    }

    pub fn constant(n: usize, sign: Sign) -> Result<Self, BoolFnError> {
        check_arity(n)?;
        Ok(BooleanFunction::from_fn(n, |_| sign))
    }

    /// k-fold recursive majority on 3^k inputs; k ≤ 3 under the arity cap.
    pub fn recursive_majority(k: u32) -> Result<Self, BoolFnError> {
        Self::majority3().power(k)
    }

    /// Parse a builtin spec: `maj3`, `parity:n`, `dictator:n:i`, `recmaj:k`
    /// (alias `recursive_majority:k`), `constant:n:{+,-}`.
    pub fn builtin(spec: &str) -> Result<Self, BoolFnError> {
        let bad = |reason: String| BoolFnError::BadBuiltin {
            spec: spec.to_string(),
            reason,
        };
        let mut parts = spec.split(':');
        let name = parts.next().unwrap_or("");
        let args: Vec<&str> = parts.collect();
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| bad(format!("bad integer {s:?}")))
        };
        match (name, args.as_slice()) {
            ("maj3", []) => Ok(Self::majority3()),
            ("parity", [n]) => Self::parity(parse_usize(n)?),
            ("dictator", [n, i]) => Self::dictator(parse_usize(n)?, parse_usize(i)?),
            ("recmaj" | "recursive_majority", [k]) => {
                let k = k
                    .parse::<u32>()
                    .map_err(|_| bad(format!("bad integer {k:?}")))?;
                if k == 0 {
                    return Err(bad("k must be >= 1".to_string()));
                }
                Self::recursive_majority(k)
            }
            ("constant", [n, s]) => {
                let sign = match *s {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    _ => return Err(bad("sign must be '+' or '-'".to_string())),
                };
                Self::constant(parse_usize(n)?, sign)
            }
            ("maj3" | "parity" | "dictator" | "recmaj" | "recursive_majority" | "constant", _) => {
                Err(bad("wrong number of parameters".to_string()))
            }
            _ => Err(BoolFnError::UnknownBuiltin {
                name: name.to_string(),
            }),
        }
    }

    // ── text format ──────────────────────────────────────────────────────

    /// Parse the truth-table text format: line 1 `n=<int>`, line 2 a string
    /// of 2^n characters from {+, -}, position b giving f at point code b.
    pub fn parse(text: &str) -> Result<Self, BoolFnError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(BoolFnError::BadHeader)?.trim();
        let arity: usize = header
            .strip_prefix("n=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or(BoolFnError::BadHeader)?;
        check_arity(arity)?;
        let table_line = lines.next().unwrap_or("").trim();
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(BoolFnError::TrailingContent);
        }
        let expected = point_count(arity);
        if table_line.len() as u64 != expected {
            return Err(BoolFnError::TableLength {
                arity,
                expected,
                got: table_line.len() as u64,
            });
        }
        let bytes = table_line.as_bytes();
        for (position, &b) in bytes.iter().enumerate() {
            if b != b'+' && b != b'-' {
                return Err(BoolFnError::ForeignCharacter { position });
            }
        }
        Ok(BooleanFunction::from_fn(arity, |x| {
            Sign::from_bit(bytes[x as usize] == b'-')
        }))
    }

    pub fn serialize(&self) -> String {
        let mut table = String::with_capacity(self.point_count() as usize + 16);
        for x in 0..self.point_count() {
            table.push(self.sign_at(x).symbol());
        }
        format!("n={}\n{}\n", self.arity, table)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity <= 6 {
            let table: String = (0..self.point_count())
                .map(|x| self.sign_at(x).symbol())
                .collect();
            write!(f, "BooleanFunction(n={}, {})", self.arity, table)
        } else {
            write!(f, "BooleanFunction(n={})", self.arity)
        }
    }
}

/// In-place butterfly: values[S] becomes Σ_x (−1)^⟨S,x⟩ values[x].
fn walsh_hadamard(values: &mut [i64]) {
    let len = values.len();
    let mut step = 1;
    while step < len {
        for block in (0..len).step_by(step * 2) {
            for i in block..block + step {
                let a = values[i];
                let b = values[i + step];
                values[i] = a + b;
                values[i + step] = a - b;
            }
        }
        step *= 2;
    }
}

/// Exact integer-scaled Fourier spectrum: `scaled[S] = c(S) = 2^n·f̂(S)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FourierSpectrum {
    arity: usize,
    scaled: Vec<i64>,
}

impl FourierSpectrum {
    pub(crate) fn from_scaled(arity: usize, scaled: Vec<i64>) -> Self {
        debug_assert_eq!(scaled.len() as u64, point_count(arity));
        FourierSpectrum { arity, scaled }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// c(S) = 2^n·f̂(S) for the subset mask S.
    pub fn coefficient_scaled(&self, mask: u64) -> i64 {
        self.scaled[mask as usize]
    }

    /// f̂(S) as an exact rational.
    pub fn coefficient(&self, mask: u64) -> Rational {
        Rational::new(
            BigInt::from(self.coefficient_scaled(mask)),
            BigInt::from(point_count(self.arity)),
        )
    }

    /// Nonzero coefficients in ascending mask order.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.scaled
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(mask, &c)| (mask as u64, c))
    }

    /// Max |S| with c(S) ≠ 0; 0 for constants.
    pub fn degree(&self) -> usize {
        self.nonzero()
            .map(|(mask, _)| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Σ_i f̂(i) over the n singleton masks, exact.
    pub fn linear_sum(&self) -> Rational {
        let total: i64 = (0..self.arity).map(|i| self.scaled[1usize << i]).sum();
        Rational::new(BigInt::from(total), BigInt::from(point_count(self.arity)))
    }

    /// Σ_S c(S)², which Parseval pins to 4^n for ±1-valued functions.
    pub fn scaled_square_sum(&self) -> i128 {
        self.scaled.iter().map(|&c| (c as i128) * (c as i128)).sum()
    }

    /// Invert the transform back to the sign table. Valid spectra only
    /// arise from genuine functions, so the division is exact.
    #[cfg(test)]
    pub(crate) fn inverse(&self) -> BooleanFunction {
        let mut values = self.scaled.clone();
        walsh_hadamard(&mut values);
        let points = point_count(self.arity) as i64;
        BooleanFunction::from_fn(self.arity, |x| {
            let v = values[x as usize] / points;
            debug_assert!(v == 1 || v == -1);
            Sign::from_bit(v < 0)
        })
    }
}

impl fmt::Debug for FourierSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FourierSpectrum(n={}, nonzero={})",
            self.arity,
            self.nonzero().count()
        )
    }
}
