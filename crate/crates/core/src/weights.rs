//! Ternary digit combinatorics: digit sums, digit-factorial products, the
//! `H` function, the Hamming-weight realizability criterion and the run-block
//! machinery used to reason about `wt(2a)`.
//!
//! Every integer argument is first reduced modulo `3^n - 1`; the residue 0
//! has weight 0 and digit-factorial product 1.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, mul_mod, reduce};
use crate::error::{Error, Result};
use crate::field::coset_of;
use crate::tally::Tally;

pub fn modulus(n: usize) -> u64 {
    3u64.pow(n as u32) - 1
}

/// Index modulo `3^n - 1`, always held reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueIndex {
    pub value: u64,
    pub modulus: u64,
}

impl ResidueIndex {
    pub fn new(j: i128, n: usize) -> Self {
        let m = modulus(n);
        ResidueIndex {
            value: reduce(j, m),
            modulus: m,
        }
    }
}

/// Little-endian base-3 digits of a residue, exactly `n` of them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryDigits {
    pub digits: Vec<u8>,
}

impl TernaryDigits {
    pub fn of(value: u128, n: usize) -> Self {
        let mut v = value;
        let digits = (0..n)
            .map(|_| {
                let d = (v % 3) as u8;
                v /= 3;
                d
            })
            .collect();
        TernaryDigits { digits }
    }

    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * 3 + d as u128)
    }

    pub fn weight(&self) -> u32 {
        self.digits.iter().map(|&d| d as u32).sum()
    }
}

impl fmt::Display for TernaryDigits {
    /// Most significant digit first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits.iter().rev() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Digit sum of a plain (unreduced) integer.
pub fn digit_sum(mut x: u128) -> u32 {
    let mut s = 0;
    while x > 0 {
        s += (x % 3) as u32;
        x /= 3;
    }
    s
}

#[inline]
fn wt_reduced(mut r: u64) -> u32 {
    let mut s = 0;
    while r > 0 {
        s += (r % 3) as u32;
        r /= 3;
    }
    s
}

/// `wt(j)`: digit sum of `j mod (3^n - 1)`.
pub fn wt(j: i128, n: usize) -> u32 {
    wt_reduced(reduce(j, modulus(n)))
}

/// `sigma(j)`: product of digit factorials of `j mod (3^n - 1)`.
pub fn sigma(j: i128, n: usize) -> u64 {
    let mut r = reduce(j, modulus(n));
    let mut p = 1u64;
    while r > 0 {
        if r % 3 == 2 {
            p *= 2;
        }
        r /= 3;
    }
    p
}

/// Parameters of the Lin family for odd `n = 2m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinParameters {
    pub n: usize,
    pub m: usize,
    /// `v = 2(3^(m+1) - 1)`
    pub v: u64,
    /// `t = (3^n + 1) / 4`
    pub t: u64,
    /// `2 * 3^m + 1`, the second trace exponent
    pub decimation: u64,
}

impl LinParameters {
    pub fn new(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::BadDegree { n });
        }
        let m = (n - 1) / 2;
        Ok(LinParameters {
            n,
            m,
            v: 2 * (3u64.pow(m as u32 + 1) - 1),
            t: (3u64.pow(n as u32) + 1) / 4,
            decimation: 2 * 3u64.pow(m as u32) + 1,
        })
    }
}

/// `H(j) = wt(j) + wt((3^(m+1) - 1) j) - wt(2 (3^(m+1) - 1) j)` for odd `n`.
pub fn h_value(j: i128, n: usize) -> Result<i64> {
    if n.is_multiple_of(2) {
        return Err(Error::BadDegree { n });
    }
    Ok(h_unchecked(reduce(j, modulus(n)), n))
}

fn h_unchecked(j: u64, n: usize) -> i64 {
    let m = modulus(n);
    let c = 3u64.pow((n as u32 - 1) / 2 + 1) - 1;
    let cj = mul_mod(c, j, m);
    let two_cj = mul_mod(2, cj, m);
    wt_reduced(j) as i64 + wt_reduced(cj) as i64 - wt_reduced(two_cj) as i64
}

/// `wt(jvt) + wt(-jv) + wt(j)` with every product reduced mod `3^n - 1`.
pub fn triple_weight_sum(j: i128, v: i128, t: i128, n: usize) -> u32 {
    let m = modulus(n);
    let (j, v, t) = (reduce(j, m), reduce(v, m), reduce(t, m));
    triple_reduced(j, v, t, m)
}

#[inline]
fn triple_reduced(j: u64, v: u64, t: u64, m: u64) -> u32 {
    let jv = mul_mod(j, v, m);
    let jvt = mul_mod(jv, t, m);
    let neg_jv = (m - jv) % m;
    wt_reduced(jvt) + wt_reduced(neg_jv) + wt_reduced(j)
}

/// Outcome of the Hamming-weight realizability screen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightCriterionReport {
    pub v: u64,
    pub t: u64,
    pub n: usize,
    pub d: u64,
    pub realizable: bool,
    /// All `j` (with `jd != 0`) whose weight sum is exactly `2n + 1`, ascending.
    pub equality_set: Vec<u64>,
    /// Smallest `j` whose weight sum is at most `2n`.
    pub first_violation: Option<u64>,
}

impl WeightCriterionReport {
    /// Cyclotomic coset representatives of the equality set, ascending.
    pub fn equality_coset_reps(&self) -> Vec<u64> {
        let m = modulus(self.n);
        let mut reps: Vec<u64> = self
            .equality_set
            .iter()
            .map(|&j| coset_of(m, j).representative)
            .collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }
}

/// The weight criterion: `(v, t)` is realizable iff
/// `wt(jvt) + wt(-jv) + wt(j) > 2n` for every `0 < j < 3^n - 1` with
/// `jd != 0 (mod 3^n - 1)`, where `d = gcd(v, 3^n - 1)`.
pub fn weight_criterion(v: u64, t: u64, n: usize) -> Result<WeightCriterionReport> {
    let m = modulus(n);
    let (vr, tr) = (v % m, t % m);
    if gcd(tr, m) != 1 {
        return Err(Error::BadT { t, q_minus_1: m });
    }
    let d = gcd(vr, m);
    if d == 1 {
        return Err(Error::BadV { v, q_minus_1: m });
    }
    let bound = 2 * n as u32;
    let mut equality_set = Vec::new();
    let mut first_violation = None;
    for j in 1..m {
        if mul_mod(j, d, m) == 0 {
            continue;
        }
        let s = triple_reduced(j, vr, tr, m);
        if s <= bound {
            first_violation = Some(j);
            break;
        }
        if s == bound + 1 {
            equality_set.push(j);
        }
    }
    Ok(WeightCriterionReport {
        v,
        t,
        n,
        d,
        realizable: first_violation.is_none(),
        equality_set: if first_violation.is_none() {
            equality_set
        } else {
            Vec::new()
        },
        first_violation,
    })
}

/// Result of the exhaustive check that `H(j) >= 1` with equality exactly on
/// `C_1` and `C_(2*3^m+1)`, cross-checked against the weight-sum phrasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LinWeightReport {
    pub n: usize,
    pub pass: bool,
    /// `{ j : H(j) = 1 }`, ascending.
    pub equality_set: Vec<u64>,
    /// `{ j : wt(jvt) + wt(-jv) + wt(j) = 2n + 1 }` over `jd != 0`, ascending.
    pub weight_sum_equality_set: Vec<u64>,
    pub first_violation: Option<u64>,
    pub min_h: i64,
    pub h_of_two: i64,
}

/// Exhaustive check of the Lin weight theorem for odd `3 <= n <= 15`.
pub fn verify_lin_weight_theorem(n: usize) -> Result<LinWeightReport> {
    let params = LinParameters::new(n)?;
    if !(3..=15).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "weight theorem verifier supports odd 3 <= n <= 15, got {n}"
        )));
    }
    let m = modulus(n);
    let mut expected: Vec<u64> = coset_of(m, 1)
        .members
        .into_iter()
        .chain(coset_of(m, params.decimation % m).members)
        .collect();
    expected.sort_unstable();
    expected.dedup();

    let (v, t) = (params.v % m, params.t % m);
    let d = gcd(v, m);
    let bound = 2 * n as u32;

    #[derive(Default)]
    struct Acc {
        h_eq: Vec<u64>,
        w_eq: Vec<u64>,
        violation: Option<u64>,
        min_h: i64,
    }

    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<Acc> = (0..m.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc {
                min_h: i64::MAX,
                ..Default::default()
            };
            for j in (c * CHUNK).max(1)..((c + 1) * CHUNK).min(m) {
                let h = h_unchecked(j, n);
                acc.min_h = acc.min_h.min(h);
                let in_cosets = expected.binary_search(&j).is_ok();
                let mut ok = h >= 1 && (h == 1) == in_cosets;
                if h == 1 {
                    acc.h_eq.push(j);
                }
                if mul_mod(j, d, m) != 0 {
                    let s = triple_reduced(j, v, t, m);
                    ok &= s > bound && (s == bound + 1) == (h == 1);
                    if s == bound + 1 {
                        acc.w_eq.push(j);
                    }
                }
                if !ok && acc.violation.is_none() {
                    acc.violation = Some(j);
                }
            }
            acc
        })
        .collect();

    let mut equality_set = Vec::new();
    let mut weight_sum_equality_set = Vec::new();
    let mut first_violation = None;
    let mut min_h = i64::MAX;
    for acc in chunks {
        equality_set.extend(acc.h_eq);
        weight_sum_equality_set.extend(acc.w_eq);
        first_violation = first_violation.or(acc.violation);
        min_h = min_h.min(acc.min_h);
    }
    let h_of_two = h_unchecked(2, n);
    let pass = first_violation.is_none()
        && equality_set == expected
        && weight_sum_equality_set == expected
        && h_of_two >= 2;
    Ok(LinWeightReport {
        n,
        pass,
        equality_set,
        weight_sum_equality_set,
        first_violation,
        min_h,
        h_of_two,
    })
}

// ---------------------------------------------------------------------------
// Run blocks
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    /// `1...1 0`
    Zero,
    /// `1...1 2`
    Two,
}

/// `R_{r0}` or `R_{r2}`: `r` ones followed by the terminating digit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RunBlock {
    pub kind: BlockKind,
    pub r: usize,
}

impl RunBlock {
    pub fn zero(r: usize) -> Self {
        RunBlock {
            kind: BlockKind::Zero,
            r,
        }
    }

    pub fn two(r: usize) -> Self {
        RunBlock {
            kind: BlockKind::Two,
            r,
        }
    }

    pub fn len(&self) -> usize {
        self.r + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn terminator(&self) -> u8 {
        match self.kind {
            BlockKind::Zero => 0,
            BlockKind::Two => 2,
        }
    }

    /// Little-endian digits: terminator first, then the ones.
    pub fn digits_le(&self) -> Vec<u8> {
        std::iter::once(self.terminator())
            .chain(std::iter::repeat_n(1, self.r))
            .collect()
    }

    pub fn value(&self) -> u128 {
        TernaryDigits {
            digits: self.digits_le(),
        }
        .value()
    }
}

impl fmt::Display for RunBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R_{{{},{}}}", self.r, self.terminator())
    }
}

/// A cyclic rotation of a digit word cut into run blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunDecomposition {
    /// `b_(t-1), ..., b_0`, most significant block first.
    pub blocks: Vec<RunBlock>,
    /// The rotated word has digit `k` equal to digit `k + rotation` of the source.
    pub rotation: usize,
    pub n: usize,
}

impl RunDecomposition {
    /// Block `b_k`, counting from the least significant end.
    pub fn block(&self, k: usize) -> RunBlock {
        self.blocks[self.blocks.len() - 1 - k]
    }

    /// Blocks from `b_0` upwards.
    pub fn blocks_from_lsd(&self) -> impl Iterator<Item = &RunBlock> {
        self.blocks.iter().rev()
    }

    /// Little-endian digits of the rotated word.
    pub fn digits_le(&self) -> Vec<u8> {
        self.blocks_from_lsd().flat_map(|b| b.digits_le()).collect()
    }

    /// Value of the rotated word.
    pub fn value(&self) -> u128 {
        TernaryDigits {
            digits: self.digits_le(),
        }
        .value()
    }
}

impl fmt::Display for RunDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn word_modulus(n: usize) -> u128 {
    3u128.pow(n as u32) - 1
}

/// `wt` of a word value reduced modulo `3^n - 1`, for words up to 80 digits.
pub fn wt_word(value: u128, n: usize) -> u32 {
    digit_sum(value % word_modulus(n))
}

fn decompose_digits(digits: &[u8], a: u128) -> Result<RunDecomposition> {
    let n = digits.len();
    let Some(rotation) = digits.iter().position(|&d| d != 1) else {
        return Err(Error::AllOnes {
            a: a.try_into().unwrap_or(u64::MAX),
        });
    };
    let rotated: Vec<u8> = (0..n).map(|k| digits[(k + rotation) % n]).collect();
    let mut from_lsd = Vec::new();
    let mut k = 0;
    while k < n {
        let kind = if rotated[k] == 0 {
            BlockKind::Zero
        } else {
            BlockKind::Two
        };
        let mut r = 0;
        while k + 1 + r < n && rotated[k + 1 + r] == 1 {
            r += 1;
        }
        from_lsd.push(RunBlock { kind, r });
        k += r + 1;
    }
    from_lsd.reverse();
    Ok(RunDecomposition {
        blocks: from_lsd,
        rotation,
        n,
    })
}

/// Splits the cyclic digit word of `a mod (3^n - 1)` into run blocks, after
/// the smallest rotation that puts a non-1 digit in the least significant
/// position.
pub fn run_decompose(a: i128, n: usize) -> Result<RunDecomposition> {
    let m = word_modulus(n) as i128;
    let r = a.rem_euclid(m) as u128;
    decompose_digits(&TernaryDigits::of(r, n).digits, r)
}

// ---------------------------------------------------------------------------
// Lemma predicates
// ---------------------------------------------------------------------------

/// `wt(2a) = sum_i wt(2 b_i)` over the run blocks of `a`.
pub fn check_run_sum(a: i128, n: usize) -> Result<bool> {
    let dec = run_decompose(a, n)?;
    let lhs = wt_word(2 * a.rem_euclid(word_modulus(n) as i128) as u128, n);
    let rhs: u32 = dec.blocks.iter().map(|b| digit_sum(2 * b.value())).sum();
    Ok(lhs == rhs)
}

/// `wt(R_{r0}) - wt(2 R_{r0}) = -r` and `wt(R_{r2}) - wt(2 R_{r2}) = r`.
pub fn check_block_delta(block: RunBlock) -> bool {
    let delta = digit_sum(block.value()) as i64 - digit_sum(2 * block.value()) as i64;
    match block.kind {
        BlockKind::Zero => delta == -(block.r as i64),
        BlockKind::Two => delta == block.r as i64,
    }
}

/// A word made of one `R_{r0}` and one `R_{r2}` (either order, `n = 2r + 2`)
/// satisfies `wt(a) = wt(2a)`.
pub fn check_pair_cancel(r: usize) -> bool {
    let n = 2 * r + 2;
    [
        [RunBlock::zero(r), RunBlock::two(r)],
        [RunBlock::two(r), RunBlock::zero(r)],
    ]
    .iter()
    .all(|pair| {
        let word = RunDecomposition {
            blocks: pair.to_vec(),
            rotation: 0,
            n,
        };
        let a = word.value();
        digit_sum(a) == wt_word(2 * a, n)
    })
}

/// `wt(a + 2*3^i) - wt(2(a + 2*3^i)) >= wt(a) - wt(2a) - 2`.
pub fn check_add_two_delta(a: i128, i: usize, n: usize) -> Result<bool> {
    if i >= n {
        return Err(Error::LemmaDomain(format!(
            "digit position {i} out of range for n = {n}"
        )));
    }
    let m = word_modulus(n);
    let a = a.rem_euclid(m as i128) as u128;
    let b = (a + 2 * 3u128.pow(i as u32)) % m;
    let gap = |x: u128| wt_word(x, n) as i64 - wt_word(2 * x, n) as i64;
    Ok(gap(b) >= gap(a) - 2)
}

/// `(3^(m+1) - 1)(j +- (3^(m+1) + 1) 3^i) = (3^(m+1) - 1) j +- 2*3^i`
/// modulo `3^n - 1`, both signs.
pub fn check_shift_congruence(j: i128, i: usize, n: usize) -> Result<bool> {
    if n.is_multiple_of(2) {
        return Err(Error::BadDegree { n });
    }
    let m = word_modulus(n) as i128;
    let half = (n as u32 - 1) / 2 + 1;
    let c = 3i128.pow(half) - 1;
    let shift = (3i128.pow(half) + 1) * 3i128.pow(i as u32);
    let two = 2 * 3i128.pow(i as u32);
    let plus = (c * (j + shift)).rem_euclid(m) == (c * j + two).rem_euclid(m);
    let minus = (c * (j - shift)).rem_euclid(m) == (c * j - two).rem_euclid(m);
    Ok(plus && minus)
}

/// Single-digit edits of a run block and their effect on `wt(2a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EditKind {
    /// `R_{r0} -> 2 1^(r-1) 0`; expected delta 0.
    RaiseZeroRunTop,
    /// `R_{r2} -> 1^(r1) 0 1^(r2) 2` with `r1 + r2 = r - 1`; expected delta `2 r1`.
    SplitTwoRun { r1: usize },
    /// `R_{r2} -> 2 1^(r-1) 2`; expected delta 2.
    RaiseTwoRunTop,
    /// `R_{r2}` followed by a lone 0 block becomes `1^(r+1)`; expected delta `2r`.
    MergeTwoIntoZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DigitEdit {
    /// Block index `k` of `b_k`, counted from the least significant end.
    pub block: usize,
    pub kind: EditKind,
}

/// Applies `edit` to the run decomposition of `a` and compares
/// `wt(2a') - wt(2a)` with the tabulated delta.
pub fn check_one_digit_delta(a: i128, edit: DigitEdit, n: usize) -> Result<bool> {
    let dec = run_decompose(a, n)?;
    let (new_digits, expected) = apply_edit(&dec, edit)?;
    let old_value = dec.value();
    let new_value = TernaryDigits { digits: new_digits }.value();
    let delta = wt_word(2 * new_value, n) as i64 - wt_word(2 * old_value, n) as i64;
    Ok(delta == expected)
}

fn apply_edit(dec: &RunDecomposition, edit: DigitEdit) -> Result<(Vec<u8>, i64)> {
    let t = dec.blocks.len();
    if edit.block >= t {
        return Err(Error::LemmaDomain(format!(
            "block {} out of range ({t} blocks)",
            edit.block
        )));
    }
    let block = dec.block(edit.block);
    let offset: usize = dec
        .blocks_from_lsd()
        .take(edit.block)
        .map(|b| b.len())
        .sum();
    let mut digits = dec.digits_le();
    let domain = |msg: &str| Err(Error::LemmaDomain(format!("{msg} for {block}")));
    let expected = match (edit.kind, block.kind) {
        (EditKind::RaiseZeroRunTop, BlockKind::Zero) if block.r >= 1 => {
            digits[offset + block.r] = 2;
            0
        }
        (EditKind::SplitTwoRun { r1 }, BlockKind::Two) if block.r >= 1 && r1 < block.r => {
            let r2 = block.r - 1 - r1;
            digits[offset + r2 + 1] = 0;
            2 * r1 as i64
        }
        (EditKind::RaiseTwoRunTop, BlockKind::Two) if block.r >= 1 => {
            digits[offset + block.r] = 2;
            2
        }
        (EditKind::MergeTwoIntoZero, BlockKind::Two) => {
            let below = dec.block((edit.block + t - 1) % t);
            if t < 2 || below != RunBlock::zero(0) {
                return domain("block below is not a lone 0");
            }
            digits[offset] = 1;
            2 * block.r as i64
        }
        _ => return domain("edit does not apply"),
    };
    if digits.iter().all(|&d| d == 2) {
        // 22...2 is 3^n - 1, the zero residue.
        return domain("edit yields the zero residue");
    }
    Ok((digits, expected))
}

/// Every edit that applies to the decomposition of `a`.
pub fn applicable_edits(dec: &RunDecomposition) -> Vec<DigitEdit> {
    let mut out = candidate_edits(dec);
    out.retain(|&e| apply_edit(dec, e).is_ok());
    out
}

fn candidate_edits(dec: &RunDecomposition) -> Vec<DigitEdit> {
    let t = dec.blocks.len();
    let mut out = Vec::new();
    for k in 0..t {
        let b = dec.block(k);
        let mut push = |kind| out.push(DigitEdit { block: k, kind });
        match b.kind {
            BlockKind::Zero if b.r >= 1 => push(EditKind::RaiseZeroRunTop),
            BlockKind::Zero => {}
            BlockKind::Two => {
                for r1 in 0..b.r {
                    push(EditKind::SplitTwoRun { r1 });
                }
                if b.r >= 1 {
                    push(EditKind::RaiseTwoRunTop);
                }
                if t >= 2 && dec.block((k + t - 1) % t) == RunBlock::zero(0) {
                    push(EditKind::MergeTwoIntoZero);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Lemma suite
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LemmaSuiteReport {
    pub n: usize,
    pub exhaustive: bool,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub tallies: Vec<Tally>,
}

impl LemmaSuiteReport {
    pub fn pass(&self) -> bool {
        self.tallies.iter().all(|t| t.pass())
    }
}

const RUN_SUM: usize = 0;
const BLOCK_DELTA: usize = 1;
const ADD_TWO: usize = 2;
const SHIFT: usize = 3;
const ONE_DIGIT: usize = 4;
const SHIFT_INVARIANCE: usize = 5;

fn fresh_tallies() -> Vec<Tally> {
    [
        "run-sum",
        "block-delta",
        "add-two-delta",
        "shift-congruence",
        "one-digit-delta",
        "shift-invariance",
    ]
    .iter()
    .map(|s| Tally::new(s))
    .collect()
}

/// Checks every lemma predicate that applies to the residue `a` (and every
/// digit position / edit for it).
fn check_instance(a: u64, n: usize, tallies: &mut [Tally]) {
    let a_i = a as i128;
    if let Ok(dec) = run_decompose(a_i, n) {
        tallies[RUN_SUM].record(check_run_sum(a_i, n).unwrap_or(false));
        for edit in applicable_edits(&dec) {
            tallies[ONE_DIGIT].record(check_one_digit_delta(a_i, edit, n).unwrap_or(false));
        }
    }
    for i in 0..n {
        tallies[ADD_TWO].record(check_add_two_delta(a_i, i, n).unwrap_or(false));
        if n % 2 == 1 {
            tallies[SHIFT].record(check_shift_congruence(a_i, i, n).unwrap_or(false));
        }
    }
    let m = modulus(n);
    let a3 = mul_mod(a, 3, m);
    let mut ok = wt_reduced(a3) == wt_reduced(a) && sigma(a3 as i128, n) == sigma(a_i, n);
    if n % 2 == 1 {
        ok &= h_unchecked(a3, n) == h_unchecked(a, n);
    }
    tallies[SHIFT_INVARIANCE].record(ok);
}

fn block_delta_tally() -> Tally {
    let mut t = Tally::new("block-delta");
    for r in 0..=18 {
        t.record(check_block_delta(RunBlock::zero(r)));
        t.record(check_block_delta(RunBlock::two(r)));
        t.record(check_pair_cancel(r));
    }
    t
}

fn finish(n: usize, parts: Vec<Vec<Tally>>) -> Vec<Tally> {
    let mut tallies = fresh_tallies();
    for part in parts {
        for (acc, t) in tallies.iter_mut().zip(&part) {
            acc.merge(t);
        }
    }
    tallies[BLOCK_DELTA] = block_delta_tally();
    if n.is_multiple_of(2) {
        tallies.remove(SHIFT);
    }
    tallies
}

/// Runs every lemma predicate over all residues `0 <= a < 3^n - 1`.
pub fn lemma_suite_exhaustive(n: usize) -> LemmaSuiteReport {
    let m = modulus(n);
    const CHUNK: u64 = 4096;
    let parts: Vec<Vec<Tally>> = (0..m.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut t = fresh_tallies();
            for a in c * CHUNK..((c + 1) * CHUNK).min(m) {
                check_instance(a, n, &mut t);
            }
            t
        })
        .collect();
    LemmaSuiteReport {
        n,
        exhaustive: true,
        samples: None,
        seed: None,
        tallies: finish(n, parts),
    }
}

/// Runs every lemma predicate on `samples` residues drawn from a seeded
/// ChaCha stream; results depend only on `(n, samples, seed)`.
pub fn lemma_suite_sampled(n: usize, samples: u64, seed: u64) -> LemmaSuiteReport {
    let m = modulus(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<u64> = (0..samples).map(|_| rng.gen_range(0..m)).collect();
    let parts: Vec<Vec<Tally>> = draws
        .par_chunks(1024)
        .map(|chunk| {
            let mut t = fresh_tallies();
            for &a in chunk {
                check_instance(a, n, &mut t);
            }
            t
        })
        .collect();
    LemmaSuiteReport {
        n,
        exhaustive: false,
        samples: Some(samples),
        seed: Some(seed),
        tallies: finish(n, parts),
    }
}
