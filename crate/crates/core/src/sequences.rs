//! Ternary sequences of period `3^n - 1`: the m-sequence, the Lin sequence,
//! sequences realized from a DHT pair, exact autocorrelation and the
//! shift/decimation equivalence search.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, mul_mod};
use crate::dht::RealizablePairReport;
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::weights::LinParameters;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Family {
    M,
    Lin,
    DhtRealized,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernarySequence {
    pub n: usize,
    pub modulus: Vec<u8>,
    pub family: Family,
    pub params: BTreeMap<String, u64>,
    pub digits: Vec<u8>,
}

/// On-disk form: the digits as one string over `"012"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceFile {
    pub n: usize,
    pub modulus: Vec<u8>,
    pub family: Family,
    pub params: BTreeMap<String, u64>,
    pub digits: String,
}

fn period(n: usize) -> usize {
    3usize.pow(n as u32) - 1
}

impl TernarySequence {
    pub fn custom(n: usize, modulus: Vec<u8>, digits: Vec<u8>) -> Result<Self> {
        if digits.len() != period(n) {
            return Err(Error::InvalidArgument(format!(
                "sequence has length {}, period for n = {n} is {}",
                digits.len(),
                period(n)
            )));
        }
        if digits.iter().any(|&d| d > 2) {
            return Err(Error::InvalidArgument("digits must lie in {0,1,2}".into()));
        }
        Ok(TernarySequence {
            n,
            modulus,
            family: Family::Custom,
            params: BTreeMap::new(),
            digits,
        })
    }

    pub fn period(&self) -> usize {
        self.digits.len()
    }

    /// Occurrences of the digits 0, 1 and 2.
    pub fn digit_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for &d in &self.digits {
            c[d as usize] += 1;
        }
        c
    }

    /// `sum_i w^(s_i)`.
    pub fn character_sum(&self) -> Eisenstein {
        let c = self.digit_counts();
        Eisenstein::from_counts([c[0] as i64, c[1] as i64, c[2] as i64])
    }

    /// `i -> c s_i mod 3`.
    pub fn scaled(&self, c: u8) -> Self {
        TernarySequence {
            digits: self.digits.iter().map(|&d| (d * c) % 3).collect(),
            ..self.clone()
        }
    }

    pub fn digit_string(&self) -> String {
        self.digits.iter().map(|&d| char::from(b'0' + d)).collect()
    }

    pub fn to_file(&self) -> SequenceFile {
        SequenceFile {
            n: self.n,
            modulus: self.modulus.clone(),
            family: self.family,
            params: self.params.clone(),
            digits: self.digit_string(),
        }
    }

    pub fn from_file(file: SequenceFile) -> Result<Self> {
        let digits = file
            .digits
            .bytes()
            .map(|b| match b {
                b'0'..=b'2' => Ok(b - b'0'),
                _ => Err(Error::InvalidArgument(format!(
                    "invalid digit {:?} in sequence file",
                    b as char
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        let mut seq = Self::custom(file.n, file.modulus, digits)?;
        seq.family = file.family;
        seq.params = file.params;
        Ok(seq)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("sequence file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SequenceFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed sequence file: {e}")))?;
        Self::from_file(file)
    }
}

/// `s_i = Tr(alpha^i)`.
pub fn m_sequence(ctx: &FieldContext) -> TernarySequence {
    TernarySequence {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        family: Family::M,
        params: BTreeMap::new(),
        digits: ctx.trace_table().to_vec(),
    }
}

/// `s_i = Tr(alpha^i + alpha^((2*3^m+1) i))` for odd `n = 2m + 1`.
pub fn lin_sequence(ctx: &FieldContext) -> Result<TernarySequence> {
    let p = LinParameters::new(ctx.n())?;
    let tr = ctx.trace_table();
    let big_n = tr.len() as u64;
    let digits = (0..big_n)
        .map(|i| (tr[i as usize] + tr[mul_mod(i, p.decimation, big_n) as usize]) % 3)
        .collect();
    Ok(TernarySequence {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        family: Family::Lin,
        params: BTreeMap::from([("decimation".to_string(), p.decimation)]),
        digits,
    })
}

fn correlation_counts(digits: &[u8], tau: usize) -> [i64; 3] {
    let n = digits.len();
    let mut counts = [0i64; 3];
    let (head, tail) = digits.split_at(tau % n.max(1));
    // s_(i + tau) runs over `tail` then wraps into `head`.
    for (&a, &b) in tail.iter().chain(head).zip(digits) {
        counts[((a + 3 - b) % 3) as usize] += 1;
    }
    counts
}

/// `C(tau) = sum_i w^(s_(i+tau) - s_i)` over one period.
pub fn autocorrelation(seq: &TernarySequence, tau: usize) -> Eisenstein {
    Eisenstein::from_counts(correlation_counts(&seq.digits, tau))
}

/// `C(tau)` for every `0 <= tau < N`.
pub fn autocorrelation_all(seq: &TernarySequence) -> Vec<Eisenstein> {
    (0..seq.period())
        .into_par_iter()
        .map(|tau| autocorrelation(seq, tau))
        .collect()
}

/// `C(tau) = -1` for every `0 < tau < N`.
pub fn is_ideal_two_level(seq: &TernarySequence) -> bool {
    let minus_one = Eisenstein::from_int(-1);
    (1..seq.period())
        .into_par_iter()
        .all(|tau| autocorrelation(seq, tau) == minus_one)
}

/// One row of an autocorrelation export.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AutocorrelationRow {
    pub tau: usize,
    pub re: i64,
    pub omega_coeff: i64,
}

pub fn autocorrelation_rows(seq: &TernarySequence) -> Vec<AutocorrelationRow> {
    autocorrelation_all(seq)
        .into_iter()
        .enumerate()
        .map(|(tau, c)| AutocorrelationRow {
            tau,
            re: c.a,
            omega_coeff: c.b,
        })
        .collect()
}

pub fn autocorrelation_csv(seq: &TernarySequence) -> String {
    let mut out = String::from("tau,re,omegaCoeff\n");
    for row in autocorrelation_rows(seq) {
        out.push_str(&format!("{},{},{}\n", row.tau, row.re, row.omega_coeff));
    }
    out
}

/// Resolves `alpha^i = alpha^r * (alpha^k)^(vt)` for every index.
struct IndexResolver {
    d: u64,
    step: u64,
    inv: u64,
}

impl IndexResolver {
    fn new(big_n: u64, v: u64, t: u64, d: u64) -> Option<Self> {
        let vt = mul_mod(v % big_n, t % big_n, big_n);
        if gcd(vt, big_n) != d {
            return None;
        }
        let step = big_n / d;
        let inv = inv_mod((vt / d) % step, step)?;
        Some(IndexResolver { d, step, inv })
    }

    /// `(r, k0)` with `k0` the least nonnegative solution; the others are
    /// `k0 + s * N/d`.
    fn resolve(&self, i: u64) -> (u64, u64) {
        let r = i % self.d;
        let k0 = mul_mod((i - r) / self.d, self.inv, self.step);
        (r, k0)
    }
}

/// `t_i = g(lambda, gamma)` with `alpha^i = gamma lambda^(vt)`, `gamma = alpha^(i mod d)`
/// and `lambda = alpha^k` for the least solution `k`. Every other solution
/// is checked to give the same value.
pub fn build_realized_sequence(
    ctx: &FieldContext,
    report: &RealizablePairReport,
) -> Result<TernarySequence> {
    let Some(table) = &report.g_table else {
        return Err(Error::NotRealizable {
            v: report.v,
            t: report.t,
        });
    };
    let big_n = ctx.q_minus_1();
    let resolver = IndexResolver::new(big_n, report.v, report.t, report.d)
        .ok_or(Error::NoSolution { index: 0 })?;
    let digits = (0..big_n)
        .map(|i| {
            let (r, k0) = resolver.resolve(i);
            let row = &table[r as usize];
            let g = row[ctx.alpha_pow(k0 as i64).index()];
            let consistent = (1..resolver.d).all(|s| {
                let k = k0 + s * resolver.step;
                row[ctx.alpha_pow(k as i64).index()] == g
            });
            if consistent {
                Ok(g)
            } else {
                Err(Error::NoSolution { index: i })
            }
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(TernarySequence {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        family: Family::DhtRealized,
        params: BTreeMap::from([("v".to_string(), report.v), ("t".to_string(), report.t)]),
        digits,
    })
}

fn matches_under(s1: &[u8], s2: &[u8], tau: u64, e: u64) -> bool {
    let n = s1.len() as u64;
    let mut j = tau % n;
    for &a in s1 {
        if a != s2[j as usize] {
            return false;
        }
        j += e;
        if j >= n {
            j -= n;
        }
    }
    true
}

/// The first `(tau, e)`, with `e` ascending over units mod `N` and then
/// `tau` ascending, such that `s1[i] = s2[(e i + tau) mod N]` for all `i`.
pub fn equivalent_up_to_shift_decimation(
    s1: &TernarySequence,
    s2: &TernarySequence,
) -> Option<(u64, u64)> {
    if s1.period() != s2.period() || s1.period() == 0 {
        return None;
    }
    let n = s1.period() as u64;
    (1..=n.max(2) - 1)
        .into_par_iter()
        .filter(|&e| gcd(e, n) == 1)
        .find_map_first(|e| {
            (0..n)
                .find(|&tau| matches_under(&s1.digits, &s2.digits, tau, e))
                .map(|tau| (tau, e))
        })
}

/// Every `(tau, e)` relating the two sequences, ordered by `e` then `tau`.
pub fn all_shift_decimations(s1: &TernarySequence, s2: &TernarySequence) -> Vec<(u64, u64)> {
    if s1.period() != s2.period() || s1.period() == 0 {
        return Vec::new();
    }
    let n = s1.period() as u64;
    (1..=n.max(2) - 1)
        .into_par_iter()
        .filter(|&e| gcd(e, n) == 1)
        .flat_map_iter(|e| {
            (0..n)
                .filter(move |&tau| matches_under(&s1.digits, &s2.digits, tau, e))
                .map(move |tau| (tau, e))
        })
        .collect()
}
