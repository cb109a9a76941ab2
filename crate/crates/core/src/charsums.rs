//! Floating-point Gauss sums over GF(3^n) and the character-sum identities
//! used as numerical cross-checks of the exact transforms.
//!
//! `psi(x) = w^Tr(x)` and `chi^k(alpha^j) = exp(2 pi i j k / (q - 1))`, with
//! `chi^k(0) = 0`. Character values are read from a table of `(q - 1)`-th
//! roots of unity indexed exactly, so no phase error accumulates.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, mul_mod};
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::tally::Tally;

pub type CharacterValue = Complex64;

fn unit_roots(count: u64) -> Vec<Complex64> {
    (0..count)
        .map(|j| Complex64::from_polar(1.0, TAU * j as f64 / count as f64))
        .collect()
}

/// `w^e` as a complex number.
pub fn omega(e: u8) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (e % 3) as f64 / 3.0)
}

pub fn embed(x: Eisenstein) -> Complex64 {
    let (re, im) = x.to_complex();
    Complex64::new(re, im)
}

/// `G(chi^k)` for every `0 <= k < q - 1`, plus the root table behind it.
pub struct GaussTable {
    m: u64,
    roots: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl GaussTable {
    pub fn new(ctx: &FieldContext) -> Self {
        let m = ctx.q_minus_1();
        let roots = unit_roots(m);
        let psi: Vec<Complex64> = ctx.trace_table().iter().map(|&t| omega(t)).collect();
        let values = (0..m)
            .into_par_iter()
            .map(|k| {
                psi.iter()
                    .enumerate()
                    .map(|(j, &p)| p * roots[mul_mod(j as u64, k, m) as usize])
                    .sum()
            })
            .collect();
        GaussTable { m, roots, values }
    }

    /// `G(chi^k)` with `k` reduced mod `q - 1`.
    pub fn get(&self, k: i64) -> Complex64 {
        self.values[k.rem_euclid(self.m as i64) as usize]
    }

    /// `chi^k(alpha^j)`.
    pub fn chi(&self, k: i64, j: u64) -> Complex64 {
        let k = k.rem_euclid(self.m as i64) as u64;
        self.roots[mul_mod(j % self.m, k, self.m) as usize]
    }

    /// `(1/(q-1)) sum_k G(chi^k) conj(chi^k(y))` for `y = alpha^j`.
    pub fn trace_expansion(&self, j: u64) -> Complex64 {
        let s: Complex64 = (0..self.m as i64)
            .map(|k| self.get(k) * self.chi(k, j).conj())
            .sum();
        s / self.m as f64
    }

    /// `sum over chi with chi^d = 1 of G(chi) conj(chi(alpha^r))`.
    pub fn power_sum(&self, d: u64, r: u64) -> Complex64 {
        let step = (self.m / d) as i64;
        (0..d as i64)
            .map(|i| self.get(i * step) * self.chi(i * step, r).conj())
            .sum()
    }
}

/// `G(chi^k) = sum_x psi(x) chi^k(x)` by direct summation.
pub fn gauss_sum(ctx: &FieldContext, k: u64) -> CharacterValue {
    let m = ctx.q_minus_1();
    let k = k % m;
    ctx.trace_table()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let phase = TAU * (mul_mod(j as u64, k, m) as f64 / m as f64 + t as f64 / 3.0);
            Complex64::from_polar(1.0, phase)
        })
        .sum()
}

/// `w^Tr(y) = (1/(q-1)) sum_chi G(chi) conj(chi(y))` within `tol`.
pub fn check_trace_expansion(ctx: &FieldContext, y: FieldElement, tol: f64) -> Result<bool> {
    let j = ctx
        .log(y)
        .ok_or_else(|| Error::InvalidArgument("y must be nonzero".into()))?;
    let table = GaussTable::new(ctx);
    Ok((table.trace_expansion(j as u64) - omega(ctx.trace(y))).norm() <= tol)
}

/// `sum_{x != 0} w^Tr(gamma x^v)`, exactly.
pub fn power_sum_exact(ctx: &FieldContext, v: u64, gamma: FieldElement) -> Result<Eisenstein> {
    let lg = ctx
        .log(gamma)
        .ok_or_else(|| Error::InvalidArgument("gamma must be nonzero".into()))?;
    let m = ctx.q_minus_1();
    let mut counts = [0i64; 3];
    for j in 0..m {
        let e = ctx.trace_of_alpha_pow(lg as u64 + mul_mod(j, v % m, m));
        counts[e as usize] += 1;
    }
    Ok(Eisenstein::from_counts(counts))
}

/// `sum_{x != 0} w^Tr(gamma x^v) = sum_{chi^d = 1} G(chi) conj(chi(gamma))`
/// within `tol`, `d = gcd(v, q - 1) > 1`.
pub fn check_power_sum(ctx: &FieldContext, v: u64, gamma: FieldElement, tol: f64) -> Result<bool> {
    check_power_sum_with(ctx, &GaussTable::new(ctx), v, gamma, tol)
}

pub fn check_power_sum_with(
    ctx: &FieldContext,
    table: &GaussTable,
    v: u64,
    gamma: FieldElement,
    tol: f64,
) -> Result<bool> {
    let m = ctx.q_minus_1();
    let d = gcd(v % m, m);
    if d == 1 {
        return Err(Error::BadV { v, q_minus_1: m });
    }
    let exact = power_sum_exact(ctx, v, gamma)?;
    let r = ctx.log(gamma).expect("checked nonzero") as u64;
    Ok((embed(exact) - table.power_sum(d, r)).norm() <= tol)
}

/// `G(conj chi) = chi(-1) conj(G(chi))`, with `chi^k(-1) = (-1)^k`.
pub fn check_conjugate_symmetry(table: &GaussTable, k: i64, tol: f64) -> bool {
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (table.get(-k) - table.get(k).conj() * sign).norm() <= tol
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GaussCheckReport {
    pub n: usize,
    pub q: u64,
    pub tol: f64,
    pub tallies: Vec<Tally>,
}

impl GaussCheckReport {
    pub fn pass(&self) -> bool {
        self.tallies.iter().all(Tally::pass)
    }
}

/// Runs every identity over the whole field at tolerance `tol`.
pub fn gauss_check(ctx: &FieldContext, tol: f64) -> GaussCheckReport {
    let table = GaussTable::new(ctx);
    let m = ctx.q_minus_1();
    let q = ctx.q() as f64;

    let mut trivial = Tally::new("trivial-character");
    trivial.record((table.get(0) - Complex64::new(-1.0, 0.0)).norm() <= tol);

    let mut modulus = Tally::new("norm-equals-q");
    let mut frobenius = Tally::new("frobenius-invariance");
    let mut conjugate = Tally::new("conjugate-symmetry");
    for k in 0..m as i64 {
        if k > 0 {
            modulus.record((table.get(k).norm_sqr() - q).abs() <= tol);
        }
        frobenius.record((table.get(3 * k) - table.get(k)).norm() <= tol);
        conjugate.record(check_conjugate_symmetry(&table, k, tol));
    }

    let mut expansion = Tally::new("trace-expansion");
    for j in 0..m {
        let y = ctx.alpha_pow(j as i64);
        expansion.record((table.trace_expansion(j) - omega(ctx.trace(y))).norm() <= tol);
    }

    let mut power = Tally::new("power-sum");
    for v in (1..m).filter(|&v| gcd(v, m) > 1) {
        for r in [0, 1] {
            let ok = check_power_sum_with(ctx, &table, v, ctx.alpha_pow(r), tol).unwrap_or(false);
            power.record(ok);
        }
    }

    GaussCheckReport {
        n: ctx.n(),
        q: ctx.q() as u64,
        tol,
        tallies: vec![trivial, modulus, frobenius, conjugate, expansion, power],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> FieldContext {
        FieldContext::build(n).unwrap()
    }

    #[test]
    fn gauss_sum_examples() {
        let c = ctx(3);
        assert!((gauss_sum(&c, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        for k in 1..26 {
            assert!((gauss_sum(&c, k).norm_sqr() - 27.0).abs() < 1e-6);
            assert!((gauss_sum(&c, (3 * k) % 26) - gauss_sum(&c, k)).norm() < 1e-9);
        }
    }

    #[test]
    fn table_matches_direct_sum() {
        let c = ctx(3);
        let t = GaussTable::new(&c);
        for k in 0..26 {
            assert!((t.get(k) - gauss_sum(&c, k as u64)).norm() < 1e-9);
        }
    }

    #[test]
    fn trace_expansion_examples() {
        let c = ctx(3);
        assert!(check_trace_expansion(&c, FieldElement::ONE, 1e-6).unwrap());
        for y in c.elements().skip(1) {
            assert!(check_trace_expansion(&c, y, 1e-6).unwrap());
        }
        assert!(check_trace_expansion(&c, FieldElement::ZERO, 1e-6).is_err());
    }

    #[test]
    fn trace_expansion_zero_tolerance_is_numerically_strict() {
        let c = ctx(3);
        let t = GaussTable::new(&c);
        let misses = (0..26)
            .filter(|&j| t.trace_expansion(j) != omega(c.trace(c.alpha_pow(j as i64))))
            .count();
        assert!(misses > 0);
    }

    #[test]
    fn power_sum_examples() {
        let c = ctx(3);
        assert!(check_power_sum(&c, 16, FieldElement::ONE, 1e-6).unwrap());
        assert!(check_power_sum(&c, 13, c.alpha(), 1e-6).unwrap());
        assert_eq!(
            check_power_sum(&c, 5, FieldElement::ONE, 1e-6).unwrap_err(),
            Error::BadV {
                v: 5,
                q_minus_1: 26
            }
        );
    }

    #[test]
    fn full_check_passes() {
        for n in [3, 5] {
            let r = gauss_check(&ctx(n), 1e-6);
            assert!(r.pass(), "{r:?}");
        }
    }
}
