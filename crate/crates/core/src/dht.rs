//! Exact Hadamard and (multiplexing) decimation-Hadamard spectra over
//! GF(3^n), realizable-pair detection and the closed-form realization.
//!
//! Every spectral value is an Eisenstein integer. The fast path rewrites
//! `Tr(lambda x)` as a dot product of base-3 coordinate vectors and runs a
//! radix-3 butterfly, so each spectrum costs `O(q n)` ring operations.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, mul_mod};
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::{coset_of, FieldContext, FieldElement};
use crate::weights::{sigma, weight_criterion, LinParameters};

/// A function `GF(3^n) -> {0, 1, 2}` stored as a table indexed by the packed
/// element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldFn {
    values: Vec<u8>,
}

impl FieldFn {
    pub fn from_fn(ctx: &FieldContext, f: impl Fn(FieldElement) -> u8) -> Self {
        FieldFn {
            values: ctx.elements().map(|x| f(x) % 3).collect(),
        }
    }

    pub fn from_table(ctx: &FieldContext, values: Vec<u8>) -> Result<Self> {
        if values.len() != ctx.q() as usize {
            return Err(Error::InvalidArgument(format!(
                "function table has {} entries, field has {}",
                values.len(),
                ctx.q()
            )));
        }
        Ok(FieldFn {
            values: values.into_iter().map(|v| v % 3).collect(),
        })
    }

    /// The absolute trace.
    pub fn trace(ctx: &FieldContext) -> Self {
        Self::from_fn(ctx, |x| ctx.trace(x))
    }

    pub fn zero(ctx: &FieldContext) -> Self {
        Self::from_fn(ctx, |_| 0)
    }

    #[inline]
    pub fn eval(&self, x: FieldElement) -> u8 {
        self.values[x.index()]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }
}

/// A spectrum indexed by every `lambda` in the field, zero included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub n: usize,
    pub modulus: Vec<u8>,
    pub values: Vec<Eisenstein>,
}

impl Spectrum {
    pub fn at(&self, lambda: FieldElement) -> Eisenstein {
        self.values[lambda.index()]
    }

    /// `sum_lambda |value|^2`.
    pub fn energy(&self) -> u128 {
        self.values.iter().map(|v| v.norm_sq()).sum()
    }

    /// `k` per entry when every value equals `q w^k`.
    pub fn omega_exponents(&self) -> std::result::Result<Vec<u8>, usize> {
        let q = 3i64.pow(self.n as u32);
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.as_q_omega_power(q).ok_or(i))
            .collect()
    }
}

fn check_exponent(name: &str, e: u64, ctx: &FieldContext) -> Result<u64> {
    let r = e % ctx.q_minus_1();
    if r == 0 {
        return Err(Error::InvalidArgument(format!(
            "{name} = {e} must be nonzero modulo q - 1 = {}",
            ctx.q_minus_1()
        )));
    }
    Ok(r)
}

fn check_gamma(gamma: FieldElement) -> Result<()> {
    if gamma.is_zero() {
        return Err(Error::InvalidArgument("gamma must be nonzero".into()));
    }
    Ok(())
}

/// `x^e` for every element, indexed by packed `x`; `e` is nonzero mod q - 1.
fn power_map(ctx: &FieldContext, e: u64) -> Vec<u32> {
    let m = ctx.q_minus_1();
    let exp = ctx.exp_table();
    ctx.elements()
        .map(|x| match ctx.log(x) {
            None => 0,
            Some(l) => exp[mul_mod(l as u64, e, m) as usize],
        })
        .collect()
}

/// Packed-coordinate map `lambda -> (Tr(lambda alpha^i))_i`. It turns
/// `Tr(lambda x)` into the dot product of `dual(lambda)` with the
/// coordinates of `x`.
fn trace_dual(ctx: &FieldContext) -> Vec<u32> {
    let n = ctx.n();
    ctx.elements()
        .map(|lambda| {
            let l = ctx.log(lambda);
            (0..n).rev().fold(0u32, |acc, i| {
                acc * 3 + ctx.trace_of_product_logs(l, Some(i as u32)) as u32
            })
        })
        .collect()
}

/// In-place `W[u] = sum_x w^(u . x) A[x]` over `(Z_3)^n`.
fn butterfly(values: &mut [Eisenstein], n: usize) {
    let mut stride = 1usize;
    for _ in 0..n {
        let block = stride * 3;
        for base in (0..values.len()).step_by(block) {
            for k in base..base + stride {
                let a0 = values[k];
                let a1 = values[k + stride];
                let a2 = values[k + 2 * stride];
                let w1 = a1.mul_omega();
                let w2 = a2.mul_omega();
                values[k] = a0 + a1 + a2;
                values[k + stride] = a0 + w1 + w2.mul_omega();
                values[k + 2 * stride] = a0 + w1.mul_omega() + w2;
            }
        }
        stride = block;
    }
}

/// Reusable state for computing many spectra over one field.
pub struct Transformer<'a> {
    ctx: &'a FieldContext,
    dual: Vec<u32>,
}

impl<'a> Transformer<'a> {
    pub fn new(ctx: &'a FieldContext) -> Self {
        Transformer {
            ctx,
            dual: trace_dual(ctx),
        }
    }

    pub fn ctx(&self) -> &FieldContext {
        self.ctx
    }

    /// `lambda -> sum_x w^(Tr(lambda x)) A[x]`.
    fn additive_transform(&self, mut a: Vec<Eisenstein>) -> Spectrum {
        butterfly(&mut a, self.ctx.n());
        Spectrum {
            n: self.ctx.n(),
            modulus: self.ctx.modulus().to_vec(),
            values: self.dual.iter().map(|&u| a[u as usize]).collect(),
        }
    }

    pub fn hadamard(&self, f: &FieldFn) -> Spectrum {
        let a = f
            .values
            .iter()
            .map(|&y| Eisenstein::omega_pow(-(y as i64)))
            .collect();
        self.additive_transform(a)
    }

    /// `sum_x w^(Tr(lambda x) - f(gamma x^v))` for every `lambda`.
    pub fn first_order(&self, f: &FieldFn, v: u64, gamma: FieldElement) -> Result<Spectrum> {
        let v = check_exponent("v", v, self.ctx)?;
        check_gamma(gamma)?;
        let pow = power_map(self.ctx, v);
        let a = pow
            .iter()
            .map(|&xv| {
                let arg = self.ctx.mul(gamma, FieldElement::from_packed(xv));
                Eisenstein::omega_pow(-(f.eval(arg) as i64))
            })
            .collect();
        Ok(self.additive_transform(a))
    }

    /// `sum_y w^(Tr(lambda y)) conj(first_order(y^t))` for every `lambda`.
    pub fn second_order(
        &self,
        f: &FieldFn,
        v: u64,
        t: u64,
        gamma: FieldElement,
    ) -> Result<Spectrum> {
        let t = check_exponent("t", t, self.ctx)?;
        let first = self.first_order(f, v, gamma)?;
        Ok(self.second_from_first(&first, t))
    }

    fn second_from_first(&self, first: &Spectrum, t: u64) -> Spectrum {
        let pow = power_map(self.ctx, t);
        let a = pow
            .iter()
            .map(|&yt| first.values[yt as usize].conj())
            .collect();
        self.additive_transform(a)
    }
}

pub fn hadamard(ctx: &FieldContext, f: &FieldFn) -> Spectrum {
    Transformer::new(ctx).hadamard(f)
}

/// Fast first-order multiplexing transform (butterfly path).
pub fn fast_first_order_mdht(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    gamma: FieldElement,
) -> Result<Spectrum> {
    Transformer::new(ctx).first_order(f, v, gamma)
}

/// First-order multiplexing transform by the direct double loop.
pub fn first_order_mdht(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    gamma: FieldElement,
) -> Result<Spectrum> {
    let v = check_exponent("v", v, ctx)?;
    check_gamma(gamma)?;
    let pow = power_map(ctx, v);
    let inner: Vec<(Option<u32>, u8)> = ctx
        .elements()
        .map(|x| {
            let arg = ctx.mul(gamma, FieldElement::from_packed(pow[x.index()]));
            (ctx.log(x), f.eval(arg))
        })
        .collect();
    let values = ctx
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&lambda| {
            let ll = ctx.log(lambda);
            let mut counts = [0i64; 3];
            for &(lx, fx) in &inner {
                let e = (ctx.trace_of_product_logs(ll, lx) + 3 - fx) % 3;
                counts[e as usize] += 1;
            }
            Eisenstein::from_counts(counts)
        })
        .collect();
    Ok(Spectrum {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        values,
    })
}

/// Second-order multiplexing transform through the butterfly path.
pub fn second_order_mdht(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    t: u64,
    gamma: FieldElement,
) -> Result<Spectrum> {
    Transformer::new(ctx).second_order(f, v, t, gamma)
}

/// Second-order transform as a direct `O(q^2)` loop over a naive first-order
/// table.
pub fn second_order_mdht_naive(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    t: u64,
    gamma: FieldElement,
) -> Result<Spectrum> {
    let t = check_exponent("t", t, ctx)?;
    let first = first_order_mdht(ctx, f, v, gamma)?;
    let pow = power_map(ctx, t);
    let values = ctx
        .elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&lambda| {
            let ll = ctx.log(lambda);
            ctx.elements()
                .map(|y| {
                    let term = first.values[pow[y.index()] as usize].conj();
                    term.mul_omega_pow(ctx.trace_of_product_logs(ll, ctx.log(y)) as i64)
                })
                .sum()
        })
        .collect();
    Ok(Spectrum {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        values,
    })
}

/// The defining triple sum
/// `sum_y w^Tr(lambda y) sum_x w^(f(gamma x^v) - Tr(y^t x))`, evaluated
/// literally with field operations. `O(q^3)`; meant for `n <= 3`.
pub fn second_order_mdht_literal(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    t: u64,
    gamma: FieldElement,
) -> Result<Spectrum> {
    check_exponent("v", v, ctx)?;
    check_exponent("t", t, ctx)?;
    check_gamma(gamma)?;
    let values = ctx
        .elements()
        .map(|lambda| {
            let mut counts = [0i64; 3];
            for y in ctx.elements() {
                let outer = ctx.trace(ctx.mul(lambda, y));
                let yt = ctx.pow(y, t as i64).expect("positive exponent");
                for x in ctx.elements() {
                    let xv = ctx.pow(x, v as i64).expect("positive exponent");
                    let inner = f.eval(ctx.mul(gamma, xv)) + 3 - ctx.trace(ctx.mul(yt, x));
                    counts[((outer + inner) % 3) as usize] += 1;
                }
            }
            Eisenstein::from_counts(counts)
        })
        .collect();
    Ok(Spectrum {
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        values,
    })
}

/// First `(lambda, gamma)` whose second-order value is not `q w^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    /// Packed `lambda`.
    pub lambda: u32,
    /// `r` with `gamma = alpha^r`.
    pub gamma_rep: u64,
    pub value: Eisenstein,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizablePairReport {
    pub n: usize,
    pub v: u64,
    pub t: u64,
    pub d: u64,
    /// Exponents `r` of the transversal `gamma_r = alpha^r`, `0 <= r < d`.
    pub gamma_reps: Vec<u64>,
    pub realizable: bool,
    /// `g_table[r][lambda]` = `k` where the value at `(lambda, alpha^r)` is
    /// `q w^k`; present iff realizable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_table: Option<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl RealizablePairReport {
    /// `g(lambda, alpha^r)`.
    pub fn g(&self, r: u64, lambda: FieldElement) -> Option<u8> {
        self.g_table
            .as_ref()
            .map(|table| table[r as usize][lambda.index()])
    }
}

/// Tests every `lambda` and every `gamma_r = alpha^r`, `r < gcd(v, q - 1)`.
pub fn check_realizable(
    ctx: &FieldContext,
    f: &FieldFn,
    v: u64,
    t: u64,
) -> Result<RealizablePairReport> {
    let transformer = Transformer::new(ctx);
    check_realizable_with(&transformer, f, v, t)
}

pub fn check_realizable_with(
    transformer: &Transformer<'_>,
    f: &FieldFn,
    v: u64,
    t: u64,
) -> Result<RealizablePairReport> {
    let ctx = transformer.ctx();
    let vr = check_exponent("v", v, ctx)?;
    check_exponent("t", t, ctx)?;
    let d = gcd(vr, ctx.q_minus_1());
    let gamma_reps: Vec<u64> = (0..d).collect();
    let rows: Vec<std::result::Result<Vec<u8>, Witness>> = gamma_reps
        .par_iter()
        .map(|&r| {
            let spectrum = transformer
                .second_order(f, v, t, ctx.alpha_pow(r as i64))
                .expect("exponents validated above");
            spectrum.omega_exponents().map_err(|i| Witness {
                lambda: i as u32,
                gamma_rep: r,
                value: spectrum.values[i],
            })
        })
        .collect();
    let mut table = Vec::with_capacity(rows.len());
    let mut witness = None;
    for row in rows {
        match row {
            Ok(ks) => table.push(ks),
            Err(w) => {
                witness = Some(w);
                break;
            }
        }
    }
    let realizable = witness.is_none();
    Ok(RealizablePairReport {
        n: ctx.n(),
        v,
        t,
        d,
        gamma_reps,
        realizable,
        g_table: realizable.then_some(table),
        witness,
    })
}

/// Checks that `g(lambda, gamma)` depends only on `gamma lambda^(vt)`.
pub fn realization_is_well_defined(ctx: &FieldContext, report: &RealizablePairReport) -> bool {
    let Some(table) = &report.g_table else {
        return false;
    };
    let m = ctx.q_minus_1();
    let vt = mul_mod(report.v % m, report.t % m, m);
    let mut seen: Vec<Option<u8>> = vec![None; ctx.q() as usize];
    for (&r, row) in report.gamma_reps.iter().zip(table) {
        for lambda in ctx.elements() {
            let key = match ctx.log(lambda) {
                None => 0,
                Some(l) => ctx.alpha_pow((r + mul_mod(l as u64, vt, m)) as i64).index(),
            };
            let g = row[lambda.index()];
            match seen[key] {
                None => seen[key] = Some(g),
                Some(prev) if prev != g => return false,
                Some(_) => {}
            }
        }
    }
    true
}

/// `2 Tr(y) + 2 Tr(y^(2*3^m+1))` with `y = gamma lambda^(vt)`.
pub fn lin_trace_form(ctx: &FieldContext, y: FieldElement) -> Result<u8> {
    let p = LinParameters::new(ctx.n())?;
    let ye = ctx
        .pow(y, p.decimation as i64)
        .unwrap_or(FieldElement::ZERO);
    Ok((2 * ctx.trace(y) + 2 * ctx.trace(ye)) % 3)
}

/// One cyclotomic coset of the equality set and its prime-field coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationTerm {
    pub representative: u64,
    pub members: Vec<u64>,
    /// `(-1)^(j v) sigma(j v t) sigma(-j v) sigma(j) mod 3`, before the unit.
    pub coefficient: u8,
}

/// Closed-form realization: each coset `C_j` of the weight-criterion equality
/// set contributes `u * coefficient * sum_{i in C_j} y^i`, `y = gamma lambda^(vt)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationFormula {
    pub n: usize,
    pub v: u64,
    pub t: u64,
    pub unit: u8,
    pub terms: Vec<RealizationTerm>,
}

impl RealizationFormula {
    /// Builds the formula with an explicit global unit `u in {1, 2}`.
    pub fn with_unit(ctx: &FieldContext, v: u64, t: u64, unit: u8) -> Result<Self> {
        let n = ctx.n();
        let m = ctx.q_minus_1();
        let report = weight_criterion(v, t, n)?;
        if !report.realizable {
            return Err(Error::NotRealizable { v, t });
        }
        let (vr, tr) = (v % m, t % m);
        let terms = report
            .equality_coset_reps()
            .into_iter()
            .map(|j| {
                let jv = mul_mod(j, vr, m);
                let jvt = mul_mod(jv, tr, m);
                let sign = if (j as u128 * v as u128).is_multiple_of(2) {
                    1
                } else {
                    2
                };
                let s = sigma(jvt as i128, n) * sigma(-(jv as i128), n) * sigma(j as i128, n);
                RealizationTerm {
                    representative: j,
                    members: coset_of(m, j).members,
                    coefficient: ((sign * s) % 3) as u8,
                }
            })
            .collect();
        Ok(RealizationFormula {
            n,
            v,
            t,
            unit,
            terms,
        })
    }

    /// Builds the formula with the globally calibrated unit.
    pub fn new(ctx: &FieldContext, v: u64, t: u64) -> Result<Self> {
        Self::with_unit(ctx, v, t, calibrated_unit()?)
    }

    /// `g(lambda, gamma)`; zero at `lambda = 0`.
    pub fn evaluate(
        &self,
        ctx: &FieldContext,
        lambda: FieldElement,
        gamma: FieldElement,
    ) -> Result<u8> {
        check_gamma(gamma)?;
        let Some(l) = ctx.log(lambda) else {
            return Ok(0);
        };
        let m = ctx.q_minus_1();
        let vt = mul_mod(self.v % m, self.t % m, m);
        let ly = (ctx.log(gamma).expect("gamma nonzero") as u64 + mul_mod(l as u64, vt, m)) % m;
        let mut acc = FieldElement::ZERO;
        for term in &self.terms {
            let c = (self.unit * term.coefficient) % 3;
            if c == 0 {
                continue;
            }
            let mut coset_sum = FieldElement::ZERO;
            for &j in &term.members {
                coset_sum = ctx.add(coset_sum, ctx.alpha_pow(mul_mod(ly, j, m) as i64));
            }
            acc = ctx.add(acc, ctx.scale(c, coset_sum));
        }
        acc.as_prime_field().ok_or(Error::NotInPrimeField {
            value: acc.packed(),
        })
    }

    /// Compares the formula with the exact table at all `q d` points.
    pub fn matches(&self, ctx: &FieldContext, report: &RealizablePairReport) -> Result<bool> {
        let Some(table) = &report.g_table else {
            return Ok(false);
        };
        for (&r, row) in report.gamma_reps.iter().zip(table) {
            let gamma = ctx.alpha_pow(r as i64);
            for lambda in ctx.elements() {
                if self.evaluate(ctx, lambda, gamma)? != row[lambda.index()] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Finds the unit `u in {1, 2}` for which the closed form reproduces the
/// exact table of the Lin pair over `ctx`.
pub fn calibrate_unit(ctx: &FieldContext) -> Result<u8> {
    let p = LinParameters::new(ctx.n())?;
    let report = check_realizable(ctx, &FieldFn::trace(ctx), p.v, p.t)?;
    for unit in [1, 2] {
        if RealizationFormula::with_unit(ctx, p.v, p.t, unit)?.matches(ctx, &report)? {
            return Ok(unit);
        }
    }
    Err(Error::CalibrationMismatch)
}

/// The global unit, calibrated once at `n = 3`.
pub fn calibrated_unit() -> Result<u8> {
    static UNIT: OnceLock<Result<u8>> = OnceLock::new();
    UNIT.get_or_init(|| calibrate_unit(&FieldContext::build(3)?))
        .clone()
}
