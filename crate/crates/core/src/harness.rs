//! Verification entry points shared by the CLI and the acceptance suite:
//! uniform reports, the parallel `(v, t)` search, and the end-to-end checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::gcd;
use crate::charsums::gauss_check;
use crate::dht::{
    check_realizable, check_realizable_with, lin_trace_form, realization_is_well_defined, FieldFn,
    RealizablePairReport, RealizationFormula, Spectrum, Transformer,
};
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::{coset_of, FieldContext};
use crate::sequences::{autocorrelation, is_ideal_two_level, lin_sequence};
use crate::tally::Tally;
use crate::weights::{
    lemma_suite_exhaustive, lemma_suite_sampled, verify_lin_weight_theorem, weight_criterion,
    LinParameters,
};

pub const SCHEMA: &str = "ternary-dht/1";

/// One named check inside a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detail {
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    pub passed: u64,
}

impl From<&Tally> for Detail {
    fn from(t: &Tally) -> Self {
        Detail {
            name: t.name.clone(),
            pass: t.pass(),
            checked: t.checked,
            passed: t.passed,
        }
    }
}

impl Detail {
    pub fn single(name: &str, ok: bool) -> Self {
        Detail {
            name: name.to_string(),
            pass: ok,
            checked: 1,
            passed: ok as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    pub details: Vec<Detail>,
    /// Command-specific results.
    pub summary: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn new(command: &str) -> Self {
        VerificationReport {
            command: command.to_string(),
            params: BTreeMap::new(),
            pass: true,
            details: Vec::new(),
            summary: BTreeMap::new(),
            elapsed_ms: None,
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), json!(value));
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), json!(value));
    }

    pub fn push(&mut self, detail: Detail) {
        self.pass &= detail.pass;
        self.details.push(detail);
    }

    pub fn check(&mut self, name: &str, ok: bool) {
        self.push(Detail::single(name, ok));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// The report as a JSON object carrying the `schema` tag.
pub fn report_json(report: &impl Serialize) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    match serde_json::to_value(report).expect("report serializes") {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("value".into(), other);
        }
    }
    Value::Object(out)
}

pub fn emit_report(report: &VerificationReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report_json(report)).expect("json");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut s = String::from("name,pass,checked,passed\n");
            for d in &report.details {
                let _ = writeln!(s, "{},{},{},{}", d.name, d.pass, d.checked, d.passed);
            }
            s
        }
        ReportFormat::Text => {
            let mut s = format!(
                "{}: {}\n",
                report.command,
                if report.pass { "PASS" } else { "FAIL" }
            );
            for (k, v) in &report.params {
                let _ = writeln!(s, "  {k} = {v}");
            }
            for d in &report.details {
                let status = if d.pass { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "  [{status}] {} ({}/{})", d.name, d.passed, d.checked);
            }
            for (k, v) in &report.summary {
                let _ = writeln!(s, "  {k}: {v}");
            }
            if let Some(ms) = report.elapsed_ms {
                let _ = writeln!(s, "  elapsed: {ms} ms");
            }
            s
        }
    }
}

/// Parses a report format name.
pub fn parse_format(name: &str) -> Result<ReportFormat> {
    name.parse()
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ScreenMode {
    Weights,
    Exact,
    Both,
}

impl FromStr for ScreenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weights" => Ok(ScreenMode::Weights),
            "exact" => Ok(ScreenMode::Exact),
            "both" => Ok(ScreenMode::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown screen mode {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfirmedPair {
    pub v: u64,
    pub t: u64,
    pub d: u64,
    /// Coset representatives of the weight-criterion equality set; absent in
    /// exact-only mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_reps: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Disagreement {
    pub v: u64,
    pub t: u64,
    pub weights: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchResult {
    pub n: usize,
    pub mode: ScreenMode,
    pub screened: u64,
    pub exact_checked: u64,
    pub skipped: u64,
    pub confirmed: Vec<ConfirmedPair>,
    pub disagreements: Vec<Disagreement>,
}

enum PairOutcome {
    Skipped,
    Checked {
        confirmed: Option<ConfirmedPair>,
        disagreement: Option<Disagreement>,
        screened: bool,
        exact: bool,
    },
}

fn evaluate_pair(
    transformer: &Transformer<'_>,
    f: &FieldFn,
    v: u64,
    t: u64,
    mode: ScreenMode,
) -> Result<PairOutcome> {
    let ctx = transformer.ctx();
    let m = ctx.q_minus_1();
    let d = gcd(v, m);
    if gcd(t, m) != 1 || d == 1 {
        return Ok(PairOutcome::Skipped);
    }
    let screen = match mode {
        ScreenMode::Exact => None,
        _ => Some(weight_criterion(v, t, ctx.n())?),
    };
    let exact = match mode {
        ScreenMode::Weights => None,
        _ => Some(check_realizable_with(transformer, f, v, t)?.realizable),
    };
    let w = screen.as_ref().map(|s| s.realizable);
    let disagreement = match (w, exact) {
        (Some(a), Some(b)) if a != b => Some(Disagreement {
            v,
            t,
            weights: a,
            exact: b,
        }),
        _ => None,
    };
    let realizable = w.unwrap_or(true) && exact.unwrap_or(true);
    let confirmed = (realizable && disagreement.is_none()).then(|| ConfirmedPair {
        v,
        t,
        d,
        coset_reps: screen.as_ref().map(|s| s.equality_coset_reps()),
    });
    Ok(PairOutcome::Checked {
        confirmed,
        disagreement,
        screened: w.is_some(),
        exact: exact.is_some(),
    })
}

/// Screens every `(v, t)` in the ranges; pairs with `gcd(t, q-1) != 1` or
/// `gcd(v, q-1) = 1` are skipped. Output order and content do not depend on
/// `jobs`.
pub fn run_search(
    n: usize,
    v_range: RangeInclusive<u64>,
    t_range: RangeInclusive<u64>,
    mode: ScreenMode,
    jobs: usize,
) -> Result<SearchResult> {
    let ctx = FieldContext::build(n)?;
    let m = ctx.q_minus_1();
    for (name, r) in [("v", &v_range), ("t", &t_range)] {
        if *r.start() == 0 || *r.end() >= m || r.start() > r.end() {
            return Err(Error::InvalidArgument(format!(
                "{name} range {}..={} must lie within (0, {m})",
                r.start(),
                r.end()
            )));
        }
    }
    if jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be at least 1".into()));
    }
    let pairs: Vec<(u64, u64)> = v_range
        .flat_map(|v| t_range.clone().map(move |t| (v, t)))
        .collect();
    let f = FieldFn::trace(&ctx);
    let transformer = Transformer::new(&ctx);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<PairOutcome>> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(v, t)| evaluate_pair(&transformer, &f, v, t, mode))
            .collect()
    });
    let mut result = SearchResult {
        n,
        mode,
        screened: 0,
        exact_checked: 0,
        skipped: 0,
        confirmed: Vec::new(),
        disagreements: Vec::new(),
    };
    for outcome in outcomes {
        match outcome? {
            PairOutcome::Skipped => result.skipped += 1,
            PairOutcome::Checked {
                confirmed,
                disagreement,
                screened,
                exact,
            } => {
                result.screened += screened as u64;
                result.exact_checked += exact as u64;
                result.confirmed.extend(confirmed);
                result.disagreements.extend(disagreement);
            }
        }
    }
    Ok(result)
}

pub fn search_report(
    n: usize,
    v_range: RangeInclusive<u64>,
    t_range: RangeInclusive<u64>,
    mode: ScreenMode,
    jobs: usize,
) -> Result<VerificationReport> {
    let result = run_search(n, v_range.clone(), t_range.clone(), mode, jobs)?;
    let mut report = VerificationReport::new("dht search")
        .param("n", n)
        .param("vFrom", v_range.start())
        .param("vTo", v_range.end())
        .param("tFrom", t_range.start())
        .param("tTo", t_range.end())
        .param("screen", mode);
    report.check("screen-agrees-with-exact", result.disagreements.is_empty());
    report.summary("result", &result);
    Ok(report)
}

// ---------------------------------------------------------------------------
// End-to-end checks
// ---------------------------------------------------------------------------

fn odd_degree_in(n: usize, range: RangeInclusive<usize>) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::BadDegree { n });
    }
    if !range.contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "n = {n} outside the supported range {}..={}",
            range.start(),
            range.end()
        )));
    }
    Ok(())
}

/// Points `(lambda, alpha^r)` where the exact table matches
/// `2 Tr(y) + 2 Tr(y^(2*3^m+1))`, `y = alpha^r lambda^(vt)`.
pub fn trace_form_tally(ctx: &FieldContext, report: &RealizablePairReport) -> Result<Tally> {
    let mut tally = Tally::new("trace-form-match");
    let Some(table) = &report.g_table else {
        tally.record(false);
        return Ok(tally);
    };
    let vt = report.v as i64 * report.t as i64;
    for (&r, row) in report.gamma_reps.iter().zip(table) {
        let gamma = ctx.alpha_pow(r as i64);
        for lambda in ctx.elements() {
            let y = ctx.mul(gamma, ctx.pow(lambda, vt)?);
            tally.record(lin_trace_form(ctx, y)? == row[lambda.index()]);
        }
    }
    Ok(tally)
}

/// The Lin sequence is ideal two-level, the Lin pair is realizable, and its
/// realization is the doubled Lin trace form.
pub fn verify_lin(n: usize) -> Result<VerificationReport> {
    odd_degree_in(n, 3..=9)?;
    let ctx = FieldContext::build(n)?;
    let p = LinParameters::new(n)?;
    let mut report = VerificationReport::new("verify lin")
        .param("n", n)
        .param("v", p.v)
        .param("t", p.t);

    let lin = lin_sequence(&ctx)?;
    let big_n = lin.period() as i64;
    report.check(
        "autocorrelation-at-zero",
        autocorrelation(&lin, 0) == Eisenstein::from_int(big_n),
    );
    report.check("ideal-two-level", is_ideal_two_level(&lin));

    let pair = check_realizable(&ctx, &FieldFn::trace(&ctx), p.v, p.t)?;
    report.check("lin-pair-realizable", pair.realizable);
    report.check(
        "realization-well-defined",
        realization_is_well_defined(&ctx, &pair),
    );
    report.push(Detail::from(&trace_form_tally(&ctx, &pair)?));
    let formula = RealizationFormula::new(&ctx, p.v, p.t)?;
    report.check("closed-form-match", formula.matches(&ctx, &pair)?);
    report.summary("d", pair.d);
    report.summary("unit", formula.unit);
    Ok(report)
}

pub fn verify_hamming(n: usize) -> Result<VerificationReport> {
    let r = verify_lin_weight_theorem(n)?;
    let mut report = VerificationReport::new("verify hamming").param("n", n);
    report.check("h-positive", r.min_h >= 1);
    report.check("no-violation", r.first_violation.is_none());
    let m = crate::weights::modulus(n);
    let p = LinParameters::new(n)?;
    let mut expected: Vec<u64> = coset_of(m, 1)
        .members
        .into_iter()
        .chain(coset_of(m, p.decimation % m).members)
        .collect();
    expected.sort_unstable();
    expected.dedup();
    report.check("h-equality-set", r.equality_set == expected);
    report.check(
        "weight-sum-agreement",
        r.equality_set == r.weight_sum_equality_set,
    );
    report.check("h-of-two", r.h_of_two >= 2);
    report.check("theorem", r.pass);
    report.summary("equalitySetSize", r.equality_set.len());
    report.summary("minH", r.min_h);
    report.summary("hOfTwo", r.h_of_two);
    if let Some(j) = r.first_violation {
        report.summary("firstViolation", j);
    }
    Ok(report)
}

pub fn verify_lemmas(n: usize, samples: Option<u64>, seed: u64) -> Result<VerificationReport> {
    if n == 0 || n > 19 {
        return Err(Error::SizeLimit { n });
    }
    let (suite, report) = match samples {
        None => {
            if n > 11 {
                return Err(Error::InvalidArgument(format!(
                    "exhaustive lemma checks support n <= 11; pass --samples for n = {n}"
                )));
            }
            (
                lemma_suite_exhaustive(n),
                VerificationReport::new("verify lemmas")
                    .param("n", n)
                    .param("exhaustive", true),
            )
        }
        Some(s) => {
            let mut r = VerificationReport::new("verify lemmas")
                .param("n", n)
                .param("samples", s);
            r.seed = Some(seed);
            (lemma_suite_sampled(n, s, seed), r)
        }
    };
    let mut report = report;
    for t in &suite.tallies {
        report.push(Detail::from(t));
    }
    Ok(report)
}

pub fn verify_gauss(n: usize, tol: f64) -> Result<VerificationReport> {
    if n > 7 {
        return Err(Error::InvalidArgument(format!(
            "Gauss-sum checks are O(q^2); n = {n} exceeds the supported 7"
        )));
    }
    let ctx = FieldContext::build(n)?;
    let r = gauss_check(&ctx, tol);
    let mut report = VerificationReport::new("gauss check")
        .param("n", n)
        .param("tol", tol);
    for t in &r.tallies {
        report.push(Detail::from(t));
    }
    Ok(report)
}

/// Realizability of one pair by the exact spectrum, cross-checked against
/// the weight criterion and the energy identity.
pub fn check_pair(n: usize, v: u64, t: u64) -> Result<VerificationReport> {
    let ctx = FieldContext::build(n)?;
    let m = ctx.q_minus_1();
    let transformer = Transformer::new(&ctx);
    let f = FieldFn::trace(&ctx);
    let pair = check_realizable_with(&transformer, &f, v, t)?;
    let mut report = VerificationReport::new("dht check-pair")
        .param("n", n)
        .param("v", v)
        .param("t", t);
    report.check("realizable", pair.realizable);
    if gcd(t % m, m) == 1 {
        let mut energy = Tally::new("energy-identity");
        let target = 3u128.pow(3 * n as u32);
        for &r in &pair.gamma_reps {
            let s = transformer.second_order(&f, v, t, ctx.alpha_pow(r as i64))?;
            energy.record(s.energy() == target);
        }
        report.push(Detail::from(&energy));
        if pair.d > 1 {
            let screen = weight_criterion(v, t, n)?;
            report.check(
                "weight-criterion-agrees",
                screen.realizable == pair.realizable,
            );
            report.summary("equalityCosetReps", screen.equality_coset_reps());
        }
    }
    report.summary("d", pair.d);
    if let Some(w) = &pair.witness {
        report.summary("witness", w);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumRow {
    pub lambda: u32,
    /// `log_alpha(lambda)`; absent for zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<u32>,
    pub re: i64,
    pub omega_coeff: i64,
    pub norm_sq: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumReport {
    pub n: usize,
    pub modulus: Vec<u8>,
    pub v: u64,
    pub t: u64,
    pub gamma_rep: u64,
    pub energy: u128,
    pub rows: Vec<SpectrumRow>,
}

/// Second-order spectrum of the trace at `gamma = alpha^r`.
pub fn spectrum_report(n: usize, v: u64, t: u64, gamma_rep: u64) -> Result<SpectrumReport> {
    let ctx = FieldContext::build(n)?;
    let gamma = ctx.alpha_pow(gamma_rep as i64);
    let s: Spectrum = Transformer::new(&ctx).second_order(&FieldFn::trace(&ctx), v, t, gamma)?;
    let rows = ctx
        .elements()
        .map(|lambda| {
            let value = s.at(lambda);
            SpectrumRow {
                lambda: lambda.packed(),
                log: ctx.log(lambda),
                re: value.a,
                omega_coeff: value.b,
                norm_sq: value.norm_sq(),
            }
        })
        .collect();
    Ok(SpectrumReport {
        n,
        modulus: s.modulus.clone(),
        v,
        t,
        gamma_rep,
        energy: s.energy(),
        rows,
    })
}

pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut s = String::from("lambda,log,re,omegaCoeff,normSq\n");
    for r in &report.rows {
        let log = r.log.map(|l| l.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.lambda, log, r.re, r.omega_coeff, r.norm_sq
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_passes() {
        let r = VerificationReport::new("noop");
        assert!(r.pass && r.details.is_empty());
        let v = report_json(&r);
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["details"], json!([]));
    }

    #[test]
    fn json_round_trips() {
        let mut r = VerificationReport::new("x").param("n", 3);
        r.check("a", true);
        r.check("b", false);
        assert!(!r.pass);
        let text = emit_report(&r, ReportFormat::Json);
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["command"], "x");
        assert_eq!(parsed["pass"], false);
        assert_eq!(parsed["details"][1]["name"], "b");
        assert!(parsed.get("elapsedMs").is_none());
    }

    #[test]
    fn unknown_format() {
        assert_eq!(
            parse_format("xml").unwrap_err(),
            Error::UnknownFormat("xml".into())
        );
        assert_eq!(parse_format("csv").unwrap(), ReportFormat::Csv);
    }

    #[test]
    fn search_examples() {
        let full = run_search(3, 1..=25, 1..=25, ScreenMode::Both, 2).unwrap();
        assert!(full.disagreements.is_empty());
        assert!(full.confirmed.iter().any(|p| (p.v, p.t) == (16, 7)));
        let lin = full
            .confirmed
            .iter()
            .find(|p| (p.v, p.t) == (16, 7))
            .unwrap();
        assert_eq!(lin.coset_reps.as_deref(), Some(&[1u64, 7][..]));

        let one = run_search(3, 13..=13, 1..=1, ScreenMode::Both, 1).unwrap();
        assert_eq!(one.confirmed.len(), 1);
        assert_eq!(one.confirmed[0].d, 13);
    }

    #[test]
    fn search_is_deterministic_across_jobs() {
        let a = run_search(3, 1..=25, 1..=25, ScreenMode::Both, 1).unwrap();
        let b = run_search(3, 1..=25, 1..=25, ScreenMode::Both, 8).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn search_rejects_bad_ranges() {
        assert!(run_search(3, 0..=5, 1..=2, ScreenMode::Weights, 1).is_err());
        assert!(run_search(3, 1..=26, 1..=2, ScreenMode::Weights, 1).is_err());
        assert!(run_search(3, 1..=2, 1..=2, ScreenMode::Weights, 0).is_err());
    }

    #[test]
    fn verify_lin_examples() {
        assert!(verify_lin(3).unwrap().pass);
        assert!(verify_lin(5).unwrap().pass);
        assert_eq!(verify_lin(4).unwrap_err(), Error::BadDegree { n: 4 });
    }

    #[test]
    fn verify_hamming_small() {
        let r = verify_hamming(5).unwrap();
        assert!(r.pass);
        assert_eq!(r.summary["equalitySetSize"], 10);
    }

    #[test]
    fn csv_of_spectrum_has_q_rows() {
        let r = spectrum_report(3, 16, 7, 0).unwrap();
        assert_eq!(spectrum_csv(&r).lines().count(), 28);
        assert_eq!(r.energy, 19683);
    }
}
