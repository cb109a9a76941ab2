//! Arithmetic in GF(3^n) with exp/log tables over a primitive polynomial basis.
//!
//! Elements are stored as packed base-3 integers: coefficient `c_i` of
//! `alpha^i` is the `i`-th ternary digit. Multiplication and powers go through
//! the log tables, addition works digit by digit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 19;

/// An element of GF(3^n) in the polynomial basis `1, alpha, ..., alpha^(n-1)`,
/// packed as a base-3 integer in `[0, 3^n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a packed base-3 value. The caller is responsible for keeping it
    /// below `3^n` of the context it is used with.
    pub const fn from_packed(packed: u32) -> Self {
        FieldElement(packed)
    }

    pub const fn packed(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Returns `Some(c)` when the element lies in the prime field F_3.
    pub fn as_prime_field(self) -> Option<u8> {
        (self.0 < 3).then_some(self.0 as u8)
    }

    /// Little-endian coefficient vector of length `n`.
    pub fn coeffs(self, n: usize) -> Vec<u8> {
        let mut v = self.0;
        (0..n)
            .map(|_| {
                let d = (v % 3) as u8;
                v /= 3;
                d
            })
            .collect()
    }

    pub fn from_coeffs(coeffs: &[u8]) -> Self {
        FieldElement(coeffs.iter().rev().fold(0u32, |acc, &c| acc * 3 + c as u32))
    }
}

/// A vector over F_3 held as two bit planes: bit `i` of `ones` marks digit 1
/// and bit `i` of `twos` marks digit 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct TritPlanes {
    ones: u32,
    twos: u32,
}

impl TritPlanes {
    const ONE: TritPlanes = TritPlanes { ones: 1, twos: 0 };

    fn from_coeffs(coeffs: &[u8]) -> Self {
        let mut p = TritPlanes { ones: 0, twos: 0 };
        for (i, &c) in coeffs.iter().enumerate() {
            match c % 3 {
                1 => p.ones |= 1 << i,
                2 => p.twos |= 1 << i,
                _ => {}
            }
        }
        p
    }

    fn add(self, rhs: Self) -> Self {
        let t = (self.ones | rhs.twos) ^ (self.twos | rhs.ones);
        TritPlanes {
            ones: (self.twos | rhs.twos) ^ t,
            twos: (self.ones | rhs.ones) ^ t,
        }
    }

    fn neg(self) -> Self {
        TritPlanes {
            ones: self.twos,
            twos: self.ones,
        }
    }

    /// Multiplication by `x` modulo a monic polynomial whose low coefficients
    /// are `low` and whose degree is `n`.
    fn mul_x(self, low: Self, n: usize) -> Self {
        let top_bit = 1u32 << n;
        let mut ones = self.ones << 1;
        let mut twos = self.twos << 1;
        let top_one = ones & top_bit != 0;
        let top_two = twos & top_bit != 0;
        ones &= !top_bit;
        twos &= !top_bit;
        let shifted = TritPlanes { ones, twos };
        // x^n = -low, so a leading c contributes -c * low.
        if top_one {
            shifted.add(low.neg())
        } else if top_two {
            shifted.add(low)
        } else {
            shifted
        }
    }

    fn pack(self, pow3: &[u32]) -> u32 {
        let mut v = 0u32;
        for (i, &p) in pow3.iter().enumerate() {
            if self.ones >> i & 1 == 1 {
                v += p;
            } else if self.twos >> i & 1 == 1 {
                v += 2 * p;
            }
        }
        v
    }
}

/// GF(3^n) together with a primitive element `alpha` and its tables.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct FieldContext {
    n: usize,
    q: u32,
    modulus: Vec<u8>,
    pow3: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    basis_trace: Vec<u8>,
    trace_of_power: Vec<u8>,
}

const NO_LOG: u32 = u32::MAX;

impl FieldContext {
    /// Builds GF(3^n). Without an override the modulus is the
    /// lexicographically smallest monic primitive polynomial, comparing
    /// coefficient vectors from the constant term upwards.
    pub fn new(n: usize, override_poly: Option<&[u8]>) -> Result<Self> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::SizeLimit { n });
        }
        let modulus = match override_poly {
            Some(poly) => {
                validate_modulus(n, poly)?;
                if multiplicative_order_of_x(n, poly) != Some(3u32.pow(n as u32) - 1) {
                    return Err(Error::NotPrimitive {
                        n,
                        coeffs: poly.to_vec(),
                    });
                }
                poly.to_vec()
            }
            None => smallest_primitive_modulus(n),
        };
        Ok(Self::from_primitive_modulus(n, modulus))
    }

    pub fn build(n: usize) -> Result<Self> {
        Self::new(n, None)
    }

    fn from_primitive_modulus(n: usize, modulus: Vec<u8>) -> Self {
        let q = 3u32.pow(n as u32);
        let pow3: Vec<u32> = (0..n).map(|i| 3u32.pow(i as u32)).collect();
        let low = TritPlanes::from_coeffs(&modulus[..n]);

        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut state = TritPlanes::ONE;
        for _ in 0..q - 1 {
            exp.push(state.pack(&pow3));
            state = state.mul_x(low, n);
        }
        debug_assert_eq!(state, TritPlanes::ONE);

        let mut log = vec![NO_LOG; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }

        let mut ctx = FieldContext {
            n,
            q,
            modulus,
            pow3,
            exp,
            log,
            basis_trace: Vec::new(),
            trace_of_power: Vec::new(),
        };
        ctx.basis_trace = (0..n)
            .map(|i| {
                let t = ctx.trace_by_frobenius(ctx.alpha_pow(i as i64));
                t.as_prime_field().expect("trace lands in the prime field")
            })
            .collect();
        ctx.trace_of_power = ctx
            .exp
            .iter()
            .map(|&e| ctx.trace(FieldElement(e)))
            .collect();
        ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Field order `3^n`.
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn q_minus_1(&self) -> u64 {
        self.q as u64 - 1
    }

    /// Monic modulus, low-degree coefficient first (length `n + 1`).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha_pow(1)
    }

    /// Iterates over all `q` field elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn element(&self, packed: u32) -> Result<FieldElement> {
        if packed >= self.q {
            return Err(Error::InvalidArgument(format!(
                "packed value {packed} outside GF(3^{})",
                self.n
            )));
        }
        Ok(FieldElement(packed))
    }

    /// `alpha^i` for any integer `i`.
    pub fn alpha_pow(&self, i: i64) -> FieldElement {
        let k = i.rem_euclid(self.q_minus_1() as i64) as usize;
        FieldElement(self.exp[k])
    }

    /// Discrete log base `alpha`; `None` for zero.
    pub fn log(&self, x: FieldElement) -> Option<u32> {
        match self.log[x.index()] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0;
        for &p in &self.pow3 {
            out += ((a % 3 + b % 3) % 3) * p;
            a /= 3;
            b /= 3;
        }
        FieldElement(out)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let mut a = x.0;
        let mut out = 0;
        for &p in &self.pow3 {
            out += ((3 - a % 3) % 3) * p;
            a /= 3;
        }
        FieldElement(out)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    /// Multiplication by a prime-field scalar.
    pub fn scale(&self, c: u8, x: FieldElement) -> FieldElement {
        match c % 3 {
            0 => FieldElement::ZERO,
            1 => x,
            _ => self.neg(x),
        }
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (self.log(x), self.log(y)) {
            (Some(a), Some(b)) => {
                FieldElement(self.exp[((a as u64 + b as u64) % self.q_minus_1()) as usize])
            }
            _ => FieldElement::ZERO,
        }
    }

    pub fn inv(&self, x: FieldElement) -> Option<FieldElement> {
        self.log(x).map(|l| self.alpha_pow(-(l as i64)))
    }

    /// `x^e` through the log tables; negative exponents need `x != 0`.
    pub fn pow(&self, x: FieldElement, e: i64) -> Result<FieldElement> {
        match self.log(x) {
            None if e > 0 => Ok(FieldElement::ZERO),
            None => Err(Error::ZeroToNonpositive { exp: e }),
            Some(l) => {
                let m = self.q_minus_1() as i128;
                let k = (l as i128 * e as i128).rem_euclid(m);
                Ok(FieldElement(self.exp[k as usize]))
            }
        }
    }

    /// Absolute trace to F_3, evaluated as the linear functional fixed by
    /// the traces of the basis powers.
    pub fn trace(&self, x: FieldElement) -> u8 {
        let mut a = x.0;
        let mut acc = 0u32;
        for &t in &self.basis_trace {
            acc += (a % 3) * t as u32;
            a /= 3;
        }
        (acc % 3) as u8
    }

    /// `Tr(alpha^i)`; the ternary m-sequence of this context.
    pub fn trace_of_alpha_pow(&self, i: u64) -> u8 {
        self.trace_of_power[(i % self.q_minus_1()) as usize]
    }

    pub fn trace_table(&self) -> &[u8] {
        &self.trace_of_power
    }

    /// `Tr(x * y)` with both factors given by their logs (`None` = zero).
    #[inline]
    pub fn trace_of_product_logs(&self, a: Option<u32>, b: Option<u32>) -> u8 {
        match (a, b) {
            (Some(a), Some(b)) => {
                let s = a as u64 + b as u64;
                let m = self.q_minus_1();
                self.trace_of_power[(if s >= m { s - m } else { s }) as usize]
            }
            _ => 0,
        }
    }

    /// `x + x^3 + ... + x^(3^(n-1))` computed literally with field operations.
    pub fn trace_by_frobenius(&self, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut term = x;
        for _ in 0..self.n {
            acc = self.add(acc, term);
            term = self.pow(term, 3).unwrap_or(FieldElement::ZERO);
        }
        acc
    }

    /// Multiplicative order of `alpha`, found by walking the exp table.
    pub fn alpha_order(&self) -> u64 {
        let alpha = self.alpha();
        let mut x = alpha;
        let mut k = 1u64;
        while x != FieldElement::ONE {
            x = self.mul(x, alpha);
            k += 1;
        }
        k
    }

    /// Summary used by the `field info` command.
    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            n: self.n,
            q: self.q as u64,
            modulus: self.modulus.clone(),
            alpha_order: self.alpha_order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldInfo {
    pub n: usize,
    pub q: u64,
    pub modulus: Vec<u8>,
    pub alpha_order: u64,
}

fn validate_modulus(n: usize, poly: &[u8]) -> Result<()> {
    if poly.len() != n + 1 {
        return Err(Error::BadModulus(format!(
            "expected {} coefficients, got {}",
            n + 1,
            poly.len()
        )));
    }
    if poly.iter().any(|&c| c > 2) {
        return Err(Error::BadModulus("coefficients must lie in {0,1,2}".into()));
    }
    if poly[n] != 1 {
        return Err(Error::BadModulus("polynomial must be monic".into()));
    }
    Ok(())
}

/// Order of `x` in `F_3[x]/(poly)`, or `None` if the powers of `x` never
/// return to 1 within `3^n - 1` steps.
fn multiplicative_order_of_x(n: usize, poly: &[u8]) -> Option<u32> {
    let q_minus_1 = 3u32.pow(n as u32) - 1;
    let low = TritPlanes::from_coeffs(&poly[..n]);
    let mut state = TritPlanes::ONE;
    for i in 1..=q_minus_1 {
        state = state.mul_x(low, n);
        if state == TritPlanes::ONE {
            return Some(i);
        }
    }
    None
}

fn smallest_primitive_modulus(n: usize) -> Vec<u8> {
    let q = 3u32.pow(n as u32);
    for k in 0..q {
        // c_0 is the most significant digit of k so that increasing k walks
        // the vectors (c_0, ..., c_{n-1}) in lexicographic order.
        let mut poly: Vec<u8> = (0..n)
            .map(|i| ((k / 3u32.pow((n - 1 - i) as u32)) % 3) as u8)
            .collect();
        poly.push(1);
        if n >= 2 && has_linear_factor(&poly) {
            continue;
        }
        if multiplicative_order_of_x(n, &poly) == Some(q - 1) {
            return poly;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// A root in F_3 rules out primitivity for degree >= 2 without the full walk.
fn has_linear_factor(poly: &[u8]) -> bool {
    (0..3u32).any(|x| {
        poly.iter()
            .rev()
            .fold(0u32, |acc, &c| (acc * x + c as u32) % 3)
            == 0
    })
}

/// Cyclotomic coset of `j` under multiplication by 3 modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicCoset {
    pub modulus: u64,
    pub representative: u64,
    /// Orbit starting at the representative: `r, 3r, 9r, ...`.
    pub members: Vec<u64>,
}

impl CyclotomicCoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, j: u64) -> bool {
        self.members.contains(&j)
    }
}

fn orbit(modulus: u64, j: u64) -> Vec<u64> {
    let mut members = vec![j];
    let mut x = (j * 3) % modulus;
    while x != j {
        members.push(x);
        x = (x * 3) % modulus;
    }
    members
}

/// Coset of `j` modulo `modulus` (which must be coprime to 3).
pub fn coset_of(modulus: u64, j: u64) -> CyclotomicCoset {
    assert!(!modulus.is_multiple_of(3), "modulus must be coprime to 3");
    assert!(j < modulus, "j must be reduced");
    let representative = *orbit(modulus, j).iter().min().expect("orbit is non-empty");
    CyclotomicCoset {
        modulus,
        representative,
        members: orbit(modulus, representative),
    }
}

/// Partition of `[0, modulus)` into cyclotomic cosets, ordered by representative.
pub fn all_cosets(modulus: u64) -> Vec<CyclotomicCoset> {
    assert!(!modulus.is_multiple_of(3), "modulus must be coprime to 3");
    let mut seen = vec![false; modulus as usize];
    let mut out = Vec::new();
    for j in 0..modulus {
        if seen[j as usize] {
            continue;
        }
        let members = orbit(modulus, j);
        for &m in &members {
            seen[m as usize] = true;
        }
        out.push(CyclotomicCoset {
            modulus,
            representative: j,
            members,
        });
    }
    out
}
