//! Exact arithmetic in GF(p^n).
//!
//! Elements are polynomials over GF(p) of degree < n, reduced modulo a fixed
//! monic irreducible polynomial. A [`FieldElement`] packs the coefficient
//! vector into a single integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`, so the
//! zero element is `0` and the one element is `1`. Multiplication and inversion
//! go through discrete log tables built once per field.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on `p^n`.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} out of range (must be at least 1)")]
    DegreeOutOfRange(u64),
    #[error("field size {p}^{n} exceeds cap {cap}")]
    SizeCapExceeded { p: u64, n: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value does not belong to GF({p}^{n})")]
    FieldMismatch { p: u32, n: u32 },
    #[error("cannot parse field {0:?}; expected \"p^n\"")]
    Parse(String),
}

/// An element of some `Field`, packed as its base-`p` coefficient digits.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct FieldInner {
    p: u32,
    n: u32,
    order: u32,
    /// Monic modulus, low degree first, length `n + 1`.
    modulus: Vec<u32>,
    /// `exp[k] = g^k` for a fixed primitive element `g`, `k < order - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u32>,
}

/// The finite field GF(p^n). Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.n == other.inner.n
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Dense polynomial helpers over GF(p), coefficients low degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in m.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Monic polynomials of degree `d`, in increasing lexicographic order of
/// their coefficient vectors compared from the constant term upward.
fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(d);
    (0..count).map(move |idx| {
        // The constant term is the most significant digit.
        let mut coeffs = vec![0u32; d as usize + 1];
        let mut rest = idx;
        for i in (0..d as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[d as usize] = 1;
        coeffs
    })
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let n = (m.len() - 1) as u32;
    for d in 1..=n / 2 {
        for f in monic_polys(p, d) {
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// GF(p^n) with the default size cap.
    pub fn new(p: u64, n: u64) -> Result<Self, FieldError> {
        Self::with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn with_cap(p: u64, n: u64, cap: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if !(1..=64).contains(&n) {
            return Err(FieldError::DegreeOutOfRange(n));
        }
        let order = p
            .checked_pow(n as u32)
            .filter(|&q| q <= cap && q <= u32::MAX as u64)
            .ok_or(FieldError::SizeCapExceeded { p, n, cap })?;
        let (p, n, order) = (p as u32, n as u32, order as u32);

        let modulus = monic_polys(p, n)
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let mut inner = FieldInner {
            p,
            n,
            order,
            modulus,
            exp: Vec::new(),
            log: vec![0; order as usize],
        };
        inner.build_log_tables();
        Ok(Field {
            inner: Arc::new(inner),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.n
    }

    /// Number of elements, `p^n`.
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// Modulus coefficients, low degree first (monic, length `n + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The element `t`, the class of the polynomial variable (equals 0 when n = 1).
    pub fn generator(&self) -> FieldElement {
        if self.inner.n == 1 {
            // t = 0 modulo x.
            FieldElement::ZERO
        } else {
            FieldElement(self.inner.p)
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.inner.order
    }

    /// Checked conversion from a packed index.
    pub fn element(&self, index: u32) -> Result<FieldElement, FieldError> {
        let a = FieldElement(index);
        if self.contains(a) {
            Ok(a)
        } else {
            Err(self.mismatch())
        }
    }

    /// Image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.inner.n as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(self.mismatch());
        }
        let mut idx = 0u32;
        for &c in coeffs.iter().rev() {
            idx = idx * self.inner.p + c;
        }
        Ok(FieldElement(idx))
    }

    /// Length-`n` coefficient vector, low degree first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.inner.n as usize);
        let mut rest = a.0;
        for _ in 0..self.inner.n {
            out.push(rest % self.inner.p);
            rest /= self.inner.p;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.inner.order).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.inner.order).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let f = &self.inner;
        let k = (f.log[a.0 as usize] as u64 + f.log[b.0 as usize] as u64) % (f.order as u64 - 1);
        FieldElement(f.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let f = &self.inner;
        let m = f.order - 1;
        Ok(FieldElement(
            f.exp[((m - f.log[a.0 as usize]) % m) as usize],
        ))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let f = &self.inner;
        let m = f.order as u64 - 1;
        let k = (f.log[a.0 as usize] as u64 * (e % m)) % m;
        FieldElement(f.exp[k as usize])
    }

    /// Multiplication by reducing the polynomial product, without the log
    /// tables. Used to build the tables and as an independent check.
    pub fn mul_by_reduction(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.inner.mul_poly(a.0, b.0)
    }

    fn digitwise(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: impl Fn(u32, u32, u32) -> u32,
    ) -> FieldElement {
        let p = self.inner.p;
        if self.inner.n == 1 {
            return FieldElement(op(a.0, b.0, p));
        }
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.inner.n {
            out += op(x % p, y % p, p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    fn mismatch(&self) -> FieldError {
        FieldError::FieldMismatch {
            p: self.inner.p,
            n: self.inner.n,
        }
    }

    /// Human-readable form, e.g. `2t+1` or `2`.
    pub fn format(&self, a: FieldElement) -> String {
        if self.inner.n == 1 {
            return a.0.to_string();
        }
        let coeffs = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}

impl FieldInner {
    fn decode(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut rest = a;
        for _ in 0..self.n {
            out.push(rest % self.p);
            rest /= self.p;
        }
        trim(out)
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_poly(&self, a: u32, b: u32) -> FieldElement {
        let prod = poly_mul(&self.decode(a), &self.decode(b), self.p);
        let reduced = if self.n == 1 {
            // Constants only; the modulus x never enters.
            prod
        } else {
            poly_rem(&prod, &self.modulus, self.p)
        };
        FieldElement(self.encode(&reduced))
    }

    fn build_log_tables(&mut self) {
        let m = self.order - 1;
        for g in 1..self.order {
            let mut exp = Vec::with_capacity(m as usize);
            let mut x = 1u32;
            let mut ok = true;
            for k in 0..m {
                if k > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_poly(x, g).0;
            }
            if ok && x == 1 {
                for (k, &v) in exp.iter().enumerate() {
                    self.log[v as usize] = k as u32;
                }
                self.exp = exp;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.inner.p, self.inner.n)
    }
}

/// A parsed `"p^n"` string, before the field tables are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u64,
}

impl FieldSpec {
    pub fn build(self, cap: u64) -> Result<Field, FieldError> {
        Field::with_cap(self.p, self.n, cap)
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Parse(s.to_string());
        let (p, n) = s.trim().split_once('^').ok_or_else(bad)?;
        Ok(FieldSpec {
            p: p.trim().parse().map_err(|_| bad())?,
            n: n.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<FieldSpec>()?.build(DEFAULT_FIELD_CAP)
    }
}
