//! Arithmetic in the binary fields GF(2^n).
//!
//! Elements are polynomials over GF(2) packed little-endian into a `u32`
//! (bit `i` is the coefficient of `x^i`), so addition is XOR. Every element
//! carries its [`FieldSpec`]; mixing elements of different fields is a bug
//! and the operator impls panic on it, while [`FieldElement::try_mul`] and
//! friends report [`Error::FieldMismatch`] instead.
//!
//! Besides the ring operations this module provides the maps that only make
//! sense in characteristic 2: the Frobenius square root, the absolute trace,
//! the Artin–Schreier map `x ↦ x + x²` and the solver for `x² + x = a`.

// characteristic 2: addition is XOR and subtraction is addition
#![allow(clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported extension degree. Keeps every exhaustive check tractable.
pub const MAX_DEGREE: u32 = 16;

/// A concrete model of GF(2^n): the degree and an irreducible modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec", into = "RawFieldSpec")]
pub struct FieldSpec {
    n: u32,
    modulus: u32,
    // least element of trace one, the representative of the non-trivial Arf class
    arf_e: u32,
}

#[derive(Serialize, Deserialize)]
struct RawFieldSpec {
    n: u32,
    modulus: u32,
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = Error;

    fn try_from(raw: RawFieldSpec) -> Result<Self> {
        FieldSpec::new(raw.n, Some(raw.modulus))
    }
}

impl From<FieldSpec> for RawFieldSpec {
    fn from(spec: FieldSpec) -> Self {
        RawFieldSpec {
            n: spec.n,
            modulus: spec.modulus,
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}; {:#x})", self.n, self.modulus)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", 1u64 << self.n)
    }
}

fn degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("division by the zero polynomial");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = degree(p) else { return false };
    if d == 0 {
        return false;
    }
    let limit = 1u32 << (d / 2 + 1);
    (2..limit).all(|q| poly_rem(p, q) != 0)
}

impl FieldSpec {
    /// Builds GF(2^n). Without an explicit modulus the numerically smallest
    /// irreducible polynomial of degree `n` is used.
    pub fn new(n: u32, modulus: Option<u32>) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree(n));
        }
        let modulus = match modulus {
            Some(m) => {
                if degree(m) != Some(n) {
                    return Err(Error::ModulusDegree { n, modulus: m });
                }
                if !is_irreducible(m) {
                    return Err(Error::ModulusReducible { n, modulus: m });
                }
                m
            }
            None => (1u32 << n..1u32 << (n + 1))
                .find(|&m| is_irreducible(m))
                .expect("irreducible polynomials exist in every degree"),
        };
        let mut spec = FieldSpec {
            n,
            modulus,
            arf_e: 0,
        };
        spec.arf_e = (1..spec.order())
            .find(|&v| spec.elem(v).trace().is_one())
            .expect("the trace map is onto GF(2)");
        Ok(spec)
    }

    /// GF(2^n) with the default modulus. Panics on an unsupported degree.
    pub fn gf(n: u32) -> Self {
        Self::new(n, None).expect("supported degree")
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, `2^n`.
    pub fn order(&self) -> u32 {
        1 << self.n
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::ElementOutOfRange { value, n: self.n });
        }
        Ok(FieldElement { value, spec: *self })
    }

    /// Like [`FieldSpec::element`] but panics when `value` is out of range.
    pub fn elem(&self, value: u32) -> FieldElement {
        assert!(
            value < self.order(),
            "{value} is not an element of GF(2^{})",
            self.n
        );
        FieldElement { value, spec: *self }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// The fixed representative `e` of the non-zero class of `K/𝔥(K)`.
    pub fn arf_e(&self) -> FieldElement {
        self.elem(self.arf_e)
    }

    /// All elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let spec = *self;
        (0..self.order()).map(move |v| spec.elem(v))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.elements().skip(1)
    }

    #[inline]
    fn mul_raw(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1u32 << self.n;
        let mut acc = 0;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }
}

/// An element of GF(2^n).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    spec: FieldSpec,
}

impl PartialOrd for FieldSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.modulus).cmp(&(other.n, other.modulus))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

impl FieldElement {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn spec(self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    #[inline]
    fn check(self, other: Self) {
        assert!(
            self.spec == other.spec,
            "mixed fields: {:?} and {:?}",
            self.spec,
            other.spec
        );
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        Ok(self + other)
    }

    /// Field multiplication that reports mixed operands instead of panicking.
    pub fn try_mul(self, other: Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        Ok(self * other)
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = self.spec.one();
        while exp != 0 {
            if exp & 1 != 0 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `a^(2^n - 2)`; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow(u64::from(self.spec.order()) - 2))
    }

    /// The unique square root, `a^(2^(n-1))`.
    pub fn sqrt(self) -> Self {
        let mut r = self;
        for _ in 1..self.spec.n {
            r = r.square();
        }
        r
    }

    /// Absolute trace `Σ_{i<n} a^(2^i)`; always 0 or 1.
    pub fn trace(self) -> Self {
        let mut acc = self;
        let mut t = self;
        for _ in 1..self.spec.n {
            t = t.square();
            acc += t;
        }
        debug_assert!(acc.value <= 1);
        acc
    }

    /// The additive Artin–Schreier map `x ↦ x + x²`.
    pub fn artin_schreier(self) -> Self {
        self + self.square()
    }

    /// Image under `x ↦ x + x²` together with membership of `self` in the
    /// image of that map (decided by the trace).
    pub fn artin_schreier_with_membership(self) -> (Self, bool) {
        (self.artin_schreier(), self.trace().is_zero())
    }

    /// Whether `self` lies in `𝔥(K) = {x + x²}`.
    pub fn in_artin_schreier_image(self) -> bool {
        self.trace().is_zero()
    }

    /// Both roots of `x² + x + a`, or `None` when the polynomial is
    /// irreducible (trace of `a` equal to one). The roots differ by one.
    pub fn solve_artin_schreier(self) -> Option<(Self, Self)> {
        if !self.in_artin_schreier_image() {
            return None;
        }
        let spec = self.spec;
        let n = spec.n as usize;
        // x ↦ x + x² is GF(2)-linear; eliminate on its bit matrix.
        let images: Vec<u32> = (0..n)
            .map(|i| spec.elem(1 << i).artin_schreier().value)
            .collect();
        let root = solve_gf2_linear(&images, self.value, n)
            .map(|bits| spec.elem(bits))
            .expect("trace-zero elements lie in the image");
        let other = root + spec.one();
        Some(if root <= other {
            (root, other)
        } else {
            (other, root)
        })
    }
}

/// Solves `Σ x_i·columns[i] = target` over GF(2), columns packed as bit masks.
fn solve_gf2_linear(columns: &[u32], target: u32, width: usize) -> Option<u32> {
    // rows: (combination of columns as a mask, resulting value)
    let mut rows: Vec<(u32, u32)> = columns
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, 1u32 << i))
        .collect();
    let mut pivots: Vec<(u32, u32)> = Vec::new();
    for bit in (0..width).rev() {
        let mask = 1u32 << bit;
        if let Some(pos) = rows.iter().position(|&(v, _)| v & mask != 0) {
            let pivot = rows.swap_remove(pos);
            for r in rows.iter_mut() {
                if r.0 & mask != 0 {
                    r.0 ^= pivot.0;
                    r.1 ^= pivot.1;
                }
            }
            for p in pivots.iter_mut() {
                if p.0 & mask != 0 {
                    p.0 ^= pivot.0;
                    p.1 ^= pivot.1;
                }
            }
            pivots.push(pivot);
        }
    }
    let mut rem = target;
    let mut combo = 0;
    for &(v, c) in &pivots {
        let lead = 31 - v.leading_zeros();
        if rem & (1 << lead) != 0 {
            rem ^= v;
            combo ^= c;
        }
    }
    (rem == 0).then_some(combo)
}

impl Add for FieldElement {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            value: self.value ^ rhs.value,
            spec: self.spec,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + rhs
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl Mul for FieldElement {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        FieldElement {
            value: self.spec.mul_raw(self.value, rhs.value),
            spec: self.spec,
        }
    }
}

impl Div for FieldElement {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in GF(2^n)")
    }
}

impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    fn sub_assign(&mut self, rhs: Self) {
        *self += rhs;
    }
}

impl MulAssign for FieldElement {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Normalized class of an Arf value in `K/𝔥(K) ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArfClass {
    Zero,
    E,
    Infinity,
}

impl ArfClass {
    pub const ALL: [ArfClass; 3] = [ArfClass::E, ArfClass::Infinity, ArfClass::Zero];

    /// The canonical Arf value of this class: `0`, the least trace-one
    /// element, or infinity.
    pub fn representative(self, spec: FieldSpec) -> ArfValue {
        match self {
            ArfClass::Zero => ArfValue::Finite(spec.zero()),
            ArfClass::E => ArfValue::Finite(spec.arf_e()),
            ArfClass::Infinity => ArfValue::Infinity,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ArfClass::Zero => "0",
            ArfClass::E => "e",
            ArfClass::Infinity => "inf",
        }
    }
}

impl fmt::Display for ArfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ArfClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "0" => Ok(ArfClass::Zero),
            "e" => Ok(ArfClass::E),
            "inf" | "∞" => Ok(ArfClass::Infinity),
            _ => Err(format!("unknown Arf class `{s}` (expected 0, e or inf)")),
        }
    }
}

impl Serialize for ArfClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ArfClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An Arf invariant: a field element or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArfValue {
    Finite(FieldElement),
    Infinity,
}

impl ArfValue {
    /// Class-0 iff the trace vanishes; `e` otherwise.
    pub fn class(self) -> ArfClass {
        match self {
            ArfValue::Infinity => ArfClass::Infinity,
            ArfValue::Finite(a) if a.in_artin_schreier_image() => ArfClass::Zero,
            ArfValue::Finite(_) => ArfClass::E,
        }
    }

    pub fn finite(self) -> Option<FieldElement> {
        match self {
            ArfValue::Finite(a) => Some(a),
            ArfValue::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ArfValue::Infinity)
    }

    /// True for the exact values `0` and `∞`.
    pub fn is_zero_or_infinite(self) -> bool {
        match self {
            ArfValue::Infinity => true,
            ArfValue::Finite(a) => a.is_zero(),
        }
    }
}

impl fmt::Display for ArfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArfValue::Finite(a) => write!(f, "{a}"),
            ArfValue::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ArfValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ArfValue::Finite(a) => s.serialize_u32(a.value()),
            ArfValue::Infinity => s.serialize_str("inf"),
        }
    }
}
