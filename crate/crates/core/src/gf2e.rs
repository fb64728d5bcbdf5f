//! Arithmetic in GF(2^l) for 1 <= l <= 16.
//!
//! Elements are stored as their polynomial-basis bit patterns. Addition is
//! XOR and does not depend on the modulus, so `FieldElement` implements
//! `Add` directly; multiplication goes through a [`Field`].

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use thiserror::Error;

/// Largest extension degree supported.
pub const MAX_ELL: u32 = 16;

/// Largest extension degree for which log/antilog tables are built.
pub const MAX_TABLE_ELL: u32 = 12;

/// Default irreducible (and primitive) moduli, indexed by `l - 1`.
///
/// Bit `k` is the coefficient of `x^k`. These are the Conway polynomials
/// for characteristic 2.
pub const DEFAULT_MODULI: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x5b, 0x83, 0x11d, 0x211, 0x46f, 0x805, 0x10eb, 0x201b, 0x40a9,
    0x8035, 0x1002d,
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("extension degree {0} outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {ell}")]
    ReducibleModulus { ell: u32, modulus: u32 },
    #[error("value {value} is not an element of GF({q})")]
    NotInField { value: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

#[derive(Copy, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw bit pattern without checking it against any field.
    pub const fn from_raw(value: u32) -> Self {
        FieldElement(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Addition in characteristic 2 is XOR.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

#[derive(Debug)]
struct LogTables {
    log: Vec<u32>,
    // exp has length 2(q-1) so a product of two logs indexes it directly.
    exp: Vec<u32>,
}

/// The field GF(2^l) with a fixed modulus.
#[derive(Clone)]
pub struct Field {
    ell: u32,
    modulus: u32,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("ell", &self.ell)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// GF(2^l) with the default modulus from [`DEFAULT_MODULI`].
    pub fn new(ell: u32) -> Result<Self, GfError> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(GfError::UnsupportedDegree(ell));
        }
        Self::with_modulus(ell, DEFAULT_MODULI[(ell - 1) as usize])
    }

    /// GF(q) for `q` a power of two.
    pub fn of_order(q: u32) -> Result<Self, GfError> {
        if q < 2 || !q.is_power_of_two() {
            return Err(GfError::UnsupportedDegree(0));
        }
        Self::new(q.trailing_zeros())
    }

    /// GF(2^l) with a caller-supplied modulus, which must be irreducible.
    pub fn with_modulus(ell: u32, modulus: u32) -> Result<Self, GfError> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(GfError::UnsupportedDegree(ell));
        }
        if poly_degree(modulus) != Some(ell) || !is_irreducible(modulus) {
            return Err(GfError::ReducibleModulus { ell, modulus });
        }
        let mut field = Field {
            ell,
            modulus,
            tables: None,
        };
        if ell <= MAX_TABLE_ELL {
            field.tables = field.build_tables().map(Arc::new);
        }
        Ok(field)
    }

    // Tables need x to generate the multiplicative group; a non-primitive
    // modulus silently falls back to shift-and-add.
    fn build_tables(&self) -> Option<LogTables> {
        let q = self.order();
        let n = (q - 1) as usize;
        let mut log = vec![0u32; q as usize];
        let mut exp = vec![0u32; 2 * n];
        let x = if q == 2 { 1 } else { 2 };
        let mut acc = 1u32;
        for (k, slot) in exp.iter_mut().enumerate().take(n) {
            if k > 0 && acc == 1 {
                return None;
            }
            *slot = acc;
            log[acc as usize] = k as u32;
            acc = self.mul_slow(acc, x);
        }
        if acc != 1 {
            return None;
        }
        exp.copy_within(0..n, n);
        Some(LogTables { log, exp })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^l`.
    pub fn order(&self) -> u32 {
        1 << self.ell
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checked constructor.
    pub fn elem(&self, value: u32) -> Result<FieldElement, GfError> {
        if value < self.order() {
            Ok(FieldElement(value))
        } else {
            Err(GfError::NotInField {
                value,
                q: self.order(),
            })
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.order()
    }

    /// All elements in canonical order 0, 1, ..., q-1.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    fn check(&self, a: FieldElement) -> Result<(), GfError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GfError::NotInField {
                value: a.0,
                q: self.order(),
            })
        }
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        a
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElement(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    fn mul_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1u32 << self.ell;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 == 1 {
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

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        if let Some(t) = &self.tables {
            let n = self.order() - 1;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((n - l) % n) as usize]));
        }
        // a^(q-2)
        Ok(self.pow(a, u64::from(self.order()) - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = u64::from(self.order() - 1);
            let l = u64::from(t.log[a.0 as usize]);
            return FieldElement(t.exp[((l * (e % n)) % n) as usize]);
        }
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a + b)
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        self.check(a)?;
        self.inv(a)
    }

    pub fn try_pow(&self, a: FieldElement, e: u64) -> Result<FieldElement, GfError> {
        self.check(a)?;
        Ok(self.pow(a, e))
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << ((63 - a.leading_zeros()) - db);
    }
    a
}

/// Trial division by every polynomial of degree at most half of `p`'s.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = poly_degree(p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for div in 2u64..(1u64 << (d / 2 + 1)) {
        if poly_mod(u64::from(p), div) == 0 {
            return false;
        }
    }
    true
}

/// `C(n, k) mod 2`, which by Lucas is 1 iff the bits of `k` are a subset of `n`'s.
pub fn binom_is_odd(n: u32, k: u32) -> bool {
    k & !n == 0
}
