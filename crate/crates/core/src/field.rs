//! Prime fields GF(p) for the small primes used throughout the crate.
//!
//! Vectors and matrices store raw residues (`u8`) and route every operation
//! through a [`Field`], which is `Copy` and carries its own inverse table.
//! [`FieldElement`] is the checked, self-describing element type used at API
//! boundaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primes accepted by [`Field::new`].
pub const SUPPORTED_PRIMES: [u8; 6] = [2, 3, 5, 7, 11, 13];

/// The prime field GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Field {
    p: u8,
    inv: [u8; 13],
}

impl Field {
    pub fn new(p: u8) -> Result<Self> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedPrime(p as u64));
        }
        let mut inv = [0u8; 13];
        for a in 1..p {
            // p ≤ 13, so a linear scan is fine.
            inv[a as usize] = (1..p).find(|b| (a as u16 * *b as u16) % p as u16 == 1).unwrap();
        }
        Ok(Field { p, inv })
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    /// Number of elements.
    #[inline]
    pub fn order(self) -> usize {
        self.p as usize
    }

    /// Canonical residue of an arbitrary integer.
    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(self, a: u8, b: u8, c: u8) -> u8 {
        ((a as u16 + b as u16 * c as u16) % self.p as u16) as u8
    }

    /// Multiplicative inverse from the table. `a` must be nonzero.
    #[inline]
    pub fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0 && a < self.p);
        self.inv[a as usize]
    }

    pub fn checked_inv(self, a: u8) -> Result<u8> {
        if a.is_multiple_of(self.p) {
            Err(Error::InverseOfZero)
        } else {
            Ok(self.inv[(a % self.p) as usize])
        }
    }

    pub fn element(self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            field: self,
        }
    }

    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        (0..self.p).map(move |value| FieldElement { value, field: self })
    }

    /// Residues printed in the symmetric range `(-p/2, p/2]`.
    pub fn signed(self, a: u8) -> i64 {
        if a as u16 * 2 > self.p as u16 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl TryFrom<u8> for Field {
    type Error = Error;
    fn try_from(p: u8) -> Result<Self> {
        Field::new(p)
    }
}

impl From<Field> for u8 {
    fn from(f: Field) -> u8 {
        f.p
    }
}

/// An element of GF(p) that remembers its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    value: u8,
    field: Field,
}

impl FieldElement {
    pub fn new(field: Field, value: u8) -> Result<Self> {
        if value >= field.p {
            return Err(Error::NotCanonical {
                value: value as u64,
                p: field.p,
            });
        }
        Ok(FieldElement { value, field })
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.value
    }

    #[inline]
    pub fn field(self) -> Field {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: FieldElement) -> Result<Field> {
        if self.field.p != other.field.p {
            Err(Error::FieldMismatch {
                left: self.field.p,
                right: other.field.p,
            })
        } else {
            Ok(self.field)
        }
    }

    pub fn checked_add(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.add(self.value, other.value),
            field: f,
        })
    }

    pub fn checked_sub(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.sub(self.value, other.value),
            field: f,
        })
    }

    pub fn checked_mul(self, other: FieldElement) -> Result<FieldElement> {
        let f = self.same_field(other)?;
        Ok(FieldElement {
            value: f.mul(self.value, other.value),
            field: f,
        })
    }

    pub fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }

    pub fn inv(self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.checked_inv(self.value)?,
            field: self.field,
        })
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
