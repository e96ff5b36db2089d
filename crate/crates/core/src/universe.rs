use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of a finite universe `{0, …, k-1}`.
pub type Elem = u8;

/// The finite base set `{0, …, k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Universe(u8);

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        match u8::try_from(size) {
            Ok(k) if k >= 1 => Ok(Universe(k)),
            _ => Err(Error::InvalidUniverse(size)),
        }
    }

    /// Boolean universe `{0, 1}`.
    pub fn boolean() -> Self {
        Universe(2)
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn elements(self) -> impl Iterator<Item = Elem> + Clone {
        0..self.0
    }

    pub fn check(self, value: usize) -> Result<Elem> {
        if value < self.size() {
            Ok(value as Elem)
        } else {
            Err(Error::ElementOutOfRange {
                value,
                universe: self.size(),
            })
        }
    }

    pub fn ensure_same(self, other: Universe) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UniverseMismatch {
                expected: self.size(),
                found: other.size(),
            })
        }
    }

    /// `k^exp`, or `None` on overflow.
    pub fn checked_pow(self, exp: usize) -> Option<u128> {
        (self.0 as u128).checked_pow(u32::try_from(exp).ok()?)
    }

    /// `k^exp` for sizes already known to be in range.
    pub(crate) fn pow(self, exp: usize) -> usize {
        self.size().pow(exp as u32)
    }
}

impl TryFrom<usize> for Universe {
    type Error = Error;

    fn try_from(size: usize) -> Result<Self> {
        Universe::new(size)
    }
}

impl From<Universe> for usize {
    fn from(u: Universe) -> usize {
        u.size()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{0..{}}}", self.0 - 1)
    }
}

/// Decodes `index` into `len` digits base `k`, most significant first.
pub(crate) fn decode_tuple(k: usize, mut index: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % k) as Elem;
        index /= k;
    }
}

/// Encodes digits base `k`, most significant first.
pub(crate) fn encode_tuple(k: usize, digits: impl IntoIterator<Item = Elem>) -> usize {
    digits.into_iter().fold(0, |acc, d| acc * k + d as usize)
}

/// Advances an odometer over `base^len` index tuples, last digit fastest;
/// false once every tuple has been visited.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
