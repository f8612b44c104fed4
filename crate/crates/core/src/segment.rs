//! Segments `nu^e * St(rho, l)` and the segment-level distinction rules.

use std::fmt;

use num_traits::{CheckedAdd, CheckedSub, Zero};

use crate::alphabet::{Alphabet, Parity, Rho};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, int, is_nonneg_integer, rat, Exponent};

/// A twisted generalized Steinberg representation `nu^center * St(rho, length)`.
///
/// The segment of length 0 is the trivial representation of `G_0`; it is
/// stored in a normalized form so that all trivial segments compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    rho: Option<Rho>,
    length: u32,
    center: Exponent,
}

impl Segment {
    pub fn new(rho: Rho, length: u32, center: Exponent) -> Segment {
        if length == 0 {
            return Segment::trivial();
        }
        Segment {
            rho: Some(rho),
            length,
            center,
        }
    }

    /// The centered segment `St(rho, length)`.
    pub fn st(rho: Rho, length: u32) -> Segment {
        Segment::new(rho, length, Exponent::zero())
    }

    pub fn trivial() -> Segment {
        Segment {
            rho: None,
            length: 0,
            center: Exponent::zero(),
        }
    }

    /// The segment with exponents running from `low` to `high`.
    pub fn from_endpoints(rho: Rho, low: Exponent, high: Exponent) -> Result<Segment> {
        let invalid = Error::InvalidEndpoints { low, high };
        let span = high.checked_sub(&low).ok_or(Error::Overflow)?;
        if !is_nonneg_integer(&span) {
            return Err(invalid);
        }
        let length = u32::try_from(span.to_integer())
            .ok()
            .and_then(|l| l.checked_add(1))
            .ok_or(invalid)?;
        let sum = low.checked_add(&high).ok_or(Error::Overflow)?;
        Ok(Segment::new(rho, length, sum / int(2)))
    }

    pub fn rho(&self) -> Option<Rho> {
        self.rho
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn center(&self) -> Exponent {
        self.center
    }

    pub fn is_trivial(&self) -> bool {
        self.length == 0
    }

    pub fn degree(&self) -> u64 {
        match self.rho {
            Some(rho) => u64::from(self.length) * u64::from(rho.degree()),
            None => 0,
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.center.is_zero()
    }

    /// `(low, high)` exponents; `None` for the trivial segment.
    pub fn endpoints(&self) -> Option<(Exponent, Exponent)> {
        if self.is_trivial() {
            return None;
        }
        let radius = rat(i64::from(self.length) - 1, 2);
        Some((self.center - radius, self.center + radius))
    }

    pub fn up(&self) -> Result<Segment> {
        match self.rho {
            Some(rho) => Ok(Segment::new(rho, self.length + 1, self.center)),
            None => Err(Error::EmptySegment),
        }
    }

    pub fn down(&self) -> Result<Segment> {
        match self.rho {
            Some(rho) => Ok(Segment::new(rho, self.length - 1, self.center)),
            None => Err(Error::EmptySegment),
        }
    }

    pub fn dual(&self, alphabet: &Alphabet) -> Segment {
        match self.rho {
            Some(rho) => Segment::new(alphabet.dual(rho), self.length, -self.center),
            None => Segment::trivial(),
        }
    }

    pub fn sigma(&self, alphabet: &Alphabet) -> Segment {
        match self.rho {
            Some(rho) => Segment::new(alphabet.sigma(rho), self.length, self.center),
            None => Segment::trivial(),
        }
    }

    /// [`Segment::twist`] that reports overflow instead of panicking.
    pub fn checked_twist(&self, shift: Exponent) -> Result<Segment> {
        match self.rho {
            Some(rho) => {
                let center = self.center.checked_add(&shift).ok_or(Error::Overflow)?;
                Ok(Segment::new(rho, self.length, center))
            }
            None => Ok(Segment::trivial()),
        }
    }

    pub fn twist(&self, shift: Exponent) -> Segment {
        match self.rho {
            Some(rho) => Segment::new(rho, self.length, self.center + shift),
            None => Segment::trivial(),
        }
    }

    /// `sigma(dual(self)) == self`.
    pub fn is_sigma_self_dual(&self, alphabet: &Alphabet) -> bool {
        self.sigma(alphabet).dual(alphabet) == *self
    }

    /// Parity `j` such that the segment is `(sigma, eta^j)`-distinguished, or
    /// `None` when it is neither (non-zero center or rho not sigma-self-dual).
    ///
    /// `St(rho, l)` is `(sigma, eta^j)`-distinguished iff rho is
    /// `(sigma, eta^(j + l - 1))`-distinguished.
    pub fn distinction_parity(&self, alphabet: &Alphabet) -> Result<Option<Parity>> {
        let rho = self.rho.ok_or(Error::EmptySegment)?;
        if !self.center.is_zero() || !alphabet.is_sigma_self_dual(rho) {
            return Ok(None);
        }
        let p = alphabet.parity(rho).map(|p| Parity::of(p.bit() + u64::from(self.length) - 1));
        Ok(p)
    }

    /// Whether the segment is sigma-distinguished.
    pub fn distinguished(&self, alphabet: &Alphabet) -> Result<bool> {
        Ok(self.distinction_parity(alphabet)? == Some(Parity::Zero))
    }

    /// Whether the segment is `(sigma, eta)`-distinguished.
    pub fn eta_distinguished(&self, alphabet: &Alphabet) -> Result<bool> {
        Ok(self.distinction_parity(alphabet)? == Some(Parity::One))
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> SegmentDisplay<'a> {
        SegmentDisplay {
            segment: self,
            alphabet,
        }
    }
}

pub struct SegmentDisplay<'a> {
    segment: &'a Segment,
    alphabet: &'a Alphabet,
}

impl fmt::Display for SegmentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.segment;
        let Some(rho) = s.rho else {
            return f.write_str("1");
        };
        if !s.center.is_zero() {
            write!(f, "nu^{{{}}}*", fmt_rational(&s.center))?;
        }
        write!(f, "St({},{})", self.alphabet.id(rho), s.length)
    }
}
