//! Tadic normal forms: Speh factors, complementary-series factors and the
//! canonical multisets built from them.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::alphabet::{Alphabet, Rho};
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, in_open_unit_half, rat, Exponent};
use crate::segment::Segment;

/// The Speh representation `u(delta, k)` for a unitary segment `delta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpehFactor {
    delta: Segment,
    k: u32,
}

impl SpehFactor {
    pub fn new(delta: Segment, k: i64) -> Result<SpehFactor> {
        if !delta.is_unitary() || delta.is_trivial() {
            return Err(Error::NonUnitarySegment {
                length: delta.length(),
                center: delta.center(),
            });
        }
        let k = u32::try_from(k)
            .ok()
            .filter(|&k| k >= 1)
            .ok_or(Error::BadMultiplier { k, min: 1 })?;
        Ok(SpehFactor { delta, k })
    }

    pub fn segment(&self) -> &Segment {
        &self.delta
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn rho(&self) -> Rho {
        self.delta.rho().expect("Speh factors are built on non-trivial segments")
    }

    pub fn degree(&self) -> u64 {
        u64::from(self.k) * self.delta.degree()
    }

    /// Same segment, different `k`; `None` when `k == 0`.
    pub fn with_k(&self, k: u32) -> Option<SpehFactor> {
        (k >= 1).then(|| SpehFactor {
            delta: self.delta.clone(),
            k,
        })
    }

    pub fn dual(&self, alphabet: &Alphabet) -> SpehFactor {
        SpehFactor {
            delta: self.delta.dual(alphabet),
            k: self.k,
        }
    }

    pub fn sigma(&self, alphabet: &Alphabet) -> SpehFactor {
        SpehFactor {
            delta: self.delta.sigma(alphabet),
            k: self.k,
        }
    }

    pub fn is_sigma_self_dual(&self, alphabet: &Alphabet) -> bool {
        self.delta.is_sigma_self_dual(alphabet)
    }
}

/// The complementary series `pi(u(delta, k), alpha)` with `0 < alpha < 1/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplementaryFactor {
    base: SpehFactor,
    alpha: Exponent,
}

impl ComplementaryFactor {
    pub fn new(delta: Segment, k: i64, alpha: Exponent) -> Result<ComplementaryFactor> {
        let base = SpehFactor::new(delta, k)?;
        ComplementaryFactor::from_base(base, alpha)
    }

    pub fn from_base(base: SpehFactor, alpha: Exponent) -> Result<ComplementaryFactor> {
        if !in_open_unit_half(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(ComplementaryFactor { base, alpha })
    }

    pub fn base(&self) -> &SpehFactor {
        &self.base
    }

    pub fn alpha(&self) -> Exponent {
        self.alpha
    }

    pub fn degree(&self) -> u64 {
        2 * self.base.degree()
    }
}

/// One factor of a Tadic product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Factor {
    Speh(SpehFactor),
    Complementary(ComplementaryFactor),
}

impl Factor {
    pub fn base(&self) -> &SpehFactor {
        match self {
            Factor::Speh(s) => s,
            Factor::Complementary(c) => &c.base,
        }
    }

    pub fn k(&self) -> u32 {
        self.base().k
    }

    pub fn degree(&self) -> u64 {
        match self {
            Factor::Speh(s) => s.degree(),
            Factor::Complementary(c) => c.degree(),
        }
    }

    pub fn alpha(&self) -> Option<Exponent> {
        match self {
            Factor::Speh(_) => None,
            Factor::Complementary(c) => Some(c.alpha),
        }
    }

    pub fn is_speh(&self) -> bool {
        matches!(self, Factor::Speh(_))
    }

    /// Same kind, segment and alpha with a new `k`; `None` when `k == 0`.
    pub fn with_k(&self, k: u32) -> Option<Factor> {
        let base = self.base().with_k(k)?;
        Some(match self {
            Factor::Speh(_) => Factor::Speh(base),
            Factor::Complementary(c) => Factor::Complementary(ComplementaryFactor {
                base,
                alpha: c.alpha,
            }),
        })
    }

    fn map_base(&self, f: impl FnOnce(&SpehFactor) -> SpehFactor) -> Factor {
        match self {
            Factor::Speh(s) => Factor::Speh(f(s)),
            Factor::Complementary(c) => Factor::Complementary(ComplementaryFactor {
                base: f(&c.base),
                alpha: c.alpha,
            }),
        }
    }

    /// Contragredient: `u(D,k)^v = u(D^v,k)` and `pi(u,a)^v = pi(u^v,a)`.
    pub fn dual(&self, alphabet: &Alphabet) -> Factor {
        self.map_base(|b| b.dual(alphabet))
    }

    pub fn sigma(&self, alphabet: &Alphabet) -> Factor {
        self.map_base(|b| b.sigma(alphabet))
    }

    /// `sigma(dual(self))`, the factor a sigma-self-dual product pairs this one with.
    pub fn sigma_dual(&self, alphabet: &Alphabet) -> Factor {
        self.dual(alphabet).sigma(alphabet)
    }

    /// The `nu`-twisted Speh blocks whose product is this factor.
    pub fn twisted_halves(&self) -> Vec<TwistedSpeh> {
        match self {
            Factor::Speh(s) => vec![TwistedSpeh {
                base: s.clone(),
                shift: Exponent::zero(),
            }],
            Factor::Complementary(c) => vec![
                TwistedSpeh {
                    base: c.base.clone(),
                    shift: c.alpha,
                },
                TwistedSpeh {
                    base: c.base.clone(),
                    shift: -c.alpha,
                },
            ],
        }
    }

    fn sort_key(&self) -> (u64, u8, Rho, u32, u32, Exponent) {
        let b = self.base();
        let (kind, alpha) = match self {
            Factor::Speh(_) => (0, Exponent::zero()),
            Factor::Complementary(c) => (1, c.alpha),
        };
        (self.degree(), kind, b.rho(), b.delta.length(), b.k, alpha)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> FactorDisplay<'a> {
        FactorDisplay {
            factor: self,
            alphabet,
        }
    }
}

/// Canonical factor order: degree, then Speh before complementary, then
/// rho id, segment length, k and alpha.
impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `nu^shift * u(delta, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedSpeh {
    pub base: SpehFactor,
    pub shift: Exponent,
}

impl TwistedSpeh {
    /// Langlands segments `nu^(shift + (k-1)/2 - j) * delta`, `j = 0..k`,
    /// in decreasing order of center.
    pub fn langlands_segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let k = i64::from(self.base.k);
        (0..k).map(move |j| {
            self.base
                .delta
                .twist(self.shift + rat(k - 1, 2) - Exponent::from_integer(j))
        })
    }
}

/// An irreducible unitary representation as a canonical multiset of factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UnitaryRep {
    factors: Vec<(Factor, u32)>,
}

impl UnitaryRep {
    /// The trivial representation of `G_0`.
    pub fn empty() -> UnitaryRep {
        UnitaryRep::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = Factor>) -> UnitaryRep {
        let mut all: Vec<Factor> = factors.into_iter().collect();
        all.sort();
        let mut out: Vec<(Factor, u32)> = Vec::new();
        for f in all {
            match out.last_mut() {
                Some((last, m)) if *last == f => *m += 1,
                _ => out.push((f, 1)),
            }
        }
        UnitaryRep { factors: out }
    }

    pub fn single(factor: Factor) -> UnitaryRep {
        UnitaryRep {
            factors: vec![(factor, 1)],
        }
    }

    /// Distinct factors with their multiplicities, in canonical order.
    pub fn factors(&self) -> &[(Factor, u32)] {
        &self.factors
    }

    /// Factors repeated according to multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &Factor> + '_ {
        self.factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f, *m as usize))
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of factors counted with multiplicity.
    pub fn len(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum()
    }

    pub fn multiplicity(&self, factor: &Factor) -> u32 {
        self.factors
            .binary_search_by(|(f, _)| f.cmp(factor))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(f, m)| f.degree() * u64::from(*m)).sum()
    }

    pub fn max_k(&self) -> u32 {
        self.factors.iter().map(|(f, _)| f.k()).max().unwrap_or(0)
    }

    /// Multiset union; a linear merge of the two canonical factor lists.
    pub fn product(&self, other: &UnitaryRep) -> UnitaryRep {
        let (mut a, mut b) = (self.factors.iter().peekable(), other.factors.iter().peekable());
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        loop {
            let next = match (a.peek(), b.peek()) {
                (Some((fa, ma)), Some((fb, mb))) => match fa.cmp(fb) {
                    Ordering::Less => a.next().cloned(),
                    Ordering::Greater => b.next().cloned(),
                    Ordering::Equal => {
                        let merged = (fa.clone(), ma + mb);
                        a.next();
                        b.next();
                        Some(merged)
                    }
                },
                (Some(_), None) => a.next().cloned(),
                (None, Some(_)) => b.next().cloned(),
                (None, None) => break,
            };
            out.extend(next);
        }
        UnitaryRep { factors: out }
    }

    pub fn dual(&self, alphabet: &Alphabet) -> UnitaryRep {
        UnitaryRep::from_factors(self.iter().map(|f| f.dual(alphabet)))
    }

    pub fn sigma(&self, alphabet: &Alphabet) -> UnitaryRep {
        UnitaryRep::from_factors(self.iter().map(|f| f.sigma(alphabet)))
    }

    /// `pi^v == pi^sigma`, i.e. `sigma(dual(pi)) == pi`.
    pub fn is_sigma_self_dual(&self, alphabet: &Alphabet) -> bool {
        self.dual(alphabet).sigma(alphabet) == *self
    }

    /// Langlands data: every factor expanded into its twisted segments, sorted
    /// by non-increasing center. Ties keep canonical factor order.
    pub fn langlands_data(&self) -> Vec<Segment> {
        let mut out: Vec<Segment> = self
            .iter()
            .flat_map(|f| f.twisted_halves())
            .flat_map(|t| t.langlands_segments().collect::<Vec<_>>())
            .collect();
        out.sort_by_key(|s| std::cmp::Reverse(s.center()));
        out
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> RepDisplay<'a> {
        RepDisplay { rep: self, alphabet }
    }
}

/// Enumeration order: by degree, then lexicographically by canonical factors.
impl Ord for UnitaryRep {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for UnitaryRep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Factor> for UnitaryRep {
    fn from_iter<I: IntoIterator<Item = Factor>>(iter: I) -> Self {
        UnitaryRep::from_factors(iter)
    }
}

pub struct FactorDisplay<'a> {
    factor: &'a Factor,
    alphabet: &'a Alphabet,
}

impl fmt::Display for FactorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.factor.base();
        let speh = format!("u({},{})", b.delta.display(self.alphabet), b.k);
        match self.factor {
            Factor::Speh(_) => f.write_str(&speh),
            Factor::Complementary(c) => write!(f, "pi({},{})", speh, fmt_rational(&c.alpha)),
        }
    }
}

pub struct RepDisplay<'a> {
    rep: &'a UnitaryRep,
    alphabet: &'a Alphabet,
}

impl fmt::Display for RepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.is_empty() {
            return f.write_str("1");
        }
        for (i, factor) in self.rep.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{}", factor.display(self.alphabet))?;
        }
        Ok(())
    }
}
