//! The finite universe of unitary cuspidal symbols.
//!
//! An alphabet is loaded from JSON and validated once; afterwards it is an
//! immutable value. Each symbol carries its contragredient and Galois-twist
//! images, and, when it is sigma-self-dual, the parity `j` for which it is
//! `(sigma, eta^j)`-distinguished.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;
use thiserror::Error;

use crate::error::Error;

/// Largest accepted cuspidal degree.
pub const MAX_DEGREE: u32 = 65_535;

/// Parity of a sigma-self-dual cuspidal: `Zero` means sigma-distinguished,
/// `One` means `(sigma, eta)`-distinguished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Zero,
    One,
}

impl Parity {
    pub fn from_bit(bit: u64) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Zero),
            1 => Some(Parity::One),
            _ => None,
        }
    }

    pub fn bit(self) -> u64 {
        match self {
            Parity::Zero => 0,
            Parity::One => 1,
        }
    }

    pub fn flipped(self) -> Parity {
        match self {
            Parity::Zero => Parity::One,
            Parity::One => Parity::Zero,
        }
    }

    /// The parity of `n`.
    pub fn of(n: u64) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Zero
        } else {
            Parity::One
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspidalSymbol {
    pub id: String,
    pub degree: u32,
    pub dual_id: String,
    pub sigma_id: String,
    pub parity: Option<Parity>,
}

/// Handle to a symbol of a particular [`Alphabet`].
///
/// Handles order like the ids they point to (the alphabet keeps its symbols
/// sorted by id) and cache the symbol degree so that factor degrees can be
/// computed without the alphabet at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rho {
    index: u32,
    degree: u32,
}

impl Rho {
    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn index(self) -> usize {
        self.index as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("symbol `{symbol}` refers to undeclared symbol `{reference}`")]
    DanglingReference { symbol: String, reference: String },
    #[error("symbol `{symbol}`: {reason}")]
    BrokenInvolution { symbol: String, reason: String },
    #[error("symbol `{0}` declares a parity but is not sigma-self-dual")]
    ParityOnNonSelfDual(String),
    #[error("symbol `{0}` is sigma-self-dual but declares no parity")]
    MissingParity(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<CuspidalSymbol>,
    dual: Vec<u32>,
    sigma: Vec<u32>,
    by_id: BTreeMap<String, u32>,
}

impl Alphabet {
    /// Parses and validates the JSON alphabet format.
    pub fn load(text: &str) -> Result<Alphabet, AlphabetError> {
        let file: AlphabetFile = serde_json::from_str(text).map_err(|e| AlphabetError::ParseError {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        Alphabet::from_symbols(file.cuspidals.0)
    }

    /// Validates a list of symbols. Ids must already be unique.
    pub fn from_symbols(mut symbols: Vec<CuspidalSymbol>) -> Result<Alphabet, AlphabetError> {
        symbols.sort_by(|a, b| a.id.cmp(&b.id));
        let mut by_id = BTreeMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if !is_token(&s.id) {
                return Err(AlphabetError::ParseError {
                    line: 0,
                    column: 0,
                    message: format!("invalid symbol id `{}`", s.id),
                });
            }
            if s.degree == 0 || s.degree > MAX_DEGREE {
                return Err(AlphabetError::ParseError {
                    line: 0,
                    column: 0,
                    message: format!("symbol `{}` must have degree between 1 and {MAX_DEGREE}", s.id),
                });
            }
            if by_id.insert(s.id.clone(), i as u32).is_some() {
                return Err(AlphabetError::ParseError {
                    line: 0,
                    column: 0,
                    message: format!("duplicate symbol id `{}`", s.id),
                });
            }
        }

        let resolve = |s: &CuspidalSymbol, target: &str| {
            by_id
                .get(target)
                .copied()
                .ok_or_else(|| AlphabetError::DanglingReference {
                    symbol: s.id.clone(),
                    reference: target.to_string(),
                })
        };
        let mut dual = Vec::with_capacity(symbols.len());
        let mut sigma = Vec::with_capacity(symbols.len());
        for s in &symbols {
            dual.push(resolve(s, &s.dual_id)?);
            sigma.push(resolve(s, &s.sigma_id)?);
        }

        for (i, s) in symbols.iter().enumerate() {
            let broken = |reason: &str| AlphabetError::BrokenInvolution {
                symbol: s.id.clone(),
                reason: reason.to_string(),
            };
            let d = dual[i] as usize;
            let g = sigma[i] as usize;
            if dual[d] as usize != i {
                return Err(broken("dual is not an involution"));
            }
            if sigma[g] as usize != i {
                return Err(broken("sigma is not an involution"));
            }
            if dual[g] != sigma[d] {
                return Err(broken("dual and sigma do not commute"));
            }
            if symbols[d].degree != s.degree || symbols[g].degree != s.degree {
                return Err(broken("dual or sigma changes the degree"));
            }
            let self_dual = sigma[d] as usize == i;
            match (self_dual, s.parity) {
                (false, Some(_)) => return Err(AlphabetError::ParityOnNonSelfDual(s.id.clone())),
                (true, None) => return Err(AlphabetError::MissingParity(s.id.clone())),
                _ => {}
            }
        }

        Ok(Alphabet {
            symbols,
            dual,
            sigma,
            by_id,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn rho(&self, id: &str) -> Result<Rho, Error> {
        self.by_id
            .get(id)
            .map(|&index| Rho {
                index,
                degree: self.symbols[index as usize].degree,
            })
            .ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    /// All symbols in id order.
    pub fn rhos(&self) -> impl Iterator<Item = Rho> + '_ {
        self.symbols.iter().enumerate().map(|(i, s)| Rho {
            index: i as u32,
            degree: s.degree,
        })
    }

    pub fn symbol(&self, rho: Rho) -> &CuspidalSymbol {
        &self.symbols[rho.index()]
    }

    pub fn symbols(&self) -> &[CuspidalSymbol] {
        &self.symbols
    }

    pub fn id(&self, rho: Rho) -> &str {
        &self.symbols[rho.index()].id
    }

    pub fn dual(&self, rho: Rho) -> Rho {
        Rho {
            index: self.dual[rho.index()],
            degree: rho.degree,
        }
    }

    pub fn sigma(&self, rho: Rho) -> Rho {
        Rho {
            index: self.sigma[rho.index()],
            degree: rho.degree,
        }
    }

    pub fn parity(&self, rho: Rho) -> Option<Parity> {
        self.symbols[rho.index()].parity
    }

    /// `sigma(dual(rho)) == rho`.
    pub fn is_sigma_self_dual(&self, rho: Rho) -> bool {
        self.sigma(self.dual(rho)) == rho
    }

    /// Whether `rho` is `(sigma, eta^j)`-distinguished for the given parity `j`.
    pub fn distinguished_by(&self, rho: Rho, j: Parity) -> bool {
        self.parity(rho) == Some(j)
    }

    /// Copy of the alphabet with the parity of `id` flipped, bypassing
    /// validation. Used to inject a known bug into cross-checks.
    pub fn with_flipped_parity(&self, id: &str) -> Result<Alphabet, Error> {
        let rho = self.rho(id)?;
        let mut out = self.clone();
        let slot = &mut out.symbols[rho.index()].parity;
        *slot = match *slot {
            Some(p) => Some(p.flipped()),
            None => return Err(Error::NotSelfDual(id.to_string())),
        };
        Ok(out)
    }
}

/// Symbol ids match `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_token(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphabetFile {
    cuspidals: SymbolList,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbol {
    id: String,
    degree: u32,
    dual: String,
    sigma: String,
    #[serde(default, deserialize_with = "present_parity")]
    parity: Option<Parity>,
}

fn present_parity<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Parity>, D::Error> {
    let bit = u64::deserialize(d)?;
    Parity::from_bit(bit)
        .map(Some)
        .ok_or_else(|| de::Error::custom(format!("parity must be 0 or 1, got {bit}")))
}

/// Symbol list whose per-entry checks run during deserialization so that
/// serde_json attaches a source position to every failure.
struct SymbolList(Vec<CuspidalSymbol>);

impl<'de> Deserialize<'de> for SymbolList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct ListVisitor;

        impl<'de> Visitor<'de> for ListVisitor {
            type Value = SymbolList;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of cuspidal symbols")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<SymbolList, A::Error> {
                let mut out: Vec<CuspidalSymbol> = Vec::new();
                while let Some(raw) = seq.next_element::<RawSymbol>()? {
                    for tok in [&raw.id, &raw.dual, &raw.sigma] {
                        if !is_token(tok) {
                            return Err(de::Error::custom(format!("invalid token `{tok}`")));
                        }
                    }
                    if raw.degree == 0 || raw.degree > MAX_DEGREE {
                        return Err(de::Error::custom(format!(
                            "symbol `{}` must have degree between 1 and {MAX_DEGREE}",
                            raw.id
                        )));
                    }
                    if out.iter().any(|s| s.id == raw.id) {
                        return Err(de::Error::custom(format!("duplicate symbol id `{}`", raw.id)));
                    }
                    out.push(CuspidalSymbol {
                        id: raw.id,
                        degree: raw.degree,
                        dual_id: raw.dual,
                        sigma_id: raw.sigma,
                        parity: raw.parity,
                    });
                }
                Ok(SymbolList(out))
            }
        }

        d.deserialize_seq(ListVisitor)
    }
}
