//! Finitely generated groups: free groups F_k, cyclic groups, and finite
//! direct products, with reduced-word arithmetic, word length, and literal
//! parsing.
//!
//! Word literals use positional letters: generators `a..z`, inverses `A..Z`,
//! so `aB` is g1 * g2^{-1}. The empty string is the identity. For product
//! groups the letters run across all factors in order.

mod ball;

pub use ball::{free_sphere_size, BallIndex, DEFAULT_MEM_CAP};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::fmt;
use std::str::FromStr;

/// Signed generator index: +i is generator i (1-based), -i its inverse.
pub type Letter = i16;

/// A reduced word over signed generator indices.
pub type Word = SmallVec<[Letter; 16]>;

/// Specification of a finitely generated group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupSpec {
    Free { rank: usize },
    Cyclic { modulus: u64 },
    Product { factors: Vec<GroupSpec> },
}

/// An element of a group described by a [`GroupSpec`]. Free-group words are
/// always reduced; cyclic elements are residues; product elements are tuples.
///
/// The derived `Ord` is structural (used for deterministic map iteration);
/// the canonical length-lexicographic order lives in
/// [`GroupSpec::cmp_canonical`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Word(Word),
    Residue(u64),
    Tuple(Vec<GroupElement>),
}

/// Ordering key of a letter: a < A < b < B < ...
#[inline]
pub(crate) fn letter_key(l: Letter) -> u32 {
    debug_assert!(l != 0);
    2 * (l.unsigned_abs() as u32 - 1) + u32::from(l < 0)
}

/// Dense index of a letter among the 2k letters, in key order.
#[inline]
pub(crate) fn letter_index(l: Letter) -> usize {
    letter_key(l) as usize
}

#[inline]
pub(crate) fn key_to_letter(key: u32) -> Letter {
    let idx = (key / 2 + 1) as i16;
    if key.is_multiple_of(2) {
        idx
    } else {
        -idx
    }
}

/// Reduce-concatenate two already reduced words.
pub(crate) fn word_concat(a: &[Letter], b: &[Letter]) -> Word {
    let mut out: Word = SmallVec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    for &l in b {
        if let Some(&last) = out.last() {
            if last == -l {
                out.pop();
                continue;
            }
        }
        out.push(l);
    }
    out
}

pub(crate) fn word_invert(a: &[Letter]) -> Word {
    a.iter().rev().map(|&l| -l).collect()
}

impl GroupSpec {
    pub fn free(rank: usize) -> Self {
        GroupSpec::Free { rank }
    }

    pub fn cyclic(modulus: u64) -> Self {
        GroupSpec::Cyclic { modulus }
    }

    /// Number of (positive) generators; letters run over 1..=this.
    pub fn num_generators(&self) -> usize {
        match self {
            GroupSpec::Free { rank } => *rank,
            GroupSpec::Cyclic { .. } => 1,
            GroupSpec::Product { factors } => factors.iter().map(|f| f.num_generators()).sum(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupSpec::Free { .. } => GroupElement::Word(Word::new()),
            GroupSpec::Cyclic { .. } => GroupElement::Residue(0),
            GroupSpec::Product { factors } => {
                GroupElement::Tuple(factors.iter().map(|f| f.identity()).collect())
            }
        }
    }

    /// The generator with 1-based index `i`, or its inverse for `sign < 0`.
    pub fn generator(&self, i: usize, sign: i8) -> Result<GroupElement> {
        if i == 0 || i > self.num_generators() {
            return Err(Error::structural(format!(
                "generator index {i} out of range for {self}"
            )));
        }
        Ok(match self {
            GroupSpec::Free { .. } => {
                let l = if sign >= 0 { i as Letter } else { -(i as Letter) };
                GroupElement::Word(SmallVec::from_slice(&[l]))
            }
            GroupSpec::Cyclic { modulus } => {
                let r = if sign >= 0 { 1 % *modulus } else { (*modulus - 1) % *modulus };
                GroupElement::Residue(r)
            }
            GroupSpec::Product { factors } => {
                let mut parts = Vec::with_capacity(factors.len());
                let mut offset = 0usize;
                for f in factors {
                    let n = f.num_generators();
                    if i > offset && i <= offset + n {
                        parts.push(f.generator(i - offset, sign)?);
                    } else {
                        parts.push(f.identity());
                    }
                    offset += n;
                }
                GroupElement::Tuple(parts)
            }
        })
    }

    /// Does `e` structurally belong to this spec (shape, ranges, reducedness)?
    pub fn contains(&self, e: &GroupElement) -> bool {
        match (self, e) {
            (GroupSpec::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::Cyclic { modulus }, GroupElement::Residue(r)) => r < modulus,
            (GroupSpec::Product { factors }, GroupElement::Tuple(parts)) => {
                factors.len() == parts.len()
                    && factors.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            _ => false,
        }
    }

    fn check_member(&self, e: &GroupElement, ctx: &str) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "{ctx}: element {e:?} does not belong to group {self}"
            )))
        }
    }

    /// Reduced product of two elements.
    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a, "compose lhs")?;
        self.check_member(b, "compose rhs")?;
        Ok(self.compose_unchecked(a, b))
    }

    pub(crate) fn compose_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GroupSpec::Free { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                GroupElement::Word(word_concat(x, y))
            }
            (GroupSpec::Cyclic { modulus }, GroupElement::Residue(x), GroupElement::Residue(y)) => {
                GroupElement::Residue((x + y) % modulus)
            }
            (GroupSpec::Product { factors }, GroupElement::Tuple(xs), GroupElement::Tuple(ys)) => {
                GroupElement::Tuple(
                    factors
                        .iter()
                        .zip(xs.iter().zip(ys))
                        .map(|(f, (x, y))| f.compose_unchecked(x, y))
                        .collect(),
                )
            }
            _ => unreachable!("compose_unchecked called with mismatched shapes"),
        }
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_member(a, "invert")?;
        Ok(self.invert_unchecked(a))
    }

    pub(crate) fn invert_unchecked(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GroupSpec::Free { .. }, GroupElement::Word(w)) => GroupElement::Word(word_invert(w)),
            (GroupSpec::Cyclic { modulus }, GroupElement::Residue(r)) => {
                GroupElement::Residue(if *r == 0 { 0 } else { modulus - r })
            }
            (GroupSpec::Product { factors }, GroupElement::Tuple(xs)) => GroupElement::Tuple(
                factors
                    .iter()
                    .zip(xs)
                    .map(|(f, x)| f.invert_unchecked(x))
                    .collect(),
            ),
            _ => unreachable!("invert_unchecked called with mismatched shapes"),
        }
    }

    /// Word length with respect to the standard generators.
    pub fn length(&self, a: &GroupElement) -> usize {
        match (self, a) {
            (GroupSpec::Free { .. }, GroupElement::Word(w)) => w.len(),
            (GroupSpec::Cyclic { modulus }, GroupElement::Residue(r)) => {
                (*r).min(modulus - r) as usize
            }
            (GroupSpec::Product { factors }, GroupElement::Tuple(xs)) => factors
                .iter()
                .zip(xs)
                .map(|(f, x)| f.length(x))
                .sum(),
            _ => 0,
        }
    }

    /// Canonical geodesic letter-key sequence; drives the deterministic
    /// (length, lexicographic) ordering used by ball enumeration.
    pub(crate) fn canonical_keys(&self, a: &GroupElement) -> Vec<u32> {
        match (self, a) {
            (GroupSpec::Free { .. }, GroupElement::Word(w)) => {
                w.iter().map(|&l| letter_key(l)).collect()
            }
            (GroupSpec::Cyclic { modulus }, GroupElement::Residue(r)) => {
                let fwd = *r;
                let back = modulus - r;
                if *r == 0 {
                    Vec::new()
                } else if fwd <= back {
                    vec![0; fwd as usize]
                } else {
                    vec![1; back as usize]
                }
            }
            (GroupSpec::Product { factors }, GroupElement::Tuple(xs)) => {
                let mut keys = Vec::new();
                let mut offset = 0u32;
                for (f, x) in factors.iter().zip(xs) {
                    keys.extend(f.canonical_keys(x).into_iter().map(|k| k + 2 * offset));
                    offset += f.num_generators() as u32;
                }
                keys
            }
            _ => Vec::new(),
        }
    }

    /// Deterministic total order: by length, then lexicographic on the
    /// canonical letter-key sequence.
    pub fn cmp_canonical(&self, a: &GroupElement, b: &GroupElement) -> std::cmp::Ordering {
        self.length(a)
            .cmp(&self.length(b))
            .then_with(|| self.canonical_keys(a).cmp(&self.canonical_keys(b)))
    }

    /// Parse a word literal (`aB` = g1 * g2^{-1}; empty string = identity).
    pub fn parse_word(&self, s: &str) -> Result<GroupElement> {
        let mut e = self.identity();
        for c in s.chars() {
            let (i, sign) = match c {
                'a'..='z' => ((c as u8 - b'a') as usize + 1, 1i8),
                'A'..='Z' => ((c as u8 - b'A') as usize + 1, -1i8),
                _ => {
                    return Err(Error::structural(format!(
                        "invalid character {c:?} in word literal {s:?}"
                    )))
                }
            };
            let g = self.generator(i, sign)?;
            e = self.compose_unchecked(&e, &g);
        }
        Ok(e)
    }

    /// Format an element as a canonical word literal (inverse of `parse_word`
    /// on geodesic representatives).
    pub fn format_word(&self, a: &GroupElement) -> String {
        self.canonical_keys(a)
            .iter()
            .map(|&k| {
                let idx = (k / 2) as u8;
                if k % 2 == 0 {
                    (b'a' + idx) as char
                } else {
                    (b'A' + idx) as char
                }
            })
            .collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free { rank } => write!(f, "free:{rank}"),
            GroupSpec::Cyclic { modulus } => write!(f, "cyclic:{modulus}"),
            GroupSpec::Product { factors } => {
                write!(f, "product:")?;
                for (i, fac) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{fac}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `free:<k>`, `cyclic:<n>`, `product:<spec>,<spec>[,...]`.
    /// Product factors must be atomic (free/cyclic); nested products flatten
    /// mathematically, so the restriction loses nothing.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::structural(format!("invalid group spec {s:?}"));
        if let Some(rest) = s.strip_prefix("free:") {
            let rank: usize = rest.parse().map_err(|_| bad())?;
            if rank == 0 || rank > i16::MAX as usize {
                return Err(Error::structural(format!(
                    "free rank must be in 1..={}, got {rank}",
                    i16::MAX
                )));
            }
            Ok(GroupSpec::Free { rank })
        } else if let Some(rest) = s.strip_prefix("cyclic:") {
            let modulus: u64 = rest.parse().map_err(|_| bad())?;
            if modulus == 0 {
                return Err(Error::structural("cyclic modulus must be >= 1"));
            }
            Ok(GroupSpec::Cyclic { modulus })
        } else if let Some(rest) = s.strip_prefix("product:") {
            let factors = rest
                .split(',')
                .map(|p| p.parse::<GroupSpec>())
                .collect::<Result<Vec<_>>>()?;
            if factors.len() < 2 {
                return Err(Error::structural("product needs at least two factors"));
            }
            if factors.iter().any(|f| matches!(f, GroupSpec::Product { .. })) {
                return Err(Error::structural("nested products are not supported"));
            }
            Ok(GroupSpec::Product { factors })
        } else {
            Err(bad())
        }
    }
}
