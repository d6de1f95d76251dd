// SPDX-License-Identifier: Apache-2.0
//! Truth tables, minterms and representative bits.
//!
//! A function of `n` variables is stored as a `2^n`-bit word in which bit `g`
//! is the value on minterm `g`. The representative number `g` of a minterm is
//! read with variable `x_1` in the most significant position, so for `n = 3`
//! minterm `2 = 010` has `x_1 = 0, x_2 = 1, x_3 = 0`.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use crate::error::{Error, Result};

/// Largest variable count; `2^6` minterms fit one `u64`.
pub const MAX_VARS: usize = 6;
/// Smallest variable count accepted for a [`TruthSpec`].
pub const MIN_SPEC_VARS: usize = 2;

/// Mask with the low `2^vars` bits set.
pub fn width_mask(vars: usize) -> u64 {
    let len = 1usize << vars;
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitvector {
    vars: u8,
    bits: u64,
}

impl Bitvector {
    pub fn new(vars: usize, bits: u64) -> Result<Self> {
        if vars > MAX_VARS {
            return Err(Error::VariableCount(vars, 0, MAX_VARS));
        }
        if bits & !width_mask(vars) != 0 {
            let index = 63 - bits.leading_zeros() as usize;
            return Err(Error::MintermOutOfRange { index, vars });
        }
        Ok(Bitvector {
            vars: vars as u8,
            bits,
        })
    }

    /// Builds a vector, silently dropping bits beyond `2^vars`.
    pub fn masked(vars: usize, bits: u64) -> Self {
        assert!(vars <= MAX_VARS, "at most {MAX_VARS} variables");
        Bitvector {
            vars: vars as u8,
            bits: bits & width_mask(vars),
        }
    }

    pub fn zeros(vars: usize) -> Self {
        Self::masked(vars, 0)
    }

    pub fn ones(vars: usize) -> Self {
        Self::masked(vars, u64::MAX)
    }

    pub fn from_minterms<I: IntoIterator<Item = usize>>(vars: usize, minterms: I) -> Result<Self> {
        let mut v = Self::new(vars, 0)?;
        for g in minterms {
            if g >= v.len() {
                return Err(Error::MintermOutOfRange { index: g, vars });
            }
            v.bits |= 1 << g;
        }
        Ok(v)
    }

    /// Projection function of variable `x_j` (1-based).
    pub fn variable(vars: usize, j: usize) -> Result<Self> {
        if j == 0 || j > vars {
            return Err(Error::VariableOutOfRange { index: j, vars });
        }
        let shift = vars - j;
        let bits = (0..1usize << vars)
            .filter(|g| (g >> shift) & 1 == 1)
            .fold(0u64, |acc, g| acc | 1 << g);
        Self::new(vars, bits)
    }

    pub fn vars(&self) -> usize {
        self.vars as usize
    }

    /// Number of minterms, `2^vars`.
    pub fn len(&self) -> usize {
        1 << self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, g: usize) -> bool {
        g < self.len() && (self.bits >> g) & 1 == 1
    }

    pub fn with(mut self, g: usize, value: bool) -> Self {
        assert!(g < self.len(), "minterm {g} out of range");
        if value {
            self.bits |= 1 << g;
        } else {
            self.bits &= !(1 << g);
        }
        self
    }

    pub fn count_ones(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Indices of the set bits in increasing order.
    pub fn minterms(self) -> impl Iterator<Item = usize> {
        (0..self.len()).filter(move |&g| self.get(g))
    }

    /// Hex rendering, most significant minterm first, `max(1, 2^n / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = (self.len() / 4).max(1);
        format!("{:0width$x}", self.bits, width = digits)
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "bitvector widths differ");
    }
}

impl fmt::Display for Bitvector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0width$b}", self.bits, width = self.len())
    }
}

impl BitAnd for Bitvector {
    type Output = Bitvector;
    fn bitand(self, rhs: Self) -> Self {
        self.check_same(&rhs);
        Bitvector {
            vars: self.vars,
            bits: self.bits & rhs.bits,
        }
    }
}

impl BitOr for Bitvector {
    type Output = Bitvector;
    fn bitor(self, rhs: Self) -> Self {
        self.check_same(&rhs);
        Bitvector {
            vars: self.vars,
            bits: self.bits | rhs.bits,
        }
    }
}

impl BitXor for Bitvector {
    type Output = Bitvector;
    fn bitxor(self, rhs: Self) -> Self {
        self.check_same(&rhs);
        Bitvector {
            vars: self.vars,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl Not for Bitvector {
    type Output = Bitvector;
    fn not(self) -> Self {
        Bitvector::masked(self.vars(), !self.bits)
    }
}

/// Parses a hex truth table such as `"6b"`; shorter strings are left-padded.
pub fn parse_hex(hex: &str, vars: usize) -> Result<Bitvector> {
    if !(MIN_SPEC_VARS..=MAX_VARS).contains(&vars) {
        return Err(Error::VariableCount(vars, MIN_SPEC_VARS, MAX_VARS));
    }
    let text = hex.trim();
    if text.is_empty() {
        return Err(Error::EmptyFunction);
    }
    let max = (1usize << vars) / 4;
    if text.len() > max {
        return Err(Error::HexTooLong {
            text: text.to_string(),
            digits: text.len(),
            max,
            vars,
        });
    }
    let mut bits = 0u64;
    for c in text.chars() {
        let d = c.to_digit(16).ok_or_else(|| Error::InvalidHexDigit {
            text: text.to_string(),
            digit: c,
        })?;
        bits = bits << 4 | d as u64;
    }
    Bitvector::new(vars, bits)
}

/// Parses either a hex truth table or a minterm list written `sum:0,1,3,5,6`.
pub fn parse_function(text: &str, vars: usize) -> Result<Bitvector> {
    let text = text.trim();
    match text.strip_prefix("sum:") {
        Some(list) => parse_minterm_list(list, vars),
        None => parse_hex(text, vars),
    }
}

fn parse_minterm_list(list: &str, vars: usize) -> Result<Bitvector> {
    if !(MIN_SPEC_VARS..=MAX_VARS).contains(&vars) {
        return Err(Error::VariableCount(vars, MIN_SPEC_VARS, MAX_VARS));
    }
    let list = list.trim();
    if list.is_empty() {
        return Ok(Bitvector::zeros(vars));
    }
    let minterms = list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidMintermList(list.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Bitvector::from_minterms(vars, minterms)
}

/// A minterm identified by its representative number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Minterm {
    index: usize,
    vars: u8,
}

impl Minterm {
    pub fn new(index: usize, vars: usize) -> Result<Self> {
        if vars > MAX_VARS {
            return Err(Error::VariableCount(vars, 0, MAX_VARS));
        }
        if index >= 1 << vars {
            return Err(Error::MintermOutOfRange { index, vars });
        }
        Ok(Minterm {
            index,
            vars: vars as u8,
        })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Representative bit `b_{g,j}` for `1 <= j <= n`.
    pub fn bit(&self, j: usize) -> u8 {
        debug_assert!(j >= 1 && j <= self.vars as usize);
        ((self.index >> (self.vars as usize - j)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (1..=self.vars as usize).map(|j| self.bit(j)).collect()
    }
}

/// `(b_{g,1}, ..., b_{g,n})`, most significant digit first.
pub fn representative_bits(g: usize, vars: usize) -> Result<Vec<u8>> {
    Ok(Minterm::new(g, vars)?.bits())
}

/// A multi-output, incompletely specified Boolean function with one don't-care
/// set shared by every output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthSpec {
    vars: usize,
    outputs: Vec<Bitvector>,
    dont_care: Bitvector,
}

impl TruthSpec {
    pub fn new(vars: usize, outputs: Vec<Bitvector>, dont_care: Bitvector) -> Result<Self> {
        if !(MIN_SPEC_VARS..=MAX_VARS).contains(&vars) {
            return Err(Error::VariableCount(vars, MIN_SPEC_VARS, MAX_VARS));
        }
        if outputs.is_empty() {
            return Err(Error::NoOutputs);
        }
        for v in outputs.iter().chain(std::iter::once(&dont_care)) {
            if v.vars() != vars {
                return Err(Error::WidthMismatch(v.vars(), vars));
            }
        }
        for (q, f) in outputs.iter().enumerate() {
            let overlap = *f & dont_care;
            if let Some(g) = overlap.minterms().next() {
                return Err(Error::OverlappingDontCare { output: q, minterm: g });
            }
        }
        Ok(TruthSpec {
            vars,
            outputs,
            dont_care,
        })
    }

    /// Completely specified function(s).
    pub fn complete(vars: usize, outputs: Vec<Bitvector>) -> Result<Self> {
        Self::new(vars, outputs, Bitvector::zeros(vars))
    }

    /// Convenience constructor from hex strings.
    pub fn from_hex(vars: usize, outputs: &[&str], dont_care: Option<&str>) -> Result<Self> {
        let outs = outputs
            .iter()
            .map(|h| parse_function(h, vars))
            .collect::<Result<Vec<_>>>()?;
        let dc = match dont_care {
            Some(h) => parse_function(h, vars)?,
            None => Bitvector::zeros(vars),
        };
        Self::new(vars, outs, dc)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn outputs(&self) -> &[Bitvector] {
        &self.outputs
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn dont_care(&self) -> Bitvector {
        self.dont_care
    }

    pub fn care(&self) -> Bitvector {
        !self.dont_care
    }

    pub fn is_care(&self, g: usize) -> bool {
        !self.dont_care.get(g)
    }

    /// Same outputs with a different shared don't-care set. On-set bits
    /// falling inside the new don't-care set are cleared.
    pub fn with_dont_care(&self, dont_care: Bitvector) -> Result<Self> {
        let outputs = self.outputs.iter().map(|f| *f & !dont_care).collect();
        Self::new(self.vars, outputs, dont_care)
    }

    /// Splits the minterms into `(care, dont_care)` lists.
    pub fn minterms_of(&self) -> (Vec<Minterm>, Vec<Minterm>) {
        let (mut care, mut dc) = (Vec::new(), Vec::new());
        for g in 0..1usize << self.vars {
            let m = Minterm {
                index: g,
                vars: self.vars as u8,
            };
            if self.dont_care.get(g) {
                dc.push(m);
            } else {
                care.push(m);
            }
        }
        (care, dc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: Bitvector) -> Vec<usize> {
        v.minterms().collect()
    }

    #[test]
    fn parse_hex_examples() {
        assert_eq!(set(parse_hex("6b", 3).unwrap()), vec![0, 1, 3, 5, 6]);
        assert!(parse_hex("00", 3).unwrap().is_empty());
        assert_eq!(
            set(parse_hex("a7f1", 4).unwrap()),
            vec![0, 4, 5, 6, 7, 8, 9, 10, 13, 15]
        );
    }

    #[test]
    fn parse_hex_pads_and_rejects() {
        assert_eq!(parse_hex("b", 3).unwrap(), parse_hex("0b", 3).unwrap());
        assert!(matches!(parse_hex("123", 3), Err(Error::HexTooLong { .. })));
        assert!(matches!(
            parse_hex("6g", 3),
            Err(Error::InvalidHexDigit { digit: 'g', .. })
        ));
        assert!(matches!(parse_hex("", 3), Err(Error::EmptyFunction)));
        assert!(parse_hex("1", 1).is_err());
        assert!(parse_hex("AB", 3).is_ok());
    }

    #[test]
    fn minterm_list_form() {
        assert_eq!(
            parse_function("sum:0,1,3,5,6", 3).unwrap(),
            parse_hex("6b", 3).unwrap()
        );
        assert!(parse_function("sum:8", 3).is_err());
        assert!(parse_function("sum:1,x", 3).is_err());
        assert!(parse_function("sum:", 3).unwrap().is_empty());
    }

    #[test]
    fn minterms_of_examples() {
        let spec = TruthSpec::from_hex(3, &["00"], Some("03")).unwrap();
        let (care, dc) = spec.minterms_of();
        assert_eq!(dc.iter().map(Minterm::index).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(
            care.iter().map(Minterm::index).collect::<Vec<_>>(),
            (2..8).collect::<Vec<_>>()
        );

        let spec = TruthSpec::from_hex(2, &["6"], None).unwrap();
        let (care, dc) = spec.minterms_of();
        assert_eq!(care.len(), 4);
        assert!(dc.is_empty());

        let spec = TruthSpec::from_hex(3, &["00"], Some("ff")).unwrap();
        assert!(spec.minterms_of().0.is_empty());
    }

    #[test]
    fn representative_bits_examples() {
        assert_eq!(representative_bits(2, 3).unwrap(), vec![0, 1, 0]);
        assert_eq!(representative_bits(0, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(representative_bits(10, 4).unwrap(), vec![1, 0, 1, 0]);
        assert!(representative_bits(8, 3).is_err());
    }

    #[test]
    fn overlapping_dont_care_rejected() {
        let err = TruthSpec::from_hex(3, &["6b"], Some("01")).unwrap_err();
        assert!(matches!(err, Error::OverlappingDontCare { output: 0, minterm: 0 }));
    }

    #[test]
    fn variable_projections() {
        assert_eq!(Bitvector::variable(3, 1).unwrap().bits(), 0xf0);
        assert_eq!(Bitvector::variable(3, 2).unwrap().bits(), 0xcc);
        assert_eq!(Bitvector::variable(3, 3).unwrap().bits(), 0xaa);
        assert!(Bitvector::variable(3, 4).is_err());
    }

    #[test]
    fn hex_round_trip_exhaustive_two_vars() {
        for bits in 0..16u64 {
            let v = Bitvector::new(2, bits).unwrap();
            assert_eq!(parse_hex(&v.to_hex(), 2).unwrap(), v);
        }
    }

    #[test]
    fn display_is_msb_first() {
        assert_eq!(parse_hex("6b", 3).unwrap().to_string(), "01101011");
    }
}
