//! Admissible binary codes attached to groups of positive involutions.
//!
//! A group of commuting positive involutions without `-1` projects, by
//! forgetting signs, onto a binary linear code `C ⊆ F_2^n` whose nonzero
//! words all describe positive involutions.  Conversely every such
//! *admissible* code lifts (with all signs `+1`) back to a group.  This
//! module handles the codes themselves: echelon bases, admissibility,
//! support partitions (the invariant `π_0`), weight statistics, and the
//! dimension of minimal admissible Clifford modules which dictates the
//! dimension `ℓ(r,s)` of maximal admissible codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cliff::{involution_type, positive_involution, InvolutionType, Signature, Support};

/// Reduces a list of supports to a reduced echelon basis over `GF(2)`.
///
/// Columns are ordered `z_1 < z_2 < ...`, i.e. lower bits are more
/// significant for pivot selection.  The result has pairwise distinct pivots
/// (the lowest set bit of each row), each pivot occurring in no other row,
/// and rows sorted by ascending pivot.
pub(crate) fn rref(words: impl IntoIterator<Item = Support>) -> Vec<Support> {
    let mut basis: Vec<Support> = Vec::new();
    for word in words {
        let mut w = word;
        for &b in &basis {
            if w >> b.trailing_zeros() & 1 == 1 {
                w ^= b;
            }
        }
        if w != 0 {
            let pivot = w.trailing_zeros();
            for b in &mut basis {
                if *b >> pivot & 1 == 1 {
                    *b ^= w;
                }
            }
            basis.push(w);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

/// Error building or parsing a [`Code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    /// A word uses coordinates outside the signature.
    #[error("word #{0} uses coordinates outside the signature")]
    OutOfSignature(usize),
    /// The given words are linearly dependent but were required independent.
    #[error("word #{0} is linearly dependent on the previous words")]
    Dependent(usize),
    /// Text input could not be parsed.
    #[error("invalid code text: {0}")]
    BadText(String),
}

/// Binary linear code in `F_2^n` with a canonical echelon basis.
///
/// The basis is stored in reduced echelon form with respect to the column
/// order `z_1 < z_2 < ...` (see [`rref`]), so two equal subspaces always
/// carry identical bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Code {
    signature: Signature,
    basis: Vec<Support>,
}

impl Code {
    /// The zero-dimensional code.
    pub fn empty(signature: Signature) -> Self {
        Code { signature, basis: Vec::new() }
    }

    /// Builds a code from independent words, rejecting dependent input.
    pub fn try_from_basis(signature: Signature, words: &[Support]) -> Result<Self, CodeError> {
        for (i, &w) in words.iter().enumerate() {
            if !signature.contains(w) {
                return Err(CodeError::OutOfSignature(i));
            }
        }
        let basis = rref(words.iter().copied());
        if basis.len() != words.len() {
            let mut seen: Vec<Support> = Vec::new();
            for (i, &w) in words.iter().enumerate() {
                if rref(seen.iter().copied().chain([w])).len() == seen.len() {
                    return Err(CodeError::Dependent(i));
                }
                seen.push(w);
            }
            unreachable!("rank loss without a dependent word");
        }
        Ok(Code { signature, basis })
    }

    /// Builds the code spanned by arbitrary (possibly dependent) words.
    pub fn from_span(
        signature: Signature,
        words: impl IntoIterator<Item = Support>,
    ) -> Result<Self, CodeError> {
        let words: Vec<Support> = words.into_iter().collect();
        for (i, &w) in words.iter().enumerate() {
            if !signature.contains(w) {
                return Err(CodeError::OutOfSignature(i));
            }
        }
        Ok(Code { signature, basis: rref(words) })
    }

    /// Signature of the ambient coordinate space.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Dimension of the code.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Echelon basis, rows sorted by ascending pivot.
    pub fn basis(&self) -> &[Support] {
        &self.basis
    }

    /// Union of all codeword supports.
    pub fn support(&self) -> Support {
        self.basis.iter().fold(0, |acc, &b| acc | b)
    }

    /// Whether the word lies in the code.
    pub fn contains(&self, word: Support) -> bool {
        let mut w = word;
        for &b in &self.basis {
            if w >> b.trailing_zeros() & 1 == 1 {
                w ^= b;
            }
        }
        w == 0
    }

    /// All `2^dim` codewords; entry `i` is the sum of the basis rows selected
    /// by the bits of `i`, so the order is deterministic.
    pub fn codewords(&self) -> Vec<Support> {
        let mut words = Vec::with_capacity(1 << self.basis.len());
        words.push(0);
        for &b in &self.basis {
            for i in 0..words.len() {
                words.push(words[i] ^ b);
            }
        }
        words
    }

    /// Renders the text form: a `sig r s` header, then one support per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("sig {} {}\n", self.signature.r, self.signature.s);
        for &row in &self.basis {
            let mut rest = row;
            let mut first = true;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                if !first {
                    out.push('.');
                }
                let _ = write!(out, "z{}", i + 1);
                first = false;
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text form produced by [`Code::to_text`].
    ///
    /// Lines after the `sig r s` header each hold one support written as
    /// `.`-joined factors `z<i>`.  The words are reduced to an echelon basis;
    /// dependent input words are rejected.
    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| CodeError::BadText("empty input".into()))?;
        let mut parts = header.split_whitespace();
        let (Some("sig"), Some(r), Some(s), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(CodeError::BadText(format!("bad header {header:?}, expected `sig r s`")));
        };
        let r: u32 = r.parse().map_err(|_| CodeError::BadText(format!("bad r in {header:?}")))?;
        let s: u32 = s.parse().map_err(|_| CodeError::BadText(format!("bad s in {header:?}")))?;
        let signature =
            Signature::new(r, s).map_err(|e| CodeError::BadText(e.to_string()))?;
        let mut words = Vec::new();
        for line in lines {
            let monomial: crate::cliff::Monomial =
                line.parse().map_err(|e| CodeError::BadText(format!("line {line:?}: {e}")))?;
            if monomial.sign() != 1 || monomial.support() == 0 {
                return Err(CodeError::BadText(format!(
                    "line {line:?}: expected an unsigned nonempty support"
                )));
            }
            words.push(monomial.support());
        }
        Code::try_from_basis(signature, &words)
    }
}

/// Dimensions of minimal admissible modules of `Cl(R^{r,s})` for
/// `0 <= r, s <= 8`, indexed as `DIM_TABLE[s][r]`.
///
/// Outside this window the dimensions follow the eightfold periodicity
/// `dim V^{r+8,s} = 16 dim V^{r,s}` and `dim V^{r,s+8} = 16 dim V^{r,s}`.
const DIM_TABLE: [[u64; 9]; 9] = [
    [1, 2, 4, 4, 8, 8, 8, 8, 16],
    [2, 4, 8, 8, 16, 16, 16, 16, 32],
    [4, 4, 8, 8, 16, 16, 32, 32, 64],
    [8, 8, 8, 8, 16, 32, 64, 64, 128],
    [8, 8, 8, 8, 16, 32, 64, 64, 128],
    [16, 16, 16, 16, 32, 64, 128, 128, 256],
    [16, 16, 32, 32, 64, 64, 128, 128, 256],
    [16, 32, 64, 64, 128, 128, 128, 128, 256],
    [16, 32, 64, 64, 128, 128, 128, 128, 256],
];

/// Dimension of a minimal admissible module of `Cl(R^{r,s})`.
///
/// Values for `0 <= r, s <= 8` are tabulated; larger parameters reduce by
/// the periodicity `dim V^{r+8,s} = 16 dim V^{r,s}` (and likewise in `s`).
pub fn min_module_dim(sig: Signature) -> u64 {
    let mut r = sig.r as u64;
    let mut s = sig.s as u64;
    let mut factor = 1u64;
    while r > 8 {
        r -= 8;
        factor *= 16;
    }
    while s > 8 {
        s -= 8;
        factor *= 16;
    }
    factor * DIM_TABLE[s as usize][r as usize]
}

/// Dimension `ℓ(r,s)` of maximal admissible codes: the `2`-logarithm of
/// `2^{r+s} / dim V^{r,s}`.
///
/// # Panics
///
/// Panics if the quotient is not a power of two, which would contradict the
/// tabulated module dimensions.
pub fn ell(sig: Signature) -> u32 {
    let dim = min_module_dim(sig);
    let total = 1u64 << sig.n();
    assert!(
        total % dim == 0 && (total / dim).is_power_of_two(),
        "2^{} / {dim} is not a power of two",
        sig.n()
    );
    (total / dim).trailing_zeros()
}

/// Whether the word indexes a positive involution, i.e. may appear in an
/// admissible code.
pub fn codeword_admissible(word: Support, sig: Signature) -> bool {
    positive_involution(word, sig)
}

/// Whether every nonzero codeword of the code is admissible.
pub fn is_admissible_code(code: &Code) -> bool {
    let sig = code.signature();
    code.codewords().into_iter().skip(1).all(|w| codeword_admissible(w, sig))
}

/// Partition of the code support into blocks that no support-minimal
/// codeword straddles.
///
/// Blocks are disjoint supports sorted by their lowest coordinate; their
/// union is the code support.  The number of blocks is the invariant `π_0`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SupportPartition {
    /// Disjoint blocks in ascending order of lowest coordinate.
    pub blocks: Vec<Support>,
}

/// Number of connected components `π_0` of the code support, together with
/// the component partition.
///
/// Two coordinates are connected when some support-minimal nonzero codeword
/// contains both; `π_0` counts the classes of the transitive closure.  Every
/// coordinate of the code support lies in a support-minimal codeword, so the
/// blocks cover the support.
pub fn pi0(code: &Code) -> (usize, SupportPartition) {
    let words: Vec<Support> = code.codewords().into_iter().filter(|&w| w != 0).collect();
    let minimal: Vec<Support> = words
        .iter()
        .copied()
        .filter(|&w| !words.iter().any(|&o| o != w && o & w == o))
        .collect();

    // Union-find over the coordinates of the code support.
    let support = code.support();
    let mut parent: Vec<u32> = (0..32).collect();
    fn find(parent: &mut Vec<u32>, i: u32) -> u32 {
        let mut i = i;
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    for &w in &minimal {
        let first = w.trailing_zeros();
        let mut rest = w & (w - 1);
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            let (a, b) = (find(&mut parent, first), find(&mut parent, j));
            if a != b {
                parent[a as usize] = b;
            }
        }
    }
    let mut blocks: BTreeMap<u32, Support> = BTreeMap::new();
    let mut rest = support;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        let root = find(&mut parent, i);
        *blocks.entry(root).or_insert(0) |= 1 << i;
    }
    let mut blocks: Vec<Support> = blocks.into_values().collect();
    blocks.sort_by_key(|b| b.trailing_zeros());
    (blocks.len(), SupportPartition { blocks })
}

/// Summary statistics of a code used in classification reports.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeStats {
    /// Number of coordinates in the code support.
    pub supp_size: u32,
    /// Number of positive coordinates in the support.
    pub supp_pos: u32,
    /// Number of negative coordinates in the support.
    pub supp_neg: u32,
    /// Whether some codeword has type `T2` (weight `≡ 3 (mod 4)`).
    pub is_t2_type: bool,
    /// Number of codewords per `(positive weight, negative weight)` pair.
    pub block_weight_enumerators: BTreeMap<(u32, u32), u64>,
}

/// Computes the report statistics of a code.
pub fn code_stats(code: &Code) -> CodeStats {
    let sig = code.signature();
    let support = code.support();
    let mut is_t2_type = false;
    let mut enumerators: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for w in code.codewords() {
        let pos = (w & sig.positive_mask()).count_ones();
        let neg = (w & sig.negative_mask()).count_ones();
        *enumerators.entry((pos, neg)).or_insert(0) += 1;
        if w != 0 && involution_type(w) == InvolutionType::T2 {
            is_t2_type = true;
        }
    }
    CodeStats {
        supp_size: support.count_ones(),
        supp_pos: (support & sig.positive_mask()).count_ones(),
        supp_neg: (support & sig.negative_mask()).count_ones(),
        is_t2_type,
        block_weight_enumerators: enumerators,
    }
}
