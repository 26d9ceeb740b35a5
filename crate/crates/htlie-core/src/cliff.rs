//! Arithmetic in the signed monomial group `G(B_{r,s})`.
//!
//! Fix an orthonormal basis `z_1, ..., z_{r+s}` of `R^{r,s}` with
//! `<z_i, z_i> = +1` for `i <= r` and `-1` for `i > r`.  Inside the Clifford
//! algebra `Cl(R^{r,s})` these generators satisfy
//!
//! ```text
//! z_i z_j = -z_j z_i   (i != j),      z_i^2 = -<z_i, z_i> 1.
//! ```
//!
//! The products `± z_{i_1} ... z_{i_k}` with `i_1 < ... < i_k` form a finite
//! group of order `2^{r+s+1}`, the signed monomial group.  Every element is
//! a [`Monomial`]: a sign together with a subset of generator indices encoded
//! as a bitmask ([`Support`], bit `i-1` standing for `z_i`).
//!
//! All group-theoretic predicates used by the classification — squares,
//! commutation, positivity of involutions — reduce to parity counts on
//! supports and are implemented here with closed formulas, cross-checked in
//! the test suite against naive rewriting.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Bitmask encoding of a subset of the generators `z_1, ..., z_n`.
///
/// Bit `i - 1` is set exactly when `z_i` occurs.  Supports are compared as
/// plain integers in several deterministic orderings; the empty support `0`
/// is the identity monomial.
pub type Support = u32;

/// Largest number of Clifford generators supported by the bitmask encoding.
pub const MAX_COORDS: u32 = 17;

/// Signature `(r, s)` of the scalar product on the generator space.
///
/// The first `r` generators square to `-1` in the Clifford algebra (they have
/// `<z_i, z_i> = +1`), the remaining `s` square to `+1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Signature {
    /// Number of positive directions.
    pub r: u32,
    /// Number of negative directions.
    pub s: u32,
}

/// Error building a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    /// The total number of generators exceeds [`MAX_COORDS`].
    #[error("signature ({r},{s}) has {} generators, more than the supported {MAX_COORDS}", r + s)]
    TooManyCoords {
        /// Requested positive directions.
        r: u32,
        /// Requested negative directions.
        s: u32,
    },
}

impl Signature {
    /// Builds a signature, rejecting more than [`MAX_COORDS`] generators.
    pub fn new(r: u32, s: u32) -> Result<Self, SignatureError> {
        if r + s > MAX_COORDS {
            return Err(SignatureError::TooManyCoords { r, s });
        }
        Ok(Signature { r, s })
    }

    /// Total number of generators `n = r + s`.
    pub fn n(self) -> u32 {
        self.r + self.s
    }

    /// Mask with one bit per generator.
    pub fn full_mask(self) -> Support {
        if self.n() == 0 {
            0
        } else {
            (1u32 << self.n()) - 1
        }
    }

    /// Mask of the positive generators `z_1, ..., z_r`.
    pub fn positive_mask(self) -> Support {
        if self.r == 0 {
            0
        } else {
            (1u32 << self.r) - 1
        }
    }

    /// Mask of the negative generators `z_{r+1}, ..., z_{r+s}`.
    pub fn negative_mask(self) -> Support {
        self.full_mask() & !self.positive_mask()
    }

    /// Whether the support only uses generators of this signature.
    pub fn contains(self, support: Support) -> bool {
        support & !self.full_mask() == 0
    }

    /// Scalar square `<z_i, z_i>` of the `i`-th generator (1-based).
    pub fn form(self, i: u32) -> i8 {
        debug_assert!(i >= 1 && i <= self.n());
        if i <= self.r {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.s)
    }
}

/// Signed monomial `± z_{i_1} ... z_{i_k}` with ascending indices.
///
/// The encoding is canonical: equal monomials compare equal structurally.
/// The identity is `Monomial::one()`, the central element `-1` is
/// `Monomial::minus_one()`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    sign: i8,
    support: Support,
}

impl Monomial {
    /// Builds a monomial from an explicit sign and support.
    ///
    /// # Panics
    ///
    /// Panics if `sign` is not `+1` or `-1`.
    pub fn new(sign: i8, support: Support) -> Self {
        assert!(sign == 1 || sign == -1, "monomial sign must be +1 or -1, got {sign}");
        Monomial { sign, support }
    }

    /// The monomial `+ z_{i_1} ... z_{i_k}` for the given support.
    pub fn positive(support: Support) -> Self {
        Monomial { sign: 1, support }
    }

    /// The identity element.
    pub fn one() -> Self {
        Monomial { sign: 1, support: 0 }
    }

    /// The central element `-1`.
    pub fn minus_one() -> Self {
        Monomial { sign: -1, support: 0 }
    }

    /// Sign of the monomial, `+1` or `-1`.
    pub fn sign(self) -> i8 {
        self.sign
    }

    /// Support bitmask of the monomial.
    pub fn support(self) -> Support {
        self.support
    }

    /// Number of generators in the monomial.
    pub fn weight(self) -> u32 {
        self.support.count_ones()
    }

    /// The monomial with the opposite sign.
    pub fn negated(self) -> Self {
        Monomial { sign: -self.sign, support: self.support }
    }

    /// Generator indices (1-based) in ascending order.
    pub fn indices(self) -> impl Iterator<Item = u32> {
        let mut rest = self.support;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                Some(i + 1)
            }
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.support == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for i in self.indices() {
            if !first {
                write!(f, ".")?;
            }
            write!(f, "z{i}")?;
            first = false;
        }
        Ok(())
    }
}

/// Error parsing a monomial from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseMonomialError {
    /// The string is empty.
    #[error("empty monomial string")]
    Empty,
    /// A factor is not of the form `z<index>`.
    #[error("invalid factor {0:?}: expected z<index>")]
    BadFactor(String),
    /// A generator index is outside `1..=17`.
    #[error("generator index {0} out of range 1..={MAX_COORDS}")]
    IndexOutOfRange(u32),
    /// Indices are not strictly ascending.
    #[error("generator indices must be strictly ascending (z{0} after z{1})")]
    NotAscending(u32, u32),
}

impl FromStr for Monomial {
    type Err = ParseMonomialError;

    /// Parses the textual form used throughout the crate: an optional leading
    /// `-`, then either `1` or `.`-separated factors `z<i>` with strictly
    /// ascending indices, e.g. `-z1.z2.z7`.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let input = input.trim();
        if input.is_empty() {
            return Err(ParseMonomialError::Empty);
        }
        let (sign, body) = match input.strip_prefix('-') {
            Some(rest) => (-1i8, rest.trim()),
            None => (1i8, input),
        };
        if body.is_empty() {
            return Err(ParseMonomialError::Empty);
        }
        if body == "1" {
            return Ok(Monomial { sign, support: 0 });
        }
        let mut support: Support = 0;
        let mut last = 0u32;
        for factor in body.split('.') {
            let factor = factor.trim();
            let digits = factor
                .strip_prefix('z')
                .ok_or_else(|| ParseMonomialError::BadFactor(factor.to_string()))?;
            let idx: u32 = digits
                .parse()
                .map_err(|_| ParseMonomialError::BadFactor(factor.to_string()))?;
            if idx < 1 || idx > MAX_COORDS {
                return Err(ParseMonomialError::IndexOutOfRange(idx));
            }
            if idx <= last {
                return Err(ParseMonomialError::NotAscending(idx, last));
            }
            support |= 1 << (idx - 1);
            last = idx;
        }
        Ok(Monomial { sign, support })
    }
}

/// Parity of the number of transpositions needed to merge the generators of
/// `b` into those of `a` (concatenated as `a` followed by `b`) so that all
/// indices are ascending.  Each generator `z_j` of `b` anticommutes past the
/// generators of `a` with index greater than `j`.
fn transposition_parity(a: Support, b: Support) -> u32 {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        count += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    count & 1
}

/// Product of two monomials in `G(B_{r,s})`.
///
/// The support of the product is the symmetric difference of the supports.
/// The sign collects the input signs, one factor `-1` per transposition used
/// to sort the concatenation, and the square `z_i^2 = -<z_i, z_i>` of every
/// generator occurring in both factors.
///
/// # Panics
///
/// Panics if either support uses generators outside the signature.
pub fn mul(a: Monomial, b: Monomial, sig: Signature) -> Monomial {
    assert!(
        sig.contains(a.support) && sig.contains(b.support),
        "monomial support does not fit signature {sig}"
    );
    let common = a.support & b.support;
    // z_i^2 = -1 exactly for the positive generators (i <= r).
    let neg_squares = (common & sig.positive_mask()).count_ones();
    let parity = transposition_parity(a.support, b.support) + neg_squares;
    let sign = a.sign * b.sign * if parity & 1 == 0 { 1 } else { -1 };
    Monomial { sign, support: a.support ^ b.support }
}

/// Sign of the square of the positive monomial with the given support.
///
/// For a monomial of weight `k` with `k_+` positive generators the square is
/// `(-1)^{k(k-1)/2 + k_+} 1`, independent of the sign of the monomial.
pub fn square_sign(support: Support, sig: Signature) -> i8 {
    assert!(sig.contains(support), "support does not fit signature {sig}");
    let k = support.count_ones();
    let k_pos = (support & sig.positive_mask()).count_ones();
    if (k * (k.wrapping_sub(1)) / 2 + k_pos) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Whether two monomials commute in the group.
///
/// Signs are central, so this only depends on the supports: `a` and `b`
/// commute exactly when `|a| |b| + |a ∩ b|` is even.
pub fn commutes(a: Monomial, b: Monomial) -> bool {
    let k = a.support.count_ones();
    let l = b.support.count_ones();
    let c = (a.support & b.support).count_ones();
    (k * l + c) & 1 == 0
}

/// Whether the positive monomial with this support is a positive involution,
/// i.e. contains an even number of negative generators and squares to `+1`.
pub fn positive_involution(support: Support, sig: Signature) -> bool {
    let neg = (support & sig.negative_mask()).count_ones();
    neg & 1 == 0 && square_sign(support, sig) == 1
}

/// Coarse type of an involution by weight modulo 4.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum InvolutionType {
    /// Weight `≡ 0 (mod 4)`; the fixed subspaces of `J` split evenly.
    T1,
    /// Weight `≡ 3 (mod 4)`; the monomial is the volume form of an odd part.
    T2,
    /// Weight `≡ 1, 2 (mod 4)`; never an involution in the definite case.
    Neither,
}

/// Type of the monomial with the given support: `T1` for weight `≡ 0 (mod 4)`,
/// `T2` for weight `≡ 3 (mod 4)`, [`InvolutionType::Neither`] otherwise.
pub fn involution_type(support: Support) -> InvolutionType {
    match support.count_ones() % 4 {
        0 => InvolutionType::T1,
        3 => InvolutionType::T2,
        _ => InvolutionType::Neither,
    }
}

/// Error raised by [`span_group`] when the generators do not satisfy the
/// preconditions of a group of commuting positive involutions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    /// A generator uses coordinates outside the signature.
    #[error("generator #{index} ({monomial}) does not fit signature")]
    OutOfSignature {
        /// Zero-based position in the generator list.
        index: usize,
        /// Offending generator.
        monomial: String,
    },
    /// A generator is not a positive involution.
    #[error("generator #{index} ({monomial}) is not a positive involution")]
    NotPositiveInvolution {
        /// Zero-based position in the generator list.
        index: usize,
        /// Offending generator.
        monomial: String,
    },
    /// Two generators anticommute.
    #[error("generators #{first} and #{second} do not commute")]
    NonCommuting {
        /// Zero-based position of the first generator.
        first: usize,
        /// Zero-based position of the second generator.
        second: usize,
    },
    /// A generator lies in the span of the previous ones, up to sign.
    #[error("generator #{index} is dependent on the previous generators")]
    Dependent {
        /// Zero-based position of the dependent generator.
        index: usize,
    },
}

/// Finite subgroup of `G(B_{r,s})` not containing `-1`.
///
/// Such a group contains at most one element per support, so it is stored as
/// a map from supports to signs.  Deterministic iteration follows ascending
/// support order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedGroup {
    signature: Signature,
    elements: std::collections::BTreeMap<Support, i8>,
}

impl SignedGroup {
    /// Signature the group lives in.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Sign of the unique element with the given support, if present.
    pub fn sign_of(&self, support: Support) -> Option<i8> {
        self.elements.get(&support).copied()
    }

    /// The element with the given support, if present.
    pub fn get(&self, support: Support) -> Option<Monomial> {
        self.sign_of(support).map(|sign| Monomial { sign, support })
    }

    /// Whether the monomial belongs to the group.
    pub fn contains(&self, m: Monomial) -> bool {
        self.sign_of(m.support) == Some(m.sign)
    }

    /// Elements in ascending support order.
    pub fn iter(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.elements.iter().map(|(&support, &sign)| Monomial { sign, support })
    }
}

/// Spans the abelian group generated by commuting positive involutions.
///
/// Checks that every generator fits the signature and is a positive
/// involution, that the generators pairwise commute, and that no generator is
/// a product of the previous ones (which would either be redundant or force
/// `-1` into the group).  The resulting group has order `2^k` for `k`
/// independent generators and does not contain `-1`.
pub fn span_group(gens: &[Monomial], sig: Signature) -> Result<SignedGroup, SpanError> {
    for (index, g) in gens.iter().enumerate() {
        if !sig.contains(g.support) {
            return Err(SpanError::OutOfSignature { index, monomial: g.to_string() });
        }
        if g.sign != 1 || !positive_involution(g.support, sig) {
            return Err(SpanError::NotPositiveInvolution { index, monomial: g.to_string() });
        }
    }
    for (i, a) in gens.iter().enumerate() {
        for (j, b) in gens.iter().enumerate().skip(i + 1) {
            if !commutes(*a, *b) {
                return Err(SpanError::NonCommuting { first: i, second: j });
            }
        }
    }
    let mut elements = std::collections::BTreeMap::new();
    elements.insert(0u32, 1i8);
    for (index, g) in gens.iter().enumerate() {
        if elements.contains_key(&g.support) {
            return Err(SpanError::Dependent { index });
        }
        let current: Vec<Monomial> =
            elements.iter().map(|(&support, &sign)| Monomial { sign, support }).collect();
        for m in current {
            let p = mul(m, *g, sig);
            elements.insert(p.support, p.sign);
        }
    }
    Ok(SignedGroup { signature: sig, elements })
}
