//! Two-step nilpotent Lie algebras carried by induced Clifford modules.
//!
//! A maximal admissible code together with its induced module determines a
//! metric two-step nilpotent Lie algebra `V ⊕ Z`: the centre `Z` is spanned
//! by the generators `z_1, …, z_n`, the complement `V` by the module basis
//! `v_0, …, v_{d-1}`, and the bracket is the transpose of the module action,
//!
//! ```text
//! ⟨z_l, [v_α, v_β]⟩ = ⟨J_{z_l} v_α, v_β⟩ .
//! ```
//!
//! Because every `J_{z_l}` maps basis vectors to signed basis vectors, the
//! structure constants `c^l_{αβ}` all lie in `{-1, 0, 1}`, so the basis spans
//! an integral structure: the lattice `Z{v_α} ⊕ ½Z{z_l}` is closed under the
//! group product and inverses.
//!
//! This module provides
//!
//! * [`HTypeAlgebra`] / [`structure_constants`] — the integer bracket tensor
//!   with its invariants enforced ([`verify_tensor`], [`duality_roundtrip`]);
//! * [`lattice_closure_check`] — closure of the half-integer lattice under
//!   the group operations;
//! * [`CenterMap`], [`build_isomorphism`], [`find_isomorphism`] and
//!   [`verify_isomorphism`] — constructing and certifying basis-to-basis
//!   isomorphisms of the integral structures covering a signed permutation
//!   of the generators;
//! * [`obstruction_anticommuting`] — the anticommuting-codeword witness that
//!   rules out such isomorphisms between inequivalent codes;
//! * [`ExceptionalCase`] / [`exceptional_frame_check`] — the hand-built
//!   eigenspace frames certifying the three code pairs that the
//!   anticommutation obstruction cannot separate.

use serde_json::json;
use thiserror::Error;

use crate::classify::{paper_rows, ColPerm};
use crate::cliff::{commutes, mul, span_group, Monomial, Signature, Support};
use crate::codes::Code;
use crate::repsn::{
    build_module, build_module_from_gens, eigenspace_dims, InducedModule, ModuleError,
};

/// Violation of an [`HTypeAlgebra`] invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// An entry lies outside `{-1, 0, 1}`.
    #[error("entry c^{l}_({alpha},{beta}) = {value} is outside {{-1, 0, 1}}")]
    EntryOutOfRange {
        /// Centre index (1-based).
        l: u32,
        /// First module index.
        alpha: usize,
        /// Second module index.
        beta: usize,
        /// Offending value.
        value: i8,
    },
    /// The tensor is not antisymmetric in the module indices.
    #[error("tensor not antisymmetric at l = {l}, ({alpha},{beta})")]
    NotAntisymmetric {
        /// Centre index (1-based).
        l: u32,
        /// First module index.
        alpha: usize,
        /// Second module index.
        beta: usize,
    },
    /// A generator row is not a signed permutation row.
    #[error("row (l = {l}, alpha = {alpha}) has {count} nonzero entries, want exactly 1")]
    RowNotMonomial {
        /// Centre index (1-based).
        l: u32,
        /// Module index.
        alpha: usize,
        /// Number of nonzero entries found.
        count: usize,
    },
}

/// Integer structure-constant tensor of the Lie algebra `V ⊕ Z`.
///
/// Entry `c(l, α, β)` is the `z_l` coordinate of `[v_α, v_β]`.  The invariants
/// ([`verify_tensor`]): every entry lies in `{-1, 0, 1}`, the tensor is
/// antisymmetric in `(α, β)`, and for fixed `(l, α)` exactly one `β` entry is
/// nonzero (each `J_{z_l}` is a signed permutation of the basis).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HTypeAlgebra {
    signature: Signature,
    dim: usize,
    tensor: Vec<i8>,
}

impl HTypeAlgebra {
    fn index(&self, l: u32, alpha: usize, beta: usize) -> usize {
        assert!(
            (1..=self.signature.n()).contains(&l) && alpha < self.dim && beta < self.dim,
            "tensor index (l = {l}, alpha = {alpha}, beta = {beta}) out of range"
        );
        ((l as usize - 1) * self.dim + alpha) * self.dim + beta
    }

    /// Signature of the generator space.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Dimension of the module part `V`.
    pub fn module_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the centre `Z`.
    pub fn center_dim(&self) -> usize {
        self.signature.n() as usize
    }

    /// Structure constant `⟨z_l, [v_α, v_β]⟩ / ⟨z_l, z_l⟩` (`l` 1-based).
    pub fn c(&self, l: u32, alpha: usize, beta: usize) -> i8 {
        self.tensor[self.index(l, alpha, beta)]
    }

    /// Full bracket `[v_α, v_β]` as centre coordinates `(c^1, …, c^n)`.
    pub fn bracket(&self, alpha: usize, beta: usize) -> Vec<i8> {
        (1..=self.signature.n()).map(|l| self.c(l, alpha, beta)).collect()
    }

    /// Copy with one tensor entry replaced.
    ///
    /// Test instrument: the result usually violates the tensor invariants,
    /// which [`verify_tensor`] must then report.
    pub fn with_entry(&self, l: u32, alpha: usize, beta: usize, value: i8) -> Self {
        let mut out = self.clone();
        let idx = out.index(l, alpha, beta);
        out.tensor[idx] = value;
        out
    }

    /// JSON value listing the nonzero brackets above the diagonal.
    ///
    /// The shape is `{dim, center_dim, brackets: [{l, alpha, beta, c}, …]}`
    /// with entries ordered by ascending `(l, alpha, beta)`, so equal tensors
    /// always serialize to identical bytes.
    pub fn dump_json(&self) -> serde_json::Value {
        let mut brackets = Vec::new();
        for l in 1..=self.signature.n() {
            for alpha in 0..self.dim {
                for beta in alpha + 1..self.dim {
                    let c = self.c(l, alpha, beta);
                    if c != 0 {
                        brackets.push(json!({ "l": l, "alpha": alpha, "beta": beta, "c": c }));
                    }
                }
            }
        }
        json!({
            "dim": self.dim,
            "center_dim": self.center_dim(),
            "brackets": brackets,
        })
    }
}

/// Computes the integer structure constants of a verified module.
///
/// `c^l_{αβ} = ⟨z_l, z_l⟩ ⟨J_{z_l} v_α, v_β⟩`, which is `sign · metric(β)`
/// scaled by the form when `J_{z_l} v_α = sign · v_β`, and `0` otherwise.
/// The result is validated with [`verify_tensor`]; a module whose metric or
/// action data has been tampered with produces a hard error instead of a
/// silently wrong tensor.
pub fn structure_constants(m: &InducedModule) -> Result<HTypeAlgebra, AlgebraError> {
    let sig = m.signature();
    let dim = m.dim();
    let n = sig.n();
    let mut tensor = vec![0i8; n as usize * dim * dim];
    for l in 1..=n {
        let map = m.j_map(l);
        let base = (l as usize - 1) * dim * dim;
        for (alpha, &(beta, sign)) in map.iter().enumerate() {
            tensor[base + alpha * dim + beta] = sig.form(l) * sign * m.metric()[beta];
        }
    }
    let alg = HTypeAlgebra { signature: sig, dim, tensor };
    verify_tensor(&alg)?;
    Ok(alg)
}

/// Checks the three tensor invariants of an [`HTypeAlgebra`].
///
/// Entries lie in `{-1, 0, 1}`; the tensor is antisymmetric in the module
/// indices; each `(l, α)` row has exactly one nonzero entry.
pub fn verify_tensor(alg: &HTypeAlgebra) -> Result<(), AlgebraError> {
    let n = alg.signature.n();
    for l in 1..=n {
        for alpha in 0..alg.dim {
            let mut count = 0;
            for beta in 0..alg.dim {
                let value = alg.c(l, alpha, beta);
                if !(-1..=1).contains(&value) {
                    return Err(AlgebraError::EntryOutOfRange { l, alpha, beta, value });
                }
                if value != 0 {
                    count += 1;
                }
                if alpha <= beta && value != -alg.c(l, beta, alpha) {
                    return Err(AlgebraError::NotAntisymmetric { l, alpha, beta });
                }
            }
            if count != 1 {
                return Err(AlgebraError::RowNotMonomial { l, alpha, count });
            }
        }
    }
    Ok(())
}

/// Whether the tensor reproduces the module action it came from.
///
/// Expanding `J_{z_l} v_α` in the orthogonal basis gives
/// `J_{z_l} v_α = Σ_β ⟨z_l, z_l⟩ ⟨v_β, v_β⟩ c^l_{αβ} v_β`; the round trip
/// holds iff that expansion matches the stored action maps entry for entry.
pub fn duality_roundtrip(alg: &HTypeAlgebra, m: &InducedModule) -> bool {
    if alg.signature() != m.signature() || alg.module_dim() != m.dim() {
        return false;
    }
    let sig = m.signature();
    for l in 1..=sig.n() {
        for alpha in 0..alg.dim {
            let mut recovered = None;
            for beta in 0..alg.dim {
                let c = alg.c(l, alpha, beta);
                if c != 0 {
                    if recovered.is_some() {
                        return false;
                    }
                    recovered = Some((beta, sig.form(l) * c * m.metric()[beta]));
                }
            }
            if recovered != Some(m.j_map(l)[alpha]) {
                return false;
            }
        }
    }
    true
}

/// Whether `Z{v_α} ⊕ ½Z{z_l}` is closed under the group product and inverses.
///
/// Points multiply by `(u_1, ζ_1)(u_2, ζ_2) = (u_1 + u_2, ζ_1 + ζ_2 + ½[u_1, u_2])`
/// and invert by `(u, ζ)^{-1} = (-u, -ζ + ½[u, u])`, so closure reduces to the
/// centre increment `½[u_1, u_2]` staying half-integral on a generating set.
/// The bookkeeping runs in doubled units where the lattice condition is
/// "every coordinate is even"; an integral tensor therefore always closes —
/// in particular a tensor entry mutated to `±2` still passes, because `½·2`
/// is still integral.  Non-integral brackets are the only way to escape.
pub fn lattice_closure_check(alg: &HTypeAlgebra) -> bool {
    closed_in_doubled_units(alg.signature.n(), alg.dim, &|l, alpha, beta| {
        2 * i64::from(alg.c(l, alpha, beta))
    })
}

/// Closure bookkeeping over centre increments given in doubled units
/// (`doubled(l, α, β) = 2 c^l_{αβ}`).  Exposed separately so the failing
/// branch is reachable: an odd doubled entry means a bracket coordinate of
/// `½·odd`, which leaves the half-integer lattice.
fn closed_in_doubled_units(
    n: u32,
    dim: usize,
    doubled: &dyn Fn(u32, usize, usize) -> i64,
) -> bool {
    for l in 1..=n {
        for alpha in 0..dim {
            // Products (e_α, 0)·(e_β, 0) gain ½[e_α, e_β]; the diagonal pair
            // β = α is the increment appearing in the inverse of (e_α, 0).
            for beta in 0..dim {
                if doubled(l, alpha, beta) % 2 != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Failure to build or certify an isomorphism of integral structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    /// The two codes live in different signatures.
    #[error("signature mismatch: ({0}, {1}) vs ({2}, {3})")]
    SignatureMismatch(u32, u32, u32, u32),
    /// The centre map does not preserve the positive/negative blocks.
    #[error("centre map does not preserve the generator blocks")]
    NotBlockPreserving,
    /// A centre map sign is not `±1`.
    #[error("centre map sign at coordinate {0} is not ±1")]
    BadSign(u32),
    /// The centre map has the wrong number of coordinates.
    #[error("centre map acts on {got} coordinates, signature has {want}")]
    WrongLength {
        /// Number of coordinates the map acts on.
        got: usize,
        /// Number required by the signature.
        want: usize,
    },
    /// The permutation does not map the first code onto the second.
    #[error("centre map does not carry the first code onto the second: word {0}")]
    CodeNotMapped(String),
    /// One of the two modules could not be built.
    #[error(transparent)]
    Module(#[from] ModuleError),
    /// One of the two tensors violates its invariants.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// The module map is not a signed bijection of the bases.
    #[error("module map is not a signed permutation of the basis")]
    NotBijective,
    /// The bracket relation `[A u, A u'] = C [u, u']` failed.
    #[error("bracket intertwining fails at module pair ({alpha}, {beta})")]
    NotIntertwining {
        /// First module index.
        alpha: usize,
        /// Second module index.
        beta: usize,
    },
}

/// Signed permutation of the generators `z_1, …, z_n` preserving the blocks.
///
/// Coordinate `i` (1-based) maps to `sign(i) · z_{perm(i)}`; positive
/// generators go to positive generators and negative to negative, so the map
/// is an isometry of the generator space.  It extends multiplicatively to
/// monomials, where reordering the factors contributes Clifford signs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CenterMap {
    signature: Signature,
    perm: ColPerm,
    signs: Vec<i8>,
}

impl CenterMap {
    /// Builds a centre map, validating blocks and signs.
    pub fn new(sig: Signature, perm: ColPerm, signs: Vec<i8>) -> Result<Self, IsoError> {
        if perm.n() != sig.n() as usize {
            return Err(IsoError::WrongLength { got: perm.n(), want: sig.n() as usize });
        }
        if signs.len() != sig.n() as usize {
            return Err(IsoError::WrongLength { got: signs.len(), want: sig.n() as usize });
        }
        if !perm.preserves_blocks(sig) {
            return Err(IsoError::NotBlockPreserving);
        }
        if let Some(i) = signs.iter().position(|s| s.abs() != 1) {
            return Err(IsoError::BadSign(i as u32 + 1));
        }
        Ok(CenterMap { signature: sig, perm, signs })
    }

    /// The identity map.
    pub fn identity(sig: Signature) -> Self {
        CenterMap {
            signature: sig,
            perm: ColPerm::identity(sig.n() as usize),
            signs: vec![1; sig.n() as usize],
        }
    }

    /// A plain permutation with all signs `+1`.
    pub fn from_perm(sig: Signature, perm: ColPerm) -> Result<Self, IsoError> {
        let signs = vec![1; sig.n() as usize];
        CenterMap::new(sig, perm, signs)
    }

    /// Signature of the generator space.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// The underlying coordinate permutation.
    pub fn perm(&self) -> &ColPerm {
        &self.perm
    }

    /// Image coordinate of the 1-based generator index.
    pub fn image(&self, l: u32) -> u32 {
        self.perm.image(l - 1) + 1
    }

    /// Sign attached to the 1-based generator index.
    pub fn sign(&self, l: u32) -> i8 {
        self.signs[l as usize - 1]
    }

    /// Image of a support bitmask under the permutation part.
    pub fn image_support(&self, support: Support) -> Support {
        self.perm.apply_support(support)
    }

    /// Multiplicative extension to a signed monomial.
    ///
    /// `z_{i_1} ⋯ z_{i_k}` maps to the product of the generator images in the
    /// same order; sorting the images back into ascending order contributes
    /// the usual transposition signs.
    pub fn apply_monomial(&self, m: Monomial) -> Monomial {
        let mut acc = if m.sign() == 1 { Monomial::one() } else { Monomial::minus_one() };
        for i in m.indices() {
            let factor = Monomial::positive(1 << (self.image(i) - 1));
            let factor = if self.sign(i) == 1 { factor } else { factor.negated() };
            acc = mul(acc, factor, self.signature);
        }
        acc
    }
}

/// Certified isomorphism between the integral structures of two codes.
///
/// The module part sends `v_α` of the first structure to
/// `module_map[α] = (β, sign)`, i.e. `sign · w_β` in the second; the centre
/// part is the covering signed permutation of the generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsomorphismWitness {
    /// Signed basis permutation `V_1 → V_2`.
    pub module_map: Vec<(usize, i8)>,
    /// Covering map of the generators.
    pub center_map: CenterMap,
}

/// Builds and certifies an isomorphism covering the given centre map.
///
/// The module part is `A(v_α) = C(σ_α) · w`, the image under `C` of the
/// coset representative applied to the cyclic vector of the second module.
/// The certificate is the bracket relation `[A u, A u'] = C [u, u']`,
/// verified entry by entry on both structure tensors; failure is a hard
/// error.  Not every centre map carrying the first code onto the second
/// extends to an isomorphism — the signs must align the lifted groups —
/// so callers wanting an automatic choice use [`find_isomorphism`].
pub fn build_isomorphism(
    code1: &Code,
    code2: &Code,
    center: &CenterMap,
) -> Result<IsomorphismWitness, IsoError> {
    let sig = code1.signature();
    if code2.signature() != sig {
        let (o, t) = (sig, code2.signature());
        return Err(IsoError::SignatureMismatch(o.r, o.s, t.r, t.s));
    }
    if center.signature() != sig {
        let (o, t) = (sig, center.signature());
        return Err(IsoError::SignatureMismatch(o.r, o.s, t.r, t.s));
    }
    for w in code1.codewords() {
        if !code2.contains(center.image_support(w)) {
            return Err(IsoError::CodeNotMapped(Monomial::positive(w).to_string()));
        }
    }
    let m1 = build_module(code1)?;
    let m2 = build_module(code2)?;

    let mut module_map = Vec::with_capacity(m1.dim());
    let mut hit = vec![false; m2.dim()];
    for &rep in m1.coset_reps() {
        let image = center.apply_monomial(rep);
        let (beta, sign) = m2.apply_monomial(image, 0);
        if std::mem::replace(&mut hit[beta], true) {
            return Err(IsoError::NotBijective);
        }
        module_map.push((beta, sign));
    }

    let witness = IsomorphismWitness { module_map, center_map: center.clone() };
    let alg1 = structure_constants(&m1)?;
    let alg2 = structure_constants(&m2)?;
    verify_isomorphism(&alg1, &alg2, &witness)?;
    Ok(witness)
}

/// Certifies a witness against the two structure tensors.
///
/// Checks that the module map is a signed bijection and that
/// `[A v_α, A v_β] = C [v_α, v_β]` holds for every pair `(α, β)` and every
/// centre coordinate.
pub fn verify_isomorphism(
    alg1: &HTypeAlgebra,
    alg2: &HTypeAlgebra,
    witness: &IsomorphismWitness,
) -> Result<(), IsoError> {
    let sig = alg1.signature();
    if alg2.signature() != sig || witness.center_map.signature() != sig {
        let (o, t) = (sig, alg2.signature());
        return Err(IsoError::SignatureMismatch(o.r, o.s, t.r, t.s));
    }
    let dim = alg1.module_dim();
    if alg2.module_dim() != dim || witness.module_map.len() != dim {
        return Err(IsoError::NotBijective);
    }
    let mut hit = vec![false; dim];
    for &(beta, sign) in &witness.module_map {
        if beta >= dim || sign.abs() != 1 || std::mem::replace(&mut hit[beta], true) {
            return Err(IsoError::NotBijective);
        }
    }
    let center = &witness.center_map;
    for l in 1..=sig.n() {
        let image_l = center.image(l);
        let sign_l = center.sign(l);
        for alpha in 0..dim {
            let (ta, sa) = witness.module_map[alpha];
            for beta in 0..dim {
                let (tb, sb) = witness.module_map[beta];
                let lhs = sa * sb * alg2.c(image_l, ta, tb);
                let rhs = sign_l * alg1.c(l, alpha, beta);
                if lhs != rhs {
                    return Err(IsoError::NotIntertwining { alpha, beta });
                }
            }
        }
    }
    Ok(())
}

/// Builds an isomorphism covering a given coordinate permutation, choosing
/// the generator signs automatically.
///
/// A permutation carrying the first code onto the second always extends once
/// the signs are corrected: the lift of the first code is generated by the
/// positive echelon basis words, and flipping the sign at the pivot
/// coordinate of a basis word flips the sign of its image without touching
/// the other basis images, so the ℓ alignment conditions solve greedily.
pub fn find_isomorphism(
    code1: &Code,
    code2: &Code,
    perm: &ColPerm,
) -> Result<IsomorphismWitness, IsoError> {
    let sig = code1.signature();
    if code2.signature() != sig {
        let (o, t) = (sig, code2.signature());
        return Err(IsoError::SignatureMismatch(o.r, o.s, t.r, t.s));
    }
    let plain = CenterMap::new(sig, perm.clone(), vec![1; sig.n() as usize])?;
    let gens2: Vec<Monomial> = code2.basis().iter().map(|&w| Monomial::positive(w)).collect();
    let group2 = span_group(&gens2, sig).map_err(|e| ModuleError::InvalidLift(e.to_string()))?;
    let mut signs = vec![1i8; sig.n() as usize];
    for &b in code1.basis() {
        let image = plain.apply_monomial(Monomial::positive(b));
        let Some(target_sign) = group2.sign_of(image.support()) else {
            return Err(IsoError::CodeNotMapped(Monomial::positive(b).to_string()));
        };
        if image.sign() != target_sign {
            // The pivot coordinate of `b` appears in no other basis word, so
            // this flip aligns the image of `b` and nothing else.
            signs[b.trailing_zeros() as usize] = -1;
        }
    }
    build_isomorphism(code1, code2, &CenterMap::new(sig, perm.clone(), signs)?)
}

/// First anticommuting pair `(p, q)` with `p` a weight-`4k` codeword of the
/// first code and `q` a codeword of the second, if one exists.
///
/// Such a pair certifies that no isomorphism of the integral structures
/// covers a generator permutation: `p` squares to `+1` and fixes the first
/// lattice pointwise up to sign bookkeeping, while anticommuting with `q`
/// spoils the corresponding relation in the second.  The search scans both
/// codeword lists in ascending support order, so the witness is
/// deterministic.
pub fn obstruction_anticommuting(code1: &Code, code2: &Code) -> Option<(Monomial, Monomial)> {
    let mut words1: Vec<Support> = code1
        .codewords()
        .into_iter()
        .filter(|&w| w != 0 && w.count_ones() % 4 == 0)
        .collect();
    words1.sort_unstable();
    let mut words2: Vec<Support> = code2.codewords().into_iter().filter(|&w| w != 0).collect();
    words2.sort_unstable();
    for &p in &words1 {
        for &q in &words2 {
            let (p, q) = (Monomial::positive(p), Monomial::positive(q));
            if !commutes(p, q) {
                return Some((p, q));
            }
        }
    }
    None
}

/// The three published code pairs that the anticommutation obstruction does
/// not separate, each certified by a hand-built eigenspace frame.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExceptionalCase {
    /// Signature `(12, 0)`, classes `S^(5)` and `S^(8)`.
    R12S58,
    /// Signature `(13, 0)`, classes `S^(1)` and `S^(2)`.
    R13S12,
    /// Signature `(13, 0)`, classes `S^(5)` and `S^(6)`.
    R13S56,
}

/// Data of one exceptional frame: the class whose module carries it, the
/// words generating each frame vector from the cyclic vector, and the
/// optional quaternion triple acting on the eigenspace.
struct FrameRecipe {
    r: u32,
    carrier: &'static str,
    partner: (&'static str, &'static str),
    frame_words: &'static [&'static [&'static str]],
    quaternion: Option<[&'static str; 3]>,
}

impl ExceptionalCase {
    /// All cases, in a fixed order.
    pub const ALL: [ExceptionalCase; 3] =
        [ExceptionalCase::R12S58, ExceptionalCase::R13S12, ExceptionalCase::R13S56];

    /// Stable identifier (`r12_58`, `r13_12`, `r13_56`).
    pub fn id(self) -> &'static str {
        match self {
            ExceptionalCase::R12S58 => "r12_58",
            ExceptionalCase::R13S12 => "r13_12",
            ExceptionalCase::R13S56 => "r13_56",
        }
    }

    /// Parses a stable identifier.
    pub fn from_id(id: &str) -> Option<Self> {
        ExceptionalCase::ALL.into_iter().find(|c| c.id() == id)
    }

    /// Signature the pair lives in.
    pub fn signature(self) -> Signature {
        Signature::new(self.recipe().r, 0).unwrap()
    }

    /// Published labels of the two classes forming the pair.
    pub fn pair_labels(self) -> (&'static str, &'static str) {
        self.recipe().partner
    }

    /// The two codes of the pair, built from the published generator lists.
    pub fn pair_codes(self) -> (Code, Code) {
        let (a, b) = self.pair_labels();
        (published_code(self.recipe().r, a), published_code(self.recipe().r, b))
    }

    fn recipe(self) -> FrameRecipe {
        match self {
            // Frame of the joint +1 eigenspace E (dim 8) of the four
            // weight-four generators of S^(8): a quaternion orbit of the
            // cyclic vector v and of J_{z8} J_{z9} J_{z12} v.
            ExceptionalCase::R12S58 => FrameRecipe {
                r: 12,
                carrier: "S^(8)",
                partner: ("S^(5)", "S^(8)"),
                frame_words: &[
                    &[],
                    &["z8", "z9"],
                    &["z8", "z10"],
                    &["z9", "z10"],
                    &["z8", "z9", "z12"],
                    &["z8.z9", "z8.z9.z12"],
                    &["z8.z10", "z8.z9.z12"],
                    &["z9.z10", "z8.z9.z12"],
                ],
                quaternion: Some(["z8.z9", "z8.z10", "z9.z10"]),
            },
            // Frame of the joint +1 eigenspace E (dim 4) of the five
            // weight-four generators of S^(1).  The fourth vector completes
            // the pattern v4 ~ (v2 word)·(v3 word): the weight-four
            // generators all anticommute with z2·ρ2, so only the product of
            // both words keeps the vector inside E.
            ExceptionalCase::R13S12 => FrameRecipe {
                r: 13,
                carrier: "S^(1)",
                partner: ("S^(1)", "S^(2)"),
                frame_words: &[
                    &[],
                    &["z1", "z2"],
                    &["z1.z3.z5.z7.z9.z11.z13"],
                    &["z1", "z2", "z1.z3.z5.z7.z9.z11.z13"],
                ],
                quaternion: None,
            },
            // Frame of the joint +1 eigenspace E (dim 4) of the five
            // weight-four generators of S^(5).
            ExceptionalCase::R13S56 => FrameRecipe {
                r: 13,
                carrier: "S^(5)",
                partner: ("S^(5)", "S^(6)"),
                frame_words: &[
                    &[],
                    &["z8", "z9"],
                    &["z8", "z10", "z12"],
                    &["z9", "z10", "z12"],
                ],
                quaternion: None,
            },
        }
    }
}

fn published_code(r: u32, label: &str) -> Code {
    let rows = paper_rows(r);
    let (_, supports) = rows
        .into_iter()
        .find(|(l, _)| *l == label)
        .unwrap_or_else(|| panic!("no published class {label} at r = {r}"));
    Code::try_from_basis(Signature::new(r, 0).unwrap(), &supports)
        .expect("published generator lists are independent")
}

/// Published generators of the carrier class, in listed order.
fn carrier_gens(case: ExceptionalCase) -> Vec<Monomial> {
    let recipe = case.recipe();
    let rows = paper_rows(recipe.r);
    let (_, supports) = rows
        .into_iter()
        .find(|(l, _)| *l == recipe.carrier)
        .expect("carrier class is published");
    supports.into_iter().map(Monomial::positive).collect()
}

/// The weight-`4k` members of a generator list, in listed order.
fn weight_four_part(gens: &[Monomial]) -> Vec<Monomial> {
    gens.iter().copied().filter(|g| g.weight() % 4 == 0).collect()
}

/// Failure of an exceptional frame certificate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    /// The supplied signature is not the one of the case.
    #[error("case {id} lives in signature ({r}, 0)")]
    WrongSignature {
        /// Case identifier.
        id: &'static str,
        /// Required positive dimension.
        r: u32,
    },
    /// The carrier module could not be built.
    #[error(transparent)]
    Module(#[from] ModuleError),
    /// The joint eigenspace has the wrong dimension.
    #[error("joint +1 eigenspace has dimension {got}, want {want}")]
    EigenspaceDim {
        /// Measured dimension.
        got: usize,
        /// Required dimension.
        want: usize,
    },
    /// The frame has the wrong number of vectors.
    #[error("frame has {got} vectors, want {want}")]
    FrameSize {
        /// Number of vectors supplied.
        got: usize,
        /// Required number.
        want: usize,
    },
    /// A frame vector is not fixed by all eigenspace generators.
    #[error("frame vector {0} lies outside the joint +1 eigenspace")]
    OutsideEigenspace(usize),
    /// Two frame vectors fail orthonormality.
    #[error("frame vectors {0} and {1} are not orthonormal")]
    NotOrthonormal(usize, usize),
    /// A frame vector does not arise from the cyclic vector as published.
    #[error("frame vector {0} does not match its generating word")]
    Generation(usize),
    /// A quaternion relation fails on the eigenspace.
    #[error("quaternion relation {0} fails on the eigenspace")]
    Quaternion(&'static str),
}

/// Builds the carrier module and published frame of an exceptional case.
///
/// Frame vectors are returned as `(index, sign)` pairs meaning
/// `sign · v_index` in the carrier module.
pub fn exceptional_frame(
    case: ExceptionalCase,
) -> Result<(InducedModule, Vec<(usize, i8)>), FrameError> {
    let gens = carrier_gens(case);
    let module = build_module_from_gens(case.signature(), &gens)?;
    let frame = case
        .recipe()
        .frame_words
        .iter()
        .map(|words| {
            let product = words
                .iter()
                .map(|w| w.parse::<Monomial>().expect("frame words parse"))
                .fold(Monomial::one(), |acc, m| mul(acc, m, module.signature()));
            module.apply_monomial(product, 0)
        })
        .collect();
    Ok((module, frame))
}

/// Certifies a frame for an exceptional case against its carrier module.
///
/// Checks, in order: the joint `+1` eigenspace `E` of the weight-four
/// carrier generators has the published dimension and the frame fills it;
/// every frame vector lies in `E`; the frame is orthonormal; each vector is
/// generated from the first by its published word products (so a flipped
/// sign or swapped vector is caught — only a global sign change of the whole
/// frame passes, which spans the same lattice); and, where published, the
/// quaternion triple `(I, J, K)` restricts to `E` with
/// `I² = J² = K² = IJK = -Id`.
pub fn verify_frame(
    module: &InducedModule,
    case: ExceptionalCase,
    frame: &[(usize, i8)],
) -> Result<(), FrameError> {
    let recipe = case.recipe();
    let gens = carrier_gens(case);
    let eigen_gens = weight_four_part(&gens);
    let want = recipe.frame_words.len();
    let dims = eigenspace_dims(module, &eigen_gens);
    if dims[0] != want {
        return Err(FrameError::EigenspaceDim { got: dims[0], want });
    }
    if frame.len() != want {
        return Err(FrameError::FrameSize { got: frame.len(), want });
    }
    for (k, &(idx, sign)) in frame.iter().enumerate() {
        if idx >= module.dim() || sign.abs() != 1 {
            return Err(FrameError::OutsideEigenspace(k));
        }
        for g in &eigen_gens {
            if module.apply_monomial(*g, idx) != (idx, 1) {
                return Err(FrameError::OutsideEigenspace(k));
            }
        }
    }
    for (a, &(ia, sa)) in frame.iter().enumerate() {
        for (b, &(ib, sb)) in frame.iter().enumerate().skip(a) {
            let inner = if ia == ib { sa * sb * module.metric()[ia] } else { 0 };
            let want_inner = if a == b { 1 } else { 0 };
            if inner != want_inner {
                return Err(FrameError::NotOrthonormal(a, b));
            }
        }
    }
    let (base_idx, base_sign) = frame[0];
    for (k, words) in recipe.frame_words.iter().enumerate() {
        let product = words
            .iter()
            .map(|w| w.parse::<Monomial>().expect("frame words parse"))
            .fold(Monomial::one(), |acc, m| mul(acc, m, module.signature()));
        let (idx, sign) = module.apply_monomial(product, base_idx);
        if frame[k] != (idx, sign * base_sign) {
            return Err(FrameError::Generation(k));
        }
    }
    if let Some(ops) = recipe.quaternion {
        let mut position = vec![None; module.dim()];
        for (k, &(idx, _)) in frame.iter().enumerate() {
            position[idx] = Some(k);
        }
        // Signed matrix of a monomial operator restricted to the frame span;
        // None when the operator leaves the span.
        let restrict = |word: &str| -> Option<Vec<(usize, i8)>> {
            let op: Monomial = word.parse().expect("quaternion words parse");
            frame
                .iter()
                .map(|&(idx, sign)| {
                    let (target, s) = module.apply_monomial(op, idx);
                    let pos = position[target]?;
                    Some((pos, sign * s * frame[pos].1))
                })
                .collect()
        };
        let compose = |outer: &[(usize, i8)], inner: &[(usize, i8)]| -> Vec<(usize, i8)> {
            inner
                .iter()
                .map(|&(mid, s1)| {
                    let (out, s2) = outer[mid];
                    (out, s1 * s2)
                })
                .collect()
        };
        let minus_id: Vec<(usize, i8)> = (0..frame.len()).map(|k| (k, -1)).collect();
        let [mi, mj, mk] = ops;
        let i = restrict(mi).ok_or(FrameError::Quaternion("I preserves E"))?;
        let j = restrict(mj).ok_or(FrameError::Quaternion("J preserves E"))?;
        let k = restrict(mk).ok_or(FrameError::Quaternion("K preserves E"))?;
        if compose(&i, &i) != minus_id {
            return Err(FrameError::Quaternion("I² = -Id"));
        }
        if compose(&j, &j) != minus_id {
            return Err(FrameError::Quaternion("J² = -Id"));
        }
        if compose(&k, &k) != minus_id {
            return Err(FrameError::Quaternion("K² = -Id"));
        }
        if compose(&i, &compose(&j, &k)) != minus_id {
            return Err(FrameError::Quaternion("IJK = -Id"));
        }
    }
    Ok(())
}

/// Builds and certifies the published frame of an exceptional case.
pub fn exceptional_frame_check(sig: Signature, case: ExceptionalCase) -> Result<(), FrameError> {
    if sig != case.signature() {
        return Err(FrameError::WrongSignature { id: case.id(), r: case.recipe().r });
    }
    let (module, frame) = exceptional_frame(case)?;
    verify_frame(&module, case, &frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{apply_perm, canonical_form_with_perm, enumerate_maximal};
    use crate::codes::min_module_dim;
    use rand::prelude::*;
    use rand::rngs::StdRng;

    fn sig(r: u32, s: u32) -> Signature {
        Signature::new(r, s).unwrap()
    }

    fn m(text: &str) -> Monomial {
        text.parse().unwrap()
    }

    fn code_from(sig: Signature, gens: &[&str]) -> Code {
        let words: Vec<Support> = gens.iter().map(|g| m(g).support()).collect();
        Code::try_from_basis(sig, &words).unwrap()
    }

    fn algebra(code: &Code) -> HTypeAlgebra {
        structure_constants(&build_module(code).unwrap()).unwrap()
    }

    #[test]
    fn heisenberg_structure_constants_match_hand_computation() {
        // (1, 0): V = span(v, J v), [v, J v] = z1.
        let alg = algebra(&Code::empty(sig(1, 0)));
        assert_eq!(alg.module_dim(), 2);
        assert_eq!(alg.center_dim(), 1);
        assert_eq!(alg.c(1, 0, 1), 1);
        assert_eq!(alg.c(1, 1, 0), -1);
        assert_eq!(alg.c(1, 0, 0), 0);
        assert_eq!(alg.c(1, 1, 1), 0);
        assert_eq!(alg.bracket(0, 1), vec![1]);

        // (0, 1): the neutral metric flips a sign in the action but the
        // bracket of the basis pair is still z1.
        let alg = algebra(&Code::empty(sig(0, 1)));
        assert_eq!(alg.bracket(0, 1), vec![1]);
        assert_eq!(alg.bracket(1, 0), vec![-1]);
    }

    #[test]
    fn tensors_are_valid_and_dual_across_signatures() {
        for r in 0..=6 {
            for s in 0..=2 {
                for record in enumerate_maximal(sig(r, s)).classes {
                    let module = build_module(&record.canonical_code).unwrap();
                    let alg = structure_constants(&module).unwrap();
                    assert_eq!(alg.module_dim() as u64, min_module_dim(sig(r, s)));
                    verify_tensor(&alg).unwrap();
                    assert!(duality_roundtrip(&alg, &module));
                    assert!(lattice_closure_check(&alg));
                }
            }
        }
    }

    #[test]
    fn tensor_mutations_are_reported() {
        let alg = algebra(&code_from(sig(4, 0), &["z1.z2.z3"]));
        // Out-of-range entry.
        let bad = alg.with_entry(1, 0, 1, 2);
        assert!(matches!(
            verify_tensor(&bad),
            Err(AlgebraError::EntryOutOfRange { value: 2, .. })
        ));
        // Broken antisymmetry: flip one side of a nonzero pair.
        let (l, alpha, beta) = (1, 0, 1);
        let flipped = alg.with_entry(l, alpha, beta, -alg.c(l, alpha, beta));
        assert!(matches!(verify_tensor(&flipped), Err(AlgebraError::NotAntisymmetric { .. })));
        // A zeroed row is no longer a signed permutation row.
        let hole = alg
            .with_entry(l, alpha, beta, 0)
            .with_entry(l, beta, alpha, 0);
        assert!(matches!(verify_tensor(&hole), Err(AlgebraError::RowNotMonomial { .. })));
        // The mutations also break the round trip against the module.
        let module = build_module(&code_from(sig(4, 0), &["z1.z2.z3"])).unwrap();
        assert!(!duality_roundtrip(&bad, &module));
        assert!(!duality_roundtrip(&flipped, &module));
    }

    #[test]
    fn closure_holds_exactly_for_integral_brackets() {
        let alg = algebra(&code_from(sig(4, 0), &["z1.z2.z3"]));
        assert!(lattice_closure_check(&alg));
        // An entry mutated to 2 keeps every centre increment integral, so the
        // lattice still closes; integrality, not unit size, is the boundary.
        assert!(lattice_closure_check(&alg.with_entry(1, 0, 1, 2)));
        // A genuine half bracket coordinate escapes the lattice.
        assert!(!closed_in_doubled_units(1, 2, &|_, a, b| if a != b { 1 } else { 0 }));
    }

    #[test]
    fn dump_json_lists_upper_brackets_in_order() {
        let alg = algebra(&Code::empty(sig(1, 0)));
        let value = alg.dump_json();
        assert_eq!(value["dim"], 2);
        assert_eq!(value["center_dim"], 1);
        let brackets = value["brackets"].as_array().unwrap();
        assert_eq!(brackets.len(), 1);
        assert_eq!(brackets[0]["l"], 1);
        assert_eq!(brackets[0]["alpha"], 0);
        assert_eq!(brackets[0]["beta"], 1);
        assert_eq!(brackets[0]["c"], 1);
    }

    #[test]
    fn center_map_extends_multiplicatively() {
        let s = sig(4, 0);
        let swap34 = ColPerm::from_map(vec![0, 1, 3, 2]);
        let c = CenterMap::from_perm(s, swap34).unwrap();
        assert_eq!(c.apply_monomial(m("z1.z3")), m("z1.z4"));
        // Images arrive in source order: z3 z4 ↦ z4 z3 = -z3 z4.
        assert_eq!(c.apply_monomial(m("z3.z4")), m("z3.z4").negated());

        let flip1 = CenterMap::new(s, ColPerm::identity(4), vec![-1, 1, 1, 1]).unwrap();
        assert_eq!(flip1.apply_monomial(m("z1.z2")), m("z1.z2").negated());
        assert_eq!(flip1.apply_monomial(m("z2.z3")), m("z2.z3"));

        // Block mixing is rejected.
        let s41 = sig(4, 1);
        let bad = ColPerm::from_map(vec![4, 1, 2, 3, 0]);
        assert!(matches!(
            CenterMap::from_perm(s41, bad),
            Err(IsoError::NotBlockPreserving)
        ));
    }

    #[test]
    fn identity_witness_certifies_every_class() {
        for r in 0..=6 {
            for record in enumerate_maximal(sig(r, 0)).classes {
                let code = &record.canonical_code;
                let witness =
                    build_isomorphism(code, code, &CenterMap::identity(sig(r, 0))).unwrap();
                for (alpha, &(beta, sign)) in witness.module_map.iter().enumerate() {
                    assert_eq!((beta, sign), (alpha, 1));
                }
            }
        }
    }

    #[test]
    fn swapped_coordinates_yield_a_certified_witness() {
        let s = sig(4, 0);
        let code1 = code_from(s, &["z1.z2.z3"]);
        let perm = ColPerm::from_map(vec![0, 1, 3, 2]);
        let code2 = apply_perm(&code1, &perm);
        assert_ne!(code1, code2);
        let witness = find_isomorphism(&code1, &code2, &perm).unwrap();
        let alg1 = algebra(&code1);
        let alg2 = algebra(&code2);
        verify_isomorphism(&alg1, &alg2, &witness).unwrap();
        // Tampering with one module-map sign breaks the certificate.
        let mut broken = witness.clone();
        broken.module_map[0].1 = -broken.module_map[0].1;
        assert!(matches!(
            verify_isomorphism(&alg1, &alg2, &broken),
            Err(IsoError::NotIntertwining { .. })
        ));
    }

    #[test]
    fn uncorrected_signs_can_fail_where_corrected_ones_succeed() {
        // At (3, 0) an odd permutation with all +1 signs reverses the volume
        // word, which acts as +Id on the module: the naive map is not an
        // isomorphism.  The sign correction of find_isomorphism repairs it.
        let s = sig(3, 0);
        let code = code_from(s, &["z1.z2.z3"]);
        let swap12 = ColPerm::from_map(vec![1, 0, 2]);
        let plain = CenterMap::from_perm(s, swap12.clone()).unwrap();
        assert!(matches!(
            build_isomorphism(&code, &code, &plain),
            Err(IsoError::NotIntertwining { .. })
        ));
        let witness = find_isomorphism(&code, &code, &swap12).unwrap();
        // The corrected map flips exactly one generator sign.
        let flips: Vec<i8> = (1..=3).map(|l| witness.center_map.sign(l)).collect();
        assert_eq!(flips.iter().filter(|&&f| f == -1).count(), 1);
    }

    #[test]
    fn random_equivalent_pairs_admit_certified_witnesses() {
        let mut rng = StdRng::seed_from_u64(0x1ea1);
        for r in 3..=8 {
            let s = sig(r, 0);
            for record in enumerate_maximal(s).classes {
                let code1 = &record.canonical_code;
                for _ in 0..5 {
                    let mut map: Vec<u32> = (0..r).collect();
                    map.shuffle(&mut rng);
                    let perm = ColPerm::from_map(map);
                    let code2 = apply_perm(code1, &perm);
                    // The permutation transports code1 to code2 by
                    // construction, so a witness must exist.
                    find_isomorphism(code1, &code2, &perm).unwrap();
                }
            }
        }
    }

    #[test]
    fn composed_canonical_perms_connect_equivalent_codes() {
        // Recover the connecting permutation of an equivalent pair from the
        // canonicalization transcripts, as downstream consumers do.
        let s = sig(6, 0);
        let code1 = code_from(s, &["z1.z2.z3.z4", "z3.z4.z5.z6", "z1.z3.z5"]);
        let perm = ColPerm::from_map(vec![2, 4, 0, 5, 1, 3]);
        let code2 = apply_perm(&code1, &perm);
        let (canon1, to_canon1) = canonical_form_with_perm(&code1);
        let (canon2, to_canon2) = canonical_form_with_perm(&code2);
        assert_eq!(canon1, canon2);
        let connecting = to_canon1.then(&to_canon2.inverse());
        assert_eq!(apply_perm(&code1, &connecting), code2);
        find_isomorphism(&code1, &code2, &connecting).unwrap();
    }

    #[test]
    fn obstruction_separates_the_two_small_classes() {
        let s = sig(4, 0);
        let code1 = code_from(s, &["z1.z2.z3.z4"]);
        let code2 = code_from(s, &["z1.z2.z3"]);
        let (p, q) = obstruction_anticommuting(&code1, &code2).unwrap();
        assert_eq!(p, m("z1.z2.z3.z4"));
        assert_eq!(q, m("z1.z2.z3"));
        assert!(!commutes(p, q));
        // The weight-four word must come from the first code, and code2 has
        // none, so the reversed search comes up empty.
        assert_eq!(obstruction_anticommuting(&code2, &code1), None);
    }

    #[test]
    fn exceptional_pairs_have_no_anticommuting_witness() {
        for case in ExceptionalCase::ALL {
            let (code_a, code_b) = case.pair_codes();
            assert_eq!(obstruction_anticommuting(&code_a, &code_b), None, "{}", case.id());
            assert_eq!(obstruction_anticommuting(&code_b, &code_a), None, "{}", case.id());
        }
    }

    #[test]
    fn exceptional_frames_certify() {
        for case in ExceptionalCase::ALL {
            exceptional_frame_check(case.signature(), case).unwrap();
        }
        assert!(matches!(
            exceptional_frame_check(sig(5, 0), ExceptionalCase::R13S12),
            Err(FrameError::WrongSignature { .. })
        ));
    }

    #[test]
    fn frame_sizes_match_eigenspace_dimensions() {
        let (module, frame) = exceptional_frame(ExceptionalCase::R12S58).unwrap();
        assert_eq!(frame.len(), 8);
        assert_eq!(module.dim(), 128);
        for case in [ExceptionalCase::R13S12, ExceptionalCase::R13S56] {
            let (module, frame) = exceptional_frame(case).unwrap();
            assert_eq!(frame.len(), 4);
            assert_eq!(module.dim(), 128);
        }
    }

    #[test]
    fn frame_mutations_are_caught() {
        for case in ExceptionalCase::ALL {
            let (module, frame) = exceptional_frame(case).unwrap();
            verify_frame(&module, case, &frame).unwrap();
            // Flipping the sign of a non-base vector breaks its generation
            // identity.
            let mut flipped = frame.clone();
            flipped[2].1 = -flipped[2].1;
            assert!(matches!(
                verify_frame(&module, case, &flipped),
                Err(FrameError::Generation(2))
            ));
            // Swapping two vectors breaks generation as well.
            let mut swapped = frame.clone();
            swapped.swap(1, 2);
            assert!(verify_frame(&module, case, &swapped).is_err());
            // Truncation is a size error.
            assert!(matches!(
                verify_frame(&module, case, &frame[..3]),
                Err(FrameError::FrameSize { .. })
            ));
            // Replacing a vector by one outside E is caught.
            let mut outside = frame.clone();
            let bad = (0..module.dim())
                .find(|&idx| {
                    !frame.iter().any(|&(i, _)| i == idx)
                        && carrier_gens(case)
                            .iter()
                            .filter(|g| g.weight() % 4 == 0)
                            .any(|g| module.apply_monomial(*g, idx) != (idx, 1))
                })
                .unwrap();
            outside[2] = (bad, 1);
            assert!(verify_frame(&module, case, &outside).is_err());
            // A global sign flip of every vector is accepted: it spans the
            // same lattice and satisfies the same relations.
            let negated: Vec<(usize, i8)> = frame.iter().map(|&(i, s)| (i, -s)).collect();
            verify_frame(&module, case, &negated).unwrap();
        }
    }

    #[test]
    fn quaternion_triple_squares_to_minus_identity_globally() {
        // The published triple I = z8 z9, J = z8 z10, K = z9 z10 satisfies
        // I J K = -1 already at the monomial level.
        let s = sig(12, 0);
        let prod = mul(mul(m("z8.z9"), m("z8.z10"), s), m("z9.z10"), s);
        assert_eq!(prod, Monomial::minus_one());
        for word in ["z8.z9", "z8.z10", "z9.z10"] {
            assert_eq!(mul(m(word), m(word), s), Monomial::minus_one());
        }
    }

    #[test]
    fn case_identifiers_round_trip() {
        for case in ExceptionalCase::ALL {
            assert_eq!(ExceptionalCase::from_id(case.id()), Some(case));
        }
        assert_eq!(ExceptionalCase::from_id("r9_99"), None);
        let (a, b) = ExceptionalCase::R12S58.pair_codes();
        assert_eq!(a.signature(), sig(12, 0));
        assert_ne!(a, b);
    }
}
