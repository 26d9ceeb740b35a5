//! Induced minimal admissible modules over the Clifford algebra.
//!
//! A maximal admissible code `C ⊆ F_2^n` of dimension `ℓ` lifts to a group
//! `Ŝ ⊂ G(B_{r,s})` of commuting positive involutions of order `2^ℓ` (the
//! echelon basis words, signed `+1`, generate it).  Quotienting the signed
//! monomial group by the relations `g = 1` for `g ∈ Ŝ` and sending `-1` to
//! `-Id` produces a module over `Cl_{r,s}`:
//!
//! * the basis is indexed by the cosets of `C` in `F_2^n`, one vector
//!   `v_α = J_{σ_α} v` per coset, where `σ_α` is the coset member with the
//!   numerically least support, taken with sign `+1`;
//! * a generator `z_i` acts through the group product: writing
//!   `z_i σ_α = ± σ_β g` with `g ∈ Ŝ` determines `J_{z_i} v_α = ± v_β`,
//!   a signed permutation of the basis;
//! * the diagonal metric `⟨v_α, v_α⟩ = (-1)^{#negative factors of σ_α}`
//!   makes every `J_{z_i}` skew-symmetric.
//!
//! The construction yields `dim V = 2^{r+s-ℓ}`, which coincides with the
//! dimension of a minimal admissible module for every signature in range,
//! and is self-verifying: [`verify_clifford`] and [`verify_admissible`]
//! recheck the defining relations from the stored tables alone.

use serde_json::json;
use thiserror::Error;

use crate::cliff::{mul, span_group, Monomial, SignedGroup, Signature};
use crate::codes::{ell, is_admissible_code, min_module_dim, Code};

/// Error building an [`InducedModule`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    /// Some nonzero codeword is not a positive involution.
    #[error("code is not admissible: some nonzero codeword is not a positive involution")]
    NotAdmissible,
    /// The code does not have the maximal dimension `ℓ(r,s)`.
    #[error("code dimension {dim} differs from ell{sig} = {ell}")]
    NotMaximal {
        /// Signature of the code.
        sig: Signature,
        /// Dimension of the offered code.
        dim: usize,
        /// Required maximal dimension.
        ell: u32,
    },
    /// The re-multiplication identity `z_i σ_α = ± σ_β g` failed.
    #[error("sign bookkeeping failed at generator z{i}, basis index {alpha}")]
    SignBookkeeping {
        /// Generator index (1-based).
        i: u32,
        /// Basis index whose image could not be certified.
        alpha: usize,
    },
    /// The caller-supplied lift generators do not span a signed group.
    #[error("invalid lift generators: {0}")]
    InvalidLift(String),
}

/// Violation of a Clifford relation `J_i J_j + J_j J_i = -2⟨z_i,z_j⟩ Id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("Clifford relation violated for generators z{i}, z{j}")]
pub struct CliffordViolation {
    /// First generator index (1-based).
    pub i: u32,
    /// Second generator index (1-based).
    pub j: u32,
}

/// Violation of skew-symmetry `⟨J_i u, w⟩ + ⟨u, J_i w⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("skew-symmetry violated at generator z{i}, entry ({alpha}, {beta})")]
pub struct AdmissibilityViolation {
    /// Generator index (1-based).
    pub i: u32,
    /// Row basis index.
    pub alpha: usize,
    /// Column basis index.
    pub beta: usize,
}

/// Minimal admissible module induced by a maximal admissible code.
///
/// All data is stored explicitly: the lifted group, the coset
/// representatives (ascending support order, so index `0` is the cyclic
/// vector `v`), the action of every generator as a signed permutation, and
/// the diagonal metric.  Instances are immutable; the `with_*` methods
/// return deliberately damaged copies for exercising the verification
/// predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedModule {
    signature: Signature,
    group: SignedGroup,
    coset_reps: Vec<Monomial>,
    rep_index: Vec<u32>,
    j_maps: Vec<Vec<(usize, i8)>>,
    metric: Vec<i8>,
}

impl InducedModule {
    /// Signature of the Clifford algebra acting on the module.
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// The lifted group `Ŝ` fixing the cyclic vector.
    pub fn group(&self) -> &SignedGroup {
        &self.group
    }

    /// Module dimension.
    pub fn dim(&self) -> usize {
        self.coset_reps.len()
    }

    /// Coset representatives `σ_α`; entry `α` indexes the basis vector
    /// `v_α = J_{σ_α} v`.
    pub fn coset_reps(&self) -> &[Monomial] {
        &self.coset_reps
    }

    /// Diagonal of the invariant metric in the basis `{v_α}`.
    pub fn metric(&self) -> &[i8] {
        &self.metric
    }

    /// Counts of `+1` and `-1` metric entries.
    pub fn metric_signature(&self) -> (usize, usize) {
        let plus = self.metric.iter().filter(|&&m| m == 1).count();
        (plus, self.metric.len() - plus)
    }

    /// Action of the generator `z_i` (1-based): entry `α` is the pair
    /// `(β, sign)` with `J_{z_i} v_α = sign · v_β`.
    pub fn j_map(&self, i: u32) -> &[(usize, i8)] {
        assert!(
            i >= 1 && i <= self.signature.n(),
            "generator index {i} out of range 1..={}",
            self.signature.n()
        );
        &self.j_maps[(i - 1) as usize]
    }

    /// Extends the generator action multiplicatively to a monomial:
    /// `J_{±z_{i_1}…z_{i_k}} v_α = ± J_{z_{i_1}}(… J_{z_{i_k}}(v_α))`.
    ///
    /// Returns the pair `(β, sign)` with image `sign · v_β`.
    pub fn apply_monomial(&self, g: Monomial, alpha: usize) -> (usize, i8) {
        assert!(
            self.signature.contains(g.support()),
            "monomial support does not fit signature {}",
            self.signature
        );
        assert!(alpha < self.dim(), "basis index {alpha} out of range");
        let mut idx = alpha;
        let mut sign = g.sign();
        let mut rest = g.support();
        while rest != 0 {
            let top = 31 - rest.leading_zeros();
            rest &= !(1u32 << top);
            let (target, s) = self.j_maps[top as usize][idx];
            idx = target;
            sign *= s;
        }
        (idx, sign)
    }

    /// Number of distinct signed vectors in the orbit `{J_g v : g ∈ G}` of
    /// the cyclic vector under the full signed monomial group.
    pub fn signed_orbit_size(&self) -> usize {
        let sig = self.signature;
        let mut seen = vec![[false; 2]; self.dim()];
        let mut count = 0usize;
        for support in 0..=sig.full_mask() {
            let (idx, sign) = self.apply_monomial(Monomial::positive(support), 0);
            for s in [sign, -sign] {
                let slot = &mut seen[idx][usize::from(s < 0)];
                if !*slot {
                    *slot = true;
                    count += 1;
                }
            }
            if sig.full_mask() == 0 {
                break;
            }
        }
        count
    }

    /// Copy with the sign of `J_{z_i} v_α` flipped.
    ///
    /// The result deliberately violates the construction; it exists so the
    /// verification predicates have a falsifiable target.
    pub fn with_flipped_j_sign(&self, i: u32, alpha: usize) -> Self {
        assert!(i >= 1 && i <= self.signature.n(), "generator index {i} out of range");
        assert!(alpha < self.dim(), "basis index {alpha} out of range");
        let mut copy = self.clone();
        copy.j_maps[(i - 1) as usize][alpha].1 *= -1;
        copy
    }

    /// Copy with the metric replaced entrywise.
    ///
    /// Like [`InducedModule::with_flipped_j_sign`], a test instrument: the
    /// replacement is not required to keep the module admissible.
    pub fn with_metric(&self, metric: Vec<i8>) -> Self {
        assert_eq!(metric.len(), self.dim(), "metric length must equal the dimension");
        assert!(metric.iter().all(|&m| m == 1 || m == -1), "metric entries must be ±1");
        let mut copy = self.clone();
        copy.metric = metric;
        copy
    }

    /// JSON dump `{dim, metric, j, coset_reps}` with each generator map
    /// listed as `[target, sign]` pairs under its name `z1, z2, ...`.
    pub fn dump_json(&self) -> serde_json::Value {
        let mut j = serde_json::Map::new();
        for i in 1..=self.signature.n() {
            let entries: Vec<serde_json::Value> = self
                .j_map(i)
                .iter()
                .map(|&(target, sign)| json!([target, sign]))
                .collect();
            j.insert(format!("z{i}"), entries.into());
        }
        json!({
            "dim": self.dim(),
            "metric": self.metric,
            "j": j,
            "coset_reps": self.coset_reps.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Builds the induced module of a maximal admissible code.
///
/// The code must be admissible and of the maximal dimension `ℓ(r,s)`.  The
/// basis is indexed by the cosets of the code in ascending order of their
/// least support, so the cyclic vector is `v_0 = v` (empty representative).
/// Every generator image is certified by re-multiplying the defining
/// identity `z_i σ_α = sign · σ_β g`; any failure is reported as
/// [`ModuleError::SignBookkeeping`] rather than silently accepted.
pub fn build_module(code: &Code) -> Result<InducedModule, ModuleError> {
    check_maximal_admissible(code)?;
    let sig = code.signature();
    let gens: Vec<Monomial> = code.basis().iter().map(|&w| Monomial::positive(w)).collect();
    let group = span_group(&gens, sig).expect("admissible code lifts to a signed group");
    assemble(code, group)
}

/// Builds the induced module from an explicit generating set of the lift.
///
/// The supports of `gens` must span a maximal admissible code; the signed
/// monomials themselves pick the lift.  Different sign choices produce
/// modules that agree on cosets but fix different cyclic vectors, so
/// published frame data pins a particular generating set rather than the
/// echelon basis used by [`build_module`].
pub fn build_module_from_gens(
    sig: Signature,
    gens: &[Monomial],
) -> Result<InducedModule, ModuleError> {
    let code = Code::from_span(sig, gens.iter().map(|g| g.support()))
        .map_err(|e| ModuleError::InvalidLift(e.to_string()))?;
    check_maximal_admissible(&code)?;
    let group = span_group(gens, sig).map_err(|e| ModuleError::InvalidLift(e.to_string()))?;
    assemble(&code, group)
}

fn check_maximal_admissible(code: &Code) -> Result<(), ModuleError> {
    let sig = code.signature();
    if !is_admissible_code(code) {
        return Err(ModuleError::NotAdmissible);
    }
    let l = ell(sig);
    if code.dim() != l as usize {
        return Err(ModuleError::NotMaximal { sig, dim: code.dim(), ell: l });
    }
    Ok(())
}

fn assemble(code: &Code, group: SignedGroup) -> Result<InducedModule, ModuleError> {
    let sig = code.signature();
    let n = sig.n();
    let total = 1usize << n;
    let codewords = code.codewords();
    let mut rep_index = vec![u32::MAX; total];
    let mut coset_reps: Vec<Monomial> = Vec::with_capacity(total >> code.dim());
    for w in 0..total as u32 {
        if rep_index[w as usize] != u32::MAX {
            continue;
        }
        // First unseen support in ascending order = least member of its coset.
        let alpha = coset_reps.len() as u32;
        for &c in &codewords {
            rep_index[(w ^ c) as usize] = alpha;
        }
        coset_reps.push(Monomial::positive(w));
    }
    assert_eq!(coset_reps.len(), total >> code.dim(), "one representative per coset");
    assert_eq!(
        coset_reps.len() as u64,
        min_module_dim(sig),
        "induced dimension must be the minimal admissible dimension"
    );

    let metric: Vec<i8> = coset_reps
        .iter()
        .map(|rep| if (rep.support() & sig.negative_mask()).count_ones() % 2 == 0 { 1 } else { -1 })
        .collect();

    let mut j_maps = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let zi = Monomial::positive(1u32 << (i - 1));
        let mut map = Vec::with_capacity(coset_reps.len());
        for (alpha, &rep) in coset_reps.iter().enumerate() {
            let m = mul(zi, rep, sig);
            let beta = rep_index[m.support() as usize] as usize;
            let diff = m.support() ^ coset_reps[beta].support();
            let Some(g) = group.get(diff) else {
                return Err(ModuleError::SignBookkeeping { i, alpha });
            };
            let p = mul(coset_reps[beta], g, sig);
            if p.support() != m.support() {
                return Err(ModuleError::SignBookkeeping { i, alpha });
            }
            let sign = m.sign() * p.sign();
            let rhs = if sign == 1 { p } else { p.negated() };
            if mul(zi, rep, sig) != rhs {
                return Err(ModuleError::SignBookkeeping { i, alpha });
            }
            map.push((beta, sign));
        }
        j_maps.push(map);
    }
    Ok(InducedModule { signature: sig, group, coset_reps, rep_index, j_maps, metric })
}

/// Checks all Clifford relations
/// `J_{z_i} J_{z_j} + J_{z_j} J_{z_i} = -2⟨z_i, z_j⟩ Id` on the stored
/// generator actions, reporting the first violated pair.
pub fn verify_clifford(m: &InducedModule) -> Result<(), CliffordViolation> {
    let sig = m.signature;
    let n = sig.n();
    for i in 1..=n {
        for j in i..=n {
            let ji = &m.j_maps[(i - 1) as usize];
            let jj = &m.j_maps[(j - 1) as usize];
            for alpha in 0..m.dim() {
                let (b1, s1) = jj[alpha];
                let (g1, t1) = ji[b1];
                let ok = if i == j {
                    // 2 J_i² = -2⟨z_i,z_i⟩ Id.
                    g1 == alpha && s1 * t1 == -sig.form(i)
                } else {
                    let (b2, s2) = ji[alpha];
                    let (g2, t2) = jj[b2];
                    g1 == g2 && s1 * t1 + s2 * t2 == 0
                };
                if !ok {
                    return Err(CliffordViolation { i, j });
                }
            }
        }
    }
    Ok(())
}

/// Checks entrywise skew-symmetry of every generator action with respect to
/// the diagonal metric, reporting the first violating entry.
pub fn verify_admissible(m: &InducedModule) -> Result<(), AdmissibilityViolation> {
    let n = m.signature.n();
    let dim = m.dim();
    for i in 1..=n {
        let jmap = &m.j_maps[(i - 1) as usize];
        for alpha in 0..dim {
            let (ta, sa) = jmap[alpha];
            for beta in 0..dim {
                let lhs = if ta == beta { sa * m.metric[beta] } else { 0 };
                let (tb, sb) = jmap[beta];
                let rhs = if tb == alpha { sb * m.metric[alpha] } else { 0 };
                if lhs + rhs != 0 {
                    return Err(AdmissibilityViolation { i, alpha, beta });
                }
            }
        }
    }
    Ok(())
}

/// Dimensions of all joint eigenspaces of the commuting involutions
/// `J_{g_1}, ..., J_{g_k}`.
///
/// The result has `2^k` entries; entry `b` is the dimension of the joint
/// eigenspace on which `J_{g_t}` acts with eigenvalue `-1` exactly when bit
/// `t` of `b` is set.  Entry `0` is therefore the joint `+1` eigenspace
/// `E = ∩ E^{+1}(g_t)`.
///
/// # Panics
///
/// Panics if some `g_t` does not act diagonally on the basis, i.e. its
/// support does not lie in the code of the module.
pub fn eigenspace_dims(m: &InducedModule, gens: &[Monomial]) -> Vec<usize> {
    assert!(gens.len() < usize::BITS as usize, "too many generators");
    let mut dims = vec![0usize; 1usize << gens.len()];
    for alpha in 0..m.dim() {
        let mut pattern = 0usize;
        for (t, &g) in gens.iter().enumerate() {
            let (target, sign) = m.apply_monomial(g, alpha);
            assert_eq!(
                target, alpha,
                "generator {g} does not act diagonally: its support is outside the code"
            );
            if sign < 0 {
                pattern |= 1 << t;
            }
        }
        dims[pattern] += 1;
    }
    dims
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{enumerate_maximal, paper_rows};
    use crate::cliff::{commutes, positive_involution};
    use crate::codes::pi0;

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

    fn paper_code(r: u32, label: &str) -> Code {
        let rows = paper_rows(r);
        let (_, supports) = rows.into_iter().find(|(l, _)| *l == label).unwrap();
        Code::try_from_basis(sig(r, 0), &supports).unwrap()
    }

    #[test]
    fn published_generators_induce_a_module_fixing_the_cyclic_vector() {
        let s = sig(13, 0);
        let rows = paper_rows(13);
        let (_, supports) = rows.into_iter().find(|(l, _)| *l == "S^(5)").unwrap();
        let gens: Vec<Monomial> = supports.iter().map(|&w| Monomial::positive(w)).collect();
        let module = build_module_from_gens(s, &gens).unwrap();
        assert_eq!(module.dim(), 128);
        // The cyclic vector is fixed by every listed generator, signs included.
        for g in &gens {
            assert_eq!(module.apply_monomial(*g, 0), (0, 1));
        }
        assert!(verify_clifford(&module).is_ok());
        assert!(verify_admissible(&module).is_ok());

        // A dependent generating set spans a smaller code.
        let dep = [gens[0], gens[0]];
        assert!(matches!(
            build_module_from_gens(s, &dep),
            Err(ModuleError::NotMaximal { .. })
        ));
        // A negated generator is not an accepted lift element.
        let mut bad = gens.clone();
        bad[0] = bad[0].negated();
        assert!(matches!(build_module_from_gens(s, &bad), Err(ModuleError::InvalidLift(_))));
    }

    #[test]
    fn heisenberg_module_matches_hand_computation() {
        let module = build_module(&Code::empty(sig(1, 0))).unwrap();
        assert_eq!(module.dim(), 2);
        assert_eq!(module.coset_reps(), &[Monomial::one(), m("z1")]);
        assert_eq!(module.metric(), &[1, 1]);
        // J_{z1}: v ↦ z1 v, z1 v ↦ z1² v = -v.
        assert_eq!(module.j_map(1), &[(1, 1), (0, -1)]);
        assert!(verify_clifford(&module).is_ok());
        assert!(verify_admissible(&module).is_ok());
    }

    #[test]
    fn negative_heisenberg_squares_to_plus_identity() {
        let module = build_module(&Code::empty(sig(0, 1))).unwrap();
        assert_eq!(module.dim(), 2);
        // z1² = +1 for a negative generator, so J² = +Id.
        for alpha in 0..2 {
            let (beta, s1) = module.j_map(1)[alpha];
            let (gamma, s2) = module.j_map(1)[beta];
            assert_eq!((gamma, s1 * s2), (alpha, 1));
        }
        assert_eq!(module.metric(), &[1, -1]);
        assert_eq!(module.metric_signature(), (1, 1));
        assert!(verify_clifford(&module).is_ok());
        assert!(verify_admissible(&module).is_ok());
    }

    #[test]
    fn quaternionic_module_has_four_cosets() {
        let code = code_from(sig(3, 0), &["z1.z2.z3"]);
        let module = build_module(&code).unwrap();
        assert_eq!(module.dim(), 4);
        assert_eq!(
            module.coset_reps(),
            &[Monomial::one(), m("z1"), m("z2"), m("z1.z2")]
        );
        assert!(verify_clifford(&module).is_ok());
        assert!(verify_admissible(&module).is_ok());
    }

    #[test]
    fn table_row_r8_builds_dimension_sixteen() {
        let module = build_module(&paper_code(8, "S^(1)")).unwrap();
        assert_eq!(module.dim(), 16);
        assert!(verify_clifford(&module).is_ok());
        assert!(verify_admissible(&module).is_ok());
    }

    #[test]
    fn build_rejects_bad_codes() {
        // Not admissible: z1z2 squares to -1.
        let bad = Code::try_from_basis(sig(2, 0), &[0b11]).unwrap();
        assert_eq!(build_module(&bad), Err(ModuleError::NotAdmissible));
        // Admissible but not maximal: ell(4,0) = 1 > 0.
        let empty = Code::empty(sig(4, 0));
        assert_eq!(
            build_module(&empty),
            Err(ModuleError::NotMaximal { sig: sig(4, 0), dim: 0, ell: 1 })
        );
    }

    /// Every enumerated class in a small sweep yields a verified module
    /// with all structural invariants.
    #[test]
    fn enumerated_classes_build_verified_modules() {
        for r in 0..=9 {
            for s in 0..=1 {
                let sg = sig(r, s);
                for class in enumerate_maximal(sg).classes {
                    let module = build_module(&class.canonical_code).unwrap();
                    assert_eq!(module.dim() as u64, min_module_dim(sg));
                    assert!(verify_clifford(&module).is_ok(), "{sg} {}", class.id);
                    assert!(verify_admissible(&module).is_ok(), "{sg} {}", class.id);

                    // jMaps are signed permutations: each target hit once.
                    for i in 1..=sg.n() {
                        let mut hit = vec![false; module.dim()];
                        for &(target, sign) in module.j_map(i) {
                            assert!(sign == 1 || sign == -1);
                            assert!(!hit[target]);
                            hit[target] = true;
                        }
                    }

                    // The representatives reproduce the basis: J_{σ_α} v = v_α.
                    for (alpha, &rep) in module.coset_reps().iter().enumerate() {
                        assert_eq!(module.apply_monomial(rep, 0), (alpha, 1));
                    }

                    // Isometry on generators: ⟨J_z u, J_z u⟩ = ⟨z,z⟩⟨u,u⟩.
                    for i in 1..=sg.n() {
                        for alpha in 0..module.dim() {
                            let (beta, _) = module.j_map(i)[alpha];
                            assert_eq!(
                                module.metric()[beta],
                                sg.form(i) * module.metric()[alpha]
                            );
                        }
                    }

                    // Signed orbit of the cyclic vector has 2·dim elements.
                    assert_eq!(module.signed_orbit_size(), 2 * module.dim());

                    // Neutral metric signature for s = 1.
                    if s == 1 {
                        let (plus, minus) = module.metric_signature();
                        assert_eq!(plus, minus);
                    }

                    // The lifted group fixes the cyclic vector.
                    for g in module.group().iter() {
                        assert_eq!(module.apply_monomial(g, 0), (0, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn flipped_sign_is_caught_by_verify_clifford() {
        let module = build_module(&paper_code(4, "S^(1)")).unwrap();
        let broken = module.with_flipped_j_sign(2, 3);
        assert!(verify_clifford(&broken).is_err());
        // The original still passes.
        assert!(verify_clifford(&module).is_ok());
    }

    #[test]
    fn uniform_metric_fails_admissibility_for_negative_signature() {
        let code = Code::from_span(sig(4, 1), paper_code(4, "S^(1)").basis().iter().copied())
            .unwrap();
        let module = build_module(&code).unwrap();
        assert!(verify_admissible(&module).is_ok());
        let broken = module.with_metric(vec![1; module.dim()]);
        let violation = verify_admissible(&broken);
        assert!(violation.is_err());
        // The violating generator must be the negative one.
        assert_eq!(violation.unwrap_err().i, 5);
    }

    #[test]
    fn involution_splits_module_in_halves() {
        // A non-central involution splits the module evenly.
        let code = code_from(sig(4, 0), &["z1.z2.z3.z4"]);
        let module = build_module(&code).unwrap();
        let dims = eigenspace_dims(&module, &[m("z1.z2.z3.z4")]);
        assert_eq!(dims, vec![4, 4]);
    }

    #[test]
    fn volume_form_fixes_the_cyclic_module() {
        // For r - s ≡ 3 (mod 4) the volume word is central in the Clifford
        // algebra, so on a module generated by a fixed vector it acts as the
        // identity: the split degenerates to (dim, 0).
        let code = code_from(sig(3, 0), &["z1.z2.z3"]);
        let module = build_module(&code).unwrap();
        let dims = eigenspace_dims(&module, &[m("z1.z2.z3")]);
        assert_eq!(dims, vec![4, 0]);
    }

    /// Extracts a basis of the subgroup of words of even weight.
    fn t1_part(code: &Code) -> Vec<Monomial> {
        let span = Code::from_span(
            code.signature(),
            code.codewords().into_iter().filter(|w| w.count_ones() % 2 == 0),
        )
        .unwrap();
        span.basis().iter().map(|&w| Monomial::positive(w)).collect()
    }

    #[test]
    fn t1_eigenspaces_for_r13_have_dimension_four() {
        for label in ["S^(1)", "S^(2)", "S^(5)", "S^(6)"] {
            let code = paper_code(13, label);
            let module = build_module(&code).unwrap();
            let t1 = t1_part(&code);
            assert_eq!(t1.len(), 5, "{label}");
            let dims = eigenspace_dims(&module, &t1);
            assert_eq!(dims[0], 4, "{label}");
            assert_eq!(dims.iter().sum::<usize>(), module.dim());
            // The odd word splits that eigenspace in halves.
            let gens: Vec<Monomial> =
                code.basis().iter().map(|&w| Monomial::positive(w)).collect();
            assert_eq!(eigenspace_dims(&module, &gens)[0], 2, "{label}");
        }
    }

    #[test]
    fn t1_part_eigenspace_for_r12_has_dimension_eight() {
        for label in ["S^(5)", "S^(8)"] {
            let code = paper_code(12, label);
            let module = build_module(&code).unwrap();
            // The T1 part of these groups is generated by four words.
            let t1 = t1_part(&code);
            assert_eq!(t1.len(), 4, "{label}");
            let dims = eigenspace_dims(&module, &t1);
            assert_eq!(dims[0], 8, "{label}");
        }
    }

    #[test]
    fn eigenspace_patterns_cover_the_module() {
        let report = enumerate_maximal(sig(10, 0));
        for class in report.classes {
            let module = build_module(&class.canonical_code).unwrap();
            let gens: Vec<Monomial> = class
                .canonical_code
                .basis()
                .iter()
                .map(|&w| Monomial::positive(w))
                .collect();
            let dims = eigenspace_dims(&module, &gens);
            assert_eq!(dims.len(), 1 << gens.len());
            assert_eq!(dims.iter().sum::<usize>(), module.dim());
            let _ = pi0(&class.canonical_code);
        }
    }

    #[test]
    fn rejects_generators_outside_the_code() {
        let code = code_from(sig(3, 0), &["z1.z2.z3"]);
        let module = build_module(&code).unwrap();
        let result = std::panic::catch_unwind(|| eigenspace_dims(&module, &[m("z1")]));
        assert!(result.is_err());
    }

    #[test]
    fn json_dump_has_the_documented_shape() {
        let module = build_module(&Code::empty(sig(1, 0))).unwrap();
        let value = module.dump_json();
        assert_eq!(value["dim"], 2);
        assert_eq!(value["metric"], json!([1, 1]));
        assert_eq!(value["coset_reps"], json!(["1", "z1"]));
        assert_eq!(value["j"]["z1"], json!([[1, 1], [0, -1]]));
    }

    /// The lifted basis words of an admissible code pairwise commute and
    /// are positive involutions, so the lift never needs sign fixes.
    #[test]
    fn lifted_basis_words_commute() {
        for r in 3..=10 {
            let report = enumerate_maximal(sig(r, 0));
            for class in report.classes {
                let words: Vec<Monomial> = class
                    .canonical_code
                    .basis()
                    .iter()
                    .map(|&w| Monomial::positive(w))
                    .collect();
                for (i, a) in words.iter().enumerate() {
                    assert!(positive_involution(a.support(), sig(r, 0)));
                    for b in words.iter().skip(i + 1) {
                        assert!(commutes(*a, *b));
                    }
                }
            }
        }
    }
}
