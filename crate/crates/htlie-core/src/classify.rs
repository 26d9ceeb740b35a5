//! Canonical forms and classification of maximal admissible codes.
//!
//! Two groups of positive involutions are equivalent when a permutation of
//! the generators `z_1, ..., z_n` preserving the positive/negative blocks
//! maps one admissible code onto the other.  This module computes a true
//! canonical representative of each equivalence class, enumerates all
//! classes of maximal admissible codes for a signature, and matches them
//! against the published classification.
//!
//! The canonical form of a code is the lexicographically least reduced
//! echelon basis over all block-preserving column permutations.  Rows are
//! compared as bit strings with `z_1` most significant and concatenated in
//! ascending pivot order; the positive block precedes the negative block.
//! The search is a backtracking branch-and-bound over target positions with
//! partition refinement of interchangeable columns and pruning by
//! automorphisms discovered along the way, so equal subtrees are visited
//! once.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::cliff::{Monomial, Signature, Support, MAX_COORDS};
use crate::codes::{
    code_stats, codeword_admissible, ell, is_admissible_code, pi0, rref, Code,
    CodeStats, SupportPartition,
};

/// Permutation of the `n` coordinates, stored as the image map.
///
/// `map[i]` is the image of coordinate `i` (0-based).  Signature-preserving
/// permutations map the positive block `0..r` and the negative block
/// `r..n` to themselves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColPerm {
    map: Vec<u32>,
}

impl ColPerm {
    /// The identity permutation on `n` coordinates.
    pub fn identity(n: usize) -> Self {
        ColPerm { map: (0..n as u32).collect() }
    }

    /// Builds a permutation from its image map.
    ///
    /// # Panics
    ///
    /// Panics if `map` is not a permutation of `0..map.len()`.
    pub fn from_map(map: Vec<u32>) -> Self {
        let n = map.len();
        let mut seen = vec![false; n];
        for &i in &map {
            assert!((i as usize) < n && !seen[i as usize], "invalid permutation map {map:?}");
            seen[i as usize] = true;
        }
        ColPerm { map }
    }

    /// Number of permuted coordinates.
    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of the 0-based coordinate `i`.
    pub fn image(&self, i: u32) -> u32 {
        self.map[i as usize]
    }

    /// Applies the permutation to a support bitmask.
    pub fn apply_support(&self, support: Support) -> Support {
        let mut out = 0;
        let mut rest = support;
        while rest != 0 {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            out |= 1 << self.map[i as usize];
        }
        out
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> ColPerm {
        let mut map = vec![0u32; self.map.len()];
        for (i, &img) in self.map.iter().enumerate() {
            map[img as usize] = i as u32;
        }
        ColPerm { map }
    }

    /// Composition: first `self`, then `other`.
    pub fn then(&self, other: &ColPerm) -> ColPerm {
        assert_eq!(self.n(), other.n());
        ColPerm { map: self.map.iter().map(|&i| other.map[i as usize]).collect() }
    }

    /// Whether the permutation fixes the positive and negative blocks.
    pub fn preserves_blocks(&self, sig: Signature) -> bool {
        self.map.len() == sig.n() as usize
            && self.map.iter().enumerate().all(|(i, &img)| ((i as u32) < sig.r) == (img < sig.r))
    }
}

/// Applies a coordinate permutation to all basis words of a code.
pub fn apply_perm(code: &Code, perm: &ColPerm) -> Code {
    Code::from_span(code.signature(), code.basis().iter().map(|&w| perm.apply_support(w)))
        .expect("permutation of a valid code stays valid")
}

/// Reads an `n`-bit row key (position 0 most significant) back into a
/// support bitmask (bit `p` for position `p`).
fn key_to_support(key: u32, n: usize) -> Support {
    let mut out = 0;
    for p in 0..n {
        if key >> (n - 1 - p) & 1 == 1 {
            out |= 1 << p;
        }
    }
    out
}

/// Support bitmask to row key: bit `p` of the support becomes bit
/// `n - 1 - p` of the key, so `z_1` is most significant.
fn support_to_key(support: Support, n: usize) -> u32 {
    key_to_support(support, n)
}

/// Comparison key of an echelon basis: the row keys in pivot order.
pub(crate) fn matrix_key(basis: &[Support], n: usize) -> Vec<u32> {
    basis.iter().map(|&row| support_to_key(row, n)).collect()
}

#[derive(Clone)]
struct Row {
    /// Bits already placed, target position `p` at bit `n - 1 - p`.
    key: u32,
    /// Codeword (in source coordinates) this echelon row currently equals.
    combo: Support,
}

/// Mutable state of the canonical search, updated in place with undo
/// records so the depth-first search allocates nothing per node.
struct Node {
    rows: Vec<Row>,
    /// Basis of the subcode whose projection to the placed positions is zero.
    kernel: Vec<Support>,
    /// Source column placed at each target position, in position order.
    placed: Vec<u8>,
    used: u32,
}

/// Reversal record for one placement.
struct Undo {
    j: u8,
    /// Rows whose key gained the position bit (non-pivot placement).
    nonpivot_rows: u32,
    pivot: Option<PivotUndo>,
}

struct PivotUndo {
    /// Kernel index the new row was removed from.
    idx: usize,
    g: Support,
    /// Kernel entries (post-removal indexing) reduced by `g`.
    kernel_flips: u32,
    /// Rows whose combo was reduced by `g`.
    row_flips: u32,
}

struct Best {
    keys: Vec<u32>,
    placed: Vec<u8>,
}

/// A known automorphism of the codeword set, as a source-to-source map,
/// with the bitmask of its fixed columns for a constant-time activity test.
struct AutoGen {
    map: Vec<u8>,
    fixed: u32,
}

impl AutoGen {
    fn new(map: Vec<u8>) -> Self {
        let mut fixed = 0u32;
        for (i, &x) in map.iter().enumerate() {
            if x as usize == i {
                fixed |= 1 << i;
            }
        }
        AutoGen { map, fixed }
    }
}

struct Searcher {
    n: usize,
    dim: usize,
    /// Invariant ordered label of each source column.
    labels: Vec<u32>,
    /// Label required at each target position: the sorted label sequence.
    pos_label: Vec<u32>,
    /// Refinement class of each source column; columns with identical
    /// codeword incidence are interchangeable.
    col_class: Vec<usize>,
    best: Option<Best>,
    /// Automorphisms of the codeword set, seeded with cheap transposition
    /// products and extended at equal leaves of the search.
    autos: Vec<AutoGen>,
}

/// Applies a transposition of coordinates `j` and `k` to a support.
fn swap_bits(w: Support, j: usize, k: usize) -> Support {
    if (w >> j ^ w >> k) & 1 == 1 {
        w ^ (1 << j) ^ (1 << k)
    } else {
        w
    }
}

/// Ranks each key by its position among the sorted distinct keys.
fn rank_by<T: Ord>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<&T> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).unwrap() as u32).collect()
}

/// Invariant ordered column labels, refined to a fixpoint.
///
/// Labels are computed from permutation-invariant data only — the coordinate
/// block and iterated incidence signatures against the codeword list — so
/// codes related by a block-preserving column permutation receive labels
/// that correspond under that permutation, with identical label values.
/// Restricting canonical placements to label order therefore keeps the
/// canonical form complete (equivalent codes still map to one matrix) while
/// shrinking the space of placements the search has to minimise over.
fn column_labels(sig: Signature, words: &[Support]) -> Vec<u32> {
    let n = sig.n() as usize;
    let r = sig.r as usize;
    let mut profile = vec![[0u32; MAX_COORDS as usize + 1]; n];
    for &w in words {
        let weight = w.count_ones() as usize;
        for j in 0..n {
            if w >> j & 1 == 1 {
                profile[j][weight] += 1;
            }
        }
    }
    // The block comes first in the initial key, so every positive-block
    // class precedes every negative-block class; refinement only ever
    // splits classes, preserving that order.
    let init: Vec<(bool, [u32; MAX_COORDS as usize + 1])> =
        (0..n).map(|j| (j >= r, profile[j])).collect();
    let mut labels = rank_by(&init);
    let mut classes = labels.iter().collect::<HashSet<_>>().len();
    loop {
        let word_sigs: Vec<Vec<u32>> = words
            .iter()
            .map(|&w| {
                let mut v: Vec<u32> =
                    (0..n).filter(|&j| w >> j & 1 == 1).map(|j| labels[j]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let col_sigs: Vec<(u32, Vec<&Vec<u32>>)> = (0..n)
            .map(|j| {
                let mut incident: Vec<&Vec<u32>> = words
                    .iter()
                    .enumerate()
                    .filter(|(_, &w)| w >> j & 1 == 1)
                    .map(|(i, _)| &word_sigs[i])
                    .collect();
                incident.sort();
                (labels[j], incident)
            })
            .collect();
        let next = rank_by(&col_sigs);
        let next_classes = next.iter().collect::<HashSet<_>>().len();
        labels = next;
        if next_classes == classes {
            return labels;
        }
        classes = next_classes;
    }
}

/// Cheap automorphisms of the codeword set: block-preserving single and
/// double transpositions.  Column pairs are screened by their per-weight
/// incidence counts, then verified exactly.  Leaf discoveries during the
/// search extend this seed set; the generated group is what the orbit
/// pruning uses, so the seed only has to reach the bulk of the symmetry.
fn seed_autos(sig: Signature, words: &[Support]) -> Vec<AutoGen> {
    const MAX_SEEDS: usize = 128;
    const MAX_DOUBLE_TESTS: usize = 20_000;
    let n = sig.n() as usize;
    let r = sig.r as usize;
    let wordset: HashSet<Support> = words.iter().copied().collect();
    let is_auto = |swaps: &[(usize, usize)]| {
        words.iter().all(|&w| {
            let mut img = w;
            for &(j, k) in swaps {
                img = swap_bits(img, j, k);
            }
            wordset.contains(&img)
        })
    };
    let mut profile = vec![[0u32; MAX_COORDS as usize + 1]; n];
    for &w in words {
        let weight = w.count_ones() as usize;
        for j in 0..n {
            if w >> j & 1 == 1 {
                profile[j][weight] += 1;
            }
        }
    }

    let mut autos: Vec<AutoGen> = Vec::new();
    let make = |swaps: &[(usize, usize)]| {
        let mut map: Vec<u8> = (0..n as u8).collect();
        for &(j, k) in swaps {
            map.swap(j, k);
        }
        AutoGen::new(map)
    };

    // Same-block column pairs with matching weight profiles are the only
    // candidates for a transposition automorphism.
    let mut failed: Vec<(usize, usize)> = Vec::new();
    for j in 0..n {
        for k in j + 1..n {
            if (j < r) != (k < r) || profile[j] != profile[k] {
                continue;
            }
            if is_auto(&[(j, k)]) {
                if autos.len() < MAX_SEEDS {
                    autos.push(make(&[(j, k)]));
                }
            } else {
                failed.push((j, k));
            }
        }
    }
    // Products of two disjoint failed transpositions pick up pair-swap
    // symmetries (for example exchanging two coordinate pairs of a
    // standard group).  The candidate list is small after profiling.
    if failed.len() * failed.len() / 2 <= MAX_DOUBLE_TESTS {
        'doubles: for a in 0..failed.len() {
            for b in a + 1..failed.len() {
                let (j, k) = failed[a];
                let (u, v) = failed[b];
                if j == u || j == v || k == u || k == v {
                    continue;
                }
                if is_auto(&[(j, k), (u, v)]) {
                    if autos.len() >= MAX_SEEDS {
                        break 'doubles;
                    }
                    autos.push(make(&[(j, k), (u, v)]));
                }
            }
        }
    }
    autos
}

impl Searcher {
    fn new(code: &Code) -> Self {
        let sig = code.signature();
        let n = sig.n() as usize;
        let words = code.codewords();
        // Partition columns by exact incidence in the codeword list.
        let mut class_of: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut col_class = Vec::with_capacity(n);
        for j in 0..n {
            let incidence: Vec<u32> = words
                .iter()
                .enumerate()
                .filter(|(_, &w)| w >> j & 1 == 1)
                .map(|(i, _)| i as u32)
                .collect();
            let next = class_of.len();
            col_class.push(*class_of.entry(incidence).or_insert(next));
        }
        let autos = seed_autos(sig, &words);
        let labels = column_labels(sig, &words);
        let mut pos_label = labels.clone();
        pos_label.sort_unstable();
        Searcher { n, dim: code.dim(), labels, pos_label, col_class, best: None, autos }
    }

    fn not_greater_than_best(&self, node: &Node) -> bool {
        let Some(best) = &self.best else { return true };
        for (i, row) in node.rows.iter().enumerate() {
            match row.key.cmp(&best.keys[i]) {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        true
    }

    fn record_leaf(&mut self, node: &Node) {
        let keys: Vec<u32> = node.rows.iter().map(|r| r.key).collect();
        let ordering = self.best.as_ref().map(|best| keys.cmp(&best.keys));
        match ordering {
            None | Some(std::cmp::Ordering::Less) => {
                self.best = Some(Best { keys, placed: node.placed.clone() });
            }
            Some(std::cmp::Ordering::Equal) => {
                // Two placements with the same matrix differ by an
                // automorphism of the codeword set.
                let best_placed = &self.best.as_ref().unwrap().placed;
                let mut auto = vec![0u8; self.n];
                for (pos, &src) in node.placed.iter().enumerate() {
                    auto[src as usize] = best_placed[pos];
                }
                let identity = auto.iter().enumerate().all(|(i, &x)| x as usize == i);
                if !identity
                    && self.autos.len() < 256
                    && !self.autos.iter().any(|a| a.map == auto)
                {
                    self.autos.push(AutoGen::new(auto));
                }
            }
            Some(std::cmp::Ordering::Greater) => {}
        }
    }

    fn apply(&self, state: &mut Node, j: usize) -> Undo {
        let t = state.placed.len();
        let posbit = 1u32 << (self.n - 1 - t);
        state.used |= 1 << j;
        state.placed.push(j as u8);
        if let Some(idx) = state.kernel.iter().position(|&g| g >> j & 1 == 1) {
            // The projection rank grows: a kernel word becomes the new row
            // with pivot at position t, and everything is reduced by it.
            let g = state.kernel.remove(idx);
            let mut kernel_flips = 0u32;
            for (i, k) in state.kernel.iter_mut().enumerate() {
                if *k >> j & 1 == 1 {
                    *k ^= g;
                    kernel_flips |= 1 << i;
                }
            }
            let mut row_flips = 0u32;
            for (i, row) in state.rows.iter_mut().enumerate() {
                if row.combo >> j & 1 == 1 {
                    row.combo ^= g;
                    row_flips |= 1 << i;
                }
            }
            state.rows.push(Row { key: posbit, combo: g });
            Undo {
                j: j as u8,
                nonpivot_rows: 0,
                pivot: Some(PivotUndo { idx, g, kernel_flips, row_flips }),
            }
        } else {
            let mut mask = 0u32;
            for (i, row) in state.rows.iter_mut().enumerate() {
                if row.combo >> j & 1 == 1 {
                    row.key |= posbit;
                    mask |= 1 << i;
                }
            }
            Undo { j: j as u8, nonpivot_rows: mask, pivot: None }
        }
    }

    fn revert(&self, state: &mut Node, undo: Undo) {
        state.placed.pop();
        let t = state.placed.len();
        let posbit = 1u32 << (self.n - 1 - t);
        state.used &= !(1 << undo.j);
        if let Some(p) = undo.pivot {
            state.rows.pop();
            let mut rest = p.row_flips;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                state.rows[i].combo ^= p.g;
            }
            let mut rest = p.kernel_flips;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                state.kernel[i] ^= p.g;
            }
            state.kernel.insert(p.idx, p.g);
        } else {
            let mut rest = undo.nonpivot_rows;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                state.rows[i].key &= !posbit;
            }
        }
    }

    fn dfs(&mut self, state: &mut Node) {
        let t = state.placed.len();
        if t == self.n {
            self.record_leaf(state);
            return;
        }
        let want = self.pos_label[t];
        let mut raw = 0u32;
        for j in 0..self.n {
            if self.labels[j] == want && state.used >> j & 1 == 0 {
                raw |= 1 << j;
            }
        }

        // Dynamic refinement at bushy nodes: restrict the candidates to the
        // columns minimising the sorted list of (partial key, weight) over
        // the codewords through them.  The signature is a function of the
        // code and the placed prefix only, so equivalent codes keep
        // corresponding allowed placements and the canonical form is still
        // constant on equivalence classes; within one code it splits columns
        // that the global labels cannot, which is what collapses the search
        // on highly symmetric codes.
        let allowed = if t > 0 && self.dim <= 8 && raw.count_ones() >= 4 {
            let total = 1usize << self.dim;
            let mut basis = [(0u32, 0u32); 8];
            for (i, row) in state.rows.iter().enumerate() {
                basis[i] = (row.combo, row.key);
            }
            for (i, &g) in state.kernel.iter().enumerate() {
                basis[state.rows.len() + i] = (g, 0);
            }
            // Every codeword with its partial key, by Gray-code accumulation.
            let mut wpk = [(0u32, 0u32); 256];
            let mut cur = (0u32, 0u32);
            for (i, slot) in wpk.iter_mut().enumerate().take(total).skip(1) {
                let b = basis[i.trailing_zeros() as usize];
                cur = (cur.0 ^ b.0, cur.1 ^ b.1);
                *slot = cur;
            }
            let mut min_sig = [0u32; 128];
            let mut min_len = usize::MAX;
            let mut argmin = 0u32;
            let mut rest = raw;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut sig = [0u32; 128];
                let mut len = 0usize;
                for &(w, pk) in wpk.iter().take(total).skip(1) {
                    if w >> j & 1 == 1 {
                        sig[len] = pk << 5 | w.count_ones();
                        len += 1;
                    }
                }
                sig[..len].sort_unstable();
                let ord = if min_len == usize::MAX {
                    std::cmp::Ordering::Less
                } else {
                    sig[..len].cmp(&min_sig[..min_len])
                };
                match ord {
                    std::cmp::Ordering::Less => {
                        min_sig = sig;
                        min_len = len;
                        argmin = 1 << j;
                    }
                    std::cmp::Ordering::Equal => argmin |= 1 << j,
                    std::cmp::Ordering::Greater => {}
                }
            }
            argmin
        } else {
            raw
        };

        // Candidate columns: allowed columns of the current position, one per
        // refinement class (identical columns are interchangeable).
        #[derive(Clone, Copy, Default)]
        struct Cand {
            j: u8,
            eff_bits: u32,
            pivot: bool,
        }
        let mut cands = [Cand::default(); MAX_COORDS as usize];
        let mut ncands = 0usize;
        let mut seen_class = 0u32;
        for j in 0..self.n {
            if allowed >> j & 1 == 0 {
                continue;
            }
            let cls = self.col_class[j];
            if seen_class >> cls & 1 == 1 {
                continue;
            }
            seen_class |= 1 << cls;
            let mut bits = 0u32;
            for (i, row) in state.rows.iter().enumerate() {
                bits |= ((row.combo >> j) & 1) << (31 - i);
            }
            let pivot = state.kernel.iter().any(|&g| g >> j & 1 == 1);
            // A new pivot zeroes the column on the existing rows.
            let eff_bits = if pivot { 0 } else { bits };
            cands[ncands] = Cand { j: j as u8, eff_bits, pivot };
            ncands += 1;
        }
        // Prefer writing zeros on the existing rows and postponing pivots.
        cands[..ncands].sort_unstable_by_key(|c| (c.eff_bits, c.pivot, c.j));

        // Collapse candidates lying in one orbit of the known automorphisms
        // that fix the placed columns pointwise.
        let mut orbit = UnionFind::new(self.n);
        let mut has_active = false;
        for a in self.autos.iter().filter(|a| state.used & !a.fixed == 0) {
            has_active = true;
            for j in 0..self.n {
                orbit.union(j, a.map[j] as usize);
            }
        }

        let mut seen_orbits = 0u32;
        for cand in &cands[..ncands] {
            if has_active {
                let root = orbit.find(cand.j as usize);
                if seen_orbits >> root & 1 == 1 {
                    continue;
                }
                seen_orbits |= 1 << root;
            }
            let undo = self.apply(state, cand.j as usize);
            if self.not_greater_than_best(state) {
                self.dfs(state);
            }
            self.revert(state, undo);
        }
    }
}

/// Fixed-size union-find over column indices, kept on the stack.
struct UnionFind {
    parent: [u8; MAX_COORDS as usize],
}

impl UnionFind {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_COORDS as usize];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        UnionFind { parent }
    }
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] as usize != i {
            self.parent[i] = self.parent[self.parent[i] as usize];
            i = self.parent[i] as usize;
        }
        i
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb as u8;
        }
    }
}

/// Canonical representative of the code together with a permutation
/// realising it.
///
/// The returned permutation maps source coordinates to target coordinates:
/// applying it to the input code yields the canonical code.  When two codes
/// are equivalent, composing one transcript with the inverse of the other
/// produces an explicit equivalence between them.
pub fn canonical_form_with_perm(code: &Code) -> (Code, ColPerm) {
    let sig = code.signature();
    let n = sig.n() as usize;
    if code.dim() == 0 {
        return (Code::empty(sig), ColPerm::identity(n));
    }
    let mut searcher = Searcher::new(code);
    let mut root = Node {
        rows: Vec::with_capacity(code.dim()),
        kernel: code.basis().to_vec(),
        placed: Vec::with_capacity(n),
        used: 0,
    };
    searcher.dfs(&mut root);
    let best = searcher.best.expect("search visits at least one leaf");
    let basis: Vec<Support> = best.keys.iter().map(|&k| key_to_support(k, n)).collect();
    debug_assert_eq!(rref(basis.iter().copied()), basis, "canonical rows not in echelon form");
    let canonical = Code::try_from_basis(sig, &basis).expect("canonical basis is independent");
    let mut map = vec![0u32; n];
    for (pos, &src) in best.placed.iter().enumerate() {
        map[src as usize] = pos as u32;
    }
    let perm = ColPerm::from_map(map);
    debug_assert!(perm.preserves_blocks(sig));
    debug_assert_eq!(apply_perm(code, &perm), canonical);
    (canonical, perm)
}

/// Canonical representative of the equivalence class of the code.
pub fn canonical_form(code: &Code) -> Code {
    canonical_form_with_perm(code).0
}

/// Whether two codes of the same signature are equivalent under
/// block-preserving coordinate permutations.
pub fn are_equivalent(a: &Code, b: &Code) -> bool {
    a.signature() == b.signature() && canonical_form(a) == canonical_form(b)
}

/// Error building a standard group code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StandardGroupError {
    /// The requested numbers of pairs do not fit the signature.
    #[error("standard group with {pbar} positive and {nbar} negative pairs needs signature at least ({},{}), got {sig}", 2 * pbar, 2 * nbar)]
    DoesNotFit {
        /// Requested positive pairs.
        pbar: u32,
        /// Requested negative pairs.
        nbar: u32,
        /// Actual signature.
        sig: Signature,
    },
}

/// Code of the standard group with `pbar` positive and `nbar` negative
/// coordinate pairs.
///
/// The group is generated by the products of the first positive pair with
/// every other pair: `π_{1,2} π_{2a-1,2a}` for `2 <= a <= pbar` and
/// `π_{1,2} ν_{2b-1,2b}` for `1 <= b <= nbar` (with `ν` ranging over the
/// negative pairs), giving a code of dimension `pbar + nbar - 1`.  When
/// `pbar = 0` the negative pairs play the anchor role instead.
pub fn standard_group(sig: Signature, pbar: u32, nbar: u32) -> Result<Code, StandardGroupError> {
    if 2 * pbar > sig.r || 2 * nbar > sig.s || pbar + nbar == 0 {
        return Err(StandardGroupError::DoesNotFit { pbar, nbar, sig });
    }
    let pos_pair = |a: u32| -> Support {
        // Pair {z_{2a-1}, z_{2a}} of positive coordinates, 1-based `a`.
        (1 << (2 * a - 2)) | (1 << (2 * a - 1))
    };
    let neg_pair = |b: u32| -> Support {
        // Pair {z_{r+2b-1}, z_{r+2b}} of negative coordinates, 1-based `b`.
        (1 << (sig.r + 2 * b - 2)) | (1 << (sig.r + 2 * b - 1))
    };
    let anchor = if pbar > 0 { pos_pair(1) } else { neg_pair(1) };
    let mut words = Vec::new();
    for a in 2..=pbar {
        words.push(anchor | pos_pair(a));
    }
    let first_b = if pbar > 0 { 1 } else { 2 };
    for b in first_b..=nbar {
        words.push(anchor | neg_pair(b));
    }
    Code::try_from_basis(sig, &words).map_err(|_| StandardGroupError::DoesNotFit {
        pbar,
        nbar,
        sig,
    })
}

/// One equivalence class of maximal admissible codes.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    /// Deterministic identifier `S1`, `S2`, ... within the signature.
    pub id: String,
    /// Canonical representative code.
    pub canonical_code: Code,
    /// Weight and support statistics of the class.
    pub stats: CodeStats,
    /// Number of connected components of the support.
    pub pi0: usize,
    /// The component partition itself.
    pub partition: SupportPartition,
    /// Label of the matching row of the published tables, when matched.
    pub paper_label: Option<String>,
}

impl ClassRecord {
    /// Basis of the canonical code as monomial strings.
    pub fn canonical_basis_strings(&self) -> Vec<String> {
        self.canonical_code
            .basis()
            .iter()
            .map(|&w| Monomial::positive(w).to_string())
            .collect()
    }
}

/// Classification of all maximal admissible codes of one signature.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    /// Signature that was classified.
    pub signature: Signature,
    /// Dimension of maximal admissible codes.
    pub ell: u32,
    /// Equivalence classes sorted by `(pi0, -supp_size, canonical key)`.
    pub classes: Vec<ClassRecord>,
}

impl ClassificationReport {
    /// Number of classes per `π_0` value.
    pub fn counts_by_pi0(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for class in &self.classes {
            *counts.entry(class.pi0).or_insert(0) += 1;
        }
        counts
    }

    /// Class record by identifier.
    pub fn class(&self, id: &str) -> Option<&ClassRecord> {
        self.classes.iter().find(|c| c.id == id)
    }

    /// JSON form of the report.
    pub fn to_json(&self) -> serde_json::Value {
        let classes: Vec<serde_json::Value> = self
            .classes
            .iter()
            .map(|class| {
                let enumerators: serde_json::Map<String, serde_json::Value> = class
                    .stats
                    .block_weight_enumerators
                    .iter()
                    .map(|(&(p, q), &count)| (format!("{p},{q}"), count.into()))
                    .collect();
                let mut obj = serde_json::Map::new();
                obj.insert("id".into(), class.id.clone().into());
                obj.insert(
                    "canonical_basis".into(),
                    class.canonical_basis_strings().into(),
                );
                obj.insert("supp_size".into(), class.stats.supp_size.into());
                obj.insert("pi0".into(), class.pi0.into());
                obj.insert("t2_type".into(), class.stats.is_t2_type.into());
                obj.insert("block_weight_enum".into(), enumerators.into());
                if let Some(label) = &class.paper_label {
                    obj.insert("paper_label".into(), label.clone().into());
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let counts: serde_json::Map<String, serde_json::Value> = self
            .counts_by_pi0()
            .into_iter()
            .map(|(pi0, count)| (pi0.to_string(), count.into()))
            .collect();
        serde_json::json!({
            "signature": { "r": self.signature.r, "s": self.signature.s },
            "ell": self.ell,
            "classes": classes,
            "counts_by_pi0": counts,
        })
    }

    /// CSV form: one row per class with the same fields as the JSON form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "id,r,s,ell,pi0,supp_size,supp_pos,supp_neg,t2_type,paper_label,canonical_basis,block_weight_enum\n",
        );
        for class in &self.classes {
            let basis = class.canonical_basis_strings().join(";");
            let enumerators = class
                .stats
                .block_weight_enumerators
                .iter()
                .map(|(&(p, q), &count)| format!("{p}.{q}:{count}"))
                .collect::<Vec<_>>()
                .join("|");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                class.id,
                self.signature.r,
                self.signature.s,
                self.ell,
                class.pi0,
                class.stats.supp_size,
                class.stats.supp_pos,
                class.stats.supp_neg,
                class.stats.is_t2_type,
                class.paper_label.as_deref().unwrap_or(""),
                basis,
                enumerators,
            ));
        }
        out
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "signature {} — {} class(es) of maximal admissible codes, dimension {}\n",
            self.signature,
            self.classes.len(),
            self.ell
        );
        for class in &self.classes {
            let label = class
                .paper_label
                .as_deref()
                .map(|l| format!(" [{l}]"))
                .unwrap_or_default();
            out.push_str(&format!(
                "  {}{}: pi0={} supp={} t2={} basis {{{}}}\n",
                class.id,
                label,
                class.pi0,
                class.stats.supp_size,
                class.stats.is_t2_type,
                class.canonical_basis_strings().join(", "),
            ));
        }
        let counts = self
            .counts_by_pi0()
            .into_iter()
            .map(|(pi0, count)| format!("pi0={pi0}: {count}"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("  counts: {counts}\n"));
        out
    }
}

/// All codewords spanned by an echelon basis, in deterministic order.
fn span_words(basis: &[Support]) -> Vec<Support> {
    let mut words = Vec::with_capacity(1 << basis.len());
    words.push(0);
    for &b in basis {
        for i in 0..words.len() {
            words.push(words[i] ^ b);
        }
    }
    words
}

/// Whether a word lies in the span of an echelon basis.
fn span_contains(basis: &[Support], word: Support) -> bool {
    let mut w = word;
    for &b in basis {
        if w >> b.trailing_zeros() & 1 == 1 {
            w ^= b;
        }
    }
    w == 0
}

/// Whether the child span can still grow into a maximal code.
///
/// Any maximal code containing the child contributes `2^ell - 2^dim` words
/// outside the child, each of which extends the child, and together with
/// the child they span the full `ell` dimensions.  Counting the extension
/// words (computed from the parent's extension set: `w` extends the child
/// iff both `w` and `w ^ w0` extend the parent and `w` is outside the
/// child) therefore gives a sound dead-end test.
fn has_potential(
    child: &[Support],
    ext_words: &[Support],
    ext_bits: &[bool],
    w0: Support,
    needed: usize,
    target_dim: usize,
) -> bool {
    let mut count = 0usize;
    // Echelon rows (ascending pivots) of child + accepted extension words.
    let mut rows: Vec<Support> = child.to_vec();
    rows.sort_by_key(|g| g.trailing_zeros());
    for &w in ext_words {
        if !ext_bits[(w ^ w0) as usize] || span_contains(child, w) {
            continue;
        }
        count += 1;
        if rows.len() < target_dim {
            let mut x = w;
            for &g in &rows {
                if x >> g.trailing_zeros() & 1 == 1 {
                    x ^= g;
                }
            }
            if x != 0 {
                let pos = rows.partition_point(|g| g.trailing_zeros() < x.trailing_zeros());
                rows.insert(pos, x);
            }
        }
        if count >= needed && rows.len() >= target_dim {
            return true;
        }
    }
    count >= needed && rows.len() >= target_dim
}

/// Enumerates all equivalence classes of maximal admissible codes.
///
/// The enumeration is orderly: level `d` holds one canonical representative
/// per class of `d`-dimensional admissible codes, and level `d + 1` is
/// produced by extending every representative by all admissible words that
/// are minimal in their coset, then canonicalising and deduplicating.  Every
/// subcode of an admissible code is admissible, so each class of maximal
/// codes is reached.  The result is deterministic and independent of thread
/// scheduling.
pub fn enumerate_maximal(sig: Signature) -> ClassificationReport {
    let target_dim = ell(sig);
    let full = sig.full_mask();
    let admissible: Vec<bool> =
        (0..=full as usize).map(|w| codeword_admissible(w as Support, sig)).collect();
    let stats = std::env::var_os("HTLIE_ENUM_STATS").is_some();

    let mut level: Vec<Vec<Support>> = vec![Vec::new()];
    for depth in 0..target_dim {
        let t0 = std::time::Instant::now();
        let needed = (1usize << target_dim) - (2usize << depth);
        let extended: Vec<Vec<Vec<Support>>> = level
            .par_iter()
            .map(|basis| {
                let words = span_words(basis);
                // Automorphisms of the parent make extension cosets in one
                // orbit produce equivalent children, so only the orbit-least
                // coset needs to be built and canonicalised.
                let parent_autos = seed_autos(sig, &words);
                // Words that extend this span: admissible, outside the
                // span, and keeping the whole extended coset admissible.
                // These are exactly the words any admissible supercode can
                // add, so they bound every further extension too.
                let mut ext_words: Vec<Support> = Vec::new();
                let mut ext_bits = vec![false; full as usize + 1];
                'next_word: for w in 1..=full {
                    if !admissible[w as usize] || span_contains(basis, w) {
                        continue;
                    }
                    for &c in &words[1..] {
                        if !admissible[(w ^ c) as usize] {
                            continue 'next_word;
                        }
                    }
                    ext_words.push(w);
                    ext_bits[w as usize] = true;
                }
                let coset_min = |w: Support| words.iter().map(|&c| w ^ c).min().unwrap();
                let mut spans: HashSet<Vec<Support>> = HashSet::new();
                'next_cand: for &w0 in &ext_words {
                    // Keep only the numerically least word of the coset
                    // w0 + span, so each extension span is built once.
                    for &c in &words[1..] {
                        if (w0 ^ c) < w0 {
                            continue 'next_cand;
                        }
                    }
                    // Walk the orbit of the coset under the parent's seeded
                    // automorphisms; skip w0 if any image has a smaller
                    // coset representative.  Giving up at the cap only
                    // permits a duplicate, which canonicalisation removes.
                    if !parent_autos.is_empty() {
                        let mut seen: HashSet<Support> = HashSet::from([w0]);
                        let mut stack = vec![w0];
                        let mut budget = 4000usize;
                        'walk: while let Some(x) = stack.pop() {
                            for a in &parent_autos {
                                if budget == 0 {
                                    break 'walk;
                                }
                                budget -= 1;
                                let mut img = 0 as Support;
                                let mut rest = x;
                                while rest != 0 {
                                    let i = rest.trailing_zeros() as usize;
                                    rest &= rest - 1;
                                    img |= 1 << a.map[i];
                                }
                                let tag = coset_min(img);
                                if tag < w0 {
                                    continue 'next_cand;
                                }
                                if seen.insert(tag) {
                                    stack.push(tag);
                                }
                            }
                        }
                    }
                    let child = rref(basis.iter().copied().chain([w0]));
                    if depth + 1 < target_dim
                        && !has_potential(
                            &child,
                            &ext_words,
                            &ext_bits,
                            w0,
                            needed,
                            target_dim as usize,
                        )
                    {
                        continue;
                    }
                    spans.insert(child);
                }
                let mut spans: Vec<Vec<Support>> = spans.into_iter().collect();
                spans.sort();
                spans
            })
            .collect();

        let mut distinct: HashSet<Vec<Support>> = HashSet::new();
        for spans in extended {
            distinct.extend(spans);
        }
        let mut distinct: Vec<Vec<Support>> = distinct.into_iter().collect();
        distinct.sort();
        let t_extend = t0.elapsed();

        let t1 = std::time::Instant::now();
        let canonical: Vec<Vec<Support>> = distinct
            .par_iter()
            .map(|basis| {
                let code = Code::try_from_basis(sig, basis).expect("echelon basis is independent");
                canonical_form(&code).basis().to_vec()
            })
            .collect();
        let n_canon = distinct.len();
        let mut next: Vec<Vec<Support>> = canonical
            .into_iter()
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        next.sort();
        let t_canon = t1.elapsed();
        if stats {
            eprintln!(
                "[enum {}] level {} -> {}: {} parents, {} distinct spans, {} classes, extend {:?}, canon {:?}",
                sig,
                depth,
                depth + 1,
                level.len(),
                n_canon,
                next.len(),
                t_extend,
                t_canon,
            );
        }
        level = next;
    }

    let n = sig.n() as usize;
    let mut keyed: Vec<(usize, std::cmp::Reverse<u32>, Vec<u32>, ClassRecord)> = level
        .into_iter()
        .map(|basis| {
            let code = Code::try_from_basis(sig, &basis).expect("canonical basis is independent");
            debug_assert!(is_admissible_code(&code));
            let stats = code_stats(&code);
            let (components, partition) = pi0(&code);
            let key = matrix_key(&basis, n);
            let record = ClassRecord {
                id: String::new(),
                canonical_code: code,
                stats,
                pi0: components,
                partition,
                paper_label: None,
            };
            (components, std::cmp::Reverse(record.stats.supp_size), key, record)
        })
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    let classes: Vec<ClassRecord> = keyed
        .into_iter()
        .enumerate()
        .map(|(i, (_, _, _, mut record))| {
            record.id = format!("S{}", i + 1);
            record
        })
        .collect();

    ClassificationReport { signature: sig, ell: target_dim, classes }
}

/// Rows of the published classification tables: `(r, label, generators)`.
///
/// Each row lists the supports of one representative generator set of a
/// class of maximal groups for signature `(r, 0)`; the same lists represent
/// the classes for `(r, 1)`.
pub(crate) const PAPER_ROWS: &[(u32, &str, &[&str])] = &[
    (3, "S^(1)", &["z1.z2.z3"]),
    (4, "S^(1)", &["z1.z2.z3.z4"]),
    (4, "S^(2)", &["z1.z2.z3"]),
    (5, "S^(1)", &["z1.z2.z3.z4", "z1.z3.z5"]),
    (6, "S^(1)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5"]),
    (7, "S^(1)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7"]),
    (8, "S^(1)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7"]),
    (8, "S^(2)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7"]),
    (9, "S^(1)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9"]),
    (9, "S^(2)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7"]),
    (9, "S^(3)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7"]),
    (10, "S^(1)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9.z10"]),
    (10, "S^(2)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9"]),
    (10, "S^(3)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7"]),
    (10, "S^(4)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7"]),
    (10, "S^(5)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z8.z9.z10"]),
    (10, "S^(6)", &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5", "z7.z8.z9.z10"]),
    (
        11,
        "S^(1)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9.z10", "z1.z2.z11"],
    ),
    (
        11,
        "S^(2)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7", "z9.z10.z11"],
    ),
    (
        11,
        "S^(3)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7", "z8.z9.z10.z11"],
    ),
    (
        12,
        "S^(1)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9.z10", "z1.z2.z11.z12"],
    ),
    (
        12,
        "S^(2)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9.z10", "z1.z3.z5.z7.z9.z11.z12"],
    ),
    (
        12,
        "S^(3)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z2.z9.z10", "z1.z2.z11"],
    ),
    (
        12,
        "S^(4)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7", "z9.z10.z11.z12"],
    ),
    (
        12,
        "S^(5)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z8.z9.z10.z11", "z8.z9.z12"],
    ),
    (
        12,
        "S^(6)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5", "z7.z8.z9.z10", "z7.z8.z11.z12"],
    ),
    (
        12,
        "S^(7)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z2.z7.z8", "z1.z3.z5.z7", "z9.z10.z11"],
    ),
    (
        12,
        "S^(8)",
        &["z1.z2.z3.z4", "z1.z2.z5.z6", "z1.z3.z5.z7", "z1.z2.z7", "z8.z9.z10.z11"],
    ),
    (
        13,
        "S^(1)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z2.z13",
        ],
    ),
    (
        13,
        "S^(2)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z3.z5.z7.z9.z11.z13",
        ],
    ),
    (
        13,
        "S^(3)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z3.z5.z7.z9.z11.z12.z13",
            "z1.z2.z12",
        ],
    ),
    (
        13,
        "S^(4)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z3.z5.z7",
            "z9.z10.z11.z12",
            "z9.z10.z13",
        ],
    ),
    (
        13,
        "S^(5)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z3.z5.z7",
            "z1.z2.z7",
            "z8.z9.z10.z11",
            "z8.z9.z12.z13",
        ],
    ),
    (
        13,
        "S^(6)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z3.z5.z7",
            "z8.z9.z10.z11",
            "z8.z9.z12.z13",
            "z8.z10.z12",
        ],
    ),
    (
        14,
        "S^(1)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z2.z13.z14",
            "z1.z3.z5.z7.z9.z11.z13",
        ],
    ),
    (
        14,
        "S^(2)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z3.z5.z7.z9.z11.z13.z14",
            "z1.z2.z14",
        ],
    ),
    (
        14,
        "S^(3)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z3.z5.z7",
            "z9.z10.z11.z12",
            "z9.z10.z13.z14",
            "z9.z11.z13",
        ],
    ),
    (
        14,
        "S^(4)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z3.z5.z7",
            "z1.z2.z7",
            "z8.z9.z10.z11",
            "z8.z9.z12.z13",
            "z9.z11.z13.z14",
        ],
    ),
    (
        15,
        "S^(1)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z2.z13.z14",
            "z1.z3.z5.z7.z9.z11.z13.z15",
            "z1.z2.z15",
        ],
    ),
    (
        15,
        "S^(2)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z3.z5.z7",
            "z9.z10.z11.z12",
            "z9.z10.z13.z14",
            "z9.z11.z13.z15",
            "z9.z10.z15",
        ],
    ),
    (
        16,
        "S^(1)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z2.z13.z14",
            "z1.z3.z5.z7.z9.z11.z13.z15",
            "z1.z2.z15.z16",
        ],
    ),
    (
        16,
        "S^(2)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z2.z9.z10",
            "z1.z2.z11.z12",
            "z1.z2.z13.z14",
            "z1.z3.z5.z7.z9.z11.z13.z15",
            "z1.z2.z15",
        ],
    ),
    (
        16,
        "S^(3)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z3.z5.z7",
            "z9.z10.z11.z12",
            "z9.z10.z13.z14",
            "z9.z10.z15.z16",
            "z9.z11.z13.z15",
        ],
    ),
    (
        16,
        "S^(4)",
        &[
            "z1.z2.z3.z4",
            "z1.z2.z5.z6",
            "z1.z2.z7.z8",
            "z1.z3.z5.z7",
            "z9.z10.z11.z12",
            "z9.z10.z13.z14",
            "z9.z11.z13.z15",
            "z9.z10.z15",
        ],
    ),
];

/// The published generator lists for signature `(r, s)`, `s <= 1`.
pub fn paper_rows(r: u32) -> Vec<(&'static str, Vec<Support>)> {
    PAPER_ROWS
        .iter()
        .filter(|(row_r, _, _)| *row_r == r)
        .map(|(_, label, gens)| {
            let supports = gens
                .iter()
                .map(|g| g.parse::<Monomial>().expect("table entry parses").support())
                .collect();
            (*label, supports)
        })
        .collect()
}

/// Error matching a classification against the published tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    /// The signature has no published table.
    #[error("no published table for signature {0}")]
    NotCovered(Signature),
    /// The matching failed; all problems are listed.
    #[error("table mismatch for signature {sig}: {}", problems.join("; "))]
    Mismatch {
        /// Signature being matched.
        sig: Signature,
        /// Every failed row or unmatched class.
        problems: Vec<String>,
    },
}

/// Matches the classes of a report against the published generator tables.
///
/// Every published row for the signature must land in exactly one class and
/// every class must be hit by exactly one row; the labels are recorded on
/// the report.  All violations are reported together, none are dropped.
pub fn match_paper_tables(report: &mut ClassificationReport) -> Result<(), MatchError> {
    let sig = report.signature;
    if !(3..=16).contains(&sig.r) || sig.s > 1 {
        return Err(MatchError::NotCovered(sig));
    }
    let rows = paper_rows(sig.r);
    let mut problems: Vec<String> = Vec::new();
    let mut assignment: Vec<Option<String>> = vec![None; report.classes.len()];
    for (label, supports) in rows {
        let code = match Code::try_from_basis(sig, &supports) {
            Ok(code) => code,
            Err(e) => {
                problems.push(format!("row {label}: invalid generator list ({e})"));
                continue;
            }
        };
        if !is_admissible_code(&code) {
            problems.push(format!("row {label}: code is not admissible"));
            continue;
        }
        if code.dim() as u32 != report.ell {
            problems.push(format!(
                "row {label}: dimension {} does not match ell {}",
                code.dim(),
                report.ell
            ));
            continue;
        }
        let canonical = canonical_form(&code);
        match report.classes.iter().position(|c| c.canonical_code == canonical) {
            None => problems.push(format!("row {label}: no enumerated class matches")),
            Some(i) => match &assignment[i] {
                Some(previous) => problems.push(format!(
                    "row {label}: matches class {} already claimed by row {previous}",
                    report.classes[i].id
                )),
                None => assignment[i] = Some(label.to_string()),
            },
        }
    }
    for (i, label) in assignment.iter().enumerate() {
        if label.is_none() {
            problems.push(format!(
                "class {}: not matched by any published row",
                report.classes[i].id
            ));
        }
    }
    if !problems.is_empty() {
        return Err(MatchError::Mismatch { sig, problems });
    }
    for (class, label) in report.classes.iter_mut().zip(assignment) {
        class.paper_label = label;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::ell;

    fn sig(r: u32, s: u32) -> Signature {
        Signature::new(r, s).unwrap()
    }

    fn supp(indices: &[u32]) -> Support {
        indices.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
    }

    fn code(sig: Signature, words: &[Support]) -> Code {
        Code::try_from_basis(sig, words).unwrap()
    }

    /// All block-preserving permutations of a signature, for oracle use.
    fn all_block_perms(sig: Signature) -> Vec<ColPerm> {
        fn perms(k: usize) -> Vec<Vec<u32>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in perms(k - 1) {
                for pos in 0..k {
                    let mut p = rest.clone();
                    p.insert(pos, (k - 1) as u32);
                    out.push(p);
                }
            }
            out
        }
        let r = sig.r as usize;
        let n = sig.n() as usize;
        let mut out = Vec::new();
        for pos_perm in perms(r) {
            for neg_perm in perms(n - r) {
                let mut map = pos_perm.clone();
                map.extend(neg_perm.iter().map(|&i| i + r as u32));
                out.push(ColPerm::from_map(map));
            }
        }
        out
    }


    #[test]
    fn perm_application_and_composition() {
        let perm = ColPerm::from_map(vec![2, 0, 1, 3]);
        assert_eq!(perm.apply_support(0b0011), 0b0101);
        assert_eq!(perm.inverse().apply_support(0b0101), 0b0011);
        let id = perm.then(&perm.inverse());
        assert_eq!(id, ColPerm::identity(4));
        assert!(perm.preserves_blocks(sig(4, 0)));
        assert!(!perm.preserves_blocks(sig(2, 2)));
        assert!(ColPerm::from_map(vec![1, 0, 3, 2]).preserves_blocks(sig(2, 2)));
    }

    #[test]
    fn canonical_form_right_aligns_a_single_word() {
        let c = code(sig(4, 0), &[supp(&[1, 2, 3])]);
        let canonical = canonical_form(&c);
        assert_eq!(canonical.basis(), &[supp(&[2, 3, 4])]);
    }

    #[test]
    fn canonical_form_is_invariant_under_block_perms() {
        let examples = [
            code(sig(7, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6]), supp(&[1, 3, 5, 7])]),
            code(sig(6, 1), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6])]),
            code(sig(5, 2), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 6, 7])]),
            code(sig(7, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 7])]),
        ];
        for c in examples {
            let canonical = canonical_form(&c);
            for perm in all_block_perms(c.signature()) {
                let permuted = apply_perm(&c, &perm);
                assert_eq!(canonical_form(&permuted), canonical, "perm {perm:?}");
            }
        }
    }

    #[test]
    fn canonical_form_constant_and_reachable_on_full_orbits() {
        // Oracle check by exhaustion: the canonical form is one and the same
        // matrix for every block-preserving relabelling of the code, and is
        // itself a relabelled copy, so it picks exactly one representative
        // from each equivalence class.
        let examples = [
            code(sig(4, 0), &[supp(&[1, 2, 3, 4])]),
            code(sig(4, 0), &[supp(&[1, 2, 3])]),
            code(sig(5, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 3, 5])]),
            code(sig(6, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6]), supp(&[1, 3, 5])]),
            code(sig(7, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6]), supp(&[1, 3, 5, 7])]),
            code(sig(4, 2), &[supp(&[1, 2, 5, 6]), supp(&[3, 4, 5, 6])]),
            code(sig(3, 3), &[supp(&[1, 2, 4, 5]), supp(&[2, 3, 5, 6])]),
            code(sig(7, 0), &[supp(&[1, 2, 3, 4]), supp(&[5, 6, 7])]),
        ];
        for c in examples {
            let canonical = canonical_form(&c);
            let mut reachable = false;
            for perm in all_block_perms(c.signature()) {
                let permuted = apply_perm(&c, &perm);
                assert_eq!(canonical_form(&permuted), canonical, "code {:?}", c.basis());
                reachable |= permuted == canonical;
            }
            assert!(reachable, "canonical form of {:?} is not a relabelled copy", c.basis());
        }
    }

    #[test]
    fn transcript_permutation_realises_the_canonical_form() {
        let c = code(sig(7, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6]), supp(&[1, 2, 7])]);
        let (canonical, perm) = canonical_form_with_perm(&c);
        assert!(perm.preserves_blocks(c.signature()));
        assert_eq!(apply_perm(&c, &perm), canonical);
    }

    #[test]
    fn equivalence_detects_relabelled_codes() {
        let a = code(sig(8, 0), &[supp(&[1, 2, 3, 4]), supp(&[5, 6, 7, 8])]);
        let b = code(sig(8, 0), &[supp(&[1, 3, 5, 7]), supp(&[2, 4, 6, 8])]);
        assert!(are_equivalent(&a, &b));
        let c = code(sig(8, 0), &[supp(&[1, 2, 3, 4]), supp(&[1, 2, 5, 6])]);
        assert!(!are_equivalent(&a, &c));
    }

    #[test]
    fn standard_group_codes() {
        // Two positive pairs: one generator {1,2,3,4}.
        let std2 = standard_group(sig(4, 0), 2, 0).unwrap();
        assert_eq!(std2.basis(), &[supp(&[1, 2, 3, 4])]);
        // Three positive pairs in (8,0).
        let std3 = standard_group(sig(8, 0), 3, 0).unwrap();
        assert_eq!(std3.dim(), 2);
        assert!(is_admissible_code(&std3));
        // Mixed pairs in (2,2).
        let mixed = standard_group(sig(2, 2), 1, 1).unwrap();
        assert_eq!(mixed.basis(), &[supp(&[1, 2, 3, 4])]);
        assert!(is_admissible_code(&mixed));
        // Negative pairs only.
        let neg = standard_group(sig(0, 4), 0, 2).unwrap();
        assert_eq!(neg.basis(), &[supp(&[1, 2, 3, 4])]);
        // Does not fit.
        assert!(standard_group(sig(3, 0), 2, 0).is_err());
        assert!(standard_group(sig(4, 0), 0, 0).is_err());
    }

    #[test]
    fn enumeration_of_small_signatures() {
        let report = enumerate_maximal(sig(3, 0));
        assert_eq!(report.ell, 1);
        assert_eq!(report.classes.len(), 1);
        assert_eq!(report.classes[0].canonical_code.basis(), &[supp(&[1, 2, 3])]);

        let report = enumerate_maximal(sig(4, 0));
        assert_eq!(report.classes.len(), 2);
        assert_eq!(report.counts_by_pi0(), BTreeMap::from([(1, 2)]));

        let report = enumerate_maximal(sig(7, 0));
        assert_eq!(report.ell, 4);
        assert_eq!(report.classes.len(), 1);

        let report = enumerate_maximal(sig(8, 0));
        assert_eq!(report.classes.len(), 2);
    }

    #[test]
    fn enumeration_of_trivial_signatures_yields_the_empty_class() {
        for (r, s) in [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (0, 2)] {
            let report = enumerate_maximal(sig(r, s));
            assert_eq!(report.ell, 0, "({r},{s})");
            assert_eq!(report.classes.len(), 1, "({r},{s})");
            assert_eq!(report.classes[0].canonical_code.dim(), 0);
            assert_eq!(report.classes[0].pi0, 0);
        }
    }

    #[test]
    fn class_ids_are_sorted_by_pi0_then_support() {
        let report = enumerate_maximal(sig(10, 0));
        let mut last = (0usize, u32::MAX);
        for class in &report.classes {
            let key = (class.pi0, u32::MAX - class.stats.supp_size);
            assert!(key >= last, "classes out of order");
            last = key;
        }
        assert_eq!(report.counts_by_pi0(), BTreeMap::from([(1, 4), (2, 2)]));
    }

    #[test]
    fn published_rows_have_maximal_dimension() {
        for &(r, label, gens) in PAPER_ROWS {
            assert_eq!(gens.len() as u32, ell(sig(r, 0)), "row {label} of r={r}");
        }
        let counts: BTreeMap<u32, usize> =
            PAPER_ROWS.iter().fold(BTreeMap::new(), |mut acc, (r, _, _)| {
                *acc.entry(*r).or_insert(0) += 1;
                acc
            });
        let expected: BTreeMap<u32, usize> = [
            (3, 1),
            (4, 2),
            (5, 1),
            (6, 1),
            (7, 1),
            (8, 2),
            (9, 3),
            (10, 6),
            (11, 3),
            (12, 8),
            (13, 6),
            (14, 4),
            (15, 2),
            (16, 4),
        ]
        .into_iter()
        .collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn tables_match_for_r8() {
        let mut report = enumerate_maximal(sig(8, 0));
        match_paper_tables(&mut report).unwrap();
        let labels: Vec<Option<&str>> =
            report.classes.iter().map(|c| c.paper_label.as_deref()).collect();
        assert!(labels.iter().all(|l| l.is_some()));
        // The first class must be the T1 code (larger support), the second
        // the T2 one.
        assert!(!report.classes[0].stats.is_t2_type);
        assert!(report.classes[1].stats.is_t2_type);
    }

    #[test]
    fn tables_not_covered_outside_range() {
        let mut report = enumerate_maximal(sig(2, 0));
        assert_eq!(
            match_paper_tables(&mut report),
            Err(MatchError::NotCovered(sig(2, 0)))
        );
        let mut report = enumerate_maximal(sig(3, 2));
        assert!(matches!(match_paper_tables(&mut report), Err(MatchError::NotCovered(_))));
    }

    #[test]
    fn report_serialisations_are_stable() {
        let mut report = enumerate_maximal(sig(4, 0));
        match_paper_tables(&mut report).unwrap();
        let json = report.to_json();
        assert_eq!(json["signature"]["r"], 4);
        assert_eq!(json["ell"], 1);
        assert_eq!(json["classes"].as_array().unwrap().len(), 2);
        assert_eq!(json["classes"][0]["id"], "S1");
        assert_eq!(json["classes"][0]["canonical_basis"][0], "z1.z2.z3.z4");
        assert_eq!(json["counts_by_pi0"]["1"], 2);
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("S1,4,0,1,1,4,4,0,false,S^(1)"));
        let text = report.to_text();
        assert!(text.contains("S1"));
        assert!(text.contains("pi0=1"));
    }
}
