//! Code equivalence and automorphism groups of binary codes by
//! partition-refinement backtracking, and the orbit machinery built on
//! top: conjugacy classes of fixed-point-free automorphisms, the
//! two-stage orbit-representative computation, transversal fusion, and
//! the classification of self-dual codes of small length.
//!
//! The refinement invariant is incidence with shells of low-weight
//! codewords. Soundness never depends on the shells: every candidate
//! permutation is checked against the code itself at the leaves.

use crate::bits::{self, BitVec};
use crate::decomp;
use crate::gf2::{self, BinaryCode, DEFAULT_ENUM_DIM};
use crate::perm::{
    action_on_blocks, conjugacy_representatives, conjugating_element, fpf_elements_of_order,
    natural_lift, patterns, GroupKind, PermGroup, Permutation,
};
use crate::{Error, Result};
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;

/// The automorphism group of a code: the setwise stabilizer in the
/// symmetric group on the coordinates.
pub struct AutGroup {
    pub code: BinaryCode,
    pub group: PermGroup,
}

fn h64(value: impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Shells of low-weight codewords used as the refinement structure.
struct Structure {
    n: usize,
    word_class: Vec<u32>,
    supports: Vec<Vec<usize>>,
    point_words: Vec<Vec<usize>>,
    shell_weights: Vec<(usize, usize)>, // (weight, count), ascending
}

const WORD_CAP: usize = 100_000;

/// Collects codeword shells by increasing weight until they number at
/// least `n` and span the code. Returns `None` for the zero code and the
/// full space, whose automorphism group is all of Sₙ.
fn shell_structure(code: &BinaryCode) -> Result<Option<Structure>> {
    let n = code.length();
    let k = code.dimension();
    if k == 0 || k == n {
        return Ok(None);
    }
    let mut by_weight: BTreeMap<usize, Vec<BitVec>> = BTreeMap::new();
    code.for_each_codeword(DEFAULT_ENUM_DIM, |w| {
        let wt = w.weight();
        if wt > 0 {
            by_weight.entry(wt).or_default().push(w.clone());
        }
        ControlFlow::Continue(())
    })?;
    let mut words: Vec<BitVec> = Vec::new();
    let mut word_class: Vec<u32> = Vec::new();
    let mut shell_weights = Vec::new();
    for (class, (wt, shell)) in by_weight.into_iter().enumerate() {
        if words.len() >= n && bits::rank(&words) == k {
            break;
        }
        shell_weights.push((wt, shell.len()));
        for w in shell {
            words.push(w);
            word_class.push(class as u32);
        }
        if words.len() > WORD_CAP {
            return Err(Error::BudgetExceeded("refinement shell too large"));
        }
    }
    let supports: Vec<Vec<usize>> = words.iter().map(|w| w.iter_ones().collect()).collect();
    let mut point_words = vec![Vec::new(); n];
    for (wi, sup) in supports.iter().enumerate() {
        for &p in sup {
            point_words[p].push(wi);
        }
    }
    Ok(Some(Structure {
        n,
        word_class,
        supports,
        point_words,
        shell_weights,
    }))
}

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    code_a: &'a BinaryCode,
    code_b: &'a BinaryCode,
    auto_mode: bool,
    found_gens: Vec<Permutation>,
    group: Option<PermGroup>,
    base: Vec<usize>,
    witness: Option<Permutation>,
    nodes: u64,
    node_budget: u64,
}

impl<'a> Search<'a> {
    fn new(
        a: &'a Structure,
        b: &'a Structure,
        code_a: &'a BinaryCode,
        code_b: &'a BinaryCode,
        auto_mode: bool,
        node_budget: u64,
    ) -> Self {
        Search {
            a,
            b,
            code_a,
            code_b,
            auto_mode,
            found_gens: Vec::new(),
            group: None,
            base: Vec::new(),
            witness: None,
            nodes: 0,
            node_budget,
        }
    }

    /// One joint refinement pass to a stable pair of colorings, or
    /// `None` when the color histograms prove the branch empty.
    ///
    /// Stability is detected on the class count: splitting is monotone
    /// (the signature embeds the old color), while the hash-derived
    /// labels themselves are not stable between passes.
    fn refine(&self, mut ca: Vec<u32>, mut cb: Vec<u32>) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut prev_classes = 0usize;
        loop {
            let word_keys = |s: &Structure, colors: &[u32]| -> Vec<u64> {
                s.supports
                    .iter()
                    .enumerate()
                    .map(|(wi, sup)| {
                        let mut cs: Vec<u32> = sup.iter().map(|&p| colors[p]).collect();
                        cs.sort_unstable();
                        h64((s.word_class[wi], cs))
                    })
                    .collect()
            };
            let wka = word_keys(self.a, &ca);
            let wkb = word_keys(self.b, &cb);
            let sigs = |s: &Structure, colors: &[u32], wk: &[u64]| -> Vec<u64> {
                (0..s.n)
                    .map(|i| {
                        let mut v: Vec<u64> =
                            s.point_words[i].iter().map(|&wi| wk[wi]).collect();
                        v.sort_unstable();
                        h64((colors[i], v))
                    })
                    .collect()
            };
            let sa = sigs(self.a, &ca, &wka);
            let sb = sigs(self.b, &cb, &wkb);
            let mut all: Vec<u64> = sa.iter().chain(sb.iter()).copied().collect();
            all.sort_unstable();
            all.dedup();
            let id_of: HashMap<u64, u32> = all
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i as u32))
                .collect();
            let na: Vec<u32> = sa.iter().map(|s| id_of[s]).collect();
            let nb: Vec<u32> = sb.iter().map(|s| id_of[s]).collect();
            let mut hist_a = vec![0usize; all.len()];
            let mut hist_b = vec![0usize; all.len()];
            for &c in &na {
                hist_a[c as usize] += 1;
            }
            for &c in &nb {
                hist_b[c as usize] += 1;
            }
            if hist_a != hist_b {
                return None;
            }
            let stable = all.len() == prev_classes;
            prev_classes = all.len();
            ca = na;
            cb = nb;
            if stable {
                return Some((ca, cb));
            }
        }
    }

    fn record_generator(&mut self, p: Permutation) {
        self.found_gens.push(p);
        self.group = None;
    }

    fn in_done_orbit(&mut self, depth: usize, done: &[usize], t: usize) -> bool {
        if done.is_empty() {
            return false;
        }
        let n = self.a.n;
        if self.group.is_none() {
            self.group = Some(PermGroup::with_base_hint(n, &self.found_gens, &self.base));
        }
        let gens = self.group.as_ref().unwrap().level_generators(depth);
        let mut seen = vec![false; n];
        let mut frontier: Vec<usize> = done.to_vec();
        for &d in done {
            seen[d] = true;
        }
        while let Some(p) = frontier.pop() {
            for g in &gens {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    frontier.push(q);
                }
            }
        }
        seen[t]
    }

    /// Returns whether anything was found in this subtree.
    fn descend(
        &mut self,
        ca: Vec<u32>,
        cb: Vec<u32>,
        depth: usize,
        identity: bool,
    ) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::BudgetExceeded("partition backtrack node budget"));
        }
        let Some((ca, cb)) = self.refine(ca, cb) else {
            return Ok(false);
        };
        let n = self.a.n;
        let distinct = {
            let mut s: Vec<u32> = ca.clone();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        if distinct == n {
            return Ok(self.leaf(&ca, &cb));
        }
        // smallest color class of size ≥ 2, individualize its least point
        let mut count: HashMap<u32, usize> = HashMap::new();
        for &c in &ca {
            *count.entry(c).or_insert(0) += 1;
        }
        let cell_color = ca
            .iter()
            .copied()
            .filter(|c| count[c] >= 2)
            .min()
            .expect("non-discrete coloring has a big cell");
        let source = (0..n).find(|&i| ca[i] == cell_color).unwrap();
        let mut targets: Vec<usize> = (0..n).filter(|&j| cb[j] == cell_color).collect();
        if self.auto_mode && identity {
            // the identity branch goes first so the stabilizer chain grows
            targets.retain(|&t| t != source);
            targets.insert(0, source);
            if self.base.len() == depth {
                self.base.push(source);
                self.group = None;
            }
        }
        let fresh = u32::MAX - depth as u32;
        let mut found_any = false;
        let mut done: Vec<usize> = Vec::new();
        for t in targets {
            if self.auto_mode && identity && self.in_done_orbit(depth, &done, t) {
                continue;
            }
            let mut ca2 = ca.clone();
            let mut cb2 = cb.clone();
            ca2[source] = fresh;
            cb2[t] = fresh;
            let child_identity = identity && t == source;
            let found = self.descend(ca2, cb2, depth + 1, child_identity)?;
            found_any |= found;
            if !self.auto_mode && self.witness.is_some() {
                return Ok(true);
            }
            if self.auto_mode {
                if found && !identity {
                    // one element of the coset is enough
                    return Ok(true);
                }
                if identity {
                    done.push(t);
                }
            }
        }
        Ok(found_any)
    }

    fn leaf(&mut self, ca: &[u32], cb: &[u32]) -> bool {
        let n = self.a.n;
        let mut images = vec![usize::MAX; n];
        let mut pairs_a: Vec<(u32, usize)> = ca.iter().copied().zip(0..n).collect();
        let mut pairs_b: Vec<(u32, usize)> = cb.iter().copied().zip(0..n).collect();
        pairs_a.sort_unstable();
        pairs_b.sort_unstable();
        for ((c1, i), (c2, j)) in pairs_a.into_iter().zip(pairs_b) {
            if c1 != c2 {
                return false;
            }
            images[i] = j;
        }
        let Ok(perm) = Permutation::from_images(images) else {
            return false;
        };
        match self.code_a.permuted(&perm) {
            Ok(image) if &image == self.code_b => {
                if self.auto_mode {
                    if perm.is_identity() {
                        false
                    } else {
                        self.record_generator(perm);
                        true
                    }
                } else {
                    self.witness = Some(perm);
                    true
                }
            }
            _ => false,
        }
    }
}

fn default_node_budget() -> u64 {
    (crate::enumeration_budget() as u64).max(100_000)
}

/// The full automorphism group of a binary code, by
/// individualization-refinement over low-weight codeword shells with
/// coset pruning against the group found so far. Every returned
/// generator is verified to stabilize the code.
pub fn automorphism_group(code: &BinaryCode) -> Result<AutGroup> {
    automorphism_group_budgeted(code, default_node_budget())
}

pub fn automorphism_group_budgeted(code: &BinaryCode, node_budget: u64) -> Result<AutGroup> {
    let n = code.length();
    let Some(structure) = shell_structure(code)? else {
        return Ok(AutGroup {
            code: code.clone(),
            group: PermGroup::symmetric(n),
        });
    };
    let mut search = Search::new(&structure, &structure, code, code, true, node_budget);
    let ca = vec![0u32; n];
    let cb = vec![0u32; n];
    if let Err(e) = search.descend(ca, cb, 0, true) {
        return Err(match e {
            Error::BudgetExceeded(_) => Error::Invalid(format!(
                "automorphism search budget exceeded after {} nodes (shells {:?})",
                search.nodes, structure.shell_weights
            )),
            other => other,
        });
    }
    let group = PermGroup::from_generators(n, &search.found_gens);
    for g in group.generators() {
        if !code.is_invariant_under(g) {
            return Err(Error::Invalid(
                "automorphism candidate fails exact check".into(),
            ));
        }
    }
    Ok(AutGroup {
        code: code.clone(),
        group,
    })
}

/// A permutation carrying `a` onto `b`, or `None`. The witness is
/// verified before it is returned.
pub fn is_equivalent(a: &BinaryCode, b: &BinaryCode) -> Result<Option<Permutation>> {
    is_equivalent_budgeted(a, b, default_node_budget())
}

pub fn is_equivalent_budgeted(
    a: &BinaryCode,
    b: &BinaryCode,
    node_budget: u64,
) -> Result<Option<Permutation>> {
    if a.length() != b.length() || a.dimension() != b.dimension() {
        return Ok(None);
    }
    let n = a.length();
    let sa = shell_structure(a)?;
    let sb = shell_structure(b)?;
    match (sa, sb) {
        (None, None) => Ok(Some(Permutation::identity(n))),
        (None, Some(_)) | (Some(_), None) => Ok(None),
        (Some(sa), Some(sb)) => {
            if sa.shell_weights != sb.shell_weights {
                return Ok(None);
            }
            let mut search = Search::new(&sa, &sb, a, b, false, node_budget);
            search.descend(vec![0; n], vec![0; n], 0, false)?;
            if let Some(w) = &search.witness {
                debug_assert_eq!(&a.permuted(w).unwrap(), b);
            }
            Ok(search.witness)
        }
    }
}

/// One representative per conjugacy class of fixed-point-free elements
/// of the given order, under conjugation by the group itself.
pub fn fpf_classes(group: &PermGroup, order: u32, budget: u128) -> Result<Vec<Permutation>> {
    let elems = fpf_elements_of_order(group, order, budget)?;
    conjugacy_representatives(&elems, group.generators(), budget.max(1 << 20))
}

// ---------------------------------------------------------------------
// Orbit representatives of the two-stage conjugation algorithm
// ---------------------------------------------------------------------

/// One representative `D_{i,j}` with its construction witnesses.
#[derive(Debug, Clone)]
pub struct OrbitRep {
    pub code: BinaryCode,
    pub tau: Permutation,
    pub rho_tilde: Permutation,
    pub h: Permutation,
    pub sigma: Permutation,
    pub class_index: usize,
}

/// The representatives produced for one starting code.
#[derive(Debug, Clone)]
pub struct OrbitRepSet {
    pub source: String,
    pub kind: GroupKind,
    pub length: usize,
    pub reps: Vec<OrbitRep>,
}

/// Computes representatives of the `G₃₆`-orbits on the codes equivalent
/// to `yk` that carry the standard pair-swap involution and are
/// compatible with the collapsed σ: conjugate each class of
/// fixed-point-free involutions of `Aut(yk)` onto the standard pattern,
/// then each class of fixed-point-free order-3 (or order-2) elements of
/// the collapsed fixed code's automorphism group onto the collapsed σ.
pub fn lemma_repr(
    yk: &BinaryCode,
    kind: GroupKind,
    source: &str,
    budget: u128,
) -> Result<OrbitRepSet> {
    let n36 = yk.length();
    let h36 = patterns::h_collapsed(n36);
    let sigma18 = patterns::sigma_collapsed(kind, n36 / 2)?;
    let aut_y = automorphism_group(yk)?;
    let h_reps = fpf_classes(&aut_y.group, 2, budget)?;
    let mut reps = Vec::new();
    for (i, h_i) in h_reps.iter().enumerate() {
        let tau_i = conjugating_element(h_i, &h36)
            .expect("fixed-point-free involutions share a cycle type");
        let d_i = yk.permuted(&tau_i)?;
        if !d_i.is_invariant_under(&h36) {
            return Err(Error::Invalid("conjugated code lost the involution".into()));
        }
        // Aut(D_i) = Aut(Y_k) conjugated by τ_i
        let aut_d_gens: Vec<Permutation> = aut_y
            .group
            .generators()
            .iter()
            .map(|g| g.conjugated_by(&tau_i))
            .collect();
        let aut_d = PermGroup::from_generators(n36, &aut_d_gens);
        let centralizer = aut_d.centralizer_of(std::slice::from_ref(&h36), budget)?;
        let acting: Result<Vec<Permutation>> = centralizer
            .generators()
            .iter()
            .map(|t| action_on_blocks(t, 2))
            .collect();
        let acting = acting?;
        let fixed = decomp::fixed_code(&d_i, &h36)?;
        let collapsed = decomp::collapse_code(&fixed, 2)?;
        let aut_b = automorphism_group(&collapsed)?;
        let fpf_sigma = fpf_elements_of_order(&aut_b.group, kind.sigma_order(), budget)?;
        let sigma_reps = conjugacy_representatives(&fpf_sigma, &acting, budget.max(1 << 20))?;
        for sigma_j in sigma_reps {
            let rho_j = conjugating_element(&sigma_j, &sigma18)
                .expect("fixed-point-free elements of equal order share a cycle type");
            let rho_tilde = natural_lift(&rho_j);
            let d_ij = d_i.permuted(&rho_tilde)?;
            // re-check the defining memberships and the witness equation
            if yk.permuted(&tau_i.compose(&rho_tilde))? != d_ij {
                return Err(Error::Invalid("witness equation failed".into()));
            }
            if !d_ij.is_invariant_under(&h36) {
                return Err(Error::Invalid("representative lost the involution".into()));
            }
            let coll_ij = decomp::collapse_code(&decomp::fixed_code(&d_ij, &h36)?, 2)?;
            if !coll_ij.is_invariant_under(&sigma18) {
                return Err(Error::Invalid("representative incompatible with σ".into()));
            }
            reps.push(OrbitRep {
                code: d_ij,
                tau: tau_i.clone(),
                rho_tilde,
                h: h_i.clone(),
                sigma: sigma_j,
                class_index: i,
            });
        }
    }
    Ok(OrbitRepSet {
        source: source.to_string(),
        kind,
        length: n36,
        reps,
    })
}

/// Expands representatives by a left transversal and removes duplicates
/// that fall into the same orbit of the smaller group, by explicit orbit
/// closure under the group generators.
pub fn orbit_fuse(
    reps: &[BinaryCode],
    subgroup: &PermGroup,
    transversal: &[Permutation],
    budget: u128,
) -> Result<Vec<BinaryCode>> {
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<BitVec>> = HashSet::new();
    for x in reps {
        for t in transversal {
            let c = x.permuted(t)?;
            let key = c.rows().to_vec();
            if seen.contains(&key) {
                continue;
            }
            // orbit closure of c under the subgroup
            let mut frontier = vec![c.clone()];
            let mut orbit: HashSet<Vec<BitVec>> = HashSet::new();
            orbit.insert(key);
            while let Some(d) = frontier.pop() {
                if orbit.len() as u128 > budget {
                    return Err(Error::BudgetExceeded("orbit_fuse closure"));
                }
                for g in subgroup.generators() {
                    let e = d.permuted(g)?;
                    if orbit.insert(e.rows().to_vec()) {
                        frontier.push(e);
                    }
                }
            }
            seen.extend(orbit);
            out.push(c);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Classification of self-dual codes of small length
// ---------------------------------------------------------------------

/// One equivalence class of self-dual codes.
#[derive(Debug, Clone)]
pub struct SelfDualClass {
    pub representative: BinaryCode,
    pub orbit_size: u128,
    pub aut_order: u128,
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Classifies all self-dual codes of length `n` up to coordinate
/// permutation by explicit orbit enumeration, cross-checked per class by
/// orbit-stabilizer counting against the backtrack automorphism groups.
pub fn classify_self_dual(n: usize) -> Result<Vec<SelfDualClass>> {
    let mut remaining: BTreeMap<Vec<u64>, BinaryCode> = BTreeMap::new();
    gf2::for_each_self_dual(n, |c| {
        remaining.insert(c.compact_key(), c.clone());
        ControlFlow::Continue(())
    });
    let total = remaining.len() as u128;
    if total != gf2::self_dual_count(n) {
        return Err(Error::Invalid(
            "enumeration disagrees with the mass formula".into(),
        ));
    }
    let gens: Vec<Permutation> = (0..n - 1)
        .map(|i| Permutation::from_cycles(n, &[vec![i, i + 1]]).unwrap())
        .collect();
    let mut classes = Vec::new();
    while let Some((seed_key, seed)) =
        remaining.iter().next().map(|(k, v)| (k.clone(), v.clone()))
    {
        let mut orbit: HashSet<Vec<u64>> = HashSet::new();
        orbit.insert(seed_key);
        let mut frontier = vec![seed.clone()];
        let mut rep = seed;
        while let Some(c) = frontier.pop() {
            for g in &gens {
                let d = c.permuted(g)?;
                if orbit.insert(d.compact_key()) {
                    if d.rows() < rep.rows() {
                        rep = d.clone();
                    }
                    frontier.push(d);
                }
            }
        }
        for k in &orbit {
            remaining.remove(k);
        }
        let aut = automorphism_group(&rep)?;
        let aut_order = aut.group.order()?;
        let orbit_size = orbit.len() as u128;
        if orbit_size * aut_order != factorial(n) {
            return Err(Error::Invalid(format!(
                "orbit-stabilizer mismatch at length {n}: {orbit_size} × {aut_order} ≠ {n}!"
            )));
        }
        classes.push(SelfDualClass {
            representative: rep,
            orbit_size,
            aut_order,
        });
    }
    let mass: u128 = classes.iter().map(|c| c.orbit_size).sum();
    if mass != total {
        return Err(Error::Invalid("orbit masses do not sum to the total".into()));
    }
    classes.sort_by(|a, b| a.representative.rows().cmp(b.representative.rows()));
    Ok(classes)
}

// ---------------------------------------------------------------------
// Desk-scale oracles for the defining set and its orbits
// ---------------------------------------------------------------------

/// Whether a code lies in the defining set: self-dual, invariant under
/// the standard pair-swap involution, with the collapsed fixed code
/// compatible with the collapsed σ. A required minimum distance can be
/// imposed for full-scale data.
pub fn in_defining_set(
    code: &BinaryCode,
    kind: GroupKind,
    required_distance: Option<usize>,
) -> Result<bool> {
    let n36 = code.length();
    if n36 % (kind.sigma_order() as usize * 2) != 0 {
        return Ok(false);
    }
    if !code.is_self_dual() {
        return Ok(false);
    }
    if let Some(d) = required_distance {
        let md = code.min_distance(Some(d))?;
        if md.value != d {
            return Ok(false);
        }
    }
    let h36 = patterns::h_collapsed(n36);
    if !code.is_invariant_under(&h36) {
        return Ok(false);
    }
    let fixed = decomp::fixed_code(code, &h36)?;
    if fixed.dimension() == 0 {
        return Ok(true); // the zero collapse is preserved by anything
    }
    let collapsed = decomp::collapse_code(&fixed, 2)?;
    let sigma18 = patterns::sigma_collapsed(kind, n36 / 2)?;
    Ok(collapsed.is_invariant_under(&sigma18))
}

/// Brute force: every code of the defining set at the given length, by
/// filtering the full self-dual enumeration. Desk scale only.
pub fn defining_set(n36: usize, kind: GroupKind) -> Result<Vec<BinaryCode>> {
    let mut out = Vec::new();
    let mut err = None;
    gf2::for_each_self_dual(n36, |c| {
        match in_defining_set(c, kind, None) {
            Ok(true) => out.push(c.clone()),
            Ok(false) => {}
            Err(e) => {
                err = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Partition of a set of codes into orbits under a group, by closure
/// under the generators. Errors when an orbit escapes the given set.
pub fn orbit_partition(codes: &[BinaryCode], group: &PermGroup) -> Result<Vec<Vec<BinaryCode>>> {
    let in_set: HashSet<Vec<BitVec>> = codes.iter().map(|c| c.rows().to_vec()).collect();
    let mut remaining: BTreeMap<Vec<BitVec>, BinaryCode> = codes
        .iter()
        .map(|c| (c.rows().to_vec(), c.clone()))
        .collect();
    let mut orbits = Vec::new();
    while let Some((seed_key, seed)) =
        remaining.iter().next().map(|(k, v)| (k.clone(), v.clone()))
    {
        let mut orbit: BTreeMap<Vec<BitVec>, BinaryCode> = BTreeMap::new();
        orbit.insert(seed_key, seed.clone());
        let mut frontier = vec![seed];
        while let Some(c) = frontier.pop() {
            for g in group.generators() {
                let d = c.permuted(g)?;
                let key = d.rows().to_vec();
                if !orbit.contains_key(&key) {
                    if !in_set.contains(&key) {
                        return Err(Error::Invalid("orbit escaped the defining set".into()));
                    }
                    orbit.insert(key, d.clone());
                    frontier.push(d);
                }
            }
        }
        for k in orbit.keys() {
            remaining.remove(k);
        }
        orbits.push(orbit.into_values().collect());
    }
    Ok(orbits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::families;
    use rand::SeedableRng;

    /// Brute-force automorphism group order for tiny codes.
    fn brute_aut_order(code: &BinaryCode) -> u128 {
        let n = code.length();
        let sn = PermGroup::symmetric(n);
        let mut count = 0u128;
        sn.for_each_element(1_000_000, |p| {
            if code.is_invariant_under(p) {
                count += 1;
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        count
    }

    #[test]
    fn aut_of_tiny_codes_matches_brute_force() {
        let rep2 = families::repetition(2);
        let aut = automorphism_group(&rep2).unwrap();
        assert_eq!(aut.group.order().unwrap(), 2);
        for rows in [
            vec!["110", "011"],
            vec!["1100", "0011"],
            vec!["110000", "001100", "000011"],
            vec!["101010", "010101"],
            vec!["11110000", "00111100", "00001111"],
        ] {
            let c = BinaryCode::from_strings(&rows).unwrap();
            let aut = automorphism_group(&c).unwrap();
            assert_eq!(
                aut.group.order().unwrap(),
                brute_aut_order(&c),
                "code {rows:?}"
            );
            for g in aut.group.generators() {
                assert!(c.is_invariant_under(g));
            }
        }
    }

    #[test]
    fn aut_of_zero_and_full_is_symmetric() {
        let z = BinaryCode::zero(5);
        assert_eq!(automorphism_group(&z).unwrap().group.order().unwrap(), 120);
        let f = BinaryCode::full(4);
        assert_eq!(automorphism_group(&f).unwrap().group.order().unwrap(), 24);
    }

    #[test]
    fn aut_of_extended_hamming_has_order_1344() {
        let e8 = families::extended_hamming8();
        let aut = automorphism_group(&e8).unwrap();
        assert_eq!(aut.group.order().unwrap(), 1344);
        // transitive on the 8 points
        assert_eq!(aut.group.orbit(0).len(), 8);
    }

    #[test]
    fn aut_of_extended_golay_is_m24_sized() {
        let g24 = families::extended_golay();
        let aut = automorphism_group(&g24).unwrap();
        assert_eq!(aut.group.order().unwrap(), 244_823_040);
        for g in aut.group.generators() {
            assert!(g24.is_invariant_under(g));
        }
    }

    #[test]
    fn equivalence_finds_witnesses_and_rejects() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let c = gf2::random_self_dual(12, &mut rng);
        let sn = PermGroup::symmetric(12);
        for _ in 0..10 {
            let p = sn.random_element(&mut rng);
            let d = c.permuted(&p).unwrap();
            let w = is_equivalent(&c, &d).unwrap().expect("must be equivalent");
            assert_eq!(c.permuted(&w).unwrap(), d);
            // symmetry: the reverse witness composes with w into an
            // automorphism of c
            let back = is_equivalent(&d, &c).unwrap().expect("symmetric");
            assert_eq!(c.permuted(&w.compose(&back)).unwrap(), c);
        }
        // e8 vs the decomposable self-dual [8,4] code: inequivalent
        let e8 = families::extended_hamming8();
        let i2x4 =
            BinaryCode::from_strings(&["11000000", "00110000", "00001100", "00000011"]).unwrap();
        assert!(is_equivalent(&e8, &i2x4).unwrap().is_none());
        assert!(is_equivalent(&e8, &e8).unwrap().is_some());
    }

    #[test]
    fn fpf_classes_in_small_auts() {
        // Aut([2,1] repetition) = S2: one class, (1,2)
        let aut = automorphism_group(&families::repetition(2)).unwrap();
        let classes = fpf_classes(&aut.group, 2, 100).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].cycle_string(), "(1,2)");
        // trivial group: no classes
        let trivial = PermGroup::trivial(4);
        assert!(fpf_classes(&trivial, 2, 100).unwrap().is_empty());
        // randomized path agrees with enumeration on S4
        let s4 = PermGroup::symmetric(4);
        let enumerated = fpf_classes(&s4, 2, 1000).unwrap();
        let sampled = crate::perm::fpf_elements_random(&s4, 2, 200, 7);
        let sampled_classes =
            conjugacy_representatives(&sampled, s4.generators(), 10_000).unwrap();
        assert_eq!(enumerated, sampled_classes);
    }

    #[test]
    fn classify_length_8_two_classes() {
        let classes = classify_self_dual(8).unwrap();
        assert_eq!(classes.len(), 2);
        let total: u128 = classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(total, gf2::self_dual_count(8));
        // the extremal class is the extended Hamming code
        assert!(classes.iter().any(|c| {
            is_equivalent(&c.representative, &families::extended_hamming8())
                .unwrap()
                .is_some()
        }));
    }

    #[test]
    fn lemma_repr_matches_brute_force_d8_desk() {
        let kind = GroupKind::D8;
        let n36 = 8;
        // the defining set and its G36-orbits, by brute force
        let dset = defining_set(n36, kind).unwrap();
        assert!(!dset.is_empty());
        let wreath = crate::perm::wreath_centralizer(kind, 2 * n36).unwrap();
        let orbits = orbit_partition(&dset, &wreath.g36).unwrap();
        // group the defining set by equivalence class and run the
        // two-stage algorithm per class
        let classes = classify_self_dual(n36).unwrap();
        let mut total_reps = 0usize;
        let mut covered_orbits: HashSet<usize> = HashSet::new();
        for class in &classes {
            let yk = &class.representative;
            let set = lemma_repr(yk, kind, "desk", 1_000_000).unwrap();
            for rep in &set.reps {
                assert!(in_defining_set(&rep.code, kind, None).unwrap());
                assert!(is_equivalent(&rep.code, yk).unwrap().is_some());
                // locate the brute-force orbit containing this rep
                let idx = orbits
                    .iter()
                    .position(|orb| orb.iter().any(|c| c == &rep.code))
                    .expect("rep must lie in the defining set");
                assert!(
                    covered_orbits.insert(idx),
                    "two representatives fell into one orbit"
                );
            }
            total_reps += set.reps.len();
        }
        assert_eq!(total_reps, orbits.len(), "completeness");
    }

    #[test]
    fn orbit_fuse_identity_transversal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let c = gf2::random_self_dual(8, &mut rng);
        let d = gf2::random_self_dual(8, &mut rng);
        let g36 = PermGroup::trivial(8);
        let fused = orbit_fuse(
            &[c.clone(), d.clone(), c.clone()],
            &g36,
            &[Permutation::identity(8)],
            1000,
        )
        .unwrap();
        // duplicates collapse, distinct codes survive
        let expected = if c == d { 1 } else { 2 };
        assert_eq!(fused.len(), expected);
    }

    #[test]
    fn orbit_fuse_desk_scale_matches_brute_force() {
        let kind = GroupKind::D8;
        let n36 = 8;
        let wreath = crate::perm::wreath_centralizer(kind, 2 * n36).unwrap();
        let dset = defining_set(n36, kind).unwrap();
        let g36_orbits = orbit_partition(&dset, &wreath.g36).unwrap();
        let reps: Vec<BinaryCode> = g36_orbits.iter().map(|o| o[0].clone()).collect();
        // fuse the G36-level representatives down to the image subgroup
        let fused = orbit_fuse(&reps, &wreath.image, &wreath.transversal, 100_000).unwrap();
        let image_orbits = orbit_partition(&dset, &wreath.image).unwrap();
        assert_eq!(fused.len(), image_orbits.len());
    }
}
