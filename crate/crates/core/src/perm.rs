//! Permutations and permutation groups at small degree.
//!
//! Points are 0-based internally and 1-based in the cycle text format, so
//! printed cycles match the usual convention. Composition is
//! left-to-right throughout: `a.compose(&b)` applies `a` first, which
//! makes `x^(ab) = (x^a)^b` hold and lets products read like the
//! exponent notation they implement.
//!
//! Group machinery is a stabilizer chain built by incremental
//! Schreier–Sims with sift-before-add. Degrees stay below ~128, so
//! transversals are stored as explicit permutations.

use crate::bits::BitVec;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

/// A permutation of `{0, …, degree-1}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Parse("image table is not a bijection".into()));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles of
    /// 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if from >= degree || to >= degree {
                    return Err(Error::Parse(format!("point {} out of range", from.max(to) + 1)));
                }
                if moved[from] {
                    return Err(Error::Parse(format!("point {} repeated in cycles", from + 1)));
                }
                moved[from] = true;
                images[from] = to;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Conjugate `self^t = t⁻¹ · self · t`.
    pub fn conjugated_by(&self, t: &Permutation) -> Permutation {
        t.inverse().compose(self).compose(t)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Nontrivial cycles, each starting at its smallest point, sorted by
    /// smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        let mut moved = 0usize;
        for c in self.cycles() {
            *counts.entry(c.len()).or_insert(0) += 1;
            moved += c.len();
        }
        let fixed = self.degree() - moved;
        if fixed > 0 {
            *counts.entry(1).or_insert(0) += fixed;
        }
        counts
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i != x)
    }

    pub fn order(&self) -> u128 {
        let mut ord: u128 = 1;
        for c in self.cycles() {
            ord = lcm(ord, c.len() as u128);
        }
        ord
    }

    /// Parses disjoint-cycle notation with 1-based points, e.g.
    /// `(1,2)(3,4)`. The identity is `()`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in {s:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let body = &rest[1..close];
            rest = &rest[close + 1..];
            if body.is_empty() {
                continue; // "()" – identity cycle
            }
            let mut cycle = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
                if p == 0 || p > degree {
                    return Err(Error::Parse(format!("point {p} out of range 1..{degree}")));
                }
                cycle.push(p - 1);
            }
            cycles.push(cycle);
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut out = String::new();
        for c in cycles {
            out.push('(');
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&(p + 1).to_string());
            }
            out.push(')');
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]({})", self.degree(), self.cycle_string())
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}

/// Doubles a permutation of `m` points to one of `2m` points commuting
/// with `(1,2)(3,4)…(2m-1,2m)`: point `2a-1 ↦ 2ρ(a)-1`, `2a ↦ 2ρ(a)`.
pub fn natural_lift(rho: &Permutation) -> Permutation {
    let m = rho.degree();
    let mut images = vec![0usize; 2 * m];
    for a in 0..m {
        images[2 * a] = 2 * rho.apply(a);
        images[2 * a + 1] = 2 * rho.apply(a) + 1;
    }
    Permutation { images }
}

/// A conjugating element `τ` with `τ⁻¹ a τ = b`, or `None` when the cycle
/// types differ. Cycles are matched smallest-point-first, so the result
/// is deterministic.
pub fn conjugating_element(a: &Permutation, b: &Permutation) -> Option<Permutation> {
    if a.degree() != b.degree() {
        return None;
    }
    if a.cycle_type() != b.cycle_type() {
        return None;
    }
    let group_by_len = |p: &Permutation| -> BTreeMap<usize, Vec<Vec<usize>>> {
        let n = p.degree();
        let mut by_len: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        let mut moved = vec![false; n];
        for c in p.cycles() {
            for &x in &c {
                moved[x] = true;
            }
            by_len.entry(c.len()).or_default().push(c);
        }
        let fixed: Vec<Vec<usize>> = (0..n).filter(|&x| !moved[x]).map(|x| vec![x]).collect();
        if !fixed.is_empty() {
            by_len.insert(1, fixed);
        }
        by_len
    };
    let ca = group_by_len(a);
    let cb = group_by_len(b);
    let mut images = vec![usize::MAX; a.degree()];
    for (len, cycles_a) in &ca {
        let cycles_b = &cb[len];
        for (cyc_a, cyc_b) in cycles_a.iter().zip(cycles_b) {
            for (pa, pb) in cyc_a.iter().zip(cyc_b) {
                images[*pa] = *pb;
            }
        }
    }
    let tau = Permutation { images };
    debug_assert_eq!(&a.conjugated_by(&tau), b);
    Some(tau)
}

/// The induced permutation of the consecutive blocks
/// `{0..bs}, {bs..2bs}, …` or an error when the block partition is not
/// preserved. With `bs = 2` this is the cycle-collapse epimorphism from
/// the centralizer of `(1,2)(3,4)…` onto the symmetric group on pairs.
pub fn action_on_blocks(p: &Permutation, block_size: usize) -> Result<Permutation> {
    let n = p.degree();
    if block_size == 0 || n % block_size != 0 {
        return Err(Error::DegreeMismatch(n, block_size));
    }
    let nb = n / block_size;
    let mut images = vec![usize::MAX; nb];
    for blk in 0..nb {
        let target = p.apply(blk * block_size) / block_size;
        for j in 0..block_size {
            if p.apply(blk * block_size + j) / block_size != target {
                return Err(Error::NotInvariant);
            }
        }
        images[blk] = target;
    }
    Permutation::from_images(images)
}

// ---------------------------------------------------------------------
// Stabilizer chains
// ---------------------------------------------------------------------

struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// orbit of `base` in BFS discovery order
    orbit: Vec<usize>,
    /// transversal[p] maps base ↦ p for p in the orbit
    transversal: Vec<Option<Permutation>>,
    /// per generator, how many orbit points have yielded a Schreier generator
    processed: Vec<usize>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            processed: Vec::new(),
        }
    }

    /// The next unprocessed (orbit point, generator) pair, if any.
    fn next_pair(&mut self) -> Option<(usize, usize)> {
        for gi in 0..self.gens.len() {
            if self.processed[gi] < self.orbit.len() {
                let oi = self.processed[gi];
                self.processed[gi] += 1;
                return Some((oi, gi));
            }
        }
        None
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            for g in &self.gens {
                let q = g.apply(p);
                if self.transversal[q].is_none() {
                    let t = self.transversal[p].as_ref().unwrap().compose(g);
                    self.transversal[q] = Some(t);
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group given by generators, with a stabilizer chain for
/// order, membership, and element enumeration.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    levels: Vec<Level>,
    base_hint: Vec<usize>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            gens: Vec::new(),
            levels: Vec::new(),
            base_hint: Vec::new(),
        }
    }

    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_hint(degree, gens, &[])
    }

    /// Builds the chain preferring the given points as the first base
    /// points, in order. Used by searches that need stabilizers of a
    /// specific point sequence.
    pub fn with_base_hint(degree: usize, gens: &[Permutation], base_hint: &[usize]) -> Self {
        let mut group = PermGroup {
            degree,
            gens: Vec::new(),
            levels: Vec::new(),
            base_hint: base_hint.to_vec(),
        };
        for g in gens {
            group.add_generator(g.clone());
        }
        group
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[vec![0, 1]]).unwrap());
        }
        if degree >= 3 {
            gens.push(Permutation::from_cycles(degree, &[(0..degree).collect()]).unwrap());
        }
        Self::from_generators(degree, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the pointwise stabilizer of the first `l` base points.
    pub fn level_generators(&self, l: usize) -> Vec<Permutation> {
        if l >= self.levels.len() {
            return Vec::new();
        }
        self.levels[l].gens.clone()
    }

    /// Adds a generator, updating the chain.
    pub fn add_generator(&mut self, g: Permutation) {
        assert_eq!(g.degree(), self.degree);
        if g.is_identity() || self.contains(&g) {
            return;
        }
        self.gens.push(g.clone());
        self.insert_at(0, g);
    }

    fn pick_base(&self, g: &Permutation, level: usize) -> usize {
        // A prescribed prefix is honored verbatim so that level `l`
        // stabilizes exactly hint[0..l]; a level whose base is fixed by
        // all its generators is redundant but harmless.
        if level < self.base_hint.len() {
            return self.base_hint[level];
        }
        (0..self.degree)
            .find(|&p| g.apply(p) != p && self.levels.iter().all(|l| l.base != p))
            .or_else(|| (0..self.degree).find(|&p| g.apply(p) != p))
            .unwrap()
    }

    fn insert_at(&mut self, level: usize, g: Permutation) {
        debug_assert!(!g.is_identity());
        if level == self.levels.len() {
            let base = self.pick_base(&g, level);
            self.levels.push(Level::new(self.degree, base));
        }
        self.levels[level].gens.push(g);
        self.levels[level].processed.push(0);
        // Re-close this level: new orbit points and new Schreier generators.
        loop {
            self.levels[level].extend_orbit();
            let Some((oi, gi)) = self.levels[level].next_pair() else {
                break;
            };
            let schreier = {
                let l = &self.levels[level];
                let p = l.orbit[oi];
                let g = &l.gens[gi];
                let q = g.apply(p);
                let t_p = l.transversal[p].as_ref().unwrap();
                let t_q = l.transversal[q].as_ref().unwrap();
                t_p.compose(g).compose(&t_q.inverse())
            };
            if schreier.is_identity() {
                continue;
            }
            let residue = self.sift_from(level + 1, schreier);
            if !residue.is_identity() {
                self.insert_at(level + 1, residue);
            }
        }
    }

    fn sift_from(&self, start: usize, mut p: Permutation) -> Permutation {
        for l in &self.levels[start.min(self.levels.len())..] {
            let image = p.apply(l.base);
            match &l.transversal[image] {
                None => return p,
                Some(t) => p = p.compose(&t.inverse()),
            }
        }
        p
    }

    /// The sift residue: identity iff `p` is a member.
    pub fn sift(&self, p: &Permutation) -> Permutation {
        self.sift_from(0, p.clone())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.sift(p).is_identity()
    }

    pub fn order(&self) -> Result<u128> {
        let mut ord: u128 = 1;
        for l in &self.levels {
            ord = ord
                .checked_mul(l.orbit.len() as u128)
                .ok_or(Error::OrderOverflow)?;
        }
        Ok(ord)
    }

    /// Orbit of a point under the full generator set.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut i = 0;
        while i < orbit.len() {
            for g in &self.gens {
                let q = g.apply(orbit[i]);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let orb = self.orbit(p);
                for &q in &orb {
                    seen[q] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    /// Visits every element exactly once. Errors out without calling the
    /// visitor when the group order exceeds `budget`.
    pub fn for_each_element(
        &self,
        budget: u128,
        mut f: impl FnMut(&Permutation) -> ControlFlow<()>,
    ) -> Result<()> {
        let order = self.order()?;
        if order > budget {
            return Err(Error::EnumerationTooLarge(order, budget));
        }
        fn rec(
            levels: &[Level],
            degree: usize,
            f: &mut dyn FnMut(&Permutation) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            match levels.first() {
                None => f(&Permutation::identity(degree)),
                Some(level) => rec(&levels[1..], degree, &mut |q: &Permutation| {
                    for &p in &level.orbit {
                        let t = level.transversal[p].as_ref().unwrap();
                        f(&q.compose(t))?;
                    }
                    ControlFlow::Continue(())
                }),
            }
        }
        let _ = rec(&self.levels, self.degree, &mut f);
        Ok(())
    }

    pub fn elements(&self, budget: u128) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        self.for_each_element(budget, |p| {
            out.push(p.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Uniformly random element (product of random transversal elements).
    pub fn random_element(&self, rng: &mut impl rand::Rng) -> Permutation {
        let mut p = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let pt = level.orbit[rng.gen_range(0..level.orbit.len())];
            p = p.compose(level.transversal[pt].as_ref().unwrap());
        }
        p
    }

    /// Centralizer of the given permutations, by streaming group elements.
    /// Requires the group order to be within `budget`.
    pub fn centralizer_of(&self, elems: &[Permutation], budget: u128) -> Result<PermGroup> {
        let mut cz = PermGroup::trivial(self.degree);
        self.for_each_element(budget, |p| {
            if elems.iter().all(|e| p.commutes_with(e)) && !cz.contains(p) {
                cz.add_generator(p.clone());
            }
            ControlFlow::Continue(())
        })?;
        Ok(cz)
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PermGroup(degree={}, gens={}, order={:?})",
            self.degree,
            self.gens.len(),
            self.order()
        )
    }
}

/// A homomorphism given on generators, with the image group alongside.
pub struct GroupHom {
    pub domain_gens: Vec<Permutation>,
    pub images: Vec<Permutation>,
    pub image_group: PermGroup,
    pub domain_order: u128,
}

impl GroupHom {
    /// The block-collapse epimorphism on a group whose elements all
    /// preserve the consecutive-block partition.
    pub fn block_collapse(group: &PermGroup, block_size: usize) -> Result<GroupHom> {
        let images: Result<Vec<Permutation>> = group
            .generators()
            .iter()
            .map(|g| action_on_blocks(g, block_size))
            .collect();
        let images = images?;
        let image_group =
            PermGroup::from_generators(group.degree() / block_size, &images);
        let domain_order = group.order()?;
        let hom = GroupHom {
            domain_gens: group.generators().to_vec(),
            images,
            image_group,
            domain_order,
        };
        if hom.kernel_order()? * hom.image_group.order()? != domain_order {
            return Err(Error::Invalid("kernel·image order mismatch".into()));
        }
        Ok(hom)
    }

    /// `|ker| = |domain| / |image|`; errors when the image order does
    /// not divide the domain order (a malformed homomorphism).
    pub fn kernel_order(&self) -> Result<u128> {
        let image = self.image_group.order()?;
        if self.domain_order % image != 0 {
            return Err(Error::Invalid(
                "image order does not divide the domain order".into(),
            ));
        }
        Ok(self.domain_order / image)
    }

    /// Image of a word in the domain generators.
    pub fn image_of_word(&self, word: &[usize]) -> Permutation {
        let deg = self.image_group.degree();
        word.iter().fold(Permutation::identity(deg), |acc, &i| {
            acc.compose(&self.images[i])
        })
    }

    pub fn domain_word(&self, word: &[usize]) -> Permutation {
        let deg = self.domain_gens[0].degree();
        word.iter().fold(Permutation::identity(deg), |acc, &i| {
            acc.compose(&self.domain_gens[i])
        })
    }
}

// ---------------------------------------------------------------------
// The fixed-point-free standard actions and their centralizers
// ---------------------------------------------------------------------

/// Which semidirect-product action is planted on the coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    A4,
    D8,
}

impl GroupKind {
    /// Size of one regular block: the group order.
    pub fn block(self) -> usize {
        match self {
            GroupKind::A4 => 12,
            GroupKind::D8 => 8,
        }
    }

    /// Order of the complement generator σ.
    pub fn sigma_order(self) -> u32 {
        match self {
            GroupKind::A4 => 3,
            GroupKind::D8 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupKind::A4 => "a4",
            GroupKind::D8 => "d8",
        }
    }
}

/// The standard generators of the planted group on `n` coordinates.
pub mod patterns {
    use super::*;

    /// `g = (1,2)(3,4)…(n-1,n)`.
    pub fn pair_swaps(n: usize) -> Permutation {
        assert!(n % 2 == 0);
        let cycles: Vec<Vec<usize>> = (0..n / 2).map(|i| vec![2 * i, 2 * i + 1]).collect();
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    /// `h = (1,3)(2,4)(5,7)(6,8)…`: swaps the two pairs inside each
    /// block of four.
    pub fn quad_swaps(n: usize) -> Permutation {
        assert!(n % 4 == 0);
        let mut cycles = Vec::new();
        for b in 0..n / 4 {
            let o = 4 * b;
            cycles.push(vec![o, o + 2]);
            cycles.push(vec![o + 1, o + 3]);
        }
        Permutation::from_cycles(n, &cycles).unwrap()
    }

    /// The complement generator σ, repeated blockwise: order 3 cycling
    /// the three 4-blocks of each 12-block for `A4`, order 2 swapping the
    /// two 4-blocks of each 8-block for `D8`.
    pub fn sigma(kind: GroupKind, n: usize) -> Result<Permutation> {
        let b = kind.block();
        if n == 0 || n % b != 0 {
            return Err(Error::DegreeMismatch(n, b));
        }
        let mut cycles = Vec::new();
        for blk in 0..n / b {
            let o = blk * b;
            match kind {
                // (1,5,9)(2,7,12)(3,8,10)(4,6,11) on each 12-block
                GroupKind::A4 => {
                    cycles.push(vec![o, o + 4, o + 8]);
                    cycles.push(vec![o + 1, o + 6, o + 11]);
                    cycles.push(vec![o + 2, o + 7, o + 9]);
                    cycles.push(vec![o + 3, o + 5, o + 10]);
                }
                // (1,5)(2,8)(3,7)(4,6) on each 8-block
                GroupKind::D8 => {
                    cycles.push(vec![o, o + 4]);
                    cycles.push(vec![o + 1, o + 7]);
                    cycles.push(vec![o + 2, o + 6]);
                    cycles.push(vec![o + 3, o + 5]);
                }
            }
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// The order-4 element `k = gσ` of the `D8` action.
    pub fn k_element(n: usize) -> Result<Permutation> {
        Ok(pair_swaps(n).compose(&sigma(GroupKind::D8, n)?))
    }

    /// `π₁(h) = (1,2)(3,4)…` on the collapsed coordinates.
    pub fn h_collapsed(n36: usize) -> Permutation {
        pair_swaps(n36)
    }

    /// `π₂(σ)` on the doubly-collapsed coordinates: blockwise 3-cycles
    /// for `A4`, blockwise transpositions for `D8`.
    pub fn sigma_collapsed(kind: GroupKind, n18: usize) -> Result<Permutation> {
        let step = kind.sigma_order() as usize;
        if n18 == 0 || n18 % step != 0 {
            return Err(Error::DegreeMismatch(n18, step));
        }
        let cycles: Vec<Vec<usize>> = (0..n18 / step)
            .map(|b| (0..step).map(|j| b * step + j).collect())
            .collect();
        Permutation::from_cycles(n18, &cycles)
    }

    /// The planted group `⟨g, h, σ⟩` itself.
    pub fn planted_group(kind: GroupKind, n: usize) -> Result<PermGroup> {
        let gens = vec![pair_swaps(n), quad_swaps(n), sigma(kind, n)?];
        Ok(PermGroup::from_generators(n, &gens))
    }
}

/// The centralizer data for the planted action: the centralizer `G` in
/// the full symmetric group, its collapse `π₁(G)`, the group `G₃₆` of
/// pair-respecting permutations compatible with the collapsed σ, and a
/// left transversal of `π₁(G)` in `G₃₆`.
pub struct WreathData {
    pub kind: GroupKind,
    pub group: PermGroup,
    pub image: PermGroup,
    pub g36: PermGroup,
    pub transversal: Vec<Permutation>,
}

/// Builds the centralizer of the planted `A4`/`D8` action structurally
/// (blockwise regular copies plus block moves) and verifies every
/// generator by commutation. `n` must be a multiple of the block size.
pub fn wreath_centralizer(kind: GroupKind, n: usize) -> Result<WreathData> {
    let b = kind.block();
    if n == 0 || n % b != 0 {
        return Err(Error::DegreeMismatch(n, b));
    }
    let blocks = n / b;
    let g = patterns::pair_swaps(n);
    let h = patterns::quad_swaps(n);
    let sigma = patterns::sigma(kind, n)?;
    let action_gens = [g.clone(), h.clone(), sigma.clone()];

    // Regular labeling of block 0: the planted group acts simply
    // transitively on each block, so points correspond to group elements.
    let planted = patterns::planted_group(kind, n)?;
    let elements = planted.elements(64)?;
    debug_assert_eq!(elements.len(), b);

    // Left-multiplication copy on block 0, extended by the identity.
    let lambda = |a: &Permutation| -> Permutation {
        let mut images: Vec<usize> = (0..n).collect();
        for x in &elements {
            let from = x.apply(0);
            let to = a.compose(x).apply(0);
            images[from] = to;
        }
        Permutation::from_images(images).unwrap()
    };
    let mut cz_gens = vec![lambda(&g), lambda(&h), lambda(&sigma)];
    if blocks >= 2 {
        // Swap blocks 0,1 and cycle all blocks via the shift identification.
        let mut swap: Vec<usize> = (0..n).collect();
        for i in 0..b {
            swap[i] = i + b;
            swap[i + b] = i;
        }
        cz_gens.push(Permutation::from_images(swap).unwrap());
        let shift: Vec<usize> = (0..n).map(|i| (i + b) % n).collect();
        cz_gens.push(Permutation::from_images(shift).unwrap());
    }
    for gen in &cz_gens {
        for a in &action_gens {
            if !gen.commutes_with(a) {
                return Err(Error::Invalid(
                    "structural centralizer generator fails to commute".into(),
                ));
            }
        }
    }
    let group = PermGroup::from_generators(n, &cz_gens);

    // π₁ images on the pair coordinates.
    let n36 = n / 2;
    let image_gens: Result<Vec<Permutation>> =
        cz_gens.iter().map(|t| action_on_blocks(t, 2)).collect();
    let image = PermGroup::from_generators(n36, &image_gens?);

    // G₃₆ structurally: pair flips, blockwise lifted σ-centralizing
    // moves, and superblock moves.
    let h36 = patterns::h_collapsed(n36);
    let sigma18 = patterns::sigma_collapsed(kind, n36 / 2)?;
    let sb = kind.sigma_order() as usize * 2; // superblock size on 36 side
    let t_blocks = n36 / sb;
    let mut g36_gens = vec![Permutation::from_cycles(n36, &[vec![0, 1]])?];
    // one lifted cycle of the pairs inside superblock 0
    let inner: Vec<usize> = (0..sb / 2).collect();
    let inner_cycle = Permutation::from_cycles(n36 / 2, &[inner])?;
    g36_gens.push(natural_lift(&inner_cycle));
    if t_blocks >= 2 {
        let mut swap: Vec<usize> = (0..n36).collect();
        for i in 0..sb {
            swap[i] = i + sb;
            swap[i + sb] = i;
        }
        g36_gens.push(Permutation::from_images(swap)?);
        let shift: Vec<usize> = (0..n36).map(|i| (i + sb) % n36).collect();
        g36_gens.push(Permutation::from_images(shift)?);
    }
    for gen in &g36_gens {
        if !gen.commutes_with(&h36) {
            return Err(Error::Invalid("G36 generator does not centralize π1(h)".into()));
        }
        let pi3 = action_on_blocks(gen, 2)?;
        if !pi3.commutes_with(&sigma18) {
            return Err(Error::Invalid(
                "G36 generator image does not centralize π2(σ)".into(),
            ));
        }
    }
    let g36 = PermGroup::from_generators(n36, &g36_gens);

    // Sanity: π₁(G) must sit inside G₃₆.
    for gen in image.generators() {
        if !g36.contains(gen) {
            return Err(Error::Invalid("π1(G) is not contained in G36".into()));
        }
    }

    // Left transversal of π₁(G) in G₃₆ by coset BFS.
    let mut transversal = vec![Permutation::identity(n36)];
    let mut frontier = vec![Permutation::identity(n36)];
    while let Some(rep) = frontier.pop() {
        for s in g36.generators() {
            let cand = s.compose(&rep);
            let known = transversal
                .iter()
                .any(|r| image.contains(&r.inverse().compose(&cand)));
            if !known {
                transversal.push(cand.clone());
                frontier.push(cand);
            }
        }
    }
    transversal.sort();

    Ok(WreathData {
        kind,
        group,
        image,
        g36,
        transversal,
    })
}

/// Conjugacy-orbit partition of a set of permutations under the group
/// generated by `acting_gens`. Returns one lexicographically minimal
/// representative per orbit, in sorted order.
pub fn conjugacy_representatives(
    elems: &[Permutation],
    acting_gens: &[Permutation],
    budget: u128,
) -> Result<Vec<Permutation>> {
    use std::collections::HashSet;
    let mut remaining: HashSet<Permutation> = elems.iter().cloned().collect();
    let mut reps = Vec::new();
    let mut visited_total: u128 = 0;
    while let Some(seed) = remaining.iter().min().cloned() {
        let mut orbit: HashSet<Permutation> = HashSet::new();
        let mut frontier = vec![seed.clone()];
        orbit.insert(seed.clone());
        let mut min = seed;
        while let Some(x) = frontier.pop() {
            visited_total += 1;
            if visited_total > budget {
                return Err(Error::BudgetExceeded("conjugacy_representatives"));
            }
            for t in acting_gens {
                let y = x.conjugated_by(t);
                if orbit.insert(y.clone()) {
                    if y < min {
                        min = y.clone();
                    }
                    frontier.push(y);
                }
            }
        }
        for x in &orbit {
            remaining.remove(x);
        }
        reps.push(min);
    }
    reps.sort();
    Ok(reps)
}

/// All fixed-point-free elements of the given order, by streaming the
/// group's elements through the stabilizer chain.
pub fn fpf_elements_of_order(
    group: &PermGroup,
    order: u32,
    budget: u128,
) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    group.for_each_element(budget, |p| {
        if p.order() == order as u128 && p.is_fixed_point_free() {
            out.push(p.clone());
        }
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// Randomized hunt for fixed-point-free elements of the given order, for
/// groups too large to enumerate. Classes are still closed exactly (by
/// conjugation orbits), but the *set* of classes found is only as
/// complete as the sampling; callers that need certainty must stay
/// within the enumeration budget.
pub fn fpf_elements_random(
    group: &PermGroup,
    order: u32,
    samples: usize,
    seed: u64,
) -> Vec<Permutation> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Permutation> = Vec::new();
    for _ in 0..samples {
        let x = group.random_element(&mut rng);
        let o = x.order();
        if o % order as u128 == 0 {
            let y = x.pow((o / order as u128) as u64);
            if y.order() == order as u128 && y.is_fixed_point_free() && !found.contains(&y) {
                found.push(y);
            }
        }
    }
    found.sort();
    found
}

/// Dot product helper used by refinement code: the set bits of `mask`
/// restricted to an orbit as a `BitVec`.
pub fn orbit_mask(degree: usize, orbit: &[usize]) -> BitVec {
    let mut m = BitVec::zeros(degree);
    for &p in orbit {
        m.set(p, true);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["(1,2)(3,4)", "()", "(1,5,9)(2,7,12)(3,8,10)(4,6,11)"] {
            let perm = p(s, 12);
            assert_eq!(perm.cycle_string(), s);
        }
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = p("(1,2)", 3);
        let b = p("(2,3)", 3);
        // apply a then b: 1 -> 2 -> 3
        assert_eq!(a.compose(&b).apply(0), 2);
        let k = patterns::pair_swaps(8).compose(&patterns::sigma(GroupKind::D8, 8).unwrap());
        assert_eq!(k.cycle_string(), "(1,8,3,6)(2,5,4,7)");
        assert_eq!(k.order(), 4);
    }

    #[test]
    fn cycle_type_and_fpf() {
        let id = Permutation::identity(4);
        assert!(!id.is_fixed_point_free());
        assert_eq!(id.cycle_type()[&1], 4);
        let g = patterns::pair_swaps(72);
        assert!(g.is_fixed_point_free());
        assert_eq!(g.cycle_type()[&2], 36);
        let sigma = patterns::sigma(GroupKind::A4, 72).unwrap();
        assert!(sigma.is_fixed_point_free());
        assert_eq!(sigma.cycle_type()[&3], 24);
        // frozen reference values for the blockwise patterns at degree 72
        assert!(sigma.cycle_string().ends_with("(64,66,71)"));
        assert!(patterns::sigma(GroupKind::D8, 72)
            .unwrap()
            .cycle_string()
            .ends_with("(68,70)"));
    }

    #[test]
    fn symmetric_group_order() {
        let s6 = PermGroup::symmetric(6);
        assert_eq!(s6.order().unwrap(), 720);
        assert!(s6.contains(&p("(1,4,2)", 6)));
    }

    #[test]
    fn planted_groups_have_right_order() {
        let v4 = PermGroup::from_generators(
            72,
            &[patterns::pair_swaps(72), patterns::quad_swaps(72)],
        );
        assert_eq!(v4.order().unwrap(), 4);
        let a4 = patterns::planted_group(GroupKind::A4, 72).unwrap();
        assert_eq!(a4.order().unwrap(), 12);
        let d8 = patterns::planted_group(GroupKind::D8, 72).unwrap();
        assert_eq!(d8.order().unwrap(), 8);
    }

    #[test]
    fn chain_order_matches_enumeration() {
        // dihedral group of order 8 on 4 points
        let d8 = PermGroup::from_generators(4, &[p("(1,2,3,4)", 4), p("(1,3)", 4)]);
        assert_eq!(d8.order().unwrap(), 8);
        let elems = d8.elements(100).unwrap();
        assert_eq!(elems.len(), 8);
        let unique: std::collections::HashSet<_> = elems.into_iter().collect();
        assert_eq!(unique.len(), 8);
    }

    #[test]
    fn centralizer_brute_force() {
        let s4 = PermGroup::symmetric(4);
        let cz = s4
            .centralizer_of(&[p("(1,2)(3,4)", 4)], 1000)
            .unwrap();
        assert_eq!(cz.order().unwrap(), 8);
    }

    #[test]
    fn conjugating_element_aligns_cycles() {
        let a = p("(1,2)", 4);
        let b = p("(3,4)", 4);
        let t = conjugating_element(&a, &b).unwrap();
        assert_eq!(a.conjugated_by(&t), b);
        assert!(conjugating_element(&a, &p("(1,2,3)", 4)).is_none());
        let id = Permutation::identity(4);
        assert_eq!(conjugating_element(&id, &id).unwrap(), id);
    }

    #[test]
    fn natural_lift_formula() {
        // (1,2) on 18 points lifts to (1,3)(2,4) on 36
        let rho = p("(1,2)", 18);
        let lifted = natural_lift(&rho);
        assert_eq!(lifted.cycle_string(), "(1,3)(2,4)");
        assert!(lifted.commutes_with(&patterns::h_collapsed(36)));
    }

    #[test]
    fn wreath_centralizer_d8_desk() {
        let wd = wreath_centralizer(GroupKind::D8, 8).unwrap();
        assert_eq!(wd.group.order().unwrap(), 8);
        assert_eq!(wd.g36.order().unwrap(), 8);
        assert_eq!(wd.transversal.len(), 1);
    }

    #[test]
    fn wreath_centralizer_a4_desk() {
        let wd = wreath_centralizer(GroupKind::A4, 12).unwrap();
        assert_eq!(wd.group.order().unwrap(), 12);
        // C2 wr C3 on 6 points: order 2^3 * 3
        assert_eq!(wd.g36.order().unwrap(), 24);
        assert_eq!(wd.transversal.len(), 2);
    }

    #[test]
    fn block_action_errors_when_blocks_break() {
        let t = p("(1,3)", 4);
        assert!(action_on_blocks(&t, 2).is_err());
        let ok = p("(1,3)(2,4)", 4);
        assert_eq!(action_on_blocks(&ok, 2).unwrap().cycle_string(), "(1,2)");
    }

    #[test]
    fn fpf_enumeration_s4() {
        let s4 = PermGroup::symmetric(4);
        let elems = fpf_elements_of_order(&s4, 2, 100).unwrap();
        // 2^2-type elements: (12)(34), (13)(24), (14)(23)
        assert_eq!(elems.len(), 3);
        let reps = conjugacy_representatives(&elems, s4.generators(), 1000).unwrap();
        assert_eq!(reps.len(), 1);
    }
}
