//! Binary linear codes: construction, duality, weights, minimum distance
//! with early abort, and exhaustive enumeration of self-dual codes.
//!
//! A code is stored as its canonical generator matrix: reduced row
//! echelon form with rows sorted by pivot. Two values compare equal iff
//! they are the same subspace.

use crate::bits::{self, BitVec};
use crate::perm::Permutation;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

/// Default cap on the dimension of full codeword enumerations.
pub const DEFAULT_ENUM_DIM: usize = 28;

/// A binary linear code of length `n` and dimension `k`, in canonical
/// reduced-row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    length: usize,
    rows: Vec<BitVec>,
}

impl BinaryCode {
    /// Canonicalizes the given spanning set. The dimension is the rank of
    /// the rows, so dependent spanning sets are accepted.
    pub fn from_rows(length: usize, rows: Vec<BitVec>) -> Result<Self> {
        for r in &rows {
            if r.len() != length {
                return Err(Error::LengthMismatch(r.len(), length));
            }
        }
        let mut rows = rows;
        bits::rref(&mut rows);
        Ok(BinaryCode { length, rows })
    }

    pub fn from_strings(rows: &[&str]) -> Result<Self> {
        let length = rows.first().map_or(0, |r| r.len());
        let rows: Result<Vec<BitVec>> = rows.iter().map(|s| BitVec::from_str01(s)).collect();
        Self::from_rows(length, rows?)
    }

    pub fn zero(length: usize) -> Self {
        BinaryCode {
            length,
            rows: Vec::new(),
        }
    }

    pub fn full(length: usize) -> Self {
        let rows = (0..length)
            .map(|i| {
                let mut v = BitVec::zeros(length);
                v.set(i, true);
                v
            })
            .collect();
        BinaryCode { length, rows }
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.length
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Compact hash key for codes of length ≤ 64: one word per canonical
    /// row. Cheap to hash during orbit closures.
    pub fn compact_key(&self) -> Vec<u64> {
        assert!(self.length <= 64);
        self.rows
            .iter()
            .map(|r| {
                let mut w = 0u64;
                for i in r.iter_ones() {
                    w |= 1 << i;
                }
                w
            })
            .collect()
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        for row in &self.rows {
            let p = row.first_set().unwrap();
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v.is_zero()
    }

    pub fn contains_code(&self, other: &BinaryCode) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// The dual code under the standard inner product.
    pub fn dual(&self) -> BinaryCode {
        let ker = bits::kernel(&self.rows, self.length);
        BinaryCode::from_rows(self.length, ker).unwrap()
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dimension() == self.length && self.is_self_orthogonal()
    }

    pub fn is_self_orthogonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| !r.dot(r) && self.rows[i + 1..].iter().all(|s| !r.dot(s)))
    }

    /// All generator weights divisible by four and all pairs orthogonal;
    /// by the identity `wt(u+v) = wt(u)+wt(v)-2·wt(u∧v)` this is
    /// equivalent to every codeword weight being divisible by four.
    pub fn is_doubly_even(&self) -> bool {
        self.rows.iter().all(|r| r.weight() % 4 == 0)
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| self.rows[i + 1..].iter().all(|s| !r.dot(s)))
    }

    /// Row-space sum.
    pub fn sum(&self, other: &BinaryCode) -> Result<BinaryCode> {
        if self.length != other.length {
            return Err(Error::LengthMismatch(self.length, other.length));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BinaryCode::from_rows(self.length, rows)
    }

    /// Intersection, via the dual of the sum of the duals.
    pub fn intersect(&self, other: &BinaryCode) -> Result<BinaryCode> {
        if self.length != other.length {
            return Err(Error::LengthMismatch(self.length, other.length));
        }
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// Image under a coordinate permutation, re-canonicalized.
    pub fn permuted(&self, p: &Permutation) -> Result<BinaryCode> {
        if p.degree() != self.length {
            return Err(Error::DegreeMismatch(p.degree(), self.length));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.permuted_by_images(p.images()))
            .collect();
        BinaryCode::from_rows(self.length, rows)
    }

    pub fn is_invariant_under(&self, p: &Permutation) -> bool {
        self.permuted(p).map_or(false, |c| &c == self)
    }

    /// Visits all `2^k` codewords in Gray-code order (the zero word
    /// first). Errors out when `k` exceeds `limit_dim`.
    pub fn for_each_codeword(
        &self,
        limit_dim: usize,
        mut f: impl FnMut(&BitVec) -> ControlFlow<()>,
    ) -> Result<()> {
        let k = self.dimension();
        if k > limit_dim {
            return Err(Error::EnumerationTooLarge(1u128 << k.min(127), 1u128 << limit_dim.min(127)));
        }
        let mut acc = BitVec::zeros(self.length);
        if f(&acc).is_break() {
            return Ok(());
        }
        for i in 1u64..(1u64 << k) {
            let bit = i.trailing_zeros() as usize;
            acc.xor_assign(&self.rows[bit]);
            if f(&acc).is_break() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Exact codeword-weight histogram by full enumeration.
    pub fn weight_profile(&self, limit_dim: usize) -> Result<WeightProfile> {
        let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
        self.for_each_codeword(limit_dim, |w| {
            *counts.entry(w.weight()).or_insert(0) += 1;
            ControlFlow::Continue(())
        })?;
        Ok(WeightProfile { counts })
    }

    /// Minimum distance by combination-order enumeration over the
    /// canonical generators: a combination of `r` rows has weight ≥ `r`
    /// because the pivot columns survive, so the outer loop stops as soon
    /// as `r` reaches the best weight found.
    ///
    /// With `upper_bound = Some(b)` the search returns early, flagged as
    /// a bound hit, as soon as any codeword of weight ≤ `b` is found; the
    /// reported value is that codeword's weight, not necessarily `d(C)`.
    /// When no bound hit occurs the result is exact.
    pub fn min_distance(&self, upper_bound: Option<usize>) -> Result<MinDistance> {
        let k = self.dimension();
        if k == 0 {
            return Err(Error::ZeroDimensional);
        }
        let mut best = usize::MAX;
        let bound = upper_bound.unwrap_or(0);
        let mut acc = BitVec::zeros(self.length);
        let mut hit = None;
        for r in 1..=k {
            if r >= best {
                break;
            }
            if upper_bound.is_some() && r > bound && best <= self.length {
                // no codeword of weight ≤ bound exists (any such word is a
                // combination of ≤ bound rows); finish exactly
            }
            let mut chosen = Vec::with_capacity(r);
            if Self::combos(
                &self.rows,
                0,
                r,
                &mut chosen,
                &mut acc,
                &mut best,
                upper_bound,
                &mut hit,
            )
            .is_break()
            {
                break;
            }
        }
        if let Some(w) = hit {
            return Ok(MinDistance {
                value: w,
                bound_hit: true,
            });
        }
        Ok(MinDistance {
            value: best,
            bound_hit: false,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn combos(
        rows: &[BitVec],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        acc: &mut BitVec,
        best: &mut usize,
        upper: Option<usize>,
        hit: &mut Option<usize>,
    ) -> ControlFlow<()> {
        if remaining == 0 {
            let w = acc.weight();
            if w < *best {
                *best = w;
            }
            if let Some(b) = upper {
                if w <= b {
                    *hit = Some(w);
                    return ControlFlow::Break(());
                }
            }
            return ControlFlow::Continue(());
        }
        for i in start..=rows.len() - remaining {
            acc.xor_assign(&rows[i]);
            chosen.push(i);
            let r = Self::combos(rows, i + 1, remaining - 1, chosen, acc, best, upper, hit);
            chosen.pop();
            acc.xor_assign(&rows[i]);
            r?;
        }
        ControlFlow::Continue(())
    }

    /// Serialization in the code file format: `n k`, then one generator
    /// row per line, trailing newline included.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.length, self.dimension());
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the code file format. Lines starting with `#` are comments.
    /// The stated dimension must match the rank of the listed rows.
    pub fn parse(text: &str) -> Result<BinaryCode> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n k\"".into()))?;
        let k: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header: expected \"n k\"".into()))?;
        if it.next().is_some() {
            return Err(Error::Parse("bad header: trailing tokens".into()));
        }
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("expected {k} generator rows")))?;
            if line.len() != n {
                return Err(Error::Parse(format!(
                    "row has length {}, expected {n}",
                    line.len()
                )));
            }
            rows.push(BitVec::from_str01(line)?);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after generator rows".into()));
        }
        let code = BinaryCode::from_rows(n, rows)?;
        if code.dimension() != k {
            return Err(Error::Parse(format!(
                "stated dimension {k} but rows have rank {}",
                code.dimension()
            )));
        }
        Ok(code)
    }
}

impl fmt::Debug for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}] code", self.length, self.dimension())
    }
}

/// Result of a minimum-distance computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinDistance {
    pub value: usize,
    /// True when the search stopped early at the caller's upper bound; in
    /// that case `value` is a witness weight ≤ bound, not necessarily the
    /// minimum.
    pub bound_hit: bool,
}

/// Exact codeword-weight histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    counts: BTreeMap<usize, u64>,
}

impl WeightProfile {
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn min_nonzero(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

// ---------------------------------------------------------------------
// Known families
// ---------------------------------------------------------------------

/// Constructions used as fixtures and desk-scale oracles.
pub mod families {
    use super::*;
    use crate::perm::Permutation;

    /// The `[n,1]` repetition code.
    pub fn repetition(n: usize) -> BinaryCode {
        BinaryCode::from_rows(n, vec![BitVec::ones(n)]).unwrap()
    }

    /// The `[8,4,4]` extended Hamming code (first-order Reed–Muller).
    pub fn extended_hamming8() -> BinaryCode {
        BinaryCode::from_strings(&["11111111", "01010101", "00110011", "00001111"]).unwrap()
    }

    /// The `[24,12,8]` extended Golay code as the extended quadratic
    /// residue code of length 23: coordinates `0..22` are the cyclic
    /// positions (field elements of GF(23)) and coordinate 23 is the
    /// extension position ∞.
    pub fn extended_golay() -> BinaryCode {
        // generator polynomial of one of the two QR(23) codes
        let q = [0usize, 2, 4, 5, 6, 10, 11];
        let mut rows = Vec::with_capacity(12);
        for shift in 0..12 {
            let mut row = BitVec::zeros(24);
            for &e in &q {
                row.set(e + shift, true);
            }
            row.set(23, true); // weight 7 is odd, so the parity bit is set
            rows.push(row);
        }
        BinaryCode::from_rows(24, rows).unwrap()
    }

    /// Generators of PSL(2,23) acting on the 24 coordinates of the
    /// extended Golay code above: `x ↦ x+1`, `x ↦ 4x`, `x ↦ -1/x`, with
    /// coordinate 23 playing ∞.
    pub fn psl2_23() -> Vec<Permutation> {
        let p = 23usize;
        let inf = 23usize;
        let shift: Vec<usize> = (0..24)
            .map(|i| if i == inf { inf } else { (i + 1) % p })
            .collect();
        let mul4: Vec<usize> = (0..24)
            .map(|i| if i == inf { inf } else { (i * 4) % p })
            .collect();
        let inv_neg: Vec<usize> = (0..24)
            .map(|i| {
                if i == inf {
                    0
                } else if i == 0 {
                    inf
                } else {
                    // -1/x mod 23
                    let xinv = mod_inverse(i, p);
                    (p - xinv) % p
                }
            })
            .collect();
        vec![
            Permutation::from_images(shift).unwrap(),
            Permutation::from_images(mul4).unwrap(),
            Permutation::from_images(inv_neg).unwrap(),
        ]
    }

    fn mod_inverse(a: usize, p: usize) -> usize {
        // p is prime; a^(p-2) mod p
        let mut result = 1usize;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }
}

// ---------------------------------------------------------------------
// Random and exhaustive self-dual code generation
// ---------------------------------------------------------------------

/// A uniformly-ish random self-dual code of even length `n`, grown by
/// repeatedly adjoining random even-weight vectors of the current
/// orthogonal complement.
pub fn random_self_dual(n: usize, rng: &mut impl rand::Rng) -> BinaryCode {
    assert!(n % 2 == 0 && n > 0);
    let mut rows: Vec<BitVec> = Vec::new();
    while rows.len() < n / 2 {
        // candidates: orthogonal to all rows and of even weight
        let mut constraints = rows.clone();
        constraints.push(BitVec::ones(n));
        let ker = bits::kernel(&constraints, n);
        loop {
            let mut v = BitVec::zeros(n);
            for b in &ker {
                if rng.gen::<bool>() {
                    v.xor_assign(b);
                }
            }
            let mut test = rows.clone();
            test.push(v.clone());
            if bits::rank(&test) > rows.len() {
                rows.push(v);
                break;
            }
        }
    }
    BinaryCode::from_rows(n, rows).unwrap()
}

/// Visits every self-dual code of length `n` exactly once, streaming
/// canonical generator matrices in depth-first pivot order.
pub fn for_each_self_dual(n: usize, mut f: impl FnMut(&BinaryCode) -> ControlFlow<()>) {
    assert!(n % 2 == 0 && n > 0);
    let diag = BitVec::ones(n); // b(w,w) = parity of weight
    crate::bits::max_isotropic_dfs(n, n / 2, &|v: &BitVec| v.clone(), &diag, &mut |rows| {
        let code = BinaryCode::from_rows(n, rows.to_vec()).unwrap();
        f(&code)
    });
}

/// `∏_{i=1}^{n/2-1} (2^i + 1)`: the number of self-dual codes of length `n`.
pub fn self_dual_count(n: usize) -> u128 {
    assert!(n % 2 == 0);
    (1..n / 2).map(|i| (1u128 << i) + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn code(rows: &[&str]) -> BinaryCode {
        BinaryCode::from_strings(rows).unwrap()
    }

    #[test]
    fn dual_of_repetition2_is_itself() {
        let c = code(&["11"]);
        assert_eq!(c.dual(), c);
        assert!(c.is_self_dual());
    }

    #[test]
    fn dual_of_full_space_is_zero() {
        let f = BinaryCode::full(5);
        assert_eq!(f.dual(), BinaryCode::zero(5));
        assert_eq!(f.dual().dual(), f);
    }

    #[test]
    fn dual_dimensions_and_involution() {
        let c = code(&["101100", "010110", "001011"]);
        let d = c.dual();
        assert_eq!(c.dimension() + d.dimension(), 6);
        assert_eq!(d.dual(), c);
        // brute force: every pair of codewords is orthogonal
        c.for_each_codeword(10, |u| {
            d.for_each_codeword(10, |v| {
                assert!(!u.dot(v));
                ControlFlow::Continue(())
            })
            .unwrap();
            ControlFlow::Continue(())
        })
        .unwrap();
    }

    #[test]
    fn extended_hamming_is_self_dual_with_profile() {
        let e8 = families::extended_hamming8();
        assert!(e8.is_self_dual());
        assert!(e8.is_doubly_even());
        let wp = e8.weight_profile(10).unwrap();
        let expected: BTreeMap<usize, u64> = [(0, 1), (4, 14), (8, 1)].into_iter().collect();
        assert_eq!(wp.counts(), &expected);
        assert_eq!(e8.min_distance(None).unwrap().value, 4);
        // self-duality cross-check by brute force over all 16x16 pairs
        e8.for_each_codeword(10, |u| {
            e8.for_each_codeword(10, |v| {
                assert!(!u.dot(v));
                ControlFlow::Continue(())
            })
            .unwrap();
            ControlFlow::Continue(())
        })
        .unwrap();
    }

    #[test]
    fn extended_golay_parameters() {
        let g24 = families::extended_golay();
        assert_eq!((g24.length(), g24.dimension()), (24, 12));
        assert!(g24.is_self_dual());
        assert!(g24.is_doubly_even());
        let wp = g24.weight_profile(14).unwrap();
        let keys: Vec<usize> = wp.counts().keys().copied().collect();
        assert_eq!(keys, vec![0, 8, 12, 16, 24]);
        assert_eq!(wp.min_nonzero(), Some(8));
        assert_eq!(wp.total(), 4096);
        assert_eq!(g24.min_distance(None).unwrap().value, 8);
    }

    #[test]
    fn golay_invariant_under_psl2_23() {
        let g24 = families::extended_golay();
        for p in families::psl2_23() {
            assert!(g24.is_invariant_under(&p), "not invariant under {p}");
        }
        let group = crate::perm::PermGroup::from_generators(24, &families::psl2_23());
        assert_eq!(group.order().unwrap(), 6072);
    }

    #[test]
    fn min_distance_repetition_and_bounds() {
        let rep = families::repetition(7);
        assert_eq!(rep.min_distance(None).unwrap().value, 7);
        let hit = rep.min_distance(Some(7)).unwrap();
        assert!(hit.bound_hit && hit.value == 7);
        let miss = rep.min_distance(Some(3)).unwrap();
        assert!(!miss.bound_hit && miss.value == 7);
        assert_eq!(
            BinaryCode::zero(4).min_distance(None),
            Err(Error::ZeroDimensional)
        );
    }

    #[test]
    fn weight_profile_too_large() {
        let f = BinaryCode::full(8);
        assert!(matches!(
            f.weight_profile(4),
            Err(Error::EnumerationTooLarge(..))
        ));
    }

    #[test]
    fn sum_intersect_dimension_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let a = random_code(12, 3, &mut rng);
            let b = random_code(12, 4, &mut rng);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            assert_eq!(
                s.dimension() + i.dimension(),
                a.dimension() + b.dimension()
            );
            assert!(s.contains_code(&a) && s.contains_code(&b));
            assert!(a.contains_code(&i) && b.contains_code(&i));
            // brute-force check that the intersection is exactly right
            a.for_each_codeword(12, |w| {
                assert_eq!(i.contains(w), b.contains(w));
                ControlFlow::Continue(())
            })
            .unwrap();
        }
        let a = random_code(12, 3, &mut rng);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    fn random_code(n: usize, k: usize, rng: &mut impl rand::Rng) -> BinaryCode {
        loop {
            let rows: Vec<BitVec> = (0..k)
                .map(|_| BitVec::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<_>>()))
                .collect();
            let c = BinaryCode::from_rows(n, rows).unwrap();
            if c.dimension() == k {
                return c;
            }
        }
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c = random_code(10, 4, &mut rng);
        for _ in 0..20 {
            // random invertible recombination of the rows
            let mut rows = c.rows().to_vec();
            for i in 0..rows.len() {
                for j in 0..rows.len() {
                    if i != j && rng.gen::<bool>() {
                        let other = rows[j].clone();
                        rows[i].xor_assign(&other);
                    }
                }
            }
            assert_eq!(BinaryCode::from_rows(10, rows).unwrap(), c);
        }
    }

    #[test]
    fn file_format_round_trip() {
        let g24 = families::extended_golay();
        let text = g24.to_file_string();
        assert!(text.ends_with('\n'));
        assert_eq!(BinaryCode::parse(&text).unwrap(), g24);
        let with_comments = format!("# fixture\n{text}");
        assert_eq!(BinaryCode::parse(&with_comments).unwrap(), g24);
        assert!(BinaryCode::parse("2 2\n11\n11\n").is_err()); // rank 1, stated 2
    }

    #[test]
    fn self_dual_enumeration_matches_mass_formula() {
        for n in [2usize, 4, 6, 8, 10] {
            let mut count = 0u128;
            for_each_self_dual(n, |c| {
                assert!(c.is_self_dual());
                count += 1;
                ControlFlow::Continue(())
            });
            assert_eq!(count, self_dual_count(n), "length {n}");
        }
    }

    #[test]
    fn random_self_dual_is_self_dual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in [8usize, 12, 16, 24] {
            let c = random_self_dual(n, &mut rng);
            assert!(c.is_self_dual());
            // self-dual implies all weights even and 1 ∈ C
            assert!(c.contains(&BitVec::ones(n)));
        }
    }

    #[test]
    fn permutation_action_composes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let c = random_code(8, 3, &mut rng);
        let s4 = crate::perm::PermGroup::symmetric(8);
        let p = s4.random_element(&mut rng);
        let q = s4.random_element(&mut rng);
        let via_product = c.permuted(&p.compose(&q)).unwrap();
        let stepwise = c.permuted(&p).unwrap().permuted(&q).unwrap();
        assert_eq!(via_product, stepwise);
        assert_eq!(c.permuted(&Permutation::identity(8)).unwrap(), c);
        let swap = Permutation::parse_cycles("(1,2)", 2).unwrap();
        let c01 = code(&["01"]);
        assert_eq!(c01.permuted(&swap).unwrap(), code(&["10"]));
    }
}
