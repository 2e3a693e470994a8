//! Automorphism-equivariant decompositions of binary codes.
//!
//! For an automorphism `g` of a code `C` this module computes the fixed
//! subcode `C(g)`, the subcode `E(g)` of words with even weight on every
//! cycle of `g`, and — for fixed-point-free `g` of order 3 — the
//! identification of `E(g)` with a code over GF(4), one field element
//! per cycle. The cycle-collapse bijections between fixed spaces and
//! shorter binary spaces live here too.

use crate::bits::{self, BitVec};
use crate::gf2::{families, BinaryCode};
use crate::gf4::{F4, F4Vector, LinearF4Code};
use crate::perm::{PermGroup, Permutation};
use crate::{Error, Result};

/// The ordered cycles of a permutation: each cycle starts at its
/// smallest point and continues along `g`, and cycles are sorted by
/// smallest point. Fixed points are singleton cycles.
#[derive(Debug, Clone)]
pub struct CycleStructure {
    pub degree: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl CycleStructure {
    pub fn of(p: &Permutation) -> Self {
        let n = p.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut q = p.apply(start);
            while q != start {
                seen[q] = true;
                cycle.push(q);
                q = p.apply(q);
            }
            cycles.push(cycle);
        }
        CycleStructure { degree: n, cycles }
    }

    /// The common cycle length, if all cycles agree.
    pub fn uniform_length(&self) -> Option<usize> {
        let l = self.cycles.first()?.len();
        self.cycles.iter().all(|c| c.len() == l).then_some(l)
    }

    /// Indicator vector of one cycle.
    pub fn mask(&self, idx: usize) -> BitVec {
        let mut m = BitVec::zeros(self.degree);
        for &p in &self.cycles[idx] {
            m.set(p, true);
        }
        m
    }
}

/// The subcode of `g`-fixed words, `{c ∈ C | c^g = c}`, computed as the
/// kernel of `c ↦ c + c^g` on `C`. Verifies first that `g` is an
/// automorphism of the code.
pub fn fixed_code(code: &BinaryCode, g: &Permutation) -> Result<BinaryCode> {
    if !code.is_invariant_under(g) {
        return Err(Error::NotInvariant);
    }
    let moved: Vec<BitVec> = code
        .rows()
        .iter()
        .map(|r| r.xored(&r.permuted_by_images(g.images())))
        .collect();
    let relations = bits::left_kernel(&moved, code.length());
    let rows = combine(code.rows(), &relations, code.length());
    BinaryCode::from_rows(code.length(), rows)
}

/// The subcode of words with even weight on every cycle of `g`.
pub fn even_subcode(code: &BinaryCode, g: &Permutation) -> Result<BinaryCode> {
    if !code.is_invariant_under(g) {
        return Err(Error::NotInvariant);
    }
    let cs = CycleStructure::of(g);
    // parity pattern of each generator across the cycles
    let parities: Vec<BitVec> = code
        .rows()
        .iter()
        .map(|r| {
            let mut p = BitVec::zeros(cs.cycles.len());
            for (j, _) in cs.cycles.iter().enumerate() {
                p.set(j, r.and_weight(&cs.mask(j)) % 2 == 1);
            }
            p
        })
        .collect();
    let relations = bits::left_kernel(&parities, cs.cycles.len());
    let rows = combine(code.rows(), &relations, code.length());
    BinaryCode::from_rows(code.length(), rows)
}

fn combine(gens: &[BitVec], coefficient_sets: &[BitVec], n: usize) -> Vec<BitVec> {
    coefficient_sets
        .iter()
        .map(|coeffs| {
            let mut v = BitVec::zeros(n);
            for (j, g) in gens.iter().enumerate() {
                if coeffs.get(j) {
                    v.xor_assign(g);
                }
            }
            v
        })
        .collect()
}

/// The image `C · (g^a + g^(a+1) + … + g^(p-1))`: with `a = 0` this is
/// the averaging projector onto the fixed code (odd `p`), with `a = 1`
/// the projector onto the even-cycle-weight subcode.
pub fn averaging_image(code: &BinaryCode, g: &Permutation, from_power: u64) -> Result<BinaryCode> {
    let p = g.order() as u64;
    let rows: Vec<BitVec> = code
        .rows()
        .iter()
        .map(|r| {
            let mut acc = BitVec::zeros(code.length());
            for e in from_power..p {
                acc.xor_assign(&r.permuted_by_images(g.pow(e).images()));
            }
            acc
        })
        .collect();
    BinaryCode::from_rows(code.length(), rows)
}

/// The Maschke decomposition `C = C(g) ⊕ E(g)` for a fixed-point-free
/// automorphism of odd prime order.
#[derive(Debug, Clone)]
pub struct MaschkeSplit {
    pub fixed: BinaryCode,
    pub even: BinaryCode,
}

pub fn maschke_split(code: &BinaryCode, g: &Permutation) -> Result<MaschkeSplit> {
    let p = g.order();
    if p % 2 == 0 || p == 1 {
        return Err(Error::WrongOrder {
            expected: 3,
            got: p as u32,
        });
    }
    let fixed = fixed_code(code, g)?;
    let even = even_subcode(code, g)?;
    if fixed.dimension() + even.dimension() != code.dimension()
        || fixed.intersect(&even)?.dimension() != 0
    {
        return Err(Error::Invalid("Maschke decomposition failed".into()));
    }
    Ok(MaschkeSplit { fixed, even })
}

// ---------------------------------------------------------------------
// Cycle-collapse bijections
// ---------------------------------------------------------------------

/// Collapses consecutive blocks of size `block` to single coordinates;
/// errors when the vector is not constant on some block. With
/// `block = 2` this is the bijection from the fixed space of
/// `(1,2)(3,4)…` onto the half-length space.
pub fn collapse_blocks(v: &BitVec, block: usize) -> Result<BitVec> {
    let n = v.len();
    if block == 0 || n % block != 0 {
        return Err(Error::LengthMismatch(n, block));
    }
    let mut out = BitVec::zeros(n / block);
    for j in 0..n / block {
        let b = v.get(j * block);
        for t in 1..block {
            if v.get(j * block + t) != b {
                return Err(Error::NotInFixedSpace);
            }
        }
        out.set(j, b);
    }
    Ok(out)
}

/// The inverse blow-up of [`collapse_blocks`].
pub fn expand_blocks(v: &BitVec, block: usize) -> BitVec {
    let mut out = BitVec::zeros(v.len() * block);
    for j in 0..v.len() {
        if v.get(j) {
            for t in 0..block {
                out.set(j * block + t, true);
            }
        }
    }
    out
}

/// Blockwise collapse of a whole code (every generator must be constant
/// on the blocks).
pub fn collapse_code(code: &BinaryCode, block: usize) -> Result<BinaryCode> {
    let rows: Result<Vec<BitVec>> = code
        .rows()
        .iter()
        .map(|r| collapse_blocks(r, block))
        .collect();
    BinaryCode::from_rows(code.length() / block, rows?)
}

/// Blockwise blow-up of a whole code.
pub fn expand_code(code: &BinaryCode, block: usize) -> BinaryCode {
    let rows = code.rows().iter().map(|r| expand_blocks(r, block)).collect();
    BinaryCode::from_rows(code.length() * block, rows).unwrap()
}

// ---------------------------------------------------------------------
// The GF(4) identification on 3-cycles
// ---------------------------------------------------------------------

/// Identifies an even-weight 3-bit block (a polynomial `v₁ + v₂x + v₃x²`
/// in F₂[x]/(x³-1)) with an element of GF(4):
/// `000 ↦ 0`, `011 ↦ 1`, `110 ↦ ω`, `101 ↦ ω̄`.
pub fn f4_identify(block: [bool; 3]) -> Result<F4> {
    match block {
        [false, false, false] => Ok(F4::ZERO),
        [false, true, true] => Ok(F4::ONE),
        [true, true, false] => Ok(F4::OMEGA),
        [true, false, true] => Ok(F4::OMEGA_BAR),
        _ => Err(Error::OddWeightBlock),
    }
}

/// Inverse of [`f4_identify`].
pub fn f4_expand(e: F4) -> [bool; 3] {
    match e {
        F4::ZERO => [false, false, false],
        F4::ONE => [false, true, true],
        F4::OMEGA => [true, true, false],
        _ => [true, false, true],
    }
}

/// Product of two 3-bit blocks as polynomials modulo `x³ - 1` — the
/// multiplication the identification is supposed to transport.
pub fn poly3_mul(a: [bool; 3], b: [bool; 3]) -> [bool; 3] {
    let mut out = [false; 3];
    for (i, &ai) in a.iter().enumerate() {
        if !ai {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj {
                out[(i + j) % 3] ^= true;
            }
        }
    }
    out
}

/// The GF(4) image of a single vector with even weight on each 3-cycle
/// of `g`: coordinate `j` is the identification of the bits read along
/// cycle `j` in the orientation `(i, i^g, i^(g²))`, cycles ordered by
/// smallest point.
pub fn f4_image_vector(v: &BitVec, g: &Permutation) -> Result<F4Vector> {
    let cs = CycleStructure::of(g);
    if cs.uniform_length() != Some(3) {
        return Err(Error::WrongOrder {
            expected: 3,
            got: g.order() as u32,
        });
    }
    let mut out = F4Vector::zeros(cs.cycles.len());
    for (j, cyc) in cs.cycles.iter().enumerate() {
        let block = [v.get(cyc[0]), v.get(cyc[1]), v.get(cyc[2])];
        out.set(j, f4_identify(block)?);
    }
    Ok(out)
}

/// Binary expansion inverse to [`f4_image_vector`].
pub fn f4_preimage_vector(v: &F4Vector, g: &Permutation) -> Result<BitVec> {
    let cs = CycleStructure::of(g);
    if cs.uniform_length() != Some(3) || cs.cycles.len() != v.len() {
        return Err(Error::LengthMismatch(v.len(), cs.cycles.len()));
    }
    let mut out = BitVec::zeros(g.degree());
    for (j, cyc) in cs.cycles.iter().enumerate() {
        let bits3 = f4_expand(v.get(j));
        for t in 0..3 {
            out.set(cyc[t], bits3[t]);
        }
    }
    Ok(out)
}

/// Maps the even-cycle-weight subcode `E(g)` of a code with a
/// fixed-point-free order-3 automorphism to its GF(4)-linear image, one
/// symbol per cycle.
pub fn map_e_to_f4(even_code: &BinaryCode, g: &Permutation) -> Result<LinearF4Code> {
    let words: Result<Vec<F4Vector>> = even_code
        .rows()
        .iter()
        .map(|r| f4_image_vector(r, g))
        .collect();
    let cs = CycleStructure::of(g);
    LinearF4Code::from_rows(cs.cycles.len(), words?)
}

/// Expands an F₂-generating set of GF(4) words back to the binary code
/// supported on the cycles of `g`.
pub fn f4_code_to_binary(f2_gens: &[F4Vector], g: &Permutation) -> Result<BinaryCode> {
    let rows: Result<Vec<BitVec>> = f2_gens.iter().map(|w| f4_preimage_vector(w, g)).collect();
    BinaryCode::from_rows(g.degree(), rows?)
}

/// The standard fixed-point-free order-3 pattern `(1,2,3)(4,5,6)…`.
pub fn order3_pattern(n: usize) -> Result<Permutation> {
    if n % 3 != 0 {
        return Err(Error::DegreeMismatch(n, 3));
    }
    let cycles: Vec<Vec<usize>> = (0..n / 3).map(|b| vec![3 * b, 3 * b + 1, 3 * b + 2]).collect();
    Permutation::from_cycles(n, &cycles)
}

/// The order-2 pattern `(1,4)(2,6)(3,5)…` pairing consecutive 3-cycles,
/// which together with [`order3_pattern`] generates a free action of the
/// symmetric group of degree 3.
pub fn s3_sigma_pattern(n: usize) -> Result<Permutation> {
    if n % 6 != 0 {
        return Err(Error::DegreeMismatch(n, 6));
    }
    let mut cycles = Vec::new();
    for b in 0..n / 6 {
        let o = 6 * b;
        cycles.push(vec![o, o + 3]);
        cycles.push(vec![o + 1, o + 5]);
        cycles.push(vec![o + 2, o + 4]);
    }
    Permutation::from_cycles(n, &cycles)
}

// ---------------------------------------------------------------------
// Planted constructions and the Golay pipeline
// ---------------------------------------------------------------------

/// A self-dual code invariant under the standard order-3 pattern,
/// assembled from a random self-dual code on the cycle space and a
/// random Hermitian self-dual GF(4)-linear code: the two parts are the
/// fixed code and the even-cycle-weight subcode by construction.
pub fn planted_order3_self_dual(
    cycles: usize,
    rng: &mut impl rand::Rng,
) -> Result<(BinaryCode, Permutation)> {
    if cycles % 2 != 0 || cycles == 0 {
        return Err(Error::DegreeMismatch(cycles, 2));
    }
    let n = 3 * cycles;
    let g = order3_pattern(n)?;
    let fixed_part = expand_code(&crate::gf2::random_self_dual(cycles, rng), 3);
    let x = crate::gf4::random_hermitian_self_dual(cycles, rng);
    let even_part = f4_code_to_binary(&x.f2_generators(), &g)?;
    let code = fixed_part.sum(&even_part)?;
    debug_assert!(code.is_self_dual());
    debug_assert!(code.is_invariant_under(&g));
    Ok((code, g))
}

/// The extended Golay code relabeled so that a free action of the
/// symmetric group of degree 3 lands on the standard patterns: `g`
/// becomes `(1,2,3)(4,5,6)…` and `σ` becomes `(1,4)(2,6)(3,5)…`.
pub struct GolayS3 {
    pub code: BinaryCode,
    pub g: Permutation,
    pub sigma: Permutation,
}

/// Finds the S₃ structure inside the automorphism group of the extended
/// Golay code by enumerating PSL(2,23) and relabeling coordinates.
pub fn golay_s3() -> Result<GolayS3> {
    let golay = families::extended_golay();
    let psl = PermGroup::from_generators(24, &families::psl2_23());
    let elements = psl.elements(10_000)?;
    let g_raw = elements
        .iter()
        .find(|p| p.order() == 3 && p.is_fixed_point_free())
        .ok_or_else(|| Error::Invalid("no fixed-point-free order-3 element".into()))?
        .clone();
    let g_inv = g_raw.inverse();
    let sigma_raw = elements
        .iter()
        .find(|p| {
            p.order() == 2 && p.is_fixed_point_free() && g_raw.conjugated_by(p) == g_inv
        })
        .ok_or_else(|| Error::Invalid("no inverting involution".into()))?
        .clone();

    // Relabel: orbit j of the free S3-action becomes coordinates
    // 6j+1..6j+6 in the order x, x^g, x^g², x^σ, x^σg, x^σg².
    let mut relabel = vec![usize::MAX; 24];
    let mut used = vec![false; 24];
    let mut next = 0usize;
    for x in 0..24 {
        if used[x] {
            continue;
        }
        let orbit = [
            x,
            g_raw.apply(x),
            g_raw.apply(g_raw.apply(x)),
            sigma_raw.apply(x),
            g_raw.apply(sigma_raw.apply(x)),
            g_raw.apply(g_raw.apply(sigma_raw.apply(x))),
        ];
        for (t, &p) in orbit.iter().enumerate() {
            if used[p] {
                return Err(Error::Invalid("S3 action is not free".into()));
            }
            used[p] = true;
            relabel[p] = next + t;
        }
        next += 6;
    }
    let relabel = Permutation::from_images(relabel)?;
    let code = golay.permuted(&relabel)?;
    let g = order3_pattern(24)?;
    let sigma = s3_sigma_pattern(24)?;
    if !code.is_invariant_under(&g) || !code.is_invariant_under(&sigma) {
        return Err(Error::Invalid("relabeled code lost its symmetry".into()));
    }
    Ok(GolayS3 { code, g, sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::ops::ControlFlow;

    #[test]
    fn identification_table_and_field_transport() {
        assert_eq!(f4_identify([false, false, false]).unwrap(), F4::ZERO);
        assert_eq!(f4_identify([true, true, false]).unwrap(), F4::OMEGA);
        assert_eq!(f4_identify([false, true, true]).unwrap(), F4::ONE);
        assert_eq!(f4_identify([true, false, true]).unwrap(), F4::OMEGA_BAR);
        assert_eq!(f4_identify([true, false, false]), Err(Error::OddWeightBlock));
        // transported multiplication agrees with GF(4) on all 16 products
        let elems = [F4::ZERO, F4::ONE, F4::OMEGA, F4::OMEGA_BAR];
        for a in elems {
            for b in elems {
                let prod = poly3_mul(f4_expand(a), f4_expand(b));
                assert_eq!(f4_identify(prod).unwrap(), a.mul(b));
            }
        }
        // the identity element is x + x², i.e. 011
        assert_eq!(f4_expand(F4::ONE), [false, true, true]);
    }

    #[test]
    fn collapse_and_expand_round_trip() {
        let v = BitVec::from_str01("110011").unwrap();
        let c = collapse_blocks(&v, 2).unwrap();
        assert_eq!(c.to_string(), "101");
        assert_eq!(expand_blocks(&c, 2), v);
        assert_eq!(
            collapse_blocks(&BitVec::from_str01("10").unwrap(), 2),
            Err(Error::NotInFixedSpace)
        );
        let ones = BitVec::ones(72);
        assert_eq!(collapse_blocks(&ones, 2).unwrap(), BitVec::ones(36));
        // the collapse halves weights exactly
        assert_eq!(collapse_blocks(&v, 2).unwrap().weight() * 2, v.weight());
        // π2 = π3 ∘ π1 pointwise
        let w = BitVec::from_str01("111100001111").unwrap();
        let via_pi2 = collapse_blocks(&w, 4).unwrap();
        let via_pi3_pi1 = collapse_blocks(&collapse_blocks(&w, 2).unwrap(), 2).unwrap();
        assert_eq!(via_pi2, via_pi3_pi1);
    }

    #[test]
    fn fixed_code_trivial_action_is_whole_code() {
        let e8 = families::extended_hamming8();
        let id = Permutation::identity(8);
        assert_eq!(fixed_code(&e8, &id).unwrap(), e8);
        // a non-automorphism is rejected
        let bad = Permutation::parse_cycles("(1,2)", 8).unwrap();
        if !e8.is_invariant_under(&bad) {
            assert_eq!(fixed_code(&e8, &bad), Err(Error::NotInvariant));
        }
    }

    #[test]
    fn fixed_code_of_involution_by_enumeration() {
        // self-dual [8,4] invariant under (1,2)(3,4)(5,6)(7,8)
        let c = BinaryCode::from_strings(&["11000000", "00110000", "00001100", "00000011"])
            .unwrap();
        let g = crate::perm::patterns::pair_swaps(8);
        let fc = fixed_code(&c, &g).unwrap();
        // oracle: filter all 16 codewords
        let mut fixed_words = Vec::new();
        c.for_each_codeword(8, |w| {
            if &w.permuted_by_images(g.images()) == w {
                fixed_words.push(w.clone());
            }
            ControlFlow::Continue(())
        })
        .unwrap();
        let oracle = BinaryCode::from_rows(8, fixed_words).unwrap();
        assert_eq!(fc, oracle);
        // p = 2: the averaging image is contained in, but smaller than, the kernel
        let img = averaging_image(&c, &g, 0).unwrap();
        assert!(fc.contains_code(&img));
    }

    #[test]
    fn golay_maschke_split_dimensions() {
        let gs3 = golay_s3().unwrap();
        let split = maschke_split(&gs3.code, &gs3.g).unwrap();
        // dim E(g) = (3-1)·8/2 = 8, dim C(g) = 12 - 8 = 4
        assert_eq!(split.even.dimension(), 8);
        assert_eq!(split.fixed.dimension(), 4);
        // agreement with the averaging-image formulas for odd p
        assert_eq!(averaging_image(&gs3.code, &gs3.g, 0).unwrap(), split.fixed);
        assert_eq!(averaging_image(&gs3.code, &gs3.g, 1).unwrap(), split.even);
        // every even-subcode word has even weight on every cycle
        let cs = CycleStructure::of(&gs3.g);
        for r in split.even.rows() {
            for j in 0..cs.cycles.len() {
                assert_eq!(r.and_weight(&cs.mask(j)) % 2, 0);
            }
        }
    }

    #[test]
    fn golay_hexacode_image() {
        let gs3 = golay_s3().unwrap();
        let split = maschke_split(&gs3.code, &gs3.g).unwrap();
        let e4 = map_e_to_f4(&split.even, &gs3.g).unwrap();
        assert_eq!((e4.length(), e4.dimension()), (8, 4));
        assert!(e4.is_hermitian_self_dual());
        // brute force over all 256 codewords: minimum symbol weight 4
        let additive = crate::gf4::AdditiveF4Code::from_rows(8, e4.f2_generators()).unwrap();
        assert_eq!(additive.min_distance(10).unwrap(), 4);
        // weight intertwining: binary weight = 2 × symbol weight
        for r in split.even.rows() {
            let img = f4_image_vector(r, &gs3.g).unwrap();
            assert_eq!(r.weight(), 2 * img.weight());
        }
        // round trip back to the binary side
        let back = f4_code_to_binary(&e4.f2_generators(), &gs3.g).unwrap();
        assert_eq!(back, split.even);
    }

    #[test]
    fn golay_sigma_intertwines() {
        let gs3 = golay_s3().unwrap();
        let split = maschke_split(&gs3.code, &gs3.g).unwrap();
        // f(v^σ) = σ_F4(f(v)) for every generator of E(g)
        for r in split.even.rows() {
            let lhs = f4_image_vector(&r.permuted_by_images(gs3.sigma.images()), &gs3.g).unwrap();
            let rhs = crate::gf4::sigma_action(&f4_image_vector(r, &gs3.g).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn planted_order3_codes_split_correctly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for cycles in [4usize, 6, 8] {
            let (code, g) = planted_order3_self_dual(cycles, &mut rng).unwrap();
            assert!(code.is_self_dual());
            let split = maschke_split(&code, &g).unwrap();
            assert_eq!(split.even.dimension(), cycles);
            assert_eq!(split.fixed.dimension(), cycles / 2);
            // zero code maps to zero
            let z = even_subcode(&BinaryCode::zero(3 * cycles), &g).unwrap();
            assert_eq!(z.dimension(), 0);
        }
    }
}
