//! Codes over GF(4).
//!
//! Elements are two bits `(hi, lo)`: `0 = 00`, `1 = 01`, `ω = 10`,
//! `ω̄ = 11`, so addition is XOR, conjugation swaps `ω` and `ω̄`, and
//! vectors pack into two parallel GF(2) layers.
//!
//! Two kinds of code live here. A [`LinearF4Code`] is an F₄-subspace
//! with Hermitian duality `Σ xᵢ ȳᵢ`. An [`AdditiveF4Code`] is only a
//! GF(2)-subspace, with trace-Hermitian duality `Σ (xᵢ ȳᵢ + x̄ᵢ yᵢ)`;
//! the two are connected by the interleaving lift `φ` and the
//! projection `π` onto the diagonal subcode.

use crate::bits::{self, BitVec};
use crate::perm::Permutation;
use crate::{Error, Result};
use std::fmt;
use std::ops::ControlFlow;

/// An element of the field with four elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F4(pub u8);

impl F4 {
    pub const ZERO: F4 = F4(0);
    pub const ONE: F4 = F4(1);
    pub const OMEGA: F4 = F4(2);
    pub const OMEGA_BAR: F4 = F4(3);

    pub const ALL: [F4; 4] = [F4(0), F4(1), F4(2), F4(3)];
    pub const NONZERO: [F4; 3] = [F4(1), F4(2), F4(3)];

    #[inline]
    pub fn add(self, other: F4) -> F4 {
        F4(self.0 ^ other.0)
    }

    #[inline]
    pub fn mul(self, other: F4) -> F4 {
        // ω² = ω̄, ω·ω̄ = 1, ω̄² = ω
        const TABLE: [[u8; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
        ];
        F4(TABLE[self.0 as usize][other.0 as usize])
    }

    /// Galois conjugate `x ↦ x²`.
    #[inline]
    pub fn conj(self) -> F4 {
        match self.0 {
            2 => F4(3),
            3 => F4(2),
            x => F4(x),
        }
    }

    pub fn inv(self) -> F4 {
        match self.0 {
            1 => F4(1),
            2 => F4(3),
            3 => F4(2),
            _ => panic!("inverse of zero"),
        }
    }

    /// Trace to GF(2): `x + x²`.
    #[inline]
    pub fn trace(self) -> bool {
        self.0 >= 2
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn from_char(c: char) -> Result<F4> {
        match c {
            '0' => Ok(F4::ZERO),
            '1' => Ok(F4::ONE),
            'w' => Ok(F4::OMEGA),
            'W' => Ok(F4::OMEGA_BAR),
            _ => Err(Error::Parse(format!("invalid GF(4) character {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self.0 {
            0 => '0',
            1 => '1',
            2 => 'w',
            _ => 'W',
        }
    }
}

impl fmt::Debug for F4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A packed vector over GF(4): coordinate `i` is `(hi_i, lo_i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F4Vector {
    len: usize,
    lo: BitVec,
    hi: BitVec,
}

impl F4Vector {
    pub fn zeros(len: usize) -> Self {
        F4Vector {
            len,
            lo: BitVec::zeros(len),
            hi: BitVec::zeros(len),
        }
    }

    pub fn from_elems(elems: &[F4]) -> Self {
        let mut v = Self::zeros(elems.len());
        for (i, &e) in elems.iter().enumerate() {
            v.set(i, e);
        }
        v
    }

    pub fn from_str4(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            v.set(i, F4::from_char(c)?);
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> F4 {
        F4(((self.hi.get(i) as u8) << 1) | self.lo.get(i) as u8)
    }

    #[inline]
    pub fn set(&mut self, i: usize, e: F4) {
        self.hi.set(i, e.0 & 2 != 0);
        self.lo.set(i, e.0 & 1 != 0);
    }

    pub fn add_assign(&mut self, other: &F4Vector) {
        self.lo.xor_assign(&other.lo);
        self.hi.xor_assign(&other.hi);
    }

    pub fn added(&self, other: &F4Vector) -> F4Vector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Coordinate-wise Galois conjugation.
    pub fn conjugated(&self) -> F4Vector {
        F4Vector {
            len: self.len,
            lo: self.lo.xored(&self.hi),
            hi: self.hi.clone(),
        }
    }

    /// Scalar multiplication.
    pub fn scaled(&self, s: F4) -> F4Vector {
        match s {
            F4(0) => F4Vector::zeros(self.len),
            F4(1) => self.clone(),
            F4(2) => F4Vector {
                // x·ω: (hi, lo) ↦ (hi ⊕ lo, hi)
                len: self.len,
                lo: self.hi.clone(),
                hi: self.hi.xored(&self.lo),
            },
            _ => F4Vector {
                // x·ω̄: (hi, lo) ↦ (lo, hi ⊕ lo)
                len: self.len,
                lo: self.hi.xored(&self.lo),
                hi: self.lo.clone(),
            },
        }
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &F4Vector) -> F4Vector {
        let a0 = &self.lo;
        let a1 = &self.hi;
        let b0 = &other.lo;
        let b1 = &other.hi;
        let a1b1 = a1.anded(b1);
        F4Vector {
            len: self.len,
            lo: a0.anded(b0).xored(&a1b1),
            hi: a0.anded(b1).xored(&a1.anded(b0)).xored(&a1b1),
        }
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.lo.ored(&self.hi).weight()
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// Hermitian inner product `Σ xᵢ ȳᵢ`.
    pub fn hermitian_dot(&self, other: &F4Vector) -> F4 {
        let prod = self.pointwise_mul(&other.conjugated());
        F4(((prod.hi.parity() as u8) << 1) | prod.lo.parity() as u8)
    }

    /// Trace-Hermitian inner product `Σ (xᵢ ȳᵢ + x̄ᵢ yᵢ)`, a GF(2) value.
    pub fn trace_dot(&self, other: &F4Vector) -> bool {
        self.hermitian_dot(other).trace()
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.lo.ored(&self.hi).first_set()
    }

    /// Interleaved GF(2) image: coordinate `i` becomes bits `2i` (hi)
    /// and `2i+1` (lo). Fixes the canonical form of additive codes.
    pub fn to_f2(&self) -> BitVec {
        let mut out = BitVec::zeros(2 * self.len);
        for i in 0..self.len {
            out.set(2 * i, self.hi.get(i));
            out.set(2 * i + 1, self.lo.get(i));
        }
        out
    }

    pub fn from_f2(bits: &BitVec) -> F4Vector {
        debug_assert!(bits.len() % 2 == 0);
        let n = bits.len() / 2;
        let mut v = F4Vector::zeros(n);
        for i in 0..n {
            v.hi.set(i, bits.get(2 * i));
            v.lo.set(i, bits.get(2 * i + 1));
        }
        v
    }

    /// Image under a coordinate permutation: `out[images[i]] = self[i]`.
    pub fn permuted_by_images(&self, images: &[usize]) -> F4Vector {
        F4Vector {
            len: self.len,
            lo: self.lo.permuted_by_images(images),
            hi: self.hi.permuted_by_images(images),
        }
    }
}

impl fmt::Display for F4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for F4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F4Vector({self})")
    }
}

/// Reduced row echelon form over F₄ in place; returns pivot columns.
pub fn f4_rref(rows: &mut Vec<F4Vector>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut done = 0usize;
    if rows.is_empty() {
        return pivots;
    }
    let n = rows[0].len();
    for col in 0..n {
        let Some(pr) = (done..rows.len()).find(|&r| !rows[r].get(col).is_zero()) else {
            continue;
        };
        rows.swap(done, pr);
        let lead = rows[done].get(col);
        rows[done] = rows[done].scaled(lead.inv());
        let pivot = rows[done].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            let c = row.get(col);
            if r != done && !c.is_zero() {
                row.add_assign(&pivot.scaled(c));
            }
        }
        pivots.push(col);
        done += 1;
        if done == rows.len() {
            break;
        }
    }
    rows.truncate(done);
    pivots
}

/// Kernel over F₄ of `x ↦ rows · x` under the plain bilinear product —
/// callers conjugate the rows first when they need a Hermitian kernel.
pub fn f4_kernel(rows: &[F4Vector], n: usize) -> Vec<F4Vector> {
    let mut mat = rows.to_vec();
    let pivots = f4_rref(&mut mat);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if is_pivot[free] {
            continue;
        }
        let mut v = F4Vector::zeros(n);
        v.set(free, F4::ONE);
        for (r, &p) in pivots.iter().enumerate() {
            let c = mat[r].get(free);
            if !c.is_zero() {
                v.set(p, c);
            }
        }
        basis.push(v);
    }
    basis
}

/// An F₄-linear code in canonical F₄ reduced-row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearF4Code {
    length: usize,
    rows: Vec<F4Vector>,
}

impl LinearF4Code {
    /// F₄-span of the given vectors (an F₂-generating set is fine).
    pub fn from_rows(length: usize, rows: Vec<F4Vector>) -> Result<Self> {
        for r in &rows {
            if r.len() != length {
                return Err(Error::LengthMismatch(r.len(), length));
            }
        }
        let mut rows = rows;
        f4_rref(&mut rows);
        Ok(LinearF4Code { length, rows })
    }

    pub fn zero(length: usize) -> Self {
        LinearF4Code {
            length,
            rows: Vec::new(),
        }
    }

    pub fn full(length: usize) -> Self {
        let rows = (0..length)
            .map(|i| {
                let mut v = F4Vector::zeros(length);
                v.set(i, F4::ONE);
                v
            })
            .collect();
        LinearF4Code { length, rows }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Dimension over F₄.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[F4Vector] {
        &self.rows
    }

    pub fn contains(&self, v: &F4Vector) -> bool {
        let mut v = v.clone();
        for row in &self.rows {
            let p = row.first_nonzero().unwrap();
            let c = v.get(p);
            if !c.is_zero() {
                v.add_assign(&row.scaled(c));
            }
        }
        v.is_zero()
    }

    /// Dual under the Hermitian form `Σ xᵢ ȳᵢ`.
    pub fn hermitian_dual(&self) -> LinearF4Code {
        let conj_rows: Vec<F4Vector> = self.rows.iter().map(|r| r.conjugated()).collect();
        let ker = f4_kernel(&conj_rows, self.length);
        LinearF4Code::from_rows(self.length, ker).unwrap()
    }

    pub fn is_hermitian_self_dual(&self) -> bool {
        2 * self.dimension() == self.length && self.is_hermitian_self_orthogonal()
    }

    pub fn is_hermitian_self_orthogonal(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            self.rows[i..]
                .iter()
                .all(|s| r.hermitian_dot(s).is_zero())
        })
    }

    /// Exact minimum symbol weight if it is `≤ bound`, else `≥ bound+1`:
    /// combination-order enumeration over the canonical rows, where a
    /// combination of `r` rows has weight at least `r`.
    pub fn min_distance_bounded(&self, bound: usize) -> Result<F4Distance> {
        let k = self.dimension();
        if k == 0 {
            return Err(Error::ZeroDimensional);
        }
        let mut best = usize::MAX;
        let mut acc = F4Vector::zeros(self.length);
        for r in 1..=k.min(bound) {
            if r >= best {
                break;
            }
            self.scaled_combos(0, r, &mut acc, &mut best);
        }
        if best <= bound {
            Ok(F4Distance::Exact(best))
        } else {
            Ok(F4Distance::AtLeast(bound + 1))
        }
    }

    fn scaled_combos(&self, start: usize, remaining: usize, acc: &mut F4Vector, best: &mut usize) {
        if remaining == 0 {
            let w = acc.weight();
            if w < *best {
                *best = w;
            }
            return;
        }
        for i in start..=self.rows.len() - remaining {
            for s in F4::NONZERO {
                let scaled = self.rows[i].scaled(s);
                acc.add_assign(&scaled);
                self.scaled_combos(i + 1, remaining - 1, acc, best);
                acc.add_assign(&scaled);
            }
        }
    }

    /// The F₂-generating set `{rᵢ, ω·rᵢ}`.
    pub fn f2_generators(&self) -> Vec<F4Vector> {
        let mut out = Vec::with_capacity(2 * self.rows.len());
        for r in &self.rows {
            out.push(r.clone());
            out.push(r.scaled(F4::OMEGA));
        }
        out
    }

    pub fn permuted(&self, p: &Permutation) -> Result<LinearF4Code> {
        if p.degree() != self.length {
            return Err(Error::DegreeMismatch(p.degree(), self.length));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.permuted_by_images(p.images()))
            .collect();
        LinearF4Code::from_rows(self.length, rows)
    }
}

impl fmt::Debug for LinearF4Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]_4 linear", self.length, self.dimension())
    }
}

/// Outcome of a bounded minimum-distance computation over F₄.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum F4Distance {
    Exact(usize),
    AtLeast(usize),
}

impl F4Distance {
    pub fn exact(self) -> Option<usize> {
        match self {
            F4Distance::Exact(d) => Some(d),
            F4Distance::AtLeast(_) => None,
        }
    }
}

/// An additive (GF(2)-linear) code in GF(4)ⁿ, canonicalized through the
/// interleaved binary image.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdditiveF4Code {
    length: usize,
    rows: Vec<F4Vector>,
}

impl AdditiveF4Code {
    pub fn from_rows(length: usize, rows: Vec<F4Vector>) -> Result<Self> {
        for r in &rows {
            if r.len() != length {
                return Err(Error::LengthMismatch(r.len(), length));
            }
        }
        let mut bin: Vec<BitVec> = rows.iter().map(|r| r.to_f2()).collect();
        bits::rref(&mut bin);
        Ok(AdditiveF4Code {
            length,
            rows: bin.iter().map(F4Vector::from_f2).collect(),
        })
    }

    pub fn zero(length: usize) -> Self {
        AdditiveF4Code {
            length,
            rows: Vec::new(),
        }
    }

    /// The whole of GF(4)ⁿ as a GF(2)-space of dimension `2n`.
    pub fn full(length: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..length {
            let mut a = F4Vector::zeros(length);
            a.set(i, F4::ONE);
            rows.push(a);
            let mut b = F4Vector::zeros(length);
            b.set(i, F4::OMEGA);
            rows.push(b);
        }
        AdditiveF4Code::from_rows(length, rows).unwrap()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Dimension over GF(2); the code has `2^m` words.
    pub fn dim_f2(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[F4Vector] {
        &self.rows
    }

    pub fn contains(&self, v: &F4Vector) -> bool {
        let mut b = v.to_f2();
        for row in &self.rows {
            let rb = row.to_f2();
            let p = rb.first_set().unwrap();
            if b.get(p) {
                b.xor_assign(&rb);
            }
        }
        b.is_zero()
    }

    /// The canonical binary image of the generator matrix — a convenient
    /// equality key.
    pub fn f2_key(&self) -> Vec<BitVec> {
        self.rows.iter().map(|r| r.to_f2()).collect()
    }

    /// The constraint row over the interleaved binary image whose dot
    /// with `w.to_f2()` equals the trace-Hermitian product `⟨w, g⟩`.
    pub(crate) fn trace_constraint(g: &F4Vector) -> BitVec {
        let n = g.len();
        let mut c = BitVec::zeros(2 * n);
        for i in 0..n {
            let gi = g.get(i);
            // bit 2i multiplies ω, bit 2i+1 multiplies 1
            c.set(2 * i, F4::OMEGA.mul(gi.conj()).trace());
            c.set(2 * i + 1, gi.conj().trace());
        }
        c
    }

    /// Dual under the trace-Hermitian form.
    pub fn trace_dual(&self) -> AdditiveF4Code {
        let constraints: Vec<BitVec> = self.rows.iter().map(Self::trace_constraint).collect();
        let ker = bits::kernel(&constraints, 2 * self.length);
        AdditiveF4Code::from_rows(
            self.length,
            ker.iter().map(F4Vector::from_f2).collect(),
        )
        .unwrap()
    }

    pub fn is_trace_self_dual(&self) -> bool {
        self.dim_f2() == self.length && self.is_trace_self_orthogonal()
    }

    pub fn is_trace_self_orthogonal(&self) -> bool {
        // the form is alternating, so only distinct pairs matter
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| self.rows[i + 1..].iter().all(|s| !r.trace_dot(s)))
    }

    /// Visits all `2^m` codewords in Gray-code order.
    pub fn for_each_codeword(
        &self,
        limit_dim: usize,
        mut f: impl FnMut(&F4Vector) -> ControlFlow<()>,
    ) -> Result<()> {
        let m = self.dim_f2();
        if m > limit_dim {
            return Err(Error::EnumerationTooLarge(
                1u128 << m.min(127),
                1u128 << limit_dim.min(127),
            ));
        }
        let mut acc = F4Vector::zeros(self.length);
        if f(&acc).is_break() {
            return Ok(());
        }
        for i in 1u64..(1u64 << m) {
            acc.add_assign(&self.rows[i.trailing_zeros() as usize]);
            if f(&acc).is_break() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Exact minimum symbol weight by full enumeration.
    pub fn min_distance(&self, limit_dim: usize) -> Result<usize> {
        if self.dim_f2() == 0 {
            return Err(Error::ZeroDimensional);
        }
        let mut best = usize::MAX;
        self.for_each_codeword(limit_dim, |w| {
            let wt = w.weight();
            if wt > 0 && wt < best {
                best = wt;
            }
            ControlFlow::Continue(())
        })?;
        Ok(best)
    }
}

impl fmt::Debug for AdditiveF4Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},2^{})_4 additive", self.length, self.dim_f2())
    }
}

// ---------------------------------------------------------------------
// φ and π
// ---------------------------------------------------------------------

/// The interleaving lift: the F₄-span of
/// `(ε₁, ε̄₁, …, ε_m, ε̄_m)` over all `ε ∈ X`.
pub fn phi_lift(x: &AdditiveF4Code) -> LinearF4Code {
    let m = x.length();
    let rows: Vec<F4Vector> = x.rows().iter().map(interleave_with_conjugate).collect();
    LinearF4Code::from_rows(2 * m, rows).unwrap()
}

fn interleave_with_conjugate(v: &F4Vector) -> F4Vector {
    let m = v.len();
    let mut out = F4Vector::zeros(2 * m);
    for i in 0..m {
        out.set(2 * i, v.get(i));
        out.set(2 * i + 1, v.get(i).conj());
    }
    out
}

/// The pair-swap-and-conjugate involution
/// `(ε₁, ε₂, …) ↦ (ε̄₂, ε̄₁, …)` on vectors of even length. It is only
/// F₂-linear: `σ(ω·v) = ω̄·σ(v)`.
pub fn sigma_action(v: &F4Vector) -> Result<F4Vector> {
    let n = v.len();
    if n % 2 != 0 {
        return Err(Error::LengthMismatch(n, n + 1));
    }
    let mut out = F4Vector::zeros(n);
    for i in 0..n / 2 {
        out.set(2 * i, v.get(2 * i + 1).conj());
        out.set(2 * i + 1, v.get(2 * i).conj());
    }
    Ok(out)
}

/// Whether a linear code is invariant under [`sigma_action`].
pub fn is_sigma_invariant(e: &LinearF4Code) -> Result<bool> {
    let mapped: Result<Vec<F4Vector>> = e.rows().iter().map(sigma_action).collect();
    let image = LinearF4Code::from_rows(e.length(), mapped?)?;
    Ok(&image == e)
}

/// The projection onto the first coordinates of the σ-fixed subcode:
/// `π(E) = {(ε₁,…,ε_m) | (ε₁, ε̄₁, …, ε_m, ε̄_m) ∈ E}`.
///
/// Errors when `E` is not σ-invariant.
pub fn pi_project(e: &LinearF4Code) -> Result<AdditiveF4Code> {
    if !is_sigma_invariant(e)? {
        return Err(Error::NotInvariant);
    }
    let n = e.length();
    let m = n / 2;
    // relations x with Σ xⱼ (σ(gⱼ) + gⱼ) = 0 give the σ-fixed subcode
    let f2_gens = e.f2_generators();
    let moved: Vec<BitVec> = f2_gens
        .iter()
        .map(|g| {
            let s = sigma_action(g).expect("even length");
            s.added(g).to_f2()
        })
        .collect();
    let coeff_kernel = bits::left_kernel(&moved, 2 * n);
    let mut projected = Vec::new();
    for coeffs in coeff_kernel {
        let mut v = F4Vector::zeros(n);
        for (j, g) in f2_gens.iter().enumerate() {
            if coeffs.get(j) {
                v.add_assign(g);
            }
        }
        debug_assert_eq!(sigma_action(&v).unwrap(), v);
        let mut short = F4Vector::zeros(m);
        for i in 0..m {
            short.set(i, v.get(2 * i));
        }
        projected.push(short);
    }
    AdditiveF4Code::from_rows(m, projected)
}

// ---------------------------------------------------------------------
// Monomial maps
// ---------------------------------------------------------------------

/// A (possibly semilinear) monomial transformation: coordinate
/// permutation, a nonzero scalar per target coordinate, and an optional
/// Galois conjugation per target coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialMap {
    pub perm: Permutation,
    pub scalars: Vec<F4>,
    pub conjugations: Vec<bool>,
}

impl MonomialMap {
    pub fn identity(n: usize) -> Self {
        MonomialMap {
            perm: Permutation::identity(n),
            scalars: vec![F4::ONE; n],
            conjugations: vec![false; n],
        }
    }

    pub fn new(perm: Permutation, scalars: Vec<F4>, conjugations: Vec<bool>) -> Result<Self> {
        let n = perm.degree();
        if scalars.len() != n || conjugations.len() != n {
            return Err(Error::LengthMismatch(scalars.len(), n));
        }
        if scalars.iter().any(|s| s.is_zero()) {
            return Err(Error::Invalid("monomial scalar must be nonzero".into()));
        }
        Ok(MonomialMap {
            perm,
            scalars,
            conjugations,
        })
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn is_linear(&self) -> bool {
        self.conjugations.iter().all(|&c| !c)
    }

    /// `(v^M)_j = s_j · op_j(v_{perm⁻¹(j)})`: permute, then apply the
    /// target coordinate's conjugation flag and scalar.
    pub fn apply(&self, v: &F4Vector) -> F4Vector {
        let n = self.degree();
        debug_assert_eq!(v.len(), n);
        let mut out = F4Vector::zeros(n);
        for i in 0..n {
            let j = self.perm.apply(i);
            let mut e = v.get(i);
            if self.conjugations[j] {
                e = e.conj();
            }
            out.set(j, self.scalars[j].mul(e));
        }
        out
    }

    pub fn apply_additive(&self, x: &AdditiveF4Code) -> AdditiveF4Code {
        let rows = x.rows().iter().map(|r| self.apply(r)).collect();
        AdditiveF4Code::from_rows(x.length(), rows).unwrap()
    }

    pub fn apply_linear(&self, c: &LinearF4Code) -> LinearF4Code {
        let rows = c.rows().iter().map(|r| self.apply(r)).collect();
        LinearF4Code::from_rows(c.length(), rows).unwrap()
    }

    pub fn random(n: usize, with_conjugation: bool, rng: &mut impl rand::Rng) -> Self {
        use rand::seq::SliceRandom;
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        MonomialMap {
            perm: Permutation::from_images(images).unwrap(),
            scalars: (0..n).map(|_| F4::NONZERO[rng.gen_range(0..3)]).collect(),
            conjugations: (0..n)
                .map(|_| with_conjugation && rng.gen::<bool>())
                .collect(),
        }
    }
}

/// Doubles a monomial map through the interleaving lift so that
/// `φ(X^M) = φ(X)^{lift(M)}`: target pair `(2j, 2j+1)` carries
/// `(m_j, m̄_j)`, and a conjugated source coordinate feeds the pair
/// crossed.
pub fn monomial_lift(m: &MonomialMap) -> MonomialMap {
    let n = m.degree();
    let mut images = vec![0usize; 2 * n];
    let mut scalars = vec![F4::ONE; 2 * n];
    let conjugations = vec![false; 2 * n];
    for i in 0..n {
        let j = m.perm.apply(i);
        if m.conjugations[j] {
            images[2 * i] = 2 * j + 1;
            images[2 * i + 1] = 2 * j;
        } else {
            images[2 * i] = 2 * j;
            images[2 * i + 1] = 2 * j + 1;
        }
        scalars[2 * j] = m.scalars[j];
        scalars[2 * j + 1] = m.scalars[j].conj();
    }
    MonomialMap {
        perm: Permutation::from_images(images).unwrap(),
        scalars,
        conjugations,
    }
}

// ---------------------------------------------------------------------
// Generation and classification of trace-Hermitian self-dual codes
// ---------------------------------------------------------------------

/// A random trace-Hermitian self-dual additive code of length `n`, grown
/// by adjoining random vectors of the current trace-orthogonal space.
pub fn random_trace_self_dual(n: usize, rng: &mut impl rand::Rng) -> AdditiveF4Code {
    let mut rows: Vec<F4Vector> = Vec::new();
    while rows.len() < n {
        let constraints: Vec<BitVec> = rows
            .iter()
            .map(AdditiveF4Code::trace_constraint)
            .collect();
        let ker = bits::kernel(&constraints, 2 * n);
        loop {
            let mut b = BitVec::zeros(2 * n);
            for v in &ker {
                if rng.gen::<bool>() {
                    b.xor_assign(v);
                }
            }
            let mut test: Vec<BitVec> = rows.iter().map(|r| r.to_f2()).collect();
            test.push(b.clone());
            if bits::rank(&test) > rows.len() {
                rows.push(F4Vector::from_f2(&b));
                break;
            }
        }
    }
    AdditiveF4Code::from_rows(n, rows).unwrap()
}

/// A random Hermitian self-dual F₄-linear code of even length `n`,
/// grown inside the Hermitian orthogonal space. Isotropy of a vector for
/// the Hermitian form means even symbol weight, which is checked by
/// rejection.
pub fn random_hermitian_self_dual(n: usize, rng: &mut impl rand::Rng) -> LinearF4Code {
    assert!(n % 2 == 0 && n > 0);
    let mut code = LinearF4Code::zero(n);
    while code.dimension() < n / 2 {
        let conj_rows: Vec<F4Vector> = code.rows().iter().map(|r| r.conjugated()).collect();
        let perp = f4_kernel(&conj_rows, n);
        loop {
            let mut v = F4Vector::zeros(n);
            for b in &perp {
                v.add_assign(&b.scaled(F4::ALL[rng.gen_range(0..4)]));
            }
            if v.weight() % 2 != 0 || code.contains(&v) || v.is_zero() {
                continue;
            }
            let mut rows = code.rows().to_vec();
            rows.push(v);
            code = LinearF4Code::from_rows(n, rows).unwrap();
            break;
        }
    }
    debug_assert!(code.is_hermitian_self_dual());
    code
}

/// Visits every trace-Hermitian self-dual additive code of length `n`
/// exactly once (they are the Lagrangians of the symplectic trace form
/// on the interleaved binary image).
pub fn for_each_trace_self_dual(n: usize, mut f: impl FnMut(&AdditiveF4Code) -> ControlFlow<()>) {
    let gram = |v: &BitVec| AdditiveF4Code::trace_constraint(&F4Vector::from_f2(v));
    let diag = BitVec::zeros(2 * n); // the form is alternating
    bits::max_isotropic_dfs(2 * n, n, &gram, &diag, &mut |rows| {
        let code =
            AdditiveF4Code::from_rows(n, rows.iter().map(F4Vector::from_f2).collect()).unwrap();
        f(&code)
    });
}

/// `∏_{i=1}^{n} (2^i + 1)`: the number of trace-Hermitian self-dual
/// additive codes of length `n`.
pub fn trace_self_dual_count(n: usize) -> u128 {
    (1..=n).map(|i| (1u128 << i) + 1).product()
}

/// One equivalence class of the small-length classification.
#[derive(Debug, Clone)]
pub struct AdditiveClass {
    pub representative: AdditiveF4Code,
    pub orbit_size: u128,
}

/// Classification of all trace-Hermitian self-dual additive codes of
/// length `n ≤ 5` up to monomial equivalence, by explicit orbit
/// enumeration. With `with_conjugation` the acting group is the
/// semilinear monomial group (order `6ⁿ·n!`), otherwise the linear one
/// (order `3ⁿ·n!`). The representative of each class is the
/// lexicographically least member.
pub fn classify_trace_self_dual(n: usize, with_conjugation: bool) -> Result<Vec<AdditiveClass>> {
    if n > 5 {
        return Err(Error::EnumerationTooLarge(n as u128, 5));
    }
    use std::collections::HashMap;
    let key_of = |c: &AdditiveF4Code| -> Vec<BitVec> { c.f2_key() };

    let mut all: HashMap<Vec<BitVec>, AdditiveF4Code> = HashMap::new();
    for_each_trace_self_dual(n, |c| {
        all.insert(key_of(c), c.clone());
        ControlFlow::Continue(())
    });
    let total = all.len() as u128;
    debug_assert_eq!(total, trace_self_dual_count(n));

    let mut gens: Vec<MonomialMap> = Vec::new();
    if n >= 2 {
        let mut tr = MonomialMap::identity(n);
        tr.perm = Permutation::from_cycles(n, &[vec![0, 1]])?;
        gens.push(tr);
        let mut cyc = MonomialMap::identity(n);
        cyc.perm = Permutation::from_cycles(n, &[(0..n).collect()])?;
        gens.push(cyc);
    }
    let mut sc = MonomialMap::identity(n);
    sc.scalars[0] = F4::OMEGA;
    gens.push(sc);
    if with_conjugation {
        let mut cj = MonomialMap::identity(n);
        cj.conjugations[0] = true;
        gens.push(cj);
    }

    let mut unseen: std::collections::BTreeMap<Vec<BitVec>, AdditiveF4Code> =
        all.into_iter().collect();
    let mut classes = Vec::new();
    while let Some((seed_key, seed)) = unseen.iter().next().map(|(k, v)| (k.clone(), v.clone())) {
        let mut orbit: HashMap<Vec<BitVec>, AdditiveF4Code> = HashMap::new();
        orbit.insert(seed_key, seed.clone());
        let mut frontier = vec![seed];
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = g.apply_additive(&x);
                let k = key_of(&y);
                if !orbit.contains_key(&k) {
                    orbit.insert(k, y.clone());
                    frontier.push(y);
                }
            }
        }
        let rep_key = orbit.keys().min().unwrap().clone();
        let representative = orbit[&rep_key].clone();
        for k in orbit.keys() {
            unseen.remove(k);
        }
        classes.push(AdditiveClass {
            representative,
            orbit_size: orbit.len() as u128,
        });
    }
    classes.sort_by(|a, b| a.representative.f2_key().cmp(&b.representative.f2_key()));
    let mass: u128 = classes.iter().map(|c| c.orbit_size).sum();
    if mass != total {
        return Err(Error::Invalid(format!(
            "orbit mass {mass} does not cover the {total} codes"
        )));
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn field_table() {
        let (o, ob) = (F4::OMEGA, F4::OMEGA_BAR);
        assert_eq!(o.mul(o), ob);
        assert_eq!(o.mul(ob), F4::ONE);
        assert_eq!(ob.mul(ob), o);
        assert_eq!(o.conj(), ob);
        assert_eq!(o.add(F4::ONE), ob);
        assert!(o.trace() && ob.trace());
        assert!(!F4::ONE.trace() && !F4::ZERO.trace());
        for a in F4::NONZERO {
            assert_eq!(a.mul(a.inv()), F4::ONE);
        }
    }

    #[test]
    fn vector_scaling_matches_elementwise() {
        let v = F4Vector::from_str4("01wW").unwrap();
        for s in F4::ALL {
            let scaled = v.scaled(s);
            for i in 0..4 {
                assert_eq!(scaled.get(i), s.mul(v.get(i)));
            }
        }
        let w = F4Vector::from_str4("w1W0").unwrap();
        let prod = v.pointwise_mul(&w);
        for i in 0..4 {
            assert_eq!(prod.get(i), v.get(i).mul(w.get(i)));
        }
        assert_eq!(v.conjugated().to_string(), "01Ww");
    }

    #[test]
    fn hermitian_dot_examples() {
        let v = F4Vector::from_str4("11").unwrap();
        assert!(v.hermitian_dot(&v).is_zero()); // 1·1̄ + 1·1̄ = 0
        let u = F4Vector::from_str4("1w").unwrap();
        // 1·1̄ + ω·ω̄ = 1 + 1 = 0
        assert!(u.hermitian_dot(&u).is_zero());
        let x = F4Vector::from_str4("10").unwrap();
        assert_eq!(x.hermitian_dot(&x), F4::ONE);
    }

    #[test]
    fn linear_rref_canonical() {
        let rows = vec![
            F4Vector::from_str4("w10").unwrap(),
            F4Vector::from_str4("Ww0").unwrap(),
        ];
        let c = LinearF4Code::from_rows(3, rows).unwrap();
        // scaling a generating set must not change the canonical form
        let scaled = vec![
            F4Vector::from_str4("w10").unwrap().scaled(F4::OMEGA_BAR),
            F4Vector::from_str4("Ww0").unwrap().scaled(F4::OMEGA),
        ];
        assert_eq!(LinearF4Code::from_rows(3, scaled).unwrap(), c);
    }

    #[test]
    fn hermitian_dual_involution_and_dims() {
        let zero = LinearF4Code::zero(4);
        assert_eq!(zero.hermitian_dual(), LinearF4Code::full(4));
        let span11 = LinearF4Code::from_rows(2, vec![F4Vector::from_str4("11").unwrap()]).unwrap();
        assert_eq!(span11.hermitian_dual(), span11);
        assert!(span11.is_hermitian_self_dual());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_trace_self_dual(3, &mut rng);
            let e = phi_lift(&x);
            let d = e.hermitian_dual();
            assert_eq!(e.dimension() + d.dimension(), e.length());
            assert_eq!(d.hermitian_dual(), e);
        }
    }

    #[test]
    fn trace_dual_of_length_one() {
        // {0,1} is trace-Hermitian self-dual
        let c = AdditiveF4Code::from_rows(1, vec![F4Vector::from_str4("1").unwrap()]).unwrap();
        assert_eq!(c.trace_dual(), c);
        assert!(c.is_trace_self_dual());
        // the zero code's dual is everything
        let z = AdditiveF4Code::zero(3);
        assert_eq!(z.trace_dual().dim_f2(), 6);
        // all three one-dimensional additive codes of length 1 are self-dual
        let mut count = 0;
        for_each_trace_self_dual(1, |c| {
            assert!(c.is_trace_self_dual());
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 3);
        assert_eq!(trace_self_dual_count(1), 3);
    }

    #[test]
    fn phi_round_trip_and_duality() {
        // X = {0,1} of length 1 lifts to span{(1,1)}
        let x = AdditiveF4Code::from_rows(1, vec![F4Vector::from_str4("1").unwrap()]).unwrap();
        let e = phi_lift(&x);
        assert_eq!(e.dimension(), 1);
        assert!(e.contains(&F4Vector::from_str4("11").unwrap()));
        assert!(e.is_hermitian_self_dual());
        assert_eq!(pi_project(&e).unwrap(), x);
        // φ({0}) is the zero code
        assert_eq!(phi_lift(&AdditiveF4Code::zero(2)).dimension(), 0);
    }

    #[test]
    fn sigma_action_formula() {
        let v = F4Vector::from_str4("1w00").unwrap();
        let s = sigma_action(&v).unwrap();
        assert_eq!(s.to_string(), "W100");
        assert_eq!(sigma_action(&s).unwrap(), v);
        // semilinearity: σ(ω·v) = ω̄·σ(v)
        let sv = sigma_action(&v.scaled(F4::OMEGA)).unwrap();
        assert_eq!(sv, s.scaled(F4::OMEGA_BAR));
    }

    #[test]
    fn proposition_round_trip_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for n in 1..=5usize {
            for _ in 0..20 {
                let x = random_trace_self_dual(n, &mut rng);
                assert!(x.is_trace_self_dual());
                let e = phi_lift(&x);
                assert_eq!(e.dimension(), n);
                assert!(e.is_hermitian_self_dual());
                assert!(is_sigma_invariant(&e).unwrap());
                assert_eq!(pi_project(&e).unwrap(), x);
            }
        }
    }

    #[test]
    fn monomial_lift_equivariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = random_trace_self_dual(4, &mut rng);
            let m = MonomialMap::random(4, true, &mut rng);
            let lhs = phi_lift(&m.apply_additive(&x));
            let rhs = monomial_lift(&m).apply_linear(&phi_lift(&x));
            assert_eq!(lhs, rhs);
        }
        // scalar ω at the first position lifts to (ω, ω̄) on the pair
        let mut m = MonomialMap::identity(2);
        m.scalars[0] = F4::OMEGA;
        let lifted = monomial_lift(&m);
        assert_eq!(lifted.scalars[0], F4::OMEGA);
        assert_eq!(lifted.scalars[1], F4::OMEGA_BAR);
        assert!(lifted.perm.is_identity());
    }

    #[test]
    fn classification_small_lengths() {
        // n = 1: one class of 3 codes
        let classes = classify_trace_self_dual(1, true).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].orbit_size, 3);
        // n = 2: masses must sum to 15
        let classes = classify_trace_self_dual(2, true).unwrap();
        assert_eq!(classes.iter().map(|c| c.orbit_size).sum::<u128>(), 15);
        for c in &classes {
            assert!(c.representative.is_trace_self_dual());
        }
        // without conjugation the classes can only split
        let linear_classes = classify_trace_self_dual(2, false).unwrap();
        assert!(linear_classes.len() >= classes.len());
    }

    #[test]
    fn min_distance_bounded_f4() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let x = random_trace_self_dual(4, &mut rng);
            let e = phi_lift(&x);
            match e.min_distance_bounded(8).unwrap() {
                F4Distance::Exact(d) => {
                    // verify against full enumeration of the F2-image
                    let full = AdditiveF4Code::from_rows(e.length(), e.f2_generators())
                        .unwrap()
                        .min_distance(20)
                        .unwrap();
                    assert_eq!(d, full);
                }
                F4Distance::AtLeast(_) => panic!("short code must have small distance"),
            }
        }
    }
}
