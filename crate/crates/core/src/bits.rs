//! Bit-packed vectors over GF(2) and the small dense linear algebra the
//! rest of the crate runs on: reduced echelon forms, kernels, and
//! coordinate extraction relative to a growing basis.
//!
//! One coordinate is one bit; a vector of length `n` occupies `⌈n/64⌉`
//! machine words. All inner products are parity-of-AND.

use smallvec::SmallVec;
use std::fmt;

/// Word storage with inline capacity for 192 coordinates, spilling to
/// the heap for longer vectors.
type Words = SmallVec<[u64; 3]>;

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Words,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: smallvec::smallvec![0; len.div_ceil(64)],
        }
    }

    /// All-ones vector of the given length.
    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_str01(s: &str) -> crate::Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(crate::Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xored(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Number of set bits.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the AND with `other`: the standard GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Weight of the AND with `other`.
    #[inline]
    pub fn and_weight(&self, other: &BitVec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Pointwise AND.
    pub fn anded(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Pointwise OR.
    pub fn ored(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Parity of the weight.
    #[inline]
    pub fn parity(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_set(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Image under a coordinate permutation: `out[images[i]] = self[i]`.
    pub fn permuted_by_images(&self, images: &[usize]) -> BitVec {
        debug_assert_eq!(self.len, images.len());
        let mut out = BitVec::zeros(self.len);
        for i in 0..self.len {
            if self.get(i) {
                out.set(images[i], true);
            }
        }
        out
    }

    /// Restriction to a coordinate subset, in the given order.
    pub fn select(&self, coords: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(coords.len());
        for (j, &i) in coords.iter().enumerate() {
            if self.get(i) {
                out.set(j, true);
            }
        }
        out
    }

    /// Lexicographic comparison reading coordinate 0 as most significant.
    pub fn lex_cmp(&self, other: &BitVec) -> std::cmp::Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            let (ra, rb) = (a.reverse_bits(), b.reverse_bits());
            if ra != rb {
                return ra.cmp(&rb);
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len.cmp(&other.len).then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Reduced row echelon form in place.
///
/// Zero rows are dropped, the surviving rows end up sorted by pivot
/// column, and every pivot column is cleared above and below. Returns the
/// pivot columns. The result is the canonical basis of the row space.
pub fn rref(rows: &mut Vec<BitVec>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut done = 0usize;
    if rows.is_empty() {
        return pivots;
    }
    let n = rows[0].len();
    for col in 0..n {
        let Some(pivot_row) = (done..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(done, pivot_row);
        let pivot = rows[done].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != done && row.get(col) {
                row.xor_assign(&pivot);
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

/// Rank of the row set (the rows are not modified).
pub fn rank(rows: &[BitVec]) -> usize {
    let mut copy = rows.to_vec();
    rref(&mut copy);
    copy.len()
}

/// Basis of the right kernel `{x | row · x = 0 for every row}`.
pub fn kernel(rows: &[BitVec], n: usize) -> Vec<BitVec> {
    let mut mat = rows.to_vec();
    let pivots = rref(&mut mat);
    let mut basis = Vec::with_capacity(n - pivots.len());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..n {
        if is_pivot[free] {
            continue;
        }
        let mut v = BitVec::zeros(n);
        v.set(free, true);
        for (r, &p) in pivots.iter().enumerate() {
            if mat[r].get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// Incremental Gaussian basis that remembers how each reduced row was
/// built from the inserted vectors, so arbitrary vectors can be expressed
/// as combinations of the originals.
#[derive(Clone)]
pub struct GaussBasis {
    n: usize,
    reduced: Vec<BitVec>,
    /// combos[i] = coefficients over the inserted vectors producing reduced[i]
    combos: Vec<BitVec>,
    pivots: Vec<usize>,
    inserted: usize,
    capacity: usize,
}

impl GaussBasis {
    /// `capacity` bounds how many vectors will ever be inserted (it sizes
    /// the combination rows).
    pub fn new(n: usize, capacity: usize) -> Self {
        GaussBasis {
            n,
            reduced: Vec::new(),
            combos: Vec::new(),
            pivots: Vec::new(),
            inserted: 0,
            capacity,
        }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Inserts a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert!(self.inserted < self.capacity, "GaussBasis capacity exceeded");
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        combo.set(self.inserted, true);
        self.inserted += 1;
        self.reduce_mut(&mut v, &mut combo);
        match v.first_set() {
            None => false,
            Some(p) => {
                // keep rows pivot-sorted
                let pos = self.pivots.partition_point(|&q| q < p);
                self.pivots.insert(pos, p);
                self.reduced.insert(pos, v);
                self.combos.insert(pos, combo);
                true
            }
        }
    }

    fn reduce_mut(&self, v: &mut BitVec, combo: &mut BitVec) {
        for (row, c) in self.reduced.iter().zip(&self.combos) {
            let p = row.first_set().unwrap();
            if v.get(p) {
                v.xor_assign(row);
                combo.xor_assign(c);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        self.reduce_mut(&mut v, &mut combo);
        v.is_zero()
    }

    /// Expresses `v` as a combination of the inserted vectors, if possible.
    /// The returned coefficients are indexed by insertion order.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        self.reduce_mut(&mut v, &mut combo);
        if v.is_zero() {
            Some(combo)
        } else {
            None
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }
}

/// Relations among the given rows: a basis of
/// `{x | Σ x_i · rows[i] = 0}` (the left kernel).
pub fn left_kernel(rows: &[BitVec], n: usize) -> Vec<BitVec> {
    let mut gb = GaussBasis::new(n, rows.len());
    let mut relations = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        if !gb.insert(row) {
            let mut rel = gb.express(row).expect("dependent row must be expressible");
            rel.flip(idx);
            relations.push(rel);
        }
    }
    relations
}

/// Solutions of a GF(2) affine system whose unknowns are restricted to
/// coordinates `≥ min_col`: each constraint is a coefficient row plus a
/// right-hand bit. Returns a particular solution and a kernel basis, or
/// `None` when inconsistent.
pub fn affine_solutions(
    n: usize,
    min_col: usize,
    constraints: &[(BitVec, bool)],
) -> Option<(BitVec, Vec<BitVec>)> {
    let mut aug: Vec<BitVec> = constraints
        .iter()
        .map(|(c, rhs)| {
            let mut row = BitVec::zeros(n + 1);
            for i in min_col..n {
                if c.get(i) {
                    row.set(i, true);
                }
            }
            row.set(n, *rhs);
            row
        })
        .collect();
    rref(&mut aug);
    let mut is_pivot = vec![false; n];
    for row in &aug {
        match row.first_set() {
            Some(p) if p < n => is_pivot[p] = true,
            _ => return None, // row (0 … 0 | 1)
        }
    }
    let mut particular = BitVec::zeros(n);
    for row in &aug {
        let p = row.first_set().unwrap();
        if row.get(n) {
            particular.set(p, true);
        }
    }
    let mut kernel_basis = Vec::new();
    for f in min_col..n {
        if is_pivot[f] {
            continue;
        }
        let mut v = BitVec::zeros(n);
        v.set(f, true);
        for row in &aug {
            let p = row.first_set().unwrap();
            if row.get(f) {
                v.set(p, true);
            }
        }
        kernel_basis.push(v);
    }
    Some((particular, kernel_basis))
}

/// Streams the canonical bases of every `target_dim`-dimensional totally
/// isotropic subspace of a symmetric GF(2) form, one subspace per visit.
///
/// The form is supplied as `gram_row` (mapping `v` to the vector `u` with
/// `u·w = b(v,w)`) plus the diagonal functional `diag` (`diag·w = b(w,w)`,
/// which is linear in characteristic two). Enumeration is depth-first
/// over reduced-echelon rows in pivot order, so nothing beyond the
/// current branch is ever materialized. Returns false if the visitor
/// broke early.
pub fn max_isotropic_dfs(
    n: usize,
    target_dim: usize,
    gram_row: &dyn Fn(&BitVec) -> BitVec,
    diag: &BitVec,
    visit: &mut dyn FnMut(&[BitVec]) -> std::ops::ControlFlow<()>,
) -> bool {
    use std::ops::ControlFlow;
    struct Dfs<'a> {
        n: usize,
        target: usize,
        gram_row: &'a dyn Fn(&BitVec) -> BitVec,
        diag: &'a BitVec,
        rows: Vec<BitVec>,
        grams: Vec<BitVec>,
    }
    impl Dfs<'_> {
        fn rec(
            &mut self,
            next_col: usize,
            visit: &mut dyn FnMut(&[BitVec]) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            if self.rows.len() == self.target {
                return visit(&self.rows);
            }
            let need = self.target - self.rows.len();
            for p in next_col..=(self.n - need) {
                // earlier rows must vanish at a new pivot column
                if self.rows.iter().any(|r| r.get(p)) {
                    continue;
                }
                let mut constraints: Vec<(BitVec, bool)> = self
                    .grams
                    .iter()
                    .map(|g| (g.clone(), g.get(p)))
                    .collect();
                constraints.push((self.diag.clone(), self.diag.get(p)));
                let Some((particular, kernel_basis)) =
                    affine_solutions(self.n, p + 1, &constraints)
                else {
                    continue;
                };
                let mut x = particular;
                x.set(p, true);
                // Gray walk over the solution space
                assert!(kernel_basis.len() < 60, "isotropic branch too wide");
                let steps: u64 = 1u64 << kernel_basis.len();
                for i in 0..steps {
                    if i > 0 {
                        x.xor_assign(&kernel_basis[i.trailing_zeros() as usize]);
                    }
                    self.grams.push((self.gram_row)(&x));
                    self.rows.push(x.clone());
                    let r = self.rec(p + 1, visit);
                    self.rows.pop();
                    self.grams.pop();
                    r?;
                }
            }
            ControlFlow::Continue(())
        }
    }
    let mut dfs = Dfs {
        n,
        target: target_dim,
        gram_row,
        diag,
        rows: Vec::new(),
        grams: Vec::new(),
    };
    if target_dim == 0 {
        return visit(&[]).is_continue();
    }
    dfs.rec(0, visit).is_continue()
}
