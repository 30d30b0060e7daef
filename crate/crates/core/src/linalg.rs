//! Exact integer linear algebra.
//!
//! All arithmetic is over [`BigInt`], so Smith reductions of the
//! Fox-calculus matrices stay exact at any magnitude; torsion invariants
//! would be silently wrong with fixed-width integers.
//!
//! The Smith normal form here is the plain row/column gcd reduction with
//! a smallest-pivot rule to control entry growth. It is deterministic:
//! identical input yields identical output, including the unimodular
//! transforms.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::min;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// Operand shapes are incompatible.
    DimensionMismatch,
    /// Exterior power degree outside `0..=n`.
    DegreeOutOfRange { n: usize, q: usize },
    /// A square matrix was required.
    NotSquare,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::DimensionMismatch => write!(f, "matrix dimensions do not match"),
            LinalgError::DegreeOutOfRange { n, q } => {
                write!(
                    f,
                    "exterior power degree {q} out of range for a {n}x{n} matrix"
                )
            }
            LinalgError::NotSquare => write!(f, "matrix is not square"),
        }
    }
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// `c` times the identity.
    pub fn scaled_identity(n: usize, c: &BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) - rhs.at(r, c))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        Self::from_fn(self.rows + rhs.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                rhs.at(r - self.rows, c).clone()
            }
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.at(r, c).is_one()
                    } else {
                        self.at(r, c).is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a.at(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1)
    }

    /// Inverse of a matrix with determinant ±1, via the adjugate.
    pub fn inverse_unimodular(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let d = self.det();
        assert!(d.magnitude().is_one(), "matrix is not unimodular");
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let m = self.delete_row_col(i, j).det();
                let v = if (i + j) % 2 == 0 { m } else { -m };
                adj.set(j, i, v);
            }
        }
        // 1/d = d when d = ±1
        Self::from_fn(n, n, |r, c| adj.at(r, c) * &d)
    }

    fn delete_row_col(&self, row: usize, col: usize) -> IntMatrix {
        Self::from_fn(self.rows - 1, self.cols - 1, |r, c| {
            let rr = if r < row { r } else { r + 1 };
            let cc = if c < col { c } else { c + 1 };
            self.at(rr, cc).clone()
        })
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_t
    fn row_submul(&mut self, i: usize, t: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(t, c) * q;
            self.entries[i * self.cols + c] -= v;
        }
    }

    /// col_j -= q * col_t
    fn col_submul(&mut self, j: usize, t: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, t) * q;
            self.entries[r * self.cols + j] -= v;
        }
    }

    /// (row_t, row_i) <- (x row_t + y row_i, z row_t + w row_i)
    fn row_combine(&mut self, t: usize, i: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for c in 0..self.cols {
            let a = self.at(t, c).clone();
            let b = self.at(i, c).clone();
            self.set(t, c, x * &a + y * &b);
            self.set(i, c, z * &a + w * &b);
        }
    }

    /// (col_t, col_j) <- (x col_t + y col_j, z col_t + w col_j)
    fn col_combine(&mut self, t: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for r in 0..self.rows {
            let a = self.at(r, t).clone();
            let b = self.at(r, j).clone();
            self.set(r, t, x * &a + y * &b);
            self.set(r, j, z * &a + w * &b);
        }
    }

    /// row_t += row_i
    fn row_add(&mut self, t: usize, i: usize) {
        for c in 0..self.cols {
            let v = self.at(i, c).clone();
            self.entries[t * self.cols + c] += v;
        }
    }

    fn negate_row(&mut self, t: usize) {
        for c in 0..self.cols {
            let v = -self.at(t, c).clone();
            self.set(t, c, v);
        }
    }
}

/// Smith normal form `left · original · right = diag(d)` with
/// unimodular `left`, `right` and `d[i] | d[i+1]`, zeros trailing.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub d: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub original_shape: (usize, usize),
}

impl SmithDecomposition {
    /// Full check of the decomposition invariants against `original`.
    pub fn verify(&self, original: &IntMatrix) -> bool {
        let (r, c) = self.original_shape;
        if original.rows() != r || original.cols() != c {
            return false;
        }
        let prod = self.left.mul(original).mul(&self.right);
        let mut diag = IntMatrix::zeros(r, c);
        for (i, di) in self.d.iter().enumerate() {
            diag.set(i, i, di.clone());
        }
        if prod != diag {
            return false;
        }
        if !self.left.det().magnitude().is_one() || !self.right.det().magnitude().is_one() {
            return false;
        }
        divisibility_chain_ok(&self.d)
    }
}

fn divisibility_chain_ok(d: &[BigInt]) -> bool {
    for w in d.windows(2) {
        if w[0].is_zero() {
            if !w[1].is_zero() {
                return false;
            }
        } else if !(&w[1] % &w[0]).is_zero() {
            return false;
        }
    }
    d.iter().all(|x| !x.is_negative())
}

struct Reducer {
    a: IntMatrix,
    left: Option<IntMatrix>,
    right: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(l) = &mut self.left {
            l.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(r) = &mut self.right {
            r.swap_cols(i, j);
        }
    }

    fn row_submul(&mut self, i: usize, t: usize, q: &BigInt) {
        self.a.row_submul(i, t, q);
        if let Some(l) = &mut self.left {
            l.row_submul(i, t, q);
        }
    }

    fn col_submul(&mut self, j: usize, t: usize, q: &BigInt) {
        self.a.col_submul(j, t, q);
        if let Some(r) = &mut self.right {
            r.col_submul(j, t, q);
        }
    }

    fn row_combine(&mut self, t: usize, i: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        self.a.row_combine(t, i, x, y, z, w);
        if let Some(l) = &mut self.left {
            l.row_combine(t, i, x, y, z, w);
        }
    }

    fn col_combine(&mut self, t: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        self.a.col_combine(t, j, x, y, z, w);
        if let Some(r) = &mut self.right {
            r.col_combine(t, j, x, y, z, w);
        }
    }

    fn row_add(&mut self, t: usize, i: usize) {
        self.a.row_add(t, i);
        if let Some(l) = &mut self.left {
            l.row_add(t, i);
        }
    }

    fn negate_row(&mut self, t: usize) {
        self.a.negate_row(t);
        if let Some(l) = &mut self.left {
            l.negate_row(t);
        }
    }
}

/// Normalized extended gcd: g >= 0 and g = x a + y b.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn smith_reduce(m: &IntMatrix, track: bool) -> (Vec<BigInt>, Option<(IntMatrix, IntMatrix)>) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Reducer {
        a: m.clone(),
        left: track.then(|| IntMatrix::identity(rows)),
        right: track.then(|| IntMatrix::identity(cols)),
    };
    let k = min(rows, cols);
    let mut t = 0;
    while t < k {
        // smallest-magnitude pivot in the remaining submatrix
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.a.at(i, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) => {
                        if w.a.at(i, j).magnitude() < w.a.at(bi, bj).magnitude() {
                            Some((i, j))
                        } else {
                            Some((bi, bj))
                        }
                    }
                };
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        // clear row t and column t; gcd steps shrink the pivot so this
        // ping-pong terminates
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if w.a.at(i, t).is_zero() {
                    continue;
                }
                changed = true;
                let piv = w.a.at(t, t).clone();
                let e = w.a.at(i, t).clone();
                if (&e % &piv).is_zero() {
                    let q = &e / &piv;
                    w.row_submul(i, t, &q);
                } else {
                    let (g, x, y) = xgcd(&piv, &e);
                    let z = -(&e / &g);
                    let u = &piv / &g;
                    w.row_combine(t, i, &x, &y, &z, &u);
                }
            }
            for j in t + 1..cols {
                if w.a.at(t, j).is_zero() {
                    continue;
                }
                changed = true;
                let piv = w.a.at(t, t).clone();
                let e = w.a.at(t, j).clone();
                if (&e % &piv).is_zero() {
                    let q = &e / &piv;
                    w.col_submul(j, t, &q);
                } else {
                    let (g, x, y) = xgcd(&piv, &e);
                    let z = -(&e / &g);
                    let u = &piv / &g;
                    w.col_combine(t, j, &x, &y, &z, &u);
                }
            }
            if !changed {
                break;
            }
        }

        // make the pivot divide the rest of the submatrix
        let piv = w.a.at(t, t).clone();
        let mut fix = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(w.a.at(i, j) % &piv).is_zero() {
                    fix = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fix {
            w.row_add(t, i);
            continue; // re-clear with the same t
        }

        if w.a.at(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let d: Vec<BigInt> = (0..k).map(|i| w.a.at(i, i).clone()).collect();
    debug_assert!(divisibility_chain_ok(&d));
    (d, w.left.zip(w.right))
}

/// Full Smith normal form with the unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (d, lr) = smith_reduce(m, true);
    let (left, right) = lr.expect("transforms were tracked");
    SmithDecomposition {
        d,
        left,
        right,
        original_shape: (m.rows(), m.cols()),
    }
}

/// Invariant factors only (no transform bookkeeping).
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    smith_reduce(m, false).0
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_invariants(m).iter().filter(|d| !d.is_zero()).count()
}

pub fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - rank(m)
}

/// Basis of the integer kernel; the columns are primitive and span a
/// direct summand (they are columns of a unimodular matrix).
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.d.iter().filter(|d| !d.is_zero()).count();
    let n = m.cols();
    IntMatrix::from_fn(n, n - r, |row, col| s.right.at(row, r + col).clone())
}

/// Cokernel of `m : Z^cols -> Z^rows` as a finitely generated abelian group.
pub fn cokernel(m: &IntMatrix) -> FinAb {
    let d = smith_invariants(m);
    let r = d.iter().filter(|x| !x.is_zero()).count();
    let torsion: Vec<BigInt> = d
        .into_iter()
        .filter(|x| !x.is_zero() && !x.is_one())
        .collect();
    FinAb::new(m.rows() - r, torsion)
}

/// Rank and a primitive basis of the joint fixed lattice
/// `∩ ker(a_i - I)` of a family of unimodular actions.
pub fn invariant_subgroup(actions: &[IntMatrix]) -> Result<(usize, IntMatrix), LinalgError> {
    let Some(first) = actions.first() else {
        return Err(LinalgError::DimensionMismatch);
    };
    if !first.is_square() {
        return Err(LinalgError::NotSquare);
    }
    let n = first.rows();
    let id = IntMatrix::identity(n);
    let mut stack: Option<IntMatrix> = None;
    for a in actions {
        if a.rows() != n || a.cols() != n {
            return Err(LinalgError::DimensionMismatch);
        }
        debug_assert!(a.det().magnitude().is_one(), "action must be unimodular");
        let block = a.sub(&id);
        stack = Some(match stack {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    let s = stack.expect("nonempty");
    let basis = kernel_basis(&s);
    Ok((basis.cols(), basis))
}

/// Lexicographically ordered q-subsets of `0..n`.
fn combinations(n: usize, q: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if q > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..q).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - q {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..q {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// q-th exterior power in the lexicographic basis of q-subsets.
/// Multiplicative: `Λ^q(AB) = Λ^q(A) Λ^q(B)`.
pub fn exterior_power(m: &IntMatrix, q: usize) -> Result<IntMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare);
    }
    let n = m.rows();
    if q > n {
        return Err(LinalgError::DegreeOutOfRange { n, q });
    }
    let subsets = combinations(n, q);
    let dim = subsets.len();
    let mut out = IntMatrix::zeros(dim, dim);
    for (i, rows_sel) in subsets.iter().enumerate() {
        for (j, cols_sel) in subsets.iter().enumerate() {
            let minor = IntMatrix::from_fn(q, q, |r, c| m.at(rows_sel[r], cols_sel[c]).clone());
            out.set(i, j, minor.det());
        }
    }
    Ok(out)
}

/// Finitely generated abelian group in invariant-factor normal form:
/// a free rank plus a divisibility chain of torsion orders. Equal groups
/// have identical representations, so `==` is group isomorphism.
#[derive(Clone, PartialEq, Eq)]
pub struct FinAb {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FinAb {
    /// Canonicalizes an arbitrary list of torsion orders (each >= 1) into
    /// the divisibility chain; units are dropped.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let mut t: Vec<BigInt> = torsion.into_iter().filter(|x| !x.is_one()).collect();
        assert!(
            t.iter().all(|x| x.is_positive()),
            "torsion orders must be positive"
        );
        // gcd/lcm bubbling = Smith reduction of the diagonal matrix
        loop {
            t.sort();
            let mut changed = false;
            for i in 0..t.len().saturating_sub(1) {
                if !(&t[i + 1] % &t[i]).is_zero() {
                    let g = t[i].gcd(&t[i + 1]);
                    let l = &t[i] / &g * &t[i + 1];
                    t[i] = g;
                    t[i + 1] = l;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        t.retain(|x| !x.is_one());
        FinAb {
            free_rank,
            torsion: t,
        }
    }

    pub fn free(rank: usize) -> Self {
        FinAb {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(parts: &[FinAb]) -> FinAb {
        let free = parts.iter().map(|p| p.free_rank).sum();
        let torsion = parts
            .iter()
            .flat_map(|p| p.torsion.iter().cloned())
            .collect();
        FinAb::new(free, torsion)
    }

    /// Prime-power orders of the torsion part, sorted; display helper
    /// only, the canonical form stays the divisibility chain.
    pub fn primary_parts(&self) -> Vec<BigInt> {
        let mut parts = Vec::new();
        for t in &self.torsion {
            let mut rem = t.clone();
            let mut d = BigInt::from(2u32);
            while &d * &d <= rem {
                if (&rem % &d).is_zero() {
                    let mut pw = BigInt::one();
                    while (&rem % &d).is_zero() {
                        rem /= &d;
                        pw *= &d;
                    }
                    parts.push(pw);
                }
                d += 1;
            }
            if !rem.is_one() {
                parts.push(rem);
            }
        }
        parts.sort();
        parts
    }
}

impl fmt::Display for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.free_rank == 1 {
            write!(f, "Z")?;
            first = false;
        } else if self.free_rank > 1 {
            write!(f, "Z^{}", self.free_rank)?;
            first = false;
        }
        for t in &self.torsion {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{t}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAb({self})")
    }
}
