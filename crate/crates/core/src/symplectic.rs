//! Exact symplectic matrices, basic normal-form blocks and the ⋄-product.
//!
//! Entries are exact rationals. Kernel dimensions are computed by
//! fraction-free elimination, so there is no pivot tolerance anywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{int, Error, Rational, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&e| int(e)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
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

    pub fn get(&self, row: usize, col: usize) -> Rational {
        self.entries[row * self.cols + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// `self^exp` by repeated squaring; `exp = 0` gives the identity.
    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquareEven {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact rank by Bareiss fraction-free elimination.
    ///
    /// Each row is first scaled by the lcm of its denominators, which does
    /// not change the rank.
    #[allow(clippy::needless_range_loop)]
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> = (0..self.rows)
            .map(|r| {
                let row = &self.entries[r * self.cols..(r + 1) * self.cols];
                let lcm = row.iter().fold(1i64, |acc, e| acc.lcm(e.denom()));
                row.iter()
                    .map(|e| i128::from(*e.numer()) * i128::from(lcm / e.denom()))
                    .collect()
            })
            .collect();

        let mut rank = 0;
        let mut prev = 1i128;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(rank, pivot);
            let p = a[rank][col];
            for i in rank + 1..self.rows {
                let lead = a[i][col];
                for j in col + 1..self.cols {
                    let num = p * a[i][j] - lead * a[rank][j];
                    debug_assert_eq!(num % prev, 0, "Bareiss division must be exact");
                    a[i][j] = num / prev;
                }
                a[i][col] = 0;
            }
            prev = p;
            rank += 1;
        }
        rank
    }

    /// Dimension of the kernel of `self` as a map on column vectors.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The standard symplectic form `[[0, -I_n], [I_n, 0]]` for `n ∈ {1, 2}`.
pub fn standard_j(n: usize) -> Result<ExactMatrix> {
    if !(1..=2).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(j_form(n))
}

fn j_form(n: usize) -> ExactMatrix {
    let mut j = ExactMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, -Rational::one());
        j.set(n + i, i, Rational::one());
    }
    j
}

/// `true` iff `Mᵀ J M = J` exactly.
pub fn is_symplectic(m: &ExactMatrix) -> Result<bool> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(Error::NotSquareEven {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let j = j_form(m.rows() / 2);
    Ok(m.transpose().mul(&j)?.mul(m)? == j)
}

/// θ/π as a reduced fraction `p/q` with `0 < p/q < 2`, `p/q != 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RotationAngle {
    p: i64,
    q: i64,
}

impl RotationAngle {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidRotation { p, q });
        }
        let r = Rational::new(p, q);
        let (p, q) = (*r.numer(), *r.denom());
        if p <= 0 || p >= 2 * q || p == q {
            return Err(Error::InvalidRotation { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    /// θ/π as an exact rational.
    pub fn over_pi(&self) -> Rational {
        Rational::new(self.p, self.q)
    }

    /// Smallest `d ≥ 1` with `R(θ)^d = I`, i.e. `2q / gcd(p, 2q)`.
    pub fn order(&self) -> u64 {
        let two_q = 2 * self.q;
        (two_q / self.p.gcd(&two_q)) as u64
    }

    /// `2 cos θ` when it is rational (only for `q ∈ {2, 3}` in range).
    pub fn two_cos(&self) -> Option<i64> {
        match (self.q, self.p) {
            (2, _) => Some(0),
            (3, 1) | (3, 5) => Some(1),
            (3, 2) | (3, 4) => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for RotationAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// A 2×2 basic normal-form block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalFormBlock {
    /// `[[λ, b], [0, λ]]` with `λ = ±1`, `b ∈ {-1, 0, 1}`.
    N1 {
        lambda: i8,
        b: i8,
    },
    Rotation(RotationAngle),
}

impl NormalFormBlock {
    pub fn n1(lambda: i8, b: i8) -> Result<Self> {
        if lambda != 1 && lambda != -1 {
            return Err(Error::Unsupported("N1 eigenvalue must be 1 or -1"));
        }
        if !(-1..=1).contains(&b) {
            return Err(Error::InvalidShear { case: 0, b: b.into() });
        }
        Ok(Self::N1 { lambda, b })
    }

    pub fn rotation(p: i64, q: i64) -> Result<Self> {
        RotationAngle::new(p, q).map(Self::Rotation)
    }
}

/// The block as a rational 2×2 matrix.
///
/// Rotations are given by the companion form `[[0, -1], [1, 2cos θ]]`, which
/// is conjugate to `R(θ)` in SL(2, R). It only exists when `2cos θ` is
/// rational; otherwise this returns [`Error::IrrationalRotation`].
pub fn block_matrix(block: NormalFormBlock) -> Result<ExactMatrix> {
    match block {
        NormalFormBlock::N1 { lambda, b } => {
            ExactMatrix::from_ints(2, 2, &[lambda.into(), b.into(), 0, lambda.into()])
        }
        NormalFormBlock::Rotation(angle) => {
            let c = angle.two_cos().ok_or(Error::IrrationalRotation {
                p: angle.numer(),
                q: angle.denom(),
            })?;
            ExactMatrix::from_ints(2, 2, &[0, -1, 1, c])
        }
    }
}

/// Symplectic direct sum of two 2×2 symplectic matrices.
///
/// Convention: `a` acts on coordinates (1, 3) and `b` on (2, 4), so that the
/// result is symplectic for `standard_j(2)`.
pub fn diamond(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    for m in [a, b] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: m.rows() * m.cols(),
            });
        }
        if !is_symplectic(m)? {
            return Err(Error::NotSymplectic);
        }
    }
    let mut out = ExactMatrix::zeros(4, 4);
    for (block, offset) in [(a, 0), (b, 1)] {
        for r in 0..2 {
            for c in 0..2 {
                out.set(2 * r + offset, 2 * c + offset, block.get(r, c));
            }
        }
    }
    Ok(out)
}

/// Integer coefficients (constant term first) of the `d`-th cyclotomic
/// polynomial, from `x^d - 1 = ∏_{e | d} Φ_e(x)`.
pub fn cyclotomic_polynomial(d: u64) -> Vec<i64> {
    assert!(d >= 1);
    let mut poly = vec![0i64; d as usize + 1];
    poly[0] = -1;
    poly[d as usize] = 1;
    for e in (1..d).filter(|e| d.is_multiple_of(*e)) {
        poly = div_monic(&poly, &cyclotomic_polynomial(e));
    }
    poly
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let coeff = rem[k + dn];
        quot[k] = coeff;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= coeff * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn companion(poly: &[i64]) -> ExactMatrix {
    let n = poly.len() - 1;
    let mut c = ExactMatrix::zeros(n, n);
    for i in 1..n {
        c.set(i, i - 1, Rational::one());
    }
    for (i, coeff) in poly[..n].iter().enumerate() {
        c.set(i, n - 1, int(-coeff));
    }
    c
}

/// `dim ker(B^m - I)` for a single 2×2 block.
///
/// Rational blocks use their matrix directly. An irrational rotation is
/// lifted to the companion matrix `C` of `Φ_d`, where `d` is the order of
/// `e^{iθ}`: every eigenvalue of `C` is a Galois conjugate of `e^{iθ}`, so
/// `ker(C^m - I)` is all or nothing and the real 2×2 block gets the same
/// fraction `2 / φ(d)` of it.
fn block_kernel_dim(block: NormalFormBlock, m: u64) -> Result<usize> {
    match block_matrix(block) {
        Ok(mat) => Ok(mat.pow(m)?.sub(&ExactMatrix::identity(2))?.kernel_dim()),
        Err(Error::IrrationalRotation { .. }) => {
            let NormalFormBlock::Rotation(angle) = block else {
                unreachable!()
            };
            let phi = cyclotomic_polynomial(angle.order());
            let c = companion(&phi);
            let n = c.rows();
            let k = c.pow(m)?.sub(&ExactMatrix::identity(n))?.kernel_dim();
            Ok(2 * k / n)
        }
        Err(e) => Err(e),
    }
}

/// `dim ker((A ⋄ B)^m - I₄)` by exact matrix powers and exact rank.
pub fn nullity_oracle(a: NormalFormBlock, b: NormalFormBlock, m: u64) -> Result<usize> {
    if m == 0 {
        return Err(Error::Unsupported("iterate count must be at least 1"));
    }
    match (block_matrix(a), block_matrix(b)) {
        (Ok(ma), Ok(mb)) => {
            let monodromy = diamond(&ma, &mb)?;
            Ok(monodromy.pow(m)?.sub(&ExactMatrix::identity(4))?.kernel_dim())
        }
        // ⋄ is a direct sum, so kernels add.
        _ => Ok(block_kernel_dim(a, m)? + block_kernel_dim(b, m)?),
    }
}
