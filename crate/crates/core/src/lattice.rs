//! Exact scalars, lattice vectors, integer matrices and split exact sequences
//! `0 -> N -> L -> L' -> 0`.

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;

use crate::error::{Error, Report, Result, ViolationKind};

/// Reduced fraction with positive denominator.
pub type ExactScalar = BigRational;

pub fn int(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn small_int(x: &ExactScalar) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64().filter(|n| n.unsigned_abs() < 1 << 62)
    } else {
        None
    }
}

/// Coordinates of a point of `L ⊗ Q` for some lattice `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<ExactScalar>);

impl LatticeVector {
    pub fn new(coords: Vec<ExactScalar>) -> Self {
        Self(coords)
    }

    pub fn zeros(rank: usize) -> Self {
        Self(vec![ExactScalar::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zeros(rank);
        v.0[i] = ExactScalar::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        Self(
            coords
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ExactScalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<ExactScalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn dot(&self, other: &Self) -> ExactScalar {
        debug_assert_eq!(self.rank(), other.rank());
        // most vectors are small and integral; skip the rational normalizations
        let fast = self.0.iter().zip(&other.0).try_fold(0i128, |acc, (a, b)| {
            let (a, b) = (small_int(a)?, small_int(b)?);
            acc.checked_add(i128::from(a) * i128::from(b))
        });
        if let Some(x) = fast {
            return BigRational::from_integer(BigInt::from(x));
        }
        self.0
            .iter()
            .zip(&other.0)
            .fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: &ExactScalar, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut c = self.0.clone();
        c.extend(other.0.iter().cloned());
        Self(c)
    }

    /// Divides an integral vector by the gcd of its coordinates.
    pub fn primitive(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        if !self.is_integral() {
            return Err(Error::Schema(format!("{self} is not integral")));
        }
        Ok(self.primitive_direction())
    }

    /// The primitive integral vector on the ray through a nonzero rational vector.
    pub(crate) fn primitive_direction(&self) -> Self {
        if let Some(ints) = self.0.iter().map(small_int).collect::<Option<Vec<i64>>>() {
            let g = ints.iter().fold(0i64, |acc, c| acc.gcd(c));
            if g == 0 {
                return self.clone();
            }
            return Self(ints.into_iter().map(|c| int(c / g)).collect());
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        Self(
            ints.into_iter()
                .map(|c| BigRational::from_integer(c / &g))
                .collect(),
        )
    }
}

impl Deref for LatticeVector {
    type Target = [ExactScalar];
    fn deref(&self) -> &[ExactScalar] {
        &self.0
    }
}

impl Index<usize> for LatticeVector {
    type Output = ExactScalar;
    fn index(&self, i: usize) -> &ExactScalar {
        &self.0[i]
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Integer matrix of a homomorphism `Z^cols -> Z^rows`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl LatticeMap {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::RankMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; `cols` is needed to type matrices with no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::RankMismatch {
                    context: "matrix row",
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Codomain rank.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Domain rank.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> LatticeVector {
        LatticeVector::from_bigints(&self.entries[r * self.cols..(r + 1) * self.cols])
    }

    pub fn column(&self, c: usize) -> LatticeVector {
        LatticeVector::from_bigints(
            &(0..self.rows)
                .map(|r| self.get(r, c).clone())
                .collect::<Vec<_>>(),
        )
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.entries[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        debug_assert_eq!(v.rank(), self.cols);
        LatticeVector::new(
            (0..self.rows)
                .map(|r| {
                    (0..self.cols).fold(ExactScalar::zero(), |acc, c| {
                        acc + BigRational::from_integer(self.get(r, c).clone()) * &v[c]
                    })
                })
                .collect(),
        )
    }

    /// Precomposition with `other`: returns `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch {
                context: "composition",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = LatticeMap::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                *out.get_mut(r, c) = acc;
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> LatticeMap {
        let mut out = LatticeMap::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        out
    }

    /// Stacks the rows of `self` above the rows of `other`.
    pub fn stack(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if self.cols != other.cols {
            return Err(Error::RankMismatch {
                context: "row stacking",
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        LatticeMap::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn from_columns(rows: usize, columns: &[LatticeVector]) -> Result<LatticeMap> {
        let mut m = LatticeMap::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.rank() != rows || !col.is_integral() {
                return Err(Error::Schema(format!(
                    "column {col} is not an integral vector of rank {rows}"
                )));
            }
            for r in 0..rows {
                *m.get_mut(r, c) = col[r].to_integer();
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self);
        let diag = (0..self.rows).fold(BigInt::one(), |acc, i| acc * snf.diagonal.get(i, i));
        let sign = snf.left_determinant_sign() * snf.right_determinant_sign();
        Some(diag * sign)
    }

    /// Integral inverse of a unimodular matrix.
    pub fn inverse(&self) -> Option<LatticeMap> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self);
        if (0..self.rows).any(|i| !snf.diagonal.get(i, i).is_one()) {
            return None;
        }
        // left * m * right = 1  =>  m^{-1} = right * left
        snf.right.compose(&snf.left).ok()
    }
}

impl fmt::Display for LatticeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// `left · m · right = diagonal` with unimodular `left`, `right` and
/// `d_1 | d_2 | ...` on the diagonal.
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub diagonal: LatticeMap,
    pub left: LatticeMap,
    pub right: LatticeMap,
    pub rank: usize,
    left_sign: i32,
    right_sign: i32,
}

impl SmithNormalForm {
    fn left_determinant_sign(&self) -> i32 {
        self.left_sign
    }

    fn right_determinant_sign(&self) -> i32 {
        self.right_sign
    }

    /// A basis of the kernel of the original map.
    pub fn kernel_basis(&self) -> Vec<LatticeVector> {
        (self.rank..self.right.cols())
            .map(|c| self.right.column(c))
            .collect()
    }
}

pub fn smith_normal_form(m: &LatticeMap) -> SmithNormalForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = LatticeMap::identity(rows);
    let mut right = LatticeMap::identity(cols);
    let mut left_sign = 1;
    let mut right_sign = 1;

    fn swap_rows(x: &mut LatticeMap, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..x.cols {
            x.entries.swap(i * x.cols + c, j * x.cols + c);
        }
    }
    fn swap_cols(x: &mut LatticeMap, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..x.rows {
            x.entries.swap(r * x.cols + i, r * x.cols + j);
        }
    }
    // row_i += k * row_j
    fn add_row(x: &mut LatticeMap, i: usize, j: usize, k: &BigInt) {
        for c in 0..x.cols {
            let v = x.get(j, c) * k;
            *x.get_mut(i, c) += v;
        }
    }
    fn add_col(x: &mut LatticeMap, i: usize, j: usize, k: &BigInt) {
        for r in 0..x.rows {
            let v = x.get(r, j) * k;
            *x.get_mut(r, i) += v;
        }
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block as pivot
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = a.get(r, c);
                if !v.is_zero() && pivot.is_none_or(|(pr, pc)| v.abs() < a.get(pr, pc).abs()) {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        if pr != t {
            swap_rows(&mut a, t, pr);
            swap_rows(&mut left, t, pr);
            left_sign = -left_sign;
        }
        if pc != t {
            swap_cols(&mut a, t, pc);
            swap_cols(&mut right, t, pc);
            right_sign = -right_sign;
        }
        let mut clean = true;
        for r in t + 1..rows {
            let q = a.get(r, t).div_floor(a.get(t, t));
            if !q.is_zero() {
                let k = -q;
                add_row(&mut a, r, t, &k);
                add_row(&mut left, r, t, &k);
            }
            if !a.get(r, t).is_zero() {
                clean = false;
            }
        }
        for c in t + 1..cols {
            let q = a.get(t, c).div_floor(a.get(t, t));
            if !q.is_zero() {
                let k = -q;
                add_col(&mut a, c, t, &k);
                add_col(&mut right, c, t, &k);
            }
            if !a.get(t, c).is_zero() {
                clean = false;
            }
        }
        if !clean {
            // a smaller remainder exists; pick it as the next pivot
            continue;
        }
        // divisibility: the pivot must divide the whole trailing block
        let mut fixed = false;
        'outer: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(a.get(r, c) % a.get(t, t)).is_zero() {
                    let one = BigInt::one();
                    add_row(&mut a, t, r, &one);
                    add_row(&mut left, t, r, &one);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue;
        }
        if a.get(t, t).is_negative() {
            let minus = -BigInt::one();
            for c in 0..cols {
                *a.get_mut(t, c) *= &minus;
            }
            for c in 0..rows {
                *left.get_mut(t, c) *= &minus;
            }
            left_sign = -left_sign;
        }
        t += 1;
    }
    SmithNormalForm {
        diagonal: a,
        left,
        right,
        rank: t,
        left_sign,
        right_sign,
    }
}

/// The lattice of integral vectors in the kernel of `m`.
pub fn kernel_basis(m: &LatticeMap) -> Vec<LatticeVector> {
    smith_normal_form(m).kernel_basis()
}

/// `0 -> N --i--> L --p--> L' -> 0` together with a cosection `q: L -> N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSequence {
    inclusion: LatticeMap,
    projection: LatticeMap,
    cosection: LatticeMap,
}

impl SplitSequence {
    /// Assembles the three maps, checking only that their ranks fit together.
    pub fn new(
        inclusion: LatticeMap,
        projection: LatticeMap,
        cosection: LatticeMap,
    ) -> Result<Self> {
        let middle = projection.cols();
        if inclusion.rows() != middle {
            return Err(Error::RankMismatch {
                context: "kernel embedding codomain",
                expected: middle,
                found: inclusion.rows(),
            });
        }
        if cosection.cols() != middle {
            return Err(Error::RankMismatch {
                context: "cosection domain",
                expected: middle,
                found: cosection.cols(),
            });
        }
        if cosection.rows() != inclusion.cols() {
            return Err(Error::RankMismatch {
                context: "cosection codomain",
                expected: inclusion.cols(),
                found: cosection.rows(),
            });
        }
        Ok(Self {
            inclusion,
            projection,
            cosection,
        })
    }

    /// Derives the kernel embedding from `p` and `q`: `i = K (q K)^{-1}` for a
    /// kernel basis `K` of `p`.
    pub fn from_projection(projection: LatticeMap, cosection: LatticeMap) -> Result<Self> {
        let middle = projection.cols();
        let kernel = kernel_basis(&projection);
        if kernel.len() != cosection.rows() {
            return Err(Error::RankMismatch {
                context: "kernel rank vs cosection rank",
                expected: kernel.len(),
                found: cosection.rows(),
            });
        }
        let k = LatticeMap::from_columns(middle, &kernel)?;
        let qk = cosection.compose(&k)?;
        let inv = qk.inverse().ok_or_else(|| {
            Error::Validation({
                let mut r = Report::default();
                r.push(
                    ViolationKind::Splitting,
                    "cosection restricted to the kernel is not unimodular",
                    json!({ "q_on_kernel": qk.to_string() }),
                );
                r
            })
        })?;
        Self::new(k.compose(&inv)?, projection, cosection)
    }

    pub fn inclusion(&self) -> &LatticeMap {
        &self.inclusion
    }

    pub fn projection(&self) -> &LatticeMap {
        &self.projection
    }

    pub fn cosection(&self) -> &LatticeMap {
        &self.cosection
    }

    /// Rank of `N`.
    pub fn kernel_rank(&self) -> usize {
        self.inclusion.cols()
    }

    /// Rank of the middle lattice.
    pub fn middle_rank(&self) -> usize {
        self.projection.cols()
    }

    /// Rank of the quotient lattice.
    pub fn quotient_rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn verify(&self) -> Report {
        let mut report = Report::default();
        let pi = self
            .projection
            .compose(&self.inclusion)
            .expect("ranks checked at construction");
        if !pi.is_zero() {
            report.push(
                ViolationKind::Splitting,
                "p ∘ i ≠ 0",
                json!({ "p_i": pi.to_string() }),
            );
        }
        let qi = self
            .cosection
            .compose(&self.inclusion)
            .expect("ranks checked at construction");
        if qi != LatticeMap::identity(self.kernel_rank()) {
            report.push(
                ViolationKind::Splitting,
                "q ∘ i ≠ id",
                json!({ "q_i": qi.to_string() }),
            );
        }
        let stacked = self.projection.stack(&self.cosection).expect("same domain");
        match stacked.determinant() {
            Some(d) if d.abs().is_one() => {}
            Some(d) => report.push(
                ViolationKind::Splitting,
                "(p, q) is not unimodular",
                json!({ "determinant": d.to_string() }),
            ),
            None => report.push(
                ViolationKind::Splitting,
                "(p, q) is not square",
                json!({ "rows": stacked.rows(), "cols": stacked.cols() }),
            ),
        }
        report
    }

    /// The section `s: L' -> L` with `p ∘ s = id` and `q ∘ s = 0`.
    pub fn section(&self) -> Result<LatticeMap> {
        let stacked = self.projection.stack(&self.cosection)?;
        let inv = stacked
            .inverse()
            .ok_or_else(|| Error::Validation(self.verify()))?;
        let cols: Vec<LatticeVector> = (0..self.quotient_rank()).map(|c| inv.column(c)).collect();
        LatticeMap::from_columns(self.middle_rank(), &cols)
    }

    pub fn project(&self, x: &LatticeVector) -> LatticeVector {
        self.projection.apply(x)
    }

    pub fn cosect(&self, x: &LatticeVector) -> LatticeVector {
        self.cosection.apply(x)
    }

    pub fn include(&self, n: &LatticeVector) -> LatticeVector {
        self.inclusion.apply(n)
    }
}

/// Checks the three splitting invariants, reporting rank problems as errors.
pub fn verify_splitting(s: &SplitSequence) -> Result<Report> {
    Ok(s.verify())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> LatticeMap {
        LatticeMap::from_rows(rows, cols).unwrap()
    }

    fn check_snf(input: &LatticeMap) -> SmithNormalForm {
        let snf = smith_normal_form(input);
        let product = snf
            .left
            .compose(input)
            .unwrap()
            .compose(&snf.right)
            .unwrap();
        assert_eq!(product, snf.diagonal);
        assert!(snf.left.determinant().unwrap().abs().is_one());
        assert!(snf.right.determinant().unwrap().abs().is_one());
        for r in 0..input.rows() {
            for c in 0..input.cols() {
                if r != c {
                    assert!(snf.diagonal.get(r, c).is_zero());
                }
            }
        }
        for i in 1..snf.rank {
            assert!((snf.diagonal.get(i, i) % snf.diagonal.get(i - 1, i - 1)).is_zero());
        }
        snf
    }

    #[test]
    fn snf_identity() {
        let snf = check_snf(&LatticeMap::identity(2));
        assert_eq!(snf.diagonal, LatticeMap::identity(2));
    }

    #[test]
    fn snf_two_three() {
        let snf = check_snf(&m(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(snf.diagonal, m(&[vec![1, 0], vec![0, 6]], 2));
    }

    #[test]
    fn snf_gl2_projection_kernel() {
        let p = m(&[vec![1, -1]], 2);
        let snf = check_snf(&p);
        assert_eq!(snf.diagonal.get(0, 0), &BigInt::one());
        let ker = snf.kernel_basis();
        assert_eq!(ker.len(), 1);
        let k = ker[0].primitive().unwrap();
        assert!(k == LatticeVector::from_ints(&[1, 1]) || k == LatticeVector::from_ints(&[-1, -1]));
    }

    fn gl2_split() -> SplitSequence {
        SplitSequence::new(
            m(&[vec![-1], vec![-1]], 1),
            m(&[vec![1, -1]], 2),
            m(&[vec![0, -1]], 2),
        )
        .unwrap()
    }

    #[test]
    fn gl2_splitting_holds() {
        assert!(gl2_split().verify().ok());
        let derived =
            SplitSequence::from_projection(m(&[vec![1, -1]], 2), m(&[vec![0, -1]], 2)).unwrap();
        assert_eq!(derived.inclusion(), gl2_split().inclusion());
    }

    #[test]
    fn wrong_cosection_sign_fails() {
        let s = SplitSequence::new(
            m(&[vec![-1], vec![-1]], 1),
            m(&[vec![1, -1]], 2),
            m(&[vec![0, 1]], 2),
        )
        .unwrap();
        let report = s.verify();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("q ∘ i")));
    }

    #[test]
    fn rank_zero_quotient() {
        let s = SplitSequence::new(
            LatticeMap::identity(1),
            LatticeMap::zero(0, 1),
            LatticeMap::identity(1),
        )
        .unwrap();
        assert!(s.verify().ok());
        assert_eq!(s.section().unwrap().cols(), 0);
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let err = SplitSequence::new(
            LatticeMap::identity(2),
            m(&[vec![1, -1, 0]], 3),
            LatticeMap::identity(2),
        );
        assert!(matches!(err, Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn primitive_generators() {
        assert_eq!(
            LatticeVector::from_ints(&[2, 4]).primitive().unwrap(),
            LatticeVector::from_ints(&[1, 2])
        );
        assert_eq!(
            LatticeVector::from_ints(&[-3, 0]).primitive().unwrap(),
            LatticeVector::from_ints(&[-1, 0])
        );
        assert_eq!(
            LatticeVector::from_ints(&[6, -9, 3]).primitive().unwrap(),
            LatticeVector::from_ints(&[2, -3, 1])
        );
        assert!(matches!(
            LatticeVector::zeros(2).primitive(),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn gl2_section() {
        let s = gl2_split().section().unwrap();
        assert_eq!(s.column(0), LatticeVector::from_ints(&[1, 0]));
    }
}
