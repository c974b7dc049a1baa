use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, LinalgError, Scalar};

/// Dense matrix of exact scalars, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Matrix unit `e_{ij}` (0-based indices) in `M_n`.
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> ExactMatrix {
        let n = diag.len();
        let mut m = ExactMatrix::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            assert_eq!(d.field(), field, "scalar field mismatch");
            m.data[i * n + i] = d.clone();
        }
        m
    }

    /// Builds from explicit rows. Every row must have the same length and
    /// every entry must carry `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<ExactMatrix, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(LinalgError::RaggedRows);
            }
            for s in row {
                if s.field() != field {
                    return Err(LinalgError::FieldMismatch);
                }
                data.push(s);
            }
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            field,
            data,
        })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> ExactMatrix {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(field, x)).collect())
            .collect();
        ExactMatrix::from_rows(field, rows).expect("ragged integer rows")
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> ExactMatrix {
        assert_eq!(rows * cols, data.len(), "entry count does not match shape");
        debug_assert!(data.iter().all(|s| s.field() == field));
        ExactMatrix {
            rows,
            cols,
            field,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "scalar field mismatch");
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Retags every entry with another field.
    pub fn to_field(&self, field: Field) -> Result<ExactMatrix, LinalgError> {
        let data = self
            .data
            .iter()
            .map(|s| s.to_field(field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data,
        })
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            data,
        }
    }

    pub fn scale(&self, s: &Scalar) -> ExactMatrix {
        self.map(|x| x * s)
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn zip(&self, rhs: &ExactMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> ExactMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shape mismatch"
        );
        assert_eq!(self.field, rhs.field, "matrix field mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn try_add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        self.check_same_shape(rhs)?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn try_mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::SizeMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(integer_product(self, rhs))
    }

    fn check_same_shape(&self, rhs: &ExactMatrix) -> Result<(), LinalgError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LinalgError::SizeMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.field, rhs.field, "matrix field mismatch");
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = ExactMatrix::zeros(self.field, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// `self ⊗ I_k`: each entry becomes a scalar `k × k` block.
    pub fn kron_identity(&self, k: usize) -> ExactMatrix {
        self.kron(&ExactMatrix::identity(self.field, k))
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diag(blocks: &[ExactMatrix]) -> ExactMatrix {
        let field = blocks.first().map_or(Field::Q, |b| b.field);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = ExactMatrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field, "matrix field mismatch");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// The square sub-block with rows and columns `start..start + size`.
    pub fn sub_block(&self, start: usize, size: usize) -> ExactMatrix {
        let mut data = Vec::with_capacity(size * size);
        for i in start..start + size {
            for j in start..start + size {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix::from_vec(self.field, size, size, data)
    }

    /// Row-major vectorization as an `(rows·cols) × 1` column.
    pub fn vectorize(&self) -> ExactMatrix {
        ExactMatrix::from_vec(self.field, self.data.len(), 1, self.data.clone())
    }

    /// Inverse of [`ExactMatrix::vectorize`].
    pub fn unvectorize(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> ExactMatrix {
        ExactMatrix::from_vec(field, rows, cols, v.to_vec())
    }

    /// Row rank by Gaussian elimination, first nonzero pivot scanning down.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_echelon_in_place().len()
    }

    /// Reduces to row echelon form in place and returns the pivot columns.
    pub(crate) fn row_echelon_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let pivot_inv = self.get(r, c).inv().expect("nonzero pivot");
            for i in r + 1..self.rows {
                if self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c) * &pivot_inv;
                self.axpy_row(i, r, &factor, c);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let pivots = self.row_echelon_in_place();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..self.cols {
                    let idx = r * self.cols + j;
                    self.data[idx] = &self.data[idx] * &inv;
                }
            }
            for i in 0..r {
                if self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                self.axpy_row(i, r, &factor, c);
            }
        }
        pivots
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= factor · row[src]`, touching columns `from..`.
    fn axpy_row(&mut self, dst: usize, src: usize, factor: &Scalar, from: usize) {
        for j in from..self.cols {
            let s = &self.data[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = factor * s;
            let idx = dst * self.cols + j;
            self.data[idx] = &self.data[idx] - &delta;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination after clearing
    /// denominators row by row.
    pub fn det(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(self.field.one());
        }
        Ok(super::bareiss::det(self))
    }

    /// Inverse by Gauss–Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<ExactMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.field.one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinalgError::Singular);
        }
        let mut out = ExactMatrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = aug.get(i, n + j).clone();
            }
        }
        Ok(out)
    }

    /// Whether `self = λ·other` for some scalar λ (nonzero when `other` is nonzero).
    pub fn scalar_multiple_of(&self, other: &ExactMatrix) -> Option<Scalar> {
        if (self.rows, self.cols) != (other.rows, other.cols) || self.field != other.field {
            return None;
        }
        let idx = other.data.iter().position(|s| !s.is_zero())?;
        let lambda = self.data[idx].div(&other.data[idx]);
        (&other.scale(&lambda) == self).then_some(lambda)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;

    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;

    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;

    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

/// Clears denominators of a run of entries: returns their lcm `d` together with
/// `(d·re, d·im)` for each entry.
fn clear_denominators<'a>(
    entries: impl Iterator<Item = &'a Scalar> + Clone,
) -> (BigInt, Vec<(BigInt, BigInt)>) {
    let d = entries
        .clone()
        .flat_map(|x| [x.re().denom(), x.im().denom()])
        .fold(BigInt::one(), |acc, q| if q.is_one() { acc } else { acc.lcm(q) });
    let scaled = |x: &BigRational| x.numer() * (&d / x.denom());
    let ints = entries.map(|x| (scaled(x.re()), scaled(x.im()))).collect();
    (d, ints)
}

// Rational products spend most of their time in gcds. Scaling each row of `a`
// and each column of `b` to integers leaves one reduction per output entry.
fn integer_product(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let gaussian = a.field == Field::Qi;
    let (row_d, a_int): (Vec<_>, Vec<_>) = (0..a.rows)
        .map(|i| clear_denominators(a.data[i * a.cols..(i + 1) * a.cols].iter()))
        .unzip();
    let (col_d, b_int): (Vec<_>, Vec<_>) = (0..b.cols)
        .map(|j| clear_denominators((0..b.rows).map(|k| &b.data[k * b.cols + j])))
        .unzip();
    let mut data = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
            for ((x, y), (u, v)) in a_int[i].iter().zip(&b_int[j]) {
                if !x.is_zero() && !u.is_zero() {
                    re += x * u;
                }
                if gaussian {
                    if !y.is_zero() && !v.is_zero() {
                        re -= y * v;
                    }
                    if !x.is_zero() && !v.is_zero() {
                        im += x * v;
                    }
                    if !y.is_zero() && !u.is_zero() {
                        im += y * u;
                    }
                }
            }
            let d = &row_d[i] * &col_d[j];
            data.push(match a.field {
                Field::Q => Scalar::from_rational(Field::Q, BigRational::new(re, d)),
                Field::Qi => Scalar::gaussian(BigRational::new(re, d.clone()), BigRational::new(im, d)),
            });
        }
    }
    ExactMatrix {
        rows: a.rows,
        cols: b.cols,
        field: a.field,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(Field::Q, rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(Field::Q, 3).rank(), 3);
        assert_eq!(ExactMatrix::zeros(Field::Q, 2, 2).rank(), 0);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(q(&[&[0, 0, 1], &[0, 0, 2]]).rank(), 1);
    }

    #[test]
    fn det_examples() {
        assert_eq!(ExactMatrix::identity(Field::Q, 4).det().unwrap(), Field::Q.one());
        assert_eq!(q(&[&[1, 2], &[3, 4]]).det().unwrap(), Scalar::from_int(Field::Q, -2));
        let d = ExactMatrix::diagonal(
            Field::Q,
            &[
                Scalar::from_int(Field::Q, 3),
                Scalar::from_frac(Field::Q, 1, 2),
                Scalar::from_int(Field::Q, -5),
            ],
        );
        assert_eq!(d.det().unwrap(), Scalar::from_frac(Field::Q, -15, 2));
        // zero leading pivot forces a row swap
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det().unwrap(), Scalar::from_int(Field::Q, -1));
        assert!(matches!(
            q(&[&[1, 2, 3]]).det(),
            Err(LinalgError::NonSquare { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn gaussian_det() {
        let i = Scalar::i();
        let one = Field::Qi.one();
        let m = ExactMatrix::from_rows(Field::Qi, vec![vec![i.clone(), one.clone()], vec![one, i]])
            .unwrap();
        // i·i − 1 = −2
        assert_eq!(m.det().unwrap(), Scalar::from_int(Field::Qi, -2));
    }

    #[test]
    fn inverse_round_trip() {
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(matches!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular)));
    }

    #[test]
    fn kron_identity_blocks() {
        let e11 = ExactMatrix::unit(Field::Q, 2, 0, 0);
        let p = e11.kron_identity(2);
        assert_eq!(p, ExactMatrix::diagonal(Field::Q, &[Field::Q.one(), Field::Q.one(), Field::Q.zero(), Field::Q.zero()]));
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn scalar_multiple_detection() {
        let a = q(&[&[1, 2], &[3, 4]]);
        let b = a.scale(&Scalar::from_frac(Field::Q, -3, 2));
        assert_eq!(b.scalar_multiple_of(&a), Some(Scalar::from_frac(Field::Q, -3, 2)));
        assert_eq!(ExactMatrix::identity(Field::Q, 2).scalar_multiple_of(&a), None);
    }
}

