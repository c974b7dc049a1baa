use crate::exactla::{ExactMatrix, Field, Scalar};

use super::PreserverError;

/// A linear map `M_n → M_m` stored as its `m² × n²` matrix on row-major
/// vectorizations: column `i·n + j` is `vec(φ(e_{ij}))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatLinearMap {
    n: usize,
    m: usize,
    coeffs: ExactMatrix,
}

impl MatLinearMap {
    pub fn new(n: usize, m: usize, coeffs: ExactMatrix) -> Result<MatLinearMap, PreserverError> {
        if coeffs.rows() != m * m || coeffs.cols() != n * n {
            return Err(PreserverError::SizeMismatch(format!(
                "coefficient matrix is {}x{}, expected {}x{}",
                coeffs.rows(),
                coeffs.cols(),
                m * m,
                n * n
            )));
        }
        Ok(MatLinearMap { n, m, coeffs })
    }

    /// Tabulates `f` on the matrix units of `M_n`.
    pub fn from_fn(field: Field, n: usize, m: usize, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> MatLinearMap {
        let mut coeffs = ExactMatrix::zeros(field, m * m, n * n);
        for i in 0..n {
            for j in 0..n {
                let image = f(&ExactMatrix::unit(field, n, i, j));
                assert_eq!((image.rows(), image.cols()), (m, m), "image has wrong size");
                for (r, v) in image.entries().iter().enumerate() {
                    if !v.is_zero() {
                        coeffs.set(r, i * n + j, v.clone());
                    }
                }
            }
        }
        MatLinearMap { n, m, coeffs }
    }

    pub fn source_size(&self) -> usize {
        self.n
    }

    pub fn target_size(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> Field {
        self.coeffs.field()
    }

    pub fn coeffs(&self) -> &ExactMatrix {
        &self.coeffs
    }

    pub fn apply(&self, a: &ExactMatrix) -> Result<ExactMatrix, PreserverError> {
        if (a.rows(), a.cols()) != (self.n, self.n) {
            return Err(PreserverError::SizeMismatch(format!(
                "map expects {}x{} input, got {}x{}",
                self.n,
                self.n,
                a.rows(),
                a.cols()
            )));
        }
        if a.field() != self.field() {
            return Err(PreserverError::FieldMismatch);
        }
        let out = self.coeffs.try_mul(&a.vectorize())?;
        Ok(ExactMatrix::unvectorize(self.field(), self.m, self.m, out.entries()))
    }

    /// `φ(e_{ij})`, read straight from the coefficient column.
    pub fn image_of_unit(&self, i: usize, j: usize) -> ExactMatrix {
        let col = i * self.n + j;
        let data = (0..self.m * self.m).map(|r| self.coeffs.get(r, col).clone()).collect();
        ExactMatrix::from_vec(self.field(), self.m, self.m, data)
    }

    /// `φ(e_{ij})` for every matrix unit, in row-major order of `(i, j)`.
    pub fn unit_images(&self) -> Vec<ExactMatrix> {
        (0..self.n * self.n).map(|k| self.image_of_unit(k / self.n, k % self.n)).collect()
    }

    pub fn unit_image(&self) -> ExactMatrix {
        self.apply(&ExactMatrix::identity(self.field(), self.n))
            .expect("identity has the source size")
    }

    pub fn is_unital(&self) -> bool {
        self.unit_image().is_identity()
    }

    pub fn identity(field: Field, n: usize) -> MatLinearMap {
        MatLinearMap::from_fn(field, n, n, Clone::clone)
    }

    /// The tower embedding `a ↦ a ⊗ I_k`.
    pub fn embed_canonical(field: Field, n: usize, k: usize) -> MatLinearMap {
        MatLinearMap::from_fn(field, n, n * k, |a| a.kron_identity(k))
    }

    pub fn transpose_map(field: Field, n: usize) -> MatLinearMap {
        MatLinearMap::from_fn(field, n, n, ExactMatrix::transpose)
    }

    /// `a ↦ U·a·U⁻¹`.
    pub fn conjugation_map(u: &ExactMatrix) -> Result<MatLinearMap, PreserverError> {
        let u_inv = u.inverse().map_err(|_| PreserverError::SingularConjugator)?;
        Ok(MatLinearMap::from_fn(u.field(), u.rows(), u.rows(), |a| &(u * a) * &u_inv))
    }

    /// `a ↦ X·a·Y`.
    pub fn left_right(x: &ExactMatrix, y: &ExactMatrix) -> MatLinearMap {
        MatLinearMap::from_fn(x.field(), y.rows(), x.rows(), |a| &(x * a) * y)
    }

    /// `a ↦ X·aᵗ·Y`.
    pub fn left_right_transpose(x: &ExactMatrix, y: &ExactMatrix) -> MatLinearMap {
        MatLinearMap::from_fn(x.field(), y.rows(), x.rows(), |a| &(x * &a.transpose()) * y)
    }

    /// `a ↦ c·φ(a)` for a fixed `m × m` matrix `c`.
    pub fn left_multiply(&self, c: &ExactMatrix) -> MatLinearMap {
        MatLinearMap::from_fn(self.field(), self.n, self.m, |a| {
            c * &self.apply(a).expect("source size")
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MatLinearMap) -> Result<MatLinearMap, PreserverError> {
        if inner.m != self.n {
            return Err(PreserverError::SizeMismatch(format!(
                "cannot compose M_{} -> M_{} after M_{} -> M_{}",
                self.n, self.m, inner.n, inner.m
            )));
        }
        Ok(MatLinearMap {
            n: inner.n,
            m: self.m,
            coeffs: self.coeffs.try_mul(&inner.coeffs)?,
        })
    }

    pub fn scale(&self, s: &Scalar) -> MatLinearMap {
        MatLinearMap {
            n: self.n,
            m: self.m,
            coeffs: self.coeffs.scale(s),
        }
    }

    /// `a ↦ diag(f(a), g(a))`.
    pub fn direct_sum(&self, other: &MatLinearMap) -> Result<MatLinearMap, PreserverError> {
        MatLinearMap::direct_sum_all(&[self.clone(), other.clone()])
    }

    /// `a ↦ diag(f₁(a), …, f_k(a))`.
    pub fn direct_sum_all(parts: &[MatLinearMap]) -> Result<MatLinearMap, PreserverError> {
        let first = parts
            .first()
            .ok_or_else(|| PreserverError::BadParameters("empty direct sum".into()))?;
        if parts.iter().any(|p| p.n != first.n || p.field() != first.field()) {
            return Err(PreserverError::SizeMismatch(
                "direct summands must share source size and field".into(),
            ));
        }
        let m = parts.iter().map(|p| p.m).sum();
        Ok(MatLinearMap::from_fn(first.field(), first.n, m, |a| {
            let blocks: Vec<ExactMatrix> = parts.iter().map(|p| p.apply(a).expect("source size")).collect();
            ExactMatrix::block_diag(&blocks)
        }))
    }
}

/// Row-major index of `e_p·e_q` among the matrix units of `M_n`, or `None`
/// when the product is zero (`e_{ij}e_{kl} = δ_{jk}e_{il}`).
pub(crate) fn unit_product(n: usize, p: usize, q: usize) -> Option<usize> {
    (p % n == q / n).then(|| (p / n) * n + q % n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_ints(Field::Q, rows)
    }

    #[test]
    fn apply_examples() {
        let a = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(MatLinearMap::identity(Field::Q, 2).apply(&a).unwrap(), a);
        let e12 = ExactMatrix::unit(Field::Q, 2, 0, 1);
        let e21 = ExactMatrix::unit(Field::Q, 2, 1, 0);
        assert_eq!(MatLinearMap::transpose_map(Field::Q, 2).apply(&e12).unwrap(), e21);
        let e11 = ExactMatrix::unit(Field::Q, 2, 0, 0);
        assert_eq!(
            MatLinearMap::embed_canonical(Field::Q, 2, 2).apply(&e11).unwrap(),
            e11.kron_identity(2)
        );
        assert!(MatLinearMap::identity(Field::Q, 2).apply(&ExactMatrix::identity(Field::Q, 3)).is_err());
    }

    #[test]
    fn vectorization_convention() {
        // column (i-1)·n + (j-1) holds vec(φ(e_ij))
        let t = MatLinearMap::transpose_map(Field::Q, 2);
        let col1 = t.image_of_unit(0, 1);
        assert_eq!(col1, ExactMatrix::unit(Field::Q, 2, 1, 0));
        assert!(t.coeffs().get(2, 1).is_one());
    }

    #[test]
    fn unit_products() {
        // e12·e21 = e11, e21·e12 = e22, e11·e22 = 0 in M_2
        assert_eq!(unit_product(2, 1, 2), Some(0));
        assert_eq!(unit_product(2, 2, 1), Some(3));
        assert_eq!(unit_product(2, 0, 3), None);
    }

    #[test]
    fn constructor_identities() {
        let id = MatLinearMap::identity(Field::Q, 3);
        assert_eq!(MatLinearMap::conjugation_map(&ExactMatrix::identity(Field::Q, 3)).unwrap(), id);
        let t = MatLinearMap::transpose_map(Field::Q, 3);
        assert_eq!(t.compose(&t).unwrap(), id);
        assert_eq!(
            MatLinearMap::conjugation_map(&q(&[&[1, 1], &[1, 1]])),
            Err(PreserverError::SingularConjugator)
        );
    }

    #[test]
    fn direct_sum_of_identity_and_transpose() {
        let f = MatLinearMap::identity(Field::Q, 2)
            .direct_sum(&MatLinearMap::transpose_map(Field::Q, 2))
            .unwrap();
        let a = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            f.apply(&a).unwrap(),
            ExactMatrix::block_diag(&[a.clone(), a.transpose()])
        );
        assert!(f.is_unital());
    }

    #[test]
    fn left_right_forms() {
        let x = q(&[&[1, 1], &[0, 1]]);
        let y = q(&[&[2, 0], &[1, 1]]);
        let a = q(&[&[0, 5], &[-1, 3]]);
        assert_eq!(MatLinearMap::left_right(&x, &y).apply(&a).unwrap(), &(&x * &a) * &y);
        assert_eq!(
            MatLinearMap::left_right_transpose(&x, &y).apply(&a).unwrap(),
            &(&x * &a.transpose()) * &y
        );
    }
}
