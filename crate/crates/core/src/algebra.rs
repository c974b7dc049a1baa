//! Countable-dimensional unital locally matrix algebras as embedding towers
//! `M_{n₁} ⊂ M_{n₂} ⊂ ⋯` with the block-scalar embedding `a ↦ a ⊗ I_k`.

use std::sync::Arc;

use thiserror::Error;

use crate::exactla::{ExactMatrix, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid tower: {0}")]
    BadTower(String),
    #[error("stage indices start at 1")]
    StageZero,
    #[error("stage {0} size overflows")]
    StageTooLarge(usize),
    #[error("cannot promote from stage {from} down to stage {to}")]
    StageBelowCurrent { from: usize, to: usize },
    #[error("elements belong to different towers")]
    TowerMismatch,
    #[error("matrix is {rows}x{cols} but stage {stage} has size {size}")]
    WrongSize {
        stage: usize,
        size: usize,
        rows: usize,
        cols: usize,
    },
    #[error("elements live over different fields")]
    FieldMismatch,
}

/// Finite description of a tower: stage 1 has size `n1`, and stage `i + 1` is
/// stage `i` times the `i`-th multiplier of `prefix ++ cycle ++ cycle ++ …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerDescriptor {
    n1: u64,
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

impl TowerDescriptor {
    pub fn new(n1: u64, prefix: Vec<u64>, cycle: Vec<u64>) -> Result<TowerDescriptor, AlgebraError> {
        if n1 == 0 {
            return Err(AlgebraError::BadTower("n1 must be positive".into()));
        }
        if cycle.is_empty() {
            return Err(AlgebraError::BadTower("cycle must be nonempty".into()));
        }
        if prefix.iter().chain(&cycle).any(|&m| m == 0) {
            return Err(AlgebraError::BadTower("multipliers must be >= 1".into()));
        }
        Ok(TowerDescriptor { n1, prefix, cycle })
    }

    /// The finite tower `M_n ⊂ M_n ⊂ ⋯`.
    pub fn constant(n: u64) -> Result<TowerDescriptor, AlgebraError> {
        TowerDescriptor::new(n, vec![], vec![1])
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    /// Multiplier taking stage `i` to stage `i + 1` (1-based).
    pub fn multiplier(&self, i: usize) -> u64 {
        let idx = i - 1;
        if idx < self.prefix.len() {
            self.prefix[idx]
        } else {
            self.cycle[(idx - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Size `n_i` of stage `i` (1-based).
    pub fn stage_size(&self, stage: usize) -> Result<usize, AlgebraError> {
        if stage == 0 {
            return Err(AlgebraError::StageZero);
        }
        let mut n = self.n1;
        for i in 1..stage {
            n = n
                .checked_mul(self.multiplier(i))
                .ok_or(AlgebraError::StageTooLarge(stage))?;
        }
        usize::try_from(n).map_err(|_| AlgebraError::StageTooLarge(stage))
    }
}

/// An element of the limit algebra, held at a concrete stage.
///
/// Equality compares promotions to the larger of the two stages.
#[derive(Debug, Clone)]
pub struct Element {
    tower: Arc<TowerDescriptor>,
    stage: usize,
    mat: ExactMatrix,
}

impl Element {
    pub fn new(tower: Arc<TowerDescriptor>, stage: usize, mat: ExactMatrix) -> Result<Element, AlgebraError> {
        let size = tower.stage_size(stage)?;
        if mat.rows() != size || mat.cols() != size {
            return Err(AlgebraError::WrongSize {
                stage,
                size,
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        Ok(Element { tower, stage, mat })
    }

    pub fn identity(tower: Arc<TowerDescriptor>, stage: usize, field: Field) -> Result<Element, AlgebraError> {
        let n = tower.stage_size(stage)?;
        Element::new(tower, stage, ExactMatrix::identity(field, n))
    }

    pub fn zero(tower: Arc<TowerDescriptor>, stage: usize, field: Field) -> Result<Element, AlgebraError> {
        let n = tower.stage_size(stage)?;
        Element::new(tower, stage, ExactMatrix::zeros(field, n, n))
    }

    pub fn tower(&self) -> &Arc<TowerDescriptor> {
        &self.tower
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.mat
    }

    pub fn field(&self) -> Field {
        self.mat.field()
    }

    /// Size of the element's stage.
    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    /// Moves the element up to stage `to` via `a ↦ a ⊗ I_k`.
    pub fn promote(&self, to: usize) -> Result<Element, AlgebraError> {
        if to < self.stage {
            return Err(AlgebraError::StageBelowCurrent {
                from: self.stage,
                to,
            });
        }
        let size = self.tower.stage_size(to)?;
        let k = size / self.size();
        Ok(Element {
            tower: Arc::clone(&self.tower),
            stage: to,
            mat: if k == 1 {
                self.mat.clone()
            } else {
                self.mat.kron_identity(k)
            },
        })
    }

    fn common_stage(&self, rhs: &Element) -> Result<(ExactMatrix, ExactMatrix, usize), AlgebraError> {
        if *self.tower != *rhs.tower {
            return Err(AlgebraError::TowerMismatch);
        }
        if self.field() != rhs.field() {
            return Err(AlgebraError::FieldMismatch);
        }
        let stage = self.stage.max(rhs.stage);
        Ok((
            self.promote(stage)?.mat,
            rhs.promote(stage)?.mat,
            stage,
        ))
    }

    pub fn add(&self, rhs: &Element) -> Result<Element, AlgebraError> {
        let (a, b, stage) = self.common_stage(rhs)?;
        Ok(Element {
            tower: Arc::clone(&self.tower),
            stage,
            mat: &a + &b,
        })
    }

    pub fn sub(&self, rhs: &Element) -> Result<Element, AlgebraError> {
        let (a, b, stage) = self.common_stage(rhs)?;
        Ok(Element {
            tower: Arc::clone(&self.tower),
            stage,
            mat: &a - &b,
        })
    }

    pub fn mul(&self, rhs: &Element) -> Result<Element, AlgebraError> {
        let (a, b, stage) = self.common_stage(rhs)?;
        Ok(Element {
            tower: Arc::clone(&self.tower),
            stage,
            mat: &a * &b,
        })
    }

    /// Entrywise transpose at the element's own stage.
    pub fn transpose(&self) -> Element {
        Element {
            tower: Arc::clone(&self.tower),
            stage: self.stage,
            mat: self.mat.transpose(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        !self.mat.det().expect("elements are square").is_zero()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        match self.common_stage(other) {
            Ok((a, b, _)) => a == b,
            Err(_) => false,
        }
    }
}

impl Eq for Element {}

pub fn promote(a: &Element, stage: usize) -> Result<Element, AlgebraError> {
    a.promote(stage)
}

pub fn elem_add(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    a.add(b)
}

pub fn elem_mul(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    a.mul(b)
}

pub fn transpose_elem(a: &Element) -> Element {
    a.transpose()
}

pub fn is_invertible(a: &Element) -> bool {
    a.is_invertible()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower() -> Arc<TowerDescriptor> {
        Arc::new(TowerDescriptor::new(2, vec![3], vec![2]).unwrap())
    }

    fn unit(t: &Arc<TowerDescriptor>, stage: usize, i: usize, j: usize) -> Element {
        let n = t.stage_size(stage).unwrap();
        Element::new(Arc::clone(t), stage, ExactMatrix::unit(Field::Q, n, i, j)).unwrap()
    }

    #[test]
    fn stage_sizes() {
        let t = tower();
        let sizes: Vec<usize> = (1..=5).map(|i| t.stage_size(i).unwrap()).collect();
        assert_eq!(sizes, vec![2, 6, 12, 24, 48]);
        assert_eq!(t.stage_size(0), Err(AlgebraError::StageZero));
        assert!(TowerDescriptor::new(2, vec![], vec![]).is_err());
        assert!(TowerDescriptor::new(0, vec![], vec![2]).is_err());
        assert!(TowerDescriptor::new(2, vec![0], vec![2]).is_err());
    }

    #[test]
    fn promote_identity_and_units() {
        let t = tower();
        let one = Element::identity(Arc::clone(&t), 1, Field::Q).unwrap();
        let up = one.promote(3).unwrap();
        assert!(up.matrix().is_identity());
        assert_eq!(up.size(), 12);

        let t2 = Arc::new(TowerDescriptor::new(2, vec![], vec![2]).unwrap());
        let e11 = unit(&t2, 1, 0, 0).promote(2).unwrap();
        assert_eq!(e11.matrix().rank(), 2);
        assert_eq!(e11.matrix(), &ExactMatrix::unit(Field::Q, 2, 0, 0).kron_identity(2));

        assert_eq!(
            unit(&t, 2, 0, 0).promote(1),
            Err(AlgebraError::StageBelowCurrent { from: 2, to: 1 })
        );
    }

    #[test]
    fn mixed_stage_product() {
        // e12 at stage 1 times e21 at stage 2 (the promotion of the stage-1 e21)
        let t = tower();
        let e12 = unit(&t, 1, 0, 1);
        let e21 = unit(&t, 1, 1, 0).promote(2).unwrap();
        let prod = elem_mul(&e12, &e21).unwrap();
        assert_eq!(prod.stage(), 2);
        assert_eq!(prod.matrix(), &ExactMatrix::unit(Field::Q, 2, 0, 0).kron_identity(3));
    }

    #[test]
    fn identities_and_equality() {
        let t = tower();
        let a = unit(&t, 1, 0, 1);
        let zero = Element::zero(Arc::clone(&t), 2, Field::Q).unwrap();
        let one = Element::identity(Arc::clone(&t), 3, Field::Q).unwrap();
        assert_eq!(elem_add(&a, &zero).unwrap(), a);
        assert_eq!(elem_mul(&one, &a).unwrap(), a);
        assert_eq!(a.promote(4).unwrap(), a);
        assert_ne!(a, unit(&t, 1, 1, 0));
    }

    #[test]
    fn tower_mismatch() {
        let a = unit(&tower(), 1, 0, 0);
        let other = Arc::new(TowerDescriptor::new(2, vec![], vec![2]).unwrap());
        let b = unit(&other, 1, 0, 0);
        assert_eq!(a.add(&b), Err(AlgebraError::TowerMismatch));
    }

    #[test]
    fn transpose_commutes_with_promotion() {
        let t = tower();
        let n = t.stage_size(2).unwrap();
        let mut m = ExactMatrix::zeros(Field::Q, n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, crate::exactla::Scalar::from_int(Field::Q, (i * 7 + j * 3) as i64 % 5));
            }
        }
        let a = Element::new(Arc::clone(&t), 2, m).unwrap();
        assert_eq!(
            transpose_elem(&a.promote(4).unwrap()),
            transpose_elem(&a).promote(4).unwrap()
        );
        assert_eq!(transpose_elem(&transpose_elem(&a)), a);
    }

    #[test]
    fn invertibility() {
        let t = tower();
        assert!(is_invertible(&Element::identity(Arc::clone(&t), 2, Field::Q).unwrap()));
        assert!(!is_invertible(&unit(&t, 1, 0, 0)));
    }

    #[test]
    fn wrong_size_rejected() {
        let t = tower();
        let err = Element::new(Arc::clone(&t), 2, ExactMatrix::identity(Field::Q, 4)).unwrap_err();
        assert!(matches!(err, AlgebraError::WrongSize { size: 6, .. }));
    }
}
