//! Clifford algebras of the standard form in even dimension, realized on
//! `M_{2^k}(Q(i))` by the Jordan–Wigner construction.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Element, TowerDescriptor};
use crate::exactla::{ExactMatrix, Field, RowReducer, Scalar};

/// Default upper limit on the stage index.
pub const DEFAULT_K_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("stage {k} is outside 1..={k_max}")]
    StageTooLarge { k: usize, k_max: usize },
}

/// The `2k` generators of `Cl_{2k}` as matrices in `M_{2^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordStage {
    k: usize,
    gammas: Vec<ExactMatrix>,
}

fn pauli_x() -> ExactMatrix {
    ExactMatrix::from_ints(Field::Qi, &[&[0, 1], &[1, 0]])
}

fn pauli_y() -> ExactMatrix {
    let i = Scalar::i();
    let zero = Field::Qi.zero();
    ExactMatrix::from_rows(Field::Qi, vec![vec![zero.clone(), -&i], vec![i, zero]]).expect("2x2")
}

fn pauli_z() -> ExactMatrix {
    ExactMatrix::from_ints(Field::Qi, &[&[1, 0], &[0, -1]])
}

fn kron_all(factors: &[ExactMatrix]) -> ExactMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kron(f))
}

impl CliffordStage {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn gammas(&self) -> &[ExactMatrix] {
        &self.gammas
    }

    pub fn size(&self) -> usize {
        1 << self.k
    }

    /// Every `(a, b, γ_aγ_b + γ_bγ_a − 2δ_{ab}·I)`; all entries are zero when
    /// the relations hold.
    pub fn anticommutator_defects(&self) -> Vec<(usize, usize, ExactMatrix)> {
        let id = ExactMatrix::identity(Field::Qi, self.size());
        let two = Scalar::from_int(Field::Qi, 2);
        let mut out = Vec::new();
        for a in 0..self.gammas.len() {
            for b in a..self.gammas.len() {
                let (ga, gb) = (&self.gammas[a], &self.gammas[b]);
                let mut anti = &(ga * gb) + &(gb * ga);
                if a == b {
                    anti = &anti - &id.scale(&two);
                }
                out.push((a, b, anti));
            }
        }
        out
    }

    pub fn relations_hold(&self) -> bool {
        self.anticommutator_defects().iter().all(|(_, _, d)| d.is_zero())
    }

    /// Generator `γ_a` (0-based) as an element of the Clifford tower.
    pub fn element(&self, a: usize) -> Element {
        Element::new(Arc::new(clifford_descriptor()), self.k, self.gammas[a].clone())
            .expect("stage size 2^k")
    }
}

/// `γ_{2j−1} = Z^{⊗(j−1)} ⊗ X ⊗ I^{⊗(k−j)}` and `γ_{2j} = Z^{⊗(j−1)} ⊗ Y ⊗ I^{⊗(k−j)}`.
pub fn clifford_generators(k: usize) -> Result<CliffordStage, CliffordError> {
    clifford_generators_bounded(k, DEFAULT_K_MAX)
}

pub fn clifford_generators_bounded(k: usize, k_max: usize) -> Result<CliffordStage, CliffordError> {
    if k == 0 || k > k_max {
        return Err(CliffordError::StageTooLarge { k, k_max });
    }
    let id2 = ExactMatrix::identity(Field::Qi, 2);
    let mut gammas = Vec::with_capacity(2 * k);
    for j in 1..=k {
        for middle in [pauli_x(), pauli_y()] {
            let mut factors = vec![pauli_z(); j - 1];
            factors.push(middle);
            factors.extend(std::iter::repeat_n(id2.clone(), k - j));
            gammas.push(kron_all(&factors));
        }
    }
    Ok(CliffordStage { k, gammas })
}

/// Dimension of the span of all ordered products `γ_{a₁}⋯γ_{a_s}`, `a₁ < ⋯ < a_s`.
pub fn generated_dimension(stage: &CliffordStage) -> usize {
    let g = stage.gammas.len();
    let size = stage.size();
    let mut reducer = RowReducer::new(Field::Qi, size * size);
    for subset in 0u64..(1 << g) {
        let mut prod = ExactMatrix::identity(Field::Qi, size);
        for (a, gamma) in stage.gammas.iter().enumerate() {
            if subset & (1 << a) != 0 {
                prod = &prod * gamma;
            }
        }
        reducer.push_homogeneous(prod.entries().to_vec());
    }
    reducer.rank()
}

fn clifford_descriptor() -> TowerDescriptor {
    TowerDescriptor::new(2, vec![], vec![2]).expect("valid descriptor")
}

/// The tower `M_2 ⊂ M_4 ⊂ M_8 ⊂ ⋯` whose stage `k` holds `Cl_{2k}`, with
/// stages materialized up to `k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTower {
    descriptor: Arc<TowerDescriptor>,
    k_max: usize,
}

impl CliffordTower {
    pub fn descriptor(&self) -> &Arc<TowerDescriptor> {
        &self.descriptor
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn stage(&self, k: usize) -> Result<CliffordStage, CliffordError> {
        clifford_generators_bounded(k, self.k_max)
    }
}

/// Panics if `k_max = 0`.
pub fn clifford_tower(k_max: usize) -> CliffordTower {
    assert!(k_max >= 1, "a Clifford tower needs at least one stage");
    CliffordTower {
        descriptor: Arc::new(clifford_descriptor()),
        k_max,
    }
}
