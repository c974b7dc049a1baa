use super::{ExactMatrix, Field, LinalgError, Scalar};

/// Full solution set of `A·x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    /// `x = particular + Σ cₖ·nullspace[k]`.
    Affine {
        particular: Vec<Scalar>,
        nullspace: Vec<Vec<Scalar>>,
    },
}

impl Solution {
    pub fn is_unique(&self) -> bool {
        matches!(self, Solution::Affine { nullspace, .. } if nullspace.is_empty())
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            Solution::Inconsistent => None,
            Solution::Affine { nullspace, .. } => Some(nullspace.len()),
        }
    }
}

/// Solves `system · x = rhs` for a column vector `rhs`.
pub fn solve_linear(system: &ExactMatrix, rhs: &ExactMatrix) -> Result<Solution, LinalgError> {
    if rhs.cols() != 1 || rhs.rows() != system.rows() {
        return Err(LinalgError::SizeMismatch {
            left: (system.rows(), system.cols()),
            right: (rhs.rows(), rhs.cols()),
        });
    }
    if system.field() != rhs.field() {
        return Err(LinalgError::FieldMismatch);
    }
    let n = system.cols();
    let mut reducer = RowReducer::new(system.field(), n);
    for i in 0..system.rows() {
        let mut row = system.row(i).to_vec();
        row.push(rhs.get(i, 0).clone());
        reducer.push(row);
    }
    Ok(reducer.solve())
}

/// Accumulates linear equations one at a time, keeping them in echelon form.
///
/// Each pushed row has `unknowns + 1` entries, the last being the right-hand
/// side. Rows that reduce to zero are dropped on the spot, so memory stays
/// bounded by the rank however many equations are pushed. Once the rank
/// reaches the number of unknowns, later rows are only checked against the
/// unique solution instead of being reduced.
#[derive(Debug, Clone)]
pub struct RowReducer {
    field: Field,
    unknowns: usize,
    // (pivot column, row with 1 at the pivot and 0 at every earlier pivot column)
    basis: Vec<(usize, Vec<Scalar>)>,
    inconsistent: bool,
    unique: Option<Vec<Scalar>>,
}

impl RowReducer {
    pub fn new(field: Field, unknowns: usize) -> RowReducer {
        RowReducer {
            field,
            unknowns,
            basis: Vec::new(),
            inconsistent: false,
            unique: None,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Adds one equation; returns whether it raised the rank.
    pub fn push(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.unknowns + 1, "equation width mismatch");
        if self.basis.len() == self.unknowns {
            self.check_determined(&row);
            return false;
        }
        for (col, pivot_row) in &self.basis {
            if row[*col].is_zero() {
                continue;
            }
            let factor = row[*col].clone();
            for (x, p) in row.iter_mut().zip(pivot_row).skip(*col) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        let Some(lead) = row[..self.unknowns].iter().position(|x| !x.is_zero()) else {
            if !row[self.unknowns].is_zero() {
                self.inconsistent = true;
            }
            return false;
        };
        let inv = row[lead].inv().expect("nonzero lead");
        for x in row.iter_mut().skip(lead) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.basis.push((lead, row));
        true
    }

    /// Coefficient parts of the current echelon rows; they span the row space
    /// of everything pushed so far.
    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis
            .iter()
            .map(|(_, row)| row[..self.unknowns].to_vec())
            .collect()
    }

    fn check_determined(&mut self, row: &[Scalar]) {
        if self.inconsistent {
            return;
        }
        if self.unique.is_none() {
            let Solution::Affine { particular, .. } = self.clone().solve() else {
                unreachable!("consistent by the check above");
            };
            self.unique = Some(particular);
        }
        let x = self.unique.as_ref().expect("just set");
        let mut lhs = self.field.zero();
        for (a, v) in row.iter().zip(x) {
            if !a.is_zero() && !v.is_zero() {
                lhs = &lhs + &(a * v);
            }
        }
        if lhs != row[self.unknowns] {
            self.inconsistent = true;
        }
    }

    /// Pushes a homogeneous equation given by its coefficients only.
    pub fn push_homogeneous(&mut self, mut coeffs: Vec<Scalar>) -> bool {
        coeffs.push(self.field.zero());
        self.push(coeffs)
    }

    pub fn solve(mut self) -> Solution {
        if self.inconsistent {
            return Solution::Inconsistent;
        }
        self.basis.sort_by_key(|(c, _)| *c);
        // back-substitute into full reduced form
        for k in (0..self.basis.len()).rev() {
            let (col, pivot_row) = self.basis[k].clone();
            for (_, row) in self.basis.iter_mut().take(k) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    if !p.is_zero() {
                        *x = &*x - &(&factor * p);
                    }
                }
            }
        }
        let pivots: Vec<usize> = self.basis.iter().map(|(c, _)| *c).collect();
        particular_and_kernel(self.field, self.unknowns, &pivots, |r, c| {
            self.basis[r].1[c].clone()
        })
    }
}

/// Basis of `{x : system · x = 0}`.
pub fn nullspace(system: &ExactMatrix) -> Vec<Vec<Scalar>> {
    let rhs = ExactMatrix::zeros(system.field(), system.rows(), 1);
    match solve_linear(system, &rhs).expect("shapes agree by construction") {
        Solution::Affine { nullspace, .. } => nullspace,
        Solution::Inconsistent => unreachable!("homogeneous systems are consistent"),
    }
}

fn particular_and_kernel(
    field: Field,
    n: usize,
    pivots: &[usize],
    entry: impl Fn(usize, usize) -> Scalar,
) -> Solution {
    let mut particular = vec![field.zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = entry(r, n);
    }
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    let mut nullspace = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); n];
        v[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -&entry(r, free);
        }
        nullspace.push(v);
    }
    Solution::Affine {
        particular,
        nullspace,
    }
}
