use std::fmt;

use crate::exactla::{ExactMatrix, Field, RowReducer, Scalar, Solution};
use crate::invariants::{normalized_det_matrix, radical_eq, RadicalValue};
use crate::steinitz::is_prime;

use super::verdict::{jordan_check, Verdict, Witness};
use super::map::unit_product;
use super::{MatLinearMap, PreserverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Hom,
    Antihom,
    Mixed,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Hom => "hom",
            Kind::Antihom => "antihom",
            Kind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which decomposition pipeline [`frobenius_form`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusMode {
    Rank,
    Det,
}

/// Evidence for `φ = φ₁ + φ₂` with `φ₁ = e₁·φ` multiplicative and
/// `φ₂ = e₂·φ` antimultiplicative, and, when known, `φ(a) = X·ψ(a)·Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionWitness {
    pub e1: ExactMatrix,
    pub e2: ExactMatrix,
    pub kind: Kind,
    pub u: Option<ExactMatrix>,
    pub x: Option<ExactMatrix>,
    pub y: Option<ExactMatrix>,
    /// A pair with `φ(xy) ≠ φ(x)φ(y)`.
    pub hom_fail: Option<(ExactMatrix, ExactMatrix)>,
    /// A pair with `φ(xy) ≠ φ(y)φ(x)`.
    pub antihom_fail: Option<(ExactMatrix, ExactMatrix)>,
}

fn units(field: Field, n: usize) -> Vec<ExactMatrix> {
    (0..n * n).map(|k| ExactMatrix::unit(field, n, k / n, k % n)).collect()
}

/// `φ(e_p·e_q)` for matrix units, using `e_{ij}e_{kl} = δ_{jk}e_{il}`.
fn image_of_product(map: &MatLinearMap, imgs: &[ExactMatrix], p: usize, q: usize) -> ExactMatrix {
    match unit_product(map.source_size(), p, q) {
        Some(k) => imgs[k].clone(),
        None => ExactMatrix::zeros(map.field(), map.target_size(), map.target_size()),
    }
}

/// First basis pair with `φ(xy) ≠ φ(x)φ(y)` (or `≠ φ(y)φ(x)` when `reversed`).
pub fn find_multiplicativity_failure(map: &MatLinearMap, reversed: bool) -> Option<(ExactMatrix, ExactMatrix)> {
    let field = map.field();
    let n = map.source_size();
    let us = units(field, n);
    let imgs = map.unit_images();
    for p in 0..us.len() {
        for q in 0..us.len() {
            let lhs = image_of_product(map, &imgs, p, q);
            let rhs = if reversed {
                &imgs[q] * &imgs[p]
            } else {
                &imgs[p] * &imgs[q]
            };
            if lhs != rhs {
                return Some((us[p].clone(), us[q].clone()));
            }
        }
    }
    None
}

/// Column space of a family of `m × m` matrices, as a list of spanning columns.
fn column_space(field: Field, m: usize, mats: &[ExactMatrix]) -> Vec<Vec<Scalar>> {
    let mut reducer = RowReducer::new(field, m);
    for d in mats {
        if d.is_zero() {
            continue;
        }
        for c in 0..m {
            let col: Vec<Scalar> = (0..m).map(|r| d.get(r, c).clone()).collect();
            if col.iter().any(|x| !x.is_zero()) {
                reducer.push_homogeneous(col);
            }
            if reducer.rank() == m {
                return reducer.basis_rows();
            }
        }
    }
    reducer.basis_rows()
}

/// Splits a unital Jordan map `φ: M_n → M_m` into a homomorphic and an
/// antihomomorphic part.
///
/// The central idempotent `E = e₁` is found as the unique solution of the linear system
/// - `E·φ(e_{ij}) = φ(e_{ij})·E` for all matrix units,
/// - `E·(φ(xy) − φ(x)φ(y)) = 0` for all pairs of matrix units,
/// - `(I − E)·(φ(xy) − φ(y)φ(x)) = 0` for all pairs of matrix units,
///
/// and idempotency is checked afterwards rather than imposed. The two families
/// of product constraints are compressed to the column spaces of the defect
/// matrices, which leaves the solution set unchanged.
pub fn jr_decompose(map: &MatLinearMap) -> Result<DecompositionWitness, PreserverError> {
    if !map.is_unital() {
        return Err(PreserverError::NotUnital);
    }
    if let Verdict::CertifiedFail(Witness::Pair(x, y)) = jordan_check(map) {
        return Err(PreserverError::NotJordan(Box::new((x, y))));
    }
    split_certified(map)
}

/// [`jr_decompose`] for a map already known to be unital and Jordan.
fn split_certified(map: &MatLinearMap) -> Result<DecompositionWitness, PreserverError> {
    let field = map.field();
    let n = map.source_size();
    let m = map.target_size();
    let imgs = map.unit_images();

    let mut hom_defects = Vec::new();
    let mut antihom_defects = Vec::new();
    for p in 0..n * n {
        for q in 0..n * n {
            let prod = image_of_product(map, &imgs, p, q);
            hom_defects.push(&prod - &(&imgs[p] * &imgs[q]));
            antihom_defects.push(&prod - &(&imgs[q] * &imgs[p]));
        }
    }
    let hom_cols = column_space(field, m, &hom_defects);
    let antihom_cols = column_space(field, m, &antihom_defects);

    let e1 = match product_determined(field, m, &hom_cols, &antihom_cols) {
        Some(e) => {
            // the product constraints alone fix E; it must also commute with the image
            if imgs.iter().any(|a| &(&e * a) != &(a * &e)) {
                return Err(PreserverError::NoSolution);
            }
            e
        }
        None => solve_split_system(field, m, &imgs, &hom_cols, &antihom_cols)?,
    };
    if &e1 * &e1 != e1 {
        return Err(PreserverError::NoIdempotentSolution(Box::new(e1)));
    }
    let e2 = &ExactMatrix::identity(field, m) - &e1;
    verify_split(map, &e1, &e2)?;

    let kind = if e2.is_zero() {
        Kind::Hom
    } else if e1.is_zero() {
        Kind::Antihom
    } else {
        Kind::Mixed
    };
    // verify_split has shown the pure kinds to be (anti)multiplicative
    Ok(DecompositionWitness {
        e1,
        e2,
        kind,
        u: None,
        x: None,
        y: None,
        hom_fail: (kind != Kind::Hom).then(|| find_multiplicativity_failure(map, false)).flatten(),
        antihom_fail: (kind != Kind::Antihom).then(|| find_multiplicativity_failure(map, true)).flatten(),
    })
}

/// When the two column spaces together form a basis `C` of the target space,
/// `E·C = [0 | B′]` has the unique solution `E = [0 | B′]·C⁻¹`.
fn product_determined(field: Field, m: usize, hom_cols: &[Vec<Scalar>], antihom_cols: &[Vec<Scalar>]) -> Option<ExactMatrix> {
    if hom_cols.len() + antihom_cols.len() != m {
        return None;
    }
    let mut c = ExactMatrix::zeros(field, m, m);
    let mut target = ExactMatrix::zeros(field, m, m);
    for (k, col) in hom_cols.iter().chain(antihom_cols).enumerate() {
        for (r, v) in col.iter().enumerate() {
            c.set(r, k, v.clone());
            if k >= hom_cols.len() {
                target.set(r, k, v.clone());
            }
        }
    }
    let c_inv = c.inverse().ok()?;
    Some(&target * &c_inv)
}

/// The full split system, one unknown per entry of `E`.
fn solve_split_system(
    field: Field,
    m: usize,
    imgs: &[ExactMatrix],
    hom_cols: &[Vec<Scalar>],
    antihom_cols: &[Vec<Scalar>],
) -> Result<ExactMatrix, PreserverError> {
    let idx = |r: usize, c: usize| r * m + c;
    let mut system = RowReducer::new(field, m * m);
    // E·col = 0 and E·col = col, one equation per output row r
    for (cols, inhomogeneous) in [(hom_cols, false), (antihom_cols, true)] {
        for col in cols.iter() {
            for r in 0..m {
                let mut row = vec![field.zero(); m * m + 1];
                for (k, v) in col.iter().enumerate() {
                    row[idx(r, k)] = v.clone();
                }
                if inhomogeneous {
                    row[m * m] = col[r].clone();
                }
                system.push(row);
            }
        }
    }
    for a in imgs {
        if a.is_zero() {
            continue;
        }
        for r in 0..m {
            for c in 0..m {
                let mut row = vec![field.zero(); m * m + 1];
                for k in 0..m {
                    let akc = a.get(k, c);
                    if !akc.is_zero() {
                        row[idx(r, k)] = &row[idx(r, k)] + akc;
                    }
                    let ark = a.get(r, k);
                    if !ark.is_zero() {
                        row[idx(k, c)] = &row[idx(k, c)] - ark;
                    }
                }
                system.push(row);
            }
        }
    }

    match system.solve() {
        Solution::Inconsistent => return Err(PreserverError::NoSolution),
        Solution::Affine {
            particular,
            nullspace,
        } => {
            if !nullspace.is_empty() {
                return Err(PreserverError::AmbiguousSplit {
                    particular: ExactMatrix::from_vec(field, m, m, particular),
                    directions: nullspace
                        .into_iter()
                        .map(|v| ExactMatrix::from_vec(field, m, m, v))
                        .collect(),
                });
            }
            Ok(ExactMatrix::from_vec(field, m, m, particular))
        }
    }
}

/// Re-checks every postcondition of a split on all basis pairs.
pub fn verify_split(map: &MatLinearMap, e1: &ExactMatrix, e2: &ExactMatrix) -> Result<(), PreserverError> {
    let field = map.field();
    let m = map.target_size();
    let n = map.source_size();
    let fail = |what: &str| Err(PreserverError::VerificationFailed(what.to_string()));
    if &(e1 + e2) != &ExactMatrix::identity(field, m) {
        return fail("e1 + e2 != I");
    }
    if &(e1 * e1) != e1 || &(e2 * e2) != e2 {
        return fail("e1 or e2 is not idempotent");
    }
    if !(e1 * e2).is_zero() || !(e2 * e1).is_zero() {
        return fail("e1 and e2 are not orthogonal");
    }
    let imgs = map.unit_images();
    for a in &imgs {
        if &(e1 * a) != &(a * e1) {
            return fail("e1 does not commute with the image");
        }
    }
    // e₁φ(xy) = (e₁φ(x))φ(y) and e₂φ(xy) = (e₂φ(y))φ(x), with φ(xy) read off the unit images
    let left1: Vec<ExactMatrix> = imgs.iter().map(|a| e1 * a).collect();
    let left2: Vec<ExactMatrix> = imgs.iter().map(|a| e2 * a).collect();
    let zero = ExactMatrix::zeros(field, m, m);
    for p in 0..n * n {
        for q in 0..n * n {
            let (prod1, prod2) = match unit_product(n, p, q) {
                Some(k) => (&left1[k], &left2[k]),
                None => (&zero, &zero),
            };
            if prod1 != &(&left1[p] * &imgs[q]) {
                return fail("e1-part is not multiplicative");
            }
            if prod2 != &(&left2[q] * &imgs[p]) {
                return fail("e2-part is not antimultiplicative");
            }
        }
    }
    Ok(())
}

/// Finds an invertible `U` with `ψ(a) = U·a·U⁻¹` (hom) or `ψ(a) = U·aᵗ·U⁻¹`
/// (antihom) by solving `ψ(e_{ij})·U = U·ê_{ij}` over all matrix units.
/// The first nonzero entry of the returned `U` is 1.
pub fn recover_inner(map: &MatLinearMap, kind: Kind) -> Result<ExactMatrix, PreserverError> {
    let n = map.source_size();
    if map.target_size() != n {
        return Err(PreserverError::SizeMismatch(format!(
            "conjugator recovery needs n = m (got {n} and {})",
            map.target_size()
        )));
    }
    if kind == Kind::Mixed {
        return Err(PreserverError::MixedKindOnBijection);
    }
    let field = map.field();
    let idx = |r: usize, c: usize| r * n + c;
    let mut system = RowReducer::new(field, n * n);
    for i in 0..n {
        for j in 0..n {
            let p = map.image_of_unit(i, j);
            // U·ê_{ij} has column (j or i) equal to column (i or j) of U
            let (src, dst) = match kind {
                Kind::Hom => (i, j),
                _ => (j, i),
            };
            for r in 0..n {
                for c in 0..n {
                    let mut row = vec![field.zero(); n * n];
                    for k in 0..n {
                        if !p.get(r, k).is_zero() {
                            row[idx(k, c)] = p.get(r, k).clone();
                        }
                    }
                    if c == dst {
                        row[idx(r, src)] = &row[idx(r, src)] - &field.one();
                    }
                    system.push_homogeneous(row);
                }
            }
        }
    }
    let Solution::Affine { nullspace, .. } = system.solve() else {
        unreachable!("homogeneous systems are consistent");
    };
    let v = nullspace.into_iter().next().ok_or(PreserverError::NoInvertibleSolution)?;
    let lead = v.iter().find(|x| !x.is_zero()).expect("basis vectors are nonzero").clone();
    let lead_inv = lead.inv().expect("nonzero");
    let u = ExactMatrix::from_vec(field, n, n, v.iter().map(|x| x * &lead_inv).collect());
    if u.inverse().is_err() {
        return Err(PreserverError::NoInvertibleSolution);
    }
    Ok(u)
}

/// Recovers `φ(a) = X·ψ̂(a)·Y` with `ψ̂` the identity or the transpose, for a
/// map `φ: M_n → M_n` that preserves the normalized rank or determinant.
///
/// `c = φ(I)` must be invertible; `c⁻¹·φ` is then a unital Jordan map whose
/// split must be pure, and the conjugator `U` of `c⁻¹·φ` gives `X = c·U`, `Y = U⁻¹`.
pub fn frobenius_form(map: &MatLinearMap, mode: FrobeniusMode) -> Result<DecompositionWitness, PreserverError> {
    let n = map.source_size();
    if map.target_size() != n {
        return Err(PreserverError::SizeMismatch(format!(
            "Frobenius form needs n = m (got {n} and {})",
            map.target_size()
        )));
    }
    let field = map.field();
    let c = map.unit_image();
    let c_inv = c.inverse().map_err(|_| PreserverError::SingularUnitImage)?;
    let normalized = map.left_multiply(&c_inv);
    if let Verdict::CertifiedFail(Witness::Pair(x, y)) = jordan_check(&normalized) {
        return Err(PreserverError::NotJordanAfterNormalization(Box::new((x, y))));
    }
    let mut witness = split_certified(&normalized)?;
    if witness.kind == Kind::Mixed {
        return Err(PreserverError::MixedKindOnBijection);
    }
    let u = recover_inner(&normalized, witness.kind)?;
    let u_inv = u.inverse().expect("verified invertible");
    let x = &c * &u;
    let y = u_inv;
    for i in 0..n {
        for j in 0..n {
            let unit = ExactMatrix::unit(field, n, i, j);
            let hat = match witness.kind {
                Kind::Hom => unit,
                _ => unit.transpose(),
            };
            if map.image_of_unit(i, j) != &(&x * &hat) * &y {
                return Err(PreserverError::VerificationFailed(format!(
                    "X·ψ(e_{}{})·Y differs from φ(e_{}{})",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    if mode == FrobeniusMode::Det {
        let value = normalized_det_matrix(&(&x * &y));
        if !radical_eq(&value, &RadicalValue::one()) {
            return Err(PreserverError::UnitDetNotOne(value));
        }
    }
    witness.u = Some(u);
    witness.x = Some(x);
    witness.y = Some(y);
    Ok(witness)
}

/// `a ↦ diag(a, …, a, aᵗ)` with `p − 1` copies of `a`: a unital Jordan map
/// `M_n → M_{pn}` preserving the normalized rank that is neither multiplicative
/// nor antimultiplicative.
pub fn counterexample_map(p: usize, n: usize) -> Result<MatLinearMap, PreserverError> {
    if p < 2 || n < 2 || !is_prime(p as u64) {
        return Err(PreserverError::BadParameters(format!(
            "need a prime p >= 2 and n >= 2 (got p = {p}, n = {n})"
        )));
    }
    let field = Field::Q;
    let mut parts = vec![MatLinearMap::identity(field, n); p - 1];
    parts.push(MatLinearMap::transpose_map(field, n));
    MatLinearMap::direct_sum_all(&parts)
}

/// The counterexample map together with its two exactly checked failure pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub map: MatLinearMap,
    /// `(e₁₂, e₂₁)`: `φ(e₁₂e₂₁) ≠ φ(e₁₂)φ(e₂₁)`.
    pub hom_fail: (ExactMatrix, ExactMatrix),
    /// `(e₁₂, e₂₁)`: `φ(e₁₂e₂₁) ≠ φ(e₂₁)φ(e₁₂)`.
    pub antihom_fail: (ExactMatrix, ExactMatrix),
}

pub fn counterexample(p: usize, n: usize) -> Result<Counterexample, PreserverError> {
    let map = counterexample_map(p, n)?;
    let field = map.field();
    let e12 = ExactMatrix::unit(field, n, 0, 1);
    let e21 = ExactMatrix::unit(field, n, 1, 0);
    let f12 = map.apply(&e12)?;
    let f21 = map.apply(&e21)?;
    let f_prod = map.apply(&(&e12 * &e21))?;
    if f_prod == &f12 * &f21 {
        return Err(PreserverError::VerificationFailed("hom failure pair does not fail".into()));
    }
    if f_prod == &f21 * &f12 {
        return Err(PreserverError::VerificationFailed("antihom failure pair does not fail".into()));
    }
    Ok(Counterexample {
        map,
        hom_fail: (e12.clone(), e21.clone()),
        antihom_fail: (e12, e21),
    })
}
