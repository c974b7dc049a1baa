//! Normalized rank and normalized determinant, plus the degree characterization
//! of rank and the polynomial identity satisfied by determinant preservers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::algebra::Element;
use crate::exactla::{det_poly, format_rational, ExactMatrix, Field, LinalgError, Poly, Scalar};
use crate::preserver::{MatLinearMap, PreserverError};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("exhaustive search is limited to n <= 3 (got {0})")]
    ExhaustiveTooLarge(usize),
    #[error(transparent)]
    Map(#[from] PreserverError),
}

/// The nonnegative real `v^{1/n}` with `v` rational, in canonical form: the root
/// index is minimal, and `v ∈ {0, 1}` forces `n = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadicalValue {
    v: BigRational,
    n: u64,
}

fn divisors_desc(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.reverse();
    out
}

fn exact_root(x: &BigInt, d: u32) -> Option<BigInt> {
    let r = x.nth_root(d);
    (Pow::pow(&r, d) == *x).then_some(r)
}

impl RadicalValue {
    /// Canonicalizes `v^{1/n}`. Panics if `v < 0` or `n = 0`.
    pub fn new(v: BigRational, n: u64) -> RadicalValue {
        assert!(!v.is_negative(), "radicand must be nonnegative");
        assert!(n > 0, "root index must be positive");
        if v.is_zero() || v.is_one() {
            return RadicalValue { v, n: 1 };
        }
        for d in divisors_desc(n) {
            if d == 1 {
                break;
            }
            let Ok(d32) = u32::try_from(d) else { continue };
            if let (Some(p), Some(q)) = (exact_root(v.numer(), d32), exact_root(v.denom(), d32)) {
                return RadicalValue {
                    v: BigRational::new(p, q),
                    n: n / d,
                };
            }
        }
        RadicalValue { v, n }
    }

    pub fn one() -> RadicalValue {
        RadicalValue::new(BigRational::one(), 1)
    }

    pub fn radicand(&self) -> &BigRational {
        &self.v
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    /// Re-canonicalizes; a no-op on values built through [`RadicalValue::new`].
    pub fn canonicalize(&self) -> RadicalValue {
        RadicalValue::new(self.v.clone(), self.n)
    }
}

impl fmt::Display for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", format_rational(&self.v), self.n)
    }
}

/// `x = y` as real numbers, decided by `x.v^{y.n} = y.v^{x.n}`.
pub fn radical_eq(x: &RadicalValue, y: &RadicalValue) -> bool {
    let (Ok(xn), Ok(yn)) = (u32::try_from(x.n), u32::try_from(y.n)) else {
        return false;
    };
    Pow::pow(&x.v, yn) == Pow::pow(&y.v, xn)
}

/// `r(a)/n` for `a` held at a stage of size `n`.
pub fn normalized_rank(a: &Element) -> BigRational {
    BigRational::new(
        BigInt::from(a.matrix().rank()),
        BigInt::from(a.size()),
    )
}

/// `|det(a)|^{1/n}`. Over `Q(i)` this is `(|det a|²)^{1/(2n)}` before canonicalizing.
pub fn normalized_det(a: &Element) -> RadicalValue {
    normalized_det_matrix(a.matrix())
}

pub fn normalized_det_matrix(a: &ExactMatrix) -> RadicalValue {
    let det = a.det().expect("elements are square");
    let n = a.rows() as u64;
    match a.field() {
        Field::Q => RadicalValue::new(det.re().abs(), n),
        Field::Qi => RadicalValue::new(det.abs_sq(), 2 * n),
    }
}

/// `a` is idempotent iff `r̄(a) + r̄(1 − a) = 1`.
pub fn is_idempotent_via_rank(a: &Element) -> bool {
    let one = ExactMatrix::identity(a.field(), a.size());
    let complement = &one - a.matrix();
    let total = BigRational::new(
        BigInt::from(a.matrix().rank() + complement.rank()),
        BigInt::from(a.size()),
    );
    total.is_one()
}

/// How `rank_by_degree` chooses the matrices `b` in `max deg det(t·a + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeStrategy {
    /// The single `b` built from a reduction of `a` to diagonal form.
    Witness,
    /// Random integer `b`; the result is a lower bound on the rank.
    Random { trials: usize, seed: u64 },
    /// Every 0/1 matrix `b`; only for `n <= 3`.
    ExhaustiveSmall,
}

/// The maximizing `b` for `a` and the resulting `det(t·a + b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeWitness {
    pub b: ExactMatrix,
    pub poly: Poly,
}

fn degree_of(p: &Poly) -> Option<usize> {
    p.degree()
}

/// Reduces `a` by row and column operations to `P·a·Q = diag(λ₁, …, λ_r, 0, …, 0)`
/// and returns `(P, Q, r)`.
fn diagonalize(a: &ExactMatrix) -> (ExactMatrix, ExactMatrix, usize) {
    let n = a.rows();
    let field = a.field();
    let mut work = a.clone();
    let mut p = ExactMatrix::identity(field, n);
    let mut q = ExactMatrix::identity(field, n);
    let mut r = 0;
    while r < n {
        let Some((pr, pc)) = (r..n)
            .flat_map(|c| (r..n).map(move |i| (i, c)))
            .find(|&(i, c)| !work.get(i, c).is_zero())
        else {
            break;
        };
        work.swap_rows(r, pr);
        p.swap_rows(r, pr);
        swap_cols(&mut work, r, pc);
        swap_cols(&mut q, r, pc);
        let pivot_inv = work.get(r, r).inv().expect("nonzero pivot");
        for i in r + 1..n {
            if work.get(i, r).is_zero() {
                continue;
            }
            let f = work.get(i, r) * &pivot_inv;
            add_row_multiple(&mut work, i, r, &f);
            add_row_multiple(&mut p, i, r, &f);
        }
        for j in r + 1..n {
            if work.get(r, j).is_zero() {
                continue;
            }
            let f = work.get(r, j) * &pivot_inv;
            add_col_multiple(&mut work, j, r, &f);
            add_col_multiple(&mut q, j, r, &f);
        }
        r += 1;
    }
    (p, q, r)
}

fn swap_cols(m: &mut ExactMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// `row[dst] -= f · row[src]`.
fn add_row_multiple(m: &mut ExactMatrix, dst: usize, src: usize, f: &Scalar) {
    for j in 0..m.cols() {
        let v = m.get(dst, j) - &(f * m.get(src, j));
        m.set(dst, j, v);
    }
}

/// `col[dst] -= f · col[src]`.
fn add_col_multiple(m: &mut ExactMatrix, dst: usize, src: usize, f: &Scalar) {
    for i in 0..m.rows() {
        let v = m.get(i, dst) - &(f * m.get(i, src));
        m.set(i, dst, v);
    }
}

/// Builds `b` with `deg det(t·a + b) = r(a)`.
///
/// With `P·a·Q = diag(λ₁, …, λ_r, 0, …, 0)`, take `b' = diag(0, …, 0, 1, …, 1)`
/// and `b = P⁻¹·b'·Q⁻¹`, so that `det(t·a + b) = t^r·λ₁⋯λ_r / (det P·det Q)`.
pub fn degree_witness(a: &ExactMatrix) -> Result<DegreeWitness, InvariantError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.rows();
    let field = a.field();
    let (p, q, r) = diagonalize(a);
    let diag: Vec<Scalar> = (0..n)
        .map(|i| if i < r { field.zero() } else { field.one() })
        .collect();
    let complement = ExactMatrix::diagonal(field, &diag);
    let b = &(&p.inverse()? * &complement) * &q.inverse()?;
    let poly = det_poly(a, &b)?;
    Ok(DegreeWitness { b, poly })
}

/// `r(a) = max { deg det(t·a + b) }`, with the maximum taken per `strategy`.
/// The zero polynomial counts as degree −∞ and never raises the maximum.
pub fn rank_by_degree(a: &ExactMatrix, strategy: DegreeStrategy) -> Result<usize, InvariantError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let n = a.rows();
    let field = a.field();
    let best = match strategy {
        DegreeStrategy::Witness => degree_of(&degree_witness(a)?.poly),
        DegreeStrategy::Random { trials, seed } => {
            let mut rng = sample::rng(seed);
            let mut best = None;
            for _ in 0..trials {
                let b = sample::random_matrix(&mut rng, field, n, n, 3);
                best = best.max(degree_of(&det_poly(a, &b)?));
            }
            best
        }
        DegreeStrategy::ExhaustiveSmall => {
            if n > 3 {
                return Err(InvariantError::ExhaustiveTooLarge(n));
            }
            let mut best = None;
            for pattern in 0u32..(1 << (n * n)) {
                let data = (0..n * n)
                    .map(|k| {
                        if pattern & (1 << k) != 0 {
                            field.one()
                        } else {
                            field.zero()
                        }
                    })
                    .collect();
                let b = ExactMatrix::from_vec(field, n, n, data);
                best = best.max(degree_of(&det_poly(a, &b)?));
            }
            best
        }
    };
    Ok(best.unwrap_or(0))
}

/// Random-strategy helper that also reports how many trials reached `target`.
pub fn random_degree_hits<R: Rng>(rng: &mut R, a: &ExactMatrix, trials: usize, target: usize) -> Result<usize, InvariantError> {
    let n = a.rows();
    let mut hits = 0;
    for _ in 0..trials {
        let b = sample::random_matrix(rng, a.field(), n, n, 3);
        if det_poly(a, &b)?.degree() == Some(target) {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Checks `det(t·a + a′)^m = det(t·φ(a) + φ(a′))^n` as polynomials.
pub fn poly_identity_check(map: &MatLinearMap, a: &ExactMatrix, a_prime: &ExactMatrix) -> Result<bool, InvariantError> {
    let lhs = det_poly(a, a_prime)?.pow(map.target_size() as u32);
    let fa = map.apply(a)?;
    let fb = map.apply(a_prime)?;
    let rhs = det_poly(&fa, &fb)?.pow(map.source_size() as u32);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::TowerDescriptor;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn elem(m: ExactMatrix) -> Element {
        let n = m.rows() as u64;
        Element::new(Arc::new(TowerDescriptor::new(n, vec![], vec![2]).unwrap()), 1, m).unwrap()
    }

    #[test]
    fn radical_canonical_form() {
        assert_eq!(RadicalValue::new(rat(8, 1), 2), RadicalValue { v: rat(8, 1), n: 2 });
        assert_eq!(RadicalValue::new(rat(64, 1), 4), RadicalValue { v: rat(8, 1), n: 2 });
        assert_eq!(RadicalValue::new(rat(64, 1), 6), RadicalValue { v: rat(2, 1), n: 1 });
        assert_eq!(RadicalValue::new(rat(4, 9), 2), RadicalValue { v: rat(2, 3), n: 1 });
        assert_eq!(RadicalValue::new(rat(1, 1), 7).index(), 1);
        assert_eq!(RadicalValue::new(rat(0, 1), 7).index(), 1);
        // numerator is a square, denominator is not
        assert_eq!(RadicalValue::new(rat(4, 3), 2).index(), 2);
    }

    #[test]
    fn radical_equality() {
        let a = RadicalValue { v: rat(8, 1), n: 2 };
        let b = RadicalValue { v: rat(64, 1), n: 4 };
        assert!(radical_eq(&a, &b));
        assert!(radical_eq(&RadicalValue::one(), &RadicalValue::one()));
        assert!(!radical_eq(&RadicalValue::new(rat(2, 1), 1), &RadicalValue::new(rat(3, 1), 1)));
    }

    #[test]
    fn normalized_rank_examples() {
        assert_eq!(normalized_rank(&elem(ExactMatrix::unit(Field::Q, 2, 0, 0))), rat(1, 2));
        assert_eq!(normalized_rank(&elem(ExactMatrix::identity(Field::Q, 3))), rat(1, 1));
        let promoted = ExactMatrix::unit(Field::Q, 2, 0, 0).kron_identity(2);
        assert_eq!(normalized_rank(&elem(promoted)), rat(1, 2));
    }

    #[test]
    fn normalized_det_examples() {
        assert_eq!(normalized_det(&elem(ExactMatrix::identity(Field::Q, 2))), RadicalValue::one());
        let d = ExactMatrix::diagonal(Field::Q, &[Scalar::from_int(Field::Q, 2), Scalar::from_frac(Field::Q, 1, 2)]);
        assert_eq!(normalized_det(&elem(d)), RadicalValue::one());
        let m = ExactMatrix::from_ints(Field::Q, &[&[2, 0], &[0, -4]]);
        assert_eq!(normalized_det(&elem(m)), RadicalValue::new(rat(8, 1), 2));
        // det = 2i over Q(i): |det|² = 4, (4)^{1/4} = 2^{1/2}
        let g = ExactMatrix::diagonal(Field::Qi, &[Scalar::i(), Scalar::from_int(Field::Qi, 2)]);
        assert_eq!(normalized_det(&elem(g)), RadicalValue::new(rat(2, 1), 2));
    }

    #[test]
    fn idempotent_examples() {
        assert!(is_idempotent_via_rank(&elem(ExactMatrix::unit(Field::Q, 2, 0, 0))));
        assert!(is_idempotent_via_rank(&elem(ExactMatrix::identity(Field::Q, 2))));
        assert!(!is_idempotent_via_rank(&elem(ExactMatrix::unit(Field::Q, 2, 0, 1))));
    }

    #[test]
    fn witness_on_diagonal() {
        let s = |x| Scalar::from_int(Field::Q, x);
        let a = ExactMatrix::diagonal(Field::Q, &[s(2), s(5), s(-1), s(0), s(0)]);
        let w = degree_witness(&a).unwrap();
        assert_eq!(w.b, ExactMatrix::diagonal(Field::Q, &[s(0), s(0), s(0), s(1), s(1)]));
        assert_eq!(w.poly, Poly::monomial(Field::Q, 3).scale(&s(-10)));
        assert_eq!(rank_by_degree(&a, DegreeStrategy::Witness).unwrap(), 3);
    }

    #[test]
    fn degree_strategies_on_small_matrices() {
        let i3 = ExactMatrix::identity(Field::Q, 3);
        assert_eq!(rank_by_degree(&i3, DegreeStrategy::Witness).unwrap(), 3);
        assert_eq!(rank_by_degree(&i3, DegreeStrategy::ExhaustiveSmall).unwrap(), 3);
        let z = ExactMatrix::zeros(Field::Q, 3, 3);
        assert_eq!(rank_by_degree(&z, DegreeStrategy::Witness).unwrap(), 0);
        assert_eq!(rank_by_degree(&z, DegreeStrategy::Random { trials: 5, seed: 0 }).unwrap(), 0);
        let r1 = ExactMatrix::from_ints(Field::Q, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank_by_degree(&r1, DegreeStrategy::ExhaustiveSmall).unwrap(), 1);
        assert_eq!(
            rank_by_degree(&ExactMatrix::identity(Field::Q, 4), DegreeStrategy::ExhaustiveSmall),
            Err(InvariantError::ExhaustiveTooLarge(4))
        );
    }
}
