//! Univariate polynomials over `Q`/`Q(i)` and the pencil determinant `det(t·a + b)`.

use std::fmt;

use num_traits::Zero;

use super::{ExactMatrix, Field, LinalgError, Scalar};

/// Largest size for which [`det_poly`] uses cofactor expansion.
pub const COFACTOR_MAX: usize = 8;

/// Polynomial in `t`, coefficients in ascending degree with trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Poly {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// `c₀ + c₁·t`.
    pub fn linear(c0: Scalar, c1: Scalar) -> Poly {
        Poly::new(c0.field(), vec![c0, c1])
    }

    /// `t^k`.
    pub fn monomial(field: Field, k: usize) -> Poly {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = field.one();
        Poly { field, coeffs }
    }

    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial (degree −∞).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect();
        Poly::new(self.field, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Poly::new(self.field, coeffs)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::constant(self.field.one());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division `self = q·divisor + r`; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let lead_inv = divisor
            .leading()
            .expect("polynomial division by zero")
            .inv()
            .expect("nonzero leading coefficient");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(self.field, quot), Poly::new(self.field, rem))
    }

    /// Exact quotient; panics if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = if self.field == Field::Qi && !c.im().is_zero() {
                format!("({c})")
            } else {
                c.to_string()
            };
            match k {
                0 => f.write_str(&coeff)?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if k == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn pencil_entries(a: &ExactMatrix, b: &ExactMatrix) -> Result<Vec<Poly>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(LinalgError::SizeMismatch {
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    if a.field() != b.field() {
        return Err(LinalgError::FieldMismatch);
    }
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| Poly::linear(y.clone(), x.clone()))
        .collect())
}

/// `det(t·a + b)` as an exact polynomial in `t`.
pub fn det_poly(a: &ExactMatrix, b: &ExactMatrix) -> Result<Poly, LinalgError> {
    if a.rows() <= COFACTOR_MAX {
        det_poly_cofactor(a, b)
    } else {
        det_poly_bareiss(a, b)
    }
}

/// Cofactor (Laplace) expansion, memoized over the set of used columns.
pub fn det_poly_cofactor(a: &ExactMatrix, b: &ExactMatrix) -> Result<Poly, LinalgError> {
    let entries = pencil_entries(a, b)?;
    let n = a.rows();
    let field = a.field();
    assert!(n < usize::BITS as usize, "matrix too large for cofactor expansion");
    // partial[mask]: signed sum over assignments of rows 0..|mask| to the columns in mask
    let mut partial: Vec<Option<Poly>> = vec![None; 1 << n];
    partial[0] = Some(Poly::constant(field.one()));
    for mask in 0usize..(1 << n) {
        let Some(acc) = partial[mask].take() else {
            continue;
        };
        if acc.is_zero() {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            partial[mask] = Some(acc);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let entry = &entries[row * n + col];
            if entry.is_zero() {
                continue;
            }
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = acc.mul(entry);
            if inversions % 2 == 1 {
                term = term.neg();
            }
            let slot = &mut partial[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(prev) => prev.add(&term),
                None => term,
            });
        }
    }
    Ok(partial[(1 << n) - 1].take().unwrap_or_else(|| Poly::zero(field)))
}

/// Fraction-free elimination with polynomial pivots.
pub fn det_poly_bareiss(a: &ExactMatrix, b: &ExactMatrix) -> Result<Poly, LinalgError> {
    let mut m = pencil_entries(a, b)?;
    let n = a.rows();
    let field = a.field();
    if n == 0 {
        return Ok(Poly::constant(field.one()));
    }
    let mut negate = false;
    let mut prev = Poly::constant(field.one());
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return Ok(Poly::zero(field));
            };
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = pivot.mul(&m[i * n + j]).sub(&m[i * n + k].mul(&m[k * n + j]));
                m[i * n + j] = v.div_exact(&prev);
            }
            m[i * n + k] = Poly::zero(field);
        }
        prev = pivot;
    }
    let d = m[n * n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}
