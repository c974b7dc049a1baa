//! Fraction-free determinant over `Z` and `Z[i]`.
//!
//! Rational input is first scaled row by row to integers; the Bareiss
//! recurrence then only ever performs exact divisions, so no gcds are taken.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactMatrix, Field, Scalar};

trait Ring: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs`, which must be exact.
    fn div_exact(&self, rhs: &Self) -> Self;
}

impl Ring for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

/// Gaussian integer `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Gauss(BigInt, BigInt);

impl Ring for Gauss {
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.0) && Zero::is_zero(&self.1)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Gauss(&self.0 * &rhs.0 - &self.1 * &rhs.1, &self.0 * &rhs.1 + &self.1 * &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Gauss(&self.0 - &rhs.0, &self.1 - &rhs.1)
    }
    fn neg(&self) -> Self {
        Gauss(-&self.0, -&self.1)
    }
    fn div_exact(&self, rhs: &Self) -> Self {
        let norm = &rhs.0 * &rhs.0 + &rhs.1 * &rhs.1;
        let num = self.mul(&Gauss(rhs.0.clone(), -&rhs.1));
        Gauss(&num.0 / &norm, &num.1 / &norm)
    }
}

fn bareiss<R: Ring>(mut m: Vec<Vec<R>>, one: R) -> R {
    let n = m.len();
    let mut negate = false;
    let mut prev = one;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return m[k][k].clone();
            };
            m.swap(k, p);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let mut v = pivot.mul(&row[j]);
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    v = v.sub(&lead.mul(&pivot_row[j]));
                }
                row[j] = v.div_exact(&prev);
            }
        }
        prev = pivot.clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Determinant of a nonempty square matrix.
pub(super) fn det(a: &ExactMatrix) -> Scalar {
    let n = a.rows();
    let mut scale = BigInt::one();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let row = a.row(i);
        let d = row
            .iter()
            .flat_map(|x| [x.re().denom(), x.im().denom()])
            .fold(BigInt::one(), |acc, q| acc.lcm(q));
        let scaled = |x: &BigRational| (x * &d).to_integer();
        rows.push(row.iter().map(|x| (scaled(x.re()), scaled(x.im()))).collect::<Vec<_>>());
        scale *= d;
    }
    match a.field() {
        Field::Q => {
            let ints = rows.into_iter().map(|r| r.into_iter().map(|(re, _)| re).collect()).collect();
            let d = bareiss(ints, BigInt::one());
            Scalar::from_rational(Field::Q, BigRational::new(d, scale))
        }
        Field::Qi => {
            let gauss = rows
                .into_iter()
                .map(|r| r.into_iter().map(|(re, im)| Gauss(re, im)).collect())
                .collect();
            let Gauss(re, im) = bareiss(gauss, Gauss(BigInt::one(), BigInt::zero()));
            Scalar::gaussian(BigRational::new(re, scale.clone()), BigRational::new(im, scale))
        }
    }
}
