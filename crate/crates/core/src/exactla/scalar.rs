//! Exact scalars over the rationals `Q` and the Gaussian rationals `Q(i)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// The ground field a scalar (and every matrix built from it) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Qi,
}

impl Field {
    pub fn tag(self) -> &'static str {
        match self {
            Field::Q => "Q",
            Field::Qi => "Qi",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Field> {
        match tag {
            "Q" => Some(Field::Q),
            "Qi" => Some(Field::Qi),
            _ => None,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::from_int(self, 0)
    }

    pub fn one(self) -> Scalar {
        Scalar::from_int(self, 1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// An element of `Q` or `Q(i)`. The imaginary part is always zero for `Field::Q`.
///
/// Equality includes the field tag, so `1 ∈ Q` and `1 ∈ Q(i)` are distinct values.
/// Arithmetic between different fields is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn from_int(field: Field, n: i64) -> Scalar {
        Scalar::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(field: Field, re: BigRational) -> Scalar {
        Scalar {
            field,
            re,
            im: BigRational::zero(),
        }
    }

    /// Builds `numer/denom`; panics on a zero denominator.
    pub fn from_frac(field: Field, numer: i64, denom: i64) -> Scalar {
        Scalar::from_rational(
            field,
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
        )
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar {
            field: Field::Qi,
            re,
            im,
        }
    }

    /// The imaginary unit of `Q(i)`.
    pub fn i() -> Scalar {
        Scalar::gaussian(BigRational::zero(), BigRational::one())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Returns the same value tagged with another field. Fails when an
    /// imaginary part would be dropped.
    pub fn to_field(&self, field: Field) -> Result<Scalar, LinalgError> {
        if field == Field::Q && !self.im.is_zero() {
            return Err(LinalgError::NotReal);
        }
        Ok(Scalar {
            field,
            re: self.re.clone(),
            im: self.im.clone(),
        })
    }

    pub fn conj(&self) -> Scalar {
        Scalar {
            field: self.field,
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|²`, always rational.
    pub fn abs_sq(&self) -> BigRational {
        if self.im.is_zero() {
            &self.re * &self.re
        } else {
            &self.re * &self.re + &self.im * &self.im
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Scalar::from_rational(self.field, self.re.recip()));
        }
        let norm = self.abs_sq();
        Some(Scalar {
            field: self.field,
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }

    /// Exact division; panics on a zero divisor.
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_field(&self, rhs: &Scalar) {
        assert_eq!(
            self.field, rhs.field,
            "scalar field mismatch: {} vs {}",
            self.field, rhs.field
        );
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, LinalgError> {
    let bad = || LinalgError::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            Field::Q => f.write_str(&format_rational(&self.re)),
            Field::Qi => {
                if self.im.is_zero() {
                    return f.write_str(&format_rational(&self.re));
                }
                let im = format_rational(&self.im.abs());
                let sign = if self.im.is_negative() { "-" } else { "+" };
                if self.re.is_zero() {
                    let lead = if self.im.is_negative() { "-" } else { "" };
                    write!(f, "{lead}{im}i")
                } else {
                    write!(f, "{}{sign}{im}i", format_rational(&self.re))
                }
            }
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        let im = if self.im.is_zero() && rhs.im.is_zero() {
            BigRational::zero()
        } else {
            &self.im + &rhs.im
        };
        Scalar {
            field: self.field,
            re: &self.re + &rhs.re,
            im,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        let im = if self.im.is_zero() && rhs.im.is_zero() {
            BigRational::zero()
        } else {
            &self.im - &rhs.im
        };
        Scalar {
            field: self.field,
            re: &self.re - &rhs.re,
            im,
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_field(rhs);
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::from_rational(self.field, &self.re * &rhs.re);
        }
        Scalar {
            field: self.field,
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            field: self.field,
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions_are_reduced() {
        let a = Scalar::from_frac(Field::Q, 4, -6);
        assert_eq!(a.to_string(), "-2/3");
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = Scalar::i();
        let minus_one = Scalar::from_int(Field::Qi, -1);
        assert_eq!(&i * &i, minus_one);
        let z = Scalar::gaussian(BigRational::from_integer(3.into()), BigRational::from_integer(4.into()));
        assert_eq!(z.abs_sq(), BigRational::from_integer(25.into()));
        assert_eq!(&z * &z.inv().unwrap(), Field::Qi.one());
        assert_eq!(z.to_string(), "3+4i");
        assert_eq!(z.conj().to_string(), "3-4i");
    }

    #[test]
    fn field_tag_is_part_of_equality() {
        assert_ne!(Field::Q.one(), Field::Qi.one());
        assert_eq!(Field::Q.one().to_field(Field::Qi).unwrap(), Field::Qi.one());
        assert!(Scalar::i().to_field(Field::Q).is_err());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &Field::Q.one() + &Field::Qi.one();
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational(" -7 ").unwrap(), BigRational::from_integer((-7).into()));
    }
}
