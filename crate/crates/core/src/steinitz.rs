//! Steinitz (supernatural) numbers with finite support.
//!
//! A value is a formal product `∏ p^{r_p}` with `r_p ∈ {0, 1, 2, …} ∪ {∞}`, stored as
//! the map of primes with nonzero exponent. Canonical text form lists primes in
//! ascending order, e.g. `2^inf*3^2*5`; the empty product is written `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::TowerDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteinitzError {
    #[error("cannot parse Steinitz number {0:?}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("corner rank must satisfy 1 <= r <= n (r = {r}, n = {n})")]
    BadRank { r: u64, n: u64 },
    #[error("{n} does not divide {r}·s, so (r/n)·s is not a Steinitz number")]
    NotDivisible { r: u64, n: u64 },
}

/// Exponent of one prime: a positive integer or `∞`. Ordered with `∞` on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    fn add(self, rhs: Exponent) -> Exponent {
        match (self, rhs) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinite
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(k) => write!(f, "{k}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Steinitz {
    // invariant: no Finite(0) values; keys are primes
    support: BTreeMap<u64, Exponent>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl Steinitz {
    /// The empty product `1`.
    pub fn one() -> Steinitz {
        Steinitz::default()
    }

    /// `p^∞` for a prime `p`.
    pub fn prime_power_infinite(p: u64) -> Result<Steinitz, SteinitzError> {
        let mut s = Steinitz::one();
        s.set(p, Exponent::Infinite)?;
        Ok(s)
    }

    /// Embeds a positive integer via its factorization.
    pub fn from_nat(n: u64) -> Result<Steinitz, SteinitzError> {
        if n == 0 {
            return Err(SteinitzError::Zero);
        }
        let support = factorize(n)
            .into_iter()
            .map(|(p, k)| (p, Exponent::Finite(k)))
            .collect();
        Ok(Steinitz { support })
    }

    /// Sets the exponent of prime `p`; `Finite(0)` removes it.
    pub fn set(&mut self, p: u64, e: Exponent) -> Result<(), SteinitzError> {
        if !is_prime(p) {
            return Err(SteinitzError::NotPrime(p));
        }
        if e == Exponent::Finite(0) {
            self.support.remove(&p);
        } else {
            self.support.insert(p, e);
        }
        Ok(())
    }

    /// Exponent of `p`, `Finite(0)` when absent.
    pub fn exponent(&self, p: u64) -> Exponent {
        self.support.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.support.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mul(&self, rhs: &Steinitz) -> Steinitz {
        let mut support = self.support.clone();
        for (&p, &e) in &rhs.support {
            let merged = self.exponent(p).add(e);
            support.insert(p, merged);
        }
        Steinitz { support }
    }

    /// Whether `self` divides `rhs`: every exponent of `self` is at most the
    /// corresponding exponent of `rhs`.
    pub fn divides(&self, rhs: &Steinitz) -> bool {
        self.support.iter().all(|(&p, &e)| e <= rhs.exponent(p))
    }

    pub fn lcm(&self, rhs: &Steinitz) -> Steinitz {
        let mut support = self.support.clone();
        for (&p, &e) in &rhs.support {
            let m = self.exponent(p).max(e);
            support.insert(p, m);
        }
        Steinitz { support }
    }

    pub fn gcd(&self, rhs: &Steinitz) -> Steinitz {
        let support = self
            .support
            .iter()
            .filter_map(|(&p, &e)| {
                let m = e.min(rhs.exponent(p));
                (m != Exponent::Finite(0)).then_some((p, m))
            })
            .collect();
        Steinitz { support }
    }

    /// No exponent equals `∞`.
    pub fn is_locally_finite(&self) -> bool {
        self.support.values().all(|e| !e.is_infinite())
    }

    /// The value as an ordinary integer, when it is one and fits in `u64`.
    pub fn to_nat(&self) -> Option<u64> {
        self.support.iter().try_fold(1u64, |acc, (&p, &e)| match e {
            Exponent::Finite(k) => acc.checked_mul(p.checked_pow(u32::try_from(k).ok()?)?),
            Exponent::Infinite => None,
        })
    }

    /// The Steinitz number `(r/n)·s` of a corner algebra cut out by an
    /// idempotent of rank `r` in `M_n`.
    pub fn corner(&self, r: u64, n: u64) -> Result<Steinitz, SteinitzError> {
        if r == 0 || r > n {
            return Err(SteinitzError::BadRank { r, n });
        }
        let numer = Steinitz::from_nat(r)?.mul(self);
        let denom = Steinitz::from_nat(n)?;
        if !denom.divides(&numer) {
            return Err(SteinitzError::NotDivisible { r, n });
        }
        let mut support = BTreeMap::new();
        for (&p, &e) in &numer.support {
            let out = match (e, denom.exponent(p)) {
                (Exponent::Infinite, _) => Exponent::Infinite,
                (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a - b),
                (Exponent::Finite(_), Exponent::Infinite) => unreachable!("n is finite"),
            };
            if out != Exponent::Finite(0) {
                support.insert(p, out);
            }
        }
        Ok(Steinitz { support })
    }

    /// Supremum of the stage sizes of an embedding tower.
    ///
    /// A prime dividing a multiplier of the repeating cycle occurs in
    /// unboundedly many stages and gets exponent `∞`; any other prime keeps the
    /// finite exponent it reaches in `n₁` times the prefix multipliers.
    pub fn of_tower(tower: &TowerDescriptor) -> Steinitz {
        let mut infinite = Steinitz::one();
        for &m in tower.cycle() {
            for (p, _) in factorize(m) {
                infinite.support.insert(p, Exponent::Infinite);
            }
        }
        let mut finite = Steinitz::from_nat(tower.n1()).expect("n1 >= 1");
        for &m in tower.prefix() {
            finite = finite.mul(&Steinitz::from_nat(m).expect("multipliers >= 1"));
        }
        finite.lcm(&infinite)
    }
}

/// Free functions mirroring the methods.
pub fn st_from_nat(n: u64) -> Result<Steinitz, SteinitzError> {
    Steinitz::from_nat(n)
}

pub fn st_mul(s: &Steinitz, t: &Steinitz) -> Steinitz {
    s.mul(t)
}

pub fn st_divides(s: &Steinitz, t: &Steinitz) -> bool {
    s.divides(t)
}

pub fn st_lcm(s: &Steinitz, t: &Steinitz) -> Steinitz {
    s.lcm(t)
}

pub fn st_gcd(s: &Steinitz, t: &Steinitz) -> Steinitz {
    s.gcd(t)
}

pub fn st_is_locally_finite(s: &Steinitz) -> bool {
    s.is_locally_finite()
}

pub fn st_corner(s: &Steinitz, r: u64, n: u64) -> Result<Steinitz, SteinitzError> {
    s.corner(r, n)
}

pub fn st_of_tower(tower: &TowerDescriptor) -> Steinitz {
    Steinitz::of_tower(tower)
}

impl PartialOrd for Steinitz {
    /// The divisibility order.
    fn partial_cmp(&self, other: &Steinitz) -> Option<Ordering> {
        match (self.divides(other), other.divides(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

impl fmt::Display for Steinitz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                _ => write!(f, "{p}^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Steinitz {
    type Err = SteinitzError;

    /// Accepts factors `p`, `p^k` or `p^inf` joined by `*`, in any order and
    /// with repeats (exponents add). Composite bases are rejected.
    fn from_str(s: &str) -> Result<Steinitz, SteinitzError> {
        let bad = || SteinitzError::Parse(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(bad());
        }
        let mut out = Steinitz::one();
        if text == "1" {
            return Ok(out);
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (factor, None),
            };
            let p: u64 = base.parse().map_err(|_| bad())?;
            let e = match exp {
                None => Exponent::Finite(1),
                Some("inf" | "∞") => Exponent::Infinite,
                Some(k) => Exponent::Finite(k.parse().map_err(|_| bad())?),
            };
            if !is_prime(p) {
                return Err(SteinitzError::NotPrime(p));
            }
            if e == Exponent::Finite(0) {
                continue;
            }
            let merged = out.exponent(p).add(e);
            out.support.insert(p, merged);
        }
        Ok(out)
    }
}
