//! Seeded random matrices for test corpora.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactla::{ExactMatrix, Field, Scalar};

/// Deterministic generator used for every corpus in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry<R: Rng>(rng: &mut R, field: Field, bound: i64) -> Scalar {
    let re = rng.random_range(-bound..=bound);
    match field {
        Field::Q => Scalar::from_int(Field::Q, re),
        Field::Qi => {
            let im = rng.random_range(-bound..=bound);
            &Scalar::from_int(Field::Qi, re) + &(&Scalar::i() * &Scalar::from_int(Field::Qi, im))
        }
    }
}

/// Integer entries uniform in `[-bound, bound]` (real and imaginary parts for `Qi`).
pub fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize, bound: i64) -> ExactMatrix {
    let data = (0..rows * cols).map(|_| entry(rng, field, bound)).collect();
    ExactMatrix::from_vec(field, rows, cols, data)
}

/// A random invertible matrix, resampled until its determinant is nonzero.
pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize, bound: i64) -> ExactMatrix {
    loop {
        let m = random_matrix(rng, field, n, n, bound);
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

/// A random `n × n` matrix of exact rank `r`, built as `L·R` with full-rank factors.
pub fn random_of_rank<R: Rng>(rng: &mut R, field: Field, n: usize, r: usize, bound: i64) -> ExactMatrix {
    if r == 0 {
        return ExactMatrix::zeros(field, n, n);
    }
    loop {
        let left = random_matrix(rng, field, n, r, bound);
        let right = random_matrix(rng, field, r, n, bound);
        let m = &left * &right;
        if m.rank() == r {
            return m;
        }
    }
}

/// `diag(1, …, 1, 0, …, 0)` with `r` ones.
pub fn projection(field: Field, n: usize, r: usize) -> ExactMatrix {
    let diag: Vec<Scalar> = (0..n)
        .map(|i| if i < r { field.one() } else { field.zero() })
        .collect();
    ExactMatrix::diagonal(field, &diag)
}

/// `S·diag(1,…,1,0,…,0)·S⁻¹` for a random invertible `S`: an idempotent of rank `r`.
pub fn random_idempotent<R: Rng>(rng: &mut R, field: Field, n: usize, r: usize, bound: i64) -> ExactMatrix {
    let s = random_invertible(rng, field, n, bound);
    let s_inv = s.inverse().expect("invertible by construction");
    &(&s * &projection(field, n, r)) * &s_inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_meet_their_contracts() {
        let mut g = rng(7);
        for n in 1..=5 {
            for r in 0..=n {
                assert_eq!(random_of_rank(&mut g, Field::Q, n, r, 3).rank(), r);
                let e = random_idempotent(&mut g, Field::Q, n, r, 2);
                assert_eq!(&e * &e, e);
                assert_eq!(e.rank(), r);
            }
            assert!(random_invertible(&mut g, Field::Qi, n, 2).inverse().is_ok());
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_matrix(&mut rng(3), Field::Q, 3, 3, 5);
        let b = random_matrix(&mut rng(3), Field::Q, 3, 3, 5);
        assert_eq!(a, b);
    }
}
