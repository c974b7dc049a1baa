//! Finite evidence for universally quantified properties of a linear map.
//!
//! Rank and determinant preservation can only be refuted, never proven, by a
//! finite corpus, so those tests end in `CertifiedFail` or `PassedSamples`. The
//! Jordan identity is bilinear and is settled by checking basis pairs, which
//! yields a genuine `Certified`.

use num_traits::Pow;

use crate::exactla::{ExactMatrix, Field};
use crate::sample;

use super::map::unit_product;
use super::MatLinearMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Element(ExactMatrix),
    Pair(ExactMatrix, ExactMatrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Proven for all inputs (Jordan test only).
    Certified,
    /// No counterexample among `samples` checked inputs.
    PassedSamples { samples: usize },
    /// The defining equality fails on the witness.
    CertifiedFail(Witness),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::CertifiedFail(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::CertifiedFail(w) => Some(w),
            _ => None,
        }
    }
}

/// Size and seed of the random part of a corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub random: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> CorpusSpec {
        CorpusSpec { random: 100, seed: 0 }
    }
}

/// Standard corpus on `M_n`, in a fixed order: the projections
/// `diag(1,…,1,0,…,0)` from rank `n` down to rank 0, then every matrix unit
/// `e_{ij}`, then random matrices alternating between full random entries and
/// random matrices of each rank.
pub fn standard_corpus(field: Field, n: usize, spec: CorpusSpec) -> Vec<ExactMatrix> {
    let mut out: Vec<ExactMatrix> = (0..=n).rev().map(|r| sample::projection(field, n, r)).collect();
    for i in 0..n {
        for j in 0..n {
            out.push(ExactMatrix::unit(field, n, i, j));
        }
    }
    let mut rng = sample::rng(spec.seed);
    for k in 0..spec.random {
        if k % 2 == 0 {
            out.push(sample::random_matrix(&mut rng, field, n, n, 3));
        } else {
            let r = (k / 2) % (n + 1);
            out.push(sample::random_of_rank(&mut rng, field, n, r, 3));
        }
    }
    out
}

/// Idempotent corpus: `diag(1,…,1,0,…,0)` of rank 1 up to `n`, the zero
/// matrix, then random conjugates `S·diag(…)·S⁻¹` cycling through ranks.
pub fn idempotent_corpus(field: Field, n: usize, spec: CorpusSpec) -> Vec<ExactMatrix> {
    let mut out: Vec<ExactMatrix> = (1..=n).map(|r| sample::projection(field, n, r)).collect();
    out.push(ExactMatrix::zeros(field, n, n));
    let mut rng = sample::rng(spec.seed);
    for k in 0..spec.random {
        let r = k % (n + 1);
        out.push(sample::random_idempotent(&mut rng, field, n, r, 2));
    }
    out
}

fn first_failure(map: &MatLinearMap, corpus: Vec<ExactMatrix>, holds: impl Fn(&ExactMatrix, &ExactMatrix) -> bool) -> Verdict {
    let samples = corpus.len();
    for a in corpus {
        let image = map.apply(&a).expect("corpus matches the source size");
        if !holds(&a, &image) {
            return Verdict::CertifiedFail(Witness::Element(a));
        }
    }
    Verdict::PassedSamples { samples }
}

/// Checks `m·r(a) = n·r(φ(a))`, i.e. `r̄(a) = r̄(φ(a))`, over the standard corpus.
pub fn preserves_normalized_rank(map: &MatLinearMap, spec: CorpusSpec) -> Verdict {
    let (n, m) = (map.source_size(), map.target_size());
    let corpus = standard_corpus(map.field(), n, spec);
    first_failure(map, corpus, |a, image| m * a.rank() == n * image.rank())
}

/// Whether `m·r(w) = n·r(φ(w))` fails on `w`.
pub fn violates_rank(map: &MatLinearMap, w: &ExactMatrix) -> bool {
    let image = map.apply(w).expect("witness matches the source size");
    map.target_size() * w.rank() != map.source_size() * image.rank()
}

/// Checks `|det φ(a)|^{2n} = |det a|^{2m}` (squared magnitudes keep `Q(i)` rational).
pub fn preserves_normalized_det(map: &MatLinearMap, spec: CorpusSpec) -> Verdict {
    let corpus = standard_corpus(map.field(), map.source_size(), spec);
    first_failure(map, corpus, |a, image| det_relation_holds(map, a, image))
}

fn det_relation_holds(map: &MatLinearMap, a: &ExactMatrix, image: &ExactMatrix) -> bool {
    let (n, m) = (map.source_size() as u32, map.target_size() as u32);
    let lhs = image.det().expect("square").abs_sq();
    let rhs = a.det().expect("square").abs_sq();
    Pow::pow(&lhs, n) == Pow::pow(&rhs, m)
}

/// Whether `|det φ(w)|^n = |det w|^m` fails on `w`.
pub fn violates_det(map: &MatLinearMap, w: &ExactMatrix) -> bool {
    let image = map.apply(w).expect("witness matches the source size");
    !det_relation_holds(map, w, &image)
}

/// `φ(xy + yx) = φ(x)φ(y) + φ(y)φ(x)`.
pub fn jordan_pair_holds(map: &MatLinearMap, x: &ExactMatrix, y: &ExactMatrix) -> bool {
    let sym = &(x * y) + &(y * x);
    let fx = map.apply(x).expect("source size");
    let fy = map.apply(y).expect("source size");
    map.apply(&sym).expect("source size") == &(&fx * &fy) + &(&fy * &fx)
}

/// Certifies `φ(a²) = φ(a)²` for all `a`.
///
/// The identity is checked at `a = I` first and then on every unordered pair of
/// matrix units; by bilinearity of `(x, y) ↦ φ(xy + yx) − φ(x)φ(y) − φ(y)φ(x)`
/// the pair checks cover every matrix. A failing pair `(x, x)` means `φ(x²) ≠ φ(x)²`.
pub fn jordan_check(map: &MatLinearMap) -> Verdict {
    let field = map.field();
    let (n, m) = (map.source_size(), map.target_size());
    let one = ExactMatrix::identity(field, n);
    if !jordan_pair_holds(map, &one, &one) {
        return Verdict::CertifiedFail(Witness::Pair(one.clone(), one));
    }
    let images = map.unit_images();
    let zero = ExactMatrix::zeros(field, m, m);
    let image_of = |p: usize, q: usize| unit_product(n, p, q).map_or(&zero, |k| &images[k]);
    for p in 0..n * n {
        for q in p..n * n {
            let lhs = image_of(p, q) + image_of(q, p);
            let rhs = &(&images[p] * &images[q]) + &(&images[q] * &images[p]);
            if lhs != rhs {
                let unit = |k: usize| ExactMatrix::unit(field, n, k / n, k % n);
                return Verdict::CertifiedFail(Witness::Pair(unit(p), unit(q)));
            }
        }
    }
    Verdict::Certified
}

/// Checks that sampled idempotents map to idempotents.
pub fn maps_idempotents_to_idempotents(map: &MatLinearMap, spec: CorpusSpec) -> Verdict {
    let corpus = idempotent_corpus(map.field(), map.source_size(), spec);
    first_failure(map, corpus, |_, image| &(image * image) == image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Scalar;

    fn small() -> CorpusSpec {
        CorpusSpec { random: 20, seed: 0 }
    }

    fn corner_map() -> MatLinearMap {
        let e11 = ExactMatrix::unit(Field::Q, 2, 0, 0);
        MatLinearMap::left_right(&e11, &e11)
    }

    #[test]
    fn corpus_shape() {
        let c = standard_corpus(Field::Q, 3, small());
        assert_eq!(c.len(), 4 + 9 + 20);
        assert!(c[0].is_identity());
        assert!(c[3].is_zero());
        let ranks: Vec<usize> = c[..4].iter().map(ExactMatrix::rank).collect();
        assert_eq!(ranks, vec![3, 2, 1, 0]);
    }

    #[test]
    fn rank_preservation_examples() {
        assert_eq!(
            preserves_normalized_rank(&MatLinearMap::embed_canonical(Field::Q, 2, 3), small()),
            Verdict::PassedSamples { samples: 3 + 4 + 20 }
        );
        let v = preserves_normalized_rank(&corner_map(), small());
        assert_eq!(v, Verdict::CertifiedFail(Witness::Element(ExactMatrix::identity(Field::Q, 2))));
        assert!(violates_rank(&corner_map(), &ExactMatrix::identity(Field::Q, 2)));
    }

    #[test]
    fn det_preservation_examples() {
        let double = MatLinearMap::identity(Field::Q, 2).scale(&Scalar::from_int(Field::Q, 2));
        let v = preserves_normalized_det(&double, small());
        assert_eq!(v, Verdict::CertifiedFail(Witness::Element(ExactMatrix::identity(Field::Q, 2))));
        assert!(!preserves_normalized_det(&MatLinearMap::transpose_map(Field::Q, 3), small()).is_fail());
        assert!(!preserves_normalized_det(&MatLinearMap::transpose_map(Field::Qi, 2), small()).is_fail());
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_check(&MatLinearMap::transpose_map(Field::Q, 3)), Verdict::Certified);
        let double = MatLinearMap::identity(Field::Q, 2).scale(&Scalar::from_int(Field::Q, 2));
        let one = ExactMatrix::identity(Field::Q, 2);
        assert_eq!(jordan_check(&double), Verdict::CertifiedFail(Witness::Pair(one.clone(), one)));
        // non-unital but Jordan: a ↦ diag(a, 0)
        let pad = MatLinearMap::from_fn(Field::Q, 2, 3, |a| {
            ExactMatrix::block_diag(&[a.clone(), ExactMatrix::zeros(Field::Q, 1, 1)])
        });
        assert_eq!(jordan_check(&pad), Verdict::Certified);
        assert!(jordan_check(&corner_map()).is_fail());
    }

    #[test]
    fn idempotent_examples() {
        let double = MatLinearMap::identity(Field::Q, 2).scale(&Scalar::from_int(Field::Q, 2));
        assert_eq!(
            maps_idempotents_to_idempotents(&double, small()),
            Verdict::CertifiedFail(Witness::Element(ExactMatrix::unit(Field::Q, 2, 0, 0)))
        );
        assert!(!maps_idempotents_to_idempotents(&MatLinearMap::transpose_map(Field::Q, 3), small()).is_fail());
    }
}
