//! Deterministic Monte Carlo engine for sums of uniform vectors on
//! `S^{N-1}` and for Gaussian comparison vectors.
//!
//! Every sample of a batch draws from its own position of a ChaCha8 stream,
//! so sample `i` of `(seed, stream_index)` is the same value no matter how
//! the batch is split into ranges or across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::analytic::{Dimension, MomentOrder};
use crate::error::{Error, Result};
use crate::orlicz::SampleBatch;

/// Default number of samples per batch.
pub const DEFAULT_SAMPLES: usize = 200_000;

/// Gaussian draws with a smaller norm are rejected before normalizing.
const MIN_GAUSSIAN_NORM: f64 = 1e-300;

/// Words of ChaCha output reserved for each sample position.
const WORDS_PER_POSITION_LOG2: u32 = 32;

/// Seedable, splittable source of randomness.
///
/// `(seed, stream_index)` identifies an independent ChaCha8 stream; each
/// stream is further divided into positions of `2^32` words, one per sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    seed: u64,
    stream_index: u64,
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

impl RandomStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let key = ChaCha8Rng::seed_from_u64(seed).get_seed();
        RandomStream {
            seed,
            stream_index,
            key,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Sibling stream with the same seed.
    pub fn with_index(&self, stream_index: u64) -> Self {
        RandomStream {
            stream_index,
            ..self.clone()
        }
    }

    /// Generator positioned at the start of sample `position`.
    pub fn rng_at(&self, position: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(self.stream_index);
        rng.set_word_pos(u128::from(position) << WORDS_PER_POSITION_LOG2);
        rng
    }
}

/// Coefficients `a_1, …, a_n` with their cached Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    a: Vec<f64>,
    norm: f64,
}

impl CoefficientVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::domain("coefficients", "need at least one coefficient"));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("coefficients", "must be finite"));
        }
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(CoefficientVector { a, norm })
    }

    /// `a_j = 1/sqrt(n)` for `j = 1..n`.
    pub fn normalized_ones(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n", "must be at least 1"));
        }
        CoefficientVector::new(vec![1.0 / (n as f64).sqrt(); n])
    }

    /// Coordinates i.i.d. uniform on `[-1, 1]`.
    pub fn uniform_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        CoefficientVector::new((0..n).map(|_| rng.random_range(-1.0..=1.0)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `sqrt(Σ a_j²)`.
    pub fn l2_norm(&self) -> f64 {
        self.norm
    }

    pub fn l1_norm(&self) -> f64 {
        self.a.iter().map(|v| v.abs()).sum()
    }

    pub fn reversed(&self) -> Self {
        let mut a = self.a.clone();
        a.reverse();
        CoefficientVector { a, norm: self.norm }
    }
}

/// A point of `S^{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    coordinates: Vec<f64>,
}

impl UnitVector {
    pub fn coordinates(&self) -> &[f64] {
        &self.coordinates
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }
}

fn fill_gaussian<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) -> f64 {
    let mut sq = 0.0;
    for x in out.iter_mut() {
        *x = rng.sample(StandardNormal);
        sq += *x * *x;
    }
    sq.sqrt()
}

/// Fills `out` with a uniform point of the sphere (a normalized Gaussian).
fn fill_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let norm = fill_gaussian(rng, out);
        if norm >= MIN_GAUSSIAN_NORM {
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

/// One uniform draw from `S^{N-1}`.
pub fn sample_uniform_sphere<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> UnitVector {
    let mut coordinates = vec![0.0; dim.get() as usize];
    fill_sphere(rng, &mut coordinates);
    UnitVector { coordinates }
}

/// Reusable buffers for weighted sums.
struct Scratch {
    point: Vec<f64>,
    acc: Vec<f64>,
}

impl Scratch {
    fn new(dim: Dimension) -> Self {
        let n = dim.get() as usize;
        Scratch {
            point: vec![0.0; n],
            acc: vec![0.0; n],
        }
    }

    fn weighted_sum_norm<R: Rng + ?Sized>(&mut self, a: &[f64], rng: &mut R) -> f64 {
        self.acc.iter_mut().for_each(|x| *x = 0.0);
        for &aj in a {
            fill_sphere(rng, &mut self.point);
            for (s, x) in self.acc.iter_mut().zip(&self.point) {
                *s += aj * x;
            }
        }
        self.acc.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn gaussian_norm<R: Rng + ?Sized>(&mut self, sigma: f64, rng: &mut R) -> f64 {
        sigma * fill_gaussian(rng, &mut self.point)
    }
}

/// One realization of `‖Σ a_j X_j‖` with `X_j` i.i.d. uniform on `S^{N-1}`.
pub fn sample_weighted_sum_norm<R: Rng + ?Sized>(
    a: &CoefficientVector,
    dim: Dimension,
    rng: &mut R,
) -> f64 {
    Scratch::new(dim).weighted_sum_norm(a.as_slice(), rng)
}

/// One realization of `‖Y_n‖`, `Y_n = n^{-1/2} Σ_{j<=n} X_j`.
pub fn sample_yn_norm<R: Rng + ?Sized>(n: usize, dim: Dimension, rng: &mut R) -> Result<f64> {
    let a = CoefficientVector::normalized_ones(n)?;
    Ok(sample_weighted_sum_norm(&a, dim, rng))
}

fn check_variance(variance_scale: f64) -> Result<()> {
    if !(variance_scale > 0.0) || !variance_scale.is_finite() {
        return Err(Error::domain(
            "variance_scale",
            format!("must be positive and finite, got {variance_scale}"),
        ));
    }
    Ok(())
}

/// One realization of `‖Z‖`, `Z ~ N(0, variance_scale · I_N)`.
pub fn sample_gaussian_norm<R: Rng + ?Sized>(
    dim: Dimension,
    variance_scale: f64,
    rng: &mut R,
) -> Result<f64> {
    check_variance(variance_scale)?;
    Ok(Scratch::new(dim).gaussian_norm(variance_scale.sqrt(), rng))
}

/// What a batch samples.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleKind {
    /// `‖Σ a_j X_j‖`.
    WeightedSum {
        coefficients: CoefficientVector,
        dim: Dimension,
    },
    /// `‖Z‖` for `Z ~ N(0, variance_scale · I_N)`.
    Gaussian { dim: Dimension, variance_scale: f64 },
}

impl SampleKind {
    pub fn weighted_sum(coefficients: CoefficientVector, dim: Dimension) -> Self {
        SampleKind::WeightedSum { coefficients, dim }
    }

    /// `‖Y_n‖`.
    pub fn normalized_sum(n: usize, dim: Dimension) -> Result<Self> {
        Ok(SampleKind::WeightedSum {
            coefficients: CoefficientVector::normalized_ones(n)?,
            dim,
        })
    }

    pub fn gaussian(dim: Dimension, variance_scale: f64) -> Result<Self> {
        check_variance(variance_scale)?;
        Ok(SampleKind::Gaussian {
            dim,
            variance_scale,
        })
    }

    fn dim(&self) -> Dimension {
        match self {
            SampleKind::WeightedSum { dim, .. } | SampleKind::Gaussian { dim, .. } => *dim,
        }
    }
}

const PAR_CHUNK: u64 = 4096;

/// Samples at positions `start .. start + count` of `stream`.
pub fn collect_range(kind: &SampleKind, stream: &RandomStream, start: u64, count: usize) -> Vec<f64> {
    let end = start + count as u64;
    let chunks: Vec<(u64, u64)> = (start..end)
        .step_by(PAR_CHUNK as usize)
        .map(|lo| (lo, (lo + PAR_CHUNK).min(end)))
        .collect();
    let parts: Vec<Vec<f64>> = chunks
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut scratch = Scratch::new(kind.dim());
            (lo..hi)
                .map(|pos| {
                    let mut rng = stream.rng_at(pos);
                    match kind {
                        SampleKind::WeightedSum { coefficients, .. } => {
                            scratch.weighted_sum_norm(coefficients.as_slice(), &mut rng)
                        }
                        SampleKind::Gaussian { variance_scale, .. } => {
                            scratch.gaussian_norm(variance_scale.sqrt(), &mut rng)
                        }
                    }
                })
                .collect()
        })
        .collect();
    parts.concat()
}

/// A batch of `m` samples from positions `0..m` of `stream`.
pub fn collect_batch(kind: &SampleKind, m: usize, stream: &RandomStream) -> Result<SampleBatch> {
    if m == 0 {
        return Err(Error::domain("samples", "batch size must be at least 1"));
    }
    SampleBatch::new(collect_range(kind, stream, 0, m))
}

/// Mean of `s_i^{2k}`.
pub fn empirical_even_moment(batch: &SampleBatch, k: MomentOrder) -> f64 {
    moment_with_error(batch, k).0
}

/// Mean of `s_i^{2k}` and its standard error `sd / sqrt(M)`.
pub fn moment_with_error(batch: &SampleBatch, k: MomentOrder) -> (f64, f64) {
    let m = batch.len() as f64;
    let p = 2 * k.get() as i32;
    let mean = compensated_sum(batch.values().iter().map(|s| s.powi(p))) / m;
    if batch.len() < 2 {
        return (mean, 0.0);
    }
    let var = compensated_sum(batch.values().iter().map(|s| (s.powi(p) - mean).powi(2))) / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// Neumaier summation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Fraction of samples strictly greater than `t`.
pub fn empirical_tail(batch: &SampleBatch, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("t", format!("must be positive, got {t}")));
    }
    let above = batch.values().iter().filter(|&&s| s > t).count();
    Ok(above as f64 / batch.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn batch(v: &[f64]) -> SampleBatch {
        SampleBatch::new(v.to_vec()).unwrap()
    }

    #[test]
    fn same_position_same_values() {
        let s = RandomStream::new(42, 3);
        let a: u64 = s.rng_at(17).random();
        let b: u64 = s.rng_at(17).random();
        assert_eq!(a, b);
        let c: u64 = s.rng_at(18).random();
        let d: u64 = s.with_index(4).rng_at(17).random();
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_ne!(a, RandomStream::new(43, 3).rng_at(17).random::<u64>());
    }

    #[test]
    fn sphere_points_have_unit_norm() {
        let mut rng = RandomStream::new(1, 0).rng_at(0);
        for n in [1, 2, 3, 7, 50] {
            for _ in 0..200 {
                let u = sample_uniform_sphere(dim(n), &mut rng);
                assert_eq!(u.dimension(), n as usize);
                let norm: f64 = u.coordinates().iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_dimensional_sphere_is_a_sign() {
        let mut rng = RandomStream::new(5, 0).rng_at(0);
        for _ in 0..100 {
            let x = sample_uniform_sphere(dim(1), &mut rng).coordinates()[0];
            assert!(x == 1.0 || x == -1.0);
        }
    }

    #[test]
    fn coefficient_vector_norms() {
        let a = CoefficientVector::new(vec![3.0, -4.0]).unwrap();
        assert_eq!(a.l2_norm(), 5.0);
        assert_eq!(a.l1_norm(), 7.0);
        assert!(CoefficientVector::new(vec![]).is_err());
        assert!(CoefficientVector::new(vec![f64::NAN]).is_err());
        assert!(CoefficientVector::normalized_ones(0).is_err());
        let y = CoefficientVector::normalized_ones(16).unwrap();
        assert!((y.l2_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn single_coefficient_gives_its_magnitude() {
        let mut rng = RandomStream::new(9, 0).rng_at(0);
        let a = CoefficientVector::new(vec![-2.5]).unwrap();
        for n in [1, 3, 6] {
            let v = sample_weighted_sum_norm(&a, dim(n), &mut rng);
            assert!((v - 2.5).abs() < 1e-12);
        }
        assert!((sample_yn_norm(1, dim(4), &mut rng).unwrap() - 1.0).abs() < 1e-12);
        let zeros = CoefficientVector::new(vec![0.0; 5]).unwrap();
        assert_eq!(sample_weighted_sum_norm(&zeros, dim(3), &mut rng), 0.0);
    }

    #[test]
    fn gaussian_variance_is_validated() {
        let mut rng = RandomStream::new(0, 0).rng_at(0);
        assert!(sample_gaussian_norm(dim(3), 0.0, &mut rng).is_err());
        assert!(sample_gaussian_norm(dim(3), -1.0, &mut rng).is_err());
        assert!(SampleKind::gaussian(dim(3), f64::NAN).is_err());
    }

    #[test]
    fn gaussian_same_seed_scales_exactly() {
        let s = RandomStream::new(11, 2);
        let one = sample_gaussian_norm(dim(4), 1.0, &mut s.rng_at(0)).unwrap();
        let four = sample_gaussian_norm(dim(4), 4.0, &mut s.rng_at(0)).unwrap();
        assert_eq!(four, 2.0 * one);
    }

    #[test]
    fn batch_partitions_agree() {
        let kind = SampleKind::normalized_sum(3, dim(2)).unwrap();
        let s = RandomStream::new(0, 0);
        let whole = collect_batch(&kind, 10, &s).unwrap();
        let mut parts = collect_range(&kind, &s, 0, 5);
        parts.extend(collect_range(&kind, &s, 5, 5));
        assert_eq!(whole.values(), &parts[..]);
        assert_eq!(collect_batch(&kind, 1, &s).unwrap().len(), 1);
        assert!(collect_batch(&kind, 0, &s).is_err());
    }

    #[test]
    fn moments_by_hand() {
        assert_eq!(empirical_even_moment(&batch(&[1.0; 4]), MomentOrder(3)), 1.0);
        assert_eq!(empirical_even_moment(&batch(&[0.3, 2.0]), MomentOrder(0)), 1.0);
        assert_eq!(empirical_even_moment(&batch(&[1.0, 2.0]), MomentOrder(2)), 8.5);
        let (_, se) = moment_with_error(&batch(&[1.0; 10]), MomentOrder(2));
        assert_eq!(se, 0.0);
        let v = 0.1f64;
        let (mean, _) = moment_with_error(&batch(&vec![v; 200_000]), MomentOrder(1));
        assert_eq!(mean, v * v);
    }

    #[test]
    fn tails_by_hand() {
        let b = batch(&[0.5, 1.5, 2.5]);
        assert_eq!(empirical_tail(&b, 3.0).unwrap(), 0.0);
        assert_eq!(empirical_tail(&b, 0.1).unwrap(), 1.0);
        assert!((empirical_tail(&b, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(empirical_tail(&b, 2.5).unwrap(), 0.0);
        assert!(empirical_tail(&b, 0.0).is_err());
    }
}
