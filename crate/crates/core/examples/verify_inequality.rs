//! Empirical psi2 norms of sums with random coefficients against
//! b(N) |a|_2.
//!
//! cargo run --release --example verify_inequality

use sphere_khintchine::analytic::{best_constant, Dimension};
use sphere_khintchine::orlicz::{empirical_orlicz_norm, YoungExponent};
use sphere_khintchine::sampler::{collect_batch, CoefficientVector, RandomStream, SampleKind};

fn main() {
    let samples = 100_000;
    for n_dim in [1, 2, 3, 8] {
        let d = Dimension::new(n_dim).unwrap();
        let b = best_constant(d);
        for n in [2, 8, 32] {
            let stream = RandomStream::new(42, (u64::from(n_dim) << 32) | n as u64);
            let a = CoefficientVector::uniform_random(n, &mut stream.rng_at(0)).unwrap();
            let batch =
                collect_batch(&SampleKind::weighted_sum(a.clone(), d), samples, &stream.with_index(1 << 63))
                    .unwrap();
            let norm = empirical_orlicz_norm(&batch, YoungExponent::PSI2, 1e-10).unwrap().value;
            let bound = b * a.l2_norm();
            println!("N = {n_dim:<2} n = {n:<3} empirical {norm:.5}  bound {bound:.5}  ratio {:.4}", norm / bound);
        }
    }
}
