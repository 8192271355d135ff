//! Empirical even moments of a random weighted sum against the sphere
//! Khintchine constants.

use sphere_khintchine::analytic::{kk_upper_bound, Dimension, MomentOrder};
use sphere_khintchine::sampler::{
    collect_batch, moment_with_error, CoefficientVector, RandomStream, SampleKind,
};

fn main() {
    let d = Dimension::new(3).unwrap();
    let stream = RandomStream::new(1, 0);
    let a = CoefficientVector::uniform_random(8, &mut stream.rng_at(0)).unwrap();
    println!("a = {:.3?}, |a|_2 = {:.4}", a.as_slice(), a.l2_norm());

    let kind = SampleKind::weighted_sum(a.clone(), d);
    let batch = collect_batch(&kind, 200_000, &stream.with_index(1)).unwrap();
    for k in 0..=5 {
        let k = MomentOrder(k);
        let (mean, se) = moment_with_error(&batch, k);
        let bound = kk_upper_bound(d, k, a.as_slice());
        println!(
            "k = {}: E|sum a_j X_j|^{:<2} = {mean:>12.6} ± {se:<10.2e} bound {bound:>12.6}",
            k.get(),
            2 * k.get()
        );
    }
}
