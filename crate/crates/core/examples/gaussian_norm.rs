//! Closed-form psi2 norm of a standard Gaussian vector against the plug-in
//! estimate from Monte Carlo samples.

use sphere_khintchine::analytic::{gaussian_psi2_norm_exact, Dimension};
use sphere_khintchine::orlicz::{empirical_orlicz_norm, YoungExponent};
use sphere_khintchine::sampler::{collect_batch, RandomStream, SampleKind, DEFAULT_SAMPLES};

fn main() {
    for n in [1, 2, 3, 4, 8] {
        let d = Dimension::new(n).unwrap();
        let kind = SampleKind::gaussian(d, 1.0).unwrap();
        let batch = collect_batch(&kind, DEFAULT_SAMPLES, &RandomStream::new(0, u64::from(n))).unwrap();
        let est = empirical_orlicz_norm(&batch, YoungExponent::PSI2, 1e-10).unwrap();
        let exact = gaussian_psi2_norm_exact(d);
        println!(
            "N = {n}: exact {exact:.6}  empirical {:.6}  ({:+.2}%, {} bisection steps)",
            est.value,
            100.0 * (est.value / exact - 1.0),
            est.iterations
        );
    }
}
