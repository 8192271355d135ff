//! Tail bound exp(-N q(t)), the gamma threshold and the I(p) bound, with a
//! Monte Carlo comparison for Y_100 in three dimensions.

use sphere_khintchine::analytic::{best_constant, Dimension};
use sphere_khintchine::sampler::{collect_batch, empirical_tail, RandomStream, SampleKind};
use sphere_khintchine::tailbounds::{
    gamma_threshold, ip_bound, zolotarev_tail_bound, GammaParameter, IpBoundInputs,
    DEFAULT_THRESHOLD_TOL,
};

fn main() {
    let d = Dimension::new(3).unwrap();
    let kind = SampleKind::normalized_sum(100, d).unwrap();
    let batch = collect_batch(&kind, 200_000, &RandomStream::new(0, 0)).unwrap();
    for t in [1.0, 1.25, 1.5, 2.0, 2.5] {
        println!(
            "t = {t:<4} P(|Y_100| > t) ~ {:<9.6} bound {:.6}",
            empirical_tail(&batch, t).unwrap(),
            zolotarev_tail_bound(d, t).unwrap()
        );
    }

    for g in [0.6, 0.75, 0.9] {
        let gamma = GammaParameter::new(g).unwrap();
        let t = gamma_threshold(gamma, DEFAULT_THRESHOLD_TOL).unwrap();
        let c = best_constant(d);
        // midpoint of the admissible interval (1, N C^2 gamma / 2)
        let p = 0.5 * (1.0 + d.as_f64() * c * c * g / 2.0);
        let inputs = IpBoundInputs::new(d, c, gamma, p).unwrap();
        let line = match ip_bound(&inputs) {
            Ok(v) => format!("p = {p:.4}, I(p) <= {v:.4}"),
            Err(e) => format!("p = {p:.4}: {e}"),
        };
        println!("gamma = {g}: t* = {t:.6}; {line}");
    }
}
