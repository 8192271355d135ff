//! Taylor series of f(x) = (1 - 2x/N)^(-N/2) against the closed form, and
//! the point x = 1/b(N)^2 where f equals 2.

use sphere_khintchine::analytic::{
    best_constant, kk_even_moment_constant, mgf_closed_form, mgf_series, Dimension, MomentOrder,
    DEFAULT_MAX_TERMS,
};

fn main() {
    for n in [1, 2, 3, 10] {
        let d = Dimension::new(n).unwrap();
        println!("N = {n}: b~(2k)^(2k) for k = 0..6:");
        let consts: Vec<String> = (0..=6)
            .map(|k| format!("{:.6}", kk_even_moment_constant(d, MomentOrder(k))))
            .collect();
        println!("  {}", consts.join("  "));

        let critical = best_constant(d).powi(-2);
        for x in [0.0, 0.25 * d.as_f64() / 2.0, critical, 0.98 * d.as_f64() / 2.0] {
            let s = mgf_series(d, x, 1e-13, DEFAULT_MAX_TERMS).unwrap();
            let f = mgf_closed_form(d, x).unwrap();
            println!(
                "  x = {x:<8.5} series = {:<20.15} closed = {f:<20.15} terms = {:<5} converged = {}",
                s.value, s.terms_used, s.converged
            );
        }
        println!("  f(1/b(N)^2) = {:.15}", mgf_closed_form(d, critical).unwrap());
    }
}
