//! Table of b(N) and its approach to 1/sqrt(ln 2).
//!
//! cargo run --example best_constant -- 1 2 3 10 100

use sphere_khintchine::analytic::{
    asymptotic_limit, best_constant, gaussian_psi2_norm_exact, Dimension,
};

fn main() {
    let dims: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("dimension must be a positive integer"))
        .collect();
    let dims = if dims.is_empty() { vec![1, 2, 3, 4, 8, 16, 100, 1_000_000] } else { dims };

    println!("{:>9} {:>20} {:>20} {:>14}", "N", "b(N)", "sqrt(N) b(N)", "b(N) - limit");
    for n in dims {
        let d = Dimension::new(n).expect("N >= 1");
        let b = best_constant(d);
        assert!((d.as_f64().sqrt() * b / gaussian_psi2_norm_exact(d) - 1.0).abs() < 1e-14);
        println!(
            "{:>9} {:>20.16} {:>20.16} {:>14.6e}",
            n,
            b,
            d.as_f64().sqrt() * b,
            b - asymptotic_limit()
        );
    }
    println!("limit 1/sqrt(ln 2) = {:.16}", asymptotic_limit());
}
