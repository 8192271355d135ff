//! The psi2 norm of Y_n = n^(-1/2) sum X_j approaches b(N) as n grows.
//!
//! cargo run --release --example tightness -- 3

use sphere_khintchine::experiment::{run_tightness, ExperimentConfig};

fn main() {
    let n_dim: u32 = std::env::args().nth(1).map_or(3, |a| a.parse().expect("N"));
    let config = ExperimentConfig {
        dims: vec![n_dim],
        ns: vec![1, 4, 16, 64, 256],
        ..ExperimentConfig::default()
    };
    let report = run_tightness(&config).expect("valid config");
    for row in &report.rows {
        println!(
            "n = {:<4} |Y_n|_psi2 ~ {:.5}   b(N) = {:.5}   ratio {:.4}",
            row.n.unwrap(),
            row.measured,
            row.reference,
            row.extras[0]
        );
    }
}
