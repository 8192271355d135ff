//! Writes a batch of |Y_n| samples, one decimal value per line.
//!
//! cargo run --release --example export_batch -- 3 64 10000 > batch.txt

use std::io::{self, BufWriter};

use sphere_khintchine::analytic::Dimension;
use sphere_khintchine::sampler::{collect_batch, RandomStream, SampleKind};

fn main() -> io::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (n_dim, n, m) = match args[..] {
        [d, n, m] => (d, n, m),
        [] => (3, 64, 10_000),
        _ => panic!("usage: export_batch [N n M]"),
    };
    let d = Dimension::new(n_dim as u32).expect("N >= 1");
    let kind = SampleKind::normalized_sum(n as usize, d).expect("n >= 1");
    let batch = collect_batch(&kind, m as usize, &RandomStream::new(0, 0)).expect("M >= 1");
    batch.write_lines(BufWriter::new(io::stdout().lock()))
}
