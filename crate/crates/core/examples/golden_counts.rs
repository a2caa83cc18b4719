//! Prints the golden count table from the naive all-pairs filter.
//!
//!     cargo run -p lipz-core --example golden_counts > crates/core/tests/data/counts.csv

use lipz_core::enumerate::count_table_csv;
use lipz_core::{naive_count, EnumSpec, Rational};

fn main() {
    let caps = [
        Rational::from_integer(1),
        Rational::new(3, 2),
        Rational::from_integer(2),
        Rational::from_integer(3),
    ];
    let mut specs = Vec::new();
    for n in 1..=7 {
        for &kf in &caps {
            for &kb in &caps {
                specs.push(EnumSpec::new(n, kf, kb).expect("valid spec"));
            }
        }
    }
    let counts: Vec<u64> = specs
        .iter()
        .map(|s| naive_count(s).expect("n <= 8"))
        .collect();
    print!("{}", count_table_csv(specs.iter().zip(counts)));
}
