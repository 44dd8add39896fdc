//! Pearson correlation with a seeded permutation test, and the exact test
//! for small samples.
//!
//! ```text
//! cargo run --release --example correlation
//! ```

use fsanalysis::stats::{pearson, permutation_test, permutation_test_with, PermutationMode};
use fsanalysis::synthetic::{sample_values, Shape};

fn main() -> fsanalysis::Result<()> {
    let noise = sample_values(Shape::Gaussian, 33, 2);
    let x: Vec<f64> = (0..33).map(|d| d as f64).collect();
    let related: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| 0.1 * a + 0.5 * e).collect();
    let unrelated = sample_values(Shape::Gaussian, 33, 3);

    for (name, y) in [("related", &related), ("unrelated", &unrelated)] {
        let report = permutation_test(&x, y, 999, 1)?;
        println!(
            "{name:<10} r = {:>7.4}, p = {:.3} (R = {})",
            report.r, report.p_value, report.permutations
        );
    }

    let x = [1.0, 2.0, 3.0, 4.0, 5.0];
    let y = [1.2, 1.9, 3.4, 3.9, 5.3];
    let exact = permutation_test_with(&x, &y, PermutationMode::Exhaustive, 0, false)?;
    println!(
        "n = 5: r = {:.4}, exact p = {} over {} orderings",
        pearson(&x, &y)?,
        exact.p_value,
        exact.permutations
    );

    // NaN marks a missing value; those pairs are dropped.
    let with_gaps = [1.0, f64::NAN, 3.0, 4.0, 5.0];
    let report = permutation_test(&with_gaps, &y, 99, 1)?;
    println!(
        "with a gap: {} complete pairs, r = {:.4}",
        report.n_pairs, report.r
    );
    Ok(())
}
