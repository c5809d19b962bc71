//! Correlation quantifiers across the Bell-diagonal family: the numeric
//! measurement optimization against the closed forms, the geometric
//! discord against its restricted-family minimization, and the small-c
//! Taylor limit where geometric/entropic -> ln 2.
//!
//! Run: cargo run --release --example bell_family

use discord_dynamics::correlations::{
    classical_correlation_analytic_bell, discord_analytic_bell, geometric_discord_analytic,
    geometric_discord_restricted_numeric, taylor_correlations, LN_2,
};
use discord_dynamics::states::BellDiagonalCoeffs;
use discord_dynamics::{quantum_discord, OptimizerConfig};

fn main() {
    let cfg = OptimizerConfig::default();

    println!("Werner-like slice c = (x, -x, x):");
    println!(
        "{:>6}  {:>12}  {:>12}  {:>12}  {:>12}",
        "x", "D numeric", "D analytic", "geo", "geo restr."
    );
    for k in 0..=8 {
        let x = k as f64 / 8.0;
        let c = BellDiagonalCoeffs::new(x, -x, x).unwrap();
        let numeric = quantum_discord(&c.to_density(), &cfg).unwrap();
        println!(
            "{:>6.3}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}",
            x,
            numeric,
            discord_analytic_bell(&c),
            geometric_discord_analytic(&c),
            geometric_discord_restricted_numeric(&c)
        );
    }

    println!("\nsmall-coefficient regime (c1 = 0): geometric/entropic -> ln 2 = {LN_2:.6}");
    println!(
        "{:>8}  {:>8}  {:>12}  {:>12}  {:>10}",
        "c2", "c3", "D taylor", "D exact", "geo/D"
    );
    for (c2, c3) in [(0.02, 0.008), (0.015, 0.006), (0.01, 0.004), (0.005, 0.002)] {
        let c = BellDiagonalCoeffs::new(0.0, c2, c3).unwrap();
        let taylor = taylor_correlations(c2, c3).unwrap();
        let exact = discord_analytic_bell(&c);
        let ratio = geometric_discord_analytic(&c) / exact;
        println!(
            "{:>8.4}  {:>8.4}  {:>12.4e}  {:>12.4e}  {:>10.6}",
            c2, c3, taylor.discord_bits, exact, ratio
        );
    }

    println!("\nclassical correlation at the piecewise boundary c2 = c3:");
    for x in [0.3, 0.1, 0.02] {
        let c = BellDiagonalCoeffs::new(0.0, x, x).unwrap();
        println!(
            "  x = {x}: C = {:.6e}, D = {:.6e}",
            classical_correlation_analytic_bell(&c),
            discord_analytic_bell(&c)
        );
    }
}
