//! Protection of correlations by the two-flip decoupling block: electron
//! flips at τ and 3τ refocus the static detunings, so the readout at 4τ
//! sees only the homogeneous and nuclear envelopes. The sudden-transition
//! time moves out by two orders of magnitude.
//!
//! Run: cargo run --release --example dd_protection

use discord_dynamics::cli::{dd_preserve, Model, RunConfig};
use discord_dynamics::correlations::critical_time;
use discord_dynamics::dynamics::{run_prep, PhysicsParams, PrepParams};

fn main() {
    let cfg = RunConfig::default();
    let physics = PhysicsParams::default();
    let (c0, _) = run_prep(&PrepParams::default(), &physics)
        .unwrap()
        .final_coeffs();
    let free_tc = critical_time(c0.c2, c0.c3, physics.t2e_star_ns)
        .unwrap()
        .t_ns;
    println!("free-decay critical time: {free_tc:.1} ns");

    let out = dd_preserve(&cfg, Model::Ensemble).unwrap();
    println!(
        "\n{:>10}  {:>12}  {:>12}  {:>6}",
        "4tau (ns)", "|c2|/|c2(0)|", "D (bits)", "regime"
    );
    let c2_0 = c0.c2.abs();
    for row in out.rows.iter().step_by(7) {
        println!(
            "{:>10.0}  {:>12.6}  {:>12.5e}  {:>6}",
            row.t_ns,
            row.coeffs.c2.abs() / c2_0,
            row.discord_bits,
            row.regime
        );
    }
    let crossing = out.summary.t_c_ns.unwrap();
    let factor = out.summary.prolongation_factor.unwrap();
    println!(
        "\ndecoupled transition at 4tau = {:.2} us",
        crossing / 1000.0
    );
    println!("prolongation over free decay: {factor:.0}x");
}
