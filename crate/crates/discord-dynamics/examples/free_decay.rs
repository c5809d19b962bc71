//! Free dephasing of the prepared Bell-diagonal state: the classical
//! correlation decays first while the discord holds constant, then the
//! roles swap at the critical time.
//!
//! Run: cargo run --release --example free_decay

use discord_dynamics::correlations::{critical_time, taylor_correlations};
use discord_dynamics::dynamics::{
    run_prep, run_sequence, EnsembleModel, PhysicsParams, PrepParams, PulseSequence,
};
use discord_dynamics::{classical_correlation, mutual_information, OptimizerConfig};

fn main() {
    let physics = PhysicsParams::default();
    let prep = run_prep(&PrepParams::default(), &physics).unwrap();
    let (c0, _) = prep.final_coeffs();
    println!(
        "prepared state: c = ({:+.5e}, {:+.5e}, {:+.5e})",
        c0.c1, c0.c2, c0.c3
    );

    let tc = critical_time(c0.c2, c0.c3, physics.t2e_star_ns).unwrap();
    println!("closed-form critical time: {:.2} ns\n", tc.t_ns);

    let times: Vec<f64> = (0..=40).map(|k| k as f64 * 10.0).collect();
    let seq = PulseSequence {
        events: vec![],
        readout_times: times,
    };
    let traj = run_sequence(&seq, &prep.final_state, &EnsembleModel::default(), &physics).unwrap();

    let optimizer = OptimizerConfig::default();
    println!(
        "{:>8}  {:>12}  {:>12}  {:>12}  {:>12}",
        "t (ns)", "I (bits)", "C (bits)", "D (bits)", "D taylor"
    );
    for s in traj.samples.iter().step_by(4) {
        let i = mutual_information(&s.state);
        let (c, _) = classical_correlation(&s.state, &optimizer).unwrap();
        let taylor = taylor_correlations(s.coeffs.c2, s.coeffs.c3).unwrap();
        println!(
            "{:>8.1}  {:>12.5e}  {:>12.5e}  {:>12.5e}  {:>12.5e}",
            s.t_ns,
            i,
            c,
            i - c,
            taylor.discord_bits
        );
    }
    println!(
        "\nbefore {:.0} ns the discord column is flat and C decays;",
        tc.t_ns
    );
    println!("after it C is flat and the discord decays.");
}
