//! Length and area of the loops of random spanning unicycles, against the
//! quadrant exit law.
use burgers::experiments::{run_loop_law, ExperimentConfig};

fn main() -> burgers::Result<()> {
    let r = run_loop_law(&ExperimentConfig::new(1000, 1, 2000, 3, 1))?;
    println!("{} proposals for {} loops, TV on window {:.4}", r.proposals, r.loops, r.window_tv);
    println!("P[L=1] {:.4} vs P[s=1] {:.4}", r.p_length_1, r.quad_s_1);
    println!("P[A=1] {:.4} vs P[t=1] {:.4}", r.p_area_1, r.quad_t_1);
    for &(l, a, emp, lim) in r.joint.iter().filter(|j| j.0 <= 2 && j.1 <= 6 && j.3 > 0.0) {
        println!("(L, A) = ({l}, {a}): {emp:.4} vs {lim:.4}");
    }
    let two = run_loop_law(&ExperimentConfig::new(1000, 2, 500, 4, 1))?;
    println!("k=2: unnested {:.3}, corr(L1, L2) {:.3}", two.alternating_fraction, two.length_correlation.unwrap_or(f64::NAN));
    Ok(())
}
