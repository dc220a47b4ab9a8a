//! Exit law of the walk from (1, 1) and its power-law tails.
use burgers::quadrant::{exact_dp, exact_dp_rational, tail_report};

fn main() -> burgers::Result<()> {
    let dist = exact_dp(1000)?;
    for t in 1..=5 {
        let row: Vec<String> = (1..=t + 1).map(|s| format!("{:.4}", dist.prob(t, s))).collect();
        println!("t={t}: {}", row.join(" "));
    }
    let report = tail_report(&dist);
    println!("target 4/π = {:.5}", report.target);
    for r in &report.time {
        println!("j={:>5}  j P[t > j] = {:.5}", r.j, r.scaled_tail);
    }
    for r in &report.distance {
        println!("l={:>4}  l² P[s > l] = {:.5}", r.l, r.scaled_tail);
    }
    let exact = exact_dp_rational(100)?;
    println!("exact mass conserved at t_max 100: {}", exact.conserves_mass());
    Ok(())
}
