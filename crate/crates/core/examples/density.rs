//! Monte Carlo sandpile densities of large random tree-rooted maps.
//!
//! `cargo run --release --example density -- 20000 200000`
use burgers::experiments::{exact_density, run_density, ExperimentConfig};

fn main() -> burgers::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(2000) as usize;
    let trials = args.get(1).copied().unwrap_or(20_000);
    let exact = exact_density(3)?;
    println!("n=3 exact: mean level {}, ρ_e {}, ρ_v {}", exact.mean_level, exact.rho_e, exact.rho_v);
    let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
    let r = run_density(&ExperimentConfig::new(n, 0, trials, 1, workers))?;
    println!("n={n}: ρ_e = {:.4} ± {:.4}", r.rho_e.value, r.rho_e.std_err);
    println!("n={n}: ρ_v = {:.4} ± {:.4}", r.rho_v.value, r.rho_v.std_err);
    println!("|Θ¹|/(n|Θ⁰|) = {:.4}, |Θ²|/(n²|Θ⁰|) = {:.5}", r.moment_ratio_1.value, r.moment_ratio_2.value);
    println!("Var[level]/n² = {:.5}", r.level_variance_over_n2);
    Ok(())
}
