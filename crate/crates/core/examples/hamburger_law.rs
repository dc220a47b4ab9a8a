//! Number of hamburgers, hence vertices, of uniform tree-rooted maps.
use burgers::experiments::{run_j_distribution, ExperimentConfig};
use burgers::sampler::JDistribution;

fn main() -> burgers::Result<()> {
    let law = JDistribution::new(6).probabilities();
    let r = run_j_distribution(&ExperimentConfig::new(6, 0, 50_000, 7, 1))?;
    let total: u64 = r.histogram.iter().sum();
    for (j, (&c, p)) in r.histogram.iter().zip(&law).enumerate() {
        println!("J={j}: {:.4} vs {p:.4}", c as f64 / total as f64);
    }
    if let Some(chi) = r.chi_square {
        println!("chi-square {:.2} on {} dof, p {:.3}", chi.statistic, chi.dof, chi.p_value);
    }
    let big = run_j_distribution(&ExperimentConfig::new(10_000, 0, 2000, 7, 1))?;
    println!("n=10⁴: E[|E|/2|V|] = {:.4}, E[(|E|/2|V|)²] = {:.4}", big.ratio_moment_1.mean, big.ratio_moment_2.mean);
    Ok(())
}
