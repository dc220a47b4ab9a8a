//! Short windows of a large random word look like i.i.d. uniform letters.
use burgers::experiments::{run_subword_uniformity, ExperimentConfig};

fn main() -> burgers::Result<()> {
    let r = run_subword_uniformity(&ExperimentConfig::new(100_000, 0, 5000, 5, 1), 16)?;
    println!("letters H C h c: {:?}", r.letters);
    println!("letter TV {:.4}, chi-square p {:.3}", r.letter_tv, r.letter_chi_square.p_value);
    println!("bigram TV {:.4}, chi-square p {:.3}", r.bigram_tv, r.bigram_chi_square.p_value);
    Ok(())
}
