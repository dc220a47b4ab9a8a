//! Uniform words with a chosen number of fresh orders.
//!
//! `cargo run --example sample_words -- 12 2`
use burgers::sampler::{RandomSource, ThetaKSampler};
use burgers::word::{loop_stats_from_word, validate};

fn main() -> burgers::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(10);
    let k = args.get(1).copied().unwrap_or(1);
    let mut rng = RandomSource::new(1);
    let mut sampler = ThetaKSampler::new(n, k)?;
    for _ in 0..5 {
        let w = sampler.sample(&mut rng)?;
        let loops = loop_stats_from_word(&w, &validate(&w)?)?;
        let geometry: Vec<_> = loops.iter().map(|r| (r.length, r.area)).collect();
        println!("{w}  loops (L, A) = {geometry:?}");
    }
    println!("{} proposals for 5 accepted words", sampler.proposals());
    Ok(())
}
