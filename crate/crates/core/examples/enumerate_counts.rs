//! Exact counts of perfect words and the moment ratios they give.
use burgers::enumeration::{injection_image_count, moment_ratio, theta0_count, theta_k_bruteforce};

fn main() -> burgers::Result<()> {
    println!("n  |Θ⁰_n|  |Θ¹_n|  |Θ²_n|  injection(k=1)  Θ¹/(nΘ⁰)");
    for n in 1..=6 {
        println!(
            "{n}  {}  {}  {}  {}  {}",
            theta0_count(n as u64),
            theta_k_bruteforce(n, 1)?,
            theta_k_bruteforce(n, 2)?,
            injection_image_count(n, 1)?,
            moment_ratio(n, 1)?
        );
    }
    Ok(())
}
