//! Tutte polynomial of a graph and the sandpile counts it predicts.
use burgers::sandpile::level_generating_function;
use burgers::tutte::{excess_counts, spanning_tree_count_oracle, tutte};
use burgers::MultiGraph;

const PRISM: &str = "6 9 0\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n0 3\n1 4\n2 5\n";

fn main() -> burgers::Result<()> {
    let g: MultiGraph = PRISM.parse()?;
    let t = tutte(&g)?;
    for (i, row) in t.coeffs().iter().enumerate() {
        for (j, &c) in row.iter().enumerate().filter(|(_, &c)| c > 0) {
            println!("{c} x^{i} y^{j}");
        }
    }
    println!("T(1,1) = {}, matrix-tree = {}", t.eval(1, 1), spanning_tree_count_oracle(&g));
    println!("T(1,y) = {:?}", t.at_x_one());
    println!("levels = {:?}", level_generating_function(&g)?);
    println!("|U_l| = {:?}", excess_counts(&g)?);
    Ok(())
}
