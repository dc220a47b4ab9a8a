//! Recurrent sandpiles on a small graph, sorted by level.
use burgers::sandpile::{densities, enumerate_recurrent, level_generating_function};
use burgers::MultiGraph;

const K4_WITH_LOOP: &str = "4 7 0\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n3 3\n";

fn main() -> burgers::Result<()> {
    let g: MultiGraph = K4_WITH_LOOP.parse()?;
    let mut rec = enumerate_recurrent(&g)?;
    rec.sort_by_key(|(_, level)| *level);
    for (c, level) in rec.iter().take(8) {
        println!("level {level}: {:?}", c.grains());
    }
    println!("... {} recurrent configurations", rec.len());
    println!("levels: {:?}", level_generating_function(&g)?);
    let d = densities(&g)?;
    println!("mean mass {}, per edge {}, per vertex {}", d.mean_mass, d.rho_e, d.rho_v);
    Ok(())
}
