//! The planar map and edge subset encoded by a word.
//!
//! `cargo run --example build_map -- HCchHChF`
use burgers::map::{build_map_from_word, unicycle_geometry};
use burgers::Word;

fn main() -> burgers::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "HChF".into());
    let word: Word = text.parse()?;
    let m = build_map_from_word(&word)?;
    m.check_invariants(&word)?;
    println!("{} vertices, {} edges, {} faces", m.map.vertex_count(), m.map.n_edges(), m.map.face_count());
    for e in 0..m.map.n_edges() {
        let (a, b) = m.map.endpoints(e);
        let tag = if m.config.tree_edges().contains(&e) { "tree" } else if m.config.contains(e) { "extra" } else { "" };
        println!("edge {e}: {a} - {b} {tag}");
    }
    if m.k == 1 {
        println!("cycle (length, area) = {:?}", unicycle_geometry(&m)?);
    }
    println!("{}", serde_json::to_string_pretty(&m.to_json())?);
    Ok(())
}
