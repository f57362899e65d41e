//! Sproinks of the path P4 obstruct the arc graph of T4.

use homdual::arcgraph::arc_graph;
use homdual::sproink::{enumerate_sproinks, thunderbolt};
use homdual::{hom_exists, Digraph};

fn main() -> homdual::Result<()> {
    let p4 = Digraph::directed_path(4);
    let target = arc_graph(&Digraph::transitive_tournament(4)).digraph;
    let bound = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(8);

    let mut by_size = std::collections::BTreeMap::new();
    for s in enumerate_sproinks(&p4, bound, true)? {
        assert!(!hom_exists(&s, &target)?);
        *by_size.entry(s.vertex_count()).or_insert(0usize) += 1;
    }
    println!("sproinks of P4 with at most {bound} vertices, by size: {by_size:?}");
    println!("none of them maps to the arc graph of T4");

    for j in 0..3 {
        println!("thunderbolt {j}: {}", thunderbolt(j));
    }
    Ok(())
}
