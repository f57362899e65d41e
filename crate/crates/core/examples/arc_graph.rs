//! The arc graph of the transitive tournament on four vertices, its core, and
//! the left adjoint applied back.

use homdual::arcgraph::{arc_graph, arc_graph_inverse};
use homdual::{core, hom_exists, Digraph};

fn main() -> homdual::Result<()> {
    let t4 = Digraph::transitive_tournament(4);
    let d = arc_graph(&t4);
    println!("arc graph of T4 has {} vertices:", d.digraph.vertex_count());
    for (i, (u, v)) in d.labels.iter().enumerate() {
        let succ: Vec<usize> = d.digraph.out_neighbours()[i].clone();
        println!("  {i} = arc {u}->{v}, followed by {succ:?}");
    }
    let c = core(&d.digraph);
    println!("core: {}", c.structure);

    let p3 = Digraph::directed_path(3);
    let back = arc_graph_inverse(&p3);
    println!("left adjoint of P3: {back}");
    println!(
        "P3 -> arc graph of T4: {}, its left adjoint -> T4: {}",
        hom_exists(&p3, &d.digraph)?,
        hom_exists(&back, &t4)?
    );
    Ok(())
}
