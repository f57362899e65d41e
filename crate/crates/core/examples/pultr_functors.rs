//! Pattern functors: the arc-graph pattern reproduces the arc graph, and the
//! blue/red pattern splits a height-one tree by level parity.

use homdual::arcgraph::arc_graph;
use homdual::pultr::{arc_graph_pattern, blue_red_pattern, blue_red_quotients, psi, psi_inverse};
use homdual::{hom_exists, Digraph};

fn main() -> homdual::Result<()> {
    let t4 = Digraph::transitive_tournament(4);
    let via_pattern = psi(&arc_graph_pattern(), &t4)?;
    println!(
        "psi(arc pattern, T4) == arc graph of T4: {}",
        via_pattern.structure == *arc_graph(&t4).digraph
    );

    let br = blue_red_pattern();
    println!(
        "blue/red pattern images are vertex-disjoint: {}",
        br.vertex_disjoint()
    );
    let image = psi(&br, &t4)?;
    println!("psi(blue/red, T4): {}", image.structure);
    let back = psi_inverse(&br, &image.structure)?;
    println!("left adjoint of that image: {back}");
    println!("left adjoint maps back to T4: {}", hom_exists(&back, &t4)?);

    let (blue, red) = blue_red_quotients(&Digraph::directed_path(3))?;
    println!("blue quotient of P3: {blue}\nred quotient of P3: {red}");
    Ok(())
}
