//! Finite duality by dismantling the square of the core to its diagonal.

use homdual::arcgraph::arc_graph;
use homdual::duality::finite_duality;
use homdual::pultr::{blue_red_pattern, psi};
use homdual::{Digraph, Structure};

fn main() -> homdual::Result<()> {
    let t4 = Digraph::transitive_tournament(4);
    let cases: Vec<(&str, Structure)> = vec![
        ("T4", t4.as_structure().clone()),
        ("P2", Digraph::directed_path(2).into_structure()),
        ("arc graph of T4", arc_graph(&t4).digraph.into_structure()),
        (
            "blue/red image of T4",
            psi(&blue_red_pattern(), &t4)?.structure,
        ),
    ];
    for (name, s) in cases {
        let check = finite_duality(&s)?;
        let d = &check.dismantling;
        println!(
            "{name}: core {} elements, square {} elements, finite duality {} ({} removals)",
            check.core.structure.size(),
            check.square.size(),
            if d.success { "yes" } else { "no" },
            d.sequence.len()
        );
    }
    Ok(())
}
