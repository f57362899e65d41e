//! Bounded-height tree duality, decided by projection reachability and by
//! crushed cylinders.

use homdual::duality::{crushed_cylinder, has_bounded_height_tree_duality, BoundedHeightOptions};
use homdual::Digraph;

fn main() -> homdual::Result<()> {
    for (name, h) in [
        ("loop", Digraph::loop_vertex()),
        ("P2", Digraph::directed_path(2)),
        ("T3", Digraph::transitive_tournament(3)),
    ] {
        let reach = has_bounded_height_tree_duality(&h, BoundedHeightOptions::default())?;
        let cyl = has_bounded_height_tree_duality(
            &h,
            BoundedHeightOptions {
                exponential_budget: 0,
                ..Default::default()
            },
        )?;
        println!("{name}:\n{reach}{cyl}");
    }
    let c = crushed_cylinder(&Digraph::directed_path(2), 2)?;
    println!(
        "crushed cylinder of P2 with n = 2 has {} vertices and {} arcs",
        c.vertex_count(),
        c.arc_count()
    );
    Ok(())
}
