//! Tree duality via the power-set structure.

use homdual::duality::{has_tree_duality, power_set_structure};
use homdual::Digraph;

fn main() -> homdual::Result<()> {
    let cases = [
        ("T4", Digraph::transitive_tournament(4)),
        ("P1", Digraph::directed_path(1)),
        ("P3", Digraph::directed_path(3)),
        ("C3", Digraph::directed_cycle(3)),
        ("C4", Digraph::directed_cycle(4)),
    ];
    for (name, h) in cases {
        let u = power_set_structure(&h)?;
        println!(
            "{name}: power structure has {} elements and {} tuples, tree duality {}",
            u.size(),
            u.tuple_count(),
            if has_tree_duality(&h)? { "yes" } else { "no" }
        );
    }
    Ok(())
}
