//! Near-unanimity functions and how they transfer along constructions.

use homdual::arcgraph::arc_graph;
use homdual::duality::{
    check_nuf, combine_nuf_product, lift_nuf_arc_graph, lift_nuf_pultr, restrict_nuf_core,
    search_nuf, NufCandidate,
};
use homdual::pultr::arc_graph_pattern;
use homdual::{core, Digraph};

fn main() -> homdual::Result<()> {
    let t4 = Digraph::transitive_tournament(4);
    let m = NufCandidate::median(t4.as_structure().clone());
    println!("median on T4: {:?}", check_nuf(&m));

    let lifted = lift_nuf_arc_graph(&m)?;
    println!(
        "lift to the arc graph ({} elements): {:?}",
        lifted.structure().size(),
        check_nuf(&lifted)
    );
    let double = lift_nuf_arc_graph(&lifted)?;
    println!(
        "double lift ({} elements): {:?}",
        double.structure().size(),
        check_nuf(&double)
    );
    let product = combine_nuf_product(&[m.clone(), lifted.clone()])?;
    println!(
        "on T4 x arc graph ({} elements): {:?}",
        product.structure().size(),
        check_nuf(&product)
    );
    let c = core(lifted.structure());
    let restricted = restrict_nuf_core(&lifted, &c.retraction)?;
    println!(
        "restricted to the core ({} elements): {:?}",
        restricted.structure().size(),
        check_nuf(&restricted)
    );
    let via_pattern = lift_nuf_pultr(&arc_graph_pattern(), &m)?;
    println!(
        "lift along the arc-graph pattern equals the direct lift: {}",
        via_pattern.structure() == arc_graph(&t4).digraph.as_structure()
            && via_pattern.table() == lifted.table()
    );

    let broken = NufCandidate::from_fn(t4.as_structure().clone(), 3, |args| args[0])?;
    println!("first projection: {}", check_nuf(&broken).unwrap_err());

    for (name, h) in [
        ("C3", Digraph::directed_cycle(3)),
        (
            "K3",
            Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])?,
        ),
    ] {
        let found = search_nuf(&h, 3)?;
        println!(
            "ternary near-unanimity function on {name}: {}",
            if found.is_some() { "found" } else { "none" }
        );
    }
    Ok(())
}
