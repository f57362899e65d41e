//! Brute-force verification of duality pairs on all digraphs with up to four
//! vertices.

use homdual::oracle::{check_duality_pair, PairOptions};
use homdual::sproink::thunderbolt;
use homdual::Digraph;

fn main() -> homdual::Result<()> {
    let t4 = Digraph::transitive_tournament(4);
    let report = check_duality_pair(&t4, [Digraph::directed_path(4)], PairOptions::new(4))?;
    println!("T4 against {{P4}}:\n{report}");

    let p2 = Digraph::directed_path(2);
    let report = check_duality_pair(&p2, (0..=6).map(thunderbolt), PairOptions::new(4))?;
    println!("P2 against thunderbolts 0..=6:\n{report}");

    // An empty family leaves every digraph that does not map to P2 uncovered.
    let none: [Digraph; 0] = [];
    let report = check_duality_pair(
        &p2,
        none,
        PairOptions {
            up_to_isomorphism: true,
            ..PairOptions::new(2)
        },
    )?;
    println!("P2 against the empty family:\n{}", report.records());
    Ok(())
}
