//! The arc-graph functor and its left adjoint.

use crate::structures::{equivalence_closure, quotient_digraph, Digraph};

/// Arc graph of `g`: one vertex per arc of `g` (in canonical arc order), with
/// an arc from `(u, v)` to `(v, w)` for every pair of consecutive arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcGraph {
    pub digraph: Digraph,
    /// The arc of `g` that each vertex stands for.
    pub labels: Vec<(usize, usize)>,
}

pub fn arc_graph(g: &Digraph) -> ArcGraph {
    let labels: Vec<(usize, usize)> = g.arcs().collect();
    let mut starting_at = vec![Vec::new(); g.vertex_count()];
    for (i, &(u, _)) in labels.iter().enumerate() {
        starting_at[u].push(i);
    }
    let arcs = labels
        .iter()
        .enumerate()
        .flat_map(|(i, &(_, v))| starting_at[v].iter().map(move |&j| (i, j)));
    let digraph = Digraph::new(labels.len(), arcs).expect("indices are arc positions");
    ArcGraph { digraph, labels }
}

/// Left adjoint of the arc graph: each vertex `u` becomes an arc `o_u → t_u`
/// (elements `2u` and `2u + 1`), and `t_u` is glued to `o_v` for every arc
/// `(u, v)` of `b`.
pub fn arc_graph_inverse(b: &Digraph) -> Digraph {
    let n = b.vertex_count();
    let split = Digraph::new(2 * n, (0..n).map(|u| (2 * u, 2 * u + 1))).expect("valid split");
    let glue = equivalence_closure(2 * n, b.arcs().map(|(u, v)| (2 * u + 1, 2 * v)))
        .expect("glued elements are in range");
    quotient_digraph(&split, &glue).expect("partition matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::{hom_exists, is_isomorphic};

    #[test]
    fn arc_graph_of_t4() {
        let d = arc_graph(&Digraph::transitive_tournament(4));
        assert_eq!(d.digraph.vertex_count(), 6);
        assert_eq!(d.digraph.arc_count(), 4);
        assert_eq!(d.labels[0], (0, 1));
    }

    #[test]
    fn arc_graph_small_cases() {
        let d = arc_graph(&Digraph::directed_path(1));
        assert_eq!(d.digraph, Digraph::edgeless(1));
        let c3 = Digraph::directed_cycle(3);
        assert!(is_isomorphic(&arc_graph(&c3).digraph, &c3));
        assert_eq!(
            arc_graph(&Digraph::edgeless(3)).digraph,
            Digraph::edgeless(0)
        );
        // a loop is consecutive with itself
        assert_eq!(
            arc_graph(&Digraph::loop_vertex()).digraph,
            Digraph::loop_vertex()
        );
    }

    #[test]
    fn arc_graph_shortens_paths() {
        for n in 1..=6 {
            let d = arc_graph(&Digraph::directed_path(n));
            assert_eq!(d.digraph, Digraph::directed_path(n - 1));
        }
    }

    #[test]
    fn inverse_small_cases() {
        assert_eq!(
            arc_graph_inverse(&Digraph::edgeless(1)),
            Digraph::directed_path(1)
        );
        assert_eq!(
            arc_graph_inverse(&Digraph::directed_path(2)),
            Digraph::directed_path(3)
        );
        let c3 = Digraph::directed_cycle(3);
        assert!(is_isomorphic(&arc_graph_inverse(&c3), &c3));
        assert_eq!(
            arc_graph_inverse(&Digraph::edgeless(0)),
            Digraph::edgeless(0)
        );
    }

    #[test]
    fn counit_maps_back() {
        for g in [
            Digraph::transitive_tournament(4),
            Digraph::directed_cycle(4),
            Digraph::new(3, [(0, 1), (1, 1), (2, 1)]).unwrap(),
        ] {
            let back = arc_graph_inverse(&arc_graph(&g).digraph);
            assert!(hom_exists(&back, &g).unwrap());
        }
    }
}
