//! Functors defined by patterns and their left adjoints.
//!
//! A pattern over vocabularies `σ → τ` is a `σ`-structure `P` together with,
//! for each symbol `R` of `τ`, a `σ`-structure `Q_R` and homomorphisms
//! `q_{R,1}, …, q_{R,r}: P → Q_R`. It defines `Ψ` from `σ`-structures to
//! `τ`-structures, with left adjoint `Ψ⁻¹`.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::hom::{is_hom, HomSearch};
use crate::structures::{
    disjoint_union, equivalence_closure, quotient, quotient_digraph, tree_analysis, Digraph,
    Partition, Relation, Structure, Vocabulary,
};

/// `Q_R` with its maps `q_{R,i}` (given as value vectors on `P`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub q: Structure,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    p: Structure,
    tau: Vocabulary,
    gadgets: Vec<Gadget>,
    vertex_disjoint: bool,
}

impl Pattern {
    /// `gadgets[i]` belongs to the `i`-th symbol of `tau`.
    pub fn new(p: Structure, tau: Vocabulary, gadgets: Vec<Gadget>) -> Result<Self> {
        if gadgets.len() != tau.len() {
            return Err(Error::InvalidPattern(format!(
                "{} gadgets given for {} symbols",
                gadgets.len(),
                tau.len()
            )));
        }
        for (sym, g) in tau.symbols().iter().zip(&gadgets) {
            p.check_same_vocab(&g.q)
                .map_err(|e| Error::InvalidPattern(format!("gadget for `{}`: {e}", sym.name)))?;
            if g.maps.len() != sym.arity {
                return Err(Error::InvalidPattern(format!(
                    "`{}` has arity {} but {} maps are given",
                    sym.name,
                    sym.arity,
                    g.maps.len()
                )));
            }
            for (i, m) in g.maps.iter().enumerate() {
                if m.len() != p.size() || m.iter().any(|&v| v >= g.q.size()) || !is_hom(&p, &g.q, m)
                {
                    return Err(Error::InvalidPattern(format!(
                        "map {} of `{}` is not a homomorphism P -> Q",
                        i + 1,
                        sym.name
                    )));
                }
            }
        }
        let vertex_disjoint = gadgets.iter().all(|g| {
            let mut owner = vec![usize::MAX; g.q.size()];
            for (i, m) in g.maps.iter().enumerate() {
                for &v in m {
                    if owner[v] != usize::MAX && owner[v] != i {
                        return false;
                    }
                    owner[v] = i;
                }
            }
            true
        });
        Ok(Self {
            p,
            tau,
            gadgets,
            vertex_disjoint,
        })
    }

    pub fn p(&self) -> &Structure {
        &self.p
    }

    pub fn sigma(&self) -> &Vocabulary {
        self.p.vocab()
    }

    pub fn tau(&self) -> &Vocabulary {
        &self.tau
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    /// Whether the images of different maps `q_{R,i}` never share an element.
    pub fn vertex_disjoint(&self) -> bool {
        self.vertex_disjoint
    }
}

fn digraph_pattern(q: Digraph, q1: Vec<usize>, q2: Vec<usize>) -> Pattern {
    Pattern::new(
        Digraph::directed_path(1).into_structure(),
        Vocabulary::digraph(),
        vec![Gadget {
            q: q.into_structure(),
            maps: vec![q1, q2],
        }],
    )
    .expect("builtin pattern is valid")
}

/// `P = P1`, `Q = P2`, `q1` onto the arc `(0,1)` and `q2` onto `(1,2)`; `Ψ` is
/// the arc graph.
pub fn arc_graph_pattern() -> Pattern {
    digraph_pattern(Digraph::directed_path(2), vec![0, 1], vec![1, 2])
}

/// `P = P1`, `Q = P3`, `q1` onto `(0,1)` and `q2` onto `(2,3)`.
pub fn blue_red_pattern() -> Pattern {
    digraph_pattern(Digraph::directed_path(3), vec![0, 1], vec![2, 3])
}

pub fn builtin_patterns() -> Vec<(&'static str, Pattern)> {
    vec![
        ("arc_graph", arc_graph_pattern()),
        ("blue_red", blue_red_pattern()),
    ]
}

pub fn builtin_pattern(name: &str) -> Option<Pattern> {
    builtin_patterns()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
}

/// `Ψ A` together with the homomorphism `P → A` behind each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Psi {
    pub structure: Structure,
    pub labels: Vec<Vec<usize>>,
}

pub fn psi(pat: &Pattern, a: &Structure) -> Result<Psi> {
    pat.p.check_same_vocab(a)?;
    let labels = HomSearch::new(&pat.p, a)?.all();
    let index: HashMap<&[usize], usize> = labels
        .iter()
        .enumerate()
        .map(|(i, f)| (f.as_slice(), i))
        .collect();
    let mut relations = Vec::with_capacity(pat.gadgets.len());
    for g in &pat.gadgets {
        let covered = {
            let mut seen = vec![false; g.q.size()];
            g.maps.iter().flatten().for_each(|&v| seen[v] = true);
            seen.into_iter().all(|s| s)
        };
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        if covered {
            // every g: Q → A is pinned down by its tuple; enumerate them
            HomSearch::new(&g.q, a)?.for_each(|m| {
                tuples.push(
                    g.maps
                        .iter()
                        .map(|q| {
                            let f: Vec<usize> = q.iter().map(|&v| m[v]).collect();
                            index[f.as_slice()]
                        })
                        .collect(),
                );
                ControlFlow::Continue(())
            });
        } else {
            for_each_tuple(labels.len(), g.maps.len(), |t| {
                if tuple_extends(g, a, &labels, t) {
                    tuples.push(t.to_vec());
                }
            });
        }
        relations.push(Relation::from_tuples(g.maps.len(), tuples));
    }
    let structure = Structure::from_relations(pat.tau.clone(), labels.len(), relations)?;
    Ok(Psi { structure, labels })
}

fn for_each_tuple(n: usize, r: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; r];
    loop {
        visit(&t);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Is there `g: Q → A` with `g ∘ q_i = f_{t_i}` for every `i`?
fn tuple_extends(g: &Gadget, a: &Structure, labels: &[Vec<usize>], t: &[usize]) -> bool {
    let mut pinned = vec![usize::MAX; g.q.size()];
    for (q, &fi) in g.maps.iter().zip(t) {
        for (&x, &v) in q.iter().zip(&labels[fi]) {
            if pinned[x] != usize::MAX && pinned[x] != v {
                return false;
            }
            pinned[x] = v;
        }
    }
    let mut search = HomSearch::new(&g.q, a).expect("gadget vocabulary checked");
    for (x, &v) in pinned.iter().enumerate() {
        if v != usize::MAX {
            search.fix(x, v);
        }
    }
    search.exists()
}

/// `Ψ⁻¹ B`: a copy of `P` per element and of `Q_R` per tuple of `R(B)`,
/// glued along the maps `q_{R,i}`.
pub fn psi_inverse(pat: &Pattern, b: &Structure) -> Result<Structure> {
    if b.vocab() != &pat.tau {
        return Err(Error::VocabularyMismatch(format!(
            "expected {:?}, found {:?}",
            pat.tau,
            b.vocab()
        )));
    }
    let mut parts: Vec<&Structure> = vec![&pat.p; b.size()];
    let mut copies = Vec::new();
    for (r, g) in pat.gadgets.iter().enumerate() {
        for t in b.relation(r).tuples() {
            parts.push(&g.q);
            copies.push((g, t));
        }
    }
    let (whole, offsets) = disjoint_union(&parts)?;
    let mut pairs = Vec::new();
    for ((g, t), &off) in copies.iter().zip(&offsets[b.size()..]) {
        for (q, &x) in g.maps.iter().zip(t.iter()) {
            for (u, &v) in q.iter().enumerate() {
                pairs.push((offsets[x] + u, off + v));
            }
        }
    }
    let glue = equivalence_closure(whole.size(), pairs)?;
    quotient(&whole, &glue)
}

/// The two quotients of a tree for the blue/red pattern: contract all blue
/// arcs (from an even to an odd level), respectively all red arcs (odd to
/// even), and drop the loops this creates.
pub fn blue_red_quotients(t: &Digraph) -> Result<(Digraph, Digraph)> {
    let analysis = tree_analysis(t);
    let level = analysis
        .level
        .filter(|_| analysis.is_tree)
        .ok_or(Error::NotATree)?;
    let n = t.vertex_count();
    let contract = |blue: bool| -> Result<Digraph> {
        let p: Partition =
            equivalence_closure(n, t.arcs().filter(|&(x, _)| (level[x] % 2 == 0) == blue))?;
        Ok(quotient_digraph(t, &p)?.without_loops())
    };
    Ok((contract(true)?, contract(false)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcgraph::{arc_graph, arc_graph_inverse};
    use crate::hom::{hom_exists, is_isomorphic, FunctionSpace};

    #[test]
    fn builtin_flags() {
        assert!(!arc_graph_pattern().vertex_disjoint());
        assert!(blue_red_pattern().vertex_disjoint());
        assert_eq!(builtin_patterns().len(), 2);
        assert!(builtin_pattern("nope").is_none());
    }

    #[test]
    fn invalid_patterns_are_rejected() {
        let p = Digraph::directed_path(1).into_structure();
        let q = Digraph::directed_path(2).into_structure();
        let bad_map = Pattern::new(
            p.clone(),
            Vocabulary::digraph(),
            vec![Gadget {
                q: q.clone(),
                maps: vec![vec![1, 0], vec![1, 2]],
            }],
        );
        assert!(matches!(bad_map, Err(Error::InvalidPattern(_))));
        let bad_arity = Pattern::new(
            p,
            Vocabulary::digraph(),
            vec![Gadget {
                q,
                maps: vec![vec![0, 1]],
            }],
        );
        assert!(matches!(bad_arity, Err(Error::InvalidPattern(_))));
    }

    #[test]
    fn arc_graph_pattern_matches_arc_graph() {
        let pat = arc_graph_pattern();
        for g in [
            Digraph::transitive_tournament(4),
            Digraph::directed_cycle(3),
            Digraph::new(3, [(0, 0), (0, 1), (1, 2), (2, 0)]).unwrap(),
        ] {
            let via_pattern = psi(&pat, &g).unwrap();
            let direct = arc_graph(&g);
            // both number arcs in sorted order, so the results coincide exactly
            assert_eq!(via_pattern.structure, *direct.digraph.as_structure());
            let labels: Vec<Vec<usize>> = direct.labels.iter().map(|&(u, v)| vec![u, v]).collect();
            assert_eq!(via_pattern.labels, labels);
        }
    }

    #[test]
    fn psi_of_structure_without_copies_of_p_is_empty() {
        let out = psi(&arc_graph_pattern(), &Digraph::edgeless(3)).unwrap();
        assert_eq!(out.structure.size(), 0);
    }

    #[test]
    fn blue_red_on_p3_by_brute_force() {
        let pat = blue_red_pattern();
        let a = Digraph::directed_path(3);
        let out = psi(&pat, &a).unwrap();
        assert_eq!(out.labels, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        // every map Q → A, filtered to homomorphisms
        let q = &pat.gadgets()[0].q;
        let space = FunctionSpace::new(a.vertex_count(), q.size());
        let mut expected = Vec::new();
        let mut m = vec![0; q.size()];
        for i in 0..space.count() as usize {
            space.decode(i, &mut m);
            if is_hom(q, &a, &m) {
                let f1 = out.labels.iter().position(|f| *f == [m[0], m[1]]).unwrap();
                let f2 = out.labels.iter().position(|f| *f == [m[2], m[3]]).unwrap();
                expected.push([f1, f2]);
            }
        }
        assert_eq!(
            out.structure.relation(0),
            &Relation::from_tuples(2, expected)
        );
        assert_eq!(out.structure.tuple_count(), 1);
    }

    #[test]
    fn uncovered_gadget_uses_tuple_search() {
        // Q has a free middle vertex: 0 -> 1, 1 -> 2 -> 3, images {0,1} and {2,3}
        let p = Digraph::directed_path(1).into_structure();
        let q = Digraph::new(5, [(0, 1), (1, 4), (4, 2), (2, 3)])
            .unwrap()
            .into_structure();
        let pat = Pattern::new(
            p,
            Vocabulary::digraph(),
            vec![Gadget {
                q,
                maps: vec![vec![0, 1], vec![2, 3]],
            }],
        )
        .unwrap();
        let a = Digraph::directed_path(4);
        let out = psi(&pat, &a).unwrap();
        // arcs (i, i+1) and (i+2, i+3) are linked: only (0,1) -> (3,4)
        assert_eq!(
            out.structure.relation(0),
            &Relation::from_tuples(2, [[0, 3]])
        );
    }

    #[test]
    fn inverse_of_arc_graph_pattern() {
        let pat = arc_graph_pattern();
        assert_eq!(
            psi_inverse(&pat, Digraph::edgeless(1).as_structure()).unwrap(),
            Digraph::directed_path(1).into_structure()
        );
        for b in [
            Digraph::directed_path(3),
            Digraph::directed_cycle(3),
            Digraph::new(4, [(0, 1), (0, 2), (3, 3), (2, 1)]).unwrap(),
        ] {
            let via_pattern = psi_inverse(&pat, &b).unwrap();
            assert!(is_isomorphic(&via_pattern, &arc_graph_inverse(&b)));
        }
    }

    #[test]
    fn inverse_of_blue_red_on_an_arc() {
        let out = psi_inverse(
            &blue_red_pattern(),
            Digraph::directed_path(1).as_structure(),
        )
        .unwrap();
        assert_eq!(out, Digraph::directed_path(3).into_structure());
    }

    #[test]
    fn inverse_rejects_wrong_vocabulary() {
        let b = Structure::discrete(Vocabulary::new([("R", 3)]).unwrap(), 1);
        assert!(matches!(
            psi_inverse(&arc_graph_pattern(), &b),
            Err(Error::VocabularyMismatch(_))
        ));
    }

    #[test]
    fn blue_red_quotient_examples() {
        let (b, r) = blue_red_quotients(&Digraph::directed_path(1)).unwrap();
        assert_eq!(b, Digraph::edgeless(1));
        assert_eq!(r, Digraph::directed_path(1));
        let (b, r) = blue_red_quotients(&Digraph::directed_path(2)).unwrap();
        assert_eq!(b, Digraph::directed_path(1));
        assert_eq!(r, Digraph::directed_path(1));
        let (b, r) = blue_red_quotients(&Digraph::directed_path(4)).unwrap();
        assert_eq!(b, Digraph::directed_path(2));
        assert_eq!(r, Digraph::directed_path(2));
        assert!(tree_analysis(&b).is_tree && tree_analysis(&r).is_tree);
        assert!(blue_red_quotients(&Digraph::directed_cycle(3)).is_err());
    }

    #[test]
    fn tree_maps_into_inverse_of_its_quotients() {
        let pat = blue_red_pattern();
        for t in [
            Digraph::directed_path(4),
            Digraph::new(6, [(0, 1), (1, 2), (3, 2), (3, 4), (4, 5)]).unwrap(),
            Digraph::new(5, [(0, 1), (2, 1), (1, 3), (3, 4)]).unwrap(),
        ] {
            let (b, r) = blue_red_quotients(&t).unwrap();
            assert!(hom_exists(&t, &psi_inverse(&pat, &b).unwrap()).unwrap());
            assert!(hom_exists(&t, &psi_inverse(&pat, &r).unwrap()).unwrap());
        }
    }
}
