//! Finite relational structures and digraphs.
//!
//! Universes are always `0..size`. Relations are stored as flat, sorted,
//! duplicate-free tuple lists so that two structures built in different ways
//! compare equal whenever they have the same tuples.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::ops::Deref;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

/// Name of the single binary symbol of a digraph.
pub const ARC_SYMBOL: &str = "E";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
}

impl Vocabulary {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, s) in symbols.iter().enumerate() {
            if s.arity == 0 {
                return Err(Error::InvalidVocabulary(format!(
                    "symbol `{}` has arity 0",
                    s.name
                )));
            }
            if s.name.is_empty() || s.name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidVocabulary(format!(
                    "bad symbol name `{}`",
                    s.name
                )));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidVocabulary(format!(
                    "duplicate symbol `{}`",
                    s.name
                )));
            }
        }
        Ok(Self { symbols })
    }

    /// The vocabulary `{E/2}` of digraphs.
    pub fn digraph() -> Self {
        Self {
            symbols: vec![Symbol {
                name: ARC_SYMBOL.to_string(),
                arity: 2,
            }],
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, symbol: usize) -> usize {
        self.symbols[symbol].arity
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn is_digraph(&self) -> bool {
        *self == Self::digraph()
    }
}

/// The tuples of one relation, sorted lexicographically and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    data: Vec<usize>,
}

impl Relation {
    pub fn empty(arity: usize) -> Self {
        Self {
            arity,
            data: Vec::new(),
        }
    }

    /// Builds a relation from arbitrary tuples; sorts and removes duplicates.
    /// Tuples must all have length `arity`.
    pub fn from_tuples<T: AsRef<[usize]>>(
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Self {
        let mut rows: Vec<Vec<usize>> = tuples
            .into_iter()
            .map(|t| {
                let t = t.as_ref();
                assert_eq!(t.len(), arity, "tuple length does not match arity");
                t.to_vec()
            })
            .collect();
        rows.sort_unstable();
        rows.dedup();
        Self {
            arity,
            data: rows.concat(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn tuples(&self) -> std::slice::ChunksExact<'_, usize> {
        self.data.chunks_exact(self.arity)
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.position(tuple).is_some()
    }

    /// Index of `tuple` in the sorted tuple list.
    pub fn position(&self, tuple: &[usize]) -> Option<usize> {
        if tuple.len() != self.arity {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn max_entry(&self) -> Option<usize> {
        self.data.iter().copied().max()
    }
}

/// A finite structure over a vocabulary, with universe `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Vocabulary,
    size: usize,
    relations: Vec<Relation>,
}

impl Structure {
    /// Builds a structure from per-symbol tuple lists (in vocabulary order).
    pub fn new<T: AsRef<[usize]>>(
        vocab: Vocabulary,
        size: usize,
        relations: Vec<Vec<T>>,
    ) -> Result<Self> {
        if relations.len() != vocab.len() {
            return Err(Error::VocabularyMismatch(format!(
                "{} relations given for {} symbols",
                relations.len(),
                vocab.len()
            )));
        }
        let mut rels = Vec::with_capacity(vocab.len());
        for (sym, tuples) in vocab.symbols().iter().zip(relations) {
            for t in &tuples {
                let t = t.as_ref();
                if t.len() != sym.arity {
                    return Err(Error::ArityMismatch {
                        symbol: sym.name.clone(),
                        expected: sym.arity,
                        found: t.len(),
                    });
                }
                if let Some(&e) = t.iter().find(|&&e| e >= size) {
                    return Err(Error::OutOfRange { element: e, size });
                }
            }
            rels.push(Relation::from_tuples(sym.arity, tuples));
        }
        Ok(Self {
            vocab,
            size,
            relations: rels,
        })
    }

    /// Builds a structure from already-built relations, validating ranges.
    pub fn from_relations(
        vocab: Vocabulary,
        size: usize,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if relations.len() != vocab.len() {
            return Err(Error::VocabularyMismatch(format!(
                "{} relations given for {} symbols",
                relations.len(),
                vocab.len()
            )));
        }
        for (sym, rel) in vocab.symbols().iter().zip(&relations) {
            if rel.arity() != sym.arity {
                return Err(Error::ArityMismatch {
                    symbol: sym.name.clone(),
                    expected: sym.arity,
                    found: rel.arity(),
                });
            }
            if let Some(e) = rel.max_entry().filter(|&e| e >= size) {
                return Err(Error::OutOfRange { element: e, size });
            }
        }
        Ok(Self {
            vocab,
            size,
            relations,
        })
    }

    /// A structure with no tuples at all.
    pub fn discrete(vocab: Vocabulary, size: usize) -> Self {
        let relations = vocab
            .symbols()
            .iter()
            .map(|s| Relation::empty(s.arity))
            .collect();
        Self {
            vocab,
            size,
            relations,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn relation(&self, symbol: usize) -> &Relation {
        &self.relations[symbol]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    /// The substructure induced on `elements`; element `elements[i]` becomes `i`.
    pub fn induced(&self, elements: &[usize]) -> Structure {
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in elements.iter().enumerate() {
            index[e] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                Relation::from_tuples(
                    rel.arity(),
                    rel.tuples()
                        .filter(|t| t.iter().all(|&x| index[x] != usize::MAX))
                        .map(|t| t.iter().map(|&x| index[x]).collect::<Vec<_>>()),
                )
            })
            .collect();
        Structure {
            vocab: self.vocab.clone(),
            size: elements.len(),
            relations,
        }
    }

    pub(crate) fn check_same_vocab(&self, other: &Structure) -> Result<()> {
        if self.vocab != other.vocab {
            return Err(Error::VocabularyMismatch(format!(
                "{:?} vs {:?}",
                self.vocab.symbols(),
                other.vocab.symbols()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{size {}", self.size)?;
        for (sym, rel) in self.vocab.symbols().iter().zip(&self.relations) {
            write!(f, "; {}:", sym.name)?;
            for t in rel.tuples() {
                write!(f, " (")?;
                for (i, x) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")?;
            }
        }
        write!(f, "}}")
    }
}

/// A structure over the single binary symbol `E`. Loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph(Structure);

impl Digraph {
    pub fn new(vertices: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let arcs: Vec<[usize; 2]> = arcs.into_iter().map(|(u, v)| [u, v]).collect();
        Structure::new(Vocabulary::digraph(), vertices, vec![arcs]).map(Digraph)
    }

    /// Digraph with `vertices` vertices and no arcs.
    pub fn edgeless(vertices: usize) -> Self {
        Digraph(Structure::discrete(Vocabulary::digraph(), vertices))
    }

    /// Directed path `0 → 1 → … → arcs`.
    pub fn directed_path(arcs: usize) -> Self {
        Self::new(arcs + 1, (0..arcs).map(|i| (i, i + 1))).expect("valid path")
    }

    /// Directed cycle on `n ≥ 1` vertices.
    pub fn directed_cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    /// Transitive tournament: arcs `(i, j)` for all `i < j`.
    pub fn transitive_tournament(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            .expect("valid tournament")
    }

    /// One vertex carrying a loop.
    pub fn loop_vertex() -> Self {
        Self::new(1, [(0, 0)]).expect("valid loop")
    }

    pub fn vertex_count(&self) -> usize {
        self.0.size()
    }

    pub fn arc_count(&self) -> usize {
        self.0.relation(0).len()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.relation(0).tuples().map(|t| (t[0], t[1]))
    }

    pub fn arc(&self, i: usize) -> (usize, usize) {
        let t = self.0.relation(0).get(i);
        (t[0], t[1])
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.0.relation(0).contains(&[u, v])
    }

    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        self.0.relation(0).position(&[u, v])
    }

    pub fn out_neighbours(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for (u, v) in self.arcs() {
            out[u].push(v);
        }
        out
    }

    pub fn in_neighbours(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.vertex_count()];
        for (u, v) in self.arcs() {
            inn[v].push(u);
        }
        inn
    }

    pub fn as_structure(&self) -> &Structure {
        &self.0
    }

    pub fn into_structure(self) -> Structure {
        self.0
    }

    /// The induced subdigraph on `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        Digraph(self.0.induced(vertices))
    }

    /// Same digraph with every loop removed.
    pub fn without_loops(&self) -> Digraph {
        Digraph::new(self.vertex_count(), self.arcs().filter(|(u, v)| u != v))
            .expect("subset of valid arcs")
    }
}

impl Deref for Digraph {
    type Target = Structure;

    fn deref(&self) -> &Structure {
        &self.0
    }
}

impl AsRef<Structure> for Digraph {
    fn as_ref(&self) -> &Structure {
        &self.0
    }
}

impl TryFrom<Structure> for Digraph {
    type Error = Error;

    fn try_from(s: Structure) -> Result<Self> {
        if !s.vocab().is_digraph() {
            return Err(Error::VocabularyMismatch(
                "expected the digraph vocabulary {E/2}".into(),
            ));
        }
        Ok(Digraph(s))
    }
}

impl From<Digraph> for Structure {
    fn from(g: Digraph) -> Structure {
        g.0
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An equivalence partition of `0..len`, classes numbered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    num_classes: usize,
}

impl Partition {
    pub fn identity(len: usize) -> Self {
        Self {
            class_of: (0..len).collect(),
            num_classes: len,
        }
    }

    /// Groups elements with equal labels; classes renumbered by first occurrence.
    pub fn from_labels<L: Eq + Hash>(labels: &[L]) -> Self {
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let class_of = labels
            .iter()
            .map(|l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Self {
            class_of,
            num_classes: ids.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_map(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_classes];
        for (x, &c) in self.class_of.iter().enumerate() {
            classes[c].push(x);
        }
        classes
    }

    /// `self` followed by `next`, where `next` partitions the classes of `self`.
    pub fn then(&self, next: &Partition) -> Result<Partition> {
        if next.len() != self.num_classes {
            return Err(Error::PartitionSize {
                partition: next.len(),
                structure: self.num_classes,
            });
        }
        let labels: Vec<usize> = self.class_of.iter().map(|&c| next.class_of(c)).collect();
        Ok(Partition::from_labels(&labels))
    }
}

/// Finest partition of `0..size` in which each given pair shares a class.
pub fn equivalence_closure(
    size: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Partition> {
    let mut uf = UnionFind::<usize>::new(size);
    for (a, b) in pairs {
        for x in [a, b] {
            if x >= size {
                return Err(Error::OutOfRange { element: x, size });
            }
        }
        uf.union(a, b);
    }
    let roots: Vec<usize> = (0..size).map(|x| uf.find(x)).collect();
    Ok(Partition::from_labels(&roots))
}

/// Categorical product; the pair `(a, b)` is element `a * B.size() + b`.
pub fn product(a: &Structure, b: &Structure) -> Result<Structure> {
    a.check_same_vocab(b)?;
    let nb = b.size();
    let relations = a
        .relations()
        .iter()
        .zip(b.relations())
        .map(|(ra, rb)| {
            let arity = ra.arity();
            let mut tuples = Vec::with_capacity(ra.len() * rb.len());
            for s in ra.tuples() {
                for t in rb.tuples() {
                    tuples.push(
                        s.iter()
                            .zip(t)
                            .map(|(&x, &y)| x * nb + y)
                            .collect::<Vec<_>>(),
                    );
                }
            }
            Relation::from_tuples(arity, tuples)
        })
        .collect();
    Ok(Structure {
        vocab: a.vocab().clone(),
        size: a.size() * nb,
        relations,
    })
}

/// `k`-fold product `A × … × A`, with tuples of elements indexed in mixed radix
/// (first coordinate most significant).
pub fn power(a: &Structure, k: usize) -> Structure {
    assert!(k >= 1, "power needs k >= 1");
    let mut acc = a.clone();
    for _ in 1..k {
        acc = product(&acc, a).expect("same vocabulary");
    }
    acc
}

/// Disjoint union; returns the union and the offset of each part.
pub fn disjoint_union(parts: &[&Structure]) -> Result<(Structure, Vec<usize>)> {
    let first = parts
        .first()
        .ok_or(Error::EmptyInput("disjoint union of no parts"))?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        first.check_same_vocab(p)?;
        offsets.push(total);
        total += p.size();
    }
    let relations = (0..first.vocab().len())
        .map(|r| {
            let arity = first.vocab().arity(r);
            Relation::from_tuples(
                arity,
                parts.iter().zip(&offsets).flat_map(|(p, &off)| {
                    p.relation(r)
                        .tuples()
                        .map(move |t| t.iter().map(|&x| x + off).collect::<Vec<_>>())
                }),
            )
        })
        .collect();
    Ok((
        Structure {
            vocab: first.vocab().clone(),
            size: total,
            relations,
        },
        offsets,
    ))
}

/// Quotient by a partition: a tuple of classes is present iff some tuple of
/// representatives is. Loops created by collapsing are kept.
pub fn quotient(a: &Structure, p: &Partition) -> Result<Structure> {
    if p.len() != a.size() {
        return Err(Error::PartitionSize {
            partition: p.len(),
            structure: a.size(),
        });
    }
    let relations = a
        .relations()
        .iter()
        .map(|rel| {
            Relation::from_tuples(
                rel.arity(),
                rel.tuples()
                    .map(|t| t.iter().map(|&x| p.class_of(x)).collect::<Vec<_>>()),
            )
        })
        .collect();
    Ok(Structure {
        vocab: a.vocab().clone(),
        size: p.num_classes(),
        relations,
    })
}

pub fn quotient_digraph(g: &Digraph, p: &Partition) -> Result<Digraph> {
    quotient(g, p).map(Digraph)
}

/// Level structure of an oriented tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeAnalysis {
    pub is_tree: bool,
    /// Algebraic height; `None` for non-trees.
    pub height: Option<usize>,
    /// Level of each vertex, minimum 0; `None` for non-trees.
    pub level: Option<Vec<usize>>,
}

impl TreeAnalysis {
    fn not_tree() -> Self {
        Self {
            is_tree: false,
            height: None,
            level: None,
        }
    }
}

/// Decides whether the underlying undirected multigraph is a tree and, if so,
/// computes the level function into the shortest directed path.
pub fn tree_analysis(g: &Digraph) -> TreeAnalysis {
    let n = g.vertex_count();
    if n == 0 || g.arc_count() != n - 1 || g.arcs().any(|(u, v)| u == v) {
        return TreeAnalysis::not_tree();
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for (u, v) in g.arcs() {
        adj[u].push((v, 1));
        adj[v].push((u, -1));
    }
    let mut level: Vec<Option<i64>> = vec![None; n];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0]);
    let mut seen = 1;
    while let Some(x) = queue.pop_front() {
        let lx = level[x].expect("queued vertices have levels");
        for &(y, d) in &adj[x] {
            if level[y].is_none() {
                level[y] = Some(lx + d);
                seen += 1;
                queue.push_back(y);
            }
        }
    }
    if seen != n {
        return TreeAnalysis::not_tree();
    }
    let level: Vec<i64> = level.into_iter().map(|l| l.expect("connected")).collect();
    let min = *level.iter().min().expect("non-empty");
    let level: Vec<usize> = level.iter().map(|&l| (l - min) as usize).collect();
    let height = *level.iter().max().expect("non-empty");
    TreeAnalysis {
        is_tree: true,
        height: Some(height),
        level: Some(level),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> Digraph {
        Digraph::transitive_tournament(4)
    }

    #[test]
    fn vocabulary_rejects_bad_symbols() {
        assert!(Vocabulary::new([("R", 0usize)]).is_err());
        assert!(Vocabulary::new([("R", 2usize), ("R", 3)]).is_err());
        assert!(Vocabulary::new([("R", 2usize), ("S", 3)]).is_ok());
    }

    #[test]
    fn structure_validates_ranges_and_arity() {
        let v = Vocabulary::digraph();
        assert_eq!(
            Structure::new(v.clone(), 2, vec![vec![vec![0, 2]]]),
            Err(Error::OutOfRange {
                element: 2,
                size: 2
            })
        );
        assert!(matches!(
            Structure::new(v, 2, vec![vec![vec![0, 1, 1]]]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn tuples_are_canonical() {
        let a = Digraph::new(3, [(2, 0), (0, 1), (2, 0)]).unwrap();
        let b = Digraph::new(3, [(0, 1), (2, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 0)]);
    }

    #[test]
    fn product_of_single_arcs() {
        let p1 = Digraph::directed_path(1);
        let p = product(&p1, &p1).unwrap();
        assert_eq!(p.size(), 4);
        // (u,u) = 0, (v,v) = 3
        assert_eq!(
            p.relation(0).tuples().collect::<Vec<_>>(),
            vec![&[0, 3][..]]
        );
    }

    #[test]
    fn product_with_loopless_vertex_has_no_arcs() {
        let k1 = Digraph::edgeless(1);
        let p = product(&t4(), &k1).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.tuple_count(), 0);
    }

    #[test]
    fn product_t4_squared_matches_double_loop() {
        let t = t4();
        let p = product(&t, &t).unwrap();
        let mut expected = 0;
        for a in 0..16 {
            for b in 0..16 {
                let (a1, a2, b1, b2) = (a / 4, a % 4, b / 4, b % 4);
                if t.has_arc(a1, b1) && t.has_arc(a2, b2) {
                    expected += 1;
                    assert!(p.relation(0).contains(&[a, b]));
                }
            }
        }
        assert_eq!(p.size(), 16);
        assert_eq!(p.tuple_count(), expected);
        assert_eq!(expected, 36);
    }

    #[test]
    fn product_vocab_mismatch() {
        let s = Structure::discrete(Vocabulary::new([("R", 3usize)]).unwrap(), 2);
        assert!(matches!(
            product(&t4(), &s),
            Err(Error::VocabularyMismatch(_))
        ));
    }

    #[test]
    fn disjoint_union_examples() {
        let p1 = Digraph::directed_path(1);
        let (u, off) = disjoint_union(&[&p1, &p1]).unwrap();
        assert_eq!(off, vec![0, 2]);
        let u = Digraph::try_from(u).unwrap();
        assert_eq!(u.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);

        let k1 = Digraph::edgeless(1);
        let (u, off) = disjoint_union(&[&k1]).unwrap();
        assert_eq!(off, vec![0]);
        assert_eq!(&u, k1.as_structure());

        let c3 = Digraph::directed_cycle(3);
        let p2 = Digraph::directed_path(2);
        let (u, _) = disjoint_union(&[&p1, &c3, &p2]).unwrap();
        assert_eq!(u.size(), 8);
        assert_eq!(u.tuple_count(), 6);

        assert!(disjoint_union(&[]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let p2 = Digraph::directed_path(2);
        let q = quotient_digraph(&p2, &Partition::identity(3)).unwrap();
        assert_eq!(q, p2);

        let part = Partition::from_labels(&[0, 0, 1]);
        let q = quotient_digraph(&p2, &part).unwrap();
        assert_eq!(q, Digraph::new(2, [(0, 0), (0, 1)]).unwrap());

        let part = Partition::from_labels(&[0, 1, 0]);
        let q = quotient_digraph(&p2, &part).unwrap();
        assert_eq!(q, Digraph::new(2, [(0, 1), (1, 0)]).unwrap());

        assert!(matches!(
            quotient(&p2, &Partition::identity(2)),
            Err(Error::PartitionSize { .. })
        ));
    }

    #[test]
    fn equivalence_closure_examples() {
        let p = equivalence_closure(4, []).unwrap();
        assert_eq!(p, Partition::identity(4));
        let p = equivalence_closure(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.classes(), vec![vec![0, 1, 2], vec![3]]);
        let p = equivalence_closure(6, [(1, 2), (3, 4)]).unwrap();
        assert_eq!(p.classes(), vec![vec![0], vec![1, 2], vec![3, 4], vec![5]]);
        assert_eq!(
            equivalence_closure(3, [(0, 3)]),
            Err(Error::OutOfRange {
                element: 3,
                size: 3
            })
        );
    }

    #[test]
    fn partition_classes_are_ordered_by_smallest_member() {
        let p = equivalence_closure(5, [(4, 1), (3, 0)]).unwrap();
        assert_eq!(p.class_map(), &[0, 1, 2, 0, 1]);
    }

    #[test]
    fn tree_analysis_examples() {
        let a = tree_analysis(&Digraph::directed_path(4));
        assert!(a.is_tree);
        assert_eq!(a.height, Some(4));
        assert_eq!(a.level, Some(vec![0, 1, 2, 3, 4]));

        let a = tree_analysis(&Digraph::edgeless(1));
        assert!(a.is_tree);
        assert_eq!(a.height, Some(0));

        // thunderbolt with middle length 1: F F B F F
        let tb = Digraph::new(6, [(0, 1), (1, 2), (3, 2), (3, 4), (4, 5)]).unwrap();
        let a = tree_analysis(&tb);
        assert!(a.is_tree);
        assert_eq!(a.height, Some(3));
        assert_eq!(a.level, Some(vec![0, 1, 2, 1, 2, 3]));
    }

    #[test]
    fn tree_analysis_rejects_non_trees() {
        for g in [
            Digraph::directed_cycle(3),
            Digraph::loop_vertex(),
            Digraph::edgeless(2),
            Digraph::edgeless(0),
            Digraph::new(2, [(0, 1), (1, 0)]).unwrap(),
        ] {
            let a = tree_analysis(&g);
            assert!(!a.is_tree);
            assert_eq!(a.height, None);
            assert_eq!(a.level, None);
        }
    }
}
