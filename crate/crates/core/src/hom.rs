//! Homomorphism search, cores and exponential digraphs.
//!
//! The search keeps generalised arc consistency over every source tuple,
//! then branches on the lowest-index undecided element, trying values in
//! increasing order. Every answer it returns is re-verified.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::structures::{product, Digraph, Structure};

/// Default cap on the number of vertices of a materialised exponential digraph.
pub const DEFAULT_EXPONENTIAL_BUDGET: u128 = 2_000_000;

/// A map between universes that preserves every relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl Homomorphism {
    /// Wraps `map` after checking that it is a homomorphism `g → h`.
    pub fn new(g: &Structure, h: &Structure, map: Vec<usize>) -> Result<Self> {
        g.check_same_vocab(h)?;
        if !is_hom(g, h, &map) {
            return Err(Error::Precondition("map is not a homomorphism".into()));
        }
        Ok(Self { map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Homomorphism {
        Homomorphism {
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        }
    }
}

/// True iff `map` is total on `g`, lands in `h` and preserves every tuple.
pub fn is_hom(g: &Structure, h: &Structure, map: &[usize]) -> bool {
    if g.vocab() != h.vocab() || map.len() != g.size() || map.iter().any(|&x| x >= h.size()) {
        return false;
    }
    let mut image = Vec::new();
    g.relations().iter().zip(h.relations()).all(|(rg, rh)| {
        rg.tuples().all(|t| {
            image.clear();
            image.extend(t.iter().map(|&x| map[x]));
            rh.contains(&image)
        })
    })
}

/// One step of a recorded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchEvent {
    /// Arc consistency emptied the domain of `element` at `depth`.
    Wipeout { depth: usize, element: usize },
    /// `element` was tried with `value`.
    Assign {
        depth: usize,
        element: usize,
        value: usize,
    },
    /// A complete homomorphism was reached.
    Solution,
}

/// A configurable homomorphism search from `source` to `target`.
#[derive(Debug, Clone)]
pub struct HomSearch<'a> {
    source: &'a Structure,
    target: &'a Structure,
    domains: Vec<FixedBitSet>,
    injective: bool,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a Structure, target: &'a Structure) -> Result<Self> {
        source.check_same_vocab(target)?;
        let mut full = FixedBitSet::with_capacity(target.size());
        full.insert_range(..);
        Ok(Self {
            source,
            target,
            domains: vec![full; source.size()],
            injective: false,
        })
    }

    /// Restricts the candidate images of `x` to `allowed`.
    pub fn restrict(&mut self, x: usize, allowed: impl IntoIterator<Item = usize>) -> &mut Self {
        let mut set = FixedBitSet::with_capacity(self.target.size());
        for v in allowed {
            if v < self.target.size() {
                set.insert(v);
            }
        }
        self.domains[x].intersect_with(&set);
        self
    }

    /// Forces `x ↦ v`.
    pub fn fix(&mut self, x: usize, v: usize) -> &mut Self {
        self.restrict(x, [v])
    }

    /// Only search for injective homomorphisms.
    pub fn injective(&mut self, yes: bool) -> &mut Self {
        self.injective = yes;
        self
    }

    pub fn first(&self) -> Option<Homomorphism> {
        let mut found = None;
        self.run(None, &mut |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found.map(|map| self.certify(map))
    }

    /// Like [`first`](Self::first) but also returns the search transcript.
    pub fn first_with_transcript(&self) -> (Option<Homomorphism>, Vec<SearchEvent>) {
        let mut found = None;
        let mut events = Vec::new();
        self.run(Some(&mut events), &mut |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        (found.map(|map| self.certify(map)), events)
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }

    /// Calls `visit` on every homomorphism in lexicographic order until it breaks.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) {
        self.run(None, &mut |m| {
            debug_assert!(is_hom(self.source, self.target, m));
            visit(m)
        });
    }

    /// All homomorphisms, in lexicographic order of their value vectors.
    pub fn all(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    fn certify(&self, map: Vec<usize>) -> Homomorphism {
        assert!(
            is_hom(self.source, self.target, &map),
            "search produced a non-homomorphism"
        );
        Homomorphism { map }
    }

    fn run(
        &self,
        transcript: Option<&mut Vec<SearchEvent>>,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) {
        let mut solver = Solver::new(self.source, self.target, self.injective, transcript);
        let mut domains = self.domains.clone();
        if domains.iter().any(FixedBitSet::is_clear) {
            return;
        }
        let all: Vec<usize> = (0..solver.constraints.len()).collect();
        if solver.propagate(&mut domains, all, 0) {
            let _ = solver.search(domains, 0, visit);
        }
    }
}

struct Constraint {
    rel: usize,
    vars: Vec<usize>,
}

/// Out/in neighbourhoods of a binary target relation.
struct BinaryIndex {
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
    loops: FixedBitSet,
}

struct Solver<'a, 't> {
    target: &'a Structure,
    constraints: Vec<Constraint>,
    watches: Vec<Vec<usize>>,
    binary: Vec<Option<BinaryIndex>>,
    injective: bool,
    transcript: Option<&'t mut Vec<SearchEvent>>,
}

impl<'a, 't> Solver<'a, 't> {
    fn new(
        source: &'a Structure,
        target: &'a Structure,
        injective: bool,
        transcript: Option<&'t mut Vec<SearchEvent>>,
    ) -> Self {
        let mut constraints = Vec::new();
        let mut watches = vec![Vec::new(); source.size()];
        for (r, rel) in source.relations().iter().enumerate() {
            for t in rel.tuples() {
                let c = constraints.len();
                let mut seen: Vec<usize> = Vec::new();
                for &x in t {
                    if !seen.contains(&x) {
                        seen.push(x);
                        watches[x].push(c);
                    }
                }
                constraints.push(Constraint {
                    rel: r,
                    vars: t.to_vec(),
                });
            }
        }
        let n = target.size();
        let binary = target
            .relations()
            .iter()
            .map(|rel| {
                (rel.arity() == 2).then(|| {
                    let mut out = vec![FixedBitSet::with_capacity(n); n];
                    let mut inn = vec![FixedBitSet::with_capacity(n); n];
                    let mut loops = FixedBitSet::with_capacity(n);
                    for t in rel.tuples() {
                        out[t[0]].insert(t[1]);
                        inn[t[1]].insert(t[0]);
                        if t[0] == t[1] {
                            loops.insert(t[0]);
                        }
                    }
                    BinaryIndex { out, inn, loops }
                })
            })
            .collect();
        Self {
            target,
            constraints,
            watches,
            binary,
            injective,
            transcript,
        }
    }

    fn record(&mut self, e: SearchEvent) {
        if let Some(t) = self.transcript.as_deref_mut() {
            t.push(e);
        }
    }

    /// Narrows the domains touched by constraint `c`, pushing changed elements
    /// onto `changed`. `Err(x)` means the domain of `x` became empty.
    fn revise(
        &self,
        c: usize,
        domains: &mut [FixedBitSet],
        changed: &mut Vec<usize>,
    ) -> std::result::Result<(), usize> {
        let con = &self.constraints[c];
        let vars = &con.vars;
        if let Some(idx) = &self.binary[con.rel] {
            let (x, y) = (vars[0], vars[1]);
            if x == y {
                let before = domains[x].count_ones(..);
                domains[x].intersect_with(&idx.loops);
                if domains[x].count_ones(..) != before {
                    changed.push(x);
                }
                return if domains[x].is_clear() {
                    Err(x)
                } else {
                    Ok(())
                };
            }
            let keep_x: Vec<usize> = domains[x]
                .ones()
                .filter(|&a| !idx.out[a].is_disjoint(&domains[y]))
                .collect();
            if keep_x.len() != domains[x].count_ones(..) {
                domains[x].clear();
                keep_x.iter().for_each(|&a| domains[x].insert(a));
                changed.push(x);
            }
            if keep_x.is_empty() {
                return Err(x);
            }
            let keep_y: Vec<usize> = domains[y]
                .ones()
                .filter(|&b| !idx.inn[b].is_disjoint(&domains[x]))
                .collect();
            if keep_y.len() != domains[y].count_ones(..) {
                domains[y].clear();
                keep_y.iter().for_each(|&b| domains[y].insert(b));
                changed.push(y);
            }
            return if keep_y.is_empty() { Err(y) } else { Ok(()) };
        }

        let rel = self.target.relation(con.rel);
        let n = self.target.size();
        let mut support = vec![FixedBitSet::with_capacity(n); vars.len()];
        'tuples: for s in rel.tuples() {
            for i in 0..vars.len() {
                if !domains[vars[i]].contains(s[i]) {
                    continue 'tuples;
                }
                for j in 0..i {
                    if vars[i] == vars[j] && s[i] != s[j] {
                        continue 'tuples;
                    }
                }
            }
            for (i, &v) in s.iter().enumerate() {
                support[i].insert(v);
            }
        }
        for (i, &x) in vars.iter().enumerate() {
            let before = domains[x].count_ones(..);
            domains[x].intersect_with(&support[i]);
            let after = domains[x].count_ones(..);
            if after != before {
                changed.push(x);
            }
            if after == 0 {
                return Err(x);
            }
        }
        Ok(())
    }

    /// Arc consistency to a fixpoint starting from `queue`; false on wipeout.
    fn propagate(&mut self, domains: &mut [FixedBitSet], queue: Vec<usize>, depth: usize) -> bool {
        let mut queue = std::collections::VecDeque::from(queue);
        let mut queued = FixedBitSet::with_capacity(self.constraints.len());
        for &c in &queue {
            queued.insert(c);
        }
        let mut changed = Vec::new();
        loop {
            while let Some(c) = queue.pop_front() {
                queued.set(c, false);
                changed.clear();
                if let Err(x) = self.revise(c, domains, &mut changed) {
                    self.record(SearchEvent::Wipeout { depth, element: x });
                    return false;
                }
                for &x in &changed {
                    for &d in &self.watches[x] {
                        if !queued.contains(d) {
                            queued.insert(d);
                            queue.push_back(d);
                        }
                    }
                }
            }
            if !self.injective {
                return true;
            }
            // all-different: a decided element excludes its value elsewhere
            let mut touched = Vec::new();
            for x in 0..domains.len() {
                if domains[x].count_ones(..) == 1 {
                    let a = domains[x].ones().next().expect("singleton");
                    for (y, d) in domains.iter_mut().enumerate() {
                        if y != x && d.contains(a) {
                            d.set(a, false);
                            if d.is_clear() {
                                self.record(SearchEvent::Wipeout { depth, element: y });
                                return false;
                            }
                            touched.push(y);
                        }
                    }
                }
            }
            if touched.is_empty() {
                return true;
            }
            for y in touched {
                for &d in &self.watches[y] {
                    if !queued.contains(d) {
                        queued.insert(d);
                        queue.push_back(d);
                    }
                }
            }
        }
    }

    fn search(
        &mut self,
        domains: Vec<FixedBitSet>,
        depth: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(x) = (0..domains.len()).find(|&x| domains[x].count_ones(..) > 1) else {
            let map: Vec<usize> = domains
                .iter()
                .map(|d| d.ones().next().expect("non-empty domain"))
                .collect();
            self.record(SearchEvent::Solution);
            return visit(&map);
        };
        let values: Vec<usize> = domains[x].ones().collect();
        for a in values {
            self.record(SearchEvent::Assign {
                depth,
                element: x,
                value: a,
            });
            let mut next = domains.clone();
            next[x].clear();
            next[x].insert(a);
            let queue = self.watches[x].clone();
            if self.propagate(&mut next, queue, depth + 1) {
                self.search(next, depth + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Some homomorphism `g → h`, if one exists.
pub fn find_hom(g: &Structure, h: &Structure) -> Result<Option<Homomorphism>> {
    Ok(HomSearch::new(g, h)?.first())
}

/// Whether `g → h`.
pub fn hom_exists(g: &Structure, h: &Structure) -> Result<bool> {
    Ok(HomSearch::new(g, h)?.exists())
}

/// Homomorphisms both ways.
pub fn hom_equivalent(g: &Structure, h: &Structure) -> Result<bool> {
    Ok(hom_exists(g, h)? && hom_exists(h, g)?)
}

/// Isomorphism test by injective searches in both directions.
pub fn is_isomorphic(a: &Structure, b: &Structure) -> bool {
    if a.vocab() != b.vocab() || a.size() != b.size() {
        return false;
    }
    if a.relations()
        .iter()
        .zip(b.relations())
        .any(|(x, y)| x.len() != y.len())
    {
        return false;
    }
    let one_way = |s: &Structure, t: &Structure| {
        HomSearch::new(s, t)
            .expect("same vocabulary")
            .injective(true)
            .exists()
    };
    one_way(a, b) && one_way(b, a)
}

/// A retraction of a structure onto one of its induced substructures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retraction {
    /// Elements of the retract, ascending; retract element `i` is `vertices[i]`.
    pub vertices: Vec<usize>,
    /// For each element of the whole structure, its image as a retract index.
    pub map: Vec<usize>,
}

impl Retraction {
    pub fn identity(size: usize) -> Self {
        Self {
            vertices: (0..size).collect(),
            map: (0..size).collect(),
        }
    }

    /// Checks the retraction conditions against `whole`.
    pub fn validate(&self, whole: &Structure) -> Result<Structure> {
        if self.map.len() != whole.size() {
            return Err(Error::NotRetraction(format!(
                "map has length {} for {} elements",
                self.map.len(),
                whole.size()
            )));
        }
        if self.vertices.windows(2).any(|w| w[0] >= w[1])
            || self.vertices.iter().any(|&v| v >= whole.size())
        {
            return Err(Error::NotRetraction(
                "retract vertices must be ascending and in range".into(),
            ));
        }
        for (i, &v) in self.vertices.iter().enumerate() {
            if self.map[v] != i {
                return Err(Error::NotRetraction(format!(
                    "not the identity on element {v}"
                )));
            }
        }
        let part = whole.induced(&self.vertices);
        if !is_hom(whole, &part, &self.map) {
            return Err(Error::NotRetraction(
                "map is not a homomorphism onto the retract".into(),
            ));
        }
        Ok(part)
    }
}

/// The core of a structure together with a retraction onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Core {
    pub structure: Structure,
    pub retraction: Retraction,
}

/// Computes the core: the lexicographically first minimum-size induced
/// substructure that the whole structure retracts onto.
pub fn core(h: &Structure) -> Core {
    // Shrink to learn the core size.
    let mut keep: Vec<usize> = (0..h.size()).collect();
    let mut current = h.clone();
    'shrink: loop {
        for i in 0..keep.len() {
            let smaller: Vec<usize> = (0..keep.len()).filter(|&j| j != i).collect();
            let target = current.induced(&smaller);
            if hom_exists(&current, &target).expect("same vocabulary") {
                keep = smaller.iter().map(|&j| keep[j]).collect();
                current = target;
                continue 'shrink;
            }
        }
        break;
    }
    let c = keep.len();
    let counts: Vec<usize> = current.relations().iter().map(|r| r.len()).collect();

    let mut subset: Vec<usize> = (0..c).collect();
    loop {
        let induced = h.induced(&subset);
        let plausible = induced
            .relations()
            .iter()
            .zip(&counts)
            .all(|(r, &n)| r.len() == n);
        if plausible {
            let mut search = HomSearch::new(h, h).expect("same vocabulary");
            for x in 0..h.size() {
                match subset.binary_search(&x) {
                    Ok(_) => search.fix(x, x),
                    Err(_) => search.restrict(x, subset.iter().copied()),
                };
            }
            if let Some(hm) = search.first() {
                let map = hm
                    .map()
                    .iter()
                    .map(|y| subset.binary_search(y).expect("image inside subset"))
                    .collect();
                return Core {
                    structure: induced,
                    retraction: Retraction {
                        vertices: subset,
                        map,
                    },
                };
            }
        }
        if !next_combination(&mut subset, h.size()) {
            unreachable!("the shrunken substructure is itself a retract");
        }
    }
}

/// Advances `comb` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Functions `V(G) → V(H)` encoded as value vectors, indexed lexicographically.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    base: usize,
    len: usize,
}

impl FunctionSpace {
    pub fn new(base: usize, len: usize) -> Self {
        Self { base, len }
    }

    pub fn count(&self) -> u128 {
        (self.base as u128).pow(self.len as u32)
    }

    pub fn index(&self, f: &[usize]) -> usize {
        f.iter().fold(0, |acc, &v| acc * self.base + v)
    }

    pub fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = idx % self.base;
            idx /= self.base;
        }
    }
}

/// Successor structure of `H^G`: `(f, g)` is an arc iff `(f(u), g(v)) ∈ A(H)`
/// for every arc `(u, v)` of `G`.
pub(crate) struct ExponentialArcs {
    h_out: Vec<FixedBitSet>,
    g_in: Vec<Vec<usize>>,
    h_size: usize,
}

impl ExponentialArcs {
    pub(crate) fn new(h: &Digraph, g: &Digraph) -> Self {
        let n = h.vertex_count();
        let mut h_out = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in h.arcs() {
            h_out[a].insert(b);
        }
        Self {
            h_out,
            g_in: g.in_neighbours(),
            h_size: n,
        }
    }

    /// Allowed values of `g(v)` for each `v`, given `f`.
    pub(crate) fn allowed(&self, f: &[usize]) -> Vec<FixedBitSet> {
        self.g_in
            .iter()
            .map(|preds| {
                let mut s = FixedBitSet::with_capacity(self.h_size);
                s.insert_range(..);
                for &u in preds {
                    s.intersect_with(&self.h_out[f[u]]);
                }
                s
            })
            .collect()
    }

    /// Visits every function in the product of `allowed`.
    pub(crate) fn for_each_in(
        allowed: &[FixedBitSet],
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let choices: Vec<Vec<usize>> = allowed.iter().map(|s| s.ones().collect()).collect();
        if choices.iter().any(Vec::is_empty) {
            return ControlFlow::Continue(());
        }
        let mut pos = vec![0usize; choices.len()];
        let mut cur: Vec<usize> = choices.iter().map(|c| c[0]).collect();
        loop {
            visit(&cur)?;
            let mut i = choices.len();
            loop {
                if i == 0 {
                    return ControlFlow::Continue(());
                }
                i -= 1;
                pos[i] += 1;
                if pos[i] < choices[i].len() {
                    cur[i] = choices[i][pos[i]];
                    break;
                }
                pos[i] = 0;
                cur[i] = choices[i][0];
            }
        }
    }
}

/// The exponential digraph `H^G`, with the projection indices when `G = H × H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponential {
    pub digraph: Digraph,
    pub projections: Option<(usize, usize)>,
}

/// Materialises `H^G` if it has at most `budget` vertices.
pub fn exponential(h: &Digraph, g: &Digraph, budget: u128) -> Result<Exponential> {
    let space = FunctionSpace::new(h.vertex_count(), g.vertex_count());
    let count = space.count();
    if count > budget {
        return Err(Error::BudgetExceeded {
            what: "exponential digraph vertices",
            needed: count,
            budget,
        });
    }
    let count = count as usize;
    let arcs_budget = budget.saturating_mul(16);
    let rule = ExponentialArcs::new(h, g);
    let mut arcs = Vec::new();
    let mut f = vec![0; g.vertex_count()];
    for i in 0..count {
        space.decode(i, &mut f);
        let allowed = rule.allowed(&f);
        let mut over = false;
        let _ = ExponentialArcs::for_each_in(&allowed, &mut |succ| {
            arcs.push((i, space.index(succ)));
            if arcs.len() as u128 > arcs_budget {
                over = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if over {
            return Err(Error::BudgetExceeded {
                what: "exponential digraph arcs",
                needed: arcs.len() as u128,
                budget: arcs_budget,
            });
        }
    }
    let digraph = Digraph::new(count, arcs)?;
    let projections = (product(h, h).ok().as_ref() == Some(g.as_structure()))
        .then(|| projection_indices(h.vertex_count()));
    Ok(Exponential {
        digraph,
        projections,
    })
}

/// Indices of the two projections `H × H → H` among the functions `V(H²) → V(H)`.
pub fn projection_indices(n: usize) -> (usize, usize) {
    let space = FunctionSpace::new(n, n * n);
    let first: Vec<usize> = (0..n * n).map(|x| x / n).collect();
    let second: Vec<usize> = (0..n * n).map(|x| x % n).collect();
    (space.index(&first), space.index(&second))
}
