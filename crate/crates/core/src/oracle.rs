//! Brute-force ground truth: exhaustive small-digraph enumeration, duality
//! pair campaigns and adjunction sampling.
//!
//! Campaigns decide homomorphism existence into small targets with a
//! self-contained bitmask engine, so they do not rely on the main solver.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hom::find_hom;
use crate::structures::{Digraph, Relation, Structure, Vocabulary};

/// Largest vertex count accepted by [`enumerate_digraphs`].
pub const ENUMERATION_MAX_VERTICES: usize = 5;

/// Labeled digraphs on `1..=max_vertices` vertices. For each vertex count,
/// the possible arcs are listed row by row (skipping loops unless `loops`)
/// and digraph number `m` contains the arcs whose bits are set in `m`. With
/// `up_to_isomorphism` only the labeling with the smallest adjacency code in
/// each isomorphism class is kept.
pub fn enumerate_digraphs(
    max_vertices: usize,
    loops: bool,
    up_to_isomorphism: bool,
) -> Result<Digraphs> {
    if max_vertices > ENUMERATION_MAX_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "enumerated digraph vertices",
            needed: max_vertices as u128,
            budget: ENUMERATION_MAX_VERTICES as u128,
        });
    }
    let mut it = Digraphs {
        max_vertices,
        loops,
        up_to_isomorphism,
        n: 0,
        pairs: Vec::new(),
        perms: Vec::new(),
        mask: 0,
        limit: 0,
    };
    it.start(1);
    Ok(it)
}

/// Iterator returned by [`enumerate_digraphs`].
pub struct Digraphs {
    max_vertices: usize,
    loops: bool,
    up_to_isomorphism: bool,
    n: usize,
    pairs: Vec<(usize, usize)>,
    perms: Vec<Vec<usize>>,
    mask: u64,
    limit: u64,
}

impl Digraphs {
    fn start(&mut self, n: usize) {
        self.n = n;
        self.pairs = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.loops || i != j)
            .collect();
        self.mask = 0;
        self.limit = 1 << self.pairs.len();
        if self.up_to_isomorphism {
            self.perms = permutations(n);
        }
    }

    fn is_canonical(&self, mask: u64) -> bool {
        let n = self.n;
        let arcs: Vec<(usize, usize)> = self.bits(mask).collect();
        let code = adjacency_code(n, arcs.iter().copied());
        // reject as soon as some relabeling gives a smaller code
        self.perms
            .iter()
            .all(|p| adjacency_code(n, arcs.iter().map(|&(i, j)| (p[i], p[j]))) >= code)
    }

    fn bits(&self, mask: u64) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs
            .iter()
            .enumerate()
            .filter(move |(b, _)| mask >> b & 1 == 1)
            .map(|(_, &p)| p)
    }
}

/// Bit `i * n + j` counted from the most significant end, so that smaller
/// codes have arcs at later positions.
fn adjacency_code(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> u64 {
    arcs.fold(0, |acc, (i, j)| acc | 1 << (n * n - 1 - (i * n + j)))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

impl Iterator for Digraphs {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        loop {
            if self.n > self.max_vertices {
                return None;
            }
            if self.mask == self.limit {
                self.start(self.n + 1);
                continue;
            }
            let mask = self.mask;
            self.mask += 1;
            if self.up_to_isomorphism && !self.is_canonical(mask) {
                continue;
            }
            return Some(Digraph::new(self.n, self.bits(mask)).expect("pairs are in range"));
        }
    }
}

/// A digraph prepared as a homomorphism source for [`SmallTarget`].
#[derive(Debug, Clone)]
pub struct Source {
    n: usize,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    looped: Vec<bool>,
    order: Vec<usize>,
}

impl Source {
    pub fn new(g: &Digraph) -> Self {
        let n = g.vertex_count();
        let mut looped = vec![false; n];
        for (u, v) in g.arcs().filter(|(u, v)| u == v) {
            looped[u] = true;
            let _ = v;
        }
        let out = g.out_neighbours();
        let inn = g.in_neighbours();
        // most constrained vertices first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(out[v].len() + inn[v].len()));
        Self {
            n,
            out,
            inn,
            looped,
            order,
        }
    }
}

/// A target digraph with at most 64 vertices, stored as neighbourhood masks.
#[derive(Debug, Clone)]
pub struct SmallTarget {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    loops: u64,
}

impl SmallTarget {
    pub fn new(h: &Digraph) -> Option<Self> {
        let n = h.vertex_count();
        if n > 64 {
            return None;
        }
        let mut out = vec![0u64; n];
        let mut inn = vec![0u64; n];
        let mut loops = 0;
        for (a, b) in h.arcs() {
            out[a] |= 1 << b;
            inn[b] |= 1 << a;
            if a == b {
                loops |= 1 << a;
            }
        }
        Some(Self { n, out, inn, loops })
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Whether `g → self`; arc consistency plus backtracking.
    pub fn admits(&self, g: &Source) -> bool {
        if g.n == 0 {
            return true;
        }
        let mut dom: Vec<u64> = (0..g.n)
            .map(|v| if g.looped[v] { self.loops } else { self.full() })
            .collect();
        if dom.contains(&0) || !self.propagate(g, &mut dom, (0..g.n).collect()) {
            return false;
        }
        self.search(g, &mut dom)
    }

    /// Values of `dom_x` with some `nbr` successor (or predecessor) in `other`.
    fn supported(&self, dom_x: u64, other: u64, forward: bool) -> u64 {
        let nbr = if forward { &self.out } else { &self.inn };
        let mut keep = 0;
        let mut rest = dom_x;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if nbr[a] & other != 0 {
                keep |= 1 << a;
            }
        }
        keep
    }

    fn propagate(&self, g: &Source, dom: &mut [u64], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; g.n];
        queue.iter().for_each(|&v| queued[v] = true);
        while let Some(y) = queue.pop() {
            queued[y] = false;
            // y changed: revise its neighbours against it
            for (list, forward) in [(&g.inn[y], true), (&g.out[y], false)] {
                for &x in list {
                    let d = self.supported(dom[x], dom[y], forward);
                    if d != dom[x] {
                        if d == 0 {
                            return false;
                        }
                        dom[x] = d;
                        if !queued[x] {
                            queued[x] = true;
                            queue.push(x);
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&self, g: &Source, dom: &mut [u64]) -> bool {
        let Some(&x) = g.order.iter().find(|&&v| dom[v].count_ones() > 1) else {
            return true;
        };
        let mut rest = dom[x];
        while rest != 0 {
            let a = rest.trailing_zeros();
            rest &= rest - 1;
            let mut next = dom.to_vec();
            next[x] = 1 << a;
            if self.propagate(g, &mut next, vec![x]) && self.search(g, &mut next) {
                return true;
            }
        }
        false
    }
}

/// Homomorphism existence for a campaign target, through [`SmallTarget`] when
/// the target is small enough and through the main solver otherwise.
struct Decider {
    small: Option<SmallTarget>,
    target: Digraph,
}

impl Decider {
    fn new(target: &Digraph) -> Self {
        Self {
            small: SmallTarget::new(target),
            target: target.clone(),
        }
    }

    fn admits(&self, g: &Digraph, prepared: &Source) -> bool {
        match &self.small {
            Some(t) => t.admits(prepared),
            None => find_hom(g, &self.target).expect("digraphs").is_some(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Counterexample,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Counterexample => "counterexample",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// A family member that maps to the template.
    MemberMapsToTemplate,
    /// A digraph that maps to the template but is hit by a family member.
    MemberMapsToYesInstance,
    /// A digraph that does not map to the template and no bounded family
    /// member maps to.
    Uncovered,
    /// A sampled pair on which the two sides of an adjunction disagree.
    AdjunctionMismatch,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::MemberMapsToTemplate => "member-maps-to-template",
            WitnessKind::MemberMapsToYesInstance => "member-maps-to-yes-instance",
            WitnessKind::Uncovered => "uncovered",
            WitnessKind::AdjunctionMismatch => "adjunction-mismatch",
        })
    }
}

/// A structure (and possibly a partner structure) explaining a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub structure: Structure,
    pub partner: Option<Structure>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verdict: Verdict,
    pub checked_count: usize,
    pub witnesses: Vec<Witness>,
    pub parameters: Vec<(String, String)>,
}

impl Report {
    fn from_witnesses(
        checked_count: usize,
        witnesses: Vec<Witness>,
        parameters: Vec<(String, String)>,
    ) -> Self {
        let verdict = if witnesses.iter().any(|w| w.kind != WitnessKind::Uncovered) {
            Verdict::Counterexample
        } else if witnesses.is_empty() {
            Verdict::Verified
        } else {
            Verdict::Inconclusive
        };
        Self {
            verdict,
            checked_count,
            witnesses,
            parameters,
        }
    }

    /// Human-readable summary.
    pub fn render_text(&self) -> String {
        let mut s = format!("{}\nchecked {}\n", self.verdict, self.checked_count);
        for (k, v) in &self.parameters {
            s += &format!("{k} = {v}\n");
        }
        for w in &self.witnesses {
            s += &format!("{}: {}\n{}", w.kind, w.reason, w.structure);
            if let Some(p) = &w.partner {
                s += &format!("partner:\n{p}");
            }
        }
        s
    }

    /// One tab-separated line per witness:
    /// `witness <kind> <structure> <partner or -> <reason>`.
    pub fn records(&self) -> String {
        let mut s = format!("verdict\t{}\t{}\n", self.verdict, self.checked_count);
        for (k, v) in &self.parameters {
            s += &format!("param\t{k}\t{v}\n");
        }
        for w in &self.witnesses {
            let partner = w.partner.as_ref().map_or("-".to_string(), compact);
            s += &format!(
                "witness\t{}\t{}\t{}\t{}\n",
                w.kind,
                compact(&w.structure),
                partner,
                w.reason
            );
        }
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

/// Single-line form of a structure: `size;R:a,b|c,d;S:…`.
pub fn compact(s: &Structure) -> String {
    let mut out = s.size().to_string();
    for (sym, rel) in s.vocab().symbols().iter().zip(s.relations()) {
        let tuples: Vec<String> = rel
            .tuples()
            .map(|t| t.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        out += &format!(";{}:{}", sym.name, tuples.join("|"));
    }
    out
}

/// Bounds for [`check_duality_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairOptions {
    pub g_max: usize,
    pub family_size_max: usize,
    /// Enumerate test digraphs up to isomorphism instead of all labelings.
    pub up_to_isomorphism: bool,
}

impl PairOptions {
    pub fn new(g_max: usize) -> Self {
        Self {
            g_max,
            family_size_max: usize::MAX,
            up_to_isomorphism: false,
        }
    }
}

/// Checks that `family` is a complete set of obstructions for `h` on all
/// digraphs with at most `g_max` vertices (loops included).
pub fn check_duality_pair(
    h: &Digraph,
    family: impl IntoIterator<Item = Digraph>,
    opts: PairOptions,
) -> Result<Report> {
    let decider_h = Decider::new(h);
    let mut members: Vec<(Digraph, Source)> = family
        .into_iter()
        .filter(|f| f.vertex_count() <= opts.family_size_max)
        .map(|f| {
            let s = Source::new(&f);
            (f, s)
        })
        .collect();
    members.sort_by_key(|(f, _)| f.vertex_count());

    let mut witnesses = Vec::new();
    let mut checked = 0;
    for (f, prepared) in &members {
        checked += 1;
        if decider_h.admits(f, prepared) {
            let map = find_hom(f, h)?.map(|m| m.into_map());
            witnesses.push(Witness {
                kind: WitnessKind::MemberMapsToTemplate,
                structure: f.as_structure().clone(),
                partner: None,
                reason: format!("family member maps to the template via {map:?}"),
            });
        }
    }

    for g in enumerate_digraphs(opts.g_max, true, opts.up_to_isomorphism)? {
        checked += 1;
        let g_source = Source::new(&g);
        let to_h = decider_h.admits(&g, &g_source);
        let target = Decider::new(&g);
        let hit = members
            .iter()
            .find(|(f, prepared)| target.admits(f, prepared));
        match (to_h, hit) {
            (true, Some((f, _))) => witnesses.push(Witness {
                kind: WitnessKind::MemberMapsToYesInstance,
                structure: g.as_structure().clone(),
                partner: Some(f.as_structure().clone()),
                reason: "digraph maps to the template but a family member maps to it".into(),
            }),
            (false, None) => witnesses.push(Witness {
                kind: WitnessKind::Uncovered,
                structure: g.as_structure().clone(),
                partner: None,
                reason:
                    "digraph does not map to the template and no bounded family member maps to it"
                        .into(),
            }),
            _ => {}
        }
    }

    let family_bound = if opts.family_size_max == usize::MAX {
        "unbounded".to_string()
    } else {
        opts.family_size_max.to_string()
    };
    let parameters = vec![
        ("g_max".to_string(), opts.g_max.to_string()),
        ("family_size_max".to_string(), family_bound),
        ("family_members".to_string(), members.len().to_string()),
        (
            "up_to_isomorphism".to_string(),
            opts.up_to_isomorphism.to_string(),
        ),
    ];
    Ok(Report::from_witnesses(checked, witnesses, parameters))
}

/// A random structure with `1..=max_size` elements; each possible tuple is
/// present with a probability drawn once per structure.
pub fn random_structure(rng: &mut impl Rng, vocab: &Vocabulary, max_size: usize) -> Structure {
    let n = rng.gen_range(1..=max_size.max(1));
    let density: f64 = rng.gen_range(0.1..0.6);
    let relations = vocab
        .symbols()
        .iter()
        .map(|sym| {
            let total = n.pow(sym.arity as u32);
            let mut t = vec![0; sym.arity];
            let tuples: Vec<Vec<usize>> = (0..total)
                .filter(|_| rng.gen_bool(density))
                .map(|mut i| {
                    for slot in t.iter_mut().rev() {
                        *slot = i % n;
                        i /= n;
                    }
                    t.clone()
                })
                .collect();
            Relation::from_tuples(sym.arity, tuples)
        })
        .collect();
    Structure::from_relations(vocab.clone(), n, relations).expect("tuples are in range")
}

/// `count` pairs `(B, A)` with `B` over `b_vocab` and `A` over `a_vocab`,
/// drawn from a ChaCha stream seeded with `seed`.
pub fn sample_pairs(
    b_vocab: &Vocabulary,
    a_vocab: &Vocabulary,
    count: usize,
    max_size: usize,
    seed: u64,
) -> Vec<(Structure, Structure)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let b = random_structure(&mut rng, b_vocab, max_size);
            let a = random_structure(&mut rng, a_vocab, max_size);
            (b, a)
        })
        .collect()
}

/// For each sampled `(B, A)`, checks `B → forward(A)` iff `backward(B) → A`.
pub fn check_adjunction(
    forward: impl Fn(&Structure) -> Result<Structure>,
    backward: impl Fn(&Structure) -> Result<Structure>,
    samples: &[(Structure, Structure)],
) -> Result<Report> {
    let mut witnesses = Vec::new();
    for (b, a) in samples {
        let right = find_hom(b, &forward(a)?)?.is_some();
        let left = find_hom(&backward(b)?, a)?.is_some();
        if left != right {
            witnesses.push(Witness {
                kind: WitnessKind::AdjunctionMismatch,
                structure: b.clone(),
                partner: Some(a.clone()),
                reason: format!("B -> F(A) is {right} but G(B) -> A is {left}"),
            });
        }
    }
    let parameters = vec![("samples".to_string(), samples.len().to_string())];
    Ok(Report::from_witnesses(samples.len(), witnesses, parameters))
}
