//! Sproinks: trees obtained from a tree `T` by replacing each vertex with a
//! tree of height at most one and gluing neighbouring replacements at chosen
//! attachment vertices. Sproinks of obstructions for `H` are obstructions for
//! the arc graph of `H`.

use std::collections::HashSet;
use std::rc::Rc;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::structures::{quotient_digraph, tree_analysis, Digraph, Partition};

/// A tree whose vertices are split into a bottom side and a top side, with
/// every arc going from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightOneTree {
    digraph: Digraph,
    top: Vec<bool>,
}

impl HeightOneTree {
    pub fn new(digraph: Digraph, top: Vec<bool>) -> Result<Self> {
        if top.len() != digraph.vertex_count() {
            return Err(Error::InvalidSproink(
                "side vector has the wrong length".into(),
            ));
        }
        if !tree_analysis(&digraph).is_tree {
            return Err(Error::InvalidSproink("replacement is not a tree".into()));
        }
        if digraph.arcs().any(|(x, y)| top[x] || !top[y]) {
            return Err(Error::InvalidSproink(
                "replacement arcs must go from bottom to top".into(),
            ));
        }
        Ok(Self { digraph, top })
    }

    /// A single vertex on the given side.
    pub fn single(top: bool) -> Self {
        Self {
            digraph: Digraph::edgeless(1),
            top: vec![top],
        }
    }

    /// Alternating path with `arcs` arcs on vertices `0..=arcs`; vertex 0 is a
    /// bottom vertex iff `starts_bottom`.
    pub fn fence(arcs: usize, starts_bottom: bool) -> Self {
        let top: Vec<bool> = (0..=arcs).map(|i| (i % 2 == 1) == starts_bottom).collect();
        let digraph = Digraph::new(
            arcs + 1,
            (0..arcs).map(|i| if top[i] { (i + 1, i) } else { (i, i + 1) }),
        )
        .expect("valid fence");
        Self { digraph, top }
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn vertex_count(&self) -> usize {
        self.digraph.vertex_count()
    }

    pub fn is_top(&self, v: usize) -> bool {
        self.top[v]
    }

    pub fn bottoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.top.len()).filter(|&v| !self.top[v])
    }

    pub fn tops(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.top.len()).filter(|&v| self.top[v])
    }
}

/// Full description of one sproink of `tree`.
#[derive(Debug, Clone)]
pub struct SproinkSpec {
    pub tree: Digraph,
    /// Replacement tree for each vertex of `tree`.
    pub parts: Vec<HeightOneTree>,
    /// For each arc `e = (u, u')` of `tree` (in arc order): the attachment
    /// vertex in the part of `u` (a top vertex) and in the part of `u'` (a
    /// bottom vertex).
    pub attachments: Vec<(usize, usize)>,
}

/// Glues the parts of `spec` along its attachments.
pub fn assemble_sproink(spec: &SproinkSpec) -> Result<Digraph> {
    if !tree_analysis(&spec.tree).is_tree {
        return Err(Error::NotATree);
    }
    if spec.parts.len() != spec.tree.vertex_count() {
        return Err(Error::InvalidSproink(
            "one part per tree vertex is required".into(),
        ));
    }
    if spec.attachments.len() != spec.tree.arc_count() {
        return Err(Error::InvalidSproink(
            "one attachment pair per arc is required".into(),
        ));
    }
    for ((u, w), &(a, b)) in spec.tree.arcs().zip(&spec.attachments) {
        let (pu, pw) = (&spec.parts[u], &spec.parts[w]);
        if a >= pu.vertex_count() || !pu.is_top(a) {
            return Err(Error::InvalidSproink(format!(
                "arc ({u},{w}) must leave part {u} from a top vertex"
            )));
        }
        if b >= pw.vertex_count() || pw.is_top(b) {
            return Err(Error::InvalidSproink(format!(
                "arc ({u},{w}) must enter part {w} at a bottom vertex"
            )));
        }
    }
    let parts: Vec<&HeightOneTree> = spec.parts.iter().collect();
    let s = glue(&spec.tree, &parts, &spec.attachments);
    debug_assert!(tree_analysis(&s).is_tree);
    Ok(s)
}

fn glue(tree: &Digraph, parts: &[&HeightOneTree], attachments: &[(usize, usize)]) -> Digraph {
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        offsets.push(total);
        total += p.vertex_count();
    }
    let mut uf = UnionFind::<usize>::new(total);
    for ((u, w), &(a, b)) in tree.arcs().zip(attachments) {
        uf.union(offsets[u] + a, offsets[w] + b);
    }
    let roots: Vec<usize> = (0..total).map(|x| uf.find(x)).collect();
    let whole = Digraph::new(
        total,
        parts
            .iter()
            .zip(&offsets)
            .flat_map(|(p, &off)| p.digraph.arcs().map(move |(x, y)| (x + off, y + off))),
    )
    .expect("offsets are in range");
    quotient_digraph(&whole, &Partition::from_labels(&roots)).expect("partition matches")
}

/// Canonical byte string of an oriented tree; equal strings iff isomorphic.
pub fn tree_canonical_form(t: &Digraph) -> Result<Vec<u8>> {
    if !tree_analysis(t).is_tree {
        return Err(Error::NotATree);
    }
    let n = t.vertex_count();
    let mut adj: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    for (x, y) in t.arcs() {
        adj[x].push((y, b'>'));
        adj[y].push((x, b'<'));
    }
    // centres by repeated leaf removal
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &(w, _) in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<(usize, u8)>], v: usize, parent: usize, out: &mut Vec<u8>) {
        let mut children: Vec<Vec<u8>> = adj[v]
            .iter()
            .filter(|&&(w, _)| w != parent)
            .map(|&(w, dir)| {
                let mut code = vec![dir];
                encode(adj, w, v, &mut code);
                code
            })
            .collect();
        children.sort_unstable();
        out.push(b'(');
        children.iter().for_each(|c| out.extend_from_slice(c));
        out.push(b')');
    }
    let best = layer
        .iter()
        .map(|&c| {
            let mut code = Vec::new();
            encode(&adj, c, usize::MAX, &mut code);
            code
        })
        .min()
        .expect("a tree has a centre");
    Ok(best)
}

/// One way of replacing a vertex: the part plus, for each incident arc of the
/// vertex (in the order of [`IncidentArcs`]), the attachment vertex.
#[derive(Debug, Clone)]
struct Replacement {
    part: Rc<HeightOneTree>,
    attach: Vec<usize>,
}

/// Arcs of `T` at each vertex: `(arc index, vertex is the arc's tail)`.
type IncidentArcs = Vec<Vec<(usize, bool)>>;

/// Streams pairwise non-isomorphic sproinks of `tree` with at most
/// `max_vertices` vertices.
///
/// With `paths_only`, every non-leaf vertex is replaced by an alternating path
/// and every leaf by a single vertex; otherwise every tree of height at most
/// one is allowed for every vertex.
pub fn enumerate_sproinks(
    tree: &Digraph,
    max_vertices: usize,
    paths_only: bool,
) -> Result<Sproinks> {
    if !tree_analysis(tree).is_tree {
        return Err(Error::NotATree);
    }
    let n = tree.vertex_count();
    let mut incident: IncidentArcs = vec![Vec::new(); n];
    for (i, (u, w)) in tree.arcs().enumerate() {
        incident[u].push((i, true));
        incident[w].push((i, false));
    }
    let arcs = tree.arc_count();
    let min_part = |u: usize| -> usize {
        let outs = incident[u].iter().filter(|a| a.1).count();
        let ins = incident[u].len() - outs;
        if outs > 0 && ins > 0 {
            2
        } else {
            1
        }
    };
    let min_total: usize = (0..n).map(min_part).sum();
    // Largest part that still fits next to minimal parts elsewhere.
    let slack = (max_vertices + arcs).checked_sub(min_total);
    let library = match slack {
        Some(slack) if !paths_only => all_height_one_trees(2 + slack),
        _ => Vec::new(),
    };

    let mut choices: Vec<Vec<Replacement>> = Vec::with_capacity(n);
    for (u, inc) in incident.iter().enumerate() {
        let Some(slack) = slack else {
            choices.push(Vec::new());
            continue;
        };
        let cap = min_part(u) + slack;
        let parts: Vec<Rc<HeightOneTree>> = if paths_only {
            path_parts(inc, cap)
        } else {
            library
                .iter()
                .filter(|p| p.vertex_count() <= cap)
                .cloned()
                .collect()
        };
        let mut opts = Vec::new();
        for part in parts {
            attachment_choices(&part, inc, &mut |attach| {
                opts.push(Replacement {
                    part: Rc::clone(&part),
                    attach,
                })
            });
        }
        opts.sort_by_key(|r| r.part.vertex_count());
        choices.push(opts);
    }

    let exhausted = choices.iter().any(Vec::is_empty);
    Ok(Sproinks {
        tree: tree.clone(),
        incident,
        choices,
        position: vec![0; n],
        started: false,
        exhausted,
        max_vertices,
        seen: HashSet::new(),
    })
}

fn path_parts(incident: &[(usize, bool)], cap: usize) -> Vec<Rc<HeightOneTree>> {
    let outs = incident.iter().filter(|a| a.1).count();
    let ins = incident.len() - outs;
    if incident.len() == 1 {
        return vec![Rc::new(HeightOneTree::single(outs == 1))];
    }
    let mut parts = Vec::new();
    if outs == 0 || ins == 0 {
        parts.push(Rc::new(HeightOneTree::single(outs > 0)));
    }
    for arcs in 1..cap {
        parts.push(Rc::new(HeightOneTree::fence(arcs, true)));
        // odd fences are symmetric under reversal; even ones come in two shapes
        if arcs % 2 == 0 {
            parts.push(Rc::new(HeightOneTree::fence(arcs, false)));
        }
    }
    parts
}

/// All trees of height at most one with up to `max` vertices, up to
/// isomorphism; the single vertex appears once per side.
fn all_height_one_trees(max: usize) -> Vec<Rc<HeightOneTree>> {
    let mut out = vec![
        Rc::new(HeightOneTree::single(false)),
        Rc::new(HeightOneTree::single(true)),
    ];
    if max < 2 {
        out.truncate(if max == 1 { 2 } else { 0 });
        return out;
    }
    let mut layer = vec![HeightOneTree::single(false)];
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    for _ in 2..=max {
        let mut next = Vec::new();
        for t in &layer {
            let n = t.vertex_count();
            for v in 0..n {
                let mut arcs: Vec<(usize, usize)> = t.digraph.arcs().collect();
                let mut top = t.top.clone();
                if t.top[v] {
                    arcs.push((n, v));
                    top.push(false);
                } else {
                    arcs.push((v, n));
                    top.push(true);
                }
                let d = Digraph::new(n + 1, arcs).expect("valid growth");
                let key = tree_canonical_form(&d).expect("growth keeps trees");
                if seen.insert(key) {
                    next.push(HeightOneTree { digraph: d, top });
                }
            }
        }
        out.extend(next.iter().cloned().map(Rc::new));
        layer = next;
    }
    out
}

fn attachment_choices(
    part: &HeightOneTree,
    incident: &[(usize, bool)],
    emit: &mut dyn FnMut(Vec<usize>),
) {
    let tops: Vec<usize> = part.tops().collect();
    let bottoms: Vec<usize> = part.bottoms().collect();
    let slots: Vec<&[usize]> = incident
        .iter()
        .map(|&(_, tail)| if tail { &tops[..] } else { &bottoms[..] })
        .collect();
    if slots.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut pos = vec![0usize; slots.len()];
    loop {
        emit(pos.iter().zip(&slots).map(|(&i, s)| s[i]).collect());
        let mut i = slots.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < slots[i].len() {
                break;
            }
            pos[i] = 0;
        }
    }
}

/// Iterator returned by [`enumerate_sproinks`].
pub struct Sproinks {
    tree: Digraph,
    incident: IncidentArcs,
    choices: Vec<Vec<Replacement>>,
    position: Vec<usize>,
    started: bool,
    exhausted: bool,
    max_vertices: usize,
    seen: HashSet<Vec<u8>>,
}

impl Sproinks {
    fn size_at(&self, u: usize, c: usize) -> usize {
        self.choices[u][c].part.vertex_count()
    }

    fn fits(&self) -> bool {
        let total: usize = (0..self.position.len())
            .map(|u| self.size_at(u, self.position[u]))
            .sum();
        total <= self.max_vertices + self.tree.arc_count()
    }

    /// Moves to the next combination within the size bound. Options are sorted
    /// by size, so an over-budget option ends its digit.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return !self.exhausted && self.fits();
        }
        let k = self.position.len();
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            self.position[i] += 1;
            for j in i + 1..k {
                self.position[j] = 0;
            }
            if self.position[i] < self.choices[i].len() && self.fits() {
                return true;
            }
            self.position[i] = 0;
        }
    }

    fn current(&self) -> Digraph {
        let parts: Vec<&HeightOneTree> = self
            .position
            .iter()
            .enumerate()
            .map(|(u, &c)| &*self.choices[u][c].part)
            .collect();
        let mut attachments = vec![(0, 0); self.tree.arc_count()];
        for (u, inc) in self.incident.iter().enumerate() {
            let rep = &self.choices[u][self.position[u]];
            for (&(arc, tail), &v) in inc.iter().zip(&rep.attach) {
                if tail {
                    attachments[arc].0 = v;
                } else {
                    attachments[arc].1 = v;
                }
            }
        }
        glue(&self.tree, &parts, &attachments)
    }
}

impl Iterator for Sproinks {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        while self.advance() {
            let s = self.current();
            let key = tree_canonical_form(&s).expect("sproinks of trees are trees");
            if self.seen.insert(key) {
                return Some(s);
            }
        }
        None
    }
}

/// Oriented path with two forward arcs, then `2j + 1` alternating arcs that
/// start and end backwards, then two forward arcs.
pub fn thunderbolt(j: usize) -> Digraph {
    let middle = 2 * j + 1;
    let arcs = middle + 4;
    let forward = |i: usize| i < 2 || i >= 2 + middle || (i - 2) % 2 == 1;
    Digraph::new(
        arcs + 1,
        (0..arcs).map(|i| if forward(i) { (i, i + 1) } else { (i + 1, i) }),
    )
    .expect("valid thunderbolt")
}
