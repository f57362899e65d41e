//! Text formats: structure documents, pattern files and NUF tables.
//!
//! A structure document looks like
//!
//! ```text
//! structure s          digraph t4
//! vocab R 3 S 2        vertices 4
//! universe 3           arcs
//! rel R                0 1
//! 0 1 2                0 2
//! rel S                ...
//! 2 2                  end
//! end
//! ```
//!
//! `#` starts a comment. A file may hold several documents in a row.

use std::fmt::Write;

use crate::duality::NufCandidate;
use crate::error::{Error, Result};
use crate::pultr::{Gadget, Pattern};
use crate::structures::{Structure, Vocabulary};

/// A named structure read from a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub name: String,
    pub structure: Structure,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn lines(text: &str, first_line: usize) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content
                .char_indices()
                .chain(std::iter::once((content.len(), ' ')))
            {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push((s + 1, &content[s..pos]));
                        start = None;
                    }
                    _ => {}
                }
            }
            Line {
                number: first_line + i,
                tokens,
            }
        })
        .filter(|l| !l.tokens.is_empty())
        .collect()
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number(line: &Line<'_>, index: usize) -> Result<usize> {
    let &(col, tok) = line.tokens.get(index).ok_or_else(|| {
        parse_error(
            line.number,
            line.tokens.last().map_or(1, |t| t.0),
            "missing number",
        )
    })?;
    tok.parse().map_err(|_| {
        parse_error(
            line.number,
            col,
            format!("expected a number, found `{tok}`"),
        )
    })
}

fn vocab_from_pairs(line: &Line<'_>, from: usize) -> Result<Vocabulary> {
    let rest = &line.tokens[from..];
    if !rest.len().is_multiple_of(2) {
        let col = rest.last().map_or(1, |t| t.0);
        return Err(parse_error(
            line.number,
            col,
            "vocabulary needs `<symbol> <arity>` pairs",
        ));
    }
    let mut pairs = Vec::new();
    for (k, pair) in rest.chunks(2).enumerate() {
        let arity = number(line, from + 2 * k + 1)?;
        pairs.push((pair[0].1.to_string(), arity));
    }
    Vocabulary::new(pairs).map_err(|e| parse_error(line.number, rest[0].0, e.to_string()))
}

#[derive(PartialEq)]
enum Kind {
    Digraph,
    Structure,
}

struct Builder {
    kind: Kind,
    name: String,
    header_line: usize,
    vocab: Option<Vocabulary>,
    size: Option<usize>,
    tuples: Vec<Vec<Vec<usize>>>,
    block: Option<usize>,
}

impl Builder {
    fn vocab(&self, line: &Line<'_>) -> Result<&Vocabulary> {
        self.vocab.as_ref().ok_or_else(|| {
            parse_error(line.number, line.tokens[0].0, "`vocab` line required first")
        })
    }

    fn finish(self, line: &Line<'_>) -> Result<Document> {
        let size = self.size.ok_or_else(|| {
            parse_error(self.header_line, 1, "missing `universe`/`vertices` line")
        })?;
        let vocab = self
            .vocab
            .ok_or_else(|| parse_error(self.header_line, 1, "missing `vocab` line"))?;
        let structure = Structure::new(vocab, size, self.tuples)
            .map_err(|e| parse_error(line.number, 1, e.to_string()))?;
        Ok(Document {
            name: self.name,
            structure,
        })
    }
}

/// Parses every document in `text`.
pub fn parse_documents(text: &str) -> Result<Vec<Document>> {
    parse_documents_at(text, 1, None)
}

fn parse_documents_at(
    text: &str,
    first_line: usize,
    default_vocab: Option<&Vocabulary>,
) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut current: Option<Builder> = None;
    for line in lines(text, first_line) {
        let (col, head) = line.tokens[0];
        let Some(b) = current.as_mut() else {
            let kind = match head {
                "digraph" => Kind::Digraph,
                "structure" => Kind::Structure,
                _ => {
                    return Err(parse_error(
                        line.number,
                        col,
                        format!("expected `digraph` or `structure`, found `{head}`"),
                    ))
                }
            };
            let vocab = match kind {
                Kind::Digraph => Some(Vocabulary::digraph()),
                Kind::Structure => default_vocab.cloned(),
            };
            let tuples = vocab
                .as_ref()
                .map_or(Vec::new(), |v| vec![Vec::new(); v.len()]);
            current = Some(Builder {
                kind,
                name: line.tokens.get(1).map_or("unnamed", |t| t.1).to_string(),
                header_line: line.number,
                vocab,
                size: None,
                tuples,
                block: None,
            });
            continue;
        };
        match head {
            "vocab" if b.kind == Kind::Structure => {
                if b.size.is_some() {
                    return Err(parse_error(
                        line.number,
                        col,
                        "`vocab` must precede `universe`",
                    ));
                }
                let v = vocab_from_pairs(&line, 1)?;
                b.tuples = vec![Vec::new(); v.len()];
                b.vocab = Some(v);
            }
            "universe" | "vertices" => {
                if b.size.is_some() {
                    return Err(parse_error(line.number, col, "size declared twice"));
                }
                b.size = Some(number(&line, 1)?);
            }
            "arcs" if b.kind == Kind::Digraph => b.block = Some(0),
            "rel" => {
                let &(c, sym) = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| parse_error(line.number, col, "`rel` needs a symbol"))?;
                let idx = b.vocab(&line)?.index_of(sym).ok_or_else(|| {
                    parse_error(line.number, c, format!("unknown symbol `{sym}`"))
                })?;
                b.block = Some(idx);
            }
            "end" => {
                let b = current.take().expect("inside a document");
                docs.push(b.finish(&line)?);
            }
            _ if head.as_bytes()[0].is_ascii_digit() => {
                let size = b
                    .size
                    .ok_or_else(|| parse_error(line.number, col, "tuple before the size line"))?;
                let block = b.block.ok_or_else(|| {
                    parse_error(line.number, col, "tuple outside an `arcs`/`rel` block")
                })?;
                let symbol = &b.vocab(&line)?.symbols()[block];
                if line.tokens.len() != symbol.arity {
                    return Err(parse_error(
                        line.number,
                        col,
                        format!(
                            "`{}` has arity {} but the tuple has {} entries",
                            symbol.name,
                            symbol.arity,
                            line.tokens.len()
                        ),
                    ));
                }
                let mut tuple = Vec::with_capacity(symbol.arity);
                for (i, &(c, _)) in line.tokens.iter().enumerate() {
                    let x = number(&line, i)?;
                    if x >= size {
                        return Err(parse_error(
                            line.number,
                            c,
                            format!("element {x} out of range for universe of size {size}"),
                        ));
                    }
                    tuple.push(x);
                }
                b.tuples[block].push(tuple);
            }
            _ => {
                return Err(parse_error(
                    line.number,
                    col,
                    format!("unexpected `{head}`"),
                ));
            }
        }
    }
    if let Some(b) = current {
        return Err(parse_error(
            b.header_line,
            1,
            format!("document `{}` has no `end`", b.name),
        ));
    }
    Ok(docs)
}

/// Parses a text holding exactly one document.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.pop().expect("one document").structure),
        n => Err(parse_error(
            1,
            1,
            format!("expected one document, found {n}"),
        )),
    }
}

/// Canonical text of a structure; digraphs use the `digraph` form.
pub fn format_structure(name: &str, s: &Structure) -> String {
    let mut out = String::new();
    if s.vocab().is_digraph() {
        let _ = writeln!(out, "digraph {name}\nvertices {}\narcs", s.size());
        write_tuples(&mut out, s, 0);
    } else {
        let _ = write!(out, "structure {name}\nvocab");
        for sym in s.vocab().symbols() {
            let _ = write!(out, " {} {}", sym.name, sym.arity);
        }
        let _ = writeln!(out, "\nuniverse {}", s.size());
        for (i, sym) in s.vocab().symbols().iter().enumerate() {
            let _ = writeln!(out, "rel {}", sym.name);
            write_tuples(&mut out, s, i);
        }
    }
    out.push_str("end\n");
    out
}

fn write_tuples(out: &mut String, s: &Structure, symbol: usize) {
    for t in s.relation(symbol).tuples() {
        let line: Vec<String> = t.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// Parses a pattern file:
///
/// ```text
/// pattern arc_graph
/// sigma E 2
/// tau E 2
/// P
/// digraph p ... end
/// Q E
/// digraph q ... end
/// q E 1: 0 1
/// q E 2: 1 2
/// end
/// ```
pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let raw: Vec<&str> = text.lines().collect();
    let parsed = lines(text, 1);
    let mut sigma: Option<Vocabulary> = None;
    let mut tau: Option<Vocabulary> = None;
    let mut p: Option<Structure> = None;
    let mut qs: Vec<Option<Structure>> = Vec::new();
    let mut maps: Vec<Vec<Option<Vec<usize>>>> = Vec::new();
    let mut i = 0;
    let mut seen_header = false;
    let mut finished = false;
    while i < parsed.len() {
        let line = &parsed[i];
        let (col, head) = line.tokens[0];
        i += 1;
        if finished {
            return Err(parse_error(line.number, col, "text after the final `end`"));
        }
        if !seen_header {
            if head != "pattern" {
                return Err(parse_error(line.number, col, "expected `pattern` header"));
            }
            seen_header = true;
            continue;
        }
        match head {
            "sigma" => sigma = Some(vocab_from_pairs(line, 1)?),
            "tau" => {
                let t = vocab_from_pairs(line, 1)?;
                qs = vec![None; t.len()];
                maps = t.symbols().iter().map(|s| vec![None; s.arity]).collect();
                tau = Some(t);
            }
            "P" | "Q" => {
                let s = sigma
                    .as_ref()
                    .ok_or_else(|| parse_error(line.number, col, "`sigma` must come first"))?;
                let slot = if head == "Q" {
                    let t = tau.as_ref().ok_or_else(|| {
                        parse_error(line.number, col, "`tau` must come before `Q`")
                    })?;
                    let &(c, sym) = line
                        .tokens
                        .get(1)
                        .ok_or_else(|| parse_error(line.number, col, "`Q` needs a symbol"))?;
                    Some(t.index_of(sym).ok_or_else(|| {
                        parse_error(line.number, c, format!("unknown symbol `{sym}`"))
                    })?)
                } else {
                    None
                };
                // the nested document runs up to the next `end`
                let start = i;
                while i < parsed.len() && parsed[i].tokens[0].1 != "end" {
                    i += 1;
                }
                if i == parsed.len() {
                    return Err(parse_error(
                        line.number,
                        col,
                        "nested document has no `end`",
                    ));
                }
                let first = parsed[start].number;
                let last = parsed[i].number;
                i += 1;
                let body = raw[first - 1..last].join("\n");
                let mut docs = parse_documents_at(&body, first, Some(s))?;
                let doc = docs.pop().expect("one nested document");
                if doc.structure.vocab() != s {
                    return Err(parse_error(
                        first,
                        1,
                        "nested structure is not over `sigma`",
                    ));
                }
                match slot {
                    Some(r) => qs[r] = Some(doc.structure),
                    None => p = Some(doc.structure),
                }
            }
            "q" => {
                let t = tau
                    .as_ref()
                    .ok_or_else(|| parse_error(line.number, col, "`tau` must come before maps"))?;
                let &(c, sym) = line
                    .tokens
                    .get(1)
                    .ok_or_else(|| parse_error(line.number, col, "`q` needs a symbol"))?;
                let r = t.index_of(sym).ok_or_else(|| {
                    parse_error(line.number, c, format!("unknown symbol `{sym}`"))
                })?;
                let &(ic, itok) = line
                    .tokens
                    .get(2)
                    .ok_or_else(|| parse_error(line.number, c, "`q` needs an index"))?;
                let (itok, mut rest) = match itok.strip_suffix(':') {
                    Some(s) => (s, 3),
                    None => (itok, 3),
                };
                if line.tokens.get(3).map(|t| t.1) == Some(":") {
                    rest = 4;
                }
                let index: usize = itok
                    .parse()
                    .ok()
                    .filter(|&k| k >= 1 && k <= t.symbols()[r].arity)
                    .ok_or_else(|| {
                        parse_error(line.number, ic, format!("bad map index `{itok}`"))
                    })?;
                let values = (rest..line.tokens.len())
                    .map(|k| number(line, k))
                    .collect::<Result<Vec<_>>>()?;
                maps[r][index - 1] = Some(values);
            }
            "end" => finished = true,
            _ => {
                return Err(parse_error(
                    line.number,
                    col,
                    format!("unexpected `{head}`"),
                ))
            }
        }
    }
    if !finished {
        return Err(parse_error(
            raw.len().max(1),
            1,
            "pattern has no final `end`",
        ));
    }
    let missing = |what: &str| parse_error(1, 1, format!("pattern lacks {what}"));
    let p = p.ok_or_else(|| missing("`P`"))?;
    let tau = tau.ok_or_else(|| missing("`tau`"))?;
    let gadgets = qs
        .into_iter()
        .zip(maps)
        .zip(tau.symbols())
        .map(|((q, ms), sym)| {
            let q = q.ok_or_else(|| missing(&format!("`Q {}`", sym.name)))?;
            let maps = ms
                .into_iter()
                .enumerate()
                .map(|(k, m)| m.ok_or_else(|| missing(&format!("map `q {} {}`", sym.name, k + 1))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Gadget { q, maps })
        })
        .collect::<Result<Vec<_>>>()?;
    Pattern::new(p, tau, gadgets)
}

pub fn format_pattern(name: &str, pat: &Pattern) -> String {
    let mut out = format!("pattern {name}\n");
    for (key, vocab) in [("sigma", pat.sigma()), ("tau", pat.tau())] {
        out.push_str(key);
        for s in vocab.symbols() {
            let _ = write!(out, " {} {}", s.name, s.arity);
        }
        out.push('\n');
    }
    out.push_str("P\n");
    out.push_str(&format_structure("p", pat.p()));
    for (sym, g) in pat.tau().symbols().iter().zip(pat.gadgets()) {
        let _ = writeln!(out, "Q {}", sym.name);
        out.push_str(&format_structure(&format!("q_{}", sym.name), &g.q));
        for (k, m) in g.maps.iter().enumerate() {
            let values: Vec<String> = m.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "q {} {}: {}", sym.name, k + 1, values.join(" "));
        }
    }
    out.push_str("end\n");
    out
}

/// Parses a NUF table (`nuf <k> <n>` then one value per line) for `structure`.
pub fn parse_nuf(text: &str, structure: &Structure) -> Result<NufCandidate> {
    let parsed = lines(text, 1);
    let header = parsed
        .first()
        .ok_or_else(|| parse_error(1, 1, "empty table"))?;
    if header.tokens[0].1 != "nuf" || header.tokens.len() != 3 {
        return Err(parse_error(
            header.number,
            header.tokens[0].0,
            "expected `nuf <k> <n>`",
        ));
    }
    let k = number(header, 1)?;
    let n = number(header, 2)?;
    if n != structure.size() {
        return Err(parse_error(
            header.number,
            header.tokens[2].0,
            format!(
                "table is for {n} elements but the structure has {}",
                structure.size()
            ),
        ));
    }
    let mut table = Vec::with_capacity(parsed.len() - 1);
    for line in &parsed[1..] {
        if line.tokens.len() != 1 {
            return Err(parse_error(
                line.number,
                line.tokens[1].0,
                "one value per line",
            ));
        }
        let v = number(line, 0)?;
        if v >= n {
            return Err(parse_error(
                line.number,
                line.tokens[0].0,
                format!("value {v} out of range"),
            ));
        }
        table.push(v);
    }
    NufCandidate::new(structure.clone(), k, table)
}

pub fn format_nuf(f: &NufCandidate) -> String {
    let mut out = format!("nuf {} {}\n", f.k(), f.structure().size());
    for v in f.table() {
        let _ = writeln!(out, "{v}");
    }
    out
}

/// Builds the comment lines naming the arcs behind arc-graph vertices.
pub fn label_comments<T: std::fmt::Debug>(labels: &[T]) -> String {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| format!("# {i} = {l:?}\n"))
        .collect()
}
