//! Quivers, quadratic monomial algebras and path-word combinatorics.
//!
//! Words are read left to right: the word `a b` means "traverse `a`, then
//! `b`", and is composable when `target(a) = source(b)`. A relation `(a, b)`
//! declares the length-two word `a b` to be zero. The quadratic dual lives on
//! the opposite quiver; its relations are exactly the duals of the *allowed*
//! length-two words, with the order of the two arrows swapped.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A finite quiver: ordered vertices and ordered named arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_names: Vec<String>,
    arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

impl Quiver {
    pub fn new(vertex_names: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Self> {
        let mut vidx = BTreeMap::new();
        for (i, v) in vertex_names.iter().enumerate() {
            if vidx.insert(v.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex `{v}`")));
            }
        }
        let mut aidx = BTreeMap::new();
        let mut out = Vec::new();
        for (i, (name, s, t)) in arrows.into_iter().enumerate() {
            if vidx.contains_key(&name) {
                return Err(Error::Invalid(format!(
                    "arrow `{name}` clashes with a vertex identifier"
                )));
            }
            if aidx.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate arrow `{name}`")));
            }
            let source = *vidx
                .get(&s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let target = *vidx
                .get(&t)
                .ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            out.push(Arrow {
                name,
                source,
                target,
            });
        }
        Ok(Quiver {
            vertex_names,
            arrows: out,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|x| x.name == name)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }
}

/// A quadratic monomial algebra: a quiver plus forbidden composable pairs.
///
/// `allowed` and `zero` are the two 0/1 transfer graphs on arrows: `allowed`
/// has an edge `(a, b)` when the word `a b` is composable and nonzero, `zero`
/// when it is a relation. Together they partition the composable pairs.
#[derive(Debug, Clone)]
pub struct MonomialAlgebra {
    quiver: Quiver,
    relations: Vec<(usize, usize)>,
    allowed: Vec<Vec<bool>>,
    zero: Vec<Vec<bool>>,
    finite_dimensional: bool,
}

impl PartialEq for MonomialAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver && self.relations == other.relations
    }
}
impl Eq for MonomialAlgebra {}

impl MonomialAlgebra {
    pub fn new(quiver: Quiver, relations: Vec<(String, String)>) -> Result<Self> {
        let mut rel = Vec::new();
        for (a, b) in relations {
            let ia = quiver
                .arrow_index(&a)
                .ok_or_else(|| Error::UnknownArrow(a.clone()))?;
            let ib = quiver
                .arrow_index(&b)
                .ok_or_else(|| Error::UnknownArrow(b.clone()))?;
            rel.push((ia, ib));
        }
        Self::from_indices(quiver, rel)
    }

    pub fn from_indices(quiver: Quiver, mut relations: Vec<(usize, usize)>) -> Result<Self> {
        relations.sort_unstable();
        relations.dedup();
        let n = quiver.arrow_count();
        for &(a, b) in &relations {
            if quiver.arrow(a).target != quiver.arrow(b).source {
                return Err(Error::Invalid(format!(
                    "relation not composable: `{} {}` (target of first is `{}`, source of second is `{}`)",
                    quiver.arrow(a).name,
                    quiver.arrow(b).name,
                    quiver.vertex_name(quiver.arrow(a).target),
                    quiver.vertex_name(quiver.arrow(b).source),
                )));
            }
        }
        let mut allowed = vec![vec![false; n]; n];
        let mut zero = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                if quiver.arrow(a).target == quiver.arrow(b).source {
                    if relations.binary_search(&(a, b)).is_ok() {
                        zero[a][b] = true;
                    } else {
                        allowed[a][b] = true;
                    }
                }
            }
        }
        let finite_dimensional = graph_is_acyclic(&allowed);
        Ok(MonomialAlgebra {
            quiver,
            relations,
            allowed,
            zero,
            finite_dimensional,
        })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    pub fn is_relation(&self, a: usize, b: usize) -> bool {
        self.zero[a][b]
    }

    pub fn is_allowed(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    pub fn allowed_graph(&self) -> &Vec<Vec<bool>> {
        &self.allowed
    }

    pub fn zero_graph(&self) -> &Vec<Vec<bool>> {
        &self.zero
    }

    /// True when the allowed graph is acyclic, i.e. nonzero words have
    /// bounded length and the algebra is finite-dimensional.
    pub fn is_finite_dimensional_flag(&self) -> bool {
        self.finite_dimensional
    }

    /// Every composable pair is a relation: the radical squares to zero.
    pub fn is_radical_square_zero(&self) -> bool {
        self.allowed.iter().all(|row| row.iter().all(|&x| !x))
    }

    /// `(finite, longest nonzero word length, total dimension)`; the last two
    /// are `None` for infinite-dimensional algebras.
    pub fn is_finite_dimensional(&self) -> (bool, Option<usize>, Option<BigUint>) {
        if !self.finite_dimensional {
            return (false, None, None);
        }
        let max_len = longest_walk(&self.allowed).map_or(0, |w| w + 1);
        let nv = self.quiver.vertex_count();
        let mut dim = BigUint::from(nv);
        let mut counts = ArrowWalkCounts::new(self);
        for n in 1..=max_len {
            dim += counts.total_of_length(n);
        }
        (true, Some(max_len), Some(dim))
    }

    /// Number of nonzero words of length `n` from `x` to `y`, from powers of
    /// the allowed graph.
    pub fn count_paths(&self, x: usize, y: usize, n: usize) -> BigUint {
        if n == 0 {
            return if x == y {
                BigUint::one()
            } else {
                BigUint::zero()
            };
        }
        let mut counts = ArrowWalkCounts::new(self);
        counts.from_to(x, y, n)
    }

    /// The quadratic dual: opposite quiver, relations dual to the allowed
    /// pairs. The composable word `a b` from `x` through `y` to `z` dualizes
    /// to `b_op a_op` from `z` back to `x`; it is a relation of the dual
    /// exactly when `a b` is allowed here.
    pub fn koszul_dual(&self) -> MonomialAlgebra {
        let q = &self.quiver;
        let vertex_names = q.vertex_names.clone();
        let arrows: Vec<Arrow> = q
            .arrows
            .iter()
            .map(|a| Arrow {
                name: format!("{}_op", a.name),
                source: a.target,
                target: a.source,
            })
            .collect();
        let quiver = Quiver {
            vertex_names,
            arrows,
        };
        let n = q.arrow_count();
        let mut relations = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.allowed[a][b] {
                    // dual arrows keep the index of their originals
                    relations.push((b, a));
                }
            }
        }
        MonomialAlgebra::from_indices(quiver, relations)
            .expect("dual relations are composable by construction")
    }

    /// Is the word given by this arrow sequence nonzero? (Scans consecutive
    /// pairs; composability is assumed.)
    pub fn word_nonzero(&self, arrows: &[usize]) -> bool {
        arrows.windows(2).all(|w| self.allowed[w[0]][w[1]])
    }

    /// Path-algebra product. Zero (None) when endpoints mismatch or the
    /// concatenation hits a relation.
    pub fn multiply_words(&self, p: &PathWord, q: &PathWord) -> Option<PathWord> {
        if p.target(self) != q.source {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.extend_from_slice(&q.arrows);
        if !self.word_nonzero(&arrows) {
            return None;
        }
        Some(PathWord {
            source: p.source,
            arrows,
        })
    }

    /// All nonzero words of length `n` starting at vertex `x`, in canonical
    /// (lexicographic by arrow index) order.
    pub fn words_from(&self, x: usize, n: usize) -> Vec<PathWord> {
        fn rec(
            alg: &MonomialAlgebra,
            w: &mut Vec<usize>,
            x: usize,
            n: usize,
            out: &mut Vec<PathWord>,
        ) {
            if w.len() == n {
                out.push(PathWord {
                    source: x,
                    arrows: w.clone(),
                });
                return;
            }
            let at = if let Some(&last) = w.last() {
                alg.quiver.arrow(last).target
            } else {
                x
            };
            for a in 0..alg.quiver.arrow_count() {
                if alg.quiver.arrow(a).source != at {
                    continue;
                }
                if let Some(&last) = w.last() {
                    if !alg.allowed[last][a] {
                        continue;
                    }
                }
                w.push(a);
                rec(alg, w, x, n, out);
                w.pop();
            }
        }
        let mut out = Vec::new();
        let mut w = Vec::new();
        rec(self, &mut w, x, n, &mut out);
        out
    }

    /// All nonzero words of length `n` ending at vertex `y`, canonical order.
    pub fn words_into(&self, y: usize, n: usize) -> Vec<PathWord> {
        let mut out: Vec<PathWord> = Vec::new();
        for x in 0..self.quiver.vertex_count() {
            out.extend(
                self.words_from(x, n)
                    .into_iter()
                    .filter(|w| w.target(self) == y),
            );
        }
        out.sort();
        out
    }

    pub fn arc(self) -> Arc<MonomialAlgebra> {
        Arc::new(self)
    }
}

/// A composable arrow sequence; trivial words carry just their vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathWord {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl PathWord {
    pub fn trivial(v: usize) -> Self {
        PathWord {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn single(alg: &MonomialAlgebra, a: usize) -> Self {
        PathWord {
            source: alg.quiver.arrow(a).source,
            arrows: vec![a],
        }
    }

    pub fn degree(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self, alg: &MonomialAlgebra) -> usize {
        self.arrows
            .last()
            .map_or(self.source, |&a| alg.quiver.arrow(a).target)
    }

    pub fn is_nonzero(&self, alg: &MonomialAlgebra) -> bool {
        alg.word_nonzero(&self.arrows)
    }

    /// Display form: `e(v)` for trivial words, arrow names joined by `.`.
    pub fn display(&self, alg: &MonomialAlgebra) -> String {
        if self.arrows.is_empty() {
            format!("e({})", alg.quiver.vertex_name(self.source))
        } else {
            self.arrows
                .iter()
                .map(|&a| alg.quiver.arrow(a).name.clone())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Walk counting in the allowed graph with cached matrix powers.
struct ArrowWalkCounts<'a> {
    alg: &'a MonomialAlgebra,
    // powers[k][a][b] = number of allowed walks with k steps from arrow a to b
    powers: Vec<Vec<Vec<BigUint>>>,
}

impl<'a> ArrowWalkCounts<'a> {
    fn new(alg: &'a MonomialAlgebra) -> Self {
        let n = alg.quiver.arrow_count();
        let ident: Vec<Vec<BigUint>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ArrowWalkCounts {
            alg,
            powers: vec![ident],
        }
    }

    fn power(&mut self, k: usize) -> &Vec<Vec<BigUint>> {
        let n = self.alg.quiver.arrow_count();
        while self.powers.len() <= k {
            let last = self.powers.last().unwrap();
            let mut next = vec![vec![BigUint::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    if last[i][j].is_zero() {
                        continue;
                    }
                    for l in 0..n {
                        if self.alg.allowed[j][l] {
                            let add = last[i][j].clone();
                            next[i][l] += add;
                        }
                    }
                }
            }
            self.powers.push(next);
        }
        &self.powers[k]
    }

    /// Nonzero words of length `n >= 1` from x to y.
    fn from_to(&mut self, x: usize, y: usize, n: usize) -> BigUint {
        assert!(n >= 1);
        let alg = self.alg;
        let p = self.power(n - 1);
        let mut total = BigUint::zero();
        for a in 0..alg.quiver.arrow_count() {
            if alg.quiver.arrow(a).source != x {
                continue;
            }
            for b in 0..alg.quiver.arrow_count() {
                if alg.quiver.arrow(b).target != y {
                    continue;
                }
                total += p[a][b].clone();
            }
        }
        total
    }

    fn total_of_length(&mut self, n: usize) -> BigUint {
        assert!(n >= 1);
        let p = self.power(n - 1);
        let mut total = BigUint::zero();
        for row in p {
            for v in row {
                total += v.clone();
            }
        }
        total
    }
}

fn graph_is_acyclic(adj: &[Vec<bool>]) -> bool {
    // Kahn's algorithm on the arrow graph.
    let n = adj.len();
    let mut indeg = vec![0usize; n];
    for row in adj {
        for (j, &e) in row.iter().enumerate() {
            if e {
                indeg[j] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop() {
        seen += 1;
        for (j, &e) in adj[i].iter().enumerate() {
            if e {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
    }
    seen == n
}

/// Longest walk (edge count) in an acyclic graph; None when there are no nodes.
fn longest_walk(adj: &[Vec<bool>]) -> Option<usize> {
    let n = adj.len();
    if n == 0 {
        return None;
    }
    // topological order then DP
    let mut indeg = vec![0usize; n];
    for row in adj {
        for (j, &e) in row.iter().enumerate() {
            if e {
                indeg[j] += 1;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = queue.pop() {
        order.push(i);
        for (j, &e) in adj[i].iter().enumerate() {
            if e {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
    }
    assert_eq!(order.len(), n, "graph must be acyclic");
    let mut longest = vec![0usize; n];
    for &i in order.iter().rev() {
        for (j, &e) in adj[i].iter().enumerate() {
            if e {
                longest[i] = longest[i].max(longest[j] + 1);
            }
        }
    }
    longest.into_iter().max()
}

/// Parse the line-oriented algebra file format: `vertex <id>`,
/// `arrow <id> <source> <target>`, `relation <a> <b>`, `#` comments.
pub fn parse_algebra(text: &str) -> Result<MonomialAlgebra> {
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut relations: Vec<(String, String, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kw = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        match kw {
            "vertex" => {
                if rest.len() != 1 {
                    return Err(Error::parse(lineno, "expected `vertex <id>`"));
                }
                vertices.push(rest[0].to_string());
            }
            "arrow" => {
                if rest.len() != 3 {
                    return Err(Error::parse(lineno, "expected `arrow <id> <source> <target>`"));
                }
                arrows.push((rest[0].to_string(), rest[1].to_string(), rest[2].to_string()));
            }
            "relation" => {
                if rest.len() != 2 {
                    return Err(Error::parse(lineno, "expected `relation <arrowA> <arrowB>`"));
                }
                relations.push((rest[0].to_string(), rest[1].to_string(), lineno));
            }
            other => {
                return Err(Error::parse(lineno, format!("unknown keyword `{other}`")));
            }
        }
    }
    let quiver = Quiver::new(vertices, arrows).map_err(|e| match e {
        Error::Invalid(msg) | Error::UnknownVertex(msg) => Error::parse(0, msg),
        e => e,
    })?;
    let mut rel = Vec::new();
    for (a, b, lineno) in relations {
        let ia = quiver
            .arrow_index(&a)
            .ok_or_else(|| Error::parse(lineno, format!("unknown arrow `{a}`")))?;
        let ib = quiver
            .arrow_index(&b)
            .ok_or_else(|| Error::parse(lineno, format!("unknown arrow `{b}`")))?;
        if quiver.arrow(ia).target != quiver.arrow(ib).source {
            return Err(Error::parse(
                lineno,
                format!("relation not composable: `{a} {b}`"),
            ));
        }
        rel.push((ia, ib));
    }
    MonomialAlgebra::from_indices(quiver, rel)
}

/// Canonical serialization: declaration order, one item per line.
pub fn serialize_algebra(alg: &MonomialAlgebra) -> String {
    let mut out = String::new();
    let q = alg.quiver();
    for v in &q.vertex_names {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in &q.arrows {
        out.push_str(&format!(
            "arrow {} {} {}\n",
            a.name,
            q.vertex_name(a.source),
            q.vertex_name(a.target)
        ));
    }
    for &(a, b) in &alg.relations {
        out.push_str(&format!(
            "relation {} {}\n",
            q.arrow(a).name,
            q.arrow(b).name
        ));
    }
    out
}

impl fmt::Display for MonomialAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serialize_algebra(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn sl2() -> MonomialAlgebra {
        parse_algebra(
            "vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n",
        )
        .unwrap()
    }

    fn a3() -> MonomialAlgebra {
        parse_algebra(
            "vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation a b\n",
        )
        .unwrap()
    }

    fn loop_free() -> MonomialAlgebra {
        parse_algebra("vertex v\narrow l v v\n").unwrap()
    }

    fn loop_nil() -> MonomialAlgebra {
        parse_algebra("vertex v\narrow l v v\nrelation l l\n").unwrap()
    }

    /// Independent brute-force enumerator of nonzero words, by recursive
    /// extension with a relation scan on the whole word each time.
    fn brute_words(alg: &MonomialAlgebra, n: usize) -> Vec<PathWord> {
        fn extend(alg: &MonomialAlgebra, acc: &mut Vec<PathWord>, w: PathWord, n: usize) {
            if w.degree() == n {
                if w.arrows.windows(2).all(|p| {
                    alg.quiver().arrow(p[0]).target == alg.quiver().arrow(p[1]).source
                        && !alg.is_relation(p[0], p[1])
                }) {
                    acc.push(w);
                }
                return;
            }
            let at = w.target(alg);
            for a in 0..alg.quiver().arrow_count() {
                if alg.quiver().arrow(a).source == at {
                    let mut next = w.clone();
                    next.arrows.push(a);
                    extend(alg, acc, next, n);
                }
            }
        }
        let mut acc = Vec::new();
        for v in 0..alg.quiver().vertex_count() {
            extend(alg, &mut acc, PathWord::trivial(v), n);
        }
        acc
    }

    #[test]
    fn parse_sl2_counts() {
        let alg = sl2();
        assert_eq!(alg.quiver().vertex_count(), 2);
        assert_eq!(alg.quiver().arrow_count(), 2);
        assert_eq!(alg.relations().len(), 1);
    }

    #[test]
    fn parse_rejects_noncomposable_relation() {
        let err = parse_algebra("vertex 1\nvertex 2\narrow a 1 2\nrelation a a\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("relation not composable"), "{msg}");
        assert!(msg.contains("line 4"), "{msg}");
    }

    #[test]
    fn parse_rejects_duplicates_and_unknowns() {
        assert!(parse_algebra("vertex 1\nvertex 1\n").is_err());
        assert!(parse_algebra("vertex 1\narrow a 1 2\n").is_err());
        let err = parse_algebra("vertex 1\narrow a 1 1\nrelation a b\n").unwrap_err();
        assert!(err.to_string().contains("unknown arrow `b`"));
    }

    #[test]
    fn empty_relation_list_is_valid() {
        let alg = parse_algebra("vertex 1\nvertex 2\narrow a 1 2\n").unwrap();
        assert!(alg.relations().is_empty());
    }

    #[test]
    fn dual_of_sl2() {
        let alg = sl2();
        let dual = alg.koszul_dual();
        assert_eq!(dual.quiver().arrow(0).name, "alpha_op");
        assert_eq!(dual.quiver().arrow(0).source, 1);
        assert_eq!(dual.quiver().arrow(0).target, 0);
        // single relation alpha_op beta_op
        assert_eq!(dual.relations(), &[(0, 1)]);
        assert!(serialize_algebra(&dual).contains("relation alpha_op beta_op"));
    }

    #[test]
    fn dual_of_nilpotent_loop_is_free() {
        let dual = loop_nil().koszul_dual();
        assert!(dual.relations().is_empty());
        assert!(!dual.is_finite_dimensional_flag());
    }

    #[test]
    fn dual_is_involution_on_a3() {
        let alg = a3();
        let dd = alg.koszul_dual().koszul_dual();
        // canonical identification: arrow i of the double dual is arrow i
        assert_eq!(dd.quiver().vertex_count(), alg.quiver().vertex_count());
        for i in 0..alg.quiver().arrow_count() {
            assert_eq!(dd.quiver().arrow(i).source, alg.quiver().arrow(i).source);
            assert_eq!(dd.quiver().arrow(i).target, alg.quiver().arrow(i).target);
            assert_eq!(
                dd.quiver().arrow(i).name,
                format!("{}_op_op", alg.quiver().arrow(i).name)
            );
        }
        assert_eq!(dd.relations(), alg.relations());
    }

    #[test]
    fn dual_allowed_graph_is_transposed_complement() {
        for alg in [sl2(), a3(), loop_free(), loop_nil()] {
            let dual = alg.koszul_dual();
            let n = alg.quiver().arrow_count();
            for a in 0..n {
                for b in 0..n {
                    let composable =
                        alg.quiver().arrow(a).target == alg.quiver().arrow(b).source;
                    // dual arrows keep indices; pair (b_op, a_op) composable iff (a, b) is
                    assert_eq!(dual.is_allowed(b, a), composable && alg.is_relation(a, b));
                    assert_eq!(dual.is_relation(b, a), composable && alg.is_allowed(a, b));
                }
            }
        }
    }

    #[test]
    fn multiply_words_sl2() {
        let alg = sl2();
        let alpha = PathWord::single(&alg, 0);
        let beta = PathWord::single(&alg, 1);
        let ba = alg.multiply_words(&beta, &alpha).unwrap();
        assert_eq!(ba.source, 1); // vertex `2` has index 1
        assert_eq!(ba.target(&alg), 1);
        assert_eq!(ba.degree(), 2);
        assert!(alg.multiply_words(&alpha, &beta).is_none());
        let e1 = PathWord::trivial(0);
        assert_eq!(alg.multiply_words(&e1, &alpha).unwrap(), alpha);
    }

    #[test]
    fn multiply_associative_and_absorbing() {
        let alg = a3();
        let a = PathWord::single(&alg, 0);
        let b = PathWord::single(&alg, 1);
        // (a*b)*anything is zero, a*(b*e3) zero as well
        assert!(alg.multiply_words(&a, &b).is_none());
        let e3 = PathWord::trivial(2);
        let be3 = alg.multiply_words(&b, &e3).unwrap();
        assert!(alg.multiply_words(&a, &be3).is_none());
    }

    #[test]
    fn count_paths_sl2_frozen() {
        let alg = sl2();
        // vertex `2` has index 1; the only length-2 word from 2 to 2 is beta.alpha
        assert_eq!(alg.count_paths(1, 1, 2), BigUint::from(1u32));
        assert_eq!(alg.count_paths(0, 0, 2), BigUint::from(0u32));
        assert_eq!(alg.count_paths(0, 0, 0), BigUint::from(1u32));
        assert_eq!(alg.count_paths(0, 1, 0), BigUint::from(0u32));
    }

    #[test]
    fn count_paths_matches_enumeration() {
        for alg in [sl2(), a3(), loop_free(), loop_nil()] {
            for n in 0..=8 {
                let words = brute_words(&alg, n);
                for x in 0..alg.quiver().vertex_count() {
                    for y in 0..alg.quiver().vertex_count() {
                        let expect = words
                            .iter()
                            .filter(|w| w.source == x && w.target(&alg) == y)
                            .count();
                        assert_eq!(
                            alg.count_paths(x, y, n),
                            BigUint::from(expect),
                            "algebra mismatch at ({x},{y},{n})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn finite_dimension_sl2_frozen() {
        let (fin, max_len, dim) = sl2().is_finite_dimensional();
        assert!(fin);
        assert_eq!(max_len, Some(2));
        assert_eq!(dim, Some(BigUint::from(5u32)));
    }

    #[test]
    fn finite_dimension_edge_cases() {
        let (fin, _, _) = loop_free().is_finite_dimensional();
        assert!(!fin);
        let (fin, max_len, dim) = loop_nil().is_finite_dimensional();
        assert!(fin);
        assert_eq!(max_len, Some(1));
        assert_eq!(dim, Some(BigUint::from(2u32)));
        let no_arrows = parse_algebra("vertex 1\nvertex 2\nvertex 3\n").unwrap();
        let (fin, max_len, dim) = no_arrows.is_finite_dimensional();
        assert!(fin);
        assert_eq!(max_len, Some(0));
        assert_eq!(dim, Some(BigUint::from(3u32)));
    }

    #[test]
    fn radical_square_zero_cases() {
        assert!(loop_nil().is_radical_square_zero());
        assert!(!sl2().is_radical_square_zero());
        let single = parse_algebra("vertex 1\nvertex 2\narrow a 1 2\n").unwrap();
        assert!(single.is_radical_square_zero());
    }

    #[test]
    fn serialization_roundtrip() {
        for alg in [sl2(), a3(), loop_free(), loop_nil()] {
            let text = serialize_algebra(&alg);
            let back = parse_algebra(&text).unwrap();
            assert_eq!(back, alg);
            assert_eq!(serialize_algebra(&back), text);
        }
    }
}
