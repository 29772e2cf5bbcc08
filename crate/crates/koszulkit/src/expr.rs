//! The module expression mini-language shared by the CLI and the tests.
//!
//! Grammar:
//!
//! ```text
//! E ::= S(v) | P(v) | I(v) | L(a) | C(a)
//!     | shift(E, i) | sum(E, E) | truncle(E, r) | truncge(E, r)
//!     | coker(target[, target...]; row[| row...])
//! target ::= v | v@shift
//! row    ::= entry[, entry...]          (empty entry = zero)
//! entry  ::= [scalar *] word
//! word   ::= e(v) | arrow[.arrow...]
//! ```
//!
//! `coker` presents the cokernel of a morphism between sums of shifted
//! projectives: the listed targets are the row summands, and each matrix
//! entry is a rational multiple of a single path word running from the row
//! summand's vertex to the column summand's vertex. Column summands are
//! inferred from the entries, which must agree per column.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::algebra::{MonomialAlgebra, PathWord};
use crate::complex::{expand_path_matrix, expand_summands, PathMatrix, PathSum, Side, Summand};
use crate::error::{Error, Result};
use crate::matrix::parse_scalar;
use crate::module::{
    arrow_coideal, arrow_ideal, injective, projective, simple, truncate, Cutoff, GradedModule,
    TruncationMode,
};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleExpr {
    Simple(String),
    Projective(String),
    Injective(String),
    Ideal(String),
    Coideal(String),
    Shift(Box<ModuleExpr>, i64),
    Sum(Box<ModuleExpr>, Box<ModuleExpr>),
    TruncLe(Box<ModuleExpr>, i64),
    TruncGe(Box<ModuleExpr>, i64),
    Coker {
        targets: Vec<(String, i64)>,
        rows: Vec<Vec<Option<(Scalar, WordExpr)>>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum WordExpr {
    Trivial(String),
    Arrows(Vec<String>),
}

pub fn parse_module_expr(text: &str) -> Result<ModuleExpr> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(Error::Expr(format!(
            "trailing input at byte {}: `{}`",
            p.pos,
            &text[p.pos..]
        )));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Expr(format!(
                "expected `{}` at byte {}",
                c as char, self.pos
            )))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Expr(format!("expected identifier at byte {start}")));
        }
        Ok(String::from_utf8_lossy(&self.text[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.text.get(self.pos) == Some(&b'-') || self.text.get(self.pos) == Some(&b'+') {
            self.pos += 1;
        }
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Expr(format!("expected integer at byte {start}")))
    }

    fn expr(&mut self) -> Result<ModuleExpr> {
        let head = self.ident()?;
        match head.as_str() {
            "S" | "P" | "I" | "L" | "C" => {
                self.eat(b'(')?;
                let id = self.ident()?;
                self.eat(b')')?;
                Ok(match head.as_str() {
                    "S" => ModuleExpr::Simple(id),
                    "P" => ModuleExpr::Projective(id),
                    "I" => ModuleExpr::Injective(id),
                    "L" => ModuleExpr::Ideal(id),
                    _ => ModuleExpr::Coideal(id),
                })
            }
            "shift" => {
                self.eat(b'(')?;
                let inner = self.expr()?;
                self.eat(b',')?;
                let i = self.integer()?;
                self.eat(b')')?;
                Ok(ModuleExpr::Shift(Box::new(inner), i))
            }
            "sum" => {
                self.eat(b'(')?;
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                self.eat(b')')?;
                Ok(ModuleExpr::Sum(Box::new(a), Box::new(b)))
            }
            "truncle" | "truncge" => {
                self.eat(b'(')?;
                let inner = self.expr()?;
                self.eat(b',')?;
                let r = self.integer()?;
                self.eat(b')')?;
                Ok(if head == "truncle" {
                    ModuleExpr::TruncLe(Box::new(inner), r)
                } else {
                    ModuleExpr::TruncGe(Box::new(inner), r)
                })
            }
            "coker" => {
                self.eat(b'(')?;
                let mut targets = Vec::new();
                loop {
                    let v = self.ident()?;
                    let shift = if self.peek() == Some(b'@') {
                        self.eat(b'@')?;
                        self.integer()?
                    } else {
                        0
                    };
                    targets.push((v, shift));
                    match self.peek() {
                        Some(b',') => {
                            self.eat(b',')?;
                        }
                        Some(b';') => break,
                        other => {
                            return Err(Error::Expr(format!(
                                "expected `,` or `;` in coker targets, found {:?}",
                                other.map(|c| c as char)
                            )))
                        }
                    }
                }
                self.eat(b';')?;
                let mut rows = Vec::new();
                loop {
                    let mut row = Vec::new();
                    loop {
                        row.push(self.entry()?);
                        match self.peek() {
                            Some(b',') => {
                                self.eat(b',')?;
                            }
                            _ => break,
                        }
                    }
                    rows.push(row);
                    match self.peek() {
                        Some(b'|') => {
                            self.eat(b'|')?;
                        }
                        Some(b')') => break,
                        other => {
                            return Err(Error::Expr(format!(
                                "expected `|` or `)` in coker rows, found {:?}",
                                other.map(|c| c as char)
                            )))
                        }
                    }
                }
                self.eat(b')')?;
                Ok(ModuleExpr::Coker { targets, rows })
            }
            other => Err(Error::Expr(format!("unknown constructor `{other}`"))),
        }
    }

    /// One matrix entry: empty, or `[scalar *] word`.
    fn entry(&mut self) -> Result<Option<(Scalar, WordExpr)>> {
        self.skip_ws();
        match self.peek() {
            Some(b',') | Some(b'|') | Some(b')') | None => return Ok(None),
            _ => {}
        }
        // optional leading scalar: digits, '-', '/' then '*'
        let save = self.pos;
        let mut scalar = Scalar::one();
        let mut scanned = self.pos;
        while scanned < self.text.len()
            && (self.text[scanned].is_ascii_digit()
                || self.text[scanned] == b'-'
                || self.text[scanned] == b'/')
        {
            scanned += 1;
        }
        if scanned > self.pos && self.text.get(scanned) == Some(&b'*') {
            let s = std::str::from_utf8(&self.text[self.pos..scanned]).unwrap();
            scalar = parse_scalar(s)
                .ok_or_else(|| Error::Expr(format!("bad scalar `{s}` at byte {save}")))?;
            self.pos = scanned + 1;
        }
        // word: e(v) or dotted arrows
        self.skip_ws();
        let first = self.ident()?;
        if first == "e" && self.peek() == Some(b'(') {
            self.eat(b'(')?;
            let v = self.ident()?;
            self.eat(b')')?;
            return Ok(Some((scalar, WordExpr::Trivial(v))));
        }
        let mut arrows = vec![first];
        while self.peek() == Some(b'.') {
            self.eat(b'.')?;
            arrows.push(self.ident()?);
        }
        Ok(Some((scalar, WordExpr::Arrows(arrows))))
    }
}

/// Evaluate an expression to a graded module over the algebra.
pub fn eval(alg: &Arc<MonomialAlgebra>, expr: &ModuleExpr, cutoff: Cutoff) -> Result<GradedModule> {
    match expr {
        ModuleExpr::Simple(v) => Ok(simple(alg, vertex(alg, v)?)),
        ModuleExpr::Projective(v) => Ok(projective(alg, vertex(alg, v)?, cutoff)),
        ModuleExpr::Injective(v) => Ok(injective(alg, vertex(alg, v)?, cutoff)),
        ModuleExpr::Ideal(a) => Ok(arrow_ideal(alg, arrow(alg, a)?, cutoff)),
        ModuleExpr::Coideal(a) => Ok(arrow_coideal(alg, arrow(alg, a)?, cutoff)),
        ModuleExpr::Shift(inner, i) => Ok(eval(alg, inner, cutoff)?.shift(*i)),
        ModuleExpr::Sum(a, b) => Ok(eval(alg, a, cutoff)?.direct_sum(&eval(alg, b, cutoff)?)),
        ModuleExpr::TruncLe(inner, r) => {
            Ok(truncate(&eval(alg, inner, cutoff)?, TruncationMode::Le(*r))?.quot)
        }
        ModuleExpr::TruncGe(inner, r) => {
            Ok(truncate(&eval(alg, inner, cutoff)?, TruncationMode::Ge(*r))?.sub)
        }
        ModuleExpr::Coker { targets, rows } => eval_coker(alg, targets, rows, cutoff),
    }
}

fn vertex(alg: &MonomialAlgebra, name: &str) -> Result<usize> {
    alg.quiver()
        .vertex_index(name)
        .ok_or_else(|| Error::UnknownVertex(name.into()))
}

fn arrow(alg: &MonomialAlgebra, name: &str) -> Result<usize> {
    alg.quiver()
        .arrow_index(name)
        .ok_or_else(|| Error::UnknownArrow(name.into()))
}

/// The presentation data behind a `coker` expression.
pub struct Presentation {
    pub targets: Vec<Summand>,
    pub sources: Vec<Summand>,
    pub matrix: PathMatrix,
}

/// Resolve a `coker` expression into summand data, inferring the source
/// summands column by column.
pub fn coker_presentation(
    alg: &MonomialAlgebra,
    targets: &[(String, i64)],
    rows: &[Vec<Option<(Scalar, WordExpr)>>],
) -> Result<Presentation> {
    let mut target_summands = Vec::new();
    for (v, shift) in targets {
        target_summands.push(Summand {
            vertex: vertex(alg, v)?,
            shift: *shift,
        });
    }
    if rows.len() != target_summands.len() {
        return Err(Error::Expr(format!(
            "coker matrix has {} rows but {} targets",
            rows.len(),
            target_summands.len()
        )));
    }
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut matrix: PathMatrix = BTreeMap::new();
    let mut sources: Vec<Option<Summand>> = vec![None; ncols];
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let Some((scalar, word)) = entry else {
                continue;
            };
            let w = build_word(alg, word)?;
            if w.source != target_summands[i].vertex {
                return Err(Error::Expr(format!(
                    "entry ({i},{j}): word `{}` does not start at the row vertex `{}`",
                    w.display(alg),
                    alg.quiver().vertex_name(target_summands[i].vertex)
                )));
            }
            if !w.is_nonzero(alg) {
                return Err(Error::Expr(format!(
                    "entry ({i},{j}): word `{}` is zero in the algebra",
                    w.display(alg)
                )));
            }
            let inferred = Summand {
                vertex: w.target(alg),
                shift: target_summands[i].shift + w.degree() as i64,
            };
            match &sources[j] {
                None => sources[j] = Some(inferred),
                Some(s) if *s == inferred => {}
                Some(s) => {
                    return Err(Error::Expr(format!(
                        "entry ({i},{j}): column implies source {}<{}> but an earlier entry implied {}<{}>",
                        alg.quiver().vertex_name(inferred.vertex),
                        inferred.shift,
                        alg.quiver().vertex_name(s.vertex),
                        s.shift
                    )))
                }
            }
            matrix.insert((i, j), PathSum::of(w, scalar.clone()));
        }
    }
    // a matrix with no entries at all is the zero morphism from nothing
    let sources: Vec<Summand> = if matrix.is_empty() {
        Vec::new()
    } else {
        sources
            .into_iter()
            .enumerate()
            .map(|(j, s)| {
                s.ok_or_else(|| {
                    Error::Expr(format!(
                        "column {j} is entirely empty; its source summand cannot be inferred"
                    ))
                })
            })
            .collect::<Result<_>>()?
    };
    Ok(Presentation {
        targets: target_summands,
        sources,
        matrix,
    })
}

fn eval_coker(
    alg: &Arc<MonomialAlgebra>,
    targets: &[(String, i64)],
    rows: &[Vec<Option<(Scalar, WordExpr)>>],
    cutoff: Cutoff,
) -> Result<GradedModule> {
    let pres = coker_presentation(alg, targets, rows)?;
    let tgt = expand_summands(alg, Side::Projective, &pres.targets, cutoff);
    let src = expand_summands(alg, Side::Projective, &pres.sources, cutoff);
    let f = expand_path_matrix(alg, Side::Projective, &src, &tgt, &pres.matrix);
    f.validate()?;
    let (mut m, _) = f.cokernel();
    m.set_provenance("coker".to_string());
    Ok(m)
}

fn build_word(alg: &MonomialAlgebra, w: &WordExpr) -> Result<PathWord> {
    match w {
        WordExpr::Trivial(v) => Ok(PathWord::trivial(vertex(alg, v)?)),
        WordExpr::Arrows(names) => {
            let mut arrows = Vec::new();
            for n in names {
                arrows.push(arrow(alg, n)?);
            }
            for pair in arrows.windows(2) {
                if alg.quiver().arrow(pair[0]).target != alg.quiver().arrow(pair[1]).source {
                    return Err(Error::Expr(format!(
                        "arrows `{}` and `{}` do not compose",
                        alg.quiver().arrow(pair[0]).name,
                        alg.quiver().arrow(pair[1]).name
                    )));
                }
            }
            Ok(PathWord {
                source: alg.quiver().arrow(arrows[0]).source,
                arrows,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn sl2() -> Arc<MonomialAlgebra> {
        parse_algebra("vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n")
            .unwrap()
            .arc()
    }

    #[test]
    fn parse_and_eval_standard() {
        let alg = sl2();
        for (text, dim) in [
            ("S(1)", 1usize),
            ("P(1)", 2),
            ("P(2)", 3),
            ("L(alpha)", 1),
            ("L(beta)", 2),
            ("I(1)", 2),
            ("sum(S(1), shift(S(2), 1))", 2),
            ("truncge(P(2), 1)", 2),
            ("truncle(P(2), 1)", 2),
        ] {
            let expr = parse_module_expr(text).unwrap();
            let m = eval(&alg, &expr, Cutoff::default()).unwrap();
            assert_eq!(m.total_dim(), dim, "{text}");
            m.validate().unwrap();
        }
    }

    #[test]
    fn coideal_over_dual() {
        let dual = sl2().koszul_dual().arc();
        let m = eval(
            &dual,
            &parse_module_expr("C(alpha_op)").unwrap(),
            Cutoff::default(),
        )
        .unwrap();
        assert_eq!(m.total_dim(), 2);
        assert_eq!(m.dim(-1, 1), 1);
        assert_eq!(m.dim(-2, 0), 1);
    }

    #[test]
    fn coker_of_simple_presentation() {
        let alg = sl2();
        // P(1) / (alpha) = S(1)
        let m = eval(
            &alg,
            &parse_module_expr("coker(1; alpha)").unwrap(),
            Cutoff::default(),
        )
        .unwrap();
        assert_eq!(m.total_dim(), 1);
        assert_eq!(m.dim(0, 0), 1);
        // P(2) / (beta.alpha) has dims {(2,0), (1,1)}
        let m = eval(
            &alg,
            &parse_module_expr("coker(2; 1*beta.alpha)").unwrap(),
            Cutoff::default(),
        )
        .unwrap();
        assert_eq!(m.total_dim(), 2);
        assert_eq!(m.dim(0, 1), 1);
        assert_eq!(m.dim(1, 0), 1);
    }

    #[test]
    fn coker_infers_sources_and_rejects_conflicts() {
        let alg = sl2();
        // two targets, one source column classified by alpha and e(2)<1>:
        // column words alpha (from row 1) and e(2) (from row 2, shift 1)
        let expr = parse_module_expr("coker(1, 2@1; alpha | e(2))").unwrap();
        let m = eval(&alg, &expr, Cutoff::default()).unwrap();
        m.validate().unwrap();
        // conflicting column inference must error
        let expr = parse_module_expr("coker(1, 2; alpha | beta)").unwrap();
        assert!(eval(&alg, &expr, Cutoff::default()).is_err());
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(parse_module_expr("Q(1)").is_err());
        assert!(parse_module_expr("S(1) junk").is_err());
        assert!(parse_module_expr("shift(S(1)").is_err());
        let alg = sl2();
        // an entirely empty matrix is the zero morphism: coker = target
        let m = eval(
            &alg,
            &parse_module_expr("coker(1; )").unwrap(),
            Cutoff::default(),
        )
        .unwrap();
        assert_eq!(m.total_dim(), 2);
        // zero word in a presentation entry
        let expr = parse_module_expr("coker(1; alpha.beta)").unwrap();
        assert!(eval(&alg, &expr, Cutoff::default()).is_err());
    }
}
