//! Exact rational generating functions: integer polynomials, canonical
//! rational series, and transfer-matrix resolvents for path counting.
//!
//! Resolvent entries of `(I - tT)^(-1)` are computed as adjugate over
//! determinant with fraction-free Bareiss elimination over integer
//! polynomials, so no rational-function arithmetic happens until the final
//! division. Series over the non-positive grading side are tagged with a
//! formal inverse variable instead of mixing Laurent exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::MonomialAlgebra;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// integer polynomials
// ---------------------------------------------------------------------------

/// Polynomial in one variable with integer coefficients, ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        IntPoly::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        IntPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Exact division; panics if the division is not exact (Bareiss and gcd
    /// reductions guarantee exactness where this is used).
    pub fn exact_div(&self, other: &IntPoly) -> IntPoly {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let dn = other.coeffs.len();
        assert!(rem.len() >= dn, "exact division underflow");
        let mut q = vec![BigInt::zero(); rem.len() - dn + 1];
        let lead = other.coeffs.last().unwrap().clone();
        for k in (0..q.len()).rev() {
            let c = rem[k + dn - 1].clone();
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(&lead);
            assert!(r.is_zero(), "division is not exact");
            q[k] = qc.clone();
            for (j, b) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &qc * b;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "division is not exact");
        IntPoly::from_coeffs(q)
    }

    /// Gcd of all coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::from_coeffs(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Primitive gcd via a pseudo-remainder sequence; positive leading
    /// coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return positive_lead(b);
        }
        while !b.is_zero() {
            let r = pseudo_rem(&a, &b).primitive_part();
            a = b;
            b = r;
        }
        positive_lead(a)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude().to_string();
            let body = match k {
                0 => mag,
                1 if mag == "1" => var.to_string(),
                1 => format!("{mag}*{var}"),
                _ if mag == "1" => format!("{var}^{k}"),
                _ => format!("{mag}*{var}^{k}"),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else {
                parts.push(format!(
                    "{} {body}",
                    if c.is_negative() { "-" } else { "+" }
                ));
            }
        }
        parts.join(" ")
    }
}

fn positive_lead(p: IntPoly) -> IntPoly {
    match p.coeffs.last() {
        Some(c) if c.is_negative() => p.neg(),
        _ => p,
    }
}

/// Pseudo-remainder of `a` by `b`, keeping integer coefficients.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let da = match a.degree() {
        Some(d) => d,
        None => return IntPoly::zero(),
    };
    let db = b.degree().expect("pseudo_rem by zero");
    if da < db {
        return a.clone();
    }
    let lead = b.coeffs.last().unwrap().clone();
    let mut r = a.clone();
    for k in (db..=da).rev() {
        let rk = r.coeff(k);
        r = IntPoly::from_coeffs(r.coeffs.iter().map(|c| c * &lead).collect());
        if rk.is_zero() {
            continue;
        }
        let shift = k - db;
        let mut sub = vec![BigInt::zero(); shift];
        sub.extend(b.coeffs.iter().map(|c| c * &rk));
        r = r.sub(&IntPoly::from_coeffs(sub));
    }
    r
}

// ---------------------------------------------------------------------------
// rational series
// ---------------------------------------------------------------------------

/// Which formal variable the series lives in. Series of modules graded in
/// non-positive degrees are reported in the inverse variable `u = t^(-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVar {
    T,
    TInverse,
}

impl SeriesVar {
    pub fn symbol(&self) -> &'static str {
        match self {
            SeriesVar::T => "t",
            SeriesVar::TInverse => "u",
        }
    }
}

/// A rational power series in canonical form: numerator and denominator
/// coprime integer polynomials, denominator with constant term one.
#[derive(Debug, Clone)]
pub struct RationalSeries {
    num: IntPoly,
    den: IntPoly,
    var: SeriesVar,
}

impl RationalSeries {
    pub fn new(num: IntPoly, den: IntPoly, var: SeriesVar) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Invalid("series denominator is zero".into()));
        }
        if den.coeff(0).is_zero() {
            return Err(Error::Invalid(
                "series denominator has zero constant term".into(),
            ));
        }
        let mut s = RationalSeries { num, den, var };
        s.canonicalize();
        Ok(s)
    }

    pub fn zero(var: SeriesVar) -> Self {
        RationalSeries {
            num: IntPoly::zero(),
            den: IntPoly::one(),
            var,
        }
    }

    pub fn constant(c: i64, var: SeriesVar) -> Self {
        RationalSeries {
            num: IntPoly::constant(c),
            den: IntPoly::one(),
            var,
        }
    }

    pub fn polynomial(p: IntPoly, var: SeriesVar) -> Self {
        RationalSeries {
            num: p,
            den: IntPoly::one(),
            var,
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn var(&self) -> SeriesVar {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == IntPoly::one()
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = IntPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if let Some(d) = g.degree() {
            if d > 0 || !g.coeff(0).is_one() {
                self.num = self.num.exact_div(&g);
                self.den = self.den.exact_div(&g);
            }
        }
        let c = self.num.content().gcd(&self.den.content());
        if !c.is_zero() && !c.is_one() {
            self.num = IntPoly::from_coeffs(self.num.coeffs.iter().map(|x| x / &c).collect());
            self.den = IntPoly::from_coeffs(self.den.coeffs.iter().map(|x| x / &c).collect());
        }
        if self.den.coeff(0).is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    fn assert_var(&self, other: &RationalSeries) {
        assert_eq!(
            self.var, other.var,
            "series arithmetic across different variables"
        );
    }

    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        self.assert_var(other);
        RationalSeries::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
            self.var,
        )
        .expect("denominators have nonzero constant term")
    }

    pub fn sub(&self, other: &RationalSeries) -> RationalSeries {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> RationalSeries {
        RationalSeries::new(
            self.num.mul(&IntPoly::constant(c)),
            self.den.clone(),
            self.var,
        )
        .expect("scaling preserves the denominator")
    }

    pub fn mul(&self, other: &RationalSeries) -> RationalSeries {
        self.assert_var(other);
        RationalSeries::new(
            self.num.mul(&other.num),
            self.den.mul(&other.den),
            self.var,
        )
        .expect("denominators have nonzero constant term")
    }

    /// Multiply by the `k`-th power of the variable; negative `k` requires
    /// the first `|k|` expansion coefficients to vanish.
    pub fn shift(&self, k: i64) -> Result<RationalSeries> {
        if k >= 0 {
            return RationalSeries::new(
                self.num.mul(&IntPoly::monomial(1, k as usize)),
                self.den.clone(),
                self.var,
            );
        }
        let k = (-k) as usize;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lead = self.expand(k - 1)?;
        if lead.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invalid(format!(
                "cannot divide series by {}^{k}: low-order coefficients are nonzero",
                self.var.symbol()
            )));
        }
        let mut coeffs = self.num.coeffs.clone();
        if coeffs.len() < k {
            return Ok(RationalSeries::zero(self.var));
        }
        coeffs.drain(0..k);
        RationalSeries::new(IntPoly::from_coeffs(coeffs), self.den.clone(), self.var)
    }

    /// First `order + 1` expansion coefficients (degrees `0..=order`).
    pub fn expand(&self, order: usize) -> Result<Vec<BigInt>> {
        let d0 = self.den.coeff(0);
        let mut out: Vec<BigInt> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.num.coeff(n);
            for k in 1..=n {
                acc -= self.den.coeff(k) * &out[n - k];
            }
            let (q, r) = acc.div_rem(&d0);
            if !r.is_zero() {
                return Err(Error::Invalid("series expansion is not integral".into()));
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Canonical equality (cross-multiplied, variable tags must agree).
    pub fn equal(&self, other: &RationalSeries) -> bool {
        self.var == other.var && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.symbol();
        write!(f, "({})/({})", self.num.render(v), self.den.render(v))
    }
}

/// Square array of series indexed by vertex pairs.
#[derive(Debug, Clone)]
pub struct VertexMatrixSeries {
    pub entries: Vec<Vec<RationalSeries>>,
}

impl VertexMatrixSeries {
    pub fn identity(n: usize, var: SeriesVar) -> Self {
        VertexMatrixSeries {
            entries: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| RationalSeries::constant(i64::from(i == j), var))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> RationalSeries {
        let var = self
            .entries
            .first()
            .and_then(|r| r.first())
            .map_or(SeriesVar::T, |s| s.var());
        let mut acc = RationalSeries::zero(var);
        for row in &self.entries {
            for s in row {
                acc = acc.add(s);
            }
        }
        acc
    }

    pub fn mul(&self, other: &VertexMatrixSeries) -> VertexMatrixSeries {
        let n = self.size();
        assert_eq!(n, other.size());
        let var = if n == 0 {
            SeriesVar::T
        } else {
            self.entries[0][0].var()
        };
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = RationalSeries::zero(var);
                        for k in 0..n {
                            acc = acc.add(&self.entries[i][k].mul(&other.entries[k][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        VertexMatrixSeries { entries }
    }

    pub fn transpose(&self) -> VertexMatrixSeries {
        let n = self.size();
        VertexMatrixSeries {
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
                .collect(),
        }
    }

    /// Substitute `-t` for `t` (negate odd coefficients).
    pub fn negate_variable(&self) -> VertexMatrixSeries {
        let flip = |p: &IntPoly| {
            IntPoly::from_coeffs(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                    .collect(),
            )
        };
        VertexMatrixSeries {
            entries: self
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            RationalSeries::new(flip(&s.num), flip(&s.den), s.var())
                                .expect("negating the variable keeps the constant term")
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_identity_to_order(&self, order: usize) -> Result<bool> {
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                let coeffs = self.entries[i][j].expand(order)?;
                for (k, c) in coeffs.iter().enumerate() {
                    let want = if i == j && k == 0 {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                    if *c != want {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

// ---------------------------------------------------------------------------
// determinants and resolvents over integer polynomials
// ---------------------------------------------------------------------------

/// Fraction-free Bareiss determinant of a square polynomial matrix.
pub fn poly_det(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut a: Vec<Vec<IntPoly>> = m.to_vec();
    let mut prev = IntPoly::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return IntPoly::zero();
            };
            a.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = t.exact_div(&prev);
            }
        }
        for i in k + 1..n {
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// The matrix `I - tA` for a 0/1 adjacency matrix.
pub fn characteristic_matrix(adj: &[Vec<bool>]) -> Vec<Vec<IntPoly>> {
    let n = adj.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = if i == j {
                        IntPoly::one()
                    } else {
                        IntPoly::zero()
                    };
                    if adj[i][j] {
                        p = p.sub(&IntPoly::monomial(1, 1));
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Resolvent `(I - tA)^(-1)` as (adjugate matrix, determinant).
pub fn resolvent(adj: &[Vec<bool>]) -> (Vec<Vec<IntPoly>>, IntPoly) {
    let m = characteristic_matrix(adj);
    let n = m.len();
    let det = poly_det(&m);
    let mut adjugate = vec![vec![IntPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            // adjugate[i][j] = (-1)^(i+j) * det(minor with row j, col i removed)
            let minor: Vec<Vec<IntPoly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let d = poly_det(&minor);
            adjugate[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    (adjugate, det)
}

/// Closed-form algebra Hilbert series: entry (x, y) counts nonzero words
/// from x to y by length, as a rational function of `t`.
pub fn hilbert_algebra_closed(alg: &MonomialAlgebra) -> VertexMatrixSeries {
    graph_hilbert(alg, alg.allowed_graph())
}

/// The same transfer-matrix computation for an arbitrary composition graph
/// on the arrows (used with the zero graph for Betti series).
pub fn graph_hilbert(alg: &MonomialAlgebra, graph: &[Vec<bool>]) -> VertexMatrixSeries {
    graph_hilbert_in(alg, graph, SeriesVar::T)
}

/// Variable-tagged variant: counting series can live in `u = t^(-1)` when
/// the graded side is non-positive.
pub fn graph_hilbert_in(
    alg: &MonomialAlgebra,
    graph: &[Vec<bool>],
    var: SeriesVar,
) -> VertexMatrixSeries {
    let nv = alg.quiver().vertex_count();
    let na = alg.quiver().arrow_count();
    let (adj, det) = resolvent(graph);
    let entries = (0..nv)
        .map(|x| {
            (0..nv)
                .map(|y| {
                    let mut num = IntPoly::zero();
                    for a in 0..na {
                        if alg.quiver().arrow(a).source != x {
                            continue;
                        }
                        for b in 0..na {
                            if alg.quiver().arrow(b).target != y {
                                continue;
                            }
                            num = num.add(&adj[a][b]);
                        }
                    }
                    num = num.mul(&IntPoly::monomial(1, 1));
                    if x == y {
                        num = num.add(&det);
                    }
                    RationalSeries::new(num, det.clone(), var)
                        .expect("transfer determinant has constant term 1")
                })
                .collect()
        })
        .collect();
    VertexMatrixSeries { entries }
}

/// Generating function for walks in `graph` starting at arrow `a`: the
/// coefficient of `x^s` counts length-`s` walks (`s = 0` counts the arrow
/// itself); optionally restricted to walks ending at arrows with the given
/// target vertex.
pub fn walk_row_series(
    alg: &MonomialAlgebra,
    graph: &[Vec<bool>],
    a: usize,
    end_target: Option<usize>,
    var: SeriesVar,
) -> RationalSeries {
    let (adj, det) = resolvent(graph);
    let na = alg.quiver().arrow_count();
    let mut num = IntPoly::zero();
    for b in 0..na {
        if let Some(v) = end_target {
            if alg.quiver().arrow(b).target != v {
                continue;
            }
        }
        num = num.add(&adj[a][b]);
    }
    RationalSeries::new(num, det, var).expect("resolvent determinant has constant term 1")
}

/// Walks *ending* at arrow `a`, optionally restricted to walks starting at
/// arrows with the given source vertex.
pub fn walk_column_series(
    alg: &MonomialAlgebra,
    graph: &[Vec<bool>],
    a: usize,
    start_source: Option<usize>,
    var: SeriesVar,
) -> RationalSeries {
    let (adj, det) = resolvent(graph);
    let na = alg.quiver().arrow_count();
    let mut num = IntPoly::zero();
    for b in 0..na {
        if let Some(v) = start_source {
            if alg.quiver().arrow(b).source != v {
                continue;
            }
        }
        num = num.add(&adj[b][a]);
    }
    RationalSeries::new(num, det, var).expect("resolvent determinant has constant term 1")
}

/// Split a dimension table by grading side: degrees `>= 0` as a polynomial
/// in `t`, degrees `< 0` as a polynomial in `u = t^(-1)`.
pub fn table_to_polys(dims: &BTreeMap<(i64, usize), usize>) -> (IntPoly, IntPoly) {
    let mut pos: Vec<BigInt> = Vec::new();
    let mut neg: Vec<BigInt> = Vec::new();
    for (&(d, _), &m) in dims {
        let (vec, idx) = if d >= 0 {
            (&mut pos, d as usize)
        } else {
            (&mut neg, (-d) as usize)
        };
        if vec.len() <= idx {
            vec.resize(idx + 1, BigInt::zero());
        }
        vec[idx] += m;
    }
    (IntPoly::from_coeffs(pos), IntPoly::from_coeffs(neg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn sl2() -> MonomialAlgebra {
        parse_algebra("vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n")
            .unwrap()
    }

    #[test]
    fn poly_arithmetic() {
        let p = IntPoly::from_coeffs(vec![1.into(), 2.into()]); // 1 + 2t
        let q = IntPoly::from_coeffs(vec![(-1).into(), 1.into()]); // -1 + t
        let prod = p.mul(&q);
        assert_eq!(prod.coeff(0), (-1).into());
        assert_eq!(prod.coeff(1), (-1).into());
        assert_eq!(prod.coeff(2), 2.into());
        assert_eq!(prod.exact_div(&q), p);
        assert_eq!(p.gcd(&p.mul(&q)), p);
    }

    #[test]
    fn canonical_form_reduces() {
        // (1 - t^2) / (1 - t) = 1 + t
        let num = IntPoly::from_coeffs(vec![1.into(), 0.into(), (-1).into()]);
        let den = IntPoly::from_coeffs(vec![1.into(), (-1).into()]);
        let s = RationalSeries::new(num, den, SeriesVar::T).unwrap();
        assert!(s.is_polynomial());
        assert_eq!(s.to_string(), "(1 + t)/(1)");
    }

    #[test]
    fn geometric_series_expansion() {
        let s = RationalSeries::new(
            IntPoly::one(),
            IntPoly::from_coeffs(vec![1.into(), (-1).into()]),
            SeriesVar::T,
        )
        .unwrap();
        let coeffs = s.expand(5).unwrap();
        assert!(coeffs.iter().all(|c| c.is_one()));
        let one = s.mul(&RationalSeries::polynomial(
            IntPoly::from_coeffs(vec![1.into(), (-1).into()]),
            SeriesVar::T,
        ));
        assert!(one.equal(&RationalSeries::constant(1, SeriesVar::T)));
        let t2 = RationalSeries::constant(1, SeriesVar::T).shift(2).unwrap();
        assert_eq!(t2.to_string(), "(t^2)/(1)");
    }

    #[test]
    fn determinant_of_identity_minus_loop() {
        let adj = vec![vec![true]];
        let (a, det) = resolvent(&adj);
        assert_eq!(det, IntPoly::from_coeffs(vec![1.into(), (-1).into()]));
        assert_eq!(a[0][0], IntPoly::one());
    }

    #[test]
    fn hilbert_free_loop_is_geometric() {
        let alg = parse_algebra("vertex v\narrow l v v\n").unwrap();
        let h = hilbert_algebra_closed(&alg);
        assert_eq!(h.entries[0][0].to_string(), "(1)/(1 - t)");
    }

    #[test]
    fn hilbert_sl2_total_frozen() {
        let alg = sl2();
        let total = hilbert_algebra_closed(&alg).total();
        // basis e1, e2, alpha, beta, beta.alpha: 2 + 2t + t^2
        assert!(total.is_polynomial());
        assert_eq!(total.num().coeff(0), 2.into());
        assert_eq!(total.num().coeff(1), 2.into());
        assert_eq!(total.num().coeff(2), 1.into());
        assert_eq!(total.num().coeff(3), 0.into());
    }

    #[test]
    fn hilbert_no_arrows_is_identity() {
        let alg = parse_algebra("vertex 1\nvertex 2\n").unwrap();
        let h = hilbert_algebra_closed(&alg);
        assert!(h.is_identity_to_order(10).unwrap());
    }

    #[test]
    fn closed_form_matches_counting() {
        for alg in [
            sl2(),
            parse_algebra("vertex v\narrow l v v\n").unwrap(),
            parse_algebra("vertex v\narrow l v v\nrelation l l\n").unwrap(),
            parse_algebra("vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation a b\n")
                .unwrap(),
        ] {
            let h = hilbert_algebra_closed(&alg);
            let order = 3 * alg.quiver().arrow_count() + 5;
            for x in 0..alg.quiver().vertex_count() {
                for y in 0..alg.quiver().vertex_count() {
                    let coeffs = h.entries[x][y].expand(order).unwrap();
                    for (n, c) in coeffs.iter().enumerate() {
                        let expect = alg.count_paths(x, y, n);
                        assert_eq!(c.magnitude(), &expect, "entry ({x},{y}) coefficient {n}");
                        assert!(!c.is_negative());
                    }
                }
            }
        }
    }

    #[test]
    fn walk_series_for_arrow_ideals() {
        // sl2: L(alpha) = {alpha}: series t; L(beta) = {beta, beta.alpha}
        let alg = sl2();
        let la = walk_row_series(&alg, alg.allowed_graph(), 0, None, SeriesVar::T)
            .shift(1)
            .unwrap();
        assert_eq!(la.to_string(), "(t)/(1)");
        let lb = walk_row_series(&alg, alg.allowed_graph(), 1, None, SeriesVar::T)
            .shift(1)
            .unwrap();
        let coeffs = lb.expand(4).unwrap();
        assert_eq!(coeffs[1], 1.into());
        assert_eq!(coeffs[2], 1.into());
        assert_eq!(coeffs[3], 0.into());
    }

    #[test]
    fn reciprocity_on_sl2_by_hand() {
        // H_dual(-t) * H(t) = identity, verified to order 20
        let alg = sl2();
        let dual = alg.koszul_dual();
        let h = hilbert_algebra_closed(&alg);
        let hd = hilbert_algebra_closed(&dual).negate_variable();
        let prod = hd.mul(&h);
        assert!(prod.is_identity_to_order(20).unwrap());
    }
}
