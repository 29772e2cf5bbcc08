//! The linearization functors between the two sides of a dual pair, and
//! their extension to complexes via double-complex totalization.
//!
//! For a module `M` over the dual, the functor `K` produces a linear complex
//! of shifted projectives over the primal algebra: the term at position `n`
//! is a sum of `P(x)<-n>` with multiplicity `dim M_n(x)`, and the component
//! of the differential along an arrow `a: y -> x` prepends `a` tensored with
//! the dual-arrow action on `M`. A composite entry dies either because the
//! projective side hits a relation or because the dual side does, which is
//! why `d . d = 0`; the formal complex check verifies this by word
//! expansion.
//!
//! Exactness of `K` on the word-based standard modules is certified by an
//! explicit pairing of basis tensors: `p (x) q` either moves the leading
//! dual arrow of `q` onto `p`, or the leading arrow of `p` into `q`, exactly
//! one of the two; the handful of unmatched tensors spans the cohomology.
//! The checker validates the dichotomy element by element, so a run
//! certifies exactness within its window without dense linear algebra.
//! Small cases are cross-checked against the matrix route by the
//! certificate code; the pairing is an accelerator, not a substitute.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{MonomialAlgebra, PathWord};
use crate::complex::{
    DoubleComplex, FormalComplex, ModuleComplex, PathMatrix, PathSum, Side, Summand,
};
use crate::error::{Error, Result};
use crate::module::GradedModule;

/// A primal algebra together with its quadratic dual. Arrow `i` of the dual
/// is the reversal of arrow `i` of the primal.
#[derive(Debug, Clone)]
pub struct DualPair {
    pub primal: Arc<MonomialAlgebra>,
    pub dual: Arc<MonomialAlgebra>,
}

impl DualPair {
    pub fn new(primal: Arc<MonomialAlgebra>) -> Self {
        let dual = primal.koszul_dual().arc();
        DualPair { primal, dual }
    }

    pub fn expects_dual(&self, m: &GradedModule) -> Result<()> {
        if **m.algebra() != *self.dual {
            return Err(Error::Invalid(format!(
                "module `{}` does not live over the dual algebra",
                m.provenance()
            )));
        }
        Ok(())
    }

    pub fn expects_primal(&self, m: &GradedModule) -> Result<()> {
        if **m.algebra() != *self.primal {
            return Err(Error::Invalid(format!(
                "module `{}` does not live over the primal algebra",
                m.provenance()
            )));
        }
        Ok(())
    }
}

/// Offsets of the per-vertex blocks inside one term of `K(M)` or `G(N)`.
fn block_layout(
    alg: &MonomialAlgebra,
    m: &GradedModule,
    n: i64,
) -> (Vec<Summand>, BTreeMap<usize, usize>) {
    let mut summands = Vec::new();
    let mut offsets = BTreeMap::new();
    for v in 0..alg.quiver().vertex_count() {
        let mult = m.dim(n, v);
        if mult == 0 {
            continue;
        }
        offsets.insert(v, summands.len());
        for _ in 0..mult {
            summands.push(Summand {
                vertex: v,
                shift: -n,
            });
        }
    }
    (summands, offsets)
}

/// The linear complex of shifted projectives attached to a right-bounded
/// module over the dual. Returns the complex and the range of cohomological
/// positions whose cohomology the input window certifies.
pub fn koszul_k(pair: &DualPair, m: &GradedModule) -> Result<(FormalComplex, (i64, i64))> {
    pair.expects_dual(m)?;
    if !m.completeness().exact_above {
        return Err(Error::Window(format!(
            "module `{}` is not right-bounded within its certified window",
            m.provenance()
        )));
    }
    let mut terms: BTreeMap<i64, Vec<Summand>> = BTreeMap::new();
    let mut offsets: BTreeMap<i64, BTreeMap<usize, usize>> = BTreeMap::new();
    let (lo, hi) = m.window();
    for n in lo..=hi {
        let (summands, offs) = block_layout(&pair.primal, m, n);
        if !summands.is_empty() {
            terms.insert(n, summands);
            offsets.insert(n, offs);
        }
    }
    let mut diffs: BTreeMap<i64, PathMatrix> = BTreeMap::new();
    for (&n, offs) in &offsets {
        let Some(next_offs) = offsets.get(&(n + 1)) else {
            continue;
        };
        let mut pm: PathMatrix = BTreeMap::new();
        for a in 0..pair.primal.quiver().arrow_count() {
            // dual arrow a: x -> y, primal arrow a: y -> x
            let x = pair.dual.quiver().arrow(a).source;
            let y = pair.dual.quiver().arrow(a).target;
            let act = m.action(a, n);
            if act.is_zero() {
                continue;
            }
            let (Some(&src_off), Some(&tgt_off)) = (offs.get(&x), next_offs.get(&y)) else {
                continue;
            };
            let arrow_path = PathWord::single(&pair.primal, a);
            for i in 0..act.rows() {
                for j in 0..act.cols() {
                    let c = &act[(i, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let key = (tgt_off + i, src_off + j);
                    let entry = pm.entry(key).or_insert_with(PathSum::zero);
                    *entry = entry.add(&PathSum::of(arrow_path.clone(), c.clone()));
                }
            }
        }
        if !pm.is_empty() {
            diffs.insert(n, pm);
        }
    }
    let complex = FormalComplex {
        algebra: Arc::clone(&pair.primal),
        side: Side::Projective,
        terms,
        diffs,
    };
    let cert_lo = if m.completeness().exact_below {
        i64::MIN / 4
    } else {
        lo + 1
    };
    Ok((complex, (cert_lo, i64::MAX / 4)))
}

/// The colinear complex of shifted injectives over the dual attached to a
/// left-bounded module over the primal algebra.
pub fn cokoszul_g(pair: &DualPair, n_mod: &GradedModule) -> Result<(FormalComplex, (i64, i64))> {
    pair.expects_primal(n_mod)?;
    if !n_mod.completeness().exact_below {
        return Err(Error::Window(format!(
            "module `{}` is not left-bounded within its certified window",
            n_mod.provenance()
        )));
    }
    let mut terms: BTreeMap<i64, Vec<Summand>> = BTreeMap::new();
    let mut offsets: BTreeMap<i64, BTreeMap<usize, usize>> = BTreeMap::new();
    let (lo, hi) = n_mod.window();
    for n in lo..=hi {
        let (summands, offs) = block_layout(&pair.primal, n_mod, n);
        if !summands.is_empty() {
            let summands = summands
                .into_iter()
                .map(|s| Summand {
                    vertex: s.vertex,
                    shift: s.shift,
                })
                .collect();
            terms.insert(n, summands);
            offsets.insert(n, offs);
        }
    }
    let mut diffs: BTreeMap<i64, PathMatrix> = BTreeMap::new();
    for (&n, offs) in &offsets {
        let Some(next_offs) = offsets.get(&(n + 1)) else {
            continue;
        };
        let mut pm: PathMatrix = BTreeMap::new();
        for a in 0..pair.primal.quiver().arrow_count() {
            // primal arrow a: x -> y; the classifying dual arrow runs y -> x
            let x = pair.primal.quiver().arrow(a).source;
            let y = pair.primal.quiver().arrow(a).target;
            let act = n_mod.action(a, n);
            if act.is_zero() {
                continue;
            }
            let (Some(&src_off), Some(&tgt_off)) = (offs.get(&x), next_offs.get(&y)) else {
                continue;
            };
            let dual_arrow = PathWord::single(&pair.dual, a);
            for i in 0..act.rows() {
                for j in 0..act.cols() {
                    let c = &act[(i, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let key = (tgt_off + i, src_off + j);
                    let entry = pm.entry(key).or_insert_with(PathSum::zero);
                    *entry = entry.add(&PathSum::of(dual_arrow.clone(), c.clone()));
                }
            }
        }
        if !pm.is_empty() {
            diffs.insert(n, pm);
        }
    }
    let complex = FormalComplex {
        algebra: Arc::clone(&pair.dual),
        side: Side::Injective,
        terms,
        diffs,
    };
    let cert_hi = if n_mod.completeness().exact_above {
        i64::MAX / 4
    } else {
        hi - 1
    };
    Ok((complex, (i64::MIN / 4, cert_hi)))
}

/// Result of applying the duality functor to a complex: the double complex,
/// its totalization, and the cohomological position from which onward the
/// cohomology is certified (terms truncated below cut certification off).
#[derive(Debug, Clone)]
pub struct TotalizedResult {
    pub double: DoubleComplex,
    pub total: FormalComplex,
    pub certified_from: i64,
}

/// Apply `K` termwise to a bounded complex over the dual, assemble the
/// double complex (`d1` induced by the complex differential on trivial
/// paths, `d2` the `K`-differential), and totalize with the Koszul sign
/// `(-1)^p` on the vertical differential.
pub fn f_on_complex(pair: &DualPair, x: &ModuleComplex) -> Result<TotalizedResult> {
    let mut terms: BTreeMap<(i64, i64), Vec<Summand>> = BTreeMap::new();
    let mut d1: BTreeMap<(i64, i64), PathMatrix> = BTreeMap::new();
    let mut d2: BTreeMap<(i64, i64), PathMatrix> = BTreeMap::new();
    let mut certified_from = i64::MIN / 4;
    let mut offsets_all: BTreeMap<i64, BTreeMap<i64, BTreeMap<usize, usize>>> = BTreeMap::new();
    for (&p, term) in &x.terms {
        pair.expects_dual(term)?;
        if !term.completeness().exact_above {
            return Err(Error::Window(format!(
                "complex term at position {p} is not right-bounded"
            )));
        }
        if !term.completeness().exact_below {
            certified_from = certified_from.max(term.window().0 + p + 2);
        }
        let (k, _) = koszul_k(pair, term)?;
        let mut offs_for_p = BTreeMap::new();
        for (&q, summands) in &k.terms {
            terms.insert((q, p), summands.clone());
            let (_, offs) = block_layout(&pair.primal, term, q);
            offs_for_p.insert(q, offs);
        }
        for (&q, pm) in &k.diffs {
            d2.insert((q, p), pm.clone());
        }
        offsets_all.insert(p, offs_for_p);
    }
    for (&p, f) in &x.diffs {
        let (Some(src_offs), Some(tgt_offs)) = (offsets_all.get(&p), offsets_all.get(&(p + 1)))
        else {
            continue;
        };
        for (&(deg, v), block) in f.blocks() {
            if block.is_zero() {
                continue;
            }
            let (Some(&so), Some(&to)) = (
                src_offs.get(&deg).and_then(|m| m.get(&v)),
                tgt_offs.get(&deg).and_then(|m| m.get(&v)),
            ) else {
                continue;
            };
            let trivial = PathSum::single(PathWord::trivial(v));
            let pm = d1.entry((deg, p)).or_default();
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    let c = &block[(i, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let entry = pm.entry((to + i, so + j)).or_insert_with(PathSum::zero);
                    *entry = entry.add(&trivial.scale(c));
                }
            }
        }
    }
    d1.retain(|_, pm| !pm.is_empty());
    let double = DoubleComplex {
        algebra: Arc::clone(&pair.primal),
        side: Side::Projective,
        terms,
        d1,
        d2,
    };
    double.check()?;
    let total = double.total();
    Ok(TotalizedResult {
        double,
        total,
        certified_from,
    })
}

// ---------------------------------------------------------------------------
// pairing-based exactness certification
// ---------------------------------------------------------------------------

/// Word-based module over the dual that `K` is certified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualWordModule {
    /// All words into the vertex: the indecomposable injective.
    Injective(usize),
    /// Words whose last arrow is the given (dual) arrow: the coideal.
    Coideal(usize),
}

/// Word-based module over the primal algebra that `G` is certified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalWordModule {
    /// All words from the vertex: the indecomposable projective.
    Projective(usize),
    /// Words whose first arrow is the given arrow: the arrow ideal.
    Ideal(usize),
}

/// Outcome of a pairing run. Every basis tensor within the window either
/// moved one way, moved the other, or is recorded as unmatched;
/// `positions_certified` and `internal_certified` bound where the unmatched
/// counts are exactly the cohomology dimensions.
#[derive(Debug, Clone)]
pub struct PairingReport {
    pub total_basis: usize,
    /// (position, internal degree, vertex) -> unmatched element count.
    pub unmatched: BTreeMap<(i64, i64, usize), usize>,
    pub positions_certified: (i64, i64),
    pub internal_certified: (i64, i64),
}

impl PairingReport {
    /// Cohomology dimensions at one position, from the pairing.
    pub fn cohomology_dims(&self, position: i64) -> BTreeMap<(i64, usize), usize> {
        self.unmatched
            .iter()
            .filter(|(&(p, _, _), _)| p == position)
            .map(|(&(_, d, v), &c)| ((d, v), c))
            .collect()
    }
}

/// Certify exactness of `K` on a word-based dual module by the pairing
/// argument. `max_dual_len` bounds the window (cohomological positions
/// `-max_dual_len ..= 0`); `budget` caps the number of basis tensors
/// enumerated, shrinking the window when exceeded.
pub fn k_pairing(
    pair: &DualPair,
    module: DualWordModule,
    max_dual_len: usize,
    budget: usize,
) -> Result<PairingReport> {
    let primal = &pair.primal;
    let dual = &pair.dual;
    let (fin, max_primal, _) = primal.is_finite_dimensional();
    if !fin {
        return Err(Error::Window(
            "pairing certification requires a finite-dimensional primal algebra".into(),
        ));
    }
    let max_primal = max_primal.unwrap();
    let primal_words: Vec<Vec<PathWord>> = (0..primal.quiver().vertex_count())
        .map(|v| {
            (0..=max_primal)
                .flat_map(|n| primal.words_from(v, n))
                .collect()
        })
        .collect();
    let (target_vertex, last_arrow) = match module {
        DualWordModule::Injective(x) => (x, None),
        DualWordModule::Coideal(a) => (dual.quiver().arrow(a).target, Some(a)),
    };
    let min_len = usize::from(last_arrow.is_some());
    let mut dual_words: Vec<Vec<PathWord>> = Vec::new();
    let mut total_basis = 0usize;
    let mut window = min_len;
    for n in min_len..=max_dual_len {
        let words: Vec<PathWord> = dual
            .words_into(target_vertex, n)
            .into_iter()
            .filter(|w| match last_arrow {
                Some(a) => w.arrows.last() == Some(&a),
                None => true,
            })
            .collect();
        let extra: usize = words.iter().map(|q| primal_words[q.source].len()).sum();
        if total_basis + extra > budget && n > min_len {
            break;
        }
        total_basis += extra;
        window = n;
        dual_words.push(words);
        if total_basis > budget {
            break;
        }
    }
    let mut unmatched: BTreeMap<(i64, i64, usize), usize> = BTreeMap::new();
    for (offset, words) in dual_words.iter().enumerate() {
        let n = min_len + offset;
        let position = -(n as i64);
        for q in words {
            for p in &primal_words[q.source] {
                let out_move = out_move_valid(pair, module, p, q);
                let in_move = in_move_valid(pair, p, q);
                match (out_move, in_move) {
                    (true, true) => {
                        return Err(Error::PropertyFalsified {
                            property: "pairing dichotomy".into(),
                            witness: format!(
                                "tensor {} (x) {} admits both moves",
                                p.display(primal),
                                q.display(dual)
                            ),
                        });
                    }
                    (true, false) => {
                        // the move must be reversible where it lands
                        let (p2, q2) = apply_out_move(pair, p, q);
                        if !in_move_valid(pair, &p2, &q2) {
                            return Err(Error::PropertyFalsified {
                                property: "pairing involution".into(),
                                witness: format!(
                                    "move of {} (x) {} is not reversible",
                                    p.display(primal),
                                    q.display(dual)
                                ),
                            });
                        }
                    }
                    (false, true) => {}
                    (false, false) => {
                        // tensor p (x) q in P<n> has internal degree len(p) + n
                        let slot = (position, p.degree() as i64 + n as i64, p.target(primal));
                        *unmatched.entry(slot).or_default() += 1;
                    }
                }
            }
        }
    }
    let positions_certified = (-(window as i64) + 1, 0);
    Ok(PairingReport {
        total_basis,
        unmatched,
        positions_certified,
        internal_certified: (i64::MIN / 4, i64::MAX / 4),
    })
}

/// The dual pairing: certify exactness of `G` on a word-based primal
/// module. Basis tensors are `omega (x) p` with `p` a primal word from the
/// base and `omega` a dual word into `p`'s endpoint; the moves exchange the
/// *last* arrows. Since the dual side can be infinite, the certification is
/// by internal degree: tensors with `len(omega) + len(p) <= window` are
/// fully paired, so cohomology is certified in internal degrees down to
/// `-window`.
pub fn g_pairing(
    pair: &DualPair,
    module: PrimalWordModule,
    max_total: usize,
    budget: usize,
) -> Result<PairingReport> {
    let primal = &pair.primal;
    let dual = &pair.dual;
    let (fin, max_primal, _) = primal.is_finite_dimensional();
    if !fin {
        return Err(Error::Window(
            "pairing certification requires a finite-dimensional primal algebra".into(),
        ));
    }
    let max_primal = max_primal.unwrap();
    let (base_vertex, first_arrow) = match module {
        PrimalWordModule::Projective(x) => (x, None),
        PrimalWordModule::Ideal(a) => (primal.quiver().arrow(a).source, Some(a)),
    };
    let min_p = usize::from(first_arrow.is_some());
    let primal_words: Vec<PathWord> = (min_p..=max_primal)
        .flat_map(|n| primal.words_from(base_vertex, n))
        .filter(|w| match first_arrow {
            Some(a) => w.arrows.first() == Some(&a),
            None => true,
        })
        .collect();
    // enumerate by total length, tracking the fully covered window
    let mut total_basis = 0usize;
    let mut unmatched: BTreeMap<(i64, i64, usize), usize> = BTreeMap::new();
    let mut window = 0usize;
    'outer: for total in 0..=max_total {
        let mut stratum = 0usize;
        let mut entries: Vec<(PathWord, PathWord)> = Vec::new();
        for p in &primal_words {
            let lp = p.degree();
            if lp > total {
                continue;
            }
            let lw = total - lp;
            for omega in dual.words_into(p.target(primal), lw) {
                entries.push((omega, p.clone()));
                stratum += 1;
            }
        }
        if total_basis + stratum > budget && total > 0 {
            break 'outer;
        }
        total_basis += stratum;
        window = total;
        for (omega, p) in entries {
            let out_move = g_out_move_valid(pair, &omega, &p);
            let in_move = g_in_move_valid(pair, module, &omega, &p);
            match (out_move, in_move) {
                (true, true) => {
                    return Err(Error::PropertyFalsified {
                        property: "pairing dichotomy".into(),
                        witness: format!(
                            "tensor {} (x) {} admits both moves",
                            omega.display(dual),
                            p.display(primal)
                        ),
                    });
                }
                (true, false) => {
                    let (omega2, p2) = g_apply_out_move(pair, &omega, &p);
                    if !g_in_move_valid(pair, module, &omega2, &p2) {
                        return Err(Error::PropertyFalsified {
                            property: "pairing involution".into(),
                            witness: format!(
                                "move of {} (x) {} is not reversible",
                                omega.display(dual),
                                p.display(primal)
                            ),
                        });
                    }
                }
                (false, true) => {}
                (false, false) => {
                    // position = len(p); internal degree = -(len(omega) + len(p))
                    let slot = (
                        p.degree() as i64,
                        -((omega.degree() + p.degree()) as i64),
                        omega.source,
                    );
                    *unmatched.entry(slot).or_default() += 1;
                }
            }
        }
    }
    Ok(PairingReport {
        total_basis,
        unmatched,
        positions_certified: (0, i64::MAX / 4),
        internal_certified: (-(window as i64), 0),
    })
}

/// Can the last dual arrow of `omega` move onto the end of `p`?
fn g_out_move_valid(pair: &DualPair, omega: &PathWord, p: &PathWord) -> bool {
    let Some(&gamma) = omega.arrows.last() else {
        return false;
    };
    match p.arrows.last() {
        None => true,
        Some(&last) => pair.primal.is_allowed(last, gamma),
    }
}

/// Can the last arrow of `p` move onto the end of `omega`?
fn g_in_move_valid(
    pair: &DualPair,
    module: PrimalWordModule,
    omega: &PathWord,
    p: &PathWord,
) -> bool {
    let Some(&last) = p.arrows.last() else {
        return false;
    };
    if let PrimalWordModule::Ideal(_) = module {
        // removing the last remaining arrow leaves the ideal
        if p.arrows.len() == 1 {
            return false;
        }
    }
    match omega.arrows.last() {
        None => true,
        Some(&gamma) => pair.dual.is_allowed(gamma, last),
    }
}

fn g_apply_out_move(pair: &DualPair, omega: &PathWord, p: &PathWord) -> (PathWord, PathWord) {
    let gamma = *omega.arrows.last().unwrap();
    let omega2 = PathWord {
        source: omega.source,
        arrows: omega.arrows[..omega.arrows.len() - 1].to_vec(),
    };
    let mut arrows = p.arrows.clone();
    arrows.push(gamma);
    let p2 = PathWord {
        source: p.source,
        arrows,
    };
    let _ = pair;
    (omega2, p2)
}

/// Can the leading dual arrow of `q` move onto `p`? (Exactly when the
/// `K`-differential does not kill the tensor.)
fn out_move_valid(pair: &DualPair, module: DualWordModule, p: &PathWord, q: &PathWord) -> bool {
    let Some(&gamma) = q.arrows.first() else {
        return false;
    };
    if let DualWordModule::Coideal(_) = module {
        // deleting the last remaining arrow leaves the coideal
        if q.arrows.len() == 1 {
            return false;
        }
    }
    match p.arrows.first() {
        None => true,
        Some(&first) => pair.primal.is_allowed(gamma, first),
    }
}

/// Can the leading arrow of `p` move into `q` (the unique preimage under
/// the `K`-differential)?
fn in_move_valid(pair: &DualPair, p: &PathWord, q: &PathWord) -> bool {
    let Some(&first) = p.arrows.first() else {
        return false;
    };
    match q.arrows.first() {
        None => true,
        Some(&gamma) => pair.dual.is_allowed(first, gamma),
    }
}

fn apply_out_move(pair: &DualPair, p: &PathWord, q: &PathWord) -> (PathWord, PathWord) {
    let gamma = q.arrows[0];
    let p2 = PathWord {
        source: pair.primal.quiver().arrow(gamma).source,
        arrows: {
            let mut v = vec![gamma];
            v.extend_from_slice(&p.arrows);
            v
        },
    };
    let q2 = PathWord {
        source: pair.dual.quiver().arrow(gamma).target,
        arrows: q.arrows[1..].to_vec(),
    };
    (p2, q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::module::{arrow_coideal, injective, simple, Cutoff};

    fn pair() -> DualPair {
        let alg = parse_algebra(
            "vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n",
        )
        .unwrap()
        .arc();
        DualPair::new(alg)
    }

    #[test]
    fn k_of_dual_injective_is_frozen_resolution() {
        let pair = pair();
        let i1 = injective(&pair.dual, 0, Cutoff::default());
        let (k, _) = koszul_k(&pair, &i1).unwrap();
        k.check().unwrap();
        k.check_linear().unwrap();
        k.check_minimal().unwrap();
        assert_eq!(k.summands(-2), &[Summand { vertex: 0, shift: 2 }]);
        assert_eq!(k.summands(-1), &[Summand { vertex: 1, shift: 1 }]);
        assert_eq!(k.summands(0), &[Summand { vertex: 0, shift: 0 }]);
        let mc = k.expand(Cutoff::default());
        mc.check().unwrap();
        let h0 = mc.cohomology(0);
        assert_eq!(h0.total_dim(), 1);
        assert_eq!(h0.dim(0, 0), 1);
        assert!(mc.cohomology(-1).is_zero_module());
        assert!(mc.cohomology(-2).is_zero_module());
    }

    #[test]
    fn k_of_dual_simple_is_concentrated() {
        let pair = pair();
        let s = simple(&pair.dual, 1);
        let (k, _) = koszul_k(&pair, &s).unwrap();
        assert_eq!(k.terms.len(), 1);
        assert_eq!(k.summands(0), &[Summand { vertex: 1, shift: 0 }]);
        assert!(k.diffs.is_empty());
    }

    #[test]
    fn k_of_coideal_has_arrow_ideal_cohomology() {
        let pair = pair();
        let c = arrow_coideal(&pair.dual, 0, Cutoff::default());
        let (k, _) = koszul_k(&pair, &c).unwrap();
        k.check().unwrap();
        assert_eq!(k.summands(-2), &[Summand { vertex: 0, shift: 2 }]);
        assert_eq!(k.summands(-1), &[Summand { vertex: 1, shift: 1 }]);
        let mc = k.expand(Cutoff::default());
        let h = mc.cohomology(-1);
        // L(alpha): one dimension at (vertex 2, degree 1)
        assert_eq!(h.total_dim(), 1);
        assert_eq!(h.dim(1, 1), 1);
        assert!(mc.cohomology(-2).is_zero_module());
    }

    #[test]
    fn g_of_projective_is_frozen_coresolution() {
        let pair = pair();
        let p1 = crate::module::projective(&pair.primal, 0, Cutoff::default());
        let (g, _) = cokoszul_g(&pair, &p1).unwrap();
        g.check().unwrap();
        assert_eq!(g.summands(0), &[Summand { vertex: 0, shift: 0 }]);
        assert_eq!(g.summands(1), &[Summand { vertex: 1, shift: -1 }]);
        let mc = g.expand(Cutoff::default());
        mc.check().unwrap();
        let h0 = mc.cohomology(0);
        assert_eq!(h0.total_dim(), 1);
        assert_eq!(h0.dim(0, 0), 1);
        assert!(mc.cohomology(1).is_zero_module());
    }

    #[test]
    fn g_of_arrow_ideal_matches_coideal() {
        let pair = pair();
        let la = crate::module::arrow_ideal(&pair.primal, 0, Cutoff::default());
        let (g, _) = cokoszul_g(&pair, &la).unwrap();
        g.check().unwrap();
        assert_eq!(g.summands(1), &[Summand { vertex: 1, shift: -1 }]);
        let mc = g.expand(Cutoff::default());
        let h = mc.cohomology(1);
        let c = arrow_coideal(&pair.dual, 0, Cutoff::default());
        assert_eq!(h.dims_table(), c.dims_table());
    }

    #[test]
    fn pairing_certifies_injective_exactness() {
        let pair = pair();
        let report = k_pairing(&pair, DualWordModule::Injective(0), 12, 100_000).unwrap();
        // single unmatched element: the generator at position 0
        assert_eq!(report.unmatched.len(), 1);
        assert_eq!(report.unmatched.get(&(0, 0, 0)), Some(&1));
        assert!(report.total_basis >= 5);
    }

    #[test]
    fn pairing_certifies_coideal_cohomology() {
        let pair = pair();
        let report = k_pairing(&pair, DualWordModule::Coideal(0), 12, 100_000).unwrap();
        // unmatched spans L(alpha) at position -1: degree 1, vertex 2
        assert_eq!(report.cohomology_dims(-1).get(&(1, 1)), Some(&1));
        let total: usize = report.unmatched.values().sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn f_on_concentrated_complex_is_k() {
        let pair = pair();
        let i1 = injective(&pair.dual, 0, Cutoff::default());
        let x = ModuleComplex::concentrated(i1.clone(), 0);
        let res = f_on_complex(&pair, &x).unwrap();
        let (k, _) = koszul_k(&pair, &i1).unwrap();
        assert_eq!(res.total.terms, k.terms);
        res.total.check().unwrap();
        let mc = res.total.expand(Cutoff::default());
        let h0 = mc.cohomology(0);
        assert_eq!(h0.dim(0, 0), 1);
        assert_eq!(h0.total_dim(), 1);
    }

    #[test]
    fn f_on_truncation_inclusion_two_term() {
        // honest two-term complex: the degree-zero part of the dual
        // injective included into it, at positions (-1, 0). The quotient is
        // the coideal, so the totalization is quasi-isomorphic to K of the
        // coideal: cohomology L(alpha) at position -1 and nothing else.
        let pair = pair();
        let i1 = injective(&pair.dual, 0, Cutoff::default());
        let t = crate::module::truncate(&i1, crate::module::TruncationMode::Le(-1)).unwrap();
        let incl = t.inclusion;
        assert_eq!(incl.source.total_dim(), 1);
        let x = ModuleComplex::two_term(incl, -1);
        let res = f_on_complex(&pair, &x).unwrap();
        res.total.check().unwrap();
        let mc = res.total.expand(Cutoff::default());
        let h = mc.cohomology(-1);
        assert_eq!(h.total_dim(), 1);
        assert_eq!(h.dim(1, 1), 1);
        assert!(mc.cohomology(0).is_zero_module());
        assert!(mc.cohomology(-2).is_zero_module());
    }
}
