//! Minimal resolution engines, Betti tables, syzygy decomposition, linear
//! parts, linearity defect, the Koszulness certificates, the colinear
//! truncation finder and the duality roundtrip check.
//!
//! The projective engine is plain degree-wise linear algebra: compute the
//! top, cover it by shifted projectives, take the kernel, repeat. Covers are
//! canonical (generator lifts are coordinate vectors at the non-pivot rows
//! of the radical), so all outputs are byte-deterministic. The word-level
//! differentials are recovered from generator images and re-expanded as a
//! consistency check.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{MonomialAlgebra, PathWord};
use crate::complex::{
    expand_path_matrix, expand_summands, Expansion, FormalComplex, PathMatrix,
    PathSum, Side, Summand,
};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::module::{
    arrow_ideal, quotient_by_image, stack_vertical, Completeness, Cutoff, GradedModule,
    GradedMorphism,
};
use crate::functors::{cokoszul_g, koszul_k, DualPair, DualWordModule};
use crate::Scalar;

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

/// Apply a path word to a column vector sitting at `(degree, word.source)`;
/// returns the resulting vector at `(degree + len, word.target)`.
pub fn apply_word(
    m: &GradedModule,
    degree: i64,
    vec: &QMat,
    word: &PathWord,
) -> QMat {
    let mut cur = vec.clone();
    let mut d = degree;
    for &a in &word.arrows {
        cur = m.action(a, d).mul(&cur);
        d += 1;
        if cur.is_zero() {
            let arr = m.algebra().quiver().arrow(a);
            let rows = m.dim(d, arr.target);
            return QMat::zeros(rows, vec.cols());
        }
    }
    cur
}

fn basis_vector(dim: usize, idx: usize) -> QMat {
    let mut v = QMat::zeros(dim, 1);
    v[(idx, 0)] = Scalar::one();
    v
}

/// Expansion restricted to degrees `<= hi` (projective side working window).
fn restrict_expansion_above(exp: Expansion, hi: i64) -> Expansion {
    let module = exp.module.restricted_to(i64::MIN / 4, hi);
    let basis = exp
        .basis
        .into_iter()
        .filter(|&((d, _), _)| d <= hi)
        .collect();
    Expansion { module, basis }
}

/// Expansion restricted to degrees `>= lo` (injective side working window).
fn restrict_expansion_below(exp: Expansion, lo: i64) -> Expansion {
    let module = exp.module.restricted_to(lo, i64::MAX / 4);
    let basis = exp
        .basis
        .into_iter()
        .filter(|&((d, _), _)| d >= lo)
        .collect();
    Expansion { module, basis }
}

// ---------------------------------------------------------------------------
// Betti tables and resolutions
// ---------------------------------------------------------------------------

/// Multiplicities of a minimal resolution: (step, internal degree, vertex).
#[derive(Debug, Clone, Default)]
pub struct BettiTable {
    pub entries: BTreeMap<(usize, i64, usize), usize>,
    /// Steps fully computed.
    pub certified_steps: usize,
    /// Internal degrees up to which the entries are certified.
    pub certified_degree: i64,
    /// True when the resolution terminated within the certified window.
    pub complete: bool,
}

impl BettiTable {
    pub fn total_at_step(&self, s: usize) -> usize {
        self.entries
            .iter()
            .filter(|(&(step, _, _), _)| step == s)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn tsv(&self, alg: &MonomialAlgebra) -> String {
        let mut out = String::from("step\tvertex\tdegree\tmultiplicity\n");
        for (&(s, d, v), &m) in &self.entries {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                s,
                alg.quiver().vertex_name(v),
                d,
                m
            ));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionStep {
    pub summands: Vec<Summand>,
    pub expansion: Expansion,
    /// Cover map from the expansion onto the previous syzygy (or the module).
    pub cover: GradedMorphism,
    /// The next syzygy, as a submodule of the expansion.
    pub syzygy: GradedModule,
    pub syzygy_inclusion: GradedMorphism,
    /// Word-level differential to the previous step (for steps >= 1).
    pub word_diff: Option<PathMatrix>,
}

/// A minimal graded projective resolution computed step by step.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub module: GradedModule,
    pub steps: Vec<ResolutionStep>,
    pub betti: BettiTable,
}

impl Resolution {
    /// The resolution as a formal complex: step `s` at position `-s`.
    pub fn formal_complex(&self) -> FormalComplex {
        let alg = Arc::clone(self.module.algebra());
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (s, step) in self.steps.iter().enumerate() {
            if step.summands.is_empty() {
                continue;
            }
            terms.insert(-(s as i64), step.summands.clone());
            if let Some(pm) = &step.word_diff {
                // differential from position -s to position -s + 1
                diffs.insert(-(s as i64), pm.clone());
            }
        }
        FormalComplex {
            algebra: alg,
            side: Side::Projective,
            terms,
            diffs,
        }
    }

    /// The syzygy after `step` covers (step >= 1).
    pub fn syzygy(&self, step: usize) -> Option<&GradedModule> {
        self.steps.get(step - 1).map(|s| &s.syzygy)
    }
}

/// Iteratively cover tops by shifted projectives and take kernels. `steps`
/// bounds the number of covers; `cutoff` the internal degree carried along.
/// The module must be left-bounded with exact data on its window.
pub fn minimal_projective_resolution(
    m: &GradedModule,
    steps: usize,
    cutoff: Cutoff,
) -> Result<Resolution> {
    let alg = Arc::clone(m.algebra());
    if !m.completeness().exact_below {
        return Err(Error::Window(format!(
            "module `{}` is not certified below; cannot resolve",
            m.provenance()
        )));
    }
    let hi = cutoff.0.max(m.window().1);
    let mut current = m.clone();
    let mut out_steps: Vec<ResolutionStep> = Vec::new();
    let mut betti = BettiTable {
        certified_degree: if m.completeness().exact_above && alg.is_finite_dimensional_flag() {
            i64::MAX / 4
        } else {
            hi
        },
        ..BettiTable::default()
    };
    for s in 0..=steps {
        if current.is_zero_module() {
            betti.complete = true;
            betti.certified_steps = steps;
            break;
        }
        if s == steps {
            betti.certified_steps = steps;
            break;
        }
        let top = current.top();
        let mut summands = Vec::new();
        let mut generators: Vec<((i64, usize), usize)> = Vec::new();
        for (&(d, v), lifts) in &top {
            for &idx in lifts {
                summands.push(Summand { vertex: v, shift: d });
                generators.push(((d, v), idx));
            }
        }
        let min_shift = summands.iter().map(|s| s.shift).min().unwrap_or(0);
        let reach = (hi - min_shift).max(0);
        let expansion = restrict_expansion_above(
            expand_summands(&alg, Side::Projective, &summands, Cutoff(reach)),
            hi,
        );
        // cover: generator k at (d, v) maps to the lift coordinate vector;
        // a basis word (k, w) maps to w acting on that vector
        let mut blocks: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
        for (&slot, items) in &expansion.basis {
            let rows = current.dim(slot.0, slot.1);
            if rows == 0 {
                continue;
            }
            let mut block = QMat::zeros(rows, items.len());
            for (col, (k, w)) in items.iter().enumerate() {
                let ((gd, gv), gidx) = generators[*k];
                let gvec = basis_vector(current.dim(gd, gv), gidx);
                let img = apply_word(&current, gd, &gvec, w);
                for i in 0..rows {
                    block[(i, col)] = img[(i, 0)].clone();
                }
            }
            blocks.insert(slot, block);
        }
        let cover = GradedMorphism::new(expansion.module.clone(), current.clone(), blocks);
        cover.validate()?;
        // surjectivity within the certified window
        let (coker, _) = cover.cokernel();
        if !coker.is_zero_module() {
            return Err(Error::PropertyFalsified {
                property: "projective cover surjectivity".into(),
                witness: format!("cokernel nonzero for `{}` at step {s}", m.provenance()),
            });
        }
        let (syzygy, syzygy_inclusion) = cover.kernel();
        // word-level differential to the previous expansion
        let word_diff = if let Some(prev) = out_steps.last() {
            let into_prev = cover.compose(&prev.syzygy_inclusion);
            let pm = extract_path_matrix(
                &alg,
                Side::Projective,
                &expansion,
                &prev.expansion,
                &into_prev,
            )?;
            let check = expand_path_matrix(&alg, Side::Projective, &expansion, &prev.expansion, &pm);
            for (&slot, want) in into_prev.blocks() {
                if &check.block(slot.0, slot.1) != want {
                    return Err(Error::PropertyFalsified {
                        property: "word differential consistency".into(),
                        witness: format!("step {s} slot ({}, {})", slot.0, slot.1),
                    });
                }
            }
            for (&(i, j), ps) in &pm {
                if ps.terms().any(|(w, _)| w.is_trivial()) {
                    return Err(Error::PropertyFalsified {
                        property: "minimality".into(),
                        witness: format!("scalar entry at step {s} ({i},{j})"),
                    });
                }
            }
            Some(pm)
        } else {
            None
        };
        for s2 in &summands {
            *betti
                .entries
                .entry((s, s2.shift, s2.vertex))
                .or_default() += 1;
        }
        let mut syzygy = syzygy;
        syzygy.set_provenance(format!("syz{}({})", s + 1, m.provenance()));
        out_steps.push(ResolutionStep {
            summands,
            expansion,
            cover,
            syzygy: syzygy.clone(),
            syzygy_inclusion,
            word_diff,
        });
        betti.certified_steps = s + 1;
        current = syzygy;
    }
    if !betti.complete {
        // ran to the step bound; completeness only if the last syzygy died
        betti.complete = current.is_zero_module()
            && (current.completeness().exact_above || alg.is_finite_dimensional_flag());
    }
    Ok(Resolution {
        module: m.clone(),
        steps: out_steps,
        betti,
    })
}

/// Recover the path matrix of a morphism between expansions from its
/// generator images (projective side) or socle coefficients (injective).
fn extract_path_matrix(
    _alg: &Arc<MonomialAlgebra>,
    side: Side,
    src: &Expansion,
    tgt: &Expansion,
    f: &GradedMorphism,
) -> Result<PathMatrix> {
    let mut pm: PathMatrix = BTreeMap::new();
    match side {
        Side::Projective => {
            // column summand j has a generator: the trivial word; its image
            // decomposes over (target summand, word) basis elements
            for (&slot, items) in &src.basis {
                for (col, (j, w)) in items.iter().enumerate() {
                    if !w.is_trivial() {
                        continue;
                    }
                    let block = f.block(slot.0, slot.1);
                    if block.rows() == 0 {
                        continue;
                    }
                    let tgt_items = tgt.basis.get(&slot).cloned().unwrap_or_default();
                    for (row, (i, path)) in tgt_items.iter().enumerate() {
                        let c = &block[(row, col)];
                        if c.is_zero() {
                            continue;
                        }
                        let entry = pm.entry((*i, *j)).or_insert_with(PathSum::zero);
                        entry.add_term(path.clone(), c.clone());
                    }
                }
            }
        }
        Side::Injective => {
            // the coefficient of the trivial word of row summand i in the
            // image of (j, q) is the coefficient of the path q in entry (i, j)
            for (&slot, items) in &src.basis {
                let block = f.block(slot.0, slot.1);
                if block.rows() == 0 {
                    continue;
                }
                let tgt_items = tgt.basis.get(&slot).cloned().unwrap_or_default();
                for (col, (j, q)) in items.iter().enumerate() {
                    for (row, (i, w)) in tgt_items.iter().enumerate() {
                        if !w.is_trivial() {
                            continue;
                        }
                        let c = &block[(row, col)];
                        if c.is_zero() {
                            continue;
                        }
                        let entry = pm.entry((*i, *j)).or_insert_with(PathSum::zero);
                        entry.add_term(q.clone(), c.clone());
                    }
                }
            }
        }
    }
    pm.retain(|_, ps| !ps.is_zero());
    Ok(pm)
}

// ---------------------------------------------------------------------------
// injective coresolutions
// ---------------------------------------------------------------------------

/// A minimal injective coresolution: hull of the socle, cokernel, repeat.
#[derive(Debug, Clone)]
pub struct Coresolution {
    pub module: GradedModule,
    pub steps: Vec<CoresolutionStep>,
    /// Multiplicities (step, internal degree, vertex) of the hulls.
    pub cobetti: BettiTable,
}

#[derive(Debug, Clone)]
pub struct CoresolutionStep {
    pub summands: Vec<Summand>,
    pub expansion: Expansion,
    /// Embedding of the previous cokernel (or the module) into the hull.
    pub hull: GradedMorphism,
    pub cokernel: GradedModule,
    pub word_diff: Option<PathMatrix>,
}

impl Coresolution {
    /// The coresolution as a formal complex: step `s` at position `s`.
    pub fn formal_complex(&self) -> FormalComplex {
        let alg = Arc::clone(self.module.algebra());
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for (s, step) in self.steps.iter().enumerate() {
            if step.summands.is_empty() {
                continue;
            }
            terms.insert(s as i64, step.summands.clone());
            if let Some(pm) = &step.word_diff {
                diffs.insert(s as i64 - 1, pm.clone());
            }
        }
        FormalComplex {
            algebra: alg,
            side: Side::Injective,
            terms,
            diffs,
        }
    }
}

pub fn minimal_injective_coresolution(
    m: &GradedModule,
    steps: usize,
    cutoff: Cutoff,
) -> Result<Coresolution> {
    let alg = Arc::clone(m.algebra());
    if !m.completeness().exact_above {
        return Err(Error::Window(format!(
            "module `{}` is not certified above; cannot coresolve",
            m.provenance()
        )));
    }
    let lo = (-cutoff.0).min(m.window().0);
    let mut current = m.clone();
    let mut out_steps: Vec<CoresolutionStep> = Vec::new();
    let mut cobetti = BettiTable {
        certified_degree: if m.completeness().exact_below && alg.is_finite_dimensional_flag() {
            i64::MAX / 4
        } else {
            -lo
        },
        ..BettiTable::default()
    };
    for s in 0..=steps {
        if current.is_zero_module() {
            cobetti.complete = true;
            cobetti.certified_steps = steps;
            break;
        }
        if s == steps {
            cobetti.certified_steps = steps;
            break;
        }
        let socle = current.socle();
        let mut summands = Vec::new();
        let mut functionals: Vec<((i64, usize), QMat)> = Vec::new();
        for (&(d, v), basis) in &socle {
            let dim = current.dim(d, v);
            // invertible change [socle basis | coordinate complement]
            let (_, pivot_rows) = basis.column_space();
            let complement: Vec<usize> = (0..dim).filter(|i| !pivot_rows.contains(i)).collect();
            let e = QMat::from_fn(dim, complement.len(), |i, j| {
                if i == complement[j] {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            });
            let change = basis.hstack(&e);
            let inv = change
                .solve(&QMat::identity(dim))
                .expect("socle basis extends to a basis");
            for k in 0..basis.cols() {
                summands.push(Summand { vertex: v, shift: d });
                // functional: row k of the inverse change of basis
                let lam = QMat::from_fn(1, dim, |_, j| inv[(k, j)].clone());
                functionals.push(((d, v), lam));
            }
        }
        let max_shift = summands.iter().map(|s| s.shift).max().unwrap_or(0);
        let reach = (max_shift - lo).max(0);
        let expansion = restrict_expansion_below(
            expand_summands(&alg, Side::Injective, &summands, Cutoff(reach)),
            lo,
        );
        // hull map: component of x at basis (k, w) is lambda_k(w . x)
        let mut blocks: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
        for &(deg, u) in current.support().iter() {
            let cols = current.dim(deg, u);
            let Some(items) = expansion.basis.get(&(deg, u)) else {
                continue;
            };
            let mut block = QMat::zeros(items.len(), cols);
            for c in 0..cols {
                let x = basis_vector(cols, c);
                for (row, (k, w)) in items.iter().enumerate() {
                    let ((dk, _vk), lam) = &functionals[*k];
                    // w must carry (deg, u) to (dk, vk)
                    debug_assert_eq!(deg + w.degree() as i64, *dk);
                    let moved = apply_word(&current, deg, &x, w);
                    let val = lam.mul(&moved);
                    block[(row, c)] = val[(0, 0)].clone();
                }
            }
            if !block.is_zero() {
                blocks.insert((deg, u), block);
            }
        }
        let hull = GradedMorphism::new(current.clone(), expansion.module.clone(), blocks);
        hull.validate()?;
        // injectivity within the window
        let (ker, _) = hull.kernel();
        if !ker.is_zero_module() {
            return Err(Error::PropertyFalsified {
                property: "injective hull embedding".into(),
                witness: format!(
                    "kernel nonzero for `{}` at step {s}",
                    m.provenance()
                ),
            });
        }
        let (cokernel, _proj) = hull.cokernel();
        let word_diff = if let Some(prev) = out_steps.last() {
            // previous expansion -> cokernel_(s-1) -> hull embedding
            let comp = prev_step_projection(prev).compose(&hull);
            let pm = extract_path_matrix(&alg, Side::Injective, &prev.expansion, &expansion, &comp)?;
            let check = expand_path_matrix(&alg, Side::Injective, &prev.expansion, &expansion, &pm);
            for (&slot, want) in comp.blocks() {
                if &check.block(slot.0, slot.1) != want {
                    return Err(Error::PropertyFalsified {
                        property: "word differential consistency".into(),
                        witness: format!("costep {s} slot ({}, {})", slot.0, slot.1),
                    });
                }
            }
            Some(pm)
        } else {
            None
        };
        for s2 in &summands {
            *cobetti
                .entries
                .entry((s, s2.shift, s2.vertex))
                .or_default() += 1;
        }
        let mut cokernel = cokernel;
        cokernel.set_provenance(format!("cosyz{}({})", s + 1, m.provenance()));
        out_steps.push(CoresolutionStep {
            summands,
            expansion,
            hull,
            cokernel: cokernel.clone(),
            word_diff,
        });
        cobetti.certified_steps = s + 1;
        current = cokernel;
    }
    if !cobetti.complete {
        cobetti.complete = current.is_zero_module()
            && (current.completeness().exact_below || alg.is_finite_dimensional_flag());
    }
    Ok(Coresolution {
        module: m.clone(),
        steps: out_steps,
        cobetti,
    })
}

/// The projection from a coresolution step's expansion onto its cokernel.
fn prev_step_projection(step: &CoresolutionStep) -> GradedMorphism {
    // reconstructed from the stored hull: quotient by its image
    let image: BTreeMap<(i64, usize), QMat> = step
        .hull
        .blocks()
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&k, m)| (k, m.clone()))
        .collect();
    let (_, proj) = quotient_by_image(&step.expansion.module, &image);
    // identify the anonymous quotient with the stored cokernel (same
    // construction, so identical bases)
    GradedMorphism::new(step.expansion.module.clone(), step.cokernel.clone(), proj.blocks().clone())
}

// ---------------------------------------------------------------------------
// syzygy decomposition into arrow ideals
// ---------------------------------------------------------------------------

/// An explicit identification of a module with a direct sum of shifted
/// arrow ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyzygyDecomposition {
    /// (arrow index, internal shift) per summand, canonical order.
    pub parts: Vec<(usize, i64)>,
}

/// Per-slot data for the decomposition search: candidate generator
/// subspaces per arrow and the projection onto the top.
struct SlotData {
    slot: (i64, usize),
    count: usize,
    arrows: Vec<usize>,
    candidate: Vec<QMat>,
    top_proj: QMat,
}

/// Decompose a module as a direct sum of shifted arrow ideals by finding an
/// explicit action-commuting isomorphism. A generator of type `a` must be
/// killed by every arrow `b` with `(a, b)` a relation; once the generators
/// span the top with the right multiset of types, the induced map from the
/// sum of arrow ideals is surjective, and bijectivity reduces to dimension
/// counts. Fails loudly when no matching exists; such a failure is a
/// property falsifier, never silently patched.
pub fn syzygy_decomposition(m: &GradedModule, cutoff: Cutoff) -> Result<SyzygyDecomposition> {
    let alg = Arc::clone(m.algebra());
    if m.is_zero_module() {
        return Ok(SyzygyDecomposition { parts: Vec::new() });
    }
    let top = m.top();
    let mut slots: Vec<SlotData> = Vec::new();
    for (&(d, v), lifts) in &top {
        let dim = m.dim(d, v);
        let mut incoming = QMat::zeros(dim, 0);
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            if arr.target != v {
                continue;
            }
            let act = m.action(a_idx, d - 1);
            if act.cols() > 0 {
                incoming = incoming.hstack(&act);
            }
        }
        let (rad_basis, pivot_rows) = incoming.column_space();
        let complement: Vec<usize> = (0..dim).filter(|i| !pivot_rows.contains(i)).collect();
        debug_assert_eq!(complement.len(), lifts.len());
        let e = QMat::from_fn(dim, complement.len(), |i, j| {
            if i == complement[j] {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let change = rad_basis.hstack(&e);
        let inv = change.solve(&QMat::identity(dim)).expect("basis extension");
        let top_proj = QMat::from_fn(complement.len(), dim, |i, j| {
            inv[(rad_basis.cols() + i, j)].clone()
        });
        let mut arrows = Vec::new();
        let mut candidate = Vec::new();
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            if arr.target != v {
                continue;
            }
            // K_a: joint kernel of the actions of arrows b with (a, b) zero
            let mut constraints = QMat::zeros(0, dim);
            for b_idx in 0..alg.quiver().arrow_count() {
                if !alg.is_relation(a_idx, b_idx) {
                    continue;
                }
                let act = m.action(b_idx, d);
                if act.rows() > 0 {
                    constraints = stack_vertical(&constraints, &act);
                }
            }
            let k = constraints.kernel_basis();
            if k.cols() > 0 && !top_proj.mul(&k).is_zero() {
                arrows.push(a_idx);
                candidate.push(k);
            }
        }
        slots.push(SlotData {
            slot: (d, v),
            count: lifts.len(),
            arrows,
            candidate,
            top_proj,
        });
    }
    let dims_m = m.dims_table();
    let (lo_cert, hi_cert) = m.certified_range();
    let ideal_dims: BTreeMap<usize, BTreeMap<(i64, usize), usize>> = (0..alg
        .quiver()
        .arrow_count())
        .map(|a| (a, arrow_ideal(&alg, a, cutoff).dims_table()))
        .collect();
    let assignment = search_assignment(&slots, &ideal_dims, &dims_m, (lo_cert, hi_cert))
        .ok_or_else(|| Error::PropertyFalsified {
            property: "first syzygies decompose into shifted arrow ideals".into(),
            witness: format!(
                "no multiplicity assignment matches the dimensions of `{}`",
                m.provenance()
            ),
        })?;
    // select explicit generator vectors realizing the assignment
    let mut parts: Vec<(usize, i64)> = Vec::new();
    let mut generators: Vec<((i64, usize), usize, QMat)> = Vec::new();
    let mut cursor = 0usize;
    for slot in &slots {
        let my: Vec<(usize, i64)> = assignment[cursor..cursor + slot.count].to_vec();
        cursor += slot.count;
        let chosen = select_transversal(slot, &my).ok_or_else(|| Error::PropertyFalsified {
            property: "first syzygies decompose into shifted arrow ideals".into(),
            witness: format!(
                "no generator transversal at degree {}, vertex {} of `{}`",
                slot.slot.0,
                slot.slot.1,
                m.provenance()
            ),
        })?;
        for ((a, shift), vec) in my.iter().zip(chosen) {
            parts.push((*a, *shift));
            generators.push((slot.slot, *a, vec));
        }
    }
    // dimension bookkeeping of the candidate sum
    let mut sum_dims: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for &(a, shift) in &parts {
        for (&(d, v), &mult) in &ideal_dims[&a] {
            *sum_dims.entry((d + shift, v)).or_default() += mult;
        }
    }
    let within = |d: i64| d >= lo_cert && d <= hi_cert;
    for (&k, &d) in sum_dims.iter().chain(dims_m.iter()) {
        if within(k.0) {
            let a = sum_dims.get(&k).copied().unwrap_or(0);
            let b = dims_m.get(&k).copied().unwrap_or(0);
            if a != b {
                return Err(Error::PropertyFalsified {
                    property: "first syzygies decompose into shifted arrow ideals".into(),
                    witness: format!("dimension mismatch at {:?} for `{}` ({a} vs {b}, d={d})", k, m.provenance()),
                });
            }
        }
    }
    // the explicit morphism (+) L(a)<shift> -> M, column per basis word
    let mut blocks: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
    let mut col_cursor: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for ((gslot, arrow, vec), &(arrow2, shift)) in generators.iter().zip(&parts) {
        debug_assert_eq!(*arrow, arrow2);
        let start = alg.quiver().arrow(*arrow).target;
        let max_word = ideal_dims[arrow]
            .keys()
            .map(|&(d, _)| d)
            .max()
            .unwrap_or(0)
            .max(1) as usize;
        for len in 1..=max_word {
            let key_base = shift + len as i64;
            if !within(key_base) {
                continue;
            }
            // words a.p of length len: p has length len - 1 from target(a)
            for p in alg.words_from(start, len - 1) {
                if !p.arrows.is_empty() && !alg.is_allowed(*arrow, p.arrows[0]) {
                    continue;
                }
                let full_target = p.target(&alg);
                let key = (key_base, full_target);
                let img = apply_word(m, gslot.0, vec, &p);
                let rows = m.dim(key.0, key.1);
                let cols = sum_dims.get(&key).copied().unwrap_or(0);
                if cols == 0 {
                    continue;
                }
                let col = {
                    let c = col_cursor.entry(key).or_default();
                    let v = *c;
                    *c += 1;
                    v
                };
                let block = blocks
                    .entry(key)
                    .or_insert_with(|| QMat::zeros(rows, cols));
                for i in 0..rows.min(img.rows()) {
                    block[(i, col)] = img[(i, 0)].clone();
                }
            }
        }
    }
    for (&k, block) in &blocks {
        if !within(k.0) {
            continue;
        }
        if block.rows() != block.cols() || block.rank() != block.rows() {
            return Err(Error::PropertyFalsified {
                property: "first syzygies decompose into shifted arrow ideals".into(),
                witness: format!(
                    "candidate map is not bijective at degree {}, vertex {} for `{}`",
                    k.0,
                    k.1,
                    m.provenance()
                ),
            });
        }
    }
    parts.sort_unstable();
    Ok(SyzygyDecomposition { parts })
}

/// DFS over per-slot multisets of arrow types, pruned by dimension counts.
fn search_assignment(
    slots: &[SlotData],
    ideal_dims: &BTreeMap<usize, BTreeMap<(i64, usize), usize>>,
    dims_m: &BTreeMap<(i64, usize), usize>,
    range: (i64, i64),
) -> Option<Vec<(usize, i64)>> {
    struct Ctx<'a> {
        slots: &'a [SlotData],
        ideal_dims: &'a BTreeMap<usize, BTreeMap<(i64, usize), usize>>,
        dims_m: &'a BTreeMap<(i64, usize), usize>,
        range: (i64, i64),
        budget: usize,
    }
    impl Ctx<'_> {
        fn fits(&self, acc: &BTreeMap<(i64, usize), i64>) -> bool {
            acc.iter().all(|(&k, &d)| {
                k.0 < self.range.0
                    || k.0 > self.range.1
                    || d <= self.dims_m.get(&k).copied().unwrap_or(0) as i64
            })
        }
        fn exact(&self, acc: &BTreeMap<(i64, usize), i64>) -> bool {
            self.fits(acc)
                && self.dims_m.iter().all(|(&k, &d)| {
                    k.0 < self.range.0
                        || k.0 > self.range.1
                        || acc.get(&k).copied().unwrap_or(0) == d as i64
                })
        }
        fn add(&self, acc: &mut BTreeMap<(i64, usize), i64>, arrow: usize, shift: i64, sign: i64) {
            for (&(d, v), &m) in &self.ideal_dims[&arrow] {
                *acc.entry((d + shift, v)).or_default() += sign * m as i64;
            }
        }
        fn run(
            &mut self,
            slot_idx: usize,
            within: usize,
            acc: &mut BTreeMap<(i64, usize), i64>,
            chosen: &mut Vec<(usize, i64)>,
        ) -> Option<Vec<(usize, i64)>> {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            if slot_idx == self.slots.len() {
                return self.exact(acc).then(|| chosen.clone());
            }
            let slot = &self.slots[slot_idx];
            if within == slot.count {
                return self.run(slot_idx + 1, 0, acc, chosen);
            }
            let min_arrow = if within > 0 {
                chosen.last().map(|&(a, _)| a).unwrap_or(0)
            } else {
                0
            };
            let arrows = slot.arrows.clone();
            for a in arrows {
                if a < min_arrow {
                    continue;
                }
                let shift = slot.slot.0 - 1;
                self.add(acc, a, shift, 1);
                chosen.push((a, shift));
                if self.fits(acc) {
                    if let Some(hit) = self.run(slot_idx, within + 1, acc, chosen) {
                        return Some(hit);
                    }
                }
                chosen.pop();
                self.add(acc, a, shift, -1);
            }
            None
        }
    }
    let mut ctx = Ctx {
        slots,
        ideal_dims,
        dims_m,
        range,
        budget: 1_000_000,
    };
    ctx.run(0, 0, &mut BTreeMap::new(), &mut Vec::new())
}

/// Pick vectors from the per-arrow candidate subspaces whose top images are
/// jointly independent, honoring the multiset. Small exhaustive DFS.
fn select_transversal(slot: &SlotData, my: &[(usize, i64)]) -> Option<Vec<QMat>> {
    fn dfs(
        slot: &SlotData,
        my: &[(usize, i64)],
        idx: usize,
        chosen_tops: &mut QMat,
        chosen: &mut Vec<QMat>,
    ) -> Option<Vec<QMat>> {
        if idx == my.len() {
            return Some(chosen.clone());
        }
        let (arrow, _) = my[idx];
        let k_pos = slot.arrows.iter().position(|&a| a == arrow)?;
        let cand = &slot.candidate[k_pos];
        for c in 0..cand.cols() {
            let vec = QMat::from_fn(cand.rows(), 1, |i, _| cand[(i, c)].clone());
            let tops = slot.top_proj.mul(&vec);
            let trial = chosen_tops.hstack(&tops);
            if trial.rank() == chosen_tops.cols() + 1 {
                let saved = chosen_tops.clone();
                *chosen_tops = trial;
                chosen.push(vec);
                if let Some(hit) = dfs(slot, my, idx + 1, chosen_tops, chosen) {
                    return Some(hit);
                }
                chosen.pop();
                *chosen_tops = saved;
            }
        }
        None
    }
    let mut tops = QMat::zeros(slot.top_proj.rows(), 0);
    let mut chosen = Vec::new();
    dfs(slot, my, 0, &mut tops, &mut chosen)
}

// ---------------------------------------------------------------------------
// linear part and linearity defect
// ---------------------------------------------------------------------------

/// Keep only the single-arrow components of every differential entry. The
/// result still squares to zero: minimality rules out scalar components, so
/// the degree-two part of the vanishing composite is the square of the
/// degree-one part.
pub fn linear_part(fc: &FormalComplex) -> Result<FormalComplex> {
    let mut diffs: BTreeMap<i64, PathMatrix> = BTreeMap::new();
    for (&n, pm) in &fc.diffs {
        let mut out: PathMatrix = BTreeMap::new();
        for (&ij, ps) in pm {
            let mut lin = PathSum::zero();
            for (w, c) in ps.terms() {
                if w.degree() == 1 {
                    lin.add_term(w.clone(), c.clone());
                }
            }
            if !lin.is_zero() {
                out.insert(ij, lin);
            }
        }
        if !out.is_empty() {
            diffs.insert(n, out);
        }
    }
    let out = FormalComplex {
        algebra: Arc::clone(&fc.algebra),
        side: fc.side,
        terms: fc.terms.clone(),
        diffs,
    };
    out.check()?;
    Ok(out)
}

/// Exactness table of the linear part of a minimal resolution, and the
/// resulting linearity defect.
#[derive(Debug, Clone)]
pub struct LinDefectReport {
    /// Smallest step whose syzygy is weakly Koszul, when certified.
    pub defect: Option<usize>,
    /// Per cohomological position `-k`: is the linear part exact there?
    pub table: Vec<(usize, bool)>,
    /// Steps the table certifies (positions `1 ..= certified`).
    pub certified: usize,
}

/// The linearity defect within the given step and degree cutoffs: the
/// largest `k >= 1` at which the linear part of the minimal resolution has
/// cohomology (0 when none), reported with the per-step exactness table.
pub fn linearity_defect(
    m: &GradedModule,
    step_cutoff: usize,
    degree_cutoff: Cutoff,
) -> Result<LinDefectReport> {
    let resolution = minimal_projective_resolution(m, step_cutoff, degree_cutoff)?;
    let fc = resolution.formal_complex();
    let lin = linear_part(&fc)?;
    let mc = lin.expand(degree_cutoff);
    let steps_done = resolution.steps.len();
    // position -k needs the term at -(k + 1); when the resolution
    // terminated, the missing terms are genuinely zero
    let certified = if resolution.betti.complete {
        steps_done.saturating_sub(1)
    } else {
        steps_done.saturating_sub(2)
    };
    let mut table = Vec::new();
    let mut defect = 0usize;
    for k in 1..=certified {
        let h = mc.cohomology(-(k as i64));
        let exact = h.is_zero_module();
        if !exact {
            defect = defect.max(k);
        }
        table.push((k, exact));
    }
    let defect = if resolution.betti.complete || defect < certified {
        Some(defect)
    } else {
        // nonvanishing cohomology at the certified boundary: deeper steps
        // could still be inexact
        None
    };
    Ok(LinDefectReport {
        defect,
        table,
        certified,
    })
}

// ---------------------------------------------------------------------------
// module isomorphism testing
// ---------------------------------------------------------------------------

/// Decide whether two graded modules are isomorphic by an explicit
/// action-commuting degree-preserving map, searching over the space of
/// morphisms determined by generator images.
///
/// For a module generated in a single slot with one-dimensional top, the
/// answer is exact. In general the morphism space is computed exactly and a
/// deterministic family of candidate combinations is tried; a `false` with
/// equal dimensions therefore means "no isomorphism found", qualified in
/// the returned detail string.
pub fn module_iso(n: &GradedModule, h: &GradedModule, cutoff: Cutoff) -> Result<(bool, String)> {
    if n.dims_table() != h.dims_table() {
        return Ok((false, "dimension tables differ".into()));
    }
    if n.is_zero_module() {
        return Ok((true, "both zero".into()));
    }
    // one cover step of n gives its generators and relation kernel
    let res = minimal_projective_resolution(n, 1, cutoff)?;
    let step = &res.steps[0];
    let gens: Vec<Summand> = step.summands.clone();
    // unknowns: an image vector in h at each generator slot
    let gen_slots: Vec<(i64, usize)> = gens.iter().map(|s| (s.shift, s.vertex)).collect();
    let unknown_dims: Vec<usize> = gen_slots.iter().map(|&(d, v)| h.dim(d, v)).collect();
    let total_unknowns: usize = unknown_dims.iter().sum();
    if total_unknowns == 0 {
        return Ok((false, "no room for generator images".into()));
    }
    let offset: Vec<usize> = unknown_dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    // constraint rows: psi(r) = 0 for every kernel basis vector r of the cover
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let syz_incl = &step.syzygy_inclusion;
    for &(d, v) in step.syzygy.support().iter() {
        let cols_r = step.syzygy.dim(d, v);
        let incl = syz_incl.block(d, v);
        let items = step.expansion.basis.get(&(d, v)).cloned().unwrap_or_default();
        for r in 0..cols_r {
            // r-th kernel vector, in expansion coordinates
            let target_dim = h.dim(d, v);
            let mut row_block = vec![vec![Scalar::zero(); total_unknowns]; target_dim];
            for (exp_idx, (k, w)) in items.iter().enumerate() {
                let c = incl[(exp_idx, r)].clone();
                if c.is_zero() {
                    continue;
                }
                // contribution: c * (action of w on g_k)
                let (gd, _gv) = gen_slots[*k];
                let wmat = word_matrix(h, gd, w);
                for i in 0..wmat.rows() {
                    for j in 0..wmat.cols() {
                        let val = &wmat[(i, j)] * &c;
                        if !val.is_zero() {
                            row_block[i][offset[*k] + j] += val;
                        }
                    }
                }
            }
            for row in row_block {
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let constraint = QMat::from_fn(rows.len(), total_unknowns, |i, j| rows[i][j].clone());
    let hom_basis = constraint.kernel_basis();
    if hom_basis.cols() == 0 {
        return Ok((false, "morphism space is zero".into()));
    }
    // candidate combinations, deterministic order
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    let m = hom_basis.cols();
    for i in 0..m {
        candidates.push(hom_basis.column(i));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let plus: Vec<Scalar> = (0..total_unknowns)
                .map(|r| &hom_basis[(r, i)] + &hom_basis[(r, j)])
                .collect();
            let minus: Vec<Scalar> = (0..total_unknowns)
                .map(|r| &hom_basis[(r, i)] - &hom_basis[(r, j)])
                .collect();
            candidates.push(plus);
            candidates.push(minus);
        }
    }
    if m > 1 {
        // weighted sum with distinct small weights
        let all: Vec<Scalar> = (0..total_unknowns)
            .map(|r| {
                (0..m).fold(Scalar::zero(), |acc, i| {
                    acc + &hom_basis[(r, i)] * Scalar::from_integer((i as i64 + 1).into())
                })
            })
            .collect();
        candidates.push(all);
    }
    candidates.truncate(500);
    let exact = gens.len() == 1;
    for cand in &candidates {
        if candidate_is_iso(n, h, step, &gen_slots, &offset, cand) {
            return Ok((true, "explicit isomorphism constructed".into()));
        }
    }
    if exact {
        // single generator: surjectivity only depends on the top image, and
        // the valid images form the morphism space itself; scan a basis of
        // the space for one whose top image is nonzero, which is exhaustive
        Ok((
            false,
            "no isomorphism: single-generator case decided exactly".into(),
        ))
    } else {
        Ok((
            false,
            "no isomorphism found (search over candidate morphisms exhausted)".into(),
        ))
    }
}

/// The matrix of the action of a word from `(degree, word.source)`.
fn word_matrix(m: &GradedModule, degree: i64, word: &PathWord) -> QMat {
    let cols = m.dim(degree, word.source);
    let mut cur = QMat::identity(cols);
    let mut d = degree;
    for &a in &word.arrows {
        cur = m.action(a, d).mul(&cur);
        d += 1;
    }
    cur
}

fn candidate_is_iso(
    n: &GradedModule,
    h: &GradedModule,
    step: &ResolutionStep,
    gen_slots: &[(i64, usize)],
    offset: &[usize],
    cand: &[Scalar],
) -> bool {
    // build psi: expansion -> h from the generator images
    let mut blocks: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
    for (&slot, items) in &step.expansion.basis {
        let rows = h.dim(slot.0, slot.1);
        if rows == 0 {
            if !items.is_empty() && n.dim(slot.0, slot.1) > 0 {
                return false;
            }
            continue;
        }
        let mut block = QMat::zeros(rows, items.len());
        for (col, (k, w)) in items.iter().enumerate() {
            let (gd, gv) = gen_slots[*k];
            let gdim = h.dim(gd, gv);
            let mut g = QMat::zeros(gdim, 1);
            for i in 0..gdim {
                g[(i, 0)] = cand[offset[*k] + i].clone();
            }
            let img = apply_word(h, gd, &g, w);
            for i in 0..rows {
                block[(i, col)] = img[(i, 0)].clone();
            }
        }
        blocks.insert(slot, block);
    }
    // factor through the cover: phi . cover = psi, then phi must be a
    // degree-wise bijection (dims already agree)
    for &slot in n.support().iter() {
        let cover_block = step.cover.block(slot.0, slot.1);
        let psi_block = blocks
            .get(&slot)
            .cloned()
            .unwrap_or_else(|| QMat::zeros(h.dim(slot.0, slot.1), cover_block.cols()));
        // solve phi from phi * cover = psi: transpose to cover^T phi^T = psi^T
        let Some(phi_t) = cover_block.transpose().solve(&psi_block.transpose()) else {
            return false;
        };
        let phi = phi_t.transpose();
        if phi.rows() != phi.cols() || phi.rank() != phi.rows() {
            return false;
        }
        // consistency: phi . cover really equals psi (solve gave canonical)
        if phi.mul(&cover_block) != psi_block {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// the Koszulness certificate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct CertificateCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Per-vertex report of the Koszulness certificate: the linear complex
/// attached to the dual injective resolves the simple, and dually the
/// colinear complex attached to the projective coresolves the dual simple.
#[derive(Debug, Clone)]
pub struct KoszulCertificate {
    pub per_vertex: Vec<(usize, Vec<CertificateCheck>)>,
    /// Projective dimension of each simple, when the dual side is finite.
    pub projective_dims: Vec<(usize, Option<usize>)>,
    pub pass: bool,
}

impl KoszulCertificate {
    pub fn render(&self, alg: &MonomialAlgebra) -> String {
        let mut out = String::new();
        for (v, checks) in &self.per_vertex {
            for c in checks {
                out.push_str(&format!(
                    "{}\tvertex {}\t{}\t{}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    alg.quiver().vertex_name(*v),
                    c.name,
                    c.detail
                ));
            }
        }
        for (v, pd) in &self.projective_dims {
            out.push_str(&format!(
                "INFO\tvertex {}\tprojective dimension\t{}\n",
                alg.quiver().vertex_name(*v),
                match pd {
                    Some(d) => d.to_string(),
                    None => "not finite within window".into(),
                }
            ));
        }
        out.push_str(if self.pass { "RESULT\tPASS\n" } else { "RESULT\tFAIL\n" });
        out
    }
}

/// Window for dual-side data limited by a total-dimension budget.
fn adaptive_dual_window(pair: &DualPair, x: usize, max_len: usize, budget: usize) -> usize {
    let dual = &pair.dual;
    let mut total = 0usize;
    let mut window = 0usize;
    for n in 0..=max_len {
        let mut count = 0usize;
        for v in 0..dual.quiver().vertex_count() {
            let c = dual.count_paths(v, x, n);
            count += usize::try_from(&c).unwrap_or(usize::MAX / 2);
        }
        if total + count > budget && n > 0 {
            break;
        }
        total += count;
        window = n;
    }
    window
}

/// The executable Koszulness certificate: for every vertex, the functor
/// image of the dual injective is a valid minimal linear complex, exact
/// away from position zero with the simple as its only cohomology; the dual
/// statement is certified through the coKoszul side. Exactness is certified
/// by the basis pairing and cross-checked against matrix cohomology when the
/// expanded complex is small.
pub fn koszul_certificate(
    pair: &DualPair,
    cutoff: Cutoff,
    budget: usize,
) -> Result<KoszulCertificate> {
    let primal = &pair.primal;
    let (fin, _, _) = primal.is_finite_dimensional();
    if !fin {
        return Err(Error::Window(
            "certificate requires a finite-dimensional algebra".into(),
        ));
    }
    let (dual_fin, dual_max, _) = pair.dual.is_finite_dimensional();
    let mut per_vertex = Vec::new();
    let mut projective_dims = Vec::new();
    let mut pass = true;
    for x in 0..primal.quiver().vertex_count() {
        let mut checks = Vec::new();
        let window = adaptive_dual_window(pair, x, cutoff.0.max(0) as usize, budget);
        let ix = crate::module::injective(&pair.dual, x, Cutoff(window as i64));
        let (k, _) = koszul_k(pair, &ix)?;
        push_check(&mut checks, "complex (d.d = 0)", k.check());
        push_check(&mut checks, "linear terms and arrow entries", k.check_linear());
        push_check(&mut checks, "minimality (no scalar entries)", k.check_minimal());
        match crate::functors::k_pairing(pair, DualWordModule::Injective(x), window, budget) {
            Ok(report) => {
                let want: BTreeMap<(i64, i64, usize), usize> =
                    [((0i64, 0i64, x), 1usize)].into_iter().collect();
                let ok = report.unmatched == want;
                checks.push(CertificateCheck {
                    name: "exactness below zero, simple at zero".into(),
                    pass: ok,
                    detail: format!(
                        "pairing over {} tensors, positions {}..={} certified{}",
                        report.total_basis,
                        report.positions_certified.0,
                        report.positions_certified.1,
                        if ok {
                            String::new()
                        } else {
                            format!("; unexpected cohomology {:?}", report.unmatched)
                        }
                    ),
                });
                if !ok {
                    pass = false;
                }
            }
            Err(e) => {
                checks.push(CertificateCheck {
                    name: "exactness below zero, simple at zero".into(),
                    pass: false,
                    detail: e.to_string(),
                });
                pass = false;
            }
        }
        // matrix cross-check on small inputs
        let expanded_size: usize = ix.total_dim() * primal.is_finite_dimensional().2
            .map(|d| usize::try_from(&d).unwrap_or(usize::MAX / 2))
            .unwrap_or(usize::MAX / 2);
        if expanded_size <= 600 {
            let mc = k.expand(cutoff);
            let mut ok = mc.check().is_ok();
            let (lo, hi) = mc.range().unwrap_or((0, 0));
            let lo_cert = if ix.completeness().exact_below { lo } else { lo + 1 };
            for npos in lo_cert..=hi {
                let h = mc.cohomology(npos);
                if npos == 0 {
                    ok &= h.total_dim() == 1 && h.dim(0, x) == 1;
                } else {
                    ok &= h.is_zero_module();
                }
            }
            checks.push(CertificateCheck {
                name: "matrix cohomology cross-check".into(),
                pass: ok,
                detail: format!("expanded dimension {expanded_size}"),
            });
            if !ok {
                pass = false;
            }
        }
        // dual statement: the colinear complex of the projective coresolves
        // the dual simple
        let px = crate::module::projective(&pair.primal, x, cutoff);
        let (g, _) = cokoszul_g(pair, &px)?;
        push_check(&mut checks, "dual complex (d.d = 0)", g.check());
        push_check(&mut checks, "dual colinear terms", g.check_linear());
        push_check(&mut checks, "dual minimality", g.check_minimal());
        match crate::functors::g_pairing(
            pair,
            crate::functors::PrimalWordModule::Projective(x),
            window,
            budget,
        ) {
            Ok(report) => {
                let want: BTreeMap<(i64, i64, usize), usize> =
                    [((0i64, 0i64, x), 1usize)].into_iter().collect();
                let ok = report.unmatched == want;
                checks.push(CertificateCheck {
                    name: "dual exactness above zero, dual simple at zero".into(),
                    pass: ok,
                    detail: format!(
                        "pairing over {} tensors, internal degrees >= {} certified{}",
                        report.total_basis,
                        report.internal_certified.0,
                        if ok {
                            String::new()
                        } else {
                            format!("; unexpected cohomology {:?}", report.unmatched)
                        }
                    ),
                });
                if !ok {
                    pass = false;
                }
            }
            Err(e) => {
                checks.push(CertificateCheck {
                    name: "dual exactness above zero, dual simple at zero".into(),
                    pass: false,
                    detail: e.to_string(),
                });
                pass = false;
            }
        }
        for c in &checks {
            if !c.pass {
                pass = false;
            }
        }
        per_vertex.push((x, checks));
        let pd = if dual_fin {
            // projective dimension of the simple: longest dual word into x
            let mut d = 0usize;
            for n in 0..=dual_max.unwrap() {
                let count: usize = (0..pair.dual.quiver().vertex_count())
                    .map(|v| usize::try_from(&pair.dual.count_paths(v, x, n)).unwrap_or(0))
                    .sum();
                if count > 0 {
                    d = n;
                }
            }
            Some(d)
        } else {
            None
        };
        projective_dims.push((x, pd));
    }
    Ok(KoszulCertificate {
        per_vertex,
        projective_dims,
        pass,
    })
}

fn push_check(checks: &mut Vec<CertificateCheck>, name: &str, res: Result<()>) {
    match res {
        Ok(()) => checks.push(CertificateCheck {
            name: name.into(),
            pass: true,
            detail: String::new(),
        }),
        Err(e) => checks.push(CertificateCheck {
            name: name.into(),
            pass: false,
            detail: e.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// colinear truncation finder
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TruncationResult {
    /// The cut degree: degrees above it form the finite part.
    pub r: i64,
    pub finite_part: GradedModule,
    pub tail: GradedModule,
    pub certificate: Vec<CertificateCheck>,
    pub pass: bool,
}

/// Split a finitely copresented dual-side module into a finite-dimensional
/// top slice and a colinear tail. The cut is placed at the smallest
/// position with nonvanishing linear-complex cohomology: everything below
/// the cut has exact image under `K`, so the tail, shifted back to degree
/// zero, is coKoszul; the certificate runs the generation-degree check on
/// its minimal coresolution within the window.
pub fn find_linear_truncation(
    pair: &DualPair,
    m: &GradedModule,
    steps: usize,
    cutoff: Cutoff,
) -> Result<TruncationResult> {
    pair.expects_dual(m)?;
    if m.is_zero_module() {
        return Ok(TruncationResult {
            r: 0,
            finite_part: m.clone(),
            tail: m.clone(),
            certificate: vec![CertificateCheck {
                name: "zero module".into(),
                pass: true,
                detail: String::new(),
            }],
            pass: true,
        });
    }
    let (k, (cert_lo, _)) = koszul_k(pair, m)?;
    let mc = k.expand(cutoff);
    let (lo, hi) = mc.range().ok_or_else(|| Error::Window("empty image complex".into()))?;
    let mut jmin = None;
    for n in lo.max(cert_lo)..=hi {
        if !mc.cohomology(n).is_zero_module() {
            jmin = Some(n);
            break;
        }
    }
    let Some(r) = jmin else {
        return Err(Error::Window(
            "no nonvanishing cohomology within the certified window".into(),
        ));
    };
    let t = crate::module::truncate(m, crate::module::TruncationMode::Le(r))?;
    let mut certificate = Vec::new();
    // the finite part must be finite-dimensional: bounded window, exact
    let fin_ok = t.sub.completeness() == Completeness::EXACT
        || (t.sub.completeness().exact_below && t.sub.completeness().exact_above);
    certificate.push(CertificateCheck {
        name: "finite part is finite-dimensional".into(),
        pass: fin_ok,
        detail: format!("dimension {}", t.sub.total_dim()),
    });
    // coKoszul certificate for the shifted tail: minimal coresolution with
    // step s cogenerated in degree -s
    let shifted = t.quot.shift(-r);
    let mut pass_tail = true;
    match minimal_injective_coresolution(&shifted, steps, cutoff) {
        Ok(cores) => {
            for (s, step) in cores.steps.iter().enumerate() {
                for sm in &step.summands {
                    if sm.shift != -(s as i64) {
                        pass_tail = false;
                    }
                }
            }
            certificate.push(CertificateCheck {
                name: "tail coresolution is colinear".into(),
                pass: pass_tail,
                detail: format!(
                    "{} costeps certified{}",
                    cores.cobetti.certified_steps,
                    if cores.cobetti.complete { ", complete" } else { "" }
                ),
            });
        }
        Err(e) => {
            pass_tail = false;
            certificate.push(CertificateCheck {
                name: "tail coresolution is colinear".into(),
                pass: false,
                detail: e.to_string(),
            });
        }
    }
    let pass = fin_ok && pass_tail;
    Ok(TruncationResult {
        r,
        finite_part: t.sub,
        tail: t.quot,
        certificate,
        pass,
    })
}

// ---------------------------------------------------------------------------
// duality roundtrip
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct RoundtripReport {
    pub pass: bool,
    pub detail: String,
}

/// Verify that sending a finite-dimensional module through the coKoszul
/// functor and back through the totalized Koszul functor returns the module:
/// the totalization must have cohomology only in position zero, explicitly
/// isomorphic to the input.
pub fn roundtrip_check(
    pair: &DualPair,
    n: &GradedModule,
    cutoff: Cutoff,
) -> Result<RoundtripReport> {
    pair.expects_primal(n)?;
    if n.completeness() != Completeness::EXACT {
        return Err(Error::Window(format!(
            "roundtrip requires a finite-dimensional module, `{}` is truncated",
            n.provenance()
        )));
    }
    if n.is_zero_module() {
        return Ok(RoundtripReport {
            pass: true,
            detail: "zero module".into(),
        });
    }
    let (g, _) = cokoszul_g(pair, n)?;
    let gx = g.expand(cutoff);
    let res = crate::functors::f_on_complex(pair, &gx)?;
    let total = res.total.expand(cutoff);
    total.check()?;
    let (lo, hi) = total.range().unwrap_or((0, 0));
    let mut detail = String::new();
    let mut pass = true;
    for pos in lo.max(res.certified_from)..=hi {
        let h = total.cohomology(pos);
        if pos == 0 {
            let (iso, note) = module_iso(n, &h, cutoff)?;
            if !iso {
                pass = false;
                detail = format!("cohomology at zero is not the module: {note}");
            }
        } else if !h.is_zero_module() {
            pass = false;
            detail = format!("nonzero cohomology at position {pos}");
            break;
        }
    }
    if pass {
        detail = format!(
            "cohomology concentrated at zero and isomorphic to `{}` (positions {}..={} checked)",
            n.provenance(),
            lo.max(res.certified_from),
            hi
        );
    }
    Ok(RoundtripReport { pass, detail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;
    use crate::complex::prepend_morphism;
    use crate::module::{injective, projective, simple, truncate, TruncationMode};

    fn sl2_pair() -> DualPair {
        let alg = parse_algebra(
            "vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n",
        )
        .unwrap()
        .arc();
        DualPair::new(alg)
    }

    fn a3_pair() -> DualPair {
        let alg = parse_algebra(
            "vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation a b\n",
        )
        .unwrap()
        .arc();
        DualPair::new(alg)
    }

    #[test]
    fn resolution_of_simple_sl2_frozen() {
        let pair = sl2_pair();
        let s1 = simple(&pair.primal, 0);
        let r = minimal_projective_resolution(&s1, 10, Cutoff::default()).unwrap();
        // Betti: step 0 P(1)@0, step 1 P(2)@1, step 2 P(1)@2, then stop
        let mut want = BTreeMap::new();
        want.insert((0usize, 0i64, 0usize), 1usize);
        want.insert((1, 1, 1), 1);
        want.insert((2, 2, 0), 1);
        assert_eq!(r.betti.entries, want);
        assert!(r.betti.complete);
        let fc = r.formal_complex();
        fc.check().unwrap();
        fc.check_minimal().unwrap();
        fc.check_linear().unwrap();
    }

    #[test]
    fn resolution_of_projective_is_itself() {
        let pair = sl2_pair();
        let p2 = projective(&pair.primal, 1, Cutoff::default());
        let r = minimal_projective_resolution(&p2, 5, Cutoff::default()).unwrap();
        assert_eq!(r.betti.entries.len(), 1);
        assert_eq!(r.betti.entries.get(&(0, 0, 1)), Some(&1));
        assert!(r.betti.complete);
    }

    #[test]
    fn resolution_of_arrow_ideal_frozen() {
        let pair = sl2_pair();
        let la = arrow_ideal(&pair.primal, 0, Cutoff::default());
        let r = minimal_projective_resolution(&la, 5, Cutoff::default()).unwrap();
        let mut want = BTreeMap::new();
        want.insert((0usize, 1i64, 1usize), 1usize); // P(2)<1>
        want.insert((1, 2, 0), 1); // P(1)<2>
        assert_eq!(r.betti.entries, want);
        assert!(r.betti.complete);
    }

    #[test]
    fn infinite_resolution_over_nilpotent_loop() {
        let alg = parse_algebra("vertex v\narrow l v v\nrelation l l\n")
            .unwrap()
            .arc();
        let s = simple(&alg, 0);
        let r = minimal_projective_resolution(&s, 6, Cutoff(10)).unwrap();
        // one new cover P(v)<s> at every step, forever
        for s_idx in 0..6usize {
            assert_eq!(r.betti.entries.get(&(s_idx, s_idx as i64, 0)), Some(&1));
        }
        assert!(!r.betti.complete);
    }

    #[test]
    fn syzygy_decomposition_frozen() {
        let pair = sl2_pair();
        let s1 = simple(&pair.primal, 0);
        let r = minimal_projective_resolution(&s1, 3, Cutoff::default()).unwrap();
        let omega1 = r.syzygy(1).unwrap();
        let d = syzygy_decomposition(omega1, Cutoff::default()).unwrap();
        assert_eq!(d.parts, vec![(0, 0)]); // L(alpha)<0>
        let la = arrow_ideal(&pair.primal, 0, Cutoff::default());
        let rl = minimal_projective_resolution(&la, 3, Cutoff::default()).unwrap();
        let omega1 = rl.syzygy(1).unwrap();
        let d = syzygy_decomposition(omega1, Cutoff::default()).unwrap();
        assert_eq!(d.parts, vec![(1, 1)]); // L(beta)<1>
        // projective: no syzygy
        let p1 = projective(&pair.primal, 0, Cutoff::default());
        let rp = minimal_projective_resolution(&p1, 3, Cutoff::default()).unwrap();
        let omega1 = rp.syzygy(1).unwrap();
        assert!(omega1.is_zero_module());
        let d = syzygy_decomposition(omega1, Cutoff::default()).unwrap();
        assert!(d.parts.is_empty());
    }

    #[test]
    fn coresolution_of_dual_simple_frozen() {
        let pair = sl2_pair();
        let s1d = simple(&pair.dual, 0);
        let c = minimal_injective_coresolution(&s1d, 5, Cutoff::default()).unwrap();
        let mut want = BTreeMap::new();
        want.insert((0usize, 0i64, 0usize), 1usize); // I(1)<0>
        want.insert((1, -1, 1), 1); // I(2)<-1>
        assert_eq!(c.cobetti.entries, want);
        assert!(c.cobetti.complete);
        let fc = c.formal_complex();
        fc.check().unwrap();
        fc.check_linear().unwrap();
    }

    #[test]
    fn coresolution_of_injective_is_itself() {
        let pair = sl2_pair();
        let i1 = injective(&pair.dual, 0, Cutoff::default());
        let c = minimal_injective_coresolution(&i1, 5, Cutoff::default()).unwrap();
        assert_eq!(c.cobetti.entries.len(), 1);
        assert_eq!(c.cobetti.entries.get(&(0, 0, 0)), Some(&1));
        assert!(c.cobetti.complete);
    }

    #[test]
    fn coresolution_of_coideal_matches_functor_image() {
        let pair = sl2_pair();
        let c = crate::module::arrow_coideal(&pair.dual, 0, Cutoff::default());
        let cores = minimal_injective_coresolution(&c, 5, Cutoff::default()).unwrap();
        // the coideal is already injective: I(2)<-1>
        assert_eq!(cores.cobetti.entries.len(), 1);
        assert_eq!(cores.cobetti.entries.get(&(0, -1, 1)), Some(&1));
        // functor image of the arrow ideal: same term, one position later
        let la = arrow_ideal(&pair.primal, 0, Cutoff::default());
        let (g, _) = crate::functors::cokoszul_g(&pair, &la).unwrap();
        assert_eq!(
            g.summands(1),
            cores.formal_complex().summands(0),
        );
    }

    #[test]
    fn linear_part_of_linear_resolution_is_identity() {
        let pair = sl2_pair();
        let s1 = simple(&pair.primal, 0);
        let r = minimal_projective_resolution(&s1, 5, Cutoff::default()).unwrap();
        let fc = r.formal_complex();
        let lin = linear_part(&fc).unwrap();
        assert_eq!(lin.diffs, fc.diffs);
    }

    #[test]
    fn linear_part_drops_longer_words() {
        // M = P(2)/(beta.alpha): the presentation entry has length two and
        // must become zero in the linear part
        let pair = sl2_pair();
        let p2s = projective(&pair.primal, 1, Cutoff::default()).shift(2);
        let p2 = projective(&pair.primal, 1, Cutoff::default());
        let w = PathWord {
            source: 1,
            arrows: vec![1, 0],
        };
        let f = prepend_morphism(&p2s, &p2, &w);
        let (m, _) = f.cokernel();
        let r = minimal_projective_resolution(&m, 6, Cutoff::default()).unwrap();
        let fc = r.formal_complex();
        let lin = linear_part(&fc).unwrap();
        // the step-1 differential entry beta.alpha is gone
        assert!(lin.diffs.get(&-1).is_none() || lin.diffs[&-1].is_empty());
        // and the linearity defect is exactly one
        let report = linearity_defect(&m, 8, Cutoff::default()).unwrap();
        assert_eq!(report.defect, Some(1));
    }

    #[test]
    fn linearity_defect_of_linear_modules_is_zero() {
        let pair = sl2_pair();
        for m in [
            simple(&pair.primal, 0),
            simple(&pair.primal, 1),
            arrow_ideal(&pair.primal, 0, Cutoff::default()),
            projective(&pair.primal, 0, Cutoff::default()),
        ] {
            let report = linearity_defect(&m, 8, Cutoff::default()).unwrap();
            assert_eq!(report.defect, Some(0), "module {}", m.provenance());
        }
    }

    #[test]
    fn radical_square_zero_defect_zero() {
        let alg = parse_algebra("vertex v\narrow l v v\nrelation l l\n")
            .unwrap()
            .arc();
        let s = simple(&alg, 0);
        let report = linearity_defect(&s, 10, Cutoff(14)).unwrap();
        // every certified step is exact, and the table never trips
        assert!(report.table.iter().all(|&(_, exact)| exact));
    }

    #[test]
    fn certificate_passes_on_small_algebras() {
        for pair in [sl2_pair(), a3_pair()] {
            let cert = koszul_certificate(&pair, Cutoff::default(), 50_000).unwrap();
            assert!(cert.pass, "{}", cert.render(&pair.primal));
        }
        // frozen projective dimensions for the two-vertex algebra
        let cert = koszul_certificate(&sl2_pair(), Cutoff::default(), 50_000).unwrap();
        assert_eq!(cert.projective_dims, vec![(0, Some(2)), (1, Some(1))]);
        let cert = koszul_certificate(&a3_pair(), Cutoff::default(), 50_000).unwrap();
        assert_eq!(cert.projective_dims[0], (0, Some(2)));
    }

    #[test]
    fn certificate_on_radical_square_zero_loop() {
        let alg = parse_algebra("vertex v\narrow l v v\nrelation l l\n")
            .unwrap()
            .arc();
        let pair = DualPair::new(alg);
        let cert = koszul_certificate(&pair, Cutoff(16), 20_000).unwrap();
        assert!(cert.pass, "{}", cert.render(&pair.primal));
        // infinite dual: no finite projective dimension reported
        assert_eq!(cert.projective_dims, vec![(0, None)]);
    }

    #[test]
    fn truncation_finder_on_colinear_module() {
        let pair = sl2_pair();
        let c = crate::module::arrow_coideal(&pair.dual, 0, Cutoff::default());
        let res = find_linear_truncation(&pair, &c, 6, Cutoff::default()).unwrap();
        assert!(res.pass);
        assert!(res.finite_part.is_zero_module());
        assert_eq!(res.tail.dims_table(), c.dims_table());
        assert_eq!(res.r, -1);
    }

    #[test]
    fn truncation_finder_shift_equivariance() {
        let pair = sl2_pair();
        let c = crate::module::arrow_coideal(&pair.dual, 0, Cutoff::default());
        let res0 = find_linear_truncation(&pair, &c, 6, Cutoff::default()).unwrap();
        let res3 = find_linear_truncation(&pair, &c.shift(3), 6, Cutoff::default()).unwrap();
        assert!(res3.pass);
        assert!(res3.finite_part.is_zero_module());
        assert_eq!(res3.r, res0.r + 3);
    }

    #[test]
    fn truncation_finder_on_injective_plus_simple() {
        // the whole module is already coKoszul here, so the maximal tail is
        // everything and the finite part is empty
        let pair = sl2_pair();
        let m = injective(&pair.dual, 0, Cutoff::default()).direct_sum(&simple(&pair.dual, 1));
        let res = find_linear_truncation(&pair, &m, 6, Cutoff::default()).unwrap();
        assert!(res.pass, "{:?}", res.certificate);
        assert!(res.finite_part.is_zero_module());
        assert_eq!(res.r, 0);
    }

    #[test]
    fn roundtrip_on_standard_modules() {
        let pair = sl2_pair();
        for m in [
            simple(&pair.primal, 0),
            simple(&pair.primal, 1),
            projective(&pair.primal, 0, Cutoff::default()),
            projective(&pair.primal, 1, Cutoff::default()),
            arrow_ideal(&pair.primal, 0, Cutoff::default()),
            arrow_ideal(&pair.primal, 1, Cutoff::default()),
        ] {
            let report = roundtrip_check(&pair, &m, Cutoff::default()).unwrap();
            assert!(report.pass, "{}: {}", m.provenance(), report.detail);
        }
    }

    #[test]
    fn module_iso_detects_matches_and_mismatches() {
        let pair = sl2_pair();
        let la = arrow_ideal(&pair.primal, 0, Cutoff::default());
        let s2 = simple(&pair.primal, 1).shift(1);
        // L(alpha) is one-dimensional at (2, 1), same as S(2)<1>
        let (iso, _) = module_iso(&la, &s2, Cutoff::default()).unwrap();
        assert!(iso);
        let p1 = projective(&pair.primal, 0, Cutoff::default());
        let sum = simple(&pair.primal, 0).direct_sum(&simple(&pair.primal, 1).shift(1));
        // same dims as P(1) but different action
        assert_eq!(p1.dims_table(), sum.dims_table());
        let (iso, _) = module_iso(&p1, &sum, Cutoff::default()).unwrap();
        assert!(!iso);
        let (iso, _) = module_iso(&sum, &p1, Cutoff::default()).unwrap();
        assert!(!iso);
    }

    #[test]
    fn truncation_sub_quotient_reassemble() {
        let pair = sl2_pair();
        let i1 = injective(&pair.dual, 0, Cutoff::default());
        let t = truncate(&i1, TruncationMode::Ge(-1)).unwrap();
        for (&k, &d) in &i1.dims_table() {
            assert_eq!(t.sub.dim(k.0, k.1) + t.quot.dim(k.0, k.1), d);
        }
    }
}
