//! Degree-wise graded modules over a monomial algebra, with exact linear
//! algebra for morphisms.
//!
//! A module assigns to each (degree, vertex) a based rational vector space;
//! each arrow `a: s -> t` acts by a matrix from `(d, s)` to `(d + 1, t)` —
//! arrow actions always raise the internal degree by one, on both the algebra
//! and its dual. Standard modules are based on path words; kernels,
//! cokernels and cohomology carry synthetic labels plus a provenance string.
//!
//! Modules over an infinite-dimensional algebra are carried in a finite
//! window with completeness flags; operations only assert within the window
//! both operands certify.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{MonomialAlgebra, PathWord};
use crate::error::{Error, Result};
use crate::matrix::QMat;
use crate::Scalar;

/// Whether the stored window is the whole module or a truncation of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Completeness {
    /// The module vanishes below the window.
    pub exact_below: bool,
    /// The module vanishes above the window.
    pub exact_above: bool,
}

impl Completeness {
    pub const EXACT: Completeness = Completeness {
        exact_below: true,
        exact_above: true,
    };
    pub const TRUNCATED_BELOW: Completeness = Completeness {
        exact_below: false,
        exact_above: true,
    };
    pub const TRUNCATED_ABOVE: Completeness = Completeness {
        exact_below: true,
        exact_above: false,
    };

    pub fn meet(self, other: Completeness) -> Completeness {
        Completeness {
            exact_below: self.exact_below && other.exact_below,
            exact_above: self.exact_above && other.exact_above,
        }
    }

    pub fn label(&self) -> &'static str {
        match (self.exact_below, self.exact_above) {
            (true, true) => "exact",
            (true, false) => "truncated-above",
            (false, true) => "truncated-below",
            (false, false) => "truncated",
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Space {
    labels: Vec<String>,
}

/// A locally finite graded module carried in a finite degree window.
#[derive(Debug, Clone)]
pub struct GradedModule {
    algebra: Arc<MonomialAlgebra>,
    window: (i64, i64),
    completeness: Completeness,
    spaces: BTreeMap<(i64, usize), Space>,
    /// (degree, arrow) -> matrix from (degree, source) to (degree + 1, target)
    actions: BTreeMap<(i64, usize), QMat>,
    provenance: String,
}

impl GradedModule {
    pub fn zero(algebra: Arc<MonomialAlgebra>) -> Self {
        GradedModule {
            algebra,
            window: (0, -1),
            completeness: Completeness::EXACT,
            spaces: BTreeMap::new(),
            actions: BTreeMap::new(),
            provenance: "0".into(),
        }
    }

    pub fn algebra(&self) -> &Arc<MonomialAlgebra> {
        &self.algebra
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn set_provenance(&mut self, p: impl Into<String>) {
        self.provenance = p.into();
    }

    pub fn dim(&self, degree: i64, vertex: usize) -> usize {
        self.spaces
            .get(&(degree, vertex))
            .map_or(0, |s| s.labels.len())
    }

    pub fn labels(&self, degree: i64, vertex: usize) -> &[String] {
        self.spaces
            .get(&(degree, vertex))
            .map_or(&[] as &[String], |s| &s.labels)
    }

    pub fn is_zero_module(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.labels.len()).sum()
    }

    /// All (degree, vertex) slots with nonzero dimension, ascending.
    pub fn support(&self) -> Vec<(i64, usize)> {
        self.spaces.keys().copied().collect()
    }

    pub fn dims_table(&self) -> BTreeMap<(i64, usize), usize> {
        self.spaces
            .iter()
            .map(|(&k, s)| (k, s.labels.len()))
            .collect()
    }

    /// Action matrix of `arrow` out of `degree`: from (degree, source) to
    /// (degree + 1, target). Materializes a zero matrix when absent.
    pub fn action(&self, arrow: usize, degree: i64) -> QMat {
        let a = self.algebra.quiver().arrow(arrow);
        let rows = self.dim(degree + 1, a.target);
        let cols = self.dim(degree, a.source);
        match self.actions.get(&(degree, arrow)) {
            Some(m) => m.clone(),
            None => QMat::zeros(rows, cols),
        }
    }

    /// Whether data at `degree` is certified (inside the window, or outside
    /// on a side where the module is known to vanish).
    pub fn is_certified(&self, degree: i64) -> bool {
        let (lo, hi) = self.window;
        if lo > hi {
            return true;
        }
        (degree >= lo || self.completeness.exact_below)
            && (degree <= hi || self.completeness.exact_above)
    }

    /// Largest degree range `[lo, hi]` on which both modules certify.
    pub fn common_certified(&self, other: &GradedModule) -> (i64, i64) {
        let (alo, ahi) = self.certified_range();
        let (blo, bhi) = other.certified_range();
        (alo.max(blo), ahi.min(bhi))
    }

    /// Certified degree range as a (possibly huge) interval.
    pub fn certified_range(&self) -> (i64, i64) {
        let (lo, hi) = self.window;
        if lo > hi {
            return (i64::MIN / 4, i64::MAX / 4);
        }
        (
            if self.completeness.exact_below {
                i64::MIN / 4
            } else {
                lo
            },
            if self.completeness.exact_above {
                i64::MAX / 4
            } else {
                hi
            },
        )
    }

    /// Internal: builder from raw parts; recomputes the window from support.
    pub(crate) fn from_parts(
        algebra: Arc<MonomialAlgebra>,
        spaces: BTreeMap<(i64, usize), Vec<String>>,
        actions: BTreeMap<(i64, usize), QMat>,
        completeness: Completeness,
        provenance: String,
    ) -> Self {
        let spaces: BTreeMap<(i64, usize), Space> = spaces
            .into_iter()
            .filter(|(_, l)| !l.is_empty())
            .map(|(k, labels)| (k, Space { labels }))
            .collect();
        let window = window_of(&spaces);
        let actions = actions
            .into_iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0 && !m.is_zero())
            .collect();
        GradedModule {
            algebra,
            window,
            completeness,
            spaces,
            actions,
            provenance,
        }
    }

    /// Force the completeness flags (used when a construction truncates).
    pub(crate) fn with_completeness(mut self, c: Completeness) -> Self {
        self.completeness = c;
        self
    }

    /// Restrict data to a degree window, marking the cut sides as truncated
    /// unless the module already vanished there.
    pub fn restricted_to(&self, lo: i64, hi: i64) -> GradedModule {
        let spaces: BTreeMap<(i64, usize), Vec<String>> = self
            .spaces
            .iter()
            .filter(|(&(d, _), _)| d >= lo && d <= hi)
            .map(|(&k, s)| (k, s.labels.clone()))
            .collect();
        let actions: BTreeMap<(i64, usize), QMat> = self
            .actions
            .iter()
            .filter(|(&(d, _), _)| d >= lo && d + 1 <= hi)
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        let completeness = Completeness {
            exact_below: self.completeness.exact_below && self.window.0 >= lo,
            exact_above: self.completeness.exact_above && self.window.1 <= hi,
        };
        GradedModule::from_parts(
            Arc::clone(&self.algebra),
            spaces,
            actions,
            completeness,
            self.provenance.clone(),
        )
    }

    /// Structural invariants: shapes match, relation composites vanish.
    pub fn validate(&self) -> Result<()> {
        let alg = &self.algebra;
        for (&(d, a), m) in &self.actions {
            let arr = alg.quiver().arrow(a);
            if m.cols() != self.dim(d, arr.source) || m.rows() != self.dim(d + 1, arr.target) {
                return Err(Error::Invalid(format!(
                    "action shape mismatch for arrow {} at degree {d}",
                    arr.name
                )));
            }
        }
        for &(a, b) in alg.relations() {
            let (lo, hi) = self.window;
            for d in lo..=hi {
                let first = self.action(a, d);
                if first.is_zero() {
                    continue;
                }
                let second = self.action(b, d + 1);
                if !second.mul(&first).is_zero() {
                    return Err(Error::Invalid(format!(
                        "relation ({}, {}) acts nonzero at degree {d} on {}",
                        alg.quiver().arrow(a).name,
                        alg.quiver().arrow(b).name,
                        self.provenance
                    )));
                }
            }
        }
        Ok(())
    }

    /// Grading shift: `(M<i>)_n = M_(n-i)`; data moves up by `i`.
    pub fn shift(&self, i: i64) -> GradedModule {
        let spaces = self
            .spaces
            .iter()
            .map(|(&(d, v), s)| ((d + i, v), s.clone()))
            .collect();
        let actions = self
            .actions
            .iter()
            .map(|(&(d, a), m)| ((d + i, a), m.clone()))
            .collect();
        GradedModule {
            algebra: Arc::clone(&self.algebra),
            window: if self.window.0 <= self.window.1 {
                (self.window.0 + i, self.window.1 + i)
            } else {
                self.window
            },
            completeness: self.completeness,
            spaces,
            actions,
            provenance: if i == 0 {
                self.provenance.clone()
            } else {
                format!("shift({},{})", self.provenance, i)
            },
        }
    }

    /// Direct sum with block-diagonal actions.
    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        assert!(
            Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra,
            "direct sum over different algebras"
        );
        let mut spaces: BTreeMap<(i64, usize), Vec<String>> = BTreeMap::new();
        for (&k, s) in &self.spaces {
            spaces.entry(k).or_default().extend(s.labels.clone());
        }
        for (&k, s) in &other.spaces {
            spaces
                .entry(k)
                .or_default()
                .extend(s.labels.iter().map(|l| format!("{l}'")));
        }
        let mut actions = BTreeMap::new();
        let alg = &self.algebra;
        let keys: std::collections::BTreeSet<(i64, usize)> = self
            .actions
            .keys()
            .chain(other.actions.keys())
            .copied()
            .collect();
        for (d, a) in keys {
            let arr = alg.quiver().arrow(a);
            let (s1, s2) = (self.dim(d, arr.source), other.dim(d, arr.source));
            let (t1, t2) = (self.dim(d + 1, arr.target), other.dim(d + 1, arr.target));
            let m1 = self.action(a, d);
            let m2 = other.action(a, d);
            let mut m = QMat::zeros(t1 + t2, s1 + s2);
            for i in 0..t1 {
                for j in 0..s1 {
                    m[(i, j)] = m1[(i, j)].clone();
                }
            }
            for i in 0..t2 {
                for j in 0..s2 {
                    m[(t1 + i, s1 + j)] = m2[(i, j)].clone();
                }
            }
            actions.insert((d, a), m);
        }
        GradedModule::from_parts(
            Arc::clone(&self.algebra),
            spaces,
            actions,
            self.completeness.meet(other.completeness),
            format!("sum({},{})", self.provenance, other.provenance),
        )
    }

    /// Graded dimension data of `M / rad M`: degree-wise cokernel of the sum
    /// of all incoming arrow actions. Per slot, returns the coordinate
    /// indices of the canonical complement of the radical (generator lifts).
    pub fn top(&self) -> BTreeMap<(i64, usize), Vec<usize>> {
        let mut out = BTreeMap::new();
        for (&(d, v), s) in &self.spaces {
            let dim = s.labels.len();
            let mut incoming = QMat::zeros(dim, 0);
            for (a_idx, arr) in self.algebra.quiver().arrows().iter().enumerate() {
                if arr.target != v {
                    continue;
                }
                let m = self.action(a_idx, d - 1);
                if m.cols() > 0 {
                    incoming = incoming.hstack(&m);
                }
            }
            let (_, pivot_rows) = incoming.column_space();
            let complement: Vec<usize> = (0..dim).filter(|i| !pivot_rows.contains(i)).collect();
            if !complement.is_empty() {
                out.insert((d, v), complement);
            }
        }
        out
    }

    /// Socle data: degree-wise joint kernel of all outgoing arrow actions,
    /// as a canonical basis per slot.
    pub fn socle(&self) -> BTreeMap<(i64, usize), QMat> {
        let mut out = BTreeMap::new();
        for (&(d, v), s) in &self.spaces {
            let dim = s.labels.len();
            let mut outgoing = QMat::zeros(0, dim);
            for (a_idx, arr) in self.algebra.quiver().arrows().iter().enumerate() {
                if arr.source != v {
                    continue;
                }
                let m = self.action(a_idx, d);
                if m.rows() > 0 {
                    outgoing = stack_vertical(&outgoing, &m);
                }
            }
            let k = outgoing.kernel_basis();
            if k.cols() > 0 {
                out.insert((d, v), k);
            }
        }
        out
    }

    /// Per-vertex graded dimensions for |degree| <= bound.
    pub fn hilbert_truncated(&self, bound: i64) -> Result<BTreeMap<(i64, usize), usize>> {
        for d in -bound..=bound {
            if !self.is_certified(d) {
                return Err(Error::Window(format!(
                    "module `{}` is only certified on [{}, {}] ({}), degree {d} requested",
                    self.provenance,
                    self.window.0,
                    self.window.1,
                    self.completeness.label()
                )));
            }
        }
        Ok(self
            .dims_table()
            .into_iter()
            .filter(|&((d, _), _)| d.abs() <= bound)
            .collect())
    }
}

fn window_of(spaces: &BTreeMap<(i64, usize), Space>) -> (i64, i64) {
    let lo = spaces.keys().map(|&(d, _)| d).min();
    let hi = spaces.keys().map(|&(d, _)| d).max();
    match (lo, hi) {
        (Some(l), Some(h)) => (l, h),
        _ => (0, -1),
    }
}

pub(crate) fn stack_vertical(a: &QMat, b: &QMat) -> QMat {
    assert_eq!(a.cols(), b.cols());
    QMat::from_fn(a.rows() + b.rows(), a.cols(), |i, j| {
        if i < a.rows() {
            a[(i, j)].clone()
        } else {
            b[(i - a.rows(), j)].clone()
        }
    })
}

// ---------------------------------------------------------------------------
// standard modules
// ---------------------------------------------------------------------------

/// Degree cutoff for modules over an infinite-dimensional algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff(pub i64);

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff(24)
    }
}

/// The simple module at a vertex: one-dimensional in degree zero.
pub fn simple(alg: &Arc<MonomialAlgebra>, v: usize) -> GradedModule {
    let mut spaces = BTreeMap::new();
    spaces.insert((0, v), vec![format!("e({})", alg.quiver().vertex_name(v))]);
    GradedModule::from_parts(
        Arc::clone(alg),
        spaces,
        BTreeMap::new(),
        Completeness::EXACT,
        format!("S({})", alg.quiver().vertex_name(v)),
    )
}

/// Words from `x`, graded by length; the action of an arrow appends it.
pub fn projective(alg: &Arc<MonomialAlgebra>, x: usize, cutoff: Cutoff) -> GradedModule {
    let (fin, max_len, _) = alg.is_finite_dimensional();
    let hi = if fin {
        max_len.unwrap() as i64
    } else {
        cutoff.0.max(0)
    };
    let basis: Vec<Vec<PathWord>> = (0..=hi as usize).map(|n| alg.words_from(x, n)).collect();
    let module = module_from_words(
        alg,
        &basis,
        |n| n as i64,
        |w, alg| w.target(alg),
        WordAction::Append,
        format!("P({})", alg.quiver().vertex_name(x)),
    );
    module.with_completeness(if fin {
        Completeness::EXACT
    } else {
        Completeness::TRUNCATED_ABOVE
    })
}

/// Words into `x`, a length-`m` word in degree `-m`; the action of an arrow
/// deletes it from the front of words beginning with it.
pub fn injective(alg: &Arc<MonomialAlgebra>, x: usize, cutoff: Cutoff) -> GradedModule {
    let (fin, max_len, _) = alg.is_finite_dimensional();
    let depth = if fin {
        max_len.unwrap()
    } else {
        cutoff.0.max(0) as usize
    };
    let basis: Vec<Vec<PathWord>> = (0..=depth).map(|n| alg.words_into(x, n)).collect();
    let module = module_from_words(
        alg,
        &basis,
        |n| -(n as i64),
        |w, _| w.source,
        WordAction::DeleteFront,
        format!("I({})", alg.quiver().vertex_name(x)),
    );
    module.with_completeness(if fin {
        Completeness::EXACT
    } else {
        Completeness::TRUNCATED_BELOW
    })
}

/// The arrow ideal: words whose first arrow is `a`, inside `P(source(a))`.
pub fn arrow_ideal(alg: &Arc<MonomialAlgebra>, a: usize, cutoff: Cutoff) -> GradedModule {
    let (fin, max_len, _) = alg.is_finite_dimensional();
    let hi = if fin {
        max_len.unwrap() as i64
    } else {
        cutoff.0.max(0)
    };
    let x = alg.quiver().arrow(a).source;
    let basis: Vec<Vec<PathWord>> = (0..=hi as usize)
        .map(|n| {
            alg.words_from(x, n)
                .into_iter()
                .filter(|w| w.arrows.first() == Some(&a))
                .collect()
        })
        .collect();
    let module = module_from_words(
        alg,
        &basis,
        |n| n as i64,
        |w, alg| w.target(alg),
        WordAction::Append,
        format!("L({})", alg.quiver().arrow(a).name),
    );
    module.with_completeness(if fin {
        Completeness::EXACT
    } else {
        Completeness::TRUNCATED_ABOVE
    })
}

/// The arrow coideal: words whose last arrow is `a`, in degrees `<= -1`.
/// Front deletion sends the length-one word out of the span, so this is the
/// evident quotient of `I(target(a))` rather than a submodule of it.
pub fn arrow_coideal(alg: &Arc<MonomialAlgebra>, a: usize, cutoff: Cutoff) -> GradedModule {
    let (fin, max_len, _) = alg.is_finite_dimensional();
    let depth = if fin {
        max_len.unwrap()
    } else {
        cutoff.0.max(0) as usize
    };
    let y = alg.quiver().arrow(a).target;
    let basis: Vec<Vec<PathWord>> = (0..=depth)
        .map(|n| {
            alg.words_into(y, n)
                .into_iter()
                .filter(|w| w.arrows.last() == Some(&a))
                .collect()
        })
        .collect();
    let module = module_from_words(
        alg,
        &basis,
        |n| -(n as i64),
        |w, _| w.source,
        WordAction::DeleteFront,
        format!("C({})", alg.quiver().arrow(a).name),
    );
    module.with_completeness(if fin {
        Completeness::EXACT
    } else {
        Completeness::TRUNCATED_BELOW
    })
}

enum WordAction {
    Append,
    DeleteFront,
}

/// Build a module whose basis at each slot is a set of path words.
/// `basis[n]` lists the words of length `n`; `degree_of(n)` places them; the
/// action either appends the acting arrow or deletes it from the front.
/// Results outside the listed basis act as zero.
fn module_from_words(
    alg: &Arc<MonomialAlgebra>,
    basis: &[Vec<PathWord>],
    degree_of: impl Fn(usize) -> i64,
    vertex_of: impl Fn(&PathWord, &MonomialAlgebra) -> usize,
    action: WordAction,
    provenance: String,
) -> GradedModule {
    let mut slot_words: BTreeMap<(i64, usize), Vec<PathWord>> = BTreeMap::new();
    for (n, words) in basis.iter().enumerate() {
        for w in words {
            let key = (degree_of(n), vertex_of(w, alg));
            slot_words.entry(key).or_default().push(w.clone());
        }
    }
    for words in slot_words.values_mut() {
        words.sort();
    }
    let index_of = |key: (i64, usize), w: &PathWord| -> Option<usize> {
        slot_words.get(&key).and_then(|v| v.binary_search(w).ok())
    };
    let mut actions: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
    for (&(d, v), words) in &slot_words {
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            if arr.source != v {
                continue;
            }
            let tgt_key = (d + 1, arr.target);
            let rows = slot_words.get(&tgt_key).map_or(0, |w| w.len());
            if rows == 0 {
                continue;
            }
            let mut m = QMat::zeros(rows, words.len());
            for (j, w) in words.iter().enumerate() {
                let image: Option<PathWord> = match action {
                    WordAction::Append => alg.multiply_words(w, &PathWord::single(alg, a_idx)),
                    WordAction::DeleteFront => {
                        if w.arrows.first() == Some(&a_idx) {
                            Some(PathWord {
                                source: arr.target,
                                arrows: w.arrows[1..].to_vec(),
                            })
                        } else {
                            None
                        }
                    }
                };
                if let Some(img) = image {
                    if let Some(i) = index_of(tgt_key, &img) {
                        m[(i, j)] = num_traits::One::one();
                    }
                }
            }
            if !m.is_zero() {
                actions.insert((d, a_idx), m);
            }
        }
    }
    let spaces: BTreeMap<(i64, usize), Vec<String>> = slot_words
        .iter()
        .map(|(&k, words)| (k, words.iter().map(|w| w.display(alg)).collect()))
        .collect();
    GradedModule::from_parts(
        Arc::clone(alg),
        spaces,
        actions,
        Completeness::EXACT,
        provenance,
    )
}

// ---------------------------------------------------------------------------
// morphisms
// ---------------------------------------------------------------------------

/// A degree-preserving morphism given by per-(degree, vertex) blocks
/// (target dimension x source dimension).
#[derive(Debug, Clone)]
pub struct GradedMorphism {
    pub source: GradedModule,
    pub target: GradedModule,
    blocks: BTreeMap<(i64, usize), QMat>,
}

impl GradedMorphism {
    pub fn new(
        source: GradedModule,
        target: GradedModule,
        blocks: BTreeMap<(i64, usize), QMat>,
    ) -> Self {
        let blocks = blocks
            .into_iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .collect();
        GradedMorphism {
            source,
            target,
            blocks,
        }
    }

    pub fn zero(source: GradedModule, target: GradedModule) -> Self {
        GradedMorphism::new(source, target, BTreeMap::new())
    }

    pub fn identity(m: &GradedModule) -> Self {
        let blocks = m
            .support()
            .into_iter()
            .map(|k| (k, QMat::identity(m.dim(k.0, k.1))))
            .collect();
        GradedMorphism::new(m.clone(), m.clone(), blocks)
    }

    pub fn block(&self, degree: i64, vertex: usize) -> QMat {
        match self.blocks.get(&(degree, vertex)) {
            Some(m) => m.clone(),
            None => QMat::zeros(
                self.target.dim(degree, vertex),
                self.source.dim(degree, vertex),
            ),
        }
    }

    pub fn blocks(&self) -> &BTreeMap<(i64, usize), QMat> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> GradedMorphism {
        let blocks = self
            .blocks
            .iter()
            .map(|(&k, m)| (k, m.scale(c)))
            .collect();
        GradedMorphism::new(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &GradedMorphism) -> GradedMorphism {
        let keys: std::collections::BTreeSet<(i64, usize)> = self
            .blocks
            .keys()
            .chain(other.blocks.keys())
            .copied()
            .collect();
        let blocks = keys
            .into_iter()
            .map(|k| (k, self.block(k.0, k.1).add(&other.block(k.0, k.1))))
            .collect();
        GradedMorphism::new(self.source.clone(), self.target.clone(), blocks)
    }

    /// Degree range on which both endpoints certify their data.
    pub fn certified(&self) -> (i64, i64) {
        self.source.common_certified(&self.target)
    }

    /// Validates shapes and action-commutation on the certified range.
    pub fn validate(&self) -> Result<()> {
        for (&(d, v), m) in &self.blocks {
            if m.cols() != self.source.dim(d, v) || m.rows() != self.target.dim(d, v) {
                return Err(Error::Invalid(format!(
                    "morphism block shape mismatch at degree {d}, vertex {}",
                    self.source.algebra.quiver().vertex_name(v)
                )));
            }
        }
        let (lo, hi) = self.certified();
        let alg = self.source.algebra();
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            for &(d, v) in self.source.spaces.keys() {
                if v != arr.source || d < lo || d + 1 > hi {
                    continue;
                }
                let lhs = self
                    .block(d + 1, arr.target)
                    .mul(&self.source.action(a_idx, d));
                let rhs = self.target.action(a_idx, d).mul(&self.block(d, v));
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "morphism does not commute with arrow {} at degree {d}",
                        arr.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Composition `then . self` (self first).
    pub fn compose(&self, then: &GradedMorphism) -> GradedMorphism {
        let mut blocks = BTreeMap::new();
        for &(d, v) in self.source.spaces.keys() {
            let m = then.block(d, v).mul(&self.block(d, v));
            if m.rows() > 0 && m.cols() > 0 {
                blocks.insert((d, v), m);
            }
        }
        GradedMorphism::new(self.source.clone(), then.target.clone(), blocks)
    }

    /// Degree-wise kernel with its inclusion. Inherits the source's
    /// completeness: outside the window the kernel vanishes where the source
    /// does.
    pub fn kernel(&self) -> (GradedModule, GradedMorphism) {
        let mut spaces = BTreeMap::new();
        let mut bases: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
        for &(d, v) in self.source.spaces.keys() {
            let k = self.block(d, v).kernel_basis();
            if k.cols() > 0 {
                let prov = self.source.provenance();
                spaces.insert(
                    (d, v),
                    (0..k.cols())
                        .map(|i| format!("ker({prov}):{i}"))
                        .collect::<Vec<_>>(),
                );
                bases.insert((d, v), k);
            }
        }
        submodule(
            &self.source,
            spaces,
            bases,
            format!("ker({})", self.source.provenance()),
        )
    }

    /// Degree-wise image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> (GradedModule, GradedMorphism) {
        let mut spaces = BTreeMap::new();
        let mut bases = BTreeMap::new();
        for (&(d, v), m) in &self.blocks {
            let (basis, _) = m.column_space();
            if basis.cols() > 0 {
                spaces.insert(
                    (d, v),
                    (0..basis.cols())
                        .map(|i| format!("im({}):{i}", self.source.provenance()))
                        .collect::<Vec<_>>(),
                );
                bases.insert((d, v), basis);
            }
        }
        let completeness = self.source.completeness().meet(self.target.completeness());
        let (module, incl) = submodule(
            &self.target,
            spaces,
            bases,
            format!("im({})", self.source.provenance()),
        );
        let module = module.with_completeness(completeness);
        let incl = GradedMorphism::new(module.clone(), incl.target, incl.blocks);
        (module, incl)
    }

    /// Degree-wise cokernel with the projection from the target. The basis
    /// is the canonical coordinate complement of the image.
    pub fn cokernel(&self) -> (GradedModule, GradedMorphism) {
        let image: BTreeMap<(i64, usize), QMat> = self
            .blocks
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&k, m)| (k, m.clone()))
            .collect();
        quotient_by_image(&self.target, &image)
    }
}

/// Builds the submodule of `ambient` spanned degree-wise by the given basis
/// columns; induced actions are found by exact solving (the span must be
/// action-closed, which holds for kernels and images of morphisms).
pub fn submodule(
    ambient: &GradedModule,
    spaces: BTreeMap<(i64, usize), Vec<String>>,
    bases: BTreeMap<(i64, usize), QMat>,
    provenance: String,
) -> (GradedModule, GradedMorphism) {
    let alg = ambient.algebra();
    let mut actions = BTreeMap::new();
    for (&(d, v), basis) in &bases {
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            if arr.source != v {
                continue;
            }
            let mapped = ambient.action(a_idx, d).mul(basis);
            if mapped.is_zero() {
                continue;
            }
            let tgt_basis = match bases.get(&(d + 1, arr.target)) {
                Some(b) => b.clone(),
                None => QMat::zeros(mapped.rows(), 0),
            };
            let x = tgt_basis.solve(&mapped).unwrap_or_else(|| {
                panic!(
                    "span is not action-closed under arrow {} at degree {d} (module {})",
                    arr.name, provenance
                )
            });
            actions.insert((d, a_idx), x);
        }
    }
    let module = GradedModule::from_parts(
        Arc::clone(alg),
        spaces,
        actions,
        ambient.completeness(),
        provenance,
    );
    let incl = GradedMorphism::new(module.clone(), ambient.clone(), bases);
    (module, incl)
}

/// Quotient of `ambient` by the degree-wise span of `image`; returns the
/// quotient and the projection. The quotient basis at each slot consists of
/// the ambient coordinates away from the span's pivot rows.
pub fn quotient_by_image(
    ambient: &GradedModule,
    image: &BTreeMap<(i64, usize), QMat>,
) -> (GradedModule, GradedMorphism) {
    let alg = ambient.algebra();
    let mut spaces: BTreeMap<(i64, usize), Vec<String>> = BTreeMap::new();
    let mut projs: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
    let mut sections: BTreeMap<(i64, usize), QMat> = BTreeMap::new();
    for &(d, v) in ambient.spaces.keys() {
        let dim = ambient.dim(d, v);
        let (img_basis, pivot_rows) = match image.get(&(d, v)) {
            Some(m) => m.column_space(),
            None => (QMat::zeros(dim, 0), Vec::new()),
        };
        let complement: Vec<usize> = (0..dim).filter(|i| !pivot_rows.contains(i)).collect();
        if complement.is_empty() {
            continue;
        }
        let e = QMat::from_fn(dim, complement.len(), |i, j| {
            if i == complement[j] {
                num_traits::One::one()
            } else {
                num_traits::Zero::zero()
            }
        });
        let change = img_basis.hstack(&e);
        let inv = change
            .solve(&QMat::identity(dim))
            .expect("image basis plus coordinate complement must be invertible");
        let proj = QMat::from_fn(complement.len(), dim, |i, j| {
            inv[(img_basis.cols() + i, j)].clone()
        });
        let labels = complement
            .iter()
            .map(|&i| format!("{}~", ambient.labels(d, v)[i]))
            .collect();
        spaces.insert((d, v), labels);
        projs.insert((d, v), proj);
        sections.insert((d, v), e);
    }
    let mut actions = BTreeMap::new();
    for (&(d, v), section) in &sections {
        for (a_idx, arr) in alg.quiver().arrows().iter().enumerate() {
            if arr.source != v {
                continue;
            }
            let Some(proj_next) = projs.get(&(d + 1, arr.target)) else {
                continue;
            };
            let m = proj_next.mul(&ambient.action(a_idx, d)).mul(section);
            if !m.is_zero() {
                actions.insert((d, a_idx), m);
            }
        }
    }
    let module = GradedModule::from_parts(
        Arc::clone(alg),
        spaces,
        actions,
        ambient.completeness(),
        format!("coker(into {})", ambient.provenance()),
    );
    let proj = GradedMorphism::new(ambient.clone(), module.clone(), projs);
    (module, proj)
}

// ---------------------------------------------------------------------------
// truncation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    /// Cut keeping degrees `<= r` in the quotient part.
    Le(i64),
    /// Cut keeping degrees `>= r` in the submodule part.
    Ge(i64),
}

/// The two halves of a truncation, fitting `0 -> sub -> M -> quot -> 0`.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub sub: GradedModule,
    pub quot: GradedModule,
    pub inclusion: GradedMorphism,
    pub projection: GradedMorphism,
}

/// Splits `M` at a degree. Arrow actions raise the degree, so the upper part
/// is always the action-closed submodule and the lower part the quotient;
/// the mode only places the cut. Closure of the upper part is verified and a
/// violation reported, never patched.
pub fn truncate(m: &GradedModule, mode: TruncationMode) -> Result<Truncation> {
    let cut = match mode {
        TruncationMode::Le(r) => r,
        TruncationMode::Ge(r) => r - 1,
    };
    let mut up_spaces = BTreeMap::new();
    let mut up_actions = BTreeMap::new();
    let mut lo_spaces = BTreeMap::new();
    let mut lo_actions = BTreeMap::new();
    for (&(d, v), s) in &m.spaces {
        if d > cut {
            up_spaces.insert((d, v), s.labels.clone());
        } else {
            lo_spaces.insert((d, v), s.labels.clone());
        }
    }
    for (&(d, a), mat) in &m.actions {
        if d > cut {
            up_actions.insert((d, a), mat.clone());
        } else if d + 1 <= cut {
            lo_actions.insert((d, a), mat.clone());
        }
        // the boundary action (cut -> cut + 1) exists in M only; it is
        // killed in the quotient and does not restrict to the submodule
    }
    let sub = GradedModule::from_parts(
        Arc::clone(&m.algebra),
        up_spaces,
        up_actions,
        Completeness {
            exact_below: true,
            exact_above: m.completeness.exact_above,
        },
        format!("truncgt({},{})", m.provenance, cut),
    );
    let quot = GradedModule::from_parts(
        Arc::clone(&m.algebra),
        lo_spaces,
        lo_actions,
        Completeness {
            exact_below: m.completeness.exact_below,
            exact_above: true,
        },
        format!("truncle({},{})", m.provenance, cut),
    );
    let incl_blocks: BTreeMap<(i64, usize), QMat> = sub
        .support()
        .into_iter()
        .map(|(d, v)| ((d, v), QMat::identity(sub.dim(d, v))))
        .collect();
    let proj_blocks: BTreeMap<(i64, usize), QMat> = quot
        .support()
        .into_iter()
        .map(|(d, v)| ((d, v), QMat::identity(quot.dim(d, v))))
        .collect();
    let inclusion = GradedMorphism::new(sub.clone(), m.clone(), incl_blocks);
    let projection = GradedMorphism::new(m.clone(), quot.clone(), proj_blocks);
    inclusion
        .validate()
        .map_err(|e| Error::Orientation(format!("upper truncation part is not action-closed: {e}")))?;
    Ok(Truncation {
        sub,
        quot,
        inclusion,
        projection,
    })
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "module {} on [{}, {}] ({})",
            self.provenance,
            self.window.0,
            self.window.1,
            self.completeness.label()
        )?;
        for (&(d, v), s) in &self.spaces {
            writeln!(
                f,
                "  ({}, {}): dim {} [{}]",
                d,
                self.algebra.quiver().vertex_name(v),
                s.labels.len(),
                s.labels.join(", ")
            )?;
        }
        Ok(())
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

    fn sl2_dual() -> Arc<MonomialAlgebra> {
        sl2().koszul_dual().arc()
    }

    #[test]
    fn projective_sl2_frozen_dims() {
        let alg = sl2();
        let p1 = projective(&alg, 0, Cutoff::default());
        // P(1): e1 in degree 0 at vertex 1, alpha in degree 1 at vertex 2
        assert_eq!(p1.dim(0, 0), 1);
        assert_eq!(p1.dim(1, 1), 1);
        assert_eq!(p1.total_dim(), 2);
        let p2 = projective(&alg, 1, Cutoff::default());
        // P(2): e2, beta, beta.alpha
        assert_eq!(p2.total_dim(), 3);
        assert_eq!(p2.dim(2, 1), 1);
        p1.validate().unwrap();
        p2.validate().unwrap();
    }

    #[test]
    fn injective_dual_frozen_dims() {
        let dual = sl2_dual();
        let i1 = injective(&dual, 0, Cutoff::default());
        // I!(1): e1 at (1, 0); alpha_op at (2, -1); beta_op.alpha_op at (1, -2)
        assert_eq!(i1.dim(0, 0), 1);
        assert_eq!(i1.dim(-1, 1), 1);
        assert_eq!(i1.dim(-2, 0), 1);
        assert_eq!(i1.total_dim(), 3);
        i1.validate().unwrap();
    }

    #[test]
    fn arrow_ideal_sl2_frozen() {
        let alg = sl2();
        let la = arrow_ideal(&alg, 0, Cutoff::default());
        // L(alpha) = span{alpha} at (degree 1, vertex 2); all actions zero
        assert_eq!(la.total_dim(), 1);
        assert_eq!(la.dim(1, 1), 1);
        assert!(la.actions.is_empty());
        let lb = arrow_ideal(&alg, 1, Cutoff::default());
        // L(beta) = {beta, beta.alpha}
        assert_eq!(lb.total_dim(), 2);
    }

    #[test]
    fn arrow_coideal_dual_frozen() {
        let dual = sl2_dual();
        // C(alpha_op) in I!(1): [alpha_op]@(2,-1), [beta_op.alpha_op]@(1,-2)
        let c = arrow_coideal(&dual, 0, Cutoff::default());
        assert_eq!(c.total_dim(), 2);
        assert_eq!(c.dim(-1, 1), 1);
        assert_eq!(c.dim(-2, 0), 1);
        // beta_op action sends the degree -2 word to the degree -1 word
        let act = c.action(1, -2);
        assert_eq!((act.rows(), act.cols()), (1, 1));
        assert!(!act.is_zero());
        // the escape case: alpha_op deletes the whole word, acting as zero
        assert!(c.action(0, -1).is_zero());
        c.validate().unwrap();
    }

    #[test]
    fn shift_and_inverse() {
        let alg = sl2();
        let s2 = simple(&alg, 1);
        let sh = s2.shift(1);
        assert_eq!(sh.dim(1, 1), 1);
        assert_eq!(sh.dim(0, 1), 0);
        let back = sh.shift(-1);
        assert_eq!(back.dims_table(), s2.dims_table());
        let p = projective(&alg, 1, Cutoff::default());
        assert_eq!(p.shift(0).dims_table(), p.dims_table());
    }

    #[test]
    fn kernel_of_prepend_alpha_is_shifted_arrow_ideal() {
        // ker(P(2)<1> -> P(1), classified by alpha) = {beta, beta.alpha}
        // in shifted degrees 2 and 3, i.e. L(beta)<1>.
        let alg = sl2();
        let p2s = projective(&alg, 1, Cutoff::default()).shift(1);
        let p1 = projective(&alg, 0, Cutoff::default());
        let f = crate::complex::prepend_morphism(&p2s, &p1, &PathWord::single(&alg, 0));
        f.validate().unwrap();
        let (k, incl) = f.kernel();
        assert_eq!(k.dim(2, 0), 1);
        assert_eq!(k.dim(3, 1), 1);
        assert_eq!(k.total_dim(), 2);
        incl.validate().unwrap();
        let lb1 = arrow_ideal(&alg, 1, Cutoff::default()).shift(1);
        assert_eq!(k.dims_table(), lb1.dims_table());
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let alg = sl2();
        let p = projective(&alg, 0, Cutoff::default());
        let id = GradedMorphism::identity(&p);
        let (k, _) = id.kernel();
        assert!(k.is_zero_module());
        let z = GradedMorphism::zero(p.clone(), simple(&alg, 0));
        let (k, _) = z.kernel();
        assert_eq!(k.dims_table(), p.dims_table());
    }

    #[test]
    fn exactness_bookkeeping_on_cokernel() {
        let alg = sl2();
        let p2s = projective(&alg, 1, Cutoff::default()).shift(1);
        let p1 = projective(&alg, 0, Cutoff::default());
        let f = crate::complex::prepend_morphism(&p2s, &p1, &PathWord::single(&alg, 0));
        let (k, _) = f.kernel();
        let (im, _) = f.image();
        let (cok, proj) = f.cokernel();
        proj.validate().unwrap();
        for (d, v) in [(0i64, 0usize), (1, 1), (2, 0), (3, 1)] {
            assert_eq!(
                k.dim(d, v) + im.dim(d, v),
                p2s.dim(d, v),
                "rank-nullity at ({d},{v})"
            );
            assert_eq!(cok.dim(d, v) + im.dim(d, v), p1.dim(d, v));
        }
        // coker = P(1)/<alpha> = S(1)
        assert_eq!(cok.total_dim(), 1);
        assert_eq!(cok.dim(0, 0), 1);
        cok.validate().unwrap();
    }

    #[test]
    fn top_and_socle_frozen() {
        let alg = sl2();
        let p1 = projective(&alg, 0, Cutoff::default());
        let top = p1.top();
        assert_eq!(top.len(), 1);
        assert_eq!(top.get(&(0, 0)).map(|v| v.len()), Some(1));
        let s = simple(&alg, 0);
        assert_eq!(s.top().len(), 1);
        assert_eq!(s.socle().len(), 1);
        let dual = sl2_dual();
        let i1 = injective(&dual, 0, Cutoff::default());
        let soc = i1.socle();
        assert_eq!(soc.len(), 1);
        assert!(soc.contains_key(&(0, 0)));
    }

    #[test]
    fn truncate_dual_injective() {
        let dual = sl2_dual();
        let i1 = injective(&dual, 0, Cutoff::default());
        let t = truncate(&i1, TruncationMode::Le(-1)).unwrap();
        // finite part: e1 at degree 0; tail: the coideal dims
        assert_eq!(t.sub.total_dim(), 1);
        assert_eq!(t.sub.dim(0, 0), 1);
        assert_eq!(t.quot.dim(-1, 1), 1);
        assert_eq!(t.quot.dim(-2, 0), 1);
        for (&k, &d) in &i1.dims_table() {
            assert_eq!(t.sub.dim(k.0, k.1) + t.quot.dim(k.0, k.1), d);
        }
        let t2 = truncate(&i1, TruncationMode::Le(5)).unwrap();
        assert!(t2.sub.is_zero_module());
        assert_eq!(t2.quot.dims_table(), i1.dims_table());
    }

    #[test]
    fn hilbert_truncated_p1() {
        let alg = sl2();
        let p1 = projective(&alg, 0, Cutoff::default());
        let h = p1.hilbert_truncated(5).unwrap();
        assert_eq!(h.get(&(0, 0)), Some(&1));
        assert_eq!(h.get(&(1, 1)), Some(&1));
        assert_eq!(h.len(), 2);
        let s = simple(&alg, 0);
        let h = s.hilbert_truncated(1).unwrap();
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn free_loop_truncation_flags() {
        let alg = parse_algebra("vertex v\narrow l v v\n").unwrap().arc();
        let p = projective(&alg, 0, Cutoff(6));
        assert_eq!(p.completeness(), Completeness::TRUNCATED_ABOVE);
        assert_eq!(p.window(), (0, 6));
        for d in 0..=6 {
            assert_eq!(p.dim(d, 0), 1);
        }
        assert!(p.hilbert_truncated(10).is_err());
        assert!(p.hilbert_truncated(6).is_ok());
    }
}
