//! The bundled example algebras and seeded random generators for algebras,
//! presented modules, copresented dual-side modules and two-term complexes.
//!
//! All randomness flows through a counter-based generator seeded
//! explicitly, so corpora and the property suite are reproducible bit for
//! bit across runs and platforms.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{parse_algebra, MonomialAlgebra, PathWord, Quiver};
use crate::complex::{
    expand_path_matrix, expand_summands, ModuleComplex, PathMatrix, PathSum, Side, Summand,
};
use crate::error::Result;
use crate::expr::ModuleExpr;
use crate::functors::DualPair;
use crate::module::Cutoff;
use crate::Scalar;

/// The algebras shipped with the tool, in canonical order.
pub fn bundled() -> Vec<(String, Arc<MonomialAlgebra>)> {
    let defs: &[(&str, &str)] = &[
        (
            "sl2_block",
            "vertex 1\nvertex 2\narrow alpha 1 2\narrow beta 2 1\nrelation alpha beta\n",
        ),
        (
            "sl2_block_dual",
            "vertex 1\nvertex 2\narrow alpha_op 2 1\narrow beta_op 1 2\nrelation alpha_op beta_op\n",
        ),
        (
            "a3_one_relation",
            "vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 2 3\nrelation a b\n",
        ),
        ("loop_nilpotent", "vertex v\narrow l v v\nrelation l l\n"),
        ("loop_free", "vertex v\narrow l v v\n"),
        (
            "rss3_cycle",
            "vertex 1\nvertex 2\nvertex 3\narrow c1 1 2\narrow c2 2 3\narrow c3 3 1\n\
             relation c1 c2\nrelation c2 c3\nrelation c3 c1\n",
        ),
    ];
    defs.iter()
        .map(|(name, text)| {
            (
                name.to_string(),
                parse_algebra(text).expect("bundled algebra parses").arc(),
            )
        })
        .collect()
}

/// Write the bundled corpus into a directory as `.alg` files.
pub fn write_bundled(dir: &std::path::Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, alg) in bundled() {
        std::fs::write(
            dir.join(format!("{name}.alg")),
            crate::algebra::serialize_algebra(&alg),
        )?;
    }
    Ok(())
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A random quadratic monomial algebra with at most the given vertices and
/// arrows. With `require_finite`, resamples until the allowed graph is
/// acyclic (denser relation sets are tried on later attempts).
pub fn random_algebra(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    max_arrows: usize,
    require_finite: bool,
) -> MonomialAlgebra {
    for attempt in 0..200 {
        let nv = rng.random_range(1..=max_vertices);
        let na = rng.random_range(1..=max_arrows);
        let vertices: Vec<String> = (1..=nv).map(|i| format!("v{i}")).collect();
        let arrows: Vec<(String, String, String)> = (1..=na)
            .map(|i| {
                let s = rng.random_range(0..nv);
                let t: usize = rng.random_range(0..nv);
                (format!("a{i}"), format!("v{}", s + 1), format!("v{}", t + 1))
            })
            .collect();
        let quiver = Quiver::new(vertices, arrows).expect("generated quiver is valid");
        // relation density grows with failed attempts so acyclicity is found
        let density = 0.45 + 0.05 * (attempt / 10) as f64;
        let mut relations = Vec::new();
        for a in 0..na {
            for b in 0..na {
                if quiver.arrow(a).target == quiver.arrow(b).source
                    && rng.random_range(0.0..1.0) < density
                {
                    relations.push((a, b));
                }
            }
        }
        let alg = MonomialAlgebra::from_indices(quiver, relations)
            .expect("generated relations are composable");
        if !require_finite || alg.is_finite_dimensional_flag() {
            return alg;
        }
    }
    // fallback: no composable pairs left to break; a quiver with one arrow
    parse_algebra("vertex v1\nvertex v2\narrow a1 v1 v2\n").expect("fallback algebra")
}

/// A corpus of small random algebras whose total dimension stays moderate,
/// suitable for module-level property tests.
pub fn random_module_corpus(
    seed: u64,
    count: usize,
    max_total_dim: usize,
) -> Vec<(String, Arc<MonomialAlgebra>)> {
    let mut rng = rng_for(seed, 1);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 10_000 {
        tries += 1;
        let alg = random_algebra(&mut rng, 6, 10, true);
        let (_, _, dim) = alg.is_finite_dimensional();
        let small = dim
            .map(|d| d <= max_total_dim.into())
            .unwrap_or(false);
        if small {
            out.push((format!("random{}", out.len() + 1), alg.arc()));
        }
    }
    out
}

/// A random presented module: a `coker` expression with one to three target
/// summands and inferable columns.
pub fn random_coker_expr(rng: &mut ChaCha8Rng, alg: &MonomialAlgebra) -> ModuleExpr {
    let nv = alg.quiver().vertex_count();
    let n_targets = rng.random_range(1..=3usize);
    let targets: Vec<(String, i64)> = (0..n_targets)
        .map(|_| {
            let v = rng.random_range(0..nv);
            let shift = rng.random_range(0..=2i64);
            (alg.quiver().vertex_name(v).to_string(), shift)
        })
        .collect();
    let target_idx: Vec<(usize, i64)> = targets
        .iter()
        .map(|(name, s)| (alg.quiver().vertex_index(name).unwrap(), *s))
        .collect();
    let n_cols = rng.random_range(1..=3usize);
    let mut rows: Vec<Vec<Option<(Scalar, crate::expr::WordExpr)>>> =
        vec![vec![None; n_cols]; n_targets];
    for col in 0..n_cols {
        // anchor entry: a word from a random target row
        let mut placed = None;
        for _ in 0..20 {
            let row = rng.random_range(0..n_targets);
            let (v, shift) = target_idx[row];
            let len = rng.random_range(1..=2usize);
            let words = alg.words_from(v, len);
            if words.is_empty() {
                continue;
            }
            let w = words[rng.random_range(0..words.len())].clone();
            let scalar = random_scalar(rng);
            rows[row][col] = Some((scalar, word_expr(alg, &w)));
            placed = Some((w.target(alg), shift + len as i64));
            break;
        }
        let Some((src_vertex, src_shift)) = placed else {
            continue;
        };
        // optional extra entries in the same column, endpoint-compatible
        for (row, &(v, shift)) in target_idx.iter().enumerate() {
            if rows[row][col].is_some() || rng.random_range(0..4u8) != 0 {
                continue;
            }
            let need_len = src_shift - shift;
            if !(1..=3).contains(&need_len) {
                continue;
            }
            let words: Vec<PathWord> = alg
                .words_from(v, need_len as usize)
                .into_iter()
                .filter(|w| w.target(alg) == src_vertex)
                .collect();
            if words.is_empty() {
                continue;
            }
            let w = words[rng.random_range(0..words.len())].clone();
            rows[row][col] = Some((random_scalar(rng), word_expr(alg, &w)));
        }
    }
    // drop columns that stayed empty
    let live: Vec<usize> = (0..n_cols)
        .filter(|&c| rows.iter().any(|r| r[c].is_some()))
        .collect();
    let rows = rows
        .into_iter()
        .map(|r| {
            live.iter()
                .map(|&c| r[c].clone())
                .collect::<Vec<_>>()
        })
        .collect();
    ModuleExpr::Coker { targets, rows }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let n = rng.random_range(1..=3i64);
    let sign = if rng.random_range(0..2u8) == 0 { 1 } else { -1 };
    if rng.random_range(0..4u8) == 0 {
        Scalar::new((sign * n).into(), 2.into())
    } else {
        Scalar::from_integer((sign * n).into())
    }
}

fn word_expr(alg: &MonomialAlgebra, w: &PathWord) -> crate::expr::WordExpr {
    if w.is_trivial() {
        crate::expr::WordExpr::Trivial(alg.quiver().vertex_name(w.source).to_string())
    } else {
        crate::expr::WordExpr::Arrows(
            w.arrows
                .iter()
                .map(|&a| alg.quiver().arrow(a).name.clone())
                .collect(),
        )
    }
}

/// A random finitely copresented module expression over the dual algebra:
/// sums and shifts of injectives, coideals and their lower truncations.
pub fn random_copresented_expr(rng: &mut ChaCha8Rng, dual: &MonomialAlgebra) -> ModuleExpr {
    let nv = dual.quiver().vertex_count();
    let na = dual.quiver().arrow_count();
    let leaf = |rng: &mut ChaCha8Rng| -> ModuleExpr {
        match rng.random_range(0..3u8) {
            0 => ModuleExpr::Injective(
                dual.quiver()
                    .vertex_name(rng.random_range(0..nv))
                    .to_string(),
            ),
            1 if na > 0 => ModuleExpr::Coideal(
                dual.quiver().arrow(rng.random_range(0..na)).name.clone(),
            ),
            _ => {
                let inner = ModuleExpr::Injective(
                    dual.quiver()
                        .vertex_name(rng.random_range(0..nv))
                        .to_string(),
                );
                ModuleExpr::TruncLe(Box::new(inner), -rng.random_range(0..=2i64))
            }
        }
    };
    let mut e = leaf(rng);
    if rng.random_range(0..2u8) == 0 {
        e = ModuleExpr::Sum(Box::new(e), Box::new(leaf(rng)));
    }
    if rng.random_range(0..2u8) == 0 {
        e = ModuleExpr::Shift(Box::new(e), rng.random_range(-2..=2i64));
    }
    e
}

/// A random bounded two-term complex of expanded shifted injectives over
/// the dual, for shift-compatibility checks of the duality functor.
pub fn random_two_term_dual_complex(
    rng: &mut ChaCha8Rng,
    pair: &DualPair,
    cutoff: Cutoff,
) -> Result<ModuleComplex> {
    let dual = &pair.dual;
    let nv = dual.quiver().vertex_count();
    let rand_summands = |rng: &mut ChaCha8Rng| -> Vec<Summand> {
        (0..rng.random_range(1..=2usize))
            .map(|_| Summand {
                vertex: rng.random_range(0..nv),
                shift: rng.random_range(-1..=1i64),
            })
            .collect()
    };
    let t0 = rand_summands(rng);
    let t1 = rand_summands(rng);
    let mut pm: PathMatrix = std::collections::BTreeMap::new();
    for (i, si) in t1.iter().enumerate() {
        for (j, sj) in t0.iter().enumerate() {
            if rng.random_range(0..2u8) == 0 {
                continue;
            }
            let len = sj.shift - si.shift;
            if len < 0 {
                continue;
            }
            // paths from the row vertex to the column vertex of that length
            let words: Vec<PathWord> = dual
                .words_from(si.vertex, len as usize)
                .into_iter()
                .filter(|w| w.target(dual) == sj.vertex)
                .collect();
            if words.is_empty() {
                continue;
            }
            let w = words[rng.random_range(0..words.len())].clone();
            pm.insert((i, j), PathSum::of(w, random_scalar(rng)));
        }
    }
    let e0 = expand_summands(dual, Side::Injective, &t0, cutoff);
    let e1 = expand_summands(dual, Side::Injective, &t1, cutoff);
    let f = expand_path_matrix(dual, Side::Injective, &e0, &e1, &pm);
    f.validate()?;
    Ok(ModuleComplex::two_term(f, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval;

    #[test]
    fn bundled_algebras_parse_and_match_flags() {
        let all = bundled();
        assert_eq!(all.len(), 6);
        let by_name: std::collections::BTreeMap<_, _> = all.iter().cloned().collect();
        assert!(by_name["sl2_block"].is_finite_dimensional_flag());
        assert!(by_name["loop_nilpotent"].is_radical_square_zero());
        assert!(by_name["rss3_cycle"].is_radical_square_zero());
        assert!(!by_name["loop_free"].is_finite_dimensional_flag());
        assert!(!by_name["rss3_cycle"].koszul_dual().is_finite_dimensional_flag());
        // the bundled dual really is the dual of the block algebra
        let dual = by_name["sl2_block"].koszul_dual();
        assert_eq!(
            crate::algebra::serialize_algebra(&dual),
            crate::algebra::serialize_algebra(&by_name["sl2_block_dual"])
        );
    }

    #[test]
    fn generators_are_deterministic() {
        let mut r1 = rng_for(7, 0);
        let mut r2 = rng_for(7, 0);
        let a1 = random_algebra(&mut r1, 6, 10, true);
        let a2 = random_algebra(&mut r2, 6, 10, true);
        assert_eq!(
            crate::algebra::serialize_algebra(&a1),
            crate::algebra::serialize_algebra(&a2)
        );
        assert!(a1.is_finite_dimensional_flag());
    }

    #[test]
    fn random_cokers_evaluate() {
        let corpus = bundled();
        let mut rng = rng_for(3, 2);
        for (_, alg) in corpus.iter().filter(|(_, a)| a.is_finite_dimensional_flag()) {
            for _ in 0..5 {
                let expr = random_coker_expr(&mut rng, alg);
                let m = eval(alg, &expr, Cutoff::default()).unwrap();
                m.validate().unwrap();
            }
        }
    }

    #[test]
    fn random_copresented_evaluate() {
        let mut rng = rng_for(5, 3);
        for (_, alg) in bundled() {
            let dual = alg.koszul_dual().arc();
            for _ in 0..5 {
                let expr = random_copresented_expr(&mut rng, &dual);
                let m = eval(&dual, &expr, Cutoff(12)).unwrap();
                m.validate().unwrap();
            }
        }
    }

    #[test]
    fn random_complexes_are_valid() {
        let mut rng = rng_for(11, 4);
        for (_, alg) in bundled().into_iter().take(3) {
            let pair = DualPair::new(alg);
            for _ in 0..3 {
                let x = random_two_term_dual_complex(&mut rng, &pair, Cutoff(10)).unwrap();
                x.check().unwrap();
            }
        }
    }
}
