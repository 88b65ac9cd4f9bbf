//! The standard suite of contexts: the built-in fixtures with `U = Λ`, plus
//! a non-regular faithfully balanced selforthogonal module when one turns up.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimodule::{build_context, BimoduleContext};
use crate::error::Result;
use crate::instance::{fixture, FIXTURES};
use crate::module::{direct_sum, indec_injective, indec_projective, is_isomorphic, regular_module, FdModule};

use super::random::RandomSuiteSpec;
use super::Prepared;

/// Largest number of summands tried by [`find_nonregular`].
pub const SEARCH_SUMMANDS: usize = 3;

/// First sum of distinct indecomposable projectives and injectives (fewest
/// summands first, projectives before injectives) that is not `Λ` and gives
/// a valid context. Modules isomorphic to `Λ` are skipped.
pub fn find_nonregular(a: &Arc<Algebra>, ext_bound: usize) -> Result<Option<(String, BimoduleContext)>> {
    let n = a.structure()?.vertex_count();
    let mut pieces: Vec<(String, FdModule)> = Vec::new();
    for v in 0..n {
        pieces.push((format!("P{}", v + 1), indec_projective(a, v)?));
    }
    for v in 0..n {
        let i = indec_injective(a, v)?;
        if !pieces.iter().any(|(_, m)| m.same_action(&i)) {
            pieces.push((format!("I{}", v + 1), i));
        }
    }
    let regular = regular_module(a);
    for size in 1..=SEARCH_SUMMANDS.min(pieces.len()) {
        for subset in subsets(pieces.len(), size) {
            let chosen: Vec<FdModule> = subset.iter().map(|&i| pieces[i].1.clone()).collect();
            let all_projective = subset.iter().all(|&i| pieces[i].0.starts_with('P')) && size == n;
            if all_projective {
                continue;
            }
            let u = direct_sum(a, &chosen)?;
            if u.same_action(&regular) || matches!(is_isomorphic(&u, &regular), Ok(true)) {
                continue;
            }
            if let Ok(ctx) = build_context(a, &u, ext_bound) {
                let name = subset.iter().map(|&i| pieces[i].0.as_str()).collect::<Vec<_>>().join("+");
                return Ok(Some((name, ctx)));
            }
        }
    }
    Ok(None)
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Contexts of the standard suite, named `fixture` or `fixture/U=...`.
pub fn suite_contexts(p: Option<u64>, ext_bound: usize) -> Result<Vec<(String, BimoduleContext)>> {
    let mut out = Vec::new();
    for name in FIXTURES {
        let loaded = fixture(name).expect("built-in fixture").load(p)?;
        out.push((name.to_string(), build_context(&loaded.algebra, &loaded.bimodule, ext_bound)?));
    }
    for name in ["paper-ex-1", "paper-ex-2", "a3", "nakayama"] {
        let a = fixture(name).expect("built-in fixture").load(p)?.algebra;
        if let Some((u, ctx)) = find_nonregular(&a, ext_bound)? {
            out.push((format!("{name}/U={u}"), ctx));
        }
    }
    Ok(out)
}

/// The suite with samples drawn from `spec`.
pub fn prepared_suite(p: Option<u64>, spec: &RandomSuiteSpec) -> Result<Vec<Prepared>> {
    suite_contexts(p, spec.ext_bound)?
        .into_iter()
        .map(|(name, ctx)| Prepared::new(&name, ctx, spec.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }
}
