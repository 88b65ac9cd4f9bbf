//! Quivers, path words and monomial bound quiver algebras.
//!
//! Path words are stored in traversal order: `[a, b]` means "first `a`, then
//! `b`". The usual function-style notation writes the same path as `ba`;
//! [`PathWord::from_composition`] converts from that notation.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Arrow, Provenance, Structure};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Default bound on path length during enumeration.
pub const DEFAULT_LENGTH_BOUND: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<QuiverArrow>,
}

impl Quiver {
    /// Builds a quiver from vertex labels and `(name, from, to)` triples.
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let arrows = arrows
            .iter()
            .map(|&(n, f, t)| (n.to_string(), f.to_string(), t.to_string()))
            .collect::<Vec<_>>();
        Quiver::from_labels(vertices, &arrows)
    }

    pub fn from_labels(vertices: Vec<String>, arrows: &[(String, String, String)]) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let find = |label: &str, arrow: &str| {
            vertices.iter().position(|v| v == label).ok_or_else(|| {
                Error::InvalidQuiver(format!("arrow `{arrow}` has unknown endpoint `{label}`"))
            })
        };
        let mut out = Vec::with_capacity(arrows.len());
        for (name, from, to) in arrows {
            if out.iter().any(|a: &QuiverArrow| &a.name == name) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{name}`")));
            }
            out.push(QuiverArrow {
                name: name.clone(),
                source: find(from, name)?,
                target: find(to, name)?,
            });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[QuiverArrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Path word from arrow names in traversal order.
    pub fn word(&self, names: &[&str]) -> Result<PathWord> {
        let ids = names
            .iter()
            .map(|n| {
                self.arrow_index(n).ok_or_else(|| Error::InvalidRelation {
                    word: names.iter().map(|s| s.to_string()).collect(),
                    reason: format!("unknown arrow `{n}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PathWord::new(self, ids)
    }
}

/// A path in a quiver. Empty words are trivial paths at a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathWord {
    arrows: Vec<usize>,
    source: usize,
    target: usize,
}

impl PathWord {
    pub fn new(q: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        let name = |i: usize| q.arrows[i].name.clone();
        let Some(&first) = arrows.first() else {
            return Err(Error::InvalidRelation {
                word: vec![],
                reason: "empty word (use PathWord::trivial)".into(),
            });
        };
        for w in arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(Error::InvalidRelation {
                    word: arrows.iter().map(|&i| name(i)).collect(),
                    reason: format!("`{}` does not compose with `{}`", name(w[0]), name(w[1])),
                });
            }
        }
        let last = *arrows.last().unwrap();
        Ok(PathWord {
            source: q.arrows[first].source,
            target: q.arrows[last].target,
            arrows,
        })
    }

    pub fn trivial(vertex: usize) -> Self {
        PathWord {
            arrows: vec![],
            source: vertex,
            target: vertex,
        }
    }

    /// Converts function-style notation (rightmost arrow first) to a word.
    pub fn from_composition(q: &Quiver, names: &[&str]) -> Result<Self> {
        let rev: Vec<&str> = names.iter().rev().copied().collect();
        q.word(&rev)
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    /// Same as [`PathWord::is_trivial`].
    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    fn contains_factor(&self, factor: &[usize]) -> bool {
        factor.len() <= self.arrows.len() && self.arrows.windows(factor.len()).any(|w| w == factor)
    }

    /// Label in function-style notation, e.g. `beta.alpha` for "alpha then beta".
    pub fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", q.vertices[self.source]);
        }
        self.arrows
            .iter()
            .rev()
            .map(|&a| q.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    /// Longest surviving path length plus one.
    pub nilpotency_index: usize,
    pub dim: usize,
}

fn check_relations(q: &Quiver, relations: &[PathWord]) -> Result<()> {
    for r in relations {
        if r.len() < 2 {
            return Err(Error::InvalidRelation {
                word: r.arrows.iter().map(|&a| q.arrows[a].name.clone()).collect(),
                reason: "relations must have length at least 2".into(),
            });
        }
        // re-validate composability for words built by hand
        PathWord::new(q, r.arrows.clone())?;
    }
    Ok(())
}

/// All reduction-free paths, breadth first, or `NotAdmissible` if some
/// reduction-free path reaches `length_bound`.
pub fn enumerate_paths(q: &Quiver, relations: &[PathWord], length_bound: usize) -> Result<Vec<PathWord>> {
    check_relations(q, relations)?;
    let mut all: Vec<PathWord> = (0..q.vertices.len()).map(PathWord::trivial).collect();
    let mut level = all.clone();
    for len in 1..=length_bound {
        let mut next = Vec::new();
        for w in &level {
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source != w.target {
                    continue;
                }
                let mut arrows = w.arrows.clone();
                arrows.push(ai);
                let cand = PathWord {
                    arrows,
                    source: w.source,
                    target: a.target,
                };
                // w is reduction-free, so a new factor must be a suffix
                let hit = relations.iter().any(|r| cand.arrows.ends_with(&r.arrows));
                if !hit {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return Ok(all);
        }
        if len == length_bound {
            return Err(Error::NotAdmissible { length_bound });
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    Ok(all)
}

pub fn admissibility_report(q: &Quiver, relations: &[PathWord]) -> Result<AdmissibilityReport> {
    let paths = enumerate_paths(q, relations, DEFAULT_LENGTH_BOUND)?;
    let longest = paths.iter().map(PathWord::len).max().unwrap_or(0);
    Ok(AdmissibilityReport {
        nilpotency_index: longest + 1,
        dim: paths.len(),
    })
}

/// The bound quiver algebra `KQ / (relations)` over `F_p` with path basis.
///
/// Multiplication is composition: `x * y` means "first `y`, then `x`".
pub fn build_path_algebra(
    name: &str,
    p: u32,
    q: &Quiver,
    relations: &[PathWord],
    length_bound: usize,
) -> Result<Arc<Algebra>> {
    let paths = enumerate_paths(q, relations, length_bound)?;
    let n = paths.len();
    let index: HashMap<(Vec<usize>, usize), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, w)| ((w.arrows.clone(), w.source), i))
        .collect();

    let mut table = vec![Vec::new(); n * n];
    for (i, x) in paths.iter().enumerate() {
        for (j, y) in paths.iter().enumerate() {
            if y.target != x.source {
                continue;
            }
            let mut arrows = y.arrows.clone();
            arrows.extend_from_slice(&x.arrows);
            let prod = PathWord {
                arrows,
                source: y.source,
                target: x.target,
            };
            if relations.iter().any(|r| prod.contains_factor(&r.arrows)) {
                continue;
            }
            let k = index[&(prod.arrows, prod.source)];
            table[i * n + j] = vec![(k, 1)];
        }
    }

    let unit_vec = |i: usize| {
        let mut v = vec![0u32; n];
        v[i] = 1;
        v
    };
    let nv = q.vertices.len();
    let idempotents: Vec<Vec<u32>> = (0..nv).map(|v| unit_vec(index[&(vec![], v)])).collect();
    let arrows = q
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| Arrow {
            label: a.name.clone(),
            source: a.source,
            target: a.target,
            element: unit_vec(index[&(vec![ai], a.source)]),
        })
        .collect();
    let radical_idx: Vec<usize> = (0..n).filter(|&i| !paths[i].is_trivial()).collect();
    let radical = Mat::identity(p, n).select_cols(&radical_idx);
    let mut one = vec![0u32; n];
    for v in 0..nv {
        one[index[&(vec![], v)]] = 1;
    }

    let structure = Structure::new(q.vertices.clone(), idempotents, arrows, radical);
    let algebra = Algebra::new(
        name.to_string(),
        p,
        paths.iter().map(|w| w.label(q)).collect(),
        table,
        one,
        Some(structure),
        Some(paths.iter().map(|w| (w.source, w.target)).collect()),
        Provenance::Quiver {
            quiver: q.clone(),
            relations: relations.iter().map(|r| r.arrows.clone()).collect(),
        },
    );
    Ok(Arc::new(algebra))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta() -> Quiver {
        Quiver::new(
            &["1", "2", "3"],
            &[("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3")],
        )
        .unwrap()
    }

    fn labels(a: &Algebra) -> Vec<String> {
        let mut l = a.labels().to_vec();
        l.sort();
        l
    }

    /// Independent oracle: every path up to `max_len` by brute force over
    /// all arrow sequences, filtered by factor containment.
    fn brute_force_count(q: &Quiver, rels: &[Vec<usize>], max_len: usize) -> usize {
        let na = q.arrows().len();
        let mut count = q.vertices().len();
        for len in 1..=max_len {
            let total = na.pow(len as u32);
            for code in 0..total {
                let mut seq = Vec::with_capacity(len);
                let mut c = code;
                for _ in 0..len {
                    seq.push(c % na);
                    c /= na;
                }
                let composable = seq
                    .windows(2)
                    .all(|w| q.arrows()[w[0]].target == q.arrows()[w[1]].source);
                let free = rels
                    .iter()
                    .all(|r| r.len() > seq.len() || !seq.windows(r.len()).any(|w| w == r.as_slice()));
                if composable && free {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn linear_quiver_without_relations() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let a = build_path_algebra("A2", 101, &q, &[], DEFAULT_LENGTH_BOUND).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(labels(&a), vec!["a", "e1", "e2"]);
    }

    #[test]
    fn delta_mod_aba_has_eleven_paths() {
        let q = delta();
        let rel = PathWord::from_composition(&q, &["alpha", "beta", "alpha"]).unwrap();
        let a = build_path_algebra("L1", 101, &q, std::slice::from_ref(&rel), DEFAULT_LENGTH_BOUND).unwrap();
        assert_eq!(a.dim(), 11);
        let mut expected: Vec<String> = [
            "e1", "e2", "e3", "alpha", "beta", "gamma", "alpha.beta", "beta.alpha",
            "gamma.alpha", "beta.alpha.beta", "gamma.alpha.beta",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        expected.sort();
        assert_eq!(labels(&a), expected);
        assert_eq!(brute_force_count(&q, &[rel.arrows().to_vec()], 6), 11);
        assert!(a.check_associative());
    }

    #[test]
    fn delta_mod_ga_ba_has_seven_paths() {
        let q = delta();
        let r1 = PathWord::from_composition(&q, &["gamma", "alpha"]).unwrap();
        let r2 = PathWord::from_composition(&q, &["beta", "alpha"]).unwrap();
        let a = build_path_algebra("L2", 101, &q, &[r1.clone(), r2.clone()], 32).unwrap();
        assert_eq!(a.dim(), 7);
        let mut expected: Vec<String> = ["e1", "e2", "e3", "alpha", "beta", "gamma", "alpha.beta"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        expected.sort();
        assert_eq!(labels(&a), expected);
        let rels = vec![r1.arrows().to_vec(), r2.arrows().to_vec()];
        assert_eq!(brute_force_count(&q, &rels, 6), 7);
        assert!(a.check_associative());
    }

    #[test]
    fn admissibility_examples() {
        let q = delta();
        let rel = PathWord::from_composition(&q, &["alpha", "beta", "alpha"]).unwrap();
        assert_eq!(
            admissibility_report(&q, &[rel]).unwrap(),
            AdmissibilityReport {
                nilpotency_index: 4,
                dim: 11
            }
        );
        let points = Quiver::new(&["a", "b", "c"], &[]).unwrap();
        assert_eq!(
            admissibility_report(&points, &[]).unwrap(),
            AdmissibilityReport {
                nilpotency_index: 1,
                dim: 3
            }
        );
        assert!(matches!(
            admissibility_report(&q, &[]),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn invalid_input() {
        let q = delta();
        assert!(matches!(q.word(&["alpha", "gamma", "beta"]), Err(Error::InvalidRelation { .. })));
        assert!(matches!(q.word(&["delta"]), Err(Error::InvalidRelation { .. })));
        let short = q.word(&["alpha"]).unwrap();
        assert!(matches!(
            build_path_algebra("x", 101, &q, &[short], 32),
            Err(Error::InvalidRelation { .. })
        ));
        let bad = Quiver::new(&["1"], &[("a", "1", "9")]);
        assert!(matches!(bad, Err(Error::InvalidQuiver(msg)) if msg.contains("`a`")));
    }
}
