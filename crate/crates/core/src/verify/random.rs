//! Seeded random modules: cokernels of random maps between projectives.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Result;
use crate::module::FdModule;
use crate::resolution::{realize, ProjMap};

/// Parameters of a sampled suite; everything is replayed from `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSuiteSpec {
    pub seed: u64,
    pub modules_per_side: usize,
    pub dim_cap: usize,
    pub max_generators: usize,
    pub ext_bound: usize,
    pub d_max: usize,
}

impl Default for RandomSuiteSpec {
    fn default() -> Self {
        RandomSuiteSpec {
            seed: 2003,
            modules_per_side: 25,
            dim_cap: 40,
            max_generators: 3,
            ext_bound: 4,
            d_max: 4,
        }
    }
}

/// Cokernel of a random map `⊕ P_{w_i} -> ⊕ P_{v_j}` with `size` generators
/// in the target. `size = 0` gives the zero module.
pub fn random_module(a: &Arc<Algebra>, seed: u64, size: usize) -> Result<FdModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = a.structure()?;
    let nv = s.vertex_count();
    let target: Vec<usize> = (0..size).map(|_| rng.gen_range(0..nv)).collect();
    let relations = if size == 0 { 0 } else { rng.gen_range(0..=size) };
    let source: Vec<usize> = (0..relations).map(|_| rng.gen_range(0..nv)).collect();
    let p = a.p();
    let radical = s.radical();
    let entries = source
        .iter()
        .map(|&sv| {
            target
                .iter()
                .map(|&tv| {
                    if rng.gen_bool(0.4) {
                        return vec![0; a.dim()];
                    }
                    // mostly radical elements, so the cokernel stays large
                    let x: Vec<u32> = if rng.gen_bool(0.8) && radical.cols() > 0 {
                        let c: Vec<u32> = (0..radical.cols()).map(|_| rng.gen_range(0..p)).collect();
                        radical.mul_vec(&c)
                    } else {
                        (0..a.dim()).map(|_| rng.gen_range(0..p)).collect()
                    };
                    a.mul(&a.mul(s.idempotent(sv), &x), s.idempotent(tv))
                })
                .collect()
        })
        .collect();
    let f = ProjMap {
        source,
        target,
        entries,
    };
    Ok(realize(a, &f)?.cokernel().0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixture;

    #[test]
    fn zero_size_gives_zero() {
        let a = fixture("paper-ex-1").unwrap().load(None).unwrap().algebra;
        assert!(random_module(&a, 1, 0).unwrap().is_zero());
    }

    #[test]
    fn deterministic_and_valid() {
        let a = fixture("paper-ex-1").unwrap().load(None).unwrap().algebra;
        for seed in 0..10 {
            let m = random_module(&a, seed, 3).unwrap();
            m.validate().unwrap();
            assert_eq!(m.to_spec(), random_module(&a, seed, 3).unwrap().to_spec());
        }
    }
}
