//! Seeded random inputs for the property checkers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::polyring::{Ctx, Monomial, Poly};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How many random inputs a checker draws and how large they are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: u32,
    /// Coefficients are drawn from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 0x5eed, samples: 100, max_degree: 4, coeff_bound: 9 }
    }
}

/// Random monomial of total degree at most `max_degree`.
pub fn random_monomial(rng: &mut SampleRng, nvars: usize, max_degree: u32) -> Monomial {
    let mut exps = vec![0u32; nvars];
    if nvars == 0 {
        return Monomial::from_exponents(exps);
    }
    let deg = rng.gen_range(0..=max_degree);
    for _ in 0..deg {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(exps)
}

/// Random polynomial with up to `max_terms` terms of degree at most
/// `max_degree` and nonzero small integer coefficients.
pub fn random_poly(rng: &mut SampleRng, ctx: &Ctx, max_degree: u32, max_terms: usize, coeff_bound: i64) -> Poly {
    let nterms = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..nterms)
        .map(|_| {
            let m = random_monomial(rng, ctx.nvars(), max_degree);
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-coeff_bound..=coeff_bound);
            }
            (m, ctx.field().from_i64(c))
        })
        .collect();
    Poly::from_terms(ctx, terms)
}

pub fn random_polys(rng: &mut SampleRng, ctx: &Ctx, cfg: &SampleConfig, count: usize) -> Vec<Poly> {
    (0..count).map(|_| random_poly(rng, ctx, cfg.max_degree, 5, cfg.coeff_bound)).collect()
}
