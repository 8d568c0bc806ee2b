//! Reproducible random objects and morphisms.
//!
//! All sampling is driven by `ChaCha8Rng`, so a seed determines the output on
//! every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hom::{combine, hom, Morphism};
use crate::module::BreuilModule;
use crate::monodromy::solve_monodromy;
use crate::params::GlobalParams;
use crate::ring::CoeffRing;

/// Attempts before giving up on a parameter set with no compatible monodromy.
pub const MAX_ATTEMPTS: usize = 256;

/// Random digits and a random invertible Frobenius, with a uniformly chosen
/// compatible monodromy. Resamples when none exists.
pub fn random_object<R: Rng + ?Sized>(ring: &CoeffRing, rank: usize, rng: &mut R) -> Result<BreuilModule> {
    let er = ring.params().er();
    let p = ring.field().p();
    for _ in 0..MAX_ATTEMPTS {
        let fil: Vec<usize> = (0..rank).map(|_| rng.gen_range(0..=er)).collect();
        let frob = ring.mat_random_invertible(rank, rng);
        let sols = solve_monodromy(ring, &fil, &frob)?;
        let coef: Vec<u32> = sols.directions.iter().map(|_| rng.gen_range(0..p)).collect();
        if let Some(mono) = sols.pick(ring, &coef) {
            return BreuilModule::validated(ring.clone(), fil, frob, mono);
        }
    }
    Err(Error::Domain(format!("no valid object found in {MAX_ATTEMPTS} attempts")))
}

pub fn random_object_seeded(params: GlobalParams, rank: usize, seed: u64) -> Result<BreuilModule> {
    let ring = CoeffRing::new(params)?;
    random_object(&ring, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Uniform element of `Hom(X, Y)`.
pub fn random_morphism<R: Rng + ?Sized>(x: &BreuilModule, y: &BreuilModule, rng: &mut R) -> Result<Morphism> {
    let ring = x.ring();
    let basis = hom(x, y)?;
    let coef: Vec<u32> = basis.iter().map(|_| rng.gen_range(0..ring.field().p())).collect();
    let f = combine(ring, &basis, &coef, y.rank(), x.rank());
    Morphism::new(x.clone(), y.clone(), f)
}
