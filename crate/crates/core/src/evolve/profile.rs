//! Fitness landscape sampling: how much the undetectable error rate changes
//! with Hamming distance between genotypes.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::{uer_exact, EXACT_FITNESS_CAP};
use crate::genome::{CodeGenotype, CodeShape};
use crate::pauli::ErrorModel;
use crate::scalar::Real;

use super::operators::mutate_single_bit;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct HammingRecord<T> {
    pub distance: usize,
    pub delta: T,
}

/// Walks `samples` genotypes, each one bit away from the previous, and
/// records `(Hamming distance, |ΔP_S|)` for every pair.
pub fn hamming_fitness_profile<T: Real, R: Rng + ?Sized>(
    shape: CodeShape,
    model: &ErrorModel<T>,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<HammingRecord<T>>> {
    if shape.n + shape.k > EXACT_FITNESS_CAP {
        return Err(Error::ResourceLimit(format!(
            "profiles use exact fitness, n + k <= {EXACT_FITNESS_CAP}"
        )));
    }
    let mut walk = Vec::with_capacity(samples);
    if samples > 0 {
        walk.push(CodeGenotype::random(shape, rng));
    }
    while walk.len() < samples {
        let next = mutate_single_bit(walk.last().expect("non-empty"), rng);
        walk.push(next);
    }
    let fits: Vec<T> = walk
        .par_iter()
        .map(|g| uer_exact(&g.to_code(), model).map(|r| r.value))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(samples * samples.saturating_sub(1) / 2);
    for i in 0..samples {
        for j in i + 1..samples {
            out.push(HammingRecord {
                distance: walk[i].bits.hamming_distance(&walk[j].bits),
                delta: (fits[i] - fits[j]).abs(),
            });
        }
    }
    Ok(out)
}

/// Mean `|ΔP_S|` for each Hamming distance present, ascending.
pub fn mean_by_distance<T: Real>(records: &[HammingRecord<T>]) -> Vec<(usize, T, usize)> {
    let mut acc: std::collections::BTreeMap<usize, (T, usize)> = Default::default();
    for r in records {
        let e = acc.entry(r.distance).or_insert((T::zero(), 0));
        e.0 = e.0 + r.delta;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(d, (sum, c))| (d, sum / T::of_count(c as u64), c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_samples_one_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let shape = CodeShape::stabiliser(5, 1).unwrap();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let recs = hamming_fitness_profile(shape, &model, 2, &mut rng).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].distance, 1);
    }

    #[test]
    fn identical_genotypes_have_zero_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let shape = CodeShape::stabiliser(6, 1).unwrap();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let recs = hamming_fitness_profile(shape, &model, 60, &mut rng).unwrap();
        assert_eq!(recs.len(), 60 * 59 / 2);
        assert!(recs.iter().any(|r| r.distance == 0));
        assert!(recs.iter().filter(|r| r.distance == 0).all(|r| r.delta == 0.0));
        let means = mean_by_distance(&recs);
        assert_eq!(means.iter().map(|m| m.2).sum::<usize>(), recs.len());
    }

    #[test]
    fn rejects_large_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = CodeShape::stabiliser(20, 2).unwrap();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        assert!(hamming_fitness_profile(shape, &model, 2, &mut rng).is_err());
    }
}
