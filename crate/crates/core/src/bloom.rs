//! Random fixed-weight edge labels (in-packet Bloom filters) and their
//! false-positive behaviour on stars.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::BitSet;
use crate::graph::Graph;
use crate::labelling::{BitUniverse, EdgeLabel, Labelling};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BloomParams {
    /// Universe size.
    pub m: usize,
    /// Bits per edge label.
    pub k: usize,
    /// Size of the encoded edge set.
    pub n: usize,
    pub seed: u64,
}

impl BloomParams {
    pub fn new(m: usize, k: usize, n: usize, seed: u64) -> Result<Self> {
        check_weight(m, k)?;
        if n == 0 {
            return Err(Error::InvalidParameter(
                "encoded set size must be at least 1".into(),
            ));
        }
        Ok(BloomParams { m, k, n, seed })
    }
}

fn check_weight(m: usize, k: usize) -> Result<()> {
    if k == 0 || k > m {
        return Err(Error::InvalidParameter(format!(
            "label weight k={k} must satisfy 1 <= k <= m={m}"
        )));
    }
    Ok(())
}

fn random_label<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> BitSet {
    let mut bits = BitSet::new(m);
    for p in index::sample(rng, m, k) {
        bits.insert(p);
    }
    bits
}

/// Each edge, in id order, gets a uniformly random `k`-subset of `0..m`.
/// The same seed always yields the same labelling.
pub fn bloom_labelling(g: &Graph, m: usize, k: usize, seed: u64) -> Result<Labelling> {
    check_weight(m, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..g.edge_count())
        .map(|_| EdgeLabel(random_label(&mut rng, m, k)))
        .collect();
    Labelling::new(BitUniverse::indexed("b", m), labels)
}

/// `(1 - e^(-kn/m))^k`.
pub fn analytic_fpr(m: usize, n: usize, k: f64) -> f64 {
    (1.0 - (-k * n as f64 / m as f64).exp()).powf(k)
}

/// `(m / n) ln 2`.
pub fn optimal_k(m: usize, n: usize) -> f64 {
    m as f64 / n as f64 * std::f64::consts::LN_2
}

/// [`optimal_k`] rounded to the nearest integer, at least 1.
pub fn optimal_k_rounded(m: usize, n: usize) -> usize {
    (optimal_k(m, n).round() as usize).max(1)
}

/// Probability that at least one of `off_path_edges` independent edges is a
/// false positive.
pub fn at_least_one_fp(per_edge_p: f64, off_path_edges: usize) -> f64 {
    1.0 - (1.0 - per_edge_p).powi(off_path_edges as i32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FprEstimate {
    pub rate: f64,
    /// Binomial standard error over all `trials · (star_n - 2)` edge tests.
    pub stderr: f64,
    pub trials: usize,
    pub recognised: u64,
    pub tested: u64,
}

/// Measures the false-positive rate of random labels on a star.
///
/// Trial `t` draws a fresh labelling of the `star_n` star edges from stream
/// `t` of the seeded generator, picks a random leaf-to-leaf path and counts
/// how many of the `star_n - 2` other edges the header recognises.
pub fn empirical_fpr(
    star_n: usize,
    m: usize,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<FprEstimate> {
    if star_n < 3 {
        return Err(Error::InvalidParameter(
            "star needs at least 3 edges".into(),
        ));
    }
    check_weight(m, k)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let recognised: u64 = (0..trials)
        .into_par_iter()
        .map(|t| star_trial(star_n, m, k, seed, t as u64))
        .sum();
    let tested = (trials * (star_n - 2)) as u64;
    let rate = recognised as f64 / tested as f64;
    Ok(FprEstimate {
        rate,
        stderr: (rate * (1.0 - rate) / tested as f64).sqrt(),
        trials,
        recognised,
        tested,
    })
}

fn star_trial(star_n: usize, m: usize, k: usize, seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let labels: Vec<BitSet> = (0..star_n).map(|_| random_label(&mut rng, m, k)).collect();
    let path = index::sample(&mut rng, star_n, 2);
    let (a, b) = (path.index(0), path.index(1));
    let mut header = labels[a].clone();
    header.union_with(&labels[b]).expect("same width");
    labels
        .iter()
        .enumerate()
        .filter(|&(e, l)| e != a && e != b && l.is_subset_unchecked(&header))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_star;
    use crate::routing::{encode_path, recognised};

    #[test]
    fn labels_have_fixed_weight_and_repeat() {
        let star = make_star(40).unwrap();
        let a = bloom_labelling(&star, 21, 7, 42).unwrap();
        let b = bloom_labelling(&star, 21, 7, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.labels().iter().all(|l| l.bits().count_ones() == 7));
        assert_ne!(a, bloom_labelling(&star, 21, 7, 43).unwrap());
    }

    #[test]
    fn saturated_labels_recognise_everything() {
        let star = make_star(5).unwrap();
        let l = bloom_labelling(&star, 6, 6, 1).unwrap();
        let h = encode_path(&l, &star.shortest_path(1, 2).unwrap());
        assert!(l.labels().iter().all(|x| recognised(x, &h).unwrap()));
        let est = empirical_fpr(5, 6, 6, 100, 3).unwrap();
        assert_eq!(est.rate, 1.0);
    }

    #[test]
    fn invalid_parameters() {
        let star = make_star(5).unwrap();
        assert!(bloom_labelling(&star, 4, 5, 0).is_err());
        assert!(bloom_labelling(&star, 4, 0, 0).is_err());
        assert!(empirical_fpr(10, 10, 3, 0, 1).is_err());
        assert!(empirical_fpr(2, 10, 3, 10, 1).is_err());
        assert!(BloomParams::new(10, 3, 0, 0).is_err());
        assert!(BloomParams::new(10, 3, 2, 0).is_ok());
    }

    #[test]
    fn analytic_values() {
        assert!((analytic_fpr(10, 2, optimal_k(10, 2)) - 0.0905).abs() < 5e-4);
        assert!((analytic_fpr(18, 2, optimal_k(18, 2)) - 0.013).abs() < 5e-4);
        assert!(analytic_fpr(10, 10_000, 3.0) > 0.999_999);
        assert!((analytic_fpr(10, 2, 3.0) - 0.091_848_839).abs() < 1e-8);
    }

    #[test]
    fn optimal_weight() {
        assert!((optimal_k(10, 2) - 3.465_735_9).abs() < 1e-6);
        assert!((optimal_k(21, 2) - 7.278_045_4).abs() < 1e-6);
        assert_eq!(optimal_k_rounded(21, 2), 7);
        assert!((optimal_k(5, 5) - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(optimal_k_rounded(5, 5), 1);
        assert_eq!(optimal_k_rounded(1, 100), 1);
    }

    #[test]
    fn at_least_one_values() {
        assert!((at_least_one_fp(0.006, 38) - 0.204).abs() < 5e-4);
        assert_eq!(at_least_one_fp(0.0, 38), 0.0);
        assert_eq!(at_least_one_fp(1.0, 1), 1.0);
    }

    #[test]
    fn optimal_k_collapses_formula() {
        for m in 1..60 {
            for n in 1..10 {
                let k = optimal_k(m, n);
                let direct = analytic_fpr(m, n, k);
                let halves = 0.5f64.powf(k);
                let golden = 0.6185f64.powf(m as f64 / n as f64);
                assert!((direct - halves).abs() <= 1e-12 * halves, "m={m} n={n}");
                // 0.6185 is 2^(-ln 2) rounded to four places.
                let ratio = m as f64 / n as f64;
                assert!(
                    ((direct - golden) / direct).abs() <= 1e-5 * ratio,
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn empirical_is_deterministic() {
        let a = empirical_fpr(10, 10, 3, 2000, 7).unwrap();
        let b = empirical_fpr(10, 10, 3, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tested, 16_000);
    }
}
