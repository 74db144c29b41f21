//! Deterministic instance generation for the randomized audit and the
//! property tests.
//!
//! Instances follow one documented distribution: dimension up to 3, up to
//! five pieces per side, entries with numerators in `[-8, 8]` and
//! denominators in `{1, 2, 4}`. Streams are seeded from a text label, and
//! each instance index derives its own generator, so audits can fan out
//! without losing reproducibility.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dcfunc::{AffinePiece, PolyhedralDC};
use crate::rational::Rational;

/// FNV-1a; the stable hash behind seed derivation and instance hashing.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// Stable seed for a text label.
pub fn seed_from_label(label: &str) -> u64 {
    fnv1a64(label.as_bytes())
}

/// Generator for instance `index` of the labelled stream.
pub fn instance_rng(label: &str, index: u64) -> ChaCha8Rng {
    let mixed = seed_from_label(label) ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// One entry of the audit distribution.
pub fn random_entry(rng: &mut impl Rng) -> Rational {
    let numerator = rng.gen_range(-8i64..=8);
    let denominator = [1i64, 2, 4][rng.gen_range(0..3)];
    Rational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// A random point with entries from the audit distribution.
pub fn random_delta(rng: &mut impl Rng, dimension: usize) -> Vec<Rational> {
    (0..dimension).map(|_| random_entry(rng)).collect()
}

/// A random polyhedral DC function from the audit distribution.
pub fn random_instance(rng: &mut impl Rng) -> PolyhedralDC {
    let dimension = rng.gen_range(1..=3);
    let plus_count = rng.gen_range(1..=5);
    let minus_count = rng.gen_range(1..=5);
    let mut pieces = |count: usize| -> Vec<AffinePiece> {
        (0..count)
            .map(|_| AffinePiece::new(random_entry(rng), random_delta(rng, dimension)))
            .collect()
    };
    let plus = pieces(plus_count);
    let minus = pieces(minus_count);
    PolyhedralDC::new(dimension, plus, minus).expect("generated instances are well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = random_instance(&mut instance_rng("audit", 7));
        let b = random_instance(&mut instance_rng("audit", 7));
        assert_eq!(a, b);
        let c = random_instance(&mut instance_rng("audit", 8));
        assert_ne!(a, c);
    }

    #[test]
    fn distribution_respects_bounds() {
        let mut rng = instance_rng("bounds", 0);
        for _ in 0..200 {
            let f = random_instance(&mut rng);
            assert!((1..=3).contains(&f.dimension()));
            assert!((1..=5).contains(&f.plus_pieces().len()));
            assert!((1..=5).contains(&f.minus_pieces().len()));
            for p in f.plus_pieces().iter().chain(f.minus_pieces()) {
                for r in std::iter::once(&p.constant).chain(&p.gradient) {
                    assert!(*r.numer() >= BigInt::from(-8) * r.denom());
                    assert!(*r.numer() <= BigInt::from(8) * r.denom());
                }
            }
        }
    }

    #[test]
    fn fnv_matches_reference_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    }
}
