//! Brute-force falsifiers, independent of the condition checkers: exact
//! lattice extrema and deterministic recession-direction sampling.
//!
//! The oracle can only falsify. A negative lattice minimum disproves
//! `h >= 0`; a sampled direction of negative recession disproves
//! boundedness below. Silence proves nothing: the lattice is finite and
//! the direction set is a sample.
//!
//! Lattice scans run on scaled integers whenever the instance and grid
//! denominators allow it (they always do for the audit distribution), with
//! a rational fallback that computes the identical result otherwise. Both
//! paths enumerate in lexicographic order and break ties toward the
//! lexicographically smallest argument, so results are independent of the
//! execution mode.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dcfunc::PolyhedralDC;
use crate::par;
use crate::rational::{int, Rational};
use crate::Error;

pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

/// A symmetric lattice: points `-radius + k * step` per axis.
#[derive(Debug, Clone)]
pub struct GridSpec {
    radius: Rational,
    step: Rational,
    dimension: usize,
    point_budget: u64,
}

impl GridSpec {
    /// Validates that the step is positive, no larger than the box, and
    /// divides the box width evenly.
    pub fn new(radius: Rational, step: Rational, dimension: usize) -> Result<Self, Error> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if !radius.is_positive() || !step.is_positive() {
            return Err(Error::InvalidGrid("radius and step must be positive".into()));
        }
        let width = &radius * int(2);
        if step > width {
            return Err(Error::InvalidGrid("step exceeds the box width".into()));
        }
        if !(&width / &step).is_integer() {
            return Err(Error::InvalidGrid(
                "step must divide the box width evenly".into(),
            ));
        }
        Ok(Self {
            radius,
            step,
            dimension,
            point_budget: DEFAULT_POINT_BUDGET,
        })
    }

    pub fn with_point_budget(mut self, budget: u64) -> Self {
        self.point_budget = budget;
        self
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn step(&self) -> &Rational {
        &self.step
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points_per_axis(&self) -> u64 {
        let count = (&self.radius * int(2) / &self.step).to_integer();
        count.to_u64().expect("axis point counts fit in u64") + 1
    }

    fn total_points(&self) -> u128 {
        let per_axis = self.points_per_axis() as u128;
        (0..self.dimension).fold(1u128, |acc, _| acc.saturating_mul(per_axis))
    }

    /// The lattice coordinate `-radius + k * step`.
    fn coordinate(&self, k: u64) -> Rational {
        -&self.radius + &self.step * int(k as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Objective {
    Min,
    Max,
}

/// Exact lattice minimum of `h` with the lexicographically smallest
/// minimizer.
pub fn grid_min(
    h: &PolyhedralDC,
    grid: &GridSpec,
) -> Result<(Rational, Vec<Rational>), Error> {
    scan(h, grid, Objective::Min, false)
}

/// Exact lattice maximum of `h` with the lexicographically smallest
/// maximizer.
pub fn grid_max(
    h: &PolyhedralDC,
    grid: &GridSpec,
) -> Result<(Rational, Vec<Rational>), Error> {
    scan(h, grid, Objective::Max, false)
}

/// Sequential twin of [`grid_min`]; same result, no fan-out.
pub fn grid_min_sequential(
    h: &PolyhedralDC,
    grid: &GridSpec,
) -> Result<(Rational, Vec<Rational>), Error> {
    scan(h, grid, Objective::Min, true)
}

/// Sequential twin of [`grid_max`].
pub fn grid_max_sequential(
    h: &PolyhedralDC,
    grid: &GridSpec,
) -> Result<(Rational, Vec<Rational>), Error> {
    scan(h, grid, Objective::Max, true)
}

fn scan(
    h: &PolyhedralDC,
    grid: &GridSpec,
    objective: Objective,
    sequential: bool,
) -> Result<(Rational, Vec<Rational>), Error> {
    if grid.dimension != h.dimension() {
        return Err(Error::DimensionMismatch {
            expected: h.dimension(),
            got: grid.dimension,
        });
    }
    let total = grid.total_points();
    if total > grid.point_budget as u128 {
        return Err(Error::GridTooLarge {
            points: total,
            budget: grid.point_budget,
        });
    }
    let (value, flat) = match IntScan::prepare(h, grid) {
        Some(scan) => scan.run(grid, objective, sequential),
        None => scan_rational(h, grid, objective, sequential),
    };
    let coords = decode(grid, flat);
    debug_assert_eq!(h.eval(&coords).unwrap(), value);
    Ok((value, coords))
}

fn decode(grid: &GridSpec, mut flat: u64) -> Vec<Rational> {
    let per_axis = grid.points_per_axis();
    let mut digits = vec![0u64; grid.dimension];
    for d in digits.iter_mut().rev() {
        *d = flat % per_axis;
        flat /= per_axis;
    }
    digits.into_iter().map(|k| grid.coordinate(k)).collect()
}

fn better(objective: Objective, a: &(Rational, u64), b: &(Rational, u64)) -> bool {
    // Is `a` strictly preferable over `b`?
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Less => objective == Objective::Min,
        std::cmp::Ordering::Greater => objective == Objective::Max,
        std::cmp::Ordering::Equal => a.1 < b.1,
    }
}

fn scan_rational(
    h: &PolyhedralDC,
    grid: &GridSpec,
    objective: Objective,
    sequential: bool,
) -> (Rational, u64) {
    let per_axis = grid.points_per_axis();
    let slab_size = (0..grid.dimension - 1).fold(1u64, |acc, _| acc * per_axis);
    let eval_slab = |slab: usize| {
        let mut best: Option<(Rational, u64)> = None;
        for offset in 0..slab_size {
            let flat = slab as u64 * slab_size + offset;
            let coords = decode(grid, flat);
            let value = h.eval(&coords).expect("lattice points match the dimension");
            let candidate = (value, flat);
            if best.as_ref().is_none_or(|b| better(objective, &candidate, b)) {
                best = Some(candidate);
            }
        }
        best.expect("slabs are nonempty")
    };
    let merge = |a: (Rational, u64), b: (Rational, u64)| {
        if better(objective, &b, &a) {
            b
        } else {
            a
        }
    };
    let fold = if sequential { par::fold_indexed_seq } else { par::fold_indexed };
    fold(per_axis as usize, &eval_slab, &merge).expect("grids are nonempty")
}

/// Scaled-integer lattice scan. Every piece value times `scale` is an
/// integer on the lattice; per-axis contribution tables turn one point
/// evaluation into one addition per piece.
struct IntScan {
    /// `scale * constant` per piece, plus pieces first.
    bases: Vec<i64>,
    /// `tables[axis][k][piece] = scale * gradient[axis] * coordinate(k)`.
    tables: Vec<Vec<Vec<i64>>>,
    split: usize,
    scale: BigInt,
}

impl IntScan {
    fn prepare(h: &PolyhedralDC, grid: &GridSpec) -> Option<IntScan> {
        let pieces: Vec<_> = h.plus_pieces().iter().chain(h.minus_pieces()).collect();
        let mut denom_lcm = BigInt::one();
        for p in &pieces {
            denom_lcm = denom_lcm.lcm(p.constant.denom());
            for g in &p.gradient {
                denom_lcm = denom_lcm.lcm(g.denom());
            }
        }
        let lattice_lcm = grid.radius.denom().lcm(grid.step.denom());
        let scale = Rational::from_integer(denom_lcm * lattice_lcm);

        // Overflow guard: the largest partial sum is bounded by the base
        // magnitude plus the per-axis table maxima.
        let limit = BigInt::from(i64::MAX / 4);
        let per_axis = grid.points_per_axis();
        let max_coord = grid
            .coordinate(0)
            .abs()
            .max(grid.coordinate(per_axis - 1).abs());
        for p in &pieces {
            let mut bound = (&p.constant * &scale).abs();
            for g in &p.gradient {
                bound += (g * &scale).abs() * &max_coord;
            }
            if bound.to_integer() >= limit {
                return None;
            }
        }

        let to_i64 = |r: Rational| -> Option<i64> {
            debug_assert!(r.is_integer());
            r.to_integer().to_i64()
        };
        let bases = pieces
            .iter()
            .map(|p| to_i64(&p.constant * &scale))
            .collect::<Option<Vec<_>>>()?;
        let mut tables = Vec::with_capacity(grid.dimension);
        for axis in 0..grid.dimension {
            let mut per_k = Vec::with_capacity(per_axis as usize);
            for k in 0..per_axis {
                let coord = grid.coordinate(k);
                let row = pieces
                    .iter()
                    .map(|p| to_i64(&p.gradient[axis] * &coord * &scale))
                    .collect::<Option<Vec<_>>>()?;
                per_k.push(row);
            }
            tables.push(per_k);
        }
        Some(IntScan {
            bases,
            tables,
            split: h.plus_pieces().len(),
            scale: scale.to_integer(),
        })
    }

    fn leaf_value(&self, acc: &[i64]) -> i64 {
        let plus = acc[..self.split].iter().copied().max().unwrap();
        let minus = acc[self.split..].iter().copied().max().unwrap();
        plus - minus
    }

    fn scan_below(
        &self,
        axis: usize,
        acc: &[i64],
        flat: u64,
        objective: Objective,
        best: &mut Option<(i64, u64)>,
    ) {
        let per_axis = self.tables[axis].len() as u64;
        let mut next = vec![0i64; acc.len()];
        for k in 0..per_axis {
            let row = &self.tables[axis][k as usize];
            for (dst, (a, t)) in next.iter_mut().zip(acc.iter().zip(row)) {
                *dst = a + t;
            }
            let flat = flat * per_axis + k;
            if axis + 1 == self.tables.len() {
                let value = self.leaf_value(&next);
                let candidate = (value, flat);
                let improves = best.is_none_or(|(bv, bf)| match objective {
                    Objective::Min => value < bv || (value == bv && flat < bf),
                    Objective::Max => value > bv || (value == bv && flat < bf),
                });
                if improves {
                    *best = Some(candidate);
                }
            } else {
                self.scan_below(axis + 1, &next, flat, objective, best);
            }
        }
    }

    fn run(&self, grid: &GridSpec, objective: Objective, sequential: bool) -> (Rational, u64) {
        let per_axis = grid.points_per_axis();
        let eval_slab = |slab: usize| {
            let mut acc = self.bases.clone();
            let row = &self.tables[0][slab];
            for (a, t) in acc.iter_mut().zip(row) {
                *a += t;
            }
            let mut best = None;
            if self.tables.len() == 1 {
                best = Some((self.leaf_value(&acc), slab as u64));
            } else {
                self.scan_below(1, &acc, slab as u64, objective, &mut best);
            }
            best.expect("slabs are nonempty")
        };
        let merge = |a: (i64, u64), b: (i64, u64)| {
            let b_better = match objective {
                Objective::Min => b.0 < a.0 || (b.0 == a.0 && b.1 < a.1),
                Objective::Max => b.0 > a.0 || (b.0 == a.0 && b.1 < a.1),
            };
            if b_better {
                b
            } else {
                a
            }
        };
        let fold = if sequential { par::fold_indexed_seq } else { par::fold_indexed };
        let (value, flat) =
            fold(per_axis as usize, &eval_slab, &merge).expect("grids are nonempty");
        (
            Rational::new(BigInt::from(value), self.scale.clone()),
            flat,
        )
    }
}

/// First sampled direction with negative recession, or `None`.
///
/// Directions are a fixed deterministic scheme: for one dimension the pair
/// `{1, -1}`; otherwise the signed coordinate axes followed by a Halton
/// sequence in the first `n` prime bases, phase-shifted by a hash of the
/// instance. Everything is exact rational.
pub fn sample_recession(h: &PolyhedralDC, count: usize) -> Option<Vec<Rational>> {
    directions(h, count)
        .into_iter()
        .find(|d| h.recession(d).expect("directions match the dimension").is_negative())
}

fn directions(h: &PolyhedralDC, count: usize) -> Vec<Vec<Rational>> {
    let n = h.dimension();
    if n == 1 {
        return [vec![int(1)], vec![int(-1)]]
            .into_iter()
            .take(count)
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    for axis in 0..n {
        for sign in [1, -1] {
            let mut d = crate::rational::zeros(n);
            d[axis] = int(sign);
            out.push(d);
        }
    }
    out.truncate(count);
    let offset = instance_hash(h) % 997;
    let mut k = offset + 1;
    while out.len() < count {
        let d: Vec<Rational> = (0..n)
            .map(|c| van_der_corput(k, nth_prime(c)) * int(2) - int(1))
            .collect();
        if d.iter().any(|c| !c.is_zero()) {
            out.push(d);
        }
        k += 1;
    }
    out
}

/// Radical-inverse of `k` in the given base, exactly.
fn van_der_corput(mut k: u64, base: u64) -> Rational {
    let mut value = Rational::zero();
    let mut denom = int(base as i64);
    while k > 0 {
        value += Rational::new(BigInt::from(k % base), denom.numer().clone());
        k /= base;
        denom *= int(base as i64);
    }
    value
}

fn nth_prime(index: usize) -> u64 {
    let mut found = 0;
    let mut candidate = 1u64;
    loop {
        candidate += 1;
        if (2..candidate).take_while(|d| d * d <= candidate).all(|d| candidate % d != 0) {
            if found == index {
                return candidate;
            }
            found += 1;
        }
    }
}

/// FNV-1a over a canonical rendering of the instance; a pure function, so
/// sampling stays reproducible.
fn instance_hash(h: &PolyhedralDC) -> u64 {
    let mut text = format!("{}", h.dimension());
    for p in h.plus_pieces().iter().chain(h.minus_pieces()) {
        text.push('|');
        text.push_str(&p.constant.to_string());
        for g in &p.gradient {
            text.push(',');
            text.push_str(&g.to_string());
        }
    }
    crate::sample::fnv1a64(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::testfx;

    fn grid(radius: i64, step: (i64, i64), dim: usize) -> GridSpec {
        GridSpec::new(int(radius), ratio(step.0, step.1), dim).unwrap()
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(int(5), ratio(1, 4), 1).is_ok());
        assert!(GridSpec::new(int(5), int(0), 1).is_err());
        assert!(GridSpec::new(int(5), int(11), 1).is_err());
        // 10 / (1/3) = 30 is exact, 10 / (3/7) is not.
        assert!(GridSpec::new(int(5), ratio(1, 3), 1).is_ok());
        assert!(GridSpec::new(int(5), ratio(3, 7), 1).is_err());
        assert!(GridSpec::new(int(5), ratio(1, 4), 0).is_err());
    }

    #[test]
    fn example1_lattice_minimum() {
        let g = grid(5, (1, 4), 1);
        assert_eq!(g.points_per_axis(), 41);
        // The plateau-vs-slope crossing bottoms out at |delta| = 2:
        // h(2) = max{0,0,-8} - max{1,0,-3} = -1, below h(3/2) = -1/2.
        let h = testfx::example1();
        assert_eq!(h.eval(&[ratio(3, 2)]).unwrap(), ratio(-1, 2));
        assert_eq!(h.eval(&[int(2)]).unwrap(), int(-1));
        let (value, argmin) = grid_min(&h, &g).unwrap();
        assert_eq!(value, int(-1));
        assert_eq!(argmin, vec![int(-2)]);
    }

    #[test]
    fn example1_max_on_the_box() {
        let (value, argmax) = grid_max(&testfx::example1(), &grid(5, (1, 4), 1)).unwrap();
        assert_eq!(value, int(2));
        assert_eq!(argmax, vec![int(-5)]);
    }

    #[test]
    fn zero_function_min_ties_to_first_corner() {
        let (value, argmin) = grid_min(&testfx::zero_function(), &grid(5, (1, 4), 1)).unwrap();
        assert_eq!(value, int(0));
        assert_eq!(argmin, vec![int(-5)]);
    }

    #[test]
    fn example2_x1_is_nonnegative_on_the_lattice() {
        let (value, _) = grid_min(&testfx::example2_x1(), &grid(5, (1, 4), 1)).unwrap();
        assert_eq!(value, int(0));
    }

    #[test]
    fn budget_is_enforced() {
        let g = grid(5, (1, 4), 1).with_point_budget(40);
        assert!(matches!(
            grid_min(&testfx::example1(), &g),
            Err(Error::GridTooLarge { points: 41, budget: 40 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        assert!(matches!(
            grid_min(&testfx::example1(), &grid(5, (1, 4), 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sequential_and_default_agree() {
        let h = testfx::example1();
        let g = grid(5, (1, 4), 1);
        assert_eq!(grid_min(&h, &g).unwrap(), grid_min_sequential(&h, &g).unwrap());
        assert_eq!(grid_max(&h, &g).unwrap(), grid_max_sequential(&h, &g).unwrap());
    }

    #[test]
    fn recession_sampling() {
        assert_eq!(sample_recession(&testfx::example1(), 64), None);
        assert_eq!(sample_recession(&testfx::neg_abs(), 64), Some(vec![int(1)]));
        assert_eq!(sample_recession(&testfx::zero_function(), 64), None);
    }

    #[test]
    fn recession_sampling_is_deterministic() {
        let h = crate::dcfunc::PolyhedralDC::new(
            2,
            crate::dcfunc::pieces_from([(int(0), vec![int(1), int(0)])]),
            crate::dcfunc::pieces_from([(int(0), vec![int(0), int(2)])]),
        )
        .unwrap();
        let a = sample_recession(&h, 64);
        let b = sample_recession(&h, 64);
        assert_eq!(a, b);
        assert!(a.is_some(), "negative recession along the second axis");
        let d = a.unwrap();
        assert!(h.recession(&d).unwrap().is_negative());
    }

    #[test]
    fn van_der_corput_prefix() {
        assert_eq!(van_der_corput(1, 2), ratio(1, 2));
        assert_eq!(van_der_corput(2, 2), ratio(1, 4));
        assert_eq!(van_der_corput(3, 2), ratio(3, 4));
        assert_eq!(van_der_corput(1, 3), ratio(1, 3));
        assert_eq!(van_der_corput(4, 3), ratio(4, 9));
    }

    #[test]
    fn primes_start_correctly() {
        let primes: Vec<u64> = (0..6).map(nth_prime).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn integer_and_rational_scans_agree() {
        for index in 0..12 {
            let f = crate::sample::random_instance(&mut crate::sample::instance_rng(
                "scan-paths",
                index,
            ));
            let g = GridSpec::new(int(2), ratio(1, 2), f.dimension()).unwrap();
            for objective in [Objective::Min, Objective::Max] {
                let fast = IntScan::prepare(&f, &g)
                    .expect("small entries always fit the integer path")
                    .run(&g, objective, false);
                let slow = scan_rational(&f, &g, objective, false);
                assert_eq!(fast, slow, "instance {index}");
            }
        }
    }

    #[test]
    fn oversized_entries_fall_back_to_rational_scan() {
        let huge = Rational::from_integer(BigInt::from(1) << 70);
        let f = crate::dcfunc::PolyhedralDC::new(
            1,
            vec![crate::dcfunc::AffinePiece::new(huge.clone(), vec![int(1)])],
            vec![crate::dcfunc::AffinePiece::new(int(0), vec![int(0)])],
        )
        .unwrap();
        let g = grid(2, (1, 2), 1);
        assert!(IntScan::prepare(&f, &g).is_none());
        let (value, argmin) = grid_min(&f, &g).unwrap();
        assert_eq!(value, &huge - int(2));
        assert_eq!(argmin, vec![int(-2)]);
    }
}
