//! Randomized cross-validation of the checkers: route equivalence, oracle
//! soundness, witness verification, and the implications between the
//! boundedness and sign conditions, over a deterministic instance stream.

use num_traits::Signed;

use crate::conditions::{
    self, equivalence_audit, CheckKind, Verdict,
};
use crate::dcfunc::{NormalizedDC, PolyhedralDC};
use crate::oracle::{grid_max, grid_min, sample_recession, GridSpec, DEFAULT_POINT_BUDGET};
use crate::par;
use crate::rational::{int, ratio, Rational};
use crate::sample;
use crate::Error;

/// Parameters of one audit run. The defaults pin the documented oracle:
/// lattice radius 5 with step 1/4 and 64 recession directions.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub count: usize,
    pub seed_label: String,
    pub grid_radius: Rational,
    pub grid_step: Rational,
    pub recession_directions: usize,
    pub point_budget: u64,
}

impl AuditConfig {
    pub fn new(count: usize, seed_label: &str) -> Self {
        Self {
            count,
            seed_label: seed_label.to_string(),
            grid_radius: int(5),
            grid_step: ratio(1, 4),
            recession_directions: 64,
            point_budget: DEFAULT_POINT_BUDGET,
        }
    }
}

/// Everything the audit established about one instance.
#[derive(Debug, Clone)]
pub struct InstanceReport {
    pub index: usize,
    pub dimension: usize,
    pub plus_count: usize,
    pub minus_count: usize,
    /// `holds` per check in [`CheckKind::ALL`] order; `None` when a route
    /// disagreement aborted that checker.
    pub holds: [Option<bool>; 4],
    pub routes_agree: bool,
    pub oracle_consistent: bool,
    pub witnesses_verified: bool,
    pub implications_hold: bool,
}

impl InstanceReport {
    pub fn clean(&self) -> bool {
        self.routes_agree
            && self.oracle_consistent
            && self.witnesses_verified
            && self.implications_hold
    }
}

/// Aggregate of one audit run.
#[derive(Debug, Clone)]
pub struct AuditSummary {
    pub seed_label: String,
    pub instances: Vec<InstanceReport>,
}

impl AuditSummary {
    pub fn disagreements(&self) -> usize {
        self.instances.iter().filter(|i| !i.routes_agree).count()
    }

    pub fn oracle_violations(&self) -> usize {
        self.instances.iter().filter(|i| !i.oracle_consistent).count()
    }

    pub fn witness_failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.witnesses_verified).count()
    }

    pub fn implication_failures(&self) -> usize {
        self.instances.iter().filter(|i| !i.implications_hold).count()
    }

    pub fn clean(&self) -> bool {
        self.instances.iter().all(InstanceReport::clean)
    }
}

/// Runs the audit, fanning instances out in parallel when enabled. Identical
/// inputs produce identical summaries in either mode.
pub fn run_audit(config: &AuditConfig) -> Result<AuditSummary, Error> {
    collect(config, par::map_indexed(config.count, |i| audit_instance(config, i)))
}

/// Sequential twin of [`run_audit`] for the bench comparison.
pub fn run_audit_sequential(config: &AuditConfig) -> Result<AuditSummary, Error> {
    collect(config, par::map_indexed_seq(config.count, |i| audit_instance(config, i)))
}

fn collect(
    config: &AuditConfig,
    results: Vec<Result<InstanceReport, Error>>,
) -> Result<AuditSummary, Error> {
    Ok(AuditSummary {
        seed_label: config.seed_label.clone(),
        instances: results.into_iter().collect::<Result<_, _>>()?,
    })
}

fn run_checker(kind: CheckKind, h: &NormalizedDC) -> Result<Option<Verdict>, Error> {
    let outcome = match kind {
        CheckKind::BoundedBelow => conditions::bounded_below(h),
        CheckKind::BoundedAbove => conditions::bounded_above(h),
        CheckKind::MinCondition => conditions::min_condition(h),
        CheckKind::MaxCondition => conditions::max_condition(h),
    };
    match outcome {
        Ok(verdict) => Ok(Some(verdict)),
        // A disagreement is what the audit exists to count, not a crash.
        Err(Error::RouteDisagreement { .. }) => Ok(None),
        Err(other) => Err(other),
    }
}

fn witness_is_valid(verdict: &Verdict, f: &PolyhedralDC) -> Result<bool, Error> {
    if verdict.holds {
        return Ok(verdict.witness.is_none());
    }
    let Some(witness) = &verdict.witness else {
        return Ok(false);
    };
    Ok(match verdict.check {
        CheckKind::BoundedBelow => f.recession(witness)?.is_negative(),
        CheckKind::BoundedAbove => f.recession(witness)?.is_positive(),
        CheckKind::MinCondition => f.eval(witness)?.is_negative(),
        CheckKind::MaxCondition => f.eval(witness)?.is_positive(),
    })
}

fn audit_instance(config: &AuditConfig, index: usize) -> Result<InstanceReport, Error> {
    let mut rng = sample::instance_rng(&config.seed_label, index as u64);
    let f = sample::random_instance(&mut rng);
    let h = f.normalize();
    let fun = h.function();

    let routes_agree = equivalence_audit(&h).agrees();

    let mut holds = [None; 4];
    let mut witnesses_verified = true;
    for (slot, kind) in holds.iter_mut().zip(CheckKind::ALL) {
        if let Some(verdict) = run_checker(kind, &h)? {
            *slot = Some(verdict.holds);
            witnesses_verified &= witness_is_valid(&verdict, fun)?;
        }
    }
    let [below, above, min, max] = holds;

    let grid = GridSpec::new(
        config.grid_radius.clone(),
        config.grid_step.clone(),
        fun.dimension(),
    )?
    .with_point_budget(config.point_budget);
    let (lattice_min, _) = grid_min(fun, &grid)?;
    let (lattice_max, _) = grid_max(fun, &grid)?;
    let falling = sample_recession(fun, config.recession_directions);
    let mirrored = PolyhedralDC::new(
        fun.dimension(),
        fun.minus_pieces().to_vec(),
        fun.plus_pieces().to_vec(),
    )?;
    let rising = sample_recession(&mirrored, config.recession_directions);

    // One-sided soundness: the oracle may stay silent, but whenever it
    // falsifies, the corresponding checker must have failed.
    let oracle_consistent = !(min == Some(true) && lattice_min.is_negative())
        && !(max == Some(true) && lattice_max.is_positive())
        && !(below == Some(true) && falling.is_some())
        && !(above == Some(true) && rising.is_some());

    let implications_hold = !(min == Some(true) && below == Some(false))
        && !(max == Some(true) && above == Some(false));

    Ok(InstanceReport {
        index,
        dimension: fun.dimension(),
        plus_count: fun.plus_pieces().len(),
        minus_count: fun.minus_pieces().len(),
        holds,
        routes_agree,
        oracle_consistent,
        witnesses_verified,
        implications_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_audit_is_clean_and_reproducible() {
        let config = AuditConfig::new(25, "unit");
        let a = run_audit(&config).unwrap();
        assert_eq!(a.instances.len(), 25);
        assert!(a.clean(), "disagreements: {}", a.disagreements());
        let b = run_audit_sequential(&config).unwrap();
        assert_eq!(a.instances.len(), b.instances.len());
        for (x, y) in a.instances.iter().zip(&b.instances) {
            assert_eq!(x.holds, y.holds);
            assert_eq!(x.dimension, y.dimension);
        }
    }

    #[test]
    fn labels_change_the_stream() {
        let a = run_audit(&AuditConfig::new(3, "one")).unwrap();
        let b = run_audit(&AuditConfig::new(3, "two")).unwrap();
        let shapes = |s: &AuditSummary| -> Vec<(usize, usize, usize)> {
            s.instances
                .iter()
                .map(|i| (i.dimension, i.plus_count, i.minus_count))
                .collect()
        };
        assert_ne!(shapes(&a), shapes(&b));
    }
}
