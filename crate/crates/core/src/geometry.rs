//! Exact feasibility over convex-combination variables, plus the geometric
//! predicates the theorem checkers are made of: hull membership, polytope
//! against the height axis or one of its rays, and hull-hull intersection.
//!
//! Every verdict carries a certificate. A feasible certificate lists convex
//! multipliers per generator block; substituting them satisfies every
//! constraint exactly. An infeasible certificate is a linear functional and
//! a bound that strictly separate the generators from the target object,
//! together with the Farkas row multipliers it was derived from. Both kinds
//! are re-verified by direct substitution before they are returned, so a
//! defect in the pivoting logic cannot silently flip a verdict.

mod simplex;

use num_traits::{One, Signed, Zero};

pub use simplex::Relation;
use simplex::{solve, LpOutcome, LpRow, StandardLp};

use crate::approx::{LiftedPoint, Polytope};
use crate::rational::{dot, zeros, Rational};
use crate::Error;

/// Feasibility of one or two convex hulls subject to linear conditions on
/// the points drawn from them. Each block contributes one convex-multiplier
/// vector; each condition applies one coefficient row per block to the
/// blocks' combination points.
#[derive(Debug, Clone)]
pub struct FeasibilityProblem {
    pub blocks: Vec<Vec<Vec<Rational>>>,
    pub conditions: Vec<LinearCondition>,
}

/// `sum_b <block_coeffs[b], point_b>  (relation)  rhs`.
#[derive(Debug, Clone)]
pub struct LinearCondition {
    pub block_coeffs: Vec<Vec<Rational>>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Outcome of a feasibility question, exact in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Convex multipliers per block; nonnegative, each block summing to one.
    Feasible { multipliers: Vec<Vec<Rational>> },
    /// A separating functional over the first block's ambient space: every
    /// generator of block one scores at most `bound`, while the object the
    /// problem asked to reach scores strictly above it. `row_multipliers`
    /// holds the Farkas dual (convexity rows first, then conditions).
    Infeasible {
        functional: Vec<Rational>,
        bound: Rational,
        row_multipliers: Vec<Rational>,
    },
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible { .. })
    }
}

impl FeasibilityProblem {
    fn validate(&self) -> Result<(), Error> {
        if self.blocks.is_empty() || self.blocks.len() > 2 {
            return Err(Error::MalformedProblem(format!(
                "expected one or two generator blocks, got {}",
                self.blocks.len()
            )));
        }
        let mut widths = Vec::new();
        for block in &self.blocks {
            let Some(first) = block.first() else {
                return Err(Error::MalformedProblem("empty generator block".into()));
            };
            widths.push(first.len());
            if block.iter().any(|g| g.len() != first.len()) {
                return Err(Error::MalformedProblem(
                    "generators of one block differ in width".into(),
                ));
            }
        }
        for cond in &self.conditions {
            if cond.block_coeffs.len() != self.blocks.len() {
                return Err(Error::MalformedProblem(
                    "condition does not cover every block".into(),
                ));
            }
            for (coeffs, width) in cond.block_coeffs.iter().zip(&widths) {
                if coeffs.len() != *width {
                    return Err(Error::MalformedProblem(format!(
                        "condition row width {} does not match block width {width}",
                        coeffs.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The combination points `sum_k multipliers[b][k] * generator[b][k]`.
    fn combination(&self, multipliers: &[Vec<Rational>], block: usize) -> Vec<Rational> {
        let generators = &self.blocks[block];
        let mut point = zeros(generators[0].len());
        for (lambda, generator) in multipliers[block].iter().zip(generators) {
            for (acc, coord) in point.iter_mut().zip(generator) {
                *acc = &*acc + &(lambda * coord);
            }
        }
        point
    }

    /// Substitutes a certificate and checks it, independently of the solver.
    pub fn verify(&self, certificate: &Certificate) -> bool {
        if self.validate().is_err() {
            return false;
        }
        match certificate {
            Certificate::Feasible { multipliers } => self.verify_feasible(multipliers),
            Certificate::Infeasible { row_multipliers, .. } => self.verify_farkas(row_multipliers),
        }
    }

    fn verify_feasible(&self, multipliers: &[Vec<Rational>]) -> bool {
        if multipliers.len() != self.blocks.len() {
            return false;
        }
        for (lambdas, block) in multipliers.iter().zip(&self.blocks) {
            if lambdas.len() != block.len()
                || lambdas.iter().any(|l| l.is_negative())
                || !lambdas.iter().sum::<Rational>().is_one()
            {
                return false;
            }
        }
        let points: Vec<_> = (0..self.blocks.len())
            .map(|b| self.combination(multipliers, b))
            .collect();
        self.conditions.iter().all(|cond| {
            let lhs: Rational = cond
                .block_coeffs
                .iter()
                .zip(&points)
                .map(|(coeffs, point)| dot(coeffs, point))
                .sum();
            match cond.relation {
                Relation::Eq => lhs == cond.rhs,
                Relation::Le => lhs <= cond.rhs,
                Relation::Ge => lhs >= cond.rhs,
            }
        })
    }

    /// Farkas check: with `y` split into per-block convexity duals and
    /// per-condition duals, every generator column must price nonpositive
    /// while the right-hand sides combine to something positive.
    fn verify_farkas(&self, y: &[Rational]) -> bool {
        let nb = self.blocks.len();
        if y.len() != nb + self.conditions.len() {
            return false;
        }
        let sign_ok = self.conditions.iter().zip(&y[nb..]).all(|(c, yr)| match c.relation {
            Relation::Eq => true,
            Relation::Le => !yr.is_positive(),
            Relation::Ge => !yr.is_negative(),
        });
        if !sign_ok {
            return false;
        }
        for (b, block) in self.blocks.iter().enumerate() {
            for generator in block {
                let mut price = y[b].clone();
                for (cond, yr) in self.conditions.iter().zip(&y[nb..]) {
                    price += yr * &dot(&cond.block_coeffs[b], generator);
                }
                if price.is_positive() {
                    return false;
                }
            }
        }
        let rhs_combo: Rational = y[..nb].iter().cloned().sum::<Rational>()
            + self
                .conditions
                .iter()
                .zip(&y[nb..])
                .map(|(c, yr)| yr * &c.rhs)
                .sum::<Rational>();
        rhs_combo.is_positive()
    }
}

/// Decides a [`FeasibilityProblem`] exactly, returning a verified
/// certificate either way.
pub fn solve_feasibility(problem: &FeasibilityProblem) -> Result<Certificate, Error> {
    problem.validate()?;
    let num_vars: usize = problem.blocks.iter().map(Vec::len).sum();
    let nb = problem.blocks.len();
    let mut rows = Vec::with_capacity(nb + problem.conditions.len());

    let mut offsets = Vec::with_capacity(nb);
    let mut offset = 0;
    for block in &problem.blocks {
        offsets.push(offset);
        let mut coeffs = zeros(num_vars);
        for cell in coeffs.iter_mut().skip(offset).take(block.len()) {
            *cell = Rational::one();
        }
        rows.push(LpRow { coeffs, relation: Relation::Eq, rhs: Rational::one() });
        offset += block.len();
    }
    for cond in &problem.conditions {
        let mut coeffs = zeros(num_vars);
        for (b, block) in problem.blocks.iter().enumerate() {
            for (k, generator) in block.iter().enumerate() {
                coeffs[offsets[b] + k] = dot(&cond.block_coeffs[b], generator);
            }
        }
        rows.push(LpRow { coeffs, relation: cond.relation, rhs: cond.rhs.clone() });
    }

    let lp = StandardLp { num_vars, objective: zeros(num_vars), rows };
    let certificate = match solve(&lp) {
        LpOutcome::Optimal { x, .. } => {
            let multipliers = problem
                .blocks
                .iter()
                .zip(&offsets)
                .map(|(block, &at)| x[at..at + block.len()].to_vec())
                .collect();
            Certificate::Feasible { multipliers }
        }
        LpOutcome::Infeasible { farkas } => {
            let width = problem.blocks[0][0].len();
            let mut functional = zeros(width);
            for (cond, yr) in problem.conditions.iter().zip(&farkas[nb..]) {
                for (phi, coeff) in functional.iter_mut().zip(&cond.block_coeffs[0]) {
                    *phi = &*phi + &(yr * coeff);
                }
            }
            Certificate::Infeasible {
                functional,
                bound: -farkas[0].clone(),
                row_multipliers: farkas,
            }
        }
        LpOutcome::Unbounded => unreachable!("feasibility problems have a zero objective"),
    };
    assert!(
        problem.verify(&certificate),
        "solver produced a certificate that fails substitution"
    );
    Ok(certificate)
}

/// Which ray of the height axis to intersect with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaySign {
    Nonnegative,
    Nonpositive,
}

fn lifted_coords(p: &LiftedPoint) -> Vec<Rational> {
    let mut v = Vec::with_capacity(p.gradient.len() + 1);
    v.push(p.height.clone());
    v.extend(p.gradient.iter().cloned());
    v
}

fn unit(len: usize, at: usize) -> Vec<Rational> {
    let mut v = zeros(len);
    v[at] = Rational::one();
    v
}

/// Is `query` in the convex hull of `points`?
pub fn hull_contains(points: &[Vec<Rational>], query: &[Rational]) -> Result<Certificate, Error> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyPieceList);
    };
    let width = first.len();
    for p in points.iter().chain(std::iter::once(&query.to_vec())) {
        if p.len() != width {
            return Err(Error::DimensionMismatch { expected: width, got: p.len() });
        }
    }
    let problem = FeasibilityProblem {
        blocks: vec![points.to_vec()],
        conditions: (0..width)
            .map(|c| LinearCondition {
                block_coeffs: vec![unit(width, c)],
                relation: Relation::Eq,
                rhs: query[c].clone(),
            })
            .collect(),
    };
    let certificate = solve_feasibility(&problem)?;
    assert!(verify_hull_contains(points, query, &certificate));
    Ok(certificate)
}

/// Does the polytope meet the height axis `{(a, 0) : a real}`?
pub fn polytope_meets_line(c: &Polytope) -> Certificate {
    axis_problem(c, None)
}

/// Does the polytope meet the closed ray of the height axis with the
/// requested height sign?
pub fn polytope_meets_ray(c: &Polytope, sign: RaySign) -> Certificate {
    axis_problem(c, Some(sign))
}

fn axis_problem(c: &Polytope, sign: Option<RaySign>) -> Certificate {
    let n = c.gradient_dim();
    let width = n + 1;
    let mut conditions: Vec<LinearCondition> = (0..n)
        .map(|g| LinearCondition {
            block_coeffs: vec![unit(width, 1 + g)],
            relation: Relation::Eq,
            rhs: Rational::zero(),
        })
        .collect();
    if let Some(sign) = sign {
        conditions.push(LinearCondition {
            block_coeffs: vec![unit(width, 0)],
            relation: match sign {
                RaySign::Nonnegative => Relation::Ge,
                RaySign::Nonpositive => Relation::Le,
            },
            rhs: Rational::zero(),
        });
    }
    let problem = FeasibilityProblem {
        blocks: vec![c.vertices().iter().map(lifted_coords).collect()],
        conditions,
    };
    let certificate =
        solve_feasibility(&problem).expect("axis problems are well-formed by construction");
    let verified = match sign {
        None => verify_meets_line(c, &certificate),
        Some(sign) => verify_meets_ray(c, sign, &certificate),
    };
    assert!(verified);
    certificate
}

/// Do the convex hulls of the two vertex lists intersect?
pub fn hulls_intersect(a: &Polytope, b: &Polytope) -> Result<Certificate, Error> {
    if a.gradient_dim() != b.gradient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.gradient_dim() + 1,
            got: b.gradient_dim() + 1,
        });
    }
    let width = a.gradient_dim() + 1;
    let problem = FeasibilityProblem {
        blocks: vec![
            a.vertices().iter().map(lifted_coords).collect(),
            b.vertices().iter().map(lifted_coords).collect(),
        ],
        conditions: (0..width)
            .map(|c| LinearCondition {
                block_coeffs: vec![unit(width, c), unit(width, c).iter().map(|x| -x).collect()],
                relation: Relation::Eq,
                rhs: Rational::zero(),
            })
            .collect(),
    };
    let certificate = solve_feasibility(&problem)?;
    assert!(verify_hulls_intersect(a, b, &certificate));
    Ok(certificate)
}

/// The functional `(beta, d)` strictly separating `c` from the requested
/// ray: nonnegative on the ray, strictly negative on every vertex of `c`.
/// Fails with [`Error::NotSeparable`] when the polytope meets the ray.
pub fn separating_direction(
    c: &Polytope,
    sign: RaySign,
) -> Result<(Rational, Vec<Rational>), Error> {
    match polytope_meets_ray(c, sign) {
        Certificate::Feasible { .. } => Err(Error::NotSeparable),
        Certificate::Infeasible { functional, .. } => {
            Ok((functional[0].clone(), functional[1..].to_vec()))
        }
    }
}

fn feasible_point(generators: &[Vec<Rational>], lambdas: &[Rational]) -> Option<Vec<Rational>> {
    if lambdas.len() != generators.len()
        || lambdas.iter().any(|l| l.is_negative())
        || !lambdas.iter().sum::<Rational>().is_one()
    {
        return None;
    }
    let mut point = zeros(generators[0].len());
    for (lambda, g) in lambdas.iter().zip(generators) {
        for (acc, coord) in point.iter_mut().zip(g) {
            *acc = &*acc + &(lambda * coord);
        }
    }
    Some(point)
}

/// Checks a [`hull_contains`] certificate by substitution.
pub fn verify_hull_contains(
    points: &[Vec<Rational>],
    query: &[Rational],
    certificate: &Certificate,
) -> bool {
    match certificate {
        Certificate::Feasible { multipliers } => multipliers.len() == 1
            && feasible_point(points, &multipliers[0]).is_some_and(|p| p == query),
        Certificate::Infeasible { functional, bound, .. } => {
            points.iter().all(|p| dot(functional, p) <= *bound)
                && dot(functional, query) > *bound
        }
    }
}

fn verify_axis(c: &Polytope, certificate: &Certificate, sign: Option<RaySign>) -> bool {
    match certificate {
        Certificate::Feasible { multipliers } => {
            let generators: Vec<_> = c.vertices().iter().map(lifted_coords).collect();
            let Some(point) = (multipliers.len() == 1)
                .then(|| feasible_point(&generators, &multipliers[0]))
                .flatten()
            else {
                return false;
            };
            let gradient_zero = point[1..].iter().all(Zero::is_zero);
            let height_ok = match sign {
                None => true,
                Some(RaySign::Nonnegative) => !point[0].is_negative(),
                Some(RaySign::Nonpositive) => !point[0].is_positive(),
            };
            gradient_zero && height_ok
        }
        Certificate::Infeasible { functional, bound, .. } => {
            let beta_ok = match sign {
                None => functional[0].is_zero(),
                Some(RaySign::Nonnegative) => !functional[0].is_negative(),
                Some(RaySign::Nonpositive) => !functional[0].is_positive(),
            };
            beta_ok
                && bound.is_negative()
                && c.vertices()
                    .iter()
                    .all(|v| dot(functional, &lifted_coords(v)) <= *bound)
        }
    }
}

/// Checks a [`polytope_meets_line`] certificate by substitution.
pub fn verify_meets_line(c: &Polytope, certificate: &Certificate) -> bool {
    verify_axis(c, certificate, None)
}

/// Checks a [`polytope_meets_ray`] certificate by substitution.
pub fn verify_meets_ray(c: &Polytope, sign: RaySign, certificate: &Certificate) -> bool {
    verify_axis(c, certificate, Some(sign))
}

/// Checks a [`hulls_intersect`] certificate by substitution.
pub fn verify_hulls_intersect(a: &Polytope, b: &Polytope, certificate: &Certificate) -> bool {
    match certificate {
        Certificate::Feasible { multipliers } => {
            if multipliers.len() != 2 {
                return false;
            }
            let coords = |p: &Polytope| -> Vec<_> { p.vertices().iter().map(lifted_coords).collect() };
            match (
                feasible_point(&coords(a), &multipliers[0]),
                feasible_point(&coords(b), &multipliers[1]),
            ) {
                (Some(pa), Some(pb)) => pa == pb,
                _ => false,
            }
        }
        Certificate::Infeasible { functional, bound, .. } => {
            a.vertices()
                .iter()
                .all(|v| dot(functional, &lifted_coords(v)) <= *bound)
                && b.vertices()
                    .iter()
                    .all(|v| dot(functional, &lifted_coords(v)) > *bound)
        }
    }
}

/// Minimizes `max_k (constant_k + <gradient_k, delta>)` over the box
/// `[-radius, radius]^n` through the epigraph LP. Returns the exact minimum
/// and a minimizer. Used by the witness search of the condition checkers.
pub(crate) fn minimize_max_affine_over_box(
    forms: &[(Rational, Vec<Rational>)],
    dimension: usize,
    radius: &Rational,
) -> (Rational, Vec<Rational>) {
    // Variables: t = t+ - t-, delta_c = u_c - radius with u_c in [0, 2r].
    let num_vars = 2 + dimension;
    let mut rows = Vec::with_capacity(forms.len() + dimension);
    for (constant, gradient) in forms {
        let mut coeffs = zeros(num_vars);
        coeffs[0] = Rational::one();
        coeffs[1] = -Rational::one();
        let mut rhs = constant.clone();
        for (c, g) in gradient.iter().enumerate() {
            coeffs[2 + c] = -g;
            rhs -= g * radius;
        }
        rows.push(LpRow { coeffs, relation: Relation::Ge, rhs });
    }
    for c in 0..dimension {
        let mut coeffs = zeros(num_vars);
        coeffs[2 + c] = Rational::one();
        rows.push(LpRow {
            coeffs,
            relation: Relation::Le,
            rhs: radius * &crate::rational::int(2),
        });
    }
    let mut objective = zeros(num_vars);
    objective[0] = Rational::one();
    objective[1] = -Rational::one();
    match solve(&StandardLp { num_vars, objective, rows }) {
        LpOutcome::Optimal { x, value } => {
            let delta = (0..dimension).map(|c| &x[2 + c] - radius).collect();
            (value, delta)
        }
        other => unreachable!("box epigraph LPs are feasible and bounded, got {other:?}"),
    }
}

/// Mirror of [`minimize_max_affine_over_box`] for `max_delta min_k`.
pub(crate) fn maximize_min_affine_over_box(
    forms: &[(Rational, Vec<Rational>)],
    dimension: usize,
    radius: &Rational,
) -> (Rational, Vec<Rational>) {
    let negated: Vec<_> = forms
        .iter()
        .map(|(c, g)| (-c, g.iter().map(|x| -x).collect()))
        .collect();
    let (value, delta) = minimize_max_affine_over_box(&negated, dimension, radius);
    (-value, delta)
}
