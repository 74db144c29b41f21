//! Codifferential and coexhauster representations of a normalized
//! polyhedral DC function.
//!
//! Both live in the lifted space: each generator is a pair of a height (the
//! constant coordinate) and a gradient. The codifferential is one pair of
//! polytopes; a coexhauster is a finite family of polytopes obtained by
//! translating one codifferential set by the vertices of the other. Vertex
//! lists are kept exactly as constructed, never pruned to extreme points, so
//! the listed sets stay comparable vertex by vertex.

use num_traits::Zero;

use crate::dcfunc::NormalizedDC;
use crate::rational::{dot, Rational};
use crate::Error;

/// A point `(height, gradient)` of the lifted space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftedPoint {
    pub height: Rational,
    pub gradient: Vec<Rational>,
}

impl LiftedPoint {
    pub fn new(height: Rational, gradient: Vec<Rational>) -> Self {
        Self { height, gradient }
    }

    /// The affine value `height + <gradient, delta>`.
    pub fn eval(&self, delta: &[Rational]) -> Rational {
        &self.height + dot(&self.gradient, delta)
    }

    pub fn negate(&self) -> Self {
        Self {
            height: -&self.height,
            gradient: self.gradient.iter().map(|g| -g).collect(),
        }
    }
}

/// The convex hull of a nonempty vertex list. Listed points need not be
/// extreme and duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    vertices: Vec<LiftedPoint>,
}

impl Polytope {
    pub fn new(vertices: Vec<LiftedPoint>) -> Result<Self, Error> {
        let Some(first) = vertices.first() else {
            return Err(Error::EmptyPieceList);
        };
        let arity = first.gradient.len();
        for v in &vertices {
            if v.gradient.len() != arity {
                return Err(Error::DimensionMismatch {
                    expected: arity,
                    got: v.gradient.len(),
                });
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[LiftedPoint] {
        &self.vertices
    }

    /// Gradient-space dimension `n` (the lifted dimension is `n + 1`).
    pub fn gradient_dim(&self) -> usize {
        self.vertices[0].gradient.len()
    }

    /// The Minkowski translate `{by} + self`.
    pub fn translate(&self, by: &LiftedPoint) -> Polytope {
        Polytope {
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    LiftedPoint::new(
                        &v.height + &by.height,
                        v.gradient
                            .iter()
                            .zip(&by.gradient)
                            .map(|(a, b)| a + b)
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    /// Max of the affine forms of the vertices at `delta`.
    pub fn max_at(&self, delta: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| v.eval(delta))
            .max()
            .expect("polytope vertex lists are nonempty")
    }

    /// Min of the affine forms of the vertices at `delta`.
    pub fn min_at(&self, delta: &[Rational]) -> Rational {
        self.vertices
            .iter()
            .map(|v| v.eval(delta))
            .min()
            .expect("polytope vertex lists are nonempty")
    }

    fn check_arity(&self, delta: &[Rational]) -> Result<(), Error> {
        if delta.len() != self.gradient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.gradient_dim(),
                got: delta.len(),
            });
        }
        Ok(())
    }
}

/// The codifferential pair: `lower` holds the plus pieces `(a_i, v_i)`,
/// `upper` the negated minus pieces `(-b_j, -w_j)`, so that
/// `h(delta) = max over lower + min over upper` of the affine forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codifferential {
    pub lower: Polytope,
    pub upper: Polytope,
}

impl Codifferential {
    /// Reads the codifferential off a normalized function. After
    /// normalization the lower set's max height and the upper set's min
    /// height are both zero.
    pub fn from_normalized(h: &NormalizedDC) -> Self {
        let f = h.function();
        let lower = f
            .plus_pieces()
            .iter()
            .map(|p| LiftedPoint::new(p.constant.clone(), p.gradient.clone()))
            .collect();
        let upper = f
            .minus_pieces()
            .iter()
            .map(|p| LiftedPoint::new(-&p.constant, p.gradient.iter().map(|g| -g).collect()))
            .collect();
        Self {
            lower: Polytope { vertices: lower },
            upper: Polytope { vertices: upper },
        }
    }

    /// `max over lower [a + <v, delta>] + min over upper [b + <w, delta>]`.
    pub fn eval(&self, delta: &[Rational]) -> Result<Rational, Error> {
        self.lower.check_arity(delta)?;
        self.upper.check_arity(delta)?;
        Ok(self.lower.max_at(delta) + self.upper.min_at(delta))
    }

    /// One member per upper vertex: the lower set translated by it. The
    /// function becomes the min over members of their vertex maxima.
    pub fn upper_coexhauster(&self) -> Coexhauster {
        Coexhauster {
            kind: CoexhausterKind::Upper,
            members: self
                .upper
                .vertices
                .iter()
                .map(|u| self.lower.translate(u))
                .collect(),
        }
    }

    /// One member per lower vertex: the upper set translated by it. The
    /// function becomes the max over members of their vertex minima.
    pub fn lower_coexhauster(&self) -> Coexhauster {
        Coexhauster {
            kind: CoexhausterKind::Lower,
            members: self
                .lower
                .vertices
                .iter()
                .map(|u| self.upper.translate(u))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoexhausterKind {
    Upper,
    Lower,
}

/// A finite family of lifted polytopes representing the function as a
/// min of maxima (upper) or max of minima (lower). Member order follows
/// the vertex order of the translating polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coexhauster {
    pub kind: CoexhausterKind,
    pub members: Vec<Polytope>,
}

impl Coexhauster {
    pub fn eval(&self, delta: &[Rational]) -> Result<Rational, Error> {
        let mut values = Vec::with_capacity(self.members.len());
        for member in &self.members {
            member.check_arity(delta)?;
            values.push(match self.kind {
                CoexhausterKind::Upper => member.max_at(delta),
                CoexhausterKind::Lower => member.min_at(delta),
            });
        }
        let reduced = match self.kind {
            CoexhausterKind::Upper => values.into_iter().min(),
            CoexhausterKind::Lower => values.into_iter().max(),
        };
        Ok(reduced.expect("coexhausters have at least one member"))
    }

    /// Checks the translation structure: subtracting `origin[k]` from every
    /// vertex of member `k` must recover `generator` exactly.
    pub fn is_translate_of(&self, generator: &Polytope, origins: &Polytope) -> bool {
        self.members.len() == origins.vertices.len()
            && self
                .members
                .iter()
                .zip(&origins.vertices)
                .all(|(member, origin)| &generator.translate(origin) == member)
    }
}

/// Builds a lifted polytope from `(height, gradient)` rows; test and
/// fixture convenience.
pub fn polytope<I>(rows: I) -> Polytope
where
    I: IntoIterator<Item = (Rational, Vec<Rational>)>,
{
    Polytope::new(
        rows.into_iter()
            .map(|(h, g)| LiftedPoint::new(h, g))
            .collect(),
    )
    .expect("literal polytopes are well-formed")
}

/// True when the two vertex lists are equal as multisets.
pub fn same_vertex_multiset(a: &Polytope, b: &Polytope) -> bool {
    let mut xs = a.vertices.to_vec();
    let mut ys = b.vertices.to_vec();
    xs.sort();
    ys.sort();
    xs == ys
}

/// Zero-at-zero check shared by the representation intrinsics: the min over
/// members of the max height (upper) and the max over members of the min
/// height (lower) must both vanish for a normalized instance.
pub fn heights_vanish(upper: &Coexhauster, lower: &Coexhauster) -> bool {
    let zero = crate::rational::zeros(upper.members[0].gradient_dim());
    upper.eval(&zero).map(|v| v.is_zero()).unwrap_or(false)
        && lower.eval(&zero).map(|v| v.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::testfx;

    fn cd(f: crate::dcfunc::PolyhedralDC) -> Codifferential {
        Codifferential::from_normalized(&f.normalize())
    }

    #[test]
    fn codifferential_example1() {
        let c = cd(testfx::example1());
        let lower = polytope([
            (int(-4), vec![int(2)]),
            (int(0), vec![int(0)]),
            (int(-4), vec![int(-2)]),
        ]);
        let upper = polytope([
            (int(1), vec![int(-1)]),
            (int(0), vec![int(0)]),
            (int(1), vec![int(1)]),
        ]);
        assert_eq!(c.lower, lower);
        assert_eq!(c.upper, upper);
    }

    #[test]
    fn codifferential_example2_x1() {
        let c = cd(testfx::example2_x1());
        assert_eq!(
            c.lower,
            polytope([
                (int(0), vec![int(2)]),
                (int(0), vec![int(-2)]),
                (int(0), vec![int(0)]),
            ])
        );
        assert_eq!(
            c.upper,
            polytope([
                (int(1), vec![int(-1)]),
                (int(1), vec![int(1)]),
                (int(0), vec![int(0)]),
            ])
        );
    }

    #[test]
    fn codifferential_zero_function() {
        let c = cd(testfx::zero_function());
        assert_eq!(c.lower, polytope([(int(0), vec![int(0)])]));
        assert_eq!(c.upper, polytope([(int(0), vec![int(0)])]));
    }

    #[test]
    fn upper_coexhauster_example1_lists_the_three_sets() {
        let e = cd(testfx::example1()).upper_coexhauster();
        assert_eq!(e.members.len(), 3);
        let expected = [
            polytope([
                (int(-3), vec![int(1)]),
                (int(1), vec![int(-1)]),
                (int(-3), vec![int(-3)]),
            ]),
            polytope([
                (int(-4), vec![int(2)]),
                (int(0), vec![int(0)]),
                (int(-4), vec![int(-2)]),
            ]),
            polytope([
                (int(-3), vec![int(3)]),
                (int(1), vec![int(1)]),
                (int(-3), vec![int(-1)]),
            ]),
        ];
        for (member, want) in e.members.iter().zip(&expected) {
            assert_eq!(member, want);
        }
    }

    #[test]
    fn upper_coexhauster_example2_x1() {
        let e = cd(testfx::example2_x1()).upper_coexhauster();
        let expected = [
            polytope([
                (int(1), vec![int(1)]),
                (int(1), vec![int(-3)]),
                (int(1), vec![int(-1)]),
            ]),
            polytope([
                (int(1), vec![int(3)]),
                (int(1), vec![int(-1)]),
                (int(1), vec![int(1)]),
            ]),
            polytope([
                (int(0), vec![int(2)]),
                (int(0), vec![int(-2)]),
                (int(0), vec![int(0)]),
            ]),
        ];
        assert_eq!(e.members.len(), 3);
        for (member, want) in e.members.iter().zip(&expected) {
            assert_eq!(member, want);
        }
    }

    #[test]
    fn lower_coexhauster_example2_x2() {
        let c = cd(testfx::example2_x2());
        assert_eq!(
            c.lower,
            polytope([
                (int(0), vec![int(0)]),
                (int(-4), vec![int(-4)]),
                (int(-1), vec![int(0)]),
            ])
        );
        assert_eq!(
            c.upper,
            polytope([
                (int(0), vec![int(-1)]),
                (int(2), vec![int(1)]),
                (int(0), vec![int(0)]),
            ])
        );
        let e = c.lower_coexhauster();
        let expected = [
            polytope([
                (int(0), vec![int(-1)]),
                (int(2), vec![int(1)]),
                (int(0), vec![int(0)]),
            ]),
            polytope([
                (int(-4), vec![int(-5)]),
                (int(-2), vec![int(-3)]),
                (int(-4), vec![int(-4)]),
            ]),
            polytope([
                (int(-1), vec![int(-1)]),
                (int(1), vec![int(1)]),
                (int(-1), vec![int(0)]),
            ]),
        ];
        assert_eq!(e.members.len(), 3);
        for (member, want) in e.members.iter().zip(&expected) {
            assert_eq!(member, want);
        }
    }

    #[test]
    fn lower_coexhauster_is_translate_family() {
        let c = cd(testfx::example1());
        let e = c.lower_coexhauster();
        assert_eq!(e.members.len(), 3);
        assert!(e.is_translate_of(&c.upper, &c.lower));
        let upper = c.upper_coexhauster();
        assert!(upper.is_translate_of(&c.lower, &c.upper));
    }

    #[test]
    fn representation_identity_on_example1() {
        let h = testfx::example1().normalize();
        let c = Codifferential::from_normalized(&h);
        let upper = c.upper_coexhauster();
        let lower = c.lower_coexhauster();
        for d in [-5, -2, 0, 1, 3, 7] {
            let delta = [int(d)];
            let direct = h.function().eval(&delta).unwrap();
            assert_eq!(c.eval(&delta).unwrap(), direct);
            assert_eq!(upper.eval(&delta).unwrap(), direct);
            assert_eq!(lower.eval(&delta).unwrap(), direct);
        }
    }

    #[test]
    fn eval_matches_spots() {
        let c = cd(testfx::example1());
        assert_eq!(c.eval(&[int(0)]).unwrap(), int(0));
        assert_eq!(c.eval(&[int(3)]).unwrap(), int(0));
        let e = c.upper_coexhauster();
        assert_eq!(e.eval(&[int(0)]).unwrap(), int(0));
        assert_eq!(e.eval(&[int(3)]).unwrap(), int(0));
        let z = cd(testfx::zero_function());
        assert_eq!(z.eval(&[int(9)]).unwrap(), int(0));
        assert_eq!(z.upper_coexhauster().eval(&[int(9)]).unwrap(), int(0));
        assert_eq!(z.lower_coexhauster().members.len(), 1);
    }

    #[test]
    fn zero_heights_at_origin() {
        for f in [testfx::example1(), testfx::example2_x1(), testfx::example2_x2()] {
            let c = cd(f);
            assert!(heights_vanish(&c.upper_coexhauster(), &c.lower_coexhauster()));
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let c = cd(testfx::example1());
        assert!(matches!(
            c.eval(&[int(1), int(2)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            c.upper_coexhauster().eval(&[]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
