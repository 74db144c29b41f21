//! Polyhedral DC functions: construction, exact evaluation, normalization,
//! and one-sided directional derivatives.

use num_traits::Zero;

use crate::rational::{dot, Rational};
use crate::Error;

/// One affine form `constant + <gradient, .>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub constant: Rational,
    pub gradient: Vec<Rational>,
}

impl AffinePiece {
    pub fn new(constant: Rational, gradient: Vec<Rational>) -> Self {
        Self { constant, gradient }
    }

    /// Value of the affine form at `delta`. Arity is the caller's problem.
    pub fn eval(&self, delta: &[Rational]) -> Rational {
        &self.constant + dot(&self.gradient, delta)
    }
}

/// A difference of two polyhedral convex functions,
///
/// ```text
/// h(d) = max_i [a_i + <v_i, d>] - max_j [b_j + <w_j, d>],
/// ```
///
/// stored as nonempty plus and minus piece lists in input order. Duplicate
/// pieces are kept; they change nothing downstream and keeping them preserves
/// the element indexing of reports and certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralDC {
    dimension: usize,
    plus_pieces: Vec<AffinePiece>,
    minus_pieces: Vec<AffinePiece>,
}

impl PolyhedralDC {
    /// Validates piece arities and builds the function.
    pub fn new(
        dimension: usize,
        plus_pieces: Vec<AffinePiece>,
        minus_pieces: Vec<AffinePiece>,
    ) -> Result<Self, Error> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if plus_pieces.is_empty() || minus_pieces.is_empty() {
            return Err(Error::EmptyPieceList);
        }
        for piece in plus_pieces.iter().chain(&minus_pieces) {
            if piece.gradient.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: piece.gradient.len(),
                });
            }
        }
        Ok(Self {
            dimension,
            plus_pieces,
            minus_pieces,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn plus_pieces(&self) -> &[AffinePiece] {
        &self.plus_pieces
    }

    pub fn minus_pieces(&self) -> &[AffinePiece] {
        &self.minus_pieces
    }

    fn check_arity(&self, v: &[Rational]) -> Result<(), Error> {
        if v.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Exact value `h(delta)`.
    pub fn eval(&self, delta: &[Rational]) -> Result<Rational, Error> {
        self.check_arity(delta)?;
        Ok(max_piece_value(&self.plus_pieces, delta) - max_piece_value(&self.minus_pieces, delta))
    }

    /// Asymptotic slope `max_i <v_i, d> - max_j <w_j, d>`; the constants
    /// vanish in `lim h(t d)/t`, so only the gradients enter.
    pub fn recession(&self, direction: &[Rational]) -> Result<Rational, Error> {
        self.check_arity(direction)?;
        let slope = |pieces: &[AffinePiece]| {
            pieces
                .iter()
                .map(|p| dot(&p.gradient, direction))
                .max()
                .expect("piece lists are nonempty")
        };
        Ok(slope(&self.plus_pieces) - slope(&self.minus_pieces))
    }

    /// 1-based indices of the pieces that realize each maximum at `point`.
    /// Both returned sets are nonempty.
    pub fn active_sets(&self, point: &[Rational]) -> Result<(Vec<usize>, Vec<usize>), Error> {
        self.check_arity(point)?;
        Ok((
            active_indices(&self.plus_pieces, point),
            active_indices(&self.minus_pieces, point),
        ))
    }

    /// Exact one-sided directional derivative `h'(point; direction)`. For a
    /// piecewise affine function this is the max over active plus pieces of
    /// `<v_i, direction>` minus the same max over active minus pieces.
    pub fn directional_derivative(
        &self,
        point: &[Rational],
        direction: &[Rational],
    ) -> Result<Rational, Error> {
        self.check_arity(point)?;
        self.check_arity(direction)?;
        let active_slope = |pieces: &[AffinePiece]| {
            active_indices(pieces, point)
                .into_iter()
                .map(|i| dot(&pieces[i - 1].gradient, direction))
                .max()
                .expect("active sets are nonempty")
        };
        Ok(active_slope(&self.plus_pieces) - active_slope(&self.minus_pieces))
    }

    /// Shifts both constant lists so that each maximum of constants becomes
    /// zero. The subtracted total `max_i a_i - max_j b_j` equals `h(0)` and
    /// is returned as the offset, so `h = normalized + offset` pointwise.
    pub fn normalize(&self) -> NormalizedDC {
        let max_const = |pieces: &[AffinePiece]| {
            pieces
                .iter()
                .map(|p| p.constant.clone())
                .max()
                .expect("piece lists are nonempty")
        };
        let plus_max = max_const(&self.plus_pieces);
        let minus_max = max_const(&self.minus_pieces);
        let shift = |pieces: &[AffinePiece], by: &Rational| {
            pieces
                .iter()
                .map(|p| AffinePiece::new(&p.constant - by, p.gradient.clone()))
                .collect()
        };
        NormalizedDC {
            function: Self {
                dimension: self.dimension,
                plus_pieces: shift(&self.plus_pieces, &plus_max),
                minus_pieces: shift(&self.minus_pieces, &minus_max),
            },
            offset: plus_max - minus_max,
        }
    }
}

/// A polyhedral DC function whose constant maxima are both zero, so all
/// constants are nonpositive and the function vanishes at the origin. The
/// condition checkers rely on this form and accept nothing else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedDC {
    function: PolyhedralDC,
    offset: Rational,
}

impl NormalizedDC {
    pub fn function(&self) -> &PolyhedralDC {
        &self.function
    }

    /// The subtracted value `h(0)` of the original function.
    pub fn offset(&self) -> &Rational {
        &self.offset
    }
}

fn max_piece_value(pieces: &[AffinePiece], delta: &[Rational]) -> Rational {
    pieces
        .iter()
        .map(|p| p.eval(delta))
        .max()
        .expect("piece lists are nonempty")
}

fn active_indices(pieces: &[AffinePiece], point: &[Rational]) -> Vec<usize> {
    let top = max_piece_value(pieces, point);
    pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| p.eval(point) == top)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Convenience builder from integer-free literal data.
pub fn pieces_from<I>(data: I) -> Vec<AffinePiece>
where
    I: IntoIterator<Item = (Rational, Vec<Rational>)>,
{
    data.into_iter()
        .map(|(c, g)| AffinePiece::new(c, g))
        .collect()
}

impl NormalizedDC {
    /// Rebuilds a normalized view of an already-normalized function. Returns
    /// `None` if either constant maximum is nonzero.
    pub fn try_from_function(function: PolyhedralDC) -> Option<Self> {
        let is_normalized = |pieces: &[AffinePiece]| {
            pieces
                .iter()
                .map(|p| &p.constant)
                .max()
                .map(|m| m.is_zero())
                .unwrap_or(false)
        };
        if is_normalized(function.plus_pieces()) && is_normalized(function.minus_pieces()) {
            Some(Self {
                function,
                offset: Rational::zero(),
            })
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::testfx;

    #[test]
    fn construction_validates() {
        assert!(testfx::example1().eval(&[int(0)]).is_ok());
        let bad = PolyhedralDC::new(
            2,
            pieces_from([(int(0), vec![int(1), int(0)])]),
            pieces_from([(int(0), vec![int(1)])]),
        );
        assert_eq!(bad.unwrap_err(), Error::DimensionMismatch { expected: 2, got: 1 });
        let empty = PolyhedralDC::new(1, vec![], pieces_from([(int(0), vec![int(0)])]));
        assert_eq!(empty.unwrap_err(), Error::EmptyPieceList);
        assert_eq!(
            PolyhedralDC::new(0, vec![], vec![]).unwrap_err(),
            Error::ZeroDimension
        );
    }

    #[test]
    fn eval_example1() {
        let h = testfx::example1();
        // max{-4,0,-4} - max{-1,0,-1}
        assert_eq!(h.eval(&[int(0)]).unwrap(), int(0));
        // max{2,0,-10} - max{2,0,-4}
        assert_eq!(h.eval(&[int(3)]).unwrap(), int(0));
        assert_eq!(h.eval(&[ratio(3, 2)]).unwrap(), ratio(-1, 2));
        assert_eq!(
            h.eval(&[int(0), int(0)]).unwrap_err(),
            Error::DimensionMismatch { expected: 1, got: 2 }
        );
    }

    #[test]
    fn eval_zero_function() {
        let z = testfx::zero_function();
        for d in [-7, 0, 3] {
            assert_eq!(z.eval(&[int(d)]).unwrap(), int(0));
        }
    }

    #[test]
    fn recession_slopes() {
        let h = testfx::example1();
        assert_eq!(h.recession(&[int(1)]).unwrap(), int(1));
        assert_eq!(h.recession(&[int(0)]).unwrap(), int(0));
        assert_eq!(testfx::neg_abs().recession(&[int(1)]).unwrap(), int(-1));
    }

    #[test]
    fn active_sets_example1() {
        let h = testfx::example1();
        assert_eq!(h.active_sets(&[int(0)]).unwrap(), (vec![2], vec![2]));
        assert_eq!(h.active_sets(&[int(3)]).unwrap(), (vec![1], vec![1]));
        let z = testfx::zero_function();
        assert_eq!(z.active_sets(&[int(5)]).unwrap(), (vec![1], vec![1]));
    }

    #[test]
    fn directional_derivatives() {
        let h = testfx::example1();
        assert_eq!(h.directional_derivative(&[int(0)], &[int(1)]).unwrap(), int(0));
        assert_eq!(h.directional_derivative(&[int(3)], &[int(1)]).unwrap(), int(1));
        assert_eq!(
            testfx::neg_abs()
                .directional_derivative(&[int(0)], &[int(1)])
                .unwrap(),
            int(-1)
        );
    }

    #[test]
    fn normalize_example1_is_identity() {
        let h = testfx::example1();
        let n = h.normalize();
        assert_eq!(n.offset(), &int(0));
        assert_eq!(n.function(), &h);
    }

    #[test]
    fn normalize_shifts_constants() {
        let h = PolyhedralDC::new(
            1,
            pieces_from([(int(3), vec![int(1)])]),
            pieces_from([(int(1), vec![int(0)])]),
        )
        .unwrap();
        let n = h.normalize();
        assert_eq!(n.offset(), &int(2));
        assert_eq!(n.function().plus_pieces()[0].constant, int(0));
        assert_eq!(n.function().minus_pieces()[0].constant, int(0));
        // offset really is h(0)
        assert_eq!(h.eval(&[int(0)]).unwrap(), int(2));
    }

    #[test]
    fn try_from_function_checks_constant_maxima() {
        assert!(NormalizedDC::try_from_function(testfx::example1()).is_some());
        let shifted = PolyhedralDC::new(
            1,
            pieces_from([(int(1), vec![int(0)])]),
            pieces_from([(int(0), vec![int(0)])]),
        )
        .unwrap();
        assert!(NormalizedDC::try_from_function(shifted).is_none());
    }
}
