use crate::error::FuzzyError;

/// Piecewise-linear membership function over a real universe.
///
/// Degrees are exact at the breakpoints: a triangle is 1 exactly at `b`, a
/// trapezoid is 1 on `[b, c]`, and both are 0 outside their support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MembershipFunction {
    Triangular { a: f64, b: f64, c: f64 },
    Trapezoidal { a: f64, b: f64, c: f64, d: f64 },
}

impl MembershipFunction {
    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self, FuzzyError> {
        check_ordered(&[a, b, c])?;
        Ok(Self::Triangular { a, b, c })
    }

    pub fn trapezoidal(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        check_ordered(&[a, b, c, d])?;
        Ok(Self::Trapezoidal { a, b, c, d })
    }

    /// Builds a triangle from three breakpoints or a trapezoid from four.
    pub fn from_breakpoints(points: &[f64]) -> Result<Self, FuzzyError> {
        match *points {
            [a, b, c] => Self::triangular(a, b, c),
            [a, b, c, d] => Self::trapezoidal(a, b, c, d),
            _ => Err(FuzzyError::BreakpointCount(points.len())),
        }
    }

    pub fn breakpoints(&self) -> ([f64; 4], usize) {
        match *self {
            Self::Triangular { a, b, c } => ([a, b, c, c], 3),
            Self::Trapezoidal { a, b, c, d } => ([a, b, c, d], 4),
        }
    }

    /// Lowest and highest breakpoint.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Triangular { a, c, .. } => (a, c),
            Self::Trapezoidal { a, d, .. } => (a, d),
        }
    }

    /// Membership degree of `x`, always within `[0, 1]`.
    pub fn degree(&self, x: f64) -> f64 {
        // Plateau bounds: a triangle is a trapezoid whose plateau is the single point b.
        let (a, b, c, d) = match *self {
            Self::Triangular { a, b, c } => (a, b, b, c),
            Self::Trapezoidal { a, b, c, d } => (a, b, c, d),
        };
        if x.is_nan() || x < a || x > d {
            0.0
        } else if x >= b && x <= c {
            1.0
        } else if x < b {
            (x - a) / (b - a)
        } else {
            (d - x) / (d - c)
        }
    }

    /// Points at which the clipped function `min(level, degree(x))` changes slope.
    pub(crate) fn clipped_breakpoints(&self, level: f64, out: &mut alloc::vec::Vec<f64>) {
        let (a, b, c, d) = match *self {
            Self::Triangular { a, b, c } => (a, b, b, c),
            Self::Trapezoidal { a, b, c, d } => (a, b, c, d),
        };
        out.extend_from_slice(&[a, b, c, d]);
        if b > a {
            out.push(a + level * (b - a));
        }
        if d > c {
            out.push(d - level * (d - c));
        }
    }
}

fn check_ordered(points: &[f64]) -> Result<(), FuzzyError> {
    if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[0] > w[1]) {
        let mut copy = [f64::NAN; 4];
        copy[..points.len()].copy_from_slice(points);
        return Err(FuzzyError::UnorderedBreakpoints {
            points: copy,
            count: points.len(),
        });
    }
    Ok(())
}
