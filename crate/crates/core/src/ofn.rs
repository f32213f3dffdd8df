//! Trapezoidal ordered fuzzy numbers and the center-of-mass construction.
//!
//! An OFN here is a trapezoid `a0- <= a1- <= a1+ <= a0+` plus an
//! orientation. The two branches `up` and `down` are affine maps from the
//! membership level `alpha` in `[0, 1]` to values; which side of the
//! trapezoid each branch traces depends on the orientation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::averages::{simple_average, weighted_average, weighted_mean, WeightScheme};
use crate::error::{Error, Result};

/// Direction of an OFN: `Long` when the window ends at or above where it started.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Long,
    Short,
}

impl Orientation {
    /// `Long` iff `first <= last`.
    pub fn from_endpoints(first: f64, last: f64) -> Self {
        if first <= last {
            Orientation::Long
        } else {
            Orientation::Short
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Orientation::Long => 1.0,
            Orientation::Short => -1.0,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Long => "long",
            Orientation::Short => "short",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Up,
    Down,
}

/// An affine branch, stored by its values at `alpha = 0` and `alpha = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchLine {
    start: f64,
    end: f64,
}

impl BranchLine {
    pub fn new(start: f64, end: f64) -> Self {
        BranchLine { start, end }
    }

    /// Value at `alpha = 0`.
    pub fn intercept(&self) -> f64 {
        self.start
    }

    /// Value change per unit `alpha`.
    pub fn slope(&self) -> f64 {
        self.end - self.start
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    /// Evaluates the line; exact at both `alpha = 0` and `alpha = 1` and
    /// never outside `[start, end]`.
    pub fn eval(&self, alpha: f64) -> f64 {
        if alpha == 1.0 {
            return self.end;
        }
        let v = self.start + alpha * (self.end - self.start);
        v.clamp(self.start.min(self.end), self.start.max(self.end))
    }

    /// `int_0^1 line(alpha) d alpha`.
    pub fn integral(&self) -> f64 {
        (self.start + self.end) / 2.0
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidalOfn {
    a0_minus: f64,
    a1_minus: f64,
    a1_plus: f64,
    a0_plus: f64,
    orientation: Orientation,
    proper: bool,
}

impl TrapezoidalOfn {
    /// Builds an OFN from its four endpoints. The result is flagged proper
    /// only when the endpoints are finite and ordered.
    pub fn new(a0_minus: f64, a1_minus: f64, a1_plus: f64, a0_plus: f64, orientation: Orientation) -> Self {
        let finite = [a0_minus, a1_minus, a1_plus, a0_plus].iter().all(|v| v.is_finite());
        let proper = finite && a0_minus <= a1_minus && a1_minus <= a1_plus && a1_plus <= a0_plus;
        TrapezoidalOfn {
            a0_minus,
            a1_minus,
            a1_plus,
            a0_plus,
            orientation,
            proper,
        }
    }

    /// A zero-spread OFN with core `[lo, hi]`.
    pub fn rectangle(lo: f64, hi: f64, orientation: Orientation) -> Self {
        Self::new(lo, lo, hi, hi, orientation)
    }

    pub fn a0_minus(&self) -> f64 {
        self.a0_minus
    }

    pub fn a1_minus(&self) -> f64 {
        self.a1_minus
    }

    pub fn a1_plus(&self) -> f64 {
        self.a1_plus
    }

    pub fn a0_plus(&self) -> f64 {
        self.a0_plus
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// `[a0-, a1-, a1+, a0+]`.
    pub fn endpoints(&self) -> [f64; 4] {
        [self.a0_minus, self.a1_minus, self.a1_plus, self.a0_plus]
    }

    pub fn core(&self) -> Interval {
        Interval {
            lo: self.a1_minus,
            hi: self.a1_plus,
        }
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.a0_minus,
            hi: self.a0_plus,
        }
    }

    pub fn lower_spread(&self) -> f64 {
        self.a1_minus - self.a0_minus
    }

    pub fn upper_spread(&self) -> f64 {
        self.a0_plus - self.a1_plus
    }

    pub(crate) fn require_proper(&self) -> Result<()> {
        if self.proper {
            Ok(())
        } else {
            Err(Error::ImproperShape)
        }
    }

    fn rising_side(&self) -> BranchLine {
        BranchLine::new(self.a0_minus, self.a1_minus)
    }

    fn falling_side(&self) -> BranchLine {
        BranchLine::new(self.a0_plus, self.a1_plus)
    }

    /// The affine line for `which` branch. For a `Long` OFN the up branch runs
    /// from `a0-` to `a1-`; for `Short` it runs from `a0+` to `a1+`.
    pub fn branch(&self, which: Branch) -> BranchLine {
        match (self.orientation, which) {
            (Orientation::Long, Branch::Up) | (Orientation::Short, Branch::Down) => self.rising_side(),
            (Orientation::Long, Branch::Down) | (Orientation::Short, Branch::Up) => self.falling_side(),
        }
    }

    /// Trapezoidal membership. Zero outside the open support, one on the
    /// closed core, linear in between; a zero-width spread acts as a step.
    pub fn membership(&self, x: f64) -> Result<f64> {
        self.require_proper()?;
        let m = if x < self.a0_minus || x > self.a0_plus {
            0.0
        } else if x < self.a1_minus {
            (x - self.a0_minus) / (self.a1_minus - self.a0_minus)
        } else if x <= self.a1_plus {
            1.0
        } else {
            (self.a0_plus - x) / (self.a0_plus - self.a1_plus)
        };
        Ok(m)
    }

    /// The level set at `alpha`: the support at 0, the core at 1.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        check_alpha(alpha)?;
        self.require_proper()?;
        let a = self.rising_side().eval(alpha);
        let b = self.falling_side().eval(alpha);
        Ok(Interval {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn branch_at(&self, which: Branch, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.branch(which).eval(alpha))
    }

    /// Maps every endpoint through `t -> scale * t + shift` (`scale > 0`).
    pub fn affine_map(&self, scale: f64, shift: f64) -> Self {
        let f = |t: f64| scale * t + shift;
        Self::new(
            f(self.a0_minus),
            f(self.a1_minus),
            f(self.a1_plus),
            f(self.a0_plus),
            self.orientation,
        )
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// `Long` iff the first value is at most the last.
pub fn orientation_of(values: &[f64]) -> Result<Orientation> {
    match values {
        [first, .., last] => Ok(Orientation::from_endpoints(*first, *last)),
        _ => Err(Error::TooFewPoints(values.len())),
    }
}

/// Mean of the values accepted by `keep`, or `None` if there are none.
fn center_of_mass(values: &[f64], keep: impl Fn(f64) -> bool) -> Option<f64> {
    let selected = values.iter().filter(|&&x| keep(x)).map(|&x| (1.0, x));
    selected.clone().next().map(|_| weighted_mean(selected))
}

/// Center-of-mass construction.
///
/// The core is `[min(SA, WA), max(SA, WA)]` where `WA` is the weighted
/// average for `scheme`. `a0-` is the mean of the values strictly below the
/// core and `a0+` the mean of those strictly above it; an empty side
/// collapses onto the adjacent core endpoint. Orientation depends only on
/// the first and last values.
pub fn build_ofn_new(values: &[f64], scheme: WeightScheme) -> Result<TrapezoidalOfn> {
    if values.len() < 2 {
        return Err(if values.is_empty() {
            Error::EmptyWindow(0)
        } else {
            Error::TooFewPoints(values.len())
        });
    }
    let sa = simple_average(values)?;
    let wa = weighted_average(values, scheme)?;
    let (s1, s2) = (sa.min(wa), sa.max(wa));
    let a0_minus = center_of_mass(values, |x| x < s1).unwrap_or(s1);
    let a0_plus = center_of_mass(values, |x| x > s2).unwrap_or(s2);
    let orientation = orientation_of(values)?;
    Ok(TrapezoidalOfn::new(a0_minus, s1, s2, a0_plus, orientation))
}

#[cfg(test)]
mod tests {
    use super::*;

    const RAMP: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];

    fn tesla_dec() -> TrapezoidalOfn {
        TrapezoidalOfn::new(347.36, 379.84, 398.77, 418.56, Orientation::Long)
    }

    fn tesla_mar() -> TrapezoidalOfn {
        TrapezoidalOfn::new(432.99, 511.26, 563.71, 694.28, Orientation::Short)
    }

    #[test]
    fn ramp_with_linear_weights() {
        let ofn = build_ofn_new(&RAMP, WeightScheme::Linear).unwrap();
        // oracle: SA = 15/5, LWA = 55/15; below 3 -> {1, 2}; above 11/3 -> {4, 5}
        assert_eq!(ofn.a1_minus(), 3.0);
        assert!((ofn.a1_plus() - 55.0 / 15.0).abs() < 1e-15);
        assert_eq!(ofn.a0_minus(), 1.5);
        assert_eq!(ofn.a0_plus(), 4.5);
        assert_eq!(ofn.orientation(), Orientation::Long);
        assert!(ofn.is_proper());

        let up = ofn.branch(Branch::Up);
        assert_eq!((up.intercept(), up.slope()), (1.5, 1.5));
        let down = ofn.branch(Branch::Down);
        assert_eq!(down.intercept(), 4.5);
        assert!((down.slope() + 0.8333333333333335).abs() < 1e-12);
    }

    #[test]
    fn constant_series_is_a_point() {
        let ofn = build_ofn_new(&[6.5; 4], WeightScheme::EXPONENTIAL).unwrap();
        assert_eq!(ofn.endpoints(), [6.5; 4]);
        assert_eq!(ofn.orientation(), Orientation::Long);
    }

    #[test]
    fn values_on_the_averages_are_not_counted() {
        let ofn = build_ofn_new(&[1.0, 2.0, 3.0, 2.0], WeightScheme::Simple).unwrap();
        assert_eq!(ofn.core(), Interval { lo: 2.0, hi: 2.0 });
        assert_eq!(ofn.a0_minus(), 1.0);
        assert_eq!(ofn.a0_plus(), 3.0);
    }

    #[test]
    fn one_sided_outside_set_collapses() {
        // SA = 3, LWA = 4.2; only 9 lies above the core.
        let ofn = build_ofn_new(&[1.0, 1.0, 1.0, 9.0], WeightScheme::Linear).unwrap();
        assert_eq!(ofn.a0_plus(), 9.0);
        assert_eq!(ofn.a0_minus(), 1.0);
        // Two values: SA = 1.5, LWA = 5/3; the first is below, the second above.
        let ofn = build_ofn_new(&[1.0, 2.0], WeightScheme::Linear).unwrap();
        assert_eq!((ofn.a0_minus(), ofn.a0_plus()), (1.0, 2.0));
        // Simple scheme on a two-valued series: nothing strictly inside.
        let ofn = build_ofn_new(&[2.0, 2.0, 2.0], WeightScheme::Simple).unwrap();
        assert_eq!(ofn.lower_spread(), 0.0);
        assert_eq!(ofn.upper_spread(), 0.0);
    }

    #[test]
    fn too_short() {
        assert_eq!(build_ofn_new(&[], WeightScheme::Linear), Err(Error::EmptyWindow(0)));
        assert_eq!(build_ofn_new(&[1.0], WeightScheme::Linear), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn membership_on_tesla_dec() {
        let ofn = tesla_dec();
        // oracle: (x - 347.36) / 32.48 = 0.5
        let m = ofn.membership(363.60).unwrap();
        assert!((m - 0.5).abs() < 1e-9);
        assert_eq!(ofn.membership((379.84 + 398.77) / 2.0).unwrap(), 1.0);
        assert_eq!(ofn.membership(500.0).unwrap(), 0.0);
        assert_eq!(ofn.membership(347.36).unwrap(), 0.0);
        assert_eq!(ofn.membership(418.56).unwrap(), 0.0);
        assert_eq!(ofn.membership(379.84).unwrap(), 1.0);
    }

    #[test]
    fn membership_of_rectangle_is_a_step() {
        let r = TrapezoidalOfn::rectangle(2.0, 3.0, Orientation::Short);
        assert_eq!(r.membership(1.999).unwrap(), 0.0);
        assert_eq!(r.membership(2.0).unwrap(), 1.0);
        assert_eq!(r.membership(3.0).unwrap(), 1.0);
        assert_eq!(r.membership(3.001).unwrap(), 0.0);
    }

    #[test]
    fn improper_shapes_are_rejected() {
        let bad = TrapezoidalOfn::new(2.0, 1.0, 3.0, 4.0, Orientation::Long);
        assert!(!bad.is_proper());
        assert_eq!(bad.membership(2.0), Err(Error::ImproperShape));
        assert_eq!(bad.alpha_cut(0.5), Err(Error::ImproperShape));
        assert!(!TrapezoidalOfn::new(f64::NAN, 1.0, 3.0, 4.0, Orientation::Long).is_proper());
    }

    #[test]
    fn alpha_cuts() {
        let r = TrapezoidalOfn::rectangle(2.0, 3.0, Orientation::Long);
        for alpha in [0.0, 0.3, 1.0] {
            assert_eq!(r.alpha_cut(alpha).unwrap(), Interval { lo: 2.0, hi: 3.0 });
        }
        // up = alpha, down = 2 - alpha
        let ofn = TrapezoidalOfn::new(0.0, 1.0, 1.0, 2.0, Orientation::Long);
        assert_eq!(ofn.alpha_cut(0.25).unwrap(), Interval { lo: 0.25, hi: 1.75 });
        assert_eq!(ofn.alpha_cut(0.0).unwrap(), ofn.support());

        let cut = tesla_dec().alpha_cut(1.0).unwrap();
        assert_eq!((cut.lo, cut.hi), (379.84, 398.77));

        assert_eq!(ofn.alpha_cut(1.5), Err(Error::AlphaOutOfRange(1.5)));
        assert_eq!(ofn.alpha_cut(-0.1), Err(Error::AlphaOutOfRange(-0.1)));
    }

    #[test]
    fn branches_follow_orientation() {
        assert_eq!(tesla_dec().branch_at(Branch::Up, 0.0).unwrap(), 347.36);
        assert_eq!(tesla_dec().branch_at(Branch::Down, 0.0).unwrap(), 418.56);
        assert_eq!(tesla_mar().branch_at(Branch::Up, 0.0).unwrap(), 694.28);
        assert_eq!(tesla_mar().branch_at(Branch::Up, 1.0).unwrap(), 563.71);
        assert_eq!(tesla_mar().branch_at(Branch::Down, 1.0).unwrap(), 511.26);
        let slope = tesla_mar().branch(Branch::Up).slope();
        assert!((slope + 130.57).abs() < 1e-9);

        let r = TrapezoidalOfn::rectangle(5.0, 6.0, Orientation::Long);
        let up: Vec<f64> = [0.0, 0.4, 1.0]
            .iter()
            .map(|&a| r.branch_at(Branch::Up, a).unwrap())
            .collect();
        assert_eq!(up, vec![5.0; 3]);
        assert_eq!(r.branch_at(Branch::Up, 2.0), Err(Error::AlphaOutOfRange(2.0)));
    }

    #[test]
    fn orientation() {
        assert_eq!(orientation_of(&RAMP).unwrap(), Orientation::Long);
        assert_eq!(orientation_of(&[5.0, 4.0, 3.0, 2.0, 1.0]).unwrap(), Orientation::Short);
        assert_eq!(orientation_of(&[743.62, 600.0, 514.36]).unwrap(), Orientation::Short);
        assert_eq!(orientation_of(&[3.0, 1.0, 3.0]).unwrap(), Orientation::Long);
        assert_eq!(orientation_of(&[3.0]), Err(Error::TooFewPoints(1)));
    }

    #[test]
    fn orientation_ignores_average_order() {
        // X1 <= Xn but LWA < SA.
        let values = [0.0, 10.0, 0.0, 1.0];
        let ofn = build_ofn_new(&values, WeightScheme::Linear).unwrap();
        assert_eq!(ofn.orientation(), Orientation::Long);
        assert!(ofn.is_proper());
    }
}
