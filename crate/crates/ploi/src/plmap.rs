//! Piecewise-linear homeomorphisms of [0,1] with exact rational breakpoints.
//!
//! A [`PLMap`] is stored as a normalized breakpoint list: first pair (0,0),
//! last pair (1,1), both coordinate sequences strictly increasing, and no
//! interior pair collinear with its neighbors. Structural equality of two
//! maps is therefore semantic equality.
//!
//! Composition follows the right-action convention: `f.compose(&g)` is the
//! map `x ↦ (x·f)·g`, and `f.conjugate(&h)` is `h⁻¹ f h`.

use crate::error::{Error, Result};
use crate::rational::Rat;
use serde::{Deserialize, Serialize};
use std::fmt;

/// An open rational subinterval (left, right) of [0,1].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub left: Rat,
    pub right: Rat,
}

impl Interval {
    pub fn new(left: Rat, right: Rat) -> Self {
        assert!(
            left >= Rat::zero() && left < right && right <= Rat::one(),
            "interval endpoints must satisfy 0 <= left < right <= 1"
        );
        Interval { left, right }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        *x > self.left && *x < self.right
    }

    /// `other ⊆ self` as open intervals.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    /// `other ⊊ self`.
    pub fn properly_contains(&self, other: &Interval) -> bool {
        self.contains_interval(other) && self != other
    }

    /// Closure of `other` lies in the open interval `self`.
    pub fn contains_closure(&self, other: &Interval) -> bool {
        self.left < other.left && other.right < self.right
    }

    pub fn is_disjoint(&self, other: &Interval) -> bool {
        self.right <= other.left || other.right <= self.left
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        !self.is_disjoint(other)
    }

    /// Does `other` share the named end with `self`?
    pub fn shares_end(&self, other: &Interval, end: End) -> bool {
        match end {
            End::Left => self.left == other.left,
            End::Right => self.right == other.right,
        }
    }

    /// Image of the interval under an increasing homeomorphism.
    pub fn image_under(&self, h: &PLMap) -> Interval {
        Interval::new(
            h.eval(&self.left).expect("endpoint in domain"),
            h.eval(&self.right).expect("endpoint in domain"),
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which end of an interval.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum End {
    Left,
    Right,
}

/// An orientation-preserving piecewise-linear homeomorphism of [0,1]
/// fixing 0 and 1, as a normalized breakpoint list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PLMap {
    breakpoints: Vec<(Rat, Rat)>,
}

impl PLMap {
    /// The identity map `[(0,0),(1,1)]`.
    pub fn identity() -> Self {
        PLMap {
            breakpoints: vec![(Rat::zero(), Rat::zero()), (Rat::one(), Rat::one())],
        }
    }

    /// Validate and normalize a breakpoint list.
    pub fn from_breakpoints(points: Vec<(Rat, Rat)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidBreakpoints("fewer than two pairs".into()));
        }
        let first = &points[0];
        let last = &points[points.len() - 1];
        if !(first.0.is_zero() && first.1.is_zero()) {
            return Err(Error::InvalidBreakpoints("first pair must be (0,0)".into()));
        }
        if !(last.0.is_one() && last.1.is_one()) {
            return Err(Error::InvalidBreakpoints("last pair must be (1,1)".into()));
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::InvalidBreakpoints(
                    "coordinates must be strictly increasing".into(),
                ));
            }
        }
        Ok(PLMap {
            breakpoints: normalize(points),
        })
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints.len() == 2
    }

    /// Exact evaluation at `x ∈ [0,1]`.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if *x < Rat::zero() || *x > Rat::one() {
            return Err(Error::OutOfDomain(x.clone()));
        }
        // last breakpoint with x-coordinate <= x
        let i = match self.breakpoints.binary_search_by(|(bx, _)| bx.cmp(x)) {
            Ok(i) => return Ok(self.breakpoints[i].1.clone()),
            Err(i) => i - 1,
        };
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[i + 1];
        Ok(y0 + &((y1 - y0) * (x - x0) / (x1 - x0)))
    }

    /// Preimage of `y ∈ [0,1]`, i.e. evaluation of the inverse map.
    pub fn eval_inverse(&self, y: &Rat) -> Result<Rat> {
        if *y < Rat::zero() || *y > Rat::one() {
            return Err(Error::OutOfDomain(y.clone()));
        }
        let i = match self.breakpoints.binary_search_by(|(_, by)| by.cmp(y)) {
            Ok(i) => return Ok(self.breakpoints[i].0.clone()),
            Err(i) => i - 1,
        };
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[i + 1];
        Ok(x0 + &((x1 - x0) * (y - y0) / (y1 - y0)))
    }

    /// Right-action product: the map `x ↦ (x·self)·g`.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        let mut xs: Vec<Rat> = self.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        for (gx, _) in &g.breakpoints {
            xs.push(self.eval_inverse(gx).expect("breakpoint in range"));
        }
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = g
                    .eval(&self.eval(&x).expect("in domain"))
                    .expect("in domain");
                (x, y)
            })
            .collect();
        PLMap {
            breakpoints: normalize(points),
        }
    }

    /// Group inverse: the breakpoints are the (y,x) swaps.
    pub fn inverse(&self) -> PLMap {
        PLMap {
            breakpoints: self
                .breakpoints
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// `self^k` under composition, any integer `k`.
    pub fn power(&self, k: i64) -> PLMap {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = PLMap::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `self^h = h⁻¹ · self · h`.
    pub fn conjugate(&self, h: &PLMap) -> PLMap {
        h.inverse().compose(self).compose(h)
    }

    /// `[self, g] = self⁻¹ g⁻¹ self g`.
    pub fn commutator(&self, g: &PLMap) -> PLMap {
        self.inverse().compose(&g.inverse()).compose(self).compose(g)
    }

    /// Maximal open intervals of moved points, left to right.
    ///
    /// These are the orbitals of the cyclic group generated by the map.
    pub fn support(&self) -> Vec<Interval> {
        // Assemble the closed fixed set as merged closed intervals, then
        // return the complementary components of (0,1).
        let mut fixed: Vec<(Rat, Rat)> = Vec::new();
        let pts = &self.breakpoints;
        for i in 0..pts.len() - 1 {
            let (x0, y0) = &pts[i];
            let (x1, y1) = &pts[i + 1];
            let d0 = y0 - x0;
            let d1 = y1 - x1;
            if d0.is_zero() && d1.is_zero() {
                // identity on the whole segment
                fixed.push((x0.clone(), x1.clone()));
                continue;
            }
            if d0.is_zero() {
                fixed.push((x0.clone(), x0.clone()));
            }
            // interior crossing of the diagonal
            if (d0.is_positive() && (!d1.is_positive() && !d1.is_zero()))
                || ((!d0.is_positive() && !d0.is_zero()) && d1.is_positive())
            {
                let slope = (y1 - y0) / (x1 - x0);
                let intercept = y0 - &(&slope * x0);
                let root = intercept / (Rat::one() - slope);
                fixed.push((root.clone(), root));
            }
        }
        fixed.push((Rat::one(), Rat::one()));
        // merge touching/overlapping pieces (already left-to-right)
        let mut merged: Vec<(Rat, Rat)> = Vec::new();
        for (a, b) in fixed {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        merged
            .windows(2)
            .map(|w| Interval::new(w[0].1.clone(), w[1].0.clone()))
            .collect()
    }

    /// One factor per orbital, equal to the map there and identity elsewhere.
    /// The factors have pairwise disjoint supports and multiply back to the map.
    pub fn one_bump_factors(&self) -> Vec<PLMap> {
        self.support()
            .iter()
            .map(|orb| self.restrict_to(orb))
            .collect()
    }

    /// The map equal to `self` on `orb` and the identity off it.
    /// `orb` must be a union of orbitals and fixed points with fixed ends.
    pub fn restrict_to(&self, orb: &Interval) -> PLMap {
        let mut points = vec![(Rat::zero(), Rat::zero())];
        if !orb.left.is_zero() {
            points.push((orb.left.clone(), orb.left.clone()));
        }
        for (x, y) in &self.breakpoints {
            if orb.contains(x) {
                points.push((x.clone(), y.clone()));
            }
        }
        if !orb.right.is_one() {
            points.push((orb.right.clone(), orb.right.clone()));
        }
        points.push((Rat::one(), Rat::one()));
        PLMap::from_breakpoints(points).expect("restriction is a homeomorphism")
    }

    /// Multiplicative slopes at the ends of `A`: (right-derivative at
    /// `A.left`, left-derivative at `A.right`). Requires both ends fixed.
    pub fn end_slopes(&self, a: &Interval) -> Result<(Rat, Rat)> {
        if self.eval(&a.left)? != a.left || self.eval(&a.right)? != a.right {
            return Err(Error::EndsNotFixed(a.clone()));
        }
        Ok((self.slope_right_of(&a.left), self.slope_left_of(&a.right)))
    }

    /// Slope of the affine piece immediately to the right of `x` (x < 1).
    pub fn slope_right_of(&self, x: &Rat) -> Rat {
        let i = match self.breakpoints.binary_search_by(|(bx, _)| bx.cmp(x)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        segment_slope(&self.breakpoints[i], &self.breakpoints[i + 1])
    }

    /// Slope of the affine piece immediately to the left of `x` (x > 0).
    pub fn slope_left_of(&self, x: &Rat) -> Rat {
        let i = match self.breakpoints.binary_search_by(|(bx, _)| bx.cmp(x)) {
            Ok(i) => i,
            Err(i) => i,
        };
        segment_slope(&self.breakpoints[i - 1], &self.breakpoints[i])
    }

    /// Slopes of all affine pieces, left to right.
    pub fn slopes(&self) -> Vec<Rat> {
        self.breakpoints
            .windows(2)
            .map(|w| segment_slope(&w[0], &w[1]))
            .collect()
    }
}

fn segment_slope(p0: &(Rat, Rat), p1: &(Rat, Rat)) -> Rat {
    (&p1.1 - &p0.1) / (&p1.0 - &p0.0)
}

/// Drop interior points collinear with their neighbors.
fn normalize(points: Vec<(Rat, Rat)>) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let a = &out[out.len() - 2];
            let b = &out[out.len() - 1];
            // collinear iff (b-a) x (p-b) = 0
            let lhs = (&b.1 - &a.1) * (&p.0 - &b.0);
            let rhs = (&p.1 - &b.1) * (&b.0 - &a.0);
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

impl<'de> Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            breakpoints: Vec<(Rat, Rat)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        PLMap::from_breakpoints(raw.breakpoints).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, y)) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{})", x, y)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{alpha1, alpha2};
    use crate::rational::rat;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn identity_basics() {
        let id = PLMap::identity();
        assert_eq!(id.eval(&rat(1, 3)).unwrap(), rat(1, 3));
        assert!(id.support().is_empty());
        let f = alpha1();
        assert_eq!(id.compose(&f), f);
        assert_eq!(f.compose(&id), f);
    }

    #[test]
    fn alpha1_eval_table() {
        let a1 = alpha1();
        assert_eq!(a1.eval(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(a1.eval(&rat(1, 8)).unwrap(), rat(1, 4));
        assert_eq!(a1.eval(&rat(3, 4)).unwrap(), rat(7, 8));
    }

    #[test]
    fn alpha2_eval_table() {
        let a2 = alpha2();
        assert_eq!(a2.eval(&rat(3, 4)).unwrap(), rat(3, 4));
        assert_eq!(a2.eval(&rat(5, 16)).unwrap(), rat(3, 8));
        assert_eq!(a2.eval(&rat(3, 8)).unwrap(), rat(7, 16));
    }

    #[test]
    fn eval_out_of_domain() {
        assert!(alpha1().eval(&rat(3, 2)).is_err());
        assert!(alpha1().eval(&rat(-1, 2)).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a1 = alpha1();
        assert!(a1.compose(&a1.inverse()).is_identity());
        // 1/8 -> 1/4 -> 1/2 under right action
        assert_eq!(a1.compose(&a1).eval(&rat(1, 8)).unwrap(), rat(1, 2));
        assert_eq!(a1.inverse().eval(&rat(1, 2)).unwrap(), rat(1, 4));
        let a2 = alpha2();
        assert_eq!(a2.inverse().inverse(), a2);
        assert!(a1.power(0).is_identity());
        assert!(a1.commutator(&a1).is_identity());
    }

    #[test]
    fn supports() {
        assert_eq!(alpha2().support(), vec![iv((1, 4), (1, 2))]);
        assert_eq!(alpha1().support(), vec![iv((0, 1), (1, 1))]);
        let conj = alpha2().conjugate(&alpha1());
        assert_eq!(conj.support(), vec![iv((1, 2), (3, 4))]);
    }

    #[test]
    fn support_interior_crossing() {
        // a single piece crossing the diagonal: fixed point at 1/2 splits
        // the support into two orbitals
        let f = PLMap::from_breakpoints(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 4), rat(1, 8)),
            (rat(3, 4), rat(7, 8)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(f.support(), vec![iv((0, 1), (1, 2)), iv((1, 2), (1, 1))]);
    }

    #[test]
    fn one_bump_factors_round_trip() {
        let a2 = alpha2();
        assert_eq!(a2.one_bump_factors(), vec![a2.clone()]);
        assert!(PLMap::identity().one_bump_factors().is_empty());
        // two disjoint bumps compose back to the original
        let b1 = crate::construct::bump(&iv((1, 8), (1, 4)));
        let b2 = crate::construct::bump(&iv((1, 2), (3, 4)));
        let f = b1.compose(&b2);
        let factors = f.one_bump_factors();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].compose(&factors[1]), f);
        assert_eq!(factors[1].compose(&factors[0]), f);
    }

    #[test]
    fn end_slope_values() {
        let a1 = alpha1();
        let whole = iv((0, 1), (1, 1));
        assert_eq!(a1.end_slopes(&whole).unwrap(), (rat(2, 1), rat(1, 2)));
        assert_eq!(alpha2().end_slopes(&whole).unwrap(), (rat(1, 1), rat(1, 1)));
        assert_eq!(
            PLMap::identity().end_slopes(&iv((1, 4), (1, 2))).unwrap(),
            (rat(1, 1), rat(1, 1))
        );
        // alpha1 does not fix 1/2
        assert!(a1.end_slopes(&iv((1, 4), (1, 2))).is_err());
    }

    #[test]
    fn normalization_is_canonical() {
        let padded = PLMap::from_breakpoints(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 8), rat(1, 4)),
            (rat(1, 4), rat(1, 2)),
            (rat(1, 2), rat(3, 4)),
            (rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(padded, alpha1());
    }

    #[test]
    fn json_round_trip() {
        let a2 = alpha2();
        let s = serde_json::to_string(&a2).unwrap();
        assert!(s.contains("\"5/16\""));
        let back: PLMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a2);
    }
}
