use std::fmt;

/// Closed interval `[lo, hi]` on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    /// True when `x` is strictly inside, at least `tol` away from both endpoints.
    pub fn contains_interior(&self, x: f64, tol: f64) -> bool {
        x > self.lo + tol && x < self.hi - tol
    }

    pub fn includes(&self, other: &Interval, tol: f64) -> bool {
        other.lo >= self.lo - tol && other.hi <= self.hi + tol
    }

    /// Signed distance between two intervals: positive gap when disjoint,
    /// minus the overlap length otherwise.
    pub fn gap(&self, other: &Interval) -> f64 {
        if self.hi <= other.lo {
            other.lo - self.hi
        } else if other.hi <= self.lo {
            self.lo - other.hi
        } else {
            -(self.hi.min(other.hi) - self.lo.max(other.lo))
        }
    }

    pub fn inflate(&self, by: f64) -> Interval {
        Interval {
            lo: self.lo - by,
            hi: self.hi + by,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_is_signed() {
        let a = Interval::new(0.0, 1.0 / 3.0);
        let b = Interval::new(2.0 / 3.0, 1.0);
        assert!((a.gap(&b) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.gap(&b), b.gap(&a));
        let c = Interval::new(0.25, 0.75);
        assert!((a.gap(&c) + (1.0 / 3.0 - 0.25)).abs() < 1e-15);
        assert_eq!(Interval::new(0.0, 0.5).gap(&Interval::new(0.5, 1.0)), 0.0);
    }

    #[test]
    fn new_orders_endpoints() {
        let i = Interval::new(2.0, -1.0);
        assert_eq!(i.lo, -1.0);
        assert_eq!(i.len(), 3.0);
    }
}
