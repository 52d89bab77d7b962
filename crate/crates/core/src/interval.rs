use crate::scalar::Real;

/// Closed enclosure `[lower, upper]` of a real quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lower: T, upper: T) -> Self {
        debug_assert!(lower <= upper, "inverted interval");
        Interval { lower, upper }
    }

    pub fn point(x: T) -> Self {
        Interval { lower: x, upper: x }
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    pub fn mid(&self) -> T {
        (self.lower + self.upper) * crate::scalar::lit(0.5)
    }

    pub fn contains(&self, x: T) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn scale(&self, c: T) -> Self {
        debug_assert!(c >= T::zero());
        Interval { lower: self.lower * c, upper: self.upper * c }
    }
}
