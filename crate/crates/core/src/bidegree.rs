use std::fmt;

/// A bidegree `(p, q)`; `p` is horizontal, `q` vertical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bidegree {
    pub p: i32,
    pub q: i32,
}

impl Bidegree {
    pub const fn new(p: i32, q: i32) -> Self {
        Bidegree { p, q }
    }

    pub const fn total(self) -> i32 {
        self.p + self.q
    }

    /// Target of `d_i`, which has bidegree `(-i, i-1)`.
    pub const fn shift(self, i: usize) -> Self {
        Bidegree::new(self.p - i as i32, self.q + i as i32 - 1)
    }

    /// Source of the `d_i` landing here.
    pub const fn unshift(self, i: usize) -> Self {
        Bidegree::new(self.p + i as i32, self.q - i as i32 + 1)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}
