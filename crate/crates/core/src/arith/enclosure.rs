use serde::{Deserialize, Serialize};

const U: f64 = f64::EPSILON;

/// Closed real interval `[lo, hi]`; arithmetic rounds outward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return x;
    }
    x - (x.abs() * U + 1e-300)
}

fn upw(x: f64) -> f64 {
    if x == f64::INFINITY {
        return x;
    }
    x + (x.abs() * U + 1e-300)
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Enclosure { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, o: &Enclosure) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(down(self.lo + o.lo), upw(self.hi + o.hi))
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(down(self.lo - o.hi), upw(self.hi - o.lo))
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(-self.hi, -self.lo)
    }

    pub fn scale(&self, k: f64) -> Enclosure {
        let a = self.lo * k;
        let b = self.hi * k;
        Enclosure::new(down(a.min(b)), upw(a.max(b)))
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(down(lo), upw(hi))
    }

    /// Division by a strictly positive enclosure.
    pub fn div_pos(&self, o: &Enclosure) -> Enclosure {
        assert!(o.lo > 0.0, "division by enclosure touching zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Enclosure::new(down(lo), upw(hi))
    }

    pub fn max(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    /// `ln` of a positive enclosure.
    pub fn ln(&self) -> Enclosure {
        assert!(self.lo > 0.0, "ln of enclosure touching zero");
        Enclosure::new(down(down(self.lo.ln())), upw(upw(self.hi.ln())))
    }

    pub fn exp(&self) -> Enclosure {
        Enclosure::new(down(down(self.lo.exp())).max(0.0), upw(upw(self.hi.exp())))
    }

    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }
}
