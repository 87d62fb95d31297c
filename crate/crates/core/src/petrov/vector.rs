use std::fmt;

use serde::Serialize;

use crate::algebra::{Poly, Rational};

/// Name of the area integral `I_{k,l}(t) = ∬ x^k y^l` over the region bounded
/// by the oval at level `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MonomialIndex {
    pub k: i64,
    pub l: i64,
}

impl MonomialIndex {
    pub const fn new(k: i64, l: i64) -> Self {
        Self { k, l }
    }

    pub fn total(&self) -> i64 {
        self.k + self.l
    }

    pub fn offset(&self, dk: i64, dl: i64) -> Self {
        Self::new(self.k + dk, self.l + dl)
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I_{{{},{}}}", self.k, self.l)
    }
}

/// Coefficients of `p1(t) J1 + p2(t) J2 + p3(t) J3`, where the generators are
/// `J1 = I_{0,0}`, `J2 = I_{2,0}`, `J3 = I_{3,0}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PetrovVector {
    pub p1: Poly,
    pub p2: Poly,
    pub p3: Poly,
}

impl PetrovVector {
    pub fn new(p1: Poly, p2: Poly, p3: Poly) -> Self {
        Self { p1, p2, p3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The `i`-th generator (1-based).
    pub fn generator(i: usize) -> Self {
        let mut v = Self::zero();
        match i {
            1 => v.p1 = Poly::one(),
            2 => v.p2 = Poly::one(),
            3 => v.p3 = Poly::one(),
            _ => panic!("generator index {i} out of range"),
        }
        v
    }

    pub fn components(&self) -> [&Poly; 3] {
        [&self.p1, &self.p2, &self.p3]
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|p| p.is_zero())
    }

    pub fn degrees(&self) -> [Option<usize>; 3] {
        self.components().map(Poly::degree)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.degrees().into_iter().flatten().max()
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        Self::new(f(&self.p1), f(&self.p2), f(&self.p3))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            &self.p1 + &other.p1,
            &self.p2 + &other.p2,
            &self.p3 + &other.p3,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            &self.p1 - &other.p1,
            &self.p2 - &other.p2,
            &self.p3 - &other.p3,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, q: &Poly) -> Self {
        self.map(|p| p * q)
    }

    /// Value of the combination given numeric generator values.
    pub fn eval_f64(&self, t: f64, j: [f64; 3]) -> f64 {
        self.p1.eval_f64(t) * j[0] + self.p2.eval_f64(t) * j[1] + self.p3.eval_f64(t) * j[2]
    }
}

impl fmt::Display for PetrovVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})·J1 + ({})·J2 + ({})·J3", self.p1, self.p2, self.p3)
    }
}
