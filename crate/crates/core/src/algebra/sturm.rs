//! Exact counting of distinct real roots on an open interval.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly::Poly;
use super::rational::{rat, Rational};
use super::AlgebraError;

/// Open interval `(lo, hi)` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenInterval {
    #[serde(serialize_with = "crate::wire::ser_rational")]
    lo: Rational,
    #[serde(serialize_with = "crate::wire::ser_rational")]
    hi: Rational,
}

impl OpenInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, AlgebraError> {
        if lo >= hi {
            return Err(AlgebraError::EmptyInterval);
        }
        Ok(Self { lo, hi })
    }

    /// `(0, 1/64)`, the range of levels carrying an oval.
    pub fn levels() -> Self {
        Self {
            lo: Rational::zero(),
            hi: rat(1, 64),
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo < x && x < &self.hi
    }
}

/// Signed remainder sequence `p, p', -rem(p, p'), ...`.
///
/// Each remainder is rescaled by a positive constant to keep coefficients
/// small; positive scaling leaves every sign evaluation unchanged.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero entry");
        if r.is_zero() {
            break;
        }
        let lead = r.leading().expect("nonzero").abs();
        seq.push(-r.scale(&lead.recip()));
    }
    seq
}

fn sign_changes(seq: &[Poly], at: &Rational) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = p.eval(at);
        if v.is_zero() {
            continue;
        }
        let negative = v.is_negative();
        if last.is_some_and(|prev| prev != negative) {
            changes += 1;
        }
        last = Some(negative);
    }
    changes
}

/// Number of distinct real roots of `p` strictly inside `iv`.
///
/// The square-free part is taken first and roots sitting exactly on an
/// endpoint are divided out, so the count never includes `lo` or `hi`.
pub fn sturm_count(p: &Poly, iv: &OpenInterval) -> Result<usize, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut q = p.square_free();
    for end in [iv.lo(), iv.hi()] {
        if q.eval(end).is_zero() {
            q = q.exact_div(&Poly::linear_root(end))?;
        }
    }
    if q.degree() == Some(0) {
        return Ok(0);
    }
    let seq = sturm_sequence(&q);
    Ok(sign_changes(&seq, iv.lo()) - sign_changes(&seq, iv.hi()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn roots_poly(roots: &[Rational]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r))
    }

    #[test]
    fn single_root_inside() {
        let p = Poly::linear_root(&rat(1, 128));
        assert_eq!(sturm_count(&p, &OpenInterval::levels()).unwrap(), 1);
    }

    #[test]
    fn endpoint_roots_excluded() {
        let d = Poly::from_ints(&[0, -1, 64]);
        assert_eq!(sturm_count(&d, &OpenInterval::levels()).unwrap(), 0);
    }

    #[test]
    fn two_roots_below_upper_end() {
        let p = roots_poly(&[rat(1, 100), rat(1, 200)]);
        assert_eq!(sturm_count(&p, &OpenInterval::levels()).unwrap(), 2);
    }

    #[test]
    fn multiple_roots_counted_once() {
        let p = roots_poly(&[
            rat(1, 100),
            rat(1, 100),
            rat(1, 100),
            rat(1, 90),
            rat(1, 30),
        ]);
        assert_eq!(sturm_count(&p, &OpenInterval::levels()).unwrap(), 2);
    }

    #[test]
    fn constants_and_zero() {
        assert_eq!(
            sturm_count(&Poly::constant(int(-3)), &OpenInterval::levels()).unwrap(),
            0
        );
        assert!(matches!(
            sturm_count(&Poly::zero(), &OpenInterval::levels()),
            Err(AlgebraError::ZeroPolynomial)
        ));
    }

    #[test]
    fn double_endpoint_root_excluded() {
        let p = roots_poly(&[rat(1, 64), rat(1, 64), rat(1, 80)]);
        assert_eq!(sturm_count(&p, &OpenInterval::levels()).unwrap(), 1);
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(OpenInterval::new(rat(1, 2), rat(1, 2)).is_err());
        assert!(OpenInterval::new(rat(1, 2), rat(1, 3)).is_err());
    }
}
