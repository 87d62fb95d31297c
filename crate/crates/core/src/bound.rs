//! Instance-specific zero-count certificates for `I = p1 J1 + p2 J2 + p3 J3`.
//!
//! The chain:
//!
//! 1. Split `(0, 1/64)` at the roots of `p1` (`l` intervals). On each piece
//!    `I / (p1 √t)` has at most one more zero than its derivative, whose
//!    numerator is `tp1 Y + tp2 Z = Z · S` with `S = tp1 w + tp2`, `w = Y/Z`.
//! 2. `S` satisfies `D tp1 S' = A S^2 + B S + C`. Split at the roots of `tp1`
//!    (`k` intervals); between two zeros of `S` inside one piece lies a zero
//!    of `C`, so `S` has at most `λ_j + 1` zeros there.
//!
//! Root counts are exact Sturm counts of distinct roots in `(0, 1/64)`.
//! `λ` counts every root of `C`, including any at roots of `tp1`: a common
//! root of `tp1` and `tp2` is a zero of `S` outside every piece and is also a
//! root of `C`, so it stays covered. Zeros of `I` at roots of `p1` are zeros
//! of `S` for the same reason.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    content_of, int, rat, sturm_count, AlgebraError, OpenInterval, Poly, Rational,
};
use crate::petrov::{PetrovVector, PolynomialForm, ReductionEngine, ReductionError};
use crate::picard_fuchs::{derived, PfError};
use crate::wire::ser_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Pf(#[from] PfError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("tp1 vanishes identically; S = tp2 is a polynomial")]
    TildeVanishes,
    #[error("degree check failed: deg {what} = {degree} exceeds {bound}")]
    Degree {
        what: &'static str,
        degree: usize,
        bound: String,
    },
}

/// Numerators of `(I / (p1 √t))'` over `D p1^2 t √t`, as multipliers of `Y`
/// and `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TildePair {
    pub tp1: Poly,
    pub tp2: Poly,
}

impl TildePair {
    /// Removes the shared rational content; the first nonzero member gets a
    /// positive leading coefficient.
    pub fn normalized(tp1: Poly, tp2: Poly) -> Self {
        let content = content_of(tp1.coeffs().iter().chain(tp2.coeffs()));
        if content.is_zero() {
            return Self { tp1, tp2 };
        }
        let lead = tp1.leading().or(tp2.leading()).expect("nonzero pair");
        let c = if lead.is_negative() {
            -content
        } else {
            content
        };
        let inv = c.recip();
        Self {
            tp1: tp1.scale(&inv),
            tp2: tp2.scale(&inv),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TildeOutcome {
    Pair(TildePair),
    /// `p1 ≡ 0`: `I = p2 Y + p3 Z` is already in the tilde shape.
    Degenerate,
}

/// `D tp1 S' = A S^2 + B S + C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiccatiS {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    /// Generic case: split at roots of `p1`, then of `tp1`.
    Full,
    /// `p1 ≡ 0`: `(tp1, tp2) = (p2, p3)`, no division step.
    NoJ1,
    /// `tp1 ≡ 0`: the zeros of `S` are the roots of the polynomial `tp2`.
    PolynomialS,
}

/// Exact degrees entering the chain; `None` for a zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub p: [Option<usize>; 3],
    pub tp1: Option<usize>,
    pub tp2: Option<usize>,
    pub c: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub n: usize,
    pub chain: ChainKind,
    pub petrov: PetrovVector,
    pub tilde: TildePair,
    pub riccati: Option<RiccatiS>,
    pub degrees: DegreeLedger,
    pub k_intervals: usize,
    pub lambda_total: usize,
    pub s_zero_bound: usize,
    pub l_intervals: usize,
    pub instance_bound: usize,
    /// The same chain with every root count replaced by the degree.
    pub degree_bound: usize,
    pub worst_case_s_chain: usize,
    pub worst_case_chain: usize,
    #[serde(serialize_with = "ser_rational")]
    pub generic_bound: Rational,
}

impl BoundCertificate {
    pub fn within_generic(&self) -> bool {
        int(self.instance_bound as i64) <= self.generic_bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BoundOutcome {
    Certificate(Box<BoundCertificate>),
    /// The integral vanishes identically; no zero count applies.
    IdenticallyZero {
        n: usize,
    },
}

impl BoundOutcome {
    pub fn certificate(&self) -> Option<&BoundCertificate> {
        match self {
            Self::Certificate(c) => Some(c),
            Self::IdenticallyZero { .. } => None,
        }
    }
}

/// `7n/4 + 9`.
pub fn generic_bound(n: usize) -> Rational {
    rat(7 * n as i64, 4) + int(9)
}

/// `(7n + 43)/4`, i.e. the generic bound at `n + 1`.
pub fn cycles_bound(n: usize) -> Rational {
    rat(7 * n as i64 + 43, 4)
}

/// `deg C + deg tp1 + 1` at the worst-case degrees `n + 5` and `n/2 + 2`.
pub fn worst_case_s_chain(n: usize) -> usize {
    (n + 5) + (n / 2 + 2) + 1
}

/// Worst-case s-chain plus `deg p1 + 1 <= n/4 + 1` intervals.
pub fn worst_case_chain(n: usize) -> usize {
    worst_case_s_chain(n) + n / 4 + 1
}

fn count(p: &Poly) -> Result<usize, BoundError> {
    if p.is_zero() {
        return Ok(0);
    }
    Ok(sturm_count(p, &OpenInterval::levels())?)
}

fn check_half(what: &'static str, p: &Poly, n: usize) -> Result<(), BoundError> {
    // deg <= n/2 + 2  <=>  2 deg <= n + 4
    match p.degree() {
        Some(d) if 2 * d > n + 4 => Err(BoundError::Degree {
            what,
            degree: d,
            bound: format!("{n}/2 + 2"),
        }),
        _ => Ok(()),
    }
}

/// The tilde pair of a Petrov vector with `p1 ≠ 0`.
pub fn tilde_polys(petrov: &PetrovVector) -> Result<TildeOutcome, BoundError> {
    let [p1, p2, p3] = petrov.components();
    if p1.is_zero() {
        return Ok(TildeOutcome::Degenerate);
    }
    let sys = derived()?;
    let d = &sys.pf.d;
    let xyz = &sys.xyz;
    if !xyz.x.x.is_zero() {
        return Err(PfError::Inconsistent("X' depends on X".into()).into());
    }
    let poly = |h: &crate::picard_fuchs::HalfPowerPoly| {
        h.as_poly()
            .ok_or_else(|| PfError::Inconsistent("fractional power in the X row".into()))
    };
    let (xy, xz) = (poly(&xyz.x.y)?, poly(&xyz.x.z)?);
    let (yy, yz) = (poly(&xyz.y.y)?, poly(&xyz.y.z)?);
    let (zy, zz) = (poly(&xyz.z.y)?, poly(&xyz.z.z)?);

    let t = Poly::t();
    let t_p1 = &t * p1;
    let half = rat(1, 2);
    // D (p2 Y + p3 Z)(t p1' + p1/2)
    let drift = &(&t * &p1.derivative()) + &p1.scale(&half);
    let tp1 = &(&(&(&t_p1 * p1) * &xy) + &(&(d * &t_p1) * &p2.derivative()))
        + &(&(&t_p1 * &(&(p2 * &yy) + &(p3 * &zy))) - &(&(d * p2) * &drift));
    let tp2 = &(&(&(&t_p1 * p1) * &xz) + &(&(d * &t_p1) * &p3.derivative()))
        + &(&(&t_p1 * &(&(p2 * &yz) + &(p3 * &zz))) - &(&(d * p3) * &drift));
    Ok(TildeOutcome::Pair(TildePair::normalized(tp1, tp2)))
}

/// Coefficients of the Riccati equation for `S = tp1 w + tp2`.
pub fn riccati_s(tilde: &TildePair) -> Result<RiccatiS, BoundError> {
    let TildePair { tp1, tp2 } = tilde;
    if tp1.is_zero() {
        return Err(BoundError::TildeVanishes);
    }
    let sys = derived()?;
    let d = &sys.pf.d;
    let r = &sys.riccati;
    // substitute w = (S - tp2)/tp1 into D w' = a2 w^2 + a1 w + a0
    let lin = &(d * &tp1.derivative()) + &(&r.a1 * tp1);
    let b = &(&r.a2 * tp2).scale(&int(-2)) + &lin;
    let c = &(&(&r.a2 * &(tp2 * tp2)) - &(&lin * tp2))
        + &(&(&(d * &tp2.derivative()) + &(&r.a0 * tp1)) * tp1);
    Ok(RiccatiS {
        a: r.a2.clone(),
        b,
        c,
    })
}

/// Certificate for a Petrov vector coming from a form of degree `n`.
pub fn certify(petrov: &PetrovVector, n: usize) -> Result<BoundOutcome, BoundError> {
    if petrov.is_zero() {
        return Ok(BoundOutcome::IdenticallyZero { n });
    }
    let [p1, p2, p3] = petrov.components();
    let (chain_base, tilde) = match tilde_polys(petrov)? {
        TildeOutcome::Pair(pair) => (ChainKind::Full, pair),
        TildeOutcome::Degenerate => (
            ChainKind::NoJ1,
            TildePair::normalized(p2.clone(), p3.clone()),
        ),
    };
    check_half("tp1", &tilde.tp1, n)?;
    check_half("tp2", &tilde.tp2, n)?;

    let (chain, riccati, s_zero_bound, k_intervals, lambda_total, s_degree) = if tilde.tp1.is_zero()
    {
        let s = count(&tilde.tp2)?;
        let deg = tilde.tp2.degree().unwrap_or(0);
        (ChainKind::PolynomialS, None, s, 0, 0, deg)
    } else {
        let ric = riccati_s(&tilde)?;
        if let Some(dc) = ric.c.degree().filter(|&dc| dc > n + 5) {
            return Err(BoundError::Degree {
                what: "C",
                degree: dc,
                bound: format!("{n} + 5"),
            });
        }
        let k = count(&tilde.tp1)? + 1;
        let lambda = count(&ric.c)?;
        let deg = ric.c.degree().unwrap_or(0) + tilde.tp1.degree().unwrap_or(0) + 1;
        (chain_base, Some(ric), lambda + k, k, lambda, deg)
    };

    let (l_intervals, l_degree) = if p1.is_zero() {
        (0, 0)
    } else {
        (count(p1)? + 1, p1.degree().unwrap_or(0) + 1)
    };
    let degrees = DegreeLedger {
        p: petrov.degrees(),
        tp1: tilde.tp1.degree(),
        tp2: tilde.tp2.degree(),
        c: riccati.as_ref().and_then(|r| r.c.degree()),
    };
    Ok(BoundOutcome::Certificate(Box::new(BoundCertificate {
        n,
        chain,
        petrov: petrov.clone(),
        tilde,
        riccati,
        degrees,
        k_intervals,
        lambda_total,
        s_zero_bound,
        l_intervals,
        instance_bound: s_zero_bound + l_intervals,
        degree_bound: s_degree + l_degree,
        worst_case_s_chain: worst_case_s_chain(n),
        worst_case_chain: worst_case_chain(n),
        generic_bound: generic_bound(n),
    })))
}

/// Certificate for `∮ ω`.
pub fn instance_bound(form: &PolynomialForm) -> Result<BoundOutcome, BoundError> {
    let petrov = ReductionEngine::shared().reduce_form(form)?;
    certify(&petrov, form.degree())
}

/// `floor(3n/2) + 8`, the §4 s-chain total written directly.
pub fn three_halves_chain(n: usize) -> usize {
    let (q, _) = (3 * n).div_rem(&2);
    q + 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::petrov::PolynomialForm;
    use proptest::prelude::*;

    fn cert(form: &PolynomialForm) -> BoundCertificate {
        instance_bound(form).unwrap().certificate().unwrap().clone()
    }

    #[test]
    fn generic_and_cycles() {
        assert_eq!(generic_bound(0), int(9));
        assert_eq!(generic_bound(4), int(16));
        assert_eq!(generic_bound(2), rat(25, 2));
        assert_eq!(cycles_bound(3), int(16));
        assert_eq!(cycles_bound(0), rat(43, 4));
        for n in 0..=100 {
            assert_eq!(cycles_bound(n), generic_bound(n + 1));
        }
    }

    #[test]
    fn worst_case_arithmetic() {
        for n in 0..=200 {
            assert_eq!(worst_case_s_chain(n), three_halves_chain(n));
            assert!(int(worst_case_s_chain(n) as i64) <= rat(3 * n as i64, 2) + int(8));
            assert!(int(worst_case_chain(n) as i64) <= generic_bound(n));
        }
    }

    #[test]
    fn tilde_of_j1() {
        let TildeOutcome::Pair(pair) = tilde_polys(&PetrovVector::generator(1)).unwrap() else {
            panic!("p1 = 1 is not degenerate");
        };
        // proportional to (9, -10)
        assert_eq!(pair.tp1.scale(&int(-10)), pair.tp2.scale(&int(9)));
        assert_eq!(pair.tp1, Poly::monomial(int(9), 1));
    }

    #[test]
    fn tilde_degenerate() {
        assert_eq!(
            tilde_polys(&PetrovVector::generator(2)).unwrap(),
            TildeOutcome::Degenerate
        );
    }

    #[test]
    fn riccati_s_examples() {
        let r = riccati_s(&TildePair {
            tp1: Poly::one(),
            tp2: Poly::zero(),
        })
        .unwrap();
        assert_eq!(r.a, Poly::new(vec![rat(-3, 2), int(24)]));
        assert_eq!(r.b, Poly::from_ints(&[4, -32]));
        assert_eq!(r.c, Poly::constant(rat(-5, 2)));
        assert_eq!(
            riccati_s(&TildePair {
                tp1: Poly::zero(),
                tp2: Poly::one()
            }),
            Err(BoundError::TildeVanishes)
        );
    }

    #[test]
    fn riccati_s_degree() {
        let tp1 = Poly::from_ints(&[1, -3, 0, 5]);
        let tp2 = Poly::from_ints(&[2, 0, 7, 1]);
        let r = riccati_s(&TildePair { tp1, tp2 }).unwrap();
        assert!(r.c.degree().unwrap() <= 2 * 3 + 2);
    }

    #[test]
    fn positive_integrals_certify() {
        let c = cert(&PolynomialForm::dx_term(0, 1, int(1)));
        assert_eq!(c.chain, ChainKind::Full);
        assert_eq!(c.l_intervals, 1);
        assert!(c.instance_bound <= c.degree_bound);
        let c = cert(&PolynomialForm::dy_term(2, 1, int(1)));
        assert_eq!(c.chain, ChainKind::NoJ1);
        assert_eq!(c.generic_bound, generic_bound(3));
    }

    #[test]
    fn identically_zero() {
        assert_eq!(
            instance_bound(&PolynomialForm::dh()).unwrap(),
            BoundOutcome::IdenticallyZero { n: 3 }
        );
    }

    #[test]
    fn polynomial_s_chain() {
        // I = (t - 1/128) J3: S is the polynomial itself
        let v = PetrovVector::new(
            Poly::zero(),
            Poly::zero(),
            Poly::new(vec![rat(-1, 128), int(1)]),
        );
        let BoundOutcome::Certificate(c) = certify(&v, 4).unwrap() else {
            panic!()
        };
        assert_eq!(c.chain, ChainKind::PolynomialS);
        assert_eq!(c.s_zero_bound, 1);
        assert_eq!(c.instance_bound, 1);
        assert!(c.riccati.is_none());
    }

    #[test]
    fn degree_four_generic_is_sixteen() {
        let c = cert(
            &PolynomialForm::dy_term(3, 1, int(1)).add(&PolynomialForm::dx_term(0, 1, int(2))),
        );
        assert_eq!(c.n, 4);
        assert_eq!(c.generic_bound, int(16));
    }

    fn arb_petrov() -> impl Strategy<Value = PetrovVector> {
        let coef = (-4i64..=4, 1i64..=3).prop_map(|(n, d)| rat(n, d));
        let poly = prop::collection::vec(coef, 0..3).prop_map(Poly::new);
        (poly.clone(), poly.clone(), poly).prop_map(|(a, b, c)| PetrovVector::new(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling_invariance(v in arb_petrov(), num in 1i64..7, den in 1i64..5, neg in any::<bool>()) {
            let c = if neg { rat(-num, den) } else { rat(num, den) };
            let n = 4 * v.max_degree().unwrap_or(0) + 3;
            let a = certify(&v, n).unwrap();
            let b = certify(&v.scale(&c), n).unwrap();
            match (a, b) {
                (BoundOutcome::Certificate(a), BoundOutcome::Certificate(b)) => {
                    prop_assert_eq!(a.instance_bound, b.instance_bound);
                    prop_assert_eq!(a.tilde, b.tilde);
                }
                (a, b) => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn chain_stays_below_worst_case(v in arb_petrov()) {
            let n = 4 * v.max_degree().unwrap_or(0) + 2;
            if let BoundOutcome::Certificate(c) = certify(&v, n).unwrap() {
                prop_assert!(c.instance_bound <= c.degree_bound);
                prop_assert!(c.degree_bound <= c.worst_case_chain);
                prop_assert!(c.s_zero_bound <= c.worst_case_s_chain);
                prop_assert!(c.within_generic());
            }
        }
    }
}
