//! Effective decomposition of every `I_{k,l}` (and every polynomial form)
//! over the generators `J1 = I_{0,0}`, `J2 = I_{2,0}`, `J3 = I_{3,0}`.
//!
//! Levels `m = k + l` are built in increasing order:
//!
//! * `m <= 3` is derived once from the three-term relation and the
//!   `k = l = -1` row-reduced pair, starting from the three generators.
//! * For `m >= 4`, `I_{k,m-k}` with `2 <= k <= m-1` comes from the row-reduced
//!   pair at an index of level `m - 4` (degree goes up by at most one there),
//!   then `I_{1,m-1}`, `I_{0,m}` and `I_{m,0}` from the three-term relation.
//!
//! Every entry is checked against the bound `deg p_i <= floor(m / 4)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use super::form::PolynomialForm;
use super::relations::{reduced_pair, three_term, LinearRelation};
use super::vector::{MonomialIndex, PetrovVector};
use super::ReductionError;

type Levels = Vec<Vec<PetrovVector>>;

/// Memoized reduction table. Readers share a read lock; extending the table
/// takes the write lock, so published entries never change.
#[derive(Debug, Default)]
pub struct ReductionEngine {
    levels: RwLock<Levels>,
}

/// `n = deg ω` together with the actual degrees of the reduction
/// (`None` for a zero coefficient).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub n: usize,
    pub p1: Option<usize>,
    pub p2: Option<usize>,
    pub p3: Option<usize>,
}

impl DegreeProfile {
    pub fn of(n: usize, v: &PetrovVector) -> Self {
        let [p1, p2, p3] = v.degrees();
        Self { n, p1, p2, p3 }
    }
}

fn solve_for(
    rel: &LinearRelation,
    target: MonomialIndex,
    lookup: impl Fn(MonomialIndex) -> Option<PetrovVector>,
) -> Result<PetrovVector, ReductionError> {
    let pivot = rel.coeff(target);
    if pivot.degree() != Some(0) {
        return Err(ReductionError::Internal(format!(
            "coefficient of {target} is not a nonzero constant: {pivot}"
        )));
    }
    let inv = pivot.coeffs()[0].recip();
    let mut acc = PetrovVector::zero();
    for (idx, c) in rel.terms() {
        if *idx == target {
            continue;
        }
        let known = lookup(*idx)
            .ok_or_else(|| ReductionError::Internal(format!("{idx} needed before it is known")))?;
        acc = acc.add(&known.mul_poly(c));
    }
    Ok(acc.scale(&-inv))
}

fn check_degree(idx: MonomialIndex, v: &PetrovVector) -> Result<(), ReductionError> {
    let bound = (idx.total() / 4) as usize;
    match v.max_degree() {
        Some(d) if d > bound => Err(ReductionError::DegreeBound {
            what: idx.to_string(),
            degree: d,
            bound,
        }),
        _ => Ok(()),
    }
}

fn base_levels() -> Result<Levels, ReductionError> {
    let idx = MonomialIndex::new;
    let mut known: HashMap<MonomialIndex, PetrovVector> = HashMap::new();
    known.insert(idx(0, 0), PetrovVector::generator(1));
    known.insert(idx(2, 0), PetrovVector::generator(2));
    known.insert(idx(3, 0), PetrovVector::generator(3));

    let (corner_a, corner_b) = reduced_pair(-1, -1);
    let steps: [(LinearRelation, MonomialIndex); 7] = [
        (corner_a, idx(1, 0)),
        (corner_b, idx(1, 1)),
        (three_term(-2, -1), idx(0, 1)),
        (three_term(0, -1), idx(2, 1)),
        (three_term(-1, 0), idx(1, 2)),
        (three_term(-2, 0), idx(0, 2)),
        (three_term(-2, 1), idx(0, 3)),
    ];
    for (rel, target) in steps {
        let v = solve_for(&rel, target, |i| known.get(&i).cloned())?;
        known.insert(target, v);
    }

    (0..=3i64)
        .map(|m| {
            (0..=m)
                .map(|k| {
                    let i = idx(k, m - k);
                    let v = known.remove(&i).expect("base table covers level <= 3");
                    check_degree(i, &v)?;
                    Ok(v)
                })
                .collect()
        })
        .collect()
}

/// Entries of level `m >= 4`, indexed by `k`.
fn next_level(levels: &Levels, m: i64) -> Result<Vec<PetrovVector>, ReductionError> {
    let idx = MonomialIndex::new;
    let mut current: Vec<Option<PetrovVector>> = vec![None; m as usize + 1];
    let lookup = |current: &[Option<PetrovVector>], i: MonomialIndex| {
        if i.k < 0 || i.l < 0 {
            return None;
        }
        let level = i.total();
        if level == m {
            current[i.k as usize].clone()
        } else {
            levels.get(level as usize)?.get(i.k as usize).cloned()
        }
    };

    let mut place = |target: MonomialIndex, rel: LinearRelation| -> Result<(), ReductionError> {
        let v = solve_for(&rel, target, |i| lookup(&current, i))?;
        check_degree(target, &v)?;
        current[target.k as usize] = Some(v);
        Ok(())
    };

    for k in 2..m {
        let l = m - k;
        let target = idx(k, l);
        if l >= 2 {
            place(target, reduced_pair(k - 2, l - 2).1)?;
        } else {
            place(target, reduced_pair(k - 3, l - 1).0)?;
        }
    }
    place(idx(1, m - 1), three_term(-1, m - 3))?;
    place(idx(0, m), three_term(-2, m - 2))?;
    place(idx(m, 0), three_term(m - 3, -1))?;

    Ok(current
        .into_iter()
        .map(|v| v.expect("every index of the level is placed"))
        .collect())
}

impl ReductionEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide engine shared by the convenience functions.
    pub fn shared() -> &'static ReductionEngine {
        static ENGINE: OnceLock<ReductionEngine> = OnceLock::new();
        ENGINE.get_or_init(ReductionEngine::new)
    }

    fn ensure(&self, m: usize) -> Result<(), ReductionError> {
        if self.levels.read().expect("lock poisoned").len() > m {
            return Ok(());
        }
        let mut levels = self.levels.write().expect("lock poisoned");
        if levels.is_empty() {
            *levels = base_levels()?;
        }
        while levels.len() <= m {
            let next = next_level(&levels, levels.len() as i64)?;
            levels.push(next);
        }
        Ok(())
    }

    /// Number of fully populated levels.
    pub fn cached_levels(&self) -> usize {
        self.levels.read().expect("lock poisoned").len()
    }

    /// Decomposition of `I_{k,l}`; `k, l >= 0`.
    pub fn reduce_monomial(&self, idx: MonomialIndex) -> Result<PetrovVector, ReductionError> {
        if idx.k < 0 || idx.l < 0 {
            return Err(ReductionError::NegativeIndex { k: idx.k, l: idx.l });
        }
        let m = idx.total() as usize;
        self.ensure(m)?;
        Ok(self.levels.read().expect("lock poisoned")[m][idx.k as usize].clone())
    }

    /// Decomposition of `∮ ω`, via Green: `∮ p dx + q dy = ∬ (q_x - p_y)`.
    pub fn reduce_form(&self, form: &PolynomialForm) -> Result<PetrovVector, ReductionError> {
        let integrand = form.integrand();
        if let Some(m) = integrand.keys().map(|&(i, j)| (i + j) as usize).max() {
            self.ensure(m)?;
        }
        let levels = self.levels.read().expect("lock poisoned");
        let mut acc = PetrovVector::zero();
        for (&(i, j), c) in &integrand {
            let v = &levels[(i + j) as usize][i as usize];
            acc = acc.add(&v.scale(c));
        }
        let n = form.degree();
        let bound = n / 4;
        if let Some(d) = acc.max_degree().filter(|&d| d > bound) {
            return Err(ReductionError::DegreeBound {
                what: "form".into(),
                degree: d,
                bound,
            });
        }
        Ok(acc)
    }

    pub fn degree_profile(&self, form: &PolynomialForm) -> Result<DegreeProfile, ReductionError> {
        Ok(DegreeProfile::of(form.degree(), &self.reduce_form(form)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, Poly, Rational};
    use crate::petrov::relations::{reduced_pair, three_term};

    fn pv(p1: &[Rational], p2: &[Rational], p3: &[Rational]) -> PetrovVector {
        PetrovVector::new(
            Poly::new(p1.to_vec()),
            Poly::new(p2.to_vec()),
            Poly::new(p3.to_vec()),
        )
    }

    fn reduce(k: i64, l: i64) -> PetrovVector {
        ReductionEngine::new()
            .reduce_monomial(MonomialIndex::new(k, l))
            .unwrap()
    }

    #[test]
    fn generators_and_small_cases() {
        assert_eq!(reduce(0, 0), PetrovVector::generator(1));
        assert_eq!(reduce(2, 0), PetrovVector::generator(2));
        assert_eq!(reduce(3, 0), PetrovVector::generator(3));
        assert_eq!(reduce(1, 0), pv(&[], &[int(2)], &[]));
        assert_eq!(reduce(1, 1), pv(&[], &[rat(1, 2)], &[]));
        assert_eq!(reduce(2, 1), pv(&[], &[rat(1, 2)], &[rat(-1, 2)]));
    }

    #[test]
    fn level_two_and_five_entries() {
        assert_eq!(
            reduce(2, 2),
            pv(&[int(0), rat(-1, 3)], &[rat(1, 6)], &[rat(-1, 6)])
        );
        assert_eq!(
            reduce(5, 2),
            pv(&[], &[rat(5, 252), rat(-4, 21)], &[rat(-5, 252), rat(1, 9)])
        );
    }

    #[test]
    fn base_levels_are_constant() {
        let engine = ReductionEngine::new();
        for m in 0..=3 {
            for k in 0..=m {
                let v = engine
                    .reduce_monomial(MonomialIndex::new(k, m - k))
                    .unwrap();
                assert!(v.max_degree().unwrap_or(0) == 0, "I_{{{k},{}}}", m - k);
            }
        }
    }

    #[test]
    fn negative_index_rejected() {
        let engine = ReductionEngine::new();
        assert!(matches!(
            engine.reduce_monomial(MonomialIndex::new(-1, 2)),
            Err(ReductionError::NegativeIndex { k: -1, l: 2 })
        ));
    }

    #[test]
    fn every_relation_is_satisfied_by_the_table() {
        // Each relation instantiated inside the table must reduce to zero,
        // including the rows the strategy did not use.
        let engine = ReductionEngine::new();
        let value = |i: MonomialIndex| engine.reduce_monomial(i).unwrap();
        let residual = |rel: &crate::petrov::relations::LinearRelation| {
            rel.terms().fold(PetrovVector::zero(), |acc, (i, c)| {
                acc.add(&value(*i).mul_poly(c))
            })
        };
        for k in 0..=6 {
            for l in 0..=6 {
                let (a, b) = reduced_pair(k, l);
                assert!(residual(&a).is_zero(), "first reduced row at ({k},{l})");
                assert!(residual(&b).is_zero(), "second reduced row at ({k},{l})");
                let (r1, r2) = crate::petrov::relations::level_pair(k, l);
                assert!(residual(&r1).is_zero());
                assert!(residual(&r2).is_zero());
            }
        }
        for k in -2..=6 {
            for l in -2..=6 {
                if k + 2 < 0 || l + 1 < 0 {
                    continue;
                }
                assert!(
                    residual(&three_term(k, l)).is_zero(),
                    "three-term at ({k},{l})"
                );
            }
        }
    }

    #[test]
    fn engine_extends_lazily() {
        let engine = ReductionEngine::new();
        assert_eq!(engine.cached_levels(), 0);
        engine.reduce_monomial(MonomialIndex::new(1, 1)).unwrap();
        assert_eq!(engine.cached_levels(), 4);
        engine.reduce_monomial(MonomialIndex::new(3, 4)).unwrap();
        assert_eq!(engine.cached_levels(), 8);
    }
}
