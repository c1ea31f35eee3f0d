//! Service rate region queries: membership with allocation witnesses,
//! linear maximization, `λ_i*`, `δ(G)`, subset bounds, waterfilling, and
//! the verification report.

mod m3;
mod report;
mod slice;
mod waterfill;

pub use m3::{m3_brute, m3_closed_form};
pub use report::{
    single_symbol_prediction, total_rate_prediction, uniformized_bound, verify_instance, verify_report, Claim,
    CodeSummary, VerificationReport, VerifyOptions,
};
pub use slice::{slice, write_slice_csv, SlicePoint, SliceSpec};
pub use waterfill::{waterfill, waterfill_with_limit, WaterfillResult, DEFAULT_EVENT_LIMIT};

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::exactmath::{rational_serde, Rational};
use crate::lp::{check_feasible_with, solve_with, verify_certificate, LpOptions, LpOutcome, LpProblem, Relation};
use crate::recovery::{build_recovery_system_arc, RecoverySet, RecoverySystem};

/// A recovery system with a uniform per-node capacity `μ`.
#[derive(Clone, Debug)]
pub struct SrrInstance {
    system: RecoverySystem,
    capacity: Rational,
    lp: LpOptions,
}

impl SrrInstance {
    pub fn new(system: RecoverySystem, capacity: Rational) -> Result<Self> {
        if !capacity.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "capacity must be positive, got {capacity}"
            )));
        }
        Ok(SrrInstance {
            system,
            capacity,
            lp: LpOptions::default(),
        })
    }

    /// Enumerates the minimum recovery system of `code` and uses capacity 1.
    pub fn from_code(code: LinearCode) -> Result<Self> {
        let system = build_recovery_system_arc(Arc::new(code), None)?;
        SrrInstance::new(system, Rational::one())
    }

    pub fn with_lp_options(mut self, options: LpOptions) -> Self {
        self.lp = options;
        self
    }

    /// Same recovery system, different capacity.
    pub fn with_capacity(&self, capacity: Rational) -> Result<Self> {
        Ok(SrrInstance::new(self.system.clone(), capacity)?.with_lp_options(self.lp))
    }

    pub fn code(&self) -> &LinearCode {
        self.system.code()
    }

    pub fn system(&self) -> &RecoverySystem {
        &self.system
    }

    pub fn capacity(&self) -> &Rational {
        &self.capacity
    }

    pub fn lp_options(&self) -> &LpOptions {
        &self.lp
    }

    pub fn k(&self) -> usize {
        self.system.k()
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }

    fn check_demand(&self, demand: &[Rational]) -> Result<()> {
        if demand.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "demand has {} entries, code has k = {}",
                demand.len(),
                self.k()
            )));
        }
        if let Some(bad) = demand.iter().find(|x| x.is_negative()) {
            return Err(Error::InvalidParameter(format!("negative demand {bad}")));
        }
        Ok(())
    }

    fn check_symbol(&self, i: usize) -> Result<()> {
        if i >= self.k() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                bound: self.k(),
            });
        }
        Ok(())
    }

    /// Allocation LP over the sets of the listed symbols: one variable per
    /// (symbol, set), capacity rows for every node touched. Returns the
    /// problem and the (symbol, set index) behind each variable.
    fn allocation_lp(&self, symbols: &[usize], objective: impl Fn(usize) -> Rational) -> (LpProblem, Vec<(usize, usize)>) {
        let vars: Vec<(usize, usize)> = symbols
            .iter()
            .flat_map(|&i| (0..self.system.sets(i).len()).map(move |s| (i, s)))
            .collect();
        let obj = vars.iter().map(|&(i, _)| objective(i)).collect();
        let mut lp = LpProblem::new(vars.len(), obj);
        for v in 0..self.n() {
            let row: Vec<Rational> = vars
                .iter()
                .map(|&(i, s)| {
                    if self.system.sets(i)[s].contains(v) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            if row.iter().any(|a| !a.is_zero()) {
                lp.add(row, Relation::Le, self.capacity.clone());
            }
        }
        (lp, vars)
    }

    fn allocation_from(&self, vars: &[(usize, usize)], values: &[Rational]) -> Allocation {
        let mut alloc = Allocation::zero(&self.system);
        for (&(i, s), x) in vars.iter().zip(values) {
            alloc.weights[i][s] = x.clone();
        }
        alloc
    }

    /// Decides whether `demand` lies in the region; a member comes with a
    /// re-validated allocation witness.
    pub fn membership(&self, demand: &[Rational]) -> Result<Membership> {
        self.check_demand(demand)?;
        let active: Vec<usize> = (0..self.k()).filter(|&i| demand[i].is_positive()).collect();
        let (mut lp, vars) = self.allocation_lp(&active, |_| Rational::zero());
        for &i in &active {
            let row = vars
                .iter()
                .map(|&(j, _)| if j == i { Rational::one() } else { Rational::zero() })
                .collect();
            lp.add(row, Relation::Eq, demand[i].clone());
        }
        match check_feasible_with(&lp, &self.lp)? {
            None => Ok(Membership {
                member: false,
                allocation: None,
            }),
            Some(x) => {
                let alloc = self.allocation_from(&vars, &x);
                validate_allocation(&self.system, &self.capacity, &alloc, demand)?;
                Ok(Membership {
                    member: true,
                    allocation: Some(alloc),
                })
            }
        }
    }

    /// Maximizes `Σ w_i λ_i` over the region. Symbols with non-positive
    /// weight are held at zero, which is optimal for them.
    pub fn max_objective(&self, weights: &[Rational]) -> Result<MaxResult> {
        if weights.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for k = {}",
                weights.len(),
                self.k()
            )));
        }
        if weights.iter().all(Zero::is_zero) {
            return Err(Error::InvalidParameter("objective weights are all zero".into()));
        }
        let active: Vec<usize> = (0..self.k()).filter(|&i| weights[i].is_positive()).collect();
        let (lp, vars) = self.allocation_lp(&active, |i| weights[i].clone());
        let solution = match solve_with(&lp, &self.lp)? {
            LpOutcome::Optimal(s) => s,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "allocation LP returned {:?}",
                    other.status()
                )))
            }
        };
        verify_certificate(&lp, &solution).map_err(Error::InvalidAllocation)?;
        let allocation = self.allocation_from(&vars, &solution.values);
        let demand = allocation.demand();
        validate_allocation(&self.system, &self.capacity, &allocation, &demand)?;
        Ok(MaxResult {
            value: solution.value,
            demand,
            allocation,
        })
    }

    /// `λ_i* = max { x : x·e_i ∈ Λ }`.
    pub fn lambda_star(&self, i: usize) -> Result<Rational> {
        self.check_symbol(i)?;
        let mut w = vec![Rational::zero(); self.k()];
        w[i] = Rational::one();
        Ok(self.max_objective(&w)?.value)
    }

    pub fn lambda_star_vector(&self) -> Result<Vec<Rational>> {
        (0..self.k()).into_par_iter().map(|i| self.lambda_star(i)).collect()
    }

    /// `δ(G) = min_i λ_i*`.
    pub fn delta_simplex(&self) -> Result<Rational> {
        Ok(self
            .lambda_star_vector()?
            .into_iter()
            .min()
            .unwrap_or_else(Rational::zero))
    }

    /// `max Σ_{i∈I} λ_i` next to the prediction from the sum of the
    /// parity-check columns at the systematic positions of `I`: `|I|` when
    /// the sum vanishes, `|I| + 1` otherwise.
    pub fn subset_bound(&self, subset: &[usize]) -> Result<SubsetBound> {
        let code = self.code();
        if code.q() != 2 {
            return Err(Error::NotBinary(code.q()));
        }
        let positions = code.systematic_positions().ok_or(Error::NotSystematic)?;
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.len() != subset.len() {
            return Err(Error::InvalidParameter("subset has repeated symbols".into()));
        }
        if members.len() < 2 {
            return Err(Error::InvalidParameter("subset needs at least two symbols".into()));
        }
        for &i in &members {
            self.check_symbol(i)?;
        }
        let h = code.parity_check();
        let column_sum: Vec<u32> = (0..h.rows())
            .map(|row| members.iter().map(|&i| h.get(row, positions[i])).sum::<u32>() % 2)
            .collect();
        let predicted = if column_sum.iter().all(|&b| b == 0) {
            members.len()
        } else {
            members.len() + 1
        };
        let mut w = vec![Rational::zero(); self.k()];
        for &i in &members {
            w[i] = Rational::one();
        }
        let computed = self.max_objective(&w)?.value;
        Ok(SubsetBound {
            subset: members,
            column_sum,
            predicted,
            computed,
        })
    }

    /// For `k <= 4`: the tight bound `max Σ_{i∈I} λ_i` for every nonempty
    /// subset `I`, certified by the LP optimum. Together these rows describe
    /// the region.
    pub fn facet_list(&self) -> Result<Vec<FacetRow>> {
        let k = self.k();
        if k > 4 {
            return Err(Error::InvalidParameter(format!(
                "facet listing supports k <= 4, got k = {k}"
            )));
        }
        (1u32..(1 << k))
            .map(|mask| {
                let subset: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
                let w = (0..k)
                    .map(|i| if mask & (1 << i) != 0 { Rational::one() } else { Rational::zero() })
                    .collect::<Vec<_>>();
                let best = self.max_objective(&w)?;
                Ok(FacetRow {
                    subset,
                    bound: best.value,
                    witness: best.demand,
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(|mut rows| {
                rows.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then(a.subset.cmp(&b.subset)));
                rows
            })
    }
}

/// Split of each symbol's demand over its recovery sets, aligned with
/// `RecoverySystem::per_symbol`.
#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    weights: Vec<Vec<Rational>>,
}

impl Allocation {
    pub fn zero(system: &RecoverySystem) -> Self {
        Allocation {
            weights: system
                .per_symbol()
                .iter()
                .map(|sets| vec![Rational::zero(); sets.len()])
                .collect(),
        }
    }

    pub fn from_weights(weights: Vec<Vec<Rational>>) -> Self {
        Allocation { weights }
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn weight(&self, i: usize, set: usize) -> &Rational {
        &self.weights[i][set]
    }

    pub(crate) fn add(&mut self, i: usize, set: usize, amount: &Rational) {
        self.weights[i][set] += amount;
    }

    /// Per-symbol totals `Σ_R λ_iR`.
    pub fn demand(&self) -> Vec<Rational> {
        self.weights.iter().map(|w| w.iter().sum()).collect()
    }

    /// Per-node loads `Σ_{i, R∋v} λ_iR`.
    pub fn loads(&self, system: &RecoverySystem) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); system.n()];
        for (sets, weights) in system.per_symbol().iter().zip(&self.weights) {
            for (set, w) in sets.iter().zip(weights) {
                if !w.is_zero() {
                    for &v in set.members() {
                        loads[v] += w;
                    }
                }
            }
        }
        loads
    }

    /// Nonzero entries as `{symbol, set, weight}` with 1-based indices.
    pub fn to_json(&self, system: &RecoverySystem) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = system
            .per_symbol()
            .iter()
            .zip(&self.weights)
            .enumerate()
            .flat_map(|(i, (sets, weights))| {
                sets.iter().zip(weights).filter(|(_, w)| !w.is_zero()).map(move |(set, w)| {
                    serde_json::json!({
                        "symbol": i + 1,
                        "set": set.one_based(),
                        "weight": w.to_string(),
                    })
                })
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// Checks an allocation against the demand and capacity constraints using
/// nothing but the recovery system and exact arithmetic.
pub fn validate_allocation(
    system: &RecoverySystem,
    capacity: &Rational,
    allocation: &Allocation,
    demand: &[Rational],
) -> Result<()> {
    let per_symbol = system.per_symbol();
    if allocation.weights.len() != per_symbol.len() || demand.len() != per_symbol.len() {
        return Err(Error::InvalidAllocation(format!(
            "allocation covers {} symbols, demand {}, system {}",
            allocation.weights.len(),
            demand.len(),
            per_symbol.len()
        )));
    }
    let mut loads = vec![Rational::zero(); system.n()];
    for (i, (sets, weights)) in per_symbol.iter().zip(&allocation.weights).enumerate() {
        if sets.len() != weights.len() {
            return Err(Error::InvalidAllocation(format!(
                "symbol {} has {} weights for {} sets",
                i + 1,
                weights.len(),
                sets.len()
            )));
        }
        let mut total = Rational::zero();
        for (set, w) in sets.iter().zip(weights) {
            if w.is_negative() {
                return Err(Error::InvalidAllocation(format!(
                    "negative weight {w} on symbol {}",
                    i + 1
                )));
            }
            total += w;
            for &v in set.members() {
                loads[v] += w;
            }
        }
        if total != demand[i] {
            return Err(Error::InvalidAllocation(format!(
                "symbol {} receives {total}, demand is {}",
                i + 1,
                demand[i]
            )));
        }
    }
    if let Some((v, load)) = loads.iter().enumerate().find(|(_, l)| *l > capacity) {
        return Err(Error::InvalidAllocation(format!(
            "node {} carries {load} above capacity {capacity}",
            v + 1
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    pub allocation: Option<Allocation>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaxResult {
    pub value: Rational,
    pub demand: Vec<Rational>,
    pub allocation: Allocation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetBound {
    /// 0-based symbols, ascending.
    pub subset: Vec<usize>,
    pub column_sum: Vec<u32>,
    pub predicted: usize,
    #[serde(with = "rational_serde")]
    pub computed: Rational,
}

impl SubsetBound {
    pub fn matches(&self) -> bool {
        self.computed == Rational::from_integer(self.predicted.into())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subset": self.subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "column_sum": self.column_sum,
            "predicted": self.predicted,
            "computed": self.computed.to_string(),
            "match": self.matches(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacetRow {
    /// 0-based symbols, ascending.
    pub subset: Vec<usize>,
    pub bound: Rational,
    /// A region point attaining the bound.
    pub witness: Vec<Rational>,
}

/// Singleton recovery set of symbol `i`, if any.
pub(crate) fn singleton_index(sets: &[RecoverySet]) -> Option<usize> {
    sets.iter().position(|s| s.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{catalog, systematic_hamming};
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn ham(r: usize, qq: u32) -> SrrInstance {
        SrrInstance::from_code(systematic_hamming(r, qq).unwrap()).unwrap()
    }

    #[test]
    fn capacity_must_be_positive() {
        let inst = ham(3, 2);
        assert!(inst.with_capacity(q(0, 1)).is_err());
        assert!(inst.with_capacity(q(-1, 2)).is_err());
        assert!(inst.with_capacity(q(1, 2)).is_ok());
    }

    #[test]
    fn membership_examples() {
        let inst = ham(3, 2);
        let m = inst.membership(&ints(&[1, 1, 1, 1])).unwrap();
        assert!(m.member);
        assert!(inst.membership(&ints(&[3, 0, 0, 0])).unwrap().member);
        assert!(!inst.membership(&ints(&[4, 0, 0, 0])).unwrap().member);

        let zero = inst.membership(&ints(&[0, 0, 0, 0])).unwrap();
        assert!(zero.member);
        assert_eq!(zero.allocation.unwrap(), Allocation::zero(inst.system()));

        let ham4 = ham(4, 2);
        let mut d = vec![q(0, 1); 11];
        d[0] = q(8, 5);
        d[1] = q(8, 5);
        assert!(!ham4.membership(&d).unwrap().member);
        d[1] = q(7, 5);
        assert!(ham4.membership(&d).unwrap().member);
    }

    #[test]
    fn membership_rejects_bad_demand() {
        let inst = ham(3, 2);
        assert!(matches!(
            inst.membership(&ints(&[1, 1, 1])),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(inst.membership(&[q(-1, 1), q(0, 1), q(0, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn paper_demand_one_one_one_two() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let m = inst.membership(&ints(&[1, 1, 1, 2])).unwrap();
        assert!(m.member);
        let a = m.allocation.unwrap();
        validate_allocation(inst.system(), inst.capacity(), &a, &ints(&[1, 1, 1, 2])).unwrap();
    }

    #[test]
    fn maxima() {
        assert_eq!(ham(3, 2).max_objective(&ints(&[1, 1, 1, 1])).unwrap().value, q(5, 1));
        assert_eq!(ham(4, 2).max_objective(&vec![q(1, 1); 11]).unwrap().value, q(11, 1));
        let ns = SrrInstance::from_code(catalog::ham32_nonsystematic()).unwrap();
        let best = ns.max_objective(&ints(&[1, 1, 1, 1])).unwrap();
        assert_eq!(best.value, q(3, 1));
        assert_eq!(best.demand.iter().sum::<Rational>(), q(3, 1));
        assert!(ham(3, 2).max_objective(&ints(&[0, 0, 0, 0])).is_err());
        assert!(ham(3, 2).max_objective(&ints(&[1, 1])).is_err());
        // Negative weights keep their symbol at zero.
        let neg = ham(3, 2).max_objective(&ints(&[1, -1, 0, 0])).unwrap();
        assert_eq!(neg.value, q(3, 1));
        assert_eq!(neg.demand[1], q(0, 1));
    }

    #[test]
    fn lambda_star_and_delta() {
        let inst = ham(3, 2);
        assert_eq!(inst.lambda_star_vector().unwrap(), ints(&[3, 3, 3, 3]));
        assert_eq!(inst.delta_simplex().unwrap(), q(3, 1));
        assert!(matches!(inst.lambda_star(4), Err(Error::IndexOutOfRange { .. })));
        let tern = ham(3, 3);
        assert_eq!(tern.lambda_star(0).unwrap(), q(5, 2));
        let ns = SrrInstance::from_code(catalog::ham32_nonsystematic()).unwrap();
        assert_eq!(
            ns.lambda_star_vector().unwrap(),
            vec![q(3, 1), q(7, 3), q(3, 1), q(3, 1)]
        );
        assert_eq!(ns.delta_simplex().unwrap(), q(7, 3));
    }

    #[test]
    fn capacity_scales_region() {
        let inst = ham(3, 2).with_capacity(q(3, 2)).unwrap();
        assert_eq!(inst.lambda_star(2).unwrap(), q(9, 2));
        assert_eq!(inst.max_objective(&ints(&[1, 1, 1, 1])).unwrap().value, q(15, 2));
    }

    #[test]
    fn subset_examples() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let abc = inst.subset_bound(&[0, 1, 2]).unwrap();
        assert_eq!(abc.column_sum, vec![0, 0, 0]);
        assert_eq!((abc.predicted, abc.computed.clone()), (3, q(3, 1)));
        let abd = inst.subset_bound(&[0, 1, 3]).unwrap();
        assert_ne!(abd.column_sum, vec![0, 0, 0]);
        assert_eq!((abd.predicted, abd.computed.clone()), (4, q(4, 1)));
        assert!(abd.matches());
        assert!(inst.subset_bound(&[0]).is_err());
        assert!(inst.subset_bound(&[0, 0]).is_err());

        let ns = SrrInstance::from_code(catalog::ham32_nonsystematic()).unwrap();
        assert!(matches!(ns.subset_bound(&[0, 1]), Err(Error::NotSystematic)));
        assert!(matches!(ham(3, 3).subset_bound(&[0, 1]), Err(Error::NotBinary(3))));
    }

    #[test]
    fn facets_of_ham32() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let rows = inst.facet_list().unwrap();
        assert_eq!(rows.len(), 15);
        let bound = |s: &[usize]| rows.iter().find(|r| r.subset == s).unwrap().bound.clone();
        assert_eq!(bound(&[0]), q(3, 1));
        assert_eq!(bound(&[1, 3]), q(3, 1));
        assert_eq!(bound(&[0, 1, 2]), q(3, 1));
        assert_eq!(bound(&[1, 2, 3]), q(4, 1));
        assert_eq!(bound(&[0, 1, 2, 3]), q(5, 1));
        for row in &rows {
            assert!(inst.membership(&row.witness).unwrap().member);
        }
        assert!(ham(4, 2).facet_list().is_err());
    }

    #[test]
    fn validator_catches_violations() {
        let inst = ham(3, 2);
        let sys = inst.system();
        let mut a = Allocation::zero(sys);
        let s = singleton_index(sys.sets(0)).unwrap();
        a.add(0, s, &q(2, 1));
        let demand = ints(&[2, 0, 0, 0]);
        assert!(validate_allocation(sys, inst.capacity(), &a, &demand).is_err());
        assert!(validate_allocation(sys, &q(2, 1), &a, &demand).is_ok());
        assert!(validate_allocation(sys, &q(2, 1), &a, &ints(&[1, 0, 0, 0])).is_err());
        let mut neg = Allocation::zero(sys);
        neg.add(0, s, &q(-1, 1));
        assert!(validate_allocation(sys, &q(2, 1), &neg, &ints(&[-1, 0, 0, 0])).is_err());
    }
}
