//! Exact event-driven waterfilling.
//!
//! Phase 1 routes each symbol's demand to its systematic node up to
//! capacity. Phase 2 serves what is left, for all symbols at once: each
//! symbol sends flow at unit rate into every one of its least-loaded usable
//! recovery sets (the tier), where a set's load is the largest load among
//! its nodes and a set is usable while none of its nodes is saturated. Time
//! advances to the next event, whichever comes first:
//!
//! - a symbol's residual runs out,
//! - a node reaches capacity,
//! - a tier set's load reaches the next-lowest load among that symbol's
//!   usable sets (measured when the step began).
//!
//! Loads and tiers are then recomputed exactly. Demand that no usable set can
//! carry is returned as residual.

use num_traits::{Signed, Zero};

use super::{singleton_index, validate_allocation, Allocation, SrrInstance};
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// Ceiling on phase-2 events before giving up.
pub const DEFAULT_EVENT_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct WaterfillResult {
    pub allocation: Allocation,
    pub served: Vec<Rational>,
    pub residual: Vec<Rational>,
    /// Number of phase-2 events processed.
    pub events: u64,
}

pub fn waterfill(instance: &SrrInstance, demand: &[Rational]) -> Result<WaterfillResult> {
    waterfill_with_limit(instance, demand, DEFAULT_EVENT_LIMIT)
}

pub fn waterfill_with_limit(instance: &SrrInstance, demand: &[Rational], event_limit: u64) -> Result<WaterfillResult> {
    instance.check_demand(demand)?;
    if !instance.code().is_systematic() {
        return Err(Error::NotSystematic);
    }
    let system = instance.system();
    let cap = instance.capacity();
    let k = instance.k();
    let mut alloc = Allocation::zero(system);
    let mut load = vec![Rational::zero(); instance.n()];
    let mut residual: Vec<Rational> = demand.to_vec();

    for i in 0..k {
        let s = singleton_index(system.sets(i)).ok_or(Error::NotSystematic)?;
        let v = system.sets(i)[s].members()[0];
        let room = cap - &load[v];
        let take = if residual[i] < room { residual[i].clone() } else { room };
        if take.is_positive() {
            alloc.add(i, s, &take);
            load[v] += &take;
            residual[i] -= &take;
        }
    }

    let mut events = 0u64;
    loop {
        let set_load = |members: &[usize]| members.iter().map(|&v| &load[v]).max().cloned().unwrap_or_default();
        // Per active symbol: its tier (set indices) and next-lowest load.
        let mut plans: Vec<(usize, Vec<usize>, Option<Rational>)> = Vec::new();
        for i in 0..k {
            if !residual[i].is_positive() {
                continue;
            }
            let usable: Vec<(usize, Rational)> = system
                .sets(i)
                .iter()
                .enumerate()
                .filter(|(_, set)| set.members().iter().all(|&v| load[v] < *cap))
                .map(|(s, set)| (s, set_load(set.members())))
                .collect();
            let Some(low) = usable.iter().map(|(_, l)| l).min().cloned() else {
                continue;
            };
            let tier: Vec<usize> = usable.iter().filter(|(_, l)| *l == low).map(|(s, _)| *s).collect();
            let next = usable.iter().map(|(_, l)| l).filter(|l| **l > low).min().cloned();
            plans.push((i, tier, next));
        }
        if plans.is_empty() {
            break;
        }
        events += 1;
        if events > event_limit {
            return Err(Error::SearchLimit(format!(
                "waterfilling exceeded {event_limit} events"
            )));
        }

        let mut rate = vec![0u64; instance.n()];
        for (i, tier, _) in &plans {
            for &s in tier {
                for &v in system.sets(*i)[s].members() {
                    rate[v] += 1;
                }
            }
        }
        let mut step: Option<Rational> = None;
        let mut consider = |t: Rational| {
            if step.as_ref().is_none_or(|s| t < *s) {
                step = Some(t);
            }
        };
        for (i, tier, next) in &plans {
            consider(&residual[*i] / Rational::from_integer((tier.len() as u64).into()));
            if let Some(level) = next {
                for &s in tier {
                    let reach = system.sets(*i)[s]
                        .members()
                        .iter()
                        .map(|&v| (level - &load[v]) / Rational::from_integer(rate[v].into()))
                        .min()
                        .expect("recovery sets are nonempty");
                    consider(reach);
                }
            }
        }
        for (v, &c) in rate.iter().enumerate() {
            if c > 0 {
                consider((cap - &load[v]) / Rational::from_integer(c.into()));
            }
        }
        let dt = step.expect("at least one active symbol");
        debug_assert!(dt.is_positive());
        for (i, tier, _) in &plans {
            for &s in tier {
                alloc.add(*i, s, &dt);
            }
            residual[*i] -= &dt * Rational::from_integer((tier.len() as u64).into());
        }
        for (v, &c) in rate.iter().enumerate() {
            if c > 0 {
                load[v] += &dt * Rational::from_integer(c.into());
            }
        }
        log::trace!("waterfill event {events}: step {dt}");
    }

    let served: Vec<Rational> = demand.iter().zip(&residual).map(|(d, r)| d - r).collect();
    validate_allocation(system, cap, &alloc, &served)?;
    Ok(WaterfillResult {
        allocation: alloc,
        served,
        residual,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{catalog, systematic_hamming};
    use num_bigint::BigInt;
    use num_traits::One;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn unit(k: usize, i: usize, x: Rational) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); k];
        d[i] = x;
        d
    }

    #[test]
    fn single_object_saturates_every_node() {
        for (r, qq, target) in [(3, 2, q(3, 1)), (4, 2, q(3, 1)), (3, 3, q(5, 2))] {
            let inst = SrrInstance::from_code(systematic_hamming(r, qq).unwrap()).unwrap();
            for i in 0..inst.k() {
                let out = waterfill(&inst, &unit(inst.k(), i, target.clone())).unwrap();
                assert!(out.residual.iter().all(Zero::is_zero));
                let loads = out.allocation.loads(inst.system());
                assert!(loads.iter().all(|l| l.is_one()), "r={r} q={qq} i={i}");
                // Even split over the non-singleton sets.
                let sets = inst.system().sets(i);
                let share = Rational::one() / Rational::from_integer(BigInt::from(qq).pow(r as u32 - 2) * (qq - 1));
                for (s, w) in sets.iter().zip(&out.allocation.weights()[i]) {
                    let expect = if s.len() == 1 { Rational::one() } else { share.clone() };
                    assert_eq!(*w, expect);
                }
            }
        }
    }

    #[test]
    fn unit_demand_stays_on_systematic_nodes() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let out = waterfill(&inst, &vec![q(1, 1); 4]).unwrap();
        assert_eq!(out.events, 0);
        let loads = out.allocation.loads(inst.system());
        let positions = inst.code().systematic_positions().unwrap();
        for (v, l) in loads.iter().enumerate() {
            let expect = if positions.contains(&v) { q(1, 1) } else { q(0, 1) };
            assert_eq!(*l, expect);
        }
    }

    #[test]
    fn excess_demand_leaves_residual() {
        let inst = SrrInstance::from_code(catalog::ham32_natural()).unwrap();
        let out = waterfill(&inst, &unit(4, 1, q(4, 1))).unwrap();
        assert_eq!(out.served[1], q(3, 1));
        assert_eq!(out.residual[1], q(1, 1));
        assert!(!inst.membership(&unit(4, 1, q(4, 1))).unwrap().member);
    }

    #[test]
    fn mixed_demand_is_valid_and_deterministic() {
        let inst = SrrInstance::from_code(systematic_hamming(3, 2).unwrap()).unwrap();
        let demand = vec![q(2, 1), q(3, 2), q(1, 3), q(0, 1)];
        let a = waterfill(&inst, &demand).unwrap();
        let b = waterfill(&inst, &demand).unwrap();
        assert_eq!(a, b);
        for (s, (d, r)) in a.served.iter().zip(demand.iter().zip(&a.residual)) {
            assert_eq!(s + r, *d);
            assert!(!r.is_negative());
        }
    }

    #[test]
    fn rejects_nonsystematic_code() {
        let inst = SrrInstance::from_code(catalog::ham32_nonsystematic()).unwrap();
        assert!(matches!(
            waterfill(&inst, &vec![q(1, 1); 4]),
            Err(Error::NotSystematic)
        ));
    }

    #[test]
    fn event_ceiling() {
        let inst = SrrInstance::from_code(systematic_hamming(3, 2).unwrap()).unwrap();
        let r = waterfill_with_limit(&inst, &unit(4, 0, q(3, 1)), 0);
        assert!(matches!(r, Err(Error::SearchLimit(_))));
    }
}
