//! Library-level pipelines across modules.

use std::sync::Arc;

use num_bigint::BigInt;
use srrham::codes::{catalog, import_generator, systematic_hamming, CodeFile};
use srrham::hypergraph::{Hypergraph, HypergraphStats};
use srrham::lp::LpOptions;
use srrham::recovery::{build_recovery_system_arc, RecoveryFile, RecoverySet};
use srrham::srr::validate_allocation;
use srrham::{build_recovery_system, LinearCode, Rational, RecoverySystem, SrrInstance};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The printed lists for the non-systematic generator, as sets.
#[test]
fn nonsystematic_recovery_lists() {
    let printed: [&[&[usize]]; 4] = [
        &[&[1, 7], &[2, 4], &[3, 5], &[1, 4, 5, 6], &[2, 5, 6, 7], &[3, 4, 6, 7], &[1, 2, 3, 6]],
        &[&[3, 4, 7], &[1, 6, 7], &[3, 5, 6], &[2, 4, 6], &[2, 5, 7], &[1, 4, 5], &[1, 2, 3]],
        &[&[7], &[1, 2, 4], &[1, 3, 5], &[4, 5, 6], &[2, 3, 6]],
        &[&[4], &[1, 2, 7], &[2, 3, 5], &[5, 6, 7], &[1, 3, 6]],
    ];
    let rows: Vec<Vec<u32>> = catalog::HAM32_NONSYSTEMATIC.iter().map(|r| r.to_vec()).collect();
    let code = import_generator(&rows, 2).unwrap();
    let system = build_recovery_system(&code, None).unwrap();
    for (i, want) in printed.iter().enumerate() {
        let mut want: Vec<Vec<usize>> = want.iter().map(|s| s.to_vec()).collect();
        want.iter_mut().for_each(|s| s.sort_unstable());
        want.sort();
        let mut got: Vec<Vec<usize>> = system.sets(i).iter().map(RecoverySet::one_based).collect();
        got.sort();
        assert_eq!(got, want, "symbol {i}");
    }
}

#[test]
fn files_round_trip() {
    for code in [catalog::ham32_natural(), catalog::ham32_nonsystematic(), systematic_hamming(3, 3).unwrap()] {
        let text = serde_json::to_string(&code.to_file()).unwrap();
        let back: CodeFile = serde_json::from_str(&text).unwrap();
        let reread = LinearCode::from_file(&back).unwrap();
        assert_eq!(reread, code);

        let code = Arc::new(code);
        let system = build_recovery_system_arc(code.clone(), None).unwrap();
        let text = serde_json::to_string(&system.to_file()).unwrap();
        let file: RecoveryFile = serde_json::from_str(&text).unwrap();
        let sets: Vec<Vec<RecoverySet>> = file
            .symbols
            .iter()
            .map(|s| s.sets.iter().map(|m| RecoverySet::from_one_based(m).unwrap()).collect())
            .collect();
        let rebuilt = RecoverySystem::from_sets(code, sets).unwrap();
        assert_eq!(rebuilt.per_symbol(), system.per_symbol());
    }
}

#[test]
fn region_agrees_with_hypergraph() {
    for code in [catalog::ham32_natural(), catalog::ham32_nonsystematic(), systematic_hamming(3, 3).unwrap()] {
        let inst = SrrInstance::from_code(code).unwrap();
        let graph = Hypergraph::from_recovery_system(inst.system());
        let stats = HypergraphStats::compute(&graph, &LpOptions::default()).unwrap();
        assert!(stats.is_consistent(&graph));
        let best = inst.max_objective(&vec![q(1, 1); inst.k()]).unwrap();
        assert_eq!(best.value, stats.mu_f);
        validate_allocation(inst.system(), inst.capacity(), &best.allocation, &best.demand).unwrap();
    }
}

#[test]
fn ternary_point_queries() {
    let inst = SrrInstance::from_code(systematic_hamming(3, 3).unwrap()).unwrap();
    let mut demand = vec![q(0, 1); inst.k()];
    demand[4] = q(5, 2);
    assert!(inst.membership(&demand).unwrap().member);
    demand[4] = q(51, 20);
    assert!(!inst.membership(&demand).unwrap().member);
}
