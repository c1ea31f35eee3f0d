//! Minimum recovery systems.
//!
//! For systematic generator matrices the non-singleton minimum recovery sets
//! of symbol `i` are the supports of dual codewords that equal 1 at the
//! systematic position of `i`, with that position removed. Arbitrary
//! generator matrices go through an exhaustive search by increasing size.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::LinearCode;
use crate::error::{Error, Result};

/// Column indices (0-based, strictly ascending) whose generator columns span
/// a unit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecoverySet(Vec<usize>);

impl RecoverySet {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("recovery set must be nonempty".into()));
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate member in recovery set {members:?}"
            )));
        }
        Ok(RecoverySet(members))
    }

    /// Builds from 1-based positions.
    pub fn from_one_based(members: &[usize]) -> Result<Self> {
        if members.contains(&0) {
            return Err(Error::InvalidParameter("positions are 1-based".into()));
        }
        Self::new(members.iter().map(|m| m - 1).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|m| m + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &RecoverySet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn mask(&self) -> u128 {
        self.0.iter().fold(0u128, |m, &v| m | (1u128 << v))
    }
}

/// Canonical order: by size, then lexicographic.
fn canonical_sort(sets: &mut Vec<RecoverySet>) {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
    sets.dedup();
}

/// Drops every set that strictly contains another.
fn keep_minimal(sets: Vec<RecoverySet>) -> Vec<RecoverySet> {
    let mut sets = sets;
    canonical_sort(&mut sets);
    let mut out: Vec<RecoverySet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|t| t.is_subset_of(&s)) {
            out.push(s);
        }
    }
    out
}

fn check_symbol(code: &LinearCode, i: usize) -> Result<()> {
    if i >= code.k() {
        return Err(Error::IndexOutOfRange {
            index: i + 1,
            bound: code.k(),
        });
    }
    Ok(())
}

/// Minimum recovery sets of symbol `i` via the dual code. Requires a
/// systematic generator.
pub fn recovery_sets_systematic(code: &LinearCode, i: usize) -> Result<Vec<RecoverySet>> {
    check_symbol(code, i)?;
    let positions = code.systematic_positions().ok_or(Error::NotSystematic)?;
    let p = positions[i];
    let mut sets = vec![RecoverySet(vec![p])];
    // Codewords with a different nonzero value at p are scalar multiples of
    // these and give the same supports.
    for word in code.codewords_with_unit_at(p)? {
        let members: Vec<usize> = word.support.iter().copied().filter(|&v| v != p).collect();
        if !members.is_empty() {
            sets.push(RecoverySet(members));
        }
    }
    Ok(keep_minimal(sets))
}

/// All inclusion-minimal recovery sets of symbol `i` with at most `cap`
/// members, by breadth-first search over subset sizes with superset pruning.
pub fn recovery_sets_general(code: &LinearCode, i: usize, cap: usize) -> Result<Vec<RecoverySet>> {
    check_symbol(code, i)?;
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let n = code.n();
    if n > 128 {
        return Err(Error::SearchLimit(format!("general search supports n <= 128, got {n}")));
    }
    let g = code.generator();
    let mut target = vec![0u32; code.k()];
    target[i] = 1;
    let mut found: Vec<RecoverySet> = Vec::new();
    let mut found_masks: Vec<u128> = Vec::new();
    let mut combo: Vec<usize> = Vec::new();
    for size in 1..=cap.min(n) {
        combo.clear();
        combo.extend(0..size);
        loop {
            let mask = combo.iter().fold(0u128, |m, &v| m | (1u128 << v));
            if !found_masks.iter().any(|&f| f & mask == f)
                && g.select_columns(&combo).in_span(&target)?.is_some()
            {
                found.push(RecoverySet(combo.clone()));
                found_masks.push(mask);
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    canonical_sort(&mut found);
    Ok(found)
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in (i + 1)..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// How a recovery system was enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enumeration {
    DualCode,
    Search,
}

/// Minimum recovery sets for every data symbol of a code.
#[derive(Clone, Debug)]
pub struct RecoverySystem {
    code: Arc<LinearCode>,
    per_symbol: Vec<Vec<RecoverySet>>,
    minimality_cap: Option<usize>,
    method: Enumeration,
}

impl RecoverySystem {
    /// Assembles a system from explicit lists, checking that every set
    /// recovers its symbol and that each list is duplicate-free and minimal.
    pub fn from_sets(code: Arc<LinearCode>, per_symbol: Vec<Vec<RecoverySet>>) -> Result<Self> {
        if per_symbol.len() != code.k() {
            return Err(Error::DimensionMismatch(format!(
                "{} symbol lists for k = {}",
                per_symbol.len(),
                code.k()
            )));
        }
        let system = RecoverySystem {
            code,
            per_symbol: per_symbol
                .into_iter()
                .map(|mut v| {
                    canonical_sort(&mut v);
                    v
                })
                .collect(),
            minimality_cap: None,
            method: Enumeration::Search,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn code_arc(&self) -> &Arc<LinearCode> {
        &self.code
    }

    pub fn per_symbol(&self) -> &[Vec<RecoverySet>] {
        &self.per_symbol
    }

    pub fn sets(&self, i: usize) -> &[RecoverySet] {
        &self.per_symbol[i]
    }

    pub fn k(&self) -> usize {
        self.per_symbol.len()
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn minimality_cap(&self) -> Option<usize> {
        self.minimality_cap
    }

    pub fn method(&self) -> Enumeration {
        self.method
    }

    pub fn total_sets(&self) -> usize {
        self.per_symbol.iter().map(Vec::len).sum()
    }

    /// Soundness and minimality of every set, checked with span tests
    /// independent of how the sets were produced.
    pub fn validate(&self) -> Result<()> {
        let g = self.code.generator();
        for (i, sets) in self.per_symbol.iter().enumerate() {
            let mut target = vec![0u32; self.code.k()];
            target[i] = 1;
            for (a, set) in sets.iter().enumerate() {
                if set.members().iter().any(|&v| v >= self.code.n()) {
                    return Err(Error::InvalidParameter(format!(
                        "set {:?} exceeds n = {}",
                        set.one_based(),
                        self.code.n()
                    )));
                }
                if g.select_columns(set.members()).in_span(&target)?.is_none() {
                    return Err(Error::InvalidParameter(format!(
                        "set {:?} does not recover symbol {}",
                        set.one_based(),
                        i + 1
                    )));
                }
                for v in set.members() {
                    let smaller: Vec<usize> =
                        set.members().iter().copied().filter(|m| m != v).collect();
                    if !smaller.is_empty()
                        && g.select_columns(&smaller).in_span(&target)?.is_some()
                    {
                        return Err(Error::InvalidParameter(format!(
                            "set {:?} is not minimal for symbol {}",
                            set.one_based(),
                            i + 1
                        )));
                    }
                }
                if sets[..a].contains(set) {
                    return Err(Error::InvalidParameter(format!(
                        "duplicate set {:?} for symbol {}",
                        set.one_based(),
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> RecoveryFile {
        RecoveryFile {
            symbols: self
                .per_symbol
                .iter()
                .enumerate()
                .map(|(i, sets)| SymbolSets {
                    index: i + 1,
                    sets: sets.iter().map(RecoverySet::one_based).collect(),
                })
                .collect(),
        }
    }
}

/// Recovery-system JSON. Indices and members are 1-based; sets are sorted
/// by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecoveryFile {
    pub symbols: Vec<SymbolSets>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolSets {
    pub index: usize,
    pub sets: Vec<Vec<usize>>,
}

/// Builds the minimum recovery system. Systematic codes use the dual-code
/// path unless a cap forces the general search; other codes are searched
/// with `cap` (default: `n`, i.e. complete enumeration).
pub fn build_recovery_system(code: &LinearCode, cap: Option<usize>) -> Result<RecoverySystem> {
    build_recovery_system_arc(Arc::new(code.clone()), cap)
}

pub fn build_recovery_system_arc(code: Arc<LinearCode>, cap: Option<usize>) -> Result<RecoverySystem> {
    let k = code.k();
    let (method, cap_used) = if code.is_systematic() && cap.is_none() {
        (Enumeration::DualCode, Some(code.simplex_weight() - 1))
    } else {
        (Enumeration::Search, Some(cap.unwrap_or(code.n())))
    };
    let per_symbol = (0..k)
        .into_par_iter()
        .map(|i| match method {
            Enumeration::DualCode => recovery_sets_systematic(&code, i),
            Enumeration::Search => recovery_sets_general(&code, i, cap_used.unwrap_or(code.n())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecoverySystem {
        code,
        per_symbol,
        minimality_cap: cap_used,
        method,
    })
}

/// Summary counts of a systematic Hamming recovery system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Non-singleton sets per symbol.
    pub non_singleton_counts: Vec<usize>,
    /// Set size to number of sets, over all symbols.
    pub cardinality_histogram: BTreeMap<usize, usize>,
    /// `incidence[i][j]`: number of sets of symbol `i` containing node `j`.
    pub incidence: Vec<Vec<usize>>,
    /// For binary codes, `t_counts[t]` counts non-singleton sets (over all
    /// symbols) holding exactly `t` non-systematic nodes.
    pub t_counts: Option<Vec<usize>>,
    pub expected_non_singleton_size: usize,
    pub expected_non_singleton_count: usize,
    pub expected_incidence: usize,
    pub cardinalities_ok: bool,
    pub non_singleton_counts_ok: bool,
    pub incidence_ok: bool,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.cardinalities_ok && self.non_singleton_counts_ok && self.incidence_ok
    }
}

pub fn structure_report(system: &RecoverySystem) -> Result<StructureReport> {
    let code = system.code();
    let positions = code.systematic_positions().ok_or(Error::NotSystematic)?;
    let q = code.q() as usize;
    let qr1 = code.simplex_weight();
    let expected_size = qr1 - 1;
    let expected_incidence = (q - 1) * qr1 / q;
    let n = code.n();

    let mut histogram = BTreeMap::new();
    let mut non_singleton_counts = Vec::with_capacity(system.k());
    let mut incidence = vec![vec![0usize; n]; system.k()];
    for (i, sets) in system.per_symbol().iter().enumerate() {
        non_singleton_counts.push(sets.iter().filter(|s| s.len() > 1).count());
        for s in sets {
            *histogram.entry(s.len()).or_insert(0) += 1;
            for &v in s.members() {
                incidence[i][v] += 1;
            }
        }
    }
    let cardinalities_ok = histogram.keys().all(|&c| c == 1 || c == expected_size);
    let non_singleton_counts_ok = non_singleton_counts.iter().all(|&c| c == qr1);
    let incidence_ok = incidence.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, &c)| j == positions[i] || c == expected_incidence)
    });
    let t_counts = (code.q() == 2).then(|| t_histogram(system, &positions));
    Ok(StructureReport {
        non_singleton_counts,
        cardinality_histogram: histogram,
        incidence,
        t_counts,
        expected_non_singleton_size: expected_size,
        expected_non_singleton_count: qr1,
        expected_incidence,
        cardinalities_ok,
        non_singleton_counts_ok,
        incidence_ok,
    })
}

fn t_histogram(system: &RecoverySystem, positions: &[usize]) -> Vec<usize> {
    let r = system.code().r();
    let mut is_sys = vec![false; system.n()];
    for &p in positions {
        is_sys[p] = true;
    }
    let mut counts = vec![0usize; r + 1];
    for sets in system.per_symbol() {
        for s in sets.iter().filter(|s| s.len() > 1) {
            let t = s.members().iter().filter(|&&v| !is_sys[v]).count();
            if t <= r {
                counts[t] += 1;
            }
        }
    }
    counts
}

/// Number of non-singleton recovery sets (over all symbols) with exactly `t`
/// non-systematic nodes. Binary systematic codes only.
pub fn count_by_nonsystematic_nodes(system: &RecoverySystem, t: usize) -> Result<usize> {
    let code = system.code();
    if code.q() != 2 {
        return Err(Error::NotBinary(code.q()));
    }
    let positions = code.systematic_positions().ok_or(Error::NotSystematic)?;
    if t > code.r() {
        return Err(Error::InvalidParameter(format!("t = {t} exceeds r = {}", code.r())));
    }
    Ok(t_histogram(system, &positions)[t])
}

/// `C(r, t) * (2^(r-1) - t)` for `1 <= t <= r`; zero at `t = 0`.
pub fn composition_formula(r: usize, t: usize) -> usize {
    if t == 0 || t > r {
        return 0;
    }
    binomial(r, t) * ((1usize << (r - 1)) - t)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
