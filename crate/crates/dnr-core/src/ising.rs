//! Binary-to-spin transform and logical resource counting.
//!
//! Substituting xᵢ = (1 − zᵢ)/2 turns a multilinear binary polynomial into
//! an Ising form Σᵢ cᵢ Πⱼ∈Sᵢ zⱼ whose non-constant terms become multi-qubit
//! Pauli-Z rotations of the cost operator. One optimisation layer is the
//! cost operator plus a mixer, counted as one rotation per Pauli term plus
//! two rotations per qubit.
//!
//! Exact aggregation expands every binary monomial of degree g into 2^g
//! spin terms, which can exceed memory on large inputs; [`counting_mode`]
//! degrades to a cancellation-free upper bound when a budget is exceeded
//! and flags the result as inexact. The qubit count stays exact either way.

use crate::hubo::{BinaryPolynomial, Term, VarPool};
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;
use std::collections::BTreeMap;

/// Pauli-Z Hamiltonian: sorted qubit index sets mapped to coefficients,
/// plus the identity offset.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    terms: BTreeMap<Term, f64>,
    pub constant_offset: f64,
}

impl IsingHamiltonian {
    /// Non-constant terms in canonical order (degree, then lexicographic).
    pub fn terms(&self) -> impl Iterator<Item = (&Term, f64)> + '_ {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, indices: &[u32]) -> f64 {
        let t = Term::from_vars(
            &indices
                .iter()
                .map(|&i| crate::hubo::VarId::from_index(i as usize))
                .collect::<Vec<_>>(),
        );
        self.terms.get(&t).copied().unwrap_or(0.0)
    }

    /// Value at a spin assignment (`spins[i]` = zᵢ ∈ {−1, +1}).
    pub fn value(&self, spins: &[i8]) -> f64 {
        let mut total = self.constant_offset;
        for (t, c) in &self.terms {
            let mut sign = 1.0;
            for &i in t.indices() {
                sign *= f64::from(spins[i as usize]);
            }
            total += c * sign;
        }
        total
    }

    /// Number of distinct qubits appearing in the Hamiltonian.
    pub fn qubit_count(&self) -> usize {
        let mut seen = FxHashSet::default();
        for t in self.terms.keys() {
            seen.extend(t.indices().iter().copied());
        }
        seen.len()
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(Term::degree).max().unwrap_or(0)
    }
}

/// Logical resources of one optimisation layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsingSummary {
    /// Distinct qubits touched by the cost operator.
    pub logical_qubits: usize,
    /// Non-constant Pauli-Z terms (one rotation each in the cost operator).
    pub pauli_terms: usize,
    /// Cost rotations plus two mixer rotations per qubit.
    pub rotation_gates_one_layer: usize,
    /// Non-constant terms of the source binary polynomial.
    pub hubo_interactions: usize,
    /// Largest Pauli term weight |S|.
    pub max_term_weight: usize,
    /// False when `pauli_terms` (and the counts derived from it) is the
    /// cancellation-free upper bound rather than the aggregated value.
    pub exact: bool,
}

impl IsingSummary {
    pub fn from_counts(
        logical_qubits: usize,
        pauli_terms: usize,
        hubo_interactions: usize,
        max_term_weight: usize,
        exact: bool,
    ) -> Self {
        Self {
            logical_qubits,
            pauli_terms,
            rotation_gates_one_layer: pauli_terms + 2 * logical_qubits,
            hubo_interactions,
            max_term_weight,
            exact,
        }
    }
}

/// Exact spin transform: every monomial c·Πᵢ∈S xᵢ expands through
/// xᵢ = (1 − zᵢ)/2 into c·2^−|S|·Σ_T⊆S (−1)^|T| z_T, aggregated with
/// cancellation.
pub fn to_ising(h: &BinaryPolynomial) -> IsingHamiltonian {
    let mut acc: FxHashMap<Term, f64> = FxHashMap::default();
    let mut offset = 0.0;
    for (t, c) in h.terms() {
        expand_monomial(t, c, &mut |subset, coeff| {
            if subset.degree() == 0 {
                offset += coeff;
            } else {
                *acc.entry(subset).or_insert(0.0) += coeff;
            }
        });
    }
    IsingHamiltonian {
        terms: acc.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        constant_offset: offset,
    }
}

/// Inverse substitution zᵢ = 1 − 2xᵢ: recovers the binary polynomial.
pub fn from_ising(ising: &IsingHamiltonian, pool: &VarPool) -> BinaryPolynomial {
    let mut out = BinaryPolynomial::constant(pool, ising.constant_offset);
    for (t, c) in ising.terms() {
        // prod (1 - 2 x_i) = sum over subsets of (-2)^|T| x_T
        let vars: Vec<crate::hubo::VarId> = t.vars().collect();
        let m = vars.len();
        for mask in 0u32..1 << m {
            let subset: Vec<crate::hubo::VarId> = (0..m)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| vars[i])
                .collect();
            let coeff = c * (-2.0f64).powi(subset.len() as i32);
            out.add_assign(&BinaryPolynomial::monomial(pool, &subset, coeff))
                .expect("same pool");
        }
    }
    out
}

/// Calls `f(subset_term, coefficient)` for each of the 2^|S| spin terms of
/// one binary monomial.
fn expand_monomial(t: &Term, c: f64, f: &mut impl FnMut(Term, f64)) {
    let indices = t.indices();
    let g = indices.len();
    let base = c / (1u64 << g) as f64;
    for mask in 0u64..1 << g {
        let subset: Vec<crate::hubo::VarId> = (0..g)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| crate::hubo::VarId::from_index(indices[i] as usize))
            .collect();
        let sign = if subset.len().is_multiple_of(2) { 1.0 } else { -1.0 };
        f(Term::from_vars(&subset), base * sign);
    }
}

/// Logical counts of one optimisation layer for an aggregated Hamiltonian.
pub fn logical_counts(ising: &IsingHamiltonian, hubo_interactions: usize) -> IsingSummary {
    IsingSummary::from_counts(
        ising.qubit_count(),
        ising.term_count(),
        hubo_interactions,
        ising.max_weight(),
        true,
    )
}

/// A replayable source of binary-polynomial terms: `visit` may be called
/// several times and must replay the same stream.
pub trait TermStream {
    fn visit(&self, f: &mut dyn FnMut(&[u32], f64));
}

impl TermStream for BinaryPolynomial {
    fn visit(&self, f: &mut dyn FnMut(&[u32], f64)) {
        for (t, c) in self.terms() {
            f(t.indices(), c);
        }
    }
}

impl TermStream for Vec<(Vec<u32>, f64)> {
    fn visit(&self, f: &mut dyn FnMut(&[u32], f64)) {
        for (ix, c) in self {
            f(ix, *c);
        }
    }
}

/// Budget for exact aggregation in [`counting_mode`]; exceeding either
/// limit switches to the cancellation-free upper bound.
#[derive(Debug, Clone, Copy)]
pub struct CountingBudget {
    /// Maximum aggregated spin terms held in memory.
    pub max_terms: usize,
    /// Maximum subset expansions performed (work cap).
    pub max_expansions: u64,
}

impl Default for CountingBudget {
    fn default() -> Self {
        // max_terms approximates an 8 GiB aggregation map at the observed
        // ~100 bytes per entry; the expansion cap bounds work, not memory
        Self {
            max_terms: 80_000_000,
            max_expansions: 200_000_000,
        }
    }
}

/// Resource counting without materialising the cost operator: exact
/// aggregation while the budget lasts, otherwise the per-monomial upper
/// bound Σ (2^g − 1) with `exact = false`. Qubit count is always exact.
pub fn counting_mode(source: &dyn TermStream, budget: CountingBudget) -> IsingSummary {
    // pass 1: exact qubit count, interaction count, degree profile
    let mut qubits = FxHashSet::default();
    let mut interactions = 0usize;
    let mut max_degree = 0usize;
    let mut bound: u128 = 0;
    source.visit(&mut |indices, c| {
        if c == 0.0 {
            return;
        }
        qubits.extend(indices.iter().copied());
        if !indices.is_empty() {
            interactions += 1;
        }
        max_degree = max_degree.max(indices.len());
        bound += (1u128 << indices.len()) - 1;
    });

    // pass 2: attempt exact aggregation within the budget; skipped when
    // pass 1 already proves the expansion work cannot fit
    let mut acc: FxHashMap<Term, f64> = FxHashMap::default();
    let mut expansions = 0u64;
    let mut overflow = bound > u128::from(budget.max_expansions);
    source.visit(&mut |indices, c| {
        if overflow || c == 0.0 {
            return;
        }
        expansions += 1u64 << indices.len();
        if expansions > budget.max_expansions {
            overflow = true;
            return;
        }
        let t = Term::from_vars(
            &indices
                .iter()
                .map(|&i| crate::hubo::VarId::from_index(i as usize))
                .collect::<Vec<_>>(),
        );
        expand_monomial(&t, c, &mut |subset, coeff| {
            if subset.degree() == 0 {
                return;
            }
            *acc.entry(subset).or_insert(0.0) += coeff;
        });
        if acc.len() > budget.max_terms {
            overflow = true;
        }
    });

    if overflow {
        let pauli = usize::try_from(bound).unwrap_or(usize::MAX);
        IsingSummary::from_counts(qubits.len(), pauli, interactions, max_degree, false)
    } else {
        let pauli = acc.values().filter(|&&c| c != 0.0).count();
        let max_weight = acc
            .iter()
            .filter(|&(_, &c)| c != 0.0)
            .map(|(t, _)| t.degree())
            .max()
            .unwrap_or(0);
        IsingSummary::from_counts(qubits.len(), pauli, interactions, max_weight, true)
    }
}
