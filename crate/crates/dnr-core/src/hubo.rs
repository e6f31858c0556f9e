//! Sparse multilinear polynomial algebra over binary variables.
//!
//! A [`BinaryPolynomial`] is a map from sorted, duplicate-free variable
//! index sets to real coefficients; the constant term is keyed by the
//! empty set. Every product applies the reduction x² = x, so the
//! representation stays multilinear. Term iteration is canonical: by
//! degree first, then lexicographically on the index set, which makes
//! serialisation deterministic.
//!
//! The module also provides the three penalty constructors used by the
//! reconfiguration formulation:
//!
//! - `linear_sum_penalty`: (Σᵢ xᵢ − 1)², zero exactly when one variable
//!   is set,
//! - `interaction_penalty`: Πᵢ xᵢ, one exactly when all variables are set,
//! - `implies_penalty`: A − A·xⱼ (or A·xⱼ for a negated consequent) with
//!   A a product of antecedent variables.

use rustc_hash::FxHashMap;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

static POOL_COUNTER: AtomicU64 = AtomicU64::new(1);

/// Index of a binary variable inside a [`VarPool`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        VarId(i as u32)
    }

    fn raw(self) -> u32 {
        self.0
    }
}

/// Registry that issues dense variable indices and remembers their names.
///
/// Two polynomials may only be combined when they were built against the
/// same pool; the pool nonce is checked by every binary operation.
#[derive(Debug, Clone)]
pub struct VarPool {
    nonce: u64,
    names: Vec<String>,
}

impl VarPool {
    pub fn new() -> Self {
        Self {
            nonce: POOL_COUNTER.fetch_add(1, Ordering::Relaxed),
            names: Vec::new(),
        }
    }

    /// Allocates the next variable index.
    pub fn fresh(&mut self, name: impl Into<String>) -> VarId {
        let id = VarId(self.names.len() as u32);
        self.names.push(name.into());
        id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len() as u32).map(VarId)
    }

    fn id(&self) -> u64 {
        self.nonce
    }
}

impl Default for VarPool {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum HuboError {
    #[error("hubo: operands belong to different variable pools")]
    PoolMismatch,
    #[error("hubo: penalty constructor called with an empty variable list")]
    EmptyVariableList,
    #[error("hubo: duplicate variable {0:?} in constructor input")]
    DuplicateVariable(VarId),
    #[error("hubo: consequent {0:?} also appears in the antecedent")]
    ConsequentInAntecedent(VarId),
    #[error("hubo: assignment covers {got} variables but index {needed} is referenced")]
    AssignmentTooShort { got: usize, needed: usize },
}

/// A multilinear monomial: sorted, duplicate-free variable indices.
///
/// Ordered by degree first, then lexicographically, which fixes the
/// canonical term order of every polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term(Box<[u32]>);

impl Term {
    pub fn constant() -> Self {
        Term(Box::new([]))
    }

    pub fn var(v: VarId) -> Self {
        Term(Box::new([v.raw()]))
    }

    /// Builds a term from indices that are already sorted and distinct.
    fn from_sorted(ix: Vec<u32>) -> Self {
        debug_assert!(ix.windows(2).all(|w| w[0] < w[1]));
        Term(ix.into_boxed_slice())
    }

    /// Builds a term from arbitrary indices, sorting and deduplicating.
    pub fn from_vars(vars: &[VarId]) -> Self {
        let mut ix: Vec<u32> = vars.iter().map(|v| v.raw()).collect();
        ix.sort_unstable();
        ix.dedup();
        Term(ix.into_boxed_slice())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&i| VarId(i))
    }

    /// Merged union of two sorted index sets; this is the x² = x product.
    fn union(&self, other: &Term) -> Term {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Term::from_sorted(out)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multilinear real polynomial over binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryPolynomial {
    pool_id: u64,
    terms: BTreeMap<Term, f64>,
}

impl BinaryPolynomial {
    pub fn zero(pool: &VarPool) -> Self {
        Self {
            pool_id: pool.id(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(pool: &VarPool, c: f64) -> Self {
        let mut p = Self::zero(pool);
        if c != 0.0 {
            p.terms.insert(Term::constant(), c);
        }
        p
    }

    pub fn var(pool: &VarPool, v: VarId) -> Self {
        let mut p = Self::zero(pool);
        p.terms.insert(Term::var(v), 1.0);
        p
    }

    /// A single monomial with the given coefficient.
    pub fn monomial(pool: &VarPool, vars: &[VarId], c: f64) -> Self {
        let mut p = Self::zero(pool);
        if c != 0.0 {
            p.terms.insert(Term::from_vars(vars), c);
        }
        p
    }

    fn check_pool(&self, other: &Self) -> Result<(), HuboError> {
        if self.pool_id == other.pool_id {
            Ok(())
        } else {
            Err(HuboError::PoolMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HuboError> {
        self.check_pool(other)?;
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<(), HuboError> {
        self.check_pool(other)?;
        for (t, &c) in &other.terms {
            add_term(&mut self.terms, t.clone(), c);
        }
        Ok(())
    }

    /// Adds `scale * other` in place.
    pub fn add_scaled(&mut self, other: &Self, scale: f64) -> Result<(), HuboError> {
        self.check_pool(other)?;
        for (t, &c) in &other.terms {
            add_term(&mut self.terms, t.clone(), scale * c);
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HuboError> {
        let mut out = self.clone();
        out.add_scaled(other, -1.0)?;
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HuboError> {
        self.check_pool(other)?;
        let mut acc: FxHashMap<Term, f64> = FxHashMap::default();
        for (ta, &ca) in &self.terms {
            for (tb, &cb) in &other.terms {
                *acc.entry(ta.union(tb)).or_insert(0.0) += ca * cb;
            }
        }
        Ok(Self {
            pool_id: self.pool_id,
            terms: collect_nonzero(acc),
        })
    }

    /// `self * self` using symmetry: diagonal terms once, off-diagonal twice.
    pub fn square(&self) -> Self {
        let entries: Vec<(&Term, f64)> = self.terms.iter().map(|(t, &c)| (t, c)).collect();
        let mut acc: FxHashMap<Term, f64> = FxHashMap::default();
        for i in 0..entries.len() {
            let (ti, ci) = entries[i];
            *acc.entry(ti.clone()).or_insert(0.0) += ci * ci;
            for (tj, cj) in entries.iter().skip(i + 1) {
                *acc.entry(ti.union(tj)).or_insert(0.0) += 2.0 * ci * cj;
            }
        }
        Self {
            pool_id: self.pool_id,
            terms: collect_nonzero(acc),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self {
                pool_id: self.pool_id,
                terms: BTreeMap::new(),
            };
        }
        Self {
            pool_id: self.pool_id,
            terms: self.terms.iter().map(|(t, &v)| (t.clone(), v * c)).collect(),
        }
    }

    /// Value of the polynomial at a 0/1 assignment (`assignment[i]` is xᵢ).
    pub fn evaluate(&self, assignment: &[bool]) -> Result<f64, HuboError> {
        let mut total = 0.0;
        for (t, &c) in &self.terms {
            let mut active = true;
            for &i in t.indices() {
                let i = i as usize;
                if i >= assignment.len() {
                    return Err(HuboError::AssignmentTooShort {
                        got: assignment.len(),
                        needed: i,
                    });
                }
                if !assignment[i] {
                    active = false;
                    break;
                }
            }
            if active {
                total += c;
            }
        }
        Ok(total)
    }

    /// Highest monomial degree, 0 for constant or empty polynomials.
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Term::degree)
    }

    /// Number of non-constant terms.
    pub fn term_count(&self) -> usize {
        let constant = usize::from(self.terms.contains_key(&Term::constant()));
        self.terms.len() - constant
    }

    pub fn constant_term(&self) -> f64 {
        self.terms.get(&Term::constant()).copied().unwrap_or(0.0)
    }

    pub fn coefficient(&self, vars: &[VarId]) -> f64 {
        self.terms.get(&Term::from_vars(vars)).copied().unwrap_or(0.0)
    }

    /// Terms in canonical order (degree, then lexicographic).
    pub fn terms(&self) -> impl Iterator<Item = (&Term, f64)> + '_ {
        self.terms.iter().map(|(t, &c)| (t, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest referenced variable index plus one.
    pub fn var_span(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|t| t.indices().last())
            .max()
            .map_or(0, |&i| i as usize + 1)
    }

    /// Histogram of term counts per degree (index = degree).
    pub fn degree_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.degree() + 1];
        for t in self.terms.keys() {
            hist[t.degree()] += 1;
        }
        hist
    }

    /// Debug serialisation: one term per line, `coefficient<TAB>i1,i2,...`,
    /// constant term first with an empty index list.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}\t", self.constant_term());
        for (t, c) in self.terms() {
            if t.degree() == 0 {
                continue;
            }
            let ix: Vec<String> = t.indices().iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}\t{}", c, ix.join(","));
        }
        out
    }

    pub(crate) fn from_terms(pool_id: u64, terms: BTreeMap<Term, f64>) -> Self {
        Self { pool_id, terms }
    }
}

fn add_term(map: &mut BTreeMap<Term, f64>, t: Term, c: f64) {
    if c == 0.0 {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(t) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let v = e.get_mut();
            *v += c;
            if *v == 0.0 {
                e.remove();
            }
        }
    }
}

fn collect_nonzero(acc: FxHashMap<Term, f64>) -> BTreeMap<Term, f64> {
    acc.into_iter().filter(|&(_, c)| c != 0.0).collect()
}

fn check_distinct(vars: &[VarId]) -> Result<(), HuboError> {
    if vars.is_empty() {
        return Err(HuboError::EmptyVariableList);
    }
    let mut seen: Vec<u32> = vars.iter().map(|v| v.raw()).collect();
    seen.sort_unstable();
    for w in seen.windows(2) {
        if w[0] == w[1] {
            return Err(HuboError::DuplicateVariable(VarId(w[0])));
        }
    }
    Ok(())
}

/// Penalty (Σᵢ xᵢ − 1)², the multilinear expansion
/// 1 − Σᵢ xᵢ + 2 Σᵢ<ⱼ xᵢxⱼ. Zero exactly when one variable is 1.
pub fn linear_sum_penalty(pool: &VarPool, vars: &[VarId]) -> Result<BinaryPolynomial, HuboError> {
    check_distinct(vars)?;
    let mut terms = BTreeMap::new();
    add_term(&mut terms, Term::constant(), 1.0);
    for &v in vars {
        add_term(&mut terms, Term::var(v), -1.0);
    }
    for (i, &a) in vars.iter().enumerate() {
        for &b in &vars[i + 1..] {
            add_term(&mut terms, Term::from_vars(&[a, b]), 2.0);
        }
    }
    Ok(BinaryPolynomial::from_terms(pool.id(), terms))
}

/// Penalty Πᵢ xᵢ: a single monomial, 1 exactly when all variables are 1.
pub fn interaction_penalty(pool: &VarPool, vars: &[VarId]) -> Result<BinaryPolynomial, HuboError> {
    check_distinct(vars)?;
    Ok(BinaryPolynomial::monomial(pool, vars, 1.0))
}

/// Penalty for `antecedent ⇒ consequent` with A = Π antecedent:
/// A − A·xⱼ when `negated` is false, A·xⱼ when true. Value is 1 exactly
/// when the antecedent holds and the consequent is violated.
pub fn implies_penalty(
    pool: &VarPool,
    antecedent: &[VarId],
    consequent: VarId,
    negated: bool,
) -> Result<BinaryPolynomial, HuboError> {
    check_distinct(antecedent)?;
    if antecedent.contains(&consequent) {
        return Err(HuboError::ConsequentInAntecedent(consequent));
    }
    let mut full: Vec<VarId> = antecedent.to_vec();
    full.push(consequent);
    if negated {
        Ok(BinaryPolynomial::monomial(pool, &full, 1.0))
    } else {
        let mut p = BinaryPolynomial::monomial(pool, antecedent, 1.0);
        let neg = BinaryPolynomial::monomial(pool, &full, -1.0);
        p.add_assign(&neg)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pool_with(n: usize) -> (VarPool, Vec<VarId>) {
        let mut pool = VarPool::new();
        let vars = (0..n).map(|i| pool.fresh(format!("x{i}"))).collect();
        (pool, vars)
    }

    /// All 2^n assignments over n variables.
    fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << n).map(move |m| (0..n).map(|i| m >> i & 1 == 1).collect())
    }

    #[test]
    fn idempotent_product() {
        let (pool, v) = pool_with(1);
        let x = BinaryPolynomial::var(&pool, v[0]);
        assert_eq!(x.mul(&x).unwrap(), x);
    }

    #[test]
    fn square_of_sum_minus_one() {
        // (x1 + x2 - 1)^2 = 1 - x1 - x2 + 2 x1 x2 under x^2 = x
        let (pool, v) = pool_with(2);
        let mut s = BinaryPolynomial::var(&pool, v[0]);
        s.add_assign(&BinaryPolynomial::var(&pool, v[1])).unwrap();
        s.add_assign(&BinaryPolynomial::constant(&pool, -1.0)).unwrap();
        let sq = s.square();
        assert_eq!(sq.constant_term(), 1.0);
        assert_eq!(sq.coefficient(&[v[0]]), -1.0);
        assert_eq!(sq.coefficient(&[v[1]]), -1.0);
        assert_eq!(sq.coefficient(&[v[0], v[1]]), 2.0);
        assert_eq!(sq.term_count(), 3);
        assert_eq!(sq.evaluate(&[true, false]).unwrap(), 0.0);
    }

    #[test]
    fn pool_mismatch_is_rejected() {
        let (pa, va) = pool_with(1);
        let (pb, vb) = pool_with(1);
        let a = BinaryPolynomial::var(&pa, va[0]);
        let b = BinaryPolynomial::var(&pb, vb[0]);
        assert_eq!(a.add(&b).unwrap_err(), HuboError::PoolMismatch);
        assert_eq!(a.mul(&b).unwrap_err(), HuboError::PoolMismatch);
    }

    #[test]
    fn linear_sum_penalty_truth_table() {
        for n in 1..=4 {
            let (pool, vars) = pool_with(n);
            let p = linear_sum_penalty(&pool, &vars).unwrap();
            for a in assignments(n) {
                let ones = a.iter().filter(|&&b| b).count() as f64;
                let expect = (ones - 1.0) * (ones - 1.0);
                assert_eq!(p.evaluate(&a).unwrap(), expect, "n={n} a={a:?}");
            }
        }
        // spot checks from the worked examples
        let (pool, vars) = pool_with(3);
        let p = linear_sum_penalty(&pool, &vars).unwrap();
        assert_eq!(p.evaluate(&[false, false, false]).unwrap(), 1.0);
        let p1 = linear_sum_penalty(&pool, &vars[..1]).unwrap();
        assert_eq!(p1.evaluate(&[true, false, false]).unwrap(), 0.0);
        let p2 = linear_sum_penalty(&pool, &vars[..2]).unwrap();
        assert_eq!(p2.evaluate(&[true, true, false]).unwrap(), 1.0);
    }

    #[test]
    fn linear_sum_penalty_matches_squared_form() {
        let (pool, vars) = pool_with(5);
        let direct = linear_sum_penalty(&pool, &vars).unwrap();
        let mut s = BinaryPolynomial::constant(&pool, -1.0);
        for &v in &vars {
            s.add_assign(&BinaryPolynomial::var(&pool, v)).unwrap();
        }
        assert_eq!(direct, s.square());
    }

    #[test]
    fn interaction_penalty_truth_table() {
        let (pool, vars) = pool_with(2);
        let p = interaction_penalty(&pool, &vars).unwrap();
        assert_eq!(p.evaluate(&[true, true]).unwrap(), 1.0);
        assert_eq!(p.evaluate(&[true, false]).unwrap(), 0.0);
        let (pool3, vars3) = pool_with(3);
        let p3 = interaction_penalty(&pool3, &vars3).unwrap();
        assert_eq!(p3.term_count(), 1);
        assert_eq!(p3.degree(), 3);
    }

    #[test]
    fn implies_penalty_truth_tables() {
        let (pool, v) = pool_with(3);
        // x1 => x2
        let pos = implies_penalty(&pool, &[v[0]], v[1], false).unwrap();
        assert_eq!(pos.evaluate(&[true, false, false]).unwrap(), 1.0);
        assert_eq!(pos.evaluate(&[true, true, false]).unwrap(), 0.0);
        assert_eq!(pos.evaluate(&[false, false, false]).unwrap(), 0.0);
        assert_eq!(pos.evaluate(&[false, true, false]).unwrap(), 0.0);
        // x1 => not x2
        let neg = implies_penalty(&pool, &[v[0]], v[1], true).unwrap();
        assert_eq!(neg.evaluate(&[true, true, false]).unwrap(), 1.0);
        assert_eq!(neg.evaluate(&[true, false, false]).unwrap(), 0.0);
        // (x1 and x2) => x3, generalized product antecedent
        let gen = implies_penalty(&pool, &[v[0], v[1]], v[2], false).unwrap();
        for a in assignments(3) {
            let expect = if a[0] && a[1] && !a[2] { 1.0 } else { 0.0 };
            assert_eq!(gen.evaluate(&a).unwrap(), expect, "a={a:?}");
        }
    }

    #[test]
    fn implies_penalty_rejects_consequent_in_antecedent() {
        let (pool, v) = pool_with(2);
        let err = implies_penalty(&pool, &[v[0], v[1]], v[0], false).unwrap_err();
        assert_eq!(err, HuboError::ConsequentInAntecedent(v[0]));
    }

    #[test]
    fn penalties_are_nonnegative_and_zero_only_on_satisfying_set() {
        // exhaustive over small variable counts
        for n in 1..=6 {
            let (pool, vars) = pool_with(n);
            let lin = linear_sum_penalty(&pool, &vars).unwrap();
            let prod = interaction_penalty(&pool, &vars).unwrap();
            for a in assignments(n) {
                let ones = a.iter().filter(|&&b| b).count();
                let lv = lin.evaluate(&a).unwrap();
                assert!(lv >= 0.0);
                assert_eq!(lv == 0.0, ones == 1);
                let pv = prod.evaluate(&a).unwrap();
                assert!(pv >= 0.0);
                assert_eq!(pv == 0.0, ones != n);
                assert!(lv == 0.0 || lv >= 1.0);
                assert!(pv == 0.0 || pv >= 1.0);
            }
        }
    }

    #[test]
    fn canonical_dump_order() {
        let (pool, v) = pool_with(3);
        let mut p = BinaryPolynomial::monomial(&pool, &[v[0], v[2]], 2.5);
        p.add_assign(&BinaryPolynomial::var(&pool, v[1])).unwrap();
        p.add_assign(&BinaryPolynomial::constant(&pool, -1.0)).unwrap();
        p.add_assign(&BinaryPolynomial::monomial(&pool, &[v[0], v[1], v[2]], 1.0))
            .unwrap();
        assert_eq!(p.dump(), "-1\t\n1\t1\n2.5\t0,2\n1\t0,1,2\n");
    }

    #[test]
    fn degree_and_term_count() {
        let (pool, v) = pool_with(4);
        let mut p = BinaryPolynomial::constant(&pool, 3.0);
        p.add_assign(&BinaryPolynomial::monomial(&pool, &[v[0], v[3]], 1.0))
            .unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.term_count(), 1);
        assert_eq!(p.var_span(), 4);
    }

    /// Dense truth-table image of a polynomial over n variables.
    fn table(p: &BinaryPolynomial, n: usize) -> Vec<f64> {
        assignments(n).map(|a| p.evaluate(&a).unwrap()).collect()
    }

    fn arb_poly(n_vars: usize, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u8>, f64)>> {
        prop::collection::vec(
            (
                prop::collection::vec(0u8..n_vars as u8, 0..=3),
                -4.0f64..4.0,
            ),
            1..=max_terms,
        )
    }

    fn build(pool: &VarPool, vars: &[VarId], terms: &[(Vec<u8>, f64)]) -> BinaryPolynomial {
        let mut p = BinaryPolynomial::zero(pool);
        for (ix, c) in terms {
            let vs: Vec<VarId> = ix.iter().map(|&i| vars[i as usize]).collect();
            p.add_assign(&BinaryPolynomial::monomial(pool, &vs, *c)).unwrap();
        }
        p
    }

    proptest! {
        #[test]
        fn ring_laws_against_truth_table(a in arb_poly(5, 6), b in arb_poly(5, 6), c in arb_poly(5, 6)) {
            let (pool, vars) = pool_with(5);
            let pa = build(&pool, &vars, &a);
            let pb = build(&pool, &vars, &b);
            let pc = build(&pool, &vars, &c);

            // commutativity: addition is order-exact, products only up to
            // accumulation order
            prop_assert_eq!(pa.add(&pb).unwrap(), pb.add(&pa).unwrap());
            let ab = pa.mul(&pb).unwrap();
            let ba = pb.mul(&pa).unwrap();
            prop_assert_eq!(ab.term_count(), ba.term_count());
            for (t, c) in ab.terms() {
                let d = ba.coefficient(&t.vars().collect::<Vec<_>>());
                prop_assert!((c - d).abs() <= 1e-12 * (1.0 + c.abs()));
            }
            // associativity via truth tables (float assoc only holds pointwise)
            let t1 = table(&pa.mul(&pb).unwrap().mul(&pc).unwrap(), 5);
            let t2 = table(&pa.mul(&pb.mul(&pc).unwrap()).unwrap(), 5);
            for (x, y) in t1.iter().zip(&t2) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())));
            }
            // distributivity
            let lhs = table(&pa.mul(&pb.add(&pc).unwrap()).unwrap(), 5);
            let rhs = table(&pa.mul(&pb).unwrap().add(&pa.mul(&pc).unwrap()).unwrap(), 5);
            for (x, y) in lhs.iter().zip(&rhs) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs())));
            }
        }

        #[test]
        fn evaluate_is_multiplicative(a in arb_poly(5, 6), b in arb_poly(5, 6), mask in 0u32..32) {
            let (pool, vars) = pool_with(5);
            let pa = build(&pool, &vars, &a);
            let pb = build(&pool, &vars, &b);
            let assignment: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
            let prod = pa.mul(&pb).unwrap().evaluate(&assignment).unwrap();
            let sep = pa.evaluate(&assignment).unwrap() * pb.evaluate(&assignment).unwrap();
            prop_assert!((prod - sep).abs() <= 1e-9 * (1.0 + prod.abs().max(sep.abs())));
        }

        #[test]
        fn square_matches_self_product(a in arb_poly(6, 8)) {
            let (pool, vars) = pool_with(6);
            let pa = build(&pool, &vars, &a);
            let sq = pa.square();
            let prod = pa.mul(&pa).unwrap();
            for (t, c) in sq.terms() {
                let d = prod.terms.get(t).copied().unwrap_or(0.0);
                prop_assert!((c - d).abs() <= 1e-9 * (1.0 + c.abs()));
            }
            prop_assert_eq!(sq.term_count(), prod.term_count());
        }
    }
}
