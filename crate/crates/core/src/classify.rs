//! Gauge and monoidal equivalence of pentagon solutions, zero-set orbits
//! and stabilizers under the ring automorphisms, symmetrized invariant sums,
//! and the classification report.
//!
//! Classification accepts two kinds of inputs through one code path: full
//! solutions (evaluated on a per-zero-set invariant basis) and invariant
//! profiles — records that carry a zero set plus invariant-monomial values
//! directly, for solution families whose full F-symbol data lives outside
//! this repository.

use num_rational::BigRational;
use std::collections::BTreeMap;

use crate::config::Config;
use crate::error::Result;
use crate::invariants::{
    evaluate_basis, evaluate_monomial, invariant_basis, InvariantBasis, InvariantMonomial,
    MonomialValue,
};
use crate::numeric::ComplexValue;
use crate::ring::{automorphism_group, Automorphism, BasedRing};
use crate::symbols::{
    apply_automorphism_zero_set, verify_solution, zero_set, Solution, ZeroSet,
};

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// An invariant-level stand-in for a solution: its zero set and the values
/// of a fixed, automorphism-stable family of invariant monomials. Values
/// compare exactly (zero tolerance).
#[derive(Clone, Debug)]
pub struct InvariantProfile {
    pub name: String,
    pub zero_set: ZeroSet,
    pub entries: Vec<(InvariantMonomial, ComplexValue)>,
}

/// One classification input.
#[derive(Clone, Debug)]
pub enum ClassInput {
    Solution(Solution),
    Profile(InvariantProfile),
}

impl ClassInput {
    pub fn name(&self) -> &str {
        match self {
            ClassInput::Solution(s) => &s.name,
            ClassInput::Profile(p) => &p.name,
        }
    }
}

// ---------------------------------------------------------------------------
// Internal record form
// ---------------------------------------------------------------------------

enum Evaluator<'a> {
    Full(&'a Solution),
    Profile(BTreeMap<InvariantMonomial, ComplexValue>),
}

struct Record<'a> {
    name: String,
    zeros: ZeroSet,
    keys: Vec<InvariantMonomial>,
    values: Vec<ComplexValue>,
    exact: bool,
    evaluator: Evaluator<'a>,
}

impl Record<'_> {
    /// Value of an arbitrary invariant monomial, when this record can
    /// provide one.
    fn eval(&self, m: &InvariantMonomial, zero_tol: &BigRational) -> Option<ComplexValue> {
        match &self.evaluator {
            Evaluator::Full(sol) => match evaluate_monomial(sol, m, zero_tol) {
                Ok(MonomialValue::Defined(v)) => Some(v),
                _ => None,
            },
            Evaluator::Profile(map) => map.get(m).cloned(),
        }
    }
}

fn values_match(a: &Record, b: &Record, tol: &BigRational) -> bool {
    if a.keys != b.keys || a.values.len() != b.values.len() {
        return false;
    }
    let exact = a.exact && b.exact;
    a.values.iter().zip(&b.values).all(|(x, y)| {
        if exact {
            x == y
        } else {
            x.approx_eq(y, tol)
        }
    })
}

/// ρ witnesses `a` against `b` when ρ maps a's zero set onto b's and
/// a(m) = b(ρ·m) for every profiled monomial m of a.
fn witnesses(
    a: &Record,
    b: &Record,
    rho: &Automorphism,
    config: &Config,
) -> bool {
    if apply_automorphism_zero_set(rho, &a.zeros) != b.zeros {
        return false;
    }
    let exact = a.exact && b.exact;
    for (m, v1) in a.keys.iter().zip(&a.values) {
        let moved = m.apply_automorphism(rho);
        let Some(v2) = b.eval(&moved, &config.zero_tol) else {
            return false;
        };
        let equal = if exact { *v1 == v2 } else { v1.approx_eq(&v2, &config.tol) };
        if !equal {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Pairwise equivalence tests
// ---------------------------------------------------------------------------

fn solution_record<'a>(
    ring: &BasedRing,
    sol: &'a Solution,
    config: &Config,
    basis_cache: &mut BTreeMap<ZeroSet, InvariantBasis>,
) -> Result<Record<'a>> {
    let zeros = zero_set(sol, &config.zero_tol);
    if !basis_cache.contains_key(&zeros) {
        basis_cache.insert(zeros.clone(), invariant_basis(ring, &zeros)?);
    }
    let basis = &basis_cache[&zeros];
    let eval = evaluate_basis(sol, basis, &config.zero_tol)?;
    Ok(Record {
        name: sol.name.clone(),
        zeros,
        keys: basis.monomials.clone(),
        values: eval.values,
        exact: false,
        evaluator: Evaluator::Full(sol),
    })
}

fn profile_record(profile: &InvariantProfile) -> Record<'static> {
    let mut entries = profile.entries.clone();
    entries.sort_by(|(a, _), (b, _)| a.cmp(b));
    let map: BTreeMap<InvariantMonomial, ComplexValue> = entries.iter().cloned().collect();
    Record {
        name: profile.name.clone(),
        zeros: profile.zero_set.clone(),
        keys: entries.iter().map(|(m, _)| m.clone()).collect(),
        values: entries.into_iter().map(|(_, v)| v).collect(),
        exact: true,
        evaluator: Evaluator::Profile(map),
    }
}

/// Two solutions are gauge equivalent iff their zero sets coincide and the
/// invariant basis for that zero set evaluates identically (within tol).
pub fn gauge_equivalent(
    ring: &BasedRing,
    s1: &Solution,
    s2: &Solution,
    config: &Config,
) -> Result<bool> {
    let mut cache = BTreeMap::new();
    let r1 = solution_record(ring, s1, config, &mut cache)?;
    let z2 = zero_set(s2, &config.zero_tol);
    if r1.zeros != z2 {
        return Ok(false);
    }
    let r2 = solution_record(ring, s2, config, &mut cache)?;
    Ok(values_match(&r1, &r2, &config.tol))
}

/// Searches for an automorphism witnessing monoidal equivalence: a ρ mapping
/// the first solution's zero set onto the second's with F₁(m) = F₂(ρ·m) on
/// the invariant basis. Only automorphisms satisfying the zero-set coset
/// condition are examined. Returns the first witness in the group's
/// canonical order.
pub fn monoidal_equivalent(
    ring: &BasedRing,
    s1: &Solution,
    s2: &Solution,
    config: &Config,
) -> Result<Option<Automorphism>> {
    let mut cache = BTreeMap::new();
    let r1 = solution_record(ring, s1, config, &mut cache)?;
    let r2 = solution_record(ring, s2, config, &mut cache)?;
    for rho in automorphism_group(ring) {
        if witnesses(&r1, &r2, &rho, config) {
            return Ok(Some(rho));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// One gauge class: records sharing a zero set and invariant evaluations.
#[derive(Clone, Debug)]
pub struct GaugeClass {
    pub representative: String,
    pub members: Vec<String>,
    pub zero_set: ZeroSet,
    pub evaluations: Vec<ComplexValue>,
}

/// One monoidal class: a union of gauge classes linked by automorphism
/// witnesses.
#[derive(Clone, Debug)]
pub struct MonoidalClass {
    pub members: Vec<String>,
    /// Indices into the gauge class list.
    pub gauge_classes: Vec<usize>,
    /// (from, to, witness cycle string) for each merged representative pair.
    pub witnesses: Vec<(String, String, String)>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub gauge_classes: Vec<GaugeClass>,
    pub monoidal_classes: Vec<MonoidalClass>,
    /// (name, reason) for inputs excluded because verification failed.
    pub quarantined: Vec<(String, String)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut walk = x;
        while self.parent[walk] != root {
            walk = std::mem::replace(&mut self.parent[walk], root);
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        // Keep the smaller index as root so class order follows input order.
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
    }
}

/// Partitions the inputs into gauge classes (zero set, then evaluations) and
/// merges those into monoidal classes under the automorphism group. Full
/// solutions that fail pentagon verification are quarantined and excluded.
/// Member order inside every class follows input order.
pub fn classify(
    ring: &BasedRing,
    inputs: &[ClassInput],
    config: &Config,
) -> Result<ClassificationReport> {
    let mut quarantined = Vec::new();
    let mut records: Vec<Record> = Vec::new();
    let mut basis_cache: BTreeMap<ZeroSet, InvariantBasis> = BTreeMap::new();

    for input in inputs {
        match input {
            ClassInput::Solution(sol) => {
                let report = verify_solution(ring, sol, &config.tol)?;
                if !report.is_clean() {
                    let reason = format!(
                        "verification failed: {} unit, {} nonzero, {} pentagon, {} singular",
                        report.unit_violations.len(),
                        report.nonzero_violations.len(),
                        report.pentagon_violations.len(),
                        report.singular_blocks.len()
                    );
                    quarantined.push((sol.name.clone(), reason));
                    continue;
                }
                records.push(solution_record(ring, sol, config, &mut basis_cache)?);
            }
            ClassInput::Profile(profile) => records.push(profile_record(profile)),
        }
    }

    // Gauge classes: group by zero set, then pairwise evaluation comparison
    // inside each group, merged through union-find.
    let mut uf = UnionFind::new(records.len());
    let mut by_zeros: BTreeMap<&ZeroSet, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        by_zeros.entry(&r.zeros).or_default().push(i);
    }
    for group in by_zeros.values() {
        for (k, &i) in group.iter().enumerate() {
            for &j in &group[k + 1..] {
                if values_match(&records[i], &records[j], &config.tol) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut class_of_record: BTreeMap<usize, usize> = BTreeMap::new();
    let mut gauge_classes: Vec<GaugeClass> = Vec::new();
    for i in 0..records.len() {
        let root = uf.find(i);
        let class = *class_of_record.entry(root).or_insert_with(|| {
            gauge_classes.push(GaugeClass {
                representative: records[root].name.clone(),
                members: Vec::new(),
                zero_set: records[root].zeros.clone(),
                evaluations: records[root].values.clone(),
            });
            gauge_classes.len() - 1
        });
        gauge_classes[class].members.push(records[i].name.clone());
    }

    // Monoidal classes: merge gauge classes through witnessing automorphisms
    // on their representatives. The zero-set coset condition prunes the
    // search.
    let group = automorphism_group(ring);
    let reps: Vec<usize> = {
        let mut reps = vec![usize::MAX; gauge_classes.len()];
        for (&root, &class) in &class_of_record {
            reps[class] = root;
        }
        reps
    };
    let mut muf = UnionFind::new(gauge_classes.len());
    let mut witnesses_found: Vec<(usize, usize, Automorphism)> = Vec::new();
    for i in 0..gauge_classes.len() {
        for j in i + 1..gauge_classes.len() {
            if muf.find(i) == muf.find(j) {
                continue;
            }
            let (ri, rj) = (&records[reps[i]], &records[reps[j]]);
            if let Some(rho) = group.iter().find(|rho| witnesses(ri, rj, rho, config)) {
                muf.union(i, j);
                witnesses_found.push((i, j, rho.clone()));
            }
        }
    }
    let mut monoidal_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut monoidal_classes: Vec<MonoidalClass> = Vec::new();
    for class in 0..gauge_classes.len() {
        let root = muf.find(class);
        let mi = *monoidal_index.entry(root).or_insert_with(|| {
            monoidal_classes.push(MonoidalClass {
                members: Vec::new(),
                gauge_classes: Vec::new(),
                witnesses: Vec::new(),
            });
            monoidal_classes.len() - 1
        });
        monoidal_classes[mi].gauge_classes.push(class);
        monoidal_classes[mi].members.extend(gauge_classes[class].members.iter().cloned());
    }
    for (i, j, rho) in witnesses_found {
        let mi = monoidal_index[&muf.find(i)];
        monoidal_classes[mi].witnesses.push((
            gauge_classes[i].representative.clone(),
            gauge_classes[j].representative.clone(),
            rho.cycle_string(ring),
        ));
    }

    Ok(ClassificationReport { gauge_classes, monoidal_classes, quarantined })
}

// ---------------------------------------------------------------------------
// Zero-set orbits
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ZeroSetOrbit {
    pub stabilizer: Vec<Automorphism>,
    pub orbit: Vec<ZeroSet>,
}

/// The stabilizer {ρ : ρ·Z = Z} and the orbit of Z under the full
/// automorphism group. |orbit| * |stabilizer| = |Aut| always.
pub fn zero_set_orbit(ring: &BasedRing, zeros: &ZeroSet) -> ZeroSetOrbit {
    let mut stabilizer = Vec::new();
    let mut orbit: Vec<ZeroSet> = Vec::new();
    for rho in automorphism_group(ring) {
        let image = apply_automorphism_zero_set(&rho, zeros);
        if &image == zeros {
            stabilizer.push(rho);
        }
        if !orbit.contains(&image) {
            orbit.push(image);
        }
    }
    orbit.sort();
    ZeroSetOrbit { stabilizer, orbit }
}

// ---------------------------------------------------------------------------
// Symmetrized sums
// ---------------------------------------------------------------------------

/// A formal sum of invariant monomials closed under the automorphism action;
/// its evaluation is a monoidal invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrizedSum {
    pub terms: Vec<InvariantMonomial>,
}

impl SymmetrizedSum {
    /// Sum of the term evaluations on a full solution; undefined if any term
    /// is.
    pub fn evaluate(
        &self,
        sol: &Solution,
        zero_tol: &BigRational,
    ) -> Result<MonomialValue> {
        let mut total = ComplexValue::zero();
        for term in &self.terms {
            match evaluate_monomial(sol, term, zero_tol)? {
                MonomialValue::Defined(v) => total = total.add(&v),
                MonomialValue::Undefined => return Ok(MonomialValue::Undefined),
            }
        }
        Ok(MonomialValue::Defined(total))
    }

    /// Sum of the term values recorded in a profile; None when the profile
    /// does not carry some term.
    pub fn evaluate_profile(&self, profile: &InvariantProfile) -> Option<ComplexValue> {
        let map: BTreeMap<&InvariantMonomial, &ComplexValue> =
            profile.entries.iter().map(|(m, v)| (m, v)).collect();
        let mut total = ComplexValue::zero();
        for term in &self.terms {
            total = total.add(map.get(term)?);
        }
        Some(total)
    }
}

/// Closes a family of monomials under the automorphism orbit and returns
/// the deduplicated formal sum.
pub fn symmetrize(ring: &BasedRing, monomials: &[InvariantMonomial]) -> SymmetrizedSum {
    let mut terms: Vec<InvariantMonomial> = Vec::new();
    for rho in automorphism_group(ring) {
        for m in monomials {
            let image = m.apply_automorphism(&rho);
            if !terms.contains(&image) {
                terms.push(image);
            }
        }
    }
    terms.sort();
    SymmetrizedSum { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symbols::{apply_automorphism_solution, apply_gauge, sample_normalized_gauge};

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn solution_is_gauge_equivalent_to_itself_and_its_gauges() {
        let ring = fixtures::fib_ring();
        let sol = fixtures::fib_solution(50);
        assert!(gauge_equivalent(&ring, &sol, &sol, &cfg()).unwrap());
        let g = sample_normalized_gauge(&ring, 23);
        let gauged = apply_gauge(&ring, &sol, &g).unwrap();
        assert!(gauge_equivalent(&ring, &sol, &gauged, &cfg()).unwrap());
    }

    #[test]
    fn fibonacci_branches_are_inequivalent() {
        let ring = fixtures::fib_ring();
        let fib = fixtures::fib_solution(50);
        let yl = fixtures::yang_lee_solution(50);
        assert!(!gauge_equivalent(&ring, &fib, &yl, &cfg()).unwrap());
        // No automorphisms to help: monoidally distinct too.
        assert!(monoidal_equivalent(&ring, &fib, &yl, &cfg()).unwrap().is_none());
    }

    #[test]
    fn gauge_equivalence_is_an_equivalence_on_fixtures() {
        let ring = fixtures::fib_ring();
        let a = fixtures::fib_solution(50);
        let b = apply_gauge(&ring, &a, &sample_normalized_gauge(&ring, 1)).unwrap();
        let c = apply_gauge(&ring, &a, &sample_normalized_gauge(&ring, 2)).unwrap();
        let config = cfg();
        // symmetric + transitive on a triple.
        assert!(gauge_equivalent(&ring, &b, &a, &config).unwrap());
        assert!(gauge_equivalent(&ring, &a, &b, &config).unwrap());
        assert!(gauge_equivalent(&ring, &b, &c, &config).unwrap());
    }

    #[test]
    fn automorphism_provides_monoidal_witness() {
        let ring = fixtures::z3_ring();
        let sol = fixtures::z3_solution(1, 50);
        let rho = automorphism_group(&ring).into_iter().find(|a| !a.is_identity()).unwrap();
        let moved = apply_automorphism_solution(&ring, &sol, &rho).unwrap();
        // Not gauge equivalent (inverse cocycle class), but monoidally so.
        let config = cfg();
        assert!(!gauge_equivalent(&ring, &sol, &moved, &config).unwrap());
        let witness = monoidal_equivalent(&ring, &sol, &moved, &config).unwrap();
        assert!(witness.is_some());

        // Gauge + automorphism composite still yields a witness.
        let g = sample_normalized_gauge(&ring, 9);
        let mixed = apply_gauge(&ring, &moved, &g).unwrap();
        assert!(monoidal_equivalent(&ring, &sol, &mixed, &config).unwrap().is_some());
    }

    #[test]
    fn classify_fib_family() {
        let ring = fixtures::fib_ring();
        let fib = fixtures::fib_solution(50);
        let gauged =
            apply_gauge(&ring, &fib, &sample_normalized_gauge(&ring, 7)).unwrap();
        let yl = fixtures::yang_lee_solution(50);
        let report = classify(
            &ring,
            &[
                ClassInput::Solution(fib),
                ClassInput::Solution(yl),
                ClassInput::Solution(gauged),
            ],
            &cfg(),
        )
        .unwrap();
        assert_eq!(report.gauge_classes.len(), 2);
        assert_eq!(report.monoidal_classes.len(), 2);
        assert!(report.quarantined.is_empty());
        // fib and its gauge transform share a class.
        let fib_class = report
            .gauge_classes
            .iter()
            .find(|c| c.members.iter().any(|m| m == "fibonacci"))
            .unwrap();
        assert_eq!(fib_class.members.len(), 2);
    }

    #[test]
    fn classify_z3_cocycles() {
        let ring = fixtures::z3_ring();
        let inputs: Vec<ClassInput> =
            (0..3).map(|q| ClassInput::Solution(fixtures::z3_solution(q, 50))).collect();
        let report = classify(&ring, &inputs, &cfg()).unwrap();
        // Three cohomology classes; inversion identifies the two nontrivial
        // ones monoidally.
        assert_eq!(report.gauge_classes.len(), 3);
        assert_eq!(report.monoidal_classes.len(), 2);
    }

    #[test]
    fn classify_quarantines_invalid_solutions() {
        let ring = fixtures::fib_ring();
        let good = fixtures::fib_solution(50);
        let idx = *crate::symbols::f_symbol_set(&ring).unwrap().indices().last().unwrap();
        let bad = good.with_value(&idx, ComplexValue::from_ratio(1, 2)).unwrap();
        let report = classify(
            &ring,
            &[ClassInput::Solution(good), ClassInput::Solution(bad)],
            &cfg(),
        )
        .unwrap();
        assert_eq!(report.gauge_classes.len(), 1);
        assert_eq!(report.quarantined.len(), 1);
        assert!(report.quarantined[0].1.contains("pentagon"));
    }

    #[test]
    fn classify_single_trivial_solution() {
        let ring = fixtures::trivial_ring();
        let report = classify(
            &ring,
            &[ClassInput::Solution(fixtures::trivial_solution())],
            &cfg(),
        )
        .unwrap();
        assert_eq!(report.gauge_classes.len(), 1);
        assert_eq!(report.monoidal_classes.len(), 1);
    }

    #[test]
    fn monoidal_partition_coarsens_gauge_partition() {
        let ring = fixtures::z3_ring();
        let inputs: Vec<ClassInput> =
            (0..3).map(|q| ClassInput::Solution(fixtures::z3_solution(q, 50))).collect();
        let report = classify(&ring, &inputs, &cfg()).unwrap();
        for mc in &report.monoidal_classes {
            assert!(!mc.gauge_classes.is_empty());
            let member_total: usize =
                mc.gauge_classes.iter().map(|&g| report.gauge_classes[g].members.len()).sum();
            assert_eq!(member_total, mc.members.len());
        }
        let gauge_total: usize =
            report.gauge_classes.iter().map(|c| c.members.len()).sum();
        let monoidal_total: usize =
            report.monoidal_classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(gauge_total, monoidal_total);
    }

    #[test]
    fn orbit_stabilizer_identity_on_z3() {
        let ring = fixtures::z3_ring();
        // The empty zero set is fixed by everything.
        let orbit = zero_set_orbit(&ring, &ZeroSet::empty());
        assert_eq!(orbit.stabilizer.len(), 2);
        assert_eq!(orbit.orbit.len(), 1);
    }

    #[test]
    fn symmetrize_z3_pair() {
        // Neither product is fixed by the inversion but their sum is.
        let ring = fixtures::z3_ring();
        let m = fixtures::z3_remark_monomial(&ring);
        let rho = automorphism_group(&ring).into_iter().find(|a| !a.is_identity()).unwrap();
        assert_ne!(m.apply_automorphism(&rho), m);
        let sum = symmetrize(&ring, &[m.clone()]);
        assert_eq!(sum.terms.len(), 2);
        assert!(sum.terms.contains(&m));
        assert!(sum.terms.contains(&m.apply_automorphism(&rho)));
        // Applying rho to the solution before evaluating leaves the sum
        // fixed.
        let config = cfg();
        let sol = fixtures::z3_solution(1, 50);
        let moved = apply_automorphism_solution(&ring, &sol, &rho).unwrap();
        let v1 = sum.evaluate(&sol, &config.zero_tol).unwrap();
        let v2 = sum.evaluate(&moved, &config.zero_tol).unwrap();
        match (v1, v2) {
            (MonomialValue::Defined(a), MonomialValue::Defined(b)) => {
                assert!(a.approx_eq(&b, &config.tol));
            }
            _ => panic!("sum must be defined"),
        }
    }

    #[test]
    fn symmetrize_fixed_singleton_is_itself() {
        let ring = fixtures::fib_ring();
        let phi = crate::symbols::f_symbol_set(&ring).unwrap();
        let m = InvariantMonomial::single(phi.indices()[0]);
        let sum = symmetrize(&ring, &[m.clone()]);
        assert_eq!(sum.terms, vec![m]);
    }
}
