//! Gauge-invariant rational monomials: basis computation from the exponent
//! matrix kernel, evaluation on solutions, pentagon localization, rationality
//! testing, and the coverage check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{
    build_exponent_matrix, hnf_with_transform, kernel_basis, solve_coordinates,
    SparseVec,
};
use crate::numeric::{format_decimal, limit_denominator, ComplexValue};
use crate::ring::{Automorphism, BasedRing};
use crate::symbols::{
    apply_automorphism_index, f_symbol_set, pentagon_instances, zero_set, FSymbolIndex, Solution,
    ZeroSet,
};

/// A rational monomial in the F-symbol variables, stored as its sparse
/// exponent vector. The ones produced by [`invariant_basis`] have trivial
/// total gauge weight and support disjoint from the generating zero set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct InvariantMonomial {
    exponents: BTreeMap<FSymbolIndex, BigInt>,
}

impl InvariantMonomial {
    pub fn new(exponents: BTreeMap<FSymbolIndex, BigInt>) -> Self {
        InvariantMonomial {
            exponents: exponents.into_iter().filter(|(_, k)| !k.is_zero()).collect(),
        }
    }

    pub fn single(idx: FSymbolIndex) -> Self {
        Self::new([(idx, BigInt::from(1))].into())
    }

    /// Product of variables with integer exponents, e.g. `[(x, 1), (y, -2)]`.
    pub fn from_powers(powers: impl IntoIterator<Item = (FSymbolIndex, i64)>) -> Self {
        Self::new(powers.into_iter().map(|(idx, k)| (idx, BigInt::from(k))).collect())
    }

    fn from_kernel_row(row_labels: &[FSymbolIndex], row: &SparseVec) -> Self {
        Self::new(row.iter().map(|(i, k)| (row_labels[*i], k.clone())).collect())
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&FSymbolIndex, &BigInt)> {
        self.exponents.iter()
    }

    pub fn exponent(&self, idx: &FSymbolIndex) -> BigInt {
        self.exponents.get(idx).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &FSymbolIndex> {
        self.exponents.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Formal product of two monomials (exponents add).
    pub fn product(&self, other: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (idx, k) in &other.exponents {
            let slot = exponents.entry(*idx).or_insert_with(BigInt::zero);
            *slot += k;
        }
        Self::new(exponents)
    }

    /// Dense exponent vector over an ordered variable list. Errs when the
    /// support is not contained in the list.
    pub fn to_coords(&self, variables: &[FSymbolIndex]) -> Result<Vec<BigInt>> {
        let positions: BTreeMap<&FSymbolIndex, usize> =
            variables.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut out = vec![BigInt::zero(); variables.len()];
        for (idx, k) in &self.exponents {
            let pos = positions.get(idx).ok_or_else(|| {
                Error::DomainMismatch("monomial supported outside the variable list".into())
            })?;
            out[*pos] = k.clone();
        }
        Ok(out)
    }

    /// Relabels every variable in the support; exponents are preserved.
    pub fn apply_automorphism(&self, rho: &Automorphism) -> Self {
        Self::new(
            self.exponents
                .iter()
                .map(|(idx, k)| (apply_automorphism_index(rho, idx), k.clone()))
                .collect(),
        )
    }

    /// Display with positive exponents before negative, canonical variable
    /// order inside each group.
    pub fn describe(&self, ring: &BasedRing) -> String {
        let mut parts: Vec<String> = Vec::new();
        for want_positive in [true, false] {
            for (idx, k) in &self.exponents {
                if k.is_positive() == want_positive {
                    if k.abs() == BigInt::from(1) && want_positive {
                        parts.push(idx.name(ring));
                    } else {
                        parts.push(format!("{}^{}", idx.name(ring), k));
                    }
                }
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// An integer basis of the gauge-invariant monomials supported away from a
/// zero set, together with the variable ordering it was computed over.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub monomials: Vec<InvariantMonomial>,
    pub zero_set: ZeroSet,
    /// The nonzero variables, in canonical order (rows of the exponent
    /// matrix).
    pub variables: Vec<FSymbolIndex>,
}

impl InvariantBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Dense exponent vectors of the basis monomials over `self.variables`.
    pub fn coordinate_rows(&self) -> Vec<Vec<BigInt>> {
        self.monomials
            .iter()
            .map(|m| m.to_coords(&self.variables).expect("basis supported on its variables"))
            .collect()
    }

    /// Integer coordinates of a monomial in this basis, when it lies in the
    /// basis lattice.
    pub fn coordinates_of(&self, m: &InvariantMonomial) -> Result<Option<Vec<BigInt>>> {
        let target = match m.to_coords(&self.variables) {
            Ok(v) => v,
            // Supported on a zero variable: certainly outside the lattice.
            Err(_) => return Ok(None),
        };
        solve_coordinates(&self.coordinate_rows(), &target)
    }
}

/// Computes a basis of the invariant monomials on the nonzero variables:
/// exponent matrix, HNF with transform, kernel rows, monomials.
pub fn invariant_basis(ring: &BasedRing, zeros: &ZeroSet) -> Result<InvariantBasis> {
    let em = build_exponent_matrix(ring, zeros)?;
    let pair = hnf_with_transform(&em.matrix);
    let kernel = kernel_basis(&pair);
    let monomials = kernel
        .iter()
        .map(|row| InvariantMonomial::from_kernel_row(&em.row_labels, row))
        .collect();
    Ok(InvariantBasis { monomials, zero_set: zeros.clone(), variables: em.row_labels })
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Result of evaluating one monomial: undefined exactly when a variable with
/// negative exponent is (numerically) zero. A zero base under a positive
/// exponent makes the whole value zero, which is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialValue {
    Defined(ComplexValue),
    Undefined,
}

impl MonomialValue {
    pub fn defined(&self) -> Option<&ComplexValue> {
        match self {
            MonomialValue::Defined(v) => Some(v),
            MonomialValue::Undefined => None,
        }
    }
}

/// Evaluates a single monomial on a solution.
pub fn evaluate_monomial(
    sol: &Solution,
    m: &InvariantMonomial,
    zero_tol: &BigRational,
) -> Result<MonomialValue> {
    let mut product = ComplexValue::one();
    let mut saw_zero_base = false;
    for (idx, k) in m.exponents() {
        let value = sol
            .value(idx)
            .ok_or_else(|| Error::DomainMismatch("monomial index outside solution domain".into()))?;
        if value.is_zero_within(zero_tol) {
            if k.is_negative() {
                return Ok(MonomialValue::Undefined);
            }
            saw_zero_base = true;
            continue;
        }
        let factor = value.pow(k).expect("nonzero base");
        product = product.mul(&factor);
    }
    if saw_zero_base {
        return Ok(MonomialValue::Defined(ComplexValue::zero()));
    }
    Ok(MonomialValue::Defined(product))
}

/// One value per basis monomial, in basis order.
#[derive(Clone, Debug)]
pub struct BasisEvaluation {
    pub solution: String,
    pub values: Vec<ComplexValue>,
}

/// Evaluates every basis monomial. The solution's zero set must equal the
/// basis's zero set; this guarantees every value is defined.
pub fn evaluate_basis(
    sol: &Solution,
    basis: &InvariantBasis,
    zero_tol: &BigRational,
) -> Result<BasisEvaluation> {
    let sol_zeros = zero_set(sol, zero_tol);
    if sol_zeros != basis.zero_set {
        return Err(Error::ZeroSetMismatch(format!(
            "solution `{}` has {} zeros, basis was computed for {}; recompute the basis \
             for this solution's zero set",
            sol.name,
            sol_zeros.len(),
            basis.zero_set.len()
        )));
    }
    let mut values = Vec::with_capacity(basis.len());
    for m in &basis.monomials {
        match evaluate_monomial(sol, m, zero_tol)? {
            MonomialValue::Defined(v) => values.push(v),
            MonomialValue::Undefined => {
                return Err(Error::Internal(
                    "basis monomial undefined despite matching zero sets".into(),
                ))
            }
        }
    }
    Ok(BasisEvaluation { solution: sol.name.clone(), values })
}

// ---------------------------------------------------------------------------
// Pentagon localization
// ---------------------------------------------------------------------------

/// A signed Laurent monomial in basis coordinates: sign * prod_k b_k^{c_k}.
#[derive(Clone, Debug)]
pub struct LocalizedTerm {
    pub sign: i8,
    pub coords: Vec<BigInt>,
}

/// One localized pentagon instance: sum of signed coordinate monomials = 0.
/// The divided-out term appears as a constant (all-zero coordinates).
#[derive(Clone, Debug)]
pub struct LocalizedEquation {
    /// Index into `pentagon_instances` this came from.
    pub instance: usize,
    pub terms: Vec<LocalizedTerm>,
}

impl LocalizedEquation {
    /// Substitutes basis values and returns the residual sum.
    pub fn residual(&self, basis_values: &[ComplexValue]) -> Result<ComplexValue> {
        let mut total = ComplexValue::zero();
        for term in &self.terms {
            let mut v = ComplexValue::one();
            for (value, k) in basis_values.iter().zip(&term.coords) {
                if k.is_zero() {
                    continue;
                }
                let factor = value.pow(k).ok_or_else(|| {
                    Error::Internal("zero basis value in localized equation".into())
                })?;
                v = v.mul(&factor);
            }
            total = if term.sign > 0 { total.add(&v) } else { total.sub(&v) };
        }
        Ok(total)
    }
}

/// The localized pentagon system for a zero set, in coordinates of `basis`.
#[derive(Clone, Debug)]
pub struct LocalizedSystem {
    pub equations: Vec<LocalizedEquation>,
    pub basis_size: usize,
    /// Instances whose terms all vanished under the zero set.
    pub dropped_instances: usize,
}

/// Divides each pentagon instance by its first surviving term (canonical
/// order: left side first, then right-side terms by summed channel) and
/// expresses every surviving ratio in basis coordinates. Instances with all
/// terms zero are dropped.
pub fn localize_pentagon(
    ring: &BasedRing,
    zeros: &ZeroSet,
    basis: &InvariantBasis,
) -> Result<LocalizedSystem> {
    if *zeros != basis.zero_set {
        return Err(Error::ZeroSetMismatch(
            "localization zero set differs from the basis zero set".into(),
        ));
    }
    let positions: BTreeMap<&FSymbolIndex, usize> =
        basis.variables.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let basis_rows = basis.coordinate_rows();
    let instances = pentagon_instances(ring)?;

    let mut equations = Vec::new();
    let mut dropped = 0usize;
    for (instance, eq) in instances.iter().enumerate() {
        let surviving: Vec<(i8, Vec<FSymbolIndex>)> = eq
            .signed_terms()
            .into_iter()
            .filter(|(_, factors)| factors.iter().all(|f| !zeros.contains(f)))
            .collect();
        if surviving.is_empty() {
            dropped += 1;
            continue;
        }
        let exponent_vector = |factors: &[FSymbolIndex]| -> Vec<BigInt> {
            let mut v = vec![BigInt::zero(); basis.variables.len()];
            for f in factors {
                v[positions[f]] += 1;
            }
            v
        };
        let denominator = exponent_vector(&surviving[0].1);
        let mut terms = Vec::with_capacity(surviving.len());
        for (sign, factors) in &surviving {
            let mut ratio = exponent_vector(factors);
            for (r, d) in ratio.iter_mut().zip(&denominator) {
                *r -= d;
            }
            let coords = solve_coordinates(&basis_rows, &ratio)?.ok_or_else(|| {
                Error::Internal(format!(
                    "pentagon term ratio not in the invariant lattice (instance {instance})"
                ))
            })?;
            terms.push(LocalizedTerm { sign: *sign, coords });
        }
        equations.push(LocalizedEquation { instance, terms });
    }
    Ok(LocalizedSystem {
        equations,
        basis_size: basis.len(),
        dropped_instances: dropped,
    })
}

// ---------------------------------------------------------------------------
// Rationality (Galois) check
// ---------------------------------------------------------------------------

/// Per-monomial rationality verdict.
#[derive(Clone, Debug)]
pub struct RationalityVerdict {
    pub monomial: usize,
    pub rational: bool,
    /// The reconstructed fraction when rational.
    pub reconstruction: Option<BigRational>,
}

#[derive(Clone, Debug)]
pub struct RationalityReport {
    pub all_rational: bool,
    pub verdicts: Vec<RationalityVerdict>,
}

/// A value counts as rational when its imaginary part is below
/// `rational_tol` and continued-fraction reconstruction finds a fraction
/// with denominator at most `max_denominator` within `rational_tol` of the
/// real part. All basis evaluations rational means the solution is gauge
/// equivalent to every Galois conjugate.
pub fn rationality_check(
    eval: &BasisEvaluation,
    max_denominator: &BigInt,
    rational_tol: &BigRational,
) -> RationalityReport {
    let mut verdicts = Vec::with_capacity(eval.values.len());
    let mut all = true;
    for (i, v) in eval.values.iter().enumerate() {
        let approx = limit_denominator(&v.re, max_denominator);
        let rational = v.im.abs() <= *rational_tol && (&v.re - &approx).abs() <= *rational_tol;
        all &= rational;
        verdicts.push(RationalityVerdict {
            monomial: i,
            rational,
            reconstruction: rational.then_some(approx),
        });
    }
    RationalityReport { all_rational: all, verdicts }
}

// ---------------------------------------------------------------------------
// Coverage check
// ---------------------------------------------------------------------------

/// Every nonzero variable must carry a nonzero exponent in some basis
/// monomial. Returns the uncovered variables (empty iff the check passes).
pub fn phi_coverage_check(basis: &InvariantBasis) -> (bool, Vec<FSymbolIndex>) {
    let mut covered = vec![false; basis.variables.len()];
    let positions: BTreeMap<&FSymbolIndex, usize> =
        basis.variables.iter().enumerate().map(|(i, v)| (v, i)).collect();
    for m in &basis.monomials {
        for idx in m.support() {
            if let Some(&p) = positions.get(idx) {
                covered[p] = true;
            }
        }
    }
    let uncovered: Vec<FSymbolIndex> = basis
        .variables
        .iter()
        .zip(&covered)
        .filter(|(_, &c)| !c)
        .map(|(v, _)| *v)
        .collect();
    (uncovered.is_empty(), uncovered)
}

// ---------------------------------------------------------------------------
// Basis file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ExponentDto {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
    k: i64,
}

#[derive(Serialize, Deserialize)]
struct MonomialDto {
    exponents: Vec<ExponentDto>,
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    schema_version: u32,
    ring: String,
    zero_set: Vec<[String; 6]>,
    monomials: Vec<MonomialDto>,
}

pub fn basis_to_json(ring: &BasedRing, basis: &InvariantBasis, ring_name: &str) -> Result<String> {
    let mut monomials = Vec::with_capacity(basis.len());
    for m in &basis.monomials {
        let mut exponents = Vec::new();
        for (idx, k) in m.exponents() {
            let k = i64::try_from(k.clone())
                .map_err(|_| Error::Internal("basis exponent exceeds i64".into()))?;
            exponents.push(ExponentDto {
                a: ring.name(idx.a).into(),
                b: ring.name(idx.b).into(),
                c: ring.name(idx.c).into(),
                d: ring.name(idx.d).into(),
                e: ring.name(idx.e).into(),
                f: ring.name(idx.f).into(),
                k,
            });
        }
        monomials.push(MonomialDto { exponents });
    }
    let file = BasisFile {
        schema_version: 1,
        ring: ring_name.to_string(),
        zero_set: basis
            .zero_set
            .members()
            .map(|z| {
                [
                    ring.name(z.a).into(),
                    ring.name(z.b).into(),
                    ring.name(z.c).into(),
                    ring.name(z.d).into(),
                    ring.name(z.e).into(),
                    ring.name(z.f).into(),
                ]
            })
            .collect(),
        monomials,
    };
    Ok(serde_json::to_string_pretty(&file).expect("basis file serializes"))
}

pub fn basis_from_json(ring: &BasedRing, text: &str) -> Result<InvariantBasis> {
    let file: BasisFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("basis file: {e}")))?;
    let mut zeros = Vec::new();
    for z in &file.zero_set {
        zeros.push(FSymbolIndex::new(
            ring.label_by_name(&z[0])?,
            ring.label_by_name(&z[1])?,
            ring.label_by_name(&z[2])?,
            ring.label_by_name(&z[3])?,
            ring.label_by_name(&z[4])?,
            ring.label_by_name(&z[5])?,
        ));
    }
    let zero_set = ZeroSet::from_members(zeros);
    let phi = f_symbol_set(ring)?;
    let variables: Vec<FSymbolIndex> =
        phi.indices().iter().filter(|idx| !zero_set.contains(idx)).copied().collect();
    let mut monomials = Vec::with_capacity(file.monomials.len());
    for m in &file.monomials {
        let mut exponents = BTreeMap::new();
        for e in &m.exponents {
            let idx = FSymbolIndex::new(
                ring.label_by_name(&e.a)?,
                ring.label_by_name(&e.b)?,
                ring.label_by_name(&e.c)?,
                ring.label_by_name(&e.d)?,
                ring.label_by_name(&e.e)?,
                ring.label_by_name(&e.f)?,
            );
            exponents.insert(idx, BigInt::from(e.k));
        }
        monomials.push(InvariantMonomial::new(exponents));
    }
    Ok(InvariantBasis { monomials, zero_set, variables })
}

/// Evaluation report rows for the JSON report format.
#[derive(Serialize, Deserialize)]
pub struct EvaluationRowDto {
    pub monomial_index: usize,
    pub re: String,
    pub im: String,
}

pub fn evaluation_to_rows(eval: &BasisEvaluation, digits: u32) -> Vec<EvaluationRowDto> {
    eval.values
        .iter()
        .enumerate()
        .map(|(i, v)| EvaluationRowDto {
            monomial_index: i,
            re: format_decimal(&v.re, digits),
            im: format_decimal(&v.im, digits),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::lattice_equal;
    use crate::numeric::pow10;
    use crate::symbols::apply_gauge;

    #[test]
    fn trivial_ring_basis_is_the_single_variable() {
        let ring = fixtures::trivial_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        assert_eq!(basis.len(), 1);
        let m = &basis.monomials[0];
        assert_eq!(m.describe(&ring), "F[1,1,1;1|1,1]");
        let eval = evaluate_basis(&fixtures::trivial_solution(), &basis, &pow10(-9)).unwrap();
        assert_eq!(eval.values, vec![ComplexValue::one()]);
    }

    #[test]
    fn fib_basis_has_twelve_monomials_spanning_the_reference_lattice() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        assert_eq!(basis.len(), 12);
        let reference: Vec<Vec<BigInt>> = fixtures::fib_reference_monomials()
            .iter()
            .map(|m| m.to_coords(&basis.variables).unwrap())
            .collect();
        assert!(lattice_equal(&basis.coordinate_rows(), &reference).unwrap());
        // Kernel property: each basis monomial has trivial total gauge
        // weight, variable by variable on the fusion triples.
        for m in &basis.monomials {
            let mut weights: BTreeMap<_, BigInt> = BTreeMap::new();
            for (idx, k) in m.exponents() {
                for (triple, w) in idx.gauge_triples() {
                    *weights.entry(triple).or_default() += k * BigInt::from(w);
                }
            }
            assert!(weights.values().all(Zero::is_zero));
        }
    }

    #[test]
    fn fib_evaluations_match_the_golden_ratio_branches() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let tol = pow10(-40);

        for (sol, expected_s6) in [
            (fixtures::fib_solution(50), fixtures::golden_ratio_minus(50)),
            (fixtures::yang_lee_solution(50), fixtures::golden_ratio_plus(50)),
        ] {
            let eval = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
            let s6_idx = fixtures::fib_reference_monomials()[5].clone();
            let s6 = evaluate_monomial(&sol, &s6_idx, &pow10(-9)).unwrap();
            let s6 = s6.defined().unwrap().clone();
            assert!(s6.approx_eq(&ComplexValue::from_rational(expected_s6), &tol));
            // s6^2 - s6 - 1 = 0 within the fixture precision.
            let check = s6.mul(&s6).sub(&s6).sub(&ComplexValue::one());
            assert!(check.is_zero_within(&pow10(-40)));
            // All basis values are real on these fixtures.
            for v in &eval.values {
                assert!(v.im.abs() < pow10(-40));
            }
        }
    }

    #[test]
    fn undefined_requires_negative_exponent_on_zero() {
        let ring = fixtures::fib_ring();
        let sol = fixtures::fib_solution(30);
        let idx = *f_symbol_set(&ring).unwrap().indices().last().unwrap();
        let zeroed = sol.with_value(&idx, ComplexValue::zero()).unwrap();

        let inverse = InvariantMonomial::from_powers([(idx, -1)]);
        assert_eq!(
            evaluate_monomial(&zeroed, &inverse, &pow10(-9)).unwrap(),
            MonomialValue::Undefined
        );
        let direct = InvariantMonomial::from_powers([(idx, 2)]);
        assert_eq!(
            evaluate_monomial(&zeroed, &direct, &pow10(-9)).unwrap(),
            MonomialValue::Defined(ComplexValue::zero())
        );
    }

    #[test]
    fn evaluate_basis_rejects_foreign_zero_set() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let sol = fixtures::fib_solution(30);
        let idx = *f_symbol_set(&ring).unwrap().indices().last().unwrap();
        let zeroed = sol.with_value(&idx, ComplexValue::zero()).unwrap();
        assert!(matches!(
            evaluate_basis(&zeroed, &basis, &pow10(-9)),
            Err(Error::ZeroSetMismatch(_))
        ));
    }

    #[test]
    fn basis_evaluations_are_gauge_invariant() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let sol = fixtures::fib_solution(50);
        let reference = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
        for seed in [3, 17, 40] {
            let g = crate::symbols::sample_normalized_gauge(&ring, seed);
            let gauged = apply_gauge(&ring, &sol, &g).unwrap();
            let moved = evaluate_basis(&gauged, &basis, &pow10(-9)).unwrap();
            // Exact cancellation, not merely within tolerance.
            assert_eq!(moved.values, reference.values);
        }
    }

    #[test]
    fn localized_fib_system_holds_for_both_branches_and_rejects_an_impostor() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let system = localize_pentagon(&ring, &ZeroSet::empty(), &basis).unwrap();
        assert!(!system.equations.is_empty());
        assert_eq!(system.dropped_instances, 0);

        let tol = pow10(-9) * BigRational::from_integer(10.into());
        for sol in [fixtures::fib_solution(50), fixtures::yang_lee_solution(50)] {
            let eval = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
            for eq in &system.equations {
                let residual = eq.residual(&eval.values).unwrap();
                assert!(residual.is_zero_within(&tol), "instance {}", eq.instance);
            }
        }

        // Replacing the quadratic-root coordinate with 1/2 must break some
        // localized equation: the system pins the golden ratio equation.
        let sol = fixtures::fib_solution(50);
        let eval = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
        let idx = *f_symbol_set(&ring).unwrap().indices().last().unwrap();
        let position = basis
            .monomials
            .iter()
            .position(|m| m.exponent(&idx) != BigInt::zero())
            .expect("some monomial touches the last variable");
        let mut tampered = eval.values.clone();
        tampered[position] = ComplexValue::from_ratio(1, 2);
        let violated = system
            .equations
            .iter()
            .any(|eq| !eq.residual(&tampered).unwrap().is_zero_within(&tol));
        assert!(violated);
    }

    #[test]
    fn localized_trivial_system_is_trivially_satisfied() {
        let ring = fixtures::trivial_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let system = localize_pentagon(&ring, &ZeroSet::empty(), &basis).unwrap();
        let eval =
            evaluate_basis(&fixtures::trivial_solution(), &basis, &pow10(-9)).unwrap();
        for eq in &system.equations {
            assert!(eq.residual(&eval.values).unwrap().is_zero_within(&pow10(-9)));
        }
    }

    #[test]
    fn localized_z3_system_forces_roots_of_unity() {
        // Each localized equation is ratio = 1 (single right-hand term), and
        // the equation lattice forces a power of every basis monomial to 1.
        let ring = fixtures::z3_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let system = localize_pentagon(&ring, &ZeroSet::empty(), &basis).unwrap();
        assert_eq!(system.equations.len(), 81);
        for eq in &system.equations {
            assert_eq!(eq.terms.len(), 2);
        }
        // Lattice of forced-trivial coordinate vectors.
        let forced: Vec<Vec<BigInt>> = system
            .equations
            .iter()
            .flat_map(|eq| eq.terms.iter().filter(|t| t.coords.iter().any(|c| !c.is_zero())))
            .map(|t| t.coords.clone())
            .collect();
        let n = basis.len();
        let mut orders = Vec::new();
        for k in 0..n {
            let mut unit = vec![BigInt::zero(); n];
            // Smallest positive power of basis monomial k forced to 1.
            let mut order = None;
            for power in 1..=3 {
                unit[k] = BigInt::from(power);
                if crate::lattice::lattice_contains(&forced, &unit).unwrap() {
                    order = Some(power);
                    break;
                }
            }
            orders.push(order.expect("every invariant is a root of unity"));
        }
        // Regression: nontrivial invariants are cube roots of unity.
        assert!(orders.iter().any(|&o| o == 3));
        assert!(orders.iter().all(|&o| o == 1 || o == 3));
        // The cocycle fixtures satisfy the localized system.
        for q in 0..3 {
            let sol = fixtures::z3_solution(q, 50);
            let eval = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
            for eq in &system.equations {
                assert!(eq.residual(&eval.values).unwrap().is_zero_within(&pow10(-30)));
            }
        }
    }

    #[test]
    fn rationality_distinguishes_fixture_branches() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let cfg = crate::Config::default();

        let fib = evaluate_basis(&fixtures::fib_solution(50), &basis, &cfg.zero_tol).unwrap();
        let report = rationality_check(&fib, &cfg.max_denominator, &cfg.rational_tol);
        assert!(!report.all_rational);
        // Only the golden-ratio coordinates are irrational.
        assert!(report.verdicts.iter().filter(|v| !v.rational).count() >= 1);

        let trivial_ring = fixtures::trivial_ring();
        let trivial_basis = invariant_basis(&trivial_ring, &ZeroSet::empty()).unwrap();
        let trivial =
            evaluate_basis(&fixtures::trivial_solution(), &trivial_basis, &cfg.zero_tol).unwrap();
        assert!(rationality_check(&trivial, &cfg.max_denominator, &cfg.rational_tol).all_rational);
    }

    #[test]
    fn rationality_accepts_simple_fractions() {
        let cfg = crate::Config::default();
        let eval = BasisEvaluation {
            solution: "synthetic".into(),
            values: vec![
                ComplexValue::from_ratio(2, 3),
                ComplexValue::from_ratio(-2, 3),
                ComplexValue::from_ratio(1, 6),
                ComplexValue::from_ratio(-1, 6),
            ],
        };
        let report = rationality_check(&eval, &cfg.max_denominator, &cfg.rational_tol);
        assert!(report.all_rational);
        assert_eq!(
            report.verdicts[0].reconstruction.as_ref().unwrap(),
            &BigRational::new(BigInt::from(2), BigInt::from(3))
        );
    }

    #[test]
    fn coverage_holds_for_fib_and_fails_for_truncation() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let (ok, uncovered) = phi_coverage_check(&basis);
        assert!(ok && uncovered.is_empty());

        // Drop every monomial touching the first variable; that variable
        // must be reported.
        let first = basis.variables[0];
        let truncated = InvariantBasis {
            monomials: basis
                .monomials
                .iter()
                .filter(|m| m.exponent(&first).is_zero())
                .cloned()
                .collect(),
            zero_set: basis.zero_set.clone(),
            variables: basis.variables.clone(),
        };
        let (ok, uncovered) = phi_coverage_check(&truncated);
        assert!(!ok);
        assert_eq!(uncovered, vec![first]);
    }

    #[test]
    fn equal_zero_sets_share_a_basis_and_defined_evaluations() {
        // Both Fibonacci branches have empty zero set: one basis serves both.
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        for sol in [fixtures::fib_solution(50), fixtures::yang_lee_solution(50)] {
            let eval = evaluate_basis(&sol, &basis, &pow10(-9)).unwrap();
            assert_eq!(eval.values.len(), basis.len());
        }
    }

    #[test]
    fn basis_json_round_trip() {
        let ring = fixtures::fib_ring();
        let basis = invariant_basis(&ring, &ZeroSet::empty()).unwrap();
        let text = basis_to_json(&ring, &basis, "fib").unwrap();
        let back = basis_from_json(&ring, &text).unwrap();
        assert_eq!(back.monomials, basis.monomials);
        assert_eq!(back.zero_set, basis.zero_set);
        assert_eq!(back.variables, basis.variables);
    }

    #[test]
    fn monomial_describe_orders_positive_first() {
        let ring = fixtures::fib_ring();
        let phi = f_symbol_set(&ring).unwrap();
        let m = InvariantMonomial::from_powers([
            (phi.indices()[6], 1),
            (phi.indices()[1], -1),
            (phi.indices()[5], -1),
        ]);
        let s = m.describe(&ring);
        assert!(s.starts_with("F[tau,1,tau;1|tau,tau]"), "{s}");
        assert!(s.contains("^-1"));
    }
}
