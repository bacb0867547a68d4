//! F-symbol variables, pentagon and unit constraints, solutions, and the
//! gauge and automorphism actions on them.
//!
//! For a multiplicity-free ring every associativity constraint entry is a
//! scalar indexed by an admissible sextuple (a, b, c, d, e, f): the value
//! relates the two decompositions of a⊗b⊗c into d, with e the channel of a⊗b
//! and f the channel of b⊗c.

use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::numeric::{format_decimal, parse_decimal, ComplexValue};
use crate::ring::{gamma_set, Automorphism, BasedRing, FusionTriple, Label};

/// Index of one F-symbol variable: the sextuple (a, b, c, d, e, f) with
/// e a channel of a⊗b and f a channel of b⊗c. The derived ordering is
/// lexicographic in basis position, the canonical variable order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FSymbolIndex {
    pub a: Label,
    pub b: Label,
    pub c: Label,
    pub d: Label,
    pub e: Label,
    pub f: Label,
}

impl FSymbolIndex {
    pub fn new(a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> Self {
        FSymbolIndex { a, b, c, d, e, f }
    }

    /// All four fusion triples behind this variable exist in the ring.
    pub fn is_admissible(&self, ring: &BasedRing) -> bool {
        ring.admissible(self.a, self.b, self.e)
            && ring.admissible(self.e, self.c, self.d)
            && ring.admissible(self.b, self.c, self.f)
            && ring.admissible(self.a, self.f, self.d)
    }

    pub fn name(&self, ring: &BasedRing) -> String {
        format!(
            "F[{},{},{};{}|{},{}]",
            ring.name(self.a),
            ring.name(self.b),
            ring.name(self.c),
            ring.name(self.d),
            ring.name(self.e),
            ring.name(self.f)
        )
    }

    /// The four fusion triples with their gauge weights (+1, +1, -1, -1):
    /// (a,b,e), (e,c,d) over (b,c,f), (a,f,d).
    pub fn gauge_triples(&self) -> [(FusionTriple, i64); 4] {
        [
            (FusionTriple::new(self.a, self.b, self.e), 1),
            (FusionTriple::new(self.e, self.c, self.d), 1),
            (FusionTriple::new(self.b, self.c, self.f), -1),
            (FusionTriple::new(self.a, self.f, self.d), -1),
        ]
    }
}

/// The ordered set of F-symbol variables with position lookup.
#[derive(Clone, Debug)]
pub struct FSymbolSet {
    list: Vec<FSymbolIndex>,
    positions: BTreeMap<FSymbolIndex, usize>,
}

impl FSymbolSet {
    pub fn indices(&self) -> &[FSymbolIndex] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn position(&self, idx: &FSymbolIndex) -> Option<usize> {
        self.positions.get(idx).copied()
    }

    pub fn contains(&self, idx: &FSymbolIndex) -> bool {
        self.positions.contains_key(idx)
    }
}

/// Enumerates all admissible sextuples in canonical lexicographic order.
/// Errs on rings that are not multiplicity free.
pub fn f_symbol_set(ring: &BasedRing) -> Result<FSymbolSet> {
    ring.require_multiplicity_free()?;
    let mut list = Vec::new();
    for a in ring.labels() {
        for b in ring.labels() {
            for c in ring.labels() {
                for &e in ring.product_channels(a, b) {
                    for &d in ring.product_channels(e, c) {
                        for &f in ring.product_channels(b, c) {
                            if ring.admissible(a, f, d) {
                                list.push(FSymbolIndex::new(a, b, c, d, e, f));
                            }
                        }
                    }
                }
            }
        }
    }
    list.sort();
    let positions = list.iter().enumerate().map(|(i, idx)| (*idx, i)).collect();
    Ok(FSymbolSet { list, positions })
}

// ---------------------------------------------------------------------------
// Pentagon equations
// ---------------------------------------------------------------------------

/// One cubic term of a pentagon right-hand side, tagged by the summed
/// internal channel g of b⊗c.
#[derive(Clone, Debug)]
pub struct PentagonTerm {
    pub bc_channel: Label,
    pub factors: [FSymbolIndex; 3],
}

/// One pentagon equation instance. Outer data: the four factors a, b, c, d,
/// the total e, and the internal channels f = ab, i = (ab)c, h = cd,
/// j = b(cd). The left side is the single quadratic term when the
/// intermediate channel f⊗h → e exists, and empty otherwise (the equation
/// then reads 0 = rhs, still a real constraint).
#[derive(Clone, Debug)]
pub struct PentagonEquation {
    pub a: Label,
    pub b: Label,
    pub c: Label,
    pub d: Label,
    pub total: Label,
    pub ab_channel: Label,
    pub abc_channel: Label,
    pub cd_channel: Label,
    pub bcd_channel: Label,
    pub lhs: Option<[FSymbolIndex; 2]>,
    pub rhs: Vec<PentagonTerm>,
}

impl PentagonEquation {
    /// All terms with a sign: +1 for the left side, -1 for the right, so the
    /// equation reads "sum of signed terms = 0".
    pub fn signed_terms(&self) -> Vec<(i8, Vec<FSymbolIndex>)> {
        let mut terms = Vec::with_capacity(1 + self.rhs.len());
        if let Some(pair) = &self.lhs {
            terms.push((1, pair.to_vec()));
        }
        for term in &self.rhs {
            terms.push((-1, term.factors.to_vec()));
        }
        terms
    }

    pub fn describe(&self, ring: &BasedRing) -> String {
        format!(
            "pentagon[{},{},{},{} -> {}; ab={}, abc={}, cd={}, bcd={}]",
            ring.name(self.a),
            ring.name(self.b),
            ring.name(self.c),
            ring.name(self.d),
            ring.name(self.total),
            ring.name(self.ab_channel),
            ring.name(self.abc_channel),
            ring.name(self.cd_channel),
            ring.name(self.bcd_channel),
        )
    }
}

/// Enumerates every pentagon instance with at least one term, in a fixed
/// deterministic order. For each admissible row pair (f, i) and column pair
/// (h, j) of the pentagon between (((ab)c)d → e) and (a(b(cd)) → e):
///
/// ```text
/// F[f,c,d;e|i,h] * F[a,b,h;e|f,j]
///     = sum over g: F[a,b,c;i|f,g] * F[a,g,d;e|i,j] * F[b,c,d;j|g,h]
/// ```
pub fn pentagon_instances(ring: &BasedRing) -> Result<Vec<PentagonEquation>> {
    ring.require_multiplicity_free()?;
    let mut instances = Vec::new();
    for a in ring.labels() {
        for b in ring.labels() {
            for c in ring.labels() {
                for d in ring.labels() {
                    for &f in ring.product_channels(a, b) {
                        for &i in ring.product_channels(f, c) {
                            for &e in ring.product_channels(i, d) {
                                for &h in ring.product_channels(c, d) {
                                    for &j in ring.product_channels(b, h) {
                                        if !ring.admissible(a, j, e) {
                                            continue;
                                        }
                                        let lhs = ring.admissible(f, h, e).then(|| {
                                            [
                                                FSymbolIndex::new(f, c, d, e, i, h),
                                                FSymbolIndex::new(a, b, h, e, f, j),
                                            ]
                                        });
                                        let mut rhs = Vec::new();
                                        for &g in ring.product_channels(b, c) {
                                            if ring.admissible(a, g, i)
                                                && ring.admissible(g, d, j)
                                            {
                                                rhs.push(PentagonTerm {
                                                    bc_channel: g,
                                                    factors: [
                                                        FSymbolIndex::new(a, b, c, i, f, g),
                                                        FSymbolIndex::new(a, g, d, e, i, j),
                                                        FSymbolIndex::new(b, c, d, j, g, h),
                                                    ],
                                                });
                                            }
                                        }
                                        if lhs.is_none() && rhs.is_empty() {
                                            continue;
                                        }
                                        instances.push(PentagonEquation {
                                            a,
                                            b,
                                            c,
                                            d,
                                            total: e,
                                            ab_channel: f,
                                            abc_channel: i,
                                            cd_channel: h,
                                            bcd_channel: j,
                                            lhs,
                                            rhs,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(instances)
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

/// An assignment of field values to every F-symbol variable of a ring.
#[derive(Clone, Debug)]
pub struct Solution {
    pub name: String,
    pub provenance: String,
    values: BTreeMap<FSymbolIndex, ComplexValue>,
}

impl Solution {
    /// Builds a solution, requiring the domain to be exactly the variable
    /// set of `ring` (explicit zeros required, extra indices rejected).
    pub fn new(
        ring: &BasedRing,
        name: impl Into<String>,
        provenance: impl Into<String>,
        values: BTreeMap<FSymbolIndex, ComplexValue>,
    ) -> Result<Self> {
        let phi = f_symbol_set(ring)?;
        for idx in values.keys() {
            if !phi.contains(idx) {
                return Err(Error::DomainMismatch(format!(
                    "value given for inadmissible index {}",
                    idx.name(ring)
                )));
            }
        }
        if values.len() != phi.len() {
            let missing = phi
                .indices()
                .iter()
                .find(|idx| !values.contains_key(idx))
                .map(|idx| idx.name(ring))
                .unwrap_or_default();
            return Err(Error::DomainMismatch(format!(
                "expected {} values, got {} (missing {missing})",
                phi.len(),
                values.len()
            )));
        }
        Ok(Solution { name: name.into(), provenance: provenance.into(), values })
    }

    pub fn value(&self, idx: &FSymbolIndex) -> Option<&ComplexValue> {
        self.values.get(idx)
    }

    pub fn values(&self) -> impl Iterator<Item = (&FSymbolIndex, &ComplexValue)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Copy with one value replaced (for perturbation tests). Errs if the
    /// index is not in the domain.
    pub fn with_value(&self, idx: &FSymbolIndex, value: ComplexValue) -> Result<Self> {
        let mut clone = self.clone();
        match clone.values.get_mut(idx) {
            Some(slot) => {
                *slot = value;
                Ok(clone)
            }
            None => Err(Error::DomainMismatch("index not in solution domain".into())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SolutionValueDto {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    ring: String,
    name: String,
    #[serde(default)]
    provenance: String,
    values: Vec<SolutionValueDto>,
}

/// Parses the JSON solution format. `re`/`im` are decimal strings (`p/q`
/// also accepted) parsed exactly.
pub fn solution_from_json(ring: &BasedRing, text: &str) -> Result<Solution> {
    let file: SolutionFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("solution file: {e}")))?;
    let mut values = BTreeMap::new();
    for (i, dto) in file.values.iter().enumerate() {
        let idx = FSymbolIndex::new(
            ring.label_by_name(&dto.a)?,
            ring.label_by_name(&dto.b)?,
            ring.label_by_name(&dto.c)?,
            ring.label_by_name(&dto.d)?,
            ring.label_by_name(&dto.e)?,
            ring.label_by_name(&dto.f)?,
        );
        let value = ComplexValue::new(parse_decimal(&dto.re)?, parse_decimal(&dto.im)?);
        if values.insert(idx, value).is_some() {
            return Err(Error::Parse(format!("solution value #{} duplicates an index", i + 1)));
        }
    }
    Solution::new(ring, file.name, file.provenance, values)
}

/// Serializes a solution with `digits` significant digits per component.
pub fn solution_to_json(ring: &BasedRing, sol: &Solution, digits: u32) -> String {
    let file = SolutionFile {
        ring: "inline".into(),
        name: sol.name.clone(),
        provenance: sol.provenance.clone(),
        values: sol
            .values()
            .map(|(idx, v)| SolutionValueDto {
                a: ring.name(idx.a).into(),
                b: ring.name(idx.b).into(),
                c: ring.name(idx.c).into(),
                d: ring.name(idx.d).into(),
                e: ring.name(idx.e).into(),
                f: ring.name(idx.f).into(),
                re: format_decimal(&v.re, digits),
                im: format_decimal(&v.im, digits),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("solution file serializes")
}

// ---------------------------------------------------------------------------
// Zero sets
// ---------------------------------------------------------------------------

/// The set of variables a solution sends (numerically) to zero. Gauge
/// transformations preserve it exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ZeroSet {
    members: BTreeSet<FSymbolIndex>,
}

impl ZeroSet {
    pub fn empty() -> Self {
        ZeroSet::default()
    }

    pub fn from_members(members: impl IntoIterator<Item = FSymbolIndex>) -> Self {
        ZeroSet { members: members.into_iter().collect() }
    }

    pub fn members(&self) -> impl Iterator<Item = &FSymbolIndex> {
        self.members.iter()
    }

    pub fn contains(&self, idx: &FSymbolIndex) -> bool {
        self.members.contains(idx)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// members = { phi : |F(phi)| < zero_tol }.
pub fn zero_set(sol: &Solution, zero_tol: &BigRational) -> ZeroSet {
    ZeroSet {
        members: sol
            .values()
            .filter(|(_, v)| v.is_zero_within(zero_tol))
            .map(|(idx, _)| *idx)
            .collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct IndexDto {
    a: String,
    b: String,
    c: String,
    d: String,
    e: String,
    f: String,
}

#[derive(Serialize, Deserialize)]
struct ZeroSetFile {
    members: Vec<IndexDto>,
}

pub fn zero_set_from_json(ring: &BasedRing, text: &str) -> Result<ZeroSet> {
    let file: ZeroSetFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("zero set file: {e}")))?;
    let mut members = BTreeSet::new();
    for dto in &file.members {
        members.insert(FSymbolIndex::new(
            ring.label_by_name(&dto.a)?,
            ring.label_by_name(&dto.b)?,
            ring.label_by_name(&dto.c)?,
            ring.label_by_name(&dto.d)?,
            ring.label_by_name(&dto.e)?,
            ring.label_by_name(&dto.f)?,
        ));
    }
    Ok(ZeroSet { members })
}

pub fn zero_set_to_json(ring: &BasedRing, zeros: &ZeroSet) -> String {
    let file = ZeroSetFile {
        members: zeros
            .members()
            .map(|idx| IndexDto {
                a: ring.name(idx.a).into(),
                b: ring.name(idx.b).into(),
                c: ring.name(idx.c).into(),
                d: ring.name(idx.d).into(),
                e: ring.name(idx.e).into(),
                f: ring.name(idx.f).into(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("zero set file serializes")
}

// ---------------------------------------------------------------------------
// Gauge action
// ---------------------------------------------------------------------------

/// A nonzero scalar per fusion triple.
#[derive(Clone, Debug)]
pub struct GaugeVector {
    values: BTreeMap<FusionTriple, ComplexValue>,
}

impl GaugeVector {
    /// Requires a value for every fusion triple of `ring`, all exactly
    /// nonzero.
    pub fn new(ring: &BasedRing, values: BTreeMap<FusionTriple, ComplexValue>) -> Result<Self> {
        let gamma = gamma_set(ring);
        for t in gamma.triples() {
            match values.get(t) {
                None => {
                    return Err(Error::DomainMismatch(format!(
                        "gauge vector missing entry at {}",
                        ring.triple_name(t)
                    )))
                }
                Some(v) if v.abs_sq() == BigRational::from_integer(0.into()) => {
                    return Err(Error::ZeroGaugeEntry(ring.triple_name(t)))
                }
                Some(_) => {}
            }
        }
        if values.len() != gamma.len() {
            return Err(Error::DomainMismatch("gauge vector has extra entries".into()));
        }
        Ok(GaugeVector { values })
    }

    pub fn identity(ring: &BasedRing) -> Self {
        GaugeVector {
            values: gamma_set(ring)
                .triples()
                .iter()
                .map(|t| (*t, ComplexValue::one()))
                .collect(),
        }
    }

    pub fn value(&self, t: &FusionTriple) -> &ComplexValue {
        &self.values[t]
    }

    /// Entries at (a, 1, a) and (1, b, b) are exactly 1, so the unit
    /// constraints survive the gauge action.
    pub fn is_normalized(&self, ring: &BasedRing) -> bool {
        self.values.iter().all(|(t, v)| {
            (t.a != ring.unit() && t.b != ring.unit()) || v.is_one_exact()
        })
    }

    /// Pointwise product (the gauge group operation).
    pub fn product(&self, other: &Self) -> Self {
        GaugeVector {
            values: self
                .values
                .iter()
                .map(|(t, v)| (*t, v.mul(other.value(t))))
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FusionTriple, &ComplexValue)> {
        self.values.iter()
    }
}

/// The gauge action: each variable is rescaled by
/// g(a,b,e) * g(e,c,d) / (g(b,c,f) * g(a,f,d)). Zero sets are preserved
/// exactly because the factor is never zero.
pub fn apply_gauge(ring: &BasedRing, sol: &Solution, gauge: &GaugeVector) -> Result<Solution> {
    let mut values = BTreeMap::new();
    for (idx, v) in sol.values() {
        let mut scaled = v.clone();
        for (triple, weight) in idx.gauge_triples() {
            let entry = gauge.value(&triple);
            scaled = match weight {
                1 => scaled.mul(entry),
                _ => scaled
                    .div(entry)
                    .ok_or_else(|| Error::ZeroGaugeEntry(ring.triple_name(&triple)))?,
            };
        }
        values.insert(*idx, scaled);
    }
    Solution::new(ring, format!("{}+gauge", sol.name), sol.provenance.clone(), values)
}

/// Deterministic pseudorandom normalized gauge: entries at unit-bearing
/// triples are 1; all others are ±p/q with p, q uniform in [1, 100].
pub fn sample_normalized_gauge(ring: &BasedRing, seed: u64) -> GaugeVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = BTreeMap::new();
    for t in gamma_set(ring).triples() {
        let value = if t.a == ring.unit() || t.b == ring.unit() {
            ComplexValue::one()
        } else {
            let p: i64 = rng.random_range(1..=100);
            let q: i64 = rng.random_range(1..=100);
            let sign = if rng.random::<bool>() { 1 } else { -1 };
            ComplexValue::from_ratio(sign * p, q)
        };
        values.insert(*t, value);
    }
    GaugeVector { values }
}

// ---------------------------------------------------------------------------
// Automorphism action
// ---------------------------------------------------------------------------

fn ensure_automorphism(ring: &BasedRing, rho: &Automorphism) -> Result<()> {
    // Re-validate against this ring; an Automorphism built for another ring
    // must not silently act here.
    let images: Vec<Label> = ring.labels().map(|x| rho.apply(x)).collect();
    Automorphism::new(ring, images)?;
    Ok(())
}

/// Componentwise relabeling of a variable index.
pub fn apply_automorphism_index(rho: &Automorphism, idx: &FSymbolIndex) -> FSymbolIndex {
    FSymbolIndex::new(
        rho.apply(idx.a),
        rho.apply(idx.b),
        rho.apply(idx.c),
        rho.apply(idx.d),
        rho.apply(idx.e),
        rho.apply(idx.f),
    )
}

pub fn apply_automorphism_zero_set(rho: &Automorphism, zeros: &ZeroSet) -> ZeroSet {
    ZeroSet {
        members: zeros.members().map(|idx| apply_automorphism_index(rho, idx)).collect(),
    }
}

/// The relabeled solution rho . F, with (rho . F)(rho . phi) = F(phi).
pub fn apply_automorphism_solution(
    ring: &BasedRing,
    sol: &Solution,
    rho: &Automorphism,
) -> Result<Solution> {
    ensure_automorphism(ring, rho)?;
    let mut values = BTreeMap::new();
    for (idx, v) in sol.values() {
        values.insert(apply_automorphism_index(rho, idx), v.clone());
    }
    Solution::new(ring, format!("{}+perm", sol.name), sol.provenance.clone(), values)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// One pentagon instance whose residual exceeded the tolerance.
#[derive(Clone, Debug)]
pub struct PentagonViolation {
    pub instance: usize,
    pub description: String,
    /// |lhs - rhs|^2, exact.
    pub residual_sq: BigRational,
}

/// Everything `verify_solution` found wrong. Clean iff all lists are empty.
#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    /// Middle-unit variables whose value is not 1 within tol.
    pub unit_violations: Vec<(FSymbolIndex, ComplexValue)>,
    /// Variables F[a,a*,a;a|1,1] with |value| < tol.
    pub nonzero_violations: Vec<FSymbolIndex>,
    pub pentagon_violations: Vec<PentagonViolation>,
    /// Blocks (a,b,c,d) whose F-matrix determinant has modulus < tol.
    pub singular_blocks: Vec<([Label; 4], BigRational)>,
    pub pentagon_instances_checked: usize,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.unit_violations.is_empty()
            && self.nonzero_violations.is_empty()
            && self.pentagon_violations.is_empty()
            && self.singular_blocks.is_empty()
    }
}

fn term_value(sol: &Solution, factors: &[FSymbolIndex]) -> ComplexValue {
    let mut out = ComplexValue::one();
    for idx in factors {
        out = out.mul(sol.value(idx).expect("domain checked at construction"));
    }
    out
}

/// Exact determinant of a small complex matrix by Gaussian elimination.
fn det_complex(mut m: Vec<Vec<ComplexValue>>) -> ComplexValue {
    let n = m.len();
    let mut det = ComplexValue::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].abs_sq().eq(&BigRational::from_integer(0.into()))) {
            Some(p) => p,
            None => return ComplexValue::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = det.neg();
        }
        let diag = m[col][col].clone();
        det = det.mul(&diag);
        for r in col + 1..n {
            let factor = m[r][col].div(&diag).expect("pivot is nonzero");
            for k in col..n {
                let sub = factor.mul(&m[col][k]);
                m[r][k] = m[r][k].sub(&sub);
            }
        }
    }
    det
}

/// Checks the unit constraints, the nonzero constraint on F[a,a*,a;a|1,1],
/// every pentagon instance at absolute tolerance `tol`, and blockwise
/// invertibility of the F-matrices.
pub fn verify_solution(
    ring: &BasedRing,
    sol: &Solution,
    tol: &BigRational,
) -> Result<VerificationReport> {
    let phi = f_symbol_set(ring)?;
    let unit = ring.unit();
    let mut report = VerificationReport::default();

    // Unit constraints: every middle-unit variable must be 1.
    let one = ComplexValue::one();
    for idx in phi.indices() {
        if idx.b == unit && !sol.value(idx).unwrap().approx_eq(&one, tol) {
            report.unit_violations.push((*idx, sol.value(idx).unwrap().clone()));
        }
    }

    // Nonzero constraint at F[a,a*,a;a|1,1].
    for a in ring.labels() {
        let idx = FSymbolIndex::new(a, ring.dual(a), a, a, unit, unit);
        if idx.is_admissible(ring) && sol.value(&idx).unwrap().is_zero_within(tol) {
            report.nonzero_violations.push(idx);
        }
    }

    // Pentagon residuals.
    let instances = pentagon_instances(ring)?;
    report.pentagon_instances_checked = instances.len();
    for (i, eq) in instances.iter().enumerate() {
        let mut residual = ComplexValue::zero();
        for (sign, factors) in eq.signed_terms() {
            let v = term_value(sol, &factors);
            residual = if sign > 0 { residual.add(&v) } else { residual.sub(&v) };
        }
        let residual_sq = residual.abs_sq();
        if residual_sq > tol * tol {
            report.pentagon_violations.push(PentagonViolation {
                instance: i,
                description: eq.describe(ring),
                residual_sq,
            });
        }
    }

    // Blockwise invertibility.
    for a in ring.labels() {
        for b in ring.labels() {
            for c in ring.labels() {
                for d in ring.labels() {
                    let rows: Vec<Label> = ring
                        .product_channels(a, b)
                        .iter()
                        .copied()
                        .filter(|&e| ring.admissible(e, c, d))
                        .collect();
                    if rows.is_empty() {
                        continue;
                    }
                    let cols: Vec<Label> = ring
                        .product_channels(b, c)
                        .iter()
                        .copied()
                        .filter(|&f| ring.admissible(a, f, d))
                        .collect();
                    let m: Vec<Vec<ComplexValue>> = rows
                        .iter()
                        .map(|&e| {
                            cols.iter()
                                .map(|&f| {
                                    sol.value(&FSymbolIndex::new(a, b, c, d, e, f))
                                        .unwrap()
                                        .clone()
                                })
                                .collect()
                        })
                        .collect();
                    let det = det_complex(m);
                    if det.is_zero_within(tol) {
                        report.singular_blocks.push(([a, b, c, d], det.abs_sq()));
                    }
                }
            }
        }
    }

    Ok(report)
}
