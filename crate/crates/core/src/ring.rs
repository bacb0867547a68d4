//! Based rings: basis labels, structure constants, duality, validation,
//! fusion triples and the automorphism group.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A basis element, identified by its 0-based position in the declared basis
/// order. Position order is the canonical total order everywhere in the
/// pipeline.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub usize);

/// An ordered triple (a, b, c) with nonzero structure constant, i.e. c occurs
/// in the product ab. These index the gauge degrees of freedom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FusionTriple {
    pub a: Label,
    pub b: Label,
    pub c: Label,
}

impl FusionTriple {
    pub fn new(a: Label, b: Label, c: Label) -> Self {
        FusionTriple { a, b, c }
    }
}

/// A based ring: ordered basis with unit, duality bijection and nonnegative
/// integer structure constants `N(a, b, c)` (sparse; absent means 0).
///
/// Construction does not check the ring axioms — see [`validate_ring`].
#[derive(Clone, Debug)]
pub struct BasedRing {
    names: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    n: BTreeMap<(Label, Label, Label), BigUint>,
    channels: BTreeMap<(Label, Label), Vec<Label>>,
}

impl BasedRing {
    /// Builds a ring from raw parts. `fusion` lists triples with nonzero N;
    /// zero entries are dropped, duplicate triples are an error.
    pub fn new(
        names: Vec<String>,
        unit: Label,
        dual: Vec<Label>,
        fusion: Vec<(Label, Label, Label, BigUint)>,
    ) -> Result<Self> {
        let size = names.len();
        if unit.0 >= size || dual.len() != size || dual.iter().any(|d| d.0 >= size) {
            return Err(Error::Internal("label index out of range".into()));
        }
        let mut n = BTreeMap::new();
        let mut channels: BTreeMap<(Label, Label), Vec<Label>> = BTreeMap::new();
        for (a, b, c, value) in fusion {
            if a.0 >= size || b.0 >= size || c.0 >= size {
                return Err(Error::Internal("label index out of range".into()));
            }
            if value.is_zero() {
                continue;
            }
            if n.insert((a, b, c), value).is_some() {
                return Err(Error::Parse(format!(
                    "duplicate fusion triple ({}, {}, {})",
                    names[a.0], names[b.0], names[c.0]
                )));
            }
            channels.entry((a, b)).or_default().push(c);
        }
        for v in channels.values_mut() {
            v.sort();
        }
        Ok(BasedRing { names, unit, dual, n, channels })
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> {
        (0..self.names.len()).map(Label)
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, x: Label) -> Label {
        self.dual[x.0]
    }

    pub fn name(&self, x: Label) -> &str {
        &self.names[x.0]
    }

    pub fn label_by_name(&self, name: &str) -> Result<Label> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Label)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    /// N(a, b, c); zero when the triple is not stored.
    pub fn n(&self, a: Label, b: Label, c: Label) -> BigUint {
        self.n.get(&(a, b, c)).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Whether N(a, b, c) is nonzero, i.e. (a, b, c) is a fusion triple.
    pub fn admissible(&self, a: Label, b: Label, c: Label) -> bool {
        self.n.contains_key(&(a, b, c))
    }

    /// The labels c with N(a, b, c) != 0, in canonical order.
    pub fn product_channels(&self, a: Label, b: Label) -> &[Label] {
        self.channels.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.n.values().all(|v| v.is_one())
    }

    /// Errs unless every stored structure constant equals 1.
    pub fn require_multiplicity_free(&self) -> Result<()> {
        for ((a, b, c), v) in &self.n {
            if !v.is_one() {
                return Err(Error::NotMultiplicityFree(
                    format!("{}, {}, {}", self.name(*a), self.name(*b), self.name(*c)),
                    v.to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn triple_name(&self, t: &FusionTriple) -> String {
        format!("({}, {}, {})", self.name(t.a), self.name(t.b), self.name(t.c))
    }
}

// ---------------------------------------------------------------------------
// Ring file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RingFile {
    basis: Vec<String>,
    unit: String,
    dual: BTreeMap<String, String>,
    fusion: Vec<serde_json::Value>,
}

/// Parses the JSON ring format:
/// `{"basis": [..], "unit": "..", "dual": {..}, "fusion": [["a","b","c",N], ..]}`
/// where the fourth entry defaults to 1 when omitted. Omitted triples mean
/// N = 0. Ring axioms are *not* checked here; see [`validate_ring`].
pub fn parse_ring(text: &str) -> Result<BasedRing> {
    let file: RingFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("ring file: {e}")))?;

    let mut seen = BTreeMap::new();
    for (i, name) in file.basis.iter().enumerate() {
        if seen.insert(name.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(name.clone()));
        }
    }
    let lookup = |name: &str| -> Result<Label> {
        seen.get(name).map(|&i| Label(i)).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    };

    let unit = lookup(&file.unit)?;
    let mut dual = Vec::with_capacity(file.basis.len());
    for name in &file.basis {
        let image = file.dual.get(name).ok_or_else(|| {
            Error::Parse(format!("dual map is missing an entry for label `{name}`"))
        })?;
        dual.push(lookup(image)?);
    }

    let mut fusion = Vec::with_capacity(file.fusion.len());
    for (i, entry) in file.fusion.iter().enumerate() {
        let err = |msg: &str| Error::Parse(format!("fusion entry #{}: {msg}", i + 1));
        let arr = entry.as_array().ok_or_else(|| err("expected an array"))?;
        if arr.len() != 3 && arr.len() != 4 {
            return Err(err("expected 3 or 4 elements"));
        }
        let mut labels = [Label(0); 3];
        for (j, slot) in labels.iter_mut().enumerate() {
            let name = arr[j].as_str().ok_or_else(|| err("labels must be strings"))?;
            *slot = lookup(name)?;
        }
        let value = if arr.len() == 4 {
            match &arr[3] {
                serde_json::Value::Number(n) => {
                    let u = n.as_u64().ok_or_else(|| err("N must be a nonnegative integer"))?;
                    BigUint::from(u)
                }
                serde_json::Value::String(s) => s
                    .parse::<BigUint>()
                    .map_err(|_| err("N must be a nonnegative integer"))?,
                _ => return Err(err("N must be a number or digit string")),
            }
        } else {
            BigUint::one()
        };
        fusion.push((labels[0], labels[1], labels[2], value));
    }

    BasedRing::new(file.basis, unit, dual, fusion)
}

/// Serializes a ring back to the JSON file format.
pub fn ring_to_json(ring: &BasedRing) -> String {
    let file = RingFile {
        basis: ring.names.clone(),
        unit: ring.name(ring.unit).to_string(),
        dual: ring
            .labels()
            .map(|x| (ring.name(x).to_string(), ring.name(ring.dual(x)).to_string()))
            .collect(),
        fusion: ring
            .n
            .iter()
            .map(|((a, b, c), v)| {
                let mut arr = vec![
                    serde_json::Value::String(ring.name(*a).into()),
                    serde_json::Value::String(ring.name(*b).into()),
                    serde_json::Value::String(ring.name(*c).into()),
                ];
                if !v.is_one() {
                    arr.push(serde_json::Value::String(v.to_string()));
                }
                serde_json::Value::Array(arr)
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("ring file serializes")
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// One violated ring axiom with the witnessing labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// dual(dual(x)) != x, or dual(unit) != unit.
    DualNotInvolution { x: Label },
    /// N(unit, x, y) or N(x, unit, y) differs from the Kronecker delta.
    UnitAxiom { x: Label, y: Label },
    /// The two associativity contractions disagree at (x, y, z, w).
    Associativity { x: Label, y: Label, z: Label, w: Label, lhs: BigUint, rhs: BigUint },
    /// N(x, y, unit) != delta_{y, dual(x)}.
    DualityCompat { x: Label, y: Label },
    /// N(x, y, z) != N(dual(y), dual(x), dual(z)) — only with the extended
    /// check enabled.
    DualSymmetry { x: Label, y: Label, z: Label },
}

/// Validation output: all violations with witnesses, plus whether the ring is
/// multiplicity free. Clean iff `violations` is empty.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub multiplicity_free: bool,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ValidateOptions {
    /// Also check N(x, y, z) = N(y*, x*, z*), the anti-involution transported
    /// to the structure constants. Off by default; the core axioms below
    /// already pin down everything the pipeline relies on.
    pub check_dual_symmetry: bool,
}

/// Checks every ring axiom and reports violations instead of erroring.
pub fn validate_ring(ring: &BasedRing) -> ValidationReport {
    validate_ring_with(ring, ValidateOptions::default())
}

pub fn validate_ring_with(ring: &BasedRing, options: ValidateOptions) -> ValidationReport {
    let mut violations = Vec::new();
    let unit = ring.unit();

    if ring.dual(unit) != unit {
        violations.push(Violation::DualNotInvolution { x: unit });
    }
    for x in ring.labels() {
        if ring.dual(ring.dual(x)) != x {
            violations.push(Violation::DualNotInvolution { x });
        }
    }

    for x in ring.labels() {
        for y in ring.labels() {
            let delta = if x == y { BigUint::one() } else { BigUint::zero() };
            if ring.n(unit, x, y) != delta || ring.n(x, unit, y) != delta {
                violations.push(Violation::UnitAxiom { x, y });
            }
        }
    }

    for x in ring.labels() {
        for y in ring.labels() {
            for z in ring.labels() {
                for w in ring.labels() {
                    let lhs: BigUint = ring
                        .product_channels(x, y)
                        .iter()
                        .map(|&u| ring.n(x, y, u) * ring.n(u, z, w))
                        .sum();
                    let rhs: BigUint = ring
                        .product_channels(y, z)
                        .iter()
                        .map(|&v| ring.n(y, z, v) * ring.n(x, v, w))
                        .sum();
                    if lhs != rhs {
                        violations.push(Violation::Associativity { x, y, z, w, lhs, rhs });
                    }
                }
            }
        }
    }

    for x in ring.labels() {
        for y in ring.labels() {
            let delta = if y == ring.dual(x) { BigUint::one() } else { BigUint::zero() };
            if ring.n(x, y, unit) != delta {
                violations.push(Violation::DualityCompat { x, y });
            }
        }
    }

    if options.check_dual_symmetry {
        for ((x, y, z), v) in &ring.n {
            let mirrored = ring.n(ring.dual(*y), ring.dual(*x), ring.dual(*z));
            if *v != mirrored {
                violations.push(Violation::DualSymmetry { x: *x, y: *y, z: *z });
            }
        }
    }

    ValidationReport { violations, multiplicity_free: ring.is_multiplicity_free() }
}

// ---------------------------------------------------------------------------
// Fusion triples
// ---------------------------------------------------------------------------

/// The ordered set of fusion triples, with position lookup. Ordering is
/// lexicographic in basis position, which fixes the column convention of the
/// exponent matrix.
#[derive(Clone, Debug)]
pub struct GammaSet {
    triples: Vec<FusionTriple>,
    positions: BTreeMap<FusionTriple, usize>,
}

impl GammaSet {
    pub fn triples(&self) -> &[FusionTriple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn position(&self, t: &FusionTriple) -> Option<usize> {
        self.positions.get(t).copied()
    }
}

/// All (a, b, c) with N(a, b, c) != 0, in canonical lexicographic order.
pub fn gamma_set(ring: &BasedRing) -> GammaSet {
    let triples: Vec<FusionTriple> =
        ring.n.keys().map(|&(a, b, c)| FusionTriple::new(a, b, c)).collect();
    // BTreeMap iteration is already lexicographic in (a, b, c).
    let positions = triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    GammaSet { triples, positions }
}

// ---------------------------------------------------------------------------
// Extended structure constants
// ---------------------------------------------------------------------------

/// N over an arbitrary word of factors, by recursive contraction:
/// N_{X1..Xn}^Y = sum_Z N_{X1..X(n-1)}^Z N_{Z Xn}^Y. For a single factor this
/// is the Kronecker delta.
pub fn n_extended(ring: &BasedRing, factors: &[Label], target: Label) -> BigUint {
    assert!(!factors.is_empty(), "n_extended requires at least one factor");
    let mut dist: BTreeMap<Label, BigUint> = BTreeMap::new();
    dist.insert(factors[0], BigUint::one());
    for &x in &factors[1..] {
        let mut next: BTreeMap<Label, BigUint> = BTreeMap::new();
        for (&z, count) in &dist {
            for &w in ring.product_channels(z, x) {
                let add = count * ring.n(z, x, w);
                *next.entry(w).or_insert_with(BigUint::zero) += add;
            }
        }
        dist = next;
    }
    dist.remove(&target).unwrap_or_else(BigUint::zero)
}

// ---------------------------------------------------------------------------
// Automorphisms
// ---------------------------------------------------------------------------

/// A basis permutation preserving the structure constants (and hence the unit
/// and duality).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Automorphism {
    images: Vec<Label>,
}

impl Automorphism {
    pub fn identity(size: usize) -> Self {
        Automorphism { images: (0..size).map(Label).collect() }
    }

    /// Builds from an image vector after checking it really is an
    /// automorphism of `ring`.
    pub fn new(ring: &BasedRing, images: Vec<Label>) -> Result<Self> {
        let size = ring.size();
        if images.len() != size {
            return Err(Error::NotAnAutomorphism("image list has wrong length".into()));
        }
        let mut seen = vec![false; size];
        for &l in &images {
            if l.0 >= size || seen[l.0] {
                return Err(Error::NotAnAutomorphism("images are not a permutation".into()));
            }
            seen[l.0] = true;
        }
        let candidate = Automorphism { images };
        if candidate.apply(ring.unit()) != ring.unit() {
            return Err(Error::NotAnAutomorphism("unit not fixed".into()));
        }
        for x in ring.labels() {
            if candidate.apply(ring.dual(x)) != ring.dual(candidate.apply(x)) {
                return Err(Error::NotAnAutomorphism(format!(
                    "does not commute with duality at {}",
                    ring.name(x)
                )));
            }
            for y in ring.labels() {
                for z in ring.labels() {
                    if ring.n(x, y, z)
                        != ring.n(candidate.apply(x), candidate.apply(y), candidate.apply(z))
                    {
                        return Err(Error::NotAnAutomorphism(format!(
                            "structure constants differ at ({}, {}, {})",
                            ring.name(x),
                            ring.name(y),
                            ring.name(z)
                        )));
                    }
                }
            }
        }
        Ok(candidate)
    }

    pub fn apply(&self, x: Label) -> Label {
        self.images[x.0]
    }

    pub fn apply_triple(&self, t: &FusionTriple) -> FusionTriple {
        FusionTriple::new(self.apply(t.a), self.apply(t.b), self.apply(t.c))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, l)| l.0 == i)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![Label(0); self.images.len()];
        for (i, &l) in self.images.iter().enumerate() {
            images[l.0] = Label(i);
        }
        Automorphism { images }
    }

    /// Composition acting left-to-right on points: (self * other)(x) =
    /// self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        Automorphism { images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    /// Cycle notation over label names, identity rendered as `()`.
    pub fn cycle_string(&self, ring: &BasedRing) -> String {
        let mut seen = vec![false; self.images.len()];
        let mut out = String::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start].0 == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut current = start;
            loop {
                seen[current] = true;
                out.push_str(ring.name(Label(current)));
                current = self.images[current].0;
                if current == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().map(|l| l.0.to_string()).collect::<Vec<_>>().join(" "))
    }
}

/// Per-label signature invariant under basis relabeling; used to prune the
/// permutation search into compatible candidate classes.
fn label_signature(ring: &BasedRing, x: Label) -> (bool, bool, Vec<BigUint>, Vec<BigUint>) {
    let mut row_sums: Vec<BigUint> =
        ring.labels().map(|y| ring.product_channels(x, y).iter().map(|&z| ring.n(x, y, z)).sum()).collect();
    row_sums.sort();
    let mut col_sums: Vec<BigUint> =
        ring.labels().map(|y| ring.product_channels(y, x).iter().map(|&z| ring.n(y, x, z)).sum()).collect();
    col_sums.sort();
    (x == ring.unit(), ring.dual(x) == x, row_sums, col_sums)
}

/// The full automorphism group, found by backtracking over basis permutations
/// restricted to signature-compatible candidate classes. Output is sorted by
/// image vector, so the identity comes first.
pub fn automorphism_group(ring: &BasedRing) -> Vec<Automorphism> {
    let size = ring.size();
    let signatures: Vec<_> = ring.labels().map(|x| label_signature(ring, x)).collect();
    let mut candidates: Vec<Vec<Label>> = Vec::with_capacity(size);
    for x in 0..size {
        candidates.push(
            (0..size).filter(|&y| signatures[x] == signatures[y]).map(Label).collect(),
        );
    }

    let mut found = Vec::new();
    let mut images: Vec<Option<Label>> = vec![None; size];
    let mut used = vec![false; size];

    fn consistent(ring: &BasedRing, images: &[Option<Label>], just: usize) -> bool {
        // Check every N-constraint whose three labels are all assigned and
        // include the label just placed.
        let size = ring.size();
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    if x != just && y != just && z != just {
                        continue;
                    }
                    if let (Some(ix), Some(iy), Some(iz)) = (images[x], images[y], images[z]) {
                        if ring.n(Label(x), Label(y), Label(z)) != ring.n(ix, iy, iz) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn backtrack(
        ring: &BasedRing,
        candidates: &[Vec<Label>],
        images: &mut Vec<Option<Label>>,
        used: &mut Vec<bool>,
        depth: usize,
        found: &mut Vec<Automorphism>,
    ) {
        if depth == images.len() {
            let images: Vec<Label> = images.iter().map(|l| l.unwrap()).collect();
            found.push(Automorphism { images });
            return;
        }
        for &candidate in &candidates[depth] {
            if used[candidate.0] {
                continue;
            }
            images[depth] = Some(candidate);
            used[candidate.0] = true;
            if consistent(ring, images, depth) {
                backtrack(ring, candidates, images, used, depth + 1, found);
            }
            images[depth] = None;
            used[candidate.0] = false;
        }
    }

    backtrack(ring, &candidates, &mut images, &mut used, 0, &mut found);
    // Duality commutation comes for free: N(x, y, unit) = delta_{y, x*} is
    // preserved, so images of duals are duals of images.
    found.sort();
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_trivial_ring() {
        let ring = parse_ring(r#"{"basis":["1"],"unit":"1","dual":{"1":"1"},"fusion":[["1","1","1"]]}"#)
            .unwrap();
        assert_eq!(ring.size(), 1);
        assert!(validate_ring(&ring).is_clean());
        assert_eq!(gamma_set(&ring).len(), 1);
    }

    #[test]
    fn parse_rejects_unknown_label() {
        let err = parse_ring(
            r#"{"basis":["1"],"unit":"1","dual":{"1":"1"},"fusion":[["1","sigma","1"]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownLabel(name) if name == "sigma"));
    }

    #[test]
    fn parse_rejects_duplicate_label() {
        let err = parse_ring(r#"{"basis":["1","1"],"unit":"1","dual":{"1":"1"},"fusion":[]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel(_)));
    }

    #[test]
    fn parse_reports_syntax_location() {
        let err = parse_ring("{\"basis\": [\"1\"],\n  oops\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "no location in: {msg}");
    }

    #[test]
    fn fib_ring_is_valid_with_five_triples() {
        let ring = fixtures::fib_ring();
        assert!(validate_ring(&ring).is_clean());
        let gamma = gamma_set(&ring);
        assert_eq!(gamma.len(), 5);
        let names: Vec<String> = gamma.triples().iter().map(|t| ring.triple_name(t)).collect();
        assert_eq!(
            names,
            ["(1, 1, 1)", "(1, tau, tau)", "(tau, 1, tau)", "(tau, tau, 1)", "(tau, tau, tau)"]
        );
    }

    #[test]
    fn deleting_a_triple_breaks_associativity() {
        let ring = fixtures::fib_ring();
        let tau = ring.label_by_name("tau").unwrap();
        // Rebuild without (tau, tau, tau).
        let fusion = gamma_set(&ring)
            .triples()
            .iter()
            .filter(|t| !(t.a == tau && t.b == tau && t.c == tau))
            .map(|t| (t.a, t.b, t.c, BigUint::one()))
            .collect();
        let broken = BasedRing::new(
            vec!["1".into(), "tau".into()],
            ring.unit(),
            vec![Label(0), Label(1)],
            fusion,
        )
        .unwrap();
        let report = validate_ring(&broken);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Associativity { x, y, z, w, .. }
                if *x == tau && *y == tau && *z == tau && *w == tau
        )));
    }

    #[test]
    fn wrong_dual_is_reported() {
        let ring = fixtures::fib_ring();
        // dual(tau) = 1 contradicts N(tau, tau, 1) = 1.
        let broken = BasedRing::new(
            vec!["1".into(), "tau".into()],
            Label(0),
            vec![Label(0), Label(0)],
            gamma_set(&ring).triples().iter().map(|t| (t.a, t.b, t.c, BigUint::one())).collect(),
        )
        .unwrap();
        let report = validate_ring(&broken);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DualityCompat { .. } | Violation::DualNotInvolution { .. })));
    }

    #[test]
    fn n_extended_matches_hand_expansion() {
        let ring = fixtures::fib_ring();
        let tau = ring.label_by_name("tau").unwrap();
        let one = ring.unit();
        // tau^3 = tau + (1 + tau) + tau: coefficient of tau is 2.
        assert_eq!(n_extended(&ring, &[tau, tau, tau], tau), BigUint::from(2u32));
        assert_eq!(n_extended(&ring, &[tau, tau], one), BigUint::one());
        assert_eq!(n_extended(&ring, &[one, one, one, one], one), BigUint::one());
        assert_eq!(n_extended(&ring, &[tau], tau), BigUint::one());
        assert_eq!(n_extended(&ring, &[tau], one), BigUint::zero());
    }

    #[test]
    fn n_extended_is_association_independent() {
        // Left-to-right contraction vs right-to-left, on words up to length 4.
        for ring in [fixtures::fib_ring(), fixtures::z3_ring(), fixtures::rep_d_s3_ring()] {
            let labels: Vec<Label> = ring.labels().collect();
            for &x in &labels {
                for &y in &labels {
                    for &z in &labels {
                        for &w in &labels {
                            for target in ring.labels() {
                                let forward = n_extended(&ring, &[x, y, z, w], target);
                                let mut back = BigUint::zero();
                                for v in ring.labels() {
                                    // N(x (y z w)) via suffix contraction.
                                    back += ring.n(x, v, target) * n_extended(&ring, &[y, z, w], v);
                                }
                                assert_eq!(forward, back);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fib_has_no_nontrivial_automorphisms() {
        let group = automorphism_group(&fixtures::fib_ring());
        assert_eq!(group.len(), 1);
        assert!(group[0].is_identity());
    }

    #[test]
    fn z3_automorphisms_are_inversion() {
        let ring = fixtures::z3_ring();
        let group = automorphism_group(&ring);
        assert_eq!(group.len(), 2);
        let w = ring.label_by_name("w").unwrap();
        let w2 = ring.label_by_name("w2").unwrap();
        assert!(group.iter().any(|rho| rho.apply(w) == w2 && rho.apply(w2) == w));
    }

    #[test]
    fn automorphism_group_is_closed() {
        let ring = fixtures::z3_ring();
        let group = automorphism_group(&ring);
        for a in &group {
            assert!(group.contains(&a.inverse()));
            for b in &group {
                assert!(group.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn automorphisms_permute_gamma() {
        let ring = fixtures::rep_d_s3_ring();
        let gamma = gamma_set(&ring);
        for rho in automorphism_group(&ring).iter().take(8) {
            for t in gamma.triples() {
                assert!(gamma.position(&rho.apply_triple(t)).is_some());
            }
        }
    }

    #[test]
    fn rejects_non_automorphism() {
        let ring = fixtures::z3_ring();
        // Swapping unit and w breaks the unit axiom.
        let err = Automorphism::new(&ring, vec![Label(1), Label(0), Label(2)]).unwrap_err();
        assert!(matches!(err, Error::NotAnAutomorphism(_)));
    }

    #[test]
    fn cycle_string_renders() {
        let ring = fixtures::z3_ring();
        let group = automorphism_group(&ring);
        let inv = group.iter().find(|a| !a.is_identity()).unwrap();
        assert_eq!(inv.cycle_string(&ring), "(w w2)");
        assert_eq!(Automorphism::identity(3).cycle_string(&ring), "()");
    }

    #[test]
    fn ring_json_round_trip() {
        for ring in [fixtures::fib_ring(), fixtures::rep_d_s3_ring()] {
            let text = ring_to_json(&ring);
            let back = parse_ring(&text).unwrap();
            assert_eq!(back.size(), ring.size());
            assert_eq!(gamma_set(&back).triples(), gamma_set(&ring).triples());
        }
    }
}
