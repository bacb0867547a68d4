//! Built-in example rings, solutions and invariant data used by the tests
//! and shipped as CLI example inputs.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;

use crate::classify::InvariantProfile;
use crate::numeric::{sqrt_rational, ComplexValue};
use crate::ring::{automorphism_group, BasedRing, Label};
use crate::symbols::{FSymbolIndex, Solution, ZeroSet};
use crate::invariants::InvariantMonomial;

fn ring(names: &[&str], unit: usize, dual: &[usize], fusion: &[(usize, usize, usize)]) -> BasedRing {
    BasedRing::new(
        names.iter().map(|s| s.to_string()).collect(),
        Label(unit),
        dual.iter().map(|&d| Label(d)).collect(),
        fusion.iter().map(|&(a, b, c)| (Label(a), Label(b), Label(c), BigUint::one())).collect(),
    )
    .expect("fixture ring is well formed")
}

/// The ring with a single basis element.
pub fn trivial_ring() -> BasedRing {
    ring(&["1"], 0, &[0], &[(0, 0, 0)])
}

/// The all-ones solution on the trivial ring.
pub fn trivial_solution() -> Solution {
    let ring = trivial_ring();
    let idx = FSymbolIndex::new(Label(0), Label(0), Label(0), Label(0), Label(0), Label(0));
    Solution::new(&ring, "trivial", "all ones", BTreeMap::from([(idx, ComplexValue::one())]))
        .expect("trivial solution is total")
}

/// Basis {1, tau} with tau ⊗ tau = 1 ⊕ tau.
pub fn fib_ring() -> BasedRing {
    ring(
        &["1", "tau"],
        0,
        &[0, 1],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1)],
    )
}

/// (1 + sqrt 5)/2 to `digits` significant digits.
pub fn golden_ratio_plus(digits: u32) -> BigRational {
    let five = BigRational::from_integer(5.into());
    let s5 = sqrt_rational(&five, digits).expect("sqrt of positive");
    (BigRational::one() + s5) / BigRational::from_integer(2.into())
}

/// (1 - sqrt 5)/2 to `digits` significant digits.
pub fn golden_ratio_minus(digits: u32) -> BigRational {
    let five = BigRational::from_integer(5.into());
    let s5 = sqrt_rational(&five, digits).expect("sqrt of positive");
    (BigRational::one() - s5) / BigRational::from_integer(2.into())
}

fn fib_block_solution(
    name: &str,
    provenance: &str,
    block: [(usize, usize, ComplexValue); 4],
) -> Solution {
    let ring = fib_ring();
    let phi = crate::symbols::f_symbol_set(&ring).expect("fib is multiplicity free");
    let tau = Label(1);
    let mut values: BTreeMap<FSymbolIndex, ComplexValue> =
        phi.indices().iter().map(|idx| (*idx, ComplexValue::one())).collect();
    for (e, f, v) in block {
        let idx = FSymbolIndex::new(tau, tau, tau, tau, Label(e), Label(f));
        values.insert(idx, v);
    }
    Solution::new(&ring, name, provenance, values).expect("fib solution is total")
}

/// The real pentagon solution on the Fibonacci ring: the tau-cube block is
/// [[1/phi, 1/sqrt(phi)], [1/sqrt(phi), -1/phi]] with phi the golden ratio;
/// every other variable is 1. Constructed at `digits` working precision.
pub fn fib_solution(digits: u32) -> Solution {
    let phi = golden_ratio_plus(digits);
    let inv_phi = phi.recip();
    let inv_sqrt_phi = sqrt_rational(&inv_phi, digits).expect("1/phi is positive");
    fib_block_solution(
        "fibonacci",
        "golden-ratio closed form",
        [
            (0, 0, ComplexValue::from_rational(inv_phi.clone())),
            (0, 1, ComplexValue::from_rational(inv_sqrt_phi.clone())),
            (1, 0, ComplexValue::from_rational(inv_sqrt_phi)),
            (1, 1, ComplexValue::from_rational(-inv_phi)),
        ],
    )
}

/// The Galois conjugate of [`fib_solution`] (sqrt 5 negated): the block is
/// [[-phi, i sqrt(phi)], [i sqrt(phi), phi]].
pub fn yang_lee_solution(digits: u32) -> Solution {
    let phi = golden_ratio_plus(digits);
    let sqrt_phi = sqrt_rational(&phi, digits).expect("phi is positive");
    let zero = BigRational::from_integer(0.into());
    let i_sqrt_phi = ComplexValue::new(zero, sqrt_phi);
    fib_block_solution(
        "yang-lee",
        "Galois conjugate of the golden-ratio form",
        [
            (0, 0, ComplexValue::from_rational(-phi.clone())),
            (0, 1, i_sqrt_phi.clone()),
            (1, 0, i_sqrt_phi),
            (1, 1, ComplexValue::from_rational(phi)),
        ],
    )
}

/// The twelve reference invariant monomials for the Fibonacci ring, in the
/// usual presentation (six single variables, four short products, two
/// quotients). Their integer span is the full invariant lattice.
pub fn fib_reference_monomials() -> Vec<InvariantMonomial> {
    let o = Label(0);
    let t = Label(1);
    let ix = |a, b, c, d, e, f| FSymbolIndex::new(a, b, c, d, e, f);
    let m = |powers: Vec<(FSymbolIndex, i64)>| InvariantMonomial::from_powers(powers);
    vec![
        m(vec![(ix(o, o, o, o, o, o), 1)]),
        m(vec![(ix(o, t, o, t, t, t), 1)]),
        m(vec![(ix(o, t, t, t, t, t), 1)]),
        m(vec![(ix(t, t, o, t, t, t), 1)]),
        m(vec![(ix(t, t, t, o, t, t), 1)]),
        m(vec![(ix(t, t, t, t, t, t), 1)]),
        m(vec![(ix(o, o, t, t, o, t), 1), (ix(o, t, t, o, t, o), 1)]),
        m(vec![(ix(t, o, o, t, t, o), 1), (ix(t, t, o, o, o, t), 1)]),
        m(vec![(ix(o, o, t, t, o, t), 1), (ix(t, o, o, t, t, o), 1), (ix(t, t, t, t, o, o), 1)]),
        m(vec![(ix(t, o, t, o, t, t), 1), (ix(o, o, t, t, o, t), -1), (ix(t, o, o, t, t, o), -1)]),
        m(vec![(ix(t, o, t, t, t, t), 1), (ix(o, o, t, t, o, t), -1), (ix(t, o, o, t, t, o), -1)]),
        m(vec![
            (ix(o, o, t, t, o, t), 1),
            (ix(t, o, o, t, t, o), 1),
            (ix(t, t, t, t, o, t), 1),
            (ix(t, t, t, t, t, o), 1),
        ]),
    ]
}

/// The pointed ring on Z/3: basis {1, w, w2} with group multiplication.
pub fn z3_ring() -> BasedRing {
    let mut fusion = Vec::new();
    for a in 0..3usize {
        for b in 0..3usize {
            fusion.push((a, b, (a + b) % 3));
        }
    }
    ring(&["1", "w", "w2"], 0, &[0, 2, 1], &fusion)
}

/// A cohomology-class representative solution on the Z/3 pointed ring:
/// F(a,b,c) = zeta^(q * a * floor((b+c)/3)) with zeta a primitive cube root
/// of unity. q = 0, 1, 2 give the three gauge classes.
pub fn z3_solution(q: u32, digits: u32) -> Solution {
    let ring = z3_ring();
    let phi = crate::symbols::f_symbol_set(&ring).expect("z3 is multiplicity free");
    let three = BigRational::from_integer(3.into());
    let s3 = sqrt_rational(&three, digits).expect("sqrt of positive");
    let half = BigRational::new(1.into(), 2.into());
    let zeta = [
        ComplexValue::one(),
        ComplexValue::new(-half.clone(), &s3 * &half),
        ComplexValue::new(-half.clone(), -(&s3 * &half)),
    ];
    let mut values = BTreeMap::new();
    for idx in phi.indices() {
        let (a, b, c) = (idx.a.0 as u32, idx.b.0 as u32, idx.c.0 as u32);
        let exponent = (q * a * ((b + c) / 3)) % 3;
        values.insert(*idx, zeta[exponent as usize].clone());
    }
    Solution::new(&ring, format!("z3-q{q}"), "cyclic cocycle representative", values)
        .expect("z3 solution is total")
}

/// The gauge-invariant cubic product on the Z/3 ring that the inversion
/// automorphism moves (its orbit sum is automorphism-invariant).
pub fn z3_remark_monomial(ring: &BasedRing) -> InvariantMonomial {
    let one = ring.label_by_name("1").expect("unit label");
    let w = ring.label_by_name("w").expect("w label");
    let w2 = ring.label_by_name("w2").expect("w2 label");
    InvariantMonomial::from_powers([
        (FSymbolIndex::new(w, w, w, one, w2, w2), 1),
        (FSymbolIndex::new(w, w2, w, w, one, one), 1),
        (FSymbolIndex::new(w, one, w, w2, w, w), 1),
    ])
}

/// A valid based ring that is not multiplicity free: x ⊗ x = 1 ⊕ 2x.
pub fn non_multiplicity_free_ring() -> BasedRing {
    BasedRing::new(
        vec!["1".into(), "x".into()],
        Label(0),
        vec![Label(0), Label(1)],
        vec![
            (Label(0), Label(0), Label(0), BigUint::one()),
            (Label(0), Label(1), Label(1), BigUint::one()),
            (Label(1), Label(0), Label(1), BigUint::one()),
            (Label(1), Label(1), Label(0), BigUint::one()),
            (Label(1), Label(1), Label(1), BigUint::from(2u32)),
        ],
    )
    .expect("ring is well formed")
}

// ---------------------------------------------------------------------------
// Rep(D(S3))
// ---------------------------------------------------------------------------

/// The rank-8 ring of the representation category of the double of S3:
/// basis {1, eps, b1, a+, a-, b2, b3, b4} with dimensions
/// {1, 1, 2, 3, 3, 2, 2, 2}. Each b_i generates a three-object subring with
/// {1, eps}; the a's fuse onto everything two-dimensional.
pub fn rep_d_s3_ring() -> BasedRing {
    let names = ["1", "eps", "b1", "a+", "a-", "b2", "b3", "b4"];
    let unit = 0usize;
    let eps = 1usize;
    let betas = [2usize, 5, 6, 7];
    let aplus = 3usize;
    let aminus = 4usize;

    let mut products: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut set = |a: usize, b: usize, out: Vec<usize>| {
        products.insert((a, b), out);
    };

    for x in 0..8 {
        set(unit, x, vec![x]);
        if x != unit {
            set(x, unit, vec![x]);
        }
    }
    set(eps, eps, vec![unit]);
    for &b in &betas {
        set(eps, b, vec![b]);
        set(b, eps, vec![b]);
    }
    for (alpha, other) in [(aplus, aminus), (aminus, aplus)] {
        set(eps, alpha, vec![other]);
        set(alpha, eps, vec![other]);
    }
    for (i, &bi) in betas.iter().enumerate() {
        for (j, &bj) in betas.iter().enumerate() {
            if i == j {
                set(bi, bi, vec![unit, eps, bi]);
            } else {
                let rest: Vec<usize> = betas
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, &b)| b)
                    .collect();
                set(bi, bj, rest);
            }
        }
    }
    for &b in &betas {
        for &alpha in &[aplus, aminus] {
            set(b, alpha, vec![aplus, aminus]);
            set(alpha, b, vec![aplus, aminus]);
        }
    }
    let all_betas: Vec<usize> = betas.to_vec();
    for &alpha in &[aplus, aminus] {
        let mut same = vec![unit];
        same.extend(&all_betas);
        set(alpha, alpha, same);
    }
    for (x, y) in [(aplus, aminus), (aminus, aplus)] {
        let mut cross = vec![eps];
        cross.extend(&all_betas);
        set(x, y, cross);
    }

    let fusion: Vec<(usize, usize, usize)> = products
        .into_iter()
        .flat_map(|((a, b), outs)| outs.into_iter().map(move |c| (a, b, c)))
        .collect();
    ring(&names, unit, &[0, 1, 2, 3, 4, 5, 6, 7], &fusion)
}

fn s3_betas(ring: &BasedRing) -> [Label; 4] {
    ["b1", "b2", "b3", "b4"].map(|n| ring.label_by_name(n).expect("beta label"))
}

fn s3_alphas(ring: &BasedRing) -> [Label; 2] {
    ["a+", "a-"].map(|n| ring.label_by_name(n).expect("alpha label"))
}

/// Signs as indices into [a+, a-]; product rule over {+1, -1}.
fn sign_combinations(parity: i32) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for mask in 0..16u32 {
        let signs = [0, 1, 2, 3].map(|b| ((mask >> b) & 1) as usize);
        let product: i32 = signs.iter().map(|&s| if s == 0 { 1 } else { -1 }).product();
        if product == parity {
            out.push(signs);
        }
    }
    out
}

/// Zeros common to every pentagon solution on this ring: the variables
/// F[b_i, b_j, b_i; b_j | b_k, b_k] over all admissible beta choices.
fn rep_d_s3_common_zeros(ring: &BasedRing) -> Vec<FSymbolIndex> {
    let betas = s3_betas(ring);
    let mut out = Vec::new();
    for &bi in &betas {
        for &bj in &betas {
            for &bk in &betas {
                let idx = FSymbolIndex::new(bi, bj, bi, bj, bk, bk);
                if idx.is_admissible(ring) {
                    out.push(idx);
                }
            }
        }
    }
    out
}

/// The beta-alpha sandwich zeros for one ordered beta pair (i, j): the eight
/// variables F[b_i, a_s, b_j; a_t | a_u, a_v] with odd overall sign parity.
fn shape_beta_alpha_beta(ring: &BasedRing, i: usize, j: usize) -> Vec<FSymbolIndex> {
    let betas = s3_betas(ring);
    let alphas = s3_alphas(ring);
    sign_combinations(-1)
        .into_iter()
        .map(|[s, t, u, v]| {
            FSymbolIndex::new(betas[i], alphas[s], betas[j], alphas[t], alphas[u], alphas[v])
        })
        .collect()
}

/// The alpha-beta-alpha zeros for one ordered beta pair.
fn shape_alpha_beta_alpha(ring: &BasedRing, i: usize, j: usize) -> Vec<FSymbolIndex> {
    let betas = s3_betas(ring);
    let alphas = s3_alphas(ring);
    sign_combinations(-1)
        .into_iter()
        .map(|[s, sp, u, v]| {
            FSymbolIndex::new(alphas[s], betas[i], alphas[sp], betas[j], alphas[u], alphas[v])
        })
        .collect()
}

/// The all-alpha zeros with beta channels for one ordered beta pair.
fn shape_alpha_cube(ring: &BasedRing, i: usize, j: usize) -> Vec<FSymbolIndex> {
    let betas = s3_betas(ring);
    let alphas = s3_alphas(ring);
    sign_combinations(-1)
        .into_iter()
        .map(|[s, sp, spp, t]| {
            FSymbolIndex::new(alphas[s], alphas[sp], alphas[spp], alphas[t], betas[i], betas[j])
        })
        .collect()
}

/// The three representative zero patterns. Beta pairs below are indices into
/// (b1, b2, b3, b4).
///
/// * Pattern 1: sandwich shapes on the off-diagonal pair {b1, b2} plus the
///   diagonal pairs (b3, b3), (b4, b4); alpha-cube shapes on the
///   off-diagonal pairs of both blocks {b1, b2} and {b3, b4}.
/// * Pattern 2: all three shapes on the off-diagonal pairs of both blocks.
/// * Pattern 3: all three shapes on every diagonal pair.
pub fn rep_d_s3_zero_pattern(which: usize) -> ZeroSet {
    let ring = rep_d_s3_ring();
    let (sandwich_pairs, cube_pairs): (Vec<(usize, usize)>, Vec<(usize, usize)>) = match which {
        1 => (vec![(0, 1), (1, 0), (2, 2), (3, 3)], vec![(0, 1), (1, 0), (2, 3), (3, 2)]),
        2 => (
            vec![(0, 1), (1, 0), (2, 3), (3, 2)],
            vec![(0, 1), (1, 0), (2, 3), (3, 2)],
        ),
        3 => (
            vec![(0, 0), (1, 1), (2, 2), (3, 3)],
            vec![(0, 0), (1, 1), (2, 2), (3, 3)],
        ),
        _ => panic!("zero pattern index must be 1, 2 or 3"),
    };
    let mut members = rep_d_s3_common_zeros(&ring);
    for &(i, j) in &sandwich_pairs {
        members.extend(shape_beta_alpha_beta(&ring, i, j));
        members.extend(shape_alpha_beta_alpha(&ring, i, j));
    }
    for &(i, j) in &cube_pairs {
        members.extend(shape_alpha_cube(&ring, i, j));
    }
    ZeroSet::from_members(members)
}

/// The eight invariant quadratic products
/// F[a_s,a_s,a_s;a_s|b_i,b_i] * F[a_s,b_i,a_s;b_i|a_s,a_s], indexed by
/// (beta index, alpha sign). Nonzero on every known solution family.
pub fn rep_d_s3_invariant_monomials(ring: &BasedRing) -> Vec<InvariantMonomial> {
    let betas = s3_betas(ring);
    let alphas = s3_alphas(ring);
    let mut out = Vec::new();
    for &b in &betas {
        for &a in &alphas {
            out.push(InvariantMonomial::from_powers([
                (FSymbolIndex::new(a, a, a, a, b, b), 1),
                (FSymbolIndex::new(a, b, a, b, a, a), 1),
            ]));
        }
    }
    out
}

/// The twenty invariant-level records for this ring: each combines an orbit
/// member of one of the three zero patterns with one sign branch of the
/// invariant product values (2/3 and 1/6 magnitudes).
pub fn rep_d_s3_profiles() -> Vec<InvariantProfile> {
    let ring = rep_d_s3_ring();
    let betas = s3_betas(&ring);
    let alphas = s3_alphas(&ring);
    let group = automorphism_group(&ring);

    let base_value = |pattern: usize, beta_pos: usize, alpha_pos: usize| -> ComplexValue {
        match pattern {
            1 => {
                if beta_pos < 2 {
                    ComplexValue::from_ratio(2, 3)
                } else {
                    ComplexValue::from_ratio(1, 6)
                }
            }
            2 => ComplexValue::from_ratio(1, 6),
            _ => {
                if alpha_pos == 0 {
                    ComplexValue::from_ratio(2, 3)
                } else {
                    ComplexValue::from_ratio(-2, 3)
                }
            }
        }
    };

    let mut profiles = Vec::new();
    for pattern in 1..=3 {
        let base_zeros = rep_d_s3_zero_pattern(pattern);
        // One representative automorphism per orbit member, in group order.
        let mut seen: Vec<ZeroSet> = Vec::new();
        let mut reps = Vec::new();
        for rho in &group {
            let image = crate::symbols::apply_automorphism_zero_set(rho, &base_zeros);
            if !seen.contains(&image) {
                seen.push(image.clone());
                reps.push((rho.clone(), image));
            }
        }
        for (orbit_index, (rho, zeros)) in reps.iter().enumerate() {
            for (branch, branch_sign) in [("plus", 1i64), ("minus", -1i64)] {
                let mut entries = Vec::new();
                for (bpos, &b) in betas.iter().enumerate() {
                    for (apos, &a) in alphas.iter().enumerate() {
                        let monomial = InvariantMonomial::from_powers([
                            (FSymbolIndex::new(a, a, a, a, b, b), 1),
                            (FSymbolIndex::new(a, b, a, b, a, a), 1),
                        ])
                        .apply_automorphism(rho);
                        let value = base_value(pattern, bpos, apos)
                            .mul(&ComplexValue::from_integer(branch_sign));
                        entries.push((monomial, value));
                    }
                }
                profiles.push(InvariantProfile {
                    name: format!("pattern{pattern}-orbit{orbit_index}-{branch}"),
                    zero_set: zeros.clone(),
                    entries,
                });
            }
        }
    }
    profiles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::validate_ring;

    #[test]
    fn fixture_rings_validate() {
        for ring in [trivial_ring(), fib_ring(), z3_ring(), rep_d_s3_ring()] {
            let report = validate_ring(&ring);
            assert!(report.is_clean(), "{:?}", report.violations);
            assert!(report.multiplicity_free);
        }
        let report = validate_ring(&non_multiplicity_free_ring());
        assert!(report.is_clean());
        assert!(!report.multiplicity_free);
    }

    #[test]
    fn rep_d_s3_gamma_has_duality_triples() {
        let ring = rep_d_s3_ring();
        let gamma = crate::ring::gamma_set(&ring);
        assert_eq!(gamma.len(), 116);
        for x in ring.labels() {
            assert!(gamma
                .position(&crate::ring::FusionTriple::new(x, ring.dual(x), ring.unit()))
                .is_some());
        }
    }

    #[test]
    fn rep_d_s3_variable_count_matches_block_oracle() {
        // |Phi| = sum over (a,b,c,d) of N(abc -> d)^2, computed from the
        // extended structure constants.
        let ring = rep_d_s3_ring();
        let phi = crate::symbols::f_symbol_set(&ring).unwrap();
        let mut expected = BigUint::ZERO;
        for a in ring.labels() {
            for b in ring.labels() {
                for c in ring.labels() {
                    for d in ring.labels() {
                        let n = crate::ring::n_extended(&ring, &[a, b, c], d);
                        expected += &n * &n;
                    }
                }
            }
        }
        assert_eq!(BigUint::from(phi.len()), expected);
        assert_eq!(phi.len(), 2948);
    }

    #[test]
    fn zero_patterns_have_expected_size_and_are_admissible() {
        let ring = rep_d_s3_ring();
        assert_eq!(rep_d_s3_common_zeros(&ring).len(), 28);
        for which in 1..=3 {
            let zeros = rep_d_s3_zero_pattern(which);
            assert_eq!(zeros.len(), 28 + 96, "pattern {which}");
            for idx in zeros.members() {
                assert!(idx.is_admissible(&ring));
            }
        }
    }

    #[test]
    fn invariant_monomials_have_trivial_gauge_weight() {
        use num_bigint::BigInt;
        use num_traits::Zero;
        let ring = rep_d_s3_ring();
        for m in rep_d_s3_invariant_monomials(&ring) {
            let mut weights: BTreeMap<_, BigInt> = BTreeMap::new();
            for (idx, k) in m.exponents() {
                for (triple, w) in idx.gauge_triples() {
                    *weights.entry(triple).or_default() += k * BigInt::from(w);
                }
            }
            assert!(weights.values().all(Zero::is_zero));
            // Disjoint from every zero pattern.
            for which in 1..=3 {
                let zeros = rep_d_s3_zero_pattern(which);
                assert!(m.support().all(|idx| !zeros.contains(idx)));
            }
        }
    }

    #[test]
    fn profiles_are_twenty_with_ten_zero_sets() {
        let profiles = rep_d_s3_profiles();
        assert_eq!(profiles.len(), 20);
        let mut zero_sets: Vec<&ZeroSet> = profiles.iter().map(|p| &p.zero_set).collect();
        zero_sets.sort();
        zero_sets.dedup();
        assert_eq!(zero_sets.len(), 10);
        for p in &profiles {
            assert_eq!(p.entries.len(), 8);
        }
    }

    #[test]
    fn fib_reference_monomials_touch_every_variable() {
        let ring = fib_ring();
        let phi = crate::symbols::f_symbol_set(&ring).unwrap();
        let monomials = fib_reference_monomials();
        assert_eq!(monomials.len(), 12);
        for idx in phi.indices() {
            assert!(
                monomials.iter().any(|m| !m.exponent(idx).eq(&num_bigint::BigInt::ZERO)),
                "{} uncovered",
                idx.name(&ring)
            );
        }
    }
}
