//! The orthosymplectic Lie superalgebra inside degrees one and two, its root
//! data, and the finite-rank linear-algebra verifications of the module
//! decomposition results: stability, highest weights, bracket images, the
//! Clebsch–Gordan rank count, and the cocycle ξ.
//!
//! Everything here reduces a structural claim to one of two finite checks:
//! degree-support membership (for stability of graded subspaces) or an exact
//! rank computation over ℚ(i) (for span and surjectivity claims).

use std::collections::{BTreeMap, BTreeSet};

use crate::comb::binomial;
use crate::exec;
use crate::linalg::poly_span_rank;
use crate::moyal::{bracket, BracketKind};
use crate::multi_index::{monomials_of_degree, MultiIndex};
use crate::poly::{Poly, VarKind};
use crate::scalar::Scalar;

fn sp(pairs: usize) -> VarKind {
    VarKind::Symplectic { pairs }
}

/// dim S^d over 2n symplectic variables: C(d + 2n − 1, d).
pub fn graded_dim(n: usize, d: u32) -> usize {
    let nn = 2 * n as u64;
    let dd = u64::from(d);
    binomial(dd + nn - 1, dd).try_into().expect("dimension fits in usize")
}

/// Monomial basis of S^d as polynomials, in graded-lex order.
pub fn degree_basis(n: usize, d: u32) -> Vec<Poly> {
    monomials_of_degree(2 * n, d)
        .into_iter()
        .map(|m| Poly::monomial(sp(n), m, Scalar::one()))
        .collect()
}

/// Monomial basis of S¹ ⊕ S²: the orthosymplectic algebra 𝔤 = osp(1, 2n),
/// of dimension 2n + n(2n+1).
pub fn osp_basis(n: usize) -> Vec<Poly> {
    let mut basis = degree_basis(n, 1);
    basis.extend(degree_basis(n, 2));
    basis
}

/// The Cartan generators `H_i = −p_i q_i = −½[p_i, q_i]`.
pub fn cartan_basis(n: usize) -> Vec<Poly> {
    (0..n)
        .map(|i| {
            let mut m = MultiIndex::zero(2 * n);
            m = m.with_step(i, 1).with_step(n + i, 1);
            Poly::monomial(sp(n), m, Scalar::from_int(-1))
        })
        .collect()
}

/// A root vector with its integer weight in the ω-basis and its sign in the
/// fixed positivity convention.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub vector: Poly,
    pub weight: Vec<i64>,
    pub positive: bool,
}

/// The Cartan subalgebra, the full root list, and the fundamental system
/// `{[p_i, q_{i+1}] (i < n), p_n}`.
#[derive(Debug, Clone)]
pub struct CartanRoots {
    pub cartan: Vec<Poly>,
    pub roots: Vec<RootDatum>,
    pub fundamental: Vec<Poly>,
}

/// Builds the root table:
///
/// | vector            | weight        | positive  |
/// |-------------------|---------------|-----------|
/// | `p_i`             | `ω_i`         | yes       |
/// | `q_i`             | `−ω_i`        | no        |
/// | `[p_i, q_j]`, i≠j | `ω_i − ω_j`   | iff i < j |
/// | `[p_i, p_j]`, i≤j | `ω_i + ω_j`   | yes       |
/// | `[q_i, q_j]`, i≤j | `−(ω_i+ω_j)`  | no        |
///
/// The vectors are produced by actually evaluating the super brackets, and
/// each datum's eigen-relation `ad(H_i)(v) = weight_i·v` is exact.
pub fn cartan_and_roots(n: usize) -> CartanRoots {
    let cartan = cartan_basis(n);
    let mut roots = Vec::new();
    let weight = |entries: &[(usize, i64)]| {
        let mut w = vec![0i64; n];
        for &(i, v) in entries {
            w[i] += v;
        }
        w
    };
    for i in 0..n {
        roots.push(RootDatum { vector: Poly::p(n, i), weight: weight(&[(i, 1)]), positive: true });
    }
    for i in 0..n {
        roots.push(RootDatum { vector: Poly::q(n, i), weight: weight(&[(i, -1)]), positive: false });
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                roots.push(RootDatum {
                    vector: bracket(BracketKind::Super, &Poly::p(n, i), &Poly::q(n, j)),
                    weight: weight(&[(i, 1), (j, -1)]),
                    positive: i < j,
                });
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            roots.push(RootDatum {
                vector: bracket(BracketKind::Super, &Poly::p(n, i), &Poly::p(n, j)),
                weight: weight(&[(i, 1), (j, 1)]),
                positive: true,
            });
            roots.push(RootDatum {
                vector: bracket(BracketKind::Super, &Poly::q(n, i), &Poly::q(n, j)),
                weight: weight(&[(i, -1), (j, -1)]),
                positive: false,
            });
        }
    }
    let mut fundamental = Vec::new();
    for i in 0..n - 1 {
        fundamental.push(bracket(BracketKind::Super, &Poly::p(n, i), &Poly::q(n, i + 1)));
    }
    fundamental.push(Poly::p(n, n - 1));
    CartanRoots { cartan, roots, fundamental }
}

/// A direct sum of full graded pieces `⊕_{k ∈ degrees} S^k` over `n` pairs.
/// Membership is a degree-support check, exact because brackets of
/// polynomials are computed exactly — no truncation parameter is needed.
#[derive(Debug, Clone)]
pub struct SubspaceSpec {
    pub n: usize,
    pub degrees: BTreeSet<u32>,
}

impl SubspaceSpec {
    pub fn new(n: usize, degrees: impl IntoIterator<Item = u32>) -> Self {
        SubspaceSpec { n, degrees: degrees.into_iter().collect() }
    }

    /// `A_k = S^{2k−1} ⊕ S^{2k}`, the ad-stable slices.
    pub fn a_slice(n: usize, k: u32) -> Self {
        assert!(k >= 1);
        SubspaceSpec::new(n, [2 * k - 1, 2 * k])
    }

    /// `B_k = S^{2k} ⊕ S^{2k+1}`, the ad′-stable slices.
    pub fn b_slice(n: usize, k: u32) -> Self {
        SubspaceSpec::new(n, [2 * k, 2 * k + 1])
    }

    /// The algebra 𝔤 itself, S¹ ⊕ S².
    pub fn osp(n: usize) -> Self {
        SubspaceSpec::new(n, [1, 2])
    }

    pub fn dim(&self) -> usize {
        self.degrees.iter().map(|&d| graded_dim(self.n, d)).sum()
    }

    /// Monomial basis in graded-lex order, degree by degree.
    pub fn basis(&self) -> Vec<Poly> {
        self.degrees.iter().flat_map(|&d| degree_basis(self.n, d)).collect()
    }

    /// Whether every monomial of `f` has a degree in this spec.
    pub fn contains(&self, f: &Poly) -> bool {
        f.terms().all(|(m, _)| self.degrees.contains(&m.degree()))
    }
}

/// Outcome of a stability check; violations carry the offending acting and
/// target basis indices together with the escaped bracket value.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub stable: bool,
    pub violations: Vec<(usize, usize, Poly)>,
}

/// Verifies `bracket(action, X, F) ∈ spec` for every `X` in the acting
/// space's basis and `F` in the spec's basis.
pub fn check_stability(spec: &SubspaceSpec, action: BracketKind, acting: &SubspaceSpec) -> StabilityReport {
    assert_eq!(spec.n, acting.n, "mixed pair counts");
    let targets = spec.basis();
    let actors = acting.basis();
    let pairs: Vec<(usize, usize)> =
        (0..actors.len()).flat_map(|a| (0..targets.len()).map(move |t| (a, t))).collect();
    let results = exec::map(&pairs, |&(a, t)| {
        let br = bracket(action, &actors[a], &targets[t]);
        if spec.contains(&br) {
            None
        } else {
            Some((a, t, br))
        }
    });
    let violations: Vec<_> = results.into_iter().flatten().collect();
    StabilityReport { stable: violations.is_empty(), violations }
}

/// Result of a highest-weight probe: the `H_i`-eigenvalues (when `v` is a
/// simultaneous eigenvector) and whether the fundamental positive root
/// vectors annihilate `v` under the parity-appropriate action.
#[derive(Debug, Clone)]
pub struct HighestWeightReport {
    pub weights: Vec<Scalar>,
    pub eigen: bool,
    pub annihilated: bool,
}

/// The module action used for a vector of the given parity: even vectors
/// live in ad-stable slices, odd vectors in ad′-stable ones.
fn action_for_parity(parity: u8) -> BracketKind {
    if parity == 0 {
        BracketKind::Super
    } else {
        BracketKind::TwistedSuper
    }
}

/// Checks whether `v` is a highest-weight vector: a simultaneous
/// `ad(H_i)`-eigenvector annihilated by the fundamental system.
///
/// # Panics
///
/// Panics if `v` is zero or not parity-homogeneous (the notion of highest
/// weight only makes sense for homogeneous vectors).
pub fn highest_weight_check(v: &Poly, n: usize) -> HighestWeightReport {
    assert!(!v.is_zero(), "highest-weight probe needs a nonzero vector");
    let parity = v.parity().expect("highest-weight probe needs a parity-homogeneous vector");
    let action = action_for_parity(parity);
    let lead = v.terms().next_back().map(|(m, _)| m.clone()).expect("nonzero");
    let lead_coeff = v.coeff(&lead);

    let mut weights = Vec::with_capacity(n);
    let mut eigen = true;
    for h in cartan_basis(n) {
        let image = bracket(BracketKind::Super, &h, v);
        let lambda = &image.coeff(&lead) / &lead_coeff;
        if image != v.scale(&lambda) {
            eigen = false;
            weights.push(Scalar::zero());
        } else {
            weights.push(lambda);
        }
    }

    let annihilated = cartan_and_roots(n)
        .fundamental
        .iter()
        .all(|x| bracket(action, x, v).is_zero());

    HighestWeightReport { weights, eigen, annihilated }
}

/// Degrees in which `bracket(kind, S^ℓ, S^m)` can land: the order-k term of
/// the bracket survives exactly when `k ≡ σ+1 (mod 2)` for the flavour's
/// sign exponent σ, and `C_k` vanishes beyond `min(ℓ, m)`, leaving
/// `{ℓ+m−2k : k ≡ σ+1 (mod 2), k ≤ min(ℓ, m)}`.
pub fn predicted_degrees(l: u32, m: u32, kind: BracketKind) -> BTreeSet<u32> {
    let sigma = kind.sign_exponent((l % 2) as u8, (m % 2) as u8) % 2;
    let start = if sigma == 0 { 1 } else { 0 };
    let mut out = BTreeSet::new();
    let mut k = start;
    while k <= l.min(m) {
        out.insert(l + m - 2 * k);
        k += 2;
    }
    out
}

/// Which graded pieces the bracket image touches, and whether it fills them.
#[derive(Debug, Clone)]
pub struct DegreeImageReport {
    /// Degree → whether the image spans all of S^degree.
    pub degrees: BTreeMap<u32, bool>,
    pub predicted: BTreeSet<u32>,
    /// True when the touched degrees are exactly the predicted ones and each
    /// is filled completely.
    pub matches: bool,
}

/// Computes `span{bracket(kind, e_a, e_b)}` over the monomial bases of S^ℓ
/// and S^m and reports, degree by degree, whether the span is full.
pub fn bracket_degree_image(l: u32, m: u32, kind: BracketKind, n: usize) -> DegreeImageReport {
    let left = degree_basis(n, l);
    let right = degree_basis(n, m);
    let pairs: Vec<(usize, usize)> =
        (0..left.len()).flat_map(|a| (0..right.len()).map(move |b| (a, b))).collect();
    let brackets = exec::map(&pairs, |&(a, b)| bracket(kind, &left[a], &right[b]));

    let mut touched: BTreeSet<u32> = BTreeSet::new();
    for br in &brackets {
        for (d, _) in br.graded_components() {
            touched.insert(d);
        }
    }
    let mut degrees = BTreeMap::new();
    for &d in &touched {
        let components: Vec<Poly> = brackets.iter().map(|br| br.component(d)).filter(|c| !c.is_zero()).collect();
        let full = poly_span_rank(&components) == graded_dim(n, d);
        degrees.insert(d, full);
    }
    let predicted = predicted_degrees(l, m, kind);
    let matches = touched == predicted && degrees.values().all(|&full| full);
    DegreeImageReport { degrees, predicted, matches }
}

/// Outcome of a rank computation against a theorem's predicted value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub predicted_rank: usize,
    pub matches: bool,
}

impl RankReport {
    fn new(rank: usize, predicted_rank: usize) -> Self {
        RankReport { rank, predicted_rank, matches: rank == predicted_rank }
    }
}

/// Rank of `span{C_k(S^ℓ, S^m)}`: the theorem predicts all of `S^{ℓ+m−2k}`
/// for `0 ≤ k ≤ min(ℓ, m)` and zero beyond.
pub fn ck_image_rank(k: u32, l: u32, m: u32, n: usize) -> RankReport {
    let left = degree_basis(n, l);
    let right = degree_basis(n, m);
    let pairs: Vec<(usize, usize)> =
        (0..left.len()).flat_map(|a| (0..right.len()).map(move |b| (a, b))).collect();
    let images = exec::map(&pairs, |&(a, b)| crate::moyal::ck_coefficient(k, &left[a], &right[b]));
    let predicted = if k <= l.min(m) { graded_dim(n, l + m - 2 * k) } else { 0 };
    RankReport::new(poly_span_rank(&images), predicted)
}

/// Rank of the full product map `S^ℓ ⊗ S^m → ⊕_k S^{ℓ+m−2k}`,
/// `F ⊗ G ↦ F ⋆ G`, over one symplectic pair. The sl(2)-decomposition
/// predicts injectivity: rank `(ℓ+1)(m+1)`.
pub fn clebsch_gordan_n1(l: u32, m: u32) -> RankReport {
    let n = 1usize;
    let left = degree_basis(n, l);
    let right = degree_basis(n, m);
    let pairs: Vec<(usize, usize)> =
        (0..left.len()).flat_map(|a| (0..right.len()).map(move |b| (a, b))).collect();
    let products = exec::map(&pairs, |&(a, b)| crate::moyal::star(&left[a], &right[b]));
    RankReport::new(poly_span_rank(&products), (l as usize + 1) * (m as usize + 1))
}

/// The bracket-ideal proxy: verifies `[S², S^k]` spans `S^k` for each
/// `1 ≤ k ≤ max_degree` and that the supertrace vanishes on every computed
/// bracket, so each graded piece beyond the constants sits inside `[W, W]`.
#[derive(Debug, Clone)]
pub struct MussonReport {
    /// Degree → whether [S², S^k] filled S^k.
    pub spanned: BTreeMap<u32, bool>,
    pub traces_vanish: bool,
    pub ok: bool,
}

pub fn musson_decomposition_check(max_degree: u32, n: usize) -> MussonReport {
    let s2 = degree_basis(n, 2);
    let mut spanned = BTreeMap::new();
    let mut traces_vanish = true;
    for k in 1..=max_degree {
        let sk = degree_basis(n, k);
        let pairs: Vec<(usize, usize)> =
            (0..s2.len()).flat_map(|a| (0..sk.len()).map(move |b| (a, b))).collect();
        let brackets = exec::map(&pairs, |&(a, b)| bracket(BracketKind::Super, &s2[a], &sk[b]));
        for br in &brackets {
            if !crate::moyal::supertrace(br).is_zero() {
                traces_vanish = false;
            }
        }
        spanned.insert(k, poly_span_rank(&brackets) == graded_dim(n, k));
    }
    let ok = traces_vanish && spanned.values().all(|&v| v);
    MussonReport { spanned, traces_vanish, ok }
}

/// The cocycle `ξ(F) = ad′_ℒ(F)(1)`: zero on even F, `2F` on odd F.
pub fn cocycle_xi(f: &Poly) -> Poly {
    let one = Poly::one(f.kind());
    bracket(BracketKind::TwistedLie, f, &one)
}

/// Result of the cyclic-generation proxy for simplicity claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationReport {
    pub reached: usize,
    pub target: usize,
    pub generates: bool,
}

/// Repeatedly applies every 𝔤-basis element (under the given action) to a
/// vector and checks the resulting span: a module that is cyclically
/// generated from its highest-weight vector fills the whole slice.
pub fn cyclic_generation_check(action: BracketKind, start: &Poly, spec: &SubspaceSpec) -> GenerationReport {
    let g_basis = osp_basis(spec.n);
    let mut span: Vec<Poly> = vec![start.clone()];
    let mut frontier: Vec<Poly> = vec![start.clone()];
    let mut current = poly_span_rank(&span);
    while !frontier.is_empty() {
        let pairs: Vec<(usize, usize)> =
            (0..g_basis.len()).flat_map(|a| (0..frontier.len()).map(move |b| (a, b))).collect();
        let images = exec::map(&pairs, |&(a, b)| bracket(action, &g_basis[a], &frontier[b]));
        let fresh: Vec<Poly> = images.into_iter().filter(|f| !f.is_zero()).collect();
        let mut candidate = span.clone();
        candidate.extend(fresh.iter().cloned());
        let next = poly_span_rank(&candidate);
        if next == current {
            break;
        }
        span = candidate;
        frontier = fresh;
        current = next;
    }
    GenerationReport { reached: current, target: spec.dim(), generates: current == spec.dim() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moyal::{b_form, kappa};
    use crate::poly::poisson_bracket;

    #[test]
    fn osp_basis_dimensions_and_closure() {
        let b1 = osp_basis(1);
        assert_eq!(b1.len(), 5);
        // Ascending graded-lex enumeration: within a degree, lower p-powers
        // sort first.
        let names: Vec<String> = b1.iter().map(|f| f.to_string()).collect();
        assert_eq!(names, vec!["q1", "p1", "q1^2", "p1*q1", "p1^2"]);
        assert_eq!(osp_basis(2).len(), 14); // 2n + n(2n+1) at n = 2

        for n in [1usize, 2] {
            let g = SubspaceSpec::osp(n);
            let basis = osp_basis(n);
            for x in &basis {
                for y in &basis {
                    assert!(g.contains(&bracket(BracketKind::Super, x, y)), "bracket escaped 𝔤");
                }
            }
        }
    }

    #[test]
    fn super_jacobi_on_all_basis_triples() {
        // Graded Leibniz form: [F,[G,H]] = [[F,G],H] + (−1)^{fg} [G,[F,H]].
        for n in [1usize, 2] {
            let basis = osp_basis(n);
            for f in &basis {
                for g in &basis {
                    for h in &basis {
                        let fg = (f.parity().unwrap() * g.parity().unwrap()) % 2;
                        let lhs = bracket(BracketKind::Super, f, &bracket(BracketKind::Super, g, h));
                        let first = bracket(BracketKind::Super, &bracket(BracketKind::Super, f, g), h);
                        let second = bracket(BracketKind::Super, g, &bracket(BracketKind::Super, f, h));
                        let rhs = if fg == 0 { &first + &second } else { &first - &second };
                        assert_eq!(lhs, rhs, "Jacobi failed on a basis triple (n={n})");
                    }
                }
            }
        }
    }

    #[test]
    fn cartan_generators_from_brackets() {
        for n in [1usize, 2] {
            let cartan = cartan_basis(n);
            for (i, h) in cartan.iter().enumerate() {
                let half = Scalar::from_ratio(-1, 2);
                let via_bracket = bracket(BracketKind::Super, &Poly::p(n, i), &Poly::q(n, i)).scale(&half);
                assert_eq!(h, &via_bracket, "H_{} ≠ −½[p,q]", i + 1);
            }
        }
    }

    #[test]
    fn root_eigen_relations_hold() {
        for n in [1usize, 2] {
            let data = cartan_and_roots(n);
            // Count: dim 𝔤 − n Cartan generators.
            assert_eq!(data.roots.len(), 2 * n + n * (2 * n + 1) - n);
            assert_eq!(data.fundamental.len(), n);
            for root in &data.roots {
                assert!(!root.vector.is_zero());
                for (i, h) in data.cartan.iter().enumerate() {
                    let image = bracket(BracketKind::Super, h, &root.vector);
                    let want = root.vector.scale(&Scalar::from_int(root.weight[i]));
                    assert_eq!(image, want, "eigen-relation failed for weight {:?}", root.weight);
                }
            }
        }
    }

    #[test]
    fn pinned_root_examples() {
        let data = cartan_and_roots(1);
        let p_datum = data.roots.iter().find(|r| r.vector == Poly::p(1, 0)).unwrap();
        assert_eq!(p_datum.weight, vec![1]);
        assert!(p_datum.positive);
        let q_datum = data.roots.iter().find(|r| r.vector == Poly::q(1, 0)).unwrap();
        assert_eq!(q_datum.weight, vec![-1]);
        assert!(!q_datum.positive);

        // n = 2: [p_1, q_2] has weight ω_1 − ω_2 and is positive.
        let data = cartan_and_roots(2);
        let v = bracket(BracketKind::Super, &Poly::p(2, 0), &Poly::q(2, 1));
        let datum = data.roots.iter().find(|r| r.vector == v).unwrap();
        assert_eq!(datum.weight, vec![1, -1]);
        assert!(datum.positive);
    }

    #[test]
    fn positive_roots_have_positive_first_nonzero_weight() {
        // Sanity of the positivity convention: lexicographic sign agrees
        // with the stored flag.
        for n in [1usize, 2, 3] {
            for root in cartan_and_roots(n).roots {
                let lex_sign = root.weight.iter().find(|&&w| w != 0).copied().unwrap();
                assert_eq!(root.positive, lex_sign > 0);
            }
        }
    }

    #[test]
    fn theta_is_a_lie_homomorphism_on_s2() {
        // Prop-2.1-style check: the matrices of ad(X)|_{S¹} satisfy
        // mat([X,Y]) = [mat(X), mat(Y)] and preserve Φ(φ,ψ) = ½{φ,ψ}.
        for n in [1usize, 2] {
            let s2 = degree_basis(n, 2);
            let s1 = degree_basis(n, 1);
            let mat = |x: &Poly| -> Vec<Vec<Scalar>> {
                // Column v: coefficients of ad(x)(s1[v]) in the s1 basis.
                s1.iter()
                    .map(|phi| {
                        let image = bracket(BracketKind::Super, x, phi);
                        s1.iter()
                            .map(|e| {
                                let m = e.terms().next().unwrap().0.clone();
                                image.coeff(&m)
                            })
                            .collect()
                    })
                    .collect()
            };
            let mat_mul = |a: &[Vec<Scalar>], b: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
                // Composition in column-major layout: (a∘b)[col v] = a · b[v].
                b.iter()
                    .map(|bv| {
                        let mut out = vec![Scalar::zero(); bv.len()];
                        for (j, c) in bv.iter().enumerate() {
                            for (r, dst) in out.iter_mut().enumerate() {
                                *dst += &(c * &a[j][r]);
                            }
                        }
                        out
                    })
                    .collect()
            };
            for x in &s2 {
                for y in &s2 {
                    let lhs = mat(&bracket(BracketKind::Super, x, y));
                    let (mx, my) = (mat(x), mat(y));
                    let xy = mat_mul(&mx, &my);
                    let yx = mat_mul(&my, &mx);
                    let rhs: Vec<Vec<Scalar>> = xy
                        .iter()
                        .zip(&yx)
                        .map(|(a, b)| a.iter().zip(b).map(|(u, v)| u - v).collect())
                        .collect();
                    assert_eq!(lhs, rhs, "θ fails to be a homomorphism");
                }
            }
            // Invariance of Φ: Φ(ad(X)φ, ψ) + Φ(φ, ad(X)ψ) = 0.
            let phi_form = |a: &Poly, b: &Poly| poisson_bracket(a, b).eval_zero() * &Scalar::from_ratio(1, 2);
            for x in &s2 {
                for a in &s1 {
                    for b in &s1 {
                        let lhs = phi_form(&bracket(BracketKind::Super, x, a), b);
                        let rhs = phi_form(a, &bracket(BracketKind::Super, x, b));
                        assert!((&lhs + &rhs).is_zero(), "Φ not invariant");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_values_recovered_from_b_form() {
        for n in [1usize, 2] {
            let one = Poly::one(sp(n));
            assert_eq!(b_form(&one, &one), Scalar::from_int(-1));
            let s1 = degree_basis(n, 1);
            for phi in &s1 {
                assert_eq!(b_form(&one, phi), Scalar::zero());
                for psi in &s1 {
                    let want = poisson_bracket(phi, psi).eval_zero() * &Scalar::from_ratio(1, 2);
                    assert_eq!(b_form(phi, psi), want);
                }
            }
        }
    }

    #[test]
    fn stability_of_graded_slices() {
        for n in [1usize, 2] {
            let g = SubspaceSpec::osp(n);
            assert!(check_stability(&SubspaceSpec::a_slice(n, 1), BracketKind::Super, &g).stable);
            assert!(check_stability(&SubspaceSpec::a_slice(n, 2), BracketKind::Super, &g).stable);
            assert!(check_stability(&SubspaceSpec::b_slice(n, 0), BracketKind::TwistedSuper, &g).stable);
            assert!(check_stability(&SubspaceSpec::b_slice(n, 1), BracketKind::TwistedSuper, &g).stable);

            // S² alone is not ad-stable: ad(p_1) pushes it into S¹.
            let s2_only = SubspaceSpec::new(n, [2]);
            let report = check_stability(&s2_only, BracketKind::Super, &g);
            assert!(!report.stable);
            assert!(!report.violations.is_empty());
        }
    }

    #[test]
    fn highest_weight_probes() {
        for k in 1..=6u32 {
            let report = highest_weight_check(&Poly::p(1, 0).pow(k), 1);
            assert!(report.eigen);
            assert_eq!(report.weights, vec![Scalar::from_int(i64::from(k))]);
            assert!(report.annihilated);
        }
        for k in 1..=3u32 {
            let report = highest_weight_check(&Poly::p(2, 0).pow(2 * k), 2);
            assert!(report.eigen);
            assert_eq!(report.weights, vec![Scalar::from_int(i64::from(2 * k)), Scalar::zero()]);
            assert!(report.annihilated);
        }
        for k in 1..=4u32 {
            let report = highest_weight_check(&Poly::q(1, 0).pow(k), 1);
            assert!(report.eigen);
            assert_eq!(report.weights, vec![Scalar::from_int(-i64::from(k))]);
            assert!(!report.annihilated, "lowest-weight vector must not be annihilated");
        }
        // A non-eigenvector is reported, not rejected.
        let mixed = &Poly::p(1, 0) + &Poly::q(1, 0);
        assert!(!highest_weight_check(&mixed, 1).eigen);
    }

    #[test]
    fn predicted_degree_lists_match_printed_identities() {
        // (VI): [S¹, S^k]_ℒ = S^{k−1} and [S², S^k]_ℒ = S^k.
        for k in 1..=6u32 {
            assert_eq!(predicted_degrees(1, k, BracketKind::Lie), BTreeSet::from([k - 1]));
            assert_eq!(predicted_degrees(2, k, BracketKind::Lie), BTreeSet::from([k]));
        }
        // (VII): [S³, S^{2k}] = S^{2k−3} ⊕ S^{2k+1} for 2k ≥ 3.
        for k in 2..=3u32 {
            assert_eq!(
                predicted_degrees(3, 2 * k, BracketKind::Super),
                BTreeSet::from([2 * k - 3, 2 * k + 1])
            );
        }
    }

    #[test]
    fn bracket_degree_images_are_full_and_exact() {
        for (l, m, kind) in [
            (1u32, 4u32, BracketKind::Lie),
            (2, 4, BracketKind::Lie),
            (3, 4, BracketKind::Super),
            (2, 3, BracketKind::TwistedSuper),
            (1, 1, BracketKind::Super),
        ] {
            let report = bracket_degree_image(l, m, kind, 1);
            assert!(report.matches, "degree image mismatch at ({l},{m},{kind:?}): {report:?}");
        }
    }

    #[test]
    fn ck_image_ranks() {
        let r = ck_image_rank(1, 1, 1, 1);
        assert_eq!((r.rank, r.predicted_rank, r.matches), (1, 1, true));
        let r = ck_image_rank(3, 2, 5, 1);
        assert_eq!((r.rank, r.predicted_rank, r.matches), (0, 0, true));
        let r = ck_image_rank(2, 2, 2, 2);
        assert_eq!((r.rank, r.predicted_rank, r.matches), (1, 1, true));
    }

    #[test]
    fn clebsch_gordan_ranks_small() {
        assert!(clebsch_gordan_n1(1, 1).matches);
        assert_eq!(clebsch_gordan_n1(1, 1).rank, 4);
        for m in 0..=4u32 {
            let r = clebsch_gordan_n1(0, m);
            assert_eq!(r.rank, m as usize + 1);
            assert!(r.matches);
        }
        assert!(clebsch_gordan_n1(2, 3).matches);
    }

    #[test]
    fn musson_proxy_small() {
        let report = musson_decomposition_check(3, 1);
        assert!(report.ok, "bracket ideal failed to fill low degrees: {report:?}");
        assert!(report.traces_vanish);
    }

    #[test]
    fn cocycle_values_and_identity() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        assert!(cocycle_xi(&Poly::p(1, 0).pow(2)).is_zero());
        assert_eq!(cocycle_xi(&Poly::p(1, 0)), Poly::p(1, 0).scale(&Scalar::from_int(2)));
        assert_eq!(cocycle_xi(&Poly::q(1, 0).pow(3)), Poly::q(1, 0).pow(3).scale(&Scalar::from_int(2)));

        // ξ([F,G]_ℒ) = ad′_ℒ(F)(ξ(G)) − ad′_ℒ(G)(ξ(F)) on random pairs.
        let mut rng = StdRng::seed_from_u64(42);
        let monos = crate::multi_index::monomials_up_to_degree(2, 4);
        for _ in 0..20 {
            let mut f = Poly::zero(sp(1));
            let mut g = Poly::zero(sp(1));
            for _ in 0..4 {
                f.add_term(monos[rng.gen_range(0..monos.len())].clone(), Scalar::from_int(rng.gen_range(-3i64..=3)));
                g.add_term(monos[rng.gen_range(0..monos.len())].clone(), Scalar::from_int(rng.gen_range(-3i64..=3)));
            }
            let lhs = cocycle_xi(&bracket(BracketKind::Lie, &f, &g));
            let rhs = &bracket(BracketKind::TwistedLie, &f, &cocycle_xi(&g))
                - &bracket(BracketKind::TwistedLie, &g, &cocycle_xi(&f));
            assert_eq!(lhs, rhs, "cocycle identity failed");
        }
    }

    #[test]
    fn gram_matrices_alternate_symmetry() {
        // S^{2k} carries a symmetric κ-form, S^{2k+1} an antisymmetric one.
        for n in [1usize, 2] {
            for l in 0..=3u32 {
                let basis = degree_basis(n, l);
                let gram: Vec<Vec<Scalar>> = basis
                    .iter()
                    .map(|a| basis.iter().map(|b| kappa(a, b)).collect())
                    .collect();
                for r in 0..gram.len() {
                    for c in 0..gram.len() {
                        let want = if l % 2 == 0 { gram[c][r].clone() } else { -&gram[c][r] };
                        assert_eq!(gram[r][c], want, "Gram symmetry failed at degree {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_generation_of_low_slices() {
        // A_1 = S¹ ⊕ S² from p² under ad; B_0 = S⁰ ⊕ S¹ from p under ad′.
        let report = cyclic_generation_check(BracketKind::Super, &Poly::p(1, 0).pow(2), &SubspaceSpec::a_slice(1, 1));
        assert!(report.generates, "{report:?}");
        let report = cyclic_generation_check(
            BracketKind::TwistedSuper,
            &Poly::p(1, 0),
            &SubspaceSpec::b_slice(1, 0),
        );
        assert!(report.generates, "{report:?}");
        let report = cyclic_generation_check(BracketKind::Super, &Poly::p(2, 0).pow(2), &SubspaceSpec::a_slice(2, 1));
        assert!(report.generates, "{report:?}");
    }
}
