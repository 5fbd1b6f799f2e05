//! Brute-force verifiers. Each one enumerates a small domain, computes the
//! ground truth from `Q`/`B` evaluation and exhaustive search, and compares
//! it with the claim under test.
//!
//! Asserted claims must hold; observed claims record what the enumeration
//! shows about a statement that is known or suspected to be inaccurate,
//! and never count as verification failures.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{ArfClass, ArfValue, FieldElement, FieldSpec};
use crate::geometry::{self, build_geometry, Geometry, ProjPoint};
use crate::group;
use crate::linalg::{self, Matrix, Vector};
use crate::metric::{self, OrtKind, OrtLabel};
use crate::quadratic::{spaces_isomorphic, QuadraticForm};

pub const DEFAULT_SEED: u64 = 0x5eed_c2c0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub field_n: u32,
    pub cases_checked: usize,
    pub failures: Vec<String>,
    /// Whether failures count against the build.
    pub asserted: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(claim_id: &str, spec: FieldSpec, asserted: bool) -> Self {
        VerificationReport {
            claim_id: claim_id.to_string(),
            field_n: spec.degree(),
            cases_checked: 0,
            failures: Vec::new(),
            asserted,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases_checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    /// A failure that should fail verification.
    pub fn is_failure(&self) -> bool {
        self.asserted && !self.failures.is_empty()
    }
}

/// `x + x²` for every element, by enumeration.
fn h_image(spec: FieldSpec) -> BTreeSet<u32> {
    spec.elements().map(|x| (x + x * x).value()).collect()
}

/// The additive span of a set of field elements, by XOR closure.
fn xor_span(values: impl IntoIterator<Item = u32>) -> BTreeSet<u32> {
    let mut span = BTreeSet::from([0u32]);
    for v in values {
        if !span.contains(&v) {
            let shifted: Vec<u32> = span.iter().map(|s| s ^ v).collect();
            span.extend(shifted);
        }
    }
    span
}

/// `λ𝔥(K) ∩ 𝔥(K)` has index 4 and `λ𝔥(K) ∪ 𝔥(K)` spans `K` for every
/// `λ ∉ {0, 1}`; `λ ∈ {0, 1}` are exactly the `λ` with `λ𝔥(K) ⊆ 𝔥(K)`.
pub fn verify_lindex(spec: FieldSpec) -> Result<VerificationReport> {
    if spec.degree() > 8 {
        return Err(Error::TooLarge("lindex is checked for n ≤ 8".into()));
    }
    let mut rep = VerificationReport::new("lindex", spec, true);
    let h = h_image(spec);
    let order = spec.order() as usize;
    for lambda in spec.elements() {
        let scaled: BTreeSet<u32> = h.iter().map(|&x| (lambda * spec.elem(x)).value()).collect();
        let trivial = lambda.is_zero() || lambda.is_one();
        let subset = scaled.is_subset(&h);
        rep.check(subset == trivial, || {
            format!(
                "λ = {}: subset {subset}, expected {trivial}",
                lambda.value()
            )
        });
        if !trivial {
            let meet = scaled.intersection(&h).count();
            rep.check(4 * meet == order, || {
                format!(
                    "λ = {}: |λ𝔥 ∩ 𝔥| = {meet}, expected {}",
                    lambda.value(),
                    order / 4
                )
            });
            let span = xor_span(scaled.iter().chain(h.iter()).copied()).len();
            rep.check(span == order, || {
                format!(
                    "λ = {}: span has {span} elements, expected {order}",
                    lambda.value()
                )
            });
        }
    }
    Ok(rep)
}

/// `𝔥(K)` equals the root set of `p(x) = Σ x^(2^i)`, with `p` evaluated by
/// repeated squaring.
pub fn verify_artin_schreier_roots(spec: FieldSpec) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("artin-schreier-roots", spec, true);
    let h = h_image(spec);
    let roots: BTreeSet<u32> = spec
        .elements()
        .filter(|&x| {
            let mut acc = spec.zero();
            let mut t = x;
            for _ in 0..spec.degree() {
                acc += t;
                t = t * t;
            }
            acc.is_zero()
        })
        .map(|x| x.value())
        .collect();
    for x in spec.elements() {
        let v = x.value();
        rep.check(h.contains(&v) == roots.contains(&v), || {
            format!(
                "{v}: in 𝔥(K) {}, root of p {}",
                h.contains(&v),
                roots.contains(&v)
            )
        });
        let (image, member) = x.artin_schreier_with_membership();
        rep.check(image == x + x * x && member == h.contains(&v), || {
            format!("{v}: harf gives ({}, {member})", image.value())
        });
    }
    rep.check(2 * h.len() == spec.order() as usize, || {
        format!("|𝔥(K)| = {}", h.len())
    });
    Ok(rep)
}

/// Every invertible `d × d` matrix.
pub fn invertible_matrices(spec: FieldSpec, d: usize) -> Vec<Matrix> {
    linalg::all_vectors(spec, d * d)
        .map(|flat| {
            Matrix::from_rows(
                spec,
                &flat
                    .chunks(d)
                    .map(<[FieldElement]>::to_vec)
                    .collect::<Vec<_>>(),
            )
        })
        .filter(Matrix::is_invertible)
        .collect()
}

/// Every binary form `a x² + b xy + c y²` with `b ≠ 0`.
pub fn nondegenerate_binary_forms(spec: FieldSpec) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    for a in spec.elements() {
        for b in spec.nonzero_elements() {
            for c in spec.elements() {
                out.push(QuadraticForm::binary(spec, a, b, c));
            }
        }
    }
    out
}

fn random_matrix(spec: FieldSpec, d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let rows: Vec<Vector> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| spec.elem(rng.gen_range(0..spec.order())))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(spec, &rows);
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_form(spec: FieldSpec, d: usize, rng: &mut ChaCha8Rng) -> QuadraticForm {
    loop {
        let mut c = Matrix::zeros(spec, d, d);
        for i in 0..d {
            for j in i..d {
                c[(i, j)] = spec.elem(rng.gen_range(0..spec.order()));
            }
        }
        let form = QuadraticForm::new(c).expect("upper triangular");
        if form.is_bilinear_nondegenerate() {
            return form;
        }
    }
}

/// The Arf class does not depend on the symplectic basis: it is constant
/// over all basis changes of all forms in dimension 2 for `n ≤ 3`, and over
/// sampled forms and basis changes otherwise.
pub fn verify_arf_wellposed(spec: FieldSpec, dim: usize, seed: u64) -> Result<VerificationReport> {
    if spec.degree() * dim as u32 > 8 || dim % 2 == 1 || dim == 0 {
        return Err(Error::TooLarge(format!(
            "arf well-posedness needs even dim and n·dim ≤ 8, got dim {dim}"
        )));
    }
    let mut rep = VerificationReport::new(&format!("arf-wellposed-dim{dim}"), spec, true);
    let check = |form: &QuadraticForm, t: &Matrix, rep: &mut VerificationReport| {
        let base = form.arf_invariant().expect("non-degenerate");
        let moved = form.transform(t).arf_invariant().expect("isometric copy");
        let ok = moved.class() == base.class() && (!t.is_identity() || moved == base);
        rep.check(ok, || {
            format!(
                "form {:?}, T {:?}: {base} vs {moved}",
                form.coeffs().to_ints(),
                t.to_ints()
            )
        });
    };
    if dim == 2 && spec.degree() <= 3 {
        let mats = invertible_matrices(spec, 2);
        for form in nondegenerate_binary_forms(spec) {
            for t in &mats {
                check(&form, t, &mut rep);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let form = random_form(spec, dim, &mut rng);
            check(&form, &Matrix::identity(spec, dim), &mut rep);
            for _ in 0..100 {
                let t = random_matrix(spec, dim, &mut rng);
                check(&form, &t, &mut rep);
            }
        }
    }
    Ok(rep)
}

/// `spaces_isomorphic` returns a valid witness exactly when the normalized
/// Arf classes agree, with isometry decided by exhaustive matrix search.
pub fn verify_arf_classification(spec: FieldSpec) -> Result<VerificationReport> {
    if spec.degree() > 2 {
        return Err(Error::TooLarge(
            "exhaustive isomorphism check needs n ≤ 2".into(),
        ));
    }
    let mut rep = VerificationReport::new("arf-classification", spec, true);
    let forms = nondegenerate_binary_forms(spec);
    let mats = invertible_matrices(spec, 2);
    // ground truth: the orbit of each form under base change
    let orbits: Vec<HashSet<QuadraticForm>> = forms
        .iter()
        .map(|f| mats.iter().map(|t| f.transform(t)).collect())
        .collect();
    for (i, f1) in forms.iter().enumerate() {
        for f2 in &forms {
            let truth = orbits[i].contains(f2);
            let classes = f1.arf_invariant()?.class() == f2.arf_invariant()?.class();
            let witness = spaces_isomorphic(f1, f2)?;
            let valid = witness.as_ref().is_none_or(|t| &f2.transform(t) == f1);
            rep.check(
                truth == classes && witness.is_some() == truth && valid,
                || {
                    format!(
                        "{:?} vs {:?}: isometric {truth}, classes agree {classes}, witness {}",
                        f1.coeffs().to_ints(),
                        f2.coeffs().to_ints(),
                        witness.is_some()
                    )
                },
            );
        }
    }
    Ok(rep)
}

fn ort_guard(spec: FieldSpec) -> Result<()> {
    if spec.degree() > 4 {
        return Err(Error::TooLarge("orthogonal group checks need n ≤ 4".into()));
    }
    Ok(())
}

/// `|Ort(0)| = 2(q−1)`, `|Ort(e)| = 2(q+1)`, `|Ort(∞)| = 2q`, and `Ort⁺` has
/// index 2 in each.
pub fn verify_ort_orders(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    ort_guard(spec)?;
    let q = spec.order() as usize;
    let mut orders = VerificationReport::new("ort-orders", spec, true);
    let mut index = VerificationReport::new("ort-plus-index", spec, true);
    for (alpha, expected) in [
        (ArfValue::Finite(spec.zero()), 2 * (q - 1)),
        (ArfValue::Finite(spec.arf_e()), 2 * (q + 1)),
        (ArfValue::Infinity, 2 * q),
    ] {
        let grp = metric::ort_group(spec, alpha)?;
        orders.check(grp.order() == expected, || {
            format!(
                "Ort({alpha}) has order {}, expected {expected}",
                grp.order()
            )
        });
        if let Some(g) = grp.model_group() {
            orders.check(g.check_axioms().is_ok(), || {
                format!("Ort({alpha}) is not a group")
            });
        }
        let plus = metric::ort_plus(&grp)?;
        index.check(2 * plus.order() == grp.order(), || {
            format!(
                "Ort({alpha})⁺ has order {} in a group of order {}",
                plus.order(),
                grp.order()
            )
        });
        for a in plus.elements() {
            for b in plus.elements() {
                index.check(plus.contains(&plus.compose(a, b)), || {
                    format!("Ort({alpha})⁺ is not closed: {a} ∘ {b}")
                });
            }
        }
    }
    Ok(vec![orders, index])
}

/// Orbits of `Ort(e)` on non-zero vectors of the model plane have `q + 1`
/// elements. Also records, as data, on which norm levels `Ort⁺` acts
/// transitively.
pub fn verify_ort_orbits(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    ort_guard(spec)?;
    let q = spec.order() as usize;
    let mut sizes = VerificationReport::new("ort-orbits", spec, true);
    let mut norms = VerificationReport::new("ort-plus-transitive-norms", spec, false);
    let grp = metric::ort_group(spec, ArfValue::Finite(spec.arf_e()))?;
    let model = grp.model().expect("finite α").clone();
    let full = grp.model_group().expect("finite α");
    let plus = metric::ort_plus(&grp)?.model_group().expect("finite α");
    let nonzero: Vec<Vector> = linalg::all_vectors(spec, 2)
        .filter(|v| !linalg::is_zero(v))
        .collect();
    let orbits = full.orbits(&nonzero, false);
    let total: usize = orbits.iter().map(Vec::len).sum();
    sizes.check(total == nonzero.len(), || "orbits do not partition".into());
    for orbit in &orbits {
        sizes.check(orbit.len() == q + 1, || {
            format!(
                "orbit of {:?} has {} elements",
                linalg::vector_to_ints(&orbit[0]),
                orbit.len()
            )
        });
    }
    for c in spec.nonzero_elements() {
        let level: Vec<Vector> = nonzero
            .iter()
            .filter(|v| model.q(v) == c)
            .cloned()
            .collect();
        let k = plus.orbits(&level, false).len();
        norms.check(k == 1, || {
            format!("Ort⁺ has {k} orbits on vectors of norm {}", c.value())
        });
    }
    norms.notes.push(format!("Ort⁺ has order {}", plus.order()));
    Ok(vec![sizes, norms])
}

/// `λ_M ∈ {0, 1}` with `λ + λ² = 0` for every element of `Ort(0)` and
/// `Ort(e)`; also records how often the relation `λ + λ² = 1` holds.
pub fn verify_lambda_constraint(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    ort_guard(spec)?;
    let mut constraint = VerificationReport::new("lambda-constraint", spec, true);
    let mut relation_one =
        VerificationReport::new("lambda-plus-lambda-squared-is-one", spec, false);
    for alpha in [spec.zero(), spec.arf_e()] {
        let grp = metric::ort_group(spec, ArfValue::Finite(alpha))?;
        let model = grp.model().expect("finite α").clone();
        let a = model.coeffs().clone();
        let gram = model.gram();
        for x in grp.elements() {
            let OrtLabel::Plane(m) = &x.label else {
                continue;
            };
            // ground truth: solve MᵀAM + A = λB entrywise without lambda_of
            let mut d = &(&m.transpose() * &a) * m;
            for i in 0..2 {
                for j in 0..2 {
                    d[(i, j)] += a[(i, j)];
                }
            }
            let candidates: Vec<FieldElement> = spec
                .elements()
                .filter(|l| (0..2).all(|i| (0..2).all(|j| d[(i, j)] == *l * gram[(i, j)])))
                .collect();
            let computed = metric::lambda_of(&model, m).ok();
            let ok = candidates.len() == 1
                && Some(candidates[0]) == computed
                && (candidates[0].is_zero() || candidates[0].is_one())
                && (candidates[0] + candidates[0].square()).is_zero();
            constraint.check(ok, || {
                format!(
                    "Ort({}) element {:?}: λ candidates {candidates:?}",
                    alpha.value(),
                    m.to_ints()
                )
            });
            if let Some(&l) = candidates.first() {
                relation_one.check((l + l.square()).is_one(), || {
                    format!(
                        "Ort({}) element {:?}: λ = {}, λ + λ² = {}",
                        alpha.value(),
                        m.to_ints(),
                        l.value(),
                        (l + l.square()).value()
                    )
                });
            }
        }
    }
    Ok(vec![constraint, relation_one])
}

fn all_arf_values(spec: FieldSpec) -> Vec<ArfValue> {
    let mut v: Vec<ArfValue> = spec.elements().map(ArfValue::Finite).collect();
    v.push(ArfValue::Infinity);
    v
}

fn class_values(spec: FieldSpec) -> [ArfValue; 3] {
    [
        ArfValue::Finite(spec.arf_e()),
        ArfValue::Infinity,
        ArfValue::Finite(spec.zero()),
    ]
}

/// `Arf⟨Ω, x⟩` from `Q` and `B` alone.
fn direct_arf(g: &Geometry, x: &[FieldElement]) -> ArfValue {
    let o = g.omega().vector();
    let b = g.form().b(o, x);
    if b.is_zero() {
        ArfValue::Infinity
    } else {
        ArfValue::Finite(g.form().q(x) * g.form().q(o) / (b * b))
    }
}

/// Ω-replacement: predictions against recomputation, plus observed
/// invariance of the transformation descriptors.
pub fn verify_transformation(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    if spec.degree() > 3 {
        return Err(Error::TooLarge("transformation checks need n ≤ 3".into()));
    }
    let mut formula = VerificationReport::new("omega-replacement-formula", spec, true);
    let mut validity = VerificationReport::new("omega-replacement-validity", spec, true);
    let mut literal = VerificationReport::new("omega-replacement-literal-reading", spec, false);
    let mut rho = VerificationReport::new("rho-invariant", spec, false);
    let mut exact = VerificationReport::new("exact-pair-invariant", spec, false);
    let mut class = VerificationReport::new("class-invariant", spec, false);
    for a in all_arf_values(spec) {
        for b in all_arf_values(spec) {
            let g = build_geometry(spec, a, b, None)?;
            let (p, l) = (g.p().vector().clone(), g.l().vector().clone());
            let before = geometry::transformation_class(&g)?;
            for alpha in spec.elements() {
                for beta in spec.elements() {
                    let r = match geometry::replace_omega(&g, alpha, beta) {
                        Err(Error::DegenerateOmega) => continue,
                        other => other?,
                    };
                    let h = &r.geometry;
                    let (new_p, new_l) = (direct_arf(h, &p), direct_arf(h, &l));
                    let case = || format!("Arf(P) = {a}, Arf(L) = {b}, (α, β) = ({alpha}, {beta})");
                    formula.check(r.predicted_l == new_l && r.predicted_p == new_p, || {
                        format!(
                            "{}: predicted ({}, {}), recomputed ({new_p}, {new_l})",
                            case(),
                            r.predicted_p,
                            r.predicted_l
                        )
                    });
                    validity.check(h.is_valid(), || format!("{}: {:?}", case(), h.violations()));
                    let (lit_l, lit_p) = geometry::literal_replacement_prediction(&g, alpha, beta)?;
                    literal.check(lit_l == new_l && lit_p == new_p, || {
                        format!(
                            "{}: literal ({lit_p}, {lit_l}), recomputed ({new_p}, {new_l})",
                            case()
                        )
                    });
                    let after = geometry::transformation_class(h)?;
                    let same = after == before;
                    match before {
                        geometry::TransformationClass::Ratio { .. } => {
                            rho.check(same, || format!("{}: {before:?} → {after:?}", case()))
                        }
                        geometry::TransformationClass::Exact { .. } => {
                            exact.check(same, || format!("{}: {before:?} → {after:?}", case()))
                        }
                        geometry::TransformationClass::Class { .. } => {
                            class.check(same, || format!("{}: {before:?} → {after:?}", case()))
                        }
                    }
                }
            }
        }
    }
    let mut reports = vec![formula, validity, literal, rho, exact, class];
    // GF(2) has no seeds with two non-trivial finite values
    reports.retain(|r| r.cases_checked > 0);
    Ok(reports)
}

fn geometry_guard(spec: FieldSpec) -> Result<()> {
    if spec.degree() > 2 {
        return Err(Error::TooLarge("geometry enumerations need n ≤ 2".into()));
    }
    Ok(())
}

/// Number of singular projective points of a non-degenerate quadric in
/// dimension 6 of plus (`e = 1`) or minus (`e = -1`) type.
fn expected_quadric_points(q: usize, plus: bool) -> usize {
    if plus {
        (q * q * q - 1) * (q * q + 1) / (q - 1)
    } else {
        (q * q * q + 1) * (q * q - 1) / (q - 1)
    }
}

/// Normal forms and quadric sizes.
pub fn verify_normal_form(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    geometry_guard(spec)?;
    let q = spec.order() as usize;
    let mut witness = VerificationReport::new("normal-form-witness", spec, true);
    let mut exists = VerificationReport::new("normal-form-exists", spec, false);
    let mut count = VerificationReport::new("quadric-count", spec, true);
    let target = geometry::hyperbolic_sum(spec);
    for a in class_values(spec) {
        for b in class_values(spec) {
            for total in [ArfClass::Zero, ArfClass::E] {
                let g = build_geometry(spec, a, b, Some(total.representative(spec)))?;
                let n_points = geometry::quadric_points(&g)?.len();
                let plus = total == ArfClass::Zero;
                count.check(n_points == expected_quadric_points(q, plus), || {
                    format!("({a}, {b}, total {}): {n_points} points", total.as_str())
                });
                let w = geometry::normal_form(&g)?;
                if plus {
                    exists.check(w.is_some(), || format!("({a}, {b}): no (ℓ, p) pair"));
                }
                witness.check(
                    w.as_ref().is_none_or(|w| {
                        plus && w.is_invertible() && g.form().transform(w) == target
                    }),
                    || format!("({a}, {b}, total {}): bad witness", total.as_str()),
                );
            }
        }
    }
    Ok(vec![witness, exists, count])
}

/// All nine class pairs build valid geometries that classify back.
pub fn verify_classification(spec: FieldSpec) -> Result<VerificationReport> {
    geometry_guard(spec)?;
    let mut rep = VerificationReport::new("classification-roundtrip", spec, true);
    for a in all_arf_values(spec) {
        for b in all_arf_values(spec) {
            let g = build_geometry(spec, a, b, None)?;
            let report = geometry::validate_geometry(&g);
            let cls = geometry::classify_geometry(&g)?;
            let truth_p = direct_arf(&g, g.p().vector()).class();
            let truth_l = direct_arf(&g, g.l().vector()).class();
            let ok = report.is_valid()
                && (truth_p, truth_l) == (a.class(), b.class())
                && (cls.arf_p, cls.arf_l) == (truth_p, truth_l)
                && cls.name == geometry::GeometryName::lookup(a.class(), b.class());
            rep.check(ok, || {
                format!("({a}, {b}): {cls:?}, violations {:?}", report.violations)
            });
        }
    }
    Ok(rep)
}

fn independent_lines(g: &Geometry) -> Result<Vec<ProjPoint>> {
    Ok(geometry::quadric_points(g)?
        .into_iter()
        .filter(|c| {
            let f = geometry::classify_cycle(g, c);
            f.line && f.independent && !f.ideal
        })
        .collect())
}

fn frame_of(g: &Geometry, ell: &ProjPoint) -> Vec<Vector> {
    vec![
        g.omega().vector().clone(),
        g.p().vector().clone(),
        g.l().vector().clone(),
        ell.vector().clone(),
    ]
}

/// Every independent non-ideal line has an orthogonal line group of the
/// right order or a group of order `2q`, the latter exactly when `B` on
/// `⟨Ω, P, L, ℓ⟩` has a two-dimensional kernel. The group is compared
/// with a direct enumeration of the isometries fixing `Ω, P, L, ℓ`.
pub fn verify_line_groups(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    geometry_guard(spec)?;
    let q = spec.order() as usize;
    let mut dich = VerificationReport::new("line-group-dichotomy", spec, true);
    let mut trans = VerificationReport::new("translation-invariant", spec, true);
    let (mut orth, mut degen) = (0usize, 0usize);
    for a in class_values(spec) {
        for b in class_values(spec) {
            let g = build_geometry(spec, a, b, None)?;
            for ell in independent_lines(&g)? {
                let fr = frame_of(&g, &ell);
                let gram_rank = g.form().restrict(&fr).gram().rank();
                let kernel_dim = 4 - gram_rank;
                let lg = metric::line_group(&g, &ell)?;
                let direct = group::enumerate_isometries(g.form(), &fr)?;
                let same =
                    lg.action_group().map(|x| x.elements() == direct.elements()) == Some(true);
                let ok = match lg.kind() {
                    OrtKind::DegeneratePair => {
                        degen += 1;
                        kernel_dim == 2 && lg.order() == 2 * q
                    }
                    OrtKind::Orthogonal { alpha } => {
                        orth += 1;
                        kernel_dim == 0
                            && Some(lg.order())
                                == metric::expected_orthogonal_order(spec, alpha.class())
                    }
                };
                dich.check(ok && same, || {
                    format!("({a}, {b}) ℓ = {ell}: kind {:?}, order {}, kernel dim {kernel_dim}, matches enumeration {same}", lg.kind(), lg.order())
                });
                if !geometry::incident(&g, g.p(), &ell) && g.form().q(ell.vector()).is_zero() {
                    // projection route, independent of the closed form
                    let bp = g.form().b(g.p().vector(), ell.vector());
                    let ellv = linalg::scale(bp.inv().expect("non-ideal"), ell.vector());
                    let o = g.omega().vector();
                    let omega2 = linalg::axpy(
                        &linalg::axpy(o, g.form().b(o, &ellv), g.p().vector()),
                        g.form().b(o, g.p().vector()),
                        &ellv,
                    );
                    let l = g.l().vector();
                    let bl = g.form().b(&omega2, l);
                    let truth = if bl.is_zero() {
                        ArfValue::Infinity
                    } else {
                        ArfValue::Finite(g.form().q(l) * g.form().q(&omega2) / (bl * bl))
                    };
                    let closed = metric::translation_closed_form(&g, &ell);
                    trans.check(closed.as_ref() == Ok(&truth), || {
                        format!("({a}, {b}) ℓ = {ell}: closed form {closed:?}, projection {truth}")
                    });
                }
            }
        }
    }
    dich.notes.push(format!(
        "{orth} orthogonal and {degen} degenerate line groups"
    ));
    let mut unique = VerificationReport::new("ort-infinity-unique-index-two", spec, false);
    // brute force over subsets of K⁺ × F₂⁺ of size q containing the identity
    let grp = metric::ort_group(spec, ArfValue::Infinity)?;
    let elems: Vec<(u32, bool)> = grp
        .elements()
        .iter()
        .map(|x| match x.label {
            OrtLabel::Pair { alpha1, eps } => (alpha1.value(), eps),
            OrtLabel::Plane(_) => unreachable!(),
        })
        .collect();
    let others: Vec<(u32, bool)> = elems.iter().copied().filter(|&e| e != (0, false)).collect();
    let mut subgroups = 0usize;
    for mask in 0u32..(1 << others.len()) {
        if mask.count_ones() as usize != q - 1 {
            continue;
        }
        let mut set: BTreeSet<(u32, bool)> = BTreeSet::from([(0, false)]);
        set.extend(
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e),
        );
        let closed = set
            .iter()
            .all(|x| set.iter().all(|y| set.contains(&(x.0 ^ y.0, x.1 ^ y.1))));
        subgroups += usize::from(closed);
    }
    unique.check(subgroups == 1, || {
        format!("{subgroups} subgroups of index 2 in K⁺ × F₂⁺")
    });
    Ok(vec![dich, trans, unique])
}

/// Distance structure on every real non-ideal independent line: the
/// identity on the diagonal, inverses on swapped arguments, the cocycle
/// identity, and the transitivity of `Ort⁺` on the line's real points.
pub fn verify_distance(spec: FieldSpec) -> Result<Vec<VerificationReport>> {
    geometry_guard(spec)?;
    let mut rep = VerificationReport::new("distance-structure", spec, true);
    let mut defined = VerificationReport::new("distance-defined", spec, false);
    let mut summary: BTreeMap<String, usize> = BTreeMap::new();
    for a in class_values(spec) {
        for b in class_values(spec) {
            let g = build_geometry(spec, a, b, None)?;
            for ell in metric::real_lines(&g)? {
                let pts = metric::real_points_on(&g, &ell)?;
                let plus = metric::ort_plus(&metric::line_group(&g, &ell)?)?;
                let mut table = BTreeMap::new();
                for p1 in &pts {
                    for p2 in &pts {
                        let d = metric::oriented_distance(&g, &ell, p1, p2);
                        defined.check(d.is_ok(), || {
                            format!("({a}, {b}) ℓ = {ell}: {p1} → {p2}: {:?}", d.as_ref().err())
                        });
                        if let Ok(d) = d {
                            table.insert((p1.clone(), p2.clone()), d);
                        }
                    }
                }
                for p1 in &pts {
                    if let Some(d) = table.get(&(p1.clone(), p1.clone())) {
                        rep.check(d == plus.identity(), || format!("d({p1}, {p1}) ≠ id"));
                    }
                    for p2 in &pts {
                        let (Some(d12), Some(d21)) = (
                            table.get(&(p1.clone(), p2.clone())),
                            table.get(&(p2.clone(), p1.clone())),
                        ) else {
                            continue;
                        };
                        rep.check(&plus.compose(d12, d21) == plus.identity(), || {
                            format!("d({p1}, {p2}) d({p2}, {p1}) ≠ id")
                        });
                        for p3 in &pts {
                            if let (Some(d23), Some(d13)) = (
                                table.get(&(p2.clone(), p3.clone())),
                                table.get(&(p1.clone(), p3.clone())),
                            ) {
                                rep.check(&plus.compose(d23, d12) == d13, || {
                                    format!("cocycle fails on {p1}, {p2}, {p3}")
                                });
                            }
                        }
                    }
                }
                let classes: BTreeSet<_> = table
                    .values()
                    .map(|d| metric::distance_class(&plus, d))
                    .collect();
                let cls = geometry::classify_geometry(&g)?.name;
                *summary
                    .entry(format!(
                        "{cls}: |Ort⁺| = {}, {} points, {} classes",
                        plus.order(),
                        pts.len(),
                        classes.len()
                    ))
                    .or_default() += 1;
            }
        }
    }
    rep.notes = summary
        .into_iter()
        .map(|(k, v)| format!("{k} (×{v})"))
        .collect();
    Ok(vec![rep, defined])
}

pub const SUITES: &[&str] = &[
    "lindex",
    "artin-schreier",
    "arf",
    "isomorphism",
    "ort-groups",
    "ort-orbits",
    "lambda",
    "transformation",
    "normal-form",
    "classification",
    "line-group",
    "distance",
];

/// Largest `n` each suite supports.
pub fn suite_max_degree(suite: &str) -> Option<u32> {
    Some(match suite {
        "lindex" | "artin-schreier" => 8,
        "arf" => 4,
        "isomorphism" | "normal-form" | "classification" | "line-group" | "distance" => 2,
        "ort-groups" | "ort-orbits" | "lambda" => 4,
        "transformation" => 3,
        _ => return None,
    })
}

/// Runs one suite for one field.
pub fn run_suite(suite: &str, spec: FieldSpec, seed: u64) -> Result<Vec<VerificationReport>> {
    Ok(match suite {
        "lindex" => vec![verify_lindex(spec)?],
        "artin-schreier" => vec![verify_artin_schreier_roots(spec)?],
        "arf" => {
            let mut v = vec![verify_arf_wellposed(spec, 2, seed)?];
            if spec.degree() <= 2 {
                v.push(verify_arf_wellposed(spec, 4, seed)?);
            }
            v
        }
        "isomorphism" => vec![verify_arf_classification(spec)?],
        "ort-groups" => verify_ort_orders(spec)?,
        "ort-orbits" => verify_ort_orbits(spec)?,
        "lambda" => verify_lambda_constraint(spec)?,
        "transformation" => verify_transformation(spec)?,
        "normal-form" => verify_normal_form(spec)?,
        "classification" => vec![verify_classification(spec)?],
        "line-group" => verify_line_groups(spec)?,
        "distance" => verify_distance(spec)?,
        other => {
            return Err(Error::PreconditionViolated(format!(
                "unknown suite {other:?}"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_holds(reports: &[VerificationReport]) {
        for r in reports {
            assert!(r.cases_checked > 0, "{}", r.claim_id);
            if r.asserted {
                assert!(
                    r.holds(),
                    "{}: {:?}",
                    r.claim_id,
                    &r.failures[..r.failures.len().min(3)]
                );
            }
        }
    }

    #[test]
    fn lindex_small_fields() {
        for n in 1..=4 {
            let r = verify_lindex(FieldSpec::gf(n)).unwrap();
            assert_holds(&[r]);
        }
    }

    #[test]
    fn lindex_gf4_example() {
        let f = FieldSpec::gf(2);
        let h = h_image(f);
        let scaled: BTreeSet<u32> = h.iter().map(|&x| (f.elem(2) * f.elem(x)).value()).collect();
        assert_eq!(scaled.intersection(&h).count(), 1);
    }

    #[test]
    fn span_by_xor_closure() {
        assert_eq!(xor_span([1, 2]).len(), 4);
        assert_eq!(xor_span([3, 3]).len(), 2);
    }

    #[test]
    fn arf_suites() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            assert_holds(&run_suite("arf", f, DEFAULT_SEED).unwrap());
            assert_holds(&run_suite("isomorphism", f, DEFAULT_SEED).unwrap());
        }
        assert_eq!(invertible_matrices(FieldSpec::gf(2), 2).len(), 180);
    }

    #[test]
    fn group_suites() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            for suite in ["ort-groups", "ort-orbits", "lambda"] {
                assert_holds(&run_suite(suite, f, DEFAULT_SEED).unwrap());
            }
        }
    }

    #[test]
    fn lambda_relation_one_is_refuted() {
        let reps = verify_lambda_constraint(FieldSpec::gf(1)).unwrap();
        let relation_one = reps.iter().find(|r| !r.asserted).unwrap();
        assert_eq!(relation_one.failures.len(), relation_one.cases_checked);
    }

    #[test]
    fn transformation_suite() {
        let reps = verify_transformation(FieldSpec::gf(2)).unwrap();
        assert_holds(&reps);
        let rho = reps.iter().find(|r| r.claim_id == "rho-invariant").unwrap();
        assert!(rho.holds());
    }

    #[test]
    fn geometry_suites() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            for suite in ["normal-form", "classification", "line-group", "distance"] {
                let reps = run_suite(suite, f, DEFAULT_SEED).unwrap();
                assert_holds(&reps);
            }
        }
    }

    #[test]
    fn report_json_line() {
        let r = verify_lindex(FieldSpec::gf(2)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with("{\"claim_id\":\"lindex\",\"field_n\":2,\"cases_checked\":"));
    }
}
