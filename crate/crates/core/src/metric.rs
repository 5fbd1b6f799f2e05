//! Isometry groups of lines, the groups `Ort(α)` and `Ort⁺`, translation
//! invariants and oriented distance.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{ArfClass, ArfValue, FieldElement, FieldSpec};
use crate::geometry::{self, Geometry, ProjPoint};
use crate::group::{self, IsomGroup};
use crate::linalg::{self, Matrix, Vector};
use crate::quadratic::QuadraticForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrtKind {
    /// Isometries of a two-dimensional space with finite Arf invariant.
    Orthogonal { alpha: ArfValue },
    /// `K⁺ × F₂⁺`, the group attached to Arf invariant `∞`.
    DegeneratePair,
}

/// How an element is parametrized.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrtLabel {
    /// A 2×2 isometry of the model plane.
    Plane(Matrix),
    /// The pair `(α₁, ε) ∈ K⁺ × F₂⁺`.
    Pair { alpha1: FieldElement, eps: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrtElement {
    pub label: OrtLabel,
    /// The element as an isometry of the ambient space, when realized.
    pub action: Option<Matrix>,
}

impl OrtElement {
    pub fn matrix(&self) -> Option<&Matrix> {
        match (&self.action, &self.label) {
            (Some(a), _) => Some(a),
            (None, OrtLabel::Plane(m)) => Some(m),
            (None, OrtLabel::Pair { .. }) => None,
        }
    }
}

impl Serialize for OrtElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match (self.matrix(), &self.label) {
            (Some(m), _) => m.to_ints().serialize(s),
            (None, OrtLabel::Pair { alpha1, eps }) => {
                serde_json::json!({"alpha1": alpha1.value(), "eps": u8::from(*eps)}).serialize(s)
            }
            (None, OrtLabel::Plane(_)) => unreachable!("plane labels always carry a matrix"),
        }
    }
}

impl fmt::Display for OrtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            OrtLabel::Plane(m) => write!(f, "{:?}", m.to_ints()),
            OrtLabel::Pair { alpha1, eps } => write!(f, "({}, {})", alpha1.value(), u8::from(*eps)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrtGroup {
    #[serde(skip)]
    spec: FieldSpec,
    #[serde(flatten)]
    kind: OrtKind,
    /// The two-dimensional form whose isometries label the elements.
    #[serde(skip)]
    model: Option<QuadraticForm>,
    elements: Vec<OrtElement>,
}

impl OrtGroup {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn kind(&self) -> OrtKind {
        self.kind
    }

    pub fn model(&self) -> Option<&QuadraticForm> {
        self.model.as_ref()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[OrtElement] {
        &self.elements
    }

    pub fn contains(&self, x: &OrtElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn identity(&self) -> &OrtElement {
        self.elements
            .iter()
            .find(|x| match &x.label {
                OrtLabel::Plane(m) => m.is_identity(),
                OrtLabel::Pair { alpha1, eps } => alpha1.is_zero() && !eps,
            })
            .expect("every group contains the identity")
    }

    /// `a ∘ b`: apply `b` first.
    pub fn compose(&self, a: &OrtElement, b: &OrtElement) -> OrtElement {
        let label = match (&a.label, &b.label) {
            (OrtLabel::Plane(x), OrtLabel::Plane(y)) => OrtLabel::Plane(x * y),
            (OrtLabel::Pair { alpha1: x, eps: e }, OrtLabel::Pair { alpha1: y, eps: f }) => {
                OrtLabel::Pair {
                    alpha1: *x + *y,
                    eps: e ^ f,
                }
            }
            _ => panic!("elements of different groups"),
        };
        let action = match (&a.action, &b.action) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        };
        OrtElement { label, action }
    }

    pub fn inverse(&self, a: &OrtElement) -> OrtElement {
        let label = match &a.label {
            OrtLabel::Plane(m) => OrtLabel::Plane(m.inverse().expect("isometries are invertible")),
            // every element of K⁺ × F₂⁺ is its own inverse
            pair => pair.clone(),
        };
        OrtElement {
            label,
            action: a
                .action
                .as_ref()
                .map(|m| m.inverse().expect("isometries are invertible")),
        }
    }

    /// The model matrices as an [`IsomGroup`] (orthogonal kind only).
    pub fn model_group(&self) -> Option<IsomGroup> {
        let model = self.model.as_ref()?;
        let mats = self
            .elements
            .iter()
            .filter_map(|x| match &x.label {
                OrtLabel::Plane(m) => Some(m.clone()),
                OrtLabel::Pair { .. } => None,
            })
            .collect();
        Some(IsomGroup::from_elements(self.spec, model.dim(), mats))
    }

    /// The ambient actions as an [`IsomGroup`], when every element has one.
    pub fn action_group(&self) -> Option<IsomGroup> {
        let mats = self
            .elements
            .iter()
            .map(|x| x.action.clone())
            .collect::<Option<Vec<Matrix>>>()?;
        let dim = mats.first()?.rows();
        Some(IsomGroup::from_elements(self.spec, dim, mats))
    }

    fn with_elements(&self, elements: Vec<OrtElement>) -> OrtGroup {
        OrtGroup {
            spec: self.spec,
            kind: self.kind,
            model: self.model.clone(),
            elements,
        }
    }
}

fn sorted(mut v: Vec<OrtElement>) -> Vec<OrtElement> {
    v.sort();
    v
}

fn pair_elements(spec: FieldSpec) -> Vec<(FieldElement, bool)> {
    spec.elements()
        .flat_map(|a| [(a, false), (a, true)])
        .collect()
}

/// The model plane for a finite Arf value: the hyperbolic plane for `0`,
/// otherwise `x² + xy + α y²`.
pub fn model_plane(spec: FieldSpec, alpha: FieldElement) -> QuadraticForm {
    if alpha.is_zero() {
        QuadraticForm::hyperbolic_plane(spec)
    } else {
        QuadraticForm::plane_with_arf(spec, alpha)
    }
}

pub fn ort_group(spec: FieldSpec, alpha: ArfValue) -> Result<OrtGroup> {
    match alpha {
        ArfValue::Finite(a) => {
            if a.spec() != spec {
                return Err(Error::FieldMismatch);
            }
            let model = model_plane(spec, a);
            Ok(orthogonal_from_model(model, None))
        }
        ArfValue::Infinity => Ok(OrtGroup {
            spec,
            kind: OrtKind::DegeneratePair,
            model: None,
            elements: sorted(
                pair_elements(spec)
                    .into_iter()
                    .map(|(alpha1, eps)| OrtElement {
                        label: OrtLabel::Pair { alpha1, eps },
                        action: None,
                    })
                    .collect(),
            ),
        }),
    }
}

/// Enumerates `Iso(model)`; with `lift = (basis, k)` each 2×2 matrix `M`
/// also acts on the ambient space as the identity on the first `k` basis
/// vectors and as `M` on the last two.
fn orthogonal_from_model(model: QuadraticForm, lift: Option<(&[Vector], usize)>) -> OrtGroup {
    let spec = model.spec();
    let alpha = model
        .arf_invariant()
        .expect("model planes are non-degenerate");
    let iso = group::enumerate_isometries(&model, &[]).expect("a plane is within the guard");
    let lifted = lift.map(|(basis, k)| {
        let bmat = Matrix::from_columns(spec, basis);
        (bmat.inverse().expect("basis"), basis, k)
    });
    let elements = iso
        .elements()
        .iter()
        .map(|m| {
            let action = lifted.as_ref().map(|(binv, basis, k)| {
                let mut images: Vec<Vector> = basis[..*k].to_vec();
                for j in 0..2 {
                    let mut img = linalg::zero_vector(spec, basis[0].len());
                    for i in 0..2 {
                        img = linalg::axpy(&img, m[(i, j)], &basis[k + i]);
                    }
                    images.push(img);
                }
                &Matrix::from_columns(spec, &images) * binv
            });
            OrtElement {
                label: OrtLabel::Plane(m.clone()),
                action,
            }
        })
        .collect();
    OrtGroup {
        spec,
        kind: OrtKind::Orthogonal { alpha },
        model: Some(model),
        elements: sorted(elements),
    }
}

/// The scalar `λ` with `MᵀAM + A = λB`, where `A` is the stored
/// upper-triangular matrix of a two-dimensional form and `B` its polar
/// Gram matrix.
pub fn lambda_of(model: &QuadraticForm, m: &Matrix) -> Result<FieldElement> {
    let a = model.coeffs();
    let g = model.gram();
    let mut d = &(&m.transpose() * a) * m;
    for i in 0..d.rows() {
        for j in 0..d.cols() {
            d[(i, j)] += a[(i, j)];
        }
    }
    let (i, j) = (0..g.rows())
        .flat_map(|i| (0..g.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !g[(i, j)].is_zero())
        .ok_or(Error::DegenerateBilinear)?;
    let lambda = d[(i, j)] / g[(i, j)];
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            if d[(r, c)] != lambda * g[(r, c)] {
                return Err(Error::ContractViolation(format!(
                    "MᵀAM + A is not a multiple of B for {:?}",
                    m.to_ints()
                )));
            }
        }
    }
    Ok(lambda)
}

/// The index-2 subgroup: `λ_M = 0` in the orthogonal case, `ε = 0` in the
/// degenerate case.
pub fn ort_plus(group: &OrtGroup) -> Result<OrtGroup> {
    match group.kind {
        OrtKind::Orthogonal { .. } => {
            let model = group
                .model
                .as_ref()
                .expect("orthogonal groups carry a model");
            let mut keep = Vec::new();
            for x in &group.elements {
                let OrtLabel::Plane(m) = &x.label else {
                    unreachable!("orthogonal groups have plane labels")
                };
                let lambda = lambda_of(model, m)?;
                if !(lambda.is_zero() || lambda.is_one()) {
                    return Err(Error::ContractViolation(format!(
                        "λ_M = {} for {:?}",
                        lambda.value(),
                        m.to_ints()
                    )));
                }
                if lambda.is_zero() {
                    keep.push(x.clone());
                }
            }
            Ok(group.with_elements(keep))
        }
        OrtKind::DegeneratePair => Ok(group.with_elements(
            group
                .elements
                .iter()
                .filter(|x| matches!(x.label, OrtLabel::Pair { eps: false, .. }))
                .cloned()
                .collect(),
        )),
    }
}

fn frame(g: &Geometry, ell: &ProjPoint) -> Vec<Vector> {
    vec![
        g.omega().vector().clone(),
        g.p().vector().clone(),
        g.l().vector().clone(),
        ell.vector().clone(),
    ]
}

fn require_independent_line(g: &Geometry, ell: &ProjPoint) -> Result<()> {
    let flags = geometry::classify_cycle(g, ell);
    if !flags.line {
        return Err(Error::NotIndependent("B(L, ℓ) ≠ 0".into()));
    }
    if !flags.independent {
        return Err(Error::NotIndependent("ℓ lies in ⟨Ω, P, L⟩".into()));
    }
    Ok(())
}

/// Whether `B` restricted to `⟨Ω, P, L, ℓ⟩` is degenerate, and the kernel.
pub fn frame_kernel(g: &Geometry, ell: &ProjPoint) -> Vec<Vector> {
    let basis = frame(g, ell);
    let restricted = g.form().restrict(&basis);
    restricted
        .bilinear_kernel()
        .basis()
        .iter()
        .map(|k| {
            let mut v = linalg::zero_vector(g.spec(), 6);
            for (c, b) in k.iter().zip(&basis) {
                v = linalg::axpy(&v, *c, b);
            }
            v
        })
        .collect()
}

/// Isometries of `V` fixing `Ω, P, L, ℓ`.
///
/// When `B` is non-degenerate on `V₀ = ⟨Ω, P, L, ℓ⟩` these are the
/// isometries of the plane `V₀⊥`, extended by the identity. Otherwise the
/// kernel `⟨e₁, e₂⟩` of `B` on `V₀` is two-dimensional and an element is
/// determined by `φ(eⁱ) = eⁱ + αᵢ eᵢ + β e_{i'}` on dual vectors `eⁱ`,
/// parametrized by `(α₁, ε)` through `α₂ Q(e₂) = α₁ Q(e₁) + ε` and
/// `β² Q(e₂) = α₁² Q(e₁) + α₁`.
pub fn line_group(g: &Geometry, ell: &ProjPoint) -> Result<OrtGroup> {
    require_independent_line(g, ell)?;
    let form = g.form();
    let v0 = frame(g, ell);
    let kernel = frame_kernel(g, ell);
    match kernel.len() {
        0 => {
            let perp = form.orthogonal_complement(&v0);
            let plane = form.restrict(perp.basis());
            let mut basis = v0.clone();
            basis.extend(perp.basis().iter().cloned());
            Ok(orthogonal_from_model(plane, Some((&basis, 4))))
        }
        2 => degenerate_line_group(g, &v0, kernel),
        k => Err(Error::ContractViolation(format!(
            "B on ⟨Ω, P, L, ℓ⟩ has a kernel of dimension {k}"
        ))),
    }
}

fn degenerate_line_group(g: &Geometry, v0: &[Vector], kernel: Vec<Vector>) -> Result<OrtGroup> {
    let spec = g.spec();
    let form = g.form();
    // order the kernel basis so that Q(e₂) ≠ 0, making Q(e₁) = 0 when possible
    let (q0, q1) = (form.q(&kernel[0]), form.q(&kernel[1]));
    let (mut e1, e2) = if !q1.is_zero() {
        (kernel[0].clone(), kernel[1].clone())
    } else if !q0.is_zero() {
        (kernel[1].clone(), kernel[0].clone())
    } else {
        return Err(Error::ContractViolation(
            "Q vanishes on the kernel of B|V₀".into(),
        ));
    };
    let (qa, qb) = (form.q(&e1), form.q(&e2));
    if !qa.is_zero() {
        // replace e₁ by the singular vector √Q(e₂)e₁ + √Q(e₁)e₂
        e1 = linalg::axpy(&linalg::scale(qb.sqrt(), &e1), qa.sqrt(), &e2);
    }
    let (qa, qb) = (form.q(&e1), form.q(&e2));
    // complement H of the kernel inside V₀
    let mut h = kernel.clone();
    let mut h_basis = Vec::new();
    for v in v0 {
        h.push(v.clone());
        if linalg::rank(spec, &h) == h.len() {
            h_basis.push(v.clone());
        } else {
            h.pop();
        }
    }
    let gram = form.gram();
    let mut rows: Vec<Vector> = h_basis.iter().map(|x| gram.mul_vec(x)).collect();
    rows.push(gram.mul_vec(&e1));
    rows.push(gram.mul_vec(&e2));
    let system = Matrix::from_rows(spec, &rows);
    let target = |i: usize| {
        let mut t = linalg::zero_vector(spec, rows.len());
        t[h_basis.len() + i] = spec.one();
        t
    };
    let dual1 = system
        .solve(&target(0))
        .ok_or_else(|| Error::ContractViolation("no dual vector for e₁".into()))?;
    let mut dual2 = system
        .solve(&target(1))
        .ok_or_else(|| Error::ContractViolation("no dual vector for e₂".into()))?;
    dual2 = linalg::axpy(&dual2, form.b(&dual1, &dual2), &e1);

    let mut basis = v0.to_vec();
    basis.push(dual1.clone());
    basis.push(dual2.clone());
    let binv = Matrix::from_columns(spec, &basis)
        .inverse()
        .ok_or_else(|| {
            Error::ContractViolation("dual vectors do not complete ⟨Ω, P, L, ℓ⟩".into())
        })?;
    let qb_inv = qb.inv().expect("Q(e₂) ≠ 0");
    let mut elements = Vec::with_capacity(2 * spec.order() as usize);
    for (alpha1, eps) in pair_elements(spec) {
        let eps_f = if eps { spec.one() } else { spec.zero() };
        let beta = ((alpha1.square() * qa + alpha1) * qb_inv).sqrt();
        let alpha2 = (alpha1 * qa + eps_f) * qb_inv;
        let mut images = v0.to_vec();
        images.push(linalg::axpy(&linalg::axpy(&dual1, alpha1, &e1), beta, &e2));
        images.push(linalg::axpy(&linalg::axpy(&dual2, beta, &e1), alpha2, &e2));
        let action = &Matrix::from_columns(spec, &images) * &binv;
        if !form.is_isometry(&action) {
            return Err(Error::ContractViolation(format!(
                "pair ({}, {}) does not give an isometry",
                alpha1.value(),
                u8::from(eps)
            )));
        }
        elements.push(OrtElement {
            label: OrtLabel::Pair { alpha1, eps },
            action: Some(action),
        });
    }
    Ok(OrtGroup {
        spec,
        kind: OrtKind::DegeneratePair,
        model: None,
        elements: sorted(elements),
    })
}

/// `Arf⟨L, Ω'⟩` for the projection `Ω' = Ω + B(Ω,ℓ) P + B(Ω,P) ℓ`, with `ℓ`
/// scaled so that `B(P, ℓ) = 1`. Computed directly and checked against the
/// closed form of [`translation_closed_form`].
pub fn translation_invariant(g: &Geometry, ell: &ProjPoint) -> Result<ArfValue> {
    let (omega_prime, _) = translation_setup(g, ell)?;
    let direct = g.with_omega(ProjPoint::new(&omega_prime).map_err(|_| Error::DegenerateOmega)?)?;
    let l = g.l().vector();
    let b = direct.b(&omega_prime, l);
    let value = if b.is_zero() {
        ArfValue::Infinity
    } else {
        ArfValue::Finite(direct.q(l) * direct.q(&omega_prime) / b.square())
    };
    let closed = translation_closed_form(g, ell)?;
    if closed != value {
        return Err(Error::ContractViolation(format!(
            "translation invariant: projection gives {value}, closed form gives {closed}"
        )));
    }
    Ok(value)
}

fn translation_setup(g: &Geometry, ell: &ProjPoint) -> Result<(Vector, Vector)> {
    require_independent_line(g, ell)?;
    let (o, p) = (g.omega().vector(), g.p().vector());
    let bp = g.b(p, ell.vector());
    if bp.is_zero() {
        return Err(Error::IdealLine);
    }
    if !g.q(ell.vector()).is_zero() {
        return Err(Error::PreconditionViolated("ℓ is not a hypercycle".into()));
    }
    let ell = linalg::scale(bp.inv().expect("non-zero"), ell.vector());
    let omega_prime = linalg::axpy(&linalg::axpy(o, g.b(o, &ell), p), g.b(o, p), &ell);
    Ok((omega_prime, ell))
}

/// The closed form for the translation invariant, by case on `Arf⟨Ω, P⟩`
/// (`b = B(Ω, ℓ)` with `B(P, ℓ) = 1`):
/// `∞`: `Arf(L) + Q(L)Q(P) b² / B(Ω,L)²`;
/// finite non-zero: `Arf(L) + ρ 𝔥(Q(P) b / B(Ω,P))`;
/// `0`: `Arf(L) + Q(L) b B(Ω,P) / B(Ω,L)²`.
/// `B(Ω, L) = 0` gives `∞`.
pub fn translation_closed_form(g: &Geometry, ell: &ProjPoint) -> Result<ArfValue> {
    let (_, ell) = translation_setup(g, ell)?;
    let (o, p, l) = (g.omega().vector(), g.p().vector(), g.l().vector());
    let arf_l = match g.arf_of_vector(l)? {
        ArfValue::Infinity => return Ok(ArfValue::Infinity),
        ArfValue::Finite(x) => x,
    };
    let b = g.b(o, &ell);
    let (ql, qp, bl, bp) = (g.q(l), g.q(p), g.b(o, l), g.b(o, p));
    let value = match g.arf_of_vector(p)? {
        ArfValue::Infinity => arf_l + ql * qp * b.square() / bl.square(),
        ArfValue::Finite(arf_p) if arf_p.is_zero() => arf_l + ql * b * bp / bl.square(),
        ArfValue::Finite(arf_p) => arf_l + arf_l / arf_p * (qp * b / bp).artin_schreier(),
    };
    Ok(ArfValue::Finite(value))
}

/// Non-ideal points on a cycle with a fixed ratio `B(Ω, p) / B(L, p)`,
/// and their orbits under the line group of the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointOrbit {
    pub points: Vec<ProjPoint>,
    pub orbits: Vec<Vec<ProjPoint>>,
    pub plus_orbits: Vec<Vec<ProjPoint>>,
    pub transitive: bool,
}

/// `ratio = None` stands for `∞`, i.e. `B(L, p) = 0`; non-ideal points
/// never have that ratio.
pub fn point_orbit(g: &Geometry, c: &ProjPoint, ratio: Option<FieldElement>) -> Result<PointOrbit> {
    let spec = g.spec();
    let (o, l) = (g.omega().vector(), g.l().vector());
    let mut fr = frame(g, c);
    let points: Vec<ProjPoint> = geometry::quadric_points(g)?
        .into_iter()
        .filter(|x| {
            let flags = geometry::classify_cycle(g, x);
            if !flags.point || flags.ideal || !geometry::incident(g, c, x) {
                return false;
            }
            fr.push(x.vector().clone());
            let independent = linalg::rank(spec, &fr) == 5;
            fr.pop();
            let bl = g.b(l, x.vector());
            let r = (!bl.is_zero()).then(|| g.b(o, x.vector()) / bl);
            independent && r == ratio
        })
        .collect();
    if points.is_empty() {
        return Ok(PointOrbit {
            points,
            orbits: Vec::new(),
            plus_orbits: Vec::new(),
            transitive: true,
        });
    }
    let lg = line_group(g, c)?;
    let plus = ort_plus(&lg)?;
    let orbits_of = |grp: &OrtGroup| -> Vec<Vec<ProjPoint>> {
        let act = grp.action_group().expect("line groups act on V");
        let vecs: Vec<Vector> = points.iter().map(|p| p.vector().clone()).collect();
        act.orbits(&vecs, true)
            .into_iter()
            .map(|orb| {
                orb.into_iter()
                    .map(|v| ProjPoint::new(&v).expect("non-zero"))
                    .collect()
            })
            .collect()
    };
    let orbits = orbits_of(&lg);
    let plus_orbits = orbits_of(&plus);
    let transitive = orbits.len() == 1 && orbits[0].len() == points.len();
    Ok(PointOrbit {
        points,
        orbits,
        plus_orbits,
        transitive,
    })
}

fn require_distance_setup(g: &Geometry, ell: &ProjPoint, pts: [&ProjPoint; 2]) -> Result<()> {
    let lf = geometry::classify_cycle(g, ell);
    if !(lf.line && lf.real && !lf.ideal && lf.independent) {
        return Err(Error::PreconditionViolated(
            "ℓ must be a real non-ideal independent line".into(),
        ));
    }
    for p in pts {
        let pf = geometry::classify_cycle(g, p);
        if !(pf.point && pf.real && !pf.ideal && geometry::incident(g, ell, p)) {
            return Err(Error::PreconditionViolated(format!(
                "{p} must be a real non-ideal point on ℓ"
            )));
        }
    }
    Ok(())
}

/// The unique element of `Ort⁺` of the line group of `ℓ` carrying `p1` to
/// `p2` (projectively).
pub fn oriented_distance(
    g: &Geometry,
    ell: &ProjPoint,
    p1: &ProjPoint,
    p2: &ProjPoint,
) -> Result<OrtElement> {
    require_distance_setup(g, ell, [p1, p2])?;
    let plus = ort_plus(&line_group(g, ell)?)?;
    let movers: Vec<&OrtElement> = plus
        .elements()
        .iter()
        .filter(|x| {
            let m = x.action.as_ref().expect("line groups act on V");
            ProjPoint::new(&m.mul_vec(p1.vector())).as_ref() == Ok(p2)
        })
        .collect();
    match movers.len() {
        0 => Err(Error::NotConnected),
        1 => Ok(movers[0].clone()),
        k => {
            log::warn!("{k} elements of Ort⁺ send {p1} to {p2}");
            Err(Error::AmbiguousDistance(k))
        }
    }
}

/// `{γ, γ⁻¹}` for the oriented distance `γ`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DistanceClass {
    pub pair: Vec<OrtElement>,
}

impl Serialize for DistanceClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pair.serialize(s)
    }
}

pub fn distance_class(group: &OrtGroup, gamma: &OrtElement) -> DistanceClass {
    let mut pair = vec![gamma.clone(), group.inverse(gamma)];
    pair.sort();
    pair.dedup();
    DistanceClass { pair }
}

pub fn distance(
    g: &Geometry,
    ell: &ProjPoint,
    p1: &ProjPoint,
    p2: &ProjPoint,
) -> Result<DistanceClass> {
    let gamma = oriented_distance(g, ell, p1, p2)?;
    let plus = ort_plus(&line_group(g, ell)?)?;
    Ok(distance_class(&plus, &gamma))
}

/// Real non-ideal independent lines of a geometry (hypercycles only).
pub fn real_lines(g: &Geometry) -> Result<Vec<ProjPoint>> {
    Ok(geometry::quadric_points(g)?
        .into_iter()
        .filter(|c| {
            let f = geometry::classify_cycle(g, c);
            f.line && f.real && !f.ideal && f.independent
        })
        .collect())
}

/// Real non-ideal points incident to `ell`.
pub fn real_points_on(g: &Geometry, ell: &ProjPoint) -> Result<Vec<ProjPoint>> {
    Ok(geometry::quadric_points(g)?
        .into_iter()
        .filter(|c| {
            let f = geometry::classify_cycle(g, c);
            f.point && f.real && !f.ideal && geometry::incident(g, ell, c)
        })
        .collect())
}

/// Expected order of `Ort(α)` for a finite class: `2(q − 1)` or `2(q + 1)`.
pub fn expected_orthogonal_order(spec: FieldSpec, class: ArfClass) -> Option<usize> {
    let q = spec.order() as usize;
    match class {
        ArfClass::Zero => Some(2 * (q - 1)),
        ArfClass::E => Some(2 * (q + 1)),
        ArfClass::Infinity => None,
    }
}
