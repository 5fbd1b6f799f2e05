//! Two-dimensional universal conformal geometries `(V, Q, Ω, P, L)` with
//! `dim V = 6` over GF(2^n).
//!
//! Hypercycles are the projective points of the quadric `Q = 0`. A cycle
//! `c` is a point when `B(P, c) = 0`, a line when `B(L, c) = 0`, and real
//! when `B(Ω, c) = 0`. The invariants `Arf⟨Ω, P⟩` and `Arf⟨Ω, L⟩` place the
//! geometry in one of nine classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ArfClass, ArfValue, FieldElement, FieldSpec};
use crate::linalg::{self, Matrix, Vector};
use crate::quadratic::QuadraticForm;

/// Projective enumerations are limited to `n · 6 ≤ 24`.
pub const PROJECTIVE_LIMIT: u32 = 24;

/// A point of `P(V)` represented by the vector whose first non-zero
/// coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    rep: Vector,
}

impl ProjPoint {
    pub fn new(v: &[FieldElement]) -> Result<Self> {
        if linalg::is_zero(v) {
            return Err(Error::ZeroVector);
        }
        Ok(ProjPoint {
            rep: crate::group::canonical_scaling(v),
        })
    }

    pub fn from_ints(spec: FieldSpec, values: &[u32]) -> Result<Self> {
        ProjPoint::new(&linalg::vector_from_ints(spec, values)?)
    }

    pub fn vector(&self) -> &Vector {
        &self.rep
    }

    pub fn to_ints(&self) -> Vec<u32> {
        linalg::vector_to_ints(&self.rep)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.rep.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", x.value())?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_ints().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CycleFlags {
    pub hypercycle: bool,
    pub point: bool,
    pub line: bool,
    pub ideal: bool,
    pub real: bool,
    pub independent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    form: QuadraticForm,
    omega: ProjPoint,
    p: ProjPoint,
    l: ProjPoint,
    violations: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct GeometryRepr {
    field: FieldSpec,
    form: QuadraticForm,
    omega: Vec<u32>,
    #[serde(rename = "P")]
    p: Vec<u32>,
    #[serde(rename = "L")]
    l: Vec<u32>,
}

impl Serialize for Geometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GeometryRepr {
            field: self.spec(),
            form: self.form.clone(),
            omega: self.omega.to_ints(),
            p: self.p.to_ints(),
            l: self.l.to_ints(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Geometry {
    /// Accepts raw vectors and canonicalizes them. Invalid geometries load
    /// successfully; their violations are reported by [`validate_geometry`].
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = GeometryRepr::deserialize(d)?;
        if repr.form.spec() != repr.field {
            return Err(D::Error::custom(Error::FieldMismatch));
        }
        let point = |v: &[u32]| ProjPoint::from_ints(repr.field, v).map_err(D::Error::custom);
        let (omega, p, l) = (point(&repr.omega)?, point(&repr.p)?, point(&repr.l)?);
        Geometry::from_parts(repr.form, omega, p, l).map_err(D::Error::custom)
    }
}

impl Geometry {
    /// Assembles a geometry without rejecting violated assumptions; only
    /// shape errors (dimensions, fields) are fatal.
    pub fn from_parts(
        form: QuadraticForm,
        omega: ProjPoint,
        p: ProjPoint,
        l: ProjPoint,
    ) -> Result<Self> {
        for x in [&omega, &p, &l] {
            if x.rep.len() != form.dim() {
                return Err(Error::DimMismatch {
                    expected: form.dim(),
                    got: x.rep.len(),
                });
            }
            if x.rep[0].spec() != form.spec() {
                return Err(Error::FieldMismatch);
            }
        }
        let mut g = Geometry {
            form,
            omega,
            p,
            l,
            violations: Vec::new(),
        };
        g.violations = g.find_violations();
        Ok(g)
    }

    /// As [`Geometry::from_parts`], rejecting any violated assumption.
    pub fn new(form: QuadraticForm, omega: ProjPoint, p: ProjPoint, l: ProjPoint) -> Result<Self> {
        let g = Geometry::from_parts(form, omega, p, l)?;
        if g.violations.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidGeometry(g.violations))
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.form.spec()
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn omega(&self) -> &ProjPoint {
        &self.omega
    }

    pub fn p(&self) -> &ProjPoint {
        &self.p
    }

    pub fn l(&self) -> &ProjPoint {
        &self.l
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn q(&self, v: &[FieldElement]) -> FieldElement {
        self.form.q(v)
    }

    pub fn b(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        self.form.b(u, v)
    }

    /// The same form, `P` and `L` with a different `Ω`.
    pub fn with_omega(&self, omega: ProjPoint) -> Result<Self> {
        Geometry::from_parts(self.form.clone(), omega, self.p.clone(), self.l.clone())
    }

    /// `Arf⟨Ω, x⟩ = Q(x) Q(Ω) / B(x, Ω)²`, or `∞` when `x ⊥ Ω`.
    pub fn arf_of_vector(&self, x: &[FieldElement]) -> Result<ArfValue> {
        let omega = self.omega.vector();
        if linalg::rank(self.spec(), &[omega.clone(), x.to_vec()]) < 2 {
            return Err(Error::NotDefined);
        }
        let b = self.b(omega, x);
        if b.is_zero() {
            return Ok(ArfValue::Infinity);
        }
        Ok(ArfValue::Finite(self.q(x) * self.q(omega) / b.square()))
    }

    fn find_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let spec = self.spec();
        if self.form.dim() != 6 {
            out.push(format!("dim V is {}, expected 6", self.form.dim()));
        }
        if !self.form.radical().is_zero() {
            out.push("Q has a non-trivial radical".into());
        }
        if !self.form.is_bilinear_nondegenerate() {
            out.push("B is degenerate".into());
        }
        let (o, p, l) = (self.omega.vector(), self.p.vector(), self.l.vector());
        if !self.b(p, l).is_zero() {
            out.push("assumption (0): B(P, L) ≠ 0".into());
        }
        if linalg::rank(spec, &[o.clone(), p.clone(), l.clone()]) < 3 {
            out.push("assumption (1): Ω, P, L are linearly dependent".into());
        }
        for (name, x) in [("P", p), ("L", l)] {
            if self.q(x).is_zero() && self.b(o, x).is_zero() {
                out.push(format!(
                    "assumption (2): Q({name}) = 0 and Arf⟨Ω, {name}⟩ = ∞"
                ));
            }
        }
        if self.q(o).is_zero() {
            out.push("Q(Ω) = 0".into());
        }
        let omega_perp = self.form.orthogonal_complement(std::slice::from_ref(o));
        let restricted = self.form.restrict(omega_perp.basis());
        if restricted.bilinear_kernel().is_zero() {
            out.push("B restricted to Ω⊥ is non-degenerate".into());
        }
        out
    }
}

/// Violations of the geometry assumptions, recomputed from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_geometry(g: &Geometry) -> ValidationReport {
    ValidationReport {
        violations: g.find_violations(),
    }
}

/// The nine cells of the classification table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryName {
    Elliptic,
    Parabolic,
    Hyperbolic,
    DualParabolic,
    LaguerreGalilei,
    DualMinkowski,
    DualHyperbolic,
    Minkowski,
    AntiDeSitter,
}

impl GeometryName {
    /// Rows are indexed by the class of `Arf(P)`, columns by that of
    /// `Arf(L)`, both in the order `e, ∞, 0`.
    pub const TABLE: [[GeometryName; 3]; 3] = [
        [
            GeometryName::Elliptic,
            GeometryName::Parabolic,
            GeometryName::Hyperbolic,
        ],
        [
            GeometryName::DualParabolic,
            GeometryName::LaguerreGalilei,
            GeometryName::DualMinkowski,
        ],
        [
            GeometryName::DualHyperbolic,
            GeometryName::Minkowski,
            GeometryName::AntiDeSitter,
        ],
    ];

    pub fn lookup(arf_p: ArfClass, arf_l: ArfClass) -> GeometryName {
        let idx = |c: ArfClass| ArfClass::ALL.iter().position(|&x| x == c).expect("listed");
        Self::TABLE[idx(arf_p)][idx(arf_l)]
    }

    /// Machine name, e.g. `laguerre-galilei`.
    pub fn as_str(self) -> &'static str {
        match self {
            GeometryName::Elliptic => "elliptic",
            GeometryName::Parabolic => "parabolic",
            GeometryName::Hyperbolic => "hyperbolic",
            GeometryName::DualParabolic => "dual-parabolic",
            GeometryName::LaguerreGalilei => "laguerre-galilei",
            GeometryName::DualMinkowski => "dual-minkowski",
            GeometryName::DualHyperbolic => "dual-hyperbolic",
            GeometryName::Minkowski => "minkowski",
            GeometryName::AntiDeSitter => "anti-de-sitter",
        }
    }

    /// Name as shown in the table, e.g. `Laguerre/Galilei`.
    pub fn display_name(self) -> &'static str {
        match self {
            GeometryName::Elliptic => "elliptic",
            GeometryName::Parabolic => "parabolic",
            GeometryName::Hyperbolic => "hyperbolic",
            GeometryName::DualParabolic => "dual parabolic",
            GeometryName::LaguerreGalilei => "Laguerre/Galilei",
            GeometryName::DualMinkowski => "dual Minkowski",
            GeometryName::DualHyperbolic => "dual hyperbolic",
            GeometryName::Minkowski => "Minkowski",
            GeometryName::AntiDeSitter => "anti-de Sitter",
        }
    }
}

impl fmt::Display for GeometryName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeometryClass {
    pub name: GeometryName,
    pub arf_p: ArfClass,
    pub arf_l: ArfClass,
}

/// Builds a geometry with prescribed `Arf⟨Ω, P⟩`, `Arf⟨Ω, L⟩` and total
/// Arf class of `V` (class 0 by default).
///
/// `V₀ = ⟨Ω, P, L⟩` gets `Q(Ω) = 1` and `B(P, L) = 0`. A finite target `a`
/// for `P` is realized by `B(Ω, P) = 1`, `Q(P) = a`; the target `∞` by
/// `B(Ω, P) = 0`, `Q(P) = 1`. Likewise for `L`. `V₀` is then paired with
/// three vectors `f_i` (`B(e_i, f_j) = δ_ij`, `B(f_i, f_j) = 0`) and the
/// norms of the `f_i` are adjusted until the total Arf class matches.
pub fn build_geometry(
    spec: FieldSpec,
    arf_p: ArfValue,
    arf_l: ArfValue,
    arf_v: Option<ArfValue>,
) -> Result<Geometry> {
    for v in [arf_p, arf_l].into_iter().chain(arf_v) {
        if let ArfValue::Finite(x) = v {
            if x.spec() != spec {
                return Err(Error::FieldMismatch);
            }
        }
    }
    let target = match arf_v.unwrap_or(ArfValue::Finite(spec.zero())) {
        ArfValue::Finite(x) => ArfValue::Finite(x).class(),
        ArfValue::Infinity => {
            return Err(Error::BuildFailed(
                "a non-degenerate space of dimension 6 has finite Arf invariant".into(),
            ))
        }
    };
    let mut c = Matrix::zeros(spec, 6, 6);
    c[(0, 0)] = spec.one();
    for (i, arf) in [(1, arf_p), (2, arf_l)] {
        match arf {
            ArfValue::Finite(a) => {
                c[(0, i)] = spec.one();
                c[(i, i)] = a;
            }
            ArfValue::Infinity => c[(i, i)] = spec.one(),
        }
    }
    for i in 0..3 {
        c[(i, i + 3)] = spec.one();
    }
    let basis: Vec<Vector> = (0..3).map(|i| linalg::unit_vector(spec, 6, i)).collect();
    let omega = ProjPoint::new(&basis[0])?;
    let p = ProjPoint::new(&basis[1])?;
    let l = ProjPoint::new(&basis[2])?;
    for k in [5, 4, 3] {
        for t in spec.elements() {
            let mut ck = c.clone();
            ck[(k, k)] = t;
            let form = QuadraticForm::new(ck)?;
            if form.arf_invariant()?.class() == target {
                log::debug!("build: Q(f{}) = {}", k - 2, t.value());
                return Geometry::new(form, omega, p, l)
                    .map_err(|e| Error::BuildFailed(e.to_string()));
            }
        }
    }
    Err(Error::BuildFailed(format!(
        "no embedding with total Arf class {}",
        target.as_str()
    )))
}

pub fn classify_cycle(g: &Geometry, c: &ProjPoint) -> CycleFlags {
    let v = c.vector();
    let point = g.b(g.p.vector(), v).is_zero();
    let line = g.b(g.l.vector(), v).is_zero();
    let frame = [
        g.omega.vector().clone(),
        g.p.vector().clone(),
        g.l.vector().clone(),
        v.clone(),
    ];
    CycleFlags {
        hypercycle: g.q(v).is_zero(),
        point,
        line,
        ideal: point && line,
        real: g.b(g.omega.vector(), v).is_zero(),
        independent: linalg::rank(g.spec(), &frame) == 4,
    }
}

pub fn incident(g: &Geometry, c1: &ProjPoint, c2: &ProjPoint) -> bool {
    g.b(c1.vector(), c2.vector()).is_zero()
}

pub fn arf_of(g: &Geometry, x: &ProjPoint) -> Result<ArfValue> {
    g.arf_of_vector(x.vector())
}

pub fn classify_geometry(g: &Geometry) -> Result<GeometryClass> {
    let arf_p = arf_of(g, &g.p)?.class();
    let arf_l = arf_of(g, &g.l)?.class();
    Ok(GeometryClass {
        name: GeometryName::lookup(arf_p, arf_l),
        arf_p,
        arf_l,
    })
}

/// Predicted `Arf⟨Ω', X⟩` after `Ω' = Ω + αP + βL`, where `(x, a)` is the
/// cycle being tracked with its coefficient and `(y, b)` the other one.
///
/// `B(Ω', X) = B(Ω, X)` and `Q(X)` do not move, so `∞` and `0` stay put.
/// When `Q(Y)` and `B(Ω, Y)` are both non-zero the prediction is
/// `Arf(X) + B(Ω,Y)² Q(X) / (Q(Y) B(Ω,X)²) 𝔥(b Q(Y)/B(Ω,Y)) + 𝔥(a Q(X)/B(Ω,X))`;
/// otherwise the same expression with denominators cleared,
/// `Arf(X) + Q(X)/B(Ω,X)² (b² Q(Y) + b B(Ω,Y) + a² Q(X) + a B(Ω,X))`.
fn predict_arf(
    g: &Geometry,
    x: &[FieldElement],
    a: FieldElement,
    y: &[FieldElement],
    b: FieldElement,
) -> Result<ArfValue> {
    let o = g.omega.vector();
    let (qx, bx) = (g.q(x), g.b(o, x));
    let (qy, by) = (g.q(y), g.b(o, y));
    if bx.is_zero() {
        return Ok(ArfValue::Infinity);
    }
    let current = g.arf_of_vector(x)?.finite().expect("B(Ω, X) ≠ 0");
    if qx.is_zero() {
        return Ok(ArfValue::Finite(current));
    }
    let value = if !qy.is_zero() && !by.is_zero() {
        current
            + by.square() * qx / (qy * bx.square()) * (b * qy / by).artin_schreier()
            + (a * qx / bx).artin_schreier()
    } else {
        current + qx / bx.square() * (b.square() * qy + b * by + a.square() * qx + a * bx)
    };
    Ok(ArfValue::Finite(value))
}

/// The rule "if either value is `0` or `∞`, both stay unchanged", kept
/// for comparison against recomputation. The oracle records where it
/// fails.
pub fn literal_replacement_prediction(
    g: &Geometry,
    alpha: FieldElement,
    beta: FieldElement,
) -> Result<(ArfValue, ArfValue)> {
    let arf_p = arf_of(g, &g.p)?;
    let arf_l = arf_of(g, &g.l)?;
    if arf_p.is_zero_or_infinite() || arf_l.is_zero_or_infinite() {
        return Ok((arf_l, arf_p));
    }
    let (p, l) = (g.p.vector().clone(), g.l.vector().clone());
    Ok((
        predict_arf(g, &l, beta, &p, alpha)?,
        predict_arf(g, &p, alpha, &l, beta)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub geometry: Geometry,
    pub predicted_l: ArfValue,
    pub predicted_p: ArfValue,
}

/// Replaces `Ω` by `Ω + αP + βL` and predicts the new Arf values from the
/// old geometry.
pub fn replace_omega(g: &Geometry, alpha: FieldElement, beta: FieldElement) -> Result<Replacement> {
    if alpha.spec() != g.spec() || beta.spec() != g.spec() {
        return Err(Error::FieldMismatch);
    }
    let (p, l) = (g.p.vector().clone(), g.l.vector().clone());
    let omega = linalg::axpy(&linalg::axpy(g.omega.vector(), alpha, &p), beta, &l);
    if g.q(&omega).is_zero() {
        return Err(Error::DegenerateOmega);
    }
    let predicted_l = predict_arf(g, &l, beta, &p, alpha)?;
    let predicted_p = predict_arf(g, &p, alpha, &l, beta)?;
    Ok(Replacement {
        geometry: g.with_omega(ProjPoint::new(&omega)?)?,
        predicted_l,
        predicted_p,
    })
}

/// Invariant identifying a geometry up to Ω-replacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum TransformationClass {
    /// One of the values is `0` or `∞`: both exact values.
    Exact { arf_p: ArfValue, arf_l: ArfValue },
    /// Both finite and non-zero with `ρ = Arf(L)/Arf(P) ≠ 1`.
    Ratio { rho: FieldElement },
    /// `ρ = 1`: the class of `Arf(L)`.
    Class { arf_l: ArfClass },
}

pub fn transformation_class(g: &Geometry) -> Result<TransformationClass> {
    let arf_p = arf_of(g, &g.p)?;
    let arf_l = arf_of(g, &g.l)?;
    match (arf_p, arf_l) {
        (ArfValue::Finite(a), ArfValue::Finite(b)) if !a.is_zero() && !b.is_zero() => {
            let rho = b / a;
            if rho.is_one() {
                Ok(TransformationClass::Class {
                    arf_l: arf_l.class(),
                })
            } else {
                Ok(TransformationClass::Ratio { rho })
            }
        }
        _ => Ok(TransformationClass::Exact { arf_p, arf_l }),
    }
}

fn projective_guard(spec: FieldSpec, dim: usize) -> Result<()> {
    let bits = spec.degree() * dim as u32;
    if bits > PROJECTIVE_LIMIT {
        return Err(Error::TooLarge(format!(
            "projective enumeration of 2^{bits} vectors exceeds 2^{PROJECTIVE_LIMIT}"
        )));
    }
    Ok(())
}

/// Every projective point of `P(V)`.
pub fn projective_points(g: &Geometry) -> Result<Vec<ProjPoint>> {
    projective_guard(g.spec(), g.form.dim())?;
    Ok(linalg::projective_points(g.spec(), g.form.dim())
        .map(|rep| ProjPoint { rep })
        .collect())
}

/// The Lie quadric: all projective points with `Q = 0`, sorted.
pub fn quadric_points(g: &Geometry) -> Result<Vec<ProjPoint>> {
    form_quadric_points(&g.form)
}

pub fn form_quadric_points(form: &QuadraticForm) -> Result<Vec<ProjPoint>> {
    projective_guard(form.spec(), form.dim())?;
    let mut pts: Vec<ProjPoint> = linalg::projective_points(form.spec(), form.dim())
        .filter(|v| form.q(v).is_zero())
        .map(|rep| ProjPoint { rep })
        .collect();
    pts.sort();
    Ok(pts)
}

/// Completes `e` (with `Q(e) = 0`) and `w` (with `B(e, w) ≠ 0`) to a
/// hyperbolic pair `(e, f)`.
fn hyperbolic_partner(form: &QuadraticForm, e: &[FieldElement], w: &[FieldElement]) -> Vector {
    let b = form.b(e, w);
    let w = linalg::scale(b.inv().expect("B(e, w) ≠ 0"), w);
    linalg::axpy(&w, form.q(&w), e)
}

/// A basis in which the form is the sum of three hyperbolic planes, built
/// from hypercycles `ℓ, p` with `ℓ ⊥ L`, `p ⊥ P`, `p ⊥ ℓ`, `B(ℓ, P) ≠ 0`
/// and `B(p, L) ≠ 0`: `⟨ℓ, P⟩` and `⟨p, L⟩` are then orthogonal hyperbolic
/// planes and their complement is hyperbolic when the total Arf class is 0.
///
/// Columns of the result are `(e₁, f₁, e₂, f₂, e₃, f₃)`. Returns `None`
/// when no such pair exists or the total Arf class is `e`.
pub fn normal_form(g: &Geometry) -> Result<Option<Matrix>> {
    let form = &g.form;
    if form.arf_invariant()?.class() != ArfClass::Zero {
        return Ok(None);
    }
    let (pv, lv) = (g.p.vector(), g.l.vector());
    let quadric = quadric_points(g)?;
    let ells: Vec<&Vector> = quadric
        .iter()
        .map(ProjPoint::vector)
        .filter(|c| g.b(c, lv).is_zero() && !g.b(c, pv).is_zero())
        .collect();
    let ps: Vec<&Vector> = quadric
        .iter()
        .map(ProjPoint::vector)
        .filter(|c| g.b(c, pv).is_zero() && !g.b(c, lv).is_zero())
        .collect();
    for ell in &ells {
        for p in &ps {
            if !g.b(ell, p).is_zero() {
                continue;
            }
            let f1 = hyperbolic_partner(form, ell, pv);
            let f2 = hyperbolic_partner(form, p, lv);
            let first = [ell.to_vec(), f1, p.to_vec(), f2];
            let rest = form.orthogonal_complement(&first);
            let w = form.restrict(rest.basis());
            let (t, c) = w.canonical_basis()?;
            let (_, root) = match c.solve_artin_schreier() {
                Some(roots) => roots,
                None => return Ok(None),
            };
            // in the canonical basis (u, v): Q(r u + v) = r² + r + c = 0
            let to_ambient = |coords: &[FieldElement]| {
                let mut out = linalg::zero_vector(g.spec(), 6);
                for (x, b) in t.mul_vec(coords).iter().zip(rest.basis()) {
                    out = linalg::axpy(&out, *x, b);
                }
                out
            };
            let u = to_ambient(&[g.spec().one(), g.spec().zero()]);
            let v = to_ambient(&[g.spec().zero(), g.spec().one()]);
            let e3 = linalg::axpy(&v, root, &u);
            let f3 = hyperbolic_partner(form, &e3, &u);
            let mut cols = first.to_vec();
            cols.push(e3);
            cols.push(f3);
            return Ok(Some(Matrix::from_columns(g.spec(), &cols)));
        }
    }
    Ok(None)
}

/// The form of three orthogonal hyperbolic planes.
pub fn hyperbolic_sum(spec: FieldSpec) -> QuadraticForm {
    let h = QuadraticForm::hyperbolic_plane(spec);
    h.direct_sum(&h).direct_sum(&h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(spec: FieldSpec) -> [ArfValue; 3] {
        [
            ArfValue::Finite(spec.arf_e()),
            ArfValue::Infinity,
            ArfValue::Finite(spec.zero()),
        ]
    }

    #[test]
    fn proj_point_canonical() {
        let f = FieldSpec::gf(2);
        let p = ProjPoint::from_ints(f, &[0, 2, 3, 0, 0, 1]).unwrap();
        assert_eq!(p.to_ints()[..2], [0, 1]);
        let q = ProjPoint::from_ints(f, &[0, 3, 1, 0, 0, 2]).unwrap();
        assert_eq!(p, q);
        assert_eq!(ProjPoint::from_ints(f, &[0; 6]), Err(Error::ZeroVector));
    }

    #[test]
    fn projective_point_count() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            let q = f.order() as usize;
            let pts: Vec<Vector> = linalg::projective_points(f, 3).collect();
            assert_eq!(pts.len(), (q * q * q - 1) / (q - 1));
            let mut canon: Vec<Vector> = pts
                .iter()
                .map(|v| crate::group::canonical_scaling(v))
                .collect();
            canon.sort();
            canon.dedup();
            assert_eq!(canon.len(), pts.len());
        }
    }

    #[test]
    fn built_geometries_classify_back() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            for a in classes(f) {
                for b in classes(f) {
                    let g = build_geometry(f, a, b, None).unwrap();
                    assert!(validate_geometry(&g).is_valid());
                    assert_eq!(arf_of(&g, g.p()).unwrap(), a);
                    assert_eq!(arf_of(&g, g.l()).unwrap(), b);
                    let cls = classify_geometry(&g).unwrap();
                    assert_eq!((cls.arf_p, cls.arf_l), (a.class(), b.class()));
                    assert_eq!(g.form().arf_invariant().unwrap().class(), ArfClass::Zero);
                }
            }
        }
    }

    #[test]
    fn anchor_cells() {
        let f = FieldSpec::gf(1);
        let [e, inf, zero] = classes(f);
        let name = |a, b| {
            classify_geometry(&build_geometry(f, a, b, None).unwrap())
                .unwrap()
                .name
        };
        assert_eq!(name(e, e), GeometryName::Elliptic);
        assert_eq!(name(inf, inf), GeometryName::LaguerreGalilei);
        assert_eq!(name(zero, inf), GeometryName::Minkowski);
        assert_eq!(
            GeometryName::LaguerreGalilei.display_name(),
            "Laguerre/Galilei"
        );
    }

    #[test]
    fn infinite_build_rescales() {
        let f = FieldSpec::gf(1);
        let g = build_geometry(f, ArfValue::Infinity, ArfValue::Infinity, None).unwrap();
        let o = g.omega().vector();
        assert!(g.b(o, g.p().vector()).is_zero());
        assert!(g.b(o, g.l().vector()).is_zero());
        assert!(g.q(g.p().vector()).is_one());
        assert!(g.q(g.l().vector()).is_one());
    }

    #[test]
    fn violations_are_reported() {
        let f = FieldSpec::gf(1);
        let g = build_geometry(f, classes(f)[0], classes(f)[0], None).unwrap();
        let same = Geometry::from_parts(
            g.form().clone(),
            g.omega().clone(),
            g.p().clone(),
            g.p().clone(),
        )
        .unwrap();
        let report = validate_geometry(&same);
        assert!(report.violations.iter().any(|v| v.contains("(1)")));
        // f3 pairs with L, so P + f3 breaks P ⊥ L
        let p_plus = ProjPoint::from_ints(f, &[0, 1, 0, 0, 0, 1]).unwrap();
        let bad = Geometry::from_parts(g.form().clone(), g.omega().clone(), p_plus, g.l().clone())
            .unwrap();
        assert!(!bad.is_valid());
        assert!(bad.violations().iter().any(|v| v.contains("(0)")));
        assert!(matches!(
            Geometry::new(
                g.form().clone(),
                g.omega().clone(),
                g.p().clone(),
                g.p().clone()
            ),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn arf_of_examples() {
        let f = FieldSpec::gf(2);
        let g = build_geometry(f, ArfValue::Finite(f.elem(2)), ArfValue::Infinity, None).unwrap();
        assert_eq!(arf_of(&g, g.p()).unwrap(), ArfValue::Finite(f.elem(2)));
        let plane = g
            .form()
            .restrict(&[g.omega().vector().clone(), g.p().vector().clone()]);
        assert_eq!(plane.arf_invariant().unwrap(), ArfValue::Finite(f.elem(2)));
        assert_eq!(arf_of(&g, g.omega()), Err(Error::NotDefined));
        for x in linalg::projective_points(f, 6).take(200) {
            if let Ok(a) = g.arf_of_vector(&x) {
                for s in f.nonzero_elements() {
                    assert_eq!(g.arf_of_vector(&linalg::scale(s, &x)).unwrap(), a);
                }
            }
        }
    }

    #[test]
    fn hypercycle_count_and_flags() {
        let f = FieldSpec::gf(1);
        let e = ArfValue::Finite(f.one());
        let g = build_geometry(f, e, e, None).unwrap();
        assert_eq!(projective_points(&g).unwrap().len(), 63);
        let quadric = quadric_points(&g).unwrap();
        assert_eq!(quadric.len(), 35);
        for c in projective_points(&g).unwrap() {
            let flags = classify_cycle(&g, &c);
            assert_eq!(flags.hypercycle, quadric.binary_search(&c).is_ok());
            assert_eq!(flags.ideal, flags.point && flags.line);
            assert!(incident(&g, &c, &c));
        }
        let minus = build_geometry(f, e, e, Some(e)).unwrap();
        assert_eq!(quadric_points(&minus).unwrap().len(), 27);
    }

    #[test]
    fn dependent_line_in_the_orthogonal_case() {
        let f = FieldSpec::gf(1);
        for p_arf in classes(f) {
            let g = build_geometry(f, p_arf, ArfValue::Infinity, None).unwrap();
            let (o, l) = (g.omega().vector(), g.l().vector());
            let ell = linalg::axpy(&linalg::scale(g.q(o).sqrt(), l), g.q(l).sqrt(), o);
            let flags = classify_cycle(&g, &ProjPoint::new(&ell).unwrap());
            assert!(flags.hypercycle && flags.line && flags.real && !flags.independent);
            for c in quadric_points(&g).unwrap() {
                let fl = classify_cycle(&g, &c);
                if fl.line
                    && fl.real
                    && !fl.ideal
                    && c.vector() != &crate::group::canonical_scaling(&ell)
                {
                    assert!(fl.independent, "{c}");
                }
            }
        }
    }

    #[test]
    fn identity_replacement() {
        let f = FieldSpec::gf(2);
        let g = build_geometry(
            f,
            ArfValue::Finite(f.elem(2)),
            ArfValue::Finite(f.elem(3)),
            None,
        )
        .unwrap();
        let r = replace_omega(&g, f.zero(), f.zero()).unwrap();
        assert_eq!(r.geometry, g);
        assert_eq!(r.predicted_l, arf_of(&g, g.l()).unwrap());
        assert_eq!(r.predicted_p, arf_of(&g, g.p()).unwrap());
    }

    #[test]
    fn replacement_predictions_match_recomputation() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            let mut values: Vec<ArfValue> = f.elements().map(ArfValue::Finite).collect();
            values.push(ArfValue::Infinity);
            for &a in &values {
                for &b in &values {
                    let g = build_geometry(f, a, b, None).unwrap();
                    for alpha in f.elements() {
                        for beta in f.elements() {
                            match replace_omega(&g, alpha, beta) {
                                Err(Error::DegenerateOmega) => continue,
                                Err(e) => panic!("{e}"),
                                Ok(r) => {
                                    let h = &r.geometry;
                                    assert!(h.is_valid(), "{:?}", h.violations());
                                    assert_eq!(r.predicted_l, arf_of(h, h.l()).unwrap());
                                    assert_eq!(r.predicted_p, arf_of(h, h.p()).unwrap());
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transformation_descriptors() {
        let f = FieldSpec::gf(2);
        let g = build_geometry(
            f,
            ArfValue::Finite(f.elem(2)),
            ArfValue::Finite(f.elem(3)),
            None,
        )
        .unwrap();
        assert_eq!(
            transformation_class(&g).unwrap(),
            TransformationClass::Ratio { rho: f.elem(2) }
        );
        let g = build_geometry(f, ArfValue::Infinity, ArfValue::Finite(f.zero()), None).unwrap();
        assert_eq!(
            transformation_class(&g).unwrap(),
            TransformationClass::Exact {
                arf_p: ArfValue::Infinity,
                arf_l: ArfValue::Finite(f.zero())
            }
        );
        let g = build_geometry(
            f,
            ArfValue::Finite(f.elem(3)),
            ArfValue::Finite(f.elem(3)),
            None,
        )
        .unwrap();
        assert_eq!(
            transformation_class(&g).unwrap(),
            TransformationClass::Class { arf_l: ArfClass::E }
        );
    }

    #[test]
    fn normal_form_over_gf2() {
        let f = FieldSpec::gf(1);
        let e = ArfValue::Finite(f.one());
        let g = build_geometry(f, e, e, None).unwrap();
        let w = normal_form(&g).unwrap().expect("witness");
        assert!(w.is_invertible());
        assert_eq!(g.form().transform(&w), hyperbolic_sum(f));
        let minus = build_geometry(f, e, e, Some(e)).unwrap();
        assert_eq!(normal_form(&minus).unwrap(), None);
    }

    #[test]
    fn normal_form_over_gf4() {
        let f = FieldSpec::gf(2);
        for a in classes(f) {
            for b in classes(f) {
                let g = build_geometry(f, a, b, None).unwrap();
                if let Some(w) = normal_form(&g).unwrap() {
                    assert_eq!(g.form().transform(&w), hyperbolic_sum(f));
                }
            }
        }
    }

    #[test]
    fn json_layout() {
        let f = FieldSpec::gf(1);
        let g = build_geometry(f, ArfValue::Infinity, ArfValue::Finite(f.one()), None).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.starts_with("{\"field\":{\"n\":1,\"modulus\":2},\"form\":"));
        assert!(s.contains("\"P\":[0,1,0,0,0,0]"));
        let back: Geometry = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        // raw vectors are canonicalized on load
        let f4 = FieldSpec::gf(2);
        let g4 = build_geometry(f4, ArfValue::Infinity, ArfValue::Infinity, None).unwrap();
        let mut v: serde_json::Value = serde_json::to_value(&g4).unwrap();
        v["P"] = serde_json::json!([0, 3, 0, 0, 0, 0]);
        let back: Geometry = serde_json::from_value(v).unwrap();
        assert_eq!(back.p(), g4.p());
    }
}
