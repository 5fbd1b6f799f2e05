//! Finite isometry groups and the backtracking search behind them.
//!
//! All searches share one engine: pick a source basis, prescribe the images
//! of some leading basis vectors, then choose the remaining images one column
//! at a time among vectors of the right norm whose polar values against the
//! images already chosen match. Every leaf is a linear map preserving `Q` on
//! the basis and `B` on all basis pairs, hence an isometry once invertible.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, Matrix, Vector};
use crate::quadratic::QuadraticForm;

/// `n · dim` must not exceed this for an isometry enumeration.
pub const ENUMERATION_LIMIT: u32 = 12;
/// `n · dim · (free columns)` bound on the size of the search tree.
pub const SEARCH_LIMIT: u32 = 48;

/// A matrix preserving a quadratic form.
pub type IsometryMatrix = Matrix;

/// A finite group of matrices, kept sorted for deterministic output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomGroup {
    spec: FieldSpec,
    dim: usize,
    elements: Vec<Matrix>,
}

impl Serialize for IsomGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mats: Vec<Vec<Vec<u32>>> = self.elements.iter().map(Matrix::to_ints).collect();
        mats.serialize(s)
    }
}

impl IsomGroup {
    /// Wraps a list of matrices; sorts and deduplicates it. Group axioms
    /// are not checked here, see [`IsomGroup::check_axioms`].
    pub fn from_elements(spec: FieldSpec, dim: usize, mut elements: Vec<Matrix>) -> Self {
        elements.sort();
        elements.dedup();
        IsomGroup {
            spec,
            dim,
            elements,
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.spec, self.dim)
    }

    /// Identity, closure under products, and inverses, checked exhaustively.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        if !self.contains(&self.identity()) {
            return Err("identity missing".into());
        }
        for a in &self.elements {
            let inv = a.inverse().ok_or("singular element")?;
            if !self.contains(&inv) {
                return Err(format!("inverse of {a:?} missing"));
            }
            for b in &self.elements {
                if !self.contains(&(a * b)) {
                    return Err(format!("product {a:?}·{b:?} missing"));
                }
            }
        }
        Ok(())
    }

    /// `table[i][j]` is the index of `elements[i] · elements[j]`.
    pub fn composition_table(&self) -> Option<Vec<Vec<usize>>> {
        let index: HashMap<&Matrix, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| index.get(&(a * b)).copied())
                    .collect::<Option<Vec<usize>>>()
            })
            .collect()
    }

    pub fn element_order(&self, m: &Matrix) -> usize {
        let id = self.identity();
        let mut p = m.clone();
        let mut k = 1;
        while p != id {
            p = &p * m;
            k += 1;
        }
        k
    }

    /// Number of elements of each order; with the group order this serves as
    /// an isomorphism-invariant fingerprint.
    pub fn order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for m in &self.elements {
            *h.entry(self.element_order(m)).or_insert(0) += 1;
        }
        h
    }

    pub fn filter(&self, keep: impl Fn(&Matrix) -> bool) -> IsomGroup {
        IsomGroup {
            spec: self.spec,
            dim: self.dim,
            elements: self.elements.iter().filter(|m| keep(m)).cloned().collect(),
        }
    }

    /// Partition of `points` into orbits. With `projective` set, images are
    /// compared up to scalar multiples via [`canonical_scaling`].
    pub fn orbits(&self, points: &[Vector], projective: bool) -> Vec<Vec<Vector>> {
        let norm = |v: Vector| if projective { canonical_scaling(&v) } else { v };
        let mut seen: HashSet<Vector> = HashSet::new();
        let mut orbits = Vec::new();
        for p in points {
            let p = norm(p.clone());
            if seen.contains(&p) {
                continue;
            }
            let mut orbit: Vec<Vector> =
                self.elements.iter().map(|m| norm(m.mul_vec(&p))).collect();
            orbit.sort();
            orbit.dedup();
            seen.extend(orbit.iter().cloned());
            orbits.push(orbit);
        }
        orbits
    }
}

/// Scales a non-zero vector so its first non-zero coordinate is one.
pub fn canonical_scaling(v: &[FieldElement]) -> Vector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => linalg::scale(lead.inv().expect("non-zero"), v),
        None => v.to_vec(),
    }
}

/// Backtracking search for matrices `W` whose columns satisfy
/// `Q(w_j) = norms[j]` and `B(w_i, w_j) = polar[i][j]` under `target`,
/// with the leading columns prescribed.
struct ColumnSearch {
    norms: Vec<FieldElement>,
    polar: Matrix,
    gram: Matrix,
    by_norm: HashMap<FieldElement, Vec<Vector>>,
}

impl ColumnSearch {
    fn new(target: &QuadraticForm, norms: Vec<FieldElement>, polar: Matrix) -> Self {
        let mut by_norm: HashMap<FieldElement, Vec<Vector>> = HashMap::new();
        for v in linalg::all_vectors(target.spec(), target.dim()) {
            by_norm.entry(target.q(&v)).or_default().push(v);
        }
        ColumnSearch {
            norms,
            polar,
            gram: target.gram(),
            by_norm,
        }
    }

    fn run(
        &self,
        prescribed: Vec<Vector>,
        visit: &mut dyn FnMut(&[Vector]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let covectors: Vec<Vector> = prescribed.iter().map(|w| self.gram.mul_vec(w)).collect();
        let mut images = prescribed;
        let mut covectors = covectors;
        self.descend(&mut images, &mut covectors, visit)
    }

    fn descend(
        &self,
        images: &mut Vec<Vector>,
        covectors: &mut Vec<Vector>,
        visit: &mut dyn FnMut(&[Vector]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let j = images.len();
        if j == self.norms.len() {
            return visit(images);
        }
        let Some(candidates) = self.by_norm.get(&self.norms[j]) else {
            return ControlFlow::Continue(());
        };
        'cand: for w in candidates {
            for (i, g) in covectors.iter().enumerate() {
                if linalg::dot(g, w) != self.polar[(i, j)] {
                    continue 'cand;
                }
            }
            images.push(w.clone());
            covectors.push(self.gram.mul_vec(w));
            let flow = self.descend(images, covectors, visit);
            images.pop();
            covectors.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn guard(form: &QuadraticForm, free: usize) -> Result<()> {
    let n = form.spec().degree();
    let d = form.dim() as u32;
    if n * d > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "n·dim = {} exceeds {ENUMERATION_LIMIT}",
            n * d
        )));
    }
    if n * d * free as u32 > SEARCH_LIMIT {
        return Err(Error::TooLarge(format!(
            "n·dim·free = {} exceeds {SEARCH_LIMIT}",
            n * d * free as u32
        )));
    }
    Ok(())
}

/// Source basis starting with a maximal independent subset of `leading`.
fn adapted_basis(form: &QuadraticForm, leading: &[Vector]) -> (Vec<usize>, Vec<Vector>) {
    let idx = linalg::independent_subset(form.spec(), leading);
    let chosen: Vec<Vector> = idx.iter().map(|&i| leading[i].clone()).collect();
    let basis = linalg::complete_basis(form.spec(), form.dim(), &chosen);
    (idx, basis)
}

fn check_vectors(form: &QuadraticForm, vs: &[Vector]) -> Result<()> {
    for v in vs {
        if v.len() != form.dim() {
            return Err(Error::DimMismatch {
                expected: form.dim(),
                got: v.len(),
            });
        }
        if v.iter().any(|x| x.spec() != form.spec()) {
            return Err(Error::FieldMismatch);
        }
    }
    Ok(())
}

/// All isometries of `form` that fix every vector in `fixed` exactly.
pub fn enumerate_isometries(form: &QuadraticForm, fixed: &[Vector]) -> Result<IsomGroup> {
    check_vectors(form, fixed)?;
    let spec = form.spec();
    let (idx, basis) = adapted_basis(form, fixed);
    guard(form, form.dim() - idx.len())?;
    let source = form.restrict(&basis);
    let basis_mat = Matrix::from_columns(spec, &basis);
    let basis_inv = basis_mat.inverse().expect("adapted basis is a basis");
    let norms: Vec<FieldElement> = basis.iter().map(|b| form.q(b)).collect();
    let search = ColumnSearch::new(form, norms, source.gram());
    let prescribed: Vec<Vector> = basis[..idx.len()].to_vec();
    let mut found = Vec::new();
    let _ = search.run(prescribed, &mut |images| {
        let w = Matrix::from_columns(spec, images);
        if w.is_invertible() {
            found.push(&w * &basis_inv);
        }
        ControlFlow::Continue(())
    });
    Ok(IsomGroup::from_elements(spec, form.dim(), found))
}

/// Some `T` with `Q₂(T v) = Q₁(v)` found by exhaustive column search.
pub(crate) fn search_isometry_between(
    f1: &QuadraticForm,
    f2: &QuadraticForm,
) -> Result<Option<Matrix>> {
    guard(f2, f2.dim())?;
    let spec = f1.spec();
    let norms: Vec<FieldElement> = (0..f1.dim()).map(|i| f1.coeffs()[(i, i)]).collect();
    let search = ColumnSearch::new(f2, norms, f1.gram());
    let mut witness = None;
    let _ = search.run(Vec::new(), &mut |images| {
        let w = Matrix::from_columns(spec, images);
        if w.is_invertible() {
            witness = Some(w);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(witness)
}

/// Extends the partial map `domain[i] ↦ images[i]` to an isometry of the
/// whole space.
pub fn witt_extend(
    form: &QuadraticForm,
    domain: &[Vector],
    images: &[Vector],
) -> Result<IsometryMatrix> {
    check_vectors(form, domain)?;
    check_vectors(form, images)?;
    if domain.len() != images.len() {
        return Err(Error::NotPartialIsometry(format!(
            "{} domain vectors but {} images",
            domain.len(),
            images.len()
        )));
    }
    for i in 0..domain.len() {
        if form.q(&domain[i]) != form.q(&images[i]) {
            return Err(Error::NotPartialIsometry(format!("Q differs at index {i}")));
        }
        for j in i + 1..domain.len() {
            if form.b(&domain[i], &domain[j]) != form.b(&images[i], &images[j]) {
                return Err(Error::NotPartialIsometry(format!(
                    "B differs at indices ({i}, {j})"
                )));
            }
        }
    }
    let spec = form.spec();
    if !domain.is_empty() {
        // every linear relation among the domain must hold among the images
        for rel in Matrix::from_columns(spec, domain).kernel() {
            if !linalg::is_zero(&Matrix::from_columns(spec, images).mul_vec(&rel)) {
                return Err(Error::NotPartialIsometry("map is not well defined".into()));
            }
        }
    }
    let (idx, basis) = adapted_basis(form, domain);
    let prescribed: Vec<Vector> = idx.iter().map(|&i| images[i].clone()).collect();
    if linalg::rank(spec, &prescribed) < prescribed.len() {
        return Err(Error::NotPartialIsometry("map is not injective".into()));
    }
    guard(form, 0)?;
    let source = form.restrict(&basis);
    let norms: Vec<FieldElement> = basis.iter().map(|b| form.q(b)).collect();
    let search = ColumnSearch::new(form, norms, source.gram());
    let basis_inv = Matrix::from_columns(spec, &basis)
        .inverse()
        .expect("adapted basis is a basis");
    let mut result = None;
    let _ = search.run(prescribed, &mut |imgs| {
        let w = Matrix::from_columns(spec, imgs);
        if w.is_invertible() {
            result = Some(&w * &basis_inv);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    result.ok_or(Error::ExtensionNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(spec: FieldSpec, xs: &[u32]) -> Vector {
        linalg::vector_from_ints(spec, xs).unwrap()
    }

    // every invertible matrix, filtered by the isometry condition
    fn brute_isometries(form: &QuadraticForm) -> Vec<Matrix> {
        let spec = form.spec();
        let d = form.dim();
        let mut out: Vec<Matrix> = linalg::all_vectors(spec, d * d)
            .map(|flat| {
                let rows: Vec<Vector> = flat.chunks(d).map(|c| c.to_vec()).collect();
                Matrix::from_rows(spec, &rows)
            })
            .filter(|m| m.is_invertible())
            .filter(|m| linalg::all_vectors(spec, d).all(|x| form.q(&m.mul_vec(&x)) == form.q(&x)))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn plane_groups_over_gf2() {
        let f = FieldSpec::gf(1);
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        let g = enumerate_isometries(&ell, &[]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.elements(), brute_isometries(&ell).as_slice());
        g.check_axioms().unwrap();
        let h = QuadraticForm::hyperbolic_plane(f);
        let g = enumerate_isometries(&h, &[]).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.contains(&Matrix::from_ints(f, &[vec![0, 1], vec![1, 0]]).unwrap()));
    }

    #[test]
    fn enumeration_matches_brute_force_gf4() {
        let f = FieldSpec::gf(2);
        for form in [
            QuadraticForm::hyperbolic_plane(f),
            QuadraticForm::plane_with_arf(f, f.elem(2)),
            QuadraticForm::binary(f, f.elem(3), f.elem(2), f.elem(1)),
            QuadraticForm::binary(f, f.elem(1), f.zero(), f.elem(2)),
        ] {
            let g = enumerate_isometries(&form, &[]).unwrap();
            assert_eq!(g.elements(), brute_isometries(&form).as_slice());
        }
    }

    #[test]
    fn fixing_a_basis_leaves_the_identity() {
        let f = FieldSpec::gf(2);
        let form = QuadraticForm::plane_with_arf(f, f.elem(2));
        let basis = vec![v(f, &[1, 0]), v(f, &[0, 1])];
        let g = enumerate_isometries(&form, &basis).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.elements()[0].is_identity());
    }

    #[test]
    fn stabiliser_of_a_vector() {
        let f = FieldSpec::gf(1);
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        let g = enumerate_isometries(&ell, &[v(f, &[1, 0])]).unwrap();
        assert_eq!(g.order(), 2);
        for m in g.elements() {
            assert_eq!(m.mul_vec(&v(f, &[1, 0])), v(f, &[1, 0]));
        }
    }

    #[test]
    fn guard_rejects_large_enumerations() {
        let f = FieldSpec::gf(4);
        let h = QuadraticForm::hyperbolic_plane(f);
        let big = h.direct_sum(&h);
        assert!(matches!(
            enumerate_isometries(&big, &[]),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn orthogonal_group_orders_dim4_gf2() {
        // |O⁺(4,2)| = 72, |O⁻(4,2)| = 120
        let f = FieldSpec::gf(1);
        let h = QuadraticForm::hyperbolic_plane(f);
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        let plus = enumerate_isometries(&h.direct_sum(&h), &[]).unwrap();
        let minus = enumerate_isometries(&h.direct_sum(&ell), &[]).unwrap();
        assert_eq!(plus.order(), 72);
        assert_eq!(minus.order(), 120);
        plus.check_axioms().unwrap();
    }

    #[test]
    fn witt_extensions() {
        let f = FieldSpec::gf(1);
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        let m = witt_extend(&ell, &[v(f, &[1, 0])], &[v(f, &[0, 1])]).unwrap();
        assert_eq!(m.mul_vec(&v(f, &[1, 0])), v(f, &[0, 1]));
        assert!(ell.is_isometry(&m));
        let g = enumerate_isometries(&ell, &[]).unwrap();
        let order = g.element_order(&m);
        assert!(order == 2 || order == 3);

        let h = QuadraticForm::hyperbolic_plane(f);
        let hh = h.direct_sum(&h);
        let e1 = v(f, &[1, 0, 0, 0]);
        let e3 = v(f, &[0, 0, 1, 0]);
        let m = witt_extend(&hh, std::slice::from_ref(&e1), std::slice::from_ref(&e3)).unwrap();
        assert_eq!(m.mul_vec(&e1), e3);
        assert!(hh.is_isometry(&m));

        let id = witt_extend(&hh, &[e1.clone(), e3.clone()], &[e1.clone(), e3.clone()]).unwrap();
        assert!(hh.is_isometry(&id));
        assert_eq!(id.mul_vec(&e3), e3);

        let e2 = v(f, &[0, 1, 0, 0]);
        assert!(matches!(
            witt_extend(&hh, std::slice::from_ref(&e1), &[e1.clone(), e2.clone()]),
            Err(Error::NotPartialIsometry(_))
        ));
        // Q(e1) = 0 but Q(e1 + e2) = 1
        assert!(matches!(
            witt_extend(&hh, std::slice::from_ref(&e1), &[linalg::add(&e1, &e2)]),
            Err(Error::NotPartialIsometry(_))
        ));
    }

    #[test]
    fn fingerprint_of_s3() {
        let f = FieldSpec::gf(1);
        let g = enumerate_isometries(&QuadraticForm::plane_with_arf(f, f.one()), &[]).unwrap();
        let hist: Vec<(usize, usize)> = g.order_histogram().into_iter().collect();
        assert_eq!(hist, vec![(1, 1), (2, 3), (3, 2)]);
        let table = g.composition_table().unwrap();
        assert_eq!(table.len(), 6);
    }

    #[test]
    fn orbits_of_the_elliptic_plane() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            let ell = QuadraticForm::plane_with_arf(f, f.arf_e());
            let g = enumerate_isometries(&ell, &[]).unwrap();
            let nonzero: Vec<Vector> = linalg::all_vectors(f, 2).skip(1).collect();
            for orbit in g.orbits(&nonzero, false) {
                assert_eq!(orbit.len() as u32, f.order() + 1);
            }
        }
    }
}
