//! Quadratic forms over GF(2^n) and their invariants.
//!
//! A form is stored by its upper-triangular coefficient matrix `C`, so that
//! `Q(v) = Σ_{i≤j} C[i][j] v_i v_j`. In characteristic 2 the Gram matrix of
//! the polar form `B(u, v) = Q(u + v) + Q(u) + Q(v)` has a zero diagonal and
//! forgets the squares, which is why the triangular matrix is the primary
//! representation. `C` also serves as a (non-symmetric) bilinear form `A`
//! with `Q(x) = A(x, x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ArfValue, FieldElement, FieldSpec};
use crate::linalg::{self, Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    spec: FieldSpec,
    coeffs: Matrix,
}

/// JSON layout of a form: `{"field": .., "dim": .., "coeffs": [[..], ..]}`.
#[derive(Serialize, Deserialize)]
struct FormRepr {
    field: FieldSpec,
    dim: usize,
    coeffs: Vec<Vec<u32>>,
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr {
            field: self.spec,
            dim: self.dim(),
            coeffs: self.coeffs.to_ints(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(d)?;
        if repr.coeffs.len() != repr.dim {
            return Err(serde::de::Error::custom(Error::DimMismatch {
                expected: repr.dim,
                got: repr.coeffs.len(),
            }));
        }
        QuadraticForm::from_ints(repr.field, &repr.coeffs).map_err(serde::de::Error::custom)
    }
}

impl QuadraticForm {
    /// Builds a form from its upper-triangular coefficient matrix.
    pub fn new(coeffs: Matrix) -> Result<Self> {
        if !coeffs.is_square() || coeffs.rows() == 0 {
            return Err(Error::DimMismatch {
                expected: coeffs.rows(),
                got: coeffs.cols(),
            });
        }
        for i in 0..coeffs.rows() {
            for j in 0..i {
                if !coeffs[(i, j)].is_zero() {
                    return Err(Error::NotUpperTriangular);
                }
            }
        }
        Ok(QuadraticForm {
            spec: coeffs.spec(),
            coeffs,
        })
    }

    pub fn from_ints(spec: FieldSpec, rows: &[Vec<u32>]) -> Result<Self> {
        Self::new(Matrix::from_ints(spec, rows)?)
    }

    /// The form with prescribed values `Q(b_i)` and `B(b_i, b_j)` on a basis.
    pub fn from_values(spec: FieldSpec, norms: &[FieldElement], polar: &Matrix) -> Self {
        let d = norms.len();
        let mut c = Matrix::zeros(spec, d, d);
        for i in 0..d {
            c[(i, i)] = norms[i];
            for j in i + 1..d {
                c[(i, j)] = polar[(i, j)];
            }
        }
        QuadraticForm { spec, coeffs: c }
    }

    /// `a x² + b xy + c y²`
    pub fn binary(spec: FieldSpec, a: FieldElement, b: FieldElement, c: FieldElement) -> Self {
        let mut m = Matrix::zeros(spec, 2, 2);
        m[(0, 0)] = a;
        m[(0, 1)] = b;
        m[(1, 1)] = c;
        QuadraticForm { spec, coeffs: m }
    }

    /// The hyperbolic plane `xy`.
    pub fn hyperbolic_plane(spec: FieldSpec) -> Self {
        Self::binary(spec, spec.zero(), spec.one(), spec.zero())
    }

    /// `x² + xy + c y²`, the plane with Arf invariant `c`.
    pub fn plane_with_arf(spec: FieldSpec, c: FieldElement) -> Self {
        Self::binary(spec, spec.one(), spec.one(), c)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    fn check_dim(&self, v: &[FieldElement]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        if v.iter().any(|x| x.spec() != self.spec) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `Q(v)`, checked.
    pub fn eval(&self, v: &[FieldElement]) -> Result<FieldElement> {
        self.check_dim(v)?;
        Ok(self.q(v))
    }

    /// `B(u, v)`, checked.
    pub fn polar(&self, u: &[FieldElement], v: &[FieldElement]) -> Result<FieldElement> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.b(u, v))
    }

    /// `Q(v)` without dimension checks.
    pub fn q(&self, v: &[FieldElement]) -> FieldElement {
        let d = self.dim();
        let mut acc = self.spec.zero();
        for i in 0..d {
            if v[i].is_zero() {
                continue;
            }
            let mut row = self.spec.zero();
            for (j, x) in v.iter().enumerate().take(d).skip(i) {
                row += self.coeffs[(i, j)] * *x;
            }
            acc += v[i] * row;
        }
        acc
    }

    /// `B(u, v)` without dimension checks.
    pub fn b(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        let d = self.dim();
        let mut acc = self.spec.zero();
        for i in 0..d {
            for j in i + 1..d {
                let c = self.coeffs[(i, j)];
                if !c.is_zero() {
                    acc += c * (u[i] * v[j] + u[j] * v[i]);
                }
            }
        }
        acc
    }

    /// Symmetric Gram matrix of `B` (zero diagonal).
    pub fn gram(&self) -> Matrix {
        let d = self.dim();
        let mut g = Matrix::zeros(self.spec, d, d);
        for i in 0..d {
            for j in i + 1..d {
                g[(i, j)] = self.coeffs[(i, j)];
                g[(j, i)] = self.coeffs[(i, j)];
            }
        }
        g
    }

    /// The form pulled back along `x ↦ Σ x_i basis_i`.
    pub fn restrict(&self, basis: &[Vector]) -> QuadraticForm {
        let k = basis.len();
        let mut c = Matrix::zeros(self.spec, k, k);
        for i in 0..k {
            c[(i, i)] = self.q(&basis[i]);
            for j in i + 1..k {
                c[(i, j)] = self.b(&basis[i], &basis[j]);
            }
        }
        QuadraticForm {
            spec: self.spec,
            coeffs: c,
        }
    }

    /// `v ↦ Q(T v)`.
    pub fn transform(&self, t: &Matrix) -> QuadraticForm {
        self.restrict(&t.columns())
    }

    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let (d1, d2) = (self.dim(), other.dim());
        let mut c = Matrix::zeros(self.spec, d1 + d2, d1 + d2);
        for i in 0..d1 {
            for j in i..d1 {
                c[(i, j)] = self.coeffs[(i, j)];
            }
        }
        for i in 0..d2 {
            for j in i..d2 {
                c[(d1 + i, d1 + j)] = other.coeffs[(i, j)];
            }
        }
        QuadraticForm {
            spec: self.spec,
            coeffs: c,
        }
    }

    /// `{v : B(v, ·) = 0}`
    pub fn bilinear_kernel(&self) -> Subspace {
        Subspace::span(self.spec, self.dim(), &self.gram().kernel())
    }

    /// `{v : B(w, v) = 0 for every w in vectors}`.
    pub fn orthogonal_complement(&self, vectors: &[Vector]) -> Subspace {
        if vectors.is_empty() {
            return Subspace::whole(self.spec, self.dim());
        }
        let g = self.gram();
        let rows: Vec<Vector> = vectors.iter().map(|w| g.mul_vec(w)).collect();
        Subspace::span(
            self.spec,
            self.dim(),
            &Matrix::from_rows(self.spec, &rows).kernel(),
        )
    }

    /// `Rad Q = {v : Q(v + u) = Q(u) for all u}`, i.e. the vectors of the
    /// kernel of `B` on which `Q` vanishes.
    ///
    /// On the kernel of `B`, `Q(Σ x_i k_i) = (Σ x_i √Q(k_i))²`, so the
    /// radical is the kernel of a linear functional there.
    pub fn radical(&self) -> Subspace {
        let ker = self.gram().kernel();
        if ker.is_empty() {
            return Subspace::zero(self.spec, self.dim());
        }
        let roots: Vec<FieldElement> = ker.iter().map(|k| self.q(k).sqrt()).collect();
        let functional = Matrix::from_rows(self.spec, &[roots]);
        let vectors: Vec<Vector> = functional
            .kernel()
            .iter()
            .map(|coeffs| {
                let mut v = linalg::zero_vector(self.spec, self.dim());
                for (c, k) in coeffs.iter().zip(&ker) {
                    v = linalg::axpy(&v, *c, k);
                }
                v
            })
            .collect();
        Subspace::span(self.spec, self.dim(), &vectors)
    }

    /// Trivial radical.
    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }

    pub fn is_bilinear_nondegenerate(&self) -> bool {
        self.gram().is_invertible()
    }

    /// Pairs `(e_i, f_i)` with `B(e_i, f_i) = 1` and all other pairings zero.
    ///
    /// Greedy: take the first remaining vector, pair it with the first
    /// remaining vector it is not orthogonal to, and project the rest onto
    /// the orthogonal complement of the pair.
    pub fn symplectic_basis(&self) -> Result<Vec<(Vector, Vector)>> {
        let d = self.dim();
        if d % 2 == 1 || !self.is_bilinear_nondegenerate() {
            return Err(Error::DegenerateBilinear);
        }
        let mut rest: Vec<Vector> = (0..d)
            .map(|i| linalg::unit_vector(self.spec, d, i))
            .collect();
        let mut pairs = Vec::with_capacity(d / 2);
        while !rest.is_empty() {
            let e = rest.remove(0);
            let pos = rest
                .iter()
                .position(|w| !self.b(&e, w).is_zero())
                .ok_or(Error::DegenerateBilinear)?;
            let w = rest.remove(pos);
            let f = linalg::scale(self.b(&e, &w).inv().expect("non-zero"), &w);
            for v in rest.iter_mut() {
                let bf = self.b(v, &f);
                let be = self.b(v, &e);
                *v = linalg::axpy(&linalg::axpy(v, bf, &e), be, &f);
            }
            pairs.push((e, f));
        }
        Ok(pairs)
    }

    /// The Arf invariant.
    ///
    /// In dimension 2 a form whose polar form vanishes has Arf invariant
    /// `∞`. Otherwise the value is `Σ Q(e_i) Q(f_i) / B(e_i, f_i)²` over a
    /// symplectic basis.
    pub fn arf_invariant(&self) -> Result<ArfValue> {
        if self.dim() == 2 && self.coeffs[(0, 1)].is_zero() {
            if self.coeffs[(0, 0)].is_zero() && self.coeffs[(1, 1)].is_zero() {
                return Err(Error::DegenerateForm);
            }
            return Ok(ArfValue::Infinity);
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let pairs = self.symplectic_basis()?;
        let mut acc = self.spec.zero();
        for (e, f) in &pairs {
            let b = self.b(e, f);
            acc += self.q(e) * self.q(f) / b.square();
        }
        Ok(ArfValue::Finite(acc))
    }

    /// Whether `m` preserves the form. Checks `Q` on the basis and `B` on
    /// all pairs of basis vectors, which is equivalent to checking `Q` on
    /// basis vectors and their pairwise sums.
    pub fn is_isometry(&self, m: &Matrix) -> bool {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return false;
        }
        let cols = m.columns();
        for i in 0..self.dim() {
            if self.q(&cols[i]) != self.coeffs[(i, i)] {
                return false;
            }
            for j in i + 1..self.dim() {
                if self.b(&cols[i], &cols[j]) != self.coeffs[(i, j)] {
                    return false;
                }
            }
        }
        m.is_invertible()
    }

    /// Basis `T` (as columns) in which the form reads
    /// `x₁² + x₁x₂ + c x₂² + x₃x₄ + x₅x₆ + …`, together with `c`.
    ///
    /// Requires a non-degenerate polar form. `c` represents the Arf class.
    pub fn canonical_basis(&self) -> Result<(Matrix, FieldElement)> {
        let pairs = self.symplectic_basis()?;
        let spec = self.spec;
        let mut planes: Vec<(Vector, Vector, FieldElement)> = Vec::with_capacity(pairs.len());
        for (e, f) in pairs {
            let (a, b) = (self.q(&e), self.q(&f));
            let (u, v) = if !a.is_zero() {
                let s = a.sqrt();
                (linalg::scale(s.inv().unwrap(), &e), linalg::scale(s, &f))
            } else if !b.is_zero() {
                let s = b.sqrt();
                (linalg::scale(s.inv().unwrap(), &f), linalg::scale(s, &e))
            } else {
                (linalg::add(&e, &f), f)
            };
            let c = self.q(&v);
            planes.push((u, v, c));
        }
        let (u0, mut v0, mut c0) = planes[0].clone();
        let mut columns: Vec<Vector> = Vec::with_capacity(self.dim());
        let mut hyperbolic: Vec<Vector> = Vec::new();
        for (u, v, c) in planes.into_iter().skip(1) {
            // ⟨u0, v0 + v⟩ ⊥ ⟨u0 + u, v⟩, the latter hyperbolic
            let e = linalg::add(&u0, &u);
            let f = linalg::axpy(&v, c, &e);
            hyperbolic.push(e);
            hyperbolic.push(f);
            v0 = linalg::add(&v0, &v);
            c0 += c;
        }
        columns.push(u0);
        columns.push(v0);
        columns.extend(hyperbolic);
        let t = Matrix::from_columns(spec, &columns);
        debug_assert!(t.is_invertible());
        Ok((t, c0))
    }
}

/// An isometry `T` with `Q₂(T v) = Q₁(v)`, if the spaces are isometric.
///
/// For non-degenerate polar forms both spaces are brought to the canonical
/// shape of [`QuadraticForm::canonical_basis`]; they are isometric exactly
/// when the two constants differ by some `t + t²`, and the witness is
/// assembled from the two bases. Two-dimensional forms with vanishing polar
/// form (Arf `∞`) are matched directly. Anything else falls back to a
/// column-by-column search.
pub fn spaces_isomorphic(f1: &QuadraticForm, f2: &QuadraticForm) -> Result<Option<Matrix>> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimMismatch {
            expected: f1.dim(),
            got: f2.dim(),
        });
    }
    if f1.spec() != f2.spec() {
        return Err(Error::FieldMismatch);
    }
    let spec = f1.spec();
    let witness = if f1.is_bilinear_nondegenerate() && f2.is_bilinear_nondegenerate() {
        let (t1, c1) = f1.canonical_basis()?;
        let (t2, c2) = f2.canonical_basis()?;
        match (c1 + c2).solve_artin_schreier() {
            None => None,
            Some((t, _)) => {
                // in Q₂'s canonical coordinates, (e, f + t e) realises constant c1
                let mut s = Matrix::identity(spec, f1.dim());
                s[(0, 1)] = t;
                let inv1 = t1.inverse().expect("basis");
                Some(&(&t2 * &s) * &inv1)
            }
        }
    } else if f1.dim() == 2 && f1.gram().rank() == 0 && f2.gram().rank() == 0 {
        binary_square_match(f1, f2)
    } else if f1.gram().rank() != f2.gram().rank() {
        None
    } else {
        crate::group::search_isometry_between(f1, f2)?
    };
    if let Some(t) = &witness {
        if f2.transform(t) != *f1 || !t.is_invertible() {
            return Err(Error::ContractViolation(
                "isometry witness failed verification".into(),
            ));
        }
    }
    Ok(witness)
}

// Q = (s·x)² on both sides: map ker s₁ → ker s₂ and a unit of s₁ to a unit of s₂.
fn binary_square_match(f1: &QuadraticForm, f2: &QuadraticForm) -> Option<Matrix> {
    let spec = f1.spec();
    let frame = |f: &QuadraticForm| -> Option<(Vector, Vector)> {
        let s = vec![f.coeffs()[(0, 0)].sqrt(), f.coeffs()[(1, 1)].sqrt()];
        if linalg::is_zero(&s) {
            return None;
        }
        let functional = Matrix::from_rows(spec, std::slice::from_ref(&s));
        let k = functional.kernel().remove(0);
        let mut u = if s[0].is_zero() {
            linalg::unit_vector(spec, 2, 1)
        } else {
            linalg::unit_vector(spec, 2, 0)
        };
        u = linalg::scale(linalg::dot(&s, &u).inv().unwrap(), &u);
        Some((k, u))
    };
    let (k1, u1) = frame(f1)?;
    let (k2, u2) = frame(f2)?;
    let b1 = Matrix::from_columns(spec, &[k1, u1]);
    let b2 = Matrix::from_columns(spec, &[k2, u2]);
    Some(&b2 * &b1.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ArfClass;

    fn v(spec: FieldSpec, xs: &[u32]) -> Vector {
        linalg::vector_from_ints(spec, xs).unwrap()
    }

    fn gf2() -> FieldSpec {
        FieldSpec::gf(1)
    }

    #[test]
    fn evaluation() {
        let f = gf2();
        let h = QuadraticForm::hyperbolic_plane(f);
        assert_eq!(h.eval(&v(f, &[1, 1])).unwrap(), f.one());
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        assert_eq!(ell.eval(&v(f, &[1, 0])).unwrap(), f.one());
        assert_eq!(ell.eval(&v(f, &[0, 0])).unwrap(), f.zero());
        assert_eq!(
            h.eval(&v(f, &[1])),
            Err(Error::DimMismatch {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn polar_form() {
        let f = gf2();
        let h = QuadraticForm::hyperbolic_plane(f);
        assert_eq!(h.polar(&v(f, &[1, 0]), &v(f, &[0, 1])).unwrap(), f.one());
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        assert_eq!(ell.polar(&v(f, &[1, 0]), &v(f, &[1, 1])).unwrap(), f.one());
        for x in linalg::all_vectors(f, 2) {
            assert_eq!(ell.polar(&x, &x).unwrap(), f.zero());
        }
    }

    #[test]
    fn rejects_lower_triangle() {
        assert_eq!(
            QuadraticForm::from_ints(gf2(), &[vec![1, 0], vec![1, 1]]),
            Err(Error::NotUpperTriangular)
        );
    }

    #[test]
    fn radicals() {
        let f = gf2();
        assert!(QuadraticForm::hyperbolic_plane(f).radical().is_zero());
        let sq = QuadraticForm::from_ints(f, &[vec![1]]).unwrap();
        assert!(sq.radical().is_zero());
        let zero = QuadraticForm::from_ints(f, &[vec![0]]).unwrap();
        assert_eq!(zero.radical().dim(), 1);
        // x² + y²: B ≡ 0 and Q(1,1) = 0
        let diag = QuadraticForm::from_ints(f, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(diag.radical(), Subspace::span(f, 2, &[v(f, &[1, 1])]));
    }

    #[test]
    fn radical_matches_brute_force() {
        let f = FieldSpec::gf(2);
        for coeffs in linalg::all_vectors(f, 6) {
            let form = QuadraticForm::from_ints(
                f,
                &[
                    vec![coeffs[0].value(), coeffs[1].value(), coeffs[2].value()],
                    vec![0, coeffs[3].value(), coeffs[4].value()],
                    vec![0, 0, coeffs[5].value()],
                ],
            )
            .unwrap();
            let all: Vec<Vector> = linalg::all_vectors(f, 3).collect();
            let brute: Vec<Vector> = all
                .iter()
                .filter(|r| all.iter().all(|u| form.q(&linalg::add(r, u)) == form.q(u)))
                .cloned()
                .collect();
            let rad = form.radical();
            assert_eq!(brute.len(), 4usize.pow(rad.dim() as u32));
            assert!(brute.iter().all(|r| rad.contains(r)));
        }
    }

    #[test]
    fn symplectic_bases() {
        let f = gf2();
        let h = QuadraticForm::hyperbolic_plane(f);
        assert_eq!(
            h.symplectic_basis().unwrap(),
            vec![(v(f, &[1, 0]), v(f, &[0, 1]))]
        );
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        assert_eq!(
            ell.symplectic_basis().unwrap(),
            vec![(v(f, &[1, 0]), v(f, &[0, 1]))]
        );
        let two = ell.direct_sum(&ell);
        let pairs = two.symplectic_basis().unwrap();
        assert_eq!(pairs.len(), 2);
        let flat: Vec<Vector> = pairs
            .iter()
            .flat_map(|(e, g)| [e.clone(), g.clone()])
            .collect();
        for (i, x) in flat.iter().enumerate() {
            for (j, y) in flat.iter().enumerate() {
                let want = if i / 2 == j / 2 && i != j {
                    f.one()
                } else {
                    f.zero()
                };
                assert_eq!(two.b(x, y), want);
            }
        }
        let odd = QuadraticForm::from_ints(f, &[vec![1]]).unwrap();
        assert_eq!(odd.symplectic_basis(), Err(Error::DegenerateBilinear));
    }

    #[test]
    fn arf_values() {
        let f = FieldSpec::gf(2);
        assert_eq!(
            QuadraticForm::hyperbolic_plane(f).arf_invariant().unwrap(),
            ArfValue::Finite(f.zero())
        );
        let e = f.arf_e();
        assert_eq!(
            QuadraticForm::plane_with_arf(f, e).arf_invariant().unwrap(),
            ArfValue::Finite(e)
        );
        let g2 = gf2();
        let diag = QuadraticForm::from_ints(g2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(diag.arf_invariant().unwrap(), ArfValue::Infinity);
        let odd =
            QuadraticForm::from_ints(g2, &[vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 1]]).unwrap();
        assert!(odd.is_nondegenerate());
        assert_eq!(odd.arf_invariant(), Err(Error::DegenerateBilinear));
        let zero =
            QuadraticForm::from_ints(g2, &[vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(zero.arf_invariant(), Err(Error::DegenerateForm));
    }

    #[test]
    fn canonical_basis_reproduces_arf_class() {
        let f = FieldSpec::gf(2);
        let forms = [
            QuadraticForm::hyperbolic_plane(f)
                .direct_sum(&QuadraticForm::plane_with_arf(f, f.elem(2))),
            QuadraticForm::plane_with_arf(f, f.elem(3))
                .direct_sum(&QuadraticForm::plane_with_arf(f, f.elem(2))),
            QuadraticForm::from_ints(
                f,
                &[
                    vec![2, 1, 3, 0],
                    vec![0, 1, 1, 3],
                    vec![0, 0, 3, 1],
                    vec![0, 0, 0, 0],
                ],
            )
            .unwrap(),
        ];
        for form in forms {
            let (t, c) = form.canonical_basis().unwrap();
            let mut want = QuadraticForm::plane_with_arf(f, c);
            want = want.direct_sum(&QuadraticForm::hyperbolic_plane(f));
            assert_eq!(form.transform(&t), want);
            assert_eq!(
                ArfValue::Finite(c).class(),
                form.arf_invariant().unwrap().class()
            );
        }
    }

    #[test]
    fn isomorphism_witnesses() {
        let f = gf2();
        let h = QuadraticForm::hyperbolic_plane(f);
        let ell = QuadraticForm::plane_with_arf(f, f.one());
        assert!(spaces_isomorphic(&h, &h).unwrap().is_some());
        assert!(spaces_isomorphic(&h, &ell).unwrap().is_none());
        let g = FieldSpec::gf(2);
        let a = QuadraticForm::plane_with_arf(g, g.elem(2));
        let b = QuadraticForm::plane_with_arf(g, g.elem(3));
        let t = spaces_isomorphic(&a, &b).unwrap().expect("trace(1) = 0");
        assert_eq!(b.transform(&t), a);
        let d1 = QuadraticForm::from_ints(f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let d2 = QuadraticForm::from_ints(f, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(spaces_isomorphic(&d1, &d2).unwrap().is_some());
        assert!(spaces_isomorphic(&d1, &h).unwrap().is_none());
        assert!(matches!(
            spaces_isomorphic(&h, &h.direct_sum(&h)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn arf_class_of_canonical_planes() {
        for n in 1..=4 {
            let f = FieldSpec::gf(n);
            for c in f.elements() {
                let arf = QuadraticForm::plane_with_arf(f, c).arf_invariant().unwrap();
                assert_eq!(arf, ArfValue::Finite(c));
                let want = if c.trace().is_zero() {
                    ArfClass::Zero
                } else {
                    ArfClass::E
                };
                assert_eq!(arf.class(), want);
            }
        }
    }

    #[test]
    fn form_json() {
        let f = FieldSpec::gf(2);
        let form = QuadraticForm::plane_with_arf(f, f.elem(2));
        let s = serde_json::to_string(&form).unwrap();
        assert_eq!(
            s,
            r#"{"field":{"n":2,"modulus":7},"dim":2,"coeffs":[[1,1],[0,2]]}"#
        );
        let back: QuadraticForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, form);
        let bad = r#"{"field":{"n":2,"modulus":7},"dim":2,"coeffs":[[1,1],[1,2]]}"#;
        assert!(serde_json::from_str::<QuadraticForm>(bad).is_err());
    }
}
