//! Virtual quadratic spaces `(V, Q, U)`: a possibly degenerate space `U`
//! sitting inside a non-degenerate ambient space whose isometries are
//! required to fix `U⊥` pointwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{self, IsomGroup};
use crate::linalg::{self, Matrix, Subspace, Vector};
use crate::quadratic::QuadraticForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualSpace {
    ambient: QuadraticForm,
    u: Subspace,
}

#[derive(Serialize, Deserialize)]
struct VirtualRepr {
    ambient: QuadraticForm,
    u_basis: Vec<Vec<u32>>,
}

impl Serialize for VirtualSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VirtualRepr {
            ambient: self.ambient.clone(),
            u_basis: self
                .u
                .basis()
                .iter()
                .map(|v| linalg::vector_to_ints(v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VirtualSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = VirtualRepr::deserialize(d)?;
        let spec = repr.ambient.spec();
        let basis = repr
            .u_basis
            .iter()
            .map(|row| linalg::vector_from_ints(spec, row))
            .collect::<Result<Vec<Vector>>>()
            .map_err(serde::de::Error::custom)?;
        VirtualSpace::new(repr.ambient, &basis).map_err(serde::de::Error::custom)
    }
}

/// Outcome of comparing `Iso(V, U)` restricted to `U` against `Iso(U)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub surjective: bool,
    /// Number of elements of `Iso(V, U)` acting trivially on `U`.
    pub kernel_order: usize,
    pub source_order: usize,
    pub target_order: usize,
}

/// The extra basis vector `f` of a minimal embedding: its pairings with
/// the coordinate vectors of `U` and its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub pairings: Vector,
    pub norm: FieldElement,
}

impl VirtualSpace {
    /// Checks that the ambient form has trivial radical and that
    /// `dim(U ∩ U⊥) ≤ 1`.
    pub fn new(ambient: QuadraticForm, u_basis: &[Vector]) -> Result<Self> {
        for v in u_basis {
            if v.len() != ambient.dim() {
                return Err(Error::DimMismatch {
                    expected: ambient.dim(),
                    got: v.len(),
                });
            }
        }
        if !ambient.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let u = Subspace::span(ambient.spec(), ambient.dim(), u_basis);
        let vs = VirtualSpace { ambient, u };
        let overlap = vs.u.intersection(&vs.u_perp()).dim();
        if overlap > 1 {
            return Err(Error::NotEmbeddable(overlap));
        }
        Ok(vs)
    }

    pub fn ambient(&self) -> &QuadraticForm {
        &self.ambient
    }

    pub fn u(&self) -> &Subspace {
        &self.u
    }

    pub fn u_perp(&self) -> Subspace {
        self.ambient.orthogonal_complement(self.u.basis())
    }

    /// `Q` restricted to `U`, in the coordinates of the stored basis.
    pub fn u_form(&self) -> QuadraticForm {
        self.ambient.restrict(self.u.basis())
    }

    /// The vector `Ω` with `U = Ω⊥`, when `U⊥` is a line.
    pub fn omega(&self) -> Option<Vector> {
        let perp = self.u_perp();
        (perp.dim() == 1).then(|| perp.basis()[0].clone())
    }
}

/// Default extension: pairs `f` with the first coordinate on which the
/// kernel vector is supported, and gives `f` norm zero.
fn default_extension(u_form: &QuadraticForm, kernel: &[FieldElement]) -> Extension {
    let spec = u_form.spec();
    let j = kernel
        .iter()
        .position(|x| !x.is_zero())
        .expect("non-zero kernel vector");
    let mut pairings = linalg::zero_vector(spec, u_form.dim());
    pairings[j] = kernel[j].inv().expect("non-zero");
    Extension {
        pairings,
        norm: spec.zero(),
    }
}

/// Smallest non-degenerate ambient containing `u_form` as the span of the
/// first `dim U` coordinates.
pub fn embed_minimal(u_form: &QuadraticForm) -> Result<VirtualSpace> {
    embed_minimal_with(u_form, None)
}

/// As [`embed_minimal`], with the extra vector chosen by the caller. The
/// extension is ignored when `U` is already non-degenerate.
pub fn embed_minimal_with(u_form: &QuadraticForm, ext: Option<&Extension>) -> Result<VirtualSpace> {
    let spec = u_form.spec();
    let d = u_form.dim();
    let kernel = u_form.bilinear_kernel();
    match kernel.dim() {
        0 => {
            let basis: Vec<Vector> = (0..d).map(|i| linalg::unit_vector(spec, d, i)).collect();
            VirtualSpace::new(u_form.clone(), &basis)
        }
        1 => {
            let k = &kernel.basis()[0];
            let default;
            let ext = match ext {
                Some(e) => e,
                None => {
                    default = default_extension(u_form, k);
                    &default
                }
            };
            if ext.pairings.len() != d {
                return Err(Error::DimMismatch {
                    expected: d,
                    got: ext.pairings.len(),
                });
            }
            if linalg::dot(k, &ext.pairings).is_zero() {
                return Err(Error::PreconditionViolated(
                    "extension vector is orthogonal to U ∩ U⊥".into(),
                ));
            }
            let mut c = Matrix::zeros(spec, d + 1, d + 1);
            for i in 0..d {
                for j in i..d {
                    c[(i, j)] = u_form.coeffs()[(i, j)];
                }
                c[(i, d)] = ext.pairings[i];
            }
            c[(d, d)] = ext.norm;
            let ambient = QuadraticForm::new(c)?;
            let basis: Vec<Vector> = (0..d)
                .map(|i| linalg::unit_vector(spec, d + 1, i))
                .collect();
            VirtualSpace::new(ambient, &basis)
        }
        m => Err(Error::NotEmbeddable(m)),
    }
}

/// Ambient isometries fixing `U⊥` pointwise.
pub fn viso_group(vs: &VirtualSpace) -> Result<IsomGroup> {
    group::enumerate_isometries(&vs.ambient, vs.u_perp().basis())
}

/// Restricts every element of `Iso(V, U)` to `U` and compares the image
/// with an independent enumeration of `Iso(U)`.
pub fn restriction_surjectivity(vs: &VirtualSpace) -> Result<RestrictionReport> {
    let u_form = vs.u_form();
    if !u_form.radical().is_zero() {
        return Err(Error::PreconditionViolated(
            "Q restricted to U has a radical".into(),
        ));
    }
    let spec = u_form.spec();
    let source = viso_group(vs)?;
    let target = group::enumerate_isometries(&u_form, &[])?;
    let basis = Matrix::from_columns(spec, vs.u.basis());
    let mut images = Vec::with_capacity(source.order());
    let mut kernel_order = 0;
    for m in source.elements() {
        let cols =
            vs.u.basis()
                .iter()
                .map(|u| basis.solve(&m.mul_vec(u)))
                .collect::<Option<Vec<Vector>>>()
                .ok_or_else(|| Error::ContractViolation("isometry does not preserve U".into()))?;
        let r = Matrix::from_columns(spec, &cols);
        if r.is_identity() {
            kernel_order += 1;
        }
        images.push(r);
    }
    let image = IsomGroup::from_elements(spec, u_form.dim(), images);
    Ok(RestrictionReport {
        surjective: image.elements() == target.elements(),
        kernel_order,
        source_order: source.order(),
        target_order: target.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn nondegenerate_space_embeds_as_itself() {
        let f = FieldSpec::gf(1);
        let h = QuadraticForm::hyperbolic_plane(f);
        let vs = embed_minimal(&h).unwrap();
        assert_eq!(vs.ambient(), &h);
        assert_eq!(vs.u().dim(), 2);
        assert!(vs.u_perp().is_zero());
        assert!(vs.omega().is_none());
        let g = viso_group(&vs).unwrap();
        assert_eq!(g.order(), 2);
        let rep = restriction_surjectivity(&vs).unwrap();
        assert!(rep.surjective);
        assert_eq!(rep.kernel_order, 1);
    }

    #[test]
    fn square_form_embeds_in_a_plane() {
        let f = FieldSpec::gf(1);
        let sq = QuadraticForm::from_ints(f, &[vec![1]]).unwrap();
        let vs = embed_minimal(&sq).unwrap();
        assert_eq!(vs.ambient().dim(), 2);
        assert!(vs.ambient().radical().is_zero());
        let omega = vs.omega().unwrap();
        assert_eq!(vs.ambient().orthogonal_complement(&[omega]), *vs.u());
        assert_eq!(vs.u_form(), sq);
    }

    // every dim-2 non-degenerate form over GF(2) with first coordinate of norm 1
    #[test]
    fn square_form_embeddings_agree_with_brute_force() {
        let f = FieldSpec::gf(1);
        for b in 1..2u32 {
            for c in 0..2u32 {
                let amb = QuadraticForm::from_ints(f, &[vec![1, b], vec![0, c]]).unwrap();
                assert!(amb.radical().is_zero());
                let vs = VirtualSpace::new(amb, &[linalg::unit_vector(f, 2, 0)]).unwrap();
                assert_eq!(vs.omega().unwrap(), linalg::unit_vector(f, 2, 0));
            }
        }
    }

    #[test]
    fn ternary_form_embeds_in_dimension_four() {
        let f = FieldSpec::gf(1);
        let form =
            QuadraticForm::from_ints(f, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let vs = embed_minimal(&form).unwrap();
        assert_eq!(vs.ambient().dim(), 4);
        assert!(vs.ambient().radical().is_zero());
        assert!(vs.ambient().is_bilinear_nondegenerate());
        assert_eq!(vs.u_form(), form);
    }

    #[test]
    fn two_dimensional_kernel_is_rejected() {
        let f = FieldSpec::gf(1);
        let diag = QuadraticForm::from_ints(f, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(embed_minimal(&diag), Err(Error::NotEmbeddable(2)));
    }

    #[test]
    fn omega_perp_in_the_elliptic_plane() {
        for n in [1, 2] {
            let f = FieldSpec::gf(n);
            let ell = QuadraticForm::plane_with_arf(f, f.arf_e());
            let omega = linalg::unit_vector(f, 2, 0);
            let u = ell.orthogonal_complement(std::slice::from_ref(&omega));
            let vs = VirtualSpace::new(ell.clone(), u.basis()).unwrap();
            let g = viso_group(&vs).unwrap();
            let full = group::enumerate_isometries(&ell, &[]).unwrap();
            let stab = full.filter(|m| m.mul_vec(&omega) == omega);
            assert_eq!(g, stab);
            let rep = restriction_surjectivity(&vs).unwrap();
            assert!(rep.surjective);
            assert_eq!(rep.kernel_order, g.order());
        }
    }

    #[test]
    fn json_round_trip() {
        let f = FieldSpec::gf(2);
        let sq = QuadraticForm::from_ints(f, &[vec![2]]).unwrap();
        let vs = embed_minimal(&sq).unwrap();
        let s = serde_json::to_string(&vs).unwrap();
        assert!(s.starts_with("{\"ambient\":"));
        let back: VirtualSpace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vs);
    }

    #[test]
    fn different_ambients_give_matching_fingerprints() {
        let f = FieldSpec::gf(2);
        let form =
            QuadraticForm::from_ints(f, &[vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        let a = embed_minimal(&form).unwrap();
        let ext = Extension {
            pairings: linalg::vector_from_ints(f, &[0, 0, 1]).unwrap(),
            norm: f.elem(2),
        };
        let b = embed_minimal_with(&form, Some(&ext)).unwrap();
        assert_ne!(a.ambient(), b.ambient());
        let (ga, gb) = (viso_group(&a).unwrap(), viso_group(&b).unwrap());
        assert_eq!(ga.order(), gb.order());
        assert_eq!(ga.order_histogram(), gb.order_histogram());
    }
}
