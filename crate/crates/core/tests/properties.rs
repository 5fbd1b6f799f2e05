use char2_conformal::field::{ArfValue, FieldSpec};
use char2_conformal::geometry::{self, build_geometry};
use char2_conformal::quadratic::spaces_isomorphic;
use char2_conformal::virtual_space::VirtualSpace;
use char2_conformal::{FieldElement, Matrix, QuadraticForm, Subspace, Vector};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = FieldSpec> {
    (1u32..=8).prop_map(FieldSpec::gf)
}

fn element(spec: FieldSpec) -> impl Strategy<Value = FieldElement> {
    (0..spec.order()).prop_map(move |v| spec.elem(v))
}

fn field_with_elements(k: usize) -> impl Strategy<Value = (FieldSpec, Vec<FieldElement>)> {
    field().prop_flat_map(move |spec| (Just(spec), prop::collection::vec(element(spec), k)))
}

fn vector(spec: FieldSpec, dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(element(spec), dim)
}

fn invertible(spec: FieldSpec, dim: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(vector(spec, dim), dim)
        .prop_map(move |rows| Matrix::from_rows(spec, &rows))
        .prop_filter("invertible", Matrix::is_invertible)
}

fn form(spec: FieldSpec, dim: usize) -> impl Strategy<Value = QuadraticForm> {
    prop::collection::vec(element(spec), dim * dim).prop_map(move |flat| {
        let mut c = Matrix::zeros(spec, dim, dim);
        for i in 0..dim {
            for j in i..dim {
                c[(i, j)] = flat[i * dim + j];
            }
        }
        QuadraticForm::new(c).expect("upper triangular")
    })
}

fn nondegenerate_form(spec: FieldSpec, dim: usize) -> impl Strategy<Value = QuadraticForm> {
    form(spec, dim).prop_filter(
        "non-degenerate bilinear form",
        QuadraticForm::is_bilinear_nondegenerate,
    )
}

/// A small field together with a form, a basis change and two vectors.
fn form_case(dim: usize) -> impl Strategy<Value = (QuadraticForm, Matrix, Vector, Vector)> {
    (1u32..=4)
        .prop_map(FieldSpec::gf)
        .prop_flat_map(move |spec| {
            (
                nondegenerate_form(spec, dim),
                invertible(spec, dim),
                vector(spec, dim),
                vector(spec, dim),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms((_spec, x) in field_with_elements(3)) {
        let (a, b, c) = (x[0], x[1], x[2]);
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a + a, a.spec().zero());
        if let Some(inv) = a.inv() {
            prop_assert!((a * inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn frobenius_and_trace((_spec, x) in field_with_elements(2)) {
        let (a, b) = (x[0], x[1]);
        prop_assert_eq!(a.sqrt().square(), a);
        prop_assert_eq!((a + b).square(), a.square() + b.square());
        let t = a.trace();
        prop_assert!(t.is_zero() || t.is_one());
        prop_assert_eq!((a + b).trace(), a.trace() + b.trace());
        prop_assert!(a.artin_schreier().trace().is_zero());
    }

    #[test]
    fn artin_schreier_solutions((spec, x) in field_with_elements(1)) {
        let c = x[0];
        match c.solve_artin_schreier() {
            Some((r0, r1)) => {
                prop_assert_eq!(r0 + r0.square(), c);
                prop_assert_eq!(r1, r0 + spec.one());
                prop_assert!(c.trace().is_zero());
            }
            None => prop_assert!(c.trace().is_one()),
        }
    }

    #[test]
    fn polarization((f, _t, u, v) in form_case(4)) {
        let sum: Vector = u.iter().zip(&v).map(|(a, b)| *a + *b).collect();
        prop_assert_eq!(f.q(&sum), f.q(&u) + f.q(&v) + f.b(&u, &v));
        prop_assert!(f.b(&u, &u).is_zero());
        prop_assert_eq!(f.b(&u, &v), f.b(&v, &u));
    }

    #[test]
    fn arf_class_is_invariant_dim2((f, t, _u, _v) in form_case(2)) {
        let a = f.arf_invariant().unwrap();
        let g = f.transform(&t);
        prop_assert_eq!(g.arf_invariant().unwrap().class(), a.class());
        prop_assert!(spaces_isomorphic(&f, &g).unwrap().is_some());
    }

    #[test]
    fn arf_class_is_invariant_dim4((f, t, _u, _v) in form_case(4)) {
        let a = f.arf_invariant().unwrap();
        prop_assert_eq!(f.transform(&t).arf_invariant().unwrap().class(), a.class());
    }

    #[test]
    fn arf_is_additive((f, _t, _u, _v) in form_case(2), seed in 0u32..64) {
        let spec = f.spec();
        let other = QuadraticForm::plane_with_arf(spec, spec.elem(seed % spec.order()));
        let sum = f.direct_sum(&other).arf_invariant().unwrap();
        let parts = (f.arf_invariant().unwrap(), other.arf_invariant().unwrap());
        match parts {
            (ArfValue::Finite(a), ArfValue::Finite(b)) => prop_assert_eq!(sum.class(), ArfValue::Finite(a + b).class()),
            _ => prop_assert!(false, "non-degenerate planes have finite Arf invariants"),
        }
    }

    #[test]
    fn canonical_basis_normalizes((f, _t, _u, _v) in form_case(4)) {
        let (basis, c) = f.canonical_basis().unwrap();
        let moved = f.transform(&basis);
        let target = QuadraticForm::plane_with_arf(f.spec(), c).direct_sum(&QuadraticForm::hyperbolic_plane(f.spec()));
        prop_assert_eq!(moved, target);
    }

    #[test]
    fn isometries_of_the_model_preserve_q((f, t, u, _v) in form_case(2)) {
        // t is an isometry from f.transform(t) to f
        let g = f.transform(&t);
        prop_assert_eq!(g.q(&u), f.q(&t.mul_vec(&u)));
    }

    #[test]
    fn matrix_inverse((t, u) in (1u32..=8).prop_map(FieldSpec::gf).prop_flat_map(|spec| (invertible(spec, 3), vector(spec, 3)))) {
        let inv = t.inverse().unwrap();
        prop_assert!((&t * &inv).is_identity());
        prop_assert_eq!(inv.mul_vec(&t.mul_vec(&u)), u);
    }

    #[test]
    fn virtual_space_embeddability((f, _t, u, v) in form_case(4)) {
        let line = VirtualSpace::new(f.clone(), std::slice::from_ref(&u)).unwrap();
        prop_assert_eq!(line.u().dim() + line.u_perp().dim(), 4);
        let plane = VirtualSpace::new(f.clone(), &[u.clone(), v.clone()]);
        let totally_isotropic = Subspace::span(f.spec(), 4, &[u.clone(), v.clone()]).dim() == 2 && f.b(&u, &v).is_zero();
        prop_assert_eq!(plane.is_err(), totally_isotropic);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn replacement_keeps_validity_and_class(n in 1u32..=2, pi in 0usize..3, li in 0usize..3, a in 0u32..4, b in 0u32..4) {
        let spec = FieldSpec::gf(n);
        let classes = [ArfValue::Finite(spec.arf_e()), ArfValue::Infinity, ArfValue::Finite(spec.zero())];
        let g = build_geometry(spec, classes[pi], classes[li], None).unwrap();
        let (alpha, beta) = (spec.elem(a % spec.order()), spec.elem(b % spec.order()));
        match geometry::replace_omega(&g, alpha, beta) {
            Ok(r) => {
                prop_assert!(r.geometry.is_valid());
                prop_assert_eq!(geometry::arf_of(&r.geometry, r.geometry.l()).unwrap(), r.predicted_l);
                prop_assert_eq!(geometry::arf_of(&r.geometry, r.geometry.p()).unwrap(), r.predicted_p);
                if classes[pi].is_zero_or_infinite() {
                    prop_assert_eq!(r.predicted_p, classes[pi]);
                }
                if classes[li].is_zero_or_infinite() {
                    prop_assert_eq!(r.predicted_l, classes[li]);
                }
            }
            Err(e) => prop_assert_eq!(e, char2_conformal::Error::DegenerateOmega),
        }
    }

    #[test]
    fn geometry_json_round_trip(n in 1u32..=3, pi in 0usize..3, li in 0usize..3) {
        let spec = FieldSpec::gf(n);
        let classes = [ArfValue::Finite(spec.arf_e()), ArfValue::Infinity, ArfValue::Finite(spec.zero())];
        let g = build_geometry(spec, classes[pi], classes[li], None).unwrap();
        let back: geometry::Geometry = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}
