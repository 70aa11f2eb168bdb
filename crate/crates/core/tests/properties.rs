//! Property suites for the algebraic invariants the toolkit relies on.

use darboux_core::algebra::dual::Dual;
use darboux_core::algebra::form::{Chart, Form1};
use darboux_core::algebra::linalg::{mat_vec, nullspace, rank};
use darboux_core::algebra::poly::Poly;
use darboux_core::darboux::{cofactor, cofactor_additivity_check, darboux_matrix, solve_inverse, CurveConfiguration};
use darboux_core::eta::k_z;
use darboux_core::frommer::{focal_values, focal_values_by, FrommerPath, NormalizedForm, NONLINEAR_MONOMIALS};
use darboux_core::geometry::hilbert::deg_x;
use darboux_core::geometry::points::{configuration_points, expected_deg_x, milnor_number};
use darboux_core::projective::{
    eval_homogeneous, homogenize_polynomial, prime_form1, prime_form2_at, prime_poly, prime_poly_at, ProjPoint,
};
use darboux_core::zeros::{chern_c2_kernel, zeros_outside_bound};
use darboux_core::{F29, Q};
use num_traits::Zero;
use proptest::prelude::*;

mod common;
use common::{dense, f, form_with_integral_curve, line, normal_form, simple_types, x, y};

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..29, n)
}

fn nonzero_coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..29, n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 30, .. ProptestConfig::default() })]

    #[test]
    fn wedge_is_antisymmetric_and_bilinear(a in coeffs(20), b in coeffs(20), c in coeffs(20), s in 1i64..29) {
        let w1 = Form1::affine(dense(2, 2, false, &a[..10]), dense(2, 2, false, &a[10..]));
        let w2 = Form1::affine(dense(2, 3, false, &b[..10]), dense(2, 2, false, &b[10..]));
        let w3 = Form1::affine(dense(2, 1, false, &c[..3]), dense(2, 3, false, &c[3..]));
        let k12 = w1.wedge(&w2).unwrap();
        let k21 = w2.wedge(&w1).unwrap();
        prop_assert_eq!(&k12.c, &(-&k21.c));
        let sum = w2.scale(&f(s)).add(&w3).unwrap();
        let lhs = w1.wedge(&sum).unwrap().c;
        let rhs = &k12.c.scale(&f(s)) + &w1.wedge(&w3).unwrap().c;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradients_are_closed(c in coeffs(15)) {
        let g = dense(2, 4, false, &c);
        prop_assert!(Form1::gradient(Chart::Affine, &g).exterior_derivative().c.is_zero());
    }

    #[test]
    fn exact_division_recovers_the_factor(a in coeffs(10), b in nonzero_coeffs(6)) {
        let a = dense(3, 2, false, &a);
        let b = dense(3, 1, false, &b[..4]);
        prop_assert_eq!((&a * &b).exact_divide(&b).ok(), Some(a));
    }

    #[test]
    fn nullspace_is_exact_and_complementary(m in coeffs(35), rows in 1usize..6) {
        let cols = 7;
        let m: Vec<Vec<F29>> = (0..rows).map(|r| (0..cols).map(|c| f(m[(r * cols + c) % 35])).collect()).collect();
        let n = nullspace(&m, cols);
        for v in &n {
            prop_assert!(mat_vec(&m, v).iter().all(|e| e.is_zero()));
        }
        prop_assert_eq!(rank(&m) + n.len(), cols);
    }

    #[test]
    fn row_scaling_keeps_the_rank(m in coeffs(20), s in nonzero_coeffs(4)) {
        let m: Vec<Vec<Q>> = (0..4).map(|r| (0..5).map(|c| Q::from_integer((m[r * 5 + c] - 14).into())).collect()).collect();
        let scaled: Vec<Vec<Q>> =
            m.iter().zip(&s).map(|(row, k)| row.iter().map(|e| e * Q::from_integer((*k).into())).collect()).collect();
        prop_assert_eq!(rank(&m), rank(&scaled));
    }

    #[test]
    fn dual_numbers_differentiate_exactly(c in coeffs(21), a in 0i64..29, b in 0i64..29) {
        let p = dense(2, 5, false, &c);
        let at = [Dual::variable(f(a)), Dual::constant(f(b))];
        let v = p.eval_in(&at, |k| Dual::constant(*k));
        prop_assert_eq!(v.re, p.eval(&[f(a), f(b)]));
        prop_assert_eq!(v.eps, p.derivative(0).eval(&[f(a), f(b)]));
    }

    #[test]
    fn prime_inverts_through_the_chart_map(c in coeffs(21), extra in 0u32..3) {
        let p = dense(2, 5, false, &c);
        let d = p.deg() + extra;
        // F(x, y) = x^d F′(y/x, 1/x)
        let fp = prime_poly_at(&p, d).unwrap();
        let back = fp.homogenize(d).unwrap().substitute(&[y(), Poly::one(2), x()]);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn homogenization_is_multiplicative(a in coeffs(10), b in coeffs(6), ea in 0u32..2, eb in 0u32..2) {
        let a = dense(2, 3, false, &a);
        let b = dense(2, 2, false, &b);
        let (da, db) = (a.deg() + ea, b.deg() + eb);
        let ha = homogenize_polynomial(&a, da).unwrap().coeffs[0].clone();
        let hb = homogenize_polynomial(&b, db).unwrap().coeffs[0].clone();
        let hab = homogenize_polynomial(&(&a * &b), da + db).unwrap().coeffs[0].clone();
        prop_assert_eq!(hab, &ha * &hb);
    }

    #[test]
    fn homogeneous_values_scale_by_a_power(c in coeffs(10), p in coeffs(3), l in 1i64..29) {
        let g = dense(2, 3, false, &c);
        let h = homogenize_polynomial(&g, 4).unwrap();
        let a = ProjPoint::new(f(p[0]), f(p[1]), f(p[2]));
        let la = ProjPoint { coords: a.coords.clone().map(|t| t * f(l)) };
        let lhs = eval_homogeneous(&h, &la).unwrap();
        let l4 = f(l) * f(l) * f(l) * f(l);
        let rhs = eval_homogeneous(&h, &a).unwrap() * l4;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cofactors_add_on_line_pairs(l in coeffs(6), a in coeffs(3), u in coeffs(3), v in coeffs(3)) {
        let l1 = line(l[0], l[1], l[2]);
        let l2 = line(l[3], l[4], l[5]);
        prop_assume!(l1.exact_divide(&l2).is_err() || l1.deg() != l2.deg());
        let c = &l1 * &l2;
        let w = form_with_integral_curve(&c, &dense(2, 1, false, &a), &dense(2, 1, false, &u), &dense(2, 1, false, &v));
        prop_assert!(cofactor_additivity_check(&l1, &l2, &w).unwrap());
        // the cofactor of the product, computed directly
        let k = cofactor(&c, &w).unwrap().c;
        let sum = &cofactor(&l1, &w).unwrap().c + &cofactor(&l2, &w).unwrap().c;
        prop_assert_eq!(k, sum);
    }

    #[test]
    fn relation_prime_identities(c in coeffs(10), a in coeffs(6), u in coeffs(3), v in coeffs(3), deg in 1u32..4) {
        let curve = dense(2, deg, false, &c);
        prop_assume!(curve.deg() == deg);
        let s = deg + 1;
        let w = form_with_integral_curve(&curve, &dense(2, 2, false, &a), &dense(2, 1, false, &u), &dense(2, 1, false, &v));
        prop_assume!(w.degree() == s);
        let kc = cofactor(&curve, &w).unwrap();
        let wp = prime_form1(&w);
        let kz = k_z(&w).unwrap().c;
        // (K_C)′ = K_{C′} − (deg C) K_z
        let lhs = prime_form2_at(&kc, s - 1).unwrap().c;
        let k_cp = cofactor(&prime_poly(&curve), &wp).unwrap().c;
        prop_assert_eq!(lhs, &k_cp - &kz.scale(&f(deg as i64)));
        // (dω)′ = d(ω′) − (deg ω + 2) K_z
        let lhs = prime_form2_at(&w.exterior_derivative(), s - 1).unwrap().c;
        prop_assert_eq!(lhs, &wp.exterior_derivative().c - &kz.scale(&f(s as i64 + 2)));
    }

    #[test]
    fn solutions_satisfy_the_darboux_identity(c in coeffs(20), shape in 0usize..3, d in 1u32..4) {
        let parts: Vec<Poly<F29>> = match shape {
            0 => vec![dense(3, 1, true, &c[..3]), dense(3, 1, true, &c[3..6])],
            1 => vec![dense(3, 2, true, &c[..6]), dense(3, 1, true, &c[6..9])],
            _ => vec![dense(3, 1, true, &c[..3]), dense(3, 1, true, &c[3..6]), dense(3, 2, true, &c[6..12])],
        };
        let names = (0..parts.len()).map(|i| format!("C{i}")).collect();
        let Ok(cfg) = CurveConfiguration::new(names, parts) else { return Ok(()) };
        let space = solve_inverse(&cfg, d).unwrap();
        let m = darboux_matrix(&cfg);
        for b in &space.basis {
            // rows (C_X, C_Y, …, C_i, …) against (Q, −P, −K)
            let mut v = vec![b.q.clone(), -&b.p];
            v.extend(b.cofactors.iter().map(|k| -k));
            for row in &m {
                let mut acc = Poly::zero(3);
                for (e, x) in row.iter().zip(&v) {
                    acc += &(e * x);
                }
                prop_assert!(acc.is_zero());
            }
            prop_assert!(b.residual(&cfg).iter().all(|r| r.is_zero()));
        }
        // the Hamiltonian triple of each component
        for (i, ci) in cfg.components().iter().enumerate() {
            let v = [ci.derivative(1), -&ci.derivative(0)];
            let mut acc = Poly::zero(3);
            for (e, x) in m[i].iter().zip(&v) {
                acc += &(e * x);
            }
            prop_assert!(acc.is_zero());
        }
    }

    #[test]
    fn milnor_numbers_survive_affine_changes(t in prop::sample::select(simple_types()), k in -3i64..4, m in -3i64..4, b in prop::collection::vec(-3i64..4, 2)) {
        let g = normal_form(t);
        // (x, y) ↦ A (x, y) + b with A = [[1, k], [0, 1]] [[1, 0], [m, 1]]
        let (a11, a12, a21, a22) = (1 + k * m, k, m, 1);
        let qx = Poly::<Q>::var(2, 0);
        let qy = Poly::<Q>::var(2, 1);
        let lin = |p: i64, q: i64, c: i64| &(&qx.scale(&Q::from_integer(p.into())) + &qy.scale(&Q::from_integer(q.into()))) + &Poly::constant(2, Q::from_integer(c.into()));
        let moved = g.substitute(&[lin(a11, a12, b[0]), lin(a21, a22, b[1])]);
        // the singular point A⁻¹(−b), with det A = 1
        let px = -(a22 * b[0] - a12 * b[1]);
        let py = -(-a21 * b[0] + a11 * b[1]);
        let hom = moved.homogenize(moved.deg()).unwrap();
        prop_assert_eq!(milnor_number(&hom, &ProjPoint::from_i64(px, py, 1)).unwrap(), t.milnor());
    }
}

#[test]
fn ade_normal_forms_round_trip() {
    for t in simple_types() {
        let g = normal_form(t);
        let c = g.homogenize(g.deg()).unwrap();
        let cfg = CurveConfiguration::new(vec!["C".into()], vec![c]).unwrap();
        let pts = configuration_points(&cfg, &[]).unwrap();
        let origin = pts.iter().find(|p| p.orbit.contains(&ProjPoint::from_i64(0, 0, 1))).unwrap();
        assert_eq!(origin.union_type.tag, Some(t), "{t}");
        assert_eq!(origin.curve_milnor, t.milnor(), "{t}");
    }
}

#[test]
fn deg_x_of_the_cuspidal_cubic() {
    let c = darboux_core::algebra::parse::parse_poly("y^3 - x^2*z", &["x", "y", "z"]).unwrap();
    assert_eq!(deg_x(&c).unwrap(), 4);
    let cfg = CurveConfiguration::new(vec!["C".into()], vec![c]).unwrap();
    assert_eq!(expected_deg_x(&configuration_points(&cfg, &[]).unwrap()), 4);
}

#[test]
fn chern_expansion_matches_the_zero_bound() {
    for s in 1..=10i64 {
        for d in 1..=10i64 {
            for l in 0..=30i64 {
                // E = O(s) ⊕ O(s) ⊕ O(s−1), L = O(s+d−1); c(E) expanded as a product
                let roots = [s, s, s - 1];
                let c1: i64 = roots.iter().sum();
                let c2: i64 =
                    (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).map(|(i, j)| roots[i] * roots[j]).sum();
                let (k1, k2) = chern_c2_kernel(3, c1, c2, s + d - 1, l);
                assert_eq!(k1, c1 - (s + d - 1));
                assert_eq!(k2, s * s - s * d + d * d - d - l, "s={s} d={d} ℓ={l}");
                assert_eq!(k2, zeros_outside_bound(s, d, l));
            }
        }
    }
}

fn random_params(seed: &[i64]) -> Vec<F29> {
    seed.iter().map(|&c| f(c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, .. ProptestConfig::default() })]

    #[test]
    fn frommer_paths_agree(p in coeffs(14)) {
        let nf = NormalizedForm::from_parameters(random_params(&p)).unwrap();
        let e = focal_values_by(&nf, 13, FrommerPath::Eigenbasis).unwrap();
        let d = focal_values_by(&nf, 13, FrommerPath::Dense).unwrap();
        prop_assert_eq!(e, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, .. ProptestConfig::default() })]

    #[test]
    fn hamiltonian_forms_have_no_focal_values(h in coeffs(9)) {
        // ω = dH, H = (x² + y²)/2 + H₃ + H₄
        let mut hp = Poly::zero(2);
        for j in 0..4u32 {
            hp.add_term([3 - j, j].into_iter().collect(), f(h[j as usize]));
        }
        for j in 0..5u32 {
            hp.add_term([4 - j, j].into_iter().collect(), f(h[4 + j as usize]));
        }
        let hx = hp.derivative(0);
        // only the cubic part of H_x, H_y can appear in a cubic normalized form
        let w = Form1::affine(&x() + &hx, &y() + &hp.derivative(1));
        let nf = NormalizedForm::from_form(&w).unwrap();
        prop_assert!(focal_values(&nf, 13).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn reversible_forms_have_no_focal_values(p in coeffs(14)) {
        // P even and Q odd in y: invariant under (x, y) ↦ (x, −y)
        let mut params = random_params(&p);
        for (k, &(_, j)) in NONLINEAR_MONOMIALS.iter().enumerate() {
            if j % 2 == 1 {
                params[k] = f(0);
            } else {
                params[7 + k] = f(0);
            }
        }
        let nf = NormalizedForm::from_parameters(params).unwrap();
        prop_assert!(focal_values(&nf, 13).unwrap().iter().all(|v| v.is_zero()));
    }
}
