//! Property tests: structural laws that must hold for every admissible input,
//! not just the pinned configurations the unit tests probe.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use rankone::geometry::{
    boundary_action, bracket_matrix_route, circle_quadrature, disk_action, geodesic_frame,
    horocycle_bracket, point_to_group, BoundaryPoint, DiskPoint, RHO,
};
use rankone::lie::{
    cartan_kak, iwasawa_kan, iwasawa_nak, iwasawa_t, max_abs_diff, sl2_a, sl2_n, sl2_rotation,
    weyl_longest, Group, GroupElement, RootDatum,
};
use rankone::psdistrib::{intermediate_value, radon_transform, LineQuadrature, SymbolFn};
use rankone::spectral::{c_function, plancherel_density, SpectralParam};
use rankone::transforms::{poisson_transform, BoundaryMeasure};

const TAU: f64 = std::f64::consts::TAU;

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

/// SL2 element k(alpha) a(t) n(u) with moderate parameters, so images of
/// test points stay numerically clear of the boundary.
fn sl2_element() -> impl Strategy<Value = GroupElement> {
    (-3.2..3.2f64, -1.5..1.5f64, -2.0..2.0f64)
        .prop_map(|(alpha, t, u)| &(&sl2_rotation(alpha) * &sl2_a(t)) * &sl2_n(u))
}

fn disk_point() -> impl Strategy<Value = DiskPoint> {
    (0.0..0.85f64, angle())
        .prop_map(|(r, phi)| DiskPoint::new(Complex64::from_polar(r, phi)).unwrap())
}

fn exponent(lambda: SpectralParam) -> Complex64 {
    Complex64::new(RHO, 0.0) + Complex64::new(0.0, 1.0) * lambda.0
}

// ---------------------------------------------------------------------------
// Decompositions.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sl2_decompositions_round_trip_and_recover_the_a_part(
        alpha in -3.2..3.2f64,
        t in -2.0..2.0f64,
        u in -3.0..3.0f64,
    ) {
        let g = &(&sl2_rotation(alpha) * &sl2_a(t)) * &sl2_n(u);
        let kan = iwasawa_kan(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &kan.reconstruct()) <= 1e-10);
        // KAN is unique, so the A part must be the t the element was built from.
        prop_assert!((kan.a_log[0] - t).abs() <= 1e-9);

        let nak = iwasawa_nak(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &nak.reconstruct()) <= 1e-10);

        let kak = cartan_kak(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &kak.reconstruct()) <= 1e-10);
        prop_assert!(kak.a_log[0] >= -1e-12, "Cartan exponents are sorted non-increasing");
    }

    #[test]
    fn sl3_decompositions_round_trip(
        entries in proptest::array::uniform9(-0.4..0.4f64),
    ) {
        let mut mat = DMatrix::<f64>::identity(3, 3);
        for (k, &e) in entries.iter().enumerate() {
            mat[(k / 3, k % 3)] += e;
        }
        let det = mat.determinant();
        prop_assume!(det > 0.2);
        let g = GroupElement::new(Group::Sl3, mat / det.cbrt()).unwrap();

        let kan = iwasawa_kan(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &kan.reconstruct()) <= 1e-9);
        prop_assert!(kan.a_log.iter().sum::<f64>().abs() <= 1e-9, "diagonal logs sum to zero");

        let nak = iwasawa_nak(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &nak.reconstruct()) <= 1e-9);

        let kak = cartan_kak(&g).unwrap();
        prop_assert!(max_abs_diff(g.matrix(), &kak.reconstruct()) <= 1e-9);
    }

    #[test]
    fn iwasawa_projection_shifts_under_right_a_translation(
        g in sl2_element(),
        s in -2.0..2.0f64,
    ) {
        let shifted = iwasawa_t(&(&g * &sl2_a(s))).unwrap();
        prop_assert!((shifted - iwasawa_t(&g).unwrap() - s).abs() <= 1e-9);
    }

    #[test]
    fn horocyclic_kernel_has_the_logarithmic_closed_form(u in -6.0..6.0f64) {
        let g = &sl2_n(u).inverse() * &weyl_longest(Group::Sl2);
        prop_assert!((iwasawa_t(&g).unwrap() - (1.0 + u * u).ln()).abs() <= 1e-10);
    }
}

// ---------------------------------------------------------------------------
// Brackets and boundary actions.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_satisfies_the_cocycle_identity(
        g in sl2_element(),
        z in disk_point(),
        theta in angle(),
    ) {
        let b = BoundaryPoint::new(theta);
        let gz = disk_action(&g, &z);
        let gb = boundary_action(&g, &b).gb;
        let go = disk_action(&g, &DiskPoint::origin());
        let lhs = horocycle_bracket(&gz, &gb);
        let rhs = horocycle_bracket(&z, &b) + horocycle_bracket(&go, &gb);
        prop_assert!((lhs - rhs).abs() <= 1e-9, "lhs {lhs} rhs {rhs}");
    }

    #[test]
    fn bracket_agrees_with_the_matrix_route(z in disk_point(), theta in angle()) {
        let b = BoundaryPoint::new(theta);
        let direct = horocycle_bracket(&z, &b);
        let matrix = bracket_matrix_route(&point_to_group(&z), &b).unwrap();
        prop_assert!((direct - matrix).abs() <= 1e-9, "direct {direct} matrix {matrix}");
    }
}

// ---------------------------------------------------------------------------
// Spectral data.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn c_function_is_conjugate_symmetric_on_the_real_axis(lam in 0.1..8.0f64) {
        let roots = RootDatum::disk();
        let plus = c_function(SpectralParam::real(lam), &roots).unwrap();
        let minus = c_function(SpectralParam::real(-lam), &roots).unwrap();
        prop_assert!((minus - plus.conj()).norm() <= 1e-10 * plus.norm());

        let density = plancherel_density(lam, &roots).unwrap();
        prop_assert!(density > 0.0);
        let mirrored = plancherel_density(-lam, &roots).unwrap();
        prop_assert!((density - mirrored).abs() <= 1e-10 * density);
    }
}

// ---------------------------------------------------------------------------
// Poisson transforms.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_kernel_integrates_to_one(z in disk_point()) {
        // At lambda = -i rho the kernel is e^{2 rho <z, b>}, a probability
        // density in b for every base point.
        let lambda = SpectralParam(Complex64::new(0.0, -RHO));
        let uniform = BoundaryMeasure::uniform(circle_quadrature(512).unwrap()).unwrap();
        let value = poisson_transform(&uniform, lambda).evaluate(&z);
        prop_assert!((value - Complex64::new(1.0, 0.0)).norm() <= 1e-10, "got {value}");
    }

    #[test]
    fn poisson_transform_intertwines_pushforward_with_translation(
        g in sl2_element(),
        z in disk_point(),
        theta1 in angle(),
        gap in 0.5..5.5f64,
        w_re in 0.2..1.5f64,
        w_im in -1.0..1.0f64,
        lam in 0.3..3.0f64,
    ) {
        let lambda = SpectralParam::real(lam);
        let measure = BoundaryMeasure::from_atoms(vec![
            (BoundaryPoint::new(theta1), Complex64::new(w_re, w_im)),
            (BoundaryPoint::new(theta1 + gap), Complex64::new(1.0, -0.5)),
        ]).unwrap();
        let pushed = measure.pushforward(&g, lambda).unwrap();
        let lhs = poisson_transform(&pushed, lambda).evaluate(&z);
        let rhs = poisson_transform(&measure, lambda)
            .evaluate(&disk_action(&g.inverse(), &z));
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "lhs {lhs} rhs {rhs}");
    }
}

// ---------------------------------------------------------------------------
// Intermediate values and Radon transforms.
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonal_intermediate_value_is_a_chord_power(
        theta in angle(),
        gap in 0.31..5.9f64,
        lam in 0.2..3.0f64,
    ) {
        let b = BoundaryPoint::new(theta);
        let b2 = BoundaryPoint::new(theta + gap);
        prop_assume!((b.unit() - b2.unit()).norm() >= 0.3);
        let lambda = SpectralParam::real(lam);
        let frame = geodesic_frame(&b, &b2).unwrap();
        let got = intermediate_value(&frame, lambda, lambda).unwrap();
        let chord = (b.unit() - b2.unit()).norm();
        let want = (-(2.0 * exponent(lambda)) * (chord / 2.0).ln()).exp();
        prop_assert!((got - want).norm() <= 1e-8 * want.norm(), "got {got} want {want}");
    }

    #[test]
    fn intermediate_value_shifts_along_the_geodesic_flow(
        g in sl2_element(),
        s in -1.5..1.5f64,
        lam in 0.3..2.5f64,
        mu in 0.3..2.5f64,
    ) {
        let lambda = SpectralParam::real(lam);
        let mu = SpectralParam::real(mu);
        let lhs = intermediate_value(&(&g * &sl2_a(s)), lambda, mu).unwrap();
        let rhs = intermediate_value(&g, lambda, mu).unwrap()
            * (Complex64::new(0.0, 1.0) * (lambda.0 - mu.0) * s).exp();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm(), "lhs {lhs} rhs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn radon_vanishes_when_the_geodesic_misses_the_support(
        theta in angle(),
        gap in 0.3..0.8f64,
    ) {
        // For boundary points this close the geodesic stays at hyperbolic
        // distance above 1.5 from the origin, clear of the support radius.
        let f = SymbolFn::bump_at(DiskPoint::origin(), 0.3).unwrap();
        let lq = LineQuadrature::uniform(4.0, 400).unwrap();
        let b = BoundaryPoint::new(theta);
        let b2 = BoundaryPoint::new(theta + gap);
        let v = radon_transform(&f, &b, &b2, &lq).unwrap();
        prop_assert_eq!(v, Complex64::new(0.0, 0.0));
    }
}
