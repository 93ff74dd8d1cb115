use approx::assert_relative_eq;
use proptest::prelude::*;

use isowave::dispersion::{eulerian_omega, frequency, frequency_dm, m_star, omega};
use isowave::triads::{Coupling, Triad};
use isowave::{PhysicalParams, Wavevector};

fn params() -> impl Strategy<Value = PhysicalParams> {
    (0.0..1.0f64, 0.5..20.0f64, 1e-3..1.0f64, 0.5..2000.0f64)
        .prop_map(|(f, g, n, rho0)| PhysicalParams::new(f, g, n, rho0).unwrap())
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn rotate(v: [f64; 2], a: f64) -> [f64; 2] {
    let (s, c) = a.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

proptest! {
    #[test]
    fn eulerian_form_agrees(p in params(), k in log_uniform(1e-3, 1e3), m in log_uniform(1e-3, 1e3), neg in any::<bool>()) {
        let m = if neg { -m } else { m };
        let w = Wavevector::new(k, m).unwrap();
        assert_relative_eq!(
            eulerian_omega(k, m_star(w, &p), &p),
            omega(w, &p).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn vertical_derivative_matches_difference(p in params(), k in log_uniform(1e-2, 1e2), m in log_uniform(1e-2, 1e2)) {
        let h = 1e-5 * m;
        let fd = (frequency(k, m + h, &p) - frequency(k, m - h, &p)) / (2.0 * h);
        let exact = frequency_dm(k, m, frequency(k, m, &p), &p);
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs() + 1e-9 * frequency(k, m, &p) / m);
    }

    #[test]
    fn coupling_is_rotation_and_swap_invariant(
        p in params(),
        k2 in log_uniform(0.1, 10.0),
        k3 in log_uniform(0.1, 10.0),
        a2 in 0.0..std::f64::consts::TAU,
        a3 in 0.0..std::f64::consts::TAU,
        turn in 0.0..std::f64::consts::TAU,
        m2 in 0.1..10.0f64,
        m3 in -10.0..-0.1f64,
    ) {
        let v2 = [k2 * a2.cos(), k2 * a2.sin()];
        let v3 = [k3 * a3.cos(), k3 * a3.sin()];
        let t = Triad::from_vectors(v2, m2, v3, m3);
        prop_assume!(t.is_ok());
        let t = t.unwrap();
        prop_assume!(t.cross_abs() > 1e-3 * k2 * k3);
        let c = Coupling::new(p);
        let base = c.v_squared(&t);
        prop_assert!(base >= 0.0);
        let turned = Triad::from_vectors(rotate(v2, turn), m2, rotate(v3, turn), m3).unwrap();
        assert_relative_eq!(c.v_squared(&turned), base, max_relative = 1e-9, epsilon = 1e-300);
        assert_relative_eq!(c.v_squared(&t.swapped()), base, max_relative = 1e-12, epsilon = 1e-300);
    }
}
