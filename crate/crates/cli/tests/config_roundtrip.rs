use isowave::hamlab::{ModelKind, Scheme};
use isowave_cli::config::{parse_config, RunConfig, Scenario};
use proptest::prelude::*;

fn config() -> impl Strategy<Value = RunConfig> {
    (
        (0.0..1e-2f64, 0.1..20.0f64, 1e-3..1.0f64, 0.5..2e3f64),
        (1e-3..1.0f64, 2.0..1e3f64, 2..40usize, 2..40usize),
        (0..6u32, 1..16usize, any::<bool>(), any::<bool>()),
        (-5.0..-2.0f64, -2.0..1.0f64, any::<u32>(), 0..8usize),
        (0..6usize, 1e-4..1e-1f64, 1..500usize, any::<bool>()),
    )
        .prop_map(|(phys, grid, quad, law, ham)| {
            let mut c = RunConfig::default();
            c.scenario = Scenario::ALL[law.3].name().to_string();
            c.seed = law.2 as u64;
            c.physics.f = phys.0;
            c.physics.g = phys.1;
            c.physics.n = phys.2;
            c.physics.rho0 = phys.3;
            c.grid.k_min = grid.0;
            c.grid.k_max = grid.1;
            c.grid.nk = grid.2;
            c.grid.nm = grid.3;
            c.quad.refinement = quad.0;
            c.quad.order = quad.1;
            c.quad.boundary_mapping = quad.2;
            c.quad.mixed_sign = quad.3;
            c.spectrum.x = law.0;
            c.spectrum.y = law.1;
            c.hamlab.model = ModelKind::ALL[ham.0];
            c.hamlab.amplitude = ham.1;
            c.hamlab.steps = ham.2;
            c.hamlab.scheme = if ham.3 {
                Scheme::ImplicitMidpoint
            } else {
                Scheme::Rk4
            };
            if c.scenario == Scenario::GmCompare.name() && c.physics.f == 0.0 {
                c.physics.f = 1e-4;
            }
            if c.hamlab.model == ModelKind::RotatingInternalWaves && c.physics.f == 0.0 {
                c.physics.f = 1e-4;
            }
            c
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn effective_config_round_trips(cfg in config()) {
        prop_assume!(cfg.validate().is_ok());
        let text = cfg.to_toml();
        prop_assert_eq!(parse_config(&text).unwrap(), cfg);
    }
}

#[test]
fn partial_config_fills_defaults() {
    let cfg = parse_config("seed = 9\n[physics]\nf = 0.25\n").unwrap();
    let mut expected = RunConfig::default();
    expected.seed = 9;
    expected.physics.f = 0.25;
    assert_eq!(cfg, expected);
}

#[test]
fn validation_names_the_parameter() {
    let err = parse_config("[grid]\nnk = 1\n").unwrap_err().to_string();
    assert!(err.contains("nk"), "{err}");
    let err = parse_config("[hamlab]\namplitude = -1.0\n")
        .unwrap_err()
        .to_string();
    assert!(err.contains("amplitude"), "{err}");
}
