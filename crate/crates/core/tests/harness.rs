use std::f64::consts::PI;
use std::process::Command;

use biharm::forward::{BoundaryCondition, DataKind, DataMatrix, Excitation};
use biharm::geometry::ArrayGeometry;
use biharm::harness::{
    add_noise, add_noise_on_stream, compute_images, format_matrix, gaussian_pair, grid_csv, grid_ppm, load_data,
    palette, palette_indices, parse_curves, parse_matrix, parse_real, run_criterion, run_experiment, sign_convention,
    simulate_stage, ExperimentConfig, Level, NoiseSpec, RunReport, ValidationOptions, OUTLINE_INDEX,
};
use biharm::imaging::{GridSpec, IndicatorId, IndicatorSpec, SamplingGrid};
use biharm::specfun::WaveParams;
use biharm::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn params() -> WaveParams {
    WaveParams::new(2.0 * PI, WaveParams::DEFAULT_NU).unwrap()
}

fn random_matrix(kind: DataKind, excitation: Excitation, seed: u64) -> DataMatrix {
    let array = ArrayGeometry::new(10.0, 10.0, 6, 5, 7).unwrap();
    let (r, c) = DataMatrix::shape_for(kind, excitation, &array);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = (0..r * c)
        .map(|_| {
            if kind.is_real() {
                Complex64::new(rng.gen_range(0.0..2.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        })
        .collect();
    DataMatrix::new(kind, excitation, values, params(), array).unwrap()
}

/// Small scene that images quickly.
fn small_config(dir: &std::path::Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::example1();
    c.array = ArrayGeometry::new(8.0, 8.0, 24, 24, 24).unwrap();
    c.grid = GridSpec::new([-2.0, 2.0, -2.0, 2.0], 9, 9).unwrap();
    c.indicators = [1, 5, 9, 11].iter().map(|j| IndicatorId::new(*j).unwrap()).collect();
    c.noise_levels = vec![0.0, 0.2];
    c.seed = 11;
    c.output_dir = dir.to_path_buf();
    c
}

#[test]
fn noise_moves_each_entry_by_exactly_delta_times_its_magnitude() {
    let data = random_matrix(DataKind::Scattered, Excitation::PointSource, 1);
    let noisy = add_noise(&data, NoiseSpec::new(0.1, 42).unwrap()).unwrap();
    for (u, v) in data.values.iter().zip(&noisy.values) {
        assert!(((v - u).norm() - 0.1 * u.norm()).abs() <= 1e-14 * u.norm().max(1.0));
    }
}

#[test]
fn zero_noise_is_the_identity() {
    let data = random_matrix(DataKind::Moment, Excitation::PlaneWave, 2);
    assert_eq!(add_noise(&data, NoiseSpec::new(0.0, 9).unwrap()).unwrap(), data);
}

#[test]
fn noise_is_reproducible_per_seed_and_stream() {
    let data = random_matrix(DataKind::FarField, Excitation::PlaneWave, 3);
    let spec = NoiseSpec::new(0.05, 7).unwrap();
    assert_eq!(add_noise(&data, spec).unwrap(), add_noise(&data, spec).unwrap());
    assert_ne!(add_noise(&data, spec).unwrap(), add_noise(&data, NoiseSpec::new(0.05, 8).unwrap()).unwrap());
    assert_ne!(add_noise_on_stream(&data, spec, 0).unwrap(), add_noise_on_stream(&data, spec, 1).unwrap());
}

#[test]
fn first_noise_draws_are_frozen() {
    // first uniforms of ChaCha20 seeded with 42, stream 0, pushed through the polar method
    let data = DataMatrix::new(
        DataKind::Scattered,
        Excitation::PointSource,
        vec![Complex64::new(1.0, 0.0); 6 * 5],
        params(),
        ArrayGeometry::new(10.0, 10.0, 6, 5, 7).unwrap(),
    )
    .unwrap();
    let noisy = add_noise(&data, NoiseSpec::new(0.5, 42).unwrap()).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    for v in noisy.values.iter().take(4) {
        let (a, b) = gaussian_pair(&mut rng);
        let xi = Complex64::new(a, b);
        assert_eq!(*v, Complex64::new(1.0, 0.0) + xi * (0.5 / xi.norm()));
    }
}

#[test]
fn gaussian_pairs_have_unit_variance() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let n = 100_000;
    let (mut sum, mut sq, mut cross) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let (a, b) = gaussian_pair(&mut rng);
        sum += a + b;
        sq += a * a + b * b;
        cross += a * b;
    }
    let m = 2.0 * n as f64;
    assert!((sum / m).abs() < 0.01);
    assert!((sq / m - 1.0).abs() < 0.01);
    assert!((cross / n as f64).abs() < 0.01);
}

#[test]
fn negative_or_nan_noise_level_is_rejected() {
    assert!(matches!(NoiseSpec::new(-0.01, 1), Err(Error::Domain(_))));
    assert!(matches!(NoiseSpec::new(f64::NAN, 1), Err(Error::Domain(_))));
}

#[test]
fn magnitudes_cannot_be_noised() {
    let data = random_matrix(DataKind::TotalMagnitude, Excitation::PointSource, 4);
    assert!(matches!(add_noise(&data, NoiseSpec::new(0.1, 1).unwrap()), Err(Error::Contract(_))));
}

proptest! {
    #[test]
    fn noise_radius_holds_for_any_level(delta in 0.0f64..2.0, seed in any::<u64>()) {
        let data = random_matrix(DataKind::NormalDerivative, Excitation::PointSource, 6);
        let noisy = add_noise(&data, NoiseSpec::new(delta, seed).unwrap()).unwrap();
        for (u, v) in data.values.iter().zip(&noisy.values) {
            prop_assert!(((v - u).norm() - delta * u.norm()).abs() <= 1e-13);
        }
    }
}

#[test]
fn data_files_round_trip_exactly() {
    for (kind, exc) in [
        (DataKind::Scattered, Excitation::PointSource),
        (DataKind::Force, Excitation::PlaneWave),
        (DataKind::FarField, Excitation::PointSource),
        (DataKind::FarField, Excitation::PlaneWave),
        (DataKind::TotalMagnitude, Excitation::PointSource),
    ] {
        let data = random_matrix(kind, exc, 10);
        let back = parse_matrix(&format_matrix(&data)).unwrap();
        assert_eq!(back.values, data.values, "{}", kind.tag());
        assert_eq!((back.kind, back.excitation, back.rows, back.cols), (kind, exc, data.rows, data.cols));
        assert_eq!(back.params, data.params);
        assert_eq!(format_matrix(&back), format_matrix(&data));
    }
}

fn parse_line(text: &str) -> usize {
    match parse_matrix(text) {
        Err(Error::Parse { line, .. }) => line,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn truncated_file_reports_the_missing_line() {
    let data = random_matrix(DataKind::Scattered, Excitation::PointSource, 12);
    let text = format_matrix(&data);
    let kept: Vec<&str> = text.lines().take(11).collect();
    assert_eq!(parse_line(&kept.join("\n")), 12);
}

#[test]
fn malformed_files_report_their_line() {
    let data = random_matrix(DataKind::Scattered, Excitation::PointSource, 13);
    let text = format_matrix(&data);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();

    let mut bad_header = lines.clone();
    bad_header[0] = bad_header[0].replace("bhm-data v1", "bhm-data v2");
    assert_eq!(parse_line(&bad_header.join("\n")), 1);

    let mut bad_number = lines.clone();
    bad_number[4] = "0 3 1.0 nope".into();
    assert_eq!(parse_line(&bad_number.join("\n")), 5);

    let mut duplicate = lines.clone();
    duplicate[6] = duplicate[5].clone();
    assert_eq!(parse_line(&duplicate.join("\n")), 7);

    lines[2] = "0 1 inf 0".into();
    assert_eq!(parse_line(&lines.join("\n")), 3);

    let mags = random_matrix(DataKind::TotalMagnitude, Excitation::PointSource, 14);
    let mut neg: Vec<String> = format_matrix(&mags).lines().map(String::from).collect();
    neg[3] = "0 2 -1.0".into();
    assert_eq!(parse_line(&neg.join("\n")), 4);
}

#[test]
fn config_text_round_trips() {
    for mut c in [ExperimentConfig::example1(), ExperimentConfig::example2(), ExperimentConfig::example3()] {
        c.seed = 99;
        let back = ExperimentConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }
}

#[test]
fn config_reads_sections_and_pi_multiples() {
    let text = "\
# kite with noise
scene.name = kite-test
scene.curves = kite(0, 0, 1)
scene.kappa = 2pi
array.receivers = 64
imaging.indicators = 1, 10, 11
imaging.bounds = -3, 3, -3, 3
imaging.nx = 31
noise.levels = 0, 0.05
noise.seed = 17
forward.backend = mfs
forward.mfs.sources = 120
forward.mfs.collocation = 300
";
    let c = ExperimentConfig::parse(text).unwrap();
    assert_eq!(c.name, "kite-test");
    assert_eq!(c.params.kappa, 2.0 * PI);
    assert_eq!(c.array.receivers, 64);
    assert_eq!(c.array.sources, 128);
    assert_eq!(c.indicators.iter().map(|j| j.get()).collect::<Vec<_>>(), vec![1, 10, 11]);
    assert_eq!((c.grid.nx, c.grid.ny), (31, 121));
    assert_eq!(c.noise_levels, vec![0.0, 0.05]);
    assert_eq!(c.seed, 17);
    assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
}

fn config_error(text: &str) -> String {
    match ExperimentConfig::parse(text) {
        Err(Error::Config(m)) => m,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn config_errors_name_the_line() {
    assert!(config_error("scene.kappa = 2pi\nscene.colour = red\n").contains("line 2"));
    assert!(config_error("noise.seed = 1\nnoise.seed = 2\n").contains("line 2"));
    assert!(config_error("\n\nscene.kappa = fast\n").contains("line 3"));
    assert!(config_error("scene.curves = hexagon\n").contains("line 1"));
    assert!(config_error("imaging.indicators = 1, 12\n").contains("line 1"));
    assert!(config_error("imaging.bounds = -20, 20, -20, 20\n").contains("array"));
    assert!(config_error("just some words\n").contains("line 1"));
}

#[test]
fn curve_and_number_syntax() {
    assert_eq!(parse_real("pi").unwrap(), PI);
    assert_eq!(parse_real("2*pi").unwrap(), 2.0 * PI);
    assert_eq!(parse_real("-1.5").unwrap(), -1.5);
    assert!(parse_real("NaN").is_err());
    let curves = parse_curves("circle(-2, -2, 1); reversed-kite(2, 2, 1) trig(0, 0, 1, 0.1, 0, 0, 0.2)").unwrap();
    assert_eq!(curves.len(), 3);
    assert!(curves[1].reversed);
    assert!(curves[0].contains([-2.0, -2.0]));
    assert!(parse_curves("circle(0, 0)").is_err());
}

fn grid_of(values: Vec<f64>, nx: usize, ny: usize) -> SamplingGrid {
    SamplingGrid::new(GridSpec::new([-1.0, 1.0, -1.0, 1.0], nx, ny).unwrap(), values).unwrap()
}

#[test]
fn constant_grid_renders_one_color() {
    let grid = grid_of(vec![0.3; 20], 5, 4);
    assert!(palette_indices(&grid).iter().all(|i| *i == 0));
    let ppm = grid_ppm(&grid, &[]);
    let header = b"P6\n5 4\n255\n";
    assert_eq!(&ppm[..header.len()], header);
    let pixels = &ppm[header.len()..];
    assert_eq!(pixels.len(), 60);
    assert!(pixels.chunks(3).all(|p| p == palette()[0]));
}

#[test]
fn csv_has_one_row_per_point_and_no_header() {
    let values: Vec<f64> = (0..12).map(|k| k as f64 / 11.0).collect();
    let grid = grid_of(values, 4, 3);
    let csv = grid_csv(&grid);
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0], "-1.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0");
    assert!(rows[5].starts_with("-3.3333333333333337e-1,0.0000000000000000e0,"));
    assert_eq!(grid_csv(&grid), csv);
}

#[test]
fn palette_ends_and_outline_color() {
    let p = palette();
    assert_eq!(p[0], [0, 0, 128]);
    assert_eq!(p[254], [128, 0, 0]);
    assert_eq!(p[OUTLINE_INDEX as usize], [255, 255, 255]);
    assert!(p[..255].iter().all(|c| *c != [255, 255, 255]));
    let values: Vec<f64> = (0..11 * 11).map(|k| (k % 11) as f64).collect();
    let grid = SamplingGrid::new(GridSpec::new([-2.0, 2.0, -2.0, 2.0], 11, 11).unwrap(), values).unwrap();
    let idx = palette_indices(&grid);
    assert_eq!((idx[0], idx[10]), (0, 254));
    let circle = parse_curves("circle(0, 0, 1)").unwrap();
    let ppm = grid_ppm(&grid, &circle);
    let header = b"P6\n11 11\n255\n".len();
    // top row is y = 2, so (1, 0) sits at image row 5, column 8
    let at = header + 3 * (5 * 11 + 8);
    assert_eq!(&ppm[at..at + 3], &[255, 255, 255]);
}

#[test]
fn report_json_leaves_out_timings_on_request() {
    let mut r = RunReport::default();
    r.push("a", 1.0, "<= 2", true, "");
    r.time("stage", 0.5);
    let bare: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
    assert!(bare.get("timings").is_none());
    assert_eq!(bare["checks"][0]["name"], "a");
    let full: serde_json::Value = serde_json::from_str(&r.to_json(true)).unwrap();
    assert_eq!(full["timings"][0]["stage"], "stage");
    assert_eq!(r.lines(), vec!["PASS a: 1.000000e0 (<= 2)".to_string()]);
}

#[test]
fn experiment_writes_everything_and_reloads_its_data() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let report = run_experiment(&config).unwrap();
    assert_eq!(report.checks.len(), 2 * 4 * 2);
    for name in ["report.json", "config.txt", "I1_circle_0.csv", "I11_circle_0.2.ppm", "data_ufar_point_0.2.bhm"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let saved = ExperimentConfig::from_file(&dir.path().join("config.txt")).unwrap();
    assert_eq!(saved.output_dir, std::path::PathBuf::from("."));

    let mut scratch = RunReport::default();
    let fresh = simulate_stage(&config, &mut scratch).unwrap();
    let loaded = load_data(&config, dir.path()).unwrap();
    assert_eq!(loaded, fresh);
    let specs: Vec<IndicatorSpec> = config.indicators.iter().map(|j| IndicatorSpec::standard(*j)).collect();
    let from_files = compute_images(&config, &loaded, &specs).unwrap();
    let csv = std::fs::read_to_string(dir.path().join(format!("{}.csv", from_files[0].stem("circle")))).unwrap();
    assert_eq!(csv, grid_csv(&from_files[0].grid));
}

#[test]
fn noisy_level_differs_and_clean_level_does_not() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let mut scratch = RunReport::default();
    let sets = simulate_stage(&config, &mut scratch).unwrap();
    assert_eq!(sets.len(), 2);
    for (a, b) in sets[0].matrices.iter().zip(&sets[1].matrices) {
        assert_eq!((a.kind, a.excitation), (b.kind, b.excitation));
        assert!(a.values.iter().zip(&b.values).any(|(x, y)| x != y));
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!(((x - y).norm() - 0.2 * x.norm()).abs() <= 1e-14 * x.norm().max(1e-300) + 1e-300);
        }
    }
}

#[test]
fn flipped_prefactor_is_caught_by_the_sign_check() {
    let clean = sign_convention(&ValidationOptions::new(Level::Fast)).unwrap();
    assert!(clean.passed, "{}", clean.detail);
    for j in [3, 8, 11] {
        let mut opts = ValidationOptions::new(Level::Fast);
        opts.flipped_sign = Some(IndicatorId::new(j).unwrap());
        let c = sign_convention(&opts).unwrap();
        assert!(!c.passed);
        assert_eq!(c.detail, format!("mismatch in I{j}"));
    }
}

#[test]
fn level_names() {
    assert_eq!(Level::parse("fast").unwrap(), Level::Fast);
    assert_eq!(Level::parse("full").unwrap(), Level::Full);
    assert!(matches!(Level::parse("quick"), Err(Error::Config(_))));
}

#[test]
fn cli_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_biharm");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "scene.kappa = 2pi\nscene.bogus = 1\n").unwrap();
    let out = Command::new(exe).args(["reconstruct", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let good = dir.path().join("good.conf");
    let mut c = small_config(&dir.path().join("run"));
    // the clamped circle peaks at its center; simply supported peaks on the boundary
    c.bc = BoundaryCondition::SimplySupported;
    c.indicators = vec![IndicatorId::new(10).unwrap()];
    std::fs::write(&good, c.to_text()).unwrap();
    let out = Command::new(exe).args(["simulate", "--config"]).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = Command::new(exe).args(["image", "--config"]).arg(&good).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("PASS I10_circle_0.2 contrast"));

    let out = Command::new(exe).args(["validate", "--level", "slow"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cheap_criteria_pass_at_fast_level() {
    let mut opts = ValidationOptions::new(Level::Fast);
    opts.scratch_dir = tempfile::tempdir().unwrap().path().to_path_buf();
    for n in [1, 2, 3, 4, 5, 6, 8, 13, 14] {
        let c = run_criterion(n, &opts);
        assert!(c.passed, "{}: {} {}", c.name, c.measured, c.detail);
    }
}

#[test]
fn shipped_configs_match_the_presets() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (file, preset) in [
        ("example1.conf", ExperimentConfig::example1()),
        ("example2.conf", ExperimentConfig::example2()),
        ("example3.conf", ExperimentConfig::example3()),
    ] {
        let mut c = ExperimentConfig::from_file(&dir.join(file)).unwrap();
        c.output_dir = preset.output_dir.clone();
        assert_eq!(c, preset, "{file}");
    }
}
