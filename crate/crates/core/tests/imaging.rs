use biharm::forward::*;
use biharm::geometry::*;
use biharm::imaging::*;
use biharm::specfun::{hankel1, WaveParams};
use biharm::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn params() -> WaveParams {
    WaveParams::new(2.0 * PI, 0.25).unwrap()
}

fn unit_circle_scatterer(bc: BoundaryCondition) -> Scatterer {
    Scatterer::new(params(), vec![Curve::circle([0.0, 0.0], 1.0).unwrap()], bc)
}

fn id(j: usize) -> IndicatorId {
    IndicatorId::new(j).unwrap()
}

/// Uneven counts so a swapped index or weight shows up.
fn odd_array() -> ArrayGeometry {
    ArrayGeometry::new(6.0, 7.0, 12, 10, 14).unwrap()
}

fn random_data(spec: &IndicatorSpec, array: ArrayGeometry, rng: &mut ChaCha20Rng) -> DataMatrix {
    let (r, c) = DataMatrix::shape_for(spec.kind, spec.excitation, &array);
    let values = (0..r * c)
        .map(|_| {
            if spec.kind.is_real() {
                Complex64::new(rng.gen_range(0.0..0.3), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        })
        .collect();
    DataMatrix::new(spec.kind, spec.excitation, values, params(), array).unwrap()
}

fn phi(k: f64, a: [f64; 2], b: [f64; 2]) -> Complex64 {
    I / 4.0 * hankel1(0, k * (a[0] - b[0]).hypot(a[1] - b[1])).unwrap()
}

fn expo(k: f64, z: [f64; 2], d: [f64; 2]) -> Complex64 {
    (I * k * (z[0] * d[0] + z[1] * d[1])).exp()
}

/// Each indicator written out term by term from its printed formula.
fn direct_indicator(j: usize, data: &DataMatrix, z: [f64; 2]) -> f64 {
    let a = data.array;
    let k = params().kappa;
    let wr = 2.0 * PI * a.receiver_radius / a.receivers as f64;
    let ws = 2.0 * PI * a.source_radius / a.sources as f64;
    let wd = 2.0 * PI / a.directions as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..data.rows {
        for s in 0..data.cols {
            let u = data.get(r, s);
            acc += match j {
                1..=4 => wr * ws * phi(k, z, a.receiver(r)) * phi(k, z, a.source(s)) * u.conj(),
                5..=8 => wr * wd * phi(k, z, a.receiver(r)) * expo(k, z, a.direction(s)) * u.conj(),
                9 => wd * ws * expo(-k, z, a.direction(r)) * phi(k, z, a.source(s)) * u.conj(),
                10 => {
                    let d = a.direction(s);
                    let x = a.direction(r);
                    wd * wd * expo(k, z, [d[0] - x[0], d[1] - x[1]]) * u.conj()
                }
                _ => {
                    let p = phi(k, a.receiver(r), a.source(s));
                    wr * ws * phi(k, z, a.receiver(r)) * phi(k, z, a.source(s)) * (u.re * u.re - p.norm_sqr()) / p
                }
            };
        }
    }
    match j {
        1 => -2.0 * k.powi(4) * acc.im,
        2 => -2.0 * k.powi(3) * acc.re,
        3 => 2.0 * k * k * acc.im,
        4 => -2.0 * k * acc.re,
        5 => -k.powi(3) / (4.0 * PI) * acc.im,
        6 => -k * k / (4.0 * PI) * acc.re,
        7 => k / (4.0 * PI) * acc.im,
        8 => -1.0 / (4.0 * PI) * acc.re,
        9 => -k.powi(3) / (4.0 * PI) * acc.im,
        10 => -k * k / (32.0 * PI * PI) * acc.im,
        _ => -2.0 * k.powi(4) * acc.im,
    }
}

#[test]
fn every_indicator_matches_its_written_formula() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let array = odd_array();
    let probes = vec![[0.7, -1.3], [-2.5, 0.4]];
    let imager = Imager::at_points(probes.clone(), array, params()).unwrap();
    for j in 1..=11 {
        let spec = IndicatorSpec::standard(id(j));
        let data = random_data(&spec, array, &mut rng);
        let got = imager.evaluate(&spec, &data).unwrap();
        for (z, g) in probes.iter().zip(&got) {
            let want = direct_indicator(j, &data, *z);
            assert!((g - want).abs() <= 1e-11 * want.abs().max(1e-3), "I{j} at {z:?}: {g} vs {want}");
        }
    }
}

#[test]
fn flipped_prefactor_is_caught_by_the_written_formula() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let array = odd_array();
    let mut spec = IndicatorSpec::standard(id(3));
    spec.coefficient = -spec.coefficient;
    let data = random_data(&spec, array, &mut rng);
    let z = [0.7, -1.3];
    let got = Imager::at_points(vec![z], array, params()).unwrap().evaluate(&spec, &data).unwrap()[0];
    let want = direct_indicator(3, &data, z);
    assert!((got + want).abs() <= 1e-11 * want.abs());
    assert!((got - want).abs() > 1e-3 * want.abs());
}

#[test]
fn table_requirements() {
    let want = [
        (DataKind::Scattered, Excitation::PointSource),
        (DataKind::NormalDerivative, Excitation::PointSource),
        (DataKind::Moment, Excitation::PointSource),
        (DataKind::Force, Excitation::PointSource),
        (DataKind::Scattered, Excitation::PlaneWave),
        (DataKind::NormalDerivative, Excitation::PlaneWave),
        (DataKind::Moment, Excitation::PlaneWave),
        (DataKind::Force, Excitation::PlaneWave),
        (DataKind::FarField, Excitation::PointSource),
        (DataKind::FarField, Excitation::PlaneWave),
        (DataKind::TotalMagnitude, Excitation::PointSource),
    ];
    for (j, w) in want.iter().enumerate() {
        assert_eq!((id(j + 1).kind(), id(j + 1).excitation()), *w);
    }
    assert!(IndicatorId::new(0).is_err());
    assert!(IndicatorId::new(12).is_err());
    assert_eq!(IndicatorId::all().len(), 11);
}

#[test]
fn zero_data_gives_zero_grid() {
    let array = odd_array();
    let grid = GridSpec::new([-2.0, 2.0, -2.0, 2.0], 5, 4).unwrap();
    for j in 1..=10 {
        let spec = IndicatorSpec::standard(id(j));
        let data = DataMatrix::zeros(spec.kind, spec.excitation, params(), array).unwrap();
        let g = image(id(j), &data, grid).unwrap();
        assert!(g.values.iter().all(|v| *v == 0.0), "I{j}");
        assert!(matches!(normalize(&g), Err(Error::Normalization(_))));
    }
}

#[test]
fn phaseless_without_obstacle_is_zero() {
    let array = odd_array();
    let empty = Scatterer::new(params(), vec![], BoundaryCondition::Clamped);
    let data = simulate(&empty, &array, DataKind::TotalField, Excitation::PointSource, Backend::Auto)
        .unwrap()
        .magnitude()
        .unwrap();
    let grid = GridSpec::new([-2.0, 2.0, -2.0, 2.0], 6, 6).unwrap();
    let g = image_phaseless(&data, grid).unwrap();
    assert!(g.max_abs() <= 1e-12, "{}", g.max_abs());
}

#[test]
fn wrong_kind_or_range_is_a_contract_error() {
    let array = odd_array();
    let grid = GridSpec::new([-2.0, 2.0, -2.0, 2.0], 3, 3).unwrap();
    let data = DataMatrix::zeros(DataKind::Moment, Excitation::PointSource, params(), array).unwrap();
    assert!(matches!(image(id(1), &data, grid), Err(Error::Contract(_))));
    assert!(matches!(image_nearfield_point(5, &data, grid), Err(Error::Contract(_))));
    assert!(matches!(image_nearfield_plane(3, &data, grid), Err(Error::Contract(_))));
    assert!(matches!(image_farfield(1, &data, grid), Err(Error::Contract(_))));
    assert!(image_nearfield_point(3, &data, grid).is_ok());
    assert!(matches!(image_phaseless(&data, grid), Err(Error::Contract(_))));
}

#[test]
fn grid_must_sit_inside_the_arrays() {
    let array = odd_array();
    let data = DataMatrix::zeros(DataKind::Scattered, Excitation::PointSource, params(), array).unwrap();
    let grid = GridSpec::new([-5.0, 5.0, -5.0, 5.0], 3, 3).unwrap();
    assert!(matches!(image(id(1), &data, grid), Err(Error::Geometry(_))));
    assert!(GridSpec::new([1.0, -1.0, 0.0, 1.0], 3, 3).is_err());
    assert!(GridSpec::new([-1.0, 1.0, -1.0, 1.0], 1, 3).is_err());
}

#[test]
fn coincident_receiver_and_source_is_a_divisor_error() {
    // Source 0 of 1 sits at angle π, the same point as receiver 1 of 2.
    let array = ArrayGeometry::new(5.0, 5.0, 2, 1, 4).unwrap();
    let data = DataMatrix::new(
        DataKind::TotalMagnitude,
        Excitation::PointSource,
        vec![Complex64::new(0.1, 0.0); 2],
        params(),
        array,
    )
    .unwrap();
    match phaseless_data(&data) {
        Err(Error::Divisor { row, col, .. }) => assert_eq!((row, col), (1, 0)),
        other => panic!("expected divisor error, got {other:?}"),
    }
}

#[test]
fn real_scaling_of_data_scales_every_indicator() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let array = odd_array();
    let imager = Imager::at_points(vec![[0.2, 0.9], [-1.0, -2.0], [2.2, 0.0]], array, params()).unwrap();
    for j in 1..=10 {
        let spec = IndicatorSpec::standard(id(j));
        let data = random_data(&spec, array, &mut rng);
        let base = imager.evaluate(&spec, &data).unwrap();
        let scaled = imager.evaluate(&spec, &data.scaled(-2.5)).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            assert!((b + 2.5 * a).abs() <= 1e-12 * a.abs().max(1e-6), "I{j}");
        }
    }
}

fn rotate(p: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

#[test]
fn centered_circle_images_are_rotation_symmetric() {
    let array = ArrayGeometry::new(8.0, 8.0, 48, 48, 48).unwrap();
    let sc = unit_circle_scatterer(BoundaryCondition::Clamped);
    let pt = simulate_many(&sc, &array, &[DataKind::Scattered, DataKind::FarField], Excitation::PointSource, Backend::Auto)
        .unwrap();
    let pw = simulate(&sc, &array, DataKind::FarField, Excitation::PlaneWave, Backend::Auto).unwrap();
    let step = 2.0 * PI / 48.0;
    let z = [1.3, 0.45];
    let probes = vec![z, rotate(z, step), rotate(z, 7.0 * step)];
    let imager = Imager::at_points(probes, array, params()).unwrap();
    for (j, data) in [(1, &pt[0]), (9, &pt[1]), (10, &pw)] {
        let v = imager.evaluate(&IndicatorSpec::standard(id(j)), data).unwrap();
        let scale = v[0].abs();
        assert!((v[0] - v[1]).abs() <= 1e-8 * scale, "I{j}: {:?}", v);
        assert!((v[0] - v[2]).abs() <= 1e-8 * scale, "I{j}: {:?}", v);
    }
}

#[test]
fn far_field_indicator_equals_scattered_energy_of_regularized_incidence() {
    let array = ArrayGeometry::new(10.0, 10.0, 16, 16, 64).unwrap();
    let sc = Scatterer::new(params(), vec![Curve::kite([2.0, 2.0], 1.0).unwrap()], BoundaryCondition::Clamped);
    let data = simulate(&sc, &array, DataKind::FarField, Excitation::PlaneWave, Backend::Auto).unwrap();
    let probes = vec![[2.0, 2.0], [0.8, 2.1], [-1.5, -0.5]];
    let got = Imager::at_points(probes.clone(), array, params())
        .unwrap()
        .evaluate(&IndicatorSpec::standard(id(10)), &data)
        .unwrap();
    let k = params().kappa;
    for (z, g) in probes.iter().zip(&got) {
        let sol = solve(&sc.with_incidence(Incidence::Regularized { center: *z }), Backend::Auto).unwrap();
        let n = 256;
        let energy: f64 = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                eval_farfield(&sol, [t.cos(), t.sin()]).norm_sqr()
            })
            .sum::<f64>()
            * 2.0
            * PI
            / n as f64;
        let want = k * k / (4.0 * PI) * energy;
        assert!((g - want).abs() <= 1e-6 * want, "z {z:?}: {g} vs {want}");
    }
}

#[test]
fn indicator_families_agree_on_a_circle() {
    let array = ArrayGeometry::new(10.0, 10.0, 96, 96, 96).unwrap();
    let sc = unit_circle_scatterer(BoundaryCondition::SimplySupported);
    let pt = simulate_many(
        &sc,
        &array,
        &[DataKind::Scattered, DataKind::Force, DataKind::FarField],
        Excitation::PointSource,
        Backend::Auto,
    )
    .unwrap();
    let pw = simulate_many(&sc, &array, &[DataKind::Moment, DataKind::FarField], Excitation::PlaneWave, Backend::Auto)
        .unwrap();
    let probes = vec![[0.0, 0.0], [1.0, 0.0], [0.4, -0.9], [2.0, 1.0], [-3.0, 3.0]];
    let imager = Imager::at_points(probes, array, params()).unwrap();
    let reference = imager.evaluate(&IndicatorSpec::standard(id(10)), &pw[1]).unwrap();
    let scale = reference.iter().map(|v| v.abs()).fold(0.0, f64::max);
    for (j, data) in [(1, &pt[0]), (4, &pt[1]), (7, &pw[0]), (9, &pt[2])] {
        let v = imager.evaluate(&IndicatorSpec::standard(id(j)), data).unwrap();
        for (a, b) in v.iter().zip(&reference) {
            assert!((a - b).abs() <= 2e-2 * scale, "I{j}: {a} vs I10 {b}");
        }
    }
}

#[test]
fn simply_supported_circle_is_localized_on_the_boundary() {
    let array = ArrayGeometry::new(10.0, 10.0, 64, 64, 64).unwrap();
    let sc = unit_circle_scatterer(BoundaryCondition::SimplySupported);
    let data = simulate(&sc, &array, DataKind::Scattered, Excitation::PointSource, Backend::Auto).unwrap();
    let grid = GridSpec::new([-3.0, 3.0, -3.0, 3.0], 61, 61).unwrap();
    let g = normalize(&image(id(1), &data, grid).unwrap()).unwrap();
    let dist = boundary_distances(&grid, &sc.curves);
    let loc = localization(&g, &dist, params().kappa);
    assert!(loc.argmax_distance <= 0.5, "{loc:?}");
    assert!(loc.contrast_holds(), "{loc:?}");
}

#[test]
fn quadrature_doubling_is_stable() {
    let sc = unit_circle_scatterer(BoundaryCondition::Clamped);
    let grid = GridSpec::new([-4.0, 4.0, -4.0, 4.0], 9, 9).unwrap();
    let run = |n: usize| {
        let array = ArrayGeometry::new(10.0, 10.0, n, n, n).unwrap();
        let data = simulate(&sc, &array, DataKind::Scattered, Excitation::PointSource, Backend::Auto).unwrap();
        image(id(1), &data, grid).unwrap()
    };
    let a = run(96);
    let b = run(192);
    assert!(a.max_diff(&b) <= 1e-6 * b.max_abs(), "{}", a.max_diff(&b) / b.max_abs());
}

#[test]
fn normalization_variants() {
    let spec = GridSpec::new([-1.0, 1.0, -1.0, 1.0], 2, 2).unwrap();
    let g = SamplingGrid::new(spec, vec![2.0, -3.0, 1.0, 0.5]).unwrap();
    let n = normalize(&g).unwrap();
    assert_eq!(n.values, vec![1.0, -1.5, 0.5, 0.25]);
    assert_eq!(n.max(), 1.0);
    let a = normalize_abs(&g).unwrap();
    assert_eq!(a.values[1], -1.0);
    let c = normalize(&SamplingGrid::new(spec, vec![4.0; 4]).unwrap()).unwrap();
    assert!(c.values.iter().all(|v| *v == 1.0));
    let negative = SamplingGrid::new(spec, vec![-1.0, -2.0, -3.0, -4.0]).unwrap();
    assert!(matches!(normalize(&negative), Err(Error::Normalization(_))));
    assert_eq!(normalize_abs(&negative).unwrap().values[3], -1.0);
    assert!(matches!(normalize(&SamplingGrid::zeros(spec)), Err(Error::Normalization(_))));
    assert!(SamplingGrid::new(spec, vec![f64::NAN, 0.0, 0.0, 0.0]).is_err());
}

#[test]
fn clusters_and_metrics() {
    let spec = GridSpec::new([0.0, 6.0, 0.0, 4.0], 7, 5).unwrap();
    let mut v = vec![0.0; 35];
    for k in [0, 1, 8, 5, 6, 13, 34] {
        v[k] = 1.0;
    }
    let g = SamplingGrid::new(spec, v).unwrap();
    let cl = above_threshold_clusters(&g, 0.5);
    let sizes: Vec<usize> = cl.iter().map(|c| c.cells.len()).collect();
    assert_eq!(sizes, vec![3, 3, 1]);
    assert_eq!(cl[0].centroid(), [2.0 / 3.0, 1.0 / 3.0]);
    assert!((cl[0].gap(&cl[1]) - 4.0).abs() < 1e-12);

    let curve = Curve::circle([3.0, 2.0], 1.0).unwrap();
    let d = boundary_distances(&spec, &[curve]);
    assert!((d[2 * 7 + 3] - 1.0).abs() < 1e-9);
    let mut values = vec![0.0; 35];
    values[2 * 7 + 4] = 1.0;
    let loc = localization(&SamplingGrid::new(spec, values).unwrap(), &d, 2.0 * PI);
    assert_eq!(loc.argmax, [4.0, 2.0]);
    assert!(loc.argmax_distance < 1e-9);
    assert!(loc.contrast_holds());
}
