use fidsamp_core::fidcore::ModelFlags;
use fidsamp_core::group::*;
use fidsamp_core::inference::{coverage_experiment, IntervalSpec};
use fidsamp_core::models1d::{CorrelationCdf, FisherModel, LocationModel};
use fidsamp_core::numerics::{LowerTriangular, RandomStream};
use fidsamp_core::{EmpiricalDistribution, FiducialModel, Result};
use rand::Rng;
use rand_distr::StandardNormal;

fn normal_data(g: &LocScaleElement, n: usize, s: &mut RandomStream) -> Vec<Vec<f64>> {
    let p = g.dim();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|_| g.apply(&(0..p).map(|_| s.sample(StandardNormal)).collect::<Vec<f64>>()))
        .collect();
    (0..p).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn statistic_is_equivariant() {
    let mut s = RandomStream::new(1, 0);
    let l = LowerTriangular::from_rows(&[vec![2.0, 0.0, 0.0], vec![0.3, 0.5, 0.0], vec![-1.0, 0.2, 1.5]]).unwrap();
    let g = LocScaleElement::new(vec![1.0, -2.0, 0.5], l).unwrap();
    let x = normal_data(&LocScaleElement::identity(3), 12, &mut s);
    let t = mvn_sufficient_statistic(&x).unwrap();
    // transform each column by g
    let gx: Vec<Vec<f64>> = {
        let cols: Vec<Vec<f64>> = (0..12).map(|j| g.apply(&[x[0][j], x[1][j], x[2][j]])).collect();
        (0..3).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    };
    let gt = group_mul(&g, &t).unwrap();
    let direct = mvn_sufficient_statistic(&gx).unwrap();
    for (a, b) in gt.mu().iter().zip(direct.mu()) {
        assert!((a - b).abs() < 1e-10);
    }
    for (a, b) in gt.l().packed().iter().zip(direct.l().packed()) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn fiducial_draws_reproduce_the_statistic() {
    let mut s = RandomStream::new(2, 0);
    for p in 1..=4 {
        let t = mvn_sufficient_statistic(&normal_data(&LocScaleElement::identity(p), 3 * p + 2, &mut s)).unwrap();
        for _ in 0..200 {
            let (theta, v) = mvn_fiducial_draw(&t, 3 * p + 2, &mut s).unwrap();
            let back = group_mul(&theta, &v).unwrap();
            let err = back
                .mu()
                .iter()
                .zip(t.mu())
                .chain(back.l().packed().iter().zip(t.l().packed()))
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-8, "p = {p}: {err}");
        }
    }
}

#[test]
fn too_few_observations() {
    let t = LocScaleElement::identity(3);
    assert!(mvn_fiducial_draw(&t, 3, &mut RandomStream::new(0, 0)).is_err());
}

fn scalar_coverage(which: usize) -> f64 {
    let truth = LocScaleElement::scalar(1.0, 2.0).unwrap();
    let n_obs = 10;
    let r = coverage_experiment(
        |s| mvn_sufficient_statistic(&normal_data(&truth, n_obs, s)),
        |t, s| -> Result<EmpiricalDistribution> {
            let th = mvn_fiducial_sample(t, n_obs, 199, s)?;
            Ok(EmpiricalDistribution::uniform(
                th.iter().map(|e| if which == 0 { e.mu()[0] } else { e.l().get(0, 0) }).collect(),
            ))
        },
        if which == 0 { 1.0 } else { 2.0 },
        &IntervalSpec::symmetric(0.95).unwrap(),
        400,
        &RandomStream::new(3, which as u64),
    )
    .unwrap();
    r.rate
}

#[test]
fn scalar_normal_coverage() {
    let band = 4.0 * (0.95f64 * 0.05 / 400.0).sqrt();
    for which in 0..2 {
        let rate = scalar_coverage(which);
        assert!((rate - 0.95).abs() < band, "{which}: {rate}");
    }
}

#[test]
fn correlation_coverage() {
    let l = LowerTriangular::from_rows(&[vec![1.0, 0.0], vec![0.5, 0.75f64.sqrt()]]).unwrap();
    let truth = LocScaleElement::new(vec![0.0, 0.0], l).unwrap();
    let r = coverage_experiment(
        |s| mvn_sufficient_statistic(&normal_data(&truth, 20, s)),
        |t, s| correlation_fiducial_from(t, 20, 199, s),
        0.5,
        &IntervalSpec::symmetric(0.9).unwrap(),
        400,
        &RandomStream::new(4, 0),
    )
    .unwrap();
    assert!((r.rate - 0.9).abs() < 4.0 * (0.09f64 / 400.0).sqrt(), "{r:?}");
}

#[test]
fn finite_loops_from_random_latin_squares() {
    let mut s = RandomStream::new(5, 0);
    for k in 0..30 {
        let t = LoopTable::random_latin_square(2 + k % 7, &mut s).unwrap();
        let m = finite_loop_invariant_measure(&t).unwrap();
        assert!(m.is_uniform && m.nullspace_dim == 1);
    }
}

/// `tau(u, theta) = (u + theta) / 2`, pivotal.
struct Average;

impl FiducialModel for Average {
    type Noise = f64;
    type Param = f64;
    type Obs = f64;
    fn flags(&self) -> ModelFlags {
        ModelFlags::PIVOTAL
    }
    fn draw_noise(&self, s: &mut RandomStream) -> f64 {
        s.open01()
    }
    fn tau(&self, u: &f64, th: &f64) -> Result<f64> {
        Ok((u + th) / 2.0)
    }
    fn solve_theta(&self, u: &f64, t: &f64) -> Result<f64> {
        Ok(2.0 * t - u)
    }
    fn solve_u(&self, th: &f64, t: &f64) -> Result<f64> {
        Ok(2.0 * t - th)
    }
}

#[test]
fn averaging_model_relabels_to_addition() {
    let lp = pivotal_to_loop(Average, 0.0, 0.0).unwrap();
    for &(x, y) in &[(0.3, -1.2), (2.0, 5.5), (-3.0, 0.0)] {
        assert!((lp.op(x, y).unwrap() - (x + y)).abs() < 1e-14);
    }
    let g = grid(-5.0, 5.0, 41);
    let laws = check_loop_laws(&lp, &g).unwrap();
    assert!(laws.identity < 1e-12 && laws.division < 1e-12);
    let r = smooth_loop_invariance_residual(&lp, &g, &[-1.0, -0.25, 0.5, 1.5]).unwrap();
    assert!(r.residual <= 1e-6, "{}", r.residual);
}

#[test]
fn correlation_loop_lacks_invariant_density() {
    let g = grid(-0.6, 0.6, 25);
    let shifts = [-0.2, -0.05, 0.1, 0.25];
    let loc = pivotal_to_loop(LocationModel::normal(1.0).unwrap(), 0.0, 0.0).unwrap();
    let baseline = smooth_loop_invariance_residual(&loc, &g, &shifts).unwrap();

    let cdf = CorrelationCdf::new(5, 5000, CorrelationCdf::DEFAULT_BANDWIDTH, &mut RandomStream::new(6, 0)).unwrap();
    let lp = pivotal_to_loop(FisherModel::new(cdf), 0.0, 0.0).unwrap();
    let laws = check_loop_laws(&lp, &g).unwrap();
    assert!(laws.identity < 1e-8, "{laws:?}");
    let r = smooth_loop_invariance_residual(&lp, &g, &shifts).unwrap();
    println!("baseline {} correlation {} ({} clipped)", baseline.residual, r.residual, r.rows_clipped);
    assert!(r.residual > 10.0 * baseline.residual);
}

#[test]
fn correlation_loop_identity_on_fine_grid() {
    let cdf = CorrelationCdf::new(5, 2000, CorrelationCdf::DEFAULT_BANDWIDTH, &mut RandomStream::new(7, 0)).unwrap();
    let lp = pivotal_to_loop(FisherModel::new(cdf), 0.0, 0.0).unwrap();
    let worst = grid(-0.9, 0.9, 1000).into_iter().fold(0.0f64, |m, x| {
        m.max((lp.op(0.0, x).unwrap() - x).abs()).max((lp.op(x, 0.0).unwrap() - x).abs())
    });
    assert!(worst <= 1e-8, "{worst}");
}
