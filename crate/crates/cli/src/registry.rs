//! Static table of model ids. Each entry names its parameters and the one
//! library operation it runs; new models register here.

use std::collections::BTreeMap;

use fidsamp_core::fidcore::{posterior_sample, sample_fiducial};
use fidsamp_core::group::{correlation_fiducial, group_mul, mvn_fiducial_draw, mvn_fiducial_sample};
use fidsamp_core::models1d::{
    gamma_scale_fiducial, gamma_shape_fiducial, normal_mean_fiducial, two_point_posterior,
    Cdf1D, CorrelationCdf, CorrelationModel, GammaScaleCdf, GammaScaleModel, GammaScaleSpec,
    GammaShapeModel, GammaShapeSpec, LocationModel, NormalLocationCdf, NormalMeanModel,
    TwoPointModel,
};
use fidsamp_core::numerics::{normal_pdf, RandomStream};
use fidsamp_core::{EmpiricalDistribution, FiducialModel, LocScaleElement, Result};

/// Resolved numeric parameters keyed by flag name.
pub type Params = BTreeMap<&'static str, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Fiducial sampling, run by `sample`.
    Fiducial,
    /// Posterior sampling, run by `posterior`.
    Posterior,
}

#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Option<f64>,
    /// An observed statistic, needed only by `sample` and `posterior`.
    pub observed: bool,
}

const fn req(name: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: None,
        observed: false,
    }
}

const fn obs(name: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        default: None,
        observed: true,
    }
}

const fn opt(name: &'static str, default: f64) -> ParamSpec {
    ParamSpec {
        name,
        default: Some(default),
        observed: false,
    }
}

type SampleFn = fn(&Params, usize, &mut RandomStream) -> Result<EmpiricalDistribution>;
type SimulateFn = fn(&Params, f64, &mut RandomStream) -> Result<Params>;
type CdfFn = fn(&Params, usize, &mut RandomStream) -> Result<Box<dyn Cdf1D>>;

/// Default Lindley grids: `(lo, hi, points)` for `t` and for `theta`.
pub type Grids = ((f64, f64, usize), (f64, f64, usize));

pub struct ModelEntry {
    pub id: &'static str,
    pub kind: Kind,
    pub about: &'static str,
    pub params: &'static [ParamSpec],
    pub sample: SampleFn,
    /// Replaces the observed statistic by one simulated at the true parameter.
    pub simulate: Option<SimulateFn>,
    /// Sampling CDF `F(t | theta)` for the separability test.
    pub cdf: Option<(CdfFn, Grids)>,
}

pub static REGISTRY: &[ModelEntry] = &[
    ModelEntry {
        id: "location-normal",
        kind: Kind::Fiducial,
        about: "location model with N(0, sigma0²) noise; fiducial t − U",
        params: &[obs("t"), opt("sigma0", 1.0)],
        sample: |p, n, s| sample_fiducial(&LocationModel::normal(p["sigma0"])?, &p["t"], n, s),
        simulate: Some(|p, theta, s| {
            let m = LocationModel::normal(p["sigma0"])?;
            with(p, "t", m.tau(&m.draw_noise(s), &theta)?)
        }),
        cdf: Some((
            |p, _, _| Ok(Box::new(NormalLocationCdf { sigma: p["sigma0"] })),
            ((-2.0, 2.0, 11), (-2.0, 2.0, 11)),
        )),
    },
    ModelEntry {
        id: "normal-mean",
        kind: Kind::Fiducial,
        about: "mean of n-obs normals with known sd sigma0; fiducial N(t, sigma0² / n)",
        params: &[obs("t"), req("sigma0"), req("n-obs")],
        sample: |p, n, s| normal_mean_fiducial(p["t"], p["sigma0"], count(p["n-obs"])?)?.sample(n, s),
        simulate: Some(|p, theta, s| {
            let m = NormalMeanModel::new(p["sigma0"], count(p["n-obs"])?)?;
            with(p, "t", m.tau(&m.draw_noise(s), &theta)?)
        }),
        cdf: None,
    },
    ModelEntry {
        id: "gamma-scale",
        kind: Kind::Fiducial,
        about: "gamma scale with known shape alpha from the sample mean t; inverse-gamma fiducial",
        params: &[req("alpha"), req("n-obs"), obs("t")],
        sample: |p, n, s| {
            let (m, _) = gamma_scale_fiducial(&GammaScaleSpec::new(p["alpha"], count(p["n-obs"])?, p["t"])?)?;
            sample_fiducial(&m, &p["t"], n, s)
        },
        simulate: Some(|p, theta, s| {
            let m = GammaScaleModel::new(p["alpha"], count(p["n-obs"])?)?;
            with(p, "t", m.tau(&m.draw_noise(s), &theta)?)
        }),
        cdf: Some((
            |p, _, _| Ok(Box::new(GammaScaleCdf { alpha: p["alpha"], n: count(p["n-obs"])? })),
            ((1.0, 5.0, 11), (1.0, 5.0, 11)),
        )),
    },
    ModelEntry {
        id: "gamma-shape",
        kind: Kind::Fiducial,
        about: "gamma shape with unit scale from the mean log observation t",
        params: &[req("n-obs"), obs("t")],
        sample: |p, n, s| gamma_shape_fiducial(&GammaShapeSpec::new(count(p["n-obs"])?, p["t"])?, n, s),
        simulate: Some(|p, theta, s| {
            let m = GammaShapeModel::new(count(p["n-obs"])?)?;
            with(p, "t", m.tau(&m.draw_noise(s), &theta)?)
        }),
        cdf: None,
    },
    ModelEntry {
        id: "correlation",
        kind: Kind::Fiducial,
        about: "bivariate normal correlation from sample correlation r via the location-scale group",
        params: &[obs("r"), req("n-obs")],
        sample: |p, n, s| correlation_fiducial(p["r"], count(p["n-obs"])?, n, s),
        simulate: Some(|p, rho, s| {
            let m = CorrelationModel::new(count(p["n-obs"])?)?;
            with(p, "r", m.tau(&m.draw_noise(s), &rho)?)
        }),
        cdf: Some((
            |p, samples, s| {
                Ok(Box::new(CorrelationCdf::new(
                    count(p["n-obs"])?,
                    samples,
                    CorrelationCdf::DEFAULT_BANDWIDTH,
                    s,
                )?))
            },
            ((-0.9, 0.9, 21), (-0.9, 0.9, 21)),
        )),
    },
    ModelEntry {
        id: "mvn-mean",
        kind: Kind::Fiducial,
        about: "normal mean with unknown sd from sample mean t and sample sd scale (divisor n)",
        params: &[obs("t"), req("scale"), req("n-obs")],
        sample: |p, n, s| scalar_group(p, n, s, |e| e.mu()[0]),
        // coverage holds the sd at `scale`
        simulate: Some(|p, mu, s| simulate_scalar(p, mu, p["scale"], s)),
        cdf: None,
    },
    ModelEntry {
        id: "mvn-sd",
        kind: Kind::Fiducial,
        about: "normal sd with unknown mean from sample mean t and sample sd scale (divisor n)",
        params: &[req("t"), obs("scale"), req("n-obs")],
        sample: |p, n, s| scalar_group(p, n, s, |e| e.l().get(0, 0)),
        // coverage holds the mean at `t`
        simulate: Some(|p, sigma, s| simulate_scalar(p, p["t"], sigma, s)),
        cdf: None,
    },
    ModelEntry {
        id: "two-point",
        kind: Kind::Posterior,
        about: "noise on {0, 1} with P(0) = p, N(0, 1) prior; exact two-atom posterior at t",
        params: &[obs("t"), opt("p", 0.5)],
        sample: |p, _, _| {
            let m = TwoPointModel::new([0.0, 1.0], p["p"], normal_pdf)?;
            two_point_posterior(&m, p["t"])?.to_empirical()
        },
        simulate: None,
        cdf: None,
    },
    ModelEntry {
        id: "location-sir",
        kind: Kind::Posterior,
        about: "normal location with uniform prior on [−bound, bound] by importance resampling",
        params: &[obs("t"), opt("sigma0", 1.0), opt("bound", 50.0)],
        sample: |p, n, s| {
            let b = p["bound"];
            let problem = LocationModel::normal(p["sigma0"])?
                .posterior_problem(move |th: f64| if th.abs() <= b { 1.0 } else { 0.0 })?;
            posterior_sample(&problem, &p["t"], n, n, s)
        },
        simulate: None,
        cdf: None,
    },
];

pub fn lookup(id: &str) -> Option<&'static ModelEntry> {
    REGISTRY.iter().find(|m| m.id == id)
}

pub fn ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|m| m.id).collect()
}

fn with(p: &Params, key: &'static str, value: f64) -> Result<Params> {
    let mut q = p.clone();
    q.insert(key, value);
    Ok(q)
}

fn count(x: f64) -> Result<usize> {
    if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(fidsamp_core::Error::Argument(format!("n-obs must be a positive integer, got {x}")))
    }
}

fn scalar_group(
    p: &Params,
    n: usize,
    s: &mut RandomStream,
    pick: fn(&LocScaleElement) -> f64,
) -> Result<EmpiricalDistribution> {
    let t = LocScaleElement::scalar(p["t"], p["scale"])?;
    let th = mvn_fiducial_sample(&t, count(p["n-obs"])?, n, s)?;
    Ok(EmpiricalDistribution::uniform(th.iter().map(pick).collect()))
}

fn simulate_scalar(p: &Params, mu: f64, sigma: f64, s: &mut RandomStream) -> Result<Params> {
    let truth = LocScaleElement::scalar(mu, sigma)?;
    // the statistic of a standard sample, carried to the truth
    let (_, v) = mvn_fiducial_draw(&LocScaleElement::identity(1), count(p["n-obs"])?, s)?;
    let t = group_mul(&truth, &v)?;
    let q = with(p, "t", t.mu()[0])?;
    with(&q, "scale", t.l().get(0, 0))
}
