//! Two particles on a line: independent initial distributions, one elastic
//! collision, then free flight. Correlations appear from local dynamics.
//!
//! Ensemble dumps are CSV with the header `q1,p1,q2,p2`.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// Default ensemble size.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Absolute tolerance for total momentum, scaled by `max(1, |p1| + |p2|)`.
pub const MOMENTUM_TOL: f64 = 1e-12;
/// Relative tolerance for kinetic energy.
pub const ENERGY_TOL: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceSample {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
}

impl PhaseSpaceSample {
    pub fn new(q1: f64, p1: f64, q2: f64, p2: f64) -> Result<Self> {
        let s = Self { q1, p1, q2, p2 };
        if s.as_array().iter().all(|v| v.is_finite()) {
            Ok(s)
        } else {
            Err(Error::InvalidArgument(format!(
                "non-finite phase-space sample {s:?}"
            )))
        }
    }

    /// `[q1, p1, q2, p2]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.p1, self.q2, self.p2]
    }

    pub fn momentum(&self) -> f64 {
        self.p1 + self.p2
    }

    pub fn energy(&self, m1: f64, m2: f64) -> f64 {
        self.p1 * self.p1 / (2.0 * m1) + self.p2 * self.p2 / (2.0 * m2)
    }
}

fn check_masses(m1: f64, m2: f64) -> Result<()> {
    if m1 > 0.0 && m2 > 0.0 && m1.is_finite() && m2.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "masses must be positive, got {m1} and {m2}"
        )))
    }
}

/// Instantaneous elastic collision: momenta jump, positions stay.
///
/// `p1' = ((m1 − m2) p1 + 2 m1 p2) / (m1 + m2)` and symmetrically for `p2'`,
/// the solution of momentum and kinetic-energy conservation.
pub fn collide(s: &PhaseSpaceSample, m1: f64, m2: f64) -> Result<PhaseSpaceSample> {
    check_masses(m1, m2)?;
    let total = m1 + m2;
    Ok(PhaseSpaceSample {
        p1: ((m1 - m2) * s.p1 + 2.0 * m1 * s.p2) / total,
        p2: ((m2 - m1) * s.p2 + 2.0 * m2 * s.p1) / total,
        ..*s
    })
}

pub fn free_flight(s: &PhaseSpaceSample, m1: f64, m2: f64, t: f64) -> Result<PhaseSpaceSample> {
    check_masses(m1, m2)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "flight time must be nonnegative, got {t}"
        )));
    }
    Ok(PhaseSpaceSample {
        q1: s.q1 + s.p1 / m1 * t,
        q2: s.q2 + s.p2 / m2 * t,
        ..*s
    })
}

/// Independent Gaussians for one particle's position and momentum.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct ParticleDistribution {
    pub q_mean: f64,
    pub q_width: f64,
    pub p_mean: f64,
    pub p_width: f64,
}

impl ParticleDistribution {
    pub fn new(q_mean: f64, q_width: f64, p_mean: f64, p_width: f64) -> Result<Self> {
        if q_width >= 0.0 && p_width >= 0.0 && q_mean.is_finite() && p_mean.is_finite() {
            Ok(Self {
                q_mean,
                q_width,
                p_mean,
                p_width,
            })
        } else {
            Err(Error::InvalidArgument(
                "distribution widths must be nonnegative".into(),
            ))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleConfig {
    pub samples: usize,
    pub m1: f64,
    pub m2: f64,
    pub seed: u64,
    pub particle1: ParticleDistribution,
    pub particle2: ParticleDistribution,
}

impl Default for EnsembleConfig {
    /// Particle 1 left of the origin moving right, particle 2 the mirror image.
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            m1: 1.0,
            m2: 1.0,
            seed: 0,
            particle1: ParticleDistribution {
                q_mean: -5.0,
                q_width: 1.0,
                p_mean: 1.0,
                p_width: 0.3,
            },
            particle2: ParticleDistribution {
                q_mean: 5.0,
                q_width: 1.0,
                p_mean: -1.0,
                p_width: 0.3,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    m1: f64,
    m2: f64,
    seed: u64,
    initial: Vec<PhaseSpaceSample>,
    current: Vec<PhaseSpaceSample>,
    collided: bool,
    elapsed: f64,
}

fn normal(mean: f64, width: f64) -> Result<Normal<f64>> {
    Normal::new(mean, width).map_err(|e| Error::InvalidArgument(e.to_string()))
}

impl Ensemble {
    /// Draws the product distribution. Sample `i` uses its own ChaCha stream,
    /// so results do not depend on thread scheduling.
    pub fn sample(config: &EnsembleConfig) -> Result<Self> {
        check_masses(config.m1, config.m2)?;
        if config.samples == 0 {
            return Err(Error::InvalidArgument(
                "ensemble needs at least one sample".into(),
            ));
        }
        let (a, b) = (config.particle1, config.particle2);
        let dists = [
            normal(a.q_mean, a.q_width)?,
            normal(a.p_mean, a.p_width)?,
            normal(b.q_mean, b.q_width)?,
            normal(b.p_mean, b.p_width)?,
        ];
        let initial: Vec<PhaseSpaceSample> = (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(i as u64);
                let [q1, p1, q2, p2] = dists.map(|d| d.sample(&mut rng));
                PhaseSpaceSample { q1, p1, q2, p2 }
            })
            .collect();
        Self::from_samples(initial, config.m1, config.m2, config.seed)
    }

    pub fn from_samples(
        samples: Vec<PhaseSpaceSample>,
        m1: f64,
        m2: f64,
        seed: u64,
    ) -> Result<Self> {
        check_masses(m1, m2)?;
        if samples.is_empty() {
            return Err(Error::InvalidArgument(
                "ensemble needs at least one sample".into(),
            ));
        }
        Ok(Self {
            m1,
            m2,
            seed,
            current: samples.clone(),
            initial: samples,
            collided: false,
            elapsed: 0.0,
        })
    }

    pub fn masses(&self) -> (f64, f64) {
        (self.m1, self.m2)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn initial(&self) -> &[PhaseSpaceSample] {
        &self.initial
    }

    pub fn samples(&self) -> &[PhaseSpaceSample] {
        &self.current
    }

    pub fn collided(&self) -> bool {
        self.collided
    }

    pub fn elapsed(&self) -> f64 {
        self.elapsed
    }

    /// Collides every sample once, then lets it fly freely for `t`.
    pub fn evolve(&self, t: f64) -> Result<Ensemble> {
        if self.collided {
            return Err(Error::InvalidArgument(
                "ensemble has already collided".into(),
            ));
        }
        let (m1, m2) = (self.m1, self.m2);
        let current = self
            .current
            .par_iter()
            .map(|s| free_flight(&collide(s, m1, m2)?, m1, m2, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            current,
            collided: true,
            elapsed: self.elapsed + t,
            ..self.clone()
        })
    }

    /// Free flight only, for the pre-collision approach.
    pub fn drift(&self, t: f64) -> Result<Ensemble> {
        let (m1, m2) = (self.m1, self.m2);
        let current = self
            .current
            .par_iter()
            .map(|s| free_flight(s, m1, m2, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble {
            current,
            elapsed: self.elapsed + t,
            ..self.clone()
        })
    }

    pub fn covariance(&self) -> Result<[[f64; 4]; 4]> {
        covariance(&self.current)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_csv(&self.current, out)
    }
}

pub fn evolve_ensemble(e: &Ensemble, t: f64) -> Result<Ensemble> {
    e.evolve(t)
}

fn column(samples: &[PhaseSpaceSample], k: usize) -> Vec<f64> {
    samples.iter().map(|s| s.as_array()[k]).collect()
}

/// Sample covariance (divisor `N − 1`) between two equal-length series.
pub fn covariance_of(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "covariance needs two equal series of length ≥ 2, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    Ok(xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / (n - 1.0))
}

/// Pearson correlation; `NaN` when either series is constant.
pub fn correlation_of(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let cxy = covariance_of(xs, ys)?;
    Ok(cxy / (covariance_of(xs, xs)? * covariance_of(ys, ys)?).sqrt())
}

/// 4×4 covariance over `(q1, p1, q2, p2)`.
pub fn covariance(samples: &[PhaseSpaceSample]) -> Result<[[f64; 4]; 4]> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    let cols: Vec<Vec<f64>> = (0..4).map(|k| column(samples, k)).collect();
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let c = covariance_of(&cols[i], &cols[j])?;
            out[i][j] = c;
            out[j][i] = c;
        }
    }
    Ok(out)
}

pub fn write_csv<W: Write>(samples: &[PhaseSpaceSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(s).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<PhaseSpaceSample>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .enumerate()
        .map(|(i, row)| {
            let s: PhaseSpaceSample = row.map_err(|e| csv_error(e).at_line(i + 2))?;
            PhaseSpaceSample::new(s.q1, s.p1, s.q2, s.p2)
                .map_err(|e| Error::parse(e.to_string()).at_line(i + 2))
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::parse(e.to_string())
}

const NAMES: [&str; 4] = ["q1", "p1", "q2", "p2"];

/// Sample, collide, fly, and check conservation laws and the correlation
/// build-up against the stored initial draws.
pub fn collision_report(config: &EnsembleConfig, t: f64) -> Result<Report> {
    let before = Ensemble::sample(config)?;
    let after = before.evolve(t)?;
    let collided = before
        .samples()
        .par_iter()
        .map(|s| collide(s, config.m1, config.m2))
        .collect::<Result<Vec<_>>>()?;
    let (m1, m2) = (config.m1, config.m2);
    let mut momentum_worst = 0.0_f64;
    let mut energy_worst = 0.0_f64;
    for (s, c) in before.samples().iter().zip(&collided) {
        let scale = 1.0_f64.max(s.p1.abs() + s.p2.abs());
        momentum_worst = momentum_worst.max((c.momentum() - s.momentum()).abs() / scale);
        let e = s.energy(m1, m2);
        energy_worst = energy_worst.max((c.energy(m1, m2) - e).abs() / e.max(f64::MIN_POSITIVE));
    }

    let n = config.samples as f64;
    let tol = 4.0 / n.sqrt();
    let init_cols: Vec<Vec<f64>> = (0..4).map(|k| column(before.samples(), k)).collect();
    let mut cross = Vec::new();
    let mut worst_cross = 0.0_f64;
    for i in [0, 1] {
        for j in [2, 3] {
            let r = correlation_of(&init_cols[i], &init_cols[j])?;
            worst_cross = worst_cross.max(r.abs());
            cross.push(serde_json::json!({ "pair": format!("{},{}", NAMES[i], NAMES[j]), "correlation": r }));
        }
    }

    let p1_after = column(after.samples(), 1);
    let q1_after = column(after.samples(), 0);
    let swap_corr = correlation_of(&p1_after, &init_cols[3])?;
    let q1_p2_cov = covariance_of(&q1_after, &init_cols[3])?;

    let mut r = Report::new("classical-collision");
    r.push(Check::new(
        "momentum",
        momentum_worst <= MOMENTUM_TOL,
        format!("worst per-sample momentum change {momentum_worst:.3e}"),
    ));
    r.push(Check::new(
        "energy",
        energy_worst <= ENERGY_TOL,
        format!("worst per-sample relative energy change {energy_worst:.3e}"),
    ));
    r.push(Check::new(
        "initial-independence",
        worst_cross <= tol,
        format!(
            "largest initial cross-correlation {worst_cross:.3e} against 4/sqrt(N) = {tol:.3e}"
        ),
    ));
    if m1 == m2 {
        r.push(Check::new(
            "momentum-swap-correlation",
            (swap_corr - 1.0).abs() <= 1e-12,
            format!("corr(p1 after, p2 initial) = {swap_corr:.15}"),
        ));
    }
    r.set_data("config", config);
    r.set_data("flight_time", t);
    r.set_data("initial_cross_correlations", cross);
    r.set_data("covariance_initial", covariance(before.samples())?);
    r.set_data("covariance_final", after.covariance()?);
    r.set_data("corr_p1_final_p2_initial", swap_corr);
    r.set_data("cov_q1_final_p2_initial", q1_p2_cov);
    Ok(r)
}
