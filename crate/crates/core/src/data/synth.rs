//! Repo-defined synthetic stand-in for the field dataset.
//!
//! The formulas below are illustrative and make no claim to match any
//! erosion or soil-conditioning model. They exist so the benchmark has
//! known nonlinear structure, two pure-noise distractors and a reproducible
//! importance ranking for RRR.
//!
//! # Sampling
//!
//! Rows are drawn from three independent latent pools, mirroring gridded
//! surveys where many fields share a county, a climate zone and a soil map
//! unit:
//!
//! * 10 counties, each with corn yield `U(7, 13)`, soybean yield
//!   `U(2.5, 4.5)` and wheat yield `U(4, 7)`.
//! * 5 climate zones, each with rainfall erosivity `U(60, 240)`.
//! * 35 map units, each with soil erodibility drawn from
//!   `{0.17, 0.20, 0.24, 0.28, 0.32, 0.37, 0.43, 0.49}`, clay `U(0.08, 0.45)`,
//!   silt `(1 - clay)·U(0.3, 0.7)`, sand `1 - clay - silt`, organic matter
//!   `U(1, 6)`, slope (%) `U(0.5, 12)`, slope length (m) `U(10, 300)` and
//!   k_factor `U(0.5, 3)`.
//!
//! Each row picks a county, a climate zone and a map unit uniformly, a
//! crop-rotation code in `{0, 1, 2}`, a residue removal rate from the 7
//! levels `0, 0.15, …, 0.9`, and two `N(0, 1)` noise features. Erosivity has
//! its own pool so that it cannot be recovered from the county yields.
//!
//! # Targets
//!
//! With retention `ret = 1 - residue_removal`, `θ = atan(slope / 100)` and
//! the slope-steepness term `S = 10.8 sin θ + 0.03` for slope < 9 %,
//! `S = 16.8 sin θ - 0.5` otherwise:
//!
//! * `SEF = erosivity · erodibility · (slope_length / 22.13)^0.5 · S · exp(-2.5 ret) / 10`
//! * `SCI = 1.5 tanh(2.5 (om - 3)) + 1.2 tanh(2 (ret · corn / 6 - 1)) + 0.3 rotation
//!   - 0.8 exp(-((silt - 0.35) / 0.08)²)`
//! * `OMF = ln(om) + 0.8 exp(-((clay - 0.27) / 0.08)²) + 0.4 [rotation > 0]`
//!
//! Each indicator then receives additive Gaussian noise with standard
//! deviation `noise_sigma · sd(noiseless target)`, so `noise_sigma = 0.1`
//! is a 20 dB signal-to-noise ratio. RRR is computed from the noisy
//! indicator columns:
//!
//! * `z = 1.2 SCI + OMF - 0.6 sqrt(max(SEF, 0)) + 6 (clay - 0.25) + 0.35 (corn - 10)`
//! * `RRR = 0.9 / (1 + exp(-(z - 3)))`, plus noise scaled the same way.
//!
//! Features come from the seed's primary stream and noise from a derived
//! stream, so the feature columns do not depend on `noise_sigma`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DataError, DataTable, FeatureSchema};
use crate::rng::{derive_seed, seeded};
use crate::Matrix;

const N_COUNTIES: usize = 10;
const N_CLIMATE_ZONES: usize = 5;
const N_MAP_UNITS: usize = 35;
const ERODIBILITY_LEVELS: [f64; 8] = [0.17, 0.20, 0.24, 0.28, 0.32, 0.37, 0.43, 0.49];
const REMOVAL_LEVELS: usize = 7;
const NOISE_STREAM: u64 = 0x004E_4F49_5345;

/// Columns that carry no signal for any target.
pub const NOISE_FEATURES: [&str; 2] = ["noise_1", "noise_2"];

/// Inputs that enter the generating formula of `target`.
pub fn generative_features(target: &str) -> Option<&'static [&'static str]> {
    match target {
        "SEF" => Some(&[
            "soil_erodibility",
            "rainfall_erosivity",
            "slope",
            "slope_length",
            "residue_removal",
        ]),
        "SCI" => Some(&[
            "organic_matter",
            "corn_yield",
            "residue_removal",
            "crop_rotation",
            "silt",
        ]),
        "OMF" => Some(&["organic_matter", "clay", "crop_rotation"]),
        "RRR" => Some(&["SEF", "SCI", "OMF", "clay", "corn_yield"]),
        _ => None,
    }
}

/// Noiseless generating functions.
pub mod formulas {
    fn slope_steepness(slope_pct: f64) -> f64 {
        let theta = (slope_pct / 100.0).atan();
        if slope_pct < 9.0 {
            10.8 * theta.sin() + 0.03
        } else {
            16.8 * theta.sin() - 0.5
        }
    }

    pub fn sef(erosivity: f64, erodibility: f64, slope: f64, slope_length: f64, removal: f64) -> f64 {
        let ret = 1.0 - removal;
        erosivity * erodibility * (slope_length / 22.13).powf(0.5) * slope_steepness(slope)
            * (-2.5 * ret).exp()
            / 10.0
    }

    pub fn sci(om: f64, corn: f64, removal: f64, rotation: f64, silt: f64) -> f64 {
        let ret = 1.0 - removal;
        1.5 * (2.5 * (om - 3.0)).tanh() + 1.2 * (2.0 * (ret * corn / 6.0 - 1.0)).tanh()
            + 0.3 * rotation
            - 0.8 * (-((silt - 0.35) / 0.08).powi(2)).exp()
    }

    pub fn omf(om: f64, clay: f64, rotation: f64) -> f64 {
        let rotated = if rotation > 0.0 { 1.0 } else { 0.0 };
        om.ln() + 0.8 * (-((clay - 0.27) / 0.08).powi(2)).exp() + 0.4 * rotated
    }

    pub fn rrr(sef: f64, sci: f64, omf: f64, clay: f64, corn: f64) -> f64 {
        let z = 1.2 * sci + omf - 0.6 * sef.max(0.0).sqrt() + 6.0 * (clay - 0.25)
            + 0.35 * (corn - 10.0);
        0.9 / (1.0 + (-(z - 3.0)).exp())
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn population_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

struct County {
    corn: f64,
    soybean: f64,
    wheat: f64,
}

struct MapUnit {
    erodibility: f64,
    clay: f64,
    silt: f64,
    sand: f64,
    om: f64,
    slope: f64,
    slope_length: f64,
    k_factor: f64,
}

/// Generates `n` rows of the default schema.
pub fn synth_generate(n: usize, noise_sigma: f64, seed: u64) -> Result<DataTable, DataError> {
    if n == 0 {
        return Err(DataError::InvalidSize("n must be at least 1".into()));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(DataError::InvalidSize(format!(
            "noise_sigma must be finite and non-negative, got {noise_sigma}"
        )));
    }
    let mut rng = seeded(seed);
    let counties: Vec<County> = (0..N_COUNTIES)
        .map(|_| County {
            corn: uniform(&mut rng, 7.0, 13.0),
            soybean: uniform(&mut rng, 2.5, 4.5),
            wheat: uniform(&mut rng, 4.0, 7.0),
        })
        .collect();
    let zones: Vec<f64> = (0..N_CLIMATE_ZONES).map(|_| uniform(&mut rng, 60.0, 240.0)).collect();
    let units: Vec<MapUnit> = (0..N_MAP_UNITS)
        .map(|_| {
            let erodibility = ERODIBILITY_LEVELS[rng.random_range(0..ERODIBILITY_LEVELS.len())];
            let clay = uniform(&mut rng, 0.08, 0.45);
            let silt = (1.0 - clay) * uniform(&mut rng, 0.3, 0.7);
            MapUnit {
                erodibility,
                clay,
                silt,
                sand: 1.0 - clay - silt,
                om: uniform(&mut rng, 1.0, 6.0),
                slope: uniform(&mut rng, 0.5, 12.0),
                slope_length: uniform(&mut rng, 10.0, 300.0),
                k_factor: uniform(&mut rng, 0.5, 3.0),
            }
        })
        .collect();

    let schema = FeatureSchema::default_schema();
    let p = schema.len();
    let mut values = Matrix::zeros(n, p);
    let (mut sef, mut sci, mut omf) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let c = &counties[rng.random_range(0..N_COUNTIES)];
        let erosivity = zones[rng.random_range(0..N_CLIMATE_ZONES)];
        let m = &units[rng.random_range(0..N_MAP_UNITS)];
        let rotation = rng.random_range(0..3u32) as f64;
        let removal = 0.15 * rng.random_range(0..REMOVAL_LEVELS) as f64;
        let noise_1: f64 = rng.sample(StandardNormal);
        let noise_2: f64 = rng.sample(StandardNormal);
        let row = [
            c.corn,
            c.soybean,
            c.wheat,
            m.erodibility,
            m.clay,
            m.silt,
            m.sand,
            m.om,
            erosivity,
            m.slope,
            m.slope_length,
            m.k_factor,
            rotation,
            removal,
            noise_1,
            noise_2,
        ];
        values.row_mut(i)[..16].copy_from_slice(&row);
        sef[i] = formulas::sef(erosivity, m.erodibility, m.slope, m.slope_length, removal);
        sci[i] = formulas::sci(m.om, c.corn, removal, rotation, m.silt);
        omf[i] = formulas::omf(m.om, m.clay, rotation);
    }

    let mut noise = seeded(derive_seed(seed, NOISE_STREAM));
    let mut add_noise = |target: &mut [f64]| {
        if noise_sigma > 0.0 {
            let scale = noise_sigma * population_sd(target);
            for v in target.iter_mut() {
                let e: f64 = noise.sample(StandardNormal);
                *v += scale * e;
            }
        }
    };
    add_noise(&mut sef);
    add_noise(&mut sci);
    add_noise(&mut omf);
    let mut rrr: Vec<f64> = (0..n)
        .map(|i| {
            let r = values.row(i);
            formulas::rrr(sef[i], sci[i], omf[i], r[4], r[0])
        })
        .collect();
    add_noise(&mut rrr);

    for i in 0..n {
        let r = values.row_mut(i);
        r[16] = sef[i];
        r[17] = sci[i];
        r[18] = omf[i];
        r[19] = rrr[i];
    }
    DataTable::new(schema, values)
}
