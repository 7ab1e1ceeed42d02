//! Piecewise probabilistic LoS/NLoS path loss model.
//!
//! Distances are in km and powers in mW everywhere inside the crate. Each
//! segment carries two power laws `A * r^-alpha` (LoS and NLoS) and a LoS
//! probability law. A radius `r` belongs to the segment with
//! `lower < r <= upper`; the first segment starts at 0 and the last one is
//! unbounded.

use crate::error::{domain, parameter, Error, Result};

/// Probability that a link of a given length has a line-of-sight path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosProbability {
    /// `1 - r/d1` for `0 < r <= d1`, zero beyond.
    Linear3gpp { d1: f64 },
    /// Distance-independent probability.
    Constant(f64),
}

impl LosProbability {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            LosProbability::Linear3gpp { d1 } => {
                if r <= d1 {
                    (1.0 - r / d1).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            }
            LosProbability::Constant(p) => p,
        }
    }

    /// Radius at which the law has a kink, if any.
    pub(crate) fn kink(&self) -> Option<f64> {
        match *self {
            LosProbability::Linear3gpp { d1 } => Some(d1),
            LosProbability::Constant(_) => None,
        }
    }

    /// True when the law is identically zero on `(lo, hi]`.
    pub(crate) fn vanishes_on(&self, lo: f64, hi: f64) -> bool {
        match *self {
            LosProbability::Linear3gpp { d1 } => lo >= d1 || hi <= 0.0,
            LosProbability::Constant(p) => p == 0.0,
        }
    }

    /// True when the law is identically one on `(lo, hi]`.
    pub(crate) fn is_one_on(&self, _lo: f64, _hi: f64) -> bool {
        matches!(*self, LosProbability::Constant(p) if p == 1.0)
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LosProbability::Linear3gpp { d1 } if !(d1 > 0.0 && d1.is_finite()) => {
                Err(parameter(format!("linear LoS law needs d1 > 0, got {d1}")))
            }
            LosProbability::Constant(p) if !(0.0..=1.0).contains(&p) => {
                Err(parameter(format!("LoS probability {p} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// Power-law gain `gain * r^-exponent`, with `gain` referenced to 1 km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub gain: f64,
    pub exponent: f64,
}

impl PowerLaw {
    pub fn new(gain: f64, exponent: f64) -> Self {
        PowerLaw { gain, exponent }
    }

    /// Builds a law from a dB gain quoted at `reference_km`.
    pub fn from_db_at(gain_db: f64, exponent: f64, reference_km: f64) -> Self {
        let gain = 10f64.powf(gain_db / 10.0) * reference_km.powf(exponent);
        PowerLaw { gain, exponent }
    }

    #[inline]
    pub fn at(&self, r: f64) -> f64 {
        self.gain * r.powf(-self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossSegment {
    /// Exclusive lower bound in km.
    pub lower: f64,
    /// Inclusive upper bound in km, `f64::INFINITY` for the last segment.
    pub upper: f64,
    pub los: PowerLaw,
    pub nlos: PowerLaw,
    pub los_probability: LosProbability,
}

impl PathLossSegment {
    pub fn contains(&self, r: f64) -> bool {
        r > self.lower && r <= self.upper
    }

    pub fn law(&self, los: bool) -> &PowerLaw {
        if los {
            &self.los
        } else {
            &self.nlos
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        for (name, law) in [("LoS", &self.los), ("NLoS", &self.nlos)] {
            if !(law.gain > 0.0 && law.gain.is_finite()) {
                return Err(parameter(format!(
                    "segment {index}: {name} gain must be positive and finite"
                )));
            }
            if !(law.exponent > 0.0 && law.exponent.is_finite()) {
                return Err(parameter(format!(
                    "segment {index}: {name} exponent must be positive"
                )));
            }
        }
        if !(self.lower < self.upper) {
            return Err(parameter(format!(
                "segment {index}: lower bound {} not below upper bound {}",
                self.lower, self.upper
            )));
        }
        self.los_probability.validate()
    }
}

/// Ordered segments tiling `(0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLossModel {
    segments: Vec<PathLossSegment>,
}

impl PathLossModel {
    pub fn new(segments: Vec<PathLossSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(parameter("path loss model needs at least one segment"));
        }
        for (i, seg) in segments.iter().enumerate() {
            seg.validate(i)?;
        }
        if segments[0].lower != 0.0 {
            return Err(parameter("first segment must start at 0"));
        }
        if segments[segments.len() - 1].upper != f64::INFINITY {
            return Err(parameter("last segment must be unbounded"));
        }
        for (i, pair) in segments.windows(2).enumerate() {
            if pair[0].upper != pair[1].lower {
                return Err(parameter(format!(
                    "segments {i} and {} do not meet: {} vs {}",
                    i + 1,
                    pair[0].upper,
                    pair[1].lower
                )));
            }
        }
        Ok(PathLossModel { segments })
    }

    pub fn segments(&self) -> &[PathLossSegment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Index of the segment containing `r`.
    pub fn segment_index(&self, r: f64) -> Result<usize> {
        check_radius(r)?;
        // the partition point is the first segment whose upper bound reaches r
        let idx = self.segments.partition_point(|s| s.upper < r);
        Ok(idx.min(self.segments.len() - 1))
    }

    pub fn segment_for(&self, r: f64) -> Result<&PathLossSegment> {
        Ok(&self.segments[self.segment_index(r)?])
    }

    pub fn path_gain(&self, r: f64, los: bool) -> Result<f64> {
        Ok(self.segment_for(r)?.law(los).at(r))
    }

    pub fn los_probability(&self, r: f64) -> Result<f64> {
        Ok(self.segment_for(r)?.los_probability.eval(r))
    }

    /// Power-law exponents that stay active as `r -> inf`, i.e. those of the
    /// last segment carrying nonzero weight in its unbounded part.
    pub(crate) fn tail_exponents(&self) -> Vec<f64> {
        let last = &self.segments[self.segments.len() - 1];
        let far = match last.los_probability.kink() {
            Some(k) => k.max(last.lower),
            None => last.lower,
        };
        let mut out = Vec::with_capacity(2);
        if !last.los_probability.vanishes_on(far, f64::INFINITY) {
            out.push(last.los.exponent);
        }
        if !last.los_probability.is_one_on(far, f64::INFINITY) {
            out.push(last.nlos.exponent);
        }
        out
    }

    /// Fails when the aggregate interference of an infinite Poisson field
    /// diverges, which happens when an active tail exponent is at most 2.
    pub fn check_interference_convergence(&self) -> Result<()> {
        for alpha in self.tail_exponents() {
            if alpha <= 2.0 {
                return Err(parameter(format!(
                    "path loss exponent {alpha} <= 2 on the unbounded segment: \
                     interference integral diverges"
                )));
            }
        }
        Ok(())
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("distance must be positive, got {r}")))
    }
}

/// Fixed physical context: powers in mW plus the path loss model.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkEnvironment {
    pub tx_power: f64,
    pub noise_power: f64,
    pub model: PathLossModel,
}

impl NetworkEnvironment {
    pub fn new(tx_power: f64, noise_power: f64, model: PathLossModel) -> Result<Self> {
        if !(tx_power > 0.0 && tx_power.is_finite()) {
            return Err(parameter(format!("transmit power must be positive, got {tx_power}")));
        }
        if !(noise_power >= 0.0 && noise_power.is_finite()) {
            return Err(parameter(format!("noise power must be non-negative, got {noise_power}")));
        }
        Ok(NetworkEnvironment {
            tx_power,
            noise_power,
            model,
        })
    }

    pub fn with_noise_power(&self, noise_power: f64) -> Result<Self> {
        NetworkEnvironment::new(self.tx_power, noise_power, self.model.clone())
    }

    pub fn path_gain(&self, r: f64, los: bool) -> Result<f64> {
        self.model.path_gain(r, los)
    }

    pub fn los_probability(&self, r: f64) -> Result<f64> {
        self.model.los_probability(r)
    }
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Two-segment model with linear LoS probability up to `d1` and pure NLoS
/// beyond, sharing one LoS and one NLoS law across both segments.
pub fn case1_model(d1: f64, los: PowerLaw, nlos: PowerLaw) -> Result<PathLossModel> {
    if !(d1 > 0.0 && d1.is_finite()) {
        return Err(parameter(format!("d1 must be positive, got {d1}")));
    }
    PathLossModel::new(vec![
        PathLossSegment {
            lower: 0.0,
            upper: d1,
            los,
            nlos,
            los_probability: LosProbability::Linear3gpp { d1 },
        },
        PathLossSegment {
            lower: d1,
            upper: f64::INFINITY,
            los,
            nlos,
            los_probability: LosProbability::Constant(0.0),
        },
    ])
}

/// The 3GPP small-cell environment: d1 = 0.3 km, alpha 2.09 / 3.75, gains
/// -41.1 / -32.9 dB at 1 m, 24 dBm transmit power, -95 dBm noise.
pub fn preset_3gpp_case1() -> NetworkEnvironment {
    crate::config::EnvConfig::default()
        .build()
        .expect("built-in 3GPP preset is valid")
}

/// One unbounded NLoS-only segment with gain `gain * r^-alpha` (`gain` at 1 km).
pub fn preset_single_slope(
    alpha: f64,
    gain: f64,
    tx_power: f64,
    noise_power: f64,
) -> Result<NetworkEnvironment> {
    if !(alpha > 2.0) {
        return Err(Error::Parameter(format!(
            "single-slope exponent must exceed 2 for a finite interference integral, got {alpha}"
        )));
    }
    let law = PowerLaw::new(gain, alpha);
    let model = PathLossModel::new(vec![PathLossSegment {
        lower: 0.0,
        upper: f64::INFINITY,
        los: law,
        nlos: law,
        los_probability: LosProbability::Constant(0.0),
    }])?;
    NetworkEnvironment::new(tx_power, noise_power, model)
}

/// Single-slope comparison baseline: the NLoS law of the 3GPP preset applied
/// at every distance with the same powers.
pub fn preset_single_slope_baseline() -> NetworkEnvironment {
    let cfg = crate::config::EnvConfig {
        model: crate::config::ModelKind::SingleSlope,
        ..Default::default()
    };
    cfg.build().expect("built-in single-slope preset is valid")
}
