//! Device placement, line-of-sight channels for a half-wavelength ULA, and
//! Rician fading.
//!
//! Channels are power-normalized: the line-of-sight mean has squared norm
//! `κ/(1+κ)·M` and the scattered part has covariance `I/(1+κ)`, so
//! `E‖h‖² = M` regardless of κ. Large-scale attenuation lives in the separate
//! path gain `β`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::CVector;
use crate::rng;

/// Distance-independent loss applied on top of the log-distance model.
pub const DEFAULT_FIXED_LOSS_DB: f64 = 16.0;
/// Log-distance path-loss exponent.
pub const PATH_LOSS_EXPONENT: f64 = 2.7;
/// Inner and outer radius of the random-placement annulus, meters.
pub const ANNULUS_RADII: (f64, f64) = (1.0, 10.0);

/// Number of devices in the fixed A/B/C layouts.
pub const FIXED_SCENARIO_DEVICES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceGeometry {
    /// Meters from the array center.
    pub distance: f64,
    /// Radians from array boresight.
    pub azimuth: f64,
    /// Linear Rician factor κ.
    pub rician_factor: f64,
}

impl DeviceGeometry {
    pub fn new(distance: f64, azimuth: f64, rician_factor: f64) -> Result<Self> {
        if !(distance > 0.0 && distance.is_finite()) {
            return Err(Error::domain(format!("distance must be positive, got {distance}")));
        }
        if !azimuth.is_finite() {
            return Err(Error::domain("azimuth must be finite"));
        }
        if !(rician_factor >= 0.0) {
            return Err(Error::domain(format!(
                "rician factor must be non-negative, got {rician_factor}"
            )));
        }
        Ok(Self {
            distance,
            azimuth,
            rician_factor,
        })
    }
}

/// Log-distance path loss `10^(-L/10) · d^(-n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub fixed_loss_db: f64,
    pub exponent: f64,
}

impl Default for PathLoss {
    fn default() -> Self {
        Self {
            fixed_loss_db: DEFAULT_FIXED_LOSS_DB,
            exponent: PATH_LOSS_EXPONENT,
        }
    }
}

impl PathLoss {
    pub fn gain(&self, distance: f64) -> Result<f64> {
        if !(distance > 0.0) {
            return Err(Error::domain(format!(
                "path loss needs a positive distance, got {distance}"
            )));
        }
        Ok(10f64.powf(-self.fixed_loss_db / 10.0) * distance.powf(-self.exponent))
    }
}

/// Average power gain at `distance` meters with the default loss model.
pub fn path_loss_gain(distance: f64) -> Result<f64> {
    PathLoss::default().gain(distance)
}

/// Per-element phase of a half-wavelength ULA seen from `azimuth`:
/// element `m` gets `−m·π·sin(azimuth)`.
pub fn ula_phase(azimuth: f64, antennas: usize) -> Result<Vec<f64>> {
    if antennas == 0 {
        return Err(Error::domain("array needs at least one antenna"));
    }
    let s = azimuth.sin();
    Ok((0..antennas).map(|m| -(m as f64) * PI * s).collect())
}

/// Line-of-sight mean `√(κ/(1+κ)) · exp(i·φ)`.
pub fn mean_channel(rician_factor: f64, phase: &[f64]) -> Result<CVector> {
    if !(rician_factor >= 0.0) {
        return Err(Error::domain(format!(
            "rician factor must be non-negative, got {rician_factor}"
        )));
    }
    let amp = los_amplitude(rician_factor);
    Ok(CVector::from_iterator(
        phase.len(),
        phase.iter().map(|&p| Complex64::from_polar(amp, p)),
    ))
}

fn los_amplitude(kappa: f64) -> f64 {
    if kappa.is_infinite() {
        1.0
    } else {
        (kappa / (1.0 + kappa)).sqrt()
    }
}

/// First- and second-order statistics of one device channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelStats {
    mean: CVector,
    path_gain: f64,
    rician_factor: f64,
}

impl ChannelStats {
    pub fn new(mean: CVector, path_gain: f64, rician_factor: f64) -> Result<Self> {
        if mean.is_empty() {
            return Err(Error::domain("mean channel must have at least one antenna"));
        }
        if !(path_gain > 0.0 && path_gain.is_finite()) {
            return Err(Error::domain(format!("path gain must be positive, got {path_gain}")));
        }
        if !(rician_factor >= 0.0) {
            return Err(Error::domain("rician factor must be non-negative"));
        }
        Ok(Self {
            mean,
            path_gain,
            rician_factor,
        })
    }

    pub fn from_geometry(geometry: &DeviceGeometry, antennas: usize, path_loss: &PathLoss) -> Result<Self> {
        let phase = ula_phase(geometry.azimuth, antennas)?;
        let mean = mean_channel(geometry.rician_factor, &phase)?;
        let gain = path_loss.gain(geometry.distance)?;
        Self::new(mean, gain, geometry.rician_factor)
    }

    pub fn mean(&self) -> &CVector {
        &self.mean
    }

    pub fn path_gain(&self) -> f64 {
        self.path_gain
    }

    pub fn rician_factor(&self) -> f64 {
        self.rician_factor
    }

    /// Scalar `c` of the scattered covariance `R = c·I`.
    pub fn cov_scale(&self) -> f64 {
        if self.rician_factor.is_infinite() {
            0.0
        } else {
            1.0 / (1.0 + self.rician_factor)
        }
    }

    pub fn antennas(&self) -> usize {
        self.mean.len()
    }

    /// `‖h̄‖²`.
    pub fn mean_power(&self) -> f64 {
        self.mean.norm_squared()
    }
}

/// One channel realization `h = h̄ + ĥ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingDraw {
    pub channel: CVector,
}

/// Draws `h̄ + ĥ` with `ĥ ~ CN(0, I/(1+κ))`, consuming `2M` normals from `rng`.
pub fn draw_rician<R: Rng + ?Sized>(stats: &ChannelStats, rng: &mut R) -> FadingDraw {
    // real and imaginary parts each carry half the per-entry variance
    let sigma = (stats.cov_scale() / 2.0).sqrt();
    let channel = stats.mean.map(|m| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        m + Complex64::new(sigma * re, sigma * im)
    });
    FadingDraw { channel }
}

/// How devices are laid out around the beacon.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioKind {
    /// Uniform over the 1–10 m annulus, azimuth uniform in (−90°, 90°).
    Annulus,
    /// d = [2,2,4,4,6,6,8,8] m, θ_i = 10·i degrees.
    A,
    /// d_i = 1+i m, θ_i = 90 − 10·i degrees.
    B,
    /// d = [3,3,5,5,7,7,10,10] m, θ = [20,20,60,60,40,40,10,80] degrees.
    C,
    /// User-provided distances (m) and azimuths (degrees).
    Explicit {
        distances: Vec<f64>,
        azimuths_deg: Vec<f64>,
    },
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::Annulus => "annulus",
            ScenarioKind::A => "A",
            ScenarioKind::B => "B",
            ScenarioKind::C => "C",
            ScenarioKind::Explicit { .. } => "explicit",
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, ScenarioKind::Annulus)
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annulus" | "annulus_random" => Ok(ScenarioKind::Annulus),
            "A" | "a" | "scenario_A" => Ok(ScenarioKind::A),
            "B" | "b" | "scenario_B" => Ok(ScenarioKind::B),
            "C" | "c" | "scenario_C" => Ok(ScenarioKind::C),
            other => Err(Error::domain(format!("unknown scenario kind `{other}`"))),
        }
    }
}

fn fixed_layout(kind: &ScenarioKind) -> Option<([f64; 8], [f64; 8])> {
    let idx = |f: fn(f64) -> f64| std::array::from_fn(|i| f((i + 1) as f64));
    match kind {
        ScenarioKind::A => Some(([2., 2., 4., 4., 6., 6., 8., 8.], idx(|i| 10.0 * i))),
        ScenarioKind::B => Some((idx(|i| 1.0 + i), idx(|i| 90.0 - 10.0 * i))),
        ScenarioKind::C => Some((
            [3., 3., 5., 5., 7., 7., 10., 10.],
            [20., 20., 60., 60., 40., 40., 10., 80.],
        )),
        _ => None,
    }
}

/// Places `devices` devices. `rician_factors` is either one value shared by
/// every device or one per device (linear scale). `seed` only matters for
/// [`ScenarioKind::Annulus`].
pub fn make_geometry(
    kind: &ScenarioKind,
    devices: usize,
    rician_factors: &[f64],
    seed: u64,
) -> Result<Vec<DeviceGeometry>> {
    if devices == 0 {
        return Err(Error::domain("scenario needs at least one device"));
    }
    let kappa = |i: usize| -> Result<f64> {
        match rician_factors.len() {
            1 => Ok(rician_factors[0]),
            n if n == devices => Ok(rician_factors[i]),
            n => Err(Error::dimension(format!(
                "{n} rician factors given for {devices} devices"
            ))),
        }
    };

    let (distances, azimuths_deg): (Vec<f64>, Vec<f64>) = match kind {
        ScenarioKind::Annulus => {
            let (r_in, r_out) = ANNULUS_RADII;
            let mut rng = rng::substream(seed, rng::GEOMETRY, 0);
            (0..devices)
                .map(|_| {
                    // uniform over area: radius density ∝ r
                    let u: f64 = rng.random();
                    let d = (r_in * r_in + u * (r_out * r_out - r_in * r_in)).sqrt();
                    let theta = rng.random_range(-90.0..90.0);
                    (d, theta)
                })
                .unzip()
        }
        ScenarioKind::Explicit {
            distances,
            azimuths_deg,
        } => {
            if distances.len() != devices || azimuths_deg.len() != devices {
                return Err(Error::dimension(format!(
                    "explicit scenario lists {} distances and {} azimuths for {devices} devices",
                    distances.len(),
                    azimuths_deg.len()
                )));
            }
            (distances.clone(), azimuths_deg.clone())
        }
        fixed => {
            if devices != FIXED_SCENARIO_DEVICES {
                return Err(Error::domain(format!(
                    "scenario {} is defined for exactly {FIXED_SCENARIO_DEVICES} devices, got {devices}",
                    fixed.name()
                )));
            }
            let (d, t) = fixed_layout(fixed).expect("fixed layout");
            (d.to_vec(), t.to_vec())
        }
    };

    distances
        .iter()
        .zip(&azimuths_deg)
        .enumerate()
        .map(|(i, (&d, &t))| DeviceGeometry::new(d, t.to_radians(), kappa(i)?))
        .collect()
}

/// Rotates the array by `alpha` radians: every azimuth becomes `θ + α`.
pub fn rotate(geometry: &[DeviceGeometry], alpha: f64) -> Vec<DeviceGeometry> {
    geometry
        .iter()
        .map(|g| DeviceGeometry {
            azimuth: g.azimuth + alpha,
            ..*g
        })
        .collect()
}

/// A placed set of devices together with their channel statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub geometry: Vec<DeviceGeometry>,
    pub stats: Vec<ChannelStats>,
    pub path_loss: PathLoss,
}

impl Deployment {
    pub fn new(geometry: Vec<DeviceGeometry>, antennas: usize, path_loss: PathLoss) -> Result<Self> {
        if antennas == 0 {
            return Err(Error::domain("array needs at least one antenna"));
        }
        if geometry.len() > antennas {
            log::warn!(
                "{} devices exceed {antennas} antennas; results leave the N <= M regime",
                geometry.len()
            );
        }
        let stats = geometry
            .iter()
            .map(|g| ChannelStats::from_geometry(g, antennas, &path_loss))
            .collect::<Result<_>>()?;
        Ok(Self {
            geometry,
            stats,
            path_loss,
        })
    }

    pub fn devices(&self) -> usize {
        self.stats.len()
    }

    pub fn antennas(&self) -> usize {
        self.stats[0].antennas()
    }

    pub fn gains(&self) -> Vec<f64> {
        self.stats.iter().map(ChannelStats::path_gain).collect()
    }

    pub fn rotated(&self, alpha: f64) -> Result<Self> {
        Self::new(rotate(&self.geometry, alpha), self.antennas(), self.path_loss)
    }
}

/// Builds a full deployment: geometry from [`make_geometry`], statistics for an
/// `antennas`-element ULA.
pub fn make_scenario(
    kind: &ScenarioKind,
    devices: usize,
    antennas: usize,
    rician_factors: &[f64],
    path_loss: PathLoss,
    seed: u64,
) -> Result<Deployment> {
    Deployment::new(make_geometry(kind, devices, rician_factors, seed)?, antennas, path_loss)
}
