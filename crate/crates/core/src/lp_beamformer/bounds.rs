use crate::error::{Error, Result};

fn check_pair(mean_power: &[f64], gains: &[f64]) -> Result<()> {
    if mean_power.is_empty() {
        return Err(Error::domain("need at least one device"));
    }
    if mean_power.len() != gains.len() {
        return Err(Error::dimension(format!(
            "{} channel powers vs {} gains",
            mean_power.len(),
            gains.len()
        )));
    }
    if let Some(i) = mean_power.iter().zip(gains).position(|(&q, &b)| !(q > 0.0 && b > 0.0)) {
        return Err(Error::domain(format!(
            "device {i} needs positive channel power and gain"
        )));
    }
    Ok(())
}

/// Closed-form power split that equalizes devices when the coupling matrix is
/// diagonal: `p_i ∝ 1/(β_i Q_ii)`.
pub fn initial_allocation(mean_power: &[f64], gains: &[f64]) -> Result<Vec<f64>> {
    check_pair(mean_power, gains)?;
    let inv: Vec<f64> = mean_power.iter().zip(gains).map(|(q, b)| 1.0 / (b * q)).collect();
    let total: f64 = inv.iter().sum();
    Ok(inv.into_iter().map(|v| v / total).collect())
}

/// Harmonic lower bound `1 / Σ_k (β_k ‖h̄_k‖²)^-1` on the max-min energy.
pub fn bound_lower(mean_power: &[f64], gains: &[f64]) -> Result<f64> {
    check_pair(mean_power, gains)?;
    Ok(1.0 / mean_power.iter().zip(gains).map(|(q, b)| 1.0 / (b * q)).sum::<f64>())
}

/// Cauchy–Schwarz upper bound `min_i β_i ‖h̄_i‖²`.
pub fn bound_upper(mean_power: &[f64], gains: &[f64]) -> Result<f64> {
    check_pair(mean_power, gains)?;
    Ok(mean_power
        .iter()
        .zip(gains)
        .map(|(q, b)| b * q)
        .fold(f64::INFINITY, f64::min))
}

/// Both bounds for ULA Rician means, where `‖h̄_k‖² = κ_k/(1+κ_k)·M`.
pub fn rician_bounds(antennas: usize, kappas: &[f64], gains: &[f64]) -> Result<(f64, f64)> {
    if antennas == 0 {
        return Err(Error::domain("array needs at least one antenna"));
    }
    if kappas.len() != gains.len() || kappas.is_empty() {
        return Err(Error::dimension("one rician factor per gain required"));
    }
    if let Some(i) = kappas.iter().position(|&k| !(k > 0.0)) {
        return Err(Error::domain(format!(
            "device {i} has rician factor {}; bounds need kappa > 0",
            kappas[i]
        )));
    }
    let m = antennas as f64;
    let lower = m / kappas.iter().zip(gains).map(|(k, b)| (k + 1.0) / (b * k)).sum::<f64>();
    let upper = m * kappas
        .iter()
        .zip(gains)
        .map(|(k, b)| b * k / (1.0 + k))
        .fold(f64::INFINITY, f64::min);
    Ok((lower, upper))
}

/// Average energy a device collects from the scattered channel part under any
/// unit-trace transmit covariance: `β/(1+κ)`.
pub fn scattered_energy(gain: f64, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) {
        return Err(Error::domain("rician factor must be non-negative"));
    }
    if kappa.is_infinite() {
        return Ok(0.0);
    }
    Ok(gain / (1.0 + kappa))
}
