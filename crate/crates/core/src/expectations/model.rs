//! Single-observation building blocks of the expectation model.

use rand::Rng;
use rand_distr::StandardNormal;

use super::SimError;

/// Expectations held by one analyst about one firm at one period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationState {
    /// E(π|P).
    pub precise_exp: f64,
    /// E(π|P,V) − E(π|P); zero when no vague signal was received.
    pub vague_exp: f64,
    pub forecast: f64,
    pub period: u32,
}

/// Draw `(precise_exp, vague_exp)`. `vague_scale` multiplies `sigma_vague`
/// (regime factors); `vague` says whether the pair receives vague signals.
/// Both normals are always drawn so the stream position does not depend on
/// the parameters.
pub fn gen_signals<R: Rng + ?Sized>(
    rng: &mut R,
    sigma_precise: f64,
    sigma_vague: f64,
    vague_scale: f64,
    vague: bool,
) -> (f64, f64) {
    let zp: f64 = rng.sample(StandardNormal);
    let zv: f64 = rng.sample(StandardNormal);
    let v = if vague {
        zv * sigma_vague * vague_scale
    } else {
        0.0
    };
    (zp * sigma_precise, v)
}

pub fn realize_state(precise_exp: f64, vague_exp: f64, eps: f64) -> f64 {
    precise_exp + vague_exp + eps
}

/// b(P) as a linear index of the covariates.
pub fn bias(bias_coeffs: &[f64], covariates: &[f64]) -> Result<f64, SimError> {
    if bias_coeffs.len() != covariates.len() {
        return Err(SimError::DimensionMismatch {
            expected: bias_coeffs.len(),
            got: covariates.len(),
        });
    }
    Ok(bias_coeffs.iter().zip(covariates).map(|(b, x)| b * x).sum())
}

/// Numerical forecast from the precise expectation only; the vague
/// expectation never enters.
pub fn make_forecast(
    precise_exp: f64,
    bias_coeffs: &[f64],
    covariates: &[f64],
    eta: f64,
) -> Result<f64, SimError> {
    Ok(precise_exp + bias(bias_coeffs, covariates)? + eta)
}

pub fn forecast_error(forecast: f64, realized: f64) -> f64 {
    forecast - realized
}

/// Next forecast: weight `lambda` on the current vague expectation.
pub fn update_forecast(vague_exp: f64, forecast: f64, lambda: f64) -> Result<f64, SimError> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(SimError::LambdaOutOfRange(lambda));
    }
    Ok(update_unchecked(vague_exp, forecast, lambda))
}

pub(crate) fn update_unchecked(vague_exp: f64, forecast: f64, lambda: f64) -> f64 {
    lambda * vague_exp + (1.0 - lambda) * forecast
}

/// Residual of the revision identity
/// `ΔF_{t+1} = λ v_t − λ v_{t−1} + (1−λ) ΔF_t`
/// given `F_{t−1}, F_t, F_{t+1}` and `v_{t−1}, v_t`.
pub fn revision_identity_residual(forecasts: [f64; 3], vague: [f64; 2], lambda: f64) -> f64 {
    let [f0, f1, f2] = forecasts;
    let lhs = f2 - f1;
    let rhs = lambda * vague[1] - lambda * vague[0] + (1.0 - lambda) * (f1 - f0);
    lhs - rhs
}

/// Report tone: `tanh(vague_exp)` plus Gaussian noise, clamped to [−1, 1].
pub fn emit_tone<R: Rng + ?Sized>(vague_exp: f64, tone_noise: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (vague_exp.tanh() + tone_noise * z).clamp(-1.0, 1.0)
}
