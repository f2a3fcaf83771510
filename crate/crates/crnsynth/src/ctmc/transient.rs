//! Transient distribution of the CTMC: `dπ/dt = π Q`.
//!
//! The primary method is uniformization: π_t as a Poisson-weighted sum of
//! powers of the uniformized jump chain, with the weight range truncated to
//! the requested tolerance and a steady-state cutoff once the iterated vector
//! stops changing. An adaptive explicit Runge-Kutta integrator serves as a
//! fallback when the uniformization rate is extreme.

use crate::ctmc::{CtmcError, Generator};

/// Above this Poisson mean the fallback integrator takes over.
const UNIFORMIZATION_MAX_MEAN: f64 = 1e9;

/// Inflation applied to the uniformization rate; keeps the jump chain
/// aperiodic so the steady-state cutoff always engages.
const RATE_INFLATION: f64 = 1.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmeMethod {
    Auto,
    Uniformization,
    RungeKutta,
}

#[derive(Debug, Clone, Copy)]
pub struct CmeOptions {
    /// Target total-variation error of the returned distribution.
    pub tol: f64,
    pub method: CmeMethod,
}

impl Default for CmeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            method: CmeMethod::Auto,
        }
    }
}

/// Integrates the distribution forward by `t` and returns the (clamped,
/// renormalized) result.
pub fn integrate(
    generator: &Generator,
    initial: &[f64],
    t: f64,
    options: &CmeOptions,
) -> Result<Vec<f64>, CtmcError> {
    if t.is_nan() || t < 0.0 {
        return Err(CtmcError::Numerical(format!("negative time {t}")));
    }
    if options.tol.is_nan() || options.tol <= 0.0 {
        return Err(CtmcError::Numerical(format!(
            "tolerance must be positive, got {}",
            options.tol
        )));
    }
    if initial.len() != generator.dim() {
        return Err(CtmcError::DimensionMismatch {
            expected: generator.dim(),
            got: initial.len(),
        });
    }
    let rate = generator.uniformization_rate() * RATE_INFLATION;
    let mean = rate * t;
    if t == 0.0 || mean == 0.0 {
        return Ok(initial.to_vec());
    }
    let raw = match options.method {
        CmeMethod::Uniformization => uniformization(generator, initial, t, rate, options.tol)?,
        CmeMethod::RungeKutta => runge_kutta(generator, initial, t, options.tol)?,
        CmeMethod::Auto => {
            if mean <= UNIFORMIZATION_MAX_MEAN {
                uniformization(generator, initial, t, rate, options.tol)?
            } else {
                runge_kutta(generator, initial, t, options.tol)?
            }
        }
    };
    clamp_and_renormalize(raw)
}

fn uniformization(
    generator: &Generator,
    initial: &[f64],
    t: f64,
    rate: f64,
    tol: f64,
) -> Result<Vec<f64>, CtmcError> {
    let mean = rate * t;
    let weights = poisson_weights(mean);
    let dim = generator.dim();

    let mut current = initial.to_vec();
    let mut next = vec![0.0f64; dim];
    let mut acc = vec![0.0f64; dim];
    let mut cumulative = 0.0f64;

    let last = weights.left + weights.values.len() as u64 - 1;
    let mut k: u64 = 0;
    loop {
        if k >= weights.left {
            let w = weights.values[(k - weights.left) as usize];
            for (a, &c) in acc.iter_mut().zip(&current) {
                *a += w * c;
            }
            cumulative += w;
        }
        if k == last {
            break;
        }
        // One step of the uniformized jump chain: next = current * P with
        // P = I + Q / rate.
        generator.matrix().vec_mat(&current, &mut next);
        let mut delta = 0.0f64;
        for (n, &c) in next.iter_mut().zip(current.iter()) {
            let value = c + *n / rate;
            delta += (value - c).abs();
            *n = value;
        }
        std::mem::swap(&mut current, &mut next);
        for v in &mut current {
            if !v.is_finite() {
                return Err(CtmcError::Numerical(
                    "non-finite value in uniformization iterate".to_string(),
                ));
            }
        }
        k += 1;
        // Steady-state cutoff: the step-to-step change bounds the distance to
        // every later iterate, so the remaining Poisson mass can be assigned
        // to the current vector.
        if delta * (last - k) as f64 <= tol * 0.25 {
            for (a, &c) in acc.iter_mut().zip(&current) {
                *a += (1.0 - cumulative) * c;
            }
            return Ok(acc);
        }
    }
    Ok(acc)
}

struct PoissonWeights {
    left: u64,
    values: Vec<f64>,
}

/// Normalized Poisson probabilities around the mode, truncated where they
/// drop 18 orders of magnitude below the peak.
fn poisson_weights(mean: f64) -> PoissonWeights {
    let mode = mean.floor().max(0.0);
    let cutoff = 1e-18;
    let mut left_values = Vec::new();
    let mut right_values = Vec::new();
    // Unnormalized, peak = 1 at the mode.
    let mut w = 1.0f64;
    let mut k = mode;
    while w >= cutoff && k > 0.0 {
        w *= k / mean;
        left_values.push(w);
        k -= 1.0;
    }
    let left = k as u64;
    w = 1.0;
    k = mode;
    loop {
        w *= mean / (k + 1.0);
        if w < cutoff {
            break;
        }
        right_values.push(w);
        k += 1.0;
    }
    let mut values = Vec::with_capacity(left_values.len() + 1 + right_values.len());
    values.extend(left_values.iter().rev());
    values.push(1.0);
    values.extend(right_values);
    let total: f64 = values.iter().sum();
    for v in &mut values {
        *v /= total;
    }
    PoissonWeights { left, values }
}

/// Dormand-Prince 5(4) with step-size control.
fn runge_kutta(
    generator: &Generator,
    initial: &[f64],
    t_final: f64,
    tol: f64,
) -> Result<Vec<f64>, CtmcError> {
    let dim = generator.dim();
    let matrix = generator.matrix();
    let deriv = |v: &[f64], out: &mut [f64]| matrix.vec_mat(v, out);

    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let rate = generator.uniformization_rate().max(1e-12);
    let mut h = (1.0 / rate).min(t_final);
    let mut t = 0.0f64;
    let mut y = initial.to_vec();
    let mut stages: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut scratch = vec![0.0; dim];
    // Per-step error target; keeps the accumulated error near tol.
    let step_tol = tol * 0.1;
    let mut steps = 0u64;

    deriv(&y, &mut stages[0]);
    while t < t_final {
        steps += 1;
        if steps > 50_000_000 {
            return Err(CtmcError::Numerical(
                "step limit exceeded in Runge-Kutta integration".to_string(),
            ));
        }
        if t + h > t_final {
            h = t_final - t;
        }
        for stage in 1..7 {
            for (i, s) in scratch.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, k) in stages.iter().take(stage).enumerate() {
                    let a = if stage < 7 { A[stage - 1][j] } else { 0.0 };
                    acc += a * k[i];
                }
                *s = y[i] + h * acc;
            }
            let (head, tail) = stages.split_at_mut(stage);
            let _ = head;
            deriv(&scratch, &mut tail[0]);
        }
        let mut err = 0.0f64;
        let mut y_new = vec![0.0; dim];
        for i in 0..dim {
            let mut v5 = 0.0;
            let mut v4 = 0.0;
            for (j, k) in stages.iter().enumerate() {
                v5 += B5[j] * k[i];
                v4 += B4[j] * k[i];
            }
            y_new[i] = y[i] + h * v5;
            let scale = step_tol * (1.0 + y[i].abs());
            err = err.max((h * (v5 - v4)).abs() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = y_new;
            deriv(&y, &mut stages[0]);
            if y.iter().any(|v| !v.is_finite()) {
                return Err(CtmcError::Numerical(
                    "non-finite value in Runge-Kutta iterate".to_string(),
                ));
            }
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).min(t_final);
        if h <= f64::EPSILON * t_final {
            return Err(CtmcError::Numerical(
                "step size underflow in Runge-Kutta integration".to_string(),
            ));
        }
    }
    Ok(y)
}

/// Clamps round-off negatives to zero and renormalizes; drift beyond 1e-9 is
/// reported as a numerical failure.
fn clamp_and_renormalize(mut probs: Vec<f64>) -> Result<Vec<f64>, CtmcError> {
    for p in &mut probs {
        if !p.is_finite() {
            return Err(CtmcError::Numerical(
                "non-finite probability in transient distribution".to_string(),
            ));
        }
        if *p < 0.0 {
            if *p < -1e-9 {
                return Err(CtmcError::Numerical(format!(
                    "probability {p} below the clamping threshold"
                )));
            }
            *p = 0.0;
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(CtmcError::Numerical(format!(
            "probability mass drifted to {sum}"
        )));
    }
    for p in &mut probs {
        *p /= sum;
    }
    Ok(probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_weights_sum_to_one() {
        for mean in [1e-6, 0.5, 3.0, 250.0, 1e6] {
            let w = poisson_weights(mean);
            let sum: f64 = w.values.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "mean {mean}: sum {sum}");
        }
    }

    #[test]
    fn poisson_weights_match_direct_formula() {
        let mean = 3.0f64;
        let w = poisson_weights(mean);
        // P(k) = e^-3 3^k / k!
        let direct = |k: u64| -> f64 {
            let mut v = (-mean).exp();
            for i in 0..k {
                v *= mean / (i + 1) as f64;
            }
            v
        };
        for (offset, &value) in w.values.iter().enumerate() {
            let k = w.left + offset as u64;
            assert!((value - direct(k)).abs() < 1e-12, "k={k}");
        }
    }
}
