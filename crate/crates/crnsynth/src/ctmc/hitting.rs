//! Expected hitting times of the terminal set: the linear system over the
//! transient states, solved by banded Gaussian elimination with iterative
//! refinement.

use crate::ctmc::{CtmcError, Generator, StateSpace};

/// Expected time to reach the terminal set from every state; zero at terminal
/// states themselves.
#[derive(Debug, Clone)]
pub struct HittingTimes {
    times: Vec<f64>,
    scaled_by_total: bool,
}

impl HittingTimes {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, state: usize) -> f64 {
        self.times[state]
    }

    pub fn scaled_by_total(&self) -> bool {
        self.scaled_by_total
    }
}

/// Solves for the expected hitting times of the terminal set.
///
/// Every transient state must reach some terminal state; otherwise the
/// trapped state is reported. With `scale_by_total`, times are multiplied by
/// the conserved molecule total, matching a reaction volume equal to that
/// total.
pub fn expected_hitting_time(
    generator: &Generator,
    space: &StateSpace,
    scale_by_total: bool,
) -> Result<HittingTimes, CtmcError> {
    let dim = space.len();
    let terminal: Vec<bool> = (0..dim).map(|i| space.is_terminal(i)).collect();
    let mut transient: Vec<usize> = (0..dim).filter(|&i| !terminal[i]).collect();
    // Lexicographic state order keeps transitions near the diagonal, so the
    // reduced matrix stays narrow-banded.
    transient.sort_by(|&i, &j| space.states()[i].cmp(&space.states()[j]));

    check_absorbing(generator, space, &terminal)?;
    let mut position = vec![usize::MAX; dim];
    for (pos, &i) in transient.iter().enumerate() {
        position[i] = pos;
    }
    let n = transient.len();
    let mut times = vec![0.0f64; dim];
    if n > 0 {
        // Reduced rows of -Q over transient states.
        let rows: Vec<Vec<(usize, f64)>> = transient
            .iter()
            .map(|&i| {
                generator
                    .matrix()
                    .row(i)
                    .filter(|&(j, _)| !terminal[j])
                    .map(|(j, q)| (position[j], -q))
                    .collect()
            })
            .collect();
        let solution = solve_banded(&rows, n)?;
        for (pos, &i) in transient.iter().enumerate() {
            times[i] = solution[pos];
        }
    }

    if scale_by_total {
        let total = space.conserved_total().ok_or_else(|| {
            CtmcError::Numerical(
                "volume scaling needs a conserved molecule total, but states differ".to_string(),
            )
        })?;
        for t in &mut times {
            *t *= total as f64;
        }
    }
    Ok(HittingTimes {
        times,
        scaled_by_total: scale_by_total,
    })
}

/// Reverse reachability from the terminal set; errors with a trapped state if
/// some state cannot reach it.
fn check_absorbing(
    generator: &Generator,
    space: &StateSpace,
    terminal: &[bool],
) -> Result<(), CtmcError> {
    let dim = space.len();
    if dim == 0 {
        return Ok(());
    }
    if !terminal.iter().any(|&t| t) {
        return Err(CtmcError::NonAbsorbing {
            state: space.states()[0].to_string(),
        });
    }
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for i in 0..dim {
        for (j, q) in generator.matrix().row(i) {
            if q > 0.0 && i != j {
                predecessors[j].push(i);
            }
        }
    }
    let mut reaches = terminal.to_vec();
    let mut queue: Vec<usize> = (0..dim).filter(|&i| terminal[i]).collect();
    while let Some(j) = queue.pop() {
        for &i in &predecessors[j] {
            if !reaches[i] {
                reaches[i] = true;
                queue.push(i);
            }
        }
    }
    match reaches.iter().position(|&r| !r) {
        None => Ok(()),
        Some(trapped) => Err(CtmcError::NonAbsorbing {
            state: space.states()[trapped].to_string(),
        }),
    }
}

/// Gaussian elimination on a banded matrix with unit right-hand side,
/// followed by iterative refinement against the sparse rows. The reduced
/// matrix has a strictly positive diagonal (exit rates of transient states)
/// and nonpositive off-diagonals, so elimination without pivoting is stable.
fn solve_banded(rows: &[Vec<(usize, f64)>], n: usize) -> Result<Vec<f64>, CtmcError> {
    let bandwidth = rows
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().map(move |&(j, _)| i.abs_diff(j)))
        .max()
        .unwrap_or(0);
    let width = 2 * bandwidth + 1;
    if n.saturating_mul(width) > 400_000_000 {
        return Err(CtmcError::CapacityExceeded {
            states: n,
            cap: 400_000_000 / width.max(1),
        });
    }
    // band[i][bandwidth + (j - i)] = A[i][j]
    let mut band = vec![0.0f64; n * width];
    for (i, row) in rows.iter().enumerate() {
        for &(j, v) in row {
            band[i * width + (bandwidth + j) - i] = v;
        }
    }
    let factor_band = |band: &mut Vec<f64>| -> Result<(), CtmcError> {
        for k in 0..n {
            let pivot = band[k * width + bandwidth];
            if pivot.abs() < 1e-300 {
                return Err(CtmcError::Numerical(format!(
                    "zero pivot at transient state {k}"
                )));
            }
            let i_end = (k + bandwidth + 1).min(n);
            for i in k + 1..i_end {
                let offset = bandwidth + k - i;
                let factor = band[i * width + offset] / pivot;
                if factor == 0.0 {
                    continue;
                }
                band[i * width + offset] = factor; // store L entry in place
                let j_end = (k + bandwidth + 1).min(n);
                for j in k + 1..j_end {
                    let a_kj = band[k * width + bandwidth + j - k];
                    if a_kj != 0.0 {
                        band[i * width + bandwidth + j - i] -= factor * a_kj;
                    }
                }
            }
        }
        Ok(())
    };
    factor_band(&mut band)?;
    let solve_with_factors = |band: &[f64], rhs: &[f64]| -> Vec<f64> {
        let mut x = rhs.to_vec();
        // Forward substitution with the stored multipliers.
        for k in 0..n {
            let i_end = (k + bandwidth + 1).min(n);
            for i in k + 1..i_end {
                let factor = band[i * width + bandwidth + k - i];
                if factor != 0.0 {
                    x[i] -= factor * x[k];
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let j_end = (k + bandwidth + 1).min(n);
            for j in k + 1..j_end {
                let a = band[k * width + bandwidth + j - k];
                if a != 0.0 {
                    x[k] -= a * x[j];
                }
            }
            x[k] /= band[k * width + bandwidth];
        }
        x
    };

    let ones = vec![1.0f64; n];
    let mut x = solve_with_factors(&band, &ones);
    // Iterative refinement against the exact sparse rows.
    for _ in 0..4 {
        let mut residual = vec![0.0f64; n];
        let mut worst = 0.0f64;
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (i, row) in rows.iter().enumerate() {
            let mut r = 1.0;
            for &(j, v) in row {
                r -= v * x[j];
            }
            residual[i] = r;
            worst = worst.max(r.abs());
        }
        if worst <= 1e-9 * scale {
            break;
        }
        let correction = solve_with_factors(&band, &residual);
        for (xi, c) in x.iter_mut().zip(correction) {
            *xi += c;
        }
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CtmcError::Numerical(
            "non-finite hitting time".to_string(),
        ));
    }
    Ok(x)
}
