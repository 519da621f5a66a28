//! Derivative-free minimization: a plain Nelder-Mead simplex with a
//! multi-start wrapper. Restart perturbations come from a seeded stream, so
//! results are deterministic for a given seed.

use crate::rng;

#[derive(Debug, Clone, Copy)]
pub struct NmOptions {
    pub max_iters: usize,
    /// Stop when the spread of simplex values falls below this.
    pub tol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            max_iters: 600,
            tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult {
    pub xmin: Vec<f64>,
    pub fmin: f64,
    pub iters: usize,
}

/// Minimize `f` from `x0` with per-coordinate initial steps `scale`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: &[f64],
    opts: &NmOptions,
) -> NmResult {
    let n = x0.len();
    assert_eq!(n, scale.len());
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += if scale[i] != 0.0 { scale[i] } else { 1e-3 };
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut iters = 0;
    while iters < opts.max_iters {
        iters += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if (values[worst] - values[best]).abs() <= opts.tol {
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for (k, v) in simplex.iter().enumerate() {
            if k == worst {
                continue;
            }
            for i in 0..n {
                centroid[i] += v[i] / n as f64;
            }
        }

        let lerp = |from: &[f64], towards: &[f64], t: f64| -> Vec<f64> {
            from.iter()
                .zip(towards)
                .map(|(a, b)| a + t * (b - a))
                .collect()
        };

        let reflected = lerp(&centroid, &simplex[worst], -alpha);
        let f_r = f(&reflected);
        if f_r < values[best] {
            let expanded = lerp(&centroid, &simplex[worst], -gamma);
            let f_e = f(&expanded);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
        } else if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
        } else {
            let contracted = lerp(&centroid, &simplex[worst], rho);
            let f_c = f(&contracted);
            if f_c < values[worst] {
                simplex[worst] = contracted;
                values[worst] = f_c;
            } else {
                // shrink towards the best vertex
                let anchor = simplex[best].clone();
                for k in 0..=n {
                    if k == best {
                        continue;
                    }
                    simplex[k] = lerp(&anchor, &simplex[k], sigma);
                    values[k] = f(&simplex[k]);
                }
            }
        }
    }

    let (k, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty simplex");
    NmResult {
        xmin: simplex[k].clone(),
        fmin: values[k],
        iters,
    }
}

/// Multi-start Nelder-Mead: one run from `x0` plus `restarts - 1` runs from
/// seeded perturbations of it.
pub fn multi_start<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: &[f64],
    restarts: usize,
    seed: u64,
    opts: &NmOptions,
) -> NmResult {
    let mut best = nelder_mead(f, x0, scale, opts);
    let mut rng = rng::seeded(seed);
    for _ in 1..restarts.max(1) {
        let start: Vec<f64> = x0
            .iter()
            .zip(scale)
            .map(|(x, s)| x + rng::in_range(&mut rng, -2.0, 2.0) * s.abs().max(1e-6))
            .collect();
        let r = nelder_mead(f, &start, scale, opts);
        if r.fmin < best.fmin {
            best = r;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(&f, &[0.0, 0.0], &[0.5, 0.5], &NmOptions::default());
        assert!((r.xmin[0] - 1.5).abs() < 1e-6);
        assert!((r.xmin[1] + 0.5).abs() < 1e-6);
    }

    #[test]
    fn multi_start_escapes_poor_start() {
        // two-well function; the far well is deeper
        let f = |x: &[f64]| {
            let a = (x[0] + 2.0).powi(2) + 0.1;
            let b = (x[0] - 2.0).powi(2);
            a.min(b)
        };
        let r = multi_start(&f, &[-2.0], &[1.5], 16, 42, &NmOptions::default());
        assert!(r.fmin < 0.05, "fmin = {}", r.fmin);
    }

    #[test]
    fn deterministic_given_seed() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let a = multi_start(&f, &[1.0, 1.0], &[0.3, 0.3], 8, 9, &NmOptions::default());
        let b = multi_start(&f, &[1.0, 1.0], &[0.3, 0.3], 8, 9, &NmOptions::default());
        assert_eq!(a.xmin, b.xmin);
        assert_eq!(a.fmin, b.fmin);
    }
}
