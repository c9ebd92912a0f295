//! Derivative-free simplex minimizer with dimension-adaptive coefficients and
//! restarts from the incumbent vertex.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Settings {
    /// Initial simplex edge length.
    pub step: f64,
    /// Stop when the spread of vertex values falls below this.
    pub tol_f: f64,
    /// ... and the simplex diameter (inf-norm) falls below this.
    pub tol_x: f64,
    pub max_evals: usize,
    /// Simplex rebuilds around the best vertex after convergence.
    pub max_rebuilds: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    #[allow(dead_code)]
    pub fx: f64,
    pub evals: usize,
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], s: &Settings) -> Outcome {
    let n = x0.len();
    let mut obj = Counted { f, evals: 0 };
    if n == 0 {
        let fx = obj.call(x0);
        return Outcome { x: Vec::new(), fx, evals: obj.evals };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut best_x = x0.to_vec();
    let mut best_f = obj.call(x0);
    let mut step = s.step;

    for _ in 0..=s.max_rebuilds {
        if obj.evals >= s.max_evals {
            break;
        }
        let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        let mut values: Vec<f64> = Vec::with_capacity(n + 1);
        simplex.push(best_x.clone());
        values.push(best_f);
        for i in 0..n {
            let mut v = best_x.clone();
            v[i] += step;
            values.push(obj.call(&v));
            simplex.push(v);
        }
        let start_f = best_f;

        let mut order: Vec<usize> = (0..=n).collect();
        let mut centroid = vec![0.0; n];
        let mut trial = vec![0.0; n];
        let mut trial2 = vec![0.0; n];
        loop {
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
            let (lo, hi, second) = (order[0], order[n], order[n - 1]);
            let spread = values[hi] - values[lo];
            let diameter = simplex
                .iter()
                .map(|v| v.iter().zip(&simplex[lo]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if (spread <= s.tol_f && diameter <= s.tol_x) || obj.evals >= s.max_evals {
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for &k in &order[..n] {
                for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                    *c += x;
                }
            }
            centroid.iter_mut().for_each(|c| *c /= nf);

            let towards = |out: &mut [f64], coef: f64, from: &[f64]| {
                for i in 0..n {
                    out[i] = centroid[i] + coef * (from[i] - centroid[i]);
                }
            };

            towards(&mut trial, -alpha, &simplex[hi]);
            let fr = obj.call(&trial);
            if fr < values[lo] {
                towards(&mut trial2, -alpha * beta, &simplex[hi]);
                let fe = obj.call(&trial2);
                if fe < fr {
                    simplex[hi].copy_from_slice(&trial2);
                    values[hi] = fe;
                } else {
                    simplex[hi].copy_from_slice(&trial);
                    values[hi] = fr;
                }
                continue;
            }
            if fr < values[second] {
                simplex[hi].copy_from_slice(&trial);
                values[hi] = fr;
                continue;
            }
            // contraction, outside if the reflection improved on the worst vertex
            let (coef, reference) = if fr < values[hi] { (-gamma * alpha, fr) } else { (gamma, values[hi]) };
            towards(&mut trial2, coef, &simplex[hi]);
            let fc = obj.call(&trial2);
            if fc < reference {
                simplex[hi].copy_from_slice(&trial2);
                values[hi] = fc;
                continue;
            }
            // shrink towards the best vertex
            let best = simplex[lo].clone();
            for &k in &order[1..] {
                for i in 0..n {
                    simplex[k][i] = best[i] + delta * (simplex[k][i] - best[i]);
                }
                values[k] = obj.call(&simplex[k]);
            }
        }

        let lo = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b))).unwrap();
        if values[lo] < best_f {
            best_f = values[lo];
            best_x = simplex[lo].clone();
        }
        // a rebuild that made no progress means the incumbent is a genuine local minimum
        if start_f - best_f <= s.tol_f {
            if step <= s.tol_x * 10.0 {
                break;
            }
            step *= 0.1;
        }
    }
    Outcome { x: best_x, fx: best_f, evals: obj.evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(max_evals: usize) -> Settings {
        Settings { step: 0.5, tol_f: 1e-14, tol_x: 1e-9, max_evals, max_rebuilds: 6 }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(f, &[-1.2, 1.0], &settings(20_000));
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5, "{:?}", out.x);
    }

    #[test]
    fn nonsmooth_l1_in_eight_dimensions() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64 * 0.1).abs()).sum::<f64>();
        let out = minimize(f, &[0.7; 8], &settings(40_000));
        assert!(out.fx < 1e-6, "{}", out.fx);
    }

    #[test]
    fn respects_budget() {
        let out = minimize(|x: &[f64]| x.iter().map(|v| v.sin()).sum(), &[0.3; 6], &settings(50));
        assert!(out.evals <= 50 + 8);
    }

    #[test]
    fn zero_dimensional() {
        let out = minimize(|_: &[f64]| 3.0, &[], &settings(10));
        assert_eq!(out.fx, 3.0);
    }
}
