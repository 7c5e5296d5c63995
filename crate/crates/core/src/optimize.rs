//! Derivative-free minimisation.

use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct NelderMeadOptions<T> {
    pub max_evaluations: usize,
    /// Stop when the spread of simplex values falls below this.
    pub f_tol: T,
    /// Re-seed the simplex around the best vertex this many times after
    /// convergence, which escapes collapsed simplices.
    pub restarts: usize,
}

impl<T: Real> Default for NelderMeadOptions<T> {
    fn default() -> Self {
        Self { max_evaluations: 20_000, f_tol: T::lit(1e-14), restarts: 3 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex search starting from `x0` with per-coordinate
/// initial step `step`.
pub fn nelder_mead<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    x0: &[T],
    step: &[T],
    opts: &NelderMeadOptions<T>,
) -> Minimum<T> {
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[T], count: &mut usize| {
        *count += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::max_value().unwrap_or(T::lit(1e300))
        }
    };
    let mut best_x = x0.to_vec();
    let mut best_v = eval(x0, &mut evaluations);
    if n == 0 {
        return Minimum { x: best_x, value: best_v, evaluations, converged: true };
    }
    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let mut converged = false;
    let mut scale = T::one();

    for _round in 0..=opts.restarts {
        let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_v));
        for k in 0..n {
            let mut x = best_x.clone();
            x[k] += step[k] * scale;
            let v = eval(&x, &mut evaluations);
            simplex.push((x, v));
        }
        converged = false;
        while evaluations < opts.max_evaluations {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let lo = simplex[0].1;
            let hi = simplex[n].1;
            if (hi - lo).abs() <= opts.f_tol * (T::one() + lo.abs()) {
                converged = true;
                break;
            }
            let mut centroid = vec![T::zero(); n];
            for (x, _) in &simplex[..n] {
                for (c, &xi) in centroid.iter_mut().zip(x) {
                    *c += xi;
                }
            }
            let inv = T::one() / T::from_usize_lossy(n);
            centroid.iter_mut().for_each(|c| *c *= inv);
            let along = |t: T, worst: &[T]| -> Vec<T> {
                centroid.iter().zip(worst).map(|(&c, &w)| c + t * (c - w)).collect()
            };
            let worst = simplex[n].0.clone();
            let xr = along(alpha, &worst);
            let vr = eval(&xr, &mut evaluations);
            if vr < simplex[0].1 {
                let xe = along(gamma, &worst);
                let ve = eval(&xe, &mut evaluations);
                simplex[n] = if ve < vr { (xe, ve) } else { (xr, vr) };
            } else if vr < simplex[n - 1].1 {
                simplex[n] = (xr, vr);
            } else {
                let (xc, vc) = if vr < simplex[n].1 {
                    let xc = along(rho, &worst);
                    let vc = eval(&xc, &mut evaluations);
                    (xc, vc)
                } else {
                    let xc = along(-rho, &worst);
                    let vc = eval(&xc, &mut evaluations);
                    (xc, vc)
                };
                if vc < vr.min(simplex[n].1) {
                    simplex[n] = (xc, vc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        let x: Vec<T> = x0
                            .iter()
                            .zip(&vertex.0)
                            .map(|(&a, &b)| a + sigma * (b - a))
                            .collect();
                        let v = eval(&x, &mut evaluations);
                        *vertex = (x, v);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        if simplex[0].1 <= best_v {
            best_x = simplex[0].0.clone();
            best_v = simplex[0].1;
        }
        if evaluations >= opts.max_evaluations {
            break;
        }
        scale *= T::lit(0.1);
    }
    Minimum { x: best_x, value: best_v, evaluations, converged }
}
