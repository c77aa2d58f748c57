//! Limited-memory BFGS with a bracketing weak-Wolfe line search.

use std::collections::VecDeque;

use crate::optimize::Objective;

const MEMORY: usize = 10;
const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LINE_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    GradientTolerance,
    MaxIterations,
    LineSearchFailed,
    NoProgress,
}

#[derive(Debug, Clone)]
pub(crate) struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub stop: Stop,
    /// objective after every accepted step, starting with the initial value
    pub trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(g: &[f64]) -> f64 {
    g.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn evaluate<O: Objective + ?Sized>(obj: &O, x: &[f64]) -> Option<(f64, Vec<f64>)> {
    match obj.value_and_grad(x) {
        Ok((f, g)) if f.is_finite() && g.iter().all(|v| v.is_finite()) => Some((f, g)),
        _ => None,
    }
}

/// Minimizes from `x0`, which must have a finite value and gradient.
pub(crate) fn minimize_local<O: Objective + ?Sized>(
    obj: &O,
    x0: Vec<f64>,
    f0: f64,
    g0: Vec<f64>,
    max_iters: usize,
    grad_tol: f64,
) -> LocalResult {
    let n = x0.len();
    let mut x = x0;
    let mut f = f0;
    let mut g = g0;
    let mut trace = vec![f];
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(MEMORY);
    let mut iterations = 0;
    let mut stalled = 0;

    let stop = loop {
        if inf_norm(&g) < grad_tol {
            break Stop::GradientTolerance;
        }
        if iterations >= max_iters {
            break Stop::MaxIterations;
        }

        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let scale = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v *= scale);
        } else {
            // first step: unit length in the steepest direction
            let gn = dot(&g, &g).sqrt();
            d.iter_mut().for_each(|v| *v /= gn.max(1.0));
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            let gn = dot(&g, &g).sqrt();
            d.iter_mut().for_each(|v| *v /= gn.max(1.0));
            slope = dot(&g, &d);
        }

        // bracketing search for a weak-Wolfe step
        let mut lo = 0.0;
        let mut hi = f64::INFINITY;
        let mut t = 1.0;
        let mut accepted: Option<(Vec<f64>, f64, Vec<f64>)> = None;
        let mut armijo_fallback: Option<(Vec<f64>, f64, Vec<f64>)> = None;
        for _ in 0..MAX_LINE_STEPS {
            let xt: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            match evaluate(obj, &xt) {
                Some((ft, gt)) if ft <= f + C1 * t * slope => {
                    if dot(&gt, &d) < C2 * slope {
                        lo = t;
                        armijo_fallback = Some((xt, ft, gt));
                    } else {
                        accepted = Some((xt, ft, gt));
                        break;
                    }
                }
                _ => hi = t,
            }
            t = if hi.is_finite() { 0.5 * (lo + hi) } else { 2.0 * lo.max(0.5) };
        }
        let Some((xn, fn_, gn)) = accepted.or(armijo_fallback) else {
            break Stop::LineSearchFailed;
        };

        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if history.len() == MEMORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }

        let improvement = f - fn_;
        x = xn;
        f = fn_;
        g = gn;
        iterations += 1;
        trace.push(f);

        if improvement <= 1e-15 * f.abs().max(1e-300) {
            stalled += 1;
            if stalled >= 5 {
                break Stop::NoProgress;
            }
        } else {
            stalled = 0;
        }
    };
    debug_assert_eq!(x.len(), n);
    LocalResult {
        x,
        value: f,
        iterations,
        stop,
        trace,
    }
}
