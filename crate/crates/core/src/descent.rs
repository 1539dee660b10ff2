//! Multistart damped Gauss-Newton descent for 3-component residuals over
//! SO(3), evaluated through the exponential chart re-centered at every
//! iterate. Shared by the inscription and cover solvers.

use crate::rotations::{exp, Rotation, TangentVector, Vec3};
use nalgebra::Matrix3;
use rayon::prelude::*;

/// Finite-difference step for the chart Jacobian.
const FD_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub(crate) struct DescentOutcome {
    pub rotation: Rotation,
    pub residual_norm: f64,
    pub iterations: usize,
}

fn chart_dir(k: usize, h: f64) -> TangentVector {
    match k {
        0 => TangentVector::new(h, 0.0, 0.0),
        1 => TangentVector::new(0.0, h, 0.0),
        _ => TangentVector::new(0.0, 0.0, h),
    }
}

/// Refines a single start until the residual norm drops below `stop_tol`,
/// the step stalls, or `max_iter` is reached.
pub(crate) fn refine<F>(f: &F, start: &Rotation, stop_tol: f64, max_iter: usize) -> DescentOutcome
where
    F: Fn(&Rotation) -> Vec3,
{
    let mut a = *start;
    let mut r = f(&a);
    let mut norm = r.norm();
    let mut damping = 1e-4;
    let mut iterations = 0;

    while norm > stop_tol && iterations < max_iter {
        iterations += 1;
        // Central-difference Jacobian in the chart at the current iterate.
        let mut j = Matrix3::<f64>::zeros();
        for k in 0..3 {
            let plus = f(&a.compose(&exp(&chart_dir(k, FD_STEP))));
            let minus = f(&a.compose(&exp(&chart_dir(k, -FD_STEP))));
            let col = (plus - minus) / (2.0 * FD_STEP);
            j.set_column(k, &col);
        }
        let jtj = j.transpose() * j;
        let jtr = j.transpose() * r;

        let mut accepted = false;
        for _ in 0..12 {
            let lhs = jtj + Matrix3::identity() * damping;
            let Some(inv) = lhs.try_inverse() else {
                damping *= 10.0;
                continue;
            };
            let delta = -(inv * jtr);
            let trial = a.compose(&exp(&TangentVector::new(delta.x, delta.y, delta.z)));
            let trial_r = f(&trial);
            let trial_norm = trial_r.norm();
            if trial_norm < norm {
                a = trial;
                r = trial_r;
                norm = trial_norm;
                damping = (damping / 3.0).max(1e-14);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if !accepted {
            break; // stalled: no damped step improves the residual
        }
    }

    DescentOutcome {
        rotation: a,
        residual_norm: norm,
        iterations,
    }
}

/// Runs [`refine`] from every start in parallel. The output preserves the
/// input order, so the caller's merge is deterministic regardless of the
/// thread schedule.
pub(crate) fn multistart<F>(
    f: &F,
    starts: &[Rotation],
    stop_tol: f64,
    max_iter: usize,
) -> Vec<DescentOutcome>
where
    F: Fn(&Rotation) -> Vec3 + Sync,
{
    starts
        .par_iter()
        .map(|s| refine(f, s, stop_tol, max_iter))
        .collect()
}
