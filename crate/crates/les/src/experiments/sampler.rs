//! Space-time sampling and Gaussian filtering of stored trajectories.
//!
//! The fine-grid reference run is a discrete (t, x) dataset; comparing a
//! filtered model against it requires convolving that dataset with the
//! Gaussian kernel. Gauss–Hermite is unusable here (the data contains modes
//! with ω·σ ≫ 1), so the convolution uses composite Gauss–Legendre panels
//! sized to the kernel width, with Catmull–Rom interpolation between nodes.

use crate::error::{LesError, Result};
use crate::filter::{composite_gl8, gaussian_kernel, FilterSpec};
use crate::solver::Trajectory;

/// Uniformly sampled trajectory with periodic-in-x interpolation.
pub struct TrajectorySampler {
    x0: f64,
    dx: f64,
    /// Count of unique spatial nodes (the stored last node mirrors the first).
    m: usize,
    t0: f64,
    dt_snap: f64,
    frames: Vec<Vec<f64>>,
    periodic: bool,
}

fn catmull_rom(v0: f64, v1: f64, v2: f64, v3: f64, f: f64) -> f64 {
    0.5 * (2.0 * v1
        + (v2 - v0) * f
        + (2.0 * v0 - 5.0 * v1 + 4.0 * v2 - v3) * f * f
        + (3.0 * v1 - v0 - 3.0 * v2 + v3) * f * f * f)
}

impl TrajectorySampler {
    /// Requires uniformly spaced snapshots (stride × dt apart).
    pub fn from_trajectory(traj: &Trajectory, periodic: bool) -> Result<Self> {
        if traj.snapshots.len() < 4 {
            return Err(LesError::InvalidParameter(
                "sampler needs at least 4 snapshots".into(),
            ));
        }
        let dt_snap = traj.times[1] - traj.times[0];
        for w in traj.times.windows(2) {
            if ((w[1] - w[0]) - dt_snap).abs() > 1e-9 * dt_snap {
                return Err(LesError::InvalidParameter(
                    "sampler needs uniformly spaced snapshots".into(),
                ));
            }
        }
        let grid = traj.snapshots[0].grid();
        let n = grid.n()[0];
        let m = if periodic { n - 1 } else { n };
        let frames = traj
            .snapshots
            .iter()
            .map(|s| s.values()[..m].to_vec())
            .collect();
        Ok(Self {
            x0: grid.origin()[0],
            dx: grid.dx(0),
            m,
            t0: traj.times[0],
            dt_snap,
            frames,
            periodic,
        })
    }

    fn x_fetch(&self, frame: &[f64], i: isize) -> f64 {
        if self.periodic {
            frame[i.rem_euclid(self.m as isize) as usize]
        } else {
            frame[i.clamp(0, self.m as isize - 1) as usize]
        }
    }

    fn sample_frame(&self, frame: &[f64], x: f64) -> f64 {
        let p = (x - self.x0) / self.dx;
        let i = p.floor();
        let f = p - i;
        let i = i as isize;
        catmull_rom(
            self.x_fetch(frame, i - 1),
            self.x_fetch(frame, i),
            self.x_fetch(frame, i + 1),
            self.x_fetch(frame, i + 2),
            f,
        )
    }

    /// Interpolated value; clamps t to the stored window.
    pub fn sample(&self, t: f64, x: f64) -> f64 {
        let last = (self.frames.len() - 1) as f64;
        let p = ((t - self.t0) / self.dt_snap).clamp(0.0, last);
        let i = p.floor();
        let f = p - i;
        let i = i as isize;
        let fetch = |k: isize| -> f64 {
            let k = k.clamp(0, self.frames.len() as isize - 1) as usize;
            self.sample_frame(&self.frames[k], x)
        };
        if f == 0.0 {
            return fetch(i);
        }
        catmull_rom(fetch(i - 1), fetch(i), fetch(i + 1), fetch(i + 2), f)
    }

    /// Space-time Gaussian filter of the stored data at (t, x).
    ///
    /// Composite GL-8 panels over ±6σ per axis, normalized by the identical
    /// quadrature of the kernel itself so truncation bias cancels.
    pub fn filtered(&self, spec: &FilterSpec, t: f64, x: f64) -> f64 {
        let sig_t = spec.sigma_t();
        let sig_l = spec.sigma_l();
        let half_t = 6.0 * sig_t;
        let half_l = 6.0 * sig_l;
        let panels = 24;
        let mut num = 0.0;
        let mut den = 0.0;
        // Outer: time offset s; inner: space offset y.
        let mut outer = |s: f64, w_t: f64| {
            let inner_num = composite_gl8(-half_l, half_l, panels, |y| {
                gaussian_kernel(s, &[y], spec) * self.sample(t + s, x + y)
            });
            let inner_den = composite_gl8(-half_l, half_l, panels, |y| {
                gaussian_kernel(s, &[y], spec)
            });
            num += w_t * inner_num;
            den += w_t * inner_den;
        };
        // Manual composite rule over s so both sums share the weights.
        let h = 2.0 * half_t / panels as f64;
        const GL8_N: [f64; 8] = [
            -0.960_289_856_497_536_2,
            -0.796_666_477_413_626_7,
            -0.525_532_409_916_329_0,
            -0.183_434_642_495_649_8,
            0.183_434_642_495_649_8,
            0.525_532_409_916_329_0,
            0.796_666_477_413_626_7,
            0.960_289_856_497_536_2,
        ];
        const GL8_W: [f64; 8] = [
            0.101_228_536_290_376_3,
            0.222_381_034_453_374_5,
            0.313_706_645_877_887_3,
            0.362_683_783_378_362_0,
            0.362_683_783_378_362_0,
            0.313_706_645_877_887_3,
            0.222_381_034_453_374_5,
            0.101_228_536_290_376_3,
        ];
        for p in 0..panels {
            let mid = -half_t + (p as f64 + 0.5) * h;
            for (z, w) in GL8_N.iter().zip(GL8_W) {
                outer(mid + 0.5 * h * z, w * 0.5 * h);
            }
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closures::ModelParams;
    use crate::solver::{run, BcMode, InitialCondition, ModelKind, SolverConfig};
    use std::f64::consts::PI;

    fn constant_trajectory(c: f64) -> Trajectory {
        let mut cfg = SolverConfig::base(
            ModelKind::Plain,
            ModelParams::new(0.01, 0.0, 0.5, 1.0).unwrap(),
        );
        cfg.bc = BcMode::Periodic;
        cfg.initial = InitialCondition::Constant(c);
        cfg.snapshot_stride = 1;
        cfg.t_end = 0.1;
        run(&cfg).unwrap()
    }

    #[test]
    fn sampling_at_nodes_is_exact() {
        let traj = constant_trajectory(1.7);
        let s = TrajectorySampler::from_trajectory(&traj, true).unwrap();
        assert_eq!(s.sample(0.05, 0.3), 1.7);
        assert_eq!(s.sample(0.0, 0.0), 1.7);
    }

    #[test]
    fn filtering_a_constant_returns_it() {
        let traj = constant_trajectory(2.3);
        let s = TrajectorySampler::from_trajectory(&traj, true).unwrap();
        let spec = FilterSpec::one_d(0.05, 6.0, 6.0).unwrap();
        let v = s.filtered(&spec, 0.05, 0.4);
        assert!((v - 2.3).abs() < 1e-12, "{v}");
    }

    #[test]
    fn filtering_matches_closed_form_attenuation() {
        // Build a steady sinusoid trajectory by hand.
        use crate::fields::{Grid, ScalarField};
        use std::sync::Arc;
        let g = Arc::new(Grid::line(0.0, 1.0, 401, 0.001).unwrap());
        let omega = 4.0 * PI;
        let mut times = Vec::new();
        let mut snaps = Vec::new();
        for k in 0..200 {
            times.push(k as f64 * 0.001);
            snaps.push(ScalarField::from_fn(Arc::clone(&g), |x| (omega * x[0]).sin()));
        }
        let traj = Trajectory {
            times,
            snapshots: snaps,
            stats: Default::default(),
        };
        let s = TrajectorySampler::from_trajectory(&traj, true).unwrap();
        let spec = FilterSpec::one_d(0.05, 6.0, 6.0).unwrap();
        let x = 0.37;
        let v = s.filtered(&spec, 0.1, x);
        let exact = spec.attenuation_l(omega) * (omega * x).sin();
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
    }
}
