//! MacCormack time integration of the plain, generalized and filtered models.
//!
//! The classical two-stage scheme: the predictor advances with forward
//! differences inside the advection flux, the corrector re-evaluates at the
//! provisional state with backward differences, and the new state is the
//! average of the old state and the corrected one. Viscous and closure
//! fluxes are central in both stages. Second order in space and time on
//! smooth solutions.

mod rhs;

pub use rhs::{
    filter_forcing, rhs_filtered, rhs_generalized, rhs_plain, AdvectionBias, AdvectionForm,
    ForcingFilterMode,
};
pub(crate) use rhs::{rhs_with_bias, RhsModel};

use std::sync::Arc;

use crate::analytic::{analytic_u, filtered_reference, AnalyticSolutionSpec};
use crate::closures::ModelParams;
use crate::error::{LesError, Result};
use crate::fields::{BoundaryMode, FieldHistory1, Grid1, ScalarField1};
use crate::filter::{FilterOracle, FilterSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Plain,
    Generalized,
    Filtered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcMode {
    /// Wrap indices; the last node mirrors the first.
    Periodic,
    /// Clamp both endpoints to the exact solution each stage.
    DirichletAnalytic,
    /// Clamp both endpoints to the filtered exact solution each stage.
    DirichletFilteredAnalytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// Exact solution sampled at t = 0.
    AnalyticSnapshot,
    /// Brute-force filtered exact solution at t = 0.
    FilteredAnalyticSnapshot,
    Constant(f64),
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub domain: (f64, f64),
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    pub bc: BcMode,
    pub model: ModelKind,
    pub params: ModelParams,
    pub filter: Option<FilterSpec>,
    pub advection: AdvectionForm,
    pub forcing: Option<crate::analytic::ForcingSpec>,
    pub forcing_filter: ForcingFilterMode,
    pub initial: InitialCondition,
    pub analytic: Option<AnalyticSolutionSpec>,
    pub cfl_warn_threshold: f64,
    pub snapshot_stride: usize,
    /// Gauss–Hermite nodes for filtered-analytic boundary/initial values.
    pub quad_nodes: usize,
}

impl SolverConfig {
    /// Baseline configuration on [0, 1] with the benchmark steps
    /// Δx = 0.1, Δt = 0.01.
    pub fn base(model: ModelKind, params: ModelParams) -> Self {
        Self {
            domain: (0.0, 1.0),
            dx: 0.1,
            dt: 0.01,
            t_end: 1.0,
            bc: BcMode::DirichletAnalytic,
            model,
            params,
            filter: None,
            advection: AdvectionForm::Conservative,
            forcing: None,
            forcing_filter: ForcingFilterMode::ExactGaussian,
            initial: InitialCondition::AnalyticSnapshot,
            analytic: None,
            cfl_warn_threshold: 1.0,
            snapshot_stride: usize::MAX,
            quad_nodes: 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dx > 0.0) || !(self.dt > 0.0) {
            return Err(LesError::InvalidParameter(format!(
                "dx and dt must be > 0 (dx={}, dt={})",
                self.dx, self.dt
            )));
        }
        if self.t_end < 0.0 {
            return Err(LesError::InvalidParameter("t_end must be >= 0".into()));
        }
        if !(self.domain.1 > self.domain.0) {
            return Err(LesError::InvalidParameter("degenerate domain".into()));
        }
        if self.model == ModelKind::Filtered {
            let spec = self.filter.as_ref().ok_or_else(|| {
                LesError::InvalidParameter("filtered model requires a filter spec".into())
            })?;
            if spec.spatial_dim != 1 {
                return Err(LesError::InvalidParameter(
                    "1D solver needs a 1D filter spec".into(),
                ));
            }
            self.params.require_half_exponent()?;
        }
        let needs_analytic = matches!(
            self.bc,
            BcMode::DirichletAnalytic | BcMode::DirichletFilteredAnalytic
        ) || matches!(
            self.initial,
            InitialCondition::AnalyticSnapshot | InitialCondition::FilteredAnalyticSnapshot
        );
        if needs_analytic && self.analytic.is_none() {
            return Err(LesError::InvalidParameter(
                "analytic solution spec required by the configured BC/IC".into(),
            ));
        }
        if matches!(self.bc, BcMode::DirichletFilteredAnalytic)
            || matches!(self.initial, InitialCondition::FilteredAnalyticSnapshot)
        {
            if self.filter.is_none() {
                return Err(LesError::InvalidParameter(
                    "filtered-analytic BC/IC requires a filter spec".into(),
                ));
            }
        }
        Ok(())
    }

    fn n_points(&self) -> Result<usize> {
        let extent = self.domain.1 - self.domain.0;
        let n = (extent / self.dx).round() as usize + 1;
        if n < 3 {
            return Err(LesError::InvalidParameter("fewer than 3 grid points".into()));
        }
        let dx_exact = extent / (n - 1) as f64;
        if (dx_exact - self.dx).abs() > 1e-9 * self.dx {
            return Err(LesError::InvalidParameter(format!(
                "dx {} does not evenly divide the domain extent {extent}",
                self.dx
            )));
        }
        Ok(n)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunStats {
    pub steps: usize,
    pub max_cfl: f64,
    pub cfl_warnings: usize,
}

/// Snapshots of one simulation at a configurable stride.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<ScalarField1>,
    pub stats: RunStats,
}

impl Trajectory {
    pub fn last(&self) -> (&f64, &ScalarField1) {
        (self.times.last().unwrap(), self.snapshots.last().unwrap())
    }

    /// Snapshot nearest to `t`.
    pub fn at_time(&self, t: f64) -> (&f64, &ScalarField1) {
        let mut best = 0;
        for (k, tk) in self.times.iter().enumerate() {
            if (tk - t).abs() < (self.times[best] - t).abs() {
                best = k;
            }
        }
        (&self.times[best], &self.snapshots[best])
    }
}

/// A configured solver with its grid and cached filter oracle.
pub struct Solver {
    cfg: SolverConfig,
    grid: Arc<Grid1>,
    stencil_bc: BoundaryMode,
    oracle: Option<FilterOracle>,
    forcing: Option<crate::analytic::ForcingSpec>,
}

impl Solver {
    pub fn new(cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.n_points()?;
        let grid = Arc::new(Grid1::new(
            [cfg.domain.0],
            [cfg.domain.1 - cfg.domain.0],
            [n],
            cfg.dt,
        )?);
        let stencil_bc = match cfg.bc {
            BcMode::Periodic => BoundaryMode::Periodic,
            _ => BoundaryMode::OneSided,
        };
        let oracle = cfg
            .filter
            .as_ref()
            .map(|spec| FilterOracle::new(spec.clone(), cfg.quad_nodes));
        // Pre-filter the forcing once for filtered runs.
        let forcing = cfg.forcing.as_ref().map(|f| {
            if cfg.model == ModelKind::Filtered {
                filter_forcing(f, cfg.filter.as_ref().unwrap(), cfg.forcing_filter)
            } else {
                f.clone()
            }
        });
        Ok(Self { cfg, grid, stencil_bc, oracle, forcing })
    }

    pub fn grid(&self) -> &Arc<Grid1> {
        &self.grid
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn initial_field(&self) -> Result<ScalarField1> {
        let grid = Arc::clone(&self.grid);
        match self.cfg.initial {
            InitialCondition::Constant(c) => Ok(ScalarField1::from_fn(grid, |_| c)),
            InitialCondition::AnalyticSnapshot => {
                let spec = self.cfg.analytic.as_ref().unwrap();
                let mut vals = Vec::with_capacity(grid.n_total());
                for i in 0..grid.n_total() {
                    let x = grid.coord(grid.unflatten(i))[0];
                    vals.push(analytic_u(0.0, x, spec)?);
                }
                ScalarField1::from_values(grid, vals)
            }
            InitialCondition::FilteredAnalyticSnapshot => {
                let spec = self.cfg.analytic.as_ref().unwrap();
                let oracle = self.oracle.as_ref().unwrap();
                let mut vals = Vec::with_capacity(grid.n_total());
                for i in 0..grid.n_total() {
                    let x = grid.coord(grid.unflatten(i))[0];
                    vals.push(filtered_reference(spec, oracle, 0.0, x)?);
                }
                ScalarField1::from_values(grid, vals)
            }
        }
    }

    fn boundary_values(&self, t: f64) -> Result<Option<(f64, f64)>> {
        match self.cfg.bc {
            BcMode::Periodic => Ok(None),
            BcMode::DirichletAnalytic => {
                let spec = self.cfg.analytic.as_ref().unwrap();
                Ok(Some((
                    analytic_u(t, self.cfg.domain.0, spec)?,
                    analytic_u(t, self.cfg.domain.1, spec)?,
                )))
            }
            BcMode::DirichletFilteredAnalytic => {
                let spec = self.cfg.analytic.as_ref().unwrap();
                let oracle = self.oracle.as_ref().unwrap();
                Ok(Some((
                    filtered_reference(spec, oracle, t, self.cfg.domain.0)?,
                    filtered_reference(spec, oracle, t, self.cfg.domain.1)?,
                )))
            }
        }
    }

    fn apply_bc(&self, u: &mut ScalarField1, clamp: Option<(f64, f64)>) {
        let n = u.values().len();
        match self.cfg.bc {
            BcMode::Periodic => {
                u.values_mut()[n - 1] = u.values()[0];
            }
            _ => {
                let (l, r) = clamp.expect("Dirichlet clamp values missing");
                u.values_mut()[0] = l;
                u.values_mut()[n - 1] = r;
            }
        }
    }

    fn rhs(
        &self,
        prev: Option<&ScalarField1>,
        u: &ScalarField1,
        t: f64,
        bias: AdvectionBias,
    ) -> Result<ScalarField1> {
        let model = match self.cfg.model {
            ModelKind::Plain => RhsModel::Plain { nu: self.cfg.params.nu },
            ModelKind::Generalized => RhsModel::Generalized { p: &self.cfg.params },
            ModelKind::Filtered => RhsModel::Filtered {
                p: &self.cfg.params,
                spec: self.cfg.filter.as_ref().unwrap(),
            },
        };
        rhs_with_bias(
            prev,
            u,
            &model,
            self.forcing.as_ref(),
            t,
            self.stencil_bc,
            self.cfg.advection,
            bias,
        )
    }

    /// One MacCormack step from the newest history level at time `t`.
    ///
    /// Returns the new state and the advective CFL number max|u|·dt/dx.
    pub fn step(&self, hist: &FieldHistory1, t: f64) -> Result<(ScalarField1, f64)> {
        let (_, u) = hist
            .newest()
            .ok_or(LesError::InsufficientHistory { needed: 1, have: 0 })?;
        let prev = hist.level(1).map(|(_, f)| f);
        let dt = self.cfg.dt;
        let cfl = u.max_abs() * dt / self.cfg.dx;
        let clamp = self.boundary_values(t + dt)?;

        // Predictor: forward advection differences.
        let r1 = self.rhs(prev, u, t, AdvectionBias::Forward)?;
        let mut star = u.zip_map(&r1, |a, b| a + dt * b)?;
        self.apply_bc(&mut star, clamp);

        // Corrector: backward differences at the provisional state; the
        // closure time derivative now spans (u, u*).
        let r2 = self.rhs(Some(u), &star, t + dt, AdvectionBias::Backward)?;
        let corrected = star.zip_map(&r2, |a, b| a + dt * b)?;
        let mut next = u.zip_map(&corrected, |a, b| 0.5 * (a + b))?;
        self.apply_bc(&mut next, clamp);
        Ok((next, cfl))
    }

    pub fn run(&self) -> Result<Trajectory> {
        let steps = (self.cfg.t_end / self.cfg.dt).round() as usize;
        if (steps as f64 * self.cfg.dt - self.cfg.t_end).abs() > 1e-9 * self.cfg.dt.max(1e-300) {
            return Err(LesError::InvalidParameter(format!(
                "t_end {} is not a multiple of dt {}",
                self.cfg.t_end, self.cfg.dt
            )));
        }
        let u0 = self.initial_field()?;
        let mut hist = FieldHistory1::seeded(u0.clone(), 0.0, 3)?;
        let mut traj = Trajectory {
            times: vec![0.0],
            snapshots: vec![u0],
            stats: RunStats::default(),
        };
        for k in 0..steps {
            let t = k as f64 * self.cfg.dt;
            let (next, cfl) = self.step(&hist, t)?;
            traj.stats.max_cfl = traj.stats.max_cfl.max(cfl);
            if cfl > self.cfg.cfl_warn_threshold {
                traj.stats.cfl_warnings += 1;
            }
            if !next.all_finite() {
                return Err(LesError::BlowUp {
                    step: k + 1,
                    time: t + self.cfg.dt,
                    max_abs_u: hist.newest().unwrap().1.max_abs(),
                    cfl,
                });
            }
            let t_next = (k + 1) as f64 * self.cfg.dt;
            hist.push(t_next, next.clone())?;
            let is_last = k + 1 == steps;
            if is_last || (k + 1) % self.cfg.snapshot_stride.max(1) == 0 {
                traj.times.push(t_next);
                traj.snapshots.push(next);
            }
            traj.stats.steps = k + 1;
        }
        Ok(traj)
    }
}

/// One MacCormack step as a standalone operation.
pub fn maccormack_step(
    hist: &FieldHistory1,
    cfg: &SolverConfig,
    t: f64,
) -> Result<(ScalarField1, f64)> {
    Solver::new(cfg.clone())?.step(hist, t)
}

/// Configure and run a simulation in one call.
pub fn run(cfg: &SolverConfig) -> Result<Trajectory> {
    Solver::new(cfg.clone())?.run()
}
