//! Cyclic and parallel proximal point algorithms for
//! `F(x) + α Σ G_ij(x) + α Σ H_ij(x)`.
//!
//! Both start at `x = f` (or a supplied initial iterate) and run a fixed
//! number of iterations with step sizes `λ_r = c · r^{-ω}`.

use serde::{Deserialize, Serialize};

use crate::averaging::{approx_mean5, karcher_mean, MeanConfig};
use crate::error::{Error, Result};
use crate::image::{require_same_shape, Image};
use crate::manifold::Manifold;
use crate::par::{map_indexed, Execution};
use crate::prox::{coupling_step, data_step, prox_data, prox_pair, DataTerm, Regularizer};

/// `λ_r = c · r^{-ω}`; square-summable but not summable for ω ∈ (0.5, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub c: f64,
    pub omega: f64,
}

impl Default for LambdaSchedule {
    fn default() -> Self {
        Self { c: 3.0, omega: 0.95 }
    }
}

impl LambdaSchedule {
    /// `c = 0` is accepted and freezes every iterate at the start point.
    pub fn new(c: f64, omega: f64) -> Result<Self> {
        let s = Self { c, omega };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return Err(Error::Argument(format!("lambda c must be nonnegative, got {}", self.c)));
        }
        if !(self.omega > 0.5 && self.omega <= 1.0) {
            return Err(Error::Argument(format!(
                "lambda omega must lie in (0.5, 1], got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Step size of iteration `r ≥ 1`.
    pub fn at(&self, r: usize) -> f64 {
        self.c * (r as f64).powf(-self.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Cyclic,
    /// Parallel proxes averaged by the intrinsic mean.
    Parallel,
    /// Parallel proxes averaged by [`approx_mean5`].
    ParallelFast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseParams {
    pub data_term: DataTerm,
    pub regularizer: Regularizer,
    pub alpha: f64,
    pub schedule: LambdaSchedule,
    pub iterations: usize,
    pub algorithm: Algorithm,
    pub mean: MeanConfig,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for DenoiseParams {
    fn default() -> Self {
        Self {
            data_term: DataTerm::L2,
            regularizer: Regularizer::Tv,
            alpha: 0.1,
            schedule: LambdaSchedule::default(),
            iterations: 100,
            algorithm: Algorithm::Cyclic,
            mean: MeanConfig::default(),
            execution: Execution::default(),
        }
    }
}

impl DenoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Argument(format!("alpha must be nonnegative, got {}", self.alpha)));
        }
        if self.iterations == 0 {
            return Err(Error::Argument("iterations must be at least 1".into()));
        }
        self.schedule.validate()?;
        self.mean.validate()
    }

    /// Iterations between two functional evaluations in the trace.
    pub fn trace_stride(&self) -> usize {
        (self.iterations / 100).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<P> {
    pub output: Image<P>,
    pub trace: Vec<TracePoint>,
    pub iterations_run: usize,
    /// Pixels where the intrinsic mean did not converge and the five-point
    /// approximation was used instead (parallel solver only).
    pub mean_fallbacks: usize,
}

/// Value of the objective: data term plus α times the horizontal and
/// vertical coupling terms.
pub fn functional_value<M: Manifold>(
    m: &M,
    x: &Image<M::Point>,
    f: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<f64> {
    require_same_shape(x, f)?;
    let data: f64 = x
        .pixels()
        .iter()
        .zip(f.pixels())
        .map(|(a, b)| params.data_term.penalty(m.dist(a, b)))
        .sum();
    let (rows, cols) = (x.rows(), x.cols());
    let mut coupling = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                coupling += params.regularizer.penalty(m.dist(x.get(r, c), x.get(r, c + 1)));
            }
            if r + 1 < rows {
                coupling += params.regularizer.penalty(m.dist(x.get(r, c), x.get(r + 1, c)));
            }
        }
    }
    Ok(data + params.alpha * coupling)
}

/// Runs the solver selected by `params.algorithm`, starting at `x = f`.
pub fn denoise<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    denoise_from(m, f, f, params)
}

/// Like [`denoise`] with an explicit initial iterate.
pub fn denoise_from<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    start: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    match params.algorithm {
        Algorithm::Cyclic => cyclic_from(m, f, start, params),
        Algorithm::Parallel | Algorithm::ParallelFast => parallel_from(m, f, start, params),
    }
}

struct Tracer {
    stride: usize,
    last: usize,
    points: Vec<TracePoint>,
}

impl Tracer {
    fn new(params: &DenoiseParams) -> Self {
        Self { stride: params.trace_stride(), last: params.iterations, points: Vec::new() }
    }

    fn record<M: Manifold>(
        &mut self,
        r: usize,
        m: &M,
        x: &Image<M::Point>,
        f: &Image<M::Point>,
        params: &DenoiseParams,
    ) -> Result<()> {
        if r.is_multiple_of(self.stride) || r == self.last {
            let value = functional_value(m, x, f, params)?;
            self.points.push(TracePoint { iteration: r, value });
        }
        Ok(())
    }
}

/// Cyclic proximal point algorithm: per iteration the data prox, then every
/// horizontal pair in row-major order, then every vertical pair, each prox
/// seeing the result of the previous one.
pub fn cyclic_ppa<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    cyclic_from(m, f, f, params)
}

fn cyclic_from<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    start: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    params.validate()?;
    require_same_shape(f, start)?;
    let (rows, cols) = (f.rows(), f.cols());
    let mut x = start.clone();
    let mut tracer = Tracer::new(params);

    for r in 1..=params.iterations {
        let lambda = params.schedule.at(r);
        let step = lambda * params.alpha;
        x = prox_data(m, &x, f, lambda, params.data_term, params.execution)?;

        let px = x.pixels_mut();
        for i in 0..rows {
            for j in 0..cols.saturating_sub(1) {
                let (a, b) = (i * cols + j, i * cols + j + 1);
                sweep_pair(m, px, a, b, step, params.regularizer)
                    .map_err(|e| e.at("horizontal sweep", i, j))?;
            }
        }
        for i in 0..rows.saturating_sub(1) {
            for j in 0..cols {
                let (a, b) = (i * cols + j, (i + 1) * cols + j);
                sweep_pair(m, px, a, b, step, params.regularizer)
                    .map_err(|e| e.at("vertical sweep", i, j))?;
            }
        }
        tracer.record(r, m, &x, f, params)?;
    }

    Ok(SolveReport {
        output: x,
        trace: tracer.points,
        iterations_run: params.iterations,
        mean_fallbacks: 0,
    })
}

fn sweep_pair<M: Manifold>(
    m: &M,
    px: &mut [M::Point],
    a: usize,
    b: usize,
    step: f64,
    reg: Regularizer,
) -> Result<()> {
    let t = reg.step_length(step, m.dist(&px[a], &px[b]));
    if t == 0.0 {
        return Ok(());
    }
    let (na, nb) = prox_pair(m, &px[a], &px[b], t)?;
    px[a] = na;
    px[b] = nb;
    Ok(())
}

/// Parallel proximal point algorithm: every pixel averages the five proxes
/// (data, right, left, down, up neighbour) computed from the previous
/// iterate. Pixel updates are independent, so the result does not depend
/// on how many workers run them.
pub fn parallel_ppa<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    parallel_from(m, f, f, params)
}

fn parallel_from<M: Manifold>(
    m: &M,
    f: &Image<M::Point>,
    start: &Image<M::Point>,
    params: &DenoiseParams,
) -> Result<SolveReport<M::Point>> {
    params.validate()?;
    require_same_shape(f, start)?;
    let exact = match params.algorithm {
        Algorithm::Parallel => true,
        Algorithm::ParallelFast => false,
        Algorithm::Cyclic => {
            return Err(Error::Argument("parallel solver called with the cyclic algorithm".into()))
        }
    };
    let mut x = start.clone();
    let mut tracer = Tracer::new(params);
    let mut fallbacks = 0;

    for r in 1..=params.iterations {
        let lambda = params.schedule.at(r);
        let prev = &x;
        let updated = map_indexed(prev.len(), params.execution, |i| {
            let (row, col) = prev.position(i);
            pixel_update(m, prev, f, row, col, lambda, params, exact)
                .map_err(|e| e.at("parallel update", row, col))
        });
        let mut next = Vec::with_capacity(updated.len());
        for u in updated {
            let (p, fell_back) = u?;
            fallbacks += usize::from(fell_back);
            next.push(p);
        }
        x = Image::new(x.shape(), next)?;
        tracer.record(r, m, &x, f, params)?;
    }

    Ok(SolveReport {
        output: x,
        trace: tracer.points,
        iterations_run: params.iterations,
        mean_fallbacks: fallbacks,
    })
}

#[allow(clippy::too_many_arguments)]
fn pixel_update<M: Manifold>(
    m: &M,
    x: &Image<M::Point>,
    f: &Image<M::Point>,
    row: usize,
    col: usize,
    lambda: f64,
    params: &DenoiseParams,
    exact: bool,
) -> Result<(M::Point, bool)> {
    let here = x.get(row, col);
    let step = lambda * params.alpha;
    let reg = params.regularizer;
    // absent neighbours contribute the identity prox
    let toward = |nr: Option<usize>, nc: Option<usize>, here_first: bool| -> Result<M::Point> {
        match (nr, nc) {
            (Some(nr), Some(nc)) if nr < x.rows() && nc < x.cols() => {
                coupling_step(m, here, x.get(nr, nc), here_first, step, reg)
            }
            _ => Ok(here.clone()),
        }
    };
    let z = [
        data_step(m, here, f.get(row, col), lambda, params.data_term)?,
        toward(Some(row), Some(col + 1), true)?,
        toward(Some(row), col.checked_sub(1), false)?,
        toward(Some(row + 1), Some(col), true)?,
        toward(row.checked_sub(1), Some(col), false)?,
    ];
    if !exact {
        return Ok((approx_mean5(m, &z)?, false));
    }
    match karcher_mean(m, &z, &params.mean) {
        Ok(p) => Ok((p, false)),
        Err(Error::NonConverged { .. }) => Ok((approx_mean5(m, &z)?, true)),
        Err(e) => Err(e),
    }
}
