use std::collections::BTreeMap;
use std::fmt;

use super::{OdeError, OdeSystem, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Dormand–Prince 5(4) with embedded error control and dense output.
    AdaptiveRk45,
    /// Classic fourth-order Runge–Kutta with a fixed step.
    FixedRk4,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::AdaptiveRk45 => "adaptive-rk45",
            Method::FixedRk4 => "fixed-rk4",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = OdeError;
    fn from_str(s: &str) -> Result<Self, OdeError> {
        match s {
            "adaptive-rk45" | "rk45" => Ok(Method::AdaptiveRk45),
            "fixed-rk4" | "rk4" => Ok(Method::FixedRk4),
            other => Err(OdeError::Config(format!("unknown method {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegratorConfig<F> {
    pub method: Method,
    pub abs_tol: F,
    pub rel_tol: F,
    /// Largest step for the adaptive method; the span length when `None`.
    pub max_step: Option<F>,
    /// First trial step (adaptive) or the step (fixed).
    pub initial_step: F,
    pub span: (F, F),
    /// Extra output points, evaluated by interpolation.
    pub grid: Vec<F>,
    pub max_steps: usize,
}

impl<F: Real> Default for IntegratorConfig<F> {
    fn default() -> Self {
        let c = |v: f64| F::from(v).expect("representable");
        IntegratorConfig {
            method: Method::AdaptiveRk45,
            abs_tol: c(1e-9),
            rel_tol: c(1e-9),
            max_step: None,
            initial_step: c(1e-3),
            span: (F::zero(), c(10.0)),
            grid: Vec::new(),
            max_steps: 10_000_000,
        }
    }
}

impl<F: Real> IntegratorConfig<F> {
    /// Evenly spaced grid of `points` values covering the span.
    pub fn with_uniform_grid(mut self, points: usize) -> Self {
        let (a, b) = self.span;
        let last = F::from(points.max(2) - 1).expect("small");
        self.grid = (0..points.max(2))
            .map(|i| a + (b - a) * F::from(i).expect("small") / last)
            .collect();
        self
    }

    fn validate(&self) -> Result<(), OdeError> {
        let (a, b) = self.span;
        if !(a.is_finite() && b.is_finite()) || a == b {
            return Err(OdeError::Config("span must be finite and non-degenerate".into()));
        }
        let positive = |v: F| v > F::zero();
        if !(positive(self.abs_tol) && positive(self.rel_tol)) {
            return Err(OdeError::Config("tolerances must be positive".into()));
        }
        if !positive(self.initial_step) || self.max_step.is_some_and(|m| !positive(m)) {
            return Err(OdeError::Config("steps must be positive".into()));
        }
        Ok(())
    }
}

/// Samples of a numeric solution and how they were produced.
#[derive(Clone, Debug)]
pub struct Trajectory<F> {
    /// Column names: independent variable, then each state component.
    pub names: Vec<String>,
    /// Accepted steps, starting at the initial condition.
    pub samples: Vec<(F, Vec<F>)>,
    /// Interpolated values at the requested grid points reached.
    pub grid: Vec<(F, Vec<F>)>,
    pub method: Method,
    pub abs_tol: F,
    pub rel_tol: F,
    pub initial_step: F,
    pub span: (F, F),
    pub parameters: BTreeMap<String, F>,
    pub accepted: usize,
    pub rejected: usize,
    /// Why integration stopped early, if it did.
    pub truncated: Option<String>,
    /// Free-form labels carried into output files.
    pub labels: BTreeMap<String, String>,
}

impl<F: Real> Trajectory<F> {
    /// Grid samples when a grid was requested, otherwise the step samples.
    pub fn rows(&self) -> &[(F, Vec<F>)] {
        if self.grid.is_empty() {
            &self.samples
        } else {
            &self.grid
        }
    }

    pub fn last(&self) -> Option<&(F, Vec<F>)> {
        self.samples.last()
    }

    pub fn reached_end(&self) -> bool {
        self.truncated.is_none()
    }
}

fn c<F: Real>(v: f64) -> F {
    F::from(v).expect("representable")
}

fn axpy<F: Real>(y: &[F], terms: &[(F, &[F])], h: F) -> Vec<F> {
    let mut out = y.to_vec();
    for (a, k) in terms {
        if *a == F::zero() {
            continue;
        }
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o = *o + h * *a * *ki;
        }
    }
    out
}

fn finite<F: Real>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `sys` from `ic` over `cfg.span` (either direction).
pub fn integrate<F: Real>(sys: &OdeSystem<F>, ic: &[F], cfg: &IntegratorConfig<F>) -> Result<Trajectory<F>, OdeError> {
    cfg.validate()?;
    let d = sys.dimension();
    if ic.len() != d {
        return Err(OdeError::Dimension {
            expected: d,
            got: ic.len(),
        });
    }
    let mut f0 = vec![F::zero(); d];
    sys.eval(cfg.span.0, ic, &mut f0);
    if !finite(&f0) {
        return Err(OdeError::NotFinite(format!("{}", cfg.span.0)));
    }
    let mut traj = Trajectory {
        names: sys.names.clone(),
        samples: vec![(cfg.span.0, ic.to_vec())],
        grid: Vec::new(),
        method: cfg.method,
        abs_tol: cfg.abs_tol,
        rel_tol: cfg.rel_tol,
        initial_step: cfg.initial_step,
        span: cfg.span,
        parameters: sys.parameters.clone(),
        accepted: 0,
        rejected: 0,
        truncated: None,
        labels: BTreeMap::new(),
    };
    let mut grid = GridCursor::new(&cfg.grid, cfg.span);
    match cfg.method {
        Method::AdaptiveRk45 => dopri(sys, f0, cfg, &mut traj, &mut grid),
        Method::FixedRk4 => rk4(sys, f0, cfg, &mut traj, &mut grid),
    }
    Ok(traj)
}

/// Requested output points in integration order.
struct GridCursor<F> {
    points: Vec<F>,
    next: usize,
    dir: F,
}

impl<F: Real> GridCursor<F> {
    fn new(grid: &[F], (a, b): (F, F)) -> Self {
        let dir = (b - a).signum();
        let mut points: Vec<F> = grid
            .iter()
            .copied()
            .filter(|x| (*x - a) * dir >= F::zero() && (b - *x) * dir >= F::zero())
            .collect();
        points.sort_by(|x, y| ((*x - *y) * dir).partial_cmp(&F::zero()).expect("finite grid"));
        GridCursor { points, next: 0, dir }
    }

    /// Emits every pending point up to `x1` using `interp`.
    fn emit(&mut self, x1: F, out: &mut Vec<(F, Vec<F>)>, interp: impl Fn(F) -> Vec<F>) {
        while let Some(&g) = self.points.get(self.next) {
            if (g - x1) * self.dir > F::zero() {
                break;
            }
            out.push((g, interp(g)));
            self.next += 1;
        }
    }
}

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
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
/// Dense-output coefficients of the continuous extension.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

fn dopri<F: Real>(
    sys: &OdeSystem<F>,
    mut f: Vec<F>,
    cfg: &IntegratorConfig<F>,
    traj: &mut Trajectory<F>,
    grid: &mut GridCursor<F>,
) {
    let d = sys.dimension();
    let (a, b) = cfg.span;
    let len = (b - a).abs();
    let dir = (b - a).signum();
    let max_step = cfg.max_step.unwrap_or(len);
    let min_step = c::<F>(1e-14) * len;
    let mut h = cfg.initial_step.min(max_step);
    let mut x = a;
    let mut y = traj.samples[0].1.clone();
    grid.emit(x, &mut traj.grid, |_| y.clone());
    let mut steps = 0usize;
    loop {
        let remaining = (b - x) * dir;
        if remaining <= F::zero() {
            break;
        }
        if steps >= cfg.max_steps {
            traj.truncated = Some(format!("step limit reached at {x}"));
            break;
        }
        steps += 1;
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let hs = step * dir;
        let mut k: Vec<Vec<F>> = vec![f.clone()];
        for (i, row) in A.iter().enumerate() {
            let terms: Vec<(F, &[F])> = row[..=i]
                .iter()
                .zip(k.iter())
                .map(|(w, ki)| (c::<F>(*w), ki.as_slice()))
                .collect();
            let yi = axpy(&y, &terms, hs);
            let mut ki = vec![F::zero(); d];
            sys.eval(x + c::<F>(C[i]) * hs, &yi, &mut ki);
            k.push(ki);
        }
        let y1 = axpy(
            &y,
            &A[5]
                .iter()
                .zip(k.iter())
                .map(|(w, ki)| (c::<F>(*w), ki.as_slice()))
                .collect::<Vec<_>>(),
            hs,
        );
        let mut err = F::zero();
        for i in 0..d {
            let e: F = E
                .iter()
                .zip(k.iter())
                .fold(F::zero(), |acc, (w, ki)| acc + c::<F>(*w) * ki[i])
                * hs;
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y1[i].abs());
            err = err + (e / sc) * (e / sc);
        }
        err = (err / F::from(d).expect("small")).sqrt();
        let ok = err.is_finite() && finite(&y1) && finite(&k[6]);
        if ok && err <= F::one() {
            let x1 = if last { b } else { x + hs };
            if x1 == x {
                traj.truncated = Some(format!("step underflow at {x}"));
                break;
            }
            let r1 = y.clone();
            let r2: Vec<F> = y1.iter().zip(&y).map(|(p, q)| *p - *q).collect();
            let r3: Vec<F> = k[0].iter().zip(&r2).map(|(k1, r)| hs * *k1 - *r).collect();
            let r4: Vec<F> = (0..d).map(|i| r2[i] - hs * k[6][i] - r3[i]).collect();
            let r5: Vec<F> = (0..d)
                .map(|i| {
                    D.iter()
                        .zip(k.iter())
                        .fold(F::zero(), |acc, (w, kj)| acc + c::<F>(*w) * kj[i])
                        * hs
                })
                .collect();
            let x0 = x;
            grid.emit(x1, &mut traj.grid, |g| {
                let th = (g - x0) / hs;
                let one = F::one();
                (0..d)
                    .map(|i| r1[i] + th * (r2[i] + (one - th) * (r3[i] + th * (r4[i] + (one - th) * r5[i]))))
                    .collect()
            });
            x = x1;
            y = y1;
            f = k[6].clone();
            traj.samples.push((x, y.clone()));
            traj.accepted += 1;
            let fac = if err == F::zero() {
                c(5.0)
            } else {
                c::<F>(0.9) * err.powf(c(-0.2))
            };
            h = (step * fac.max(c(0.2)).min(c(5.0))).min(max_step);
            if h < min_step && x != b {
                traj.truncated = Some(format!("step underflow at {x}"));
                break;
            }
        } else {
            traj.rejected += 1;
            let fac = if ok {
                (c::<F>(0.9) * err.powf(c(-0.2))).max(c(0.2)).min(F::one())
            } else {
                c(0.2)
            };
            h = step * fac;
            if h < min_step {
                traj.truncated = Some(format!("step underflow at {x}"));
                break;
            }
        }
    }
}

fn rk4<F: Real>(
    sys: &OdeSystem<F>,
    mut f: Vec<F>,
    cfg: &IntegratorConfig<F>,
    traj: &mut Trajectory<F>,
    grid: &mut GridCursor<F>,
) {
    let d = sys.dimension();
    let (a, b) = cfg.span;
    let steps = ((b - a).abs() / cfg.initial_step - c(1e-9))
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    if steps > cfg.max_steps {
        traj.truncated = Some(format!("{steps} steps exceed the step limit"));
        return;
    }
    let h = (b - a) / F::from(steps).expect("step count");
    let half = c::<F>(0.5);
    let sixth = F::one() / c(6.0);
    let mut y = traj.samples[0].1.clone();
    grid.emit(a, &mut traj.grid, |_| y.clone());
    let mut k2 = vec![F::zero(); d];
    let mut k3 = vec![F::zero(); d];
    let mut k4 = vec![F::zero(); d];
    let mut f1 = vec![F::zero(); d];
    for i in 0..steps {
        let x = a + h * F::from(i).expect("step index");
        sys.eval(x + half * h, &axpy(&y, &[(half, &f)], h), &mut k2);
        sys.eval(x + half * h, &axpy(&y, &[(half, &k2)], h), &mut k3);
        sys.eval(x + h, &axpy(&y, &[(F::one(), &k3)], h), &mut k4);
        let y1 = axpy(
            &y,
            &[(sixth, &f), (sixth + sixth, &k2), (sixth + sixth, &k3), (sixth, &k4)],
            h,
        );
        let x1 = if i + 1 == steps { b } else { x + h };
        sys.eval(x1, &y1, &mut f1);
        if !finite(&y1) || !finite(&f1) {
            traj.truncated = Some(format!("non-finite state after {x}"));
            return;
        }
        let (y0, f0) = (&y, &f);
        grid.emit(x1, &mut traj.grid, |g| hermite(x, x1, y0, &y1, f0, &f1, g));
        y = y1;
        std::mem::swap(&mut f, &mut f1);
        traj.samples.push((x1, y.clone()));
        traj.accepted += 1;
    }
}

fn hermite<F: Real>(x0: F, x1: F, y0: &[F], y1: &[F], f0: &[F], f1: &[F], x: F) -> Vec<F> {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let (one, two, three) = (F::one(), c::<F>(2.0), c::<F>(3.0));
    let h00 = two * t * t * t - three * t * t + one;
    let h10 = t * t * t - two * t * t + t;
    let h01 = -two * t * t * t + three * t * t;
    let h11 = t * t * t - t * t;
    (0..y0.len())
        .map(|i| h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i])
        .collect()
}
