use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupBackend;
use crate::prp::{apply_move_in_place, ball, BallOptions, BallTable, NielsenMove};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthRow<F> {
    pub radius: usize,
    pub count: usize,
    /// `|B(r)|^{1/r}`
    pub rate: F,
}

/// Exponential growth rate of a ball table along a log-dense subsequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport<F> {
    pub beta: F,
    pub rows: Vec<GrowthRow<F>>,
    /// `min |B(r)|^{1/r}` over the subsequence.
    pub rate: F,
    pub truncated: bool,
}

pub type GrowthReportF64 = GrowthReport<f64>;

/// Checks `0 < r_1 < r_2 < …` with `r_{i+1} ≤ β r_i`, requires every
/// radius to be exact in `table`, and reports the smallest `|B(r)|^{1/r}`.
pub fn growth_report<F: Float>(table: &BallTable, subsequence: &[usize], beta: F) -> Result<GrowthReport<F>> {
    if subsequence.is_empty() {
        return Err(Error::NotLogDense("empty subsequence".into()));
    }
    if subsequence[0] == 0 {
        return Err(Error::NotLogDense("radii must be positive".into()));
    }
    let to_f = |x: usize| F::from(x).expect("radius fits the float type");
    for w in subsequence.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::NotLogDense(format!("{} does not exceed {}", w[1], w[0])));
        }
        if to_f(w[1]) > beta * to_f(w[0]) {
            return Err(Error::NotLogDense(format!("{} exceeds beta times {}", w[1], w[0])));
        }
    }
    let rows = subsequence
        .iter()
        .map(|&r| {
            let count = table.count(r).ok_or(Error::TruncatedRadius(r))?;
            Ok(GrowthRow {
                radius: r,
                count,
                rate: to_f(count).powf(to_f(r).recip()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rate = rows.iter().map(|r| r.rate).fold(F::infinity(), F::min);
    Ok(GrowthReport {
        beta,
        rows,
        rate,
        truncated: table.truncated,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct WalkOptions {
    pub steps: usize,
    pub trials: usize,
    /// Radius of the ball used to measure distances.
    pub radius: usize,
    pub budget: usize,
    pub seed: u64,
}

/// Random-walk distances; `None` entries are censored (beyond the ball).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkStats {
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// Largest radius at which distances are exact.
    pub radius: usize,
    pub distances: Vec<Option<usize>>,
    pub exact: usize,
    pub censored: usize,
    /// Mean of `dist(t)/t` over exactly measured trials.
    pub mean_speed: Option<f64>,
}

impl WalkStats {
    pub const CSV_HEADER: &'static str = "trial,distance";

    pub fn csv_rows(&self) -> Vec<String> {
        self.distances
            .iter()
            .enumerate()
            .map(|(i, d)| match d {
                Some(d) => format!("{i},{d}"),
                None => format!("{i},>{}", self.radius),
            })
            .collect()
    }
}

/// Runs `trials` independent walks of `steps` uniform Nielsen moves from
/// `origin`. Trial `i` draws from the ChaCha8 stream `i` of `seed`, so
/// results do not depend on scheduling.
pub fn rw_speed<B: GroupBackend>(b: &B, origin: &[B::Elem], opts: WalkOptions) -> WalkStats {
    let explored = ball(
        b,
        origin,
        BallOptions {
            budget: opts.budget,
            ..BallOptions::new(opts.radius)
        },
    );
    let radius = explored.table.exact_radius().unwrap_or(0);
    let moves = NielsenMove::all(origin.len());
    let distances: Vec<Option<usize>> = (0..opts.trials as u64)
        .into_par_iter()
        .map(|trial| {
            if moves.is_empty() {
                return Some(0);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(trial);
            let mut t = origin.to_vec();
            for _ in 0..opts.steps {
                let m = moves[rng.gen_range(0..moves.len())];
                apply_move_in_place(b, &mut t, m).expect("moves are in range");
            }
            explored.distance(b, &t).filter(|&d| d <= radius || d <= opts.steps)
        })
        .collect();
    let exact: Vec<usize> = distances.iter().flatten().copied().collect();
    debug_assert!(exact.iter().all(|&d| d <= opts.steps));
    let mean_speed = (opts.steps > 0 && !exact.is_empty())
        .then(|| exact.iter().map(|&d| d as f64 / opts.steps as f64).sum::<f64>() / exact.len() as f64);
    let mean_speed = if opts.steps == 0 { Some(0.0) } else { mean_speed };
    WalkStats {
        steps: opts.steps,
        trials: opts.trials,
        seed: opts.seed,
        radius,
        exact: exact.len(),
        censored: distances.len() - exact.len(),
        distances,
        mean_speed,
    }
}
