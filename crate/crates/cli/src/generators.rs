//! Random point sets in P² with integer coordinates.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use waring_core::{PointSet, ProjectivePoint};

use crate::error::CliError;

/// Every generated set lives in P².
pub const AMBIENT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// Coordinates uniform in [−box, box].
    UniformBox,
    /// (1, t, t²) on the conic xz = y², distinct integers t.
    OnConic,
    /// (1, t, t³) on the cuspidal cubic x²z = y³, distinct integers t.
    OnCubic,
    /// Uniform points after a planted collinear triple in positions 0, 1, 2.
    WithCollinearTriple,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::UniformBox,
        Generator::OnConic,
        Generator::OnCubic,
        Generator::WithCollinearTriple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::UniformBox => "uniform-box",
            Generator::OnConic => "on-conic",
            Generator::OnCubic => "on-cubic",
            Generator::WithCollinearTriple => "with-collinear-triple",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Generator::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| {
            let known: Vec<&str> = Generator::ALL.iter().map(|g| g.name()).collect();
            format!("unknown generator {s:?}, expected one of {}", known.join(", "))
        })
    }
}

/// Independent stream for one trial; the same (seed, index) always gives the
/// same stream, whatever order trials run in.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_vector(rng: &mut ChaCha8Rng, bound: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..=AMBIENT).map(|_| rng.gen_range(-bound..=bound)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

fn point(row: &[i64]) -> ProjectivePoint {
    ProjectivePoint::from_i64s(row).expect("generated rows are nonzero")
}

fn push_new(points: &mut Vec<ProjectivePoint>, p: ProjectivePoint) -> bool {
    if points.contains(&p) {
        false
    } else {
        points.push(p);
        true
    }
}

fn fill_uniform(rng: &mut ChaCha8Rng, points: &mut Vec<ProjectivePoint>, size: usize, bound: i64) {
    while points.len() < size {
        let p = point(&random_vector(rng, bound));
        push_new(points, p);
    }
}

fn curve_points(rng: &mut ChaCha8Rng, size: usize, bound: i64, power: u32) -> Vec<ProjectivePoint> {
    let mut ts: Vec<i64> = (-bound..=bound).collect();
    ts.shuffle(rng);
    ts.truncate(size);
    ts.iter().map(|&t| point(&[1, t, t.pow(power)])).collect()
}

/// Samples `size` distinct points. Curve generators draw distinct parameters
/// from [−box, box], so they need size ≤ 2·box + 1; uniform sampling needs
/// the box to hold enough distinct points.
pub fn sample(
    generator: Generator,
    rng: &mut ChaCha8Rng,
    size: usize,
    bound: i64,
) -> Result<PointSet, CliError> {
    if bound < 1 {
        return Err(CliError::Usage("the coordinate box must be at least 1".into()));
    }
    let room = 2 * bound as usize + 1;
    match generator {
        Generator::OnConic | Generator::OnCubic if size > room => {
            return Err(CliError::Usage(format!(
                "{generator} needs {size} distinct parameters but [-{bound}, {bound}] has {room}"
            )))
        }
        // the points (1, y, z) alone give room² distinct choices
        _ if size > room * room => {
            return Err(CliError::Usage(format!(
                "box {bound} is too small for {size} points"
            )))
        }
        _ => {}
    }
    let points = match generator {
        Generator::UniformBox => {
            let mut points = Vec::with_capacity(size);
            fill_uniform(rng, &mut points, size, bound);
            points
        }
        Generator::OnConic => curve_points(rng, size, bound, 2),
        Generator::OnCubic => curve_points(rng, size, bound, 3),
        Generator::WithCollinearTriple => {
            if size < 3 {
                return Err(CliError::Usage(
                    "a collinear triple needs at least 3 points".into(),
                ));
            }
            let mut points = Vec::with_capacity(size);
            while points.len() < 3 {
                points.clear();
                let u = random_vector(rng, bound);
                let v = random_vector(rng, bound);
                let (a, b) = (rng.gen_range(1..=2) * sign(rng), rng.gen_range(1..=2) * sign(rng));
                let w: Vec<i64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
                for row in [&u, &v, &w] {
                    if row.iter().any(|&c| c != 0) && !push_new(&mut points, point(row)) {
                        break;
                    }
                }
            }
            fill_uniform(rng, &mut points, size, bound);
            points
        }
    };
    Ok(PointSet::new(AMBIENT, points).expect("generated points are distinct"))
}

fn sign(rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_bool(0.5) {
        1
    } else {
        -1
    }
}
