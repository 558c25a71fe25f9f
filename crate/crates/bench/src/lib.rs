//! Fixed point configurations shared by the benchmarks.

use waring_core::PointSet;

/// The eleven points of the rank-11 septic example.
pub fn septic_example() -> PointSet {
    PointSet::from_i64_rows(
        2,
        &[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![1, -1, 2],
            vec![1, 3, -1],
            vec![1, 2, 3],
            vec![2, -1, 1],
            vec![-2, -1, 3],
            vec![-1, 3, 4],
            vec![3, -1, 4],
        ],
    )
    .expect("distinct points")
}

/// Points (1, t, t³) on the cuspidal cubic y³ = x²z.
pub fn cuspidal(ts: impl IntoIterator<Item = i64>) -> PointSet {
    let rows: Vec<Vec<i64>> = ts.into_iter().map(|t| vec![1, t, t * t * t]).collect();
    PointSet::from_i64_rows(2, &rows).expect("distinct parameters give distinct points")
}
