//! JSON carriers: a complex number is `[re, im]`, matrices are row-major
//! arrays of rows.

use crate::error::{Error, Result};
use crate::linalg::{c, Mat2, Mat4};

pub type CplxJson = [f64; 2];
pub type Mat2Json = Vec<Vec<CplxJson>>;
pub type Mat4Json = Vec<Vec<CplxJson>>;

fn to_json<const N: usize>(
    get: impl Fn(usize, usize) -> num_complex::Complex64,
) -> Vec<Vec<CplxJson>> {
    (0..N)
        .map(|i| {
            (0..N)
                .map(|j| {
                    let z = get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn check_shape(rows: &[Vec<CplxJson>], n: usize) -> Result<()> {
    if rows.len() != n || rows.iter().any(|row| row.len() != n) {
        return Err(Error::Parse(format!("expected a {n}×{n} complex matrix")));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("matrix entries must be finite".into()));
    }
    Ok(())
}

pub fn mat2_to_json(m: &Mat2) -> Mat2Json {
    to_json::<2>(|i, j| m[(i, j)])
}

pub fn mat4_to_json(m: &Mat4) -> Mat4Json {
    to_json::<4>(|i, j| m[(i, j)])
}

pub fn mat2_from_json(rows: &Mat2Json) -> Result<Mat2> {
    check_shape(rows, 2)?;
    Ok(Mat2::from_fn(|i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn mat4_from_json(rows: &Mat4Json) -> Result<Mat4> {
    check_shape(rows, 4)?;
    Ok(Mat4::from_fn(|i, j| c(rows[i][j][0], rows[i][j][1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_errors() {
        let bad: Mat2Json = vec![vec![[1.0, 0.0]]];
        assert!(mat2_from_json(&bad).is_err());
        let bad: Mat2Json = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]];
        assert!(mat2_from_json(&bad).is_err());
        let ok: Mat2Json = vec![vec![[1.0, 0.0], [0.0, 2.0]], vec![[0.0, -2.0], [3.0, 0.0]]];
        let m = mat2_from_json(&ok).unwrap();
        assert_eq!(m[(0, 1)], c(0.0, 2.0));
        assert_eq!(mat2_to_json(&m), ok);
    }
}
