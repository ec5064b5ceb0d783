//! Finite-difference oracles in complex coordinates.
//!
//! A complex coordinate `w = x + iy` is perturbed along `x` and `y`
//! separately and the real partials are combined into Wirtinger derivatives
//! `∂ = ½(∂_x − i∂_y)` and `∂̄ = ½(∂_x + i∂_y)`.

use crate::error::Result;
use crate::linalg::{CMatrix, I};
use crate::C64;

/// Holomorphic and antiholomorphic first derivatives at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Wirtinger {
    /// `∂_k F`
    pub holo: Vec<C64>,
    /// `∂̄_k F`
    pub anti: Vec<C64>,
}

fn shifted(point: &[C64], k: usize, delta: C64) -> Vec<C64> {
    let mut p = point.to_vec();
    p[k] += delta;
    p
}

/// Central-difference Wirtinger gradient of a (possibly complex-valued)
/// function. The step for coordinate `k` is `rel_step · max(1, |w_k|)`.
pub fn fd_wirtinger<F>(f: F, point: &[C64], rel_step: f64) -> Result<Wirtinger>
where
    F: Fn(&[C64]) -> Result<C64>,
{
    let mut holo = Vec::with_capacity(point.len());
    let mut anti = Vec::with_capacity(point.len());
    for k in 0..point.len() {
        let h = rel_step * point[k].norm().max(1.0);
        let dx = (f(&shifted(point, k, C64::new(h, 0.0)))? - f(&shifted(point, k, C64::new(-h, 0.0)))?)
            / (2.0 * h);
        let dy = (f(&shifted(point, k, C64::new(0.0, h)))? - f(&shifted(point, k, C64::new(0.0, -h)))?)
            / (2.0 * h);
        holo.push(0.5 * (dx - I * dy));
        anti.push(0.5 * (dx + I * dy));
    }
    Ok(Wirtinger { holo, anti })
}

/// [`fd_wirtinger`] for a real scalar field.
pub fn fd_gradient<F>(f: F, point: &[C64], rel_step: f64) -> Result<Wirtinger>
where
    F: Fn(&[C64]) -> Result<f64>,
{
    fd_wirtinger(|w| f(w).map(|v| C64::new(v, 0.0)), point, rel_step)
}

/// Mixed second derivatives `M_ij = ∂_i ∂̄_j F` of a real function, from the
/// real Hessian over `(Re w, Im w)` with a fixed step `h`:
/// `∂_i∂̄_j = ¼(∂x_i∂x_j + ∂y_i∂y_j + i(∂x_i∂y_j − ∂y_i∂x_j))`.
pub fn fd_mixed_wirtinger<F>(f: F, point: &[C64], h: f64) -> Result<CMatrix>
where
    F: Fn(&[C64]) -> Result<f64>,
{
    let m = point.len();
    let dirs: Vec<(usize, C64)> =
        (0..m).map(|k| (k, C64::new(1.0, 0.0))).chain((0..m).map(|k| (k, I))).collect();
    let eval = |steps: &[(usize, C64)]| -> Result<f64> {
        let mut p = point.to_vec();
        for &(k, d) in steps {
            p[k] += d;
        }
        f(&p)
    };
    let center = f(point)?;
    let r = dirs.len();
    let mut hess = vec![vec![0.0; r]; r];
    for a in 0..r {
        let (ka, da) = dirs[a];
        let plus = eval(&[(ka, da * h)])?;
        let minus = eval(&[(ka, -da * h)])?;
        hess[a][a] = (plus - 2.0 * center + minus) / (h * h);
        for b in a + 1..r {
            let (kb, db) = dirs[b];
            let pp = eval(&[(ka, da * h), (kb, db * h)])?;
            let pm = eval(&[(ka, da * h), (kb, -db * h)])?;
            let mp = eval(&[(ka, -da * h), (kb, db * h)])?;
            let mm = eval(&[(ka, -da * h), (kb, -db * h)])?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[a][b] = v;
            hess[b][a] = v;
        }
    }
    Ok(CMatrix::from_fn(m, m, |i, j| {
        let (xi, yi, xj, yj) = (i, m + i, j, m + j);
        0.25 * C64::new(hess[xi][xj] + hess[yi][yj], hess[xi][yj] - hess[yi][xj])
    }))
}

/// Five-point central derivative of a vector-valued function of one real
/// variable.
pub fn five_point<F>(f: F, t: f64, h: f64) -> Result<Vec<C64>>
where
    F: Fn(f64) -> Result<Vec<C64>>,
{
    let p2 = f(t + 2.0 * h)?;
    let p1 = f(t + h)?;
    let m1 = f(t - h)?;
    let m2 = f(t - 2.0 * h)?;
    Ok((0..p1.len()).map(|k| (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h)).collect())
}

/// Jacobian `J_{ab} = ∂F_a/∂w_b` of a holomorphic map, by five-point
/// differences along the real direction of each coordinate.
pub fn fd_holomorphic_jacobian<F>(f: F, point: &[C64], h: f64) -> Result<CMatrix>
where
    F: Fn(&[C64]) -> Result<Vec<C64>>,
{
    let m = point.len();
    let mut cols = Vec::with_capacity(m);
    for b in 0..m {
        cols.push(five_point(|t| f(&shifted(point, b, C64::new(t, 0.0))), 0.0, h)?);
    }
    let rows = cols.first().map_or(0, Vec::len);
    Ok(CMatrix::from_fn(rows, m, |a, b| cols[b][a]))
}
