//! High-accuracy reference solvers for the shipped problems, independent of
//! the methods being benchmarked.

use dlmodel::Vector;
use nalgebra::DMatrix;

/// Accelerated projected gradient with adaptive restart for an `l`-smooth
/// convex function. Stops when the gradient mapping norm drops below `tol`.
pub fn projected_accelerated(
    grad: impl Fn(&Vector) -> Vector,
    value: impl Fn(&Vector) -> f64,
    project: impl Fn(&Vector) -> Vector,
    x0: &Vector,
    l: f64,
    tol: f64,
    max_iters: usize,
) -> Vector {
    let step = 1.0 / l;
    let mut x = project(x0);
    let mut w = x.clone();
    let mut theta = 1.0f64;
    let mut fx = value(&x);
    for _ in 0..max_iters {
        let next = project(&(&w - grad(&w) * step));
        let mapping = (&w - &next).norm() * l;
        let f_next = value(&next);
        if f_next > fx {
            theta = 1.0;
            w = x.clone();
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        w = &next + (&next - &x) * ((theta - 1.0) / theta_next);
        theta = theta_next;
        x = next;
        fx = f_next;
        if mapping <= tol {
            break;
        }
    }
    x
}

fn soft_threshold(t: f64, k: f64) -> f64 {
    if t > k {
        t - k
    } else if t < -k {
        t + k
    } else {
        0.0
    }
}

/// Cyclic coordinate descent for `|A x - b|^2 / 2 + lambda |x|_1`, run until
/// a full sweep moves no coordinate by more than `tol`.
pub fn lasso_coordinate_descent(a: &DMatrix<f64>, b: &Vector, lambda: f64, tol: f64, max_sweeps: usize) -> Vector {
    let n = a.ncols();
    let mut x = Vector::zeros(n);
    let mut r = b.clone();
    let col_sq: Vec<f64> = (0..n).map(|j| a.column(j).norm_squared()).collect();
    for _ in 0..max_sweeps {
        let mut moved = 0.0f64;
        for j in 0..n {
            if col_sq[j] == 0.0 {
                continue;
            }
            let col = a.column(j);
            let rho = col.dot(&r) + col_sq[j] * x[j];
            let new = soft_threshold(rho, lambda) / col_sq[j];
            let d = new - x[j];
            if d != 0.0 {
                r.axpy(-d, &col, 1.0);
                x[j] = new;
                moved = moved.max(d.abs());
            }
        }
        if moved <= tol {
            break;
        }
    }
    x
}
