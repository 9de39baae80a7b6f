//! Small numerical routines shared across the crate: bracketed root
//! finding, centered finite differences, dense linear solves and
//! least-squares line fits.

/// Errors from the numerical helpers.
#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NumericError {
    #[error("root is not bracketed on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("singular linear system at pivot {pivot}")]
    SingularSystem { pivot: usize },
    #[error("line fit needs at least two distinct points")]
    DegenerateFit,
}

/// Bisection on a bracketing interval. Stops when the interval shrinks
/// below `x_tol` or the residual magnitude drops below `f_tol`.
pub fn bisect<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    x_tol: f64,
    f_tol: f64,
) -> Result<f64, NumericError> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NumericError::NotBracketed { lo, hi, f_lo, f_hi });
    }
    // 200 halvings take any finite bracket to sub-ulp width.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || (hi - lo).abs() < x_tol || f_mid.abs() < f_tol {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Centered first derivative with step `h`.
pub fn centered_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n`×`n`.
pub fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>, NumericError> {
    let n = b.len();
    assert_eq!(a.len(), n);
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-14 {
            return Err(NumericError::SingularSystem { pivot: col });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for k in row + 1..n {
            sum -= a[row][k] * x[k];
        }
        x[row] = sum / a[row][row];
    }
    Ok(x)
}

/// Least-squares line fit `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Pearson correlation coefficient of the fit.
    pub r: f64,
}

pub fn fit_line(points: &[(f64, f64)]) -> Result<LineFit, NumericError> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(NumericError::DegenerateFit);
    }
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let var_x = sxx - sx * sx / n;
    if var_x.abs() < 1e-300 {
        return Err(NumericError::DegenerateFit);
    }
    let cov = sxy - sx * sy / n;
    let var_y = syy - sy * sy / n;
    let slope = cov / var_x;
    let intercept = (sy - slope * sx) / n;
    let r = if var_y.abs() < 1e-300 {
        1.0 // constant data lies exactly on the fitted horizontal line
    } else {
        cov / (var_x * var_y).sqrt()
    };
    Ok(LineFit { slope, intercept, r })
}

/// Trapezoid integral of sampled `(x, y)` pairs, ordered in `x`.
pub fn trapezoid(samples: &[(f64, f64)]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].1 + w[0].1) * (w[1].0 - w[0].0))
        .sum()
}
