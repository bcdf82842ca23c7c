//! Small numerical solvers: bracketed 1-D roots, golden-section minimisation
//! and a damped Newton iteration for square systems of dimension ≤ 4.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Returns `None` when `f(a)` and `f(b)` share a sign.
pub fn brent_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(b)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Returns `(argmin, min)`. The schedule is fixed, so results are reproducible.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a) > xtol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Outcome of a damped Newton run.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOutcome<const N: usize> {
    pub x: SVector<f64, N>,
    /// Max-norm of the residual at `x`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Stop once the max-norm residual drops below this.
    pub ftol: f64,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { max_iter: 60, ftol: 1e-14, fd_step: 1e-7 }
    }
}

fn max_norm<const N: usize>(v: &SVector<f64, N>) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Newton iteration with a forward-difference Jacobian, Levenberg damping when
/// the Jacobian is singular, and step halving whenever the residual norm grows.
///
/// `f` may return `None` where the residual is undefined; such trial points are
/// treated like a residual increase. Returns `None` if the start itself is
/// undefined.
pub fn damped_newton<const N: usize, F>(f: F, x0: SVector<f64, N>, opts: &NewtonOptions) -> Option<NewtonOutcome<N>>
where
    F: Fn(&SVector<f64, N>) -> Option<SVector<f64, N>>,
{
    let mut x = x0;
    let mut fx = f(&x)?;
    let mut res = fx.norm();
    let mut lambda = 0.0_f64;
    let mut it = 0;
    while it < opts.max_iter && max_norm(&fx) > opts.ftol {
        it += 1;
        let mut jac = SMatrix::<f64, N, N>::zeros();
        let mut ok = true;
        for j in 0..N {
            let h = opts.fd_step * (1.0 + x[j].abs());
            let mut xh = x;
            xh[j] += h;
            match f(&xh) {
                Some(fh) => jac.set_column(j, &((fh - fx) / h)),
                None => {
                    let mut xl = x;
                    xl[j] -= h;
                    match f(&xl) {
                        Some(fl) => jac.set_column(j, &((fx - fl) / h)),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        if !ok {
            break;
        }
        let step = newton_step(&jac, &fx, lambda);
        let Some(mut dx) = step else { break };
        let mut accepted = false;
        for _ in 0..30 {
            let xn = x + dx;
            if let Some(fxn) = f(&xn) {
                let rn = fxn.norm();
                if rn.is_finite() && rn < res {
                    x = xn;
                    fx = fxn;
                    res = rn;
                    accepted = true;
                    break;
                }
            }
            dx *= 0.5;
        }
        if accepted {
            lambda *= 0.1;
        } else {
            if lambda > 1e6 {
                break;
            }
            lambda = if lambda == 0.0 { 1e-8 } else { lambda * 100.0 };
        }
        if max_norm(&dx) < 1e-16 * (1.0 + max_norm(&x)) && accepted {
            break;
        }
    }
    Some(NewtonOutcome { x, residual: max_norm(&fx), iterations: it })
}

fn newton_step<const N: usize>(jac: &SMatrix<f64, N, N>, fx: &SVector<f64, N>, lambda: f64) -> Option<SVector<f64, N>> {
    if lambda == 0.0 {
        let a = DMatrix::from_column_slice(N, N, jac.as_slice());
        let b = DVector::from_column_slice((-fx).as_slice());
        if let Some(dx) = a.lu().solve(&b) {
            if dx.iter().all(|v| v.is_finite()) {
                return Some(SVector::from_column_slice(dx.as_slice()));
            }
        }
    }
    let jt = jac.transpose();
    let mut a = jt * jac;
    let scale = a.diagonal().iter().fold(0.0_f64, |m, v| m.max(*v)).max(1e-300);
    let mu = lambda.max(1e-12) * scale;
    for i in 0..N {
        a[(i, i)] += mu;
    }
    a.cholesky().map(|ch| ch.solve(&(-(jt * fx))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_none());
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn newton_solves_circle_line() {
        let f = |v: &Vector2<f64>| Some(Vector2::new(v[0] * v[0] + v[1] * v[1] - 1.0, v[0] - v[1]));
        let out = damped_newton(f, Vector2::new(2.0, 0.5), &NewtonOptions::default()).unwrap();
        let h = 0.5f64.sqrt();
        assert!((out.x[0] - h).abs() < 1e-12 && (out.x[1] - h).abs() < 1e-12);
        assert!(out.residual < 1e-13);
    }

    #[test]
    fn newton_survives_singular_start() {
        // Jacobian singular at the origin.
        let f = |v: &Vector2<f64>| Some(Vector2::new(v[0] * v[1] - 1.0, v[0] - 1.0));
        let out = damped_newton(f, Vector2::new(0.0, 0.0), &NewtonOptions::default()).unwrap();
        assert!(out.residual < 1e-12, "residual {}", out.residual);
    }
}
