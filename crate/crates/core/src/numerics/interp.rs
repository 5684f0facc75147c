//! Piecewise Hermite interpolation on monotone nodes.

/// Index `i` with `x[i] <= t <= x[i+1]`, clamped to the valid range.
fn locate(x: &[f64], t: f64) -> usize {
    let n = x.len();
    if t <= x[0] {
        return 0;
    }
    if t >= x[n - 1] {
        return n - 2;
    }
    match x.binary_search_by(|v| v.total_cmp(&t)) {
        Ok(i) => i.min(n - 2),
        Err(i) => i - 1,
    }
}

/// Cubic Hermite interpolant with prescribed slopes, limited à la
/// Fritsch–Carlson so that monotone data stay monotone.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>, mut slopes: Vec<f64>) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len() && y.len() == slopes.len());
        for i in 0..x.len() - 1 {
            let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            if delta == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let a = slopes[i] / delta;
            let b = slopes[i + 1] / delta;
            if a < 0.0 {
                slopes[i] = 0.0;
            }
            if b < 0.0 {
                slopes[i + 1] = 0.0;
            }
            let r = a * a + b * b;
            if r > 9.0 {
                let t = 3.0 / r.sqrt();
                slopes[i] = t * a * delta;
                slopes[i + 1] = t * b * delta;
            }
        }
        Self { x, y, m: slopes }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.m[i] + h01 * self.y[i + 1] + h11 * h * self.m[i + 1]
    }
}

/// Quintic Hermite interpolant from values, first and second derivatives.
#[derive(Debug, Clone)]
pub struct QuinticHermite {
    x: Vec<f64>,
    y: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl QuinticHermite {
    pub fn new(x: Vec<f64>, y: Vec<f64>, d1: Vec<f64>, d2: Vec<f64>) -> Self {
        assert!(x.len() >= 2 && x.len() == y.len() && y.len() == d1.len() && d1.len() == d2.len());
        Self { x, y, d1, d2 }
    }

    /// Value and first derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let i = locate(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);

        let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        let h3 = 0.5 * s3 - s4 + 0.5 * s5;
        let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;

        let dh0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        let dh1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        let dh2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
        let dh3 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
        let dh4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        let dh5 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;

        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (d0, d1) = (self.d1[i] * h, self.d1[i + 1] * h);
        let (e0, e1) = (self.d2[i] * h * h, self.d2[i + 1] * h * h);
        let v = h0 * y0 + h1 * d0 + h2 * e0 + h3 * e1 + h4 * d1 + h5 * y1;
        let dv = (dh0 * y0 + dh1 * d0 + dh2 * e0 + dh3 * e1 + dh4 * d1 + dh5 * y1) / h;
        (v, dv)
    }
}
