//! Streaming statistics used by the validation checks.

/// Pearson co-moment accumulator, shifted by the first observation so large
/// means (e.g. calorie columns) do not eat the correlation's precision.
#[derive(Debug, Clone, Default)]
pub struct CoMoments {
    n: f64,
    offset: Option<(f64, f64)>,
    sx: f64,
    sy: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

impl CoMoments {
    pub fn add(&mut self, x: f64, y: f64) {
        let (ox, oy) = *self.offset.get_or_insert((x, y));
        let dx = x - ox;
        let dy = y - oy;
        self.n += 1.0;
        self.sx += dx;
        self.sy += dy;
        self.sxx += dx * dx;
        self.syy += dy * dy;
        self.sxy += dx * dy;
    }

    pub fn corr(&self) -> Option<f64> {
        if self.n < 2.0 {
            return None;
        }
        let cov = self.sxy - self.sx * self.sy / self.n;
        let vx = self.sxx - self.sx * self.sx / self.n;
        let vy = self.syy - self.sy * self.sy / self.n;
        if vx <= 0.0 || vy <= 0.0 {
            return None;
        }
        Some(cov / (vx * vy).sqrt())
    }
}

/// Running mean / variance / extrema for one column (Welford).
#[derive(Debug, Clone, Default)]
pub struct ColumnMoments {
    n: f64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl ColumnMoments {
    pub fn add(&mut self, x: f64) {
        if self.n == 0.0 {
            self.min = x;
            self.max = x;
        } else {
            self.min = self.min.min(x);
            self.max = self.max.max(x);
        }
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2.0 {
            0.0
        } else {
            self.m2 / self.n
        }
    }
}

/// Lag-1 Pearson autocorrelation of a series.
pub fn lag1_autocorr(series: &[f64]) -> Option<f64> {
    if series.len() < 3 {
        return None;
    }
    let mut cm = CoMoments::default();
    for pair in series.windows(2) {
        cm.add(pair[0], pair[1]);
    }
    cm.corr()
}

/// Median of an unsorted sample.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}
