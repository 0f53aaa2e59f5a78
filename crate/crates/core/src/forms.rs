//! Coefficient triples for the first and second fundamental forms.

/// First fundamental form `E du1² + 2F du1 du2 + G du2²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Second fundamental form coefficients `(e, f, g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.e, self.f, self.g]
    }
}

impl SecondForm {
    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.e, self.f, self.g]
    }

    pub fn negated(&self) -> SecondForm {
        SecondForm { e: -self.e, f: -self.f, g: -self.g }
    }
}

/// Gauss curvature `det II / det I`.
pub fn gauss_curvature(first: &FirstForm, second: &SecondForm) -> f64 {
    second.det() / first.det()
}

/// Mean curvature `(E g - 2F f + G e) / (2 det I)`.
pub fn mean_curvature(first: &FirstForm, second: &SecondForm) -> f64 {
    (first.e * second.g - 2.0 * first.f * second.f + first.g * second.e) / (2.0 * first.det())
}

/// `|a - b| / max(|a|, |b|)`, with the scale floored at `1e-30`.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-30)
}

/// Largest componentwise difference over the largest component magnitude.
pub fn rel_dev_slice(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return f64::NAN;
    }
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = a.iter().chain(b).map(|x| x.abs()).fold(1e-30, f64::max);
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_forms() {
        let first = FirstForm { e: 4.0, f: 0.0, g: 4.0 };
        let second = SecondForm { e: -4.0, f: 0.0, g: -4.0 };
        assert_eq!(gauss_curvature(&first, &second), 1.0);
        assert_eq!(mean_curvature(&first, &second), -1.0);
    }

    #[test]
    fn relative_deviation() {
        assert_eq!(rel_dev(1.0, 1.0), 0.0);
        assert_eq!(rel_dev(2.0, 1.0), 0.5);
        assert_eq!(rel_dev(0.0, 0.0), 0.0);
        assert_eq!(rel_dev_slice(&[1.0, 0.0, 4.0], &[1.0, 0.0, 3.0]), 0.25);
        assert!(rel_dev_slice(&[f64::NAN], &[1.0]).is_nan());
    }
}
