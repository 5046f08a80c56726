//! Flat FLRW backgrounds: scale-factor profiles and their time derivatives.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Natural cubic spline through `(t, a)` samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Samples", into = "Samples")]
pub struct Spline {
    t: Vec<f64>,
    a: Vec<f64>,
    m: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Samples {
    pub t: Vec<f64>,
    pub a: Vec<f64>,
}

impl TryFrom<Samples> for Spline {
    type Error = Error;
    fn try_from(s: Samples) -> Result<Self> {
        Spline::new(s.t, s.a)
    }
}

impl From<Spline> for Samples {
    fn from(s: Spline) -> Self {
        Samples { t: s.t, a: s.a }
    }
}

impl Spline {
    pub fn new(t: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if n < 3 || a.len() != n {
            return Err(Error::Config(format!("tabulated profile needs ≥ 3 matching samples, got {} t and {} a", n, a.len())));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("tabulated times must be strictly increasing".into()));
        }
        if a.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
            return Err(Error::Domain("tabulated scale factor must be positive".into()));
        }
        // Second derivatives from the tridiagonal system with m₀ = mₙ₋₁ = 0.
        let mut m = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
            diag[i] = 2.0 * (h0 + h1);
            rhs[i] = 6.0 * ((a[i + 1] - a[i]) / h1 - (a[i] - a[i - 1]) / h0);
        }
        for i in 2..n - 1 {
            let sub = t[i] - t[i - 1];
            let f = sub / diag[i - 1];
            diag[i] -= f * sub;
            rhs[i] -= f * rhs[i - 1];
        }
        for i in (1..n - 1).rev() {
            let sup = t[i + 1] - t[i];
            m[i] = (rhs[i] - sup * m[i + 1]) / diag[i];
        }
        Ok(Spline { t, a, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t[0], *self.t.last().unwrap())
    }

    fn segment(&self, x: f64) -> usize {
        match self.t.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.t.len() - 2),
            Err(i) => i.clamp(1, self.t.len() - 1) - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.t[i + 1] - self.t[i];
        let (p, q) = ((self.t[i + 1] - x) / h, (x - self.t[i]) / h);
        p * self.a[i] + q * self.a[i + 1] + h * h / 6.0 * ((p.powi(3) - p) * self.m[i] + (q.powi(3) - q) * self.m[i + 1])
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.t[i + 1] - self.t[i];
        let (p, q) = ((self.t[i + 1] - x) / h, (x - self.t[i]) / h);
        (self.a[i + 1] - self.a[i]) / h + h / 6.0 * ((1.0 - 3.0 * p * p) * self.m[i] + (3.0 * q * q - 1.0) * self.m[i + 1])
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Constant { a0: f64 },
    /// `a₀ e^{Ht}`.
    DeSitter { a0: f64, hubble: f64 },
    /// `a₀ (t/t₀)^p`, defined for `t > 0`.
    PowerLaw { a0: f64, t0: f64, p: f64 },
    /// `a_i + (a_f − a_i)(1 + tanh((t − t_mid)/width))/2`.
    Tanh { a_initial: f64, a_final: f64, t_mid: f64, width: f64 },
    Tabulated(Spline),
}

impl Profile {
    pub fn tabulated(t: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        Ok(Profile::Tabulated(Spline::new(t, a)?))
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Profile::PowerLaw { .. } => (0.0, f64::INFINITY),
            Profile::Tabulated(s) => s.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match *self {
            Profile::Constant { a0 } | Profile::DeSitter { a0, .. } => positive("a0", a0),
            Profile::PowerLaw { a0, t0, .. } => positive("a0", a0).and(positive("t0", t0)),
            Profile::Tanh { a_initial, a_final, width, .. } => {
                positive("a_initial", a_initial).and(positive("a_final", a_final)).and(positive("width", width))
            }
            Profile::Tabulated(_) => Ok(()),
        }
    }

    fn a(&self, t: f64) -> f64 {
        match self {
            Profile::Constant { a0 } => *a0,
            Profile::DeSitter { a0, hubble } => a0 * (hubble * t).exp(),
            Profile::PowerLaw { a0, t0, p } => a0 * (t / t0).powf(*p),
            Profile::Tanh { a_initial, a_final, t_mid, width } => {
                a_initial + (a_final - a_initial) * 0.5 * (1.0 + ((t - t_mid) / width).tanh())
            }
            Profile::Tabulated(s) => s.eval(t),
        }
    }

    fn a_dot(&self, t: f64) -> f64 {
        match self {
            Profile::Constant { .. } => 0.0,
            Profile::DeSitter { a0, hubble } => a0 * hubble * (hubble * t).exp(),
            Profile::PowerLaw { a0, t0, p } => a0 * p / t0 * (t / t0).powf(p - 1.0),
            Profile::Tanh { a_initial, a_final, t_mid, width } => {
                let s = 1.0 / ((t - t_mid) / width).cosh();
                (a_final - a_initial) * 0.5 * s * s / width
            }
            Profile::Tabulated(s) => s.derivative(t),
        }
    }
}

/// `ds² = −dt² + a²(t) dx⃗²` with a Klein–Gordon field of mass `m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FLRWBackground {
    #[serde(default)]
    pub curvature: i8,
    pub mass: f64,
    pub profile: Profile,
    #[serde(default = "unit_volume")]
    pub volume: f64,
}

fn unit_volume() -> f64 {
    1.0
}

impl FLRWBackground {
    pub fn new(mass: f64, profile: Profile) -> Result<Self> {
        let bg = FLRWBackground { curvature: 0, mass, profile, volume: 1.0 };
        bg.validate()?;
        Ok(bg)
    }

    pub fn with_volume(mut self, volume: f64) -> Result<Self> {
        self.volume = volume;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.curvature {
            0 => {}
            -1 | 1 => return Err(Error::Unsupported("only flat (k = 0) backgrounds are executable".into())),
            k => return Err(Error::Config(format!("curvature must be −1, 0 or 1, got {k}"))),
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!("mass must be non-negative, got {}", self.mass)));
        }
        if !(self.volume > 0.0 && self.volume.is_finite()) {
            return Err(Error::Config(format!("volume must be positive, got {}", self.volume)));
        }
        self.profile.validate()
    }

    fn check(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.profile.domain();
        let inside = match self.profile {
            Profile::PowerLaw { .. } => t > lo && t < hi,
            _ => t >= lo && t <= hi,
        };
        if !inside {
            return Err(Error::Domain(format!("t = {t} outside the profile domain [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// Checks that `[t0, t1]` lies in the domain and that `a > 0` on it.
    pub fn check_span(&self, t0: f64, t1: f64) -> Result<()> {
        self.check(t0)?;
        self.check(t1)?;
        let n = 64;
        for i in 0..=n {
            let t = t0 + (t1 - t0) * i as f64 / n as f64;
            let a = self.profile.a(t);
            if !(a > 0.0) {
                return Err(Error::Domain(format!("a({t}) = {a} is not positive")));
            }
        }
        Ok(())
    }

    pub fn a(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let a = self.profile.a(t);
        if !(a > 0.0) {
            return Err(Error::Domain(format!("a({t}) = {a} is not positive")));
        }
        Ok(a)
    }

    pub fn a_dot(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.profile.a_dot(t))
    }

    /// Unchecked evaluation for use inside integrators after [`Self::check_span`].
    pub(crate) fn a_raw(&self, t: f64) -> (f64, f64) {
        (self.profile.a(t), self.profile.a_dot(t))
    }

    /// Samples `a` on `n + 1` equispaced nodes of `[t0, t1]` as a tabulated profile.
    pub fn tabulate(&self, t0: f64, t1: f64, n: usize) -> Result<FLRWBackground> {
        self.check_span(t0, t1)?;
        let t: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
        let a = t.iter().map(|&x| self.profile.a(x)).collect();
        Ok(FLRWBackground { profile: Profile::tabulated(t, a)?, ..self.clone() })
    }
}
