//! Discrete-time filter and interpolation primitives used by the channel
//! and waveform modules.
//!
//! Analog prototypes are mapped with the bilinear transform; corner
//! frequencies are prewarped so the digital -3 dB points land exactly on
//! the requested frequencies.

use std::f64::consts::PI;

/// How to seed a filter's internal state before processing a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterInit {
    /// All delay elements zero (cold start; shows the turn-on transient).
    Zero,
    /// Delay elements set to the steady-state response for a constant
    /// input of the given value (the record is a window into steady
    /// operation).
    Steady(f64),
}

/// Direct-form I biquad section.
#[derive(Debug, Clone)]
pub struct Biquad {
    b0: f64,
    b1: f64,
    b2: f64,
    a1: f64,
    a2: f64,
}

impl Biquad {
    /// Bilinear transform of an analog second-order section
    /// (n2 s^2 + n1 s + n0) / (s^2 + d1 s + d0).
    fn from_analog(n: [f64; 3], d1: f64, d0: f64, fs: f64) -> Self {
        let k = 2.0 * fs;
        let k2 = k * k;
        let a0 = k2 + d1 * k + d0;
        Biquad {
            b0: (n[2] * k2 + n[1] * k + n[0]) / a0,
            b1: (2.0 * n[0] - 2.0 * n[2] * k2) / a0,
            b2: (n[2] * k2 - n[1] * k + n[0]) / a0,
            a1: (2.0 * d0 - 2.0 * k2) / a0,
            a2: (k2 - d1 * k + d0) / a0,
        }
    }

    fn dc_gain(&self) -> f64 {
        (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2)
    }

    fn process(&self, x: &[f64], init: FilterInit) -> Vec<f64> {
        let (mut x1, mut x2, mut y1, mut y2) = match init {
            FilterInit::Zero => (0.0, 0.0, 0.0, 0.0),
            FilterInit::Steady(v) => {
                let y = v * self.dc_gain();
                (v, v, y, y)
            }
        };
        let mut out = Vec::with_capacity(x.len());
        for &xn in x {
            let yn = self.b0 * xn + self.b1 * x1 + self.b2 * x2 - self.a1 * y1 - self.a2 * y2;
            x2 = x1;
            x1 = xn;
            y2 = y1;
            y1 = yn;
            out.push(yn);
        }
        out
    }
}

/// Prewarped analog corner frequency in rad/s for a digital corner at `fc`.
fn prewarp(fc: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * fc / fs).tan()
}

/// First-order low-pass with its -3 dB point at `f3db`.
///
/// When `f3db` is at or above ~Nyquist the filter becomes transparent
/// (identity): the pole cannot be represented at this sample rate and its
/// in-band effect is negligible.
#[derive(Debug, Clone)]
pub struct SinglePoleLowPass {
    coeffs: Option<(f64, f64)>, // (b, a1): y = b(x + x1) - a1*y1
}

impl SinglePoleLowPass {
    pub fn new(f3db: f64, fs: f64) -> Self {
        if f3db >= 0.495 * fs {
            return Self { coeffs: None };
        }
        let k = (PI * f3db / fs).tan();
        Self {
            coeffs: Some((k / (1.0 + k), (k - 1.0) / (1.0 + k))),
        }
    }

    pub fn is_transparent(&self) -> bool {
        self.coeffs.is_none()
    }

    pub fn process(&self, x: &[f64], init: FilterInit) -> Vec<f64> {
        let Some((b, a1)) = self.coeffs else {
            return x.to_vec();
        };
        let (mut x1, mut y1) = match init {
            FilterInit::Zero => (0.0, 0.0),
            FilterInit::Steady(v) => (v, v),
        };
        x.iter()
            .map(|&xn| {
                let yn = b * (xn + x1) - a1 * y1;
                x1 = xn;
                y1 = yn;
                yn
            })
            .collect()
    }

    /// Low-frequency group delay of the analog prototype.
    pub fn group_delay_s(f3db: f64) -> f64 {
        1.0 / (2.0 * PI * f3db)
    }
}

/// First-order high-pass (AC coupling) with its -3 dB point at `f_low`.
#[derive(Debug, Clone)]
pub struct FirstOrderHighPass {
    b0: f64,
    a1: f64,
}

impl FirstOrderHighPass {
    pub fn new(f_low: f64, fs: f64) -> Self {
        let k = (PI * f_low / fs).tan();
        Self {
            b0: 1.0 / (1.0 + k),
            a1: (k - 1.0) / (1.0 + k),
        }
    }

    /// `init = Steady(m)` models a coupling capacitor charged to `m`
    /// (constant input `m` would produce zero output); `Zero` models a
    /// cold start where the input initially passes through and decays
    /// with the f_low time constant.
    pub fn process(&self, x: &[f64], init: FilterInit) -> Vec<f64> {
        let (mut x1, mut y1) = match init {
            FilterInit::Zero => (0.0, 0.0),
            FilterInit::Steady(v) => (v, 0.0),
        };
        x.iter()
            .map(|&xn| {
                let yn = self.b0 * (xn - x1) - self.a1 * y1;
                x1 = xn;
                y1 = yn;
                yn
            })
            .collect()
    }
}

/// Fourth-order Bessel low-pass as a cascade of two biquads.
///
/// Magnitude-normalized pole locations (|H| = -3 dB at w = 1):
/// -0.99521 +/- 1.25711j and -1.37007 +/- 0.41025j. Chosen for its flat
/// group delay, which preserves eye shape.
#[derive(Debug, Clone)]
pub struct Bessel4LowPass {
    sections: [Biquad; 2],
}

/// Normalized Bessel pole pairs as (-re, |p|^2) per section.
const BESSEL4_POLES: [(f64, f64); 2] = [
    // p = -0.995208764350272 +/- 1.257105739454664j
    (0.995208764350272, 2.5708220370027884),
    // p = -1.370067830551442 +/- 0.410249717493752j
    (1.370067830551442, 2.0454859218831796),
];

/// Low-frequency group delay of the magnitude-normalized prototype,
/// sum of -Re(p)/|p|^2 over all four poles.
const BESSEL4_DC_GROUP_DELAY: f64 = 2.113917674904219;

impl Bessel4LowPass {
    pub fn new(f3db: f64, fs: f64) -> Self {
        let w0 = prewarp(f3db, fs);
        let make = |(re, mag2): (f64, f64)| {
            let d1 = 2.0 * re * w0;
            let d0 = mag2 * w0 * w0;
            Biquad::from_analog([d0, 0.0, 0.0], d1, d0, fs)
        };
        Self {
            sections: [make(BESSEL4_POLES[0]), make(BESSEL4_POLES[1])],
        }
    }

    pub fn process(&self, x: &[f64], init: FilterInit) -> Vec<f64> {
        let first = self.sections[0].process(x, init);
        self.sections[1].process(&first, init)
    }

    /// Low-frequency group delay of the analog prototype at `f3db`.
    pub fn group_delay_s(f3db: f64) -> f64 {
        BESSEL4_DC_GROUP_DELAY / (2.0 * PI * f3db)
    }
}

/// First-order lead network (1 + s/wz)/(1 + s/wp), unity DC gain.
///
/// Boosts by wp/wz between the zero and the pole; used by the cable
/// equalizer to compensate the receiver roll-off.
#[derive(Debug, Clone)]
pub struct LeadFilter {
    b0: f64,
    b1: f64,
    a1: f64,
}

impl LeadFilter {
    pub fn new(f_zero: f64, f_pole: f64, fs: f64) -> Self {
        let wz = prewarp(f_zero, fs);
        let wp = prewarp(f_pole, fs);
        let k = 2.0 * fs;
        let a0 = 1.0 + k / wp;
        Self {
            b0: (1.0 + k / wz) / a0,
            b1: (1.0 - k / wz) / a0,
            a1: (1.0 - k / wp) / a0,
        }
    }

    pub fn process(&self, x: &[f64], init: FilterInit) -> Vec<f64> {
        let (mut x1, mut y1) = match init {
            FilterInit::Zero => (0.0, 0.0),
            FilterInit::Steady(v) => (v, v),
        };
        x.iter()
            .map(|&xn| {
                let yn = self.b0 * xn + self.b1 * x1 - self.a1 * y1;
                x1 = xn;
                y1 = yn;
                yn
            })
            .collect()
    }

    /// Low-frequency group delay (negative: phase lead).
    pub fn group_delay_s(f_zero: f64, f_pole: f64) -> f64 {
        1.0 / (2.0 * PI * f_pole) - 1.0 / (2.0 * PI * f_zero)
    }
}

/// Zeroth-order modified Bessel function of the first kind (for the
/// Kaiser window).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn kaiser(u: f64, half_width: f64, beta: f64) -> f64 {
    let r = u / half_width;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    bessel_i0(beta * (1.0 - r * r).sqrt()) / bessel_i0(beta)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Windowed-sinc interpolation kernel shared by the resampler and the
/// fractional-delay evaluator.
#[derive(Debug, Clone)]
pub struct SincInterpolator {
    /// Kernel cutoff in cycles per input sample (0.5 = input Nyquist).
    cutoff: f64,
    half_width: usize,
    beta: f64,
}

impl SincInterpolator {
    /// Kernel for resampling from `fs_in` to `fs_out`.
    ///
    /// Passband is flat (~1e-5 ripple) to 0.9x the smaller Nyquist and the
    /// stopband reaches ~100 dB by 1.1x, so folded images land only above
    /// the protected 0.9 band.
    pub fn for_rates(fs_in: f64, fs_out: f64) -> Self {
        let fmin = fs_in.min(fs_out);
        let cutoff = 0.5 * fmin / fs_in;
        // Kaiser design for 100 dB stop attenuation over a transition of
        // 0.2x the smaller Nyquist.
        let atten_db = 100.0;
        let beta = 0.1102 * (atten_db - 8.7);
        let transition = 2.0 * PI * (0.1 * fmin / 2.0) / fs_in;
        let taps = ((atten_db - 7.95) / (2.285 * transition)).ceil() as usize;
        let half_width = (taps / 2).clamp(8, 4096);
        Self {
            cutoff,
            half_width,
            beta,
        }
    }

    /// Kernel for same-rate fractional-delay evaluation.
    pub fn for_fractional_delay() -> Self {
        Self {
            cutoff: 0.5,
            half_width: 32,
            beta: 12.0,
        }
    }

    /// Evaluates the underlying band-limited signal at fractional input
    /// sample position `pos`. Samples beyond the record are clamped to the
    /// edge values; kernel weights are renormalized so a constant input
    /// reproduces exactly.
    pub fn eval(&self, x: &[f64], pos: f64) -> f64 {
        let n = x.len() as isize;
        let lo = (pos - self.half_width as f64).ceil() as isize;
        let hi = (pos + self.half_width as f64).floor() as isize;
        let scale = 2.0 * self.cutoff;
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for m in lo..=hi {
            let u = pos - m as f64;
            let w = scale * sinc(scale * u) * kaiser(u, self.half_width as f64, self.beta);
            let idx = m.clamp(0, n - 1) as usize;
            acc += w * x[idx];
            wsum += w;
        }
        if wsum.abs() < 1e-300 {
            0.0
        } else {
            acc / wsum
        }
    }
}
