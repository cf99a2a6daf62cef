//! Sampled analog waveforms and NRZ pulse synthesis.
//!
//! The [`Waveform`] container carries the signal at every chain stage; the
//! synthesis here follows the 3G-SDI pulse description: rectangular NRZ
//! with raised-cosine transitions whose 20-80% durations are the
//! configured rise/fall times.

use crate::dsp::SincInterpolator;
use crate::error::{Error, Result};

/// Physical unit of a waveform's samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalUnit {
    Volts,
    Amperes,
    Watts,
}

impl SignalUnit {
    /// File-format tag (0 = V, 1 = A, 2 = W).
    pub fn tag(self) -> u32 {
        match self {
            SignalUnit::Volts => 0,
            SignalUnit::Amperes => 1,
            SignalUnit::Watts => 2,
        }
    }

    pub fn from_tag(tag: u32) -> Result<Self> {
        match tag {
            0 => Ok(SignalUnit::Volts),
            1 => Ok(SignalUnit::Amperes),
            2 => Ok(SignalUnit::Watts),
            other => Err(Error::Format(format!("unknown unit tag {other}"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SignalUnit::Volts => "V",
            SignalUnit::Amperes => "A",
            SignalUnit::Watts => "W",
        }
    }
}

/// Uniformly sampled real-valued signal.
///
/// Watts-tagged waveforms are optical intensities and must be
/// non-negative; the constructor enforces this.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    /// Samples per second; positive.
    pub sample_rate: f64,
    /// Time of the first sample in seconds.
    pub t0: f64,
    pub unit: SignalUnit,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate: f64, t0: f64, unit: SignalUnit) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("waveform must have at least one sample"));
        }
        if !(sample_rate > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if unit == SignalUnit::Watts && samples.iter().any(|&s| s < 0.0) {
            return Err(Error::invalid(
                "optical intensity (watts) must be non-negative",
            ));
        }
        Ok(Self {
            samples,
            sample_rate,
            t0,
            unit,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Record duration in seconds (count / rate).
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Linear interpolation at absolute time `t`; clamps beyond the record.
    pub fn sample_at(&self, t: f64) -> f64 {
        let pos = (t - self.t0) * self.sample_rate;
        let n = self.samples.len();
        if pos <= 0.0 {
            return self.samples[0];
        }
        let k = pos.floor() as usize;
        if k + 1 >= n {
            return self.samples[n - 1];
        }
        let frac = pos - k as f64;
        self.samples[k] * (1.0 - frac) + self.samples[k + 1] * frac
    }

    pub fn min_sample(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_sample(&self) -> f64 {
        self.samples
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Scales every sample by a constant factor.
    pub fn scaled(&self, factor: f64) -> Waveform {
        Waveform {
            samples: self.samples.iter().map(|&s| s * factor).collect(),
            ..self.clone()
        }
    }

    /// Band-limited fractional delay by `tau` seconds (positive = later).
    ///
    /// The record grows by the shift so no content falls off the end; the
    /// leading region holds the first sample value.
    pub fn delayed_by(&self, tau: f64) -> Waveform {
        if tau == 0.0 {
            return self.clone();
        }
        let shift = tau * self.sample_rate;
        let extra = shift.abs().ceil() as usize;
        let n_out = self.samples.len() + extra;
        let kernel = SincInterpolator::for_fractional_delay();
        let samples = if shift == shift.round() {
            // integer shift: exact sample moves, no interpolation
            let k = shift.round() as isize;
            (0..n_out as isize)
                .map(|i| {
                    let src = (i - k).clamp(0, self.samples.len() as isize - 1) as usize;
                    self.samples[src]
                })
                .collect()
        } else {
            (0..n_out)
                .map(|i| kernel.eval(&self.samples, i as f64 - shift))
                .collect()
        };
        Waveform {
            samples,
            sample_rate: self.sample_rate,
            t0: self.t0,
            unit: self.unit,
        }
    }
}

/// 20-80% rise/fall time as a fraction of the full raised-cosine
/// transition duration: (acos(-0.6) - acos(0.6))/pi.
pub const RAISED_COSINE_2080_FRACTION: f64 = 0.40966552939826684;

/// NRZ pulse description per the 3G-SDI waveform dimensions.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PulseSpec {
    /// Seconds per unit interval.
    pub ui_s: f64,
    /// Peak-to-peak amplitude in volts.
    pub vpp_v: f64,
    pub dc_offset_v: f64,
    /// 20%-80% rise time in seconds.
    pub t_rise_s: f64,
    /// 80%-20% fall time in seconds.
    pub t_fall_s: f64,
    /// Overshoot amplitude as a fraction of vpp/2; 0 disables the ring.
    pub overshoot_frac: f64,
}

impl PulseSpec {
    /// Conformance-limit 3G-SDI pulse: 336.7 ps UI, 800 mVpp, 0 V offset,
    /// 135 ps edges, no overshoot.
    pub fn sdi_3g() -> Self {
        Self {
            ui_s: 1.0 / 2.97e9,
            vpp_v: 0.8,
            dc_offset_v: 0.0,
            t_rise_s: 135e-12,
            t_fall_s: 135e-12,
            overshoot_frac: 0.0,
        }
    }

    /// Near-rectangular AWG-style pulse at an arbitrary bit rate: 40 ps
    /// edges, 800 mVpp. This is the shape the calibrated link preset
    /// transmits.
    pub fn awg_nrz(bit_rate: f64) -> Self {
        Self {
            ui_s: 1.0 / bit_rate,
            vpp_v: 0.8,
            dc_offset_v: 0.0,
            t_rise_s: 40e-12,
            t_fall_s: 40e-12,
            overshoot_frac: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ui_s > 0.0) {
            return Err(Error::invalid("pulse ui must be positive"));
        }
        if !(self.vpp_v > 0.0) {
            return Err(Error::invalid("pulse vpp must be positive"));
        }
        if self.t_rise_s >= self.ui_s || self.t_fall_s >= self.ui_s {
            return Err(Error::invalid("rise/fall times must be below one UI"));
        }
        if self.t_rise_s < 0.0 || self.t_fall_s < 0.0 || self.overshoot_frac < 0.0 {
            return Err(Error::invalid("pulse times and overshoot must be >= 0"));
        }
        Ok(())
    }
}

/// Synthesizes the sampled NRZ waveform for a -1/+1 level sequence.
///
/// Level L maps to `dc_offset + L*vpp/2`. Transitions are raised-cosine,
/// centered on the UI boundary, and complete within one UI (a requested
/// 20-80% time longer than ~0.41 UI is realized at that cap). Steady-state
/// samples are exact. With `overshoot_frac > 0` each transition is
/// followed by a decaying ring whose peak is calibrated to the requested
/// overshoot.
pub fn synthesize(levels: &[i8], spec: &PulseSpec, sample_rate: f64) -> Result<Waveform> {
    spec.validate()?;
    if levels.is_empty() {
        return Err(Error::invalid("level sequence must be nonempty"));
    }
    if sample_rate * spec.ui_s < 4.0 {
        return Err(Error::invalid(format!(
            "sample rate {sample_rate} gives fewer than 4 samples per UI"
        )));
    }
    let ui = spec.ui_s;
    let amp = spec.vpp_v / 2.0;
    let level_v = |l: i8| spec.dc_offset_v + if l >= 0 { amp } else { -amp };

    let n = (levels.len() as f64 * ui * sample_rate).round() as usize;
    let dt = 1.0 / sample_rate;

    // Steady value per sample from the owning UI cell.
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            let k = ((i as f64 * dt) / ui) as usize;
            level_v(levels[k.min(levels.len() - 1)])
        })
        .collect();

    // Full transition durations, capped so windows of adjacent
    // boundaries cannot overlap.
    let t_rise_full = (spec.t_rise_s / RAISED_COSINE_2080_FRACTION).min(ui);
    let t_fall_full = (spec.t_fall_s / RAISED_COSINE_2080_FRACTION).min(ui);
    let t_max_full = t_rise_full.max(t_fall_full);

    // Overshoot ring: decaying sinusoid after each edge. Peak location and
    // value of exp(-u/tau)*sin(w u) are analytic; the amplitude is derated
    // 2% so stacked ring tails cannot push the extrema past the
    // (1 + overshoot) bound.
    let ring = if spec.overshoot_frac > 0.0 {
        let w = 2.0 * std::f64::consts::PI * 2.0 / ui;
        let tau = ui / 4.0;
        let u_peak = (w * tau).atan() / w;
        let g_peak = (-u_peak / tau).exp() * (w * u_peak).sin();
        Some((w, tau, 0.98 * spec.overshoot_frac * amp / g_peak))
    } else {
        None
    };

    for k in 1..levels.len() {
        if levels[k] == levels[k - 1] {
            continue;
        }
        let rising = levels[k] > levels[k - 1];
        let t_full = if rising { t_rise_full } else { t_fall_full };
        let t_b = k as f64 * ui;
        let start = t_b - t_full / 2.0;
        let v_from = level_v(levels[k - 1]);
        let dv = level_v(levels[k]) - v_from;

        let i0 = (start * sample_rate).ceil().max(0.0) as usize;
        let i1 = (((t_b + t_full / 2.0) * sample_rate).floor() as usize).min(n.saturating_sub(1));
        for i in i0..=i1 {
            let u = ((i as f64 * dt - start) / t_full).clamp(0.0, 1.0);
            v[i] = v_from + dv * (1.0 - (std::f64::consts::PI * u).cos()) / 2.0;
        }

        if let Some((w, tau, a_ring)) = ring {
            let support = (ui - t_full / 2.0 - t_max_full / 2.0).min(ui / 2.0);
            if support > 0.3 * ui {
                let t_e = t_b + t_full / 2.0;
                let sign = if rising { 1.0 } else { -1.0 };
                let j0 = (t_e * sample_rate).ceil().max(0.0) as usize;
                let j1 =
                    (((t_e + support) * sample_rate).floor() as usize).min(n.saturating_sub(1));
                let fade_from = 0.5 * support;
                for j in j0..=j1 {
                    let u = j as f64 * dt - t_e;
                    let mut g = (-u / tau).exp() * (w * u).sin();
                    if u > fade_from {
                        let f = (u - fade_from) / (support - fade_from);
                        g *= 0.5 * (1.0 + (std::f64::consts::PI * f).cos());
                    }
                    v[j] += sign * a_ring * g;
                }
            }
        }
    }

    Waveform::new(v, sample_rate, 0.0, SignalUnit::Volts)
}

/// Shifts every sample by `v_dc` volts.
pub fn add_dc_bias(w: &Waveform, v_dc: f64) -> Waveform {
    Waveform {
        samples: w.samples.iter().map(|&s| s + v_dc).collect(),
        ..w.clone()
    }
}

/// Band-limited resampling to a new rate.
///
/// Signal content below 0.9x the smaller Nyquist frequency is preserved
/// within 0.1 dB. Resampling to the same rate returns the samples
/// bit-for-bit.
pub fn resample(w: &Waveform, new_rate: f64) -> Result<Waveform> {
    if !(new_rate > 0.0) {
        return Err(Error::invalid("resample rate must be positive"));
    }
    if new_rate == w.sample_rate {
        return Ok(w.clone());
    }
    let ratio = new_rate / w.sample_rate;
    let n_out = ((w.samples.len() as f64) * ratio).round().max(1.0) as usize;
    let kernel = SincInterpolator::for_rates(w.sample_rate, new_rate);
    let samples = (0..n_out)
        .map(|i| kernel.eval(&w.samples, i as f64 / ratio))
        .collect();
    Ok(Waveform {
        samples,
        sample_rate: new_rate,
        t0: w.t0,
        unit: w.unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FS: f64 = 32e9;

    fn alternating(n: usize) -> Vec<i8> {
        (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
    }

    #[test]
    fn constant_high_level_maps_to_half_vpp() {
        let spec = PulseSpec::sdi_3g();
        let w = synthesize(&[1; 64], &spec, FS).unwrap();
        assert!(w.samples.iter().all(|&s| (s - 0.4).abs() < 1e-15));
    }

    #[test]
    fn sample_count_follows_ui_arithmetic() {
        let spec = PulseSpec::sdi_3g();
        let n_levels = 1000;
        let w = synthesize(&alternating(n_levels), &spec, FS).unwrap();
        let expect = (n_levels as f64 * spec.ui_s * FS).round() as usize;
        assert_eq!(w.len(), expect);
        assert_eq!(expect, 10774); // 1000 * 336.70 ps * 32 GSa/s
    }

    #[test]
    fn rise_time_reads_back() {
        // Single rising transition; locate 20%/80% crossings by linear
        // interpolation and compare with the requested 135 ps.
        let spec = PulseSpec::sdi_3g();
        let mut levels = vec![-1i8; 32];
        for l in levels.iter_mut().skip(16) {
            *l = 1;
        }
        let w = synthesize(&levels, &spec, FS).unwrap();
        let v20 = -0.4 + 0.2 * 0.8;
        let v80 = -0.4 + 0.8 * 0.8;
        let cross = |level: f64| {
            for i in 1..w.len() {
                if w.samples[i - 1] < level && w.samples[i] >= level {
                    let f = (level - w.samples[i - 1]) / (w.samples[i] - w.samples[i - 1]);
                    return (i as f64 - 1.0 + f) / FS;
                }
            }
            panic!("no crossing");
        };
        let measured = cross(v80) - cross(v20);
        assert!(
            (measured - 135e-12).abs() < 1.0 / FS,
            "measured {measured:e}"
        );
    }

    #[test]
    fn low_sample_rate_rejected() {
        let spec = PulseSpec::sdi_3g();
        let err = synthesize(&[1, -1], &spec, 3.0 / spec.ui_s);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn balanced_sequence_mean_near_dc_offset() {
        let mut spec = PulseSpec::sdi_3g();
        spec.dc_offset_v = 0.123;
        let w = synthesize(&alternating(512), &spec, FS).unwrap();
        assert!((w.mean() - 0.123).abs() < spec.vpp_v / 1000.0);
    }

    #[test]
    fn overshoot_peak_calibrated() {
        let mut spec = PulseSpec::awg_nrz(2.97e9);
        spec.overshoot_frac = 0.10;
        // isolated transitions so rings are clean
        let levels: Vec<i8> = (0..64).map(|i| if (i / 4) % 2 == 0 { -1 } else { 1 }).collect();
        let w = synthesize(&levels, &spec, 4.0 * FS).unwrap();
        let os = (w.max_sample() - 0.4) / 0.4;
        assert!(os > 0.085 && os <= 0.10, "overshoot frac {os}");
    }

    #[test]
    fn bias_shifts_and_restores() {
        let spec = PulseSpec::sdi_3g();
        let w = synthesize(&alternating(64), &spec, FS).unwrap();
        let up = add_dc_bias(&w, 2.4);
        assert!(up.min_sample() > 1.9 && up.max_sample() < 2.9);
        let back = add_dc_bias(&up, -2.4);
        for (a, b) in back.samples.iter().zip(&w.samples) {
            assert!((a - b).abs() < 1e-15);
        }
        let same = add_dc_bias(&w, 0.0);
        assert_eq!(same.samples, w.samples);
    }

    #[test]
    fn resample_same_rate_identity() {
        let spec = PulseSpec::sdi_3g();
        let w = synthesize(&alternating(64), &spec, FS).unwrap();
        let r = resample(&w, FS).unwrap();
        assert_eq!(r.samples, w.samples);
    }

    #[test]
    fn resample_preserves_tone_amplitude() {
        // 1 GHz sinusoid, 32 -> 64 GSa/s: amplitude error below 0.1 dB.
        let n = 8192;
        let x: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 1e9 * i as f64 / 32e9).sin())
            .collect();
        let w = Waveform::new(x, 32e9, 0.0, SignalUnit::Volts).unwrap();
        let r = resample(&w, 64e9).unwrap();
        let mid = &r.samples[4096..12288];
        let amp = crate::dsp::tests_support::tone_amplitude(mid, 64e9, 1e9_f64);
        let err_db = (20.0 * amp.log10()).abs();
        assert!(err_db < 0.1, "amplitude error {err_db} dB");
    }

    #[test]
    fn resample_dc_unchanged() {
        let w = Waveform::new(vec![0.7; 500], 10e9, 0.0, SignalUnit::Volts).unwrap();
        let r = resample(&w, 17e9).unwrap();
        assert!(r.samples.iter().all(|&s| (s - 0.7).abs() < 1e-9));
    }

    #[test]
    fn watts_negativity_rejected() {
        assert!(Waveform::new(vec![-0.1], 1.0, 0.0, SignalUnit::Watts).is_err());
        assert!(Waveform::new(vec![-0.1], 1.0, 0.0, SignalUnit::Volts).is_ok());
    }

    #[test]
    fn delayed_by_integer_samples() {
        let spec = PulseSpec::sdi_3g();
        let w = synthesize(&alternating(64), &spec, FS).unwrap();
        let d = w.delayed_by(5.0 / FS);
        assert_eq!(d.len(), w.len() + 5);
        assert_eq!(&d.samples[5..], &w.samples[..]);
        assert!(d.samples[..5].iter().all(|&s| s == w.samples[0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn synthesize_extrema_bounded(
            seed in any::<u64>(),
            n_levels in 4usize..200,
            t2080_frac in 0.01f64..0.95,
            overshoot in 0.0f64..0.3,
        ) {
            let ui = 1.0 / 2.97e9;
            let spec = PulseSpec {
                ui_s: ui,
                vpp_v: 0.8,
                dc_offset_v: 0.05,
                t_rise_s: t2080_frac * ui * 0.99,
                t_fall_s: t2080_frac * ui * 0.7,
                overshoot_frac: overshoot,
            };
            let mut s = seed | 1;
            let levels: Vec<i8> = (0..n_levels).map(|_| {
                s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
                if s.wrapping_mul(0x2545F4914F6CDD1D) >> 63 == 1 { 1 } else { -1 }
            }).collect();
            let w = synthesize(&levels, &spec, FS).unwrap();
            let bound_hi = spec.dc_offset_v + spec.vpp_v / 2.0 * (1.0 + overshoot);
            let bound_lo = spec.dc_offset_v - spec.vpp_v / 2.0 * (1.0 + overshoot);
            prop_assert!(w.max_sample() <= bound_hi + 1e-12);
            prop_assert!(w.min_sample() >= bound_lo - 1e-12);
        }
    }
}
