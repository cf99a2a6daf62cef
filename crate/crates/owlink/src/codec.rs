//! Test-pattern generation and the SDI channel-coding layer.
//!
//! SDI serial streams are coded with a self-synchronizing scrambler
//! (generator x^9 + x^4 + 1) followed by NRZI differential encoding
//! (x + 1). This module provides both directions of that layer, LFSR-based
//! PRBS generation for test streams, and the scan-line timing arithmetic
//! used by the latency tools.
//!
//! Bit ordering is LSB-first within a stream: a stream is a flat bit
//! sequence, not word-structured.

use crate::error::{Error, Result};

/// Standard SDI data rates in bits/second (one entry per rate, not per
/// variant row).
pub const STANDARD_SDI_RATES: [f64; 6] = [270e6, 1.485e9, 2.97e9, 5.94e9, 11.88e9, 23.76e9];

/// An ordered sequence of binary symbols with an associated bit rate.
///
/// The digital payload at every coding stage.
#[derive(Debug, Clone, PartialEq)]
pub struct BitStream {
    pub bits: Vec<bool>,
    /// Bits per second; must be positive.
    pub bit_rate: f64,
}

impl BitStream {
    pub fn new(bits: Vec<bool>, bit_rate: f64) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("bit stream must be nonempty"));
        }
        if !(bit_rate > 0.0) {
            return Err(Error::invalid(format!(
                "bit rate must be positive, got {bit_rate}"
            )));
        }
        Ok(Self { bits, bit_rate })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// One unit interval in seconds.
    pub fn ui(&self) -> f64 {
        1.0 / self.bit_rate
    }

    /// Whether the rate is one of the standard SDI rates (exact match).
    pub fn is_standard_sdi_rate(&self) -> bool {
        STANDARD_SDI_RATES.contains(&self.bit_rate)
    }
}

/// Fibonacci LFSR description: feedback tap positions (1-based, counted
/// from the input stage; the output is taken from stage `length`), the
/// register length, and a nonzero initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSpec {
    pub taps: Vec<u32>,
    pub length: u32,
    /// Initial register contents; bit i-1 of the integer is stage i.
    pub seed: u64,
}

impl LfsrSpec {
    pub fn new(taps: Vec<u32>, length: u32, seed: u64) -> Result<Self> {
        let spec = Self { taps, length, seed };
        spec.validate()?;
        Ok(spec)
    }

    /// The conventional maximal PRBS15 register: x^15 + x^14 + 1, seeded
    /// all-ones.
    pub fn prbs15() -> Self {
        Self {
            taps: vec![15, 14],
            length: 15,
            seed: (1 << 15) - 1,
        }
    }

    /// PRBS7 register: x^7 + x^6 + 1, seeded all-ones.
    pub fn prbs7() -> Self {
        Self {
            taps: vec![7, 6],
            length: 7,
            seed: (1 << 7) - 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 || self.length > 63 {
            return Err(Error::invalid(format!(
                "LFSR length must be in 1..=63, got {}",
                self.length
            )));
        }
        if self.seed == 0 {
            return Err(Error::invalid(
                "LFSR seed must be nonzero (all-zero state is a fixed point)",
            ));
        }
        if self.seed >> self.length != 0 {
            return Err(Error::invalid("LFSR seed has bits beyond the register"));
        }
        if self.taps.is_empty() {
            return Err(Error::invalid("LFSR needs at least one feedback tap"));
        }
        for &t in &self.taps {
            if t == 0 || t > self.length {
                return Err(Error::invalid(format!(
                    "LFSR tap {t} outside register of length {}",
                    self.length
                )));
            }
        }
        Ok(())
    }

    /// Whether the tap set is one of the well-known maximal polynomials.
    /// A `false` here does not prove non-maximality; the period check is
    /// the caller's responsibility.
    pub fn is_known_maximal(&self) -> bool {
        const KNOWN: [(u32, &[u32]); 8] = [
            (3, &[3, 2]),
            (5, &[5, 3]),
            (7, &[7, 6]),
            (9, &[9, 5]),
            (11, &[11, 9]),
            (15, &[15, 14]),
            (23, &[23, 18]),
            (31, &[31, 28]),
        ];
        let mut taps = self.taps.clone();
        taps.sort_unstable();
        taps.dedup();
        KNOWN.iter().any(|&(len, known_taps)| {
            let mut k = known_taps.to_vec();
            k.sort_unstable();
            len == self.length && k == taps
        })
    }
}

/// A generated PRBS with an optional warning about the tap set.
#[derive(Debug, Clone)]
pub struct PrbsStream {
    pub stream: BitStream,
    /// Set when the tap set is not a known maximal polynomial.
    pub warning: Option<String>,
}

/// Generates the first `n_bits` of the LFSR output sequence.
///
/// The output bit of each step is the content of stage `length` before the
/// shift. For a maximal tap set the sequence is periodic with period
/// 2^length - 1.
pub fn generate_prbs(spec: &LfsrSpec, n_bits: usize, bit_rate: f64) -> Result<PrbsStream> {
    spec.validate()?;
    if n_bits == 0 {
        return Err(Error::invalid("n_bits must be at least 1"));
    }
    let mut state = spec.seed;
    let out_shift = spec.length - 1;
    let mask = if spec.length == 63 {
        u64::MAX >> 1
    } else {
        (1u64 << spec.length) - 1
    };
    let mut bits = Vec::with_capacity(n_bits);
    for _ in 0..n_bits {
        let out = (state >> out_shift) & 1 == 1;
        let mut fb = 0u64;
        for &t in &spec.taps {
            fb ^= (state >> (t - 1)) & 1;
        }
        state = ((state << 1) | fb) & mask;
        bits.push(out);
    }
    let warning = if spec.is_known_maximal() {
        None
    } else {
        Some(format!(
            "tap set {:?} is not a known maximal polynomial; period not verified",
            spec.taps
        ))
    };
    Ok(PrbsStream {
        stream: BitStream::new(bits, bit_rate)?,
        warning,
    })
}

/// Self-synchronizing scrambler, generator x^9 + x^4 + 1.
///
/// The transmit side is the recursive (divide-by-G) form: each output bit
/// is the input XOR the register taps, and the *output* bit is shifted
/// back in. Register state is the last nine output bits, bit 0 most
/// recent.
#[derive(Debug, Clone, Default)]
pub struct Scrambler {
    state: u16,
}

impl Scrambler {
    /// Zero-initialized register (the default used throughout the chain).
    pub fn new() -> Self {
        Self::default()
    }

    /// Explicit 9-bit initial register state, for test-vector reproduction.
    pub fn with_state(state: u16) -> Self {
        Self {
            state: state & 0x1FF,
        }
    }

    pub fn next_bit(&mut self, input: bool) -> bool {
        let fb = ((self.state >> 3) ^ (self.state >> 8)) & 1;
        let out = input ^ (fb == 1);
        self.state = ((self.state << 1) | out as u16) & 0x1FF;
        out
    }

    pub fn run(&mut self, bits: &[bool]) -> Vec<bool> {
        bits.iter().map(|&b| self.next_bit(b)).collect()
    }
}

/// Descrambler for [`Scrambler`]: the feed-forward multiply-by-G form.
///
/// The register is fed with *received* bits, so it self-synchronizes after
/// nine bits regardless of its initial state.
#[derive(Debug, Clone, Default)]
pub struct Descrambler {
    state: u16,
}

impl Descrambler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_state(state: u16) -> Self {
        Self {
            state: state & 0x1FF,
        }
    }

    pub fn next_bit(&mut self, input: bool) -> bool {
        let fb = ((self.state >> 3) ^ (self.state >> 8)) & 1;
        let out = input ^ (fb == 1);
        self.state = ((self.state << 1) | input as u16) & 0x1FF;
        out
    }

    pub fn run(&mut self, bits: &[bool]) -> Vec<bool> {
        bits.iter().map(|&b| self.next_bit(b)).collect()
    }
}

/// Scrambles a stream with a zero-initialized register.
pub fn scramble(input: &BitStream) -> BitStream {
    BitStream {
        bits: Scrambler::new().run(&input.bits),
        bit_rate: input.bit_rate,
    }
}

/// Descrambles a stream with a zero-initialized register.
///
/// `descramble(scramble(b)) == b` for every stream when both registers
/// start at zero; with arbitrary register states equality holds after the
/// nine-bit flush.
pub fn descramble(input: &BitStream) -> BitStream {
    BitStream {
        bits: Descrambler::new().run(&input.bits),
        bit_rate: input.bit_rate,
    }
}

/// NRZI differential encoding: the level toggles on a 1 bit and holds on a
/// 0 bit. Levels are -1/+1.
pub fn nrzi_encode(input: &BitStream, initial_level: i8) -> Vec<i8> {
    let mut level = if initial_level >= 0 { 1i8 } else { -1i8 };
    input
        .bits
        .iter()
        .map(|&b| {
            if b {
                level = -level;
            }
            level
        })
        .collect()
}

/// NRZI differential decoding: bit k is 1 iff level k differs from level
/// k-1 (with `initial_level` standing in for level -1).
///
/// Decoding is polarity-insensitive: negating every level together with
/// the initial level yields the same bits.
pub fn nrzi_decode(levels: &[i8], initial_level: i8, bit_rate: f64) -> Result<BitStream> {
    if levels.is_empty() {
        return Err(Error::invalid("level sequence must be nonempty"));
    }
    let mut prev = initial_level >= 0;
    let bits = levels
        .iter()
        .map(|&l| {
            let cur = l >= 0;
            let bit = cur != prev;
            prev = cur;
            bit
        })
        .collect();
    BitStream::new(bits, bit_rate)
}

/// Frame and scan-line durations for a raster.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LineTiming {
    pub frame_duration_s: f64,
    pub line_duration_s: f64,
}

/// Frame duration = 1/frame_rate; line duration = frame duration divided
/// by the line count.
pub fn sdi_line_timing(frame_rate: f64, lines_per_frame: u32) -> Result<LineTiming> {
    if !(frame_rate > 0.0) {
        return Err(Error::invalid(format!(
            "frame rate must be positive, got {frame_rate}"
        )));
    }
    if lines_per_frame == 0 {
        return Err(Error::invalid("lines_per_frame must be at least 1"));
    }
    let frame = 1.0 / frame_rate;
    Ok(LineTiming {
        frame_duration_s: frame,
        line_duration_s: frame / lines_per_frame as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_bits(n: usize, seed: u64) -> Vec<bool> {
        // xorshift64*, good enough for test data
        let mut s = seed | 1;
        (0..n)
            .map(|_| {
                s ^= s >> 12;
                s ^= s << 25;
                s ^= s >> 27;
                s.wrapping_mul(0x2545F4914F6CDD1D) >> 63 == 1
            })
            .collect()
    }

    #[test]
    fn prbs15_period_and_balance() {
        let spec = LfsrSpec::prbs15();
        let out = generate_prbs(&spec, 2 * 32767, 2.97e9).unwrap();
        assert!(out.warning.is_none());
        let bits = &out.stream.bits;
        assert_eq!(&bits[..32767], &bits[32767..], "period must be 32767");
        let ones = bits[..32767].iter().filter(|&&b| b).count();
        assert_eq!(ones, 16384);
    }

    #[test]
    fn length3_lfsr_enumeration() {
        // Brute-force oracle: all 7 nonzero states of x^3 + x^2 + 1 from
        // seed 0b001 give output 0,0,1,0,1,1,1 (four ones, three zeros).
        let spec = LfsrSpec::new(vec![3, 2], 3, 0b001).unwrap();
        let out = generate_prbs(&spec, 7, 1.0).unwrap();
        let got: Vec<u8> = out.stream.bits.iter().map(|&b| b as u8).collect();
        assert_eq!(got, vec![0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(got.iter().filter(|&&b| b == 1).count(), 4);
        let two = generate_prbs(&spec, 14, 1.0).unwrap().stream.bits;
        assert_eq!(&two[..7], &two[7..], "period must be 7");
    }

    #[test]
    fn single_bit_is_output_stage_of_seed() {
        let spec = LfsrSpec::new(vec![3, 2], 3, 0b100).unwrap();
        let out = generate_prbs(&spec, 1, 1.0).unwrap();
        assert_eq!(out.stream.bits, vec![true]);
        let spec = LfsrSpec::new(vec![3, 2], 3, 0b001).unwrap();
        let out = generate_prbs(&spec, 1, 1.0).unwrap();
        assert_eq!(out.stream.bits, vec![false]);
    }

    #[test]
    fn all_zero_seed_rejected() {
        assert!(matches!(
            LfsrSpec::new(vec![3, 2], 3, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn non_maximal_taps_warn() {
        // x^4 + x^1 + 1 is not in the known-maximal table
        let spec = LfsrSpec::new(vec![4, 1], 4, 0b1111).unwrap();
        let out = generate_prbs(&spec, 16, 1.0).unwrap();
        assert!(out.warning.is_some());
    }

    #[test]
    fn scrambler_zero_fixed_point() {
        let zeros = BitStream::new(vec![false; 100], 1.0).unwrap();
        let out = scramble(&zeros);
        assert!(out.bits.iter().all(|&b| !b));
    }

    #[test]
    fn scrambler_impulse_response() {
        // Oracle: stepping out[n] = in[n] ^ out[n-4] ^ out[n-9] by hand.
        // Ones land at {0,4,8,9} in the first ten bits (8 = 4+4 is the
        // first recursion compound) and continue indefinitely after.
        let mut imp = vec![false; 30];
        imp[0] = true;
        let out = Scrambler::new().run(&imp);
        let ones: Vec<usize> = (0..30).filter(|&i| out[i]).collect();
        assert_eq!(
            ones,
            vec![0, 4, 8, 9, 12, 16, 17, 18, 20, 22, 24, 25, 27, 28]
        );
    }

    #[test]
    fn descrambler_impulse_response() {
        // The feed-forward side multiplies by x^9 + x^4 + 1 exactly:
        // ones at {0, 4, 9} and nowhere else.
        let mut imp = vec![false; 30];
        imp[0] = true;
        let out = Descrambler::new().run(&imp);
        let ones: Vec<usize> = (0..30).filter(|&i| out[i]).collect();
        assert_eq!(ones, vec![0, 4, 9]);
    }

    #[test]
    fn scramble_roundtrip_10k() {
        let bits = random_bits(10_000, 42);
        let stream = BitStream::new(bits.clone(), 2.97e9).unwrap();
        let back = descramble(&scramble(&stream));
        assert_eq!(back.bits, bits);
    }

    #[test]
    fn descrambler_self_synchronizes() {
        // Mismatched initial register states agree after the 9-bit flush.
        let bits = random_bits(200, 7);
        let tx = Scrambler::with_state(0x155).run(&bits);
        let rx = Descrambler::new().run(&tx);
        assert_eq!(&rx[9..], &bits[9..]);
    }

    #[test]
    fn nrzi_toggle_rule() {
        let s = BitStream::new(vec![true, true, false, true], 1.0).unwrap();
        assert_eq!(nrzi_encode(&s, -1), vec![1, -1, -1, 1]);
        let zeros = BitStream::new(vec![false; 8], 1.0).unwrap();
        assert_eq!(nrzi_encode(&zeros, 1), vec![1; 8]);
    }

    #[test]
    fn nrzi_decode_constant_and_alternating() {
        let out = nrzi_decode(&[1, 1, 1, 1], 1, 1.0).unwrap();
        assert!(out.bits.iter().all(|&b| !b));
        let out = nrzi_decode(&[1, -1, 1, -1], -1, 1.0).unwrap();
        assert!(out.bits.iter().all(|&b| b));
    }

    #[test]
    fn line_timing_paper_values() {
        let t = sdi_line_timing(60.0, 1125).unwrap();
        assert!((t.frame_duration_s - 1.0 / 60.0).abs() < 1e-15);
        assert!((t.line_duration_s - 14.8148e-6).abs() < 1e-9);
        let unit = sdi_line_timing(1.0, 1).unwrap();
        assert_eq!(unit.frame_duration_s, 1.0);
        assert_eq!(unit.line_duration_s, 1.0);
        assert!(sdi_line_timing(0.0, 1125).is_err());
        assert!(sdi_line_timing(60.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn scramble_roundtrip(bits in proptest::collection::vec(any::<bool>(), 1..800)) {
            let s = BitStream::new(bits.clone(), 1.0).unwrap();
            prop_assert_eq!(descramble(&scramble(&s)).bits, bits);
        }

        #[test]
        fn nrzi_roundtrip(bits in proptest::collection::vec(any::<bool>(), 1..800),
                          init in prop_oneof![Just(-1i8), Just(1i8)]) {
            let s = BitStream::new(bits.clone(), 1.0).unwrap();
            let levels = nrzi_encode(&s, init);
            prop_assert_eq!(nrzi_decode(&levels, init, 1.0).unwrap().bits, bits);
        }

        #[test]
        fn nrzi_polarity_insensitive(bits in proptest::collection::vec(any::<bool>(), 1..800)) {
            let s = BitStream::new(bits, 1.0).unwrap();
            let levels = nrzi_encode(&s, -1);
            let negated: Vec<i8> = levels.iter().map(|&l| -l).collect();
            let a = nrzi_decode(&levels, -1, 1.0).unwrap();
            let b = nrzi_decode(&negated, 1, 1.0).unwrap();
            prop_assert_eq!(a.bits, b.bits);
        }

        #[test]
        fn scrambler_xor_linearity(a in proptest::collection::vec(any::<bool>(), 1..400),
                                   b in proptest::collection::vec(any::<bool>(), 1..400)) {
            let n = a.len().min(b.len());
            let xored: Vec<bool> = (0..n).map(|i| a[i] ^ b[i]).collect();
            let sa = Scrambler::new().run(&a[..n]);
            let sb = Scrambler::new().run(&b[..n]);
            let sx = Scrambler::new().run(&xored);
            // zero-initialized registers: scramble(0) = 0, so scramble is
            // XOR-linear
            let want: Vec<bool> = (0..n).map(|i| sa[i] ^ sb[i]).collect();
            prop_assert_eq!(sx, want);
        }
    }
}
