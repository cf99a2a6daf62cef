//! Discrete-time simulator and analysis toolkit for a VCSEL-based optical
//! wireless link carrying SDI video bit streams.
//!
//! The library models the full transmit/receive chain of an
//! intensity-modulation / direct-detection (IM/DD) link: PRBS test pattern
//! generation, the SDI channel-coding layer (self-synchronizing scrambler
//! plus NRZI), analog waveform synthesis, the VCSEL transmitter, a
//! free-space power loss, a PIN/TIA photoreceiver, and a cable
//! equalizer/reclocker. On top of the chain it provides eye-diagram
//! analysis (Q-factor, SNR, BER, mask compliance), cross-correlation delay
//! estimation with end-to-end latency composition, and link-budget
//! arithmetic for the SMPTE SDI rate family.
//!
//! Each major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run --example run_link
//! cargo run --example eye_analysis
//! cargo run --example delay_estimation
//! cargo run --example codec_roundtrip
//! cargo run --example synthesize_and_mask
//! cargo run --example link_budget
//! cargo run --example calibrate_noise
//! ```
//!
//! A thin CLI binary (`owlink`) exposes the same functionality as batch
//! subcommands (`simulate`, `latency`, `budget`, `codec`, `convert`).

pub mod analysis;
pub mod budget;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod config;
pub mod dsp;
pub mod error;
pub mod fileio;
pub mod latency;
pub mod math;
pub mod sim;
pub mod waveform;

pub use error::{Error, Result};
