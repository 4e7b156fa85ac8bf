//! CSV row schema shared by `run-protocol` and `bench`.
//!
//! Counts print as plain integers; every real prints with 12 significant
//! digits and a `.` separator so diffs are stable across platforms. The
//! `runtime_ms` column is the only one excluded from reproducibility
//! comparisons.

use std::fmt;

pub const RUN_HEADER: &str =
    "instance_id,k,epsilon,mode,seed,n,opt,output_size,ratio,total_comm_bits,round_bits,runtime_ms";

/// Bench rows carry two extra flag columns so a failed run can stay in the
/// sweep without poisoning the numeric columns.
pub fn bench_header() -> String {
    format!("{RUN_HEADER},valid,status")
}

pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// A numeric cell: exact runs report counts, expectation runs report reals.
#[derive(Clone, Copy, Debug)]
pub enum Num {
    Int(u64),
    Real(f64),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(v) => write!(f, "{v}"),
            Num::Real(v) => write!(f, "{}", fmt_real(*v)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub instance_id: String,
    pub k: usize,
    pub epsilon: f64,
    pub mode: String,
    pub seed: u64,
    pub n: usize,
    pub opt: Num,
    pub output_size: Num,
    pub ratio: f64,
    pub total_comm_bits: Num,
    pub round_bits: Vec<Num>,
    pub runtime_ms: u128,
    pub valid: bool,
    pub status: String,
}

/// CSV fields must not spawn new columns or rows.
pub fn sanitize(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

impl Row {
    pub fn failed(
        instance_id: &str,
        k: usize,
        epsilon: f64,
        mode: &str,
        seed: u64,
        message: &str,
    ) -> Row {
        Row {
            instance_id: sanitize(instance_id),
            k,
            epsilon,
            mode: mode.to_string(),
            seed,
            n: 0,
            opt: Num::Int(0),
            output_size: Num::Int(0),
            ratio: f64::NAN,
            total_comm_bits: Num::Int(0),
            round_bits: Vec::new(),
            runtime_ms: 0,
            valid: false,
            status: format!("error: {message}"),
        }
    }

    pub fn csv(&self, with_flags: bool) -> String {
        let round_bits = self
            .round_bits
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            sanitize(&self.instance_id),
            self.k,
            fmt_real(self.epsilon),
            self.mode,
            self.seed,
            self.n,
            self.opt,
            self.output_size,
            fmt_real(self.ratio),
            self.total_comm_bits,
            round_bits,
            self.runtime_ms,
        );
        if with_flags {
            line.push_str(&format!(",{},{}", self.valid, sanitize(&self.status)));
        }
        line
    }
}

/// Stable per-run sub-seed: splitmix64 over the packed coordinates.
pub fn derive_seed(root: u64, run_index: u64, rep: u64) -> u64 {
    let mut z = root
        ^ run_index.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ rep.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
