//! Per-slot mission records and their CSV form.
//!
//! Floating-point fields are stored already rounded to nine significant
//! digits, which is exactly what the CSV carries. A trace read back from disk
//! is therefore bit-identical to the one the engine produced, and metrics
//! recomputed from it match the engine's own.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pat::{LinkSet, SessionPhase};

pub const CSV_HEADER: [&str; 13] = [
    "t_s",
    "phase",
    "up_beacon",
    "down_beacon",
    "up_comm",
    "down_comm",
    "err_down_comm_rad",
    "pl_down_comm_db",
    "p_rx_up_beacon_dbm",
    "p_rx_down_beacon_dbm",
    "p_rx_up_comm_dbm",
    "p_rx_down_comm_dbm",
    "scan_index",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotRecord {
    pub slot: u64,
    pub t_s: f64,
    pub phase: SessionPhase,
    pub links: LinkSet,
    pub err_down_comm_rad: f64,
    pub pl_down_comm_db: f64,
    pub p_rx_up_beacon_dbm: f64,
    pub p_rx_down_beacon_dbm: f64,
    pub p_rx_up_comm_dbm: f64,
    pub p_rx_down_comm_dbm: f64,
    pub scan_index: usize,
    /// Pointing error the aircraft contributes to the downlink beacon. Not
    /// part of the CSV schema.
    #[serde(skip)]
    pub ac_down_beacon_err_rad: f64,
}

impl SlotRecord {
    /// The record exactly as it reads back from CSV.
    pub fn quantized(self) -> Self {
        Self {
            t_s: quantize(self.t_s),
            err_down_comm_rad: quantize(self.err_down_comm_rad),
            pl_down_comm_db: quantize(self.pl_down_comm_db),
            p_rx_up_beacon_dbm: quantize(self.p_rx_up_beacon_dbm),
            p_rx_down_beacon_dbm: quantize(self.p_rx_down_beacon_dbm),
            p_rx_up_comm_dbm: quantize(self.p_rx_up_comm_dbm),
            p_rx_down_comm_dbm: quantize(self.p_rx_down_comm_dbm),
            ..self
        }
    }
}

/// Shortest-form decimal with nine significant digits, `%g` style.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    } else {
        let (mant, e) = sci.split_at(sci.find('e').unwrap());
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}{e}")
    }
}

/// Round to the value the CSV will carry.
pub fn quantize(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x.is_finite() {
        // Same nine significant digits as `fmt_sig9`, without the trimming.
        format!("{x:.8e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub fn write_csv<W: Write>(records: &[SlotRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let map = |e: csv::Error| Error::Trace(e.to_string());
    w.write_record(CSV_HEADER).map_err(map)?;
    for r in records {
        w.write_record([
            fmt_sig9(r.t_s).as_str(),
            r.phase.token(),
            flag(r.links.up_beacon),
            flag(r.links.down_beacon),
            flag(r.links.up_comm),
            flag(r.links.down_comm),
            &fmt_sig9(r.err_down_comm_rad),
            &fmt_sig9(r.pl_down_comm_db),
            &fmt_sig9(r.p_rx_up_beacon_dbm),
            &fmt_sig9(r.p_rx_down_beacon_dbm),
            &fmt_sig9(r.p_rx_up_comm_dbm),
            &fmt_sig9(r.p_rx_down_comm_dbm),
            &r.scan_index.to_string(),
        ])
        .map_err(map)?;
    }
    w.flush().map_err(|e| Error::Trace(e.to_string()))
}

/// Parse a CSV trace. Slot indices are taken from row order; the aircraft
/// beacon contribution is not serialised and reads back as zero.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<SlotRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(|e| Error::Trace(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Trace(format!("unexpected header: {header:?}")));
    }
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row.map_err(|e| Error::Trace(e.to_string()))?;
        let bad = |col: &str| Error::Trace(format!("row {}: bad `{col}`", i + 1));
        let num = |k: usize| row[k].parse::<f64>().map_err(|_| bad(CSV_HEADER[k]));
        let bit = |k: usize| match &row[k] {
            "1" => Ok(true),
            "0" => Ok(false),
            _ => Err(bad(CSV_HEADER[k])),
        };
        out.push(SlotRecord {
            slot: i as u64,
            t_s: num(0)?,
            phase: row[1].parse().map_err(|_| bad("phase"))?,
            links: LinkSet {
                up_beacon: bit(2)?,
                down_beacon: bit(3)?,
                up_comm: bit(4)?,
                down_comm: bit(5)?,
            },
            err_down_comm_rad: num(6)?,
            pl_down_comm_db: num(7)?,
            p_rx_up_beacon_dbm: num(8)?,
            p_rx_down_beacon_dbm: num(9)?,
            p_rx_up_comm_dbm: num(10)?,
            p_rx_down_comm_dbm: num(11)?,
            scan_index: row[12].parse().map_err(|_| bad("scan_index"))?,
            ac_down_beacon_err_rad: 0.0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.1), "0.1");
        assert_eq!(fmt_sig9(3599.9), "3599.9");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(-8.686e-7), "-8.686e-7");
        assert_eq!(fmt_sig9(123456789.0), "123456789");
        assert_eq!(fmt_sig9(1234567891.0), "1.23456789e9");
        assert_eq!(fmt_sig9(9.9999999999), "10");
        assert_eq!(fmt_sig9(0.0), "0");
    }

    proptest! {
        #[test]
        fn quantize_matches_csv_text(x in proptest::num::f64::ANY) {
            prop_assume!(x.is_finite());
            let via_text: f64 = fmt_sig9(x).parse().unwrap();
            prop_assert_eq!(quantize(x).to_bits(), via_text.to_bits());
        }

        #[test]
        fn quantize_is_a_fixpoint(x in proptest::num::f64::NORMAL) {
            let q = quantize(x);
            prop_assert_eq!(quantize(q), q);
            prop_assert_eq!(fmt_sig9(q), fmt_sig9(x));
            prop_assert!(((q - x) / x).abs() <= 5e-9);
        }
    }
}
