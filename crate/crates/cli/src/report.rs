//! Report schema and JSON emission. Floats are written with 17 significant
//! digits, enough to reproduce every `f64` bit for bit.

use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use conegen::duality::{CertificateOutcome, DualityReport, TorsionReport, ViReport};
use conegen::lattice::{HausdorffResult, OrderIsometryReport};
use conegen::penalty::PenaltyReport;
use conegen::ExtendedReal;

pub const REPORT_VERSION: u32 = 1;

/// Envelope of every command's output.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct Report {
    pub version: u32,
    /// Membership tolerance in effect.
    pub tolerance: f64,
    /// `false` exactly when the command exits with status 1.
    pub passed: bool,
    #[serde(flatten)]
    pub body: ReportBody,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(tag = "command", content = "report", rename_all = "kebab-case")]
pub enum ReportBody {
    Gauge(GaugeReport),
    Scalarize(ScalarizeReport),
    Subdiff(SubdiffReport),
    Penalize(PenaltyReport),
    Minimal(MinimalReport),
    Duality(DualityReport),
    Certify(CertifyReport),
    Hausdorff(HausdorffReport),
    DemoTorsion(TorsionReport),
    DemoVi(ViReport),
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeReport {
    pub point: Vec<f64>,
    pub u: Vec<f64>,
    pub closed_form: bool,
    pub gauge: ExtendedReal,
    pub gauge_lp: ExtendedReal,
    /// `|gauge - gauge_lp| ≤ 1e-9 (1 + gauge)`.
    pub paths_agree: bool,
    /// `(x_i / u_i)_i` on orthants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isometry: Option<Vec<f64>>,
    pub ambient_norm: f64,
    /// `‖x‖_u ‖u‖ - ‖x‖`; informative only.
    pub dominance_gap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceReport>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceReport {
    pub v: Vec<f64>,
    pub constant: f64,
    pub gauge_v: f64,
    /// `c⁻¹‖x‖_u ≤ ‖x‖_v ≤ c‖x‖_u` up to `1e-9`.
    pub sandwich_holds: bool,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarizeReport {
    pub point: Vec<f64>,
    pub e: Vec<f64>,
    pub interior: bool,
    pub value: ExtendedReal,
    pub value_lp: ExtendedReal,
    pub paths_agree: bool,
    /// `y ∈ -C`, which should coincide with `value ≤ 0`.
    pub in_negative_cone: bool,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubdiffReport {
    pub point: Vec<f64>,
    pub value: f64,
    pub exact: bool,
    pub element: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    /// Every listed subgradient passes the membership test.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinimalReport {
    /// Ascending indices into `values`.
    pub indices: Vec<usize>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyReport {
    pub outcome: CertificateOutcome,
    /// Independent re-check of an issued certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HausdorffReport {
    pub distance: HausdorffResult,
    pub isometry: OrderIsometryReport,
}

/// Pretty JSON with `{:.16e}` floats.
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        w: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn parse_report(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        let r = Report {
            version: REPORT_VERSION,
            tolerance: 1e-9,
            passed: true,
            body: ReportBody::Minimal(MinimalReport {
                indices: vec![0],
                values: vec![vec![0.1 + 0.2, -0.0, 1e300]],
            }),
        };
        let text = to_json(&r);
        assert!(text.contains("3.0000000000000004e-1"), "{text}");
        assert!(text.contains("\"command\": \"minimal\""));
        let back = parse_report(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(to_json(&back), text);
    }
}
