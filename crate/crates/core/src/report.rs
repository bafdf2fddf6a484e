//! Serialized forms of the library's results: JSON documents, CSV and the
//! aligned text tables.
//!
//! Every JSON document carries `"schema": SCHEMA_VERSION`. Exact rationals are
//! written as `"num/den"` strings and big floats as hexadecimal significand
//! strings, so both round-trip bit-exactly.

use rug::{Assign, Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};
use crate::families::{FamilyKind, RecurrenceSpec};
use crate::perturbation::zero_estimate;
use crate::poly::Polynomial;
use crate::recurrence::PolynomialFamily;
use crate::rootfind::{is_real_zero, zeros_of, RootOptions, ZeroSet};
use crate::scalar::{abs_f64, format_complex, parse_rational, BigFloat, Exact, Field, FieldTag, GaussRational, Scalar};
use crate::tracking::{assign_labels, ConvergenceReport, D2Estimate};

pub const SCHEMA_VERSION: u32 = 1;

/// A parameter value: `["re", "im"]` for exact values, hex strings plus the
/// precision for floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Exact([String; 2]),
    Float { prec: u32, re: String, im: String },
}

fn hex(x: &Float) -> String {
    x.to_string_radix(16, None)
}

fn unhex(text: &str, prec: u32) -> Result<Float> {
    Float::parse_radix(text, 16)
        .map(|p| Float::with_val(prec, p))
        .map_err(|e| HeunError::Parse(format!("bad hex float {text:?}: {e}")))
}

impl From<&Scalar> for ScalarJson {
    fn from(x: &Scalar) -> Self {
        match x {
            Scalar::Exact(g) => ScalarJson::Exact([g.re.to_string(), g.im.to_string()]),
            Scalar::Float(c) => ScalarJson::Float { prec: c.prec().0, re: hex(c.real()), im: hex(c.imag()) },
        }
    }
}

impl ScalarJson {
    pub fn to_scalar(&self) -> Result<Scalar> {
        Ok(match self {
            ScalarJson::Exact([re, im]) => Scalar::Exact(GaussRational::new(parse_rational(re)?, parse_rational(im)?)),
            ScalarJson::Float { prec, re, im } => Scalar::Float(Complex::with_val(*prec, (unhex(re, *prec)?, unhex(im, *prec)?))),
        })
    }
}

/// Family and parameters; `ε` is implied for the Heun family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecJson {
    pub family: FamilyKind,
    pub gamma: ScalarJson,
    pub delta: ScalarJson,
    pub alpha: ScalarJson,
    pub beta: ScalarJson,
    pub s: ScalarJson,
}

impl From<&RecurrenceSpec> for SpecJson {
    fn from(spec: &RecurrenceSpec) -> Self {
        SpecJson {
            family: spec.kind(),
            gamma: spec.gamma().into(),
            delta: spec.delta().into(),
            alpha: spec.alpha().into(),
            beta: spec.beta().into(),
            s: spec.s().into(),
        }
    }
}

impl SpecJson {
    pub fn to_spec(&self) -> Result<RecurrenceSpec> {
        let (g, d, a, b, s) =
            (self.gamma.to_scalar()?, self.delta.to_scalar()?, self.alpha.to_scalar()?, self.beta.to_scalar()?, self.s.to_scalar()?);
        match self.family {
            FamilyKind::Heun => RecurrenceSpec::heun(g, d, a, b, s),
            FamilyKind::ConfluentHeun => RecurrenceSpec::confluent(g, d, a, s),
            FamilyKind::ReducedConfluentHeun => RecurrenceSpec::reduced_confluent(g, d, s),
        }
    }
}

/// String encoding of field elements.
pub trait ElemCodec: Field {
    fn encode(&self, e: &Self::Elem) -> [String; 2];
    fn decode(&self, parts: &[String; 2]) -> Result<Self::Elem>;
}

impl ElemCodec for Exact {
    fn encode(&self, e: &GaussRational) -> [String; 2] {
        [e.re.to_string(), e.im.to_string()]
    }

    fn decode(&self, [re, im]: &[String; 2]) -> Result<GaussRational> {
        Ok(GaussRational::new(parse_rational(re)?, parse_rational(im)?))
    }
}

impl ElemCodec for BigFloat {
    fn encode(&self, e: &Complex) -> [String; 2] {
        [hex(e.real()), hex(e.imag())]
    }

    fn decode(&self, [re, im]: &[String; 2]) -> Result<Complex> {
        Ok(Complex::with_val(self.prec, (unhex(re, self.prec)?, unhex(im, self.prec)?)))
    }
}

/// `c_0 … c_{m_max}`, coefficients lowest power first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub schema: u32,
    pub spec: SpecJson,
    pub field: FieldTag,
    pub coeffs: Vec<Vec<[String; 2]>>,
}

pub fn family_to_json<F: ElemCodec>(family: &PolynomialFamily<F>) -> FamilyJson {
    let f = family.field();
    FamilyJson {
        schema: SCHEMA_VERSION,
        spec: family.spec().into(),
        field: f.tag(),
        coeffs: family.polys().iter().map(|p| p.coeffs().iter().map(|c| f.encode(c)).collect()).collect(),
    }
}

pub fn family_from_json<F: ElemCodec>(json: &FamilyJson, field: F) -> Result<PolynomialFamily<F>> {
    if json.schema != SCHEMA_VERSION {
        return Err(HeunError::Parse(format!("unsupported schema version {}", json.schema)));
    }
    if json.field != field.tag() {
        return Err(HeunError::Parse(format!("field mismatch: document is {:?}", json.field)));
    }
    let spec = json.spec.to_spec()?;
    let polys = json
        .coeffs
        .iter()
        .map(|cs| {
            let elems = cs.iter().map(|c| field.decode(c)).collect::<Result<Vec<_>>>()?;
            Ok(Polynomial::new(field.clone(), elems))
        })
        .collect::<Result<Vec<_>>>()?;
    if polys.is_empty() {
        return Err(HeunError::Parse("empty family".into()));
    }
    Ok(PolynomialFamily::from_parts(spec, polys))
}

/// `z` with any component below `|z|·10^{−(digits+3)}` set to zero, so that
/// rounding noise does not reach the display.
pub fn clean(z: &Complex, digits: usize) -> Complex {
    let cut = abs_f64(z) * 10f64.powi(-(digits as i32 + 3));
    let mut out = z.clone();
    if out.real().clone().abs() < cut {
        out.mut_real().assign(0);
    }
    if out.imag().clone().abs() < cut {
        out.mut_imag().assign(0);
    }
    out
}

/// Decimal rendering of a complex value for tables.
pub fn show(z: &Complex, digits: usize) -> String {
    format_complex(&clean(z, digits), digits)
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// Pads columns to common widths, separated by ` | `.
fn render_columns(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = widths[c])).collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub label_k: usize,
    pub re: String,
    pub im: String,
    pub residual: f64,
    pub converged: bool,
    pub real: bool,
}

/// Zeros of one `c_index`, sorted by label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZerosJson {
    pub schema: u32,
    pub spec: SpecJson,
    pub index: usize,
    pub precision_bits: u32,
    pub iterations: usize,
    pub imag_tol: f64,
    pub real_zero_count: usize,
    pub zeros: Vec<ZeroRow>,
}

pub fn zeros_document(spec: &RecurrenceSpec, zset: &ZeroSet, labels: &[usize], digits: usize, imag_tol: f64) -> ZerosJson {
    let mut order: Vec<usize> = (0..zset.degree).collect();
    order.sort_by_key(|&i| labels[i]);
    let zeros: Vec<ZeroRow> = order
        .iter()
        .map(|&i| {
            let z = &clean(&zset.zeros[i], digits);
            ZeroRow {
                label_k: labels[i],
                re: crate::scalar::format_real(z.real(), digits),
                im: crate::scalar::format_real(z.imag(), digits),
                residual: zset.residuals[i],
                converged: zset.converged[i],
                real: is_real_zero(&zset.zeros[i], imag_tol),
            }
        })
        .collect();
    ZerosJson {
        schema: SCHEMA_VERSION,
        spec: spec.into(),
        index: zset.degree,
        precision_bits: zset.precision_bits,
        iterations: zset.iterations,
        imag_tol,
        real_zero_count: zeros.iter().filter(|z| z.real).count(),
        zeros,
    }
}

impl ZerosJson {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,residual,label_k\n");
        for z in &self.zeros {
            out.push_str(&format!("{},{},{:.3e},{}\n", z.re, z.im, z.residual, z.label_k));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut rows = vec![vec!["k".to_string(), format!("zero of c_{}", self.index), "residual".into()]];
        for z in &self.zeros {
            let value = if z.im == "0" {
                z.re.clone()
            } else if z.re == "0" {
                format!("{}i", z.im)
            } else if z.im.starts_with('-') {
                format!("{}{}i", z.re, z.im)
            } else {
                format!("{}+{}i", z.re, z.im)
            };
            let flag = if z.converged { "" } else { " (unconverged)" };
            rows.push(vec![z.label_k.to_string(), value, format!("{:.1e}{flag}", z.residual)]);
        }
        let mut out = render_columns(&rows);
        out.push_str(&format!("real zeros (|Im| < {:e}·(1+|Re|)): {}\n", self.imag_tol, self.real_zero_count));
        out
    }
}

/// One row of the approximation table: `−D_k`, the first- and second-order
/// estimates, and the zero of `c_index` labelled `k`.
#[derive(Clone, Debug)]
pub struct ApproxRow {
    pub k: usize,
    pub approx: [Option<Complex>; 3],
    pub zero: Option<Complex>,
}

#[derive(Clone, Debug)]
pub struct ApproxTable {
    pub spec: RecurrenceSpec,
    pub index: usize,
    pub rows: Vec<ApproxRow>,
}

/// The estimate of order `order` for label `k` of `c_{m+1}`, in exact
/// arithmetic when the spec is Gaussian-rational.
pub fn estimate(spec: &RecurrenceSpec, k: usize, m: usize, order: u8, prec: u32) -> Result<Complex> {
    if spec.is_exact() {
        let s = Exact.lift(spec.s())?;
        Ok(zero_estimate(spec, k, m, order, &s, &Exact)?.to_complex(prec))
    } else {
        let f = BigFloat::new(prec + 32);
        let s = f.lift(spec.s())?;
        Ok(Complex::with_val(prec, zero_estimate(spec, k, m, order, &s, &f)?))
    }
}

/// Estimates for labels `0..rows` next to the zeros of `c_index`.
pub fn approx_table(spec: &RecurrenceSpec, index: usize, rows: usize, opts: &RootOptions) -> Result<ApproxTable> {
    if index == 0 {
        return Err(HeunError::OutOfRange("c_0 has no zeros".into()));
    }
    let m = index - 1;
    let zset = zeros_of(spec, index, opts)?;
    zset.require_converged()?;
    let labels = assign_labels(spec, &zset)?;
    let prec = opts.precision_bits;
    let mut out = Vec::new();
    for k in 0..rows.min(index) {
        let mut approx = [None, None, None];
        for (order, slot) in approx.iter_mut().enumerate() {
            *slot = match estimate(spec, k, m, order as u8, prec) {
                Ok(z) => Some(z),
                Err(HeunError::OutOfRange(_)) => None,
                Err(e) => return Err(e),
            };
        }
        let zero = labels.iter().position(|&l| l == k).map(|i| zset.zeros[i].clone());
        out.push(ApproxRow { k, approx, zero });
    }
    Ok(ApproxTable { spec: spec.clone(), index, rows: out })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRowJson {
    pub k: usize,
    pub approx: [Option<String>; 3],
    pub zero: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxTableJson {
    pub schema: u32,
    pub spec: SpecJson,
    pub index: usize,
    pub rows: Vec<ApproxRowJson>,
}

impl ApproxTable {
    pub fn to_json(&self, digits: usize) -> ApproxTableJson {
        ApproxTableJson {
            schema: SCHEMA_VERSION,
            spec: (&self.spec).into(),
            index: self.index,
            rows: self
                .rows
                .iter()
                .map(|r| ApproxRowJson {
                    k: r.k,
                    approx: r.approx.clone().map(|a| a.map(|z| show(&z, digits))),
                    zero: r.zero.as_ref().map(|z| show(z, digits)),
                })
                .collect(),
        }
    }

    fn cells(&self, digits: usize) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "k".to_string(),
            "0th approx.".into(),
            "1st approx.".into(),
            "2nd approx.".into(),
            format!("zero of c_{}", self.index),
        ]];
        let opt = |z: &Option<Complex>| z.as_ref().map_or_else(|| "-".to_string(), |z| show(z, digits));
        for r in &self.rows {
            rows.push(vec![r.k.to_string(), opt(&r.approx[0]), opt(&r.approx[1]), opt(&r.approx[2]), opt(&r.zero)]);
        }
        rows
    }

    pub fn to_text(&self, digits: usize) -> String {
        render_columns(&self.cells(digits))
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut cells = self.cells(digits);
        cells[0] = vec!["k".into(), "approx0".into(), "approx1".into(), "approx2".into(), "zero".into()];
        cells.iter().map(|r| r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n").collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackJson {
    pub label_k: usize,
    /// One entry per degree in `m_list`.
    pub zeros: Vec<Option<String>>,
    /// Stabilized digits between consecutive degrees.
    pub digits: Vec<Option<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub schema: u32,
    pub spec: SpecJson,
    pub m_list: Vec<usize>,
    pub stable_digits: u32,
    pub n_stable: usize,
    pub tracks: Vec<TrackJson>,
}

/// Tabulates a convergence report; `stable_digits` is the threshold for
/// `n_stable`.
pub fn report_document(report: &ConvergenceReport, digits: usize, stable_digits: u32) -> ReportJson {
    let pairs: Vec<(usize, usize)> = report.m_list.windows(2).map(|w| (w[0], w[1])).collect();
    ReportJson {
        schema: SCHEMA_VERSION,
        spec: (&report.spec).into(),
        m_list: report.m_list.clone(),
        stable_digits,
        n_stable: report.n_stable(stable_digits),
        tracks: report
            .tracks
            .iter()
            .map(|t| TrackJson {
                label_k: t.label_k,
                zeros: report.m_list.iter().map(|m| t.at(*m).map(|z| show(z, digits))).collect(),
                digits: pairs.iter().map(|p| t.stabilized_digits.get(p).copied()).collect(),
            })
            .collect(),
    }
}

impl ReportJson {
    fn cells(&self) -> Vec<Vec<String>> {
        let mut head = vec!["k".to_string()];
        head.extend(self.m_list.iter().map(|m| format!("zero of c_{m}")));
        head.extend(self.m_list.windows(2).map(|w| format!("digits {}/{}", w[0], w[1])));
        let mut rows = vec![head];
        for t in &self.tracks {
            let mut row = vec![t.label_k.to_string()];
            row.extend(t.zeros.iter().map(|z| z.clone().unwrap_or_else(|| "-".into())));
            row.extend(t.digits.iter().map(|d| d.map_or_else(|| "-".into(), |d| d.to_string())));
            rows.push(row);
        }
        rows
    }

    pub fn to_text(&self) -> String {
        let mut out = render_columns(&self.cells());
        out.push_str(&format!("stable to {} digits: {}\n", self.stable_digits, self.n_stable));
        out
    }

    pub fn to_csv(&self) -> String {
        self.cells().iter().map(|r| r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n").collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct D2Json {
    pub schema: u32,
    pub spec: SpecJson,
    pub b: String,
    pub k_max: usize,
    pub estimate: String,
    pub raw_estimate: String,
    pub error_indicator: f64,
    pub extrapolation_error: f64,
    pub closed_form: Option<String>,
    pub midpoint: Option<String>,
    pub midpoint_condition: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn d2_document(
    spec: &RecurrenceSpec,
    est: &D2Estimate,
    closed_form: Option<&Complex>,
    midpoint: Option<(&Complex, f64)>,
    digits: usize,
) -> D2Json {
    D2Json {
        schema: SCHEMA_VERSION,
        spec: spec.into(),
        b: show(&est.b, digits),
        k_max: est.k_max,
        estimate: show(&est.estimate, digits),
        raw_estimate: show(&est.raw_estimate, digits),
        error_indicator: est.error_indicator,
        extrapolation_error: est.extrapolation_error,
        closed_form: closed_form.map(|z| show(z, digits)),
        midpoint: midpoint.map(|(z, _)| show(z, digits)),
        midpoint_condition: midpoint.map(|(_, c)| c),
        warnings: est.warnings.clone(),
    }
}

impl D2Json {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("B".to_string(), self.b.clone()),
            (format!("d2 (sequence, K = {})", self.k_max), self.estimate.clone()),
            ("a_K".into(), self.raw_estimate.clone()),
            ("|a_K - a_(K-1)|".into(), format!("{:.2e}", self.error_indicator)),
            ("extrapolation error".into(), format!("{:.2e}", self.extrapolation_error)),
        ];
        if let Some(c) = &self.closed_form {
            v.push(("d2 (closed form, s = 0)".into(), c.clone()));
        }
        if let (Some(m), Some(c)) = (&self.midpoint, self.midpoint_condition) {
            v.push(("d2 (midpoint matching)".into(), m.clone()));
            v.push(("matching condition".into(), format!("{c:.2e}")));
        }
        v
    }

    pub fn to_text(&self) -> String {
        let width = self.pairs().iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out: String = self.pairs().iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect();
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value\n");
        for (k, v) in self.pairs() {
            out.push_str(&format!("{},{}\n", csv_cell(&k), csv_cell(&v)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{from_lame, from_mathieu, LameParams, MathieuParams};
    use crate::recurrence::build_family;
    use proptest::prelude::*;

    fn lame(s: Scalar) -> RecurrenceSpec {
        from_lame(&LameParams { n: Scalar::int(2), s, eta: None }).unwrap().spec
    }

    #[test]
    fn exact_family_json_holds_known_coefficients() {
        let fam = build_family(&lame(Scalar::ratio(1, 100)), 4, Exact).unwrap();
        let json = serde_json::to_string(&family_to_json(&fam)).unwrap();
        for c in ["2/315", "101/1125", "497299/1575000", "6154031/26250000", "121537/70000000"] {
            assert!(json.contains(c), "{c} missing");
        }
        let back: FamilyJson = serde_json::from_str(&json).unwrap();
        let fam2 = family_from_json(&back, Exact).unwrap();
        assert_eq!(fam2.polys(), fam.polys());
        assert_eq!(fam2.spec(), fam.spec());
        assert!(family_from_json(&back, BigFloat::new(256)).is_err());
    }

    #[test]
    fn spec_with_float_parameters_round_trips() {
        let s = Scalar::Float(Complex::with_val(200, (0.1, -1.0 / 3.0)));
        let spec = RecurrenceSpec::confluent(Scalar::ratio(1, 2), Scalar::ratio(1, 3), Scalar::int(5), s).unwrap();
        let json = serde_json::to_string(&SpecJson::from(&spec)).unwrap();
        let back: SpecJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_spec().unwrap(), spec);
    }

    proptest! {
        #[test]
        fn bigfloat_family_round_trip_is_bit_exact(
            num in -1000i64..1000, den in 1i64..1000, m_max in 1usize..12, prec in 64u32..300,
        ) {
            let spec = RecurrenceSpec::heun(
                Scalar::ratio(num.abs() + 1, den), Scalar::ratio(1, 3), Scalar::ratio(den, 7), Scalar::int(-2),
                Scalar::ratio(num, 977),
            ).unwrap();
            let fam = build_family(&spec, m_max, BigFloat::new(prec)).unwrap();
            let json = serde_json::to_string(&family_to_json(&fam)).unwrap();
            let back: FamilyJson = serde_json::from_str(&json).unwrap();
            let fam2 = family_from_json(&back, BigFloat::new(prec)).unwrap();
            prop_assert_eq!(fam2.polys(), fam.polys());
        }

        #[test]
        fn exact_family_round_trip(num in -50i64..50, den in 1i64..50, m_max in 1usize..8) {
            let spec = RecurrenceSpec::reduced_confluent(Scalar::ratio(den, 3), Scalar::ratio(num, den), Scalar::ratio(num, 11)).unwrap();
            let fam = build_family(&spec, m_max, Exact).unwrap();
            let back = family_from_json(&family_to_json(&fam), Exact).unwrap();
            prop_assert_eq!(back.polys(), fam.polys());
        }
    }

    #[test]
    fn lame_table_rows() {
        let table = approx_table(&lame(Scalar::ratio(1, 2)), 40, 4, &RootOptions::default()).unwrap();
        let text = table.to_text(10);
        let row3 = text.lines().find(|l| l.trim_start().starts_with("3 |")).unwrap();
        for cell in ["-9", "-7.125000000", "-6.939508929", "-6.869999689"] {
            assert!(row3.contains(cell), "{row3}");
        }
    }

    #[test]
    fn mathieu_complex_table_row() {
        let (spec, _) = from_mathieu(&MathieuParams { a: Scalar::int(0), q: Scalar::Exact(GaussRational::new(0, 2)) }).unwrap();
        let table = approx_table(&spec, 30, 2, &RootOptions::default()).unwrap();
        let json = table.to_json(10);
        assert_eq!(json.rows[0].approx, [Some("0".into()), Some("1.000000000i".into()), Some("-0.5000000000+1.000000000i".into())]);
        assert_eq!(json.rows[0].zero.as_deref(), Some("-0.5406395812+0.5331266960i"));
        let csv = table.to_csv(10);
        assert!(csv.starts_with("k,approx0,approx1,approx2,zero\n"));
    }

    #[test]
    fn zeros_csv_layout() {
        let spec = lame(Scalar::ratio(1, 100));
        let zset = zeros_of(&spec, 4, &RootOptions::default()).unwrap();
        let labels = assign_labels(&spec, &zset).unwrap();
        let doc = zeros_document(&spec, &zset, &labels, 10, 1e-6);
        let csv = doc.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("re,im,residual,label_k"));
        assert!(lines.next().unwrap().starts_with("-0.007481156136,0,"));
        assert_eq!(doc.real_zero_count, 4);
        assert!(doc.to_text().contains("-9.141455899"));
    }
}
