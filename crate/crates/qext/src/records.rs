//! Output rows and their CSV/JSON encodings.

use num_complex::Complex64;
use qext_core::ring::CharSumRow;
use qext_core::moments::{SeriesCheck, MomentReport, SigmaProduct};
use qext_core::{BaseField, Divisor, ExtKind, LPolynomial, QuadExt};
use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::{CliError, CliResult};

/// A table row with a fixed column order shared by both formats.
pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

/// Writes rows as CSV with a header, or as a pretty JSON array.
pub fn encode<R: Row>(rows: &[R], format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::HEADER)?;
            for r in rows {
                w.write_record(r.fields())?;
            }
            w.into_inner().map_err(|e| CliError::Config(e.to_string()))
        }
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

fn parity_name(kind: ExtKind) -> &'static str {
    match kind {
        ExtKind::Kummer => "odd",
        ExtKind::ArtinSchreier => "even",
    }
}

fn complex_text(z: Complex64) -> String {
    z.to_string()
}

/// One extension: generator, discriminant and genus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtRecord {
    /// Characteristic parity, `odd` or `even`.
    #[serde(rename = "char")]
    pub parity: String,
    pub omega: String,
    pub disc: String,
    pub genus: i64,
}

impl ExtRecord {
    pub fn of(ext: &QuadExt) -> ExtRecord {
        ExtRecord {
            parity: parity_name(ext.kind()).to_string(),
            omega: ext.omega().to_string(),
            disc: ext.disc().to_string(),
            genus: ext.genus(),
        }
    }

    /// Rebuilds the extension from its generator and checks the stored fields.
    pub fn parse(&self, base: &BaseField) -> CliResult<QuadExt> {
        let omega = base.field().parse_rational(&self.omega)?;
        let ext = base.extension(&omega)?;
        let disc = Divisor::parse(base, &self.disc)?;
        if ext.disc() != &disc || ext.genus() != self.genus || parity_name(ext.kind()) != self.parity {
            return Err(CliError::Config(format!("record {self:?} does not match its generator")));
        }
        Ok(ext)
    }
}

impl Row for ExtRecord {
    const HEADER: &'static [&'static str] = &["char", "omega", "disc", "genus"];
    fn fields(&self) -> Vec<String> {
        vec![self.parity.clone(), self.omega.clone(), self.disc.clone(), self.genus.to_string()]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpolyRow {
    pub omega: String,
    pub disc: String,
    pub q: u32,
    pub genus: i64,
    pub coeffs: Vec<i64>,
    pub rh_deviation: f64,
}

impl LpolyRow {
    pub fn new(ext: &QuadExt, l: &LPolynomial, rh_deviation: f64) -> LpolyRow {
        LpolyRow {
            omega: ext.omega().to_string(),
            disc: ext.disc().to_string(),
            q: l.q(),
            genus: ext.genus(),
            coeffs: l.coeffs().to_vec(),
            rh_deviation,
        }
    }
}

impl Row for LpolyRow {
    const HEADER: &'static [&'static str] = &["omega", "disc", "q", "genus", "coeffs", "rh_deviation"];
    fn fields(&self) -> Vec<String> {
        let coeffs: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        vec![
            self.omega.clone(),
            self.disc.clone(),
            self.q.to_string(),
            self.genus.to_string(),
            coeffs.join(" "),
            self.rh_deviation.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentRow {
    pub kind: String,
    pub q: u32,
    pub m: u32,
    pub s: String,
    pub t: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub main_re: f64,
    pub main_im: f64,
    pub abs_err: f64,
    pub bound: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub pass: bool,
}

impl From<&MomentReport> for MomentRow {
    fn from(r: &MomentReport) -> MomentRow {
        MomentRow {
            kind: r.kind.name().to_string(),
            q: r.q,
            m: r.m,
            s: complex_text(r.s),
            t: complex_text(r.t),
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            main_re: r.main.re,
            main_im: r.main.im,
            abs_err: r.abs_err,
            bound: r.bound,
            c: r.constant,
            pass: r.pass,
        }
    }
}

impl Row for MomentRow {
    const HEADER: &'static [&'static str] =
        &["kind", "q", "m", "s", "t", "lhs_re", "lhs_im", "main_re", "main_im", "abs_err", "bound", "C", "pass"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            self.q.to_string(),
            self.m.to_string(),
            self.s.clone(),
            self.t.clone(),
            self.lhs_re.to_string(),
            self.lhs_im.to_string(),
            self.main_re.to_string(),
            self.main_im.to_string(),
            self.abs_err.to_string(),
            self.bound.to_string(),
            self.c.to_string(),
            self.pass.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharsumRecord {
    pub q: u32,
    pub c: String,
    pub d: String,
    pub v0: String,
    pub n: i64,
    pub sum_re: f64,
    pub sum_im: f64,
    pub bound_trivial: f64,
    pub bound_pv: f64,
    pub ratio: f64,
}

impl CharsumRecord {
    pub fn new(q: u32, row: &CharSumRow) -> CharsumRecord {
        CharsumRecord {
            q,
            c: row.c.to_string(),
            d: row.d.to_string(),
            v0: row.v0.to_string(),
            n: row.n,
            sum_re: row.sum.re,
            sum_im: row.sum.im,
            bound_trivial: row.bound_trivial,
            bound_pv: row.bound_pv,
            ratio: row.ratio,
        }
    }
}

impl Row for CharsumRecord {
    const HEADER: &'static [&'static str] =
        &["q", "c", "d", "v0", "n", "sum_re", "sum_im", "bound_trivial", "bound_pv", "ratio"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.q.to_string(),
            self.c.clone(),
            self.d.clone(),
            self.v0.clone(),
            self.n.to_string(),
            self.sum_re.to_string(),
            self.sum_im.to_string(),
            self.bound_trivial.to_string(),
            self.bound_pv.to_string(),
            self.ratio.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaRow {
    pub kind: String,
    pub q: u32,
    pub s: String,
    pub t: String,
    pub cutoff: u32,
    pub value_re: f64,
    pub value_im: f64,
    pub tail_bound: f64,
    pub series_re: f64,
    pub series_im: f64,
    pub gap: f64,
    pub pass: bool,
}

impl SigmaRow {
    pub fn new(q: u32, product: &SigmaProduct, series: &SeriesCheck, threshold: f64) -> SigmaRow {
        SigmaRow {
            kind: product.kind.name().to_string(),
            q,
            s: complex_text(product.s),
            t: complex_text(product.t),
            cutoff: series.cutoff,
            value_re: product.value.re,
            value_im: product.value.im,
            tail_bound: product.tail_bound,
            series_re: series.lhs.re,
            series_im: series.lhs.im,
            gap: series.gap,
            pass: series.gap < threshold,
        }
    }
}

impl Row for SigmaRow {
    const HEADER: &'static [&'static str] = &[
        "kind", "q", "s", "t", "cutoff", "value_re", "value_im", "tail_bound", "series_re", "series_im", "gap", "pass",
    ];
    fn fields(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            self.q.to_string(),
            self.s.clone(),
            self.t.clone(),
            self.cutoff.to_string(),
            self.value_re.to_string(),
            self.value_im.to_string(),
            self.tail_bound.to_string(),
            self.series_re.to_string(),
            self.series_im.to_string(),
            self.gap.to_string(),
            self.pass.to_string(),
        ]
    }
}

/// One named check of the verification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub m: u32,
    pub check: String,
    pub count: usize,
    pub failures: usize,
}

impl Row for VerifyRow {
    const HEADER: &'static [&'static str] = &["m", "check", "count", "failures"];
    fn fields(&self) -> Vec<String> {
        vec![self.m.to_string(), self.check.clone(), self.count.to_string(), self.failures.to_string()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qext_core::quadratic::DEFAULT_FAMILY_CAP;

    #[test]
    fn ext_records_round_trip() {
        for (p, r) in [(3, 1), (2, 1), (2, 2)] {
            let base = BaseField::from_order(p, r).unwrap();
            for ext in base.enumerate_family(1, DEFAULT_FAMILY_CAP).unwrap().iter().step_by(7) {
                let rec = ExtRecord::of(ext);
                assert_eq!(&rec.parse(&base).unwrap(), ext);
                let json = serde_json::to_string(&rec).unwrap();
                assert_eq!(serde_json::from_str::<ExtRecord>(&json).unwrap(), rec);
            }
        }
    }

    #[test]
    fn csv_quotes_divisors() {
        let rows = [ExtRecord { parity: "odd".into(), omega: "x".into(), disc: "[(inf,1),(x,1)]".into(), genus: 0 }];
        let text = String::from_utf8(encode(&rows, Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "char,omega,disc,genus\nodd,x,\"[(inf,1),(x,1)]\",0\n");
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let back: Vec<csv::StringRecord> = rd.records().collect::<Result<_, _>>().unwrap();
        assert_eq!(&back[0][2], "[(inf,1),(x,1)]");
    }
}
