//! Output rows and their CSV / JSON Lines serialization.

use std::io::Write;

use chyp::quadrangle::ExampleRecord;
use serde::Serialize;

use crate::config::Format;
use crate::error::SweepError;

/// One accepted tuple as emitted; the field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub n: i64,
    pub l: i64,
    pub k: i64,
    pub p: i64,
    pub f: i64,
    pub t: i64,
    pub genus: i64,
    pub chi: i64,
    pub e: i64,
    /// Reduced fraction with denominator dividing 3.
    pub tau: String,
    #[serde(rename = "e_P")]
    pub e_p: i64,
    /// Reduced fraction `e_P / n`.
    pub orb_e: String,
    pub marginal: bool,
}

impl From<&ExampleRecord> for Row {
    fn from(r: &ExampleRecord) -> Self {
        Row {
            n: r.params.n,
            l: r.params.l,
            k: r.params.k,
            p: r.params.p,
            f: r.f,
            t: r.t,
            genus: r.genus,
            chi: r.chi,
            e: r.e,
            tau: r.tau().to_string(),
            e_p: r.e_p,
            orb_e: r.orb_e.to_string(),
            marginal: r.marginal,
        }
    }
}

/// Streams rows to a writer in the configured format; CSV gets a header even when no row follows.
pub struct RowWriter<W: Write> {
    inner: RowSink<W>,
}

enum RowSink<W: Write> {
    Csv(Box<csv::Writer<W>>),
    Jsonl(W),
}

impl<W: Write> RowWriter<W> {
    pub fn new(out: W, format: Format) -> Result<Self, SweepError> {
        let inner = match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
                w.write_record(["n", "l", "k", "p", "f", "t", "genus", "chi", "e", "tau", "e_P", "orb_e", "marginal"])?;
                RowSink::Csv(Box::new(w))
            }
            Format::Jsonl => RowSink::Jsonl(out),
        };
        Ok(RowWriter { inner })
    }

    pub fn write(&mut self, record: &ExampleRecord) -> Result<(), SweepError> {
        let row = Row::from(record);
        match &mut self.inner {
            RowSink::Csv(w) => w.serialize(&row)?,
            RowSink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, &row)?;
                w.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<W, SweepError> {
        match self.inner {
            RowSink::Csv(w) => w.into_inner().map_err(|e| SweepError::Io(e.into_error())),
            RowSink::Jsonl(mut w) => {
                w.flush()?;
                Ok(w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chyp::quadrangle::Params;

    fn render(format: Format) -> String {
        let rec = ExampleRecord::new(Params::new(10, 6, 3, 1), 1, false);
        let mut w = RowWriter::new(Vec::new(), format).unwrap();
        w.write(&rec).unwrap();
        String::from_utf8(w.finish().unwrap()).unwrap()
    }

    #[test]
    fn csv_columns_and_fractions() {
        assert_eq!(
            render(Format::Csv),
            "n,l,k,p,f,t,genus,chi,e,tau,e_P,orb_e,marginal\n10,6,3,1,1,11,4,-6,-2,-16/3,-1,-1/10,false\n"
        );
    }

    #[test]
    fn jsonl_mirrors_the_csv_keys() {
        let line = render(Format::Jsonl);
        assert_eq!(
            line,
            "{\"n\":10,\"l\":6,\"k\":3,\"p\":1,\"f\":1,\"t\":11,\"genus\":4,\"chi\":-6,\"e\":-2,\"tau\":\"-16/3\",\"e_P\":-1,\"orb_e\":\"-1/10\",\"marginal\":false}\n"
        );
    }

    #[test]
    fn integer_tau_prints_without_denominator() {
        let rec = ExampleRecord::new(Params::new(101, 10, 10, 2), 0, false);
        assert_eq!(rec.tau3, -564);
        assert_eq!(Row::from(&rec).tau, "-188");
    }
}
