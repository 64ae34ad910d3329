//! One JSON object per report, floats printed with 17 significant digits.

use gln_voronoi::checks::{CheckReport, Field, Fields};
use gln_voronoi::C64;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A float written as `d.dddddddddddddddde±x`; non-finite values become
/// `null`.
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

struct Cplx(Option<C64>);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            None => s.serialize_none(),
            Some(z) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("re", &Num(z.re))?;
                m.serialize_entry("im", &Num(z.im))?;
                m.end()
            }
        }
    }
}

struct FieldJson<'a>(&'a Field);

impl Serialize for FieldJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Field::Int(v) => s.serialize_i64(*v),
            Field::Real(v) => Num(*v).serialize(s),
            Field::Text(v) => s.serialize_str(v),
            Field::Reals(vs) => {
                let mut seq = s.serialize_seq(Some(vs.len()))?;
                for v in vs {
                    seq.serialize_element(&Num(*v))?;
                }
                seq.end()
            }
        }
    }
}

struct FieldsJson<'a>(&'a Fields);

impl Serialize for FieldsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, &FieldJson(v))?;
        }
        m.end()
    }
}

struct ReportJson<'a>(&'a CheckReport);

impl Serialize for ReportJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let r = self.0;
        let mut m = s.serialize_map(Some(9))?;
        m.serialize_entry("check", &r.check)?;
        m.serialize_entry("params", &FieldsJson(&r.params))?;
        m.serialize_entry("lhs", &Cplx(r.lhs))?;
        m.serialize_entry("rhs", &Cplx(r.rhs))?;
        m.serialize_entry("correction", &Cplx(r.correction))?;
        m.serialize_entry("abs_err", &Num(r.abs_err))?;
        m.serialize_entry("rel_err", &Num(r.rel_err))?;
        m.serialize_entry("verdict", r.verdict.name())?;
        m.serialize_entry("diagnostics", &FieldsJson(&r.diagnostics))?;
        m.end()
    }
}

pub fn to_line(r: &CheckReport) -> String {
    serde_json::to_string(&ReportJson(r)).expect("report serializes")
}

fn field_text(f: &Field) -> String {
    match f {
        Field::Int(v) => v.to_string(),
        Field::Real(v) => format!("{v}"),
        Field::Text(v) => v.clone(),
        Field::Reals(vs) => vs.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","),
    }
}

/// `PASS check k=v … abs_err=… rel_err=…`.
pub fn to_text(r: &CheckReport) -> String {
    let mut out = format!("{} {}", r.verdict.name().to_uppercase(), r.check);
    for (k, v) in &r.params {
        out.push_str(&format!(" {k}={}", field_text(v)));
    }
    if let Some(z) = r.lhs {
        out.push_str(&format!(" lhs={:.12e}{:+.12e}i", z.re, z.im));
    }
    if let Some(z) = r.rhs {
        out.push_str(&format!(" rhs={:.12e}{:+.12e}i", z.re, z.im));
    }
    out.push_str(&format!(" abs_err={:.3e} rel_err={:.3e}", r.abs_err, r.rel_err));
    if let Some(Field::Text(res)) = r.diagnostics.iter().find(|(k, _)| k == "residual").map(|(_, v)| v) {
        if !res.is_empty() && res != "0" {
            out.push_str(&format!(" residual={res}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use gln_voronoi::fields;

    #[test]
    fn floats_carry_seventeen_digits_and_nan_is_null() {
        let mut r = CheckReport::residual("x", fields!["q" => 5u64, "alphas" => vec![0.5, -0.5]], 1.0 / 3.0, 1.0);
        r.rel_err = f64::NAN;
        let line = to_line(&r);
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["abs_err"].as_f64(), Some(1.0 / 3.0));
        assert!(line.contains("3.3333333333333331e-1"));
        assert!(v["rel_err"].is_null());
        assert_eq!(v["params"]["q"], 5);
        assert_eq!(v["verdict"], "pass");
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys.len(), 9);
    }
}
