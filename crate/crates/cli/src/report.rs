//! Output formatting shared by every subcommand.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A flat record or a table of records, printed as JSON or CSV.
pub enum Report {
    Record(Map<String, Value>),
    Table(Vec<Map<String, Value>>),
}

fn csv_field(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn csv_rows(rows: &[Map<String, Value>]) -> String {
    let Some(first) = rows.first() else {
        return String::new();
    };
    let mut out = first.keys().cloned().collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.values().map(csv_field).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Report::Record(m), Format::Json) => format!("{}\n", Value::Object(m.clone())),
            (Report::Table(rows), Format::Json) => {
                let arr = Value::Array(rows.iter().cloned().map(Value::Object).collect());
                format!("{arr}\n")
            }
            (Report::Record(m), Format::Csv) => csv_rows(std::slice::from_ref(m)),
            (Report::Table(rows), Format::Csv) => csv_rows(rows),
        }
    }
}

/// Builds a JSON object from `key => value` pairs in order.
#[macro_export]
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::json!($v));)*
        m
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_nests() {
        let r = Report::Record(record! { "a" => 1, "b" => "x,y", "c" => [1, 2] });
        assert_eq!(r.render(Format::Csv), "a,b,c\n1,\"x,y\",\"[1,2]\"\n");
        assert_eq!(r.render(Format::Json), "{\"a\":1,\"b\":\"x,y\",\"c\":[1,2]}\n");
    }
}
