use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    /// Written with 9 significant digits.
    Num(f64),
    /// Written in shortest round-trip form, for table constants.
    Exact(f64),
    Int(u64),
    Empty,
}

impl Cell {
    pub fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => format!("{v:.8e}"),
            Cell::Exact(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // parse back the 9-digit text so JSON and CSV carry identical numbers
            Cell::Num(v) if v.is_finite() => serde_json::Number::from_f64(self.text().parse().expect("formatted f64"))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Exact(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Int(v) => Value::from(*v),
            Cell::Num(_) | Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Fixed-width text for terminals.
    pub fn pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |items: Vec<&str>| {
            items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
        };
        let mut out = line(self.columns.iter().map(String::as_str).collect());
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        out
    }
}

pub(super) fn render(table: &Table, metadata: &[(String, String)], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in metadata {
                out.push_str(&format!("# {k}: {v}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Io(e.to_string());
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::text)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            out.push_str(std::str::from_utf8(&bytes).expect("csv output is utf-8"));
            Ok(out)
        }
        Format::Json => {
            let meta: serde_json::Map<String, serde_json::Value> =
                metadata.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
            let rows: Vec<serde_json::Value> = table.rows.iter().map(|r| r.iter().map(Cell::json).collect()).collect();
            let doc = serde_json::json!({ "metadata": meta, "columns": table.columns, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}
