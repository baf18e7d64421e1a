use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest representation that parses back to the same `f64`.
pub fn number(value: f64) -> String {
    if value.is_finite() {
        ryu::Buffer::new().format_finite(value).to_owned()
    } else {
        value.to_string()
    }
}

pub fn optional(value: Option<f64>) -> String {
    value.map(number).unwrap_or_default()
}

/// Rows that can be written as CSV under a fixed header.
pub trait CsvRow {
    fn fields(&self) -> Vec<String>;
}

pub fn csv<R: CsvRow>(header: &str, rows: &[R]) -> String {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.fields().join(","));
        text.push('\n');
    }
    text
}

#[derive(Serialize)]
struct Envelope<'a, C, R> {
    schema_version: u32,
    config: &'a C,
    results: &'a [R],
}

pub fn json<C: Serialize, R: Serialize>(
    config: &C,
    results: &[R],
) -> Result<String, serde_json::Error> {
    let mut text = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        config,
        results,
    })?;
    text.push('\n');
    Ok(text)
}
