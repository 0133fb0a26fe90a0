//! Aligned-text rendering of the JSON reports.

use serde_json::Value;

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(", ")
        }
        other => other.to_string(),
    }
}

fn grid(rows: &[&serde_json::Map<String, Value>]) -> String {
    let mut columns: Vec<&String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| columns.iter().map(|c| r.get(*c).map(cell).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<&str>| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = vec![line(columns.iter().map(|c| c.as_str()).collect())];
    out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    for r in &cells {
        out.push(line(r.iter().map(String::as_str).collect()));
    }
    out.join("\n")
}

/// Scalars as `key: value` lines, arrays of objects as grids.
pub fn render(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut head = Vec::new();
            let mut tables = Vec::new();
            for (k, x) in map {
                match x {
                    Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                        let rows: Vec<_> = items.iter().filter_map(Value::as_object).collect();
                        tables.push(format!("{k}:\n{}", grid(&rows)));
                    }
                    other => head.push(format!("{k}: {}", cell(other))),
                }
            }
            head.into_iter().chain(tables).collect::<Vec<_>>().join("\n")
        }
        Value::Array(items) if items.iter().all(Value::is_object) => {
            grid(&items.iter().filter_map(Value::as_object).collect::<Vec<_>>())
        }
        other => cell(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn scalars_then_grids() {
        let v = json!({"count": 2, "rows": [{"a": 1, "b": "xy"}, {"a": 10, "b": "z"}]});
        assert_eq!(render(&v), "count: 2\nrows:\na   b\n--  --\n1   xy\n10  z");
    }
}
