//! One-dimensional result curves and their CSV form.
//!
//! ```text
//! # nefluct scalar curve
//! # abscissa: body_temperature [K]
//! # value: force [N]
//! # error: force_error [N]
//! # seed: 0
//! #| [thermal]
//! #| env = 300 K
//! body_temperature,force,force_error
//! 3e2,-1.234567890123e-25,1e-35
//! ```
//!
//! `# key: value` lines carry metadata, `#|` lines echo the config that
//! produced the file. Body numbers use the shortest exponent form that
//! reads back to the same `f64`.

use std::fmt::Write as _;

use thiserror::Error;

const MAGIC: &str = "# nefluct scalar curve";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{}{reason}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct CurveError {
    pub line: Option<usize>,
    pub reason: String,
}

fn fail<T>(line: Option<usize>, reason: impl Into<String>) -> Result<T, CurveError> {
    Err(CurveError { line, reason: reason.into() })
}

/// Name and unit of a column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column { name: name.to_string(), unit: unit.to_string() }
    }

    fn validate(&self) -> Result<(), CurveError> {
        let name_ok = !self.name.is_empty()
            && self.name.chars().all(|c| c.is_ascii_alphanumeric() || "_-.'".contains(c));
        if !name_ok {
            return fail(None, format!("column name `{}` must be non-empty [A-Za-z0-9_.'-]", self.name));
        }
        if self.unit.is_empty() || self.unit.contains(['[', ']', ',', '\n', '\r']) || self.unit.trim() != self.unit {
            return fail(None, format!("unit `{}` of `{}` is empty or malformed", self.unit, self.name));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("{} [{}]", self.name, self.unit)
    }

    fn parse(text: &str, line: usize) -> Result<Column, CurveError> {
        let Some((name, rest)) = text.split_once(" [") else {
            return fail(Some(line), format!("expected `name [unit]`, found `{text}`"));
        };
        let Some(unit) = rest.strip_suffix(']') else {
            return fail(Some(line), format!("unit of `{name}` lacks `]`"));
        };
        let c = Column::new(name, unit);
        c.validate().map_err(|e| CurveError { line: Some(line), reason: e.reason })?;
        Ok(c)
    }
}

/// y(x) on a strictly increasing grid, with an optional error column.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarCurve {
    abscissa: Column,
    value: Column,
    error: Option<Column>,
    rows: Vec<(f64, f64, Option<f64>)>,
    metadata: Vec<(String, String)>,
    echo: Vec<String>,
}

fn valid_meta_key(k: &str) -> bool {
    !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const RESERVED: [&str; 3] = ["abscissa", "value", "error"];

impl ScalarCurve {
    pub fn new(abscissa: Column, value: Column) -> Result<Self, CurveError> {
        abscissa.validate()?;
        value.validate()?;
        if abscissa.name == value.name {
            return fail(None, "abscissa and value columns share a name");
        }
        Ok(ScalarCurve { abscissa, value, error: None, rows: Vec::new(), metadata: Vec::new(), echo: Vec::new() })
    }

    /// Add an error column; only allowed while the curve is empty.
    pub fn with_error(mut self, error: Column) -> Result<Self, CurveError> {
        error.validate()?;
        if !self.rows.is_empty() {
            return fail(None, "error column must be declared before rows are added");
        }
        if error.name == self.abscissa.name || error.name == self.value.name {
            return fail(None, "error column name collides with another column");
        }
        self.error = Some(error);
        Ok(self)
    }

    /// Append a row; x must exceed the previous abscissa and all entries
    /// must be finite.
    pub fn push(&mut self, x: f64, y: f64, err: Option<f64>) -> Result<(), CurveError> {
        if !x.is_finite() || !y.is_finite() {
            return fail(None, format!("non-finite row ({x}, {y})"));
        }
        match (&self.error, err) {
            (Some(_), Some(e)) if !(e.is_finite() && e >= 0.0) => {
                return fail(None, format!("error {e} at x = {x} must be finite and non-negative"))
            }
            (Some(_), None) => return fail(None, "row lacks the declared error entry"),
            (None, Some(_)) => return fail(None, "row has an error entry but no error column"),
            _ => {}
        }
        if let Some(&(last, _, _)) = self.rows.last() {
            if !(x > last) {
                return fail(None, format!("abscissa {x} does not exceed previous {last}"));
            }
        }
        self.rows.push((x, y, err));
        Ok(())
    }

    /// Attach `key: value` metadata; later keys replace earlier ones.
    pub fn set_meta(&mut self, key: &str, value: impl ToString) -> Result<(), CurveError> {
        if !valid_meta_key(key) || RESERVED.contains(&key) {
            return fail(None, format!("metadata key `{key}` is reserved or malformed"));
        }
        let value = value.to_string();
        if value.contains(['\n', '\r']) {
            return fail(None, format!("metadata value for `{key}` spans lines"));
        }
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
        Ok(())
    }

    /// Attach the config echo, one text line per entry.
    pub fn set_echo(&mut self, text: &str) {
        self.echo = text.lines().map(str::to_string).collect();
    }

    pub fn abscissa(&self) -> &Column {
        &self.abscissa
    }

    pub fn value(&self) -> &Column {
        &self.value
    }

    pub fn error(&self) -> Option<&Column> {
        self.error.as_ref()
    }

    pub fn rows(&self) -> &[(f64, f64, Option<f64>)] {
        &self.rows
    }

    pub fn xs(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.0).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.1).collect()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn echo(&self) -> &[String] {
        &self.echo
    }

    /// Header row plus data rows, without any `#` line.
    pub fn body(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.abscissa.name);
        out.push(',');
        out.push_str(&self.value.name);
        if let Some(e) = &self.error {
            out.push(',');
            out.push_str(&e.name);
        }
        out.push('\n');
        for &(x, y, e) in &self.rows {
            let _ = write!(out, "{x:e},{y:e}");
            if let Some(e) = e {
                let _ = write!(out, ",{e:e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        let _ = writeln!(out, "# abscissa: {}", self.abscissa.describe());
        let _ = writeln!(out, "# value: {}", self.value.describe());
        if let Some(e) = &self.error {
            let _ = writeln!(out, "# error: {}", e.describe());
        }
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for l in &self.echo {
            if l.is_empty() {
                out.push_str("#|\n");
            } else {
                let _ = writeln!(out, "#| {l}");
            }
        }
        out.push_str(&self.body());
        out
    }

    /// Read a file written by [`ScalarCurve::to_csv`].
    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l == MAGIC => {}
            _ => return fail(Some(1), format!("first line must be `{MAGIC}`")),
        }
        let (mut abscissa, mut value, mut error) = (None, None, None);
        let mut metadata: Vec<(String, String)> = Vec::new();
        let mut echo = Vec::new();
        let mut header = None;
        for (n, l) in lines.by_ref() {
            if let Some(e) = l.strip_prefix("#|") {
                echo.push(e.strip_prefix(' ').unwrap_or(e).to_string());
                continue;
            }
            let Some(m) = l.strip_prefix("# ") else {
                if l.starts_with('#') {
                    return fail(Some(n), "metadata lines start with `# ` or `#|`");
                }
                header = Some((n, l));
                break;
            };
            let Some((k, v)) = m.split_once(": ") else {
                return fail(Some(n), format!("expected `# key: value`, found `{l}`"));
            };
            match k {
                "abscissa" | "value" | "error" => {
                    let slot = match k {
                        "abscissa" => &mut abscissa,
                        "value" => &mut value,
                        _ => &mut error,
                    };
                    if slot.is_some() {
                        return fail(Some(n), format!("duplicate `{k}` line"));
                    }
                    *slot = Some(Column::parse(v, n)?);
                }
                _ => {
                    if !valid_meta_key(k) {
                        return fail(Some(n), format!("malformed metadata key `{k}`"));
                    }
                    if metadata.iter().any(|(key, _)| key == k) {
                        return fail(Some(n), format!("duplicate metadata key `{k}`"));
                    }
                    metadata.push((k.to_string(), v.to_string()));
                }
            }
        }
        let (Some(abscissa), Some(value)) = (abscissa, value) else {
            return fail(None, "missing `# abscissa:` or `# value:` line");
        };
        let Some((hn, header)) = header else {
            return fail(None, "missing column header row");
        };
        let mut curve = ScalarCurve::new(abscissa, value).map_err(|e| CurveError { line: Some(hn), ..e })?;
        if let Some(e) = error {
            curve = curve.with_error(e).map_err(|e| CurveError { line: Some(hn), ..e })?;
        }
        let mut expected = vec![curve.abscissa.name.as_str(), curve.value.name.as_str()];
        if let Some(e) = &curve.error {
            expected.push(e.name.as_str());
        }
        if header.split(',').collect::<Vec<_>>() != expected {
            return fail(Some(hn), format!("header `{header}` does not match `{}`", expected.join(",")));
        }
        let width = expected.len();
        let mut rows = Vec::new();
        for (n, l) in lines {
            let cells: Vec<&str> = l.split(',').collect();
            if cells.len() != width {
                return fail(Some(n), format!("expected {width} fields, found {}", cells.len()));
            }
            let mut vals = [0.0; 3];
            for (slot, c) in vals.iter_mut().zip(&cells) {
                *slot = c.trim().parse::<f64>().or_else(|_| fail(Some(n), format!("`{c}` is not a number")))?;
            }
            rows.push((n, vals));
        }
        for (n, v) in rows {
            let err = (width == 3).then_some(v[2]);
            curve.push(v[0], v[1], err).map_err(|e| CurveError { line: Some(n), ..e })?;
        }
        curve.metadata = metadata;
        curve.echo = echo;
        Ok(curve)
    }
}
