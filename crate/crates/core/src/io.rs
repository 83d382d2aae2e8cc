//! JSON reading and writing shared by the CLI and the Python bindings.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::geometry::{ConvexPolygon, Point};
use crate::{Error, Result};

/// Accepted polygon inputs: `{"vertices": [[x, y], ...]}` or a bare list of points.
#[derive(Deserialize)]
#[serde(untagged)]
enum PolygonInput {
    Object(ConvexPolygon),
    Bare(Vec<Point>),
}

pub fn parse_polygon(text: &str) -> Result<ConvexPolygon> {
    match serde_json::from_str::<PolygonInput>(text) {
        Ok(PolygonInput::Object(p)) => Ok(p),
        Ok(PolygonInput::Bare(v)) => ConvexPolygon::new(v),
        // untagged enums hide the validation message, so retry the object form for it
        Err(_) => serde_json::from_str::<ConvexPolygon>(text).map_err(|e| match validation_error(&e) {
            Some(msg) => Error::InvalidInput(msg),
            None => Error::Json(e),
        }),
    }
}

fn validation_error(e: &serde_json::Error) -> Option<String> {
    e.is_data().then(|| e.to_string())
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

pub fn read_polygon(path: &Path) -> Result<ConvexPolygon> {
    parse_polygon(&read_text(path)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json(value)?)
}
