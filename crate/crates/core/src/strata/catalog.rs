use std::sync::OnceLock;

use super::{Component, ComponentId};
use crate::exchange::{singularity_data, Permutation};

const CATALOG_TEXT: &str = include_str!("catalog.txt");

pub const CATALOG_VERSION: &str = "spectra component catalog v1";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog line {line}: {reason}")]
    Validation { line: usize, reason: String },
    #[error("catalog header missing or unsupported (expected {CATALOG_VERSION:?})")]
    Version,
    #[error("component {0} is not in the catalog")]
    UnknownComponent(String),
}

/// Every catalogued component, in table order (genus 2 to 5).
///
/// Each representative is checked at first use: it must be irreducible and
/// its suspension must land in the stratum it is listed under.
pub fn component_catalog() -> Result<&'static [Component], CatalogError> {
    static CATALOG: OnceLock<Result<Vec<Component>, CatalogError>> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(CATALOG_TEXT)).as_ref().map(|v| v.as_slice()).map_err(Clone::clone)
}

pub fn find_component(id: &ComponentId) -> Result<&'static Component, CatalogError> {
    component_catalog()?
        .iter()
        .find(|c| &c.id == id)
        .ok_or_else(|| CatalogError::UnknownComponent(id.to_string()))
}

pub(crate) fn parse_catalog(text: &str) -> Result<Vec<Component>, CatalogError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim_start_matches('#').trim() == CATALOG_VERSION => {}
        _ => return Err(CatalogError::Version),
    }
    let mut out = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| CatalogError::Validation { line: i + 1, reason };
        let (id, perm) = line.split_once('|').ok_or_else(|| bad("missing '|'".into()))?;
        let id: ComponentId = id.trim().parse().map_err(|e| bad(format!("{e}")))?;
        let representative: Permutation = perm.trim().parse().map_err(|e| bad(format!("{e}")))?;
        if !representative.is_irreducible() {
            return Err(bad(format!("{representative} is reducible")));
        }
        let found = singularity_data(&representative);
        if found != id.stratum {
            return Err(bad(format!("{representative} lies in {found}, not {}", id.stratum)));
        }
        if out.iter().any(|c: &Component| c.id == id) {
            return Err(bad(format!("duplicate entry {id}")));
        }
        out.push(Component { id, representative });
    }
    Ok(out)
}
