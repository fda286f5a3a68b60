//! JSON input schemas for groups and matrices.
//!
//! Exact rationals cross the boundary as "p/q" strings, never floats.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use atiyah_core::groups::Group;
use atiyah_core::groupring::{RingElement, RingMatrix};
use atiyah_core::scalar::{CycloScalar, FieldSpec};

use anyhow::{anyhow, bail, Context, Result};

/// A group described by constructors, an explicit table, or permutation
/// generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Dihedral { n: usize },
    Quaternion8,
    Product { factors: Vec<GroupSpec> },
    Semidirect {
        base: Box<GroupSpec>,
        acting: Box<GroupSpec>,
        action: Vec<Vec<u32>>,
    },
    Lamplighter { n: usize },
    Table { mul: Vec<Vec<u32>> },
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<Group> {
        let g = match self {
            GroupSpec::Cyclic { n } => Group::cyclic(*n)?,
            GroupSpec::Symmetric { n } => Group::symmetric(*n)?,
            GroupSpec::Dihedral { n } => Group::dihedral(*n)?,
            GroupSpec::Quaternion8 => Group::quaternion8()?,
            GroupSpec::Product { factors } => {
                let parts: Result<Vec<Group>> = factors.iter().map(|f| f.build()).collect();
                Group::product(&parts?)?
            }
            GroupSpec::Semidirect {
                base,
                acting,
                action,
            } => {
                let b = base.build()?;
                let h = acting.build()?;
                Group::semidirect(&b, &h, action)?
            }
            GroupSpec::Lamplighter { n } => Group::lamplighter_truncation(*n)?,
            GroupSpec::Table { mul } => Group::from_table(mul.clone(), "table")?,
            GroupSpec::Permutation { degree, generators } => {
                Group::from_permutations(*degree, generators)?
            }
        };
        Ok(g)
    }

    /// Emits a constructed group as an explicit table spec; re-parsing it
    /// yields the identical table under the deterministic labeling.
    pub fn table_of(group: &Group) -> GroupSpec {
        GroupSpec::Table {
            mul: group.mul_rows(),
        }
    }
}

/// One term of a matrix entry: a group element given by generator word or
/// raw index, with an exact scalar coefficient in text form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<u32>,
    pub coeff: String,
}

/// A matrix over the group algebra: per-entry term lists plus the field
/// conductor (1 is plain rationals).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub rows: usize,
    pub cols: usize,
    #[serde(default = "default_conductor")]
    pub conductor: u32,
    pub entries: Vec<Vec<Vec<TermSpec>>>,
}

fn default_conductor() -> u32 {
    1
}

impl MatrixSpec {
    pub fn build(&self, group: &Group) -> Result<(RingMatrix, Arc<FieldSpec>)> {
        let field = FieldSpec::new(self.conductor)?;
        if self.entries.len() != self.rows
            || self.entries.iter().any(|r| r.len() != self.cols)
        {
            bail!(
                "entries must be a {}x{} grid of term lists",
                self.rows,
                self.cols
            );
        }
        let mut rows = Vec::with_capacity(self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(self.cols);
            for (j, terms) in row.iter().enumerate() {
                let mut resolved = Vec::with_capacity(terms.len());
                for t in terms {
                    let elem = match (&t.word, t.element) {
                        (Some(w), None) => group
                            .resolve_word(w)
                            .with_context(|| format!("entry [{i}][{j}]"))?,
                        (None, Some(e)) => {
                            if e as usize >= group.order() {
                                bail!("entry [{i}][{j}]: element index {e} out of range");
                            }
                            e
                        }
                        _ => bail!("entry [{i}][{j}]: term needs exactly one of word/element"),
                    };
                    let coeff = CycloScalar::parse(&field, &t.coeff)
                        .with_context(|| format!("entry [{i}][{j}] coefficient '{}'", t.coeff))?;
                    resolved.push((elem, coeff));
                }
                out.push(RingElement::from_terms(group, &field, resolved)?);
            }
            rows.push(out);
        }
        Ok((RingMatrix::from_entries(rows)?, field))
    }
}

/// Loads and validates a (group, matrix) pair from JSON files.
pub fn parse_specs(
    group_path: &std::path::Path,
    matrix_path: &std::path::Path,
) -> Result<(Group, RingMatrix, Arc<FieldSpec>)> {
    let group = load_group(group_path)?;
    let text = std::fs::read_to_string(matrix_path)
        .with_context(|| format!("reading {}", matrix_path.display()))?;
    let spec: MatrixSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", matrix_path.display()))?;
    let (matrix, field) = spec.build(&group)?;
    Ok((group, matrix, field))
}

pub fn load_group(path: &std::path::Path) -> Result<Group> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let spec: GroupSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    spec.build()
}

pub fn load_matrix(
    path: &std::path::Path,
    group: &Group,
) -> Result<(RingMatrix, Arc<FieldSpec>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let spec: MatrixSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    spec.build(group)
}

/// Resolves a comma-separated list of generator words to element indices.
pub fn resolve_word_list(group: &Group, words: &str) -> Result<Vec<u32>> {
    words
        .split(',')
        .filter(|w| !w.trim().is_empty())
        .map(|w| {
            group
                .resolve_word(w.trim())
                .map_err(|e| anyhow!("word '{}': {e}", w.trim()))
        })
        .collect()
}
