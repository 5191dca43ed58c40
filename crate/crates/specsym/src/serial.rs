//! Document model and JSON persistence for identities and chains.
//!
//! Documents are plain data: partitions as weakly decreasing integer
//! arrays, coefficients as canonical polynomial strings. Emitted JSON is
//! byte-deterministic (terms in canonical partition order, compact
//! encoding, fixed field order, trailing newline), so identical inputs
//! produce identical files and caches can be compared bytewise.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::forge::{ChainLevel, ChainResult};
use crate::partition::Partition;
use crate::poly::MultiPoly;
use crate::symfun::{MixedIdentity, PureIdentity};
use crate::Result;

/// Version stamp embedded in chain documents; bumped on any layout change.
pub const FORMAT_VERSION: u32 = 1;

/// One coefficient of an identity document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    /// Weakly decreasing positive parts; empty for the bare-`t` term.
    pub partition: Vec<u32>,
    /// Canonical polynomial string over the symbolic weights.
    pub coeff: String,
}

/// A pure or mixed identity in document form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityDoc {
    /// Either `"pure"` or `"mixed"`.
    pub kind: String,
    pub arity: u32,
    pub weight: u32,
    pub terms: Vec<TermDoc>,
}

fn terms_to_docs<'a>(
    terms: impl Iterator<Item = (&'a Partition, &'a MultiPoly)>,
) -> Vec<TermDoc> {
    terms
        .map(|(lambda, alpha)| TermDoc {
            partition: lambda.parts().to_vec(),
            coeff: alpha.to_string(),
        })
        .collect()
}

fn docs_to_terms(docs: &[TermDoc]) -> Result<Vec<(Partition, MultiPoly)>> {
    docs.iter()
        .map(|t| {
            let lambda = Partition::try_new(t.partition.clone())?;
            let alpha: MultiPoly = t.coeff.parse()?;
            Ok((lambda, alpha))
        })
        .collect()
}

impl IdentityDoc {
    pub fn from_pure(f: &PureIdentity) -> Self {
        IdentityDoc {
            kind: "pure".to_string(),
            arity: f.arity(),
            weight: f.weight(),
            terms: terms_to_docs(f.terms()),
        }
    }

    pub fn from_mixed(f: &MixedIdentity) -> Self {
        IdentityDoc {
            kind: "mixed".to_string(),
            arity: f.arity(),
            weight: f.weight(),
            terms: terms_to_docs(f.terms()),
        }
    }

    pub fn to_pure(&self) -> Result<PureIdentity> {
        if self.kind != "pure" {
            return Err(Error::InvalidDocument(format!(
                "expected a pure identity document, found kind {:?}",
                self.kind
            )));
        }
        PureIdentity::new(self.arity, self.weight, docs_to_terms(&self.terms)?)
    }

    pub fn to_mixed(&self) -> Result<MixedIdentity> {
        if self.kind != "mixed" {
            return Err(Error::InvalidDocument(format!(
                "expected a mixed identity document, found kind {:?}",
                self.kind
            )));
        }
        MixedIdentity::new(self.arity, self.weight, docs_to_terms(&self.terms)?)
    }
}

/// One chain level in document form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub arity: u32,
    pub lift_indices: Vec<u32>,
    pub mixed: IdentityDoc,
    pub pure: IdentityDoc,
}

/// A whole inductive chain in document form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDoc {
    pub format_version: u32,
    pub arity: u32,
    pub levels: Vec<LevelDoc>,
}

impl ChainDoc {
    pub fn from_chain(chain: &ChainResult) -> Self {
        ChainDoc {
            format_version: FORMAT_VERSION,
            arity: chain.arity(),
            levels: chain
                .levels()
                .iter()
                .map(|l| LevelDoc {
                    arity: l.arity,
                    lift_indices: l.lift_indices.clone(),
                    mixed: IdentityDoc::from_mixed(&l.mixed),
                    pure: IdentityDoc::from_pure(&l.pure),
                })
                .collect(),
        }
    }

    /// Rebuilds the chain, checking the version stamp and the structural
    /// weight laws. Does not re-verify the identities; see the chain
    /// verifier for that.
    pub fn to_chain(&self) -> Result<ChainResult> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidDocument(format!(
                "unsupported format_version {} (this build reads {})",
                self.format_version, FORMAT_VERSION
            )));
        }
        if self.arity as usize != self.levels.len() {
            return Err(Error::InvalidDocument(
                "declared arity disagrees with the level count".into(),
            ));
        }
        let levels = self
            .levels
            .iter()
            .map(|l| {
                Ok(ChainLevel {
                    arity: l.arity,
                    mixed: l.mixed.to_mixed()?,
                    pure: l.pure.to_pure()?,
                    lift_indices: l.lift_indices.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ChainResult::from_levels(levels)
    }
}

/// Canonical JSON encoding: compact, fixed field order, trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Cache file name for the arity-`k` chain under the current format.
pub fn chain_cache_filename(k: u32) -> String {
    format!("chain_k{k}.v{FORMAT_VERSION}.json")
}
