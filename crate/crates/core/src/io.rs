//! JSON schemas for PMFs, guessing lists and families.
//!
//! ```json
//! {"x": ["a", "b"], "y": ["·"], "mass": [[0.5, 0.5]]}
//! {"x": ["a", "b"], "y": ["·"], "rank": [[2, 1]]}
//! {"members": [<pmf>, <pmf>]}
//! {"vertices": [<pmf>, <pmf>]}
//! ```
//!
//! `mass` and `rank` hold one row per `y` symbol. `y` may be omitted when there
//! is no side information. Unknown fields are rejected.

use std::sync::Arc;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::center::FamilySpec;
use crate::geometry::ConvexHullSet;
use crate::error::{Error, Result};
use crate::probkit::{Alphabet, Axis, GuessingList, JointPmf};

fn default_y() -> Vec<String> {
    vec!["·".into()]
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PmfDoc {
    x: Vec<String>,
    #[serde(default = "default_y")]
    y: Vec<String>,
    mass: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ListDoc {
    x: Vec<String>,
    #[serde(default = "default_y")]
    y: Vec<String>,
    rank: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    members: Vec<JointPmf>,
}

fn alphabet_of(x: Vec<String>, y: Vec<String>) -> Result<Arc<Alphabet>> {
    Ok(Arc::new(Alphabet::new(Axis::labels(x)?, Axis::labels(y)?)))
}

fn rows<T: Copy>(flat: &[T], nx: usize) -> Vec<Vec<T>> {
    flat.chunks(nx).map(<[T]>::to_vec).collect()
}

impl Serialize for JointPmf {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PmfDoc {
            x: self.alphabet().x().all_labels(),
            y: self.alphabet().y().all_labels(),
            mass: rows(self.mass(), self.nx()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointPmf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PmfDoc::deserialize(d)?;
        let al = alphabet_of(doc.x, doc.y).map_err(D::Error::custom)?;
        JointPmf::from_rows(al, &doc.mass).map_err(D::Error::custom)
    }
}

impl Serialize for GuessingList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ListDoc {
            x: self.alphabet().x().all_labels(),
            y: self.alphabet().y().all_labels(),
            rank: rows(self.ranks(), self.nx()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GuessingList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ListDoc::deserialize(d)?;
        let al = alphabet_of(doc.x, doc.y).map_err(D::Error::custom)?;
        if doc.rank.len() != al.ny() || doc.rank.iter().any(|r| r.len() != al.nx()) {
            return Err(D::Error::custom("rank rows do not match the alphabet"));
        }
        GuessingList::new(al, doc.rank.concat()).map_err(D::Error::custom)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = FamilyDoc::deserialize(d)?;
        FamilySpec::new(doc.members).map_err(D::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HullDoc {
    vertices: Vec<JointPmf>,
}

impl<'de> Deserialize<'de> for ConvexHullSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = HullDoc::deserialize(d)?;
        ConvexHullSet::new(doc.vertices).map_err(D::Error::custom)
    }
}

/// Parses a JSON document; syntax and schema errors carry line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty-printed JSON with shortest round-trip float formatting.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Ensures a parsed list shares the PMF's alphabet before use.
pub fn check_list_for(list: &GuessingList, pmf: &JointPmf) -> Result<()> {
    list.check_alphabet(pmf).map_err(|_| Error::AlphabetMismatch("list and PMF alphabets differ".into()))
}
