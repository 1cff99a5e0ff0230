use serde::{Deserialize, Serialize};

use super::TemporalRelation;
use crate::error::{Error, Result};
use crate::formulas::{parse, relation_of};
use crate::orders::WeakOrder;

/// A finite list of named relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Language {
    relations: Vec<TemporalRelation>,
}

/// One relation of a language file: a formula, an orbit list, or both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationEntry {
    pub name: String,
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    /// Variable order for `formula`; defaults to order of first appearance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<WeakOrder>>,
}

/// On-disk language format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageFile {
    pub relations: Vec<RelationEntry>,
}

impl RelationEntry {
    pub fn to_relation(&self) -> Result<TemporalRelation> {
        let invalid = |msg: String| Error::InvalidLanguage(format!("relation `{}`: {msg}", self.name));
        let from_formula = match &self.formula {
            Some(text) => {
                let f = parse(text)?;
                let vars = self.vars.clone().unwrap_or_else(|| f.free_vars());
                if vars.len() != self.arity {
                    return Err(invalid(format!(
                        "formula has {} variables but arity is {}",
                        vars.len(),
                        self.arity
                    )));
                }
                Some(relation_of(&f, &vars)?)
            }
            None => None,
        };
        let from_orbits = match &self.orbits {
            Some(orbits) => Some(TemporalRelation::new(self.arity, orbits.iter().cloned())?),
            None => None,
        };
        let r = match (from_formula, from_orbits) {
            (Some(a), Some(b)) if a != b => return Err(invalid("formula and orbit list disagree".into())),
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(invalid("needs a formula or an orbit list".into())),
        };
        Ok(r.named(self.name.clone()))
    }
}

impl Language {
    /// Builds a language, dropping relations whose orbit set repeats an
    /// earlier one. Names must be present and distinct.
    pub fn new(relations: Vec<TemporalRelation>) -> Result<Self> {
        Ok(Language::with_warnings(relations)?.0)
    }

    /// Like [`Language::new`], also returning one warning per dropped
    /// duplicate.
    pub fn with_warnings(relations: Vec<TemporalRelation>) -> Result<(Self, Vec<String>)> {
        let mut kept: Vec<TemporalRelation> = Vec::new();
        let mut warnings = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for r in relations {
            let name = r
                .name()
                .ok_or_else(|| Error::InvalidLanguage("every relation needs a name".into()))?
                .to_string();
            if names.contains(&name) {
                return Err(Error::InvalidLanguage(format!("duplicate relation name `{name}`")));
            }
            names.push(name.clone());
            if let Some(prev) = kept.iter().find(|k| **k == r) {
                let msg = format!("relation `{name}` duplicates `{}`; dropped", prev.label());
                log::warn!("{msg}");
                warnings.push(msg);
                continue;
            }
            kept.push(r);
        }
        Ok((Language { relations: kept }, warnings))
    }

    pub fn from_file(file: &LanguageFile) -> Result<(Self, Vec<String>)> {
        let rels = file.relations.iter().map(RelationEntry::to_relation).collect::<Result<Vec<_>>>()?;
        Language::with_warnings(rels)
    }

    pub fn from_json(text: &str) -> Result<(Self, Vec<String>)> {
        let file: LanguageFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("line {}: {e}", e.line()),
        })?;
        Language::from_file(&file)
    }

    /// Serializable form listing orbits explicitly.
    pub fn to_file(&self) -> LanguageFile {
        LanguageFile {
            relations: self
                .relations
                .iter()
                .map(|r| RelationEntry {
                    name: r.label(),
                    arity: r.arity(),
                    formula: None,
                    vars: None,
                    orbits: Some(r.orbits().iter().cloned().collect()),
                })
                .collect(),
        }
    }

    pub fn relations(&self) -> &[TemporalRelation] {
        &self.relations
    }

    pub fn iter(&self) -> impl Iterator<Item = &TemporalRelation> {
        self.relations.iter()
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&TemporalRelation> {
        self.relations.iter().find(|r| r.name() == Some(name))
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(TemporalRelation::arity).max().unwrap_or(0)
    }

    /// The language of dual relations, under the same names.
    pub fn dual(&self) -> Language {
        Language {
            relations: self.relations.iter().map(TemporalRelation::dual).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::catalog;

    #[test]
    fn file_formats() {
        let text = r#"{"relations":[
            {"name":"betwc","arity":3,"formula":"(x<y&y<z)|(x>y&y>z)|(x=y&y=z)"},
            {"name":"lt","arity":2,"orbits":[[0,1]]},
            {"name":"le","arity":2,"formula":"y>=x","vars":["x","y"],"orbits":[[0,1],[0,0]]}
        ]}"#;
        let (lang, warnings) = Language::from_json(text).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(lang.get("betwc").unwrap(), &catalog::betwc());
        assert_eq!(lang.get("lt").unwrap(), &catalog::less());
        assert_eq!(lang.get("le").unwrap(), &catalog::leq());
    }

    #[test]
    fn rejects_disagreement_and_bad_arity() {
        let bad = r#"{"relations":[{"name":"r","arity":2,"formula":"x<y","orbits":[[0,0]]}]}"#;
        assert!(matches!(Language::from_json(bad), Err(Error::InvalidLanguage(_))));
        let bad = r#"{"relations":[{"name":"r","arity":3,"formula":"x<y"}]}"#;
        assert!(Language::from_json(bad).is_err());
        let bad = r#"{"relations":[{"name":"r","arity":2}]}"#;
        assert!(Language::from_json(bad).is_err());
        assert!(matches!(Language::from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn duplicates_are_dropped_with_warning() {
        let (lang, warnings) =
            Language::with_warnings(vec![catalog::leq(), catalog::less(), catalog::leq().named("le2")]).unwrap();
        assert_eq!(lang.len(), 2);
        assert_eq!(warnings.len(), 1);
        assert!(Language::new(vec![catalog::leq(), catalog::leq()]).is_err());
    }

    #[test]
    fn round_trip_through_file() {
        let lang = Language::new(vec![catalog::betwc(), catalog::sep()]).unwrap();
        let text = serde_json::to_string(&lang.to_file()).unwrap();
        assert_eq!(Language::from_json(&text).unwrap().0, lang);
    }
}
