//! The JSON problem document read by the command-line tool.
//!
//! ```json
//! {
//!   "schema": {
//!     "characteristics": [{ "name": "c1", "range": [1, 0], "reference": 1 }],
//!     "importance_order": ["c1"]
//!   },
//!   "atoms": [{ "id": "a", "profile": [1] }, { "id": "b", "profile": [0] }],
//!   "assessment": {
//!     "labelled": [{ "atoms": ["a"], "probability": 0.6 }, { "atoms": ["a", "b"], "probability": 0.3 }],
//!     "unmatched": 0.1
//!   },
//!   "utilities": {
//!     "u0": 0.0,
//!     "decisions": [{ "id": "d1", "utilities": { "a": 1.0, "b": 0.0 } }]
//!   },
//!   "unforeseen": [{ "name": "i1", "profile": [2] }]
//! }
//! ```
//!
//! `range` may be omitted and is then read off the atoms. Without
//! `importance_order` the characteristics are ranked from the utilities (or
//! kept in declaration order when there are none). The assessment holds either
//! `labelled` probabilities plus the `unmatched` probability of events that
//! resemble nothing foreseen, or already-conditioned `masses`. The optional
//! `baseline` section gives atom probabilities and a lumped `unforeseen`
//! probability for the single-unforeseen-event evaluator.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::belief::MassFunction;
use crate::decision::{OutcomeProbabilities, UtilityTable};
use crate::event_space::{
    rank_characteristics, Atom, Characteristic, CharacteristicSchema, EventSpace,
    ImportanceRanking, Level,
};
use crate::unforeseen::{condition_on_foreseeable, RawAssessment, UnforeseenProfile};
use crate::{Error, Subset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub schema: SchemaDoc,
    pub atoms: Vec<AtomDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assessment: Option<AssessmentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<UtilitiesDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unforeseen: Vec<UnforeseenDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaDoc {
    pub characteristics: Vec<CharacteristicDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance_order: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacteristicDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<Vec<Level>>,
    pub reference: Level,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub id: String,
    pub profile: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labelled: Option<Vec<LabelledDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unmatched: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<MassDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelledDoc {
    pub atoms: Vec<String>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassDoc {
    pub atoms: Vec<String>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilitiesDoc {
    pub u0: f64,
    pub decisions: Vec<DecisionDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDoc {
    pub id: String,
    pub utilities: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnforeseenDoc {
    pub name: String,
    pub profile: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineDoc {
    pub atoms: BTreeMap<String, f64>,
    pub unforeseen: f64,
}

/// Why a document could not be read at all.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ProblemDocument {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(|e| LoadError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Checks every section, collecting all diagnostics. The model is
    /// returned only when there are no errors.
    pub fn validate(&self) -> Validation {
        let mut diags = Diagnostics::default();
        let atom_index: HashMap<&str, usize> = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), i))
            .collect();
        let n = self.atoms.len();

        let space = self.build_space(&mut diags);
        let utilities = self
            .utilities
            .as_ref()
            .and_then(|u| build_utilities(u, &self.atoms, &atom_index, &mut diags));
        let assessment = self
            .assessment
            .as_ref()
            .and_then(|a| build_assessment(a, n, &atom_index, &mut diags));
        let baseline = self
            .baseline
            .as_ref()
            .and_then(|b| build_baseline(b, &self.atoms, &atom_index, &mut diags));

        let m = self.schema.characteristics.len();
        let mut unforeseen = Vec::new();
        for u in &self.unforeseen {
            if u.profile.len() != m {
                diags.error(
                    "unforeseen",
                    &Error::ProfileLengthMismatch {
                        expected: m,
                        found: u.profile.len(),
                    },
                    Some(&u.name),
                );
            }
            unforeseen.push((u.name.clone(), UnforeseenProfile::new(u.profile.clone())));
        }

        let mut importance = None;
        let space = match (space, &utilities) {
            (Some(space), Some(u)) if self.schema.importance_order.is_none() => {
                match rank_characteristics(&space, u) {
                    Ok(ranking) => {
                        for &j in &ranking.missing_sweeps {
                            diags.warning(
                                "schema",
                                "NoReferenceSweep",
                                format!(
                                    "no atom matches the reference profile away from `{}`; its importance is 0",
                                    space.schema().characteristics()[j].name
                                ),
                            );
                        }
                        let ranked = space
                            .with_importance_order(ranking.order.clone())
                            .expect("ranking is a permutation");
                        importance = Some(ranking);
                        Some(ranked)
                    }
                    Err(e) => {
                        diags.error("utilities", &e, None);
                        None
                    }
                }
            }
            (space, _) => space,
        };

        let problem = match space {
            Some(space) if !diags.has_errors() => Some(Problem {
                space,
                utilities,
                assessment,
                baseline,
                unforeseen,
                importance,
            }),
            _ => None,
        };
        Validation {
            diagnostics: diags.0,
            problem,
        }
    }

    fn build_space(&self, diags: &mut Diagnostics) -> Option<EventSpace> {
        let characteristics: Vec<Characteristic> = self
            .schema
            .characteristics
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let range = c.range.clone().unwrap_or_else(|| {
                    let mut range: Vec<Level> = Vec::new();
                    let mut seen = HashSet::new();
                    for a in &self.atoms {
                        if let Some(v) = a.profile.get(k) {
                            if seen.insert(v) {
                                range.push(v.clone());
                            }
                        }
                    }
                    range
                });
                Characteristic {
                    name: c.name.clone(),
                    range,
                    reference: c.reference.clone(),
                }
            })
            .collect();

        let order = match &self.schema.importance_order {
            None => None,
            Some(names) => {
                let mut order = Vec::with_capacity(names.len());
                for name in names {
                    match self
                        .schema
                        .characteristics
                        .iter()
                        .position(|c| &c.name == name)
                    {
                        Some(k) => order.push(k),
                        None => {
                            diags.push(
                                Severity::Error,
                                "schema",
                                "UnknownCharacteristic",
                                format!("importance order names unknown characteristic `{name}`"),
                            );
                            return None;
                        }
                    }
                }
                Some(order)
            }
        };

        let schema = match CharacteristicSchema::new(characteristics, order) {
            Ok(s) => s,
            Err(e) => {
                diags.error("schema", &e, None);
                return None;
            }
        };
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                id: a.id.clone(),
                profile: a.profile.clone(),
            })
            .collect();
        match EventSpace::new(schema, atoms) {
            Ok(space) => Some(space),
            Err(e) => {
                let section = match e {
                    Error::RangeMismatch(_) => "schema",
                    _ => "atoms",
                };
                diags.error(section, &e, None);
                None
            }
        }
    }

    /// Copy with inferred ranges and the importance order in use written out.
    pub fn normalized(&self, problem: &Problem) -> ProblemDocument {
        let schema = problem.space.schema();
        let mut doc = self.clone();
        doc.schema = SchemaDoc {
            characteristics: schema
                .characteristics()
                .iter()
                .map(|c| CharacteristicDoc {
                    name: c.name.clone(),
                    range: Some(c.range.clone()),
                    reference: c.reference.clone(),
                })
                .collect(),
            importance_order: Some(
                schema
                    .importance_order()
                    .iter()
                    .map(|&k| schema.characteristics()[k].name.clone())
                    .collect(),
            ),
        };
        doc
    }
}

fn resolve(
    ids: &[String],
    atom_index: &HashMap<&str, usize>,
    section: &str,
    diags: &mut Diagnostics,
) -> Option<Subset> {
    let mut indices = Vec::with_capacity(ids.len());
    let mut ok = true;
    for id in ids {
        match atom_index.get(id.as_str()) {
            Some(&i) => indices.push(i),
            None => {
                diags.error(section, &Error::UnknownAtom(id.clone()), None);
                ok = false;
            }
        }
    }
    ok.then(|| Subset::from_indices(indices))
}

fn build_assessment(
    doc: &AssessmentDoc,
    n: usize,
    atom_index: &HashMap<&str, usize>,
    diags: &mut Diagnostics,
) -> Option<Assessment> {
    const SECTION: &str = "assessment";
    match (&doc.labelled, &doc.masses) {
        (Some(labelled), None) => {
            let entries: Option<Vec<_>> = labelled
                .iter()
                .map(|l| resolve(&l.atoms, atom_index, SECTION, diags).map(|s| (s, l.probability)))
                .collect();
            let raw = RawAssessment::new(n, entries?, doc.unmatched.unwrap_or(0.0));
            match raw.and_then(|raw| condition_on_foreseeable(&raw).map(|mf| (raw, mf))) {
                Ok((raw, mass)) => Some(Assessment {
                    raw: Some(raw),
                    mass,
                }),
                Err(e) => {
                    diags.error(SECTION, &e, None);
                    None
                }
            }
        }
        (None, Some(masses)) => {
            if doc.unmatched.is_some() {
                diags.push(
                    Severity::Error,
                    SECTION,
                    "AmbiguousAssessment",
                    "`unmatched` applies to `labelled` probabilities, not to conditioned `masses`"
                        .into(),
                );
                return None;
            }
            let entries: Option<Vec<_>> = masses
                .iter()
                .map(|l| resolve(&l.atoms, atom_index, SECTION, diags).map(|s| (s, l.mass)))
                .collect();
            match MassFunction::new(n, entries?) {
                Ok(mass) => Some(Assessment { raw: None, mass }),
                Err(e) => {
                    diags.error(SECTION, &e, None);
                    None
                }
            }
        }
        _ => {
            diags.push(
                Severity::Error,
                SECTION,
                "AmbiguousAssessment",
                "give exactly one of `labelled` or `masses`".into(),
            );
            None
        }
    }
}

fn build_utilities(
    doc: &UtilitiesDoc,
    atoms: &[AtomDoc],
    atom_index: &HashMap<&str, usize>,
    diags: &mut Diagnostics,
) -> Option<UtilityTable> {
    const SECTION: &str = "utilities";
    let before = diags.error_count();
    let mut seen = HashSet::new();
    let mut rows = Vec::with_capacity(doc.decisions.len());
    for d in &doc.decisions {
        if !seen.insert(d.id.as_str()) {
            diags.push(
                Severity::Error,
                SECTION,
                "DuplicateDecision",
                format!("decision `{}` appears more than once", d.id),
            );
        }
        for id in d.utilities.keys() {
            if !atom_index.contains_key(id.as_str()) {
                diags.error(SECTION, &Error::UnknownAtom(id.clone()), Some(&d.id));
            }
        }
        let mut row = Vec::with_capacity(atoms.len());
        for a in atoms {
            match d.utilities.get(&a.id) {
                Some(&v) => row.push(v),
                None => diags.push(
                    Severity::Error,
                    SECTION,
                    "MissingUtility",
                    format!("decision `{}` has no utility for atom `{}`", d.id, a.id),
                ),
            }
        }
        rows.push(row);
    }
    if diags.error_count() > before {
        return None;
    }
    let names = doc.decisions.iter().map(|d| d.id.clone()).collect();
    match UtilityTable::new(names, rows, doc.u0) {
        Ok(table) => Some(table),
        Err(e) => {
            diags.error(SECTION, &e, None);
            None
        }
    }
}

fn build_baseline(
    doc: &BaselineDoc,
    atoms: &[AtomDoc],
    atom_index: &HashMap<&str, usize>,
    diags: &mut Diagnostics,
) -> Option<OutcomeProbabilities> {
    const SECTION: &str = "baseline";
    let before = diags.error_count();
    for id in doc.atoms.keys() {
        if !atom_index.contains_key(id.as_str()) {
            diags.error(SECTION, &Error::UnknownAtom(id.clone()), None);
        }
    }
    if diags.error_count() > before {
        return None;
    }
    let probs = atoms
        .iter()
        .map(|a| doc.atoms.get(&a.id).copied().unwrap_or(0.0))
        .collect();
    match OutcomeProbabilities::new(probs, doc.unforeseen) {
        Ok(p) => Some(p),
        Err(e) => {
            diags.error(SECTION, &e, None);
            None
        }
    }
}

/// A validated assessment: the conditioned mass function, and the raw label
/// probabilities when the document supplied them.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub raw: Option<RawAssessment>,
    pub mass: MassFunction,
}

/// In-memory model of a valid document.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub space: EventSpace,
    pub utilities: Option<UtilityTable>,
    pub assessment: Option<Assessment>,
    pub baseline: Option<OutcomeProbabilities>,
    pub unforeseen: Vec<(String, UnforeseenProfile)>,
    /// Present when the importance order was computed from the utilities.
    pub importance: Option<ImportanceRanking>,
}

impl Problem {
    /// Probabilities for the single-unforeseen-event evaluator: the
    /// `baseline` section if given, otherwise each atom gets the probability
    /// of its own singleton label and everything else counts as unforeseen.
    pub fn baseline_probabilities(&self) -> Option<OutcomeProbabilities> {
        if let Some(b) = &self.baseline {
            return Some(b.clone());
        }
        let assessment = self.assessment.as_ref()?;
        let n = self.space.atom_count();
        let mut atoms = vec![0.0; n];
        let labelled: &[(Subset, f64)] = match &assessment.raw {
            Some(raw) => raw.labelled(),
            None => assessment.mass.focal_elements(),
        };
        for (s, p) in labelled {
            if s.len() == 1 {
                atoms[s.max_index().expect("singleton")] += p;
            }
        }
        let unforeseen = (1.0 - atoms.iter().sum::<f64>()).max(0.0);
        OutcomeProbabilities::new(atoms, unforeseen).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub section: String,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Default)]
struct Diagnostics(Vec<Diagnostic>);

impl Diagnostics {
    fn push(&mut self, severity: Severity, section: &str, code: &str, message: String) {
        self.0.push(Diagnostic {
            severity,
            section: section.to_string(),
            code: code.to_string(),
            message,
        });
    }

    fn error(&mut self, section: &str, e: &Error, context: Option<&str>) {
        let message = match context {
            Some(c) => format!("{c}: {e}"),
            None => e.to_string(),
        };
        self.push(Severity::Error, section, e.code(), message);
    }

    fn warning(&mut self, section: &str, code: &str, message: String) {
        self.push(Severity::Warning, section, code, message);
    }

    fn error_count(&self) -> usize {
        self.0
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .count()
    }

    fn has_errors(&self) -> bool {
        self.error_count() > 0
    }
}

#[derive(Debug, Clone)]
pub struct Validation {
    pub diagnostics: Vec<Diagnostic>,
    pub problem: Option<Problem>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.problem.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = r#"{
      "schema": { "characteristics": [
        { "name": "c1", "reference": 1 },
        { "name": "c2", "reference": 1 },
        { "name": "c3", "reference": 1 } ],
        "importance_order": ["c1", "c2", "c3"] },
      "atoms": [
        { "id": "a", "profile": [1, 1, 1] },
        { "id": "b", "profile": [1, 1, 0] },
        { "id": "c", "profile": [0, 0, 1] } ],
      "assessment": { "labelled": [
        { "atoms": ["a"], "probability": 0.4 },
        { "atoms": ["a", "b"], "probability": 0.24 },
        { "atoms": ["a", "b", "c"], "probability": 0.16 } ], "unmatched": 0.2 },
      "utilities": { "u0": 0, "decisions": [
        { "id": "d1", "utilities": { "a": 1, "b": 0, "c": 0 } } ] }
    }"#;

    fn codes(v: &Validation) -> Vec<&str> {
        v.diagnostics.iter().map(|d| d.code.as_str()).collect()
    }

    #[test]
    fn worked_document_is_valid() {
        let doc = ProblemDocument::parse(WORKED).unwrap();
        let v = doc.validate();
        assert!(v.is_valid(), "{:?}", v.diagnostics);
        let p = v.problem.unwrap();
        let mass = &p.assessment.unwrap().mass;
        assert!((mass.mass(&Subset::singleton(0)) - 0.5).abs() < 1e-12);
        assert_eq!(
            p.space.schema().characteristics()[2].range,
            vec![Level::Int(1), Level::Int(0)]
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        match ProblemDocument::parse("{\n  \"schema\": [") {
            Err(LoadError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_normalized_names_section() {
        let text = WORKED.replace("\"unmatched\": 0.2", "\"unmatched\": 0.1");
        let v = ProblemDocument::parse(&text).unwrap().validate();
        assert!(!v.is_valid());
        assert_eq!(codes(&v), vec!["NotNormalized"]);
        assert_eq!(v.diagnostics[0].section, "assessment");
    }

    #[test]
    fn unknown_atoms_are_reported() {
        let text = WORKED.replace("\"atoms\": [\"a\", \"b\"]", "\"atoms\": [\"a\", \"zz\"]");
        let v = ProblemDocument::parse(&text).unwrap().validate();
        assert_eq!(codes(&v), vec!["UnknownAtom"]);

        let text = WORKED.replace("\"b\": 0, \"c\": 0", "\"b\": 0");
        let v = ProblemDocument::parse(&text).unwrap().validate();
        assert_eq!(codes(&v), vec!["MissingUtility"]);
        assert_eq!(v.diagnostics[0].section, "utilities");
    }

    #[test]
    fn importance_inferred_from_utilities() {
        let text = WORKED.replace(
            ",\n        \"importance_order\": [\"c1\", \"c2\", \"c3\"] }",
            " }",
        );
        let doc = ProblemDocument::parse(&text).unwrap();
        assert!(doc.schema.importance_order.is_none());
        let v = doc.validate();
        assert!(v.is_valid(), "{:?}", v.diagnostics);
        let p = v.problem.unwrap();
        // Reference (1,1,1): sweeps are {a,c?}: c1 -> {a} only, c2 -> {a}, c3 -> {a,b}.
        let ranking = p.importance.unwrap();
        assert_eq!(ranking.importance, vec![0.0, 0.0, 1.0]);
        assert_eq!(p.space.schema().importance_order(), &[2, 0, 1]);
    }

    #[test]
    fn normalized_echo_round_trips() {
        let doc = ProblemDocument::parse(WORKED).unwrap();
        let problem = doc.validate().problem.unwrap();
        let echoed = doc.normalized(&problem).to_json();
        let again = ProblemDocument::parse(&echoed).unwrap();
        assert_eq!(again.validate().problem.unwrap(), problem);
    }

    #[test]
    fn derived_baseline() {
        let p = ProblemDocument::parse(WORKED)
            .unwrap()
            .validate()
            .problem
            .unwrap();
        let b = p.baseline_probabilities().unwrap();
        assert_eq!(b.atoms(), &[0.4, 0.0, 0.0]);
        assert!((b.unforeseen() - 0.6).abs() < 1e-12);
    }
}
