//! Publication and institution ingestion.
//!
//! Publications arrive as line-delimited JSON, institutions as CSV. Parsing
//! collapses same-institution author entries into one affiliation per record
//! (corresponding flag OR-ed across the institution's authors): everything
//! downstream operates at institution level. Validation keeps records with
//! at least two distinct resolvable institutions and at least one
//! corresponding affiliation; everything else lands in the report with a
//! reason.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::GeoPoint;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("institutions csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("institution {id:?}: {message}")]
    InvalidInstitution { id: String, message: String },
    #[error("duplicate institution id {0:?}")]
    DuplicateInstitution(String),
    #[error("institutions csv: header must be id,name,lat,lon,country")]
    BadHeader,
}

/// One research institution with pre-resolved coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Institution {
    pub id: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    /// ISO-3166 alpha-2 country code, upper-cased at load time.
    pub country: String,
}

impl Institution {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        lat: f64,
        lon: f64,
        country: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let inst = Self {
            id: id.into(),
            name: name.into(),
            lat,
            lon,
            country: country.into().trim().to_uppercase(),
        };
        inst.validate()?;
        Ok(inst)
    }

    fn validate(&self) -> Result<(), CorpusError> {
        let fail = |message: String| CorpusError::InvalidInstitution {
            id: self.id.clone(),
            message,
        };
        if self.id.is_empty() {
            return Err(fail("empty id".into()));
        }
        if let Err(e) = GeoPoint::new(self.lat, self.lon) {
            return Err(fail(e.to_string()));
        }
        if self.country.is_empty() {
            return Err(fail("empty country".into()));
        }
        Ok(())
    }

    pub fn point(&self) -> GeoPoint {
        GeoPoint {
            lat: self.lat,
            lon: self.lon,
        }
    }
}

/// Institutions indexed by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstitutionTable {
    by_id: BTreeMap<String, Institution>,
}

impl InstitutionTable {
    pub fn new(institutions: impl IntoIterator<Item = Institution>) -> Result<Self, CorpusError> {
        let mut table = Self::default();
        for inst in institutions {
            table.insert(inst)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, inst: Institution) -> Result<(), CorpusError> {
        inst.validate()?;
        if self.by_id.contains_key(&inst.id) {
            return Err(CorpusError::DuplicateInstitution(inst.id));
        }
        self.by_id.insert(inst.id.clone(), inst);
        Ok(())
    }

    /// Reads the CSV format `id,name,lat,lon,country` (header required,
    /// quoted names allowed).
    pub fn from_csv_reader<R: io::Read>(reader: R) -> Result<Self, CorpusError> {
        let mut csv_reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        {
            let headers = csv_reader.headers()?;
            let expected = ["id", "name", "lat", "lon", "country"];
            if headers.len() != expected.len()
                || headers.iter().zip(expected).any(|(h, e)| h != e)
            {
                return Err(CorpusError::BadHeader);
            }
        }

        let mut table = Self::default();
        for row in csv_reader.deserialize::<CsvInstitution>() {
            let row = row?;
            table.insert(Institution::new(
                row.id, row.name, row.lat, row.lon, row.country,
            )?)?;
        }
        Ok(table)
    }

    pub fn get(&self, id: &str) -> Option<&Institution> {
        self.by_id.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.by_id.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Institution> {
        self.by_id.values()
    }
}

#[derive(Debug, Deserialize)]
struct CsvInstitution {
    id: String,
    name: String,
    lat: f64,
    lon: f64,
    country: String,
}

/// One publication, already collapsed to institution level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    pub year: i32,
    pub field: String,
    pub citations: u64,
    pub altmetrics: u64,
    /// `(institution_id, is_corresponding)`, one entry per distinct
    /// institution in first-appearance order.
    pub affiliations: Vec<(String, bool)>,
}

impl PublicationRecord {
    /// Collapses duplicate institution entries: one entry per distinct id in
    /// first-appearance order, corresponding flag OR-ed.
    fn normalize(mut self) -> Self {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        let mut collapsed: Vec<(String, bool)> = Vec::with_capacity(self.affiliations.len());
        for (id, flag) in self.affiliations.drain(..) {
            match seen.get(&id) {
                Some(&idx) => collapsed[idx].1 |= flag,
                None => {
                    seen.insert(id.clone(), collapsed.len());
                    collapsed.push((id, flag));
                }
            }
        }
        self.affiliations = collapsed;
        self
    }

    pub fn distinct_institutions(&self) -> impl Iterator<Item = &str> {
        self.affiliations.iter().map(|(id, _)| id.as_str())
    }

    pub fn has_corresponding(&self) -> bool {
        self.affiliations.iter().any(|&(_, flag)| flag)
    }
}

/// A malformed input line: the line number (1-based) and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseLineError {
    pub line: usize,
    pub message: String,
}

/// Records parsed from a stream plus per-line errors; malformed lines never
/// abort the whole parse.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedPublications {
    pub records: Vec<PublicationRecord>,
    pub errors: Vec<ParseLineError>,
}

/// Parses line-delimited publication records. Record order follows input
/// order; each malformed line produces one error entry.
pub fn parse_publications<R: BufRead>(reader: R) -> io::Result<ParsedPublications> {
    let mut out = ParsedPublications::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        parse_line(&line, idx + 1, &mut out);
    }
    Ok(out)
}

/// [`parse_publications`] over an in-memory string.
pub fn parse_publications_str(input: &str) -> ParsedPublications {
    let mut out = ParsedPublications::default();
    for (idx, line) in input.lines().enumerate() {
        parse_line(line, idx + 1, &mut out);
    }
    out
}

fn parse_line(line: &str, line_no: usize, out: &mut ParsedPublications) {
    if line.trim().is_empty() {
        out.errors.push(ParseLineError {
            line: line_no,
            message: "empty line".into(),
        });
        return;
    }
    match serde_json::from_str::<PublicationRecord>(line) {
        Ok(record) => out.records.push(record.normalize()),
        Err(e) => out.errors.push(ParseLineError {
            line: line_no,
            message: e.to_string(),
        }),
    }
}

/// Serializes records back to the line-delimited format, one JSON object per
/// line. `parse(serialize(parse(x)))` equals `parse(x)`.
pub fn serialize_publications(records: &[PublicationRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Why a record was dropped during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    UnknownInstitution,
    SingleInstitution,
    NoCorresponding,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DropReason::UnknownInstitution => "unknown-institution",
            DropReason::SingleInstitution => "single-institution",
            DropReason::NoCorresponding => "no-corresponding",
        };
        f.write_str(s)
    }
}

/// Outcome of [`validate_corpus`]: dropped and accepted partition the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub record_count: usize,
    pub dropped: Vec<(String, DropReason)>,
    /// Distinct institutions appearing in the accepted records.
    pub distinct_institutions: usize,
}

/// Keeps records with >= 2 distinct resolvable institutions and >= 1
/// corresponding affiliation. Never fails: every problem becomes a dropped
/// entry. Reason precedence: unknown-institution, single-institution,
/// no-corresponding.
pub fn validate_corpus(
    records: &[PublicationRecord],
    institutions: &InstitutionTable,
) -> (Vec<PublicationRecord>, ValidationReport) {
    let mut accepted = Vec::new();
    let mut dropped = Vec::new();
    let mut seen_institutions: BTreeSet<&str> = BTreeSet::new();

    for record in records {
        let reason = if record
            .distinct_institutions()
            .any(|id| !institutions.contains(id))
        {
            Some(DropReason::UnknownInstitution)
        } else if record.distinct_institutions().count() < 2 {
            Some(DropReason::SingleInstitution)
        } else if !record.has_corresponding() {
            Some(DropReason::NoCorresponding)
        } else {
            None
        };

        match reason {
            Some(reason) => dropped.push((record.id.clone(), reason)),
            None => {
                seen_institutions.extend(record.distinct_institutions());
                accepted.push(record.clone());
            }
        }
    }

    let report = ValidationReport {
        record_count: records.len(),
        dropped,
        distinct_institutions: seen_institutions.len(),
    };
    (accepted, report)
}

/// Per-institution publication statistics over the accepted records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstitutionStats {
    pub institution_id: String,
    /// Number of accepted records the institution appears in (each record
    /// counts once even when several of its authors share the institution).
    pub publication_count: usize,
    pub citation_list: Vec<u64>,
    pub altmetrics_list: Vec<u64>,
}

/// Statistics per institution; institutions absent from every accepted
/// record are absent from the map.
pub fn institution_stats(records: &[PublicationRecord]) -> BTreeMap<String, InstitutionStats> {
    let mut stats: BTreeMap<String, InstitutionStats> = BTreeMap::new();
    for record in records {
        for id in record.distinct_institutions() {
            let entry = stats
                .entry(id.to_string())
                .or_insert_with(|| InstitutionStats {
                    institution_id: id.to_string(),
                    publication_count: 0,
                    citation_list: Vec::new(),
                    altmetrics_list: Vec::new(),
                });
            entry.publication_count += 1;
            entry.citation_list.push(record.citations);
            entry.altmetrics_list.push(record.altmetrics);
        }
    }
    stats
}
