//! Journal metadata, dated citation records and the windowed citation matrix.
//!
//! Input is CSV with a mandatory header row:
//!
//! ```text
//! journals.csv   journal_id,name,fields,year,articles
//! citations.csv  citing_id,cited_id,citing_year,cited_year,count
//! ```
//!
//! `fields` is a `;`-separated list of field labels. A journal contributes one
//! row per publication year; rows sharing a `journal_id` are merged.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Read;

use crate::error::{Error, Result};

pub const JOURNAL_HEADER: [&str; 5] = ["journal_id", "name", "fields", "year", "articles"];
pub const CITATION_HEADER: [&str; 5] = ["citing_id", "cited_id", "citing_year", "cited_year", "count"];
pub const BIGMAC_HEADER: [&str; 3] = ["country", "burger_price", "hourly_wage"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalEntry {
    pub journal_id: String,
    pub name: String,
    pub fields: BTreeSet<String>,
    pub articles_by_year: BTreeMap<i32, u64>,
}

impl JournalEntry {
    /// Articles published in the inclusive year range `[from, to]`.
    pub fn articles_between(&self, from: i32, to: i32) -> u64 {
        if from > to {
            return 0;
        }
        self.articles_by_year.range(from..=to).map(|(_, n)| *n).sum()
    }
}

/// Journals in first-seen order, indexed by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JournalTable {
    entries: Vec<JournalEntry>,
    index: HashMap<String, usize>,
}

impl JournalTable {
    pub fn new(entries: Vec<JournalEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.journal_id.is_empty() {
                return Err(Error::Validation(format!("journal #{} has an empty id", i + 1)));
            }
            if e.fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Validation(format!(
                    "journal {} has an empty field label",
                    e.journal_id
                )));
            }
            if index.insert(e.journal_id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate journal id {}", e.journal_id)));
            }
        }
        Ok(Self { entries, index })
    }

    pub fn entries(&self) -> &[JournalEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, journal_id: &str) -> Option<usize> {
        self.index.get(journal_id).copied()
    }

    pub fn get(&self, journal_id: &str) -> Option<&JournalEntry> {
        self.index_of(journal_id).map(|i| &self.entries[i])
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.journal_id.as_str())
    }

    /// Every field label used by at least one journal, sorted.
    pub fn field_labels(&self) -> BTreeSet<&str> {
        self.entries
            .iter()
            .flat_map(|e| e.fields.iter().map(String::as_str))
            .collect()
    }

    /// Indices of journals listed under `field`.
    pub fn members(&self, field: &str) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.fields.contains(field))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(JOURNAL_HEADER).expect("in-memory write");
        for e in &self.entries {
            let fields = e.fields.iter().cloned().collect::<Vec<_>>().join(";");
            for (year, n) in &e.articles_by_year {
                w.write_record([
                    e.journal_id.as_str(),
                    e.name.as_str(),
                    fields.as_str(),
                    &year.to_string(),
                    &n.to_string(),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationRecord {
    pub citing_id: String,
    pub cited_id: String,
    pub citing_year: i32,
    pub cited_year: i32,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationLedger {
    pub records: Vec<CitationRecord>,
}

/// Non-fatal findings from [`CitationLedger::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LedgerReport {
    /// Indices of records citing an article from the future
    /// (`cited_year > citing_year`).
    pub future_citations: Vec<usize>,
}

impl CitationLedger {
    pub fn new(records: Vec<CitationRecord>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Checks every id against `table`. Unknown ids are an error listing all
    /// offenders; time-travelling records are only flagged.
    pub fn validate(&self, table: &JournalTable) -> Result<LedgerReport> {
        let mut unknown = BTreeSet::new();
        let mut report = LedgerReport::default();
        for (i, r) in self.records.iter().enumerate() {
            for id in [&r.citing_id, &r.cited_id] {
                if table.index_of(id).is_none() {
                    unknown.insert(id.as_str());
                }
            }
            if r.cited_year > r.citing_year {
                report.future_citations.push(i);
            }
        }
        if !unknown.is_empty() {
            let list = unknown.into_iter().collect::<Vec<_>>().join(", ");
            return Err(Error::Validation(format!("unknown journal ids in ledger: {list}")));
        }
        Ok(report)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CITATION_HEADER).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.citing_id.as_str(),
                r.cited_id.as_str(),
                &r.citing_year.to_string(),
                &r.cited_year.to_string(),
                &r.count.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => Error::format(
            line,
            format!("expected {expected_len} columns, found {len}"),
        ),
        csv::ErrorKind::Io(_) => Error::format(line, err.to_string()),
        _ => Error::format(line, err.to_string()),
    }
}

fn check_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(csv_error)?;
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::format(
            1,
            format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(raw: &str, column: &str, line: u64) -> Result<T> {
    raw.parse::<T>()
        .map_err(|_| Error::format(line, format!("malformed {column} `{raw}`")))
}

/// Parses `journals.csv`. Rows for the same journal are merged by year; a
/// repeated (journal, year) pair or conflicting name/fields is an error.
pub fn parse_journal_metadata<R: Read>(input: R) -> Result<JournalTable> {
    let mut reader = csv_reader(input);
    check_header(&mut reader, &JOURNAL_HEADER)?;

    let mut entries: Vec<JournalEntry> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let id = &row[0];
        if id.is_empty() {
            return Err(Error::format(line, "empty journal_id"));
        }
        let name = row[1].to_string();
        let fields = if row[2].is_empty() {
            BTreeSet::new()
        } else {
            let mut set = BTreeSet::new();
            for label in row[2].split(';').map(str::trim) {
                if label.is_empty() {
                    return Err(Error::format(line, format!("empty field label for journal {id}")));
                }
                set.insert(label.to_string());
            }
            set
        };
        let year: i32 = parse_field(&row[3], "year", line)?;
        let articles: u64 = parse_field(&row[4], "article count", line)?;

        match index.get(id) {
            Some(&i) => {
                let e = &mut entries[i];
                if e.name != name || e.fields != fields {
                    return Err(Error::format(
                        line,
                        format!("journal {id} redefined with a different name or field list"),
                    ));
                }
                if e.articles_by_year.insert(year, articles).is_some() {
                    return Err(Error::format(
                        line,
                        format!("duplicate journal_id {id} for year {year}"),
                    ));
                }
            }
            None => {
                index.insert(id.to_string(), entries.len());
                entries.push(JournalEntry {
                    journal_id: id.to_string(),
                    name,
                    fields,
                    articles_by_year: BTreeMap::from([(year, articles)]),
                });
            }
        }
    }
    Ok(JournalTable { entries, index })
}

/// Parses `citations.csv`, keeping records in input order.
pub fn parse_citation_edges<R: Read>(input: R) -> Result<CitationLedger> {
    let mut reader = csv_reader(input);
    check_header(&mut reader, &CITATION_HEADER)?;

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row[0].is_empty() || row[1].is_empty() {
            return Err(Error::format(line, "empty journal id"));
        }
        let count: i64 = parse_field(&row[4], "count", line)?;
        if count <= 0 {
            return Err(Error::format(line, format!("count must be positive, found {count}")));
        }
        records.push(CitationRecord {
            citing_id: row[0].to_string(),
            cited_id: row[1].to_string(),
            citing_year: parse_field(&row[2], "citing_year", line)?,
            cited_year: parse_field(&row[3], "cited_year", line)?,
            count: count as u64,
        });
    }
    Ok(CitationLedger { records })
}

/// Citations given in one census year to the preceding `window` years of
/// articles. Stored column-wise: `columns[j]` lists `(i, z_ij)` for citing
/// journal `j`, sorted by cited index `i`. Zeros are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CitationMatrix {
    pub census_year: i32,
    pub window: u32,
    pub ids: Vec<String>,
    pub self_cites_excluded: bool,
    columns: Vec<Vec<(usize, f64)>>,
}

impl CitationMatrix {
    /// Builds a matrix from `(cited, citing, value)` triples. Duplicate
    /// coordinates are summed; nonpositive values are rejected.
    pub fn from_triplets(
        ids: Vec<String>,
        census_year: i32,
        window: u32,
        self_cites_excluded: bool,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let n = ids.len();
        let mut acc: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); n];
        for (i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::Validation(format!("entry ({i}, {j}) outside {n}x{n} matrix")));
            }
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!("entry ({i}, {j}) must be positive, got {v}")));
            }
            if self_cites_excluded && i == j {
                continue;
            }
            *acc[j].entry(i).or_insert(0.0) += v;
        }
        Ok(Self {
            census_year,
            window,
            ids,
            self_cites_excluded,
            columns: acc.into_iter().map(|c| c.into_iter().collect()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.ids.len()
    }

    /// Citations from journal `citing` to journal `cited`.
    pub fn get(&self, cited: usize, citing: usize) -> f64 {
        self.columns[citing]
            .binary_search_by_key(&cited, |(i, _)| *i)
            .map(|k| self.columns[citing][k].1)
            .unwrap_or(0.0)
    }

    pub fn column(&self, citing: usize) -> &[(usize, f64)] {
        &self.columns[citing]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// All stored entries as `(cited, citing, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, v)| (i, j, v)))
    }

    /// Total citations received by each journal (row sums).
    pub fn row_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.dim()];
        for (i, _, v) in self.triplets() {
            sums[i] += v;
        }
        sums
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            for (_, v) in col.iter_mut() {
                *v *= factor;
            }
        }
        out
    }
}

/// Aggregates `ledger` into the census-year citation matrix over the articles
/// of `[census_year - window, census_year - 1]`. Records outside the window
/// are ignored. Every journal in `table` gets a row and a column.
pub fn build_citation_matrix(
    ledger: &CitationLedger,
    table: &JournalTable,
    census_year: i32,
    window: u32,
    exclude_self: bool,
) -> Result<CitationMatrix> {
    if window == 0 {
        return Err(Error::Validation("citation window must be at least one year".into()));
    }
    ledger.validate(table)?;
    let first = census_year - window as i32;
    let triplets = ledger
        .records
        .iter()
        .filter(|r| r.citing_year == census_year && (first..census_year).contains(&r.cited_year))
        .map(|r| {
            let cited = table.index_of(&r.cited_id).expect("validated");
            let citing = table.index_of(&r.citing_id).expect("validated");
            (cited, citing, r.count as f64)
        });
    CitationMatrix::from_triplets(
        table.ids().map(str::to_string).collect(),
        census_year,
        window,
        exclude_self,
        triplets,
    )
}

/// Two aligned numeric series with per-item labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedObservations {
    pub labels: Vec<String>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_name: String,
    pub y_name: String,
}

impl PairedObservations {
    pub fn new(
        labels: Vec<String>,
        x: Vec<f64>,
        y: Vec<f64>,
        x_name: impl Into<String>,
        y_name: impl Into<String>,
    ) -> Result<Self> {
        if labels.len() != x.len() || x.len() != y.len() {
            return Err(Error::Validation(format!(
                "series lengths differ: {} labels, {} x, {} y",
                labels.len(),
                x.len(),
                y.len()
            )));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Validation(format!("duplicate label {dup}")));
        }
        Ok(Self {
            labels,
            x,
            y,
            x_name: x_name.into(),
            y_name: y_name.into(),
        })
    }

    /// Unlabelled convenience constructor; labels are `0..n`.
    pub fn from_series(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let labels = (0..x.len()).map(|i| i.to_string()).collect();
        Self::new(labels, x, y, "x", "y")
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn swapped(&self) -> Self {
        Self {
            labels: self.labels.clone(),
            x: self.y.clone(),
            y: self.x.clone(),
            x_name: self.y_name.clone(),
            y_name: self.x_name.clone(),
        }
    }

    /// `y / x` per item, e.g. burgers per hour for the Big Mac data.
    pub fn ratios(&self) -> Vec<f64> {
        self.x.iter().zip(&self.y).map(|(x, y)| y / x).collect()
    }

    pub fn to_csv(&self, header: [&str; 3]) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        for ((l, x), y) in self.labels.iter().zip(&self.x).zip(&self.y) {
            w.write_record([l.as_str(), &format!("{x:.2}"), &format!("{y:.2}")])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

// Local-currency Big Mac price and mean hourly wage, 22 countries, ordered by
// real wage (hourly wage / burger price) from highest to lowest.
const BIGMAC: [(&str, f64, f64); 22] = [
    ("Denmark", 24.75, 211.13),
    ("Australia", 3.00, 19.86),
    ("New Zealand", 3.60, 21.94),
    ("Switzerland", 6.30, 37.85),
    ("United States", 2.54, 14.32),
    ("Britain/UK", 1.99, 11.15),
    ("Germany", 2.61, 14.32),
    ("Canada", 3.33, 16.78),
    ("Singapore", 3.30, 15.65),
    ("Sweden", 24.00, 110.90),
    ("Hong Kong", 10.70, 44.26),
    ("Spain", 2.37, 8.59),
    ("South Africa", 9.70, 30.86),
    ("France", 2.82, 8.50),
    ("Poland", 5.90, 11.80),
    ("Hungary", 399.00, 704.34),
    ("Czech Rep.", 56.00, 85.34),
    ("Brazil", 3.60, 4.58),
    ("South Korea", 3000.00, 3134.00),
    ("Mexico", 21.90, 17.61),
    ("Thailand", 55.00, 31.69),
    ("China", 9.90, 5.56),
];

/// Real wages (burgers per hour) as printed, rounded to two decimals.
pub const BIGMAC_PRINTED_REAL_WAGE: [f64; 22] = [
    8.53, 6.62, 6.09, 6.01, 5.64, 5.60, 5.49, 5.04, 4.74, 4.62, 4.14, 3.62, 3.18, 3.01, 2.00,
    1.77, 1.52, 1.27, 1.04, 0.80, 0.58, 0.56,
];

/// Burger price as `x`, hourly wage as `y`.
pub fn bigmac_fixture() -> PairedObservations {
    PairedObservations {
        labels: BIGMAC.iter().map(|(c, _, _)| c.to_string()).collect(),
        x: BIGMAC.iter().map(|(_, p, _)| *p).collect(),
        y: BIGMAC.iter().map(|(_, _, w)| *w).collect(),
        x_name: "burger_price".into(),
        y_name: "hourly_wage".into(),
    }
}
