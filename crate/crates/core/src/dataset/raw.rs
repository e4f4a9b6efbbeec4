use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Values of one undiscretized column. `None` marks a missing cell.
#[derive(Clone, Debug, PartialEq)]
pub enum RawValues {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

impl RawValues {
    pub fn len(&self) -> usize {
        match self {
            RawValues::Numeric(v) => v.len(),
            RawValues::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, RawValues::Numeric(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawColumn {
    pub name: String,
    pub values: RawValues,
}

/// How the class column is identified on the command line or in code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassColumn {
    Name(String),
    Index(usize),
}

impl std::str::FromStr for ClassColumn {
    type Err = std::convert::Infallible;

    /// Bare integers are column indices unless prefixed by `name:`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if let Some(name) = s.strip_prefix("name:") {
            return Ok(ClassColumn::Name(name.to_string()));
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => ClassColumn::Index(i),
            Err(_) => ClassColumn::Name(s.to_string()),
        })
    }
}

/// Table as read from disk, before discretization.
#[derive(Clone, Debug, PartialEq)]
pub struct RawDataset {
    columns: Vec<RawColumn>,
    class_index: usize,
    n_rows: usize,
}

impl RawDataset {
    /// Validates the column lengths and the class column. The class column is
    /// coerced to categorical if it was given as numeric.
    pub fn new(mut columns: Vec<RawColumn>, class_index: usize) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::InvalidDataset(
                "need at least one feature and a class column".into(),
            ));
        }
        if class_index >= columns.len() {
            return Err(Error::ClassNotFound(class_index.to_string()));
        }
        let n_rows = columns[0].values.len();
        if n_rows == 0 {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        if let Some(c) = columns.iter().find(|c| c.values.len() != n_rows) {
            return Err(Error::InvalidDataset(format!(
                "column `{}` has {} rows, expected {}",
                c.name,
                c.values.len(),
                n_rows
            )));
        }
        let class = &mut columns[class_index];
        if let RawValues::Numeric(values) = &class.values {
            let labels = values.iter().map(|v| v.map(|x| x.to_string())).collect();
            class.values = RawValues::Categorical(labels);
        }
        let RawValues::Categorical(labels) = &class.values else {
            unreachable!("class column coerced to categorical above");
        };
        let distinct: HashSet<&str> = labels.iter().flatten().map(String::as_str).collect();
        if distinct.is_empty() {
            return Err(Error::ClassAllMissing(class.name.clone()));
        }
        if distinct.len() < 2 {
            return Err(Error::DegenerateClass {
                name: class.name.clone(),
                distinct: distinct.len(),
            });
        }
        Ok(RawDataset {
            columns,
            class_index,
            n_rows,
        })
    }

    pub fn columns(&self) -> &[RawColumn] {
        &self.columns
    }

    pub fn class_index(&self) -> usize {
        self.class_index
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn class(&self) -> &RawColumn {
        &self.columns[self.class_index]
    }

    /// Treats every column as categorical, keeping the raw tokens as labels.
    /// Used for inputs that are already discrete codes.
    pub fn into_categorical(self) -> Self {
        let columns = self
            .columns
            .into_iter()
            .map(|c| match c.values {
                RawValues::Numeric(v) => RawColumn {
                    name: c.name,
                    values: RawValues::Categorical(
                        v.into_iter().map(|x| x.map(|x| x.to_string())).collect(),
                    ),
                },
                cat => RawColumn {
                    name: c.name,
                    values: cat,
                },
            })
            .collect();
        RawDataset { columns, ..self }
    }
}

fn is_missing(token: &str) -> bool {
    token.is_empty() || token == "?"
}

fn parse_finite(token: &str) -> Option<f64> {
    token.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Reads a CSV file. `""` and `"?"` are missing; a column is numeric iff every
/// non-missing token parses as a finite number.
pub fn load_csv(path: &Path, class: &ClassColumn, header: bool) -> Result<RawDataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(std::io::BufReader::new(file));

    let mut names: Option<Vec<String>> = None;
    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected: w,
                    found: record.len(),
                })
            }
            Some(_) => {}
        }
        if header && names.is_none() {
            names = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        if cells.is_empty() {
            cells = vec![Vec::new(); record.len()];
        }
        for (col, token) in cells.iter_mut().zip(record.iter()) {
            col.push(token.to_string());
        }
    }
    let width = width.unwrap_or(0);
    let names = names.unwrap_or_else(|| (0..width).map(|j| format!("col{j}")).collect());

    let class_index = match class {
        ClassColumn::Index(i) if *i < width => *i,
        ClassColumn::Index(i) => return Err(Error::ClassNotFound(i.to_string())),
        ClassColumn::Name(name) => names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::ClassNotFound(name.clone()))?,
    };
    if cells.is_empty() {
        return Err(Error::InvalidDataset(format!(
            "{} has no data rows",
            path.display()
        )));
    }

    let columns = cells
        .into_iter()
        .zip(names)
        .map(|(tokens, name)| {
            let numeric = tokens
                .iter()
                .all(|t| is_missing(t) || parse_finite(t).is_some());
            let values = if numeric {
                RawValues::Numeric(
                    tokens
                        .iter()
                        .map(|t| if is_missing(t) { None } else { parse_finite(t) })
                        .collect(),
                )
            } else {
                RawValues::Categorical(
                    tokens
                        .into_iter()
                        .map(|t| if is_missing(&t) { None } else { Some(t) })
                        .collect(),
                )
            };
            RawColumn { name, values }
        })
        .collect();
    RawDataset::new(columns, class_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn detects_numeric_and_categorical_columns() {
        let f = write("x,y,c\n1,a,0\n2,b,1\n3,a,0\n4,b,1\n");
        let raw = load_csv(f.path(), &ClassColumn::Name("c".into()), true).unwrap();
        assert_eq!(raw.n_rows(), 4);
        assert_eq!(raw.class_index(), 2);
        assert_eq!(
            raw.columns()[0].values,
            RawValues::Numeric(vec![Some(1.0), Some(2.0), Some(3.0), Some(4.0)])
        );
        assert!(!raw.columns()[1].values.is_numeric());
        assert_eq!(raw.class().name, "c");
        assert!(!raw.class().values.is_numeric());
    }

    #[test]
    fn ragged_row_reports_line() {
        let f = write("x,y,c\n1,a,0\n1,a\n");
        let err = load_csv(f.path(), &ClassColumn::Name("c".into()), true).unwrap_err();
        match err {
            Error::RaggedRow {
                line,
                expected,
                found,
            } => {
                assert_eq!((line, expected, found), (3, 3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_label_class_is_rejected() {
        let f = write("x,c\n1,a\n2,a\n");
        let err = load_csv(f.path(), &ClassColumn::Name("c".into()), true).unwrap_err();
        assert!(matches!(err, Error::DegenerateClass { distinct: 1, .. }));
    }

    #[test]
    fn all_missing_class_is_rejected() {
        let f = write("x,c\n1,?\n2,\n");
        let err = load_csv(f.path(), &ClassColumn::Index(1), true).unwrap_err();
        assert!(matches!(err, Error::ClassAllMissing(_)));
    }

    #[test]
    fn absent_class_column() {
        let f = write("x,c\n1,a\n2,b\n");
        let err = load_csv(f.path(), &ClassColumn::Name("label".into()), true).unwrap_err();
        assert!(matches!(err, Error::ClassNotFound(_)));
        let err = load_csv(f.path(), &ClassColumn::Index(5), true).unwrap_err();
        assert!(matches!(err, Error::ClassNotFound(_)));
    }

    #[test]
    fn unreadable_file() {
        let err = load_csv(
            Path::new("/nonexistent/data.csv"),
            &ClassColumn::Index(0),
            true,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn missing_tokens_and_quoting() {
        let f = write("x,y,c\n1,\"a,b\",p\n?,,q\n3,z,p\n");
        let raw = load_csv(f.path(), &ClassColumn::Name("c".into()), true).unwrap();
        assert_eq!(
            raw.columns()[0].values,
            RawValues::Numeric(vec![Some(1.0), None, Some(3.0)])
        );
        assert_eq!(
            raw.columns()[1].values,
            RawValues::Categorical(vec![Some("a,b".into()), None, Some("z".into())])
        );
    }

    #[test]
    fn headerless_files_get_generated_names() {
        let f = write("1,a\n2,b\n");
        let raw = load_csv(f.path(), &ClassColumn::Index(1), false).unwrap();
        assert_eq!(raw.n_rows(), 2);
        assert_eq!(raw.columns()[0].name, "col0");
    }

    #[test]
    fn class_column_spec_parsing() {
        assert_eq!("3".parse::<ClassColumn>().unwrap(), ClassColumn::Index(3));
        assert_eq!(
            "label".parse::<ClassColumn>().unwrap(),
            ClassColumn::Name("label".into())
        );
        assert_eq!(
            "name:7".parse::<ClassColumn>().unwrap(),
            ClassColumn::Name("7".into())
        );
    }
}
