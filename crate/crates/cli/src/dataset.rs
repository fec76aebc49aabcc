//! Input files: `csv_unit_vectors`, `csv_frames` and `json_dataset`.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;
use exc_core::geometry::{Subspace, UnitVector};
use exc_core::matrix::Matrix;
use exc_core::projective::HomogeneousPoint;
use exc_core::scalar::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    Sphere,
    GrassmannReal,
    GrassmannComplex,
    ProjectiveShape,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    CsvUnitVectors,
    CsvFrames,
    JsonDataset,
}

/// Malformed input; reported with exit code 2.
#[derive(Debug)]
pub struct InputError {
    pub messages: Vec<String>,
}

impl InputError {
    pub fn new(msg: impl Into<String>) -> Self {
        Self {
            messages: vec![msg.into()],
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.messages.join("\n"))
    }
}

impl std::error::Error for InputError {}

/// The `json_dataset` layout. Rows are unit vectors (sphere), homogeneous
/// representatives (projective_shape) or frames given as arrays of columns
/// (Grassmann); complex entries are `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetFile {
    pub format: Format,
    pub manifold: Manifold,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub rows: Vec<Value>,
}

#[derive(Debug, Clone)]
pub enum Dataset {
    Sphere(Vec<UnitVector>),
    GrassmannReal { m: usize, data: Vec<Subspace<f64>> },
    GrassmannComplex { m: usize, data: Vec<Subspace<Complex64>> },
    ProjectiveShape(Vec<HomogeneousPoint>),
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Self::Sphere(d) => d.len(),
            Self::GrassmannReal { data, .. } => data.len(),
            Self::GrassmannComplex { data, .. } => data.len(),
            Self::ProjectiveShape(d) => d.len(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Sphere(d) => d[0].ambient_dim(),
            Self::GrassmannReal { data, .. } => data[0].ambient_dim(),
            Self::GrassmannComplex { data, .. } => data[0].ambient_dim(),
            Self::ProjectiveShape(d) => d[0].dim() + 1,
        }
    }
}

/// Dimension flags from the command line.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dims {
    pub ambient_dim: Option<usize>,
    pub m: Option<usize>,
}

pub fn load(path: &Path, manifold: Option<Manifold>, dims: Dims) -> Result<Dataset, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let file: DatasetFile =
            serde_json::from_str(&text).map_err(|e| InputError::new(format!("{}: {e}", path.display())))?;
        from_json(file, manifold, dims)
    } else {
        let manifold = manifold.ok_or_else(|| InputError::new("--manifold is required for CSV input"))?;
        from_csv(&text, manifold, dims)
    }
}

fn check_dim(name: &str, flag: Option<usize>, found: Option<usize>) -> Result<(), InputError> {
    match (flag, found) {
        (Some(a), Some(b)) if a != b => Err(InputError::new(format!(
            "--{name} is {a} but the data has {name} = {b}"
        ))),
        _ => Ok(()),
    }
}

pub fn from_json(file: DatasetFile, manifold: Option<Manifold>, dims: Dims) -> Result<Dataset, InputError> {
    if file.format != Format::JsonDataset {
        return Err(InputError::new("format must be \"json_dataset\" in a JSON file"));
    }
    if let Some(flag) = manifold {
        if flag != file.manifold {
            return Err(InputError::new(format!(
                "--manifold {flag:?} does not match the file's manifold {:?}",
                file.manifold
            )));
        }
    }
    check_dim("ambient-dim", dims.ambient_dim, file.ambient_dim)?;
    check_dim("m", dims.m, file.m)?;
    let dims = Dims {
        ambient_dim: dims.ambient_dim.or(file.ambient_dim),
        m: dims.m.or(file.m),
    };
    let mut errors = RowErrors::default();
    let dataset = match file.manifold {
        Manifold::Sphere => Dataset::Sphere(collect(&file.rows, &mut errors, |v| {
            let x = real_vector(v)?;
            expect_len(x.len(), dims.ambient_dim, "coordinates")?;
            UnitVector::new(x).map_err(|e| e.to_string())
        })),
        Manifold::ProjectiveShape => Dataset::ProjectiveShape(collect(&file.rows, &mut errors, |v| {
            let x = real_vector(v)?;
            expect_len(x.len(), dims.ambient_dim, "homogeneous coordinates")?;
            HomogeneousPoint::from_representative(&x).map_err(|e| e.to_string())
        })),
        Manifold::GrassmannReal => {
            let data = collect(&file.rows, &mut errors, |v| json_frame::<f64>(v, dims));
            Dataset::GrassmannReal {
                m: subspace_dim(&data, dims),
                data,
            }
        }
        Manifold::GrassmannComplex => {
            let data = collect(&file.rows, &mut errors, |v| json_frame::<Complex64>(v, dims));
            Dataset::GrassmannComplex {
                m: subspace_dim(&data, dims),
                data,
            }
        }
    };
    errors.finish()?;
    check_consistent(&dataset)?;
    Ok(dataset)
}

fn subspace_dim<S: Scalar>(data: &[Subspace<S>], dims: Dims) -> usize {
    dims.m.or_else(|| data.first().map(Subspace::dim)).unwrap_or(0)
}

pub fn from_csv(text: &str, manifold: Manifold, dims: Dims) -> Result<Dataset, InputError> {
    let rows = parse_csv(text)?;
    let mut errors = RowErrors::default();
    let dataset = match manifold {
        Manifold::Sphere => Dataset::Sphere(collect_rows(&rows, &mut errors, |x| {
            expect_len(x.len(), dims.ambient_dim, "coordinates")?;
            UnitVector::new(x.to_vec()).map_err(|e| e.to_string())
        })),
        Manifold::ProjectiveShape => Dataset::ProjectiveShape(collect_rows(&rows, &mut errors, |x| {
            expect_len(x.len(), dims.ambient_dim, "homogeneous coordinates")?;
            HomogeneousPoint::from_representative(x).map_err(|e| e.to_string())
        })),
        Manifold::GrassmannReal => {
            let data = collect_rows(&rows, &mut errors, |x| csv_frame(x, dims));
            Dataset::GrassmannReal {
                m: subspace_dim(&data, dims),
                data,
            }
        }
        Manifold::GrassmannComplex => {
            return Err(InputError::new(
                "complex frames are not representable in CSV; use a json_dataset file",
            ))
        }
    };
    errors.finish()?;
    check_consistent(&dataset)?;
    Ok(dataset)
}

/// A CSV row: its line number and its numbers or a parse message.
type CsvRow = (usize, Result<Vec<f64>, String>);

/// Rows of numbers; a first line without any number is taken as a header.
fn parse_csv(text: &str) -> Result<Vec<CsvRow>, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| InputError::new(format!("row {}: {e}", k + 1)))?;
        let line = record.position().map_or(k + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if rows.is_empty() && record.iter().all(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let parsed = record
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.parse::<f64>()
                    .map_err(|_| format!("column {}: cannot parse {f:?} as a number", j + 1))
            })
            .collect::<Result<Vec<f64>, String>>();
        rows.push((line, parsed));
    }
    if rows.is_empty() {
        return Err(InputError::new("no data rows"));
    }
    Ok(rows)
}

#[derive(Default)]
struct RowErrors(Vec<String>);

impl RowErrors {
    fn finish(self) -> Result<(), InputError> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(InputError { messages: self.0 })
        }
    }
}

fn collect<T>(rows: &[Value], errors: &mut RowErrors, f: impl Fn(&Value) -> Result<T, String>) -> Vec<T> {
    if rows.is_empty() {
        errors.0.push("no data rows".into());
    }
    rows.iter()
        .enumerate()
        .filter_map(|(k, v)| f(v).map_err(|e| errors.0.push(format!("row {}: {e}", k + 1))).ok())
        .collect()
}

fn collect_rows<T>(
    rows: &[CsvRow],
    errors: &mut RowErrors,
    f: impl Fn(&[f64]) -> Result<T, String>,
) -> Vec<T> {
    rows.iter()
        .filter_map(|(line, parsed)| {
            parsed
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|x| f(x))
                .map_err(|e| errors.0.push(format!("line {line}: {e}")))
                .ok()
        })
        .collect()
}

fn expect_len(found: usize, expected: Option<usize>, what: &str) -> Result<(), String> {
    match expected {
        Some(e) if e != found => Err(format!("expected {e} {what}, found {found}")),
        _ => Ok(()),
    }
}

fn number(v: &Value) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("expected a number, found {v}"))
}

fn real_vector(v: &Value) -> Result<Vec<f64>, String> {
    v.as_array()
        .ok_or_else(|| format!("expected an array of numbers, found {v}"))?
        .iter()
        .map(number)
        .collect()
}

fn scalar<S: Scalar>(v: &Value) -> Result<S, String> {
    match v {
        Value::Number(_) => Ok(S::from_real(number(v)?)),
        Value::Array(pair) if pair.len() == 2 => {
            let (re, im) = (number(&pair[0])?, number(&pair[1])?);
            S::from_parts(re, im).ok_or_else(|| "complex entry in a real frame".to_string())
        }
        _ => Err(format!("expected a number or [re, im], found {v}")),
    }
}

fn json_frame<S: Scalar>(v: &Value, dims: Dims) -> Result<Subspace<S>, String> {
    let columns = v
        .as_array()
        .ok_or_else(|| format!("expected a frame (array of columns), found {v}"))?
        .iter()
        .map(|c| {
            c.as_array()
                .ok_or_else(|| format!("expected a column array, found {c}"))?
                .iter()
                .map(scalar::<S>)
                .collect::<Result<Vec<S>, String>>()
        })
        .collect::<Result<Vec<Vec<S>>, String>>()?;
    expect_len(columns.len(), dims.m, "frame columns")?;
    let ambient = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != ambient) {
        return Err("frame columns have different lengths".into());
    }
    expect_len(ambient, dims.ambient_dim, "entries per column")?;
    Subspace::from_orthonormal_frame(Matrix::from_columns(&columns)).map_err(|e| e.to_string())
}

/// A row of D·m numbers: the frame's columns one after another.
fn csv_frame(x: &[f64], dims: Dims) -> Result<Subspace<f64>, String> {
    let (d, m) = match (dims.ambient_dim, dims.m) {
        (Some(d), Some(m)) => (d, m),
        (Some(d), None) if d > 0 => (d, x.len() / d),
        (None, Some(m)) if m > 0 => (x.len() / m, m),
        _ => return Err("csv_frames needs --m or --ambient-dim to split rows into columns".into()),
    };
    if d * m != x.len() {
        return Err(format!("expected {} entries for a {d}×{m} frame, found {}", d * m, x.len()));
    }
    let columns: Vec<Vec<f64>> = x.chunks(d).map(<[f64]>::to_vec).collect();
    Subspace::from_orthonormal_frame(Matrix::from_columns(&columns)).map_err(|e| e.to_string())
}

fn check_consistent(dataset: &Dataset) -> Result<(), InputError> {
    fn same<T>(items: &[T], key: impl Fn(&T) -> usize, what: &str) -> Result<(), InputError> {
        let Some(first) = items.first().map(&key) else {
            return Err(InputError::new("no data rows"));
        };
        let bad: Vec<String> = items
            .iter()
            .enumerate()
            .filter(|(_, t)| key(t) != first)
            .map(|(k, t)| format!("row {}: {what} {} differs from the first row's {first}", k + 1, key(t)))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(InputError { messages: bad })
        }
    }
    match dataset {
        Dataset::Sphere(d) => same(d, UnitVector::ambient_dim, "dimension"),
        Dataset::ProjectiveShape(d) => same(d, HomogeneousPoint::dim, "dimension"),
        Dataset::GrassmannReal { data, .. } => {
            same(data, Subspace::ambient_dim, "ambient dimension")?;
            same(data, Subspace::dim, "subspace dimension")
        }
        Dataset::GrassmannComplex { data, .. } => {
            same(data, Subspace::ambient_dim, "ambient dimension")?;
            same(data, Subspace::dim, "subspace dimension")
        }
    }
}

/// JSON for a scalar: a number, or `[re, im]` over the complex field.
pub fn scalar_json<S: Scalar>(s: S) -> Value {
    match S::FIELD {
        exc_core::scalar::ScalarField::Real => Value::from(s.re()),
        exc_core::scalar::ScalarField::Complex => Value::from(vec![s.re(), s.im()]),
    }
}

pub fn matrix_rows_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| scalar_json(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn frame_columns_json<S: Scalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.cols())
            .map(|j| Value::Array((0..m.rows()).map(|i| scalar_json(m[(i, j)])).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims() -> Dims {
        Dims::default()
    }

    #[test]
    fn csv_unit_vectors_with_header() {
        let d = from_csv("x,y,z\n1,0,0\n0,1,0\n", Manifold::Sphere, dims()).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.ambient_dim(), 3);
    }

    #[test]
    fn csv_row_errors_are_listed() {
        let err = from_csv("1,0,0\n0.5,0.5,0\nfoo,1,0\n", Manifold::Sphere, dims()).unwrap_err();
        assert_eq!(err.messages.len(), 2);
        assert!(err.messages[0].starts_with("line 2"));
        assert!(err.messages[1].contains("cannot parse"));
    }

    #[test]
    fn csv_dimension_flag_mismatch() {
        let flags = Dims {
            ambient_dim: Some(4),
            m: None,
        };
        assert!(from_csv("1,0,0\n", Manifold::Sphere, flags).is_err());
    }

    #[test]
    fn csv_frames_split_by_m() {
        let flags = Dims {
            ambient_dim: None,
            m: Some(2),
        };
        let d = from_csv("1,0,0,0,1,0\n0,0,1,1,0,0\n", Manifold::GrassmannReal, flags).unwrap();
        let Dataset::GrassmannReal { m, data } = d else { panic!() };
        assert_eq!((m, data.len(), data[0].ambient_dim()), (2, 2, 3));
        assert!(from_csv("1,0,0,0,1,0\n", Manifold::GrassmannReal, dims()).is_err());
    }

    #[test]
    fn json_complex_frames() {
        let file: DatasetFile = serde_json::from_str(
            r#"{"format":"json_dataset","manifold":"grassmann_complex","m":1,
                "rows":[[[[1,0],[0,0],[0,0]]], [[[0,0],[0,1],[0,0]]]]}"#,
        )
        .unwrap();
        let d = from_json(file, Some(Manifold::GrassmannComplex), dims()).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn json_manifold_flag_mismatch() {
        let file: DatasetFile =
            serde_json::from_str(r#"{"format":"json_dataset","manifold":"sphere","rows":[[1,0]]}"#).unwrap();
        assert!(from_json(file, Some(Manifold::GrassmannReal), dims()).is_err());
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let err = from_csv("1,0,0\n0,1\n", Manifold::Sphere, dims()).unwrap_err();
        assert!(err.messages[0].contains("row 2"));
    }
}
