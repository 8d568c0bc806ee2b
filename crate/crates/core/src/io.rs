//! JSON documents for modules and the other serializable results.
//!
//! A polynomial is an array indexed by powers of `u` (trailing zeros dropped),
//! each entry the `F_p`-coefficient vector of a field element of length `f`.
//! Matrices are row-major.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::abelian::FilPresentation;
use crate::error::{Error, Result};
use crate::hom::Morphism;
use crate::matrix::AMatrix;
use crate::module::BreuilModule;
use crate::params::GlobalParams;
use crate::ring::{APoly, CoeffRing};
use crate::simples::SimpleDescriptor;

pub const SCHEMA_VERSION: u64 = 1;

/// Serialized form: `u`-power, then `F_p`-coefficients.
pub type PolyDoc = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDocument {
    pub schema: u64,
    pub params: GlobalParams,
    pub rank: usize,
    pub fil_exponents: Vec<usize>,
    #[serde(rename = "G")]
    pub frobenius: Vec<Vec<PolyDoc>>,
    #[serde(rename = "Nmat")]
    pub monodromy: Vec<Vec<PolyDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validated: Option<bool>,
}

pub fn poly_to_doc(ring: &CoeffRing, a: &APoly) -> PolyDoc {
    let f = ring.field().degree();
    let mut out: PolyDoc = a.coeffs().iter().map(|c| (0..f).map(|i| c.coeff(i)).collect()).collect();
    while out.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
        out.pop();
    }
    out
}

fn matrix_to_doc(ring: &CoeffRing, m: &AMatrix) -> Vec<Vec<PolyDoc>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| poly_to_doc(ring, m.get(i, j))).collect())
        .collect()
}

impl ModuleDocument {
    pub fn from_module(m: &BreuilModule) -> ModuleDocument {
        let ring = m.ring();
        ModuleDocument {
            schema: SCHEMA_VERSION,
            params: m.params(),
            rank: m.rank(),
            fil_exponents: m.fil_exponents().to_vec(),
            frobenius: matrix_to_doc(ring, m.frobenius_matrix()),
            monodromy: matrix_to_doc(ring, m.monodromy_matrix()),
            name: None,
            provenance: None,
            validated: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = Some(provenance.into());
        self
    }

    /// Records the outcome of `validate`.
    pub fn mark_validated(mut self) -> Self {
        self.validated = Some(self.to_module().map(|m| m.is_valid()).unwrap_or(false));
        self
    }

    /// Builds the module; axioms are only enforced when `validated` is true.
    pub fn to_module(&self) -> Result<BreuilModule> {
        let ring = CoeffRing::new(self.params)?;
        let frob = matrix_from_doc(&ring, &self.frobenius, self.rank, "/G")?;
        let mono = matrix_from_doc(&ring, &self.monodromy, self.rank, "/Nmat")?;
        let m = BreuilModule::new(ring, self.fil_exponents.clone(), frob, mono)?;
        if self.validated == Some(true) {
            if let Some(v) = m.validate().violations.first() {
                return Err(Error::Invalid(format!("document marked validated: {v}")));
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn from_json(text: &str, strict: bool) -> Result<ModuleDocument> {
        ModuleDocument::from_value(&parse_root(text)?, strict)
    }

    pub fn from_value(value: &Value, strict: bool) -> Result<ModuleDocument> {
        ModuleDocument::from_value_at(value, "", strict)
    }

    /// As [`ModuleDocument::from_value`] for a document nested at `prefix`.
    pub fn from_value_at(value: &Value, prefix: &str, strict: bool) -> Result<ModuleDocument> {
        let obj = as_object(value, prefix)?;
        const FIELDS: [&str; 9] = [
            "schema",
            "params",
            "rank",
            "fil_exponents",
            "G",
            "Nmat",
            "name",
            "provenance",
            "validated",
        ];
        if strict {
            reject_unknown(obj, prefix, &FIELDS)?;
        }
        let at = |key: &str| format!("{prefix}/{key}");
        let schema = parse_schema(obj, prefix)?;
        let params = parse_params(field(obj, prefix, "params")?, &at("params"), strict)?;
        let rank = as_uint(field(obj, prefix, "rank")?, &at("rank"))? as usize;
        let er = params.er();
        let fil = as_array(field(obj, prefix, "fil_exponents")?, &at("fil_exponents"))?;
        if fil.len() != rank {
            return Err(schema_error(&at("fil_exponents"), format!("expected {rank} entries, found {}", fil.len())));
        }
        let mut fil_exponents = Vec::with_capacity(rank);
        for (i, v) in fil.iter().enumerate() {
            let path = format!("{prefix}/fil_exponents/{i}");
            let n = as_uint(v, &path)? as usize;
            if n > er {
                return Err(schema_error(&path, format!("exponent {n} exceeds er = {er}")));
            }
            fil_exponents.push(n);
        }
        let frobenius = parse_matrix(field(obj, prefix, "G")?, &at("G"), (rank, rank), params, strict)?;
        let monodromy = parse_matrix(field(obj, prefix, "Nmat")?, &at("Nmat"), (rank, rank), params, strict)?;
        let text = |key: &str| -> Result<Option<String>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::String(s)) => Ok(Some(s.clone())),
                Some(_) => Err(schema_error(&at(key), "expected a string")),
            }
        };
        let validated = match obj.get("validated") {
            None | Some(Value::Null) => None,
            Some(Value::Bool(b)) => Some(*b),
            Some(_) => return Err(schema_error(&at("validated"), "expected a boolean")),
        };
        Ok(ModuleDocument {
            schema,
            params,
            rank,
            fil_exponents,
            frobenius,
            monodromy,
            name: text("name")?,
            provenance: text("provenance")?,
            validated,
        })
    }
}

fn parse_schema(obj: &Map<String, Value>, prefix: &str) -> Result<u64> {
    let path = format!("{prefix}/schema");
    let schema = as_uint(field(obj, prefix, "schema")?, &path)?;
    if schema != SCHEMA_VERSION {
        return Err(schema_error(&path, format!("unsupported schema version {schema}")));
    }
    Ok(schema)
}

fn parse_root(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema_error("", format!("malformed JSON: {e}")))
}

fn matrix_from_doc(ring: &CoeffRing, rows: &[Vec<PolyDoc>], ncols: usize, path: &str) -> Result<AMatrix> {
    let field = ring.field();
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(row.len());
        for (j, poly) in row.iter().enumerate() {
            let mut coeffs = Vec::with_capacity(ring.ep());
            for (k, c) in poly.iter().enumerate() {
                let ints: Vec<i64> = c.iter().map(|&x| x as i64).collect();
                let elem = field
                    .from_coeffs(&ints)
                    .map_err(|e| schema_error(&format!("{path}/{i}/{j}/{k}"), e.to_string()))?;
                coeffs.push(elem);
            }
            r.push(
                ring.from_coeffs(coeffs)
                    .map_err(|e| schema_error(&format!("{path}/{i}/{j}"), e.to_string()))?,
            );
        }
        out.push(r);
    }
    AMatrix::from_rows(out, ncols)
}

fn schema_error(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema_error(&format!("{path}/{key}"), "missing field"))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema_error(&format!("{path}/{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema_error(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema_error(path, "expected an array"))
}

fn as_uint(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema_error(path, "expected a non-negative integer"))
}

fn parse_params(v: &Value, at: &str, strict: bool) -> Result<GlobalParams> {
    let obj = as_object(v, at)?;
    if strict {
        reject_unknown(obj, at, &["p", "e", "r", "f"])?;
    }
    let get = |key: &str| -> Result<u32> {
        let path = format!("{at}/{key}");
        let x = as_uint(field(obj, at, key)?, &path)?;
        u32::try_from(x).map_err(|_| schema_error(&path, "value too large"))
    };
    let params = GlobalParams {
        p: get("p")?,
        e: get("e")?,
        r: get("r")?,
        f: get("f")?,
    };
    params.check().map_err(|e| schema_error(at, e.to_string()))?;
    Ok(params)
}

fn parse_matrix(
    v: &Value,
    path: &str,
    (nrows, ncols): (usize, usize),
    params: GlobalParams,
    strict: bool,
) -> Result<Vec<Vec<PolyDoc>>> {
    let rows = as_array(v, path)?;
    if rows.len() != nrows {
        return Err(schema_error(path, format!("expected {nrows} rows, found {}", rows.len())));
    }
    let ep = (params.e * params.p) as usize;
    let f = params.f as usize;
    let mut out = Vec::with_capacity(nrows);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}/{i}");
        let row = as_array(row, &rpath)?;
        if row.len() != ncols {
            return Err(schema_error(&rpath, format!("expected {ncols} entries, found {}", row.len())));
        }
        let mut r = Vec::with_capacity(ncols);
        for (j, poly) in row.iter().enumerate() {
            let ppath = format!("{rpath}/{j}");
            let poly = as_array(poly, &ppath)?;
            if poly.len() > ep {
                return Err(schema_error(&ppath, format!("more than ep = {ep} powers of u")));
            }
            let mut pd = Vec::with_capacity(poly.len());
            for (k, c) in poly.iter().enumerate() {
                let cpath = format!("{ppath}/{k}");
                let c = as_array(c, &cpath)?;
                if c.len() > f || (strict && c.len() != f) {
                    return Err(schema_error(&cpath, format!("expected {f} coefficients, found {}", c.len())));
                }
                let mut coeffs = vec![0u32; f];
                for (l, x) in c.iter().enumerate() {
                    let xpath = format!("{cpath}/{l}");
                    let x = x.as_i64().ok_or_else(|| schema_error(&xpath, "expected an integer"))?;
                    if strict && !(0..params.p as i64).contains(&x) {
                        return Err(schema_error(&xpath, format!("coefficient {x} is not reduced mod {}", params.p)));
                    }
                    coeffs[l] = x.rem_euclid(params.p as i64) as u32;
                }
                pd.push(coeffs);
            }
            while pd.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
                pd.pop();
            }
            r.push(pd);
        }
        out.push(r);
    }
    Ok(out)
}

pub fn read_module(text: &str, strict: bool) -> Result<BreuilModule> {
    ModuleDocument::from_json(text, strict)?.to_module()
}

pub fn write_module(m: &BreuilModule) -> String {
    ModuleDocument::from_module(m).to_json()
}

pub fn matrix_to_value(ring: &CoeffRing, m: &AMatrix) -> Value {
    serde_json::to_value(matrix_to_doc(ring, m)).expect("matrices serialize")
}

pub fn matrix_from_value(ring: &CoeffRing, v: &Value, path: &str, shape: (usize, usize), strict: bool) -> Result<AMatrix> {
    let doc = parse_matrix(v, path, shape, ring.params(), strict)?;
    matrix_from_doc(ring, &doc, shape.1, path)
}

/// `{"schema", "source", "target", "matrix"}` with `matrix` of shape
/// `rank(target) x rank(source)`.
pub fn morphism_to_value(f: &Morphism) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    obj.insert("source".into(), module_value(f.source()));
    obj.insert("target".into(), module_value(f.target()));
    obj.insert("matrix".into(), matrix_to_value(f.target().ring(), f.matrix()));
    Value::Object(obj)
}

pub fn module_value(m: &BreuilModule) -> Value {
    serde_json::to_value(ModuleDocument::from_module(m)).expect("documents serialize")
}

pub fn read_morphism(text: &str, strict: bool) -> Result<Morphism> {
    let value = parse_root(text)?;
    let obj = as_object(&value, "")?;
    if strict {
        reject_unknown(obj, "", &["schema", "source", "target", "matrix"])?;
    }
    parse_schema(obj, "")?;
    let source = ModuleDocument::from_value_at(field(obj, "", "source")?, "/source", strict)?.to_module()?;
    let target = ModuleDocument::from_value_at(field(obj, "", "target")?, "/target", strict)?.to_module()?;
    if source.ring() != target.ring() {
        return Err(schema_error("/target/params", "source and target parameters differ"));
    }
    let shape = (target.rank(), source.rank());
    let matrix = matrix_from_value(target.ring(), field(obj, "", "matrix")?, "/matrix", shape, strict)?;
    Morphism::new(source, target, matrix)
}

/// `{"schema", "params", "rank", "generators"}`, each generator a list of
/// `rank` polynomials.
pub fn read_presentation(text: &str, strict: bool) -> Result<FilPresentation> {
    let value = parse_root(text)?;
    let obj = as_object(&value, "")?;
    if strict {
        reject_unknown(obj, "", &["schema", "params", "rank", "generators"])?;
    }
    parse_schema(obj, "")?;
    let params = parse_params(field(obj, "", "params")?, "/params", strict)?;
    let rank = as_uint(field(obj, "", "rank")?, "/rank")? as usize;
    let ring = CoeffRing::new(params)?;
    let gens = as_array(field(obj, "", "generators")?, "/generators")?;
    let mut generators = Vec::with_capacity(gens.len());
    for (g, v) in gens.iter().enumerate() {
        // a generator is a one-row matrix
        let row = Value::Array(vec![v.clone()]);
        let path = format!("/generators/{g}");
        let m = matrix_from_value(&ring, &row, &path, (1, rank), strict).map_err(|e| match e {
            Error::Schema { path: p, message } => Error::Schema {
                path: p.replacen(&format!("{path}/0"), &path, 1),
                message,
            },
            other => other,
        })?;
        generators.push((0..rank).map(|j| m.get(0, j).clone()).collect());
    }
    Ok(FilPresentation { ring, rank, generators })
}

/// A module document whose `"Nmat"` may be omitted; returns the data that
/// monodromy solving starts from.
pub fn read_datum(text: &str, strict: bool) -> Result<(CoeffRing, Vec<usize>, AMatrix)> {
    let mut value = parse_root(text)?;
    if let Some(obj) = value.as_object_mut() {
        if !obj.contains_key("Nmat") {
            let rank = obj.get("rank").and_then(Value::as_u64).unwrap_or(0) as usize;
            let zero: Vec<Vec<Value>> = vec![vec![Value::Array(Vec::new()); rank]; rank];
            obj.insert("Nmat".into(), serde_json::to_value(zero).expect("arrays serialize"));
        }
    }
    let doc = ModuleDocument::from_value(&value, strict)?;
    let ring = CoeffRing::new(doc.params)?;
    let frob = matrix_from_doc(&ring, &doc.frobenius, doc.rank, "/G")?;
    Ok((ring, doc.fil_exponents, frob))
}

#[derive(Serialize)]
struct DescriptorDoc<'a> {
    digits: &'a [usize],
}

pub fn descriptor_to_value(desc: &SimpleDescriptor) -> Value {
    serde_json::to_value(DescriptorDoc { digits: desc.digits() }).expect("descriptor serializes")
}

pub fn descriptor_from_value(params: GlobalParams, v: &Value, path: &str) -> Result<SimpleDescriptor> {
    let obj = as_object(v, path)?;
    let dpath = format!("{path}/digits");
    let digits = as_array(field(obj, path, "digits")?, &dpath)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_uint(x, &format!("{dpath}/{i}")).map(|n| n as usize))
        .collect::<Result<Vec<_>>>()?;
    SimpleDescriptor::new(params, digits).map_err(|e| schema_error(&dpath, e.to_string()))
}
