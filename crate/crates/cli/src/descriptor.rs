//! JSON space descriptors and dispatch from a descriptor to a concrete
//! space type.

use std::collections::BTreeMap;

use convex_core::geometric::{vector_space, IntervalSpace, Simplex};
use convex_core::giry::free_space;
use convex_core::mixed::{adjoin_infinity, lottery_space, AdjoinInfinity, AffineFiber, AffineMap, FiberedSpace};
use convex_core::semilattice::{divisor_lattice, face_classifier_lattice, free_semilattice, FiniteSemilattice, OperationTable};
use convex_core::{RandomElement, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A space description, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceDescriptor {
    Vector { dim: usize },
    Simplex { vertices: usize },
    Free { carrier: Vec<String> },
    Semilattice(SemilatticeDesc),
    FaceClassifier {},
    Fibered { base: SemilatticeDesc, fibers: Vec<FiberDesc>, transports: Vec<TransportDesc> },
    AdjoinInfinity { base: Box<SpaceDescriptor> },
    Lottery {},
    Intervals {},
    /// An unvalidated operation table, used for deliberately broken spaces.
    Table { elements: Vec<String>, table: Vec<Vec<usize>> },
}

/// A finite semilattice given by an explicit meet table, as the divisors of
/// a number, or as the free semilattice on some generators.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemilatticeDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors_of: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_on: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FiberDesc {
    Vector { dim: usize },
    Simplex { vertices: usize },
}

/// The transport `C_upper → C_lower` for a covering pair `lower ⋖ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportDesc {
    pub lower: String,
    pub upper: String,
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Vec<Rational>,
}

/// Receives the concrete space built from a descriptor.
pub trait SpaceVisitor {
    type Output;
    fn visit<S>(self, space: &S) -> Self::Output
    where
        S: RandomElement,
        S::Elem: Serialize + DeserializeOwned;
}

fn field_err(path: &str, field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Field { path: path.into(), field: field.into(), message: e.to_string() }
}

/// Parses descriptor text; `path` only labels error messages. The result is
/// also built once so semantic errors surface here.
pub fn parse_space_descriptor(text: &str, path: &str) -> Result<SpaceDescriptor, CliError> {
    let desc: SpaceDescriptor = serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: path.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    struct Probe;
    impl SpaceVisitor for Probe {
        type Output = ();
        fn visit<S>(self, _: &S)
        where
            S: RandomElement,
            S::Elem: Serialize + DeserializeOwned,
        {
        }
    }
    visit_space(&desc, path, Probe)?;
    Ok(desc)
}

/// Reads and parses a descriptor file.
pub fn load_space_descriptor(path: &str) -> Result<SpaceDescriptor, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    parse_space_descriptor(&text, path)
}

pub fn build_semilattice(d: &SemilatticeDesc, path: &str, field: &str) -> Result<FiniteSemilattice, CliError> {
    let err = |sub: &str, e: convex_core::Error| field_err(path, &format!("{field}{sub}"), e);
    match (d.elements.clone(), d.meet.clone(), d.divisors_of, d.free_on.as_ref()) {
        (Some(elements), Some(meet), None, None) => {
            FiniteSemilattice::new(elements, meet).map_err(|e| err(".meet", e))
        }
        (None, None, Some(n), None) => divisor_lattice(n).map_err(|e| err(".divisors_of", e)),
        (None, None, None, Some(gens)) => free_semilattice(gens).map_err(|e| err(".free_on", e)),
        _ => Err(field_err(
            path,
            field,
            "give exactly one of `elements`+`meet`, `divisors_of`, or `free_on`",
        )),
    }
}

fn build_fibered(
    base: &SemilatticeDesc,
    fibers: &[FiberDesc],
    transports: &[TransportDesc],
    path: &str,
) -> Result<FiberedSpace<AffineFiber, AffineMap>, CliError> {
    let base = build_semilattice(base, path, "base")?;
    let fibers = fibers
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            FiberDesc::Vector { dim } => Ok(AffineFiber::Vector(vector_space(*dim))),
            FiberDesc::Simplex { vertices } => Simplex::new(*vertices)
                .map(AffineFiber::Simplex)
                .map_err(|e| field_err(path, &format!("fibers[{i}].vertices"), e)),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut map = BTreeMap::new();
    for (i, t) in transports.iter().enumerate() {
        let lookup = |name: &str, which: &str| {
            base.index_of(name)
                .ok_or_else(|| field_err(path, &format!("transports[{i}].{which}"), format!("no base element `{name}`")))
        };
        let lo = lookup(&t.lower, "lower")?;
        let hi = lookup(&t.upper, "upper")?;
        let affine = AffineMap::new(t.matrix.clone(), t.offset.clone())
            .map_err(|e| field_err(path, &format!("transports[{i}].matrix"), e))?;
        if let (Some(fl), Some(fh)) = (fibers.get(lo), fibers.get(hi)) {
            let in_ok = affine.input_dim().map_or(true, |d| d == fh.dim()) || affine.output_dim() == 0;
            if affine.output_dim() != fl.dim() || !in_ok {
                return Err(field_err(
                    path,
                    &format!("transports[{i}].matrix"),
                    format!("expected a {}x{} matrix", fl.dim(), fh.dim()),
                ));
            }
        }
        if map.insert((lo, hi), affine).is_some() {
            return Err(field_err(path, &format!("transports[{i}]"), "duplicate transport"));
        }
    }
    FiberedSpace::new(base, fibers, map).map_err(|e| field_err(path, "transports", e))
}

struct Infinity<V>(V);

impl<V: SpaceVisitor> SpaceVisitor for Infinity<V> {
    type Output = V::Output;
    fn visit<S>(self, space: &S) -> V::Output
    where
        S: RandomElement,
        S::Elem: Serialize + DeserializeOwned,
    {
        let wrapped: AdjoinInfinity<&S> = adjoin_infinity(space);
        self.0.visit(&wrapped)
    }
}

/// Builds the space described by `desc` and hands it to `v`.
pub fn visit_space<V: SpaceVisitor>(desc: &SpaceDescriptor, path: &str, v: V) -> Result<V::Output, CliError> {
    match desc {
        SpaceDescriptor::AdjoinInfinity { base } => {
            if matches!(**base, SpaceDescriptor::AdjoinInfinity { .. }) {
                return Err(field_err(path, "base", "nested adjoin-infinity is not supported"));
            }
            visit_base(base, path, Infinity(v))
        }
        other => visit_base(other, path, v),
    }
}

fn visit_base<V: SpaceVisitor>(desc: &SpaceDescriptor, path: &str, v: V) -> Result<V::Output, CliError> {
    Ok(match desc {
        SpaceDescriptor::Vector { dim } => v.visit(&vector_space(*dim)),
        SpaceDescriptor::Simplex { vertices } => {
            v.visit(&Simplex::new(*vertices).map_err(|e| field_err(path, "vertices", e))?)
        }
        SpaceDescriptor::Free { carrier } => {
            v.visit(&free_space(carrier.iter().cloned()).map_err(|e| field_err(path, "carrier", e))?)
        }
        SpaceDescriptor::Semilattice(d) => v.visit(&build_semilattice(d, path, "meet")?),
        SpaceDescriptor::FaceClassifier {} => v.visit(&face_classifier_lattice()),
        SpaceDescriptor::Fibered { base, fibers, transports } => {
            v.visit(&build_fibered(base, fibers, transports, path)?)
        }
        SpaceDescriptor::Lottery {} => v.visit(&lottery_space()),
        SpaceDescriptor::Intervals {} => v.visit(&IntervalSpace),
        SpaceDescriptor::Table { elements, table } => {
            v.visit(&OperationTable::new(elements.clone(), table.clone()).map_err(|e| field_err(path, "table", e))?)
        }
        SpaceDescriptor::AdjoinInfinity { .. } => {
            return Err(field_err(path, "base", "nested adjoin-infinity is not supported"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_kinds() {
        assert_eq!(
            parse_space_descriptor(r#"{"kind":"vector","dim":2}"#, "-").unwrap(),
            SpaceDescriptor::Vector { dim: 2 }
        );
        let fc = parse_space_descriptor(
            r#"{"kind":"semilattice","elements":["i","f"],"meet":[[0,0],[0,1]]}"#,
            "-",
        )
        .unwrap();
        assert!(matches!(fc, SpaceDescriptor::Semilattice(_)));
        parse_space_descriptor(r#"{"kind":"semilattice","divisors_of":12}"#, "-").unwrap();
        parse_space_descriptor(r#"{"kind":"adjoin-infinity","base":{"kind":"lottery"}}"#, "-").unwrap();
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let err = parse_space_descriptor("{\n  \"kind\": \"vector\",\n  \"dim\": }", "d.json").unwrap_err();
        match err {
            CliError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_field_and_triple() {
        let err = parse_space_descriptor(
            r#"{"kind":"semilattice","elements":["a","b","c"],"meet":[[0,0,2],[0,1,1],[2,1,2]]}"#,
            "bad.json",
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("meet") && err.contains("associativity") && err.contains("(a, "), "{err}");
        let err = parse_space_descriptor(r#"{"kind":"semilattice","divisors_of":0,"free_on":["x"]}"#, "-")
            .unwrap_err()
            .to_string();
        assert!(err.contains("exactly one"), "{err}");
    }

    #[test]
    fn fibered_descriptor_checks_transports() {
        let text = r#"{
            "kind": "fibered",
            "base": {"elements": ["i", "f"], "meet": [[0, 0], [0, 1]]},
            "fibers": [{"kind": "vector", "dim": 0}, {"kind": "vector", "dim": 1}],
            "transports": [{"lower": "i", "upper": "f", "matrix": [], "offset": []}]
        }"#;
        parse_space_descriptor(text, "-").unwrap();
        let missing = text.replace(r#"{"lower": "i", "upper": "f", "matrix": [], "offset": []}"#, "");
        let err = parse_space_descriptor(&missing, "-").unwrap_err().to_string();
        assert!(err.contains("missing transport"), "{err}");
        let wrong = text.replace("\"upper\": \"f\"", "\"upper\": \"g\"");
        let err = parse_space_descriptor(&wrong, "-").unwrap_err().to_string();
        assert!(err.contains("transports[0].upper"), "{err}");
    }
}
