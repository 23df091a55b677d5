//! JSON measure files.
//!
//! Product: `{"type":"product","n":3,"p":["1/2","1/3","1/4"]}`.
//! Table: `{"type":"table","n":3,"w":{"000":"1/3","100":"1/6",...}}`, keys are
//! bitstrings with coordinate 1 leftmost and omitted keys carry weight 0.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Measure, ProductMeasure, TableMeasure};
use crate::cube::Point;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureJson {
    Product { n: usize, p: Vec<String> },
    Table { n: usize, w: BTreeMap<String, String> },
}

/// Either kind of measure, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMeasure {
    Product(ProductMeasure),
    Table(TableMeasure),
}

impl AnyMeasure {
    pub fn from_json(j: &MeasureJson) -> Result<AnyMeasure> {
        match j {
            MeasureJson::Product { n, p } => {
                if p.len() != *n {
                    return Err(Error::DimensionMismatch { left: *n, right: p.len() });
                }
                let p = p.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>()?;
                Ok(AnyMeasure::Product(ProductMeasure::new(p)?))
            }
            MeasureJson::Table { n, w } => {
                if *n > super::MAX_MEASURE_DIM {
                    return Err(Error::DimensionOutOfRange { n: *n, min: 0, max: super::MAX_MEASURE_DIM });
                }
                let mut weights = vec![Rational::zero(); 1 << n];
                for (key, val) in w {
                    if key.len() != *n {
                        return Err(Error::Parse(format!("key {key:?} is not a {n}-bit string")));
                    }
                    let x = Point::from_bitstring(key)?;
                    weights[x.0 as usize] = rational::parse(val)?;
                }
                Ok(AnyMeasure::Table(TableMeasure::new(*n, weights)?))
            }
        }
    }

    pub fn parse(text: &str) -> Result<AnyMeasure> {
        let j: MeasureJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        AnyMeasure::from_json(&j)
    }

    pub fn to_json(&self) -> MeasureJson {
        match self {
            AnyMeasure::Product(m) => product_json(m),
            AnyMeasure::Table(m) => table_json(m),
        }
    }

    pub fn table(&self) -> TableMeasure {
        match self {
            AnyMeasure::Product(m) => m.to_table(),
            AnyMeasure::Table(m) => m.clone(),
        }
    }
}

impl Measure for AnyMeasure {
    fn dim(&self) -> usize {
        match self {
            AnyMeasure::Product(m) => m.dim(),
            AnyMeasure::Table(m) => m.dim(),
        }
    }

    fn atom(&self, x: Point) -> Rational {
        match self {
            AnyMeasure::Product(m) => m.atom(x),
            AnyMeasure::Table(m) => m.atom(x),
        }
    }
}

pub fn product_json(m: &ProductMeasure) -> MeasureJson {
    MeasureJson::Product { n: m.dim(), p: m.params().iter().map(rational::format).collect() }
}

pub fn table_json(m: &TableMeasure) -> MeasureJson {
    let n = m.dim();
    let w = m
        .weights()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, v)| (Point(x as u32).to_bitstring(n), rational::format(v)))
        .collect();
    MeasureJson::Table { n, w }
}

impl From<&TableMeasure> for MeasureJson {
    fn from(m: &TableMeasure) -> MeasureJson {
        table_json(m)
    }
}

impl From<&ProductMeasure> for MeasureJson {
    fn from(m: &ProductMeasure) -> MeasureJson {
        product_json(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::fixed_point_measure;
    use crate::rational::ratio;

    #[test]
    fn product_file() {
        let m = AnyMeasure::parse(r#"{"type":"product","n":3,"p":["1/2","1/3","1/4"]}"#).unwrap();
        match &m {
            AnyMeasure::Product(p) => assert_eq!(p.params()[2], ratio(1, 4)),
            _ => panic!("expected product"),
        }
        assert_eq!(
            serde_json::to_string(&m.to_json()).unwrap(),
            r#"{"type":"product","n":3,"p":["1/2","1/3","1/4"]}"#
        );
    }

    #[test]
    fn table_file_round_trip() {
        let mu3 = fixed_point_measure(3).unwrap();
        let s = serde_json::to_string(&MeasureJson::from(&mu3)).unwrap();
        assert_eq!(
            s,
            r#"{"type":"table","n":3,"w":{"000":"1/3","001":"1/6","010":"1/6","100":"1/6","111":"1/6"}}"#
        );
        assert_eq!(AnyMeasure::parse(&s).unwrap(), AnyMeasure::Table(mu3));
    }

    #[test]
    fn malformed_files() {
        for bad in [
            r#"{"type":"table","n":2,"w":{"00":"1/2"}}"#,
            r#"{"type":"table","n":2,"w":{"0":"1/1"}}"#,
            r#"{"type":"table","n":2,"w":{"02":"1/1"}}"#,
            r#"{"type":"product","n":2,"p":["1/2"]}"#,
            r#"{"type":"product","n":1,"p":["3/2"]}"#,
            r#"{"type":"simplex","n":1}"#,
            r#"not json"#,
        ] {
            assert!(AnyMeasure::parse(bad).is_err(), "{bad}");
        }
    }
}
