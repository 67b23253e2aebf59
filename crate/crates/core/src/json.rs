//! Serde descriptors for every artifact the CLI reads or writes: field
//! specs, matrices, codes, convertible pairs (scalar and vector), codewords,
//! traces, and verification reports.
//!
//! Descriptors are plain data; conversion back into library types re-runs
//! full validation, so a hand-edited file cannot smuggle in an inconsistent
//! object unnoticed.

use serde::{Deserialize, Serialize};

use crate::access::{
    ConstructionSets, ConversionPlan, ConvertiblePair, Family, MergeParams, PlanSource,
};
use crate::bandwidth::{BandwidthTrace, BwParams, VectorCodePair, VectorCodeword};
use crate::gf::{Field, FieldSpec};
use crate::linalg::{Matrix, OrderedSet};
use crate::mds::{Codeword, MdsCode, Representation};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpecJson {
    pub fn of(field: &Field) -> FieldSpecJson {
        let spec = field.spec();
        FieldSpecJson {
            p: spec.p(),
            m: spec.m(),
            modulus: spec.modulus().to_vec(),
        }
    }

    pub fn to_field(&self) -> Result<Field> {
        let spec = if self.m == 1 {
            FieldSpec::prime(self.p)?
        } else {
            FieldSpec::extension(self.p, self.m, self.modulus.clone())?
        };
        Ok(Field::new(spec))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpecJson,
    pub entries: Vec<Vec<u64>>,
}

impl MatrixJson {
    pub fn of(m: &Matrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            field: FieldSpecJson::of(m.field()),
            entries: (0..m.rows()).map(|i| m.row(i).to_vec()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let field = self.field.to_field()?;
        let m = Matrix::from_rows(field, &self.entries)?;
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(Error::DimensionMismatch(
                "matrix entries disagree with the declared shape".into(),
            ));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    pub k: usize,
    pub repr: String,
    pub matrix: MatrixJson,
    pub field: FieldSpecJson,
}

impl CodeJson {
    pub fn of(code: &MdsCode) -> CodeJson {
        let (repr, matrix) = match code.representation() {
            Representation::Systematic(p) => ("systematic", p),
            Representation::ParityCheck(h) => ("parity_check", h),
        };
        CodeJson {
            n: code.n(),
            k: code.k(),
            repr: repr.into(),
            matrix: MatrixJson::of(matrix),
            field: FieldSpecJson::of(code.field()),
        }
    }

    pub fn to_code(&self) -> Result<MdsCode> {
        let m = self.matrix.to_matrix()?;
        let code = match self.repr.as_str() {
            "systematic" => MdsCode::systematic(m)?,
            "parity_check" => MdsCode::parity_check(m)?,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown representation {other:?}"
                )))
            }
        };
        if code.n() != self.n || code.k() != self.k {
            return Err(Error::DimensionMismatch(
                "code matrix disagrees with the declared [n, k]".into(),
            ));
        }
        Ok(code)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeParamsJson {
    pub k_i: usize,
    pub r_i: usize,
    pub r_f: usize,
    pub lambda: usize,
}

impl MergeParamsJson {
    pub fn of(p: &MergeParams) -> MergeParamsJson {
        MergeParamsJson {
            k_i: p.k_i(),
            r_i: p.r_i(),
            r_f: p.r_f(),
            lambda: p.lambda(),
        }
    }

    pub fn to_params(&self) -> Result<MergeParams> {
        MergeParams::new(self.k_i, self.r_i, self.r_f, self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSourceJson {
    pub block: usize,
    pub coords: Vec<usize>,
    pub coeffs: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanJson {
    pub new_symbols: Vec<Vec<PlanSourceJson>>,
    pub read_set: Vec<(usize, usize)>,
}

impl PlanJson {
    pub fn of(plan: &ConversionPlan) -> PlanJson {
        PlanJson {
            new_symbols: plan
                .sources()
                .iter()
                .map(|per_block| {
                    per_block
                        .iter()
                        .enumerate()
                        .map(|(l, src)| PlanSourceJson {
                            block: l + 1,
                            coords: src.coords.clone(),
                            coeffs: src.coeffs.clone(),
                        })
                        .collect()
                })
                .collect(),
            read_set: plan.read_set().iter().copied().collect(),
        }
    }

    pub fn to_plan(&self, lambda: usize) -> Result<ConversionPlan> {
        let sources = self
            .new_symbols
            .iter()
            .map(|per_block| {
                per_block
                    .iter()
                    .enumerate()
                    .map(|(l, src)| {
                        if src.block != l + 1 {
                            return Err(Error::InvalidArgument(
                                "plan blocks must be listed in order 1..lambda".into(),
                            ));
                        }
                        Ok(PlanSource {
                            coords: src.coords.clone(),
                            coeffs: src.coeffs.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ConversionPlan::new(lambda, sources)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetsJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x_blocks: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a_blocks: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_initial: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_final: Option<Vec<u64>>,
}

impl SetsJson {
    pub fn of(sets: &ConstructionSets) -> SetsJson {
        let dump = |s: &OrderedSet| s.values().to_vec();
        SetsJson {
            x_blocks: sets.x_blocks.iter().map(dump).collect(),
            y: sets.y.as_ref().map(dump),
            a_blocks: sets.a_blocks.iter().map(dump).collect(),
            b_initial: sets.b_initial.as_ref().map(dump),
            b_final: sets.b_final.as_ref().map(dump),
        }
    }

    pub fn to_sets(&self, field: &Field) -> Result<ConstructionSets> {
        let load = |vals: &Vec<u64>| OrderedSet::from_values(field.clone(), vals.clone());
        Ok(ConstructionSets {
            x_blocks: self.x_blocks.iter().map(load).collect::<Result<_>>()?,
            y: self.y.as_ref().map(load).transpose()?,
            a_blocks: self.a_blocks.iter().map(load).collect::<Result<_>>()?,
            b_initial: self.b_initial.as_ref().map(load).transpose()?,
            b_final: self.b_final.as_ref().map(load).transpose()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub params: MergeParamsJson,
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub field: FieldSpecJson,
    pub initial: CodeJson,
    #[serde(rename = "final")]
    pub final_code: CodeJson,
    pub plan: PlanJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<SetsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_bound: Option<u64>,
}

impl PairJson {
    pub fn of(pair: &ConvertiblePair) -> PairJson {
        PairJson {
            params: MergeParamsJson::of(pair.params()),
            family: pair.family().name().into(),
            variant: pair.family().variant_name().map(String::from),
            field: FieldSpecJson::of(pair.field()),
            initial: CodeJson::of(pair.initial()),
            final_code: CodeJson::of(pair.final_code()),
            plan: PlanJson::of(pair.plan()),
            sets: pair.sets().map(SetsJson::of),
            field_bound: None,
        }
    }

    pub fn to_pair(&self) -> Result<ConvertiblePair> {
        let params = self.params.to_params()?;
        let family = Family::parse(&self.family, self.variant.as_deref())?;
        let field = self.field.to_field()?;
        let initial = self.initial.to_code()?;
        let final_code = self.final_code.to_code()?;
        if initial.field() != &field || final_code.field() != &field {
            return Err(Error::FieldMismatch);
        }
        let plan = self.plan.to_plan(params.lambda())?;
        let sets = self.sets.as_ref().map(|s| s.to_sets(&field)).transpose()?;
        ConvertiblePair::from_parts(params, family, initial, final_code, plan, sets)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BwParamsJson {
    pub k_i: usize,
    pub r_i: usize,
    pub r_f: usize,
    pub lambda: usize,
}

impl BwParamsJson {
    pub fn of(p: &BwParams) -> BwParamsJson {
        BwParamsJson {
            k_i: p.k_i(),
            r_i: p.r_i(),
            r_f: p.r_f(),
            lambda: p.lambda(),
        }
    }

    pub fn to_params(&self) -> Result<BwParams> {
        BwParams::new(self.k_i, self.r_i, self.r_f, self.lambda)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorPairJson {
    pub params: BwParamsJson,
    pub alpha: usize,
    pub field: FieldSpecJson,
    pub base: PairJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_bound: Option<u64>,
}

impl VectorPairJson {
    pub fn of(pair: &VectorCodePair) -> VectorPairJson {
        VectorPairJson {
            params: BwParamsJson::of(pair.params()),
            alpha: pair.params().alpha(),
            field: FieldSpecJson::of(pair.field()),
            base: PairJson::of(pair.base()),
            field_bound: None,
        }
    }

    pub fn to_pair(&self) -> Result<VectorCodePair> {
        let params = self.params.to_params()?;
        if self.alpha != params.alpha() {
            return Err(Error::InvalidArgument(
                "declared alpha disagrees with r_f / gcd(r_f, r_i)".into(),
            ));
        }
        VectorCodePair::from_base(&params, self.base.to_pair()?)
    }
}

/// A pair file on disk; the tag keeps scalar and vector artifacts apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairFileJson {
    Scalar(PairJson),
    Vector(VectorPairJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordJson {
    pub field: FieldSpecJson,
    pub symbols: Vec<u64>,
}

impl CodewordJson {
    pub fn of(cw: &Codeword) -> CodewordJson {
        CodewordJson {
            field: FieldSpecJson::of(cw.field()),
            symbols: cw.symbols().to_vec(),
        }
    }

    pub fn to_codeword(&self) -> Result<Codeword> {
        Codeword::new(self.field.to_field()?, self.symbols.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorCodewordJson {
    pub n: usize,
    pub alpha: usize,
    pub field: FieldSpecJson,
    pub subsymbols: Vec<Vec<u64>>,
}

impl VectorCodewordJson {
    pub fn of(cw: &VectorCodeword) -> VectorCodewordJson {
        VectorCodewordJson {
            n: cw.n(),
            alpha: cw.alpha(),
            field: FieldSpecJson::of(cw.field()),
            subsymbols: (0..cw.n()).map(|i| cw.symbol(i).to_vec()).collect(),
        }
    }

    pub fn to_codeword(&self) -> Result<VectorCodeword> {
        VectorCodeword::new(
            self.field.to_field()?,
            self.n,
            self.alpha,
            self.subsymbols.concat(),
        )
    }
}

/// Access trace report: distinct disks read/written plus the read set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessTraceJson {
    pub reads: usize,
    pub writes: usize,
    pub per_symbol: bool,
    pub read_set: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandwidthReportJson {
    pub read: u64,
    pub write: u64,
    pub bound_read: u64,
    pub bound_write: u64,
    pub optimal: bool,
}

/// Per-disk sub-symbol reads of a bandwidth trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandwidthTraceJson {
    pub read: u64,
    pub write: u64,
    pub per_disk_read: Vec<(usize, usize, usize)>,
}

impl BandwidthTraceJson {
    pub fn of(trace: &BandwidthTrace) -> BandwidthTraceJson {
        BandwidthTraceJson {
            read: trace.read(),
            write: trace.write(),
            per_disk_read: trace
                .per_disk_read()
                .iter()
                .map(|(&(l, c), &n)| (l, c, n))
                .collect(),
        }
    }
}

/// Messages file: one row per initial codeword.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessagesJson {
    pub messages: Vec<Vec<u64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::access::{build_grs, build_subgroup_mult, MultVariant};
    use crate::bandwidth::build_vector_pair;

    #[test]
    fn field_roundtrip() {
        for q in [13u64, 16] {
            let f = Field::gf(q).unwrap();
            let j = FieldSpecJson::of(&f);
            let text = serde_json::to_string(&j).unwrap();
            let back: FieldSpecJson = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_field().unwrap(), f);
        }
    }

    #[test]
    fn pair_roundtrip_subgroup() {
        let params = MergeParams::new(5, 4, 4, 2).unwrap();
        let pair =
            build_subgroup_mult(&params, &Field::gf(13).unwrap(), MultVariant::B, None).unwrap();
        let j = PairJson::of(&pair);
        let text = serde_json::to_string_pretty(&j).unwrap();
        let back: PairJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let pair2 = back.to_pair().unwrap();
        assert_eq!(pair2.plan(), pair.plan());
        assert_eq!(pair2.initial(), pair.initial());
        assert_eq!(pair2.final_code(), pair.final_code());
        assert_eq!(pair2.family(), pair.family());
    }

    #[test]
    fn pair_roundtrip_grs() {
        let params = MergeParams::new(4, 3, 2, 2).unwrap();
        let pair = build_grs(&params, &Field::gf(13).unwrap(), false).unwrap();
        let j = PairFileJson::Scalar(PairJson::of(&pair));
        let text = serde_json::to_string(&j).unwrap();
        let back: PairFileJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        match back {
            PairFileJson::Scalar(p) => {
                let pair2 = p.to_pair().unwrap();
                assert_eq!(pair2.plan(), pair.plan());
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn vector_pair_roundtrip() {
        let params = BwParams::new(8, 2, 6, 2).unwrap();
        let pair = build_vector_pair(&params, &Field::gf(23).unwrap()).unwrap();
        let j = VectorPairJson::of(&pair);
        let text = serde_json::to_string(&j).unwrap();
        let back: VectorPairJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        let pair2 = back.to_pair().unwrap();
        assert_eq!(pair2.p_initial(), pair.p_initial());
        assert_eq!(pair2.w(2), pair.w(2));
    }

    #[test]
    fn tampered_code_shape_is_rejected() {
        let params = MergeParams::new(5, 4, 4, 2).unwrap();
        let pair =
            build_subgroup_mult(&params, &Field::gf(13).unwrap(), MultVariant::B, None).unwrap();
        let mut j = PairJson::of(&pair);
        j.initial.n = 12;
        assert!(j.to_pair().is_err());
    }
}
