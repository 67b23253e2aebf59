//! Access-optimal scalar convertible codes in the merge regime.
//!
//! A pair couples an initial [k_i + r_i, k_i] MDS code with a final
//! [lambda*k_i + r_f, lambda*k_i] MDS code and a conversion plan stating, for
//! each new parity symbol, which initial-codeword coordinates are read and
//! with which coefficients. Two construction families are provided:
//!
//! - Cauchy matrices on multiplicative or additive subgroup structure. The
//!   blocks of the final parity matrix are column-wise scalar multiples of
//!   the first block, so every new parity reads exactly one symbol per
//!   initial codeword (per-symbol plans).
//! - Vandermonde/GRS parity-check constructions (plain, doubly- and
//!   triply-extended) where the new parities are linear in the r_f relevant
//!   parity symbols of each initial codeword.
//!
//! Conversion itself is a pure function of the plan, so access traces are
//! data-independent by construction; the verifiers re-measure them anyway.

use std::collections::BTreeSet;

use rand::Rng;

use crate::gf::{Field, FieldElement};
use crate::linalg::{
    cauchy, extended_vandermonde, scalar_multiple_of, triply_extended_vandermonde, vandermonde,
    Matrix, OrderedSet,
};
use crate::mds::{Codeword, MdsCode};
use crate::{Error, Result};

/// Parameters of a merge conversion: lambda initial [k_i + r_i, k_i]
/// codewords become one [lambda*k_i + r_f, lambda*k_i] codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeParams {
    k_i: usize,
    r_i: usize,
    r_f: usize,
    lambda: usize,
}

impl MergeParams {
    pub fn new(k_i: usize, r_i: usize, r_f: usize, lambda: usize) -> Result<MergeParams> {
        if k_i < 2 {
            return Err(Error::Precondition(
                "k_i must exceed 1; single-symbol messages convert by copying".into(),
            ));
        }
        if r_f < 2 {
            return Err(Error::Precondition(
                "r_f = 1 needs no construction: sum one parity symbol from each initial codeword"
                    .into(),
            ));
        }
        if r_i < 1 {
            return Err(Error::Precondition("r_i must be at least 1".into()));
        }
        if lambda < 2 {
            return Err(Error::Precondition(
                "merging needs at least two initial codewords".into(),
            ));
        }
        Ok(MergeParams {
            k_i,
            r_i,
            r_f,
            lambda,
        })
    }

    pub fn k_i(&self) -> usize {
        self.k_i
    }

    pub fn r_i(&self) -> usize {
        self.r_i
    }

    pub fn r_f(&self) -> usize {
        self.r_f
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn n_i(&self) -> usize {
        self.k_i + self.r_i
    }

    pub fn k_f(&self) -> usize {
        self.lambda * self.k_i
    }

    pub fn n_f(&self) -> usize {
        self.k_f() + self.r_f
    }
}

/// Variants of the multiplicative subgroup construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultVariant {
    /// Y is the full group of r-th roots of unity; lambda <= r.
    Base,
    /// Y adds 0 to the (r-1)-th roots; lambda <= r - 1.
    A,
    /// As A with an all-one column appended; lambda <= r - 2.
    B,
}

/// Variants of the additive subgroup construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AddVariant {
    /// Y is an additive subgroup of size r = p^u; lambda <= r.
    Base,
    /// Subgroup of size r - 1 with an all-one column appended; lambda <= r - 1.
    A,
}

/// Construction family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SubgroupMult(MultVariant),
    SubgroupAdd(AddVariant),
    Grs,
    GrsDoublyExtended,
    GrsTriplyExtended,
    Default,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::SubgroupMult(_) => "subgroup-mult",
            Family::SubgroupAdd(_) => "subgroup-add",
            Family::Grs => "grs",
            Family::GrsDoublyExtended => "grs-doubly-ext",
            Family::GrsTriplyExtended => "grs-triply-ext",
            Family::Default => "default",
        }
    }

    pub fn variant_name(&self) -> Option<&'static str> {
        match self {
            Family::SubgroupMult(MultVariant::Base) | Family::SubgroupAdd(AddVariant::Base) => {
                Some("base")
            }
            Family::SubgroupMult(MultVariant::A) | Family::SubgroupAdd(AddVariant::A) => Some("A"),
            Family::SubgroupMult(MultVariant::B) => Some("B"),
            _ => None,
        }
    }

    /// Parse a family name with its variant, either separate ("subgroup-mult"
    /// + "B") or folded into the name ("subgroup-mult-B").
    pub fn parse(name: &str, variant: Option<&str>) -> Result<Family> {
        let (base, suffix) = match name {
            n if n.starts_with("subgroup-mult") => ("subgroup-mult", &n[13..]),
            n if n.starts_with("subgroup-add") => ("subgroup-add", &n[12..]),
            n => (n, ""),
        };
        let folded = suffix.strip_prefix('-');
        let variant = match (folded, variant) {
            (Some(f), None) => Some(f),
            (None, v) => v,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument(
                    "variant given both in the family name and separately".into(),
                ))
            }
        };
        match (base, variant) {
            ("subgroup-mult", None | Some("base")) => Ok(Family::SubgroupMult(MultVariant::Base)),
            ("subgroup-mult", Some("A" | "a")) => Ok(Family::SubgroupMult(MultVariant::A)),
            ("subgroup-mult", Some("B" | "b")) => Ok(Family::SubgroupMult(MultVariant::B)),
            ("subgroup-add", None | Some("base")) => Ok(Family::SubgroupAdd(AddVariant::Base)),
            ("subgroup-add", Some("A" | "a")) => Ok(Family::SubgroupAdd(AddVariant::A)),
            ("grs", None) => Ok(Family::Grs),
            ("grs-doubly-ext", None) => Ok(Family::GrsDoublyExtended),
            ("grs-triply-ext", None) => Ok(Family::GrsTriplyExtended),
            ("default", None) => Ok(Family::Default),
            _ => Err(Error::InvalidArgument(format!(
                "unknown family/variant: {name} / {variant:?}"
            ))),
        }
    }
}

/// What one new parity symbol reads from one initial codeword: parallel
/// coordinate/coefficient lists (zero coefficients are never stored).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanSource {
    pub coords: Vec<usize>,
    pub coeffs: Vec<u64>,
}

/// The full coefficient schedule of a conversion: `sources[i][l]` describes
/// what new symbol i reads from initial codeword l+1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConversionPlan {
    lambda: usize,
    sources: Vec<Vec<PlanSource>>,
    read_set: BTreeSet<(usize, usize)>,
}

impl ConversionPlan {
    pub fn new(lambda: usize, sources: Vec<Vec<PlanSource>>) -> Result<ConversionPlan> {
        let mut read_set = BTreeSet::new();
        for per_block in &sources {
            if per_block.len() != lambda {
                return Err(Error::DimensionMismatch(
                    "plan must list one source group per initial codeword".into(),
                ));
            }
            for (block, src) in per_block.iter().enumerate() {
                if src.coords.len() != src.coeffs.len() {
                    return Err(Error::DimensionMismatch(
                        "plan coordinate and coefficient lists differ in length".into(),
                    ));
                }
                for &c in &src.coords {
                    read_set.insert((block + 1, c));
                }
            }
        }
        Ok(ConversionPlan {
            lambda,
            sources,
            read_set,
        })
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Number of new symbols this plan produces.
    pub fn new_symbols(&self) -> usize {
        self.sources.len()
    }

    pub fn sources(&self) -> &[Vec<PlanSource>] {
        &self.sources
    }

    /// Distinct (codeword, coordinate) pairs touched by the whole plan.
    pub fn read_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.read_set
    }

    /// True iff every new symbol reads exactly one symbol from each initial
    /// codeword.
    pub fn is_per_symbol(&self) -> bool {
        self.sources
            .iter()
            .flatten()
            .all(|src| src.coords.len() == 1)
    }
}

/// Per-disk accounting of one conversion run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessTrace {
    read_set: BTreeSet<(usize, usize)>,
    disks_written: usize,
    per_symbol_reads: Vec<Vec<(usize, usize)>>,
}

impl AccessTrace {
    pub fn disks_read(&self) -> usize {
        self.read_set.len()
    }

    pub fn disks_written(&self) -> usize {
        self.disks_written
    }

    pub fn read_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.read_set
    }

    /// For each new symbol, the (codeword, coordinate) pairs it read.
    pub fn per_symbol_reads(&self) -> &[Vec<(usize, usize)>] {
        &self.per_symbol_reads
    }

    pub fn total_cost(&self) -> usize {
        self.disks_read() + self.disks_written
    }
}

/// The evaluation/structure sets a pair was built from; kept for reporting
/// and for the exact matrix identities the verifiers re-check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionSets {
    /// Per-block x-sets of the Cauchy families, in block order.
    pub x_blocks: Vec<OrderedSet>,
    /// The y-set of the Cauchy families.
    pub y: Option<OrderedSet>,
    /// Per-block evaluation sets of the GRS family.
    pub a_blocks: Vec<OrderedSet>,
    /// GRS evaluation set of the initial parities (final set first).
    pub b_initial: Option<OrderedSet>,
    /// GRS evaluation set of the final parities.
    pub b_final: Option<OrderedSet>,
}

impl ConstructionSets {
    /// Concatenation of the per-block x-sets.
    pub fn x(&self) -> Result<OrderedSet> {
        let mut iter = self.x_blocks.iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InvalidArgument("no x-sets recorded".into()))?;
        iter.try_fold(first.clone(), |acc, s| acc.concat(s))
    }
}

/// An initial/final MDS code pair plus its conversion plan.
#[derive(Clone, Debug)]
pub struct ConvertiblePair {
    params: MergeParams,
    family: Family,
    initial: MdsCode,
    final_code: MdsCode,
    plan: ConversionPlan,
    sets: Option<ConstructionSets>,
}

impl ConvertiblePair {
    pub fn from_parts(
        params: MergeParams,
        family: Family,
        initial: MdsCode,
        final_code: MdsCode,
        plan: ConversionPlan,
        sets: Option<ConstructionSets>,
    ) -> Result<ConvertiblePair> {
        if initial.n() != params.n_i() || initial.k() != params.k_i() {
            return Err(Error::DimensionMismatch(format!(
                "initial code is [{}, {}], parameters say [{}, {}]",
                initial.n(),
                initial.k(),
                params.n_i(),
                params.k_i()
            )));
        }
        if final_code.n() != params.n_f() || final_code.k() != params.k_f() {
            return Err(Error::DimensionMismatch(format!(
                "final code is [{}, {}], parameters say [{}, {}]",
                final_code.n(),
                final_code.k(),
                params.n_f(),
                params.k_f()
            )));
        }
        if plan.lambda() != params.lambda() || plan.new_symbols() != params.r_f() {
            return Err(Error::DimensionMismatch(
                "plan shape disagrees with the parameters".into(),
            ));
        }
        if plan
            .read_set()
            .iter()
            .any(|&(_, coord)| coord >= params.n_i())
        {
            return Err(Error::InvalidArgument(
                "plan reads a coordinate outside the initial code".into(),
            ));
        }
        let q = initial.field().q();
        if plan
            .sources()
            .iter()
            .flatten()
            .any(|src| src.coeffs.iter().any(|&c| c >= q))
        {
            return Err(Error::InvalidArgument(
                "plan coefficient is not a canonical field value".into(),
            ));
        }
        Ok(ConvertiblePair {
            params,
            family,
            initial,
            final_code,
            plan,
            sets,
        })
    }

    pub fn params(&self) -> &MergeParams {
        &self.params
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn field(&self) -> &Field {
        self.initial.field()
    }

    pub fn initial(&self) -> &MdsCode {
        &self.initial
    }

    pub fn final_code(&self) -> &MdsCode {
        &self.final_code
    }

    pub fn plan(&self) -> &ConversionPlan {
        &self.plan
    }

    pub fn sets(&self) -> Option<&ConstructionSets> {
        self.sets.as_ref()
    }

    /// Re-express both codes in systematic form; the codeword sets, and thus
    /// the plan, are unchanged.
    pub fn to_systematic(&self) -> Result<ConvertiblePair> {
        Ok(ConvertiblePair {
            params: self.params,
            family: self.family,
            initial: self.initial.to_systematic()?,
            final_code: self.final_code.to_systematic()?,
            plan: self.plan.clone(),
            sets: self.sets.clone(),
        })
    }

    /// Run the planned conversion. Inputs are validated against the initial
    /// code first; the returned trace records exactly the plan's reads.
    pub fn convert(&self, inputs: &[Codeword]) -> Result<(Codeword, AccessTrace)> {
        self.check_inputs(inputs)?;
        let field = self.field().clone();
        let k_i = self.params.k_i();

        let mut symbols: Vec<u64> = Vec::with_capacity(self.params.n_f());
        for cw in inputs {
            symbols.extend_from_slice(&cw.symbols()[..k_i]);
        }

        let mut per_symbol_reads = Vec::with_capacity(self.params.r_f());
        for per_block in self.plan.sources() {
            let mut value = 0u64;
            let mut reads = Vec::new();
            for (block_idx, src) in per_block.iter().enumerate() {
                let cw = &inputs[block_idx];
                for (&coord, &coeff) in src.coords.iter().zip(&src.coeffs) {
                    value = field.add(value, field.mul(coeff, cw.symbol(coord)));
                    reads.push((block_idx + 1, coord));
                }
            }
            symbols.push(value);
            per_symbol_reads.push(reads);
        }

        let out = Codeword::new(field, symbols)?;
        let trace = AccessTrace {
            read_set: self.plan.read_set().clone(),
            disks_written: self.params.r_f(),
            per_symbol_reads,
        };
        Ok((out, trace))
    }

    /// Baseline conversion: read the k_i message symbols of every initial
    /// codeword and re-encode with the final code.
    pub fn convert_default(&self, inputs: &[Codeword]) -> Result<(Codeword, AccessTrace)> {
        self.check_inputs(inputs)?;
        let k_i = self.params.k_i();
        let mut message: Vec<u64> = Vec::with_capacity(self.params.k_f());
        for cw in inputs {
            message.extend_from_slice(&cw.symbols()[..k_i]);
        }
        let out = self.final_code.encode_values(&message)?;

        let mut read_set = BTreeSet::new();
        let mut all_reads = Vec::new();
        for block in 1..=self.params.lambda() {
            for coord in 0..k_i {
                read_set.insert((block, coord));
                all_reads.push((block, coord));
            }
        }
        let trace = AccessTrace {
            read_set,
            disks_written: self.params.r_f(),
            per_symbol_reads: vec![all_reads; self.params.r_f()],
        };
        Ok((out, trace))
    }

    /// Drop the highest-indexed new symbols of a per-symbol pair, producing a
    /// pair with a smaller r_f over the unchanged initial code.
    pub fn truncate_final_parities(&self, new_r_f: usize) -> Result<ConvertiblePair> {
        if !self.plan.is_per_symbol() {
            return Err(Error::Unsupported(
                "only per-symbol pairs stay read-optimal after dropping new symbols".into(),
            ));
        }
        if new_r_f < 2 || new_r_f >= self.params.r_f() {
            return Err(Error::InvalidArgument(format!(
                "truncated r_f must lie in [2, {})",
                self.params.r_f()
            )));
        }
        let params = MergeParams::new(
            self.params.k_i(),
            self.params.r_i(),
            new_r_f,
            self.params.lambda(),
        )?;
        let drop: Vec<usize> = (self.params.k_f() + new_r_f..self.params.n_f()).collect();
        let final_code = self.final_code.puncture(&drop)?;
        let plan = ConversionPlan::new(
            self.params.lambda(),
            self.plan.sources()[..new_r_f].to_vec(),
        )?;
        ConvertiblePair::from_parts(
            params,
            self.family,
            self.initial.clone(),
            final_code,
            plan,
            self.sets.clone(),
        )
    }

    fn check_inputs(&self, inputs: &[Codeword]) -> Result<()> {
        if inputs.len() != self.params.lambda() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} initial codewords, got {}",
                self.params.lambda(),
                inputs.len()
            )));
        }
        for (idx, cw) in inputs.iter().enumerate() {
            if cw.len() != self.params.n_i() || cw.field() != self.field() {
                return Err(Error::DimensionMismatch(format!(
                    "input {idx} does not match the initial code shape"
                )));
            }
            if !self.initial.contains(cw) {
                return Err(Error::Inconsistent(format!(
                    "input {idx} is not a codeword of the initial code"
                )));
            }
        }
        Ok(())
    }
}

/// Total access cost (reads plus writes) any conversion must pay.
pub fn access_cost_bound(params: &MergeParams) -> usize {
    if params.r_f() <= params.r_i().min(params.k_i()) {
        (params.lambda() + 1) * params.r_f()
    } else {
        params.lambda() * params.k_i() + params.r_f()
    }
}

// ---------------------------------------------------------------------------
// Per-symbol (Cauchy subgroup) constructions
// ---------------------------------------------------------------------------

/// Column matching of a blocked parity matrix: for block l and column i,
/// which first-block column it is proportional to and by which scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerSymbolMap {
    /// `map[l][i] = (i_l, theta)`: block l+1 column i equals
    /// theta * (block 1 column i_l).
    map: Vec<Vec<(usize, u64)>>,
}

impl PerSymbolMap {
    pub fn blocks(&self) -> usize {
        self.map.len()
    }

    pub fn entry(&self, block: usize, col: usize) -> (usize, u64) {
        self.map[block - 1][col]
    }

    pub fn block_map(&self, block: usize) -> &[(usize, u64)] {
        &self.map[block - 1]
    }
}

/// Decide whether P (k_f x r, k_i | k_f) has every block's columns scalar
/// multiples of first-block columns, and return the match if so. The match
/// must be injective per block (guaranteed for superregular P); ambiguous or
/// partial matches yield None.
pub fn verify_parallel_block_reconstructible(
    p: &Matrix,
    k_i: usize,
) -> Result<Option<PerSymbolMap>> {
    if k_i == 0 || !p.rows().is_multiple_of(k_i) {
        return Err(Error::DimensionMismatch(format!(
            "k_i = {k_i} must divide the row count {}",
            p.rows()
        )));
    }
    let lambda = p.rows() / k_i;
    let r = p.cols();
    let block1: Vec<Vec<FieldElement>> = (0..r)
        .map(|j| {
            (0..k_i)
                .map(|t| p.get(t, j))
                .collect::<Vec<FieldElement>>()
        })
        .collect();

    let mut map = Vec::with_capacity(lambda);
    for l in 0..lambda {
        let mut block_map = Vec::with_capacity(r);
        for i in 0..r {
            let col: Vec<FieldElement> = (0..k_i).map(|t| p.get(l * k_i + t, i)).collect();
            let mut found = None;
            for (cand, ref_col) in block1.iter().enumerate() {
                if ref_col.iter().all(|e| e.is_zero()) {
                    continue;
                }
                if let Some(theta) = scalar_multiple_of(&col, ref_col)? {
                    found = Some((cand, theta.value()));
                    break;
                }
            }
            match found {
                Some(entry) => block_map.push(entry),
                None => return Ok(None),
            }
        }
        // the match must be a permutation of column indices
        let mut seen = vec![false; r];
        for &(i_l, _) in &block_map {
            if seen[i_l] {
                return Ok(None);
            }
            seen[i_l] = true;
        }
        map.push(block_map);
    }
    Ok(Some(PerSymbolMap { map }))
}

fn per_symbol_plan(params: &MergeParams, map: &PerSymbolMap) -> Result<ConversionPlan> {
    let k_i = params.k_i();
    let mut sources = Vec::with_capacity(params.r_f());
    for i in 0..params.r_f() {
        let mut per_block = Vec::with_capacity(params.lambda());
        for l in 1..=params.lambda() {
            let (i_l, theta) = map.entry(l, i);
            per_block.push(PlanSource {
                coords: vec![k_i + i_l],
                coeffs: vec![theta],
            });
        }
        sources.push(per_block);
    }
    ConversionPlan::new(params.lambda(), sources)
}

fn subgroup_pair(
    params: &MergeParams,
    family: Family,
    x_blocks: Vec<OrderedSet>,
    y: OrderedSet,
    append_all_one: bool,
) -> Result<ConvertiblePair> {
    let x = x_blocks
        .iter()
        .skip(1)
        .try_fold(x_blocks[0].clone(), |acc, s| acc.concat(s))
        .map_err(|_| Error::NotDisjoint("the per-block x-sets overlap".into()))?;
    if !x.is_disjoint(&y) {
        return Err(Error::NotDisjoint("x-sets intersect the y-set".into()));
    }
    let mut p = cauchy(&x, &y)?;
    if append_all_one {
        let ones = Matrix::new(p.field().clone(), p.rows(), 1, vec![1; p.rows()])?;
        p = p.hconcat(&ones)?;
    }
    debug_assert_eq!(p.cols(), params.r_f());

    let map = verify_parallel_block_reconstructible(&p, params.k_i())?.ok_or_else(|| {
        Error::Inconsistent("constructed matrix is not per-symbol reconstructible".into())
    })?;
    let plan = per_symbol_plan(params, &map)?;

    let p_initial = p.slice_rows(0, params.k_i());
    let initial = MdsCode::systematic(p_initial)?;
    let final_code = MdsCode::systematic(p)?;
    let sets = ConstructionSets {
        x_blocks,
        y: Some(y),
        ..ConstructionSets::default()
    };
    ConvertiblePair::from_parts(*params, family, initial, final_code, plan, Some(sets))
}

/// Cauchy construction on multiplicative subgroup structure. The y-set is a
/// group of roots of unity (base), optionally with 0 added (A) and an
/// all-one column appended (B). The x-set is a union of lambda scaled copies
/// of one block, so block columns match first-block columns up to scalars.
///
/// `x1` overrides the default first block {alpha, alpha^2, ..., alpha^{k_i}};
/// all derived blocks must stay disjoint.
pub fn build_subgroup_mult(
    params: &MergeParams,
    field: &Field,
    variant: MultVariant,
    x1: Option<OrderedSet>,
) -> Result<ConvertiblePair> {
    if params.r_i() != params.r_f() {
        return Err(Error::Precondition(
            "subgroup constructions need r_i = r_f; build at r_i and truncate".into(),
        ));
    }
    let r = params.r_f();
    let q = field.q();
    let (delta, lambda_cap) = match variant {
        MultVariant::Base => (0, r),
        MultVariant::A => (1, r - 1),
        MultVariant::B => (2, r.saturating_sub(2)),
    };
    let d = r - delta;
    if params.lambda() > lambda_cap {
        return Err(Error::Precondition(format!(
            "lambda = {} exceeds the variant cap {lambda_cap}",
            params.lambda()
        )));
    }
    if d == 0 || !(q - 1).is_multiple_of(d as u64) {
        return Err(Error::Precondition(format!(
            "subgroup order {d} must divide q - 1 = {}",
            q - 1
        )));
    }
    if q < ((params.k_i() + 1) * d + 1) as u64 {
        return Err(Error::Precondition(format!(
            "field too small: need q >= {}",
            (params.k_i() + 1) * d + 1
        )));
    }

    let alpha = field.primitive_element()?.value();
    let nu = (q - 1) / d as u64;
    let gamma = field.pow(alpha, nu as i64)?;

    let mut y_vals: Vec<u64> = (0..d).map(|j| field.pow(gamma, j as i64).unwrap()).collect();
    if delta > 0 {
        y_vals.push(0);
    }
    let y = OrderedSet::from_values(field.clone(), y_vals)?;

    let x1 = match x1 {
        Some(s) => {
            if s.field() != field {
                return Err(Error::FieldMismatch);
            }
            if s.len() != params.k_i() {
                return Err(Error::InvalidArgument(format!(
                    "x1 must have k_i = {} elements",
                    params.k_i()
                )));
            }
            s
        }
        None => {
            // first k_i powers of alpha; they sit inside one coset of the
            // subgroup generated by gamma because k_i < nu
            let vals: Vec<u64> = (1..=params.k_i() as u64)
                .map(|e| field.pow(alpha, e as i64).unwrap())
                .collect();
            OrderedSet::from_values(field.clone(), vals)?
        }
    };
    let x_blocks: Vec<OrderedSet> = (0..params.lambda())
        .map(|l| x1.scaled(field.pow(gamma, l as i64).unwrap()))
        .collect();

    subgroup_pair(
        params,
        Family::SubgroupMult(variant),
        x_blocks,
        y,
        delta == 2,
    )
}

/// Cauchy construction on additive subgroup structure. The y-set is the set
/// of field elements whose canonical value is below the subgroup size p^u
/// (all polynomials of degree < u); x-blocks are additive translates of one
/// block, so matching block columns are equal (scalar 1).
pub fn build_subgroup_add(
    params: &MergeParams,
    field: &Field,
    variant: AddVariant,
    x1: Option<OrderedSet>,
) -> Result<ConvertiblePair> {
    if params.r_i() != params.r_f() {
        return Err(Error::Precondition(
            "subgroup constructions need r_i = r_f; build at r_i and truncate".into(),
        ));
    }
    let r = params.r_f();
    let q = field.q();
    let (delta, lambda_cap) = match variant {
        AddVariant::Base => (0, r),
        AddVariant::A => (1, r - 1),
    };
    let d = r - delta;
    if params.lambda() > lambda_cap {
        return Err(Error::Precondition(format!(
            "lambda = {} exceeds the variant cap {lambda_cap}",
            params.lambda()
        )));
    }
    let p = field.p();
    let mut u = 0u32;
    let mut dd = d as u64;
    while dd > 1 && dd.is_multiple_of(p) {
        dd /= p;
        u += 1;
    }
    if dd != 1 || u == 0 {
        return Err(Error::Precondition(format!(
            "subgroup size {d} must be a positive power of the characteristic {p}"
        )));
    }
    if d as u64 >= q {
        return Err(Error::Precondition(format!(
            "subgroup size {d} must be a proper divisor of q = {q}"
        )));
    }
    if q < ((params.k_i() + 1) * d) as u64 {
        return Err(Error::Precondition(format!(
            "field too small: need q >= {}",
            (params.k_i() + 1) * d
        )));
    }

    // canonical values below p^u are exactly the polynomials of degree < u
    let y = OrderedSet::from_values(field.clone(), (0..d as u64).collect())?;

    let x1 = match x1 {
        Some(s) => {
            if s.field() != field {
                return Err(Error::FieldMismatch);
            }
            if s.len() != params.k_i() {
                return Err(Error::InvalidArgument(format!(
                    "x1 must have k_i = {} elements",
                    params.k_i()
                )));
            }
            s
        }
        None => {
            // first k_i nonzero multiples of x^u: canonical values j * p^u
            let step = d as u64;
            let vals: Vec<u64> = (1..=params.k_i() as u64).map(|j| j * step).collect();
            OrderedSet::from_values(field.clone(), vals)?
        }
    };
    // translate by the first lambda subgroup elements (the first is 0)
    let x_blocks: Vec<OrderedSet> = (0..params.lambda())
        .map(|l| x1.translated(y.get(l)))
        .collect();

    subgroup_pair(
        params,
        Family::SubgroupAdd(variant),
        x_blocks,
        y,
        delta == 1,
    )
}

// ---------------------------------------------------------------------------
// GRS (Vandermonde parity-check) constructions
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GrsExtension {
    Plain,
    Doubly,
    Triply,
}

/// Multiply out (x - root) factors; coefficients ascending, monic.
fn poly_from_roots(field: &Field, roots: &[u64]) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for &root in roots {
        let neg = field.neg(root);
        let mut next = vec![0u64; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] = field.add(next[i], field.mul(c, neg));
            next[i + 1] = field.add(next[i + 1], c);
        }
        coeffs = next;
    }
    coeffs
}

fn poly_eval(field: &Field, coeffs: &[u64], x: u64) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

fn grs_pair(
    params: &MergeParams,
    field: &Field,
    ext: GrsExtension,
) -> Result<ConvertiblePair> {
    let (k, r_i, r_f, lambda) = (
        params.k_i(),
        params.r_i(),
        params.r_f(),
        params.lambda(),
    );
    if r_f > r_i.min(k) {
        return Err(Error::Precondition(format!(
            "the optimized regime needs r_f <= min(k_i, r_i) = {}",
            r_i.min(k)
        )));
    }
    let q = field.q();
    let (family, ext_cols, bound) = match ext {
        GrsExtension::Plain => (
            Family::Grs,
            0usize,
            (k + r_i).max(lambda * k + r_f) as u64,
        ),
        GrsExtension::Doubly => (
            Family::GrsDoublyExtended,
            1,
            ((k + r_i).max(lambda * k + r_f) - 1) as u64,
        ),
        GrsExtension::Triply => (Family::GrsTriplyExtended, 2, (lambda * k + 1) as u64),
    };
    if ext == GrsExtension::Triply {
        if r_i != 3 || r_f != 3 {
            return Err(Error::Precondition(
                "the triply-extended form is specific to r_i = r_f = 3".into(),
            ));
        }
        if field.p() != 2 {
            return Err(Error::Precondition(
                "the triply-extended form needs a field of characteristic 2".into(),
            ));
        }
    }
    if q < bound {
        return Err(Error::Precondition(format!(
            "field too small: need q >= {bound}"
        )));
    }

    let gamma = field.primitive_element()?.value();
    let gpow = |e: usize| field.pow(gamma, e as i64).unwrap();

    let a_blocks: Vec<OrderedSet> = (0..lambda)
        .map(|l| {
            let vals: Vec<u64> = (0..k).map(|t| gpow(l * k + t)).collect();
            OrderedSet::from_values(field.clone(), vals)
        })
        .collect::<Result<_>>()?;

    // final-parity evaluation set: zero plus consecutive powers
    let bf_len = r_f - ext_cols;
    let mut bf_vals = vec![0u64];
    for j in 0..bf_len.saturating_sub(1) {
        bf_vals.push(gpow(lambda * k + j));
    }
    let b_final = OrderedSet::from_values(field.clone(), bf_vals)?;

    // fill the initial-parity set with further powers, skipping the first block
    let bi_len = r_i - ext_cols;
    let a1 = &a_blocks[0];
    let mut bi_vals = b_final.values().to_vec();
    let mut exponent = lambda * k + bf_len.saturating_sub(1);
    let mut scanned = 0u64;
    while bi_vals.len() < bi_len {
        if scanned >= q - 1 {
            return Err(Error::Precondition(
                "cannot place the initial parity evaluation set in this field".into(),
            ));
        }
        let cand = gpow(exponent % (q as usize - 1));
        exponent += 1;
        scanned += 1;
        if a1.contains(cand) || bi_vals.contains(&cand) {
            continue;
        }
        bi_vals.push(cand);
    }
    let b_initial = OrderedSet::from_values(field.clone(), bi_vals)?;

    // scaling: 1/f on first-block and final-parity points, 1 on the extras,
    // where f has the extra points as roots
    let extras: Vec<u64> = b_initial.values()[bf_len..].to_vec();
    let f_coeffs = poly_from_roots(field, &extras);
    let mut diag: Vec<u64> = Vec::with_capacity(params.n_i());
    for &a in a1.values() {
        diag.push(field.inv(poly_eval(field, &f_coeffs, a))?);
    }
    for (idx, &b) in b_initial.values().iter().enumerate() {
        if idx < bf_len {
            diag.push(field.inv(poly_eval(field, &f_coeffs, b))?);
        } else {
            diag.push(1);
        }
    }

    let build_parity_block = |set: &OrderedSet, r: usize| -> Result<Matrix> {
        match ext {
            GrsExtension::Plain => vandermonde(set, r),
            GrsExtension::Doubly => extended_vandermonde(set, r),
            GrsExtension::Triply => triply_extended_vandermonde(set),
        }
    };

    let h_initial_unscaled = vandermonde(a1, r_i)?.hconcat(&build_parity_block(&b_initial, r_i)?)?;
    match ext {
        GrsExtension::Plain => {}
        _ => diag.extend(std::iter::repeat_n(1, ext_cols)),
    }
    let h_initial = h_initial_unscaled.scale_columns(&diag)?;
    let initial = MdsCode::parity_check(h_initial)?;

    let mut h_final = vandermonde(&a_blocks[0], r_f)?;
    for block in a_blocks.iter().skip(1) {
        h_final = h_final.hconcat(&vandermonde(block, r_f)?)?;
    }
    h_final = h_final.hconcat(&build_parity_block(&b_final, r_f)?)?;
    let final_code = MdsCode::parity_check(h_final)?;

    // conversion coefficients: T^-1 D_l T acting on the r_f relevant parities
    let t = build_parity_block(&b_final, r_f)?;
    debug_assert_eq!((t.rows(), t.cols()), (r_f, r_f));
    let t_inv = t.inverse()?;
    let read_coords: Vec<usize> = match ext {
        GrsExtension::Plain => (k..k + r_f).collect(),
        // all but the last final-parity row come from the leading parities;
        // the last one is the trailing coordinate backed by the basis column
        GrsExtension::Doubly | GrsExtension::Triply => {
            if r_i == r_f {
                (k..k + r_f).collect()
            } else {
                let mut v: Vec<usize> = (k..k + r_f - 1).collect();
                v.push(k + r_i - 1);
                v
            }
        }
    };

    let mut sources: Vec<Vec<PlanSource>> = vec![Vec::with_capacity(lambda); r_f];
    for l in 0..lambda {
        let d_l_diag: Vec<u64> = (0..r_f).map(|i| gpow(l * k * i)).collect();
        let mut d_l = Matrix::zeros(field.clone(), r_f, r_f);
        for (i, &v) in d_l_diag.iter().enumerate() {
            d_l.set(i, i, v);
        }
        let m_l = t_inv.matmul(&d_l)?.matmul(&t)?;
        for i in 0..r_f {
            let mut coords = Vec::new();
            let mut coeffs = Vec::new();
            for (col, &coord) in read_coords.iter().enumerate() {
                let c = m_l.at(i, col);
                if c != 0 {
                    coords.push(coord);
                    coeffs.push(c);
                }
            }
            sources[i].push(PlanSource { coords, coeffs });
        }
    }
    let plan = ConversionPlan::new(lambda, sources)?;

    let sets = ConstructionSets {
        a_blocks,
        b_initial: Some(b_initial),
        b_final: Some(b_final),
        ..ConstructionSets::default()
    };
    ConvertiblePair::from_parts(*params, family, initial, final_code, plan, Some(sets))
}

/// GRS construction for any r_f <= min(k_i, r_i): evaluation sets are
/// consecutive runs of powers of a primitive element, so per-block
/// Vandermonde matrices differ by an invertible diagonal. The doubly-extended
/// form appends a standard basis column to the parity blocks and shaves one
/// off the field size requirement.
pub fn build_grs(
    params: &MergeParams,
    field: &Field,
    doubly_extended: bool,
) -> Result<ConvertiblePair> {
    grs_pair(
        params,
        field,
        if doubly_extended {
            GrsExtension::Doubly
        } else {
            GrsExtension::Plain
        },
    )
}

/// Triply-extended variant for r_i = r_f = 3 over characteristic-2 fields;
/// reaches final lengths up to q + 2 with q >= lambda * k_i + 1.
pub fn build_triply_extended(params: &MergeParams, field: &Field) -> Result<ConvertiblePair> {
    grs_pair(params, field, GrsExtension::Triply)
}

/// Pair wired to the baseline re-encode conversion: Reed-Solomon initial and
/// final codes on canonical evaluation points; every new symbol reads all
/// message symbols. Valid for any parameters, including r_f > min(k_i, r_i).
pub fn build_default(params: &MergeParams, field: &Field) -> Result<ConvertiblePair> {
    let q = field.q();
    if q < params.n_f() as u64 || q < params.n_i() as u64 {
        return Err(Error::Precondition(format!(
            "field too small: need q >= {}",
            params.n_f().max(params.n_i())
        )));
    }
    let pts_i = OrderedSet::from_values(field.clone(), (0..params.n_i() as u64).collect())?;
    let pts_f = OrderedSet::from_values(field.clone(), (0..params.n_f() as u64).collect())?;
    let initial = MdsCode::parity_check(vandermonde(&pts_i, params.r_i())?)?;
    let final_code = MdsCode::parity_check(vandermonde(&pts_f, params.r_f())?)?;

    // new parities as explicit linear functions of the message symbols
    let p_final = final_code.parity_matrix()?;
    let mut sources: Vec<Vec<PlanSource>> = vec![Vec::new(); params.r_f()];
    for i in 0..params.r_f() {
        for l in 0..params.lambda() {
            let mut coords = Vec::new();
            let mut coeffs = Vec::new();
            for t in 0..params.k_i() {
                let c = p_final.at(l * params.k_i() + t, i);
                if c != 0 {
                    coords.push(t);
                    coeffs.push(c);
                }
            }
            sources[i].push(PlanSource { coords, coeffs });
        }
    }
    let plan = ConversionPlan::new(params.lambda(), sources)?;
    ConvertiblePair::from_parts(*params, Family::Default, initial, final_code, plan, None)
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Outcome of randomized access-optimality verification.
#[derive(Clone, Debug)]
pub struct AccessReport {
    pub pass: bool,
    pub trials: usize,
    pub disks_read: usize,
    pub expected_reads: usize,
    pub disks_written: usize,
    pub expected_writes: usize,
    pub per_symbol: bool,
    pub failures: Vec<String>,
}

/// Convert random inputs and check the pair delivers optimal access cost:
/// lambda * r_f distinct reads, r_f writes, final-code membership, and the
/// systematic prefix carried over unchanged.
pub fn verify_access_optimal<R: Rng>(
    pair: &ConvertiblePair,
    trials: usize,
    rng: &mut R,
) -> Result<AccessReport> {
    let params = pair.params();
    if params.r_f() > params.r_i().min(params.k_i()) {
        return Err(Error::Precondition(
            "access optimality is only defined for r_f <= min(k_i, r_i)".into(),
        ));
    }
    let field = pair.field().clone();
    let expected_reads = params.lambda() * params.r_f();
    let expected_writes = params.r_f();
    let mut failures = Vec::new();
    let mut last_trace: Option<AccessTrace> = None;
    let mut reads = 0;
    let mut writes = 0;

    for trial in 0..trials {
        let inputs: Vec<Codeword> = (0..params.lambda())
            .map(|_| {
                let msg: Vec<u64> = (0..params.k_i())
                    .map(|_| rng.gen_range(0..field.q()))
                    .collect();
                pair.initial().encode_values(&msg)
            })
            .collect::<Result<_>>()?;
        let (out, trace) = pair.convert(&inputs)?;

        if !pair.final_code().contains(&out) {
            failures.push(format!("trial {trial}: output fails the final parity check"));
        }
        let prefix: Vec<u64> = inputs
            .iter()
            .flat_map(|cw| cw.symbols()[..params.k_i()].to_vec())
            .collect();
        if out.symbols()[..params.k_f()] != prefix[..] {
            failures.push(format!("trial {trial}: systematic prefix was altered"));
        }
        if trace.disks_read() != expected_reads {
            failures.push(format!(
                "trial {trial}: read {} disks, expected {expected_reads}",
                trace.disks_read()
            ));
        }
        if trace.disks_written() != expected_writes {
            failures.push(format!(
                "trial {trial}: wrote {} disks, expected {expected_writes}",
                trace.disks_written()
            ));
        }
        if let Some(prev) = &last_trace {
            if prev != &trace {
                failures.push(format!("trial {trial}: trace depends on the data"));
            }
        }
        reads = trace.disks_read();
        writes = trace.disks_written();
        last_trace = Some(trace);
    }

    let per_symbol = pair.plan().is_per_symbol();
    Ok(AccessReport {
        pass: failures.is_empty(),
        trials,
        disks_read: reads,
        expected_reads,
        disks_written: writes,
        expected_writes,
        per_symbol,
        failures,
    })
}

/// Exact identity behind the GRS truncation step: the banded matrix built
/// from the coefficients of f (the polynomial vanishing on the extra initial
/// parity points) maps the initial parity-check matrix onto
/// [V_{A1,r_f} | V_{BF,r_f} | 0] (plus the trailing basis column in the
/// doubly-extended form). Needs the pair's construction sets.
pub fn verify_f_matrix_identity(pair: &ConvertiblePair) -> Result<bool> {
    let ext = match pair.family() {
        Family::Grs => GrsExtension::Plain,
        Family::GrsDoublyExtended => GrsExtension::Doubly,
        Family::GrsTriplyExtended => GrsExtension::Triply,
        _ => {
            return Err(Error::Unsupported(
                "the identity applies to the GRS family only".into(),
            ))
        }
    };
    let sets = pair
        .sets()
        .ok_or_else(|| Error::Unsupported("construction sets were not retained".into()))?;
    let field = pair.field().clone();
    let params = pair.params();
    let (r_i, r_f) = (params.r_i(), params.r_f());
    let b_initial = sets
        .b_initial
        .as_ref()
        .ok_or_else(|| Error::Unsupported("missing initial parity set".into()))?;
    let b_final = sets
        .b_final
        .as_ref()
        .ok_or_else(|| Error::Unsupported("missing final parity set".into()))?;
    let a1 = &sets.a_blocks[0];

    let extras: Vec<u64> = b_initial.values()[b_final.len()..].to_vec();
    let f_coeffs = poly_from_roots(&field, &extras);
    debug_assert_eq!(f_coeffs.len(), r_i - r_f + 1);

    // banded r_f x r_i matrix: row t holds the coefficients of f shifted t
    let mut f_mat = Matrix::zeros(field.clone(), r_f, r_i);
    for t in 0..r_f {
        for (idx, &c) in f_coeffs.iter().enumerate() {
            f_mat.set(t, t + idx, c);
        }
    }

    let product = f_mat.matmul(&pair.initial().parity_check_matrix())?;

    let mut expected = vandermonde(a1, r_f)?;
    expected = expected.hconcat(&vandermonde(b_final, r_f)?)?;
    expected = expected.hconcat(&Matrix::zeros(field.clone(), r_f, extras.len()))?;
    match ext {
        GrsExtension::Plain => {}
        GrsExtension::Doubly => {
            let mut e = Matrix::zeros(field.clone(), r_f, 1);
            e.set(r_f - 1, 0, 1);
            expected = expected.hconcat(&e)?;
        }
        GrsExtension::Triply => {
            let mut e = Matrix::zeros(field.clone(), r_f, 2);
            e.set(1, 0, 1);
            e.set(2, 1, 1);
            expected = expected.hconcat(&e)?;
        }
    }
    Ok(product == expected)
}
