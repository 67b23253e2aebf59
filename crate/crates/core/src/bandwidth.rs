//! Bandwidth-optimal vector MDS convertible codes via piggybacking.
//!
//! In the regime k_i > r_f > r_i, reading whole symbols cannot hit the
//! bandwidth floor, so symbols become length-alpha vectors with
//! alpha = r_f / gcd(r_f, r_i): each initial vector codeword packs alpha
//! instances of a punctured scalar base code, and the parity sub-symbols of
//! the later instances additionally carry piggybacks — products of the first
//! instances' messages with the base code's high parity columns. Conversion
//! downloads every retired disk in full plus a fraction of each unchanged
//! disk, peels the piggybacks, and synthesizes the final parities through the
//! base pair's block reconstruction matrices.
//!
//! Costs are counted in sub-symbols per disk; the verifier compares measured
//! totals against the exact bandwidth floor.

use std::collections::BTreeMap;

use rand::Rng;

use crate::access::{build_grs, ConvertiblePair, MergeParams};
use crate::gf::Field;
use crate::linalg::Matrix;
use crate::mds::MdsCode;
use crate::{Error, Result};

/// Parameters of the piggyback regime: k_i > r_f > r_i, lambda >= 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BwParams {
    k_i: usize,
    r_i: usize,
    r_f: usize,
    lambda: usize,
}

impl BwParams {
    pub fn new(k_i: usize, r_i: usize, r_f: usize, lambda: usize) -> Result<BwParams> {
        if !(k_i > r_f && r_f > r_i && r_i >= 1) {
            return Err(Error::Precondition(format!(
                "piggybacking needs k_i > r_f > r_i >= 1, got k_i={k_i}, r_f={r_f}, r_i={r_i}"
            )));
        }
        if lambda < 2 {
            return Err(Error::Precondition(
                "merging needs at least two initial codewords".into(),
            ));
        }
        Ok(BwParams {
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

    pub fn g(&self) -> usize {
        gcd(self.r_f, self.r_i)
    }

    /// Sub-packetization r_f / gcd(r_f, r_i).
    pub fn alpha(&self) -> usize {
        self.r_f / self.g()
    }

    /// r_i / gcd(r_f, r_i): the number of piggyback-free columns.
    pub fn beta(&self) -> usize {
        self.r_i / self.g()
    }

    /// For parity row i and column j >= beta, the piggyback carried there:
    /// (source column v < beta, base parity column u in [r_i, r_f)).
    pub fn piggyback_index(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        if i >= self.r_i || j < self.beta() || j >= self.alpha() {
            return None;
        }
        let g = self.g();
        let (i1, i2) = (i / g, i % g);
        let u = self.r_i + (self.alpha() - self.beta()) * i2 + (j - self.beta());
        Some((i1, u))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The exact bandwidth floor for a merge conversion, in sub-symbols, at the
/// smallest sub-packetization that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BandwidthBound {
    pub read: u64,
    pub write: u64,
    pub alpha: u64,
}

impl BandwidthBound {
    pub fn total(&self) -> u64 {
        self.read + self.write
    }
}

/// Evaluate the bandwidth floor. Outside the piggyback regime (r_i >= r_f or
/// k_i <= r_f) scalar codes already reach it, so alpha = 1; inside it, the
/// read term lambda * alpha * (r_i + k_i (1 - r_i / r_f)) is evaluated in
/// exact integer arithmetic (it is integral because alpha cancels the
/// denominator), never by truncation.
pub fn bandwidth_bound(k_i: usize, r_i: usize, r_f: usize, lambda: usize) -> BandwidthBound {
    let (k_i64, r_i64, r_f64, l64) = (k_i as u64, r_i as u64, r_f as u64, lambda as u64);
    if r_i >= r_f || k_i <= r_f {
        return BandwidthBound {
            read: l64 * k_i64.min(r_f64),
            write: r_f64,
            alpha: 1,
        };
    }
    let g = gcd(r_f, r_i) as u64;
    let alpha = r_f64 / g;
    let beta = r_i64 / g;
    // lambda * alpha * (r_i + k_i * (r_f - r_i) / r_f), exactly
    let numerator = l64 * alpha * (r_i64 * r_f64 + k_i64 * (r_f64 - r_i64));
    assert_eq!(numerator % r_f64, 0, "bandwidth floor must be integral");
    let read = numerator / r_f64;
    debug_assert_eq!(read, l64 * (r_i64 * alpha + (alpha - beta) * k_i64));
    BandwidthBound {
        read,
        write: r_f64 * alpha,
        alpha,
    }
}

/// Smallest sub-packetization for a bandwidth-optimal conversion to r_f.
pub fn min_subpacketization(r_f: usize, r_i: usize) -> usize {
    r_f / gcd(r_f, r_i)
}

/// Sub-packetization supporting several final parity counts at once.
pub fn multi_rf_subpacketization(r_i: usize, r_fs: &[usize]) -> Result<u64> {
    let mut alpha: u64 = 1;
    for &r_t in r_fs {
        if r_t <= r_i {
            return Err(Error::Precondition(format!(
                "every supported r_f must exceed r_i, got {r_t} <= {r_i}"
            )));
        }
        alpha = alpha
            .checked_mul((r_t / gcd(r_t, r_i)) as u64)
            .ok_or_else(|| Error::InvalidArgument("sub-packetization overflow".into()))?;
    }
    Ok(alpha)
}

/// A codeword of an [n, k, alpha] vector code: n symbols of alpha sub-symbols
/// each, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorCodeword {
    field: Field,
    n: usize,
    alpha: usize,
    data: Vec<u64>,
}

impl VectorCodeword {
    pub fn new(field: Field, n: usize, alpha: usize, data: Vec<u64>) -> Result<VectorCodeword> {
        if data.len() != n * alpha {
            return Err(Error::DimensionMismatch(format!(
                "{n} symbols of {alpha} sub-symbols need {} values, got {}",
                n * alpha,
                data.len()
            )));
        }
        if data.iter().any(|&v| v >= field.q()) {
            return Err(Error::InvalidArgument(
                "sub-symbol is not a canonical field value".into(),
            ));
        }
        Ok(VectorCodeword {
            field,
            n,
            alpha,
            data,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    /// Sub-symbol j of symbol i.
    pub fn sub(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.n && j < self.alpha, "index out of range");
        self.data[i * self.alpha + j]
    }

    /// The whole vector symbol stored on disk i.
    pub fn symbol(&self, i: usize) -> &[u64] {
        assert!(i < self.n, "symbol out of range");
        &self.data[i * self.alpha..(i + 1) * self.alpha]
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }
}

/// Sub-symbol transfer ledger of one conversion: reads keyed by
/// (initial codeword 1.., coordinate), writes as a total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandwidthTrace {
    per_disk_read: BTreeMap<(usize, usize), usize>,
    write: u64,
}

impl BandwidthTrace {
    pub fn read(&self) -> u64 {
        self.per_disk_read.values().map(|&v| v as u64).sum()
    }

    pub fn write(&self) -> u64 {
        self.write
    }

    pub fn total(&self) -> u64 {
        self.read() + self.write
    }

    pub fn per_disk_read(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.per_disk_read
    }
}

/// A piggybacked vector code pair: the scalar base pair in systematic form
/// plus the derived parity blocks and reconstruction matrices.
#[derive(Clone, Debug)]
pub struct VectorCodePair {
    params: BwParams,
    base: ConvertiblePair,
    p_initial: Matrix,
    p_blocks: Vec<Matrix>,
    w_blocks: Vec<Matrix>,
    punctured: MdsCode,
}

/// Build the vector pair over the given field. The base is the GRS family
/// pair with shape (k_i + r_f, k_i; lambda k_i + r_f, lambda k_i); its
/// doubly-extended variant keeps the field requirement at q >= n_f - 1.
pub fn build_vector_pair(params: &BwParams, field: &Field) -> Result<VectorCodePair> {
    let base_params = MergeParams::new(params.k_i(), params.r_f(), params.r_f(), params.lambda())?;
    let base = build_grs(&base_params, field, true)?;
    VectorCodePair::from_base(params, base)
}

impl VectorCodePair {
    /// Derive the vector pair from any scalar base pair of shape
    /// (k_i + r_f, k_i; lambda k_i + r_f, lambda k_i). The base is brought to
    /// systematic form; reconstruction matrices are solved from the parity
    /// blocks, not copied from construction metadata.
    pub fn from_base(params: &BwParams, base: ConvertiblePair) -> Result<VectorCodePair> {
        let bp = base.params();
        if bp.k_i() != params.k_i()
            || bp.r_i() != params.r_f()
            || bp.r_f() != params.r_f()
            || bp.lambda() != params.lambda()
        {
            return Err(Error::DimensionMismatch(format!(
                "base pair must be ({}, {}; {}, {}), got ({}, {}; {}, {})",
                params.k_i() + params.r_f(),
                params.k_i(),
                params.n_f(),
                params.k_f(),
                bp.n_i(),
                bp.k_i(),
                bp.n_f(),
                bp.k_f()
            )));
        }
        let base = base.to_systematic()?;

        let p_initial = base.initial().parity_matrix()?;
        let p_final = base.final_code().parity_matrix()?;
        let k = params.k_i();
        let r_f = params.r_f();

        let p_blocks: Vec<Matrix> = (0..params.lambda())
            .map(|l| p_final.slice_rows(l * k, (l + 1) * k))
            .collect();

        // W_l solves P_initial * W_l = P_block_l; pinned by the first r_f
        // rows (invertible because the parity matrix of an MDS code is
        // superregular) and verified against the full block.
        let top = p_initial.slice_rows(0, r_f);
        let top_inv = top.inverse().map_err(|_| {
            Error::Inconsistent("leading parity rows of the base code are singular".into())
        })?;
        let mut w_blocks = Vec::with_capacity(params.lambda());
        for (l, block) in p_blocks.iter().enumerate() {
            let w = top_inv.matmul(&block.slice_rows(0, r_f))?;
            if p_initial.matmul(&w)? != *block {
                return Err(Error::Inconsistent(format!(
                    "parity block {} is not reconstructible from the initial parities",
                    l + 1
                )));
            }
            w_blocks.push(w);
        }

        let punctured = MdsCode::systematic(p_initial.slice_cols(0, params.r_i()))?;

        Ok(VectorCodePair {
            params: *params,
            base,
            p_initial,
            p_blocks,
            w_blocks,
            punctured,
        })
    }
    pub fn params(&self) -> &BwParams {
        &self.params
    }

    pub fn field(&self) -> &Field {
        self.base.field()
    }

    /// The scalar base pair, systematic form.
    pub fn base(&self) -> &ConvertiblePair {
        &self.base
    }

    /// k_i x r_f parity matrix of the base initial code; its columns are the
    /// p^u vectors the piggybacks are built from.
    pub fn p_initial(&self) -> &Matrix {
        &self.p_initial
    }

    pub fn p_block(&self, l: usize) -> &Matrix {
        &self.p_blocks[l - 1]
    }

    /// Reconstruction matrix of block l: p_block(l) = p_initial * w(l).
    pub fn w(&self, l: usize) -> &Matrix {
        &self.w_blocks[l - 1]
    }

    /// The [k_i + r_i, k_i] scalar code each piggyback-free column lives in.
    pub fn punctured_code(&self) -> &MdsCode {
        &self.punctured
    }

    /// Message layout: sub-symbol (i, j) of the message lives at j * k_i + i,
    /// i.e. the message is the concatenation of its alpha column vectors.
    pub fn message_len(&self) -> usize {
        self.params.k_i() * self.params.alpha()
    }

    fn message_column<'a>(&self, message: &'a [u64], j: usize) -> &'a [u64] {
        let k = self.params.k_i();
        &message[j * k..(j + 1) * k]
    }

    fn dot_parity(&self, column: &[u64], u: usize) -> u64 {
        let f = self.field();
        column
            .iter()
            .enumerate()
            .fold(0, |acc, (t, &m)| f.add(acc, f.mul(m, self.p_initial.at(t, u))))
    }

    /// Encode one initial vector codeword: alpha stacked instances of the
    /// punctured base code with piggybacks added to the columns past beta.
    pub fn encode_initial(&self, message: &[u64]) -> Result<VectorCodeword> {
        let (k, r_i, alpha) = (self.params.k_i(), self.params.r_i(), self.params.alpha());
        if message.len() != self.message_len() {
            return Err(Error::DimensionMismatch(format!(
                "message must hold {} sub-symbols, got {}",
                self.message_len(),
                message.len()
            )));
        }
        if message.iter().any(|&v| v >= self.field().q()) {
            return Err(Error::InvalidArgument(
                "message sub-symbol is not a canonical field value".into(),
            ));
        }
        let field = self.field().clone();
        let mut data = vec![0u64; self.params.n_i() * alpha];
        for j in 0..alpha {
            for i in 0..k {
                data[i * alpha + j] = self.message_column(message, j)[i];
            }
        }
        for i in 0..r_i {
            for j in 0..alpha {
                let mut v = self.dot_parity(self.message_column(message, j), i);
                if let Some((src, u)) = self.params.piggyback_index(i, j) {
                    v = field.add(v, self.dot_parity(self.message_column(message, src), u));
                }
                data[(k + i) * alpha + j] = v;
            }
        }
        VectorCodeword::new(field, self.params.n_i(), alpha, data)
    }

    /// Encode the merged final vector codeword from lambda message blocks;
    /// every column is a codeword of the scalar base final code.
    pub fn encode_final(&self, messages: &[Vec<u64>]) -> Result<VectorCodeword> {
        let (k, alpha, lambda) = (self.params.k_i(), self.params.alpha(), self.params.lambda());
        if messages.len() != lambda {
            return Err(Error::DimensionMismatch(format!(
                "expected {lambda} message blocks, got {}",
                messages.len()
            )));
        }
        for m in messages {
            if m.len() != self.message_len() {
                return Err(Error::DimensionMismatch(
                    "message block of wrong length".into(),
                ));
            }
            if m.iter().any(|&v| v >= self.field().q()) {
                return Err(Error::InvalidArgument(
                    "message sub-symbol is not a canonical field value".into(),
                ));
            }
        }
        let field = self.field().clone();
        let mut data = vec![0u64; self.params.n_f() * alpha];
        for (l, message) in messages.iter().enumerate() {
            for j in 0..alpha {
                for i in 0..k {
                    data[(l * k + i) * alpha + j] = self.message_column(message, j)[i];
                }
            }
        }
        for i in 0..self.params.r_f() {
            for j in 0..alpha {
                let mut v = 0u64;
                for (l, message) in messages.iter().enumerate() {
                    let col = self.message_column(message, j);
                    let block = &self.p_blocks[l];
                    let term = col
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (t, &m)| field.add(acc, field.mul(m, block.at(t, i))));
                    v = field.add(v, term);
                }
                data[(self.params.k_f() + i) * alpha + j] = v;
            }
        }
        VectorCodeword::new(field, self.params.n_f(), alpha, data)
    }

    /// Recover the message from any >= k_i known vector symbols, given as
    /// (coordinate, sub-symbol vector) pairs: piggyback-free columns decode
    /// through the punctured code, the rest after the piggybacks (recomputed
    /// from the already-decoded columns) are cancelled.
    pub fn decode(&self, known: &[(usize, Vec<u64>)]) -> Result<Vec<u64>> {
        let (k, alpha, beta) = (self.params.k_i(), self.params.alpha(), self.params.beta());
        let field = self.field().clone();
        if known.len() < k {
            return Err(Error::InvalidArgument(format!(
                "need at least k_i = {k} known symbols, got {}",
                known.len()
            )));
        }
        for (coord, subs) in known {
            if *coord >= self.params.n_i() {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {coord} out of range"
                )));
            }
            if subs.len() != alpha {
                return Err(Error::DimensionMismatch(
                    "known symbol has the wrong sub-packetization".into(),
                ));
            }
        }

        let mut message = vec![0u64; self.message_len()];
        for j in 0..beta {
            let col_known: Vec<(usize, crate::gf::FieldElement)> = known
                .iter()
                .map(|(coord, subs)| Ok((*coord, field.element(subs[j])?)))
                .collect::<Result<_>>()?;
            let col = self.punctured.decode_erasures(&col_known)?;
            for (i, e) in col.iter().enumerate() {
                message[j * k + i] = e.value();
            }
        }
        for j in beta..alpha {
            let col_known: Vec<(usize, crate::gf::FieldElement)> = known
                .iter()
                .map(|(coord, subs)| {
                    let mut v = subs[j];
                    if *coord >= k {
                        if let Some((src, u)) = self.params.piggyback_index(coord - k, j) {
                            let pb = self.dot_parity(self.message_column(&message, src), u);
                            v = field.sub(v, pb);
                        }
                    }
                    Ok((*coord, field.element(v)?))
                })
                .collect::<Result<_>>()?;
            let col = self.punctured.decode_erasures(&col_known)?;
            for (i, e) in col.iter().enumerate() {
                message[j * k + i] = e.value();
            }
        }
        Ok(message)
    }

    fn is_initial_codeword(&self, cw: &VectorCodeword) -> Result<bool> {
        if cw.n() != self.params.n_i()
            || cw.alpha() != self.params.alpha()
            || cw.field() != self.field()
        {
            return Ok(false);
        }
        let k = self.params.k_i();
        let alpha = self.params.alpha();
        let mut message = vec![0u64; self.message_len()];
        for j in 0..alpha {
            for i in 0..k {
                message[j * k + i] = cw.sub(i, j);
            }
        }
        Ok(self.encode_initial(&message)? == *cw)
    }

    /// Merge lambda initial vector codewords into the final codeword.
    ///
    /// The coordinator downloads every retired disk in full (r_i * alpha
    /// sub-symbols per codeword) and the trailing alpha - beta sub-symbols of
    /// every unchanged disk, recovers all message-parity products (directly,
    /// by recomputation, or by peeling piggybacks), and synthesizes the new
    /// parities through the reconstruction matrices.
    pub fn convert(&self, inputs: &[VectorCodeword]) -> Result<(VectorCodeword, BandwidthTrace)> {
        let (k, r_i, r_f, alpha, beta, lambda) = (
            self.params.k_i(),
            self.params.r_i(),
            self.params.r_f(),
            self.params.alpha(),
            self.params.beta(),
            self.params.lambda(),
        );
        if inputs.len() != lambda {
            return Err(Error::DimensionMismatch(format!(
                "expected {lambda} initial codewords, got {}",
                inputs.len()
            )));
        }
        for (idx, cw) in inputs.iter().enumerate() {
            if !self.is_initial_codeword(cw)? {
                return Err(Error::Inconsistent(format!(
                    "input {idx} is not a codeword of the initial vector code"
                )));
            }
        }
        let field = self.field().clone();

        // downloads: full retired disks, partial unchanged disks
        let mut per_disk_read: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for l in 1..=lambda {
            for i in 0..r_i {
                per_disk_read.insert((l, k + i), alpha);
            }
            for i in 0..k {
                per_disk_read.insert((l, i), alpha - beta);
            }
        }

        // products[l][j][u] = (message column j of codeword l) . p^u
        let mut products = vec![vec![vec![0u64; r_f]; alpha]; lambda];
        for (l, cw) in inputs.iter().enumerate() {
            // downloaded message columns j >= beta give every product directly
            for j in beta..alpha {
                let col: Vec<u64> = (0..k).map(|i| cw.sub(i, j)).collect();
                for u in 0..r_f {
                    products[l][j][u] = self.dot_parity(&col, u);
                }
            }
            // piggyback-free parity sub-symbols are products as stored
            for j in 0..beta {
                for u in 0..r_i {
                    products[l][j][u] = cw.sub(k + u, j);
                }
            }
            // peel piggybacks out of the remaining parity sub-symbols
            for i in 0..r_i {
                for j in beta..alpha {
                    let (src, u) = self
                        .params
                        .piggyback_index(i, j)
                        .expect("piggyback exists for j >= beta");
                    let peeled = field.sub(cw.sub(k + i, j), products[l][j][i]);
                    products[l][src][u] = peeled;
                }
            }
        }

        // assemble: unchanged message rows, then reconstructed parities
        let mut data = vec![0u64; self.params.n_f() * alpha];
        for (l, cw) in inputs.iter().enumerate() {
            for i in 0..k {
                for j in 0..alpha {
                    data[(l * k + i) * alpha + j] = cw.sub(i, j);
                }
            }
        }
        for i in 0..r_f {
            for j in 0..alpha {
                let mut v = 0u64;
                for l in 0..lambda {
                    let w = &self.w_blocks[l];
                    for u in 0..r_f {
                        v = field.add(v, field.mul(w.at(u, i), products[l][j][u]));
                    }
                }
                data[(self.params.k_f() + i) * alpha + j] = v;
            }
        }

        let out = VectorCodeword::new(field, self.params.n_f(), alpha, data)?;
        let trace = BandwidthTrace {
            per_disk_read,
            write: (r_f * alpha) as u64,
        };
        Ok((out, trace))
    }
}

/// Outcome of randomized bandwidth-optimality verification.
#[derive(Clone, Debug)]
pub struct BandwidthReport {
    pub pass: bool,
    pub trials: usize,
    pub read: u64,
    pub write: u64,
    pub bound_read: u64,
    pub bound_write: u64,
    pub optimal: bool,
    pub failures: Vec<String>,
}

impl BandwidthReport {
    /// Judge measured totals against the floor; `excess` is how many
    /// sub-symbols beyond optimal were moved.
    pub fn evaluate(read: u64, write: u64, bound: &BandwidthBound) -> (bool, u64) {
        let total = read + write;
        let optimal = read == bound.read && write == bound.write;
        (optimal, total.saturating_sub(bound.total()))
    }
}

/// Convert random inputs and check conversion correctness (output equals the
/// direct final encoding) and that the measured trace meets the bandwidth
/// floor exactly.
pub fn verify_bandwidth_optimal<R: Rng>(
    pair: &VectorCodePair,
    trials: usize,
    rng: &mut R,
) -> Result<BandwidthReport> {
    let params = pair.params();
    let field = pair.field().clone();
    let bound = bandwidth_bound(params.k_i(), params.r_i(), params.r_f(), params.lambda());
    let mut failures = Vec::new();
    let mut last_trace: Option<BandwidthTrace> = None;
    let (mut read, mut write) = (0u64, 0u64);

    for trial in 0..trials {
        let messages: Vec<Vec<u64>> = (0..params.lambda())
            .map(|_| {
                (0..pair.message_len())
                    .map(|_| rng.gen_range(0..field.q()))
                    .collect()
            })
            .collect();
        let inputs: Vec<VectorCodeword> = messages
            .iter()
            .map(|m| pair.encode_initial(m))
            .collect::<Result<_>>()?;
        let (out, trace) = pair.convert(&inputs)?;
        if out != pair.encode_final(&messages)? {
            failures.push(format!(
                "trial {trial}: converted output differs from direct final encoding"
            ));
        }
        if trace.read() != bound.read {
            failures.push(format!(
                "trial {trial}: read {} sub-symbols, floor is {}",
                trace.read(),
                bound.read
            ));
        }
        if trace.write() != bound.write {
            failures.push(format!(
                "trial {trial}: wrote {} sub-symbols, floor is {}",
                trace.write(),
                bound.write
            ));
        }
        if let Some(prev) = &last_trace {
            if prev != &trace {
                failures.push(format!("trial {trial}: trace depends on the data"));
            }
        }
        read = trace.read();
        write = trace.write();
        last_trace = Some(trace);
    }

    let (optimal, _) = BandwidthReport::evaluate(read, write, &bound);
    Ok(BandwidthReport {
        pass: failures.is_empty() && optimal,
        trials,
        read,
        write,
        bound_read: bound.read,
        bound_write: bound.write,
        optimal,
        failures,
    })
}
