//! Scalar [n, k] MDS codes in systematic-generator or parity-check form:
//! encoding, erasure decoding from any k coordinates, puncturing, and
//! brute-force MDS verification by subset enumeration.
//!
//! Conventions: message symbols occupy the first k coordinates, parities the
//! trailing n - k. A systematic code stores its parity matrix P (so
//! G = [I_k P]); a parity-check code stores H directly.

use itertools::Itertools;

use crate::gf::{Field, FieldElement};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Brute-force verification refuses codes with more candidate subsets.
const MDS_SUBSET_CAP: u64 = 1_000_000;

/// How an [n, k] code is represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// G = [I_k P] with P the k x (n-k) parity matrix.
    Systematic(Matrix),
    /// H, an (n-k) x n parity-check matrix of full row rank.
    ParityCheck(Matrix),
}

/// A linear [n, k] code intended to be MDS. MDS-ness is verified explicitly
/// via [`MdsCode::verify_mds`], not assumed by the constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsCode {
    n: usize,
    k: usize,
    repr: Representation,
}

/// A codeword: n field symbols. Membership of a particular code is checked
/// with [`MdsCode::contains`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    field: Field,
    symbols: Vec<u64>,
}

impl Codeword {
    pub fn new(field: Field, symbols: Vec<u64>) -> Result<Codeword> {
        if symbols.iter().any(|&v| v >= field.q()) {
            return Err(Error::InvalidArgument(
                "codeword symbol is not a canonical field value".into(),
            ));
        }
        Ok(Codeword { field, symbols })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> u64 {
        self.symbols[i]
    }

    pub fn elements(&self) -> Vec<FieldElement> {
        self.symbols
            .iter()
            .map(|&v| self.field.element(v).unwrap())
            .collect()
    }
}

impl MdsCode {
    /// Systematic code from its parity matrix P (k = rows, n = k + cols).
    pub fn systematic(p: Matrix) -> Result<MdsCode> {
        if p.rows() == 0 || p.cols() == 0 {
            return Err(Error::DimensionMismatch(
                "parity matrix must be non-empty".into(),
            ));
        }
        Ok(MdsCode {
            n: p.rows() + p.cols(),
            k: p.rows(),
            repr: Representation::Systematic(p),
        })
    }

    /// Code from a parity-check matrix H ((n-k) x n, full row rank).
    pub fn parity_check(h: Matrix) -> Result<MdsCode> {
        if h.rows() == 0 || h.cols() <= h.rows() {
            return Err(Error::DimensionMismatch(format!(
                "parity-check matrix must be r x n with r < n, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        if h.rank() != h.rows() {
            return Err(Error::InvalidArgument(
                "parity-check matrix does not have full row rank".into(),
            ));
        }
        Ok(MdsCode {
            n: h.cols(),
            k: h.cols() - h.rows(),
            repr: Representation::ParityCheck(h),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of parity symbols n - k.
    pub fn r(&self) -> usize {
        self.n - self.k
    }

    pub fn field(&self) -> &Field {
        match &self.repr {
            Representation::Systematic(p) => p.field(),
            Representation::ParityCheck(h) => h.field(),
        }
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    /// The systematic parity matrix P with G = [I_k P], deriving it from H if
    /// needed (requires the trailing (n-k)-column block of H invertible).
    pub fn parity_matrix(&self) -> Result<Matrix> {
        match &self.repr {
            Representation::Systematic(p) => Ok(p.clone()),
            Representation::ParityCheck(h) => {
                let r = self.r();
                let h_msg = h.slice_cols(0, self.k);
                let h_par = h.slice_cols(self.k, self.n);
                let h_par_inv = h_par.inverse().map_err(|_| {
                    Error::SingularMatrix
                })?;
                // parities = -(Hpar^-1 Hmsg) m, so P = (Hpar^-1 Hmsg)^T negated
                let coeff = h_par_inv.matmul(&h_msg)?;
                let minus_one = self.field().neg(1);
                let p = coeff.transpose().scale(minus_one);
                debug_assert_eq!((p.rows(), p.cols()), (self.k, r));
                Ok(p)
            }
        }
    }

    /// A parity-check matrix for the code. For systematic codes this is
    /// [P^T | -I], built directly from P.
    pub fn parity_check_matrix(&self) -> Matrix {
        match &self.repr {
            Representation::ParityCheck(h) => h.clone(),
            Representation::Systematic(p) => {
                let f = p.field();
                let minus_i = Matrix::identity(f.clone(), p.cols()).scale(f.neg(1));
                p.transpose().hconcat(&minus_i).unwrap()
            }
        }
    }

    /// Re-expression in systematic form; the codeword set is unchanged.
    pub fn to_systematic(&self) -> Result<MdsCode> {
        match &self.repr {
            Representation::Systematic(_) => Ok(self.clone()),
            Representation::ParityCheck(_) => MdsCode::systematic(self.parity_matrix()?),
        }
    }

    /// Systematic encoding: the first k symbols of the codeword equal the
    /// message.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Codeword> {
        let field = self.field().clone();
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} for a k = {} code",
                message.len(),
                self.k
            )));
        }
        if message.iter().any(|e| e.field() != &field) {
            return Err(Error::FieldMismatch);
        }
        let msg: Vec<u64> = message.iter().map(|e| e.value()).collect();
        self.encode_values(&msg)
    }

    /// Same as [`MdsCode::encode`] but on canonical values.
    pub fn encode_values(&self, message: &[u64]) -> Result<Codeword> {
        let field = self.field().clone();
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} for a k = {} code",
                message.len(),
                self.k
            )));
        }
        if message.iter().any(|&v| v >= field.q()) {
            return Err(Error::InvalidArgument(
                "message symbol is not a canonical field value".into(),
            ));
        }
        let parities = match &self.repr {
            Representation::Systematic(p) => p.transpose().mul_vec(message)?,
            Representation::ParityCheck(h) => {
                let h_msg = h.slice_cols(0, self.k);
                let h_par = h.slice_cols(self.k, self.n);
                let rhs_vals = h_msg.mul_vec(message)?;
                let neg_rhs: Vec<u64> = rhs_vals.iter().map(|&v| field.neg(v)).collect();
                let rhs = Matrix::new(field.clone(), self.r(), 1, neg_rhs)?;
                let sol = h_par.solve(&rhs).map_err(|_| Error::SingularMatrix)?;
                sol.col(0)
            }
        };
        let mut symbols = message.to_vec();
        symbols.extend(parities);
        Codeword::new(field, symbols)
    }

    /// True iff H c^T = 0.
    pub fn contains(&self, cw: &Codeword) -> bool {
        if cw.len() != self.n || cw.field() != self.field() {
            return false;
        }
        let h = self.parity_check_matrix();
        h.mul_vec(cw.symbols()).unwrap().iter().all(|&v| v == 0)
    }

    /// Recover the message from at least k known (coordinate, value) pairs.
    ///
    /// The first k knowns determine the codeword; every remaining known is
    /// then re-validated against the solution, so a corrupted value on an
    /// over-determined input set is reported instead of silently absorbed.
    pub fn decode_erasures(&self, known: &[(usize, FieldElement)]) -> Result<Vec<FieldElement>> {
        let field = self.field().clone();
        if known.len() < self.k {
            return Err(Error::InvalidArgument(format!(
                "need at least k = {} known symbols, got {}",
                self.k,
                known.len()
            )));
        }
        let mut seen = vec![false; self.n];
        for &(i, ref e) in known {
            if i >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {i} out of range for n = {}",
                    self.n
                )));
            }
            if e.field() != &field {
                return Err(Error::FieldMismatch);
            }
            if seen[i] {
                return Err(Error::DuplicateElement(format!("coordinate {i}")));
            }
            seen[i] = true;
        }

        // n unknowns; n - k parity equations plus the first k knowns pin the
        // codeword. The system is invertible whenever the code is MDS.
        let h = self.parity_check_matrix();
        let r = self.r();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(self.n);
        let mut rhs: Vec<u64> = Vec::with_capacity(self.n);
        for i in 0..r {
            rows.push(h.row(i).to_vec());
            rhs.push(0);
        }
        for &(coord, ref e) in known.iter().take(self.k) {
            let mut row = vec![0u64; self.n];
            row[coord] = 1;
            rows.push(row);
            rhs.push(e.value());
        }
        let a = Matrix::from_rows(field.clone(), &rows)?;
        let b = Matrix::new(field.clone(), self.n, 1, rhs)?;
        let solution = a.solve(&b).map_err(|_| {
            Error::Inconsistent("erasure system is singular; code is not MDS".into())
        })?;
        let codeword = solution.col(0);

        for &(coord, ref e) in known.iter().skip(self.k) {
            if codeword[coord] != e.value() {
                return Err(Error::Inconsistent(format!(
                    "known symbol at coordinate {coord} disagrees with the decoded codeword"
                )));
            }
        }
        Ok(codeword[..self.k]
            .iter()
            .map(|&v| field.element(v).unwrap())
            .collect())
    }

    /// Brute-force MDS check: every k-subset of generator columns (or
    /// equivalently every (n-k)-subset of H columns) must be invertible. The
    /// cheaper of the two characterizations is used.
    pub fn verify_mds(&self) -> Result<bool> {
        let r = self.r();
        let subsets = binomial(self.n as u64, r.min(self.k) as u64);
        if subsets > MDS_SUBSET_CAP {
            return Err(Error::SizeCapExceeded(format!(
                "MDS verification needs {subsets} subset determinants (cap {MDS_SUBSET_CAP})"
            )));
        }
        if r <= self.k {
            let h = self.parity_check_matrix();
            Ok(all_column_subsets_invertible(&h, r))
        } else {
            let p = self.parity_matrix()?;
            let g = Matrix::identity(self.field().clone(), self.k).hconcat(&p)?;
            Ok(all_column_subsets_invertible(&g, self.k))
        }
    }

    /// Remove parity coordinates. `drop` must consist of parity coordinates
    /// (index >= k); the result is an [n - |drop|, k] code.
    pub fn puncture(&self, drop: &[usize]) -> Result<MdsCode> {
        if drop.is_empty() {
            return Ok(self.clone());
        }
        if drop.len() > self.r() {
            return Err(Error::InvalidArgument(
                "cannot drop more coordinates than there are parities".into(),
            ));
        }
        for &d in drop {
            if d < self.k {
                return Err(Error::Unsupported(format!(
                    "coordinate {d} is a message position; only parity coordinates can be punctured"
                )));
            }
            if d >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {d} out of range for n = {}",
                    self.n
                )));
            }
        }
        let p = self.parity_matrix()?;
        let keep: Vec<usize> = (0..self.r()).filter(|j| !drop.contains(&(j + self.k))).collect();
        let rows: Vec<usize> = (0..self.k).collect();
        MdsCode::systematic(p.submatrix(&rows, &keep)?)
    }
}

fn all_column_subsets_invertible(m: &Matrix, size: usize) -> bool {
    for cols in (0..m.cols()).combinations(size) {
        let rows: Vec<usize> = (0..m.rows()).collect();
        let sub = m.submatrix(&rows, &cols).unwrap();
        if !sub.is_invertible() {
            return false;
        }
    }
    true
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{extended_vandermonde, triply_extended_vandermonde, vandermonde, OrderedSet};
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gf13() -> Field {
        Field::gf(13).unwrap()
    }

    fn elems(f: &Field, vals: &[u64]) -> Vec<FieldElement> {
        vals.iter().map(|&v| f.element(v).unwrap()).collect()
    }

    fn random_message(f: &Field, k: usize, rng: &mut StdRng) -> Vec<FieldElement> {
        (0..k)
            .map(|_| f.element(rng.gen_range(0..f.q())).unwrap())
            .collect()
    }

    #[test]
    fn single_parity_sum() {
        let f = gf13();
        let p = Matrix::new(f.clone(), 4, 1, vec![1, 1, 1, 1]).unwrap();
        let code = MdsCode::systematic(p).unwrap();
        let cw = code.encode(&elems(&f, &[3, 7, 11, 2])).unwrap();
        assert_eq!(cw.symbols(), &[3, 7, 11, 2, (3 + 7 + 11 + 2) % 13]);
    }

    #[test]
    fn zero_message_zero_codeword() {
        let f = gf13();
        let a = OrderedSet::from_values(f.clone(), vec![1, 2, 4, 8]).unwrap();
        let h = vandermonde(&a.concat(&OrderedSet::from_values(f.clone(), vec![0, 9, 5]).unwrap()).unwrap(), 3).unwrap();
        let code = MdsCode::parity_check(h).unwrap();
        let cw = code.encode(&elems(&f, &[0, 0, 0, 0])).unwrap();
        assert!(cw.symbols().iter().all(|&v| v == 0));
        assert!(code.contains(&cw));
    }

    #[test]
    fn parity_check_encode_satisfies_h() {
        let f = gf13();
        // Vandermonde parity-check on 7 distinct points: a [7, 4] MDS code
        let pts = OrderedSet::from_values(f.clone(), vec![1, 2, 4, 8, 0, 9, 5]).unwrap();
        let code = MdsCode::parity_check(vandermonde(&pts, 3).unwrap()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let m = random_message(&f, 4, &mut rng);
            let cw = code.encode(&m).unwrap();
            assert!(code.contains(&cw));
            assert_eq!(&cw.symbols()[..4], &m.iter().map(|e| e.value()).collect::<Vec<_>>()[..]);
        }
    }

    #[test]
    fn decode_from_systematic_positions() {
        let f = gf13();
        let p = Matrix::new(f.clone(), 3, 2, vec![1, 1, 1, 2, 1, 4]).unwrap();
        let code = MdsCode::systematic(p).unwrap();
        let msg = elems(&f, &[5, 6, 7]);
        let cw = code.encode(&msg).unwrap();
        let known: Vec<(usize, FieldElement)> =
            (0..3).map(|i| (i, f.element(cw.symbol(i)).unwrap())).collect();
        assert_eq!(code.decode_erasures(&known).unwrap(), msg);
    }

    #[test]
    fn decode_all_erasure_patterns() {
        let f = gf13();
        // [7, 4] code from a Cauchy parity matrix
        let x = OrderedSet::from_values(f.clone(), vec![2, 4, 8, 3]).unwrap();
        let y = OrderedSet::from_values(f.clone(), vec![1, 12, 0]).unwrap();
        let code = MdsCode::systematic(crate::linalg::cauchy(&x, &y).unwrap()).unwrap();
        assert!(code.verify_mds().unwrap());
        let mut rng = StdRng::seed_from_u64(9);
        let msg = random_message(&f, 4, &mut rng);
        let cw = code.encode(&msg).unwrap();
        for size in 0..=3usize {
            for erased in (0..7usize).combinations(size) {
                let known: Vec<(usize, FieldElement)> = (0..7)
                    .filter(|i| !erased.contains(i))
                    .map(|i| (i, f.element(cw.symbol(i)).unwrap()))
                    .collect();
                assert_eq!(code.decode_erasures(&known).unwrap(), msg);
            }
        }
    }

    #[test]
    fn decode_flags_corrupted_overdetermined_input() {
        let f = gf13();
        let p = Matrix::new(f.clone(), 3, 2, vec![1, 1, 1, 2, 1, 4]).unwrap();
        let code = MdsCode::systematic(p).unwrap();
        let cw = code.encode(&elems(&f, &[5, 6, 7])).unwrap();
        let mut known: Vec<(usize, FieldElement)> = (0..5)
            .map(|i| (i, f.element(cw.symbol(i)).unwrap()))
            .collect();
        // flip the last known symbol
        let flipped = f.element((cw.symbol(4) + 1) % 13).unwrap();
        known[4] = (4, flipped);
        assert!(matches!(
            code.decode_erasures(&known),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn verify_mds_doubly_extended() {
        let f = gf13();
        // n = 7, r = 3: parity-check [V_{A,3} | e_3] on 6 distinct points
        let a = OrderedSet::from_values(f.clone(), vec![0, 1, 2, 3, 4, 5]).unwrap();
        let h = extended_vandermonde(&a, 3).unwrap();
        let code = MdsCode::parity_check(h).unwrap();
        assert_eq!((code.n(), code.k()), (7, 4));
        assert!(code.verify_mds().unwrap());
    }

    #[test]
    fn verify_mds_triply_extended_gf8() {
        let f = Field::gf(8).unwrap();
        // n = 10 = q + 2, r = 3 over GF(8): all 8 points plus e_2, e_3
        let a = OrderedSet::from_values(f.clone(), (0..8).collect()).unwrap();
        let h = triply_extended_vandermonde(&a).unwrap();
        let code = MdsCode::parity_check(h).unwrap();
        assert_eq!((code.n(), code.k()), (10, 7));
        assert!(code.verify_mds().unwrap());
    }

    #[test]
    fn verify_mds_rejects_repeated_point() {
        let f = gf13();
        let h = Matrix::from_rows(
            f,
            &[vec![1, 1, 1, 1, 1], vec![1, 2, 2, 3, 4]],
        )
        .unwrap();
        let code = MdsCode::parity_check(h).unwrap();
        assert!(!code.verify_mds().unwrap());
    }

    #[test]
    fn systematic_mds_iff_superregular() {
        let f = gf13();
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..50 {
            let k = rng.gen_range(1..=4usize);
            let r = rng.gen_range(1..=3usize);
            let data: Vec<u64> = (0..k * r).map(|_| rng.gen_range(0..13)).collect();
            let p = Matrix::new(f.clone(), k, r, data).unwrap();
            let code = MdsCode::systematic(p.clone()).unwrap();
            assert_eq!(
                code.verify_mds().unwrap(),
                p.is_superregular().unwrap(),
                "disagreement for P = {p:?}"
            );
        }
    }

    #[test]
    fn representations_encode_identical_codewords() {
        let f = gf13();
        let x = OrderedSet::from_values(f.clone(), vec![2, 4, 8, 3]).unwrap();
        let y = OrderedSet::from_values(f.clone(), vec![1, 12, 0]).unwrap();
        let sys = MdsCode::systematic(crate::linalg::cauchy(&x, &y).unwrap()).unwrap();
        let pc = MdsCode::parity_check(sys.parity_check_matrix()).unwrap();
        let back = pc.to_systematic().unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_message(&f, 4, &mut rng);
            let a = sys.encode(&m).unwrap();
            let b = pc.encode(&m).unwrap();
            let c = back.encode(&m).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
            assert!(pc.contains(&a) && sys.contains(&b));
        }
    }

    #[test]
    fn puncture_examples() {
        let f = gf13();
        let x = OrderedSet::from_values(f.clone(), vec![2, 4, 8, 3]).unwrap();
        let y = OrderedSet::from_values(f.clone(), vec![1, 12, 0]).unwrap();
        let code = MdsCode::systematic(crate::linalg::cauchy(&x, &y).unwrap()).unwrap();
        assert_eq!(code.puncture(&[]).unwrap(), code);
        let smaller = code.puncture(&[6]).unwrap();
        assert_eq!((smaller.n(), smaller.k()), (6, 4));
        assert!(smaller.verify_mds().unwrap());
        assert!(matches!(
            code.puncture(&[0]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn encode_rejects_noncanonical_values() {
        let f = gf13();
        let p = Matrix::new(f, 3, 2, vec![1, 1, 1, 2, 1, 4]).unwrap();
        let code = MdsCode::systematic(p).unwrap();
        assert!(matches!(
            code.encode_values(&[1, 2, 13]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn binomial_sanity() {
        assert_eq!(binomial(10, 8), 45);
        assert_eq!(binomial(7, 4), 35);
        assert_eq!(binomial(22, 6), 74613);
        assert_eq!(binomial(4, 9), 0);
    }

    proptest! {
        #[test]
        fn roundtrip_random_erasures(seed in 0u64..300) {
            let f = Field::gf(16).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            // [8, 5] Cauchy-based code over GF(16)
            let x = OrderedSet::from_values(f.clone(), vec![2, 4, 6, 8, 10]).unwrap();
            let y = OrderedSet::from_values(f.clone(), vec![0, 1, 3]).unwrap();
            let code = MdsCode::systematic(crate::linalg::cauchy(&x, &y).unwrap()).unwrap();
            let msg = random_message(&f, 5, &mut rng);
            let cw = code.encode(&msg).unwrap();
            let mut coords: Vec<usize> = (0..8).collect();
            for i in (1..coords.len()).rev() {
                let j = rng.gen_range(0..=i);
                coords.swap(i, j);
            }
            let known: Vec<(usize, FieldElement)> = coords[..5]
                .iter()
                .map(|&i| (i, f.element(cw.symbol(i)).unwrap()))
                .collect();
            prop_assert_eq!(code.decode_erasures(&known).unwrap(), msg);
        }
    }
}
