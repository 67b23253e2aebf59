//! Command-line front end: `construct`, `convert`, `verify` and `sweep`
//! over JSON artifacts.
//!
//! Exit codes: 0 on success, 1 on usage or precondition errors, 2 when a
//! verification check fails. All randomness is drawn from one stream cipher
//! generator seeded via `--seed`, so reports are byte-identical across runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::access::{
    access_cost_bound, build_default, build_grs, build_subgroup_add, build_subgroup_mult,
    build_triply_extended, verify_access_optimal, verify_f_matrix_identity,
    verify_parallel_block_reconstructible, AddVariant, ConvertiblePair, Family, MergeParams,
    MultVariant,
};
use crate::bandwidth::{
    bandwidth_bound, build_vector_pair, verify_bandwidth_optimal, BwParams, VectorCodePair,
    VectorCodeword,
};
use crate::gf::{factor_prime_power, Field, MAX_FIELD_SIZE};
use crate::json::{
    AccessTraceJson, BandwidthReportJson, BandwidthTraceJson, CodewordJson, FieldSpecJson,
    MessagesJson, PairFileJson, PairJson, VectorCodewordJson, VectorPairJson,
};
use crate::mds::Codeword;
use crate::Error;

/// Entry point; returns the process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = err.print();
                    0
                }
                _ => {
                    let _ = err.print();
                    1
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Construct(args) => cmd_construct(&args),
        Command::Convert(args) => cmd_convert(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Sweep(args) => cmd_sweep(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            2
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "convcode",
    version,
    about = "Construct, run, and verify MDS convertible codes in the merge regime"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code pair and emit its JSON descriptor
    Construct(ConstructArgs),
    /// Run a conversion and report its access or bandwidth trace
    Convert(ConvertArgs),
    /// Re-verify a pair: MDS-ness, structure, and cost optimality
    Verify(VerifyArgs),
    /// Tabulate minimal field sizes and cost bounds over parameter ranges
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ConstructArgs {
    /// Family: subgroup-mult[-A|-B], subgroup-add[-A], grs, grs-doubly-ext,
    /// grs-triply-ext, default, piggyback
    #[arg(long)]
    family: String,
    /// Variant (base, A, B) when not folded into the family name
    #[arg(long)]
    variant: Option<String>,
    /// Message symbols per initial codeword (k_i)
    #[arg(long)]
    k: usize,
    /// Number of initial codewords merged
    #[arg(long)]
    lambda: usize,
    /// Shorthand for equal initial and final parity counts
    #[arg(long)]
    r: Option<usize>,
    /// Initial parity count r_i
    #[arg(long)]
    ri: Option<usize>,
    /// Final parity count r_f
    #[arg(long)]
    rf: Option<usize>,
    /// Field size, or "auto" for the smallest admissible prime power
    #[arg(long)]
    q: Option<String>,
    /// Field spec JSON file (alternative to --q)
    #[arg(long)]
    field_json: Option<PathBuf>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    /// Pair descriptor produced by `construct`
    #[arg(long)]
    pair: PathBuf,
    /// Messages file: {"messages": [[..], ..]}, one row per initial codeword
    #[arg(long)]
    messages: Option<PathBuf>,
    /// Sample random messages instead of reading a file
    #[arg(long)]
    random: bool,
    /// Seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the baseline re-encode conversion instead of the optimized plan
    #[arg(long = "default")]
    use_default: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Pair descriptor produced by `construct`
    #[arg(long)]
    pair: PathBuf,
    /// Random conversion trials per optimality check
    #[arg(long, default_value_t = 25)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the JSON report (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// k_i values: "4", "4,5,6" or "4-6"
    #[arg(long)]
    k: String,
    /// lambda values
    #[arg(long)]
    lambda: String,
    /// parity counts (r_i = r_f = r)
    #[arg(long)]
    r: String,
    /// Comma-separated family list (defaults to all constructions)
    #[arg(long)]
    families: Option<String>,
    /// Output path; .json emits JSON, anything else CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(())
        }
        None => {
            use std::io::Write;
            // a closed pipe (e.g. piping into head) is not an error
            match writeln!(std::io::stdout(), "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => Ok(other?),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BuildTarget {
    Scalar(Family),
    Piggyback,
}

fn parse_target(family: &str, variant: Option<&str>) -> Result<BuildTarget, CliError> {
    if family == "piggyback" {
        if variant.is_some() {
            return Err(CliError::Usage(
                "the piggyback family takes no variant".into(),
            ));
        }
        return Ok(BuildTarget::Piggyback);
    }
    Ok(BuildTarget::Scalar(Family::parse(family, variant)?))
}

fn resolve_parities(args: &ConstructArgs) -> Result<(usize, usize), CliError> {
    match (args.r, args.ri, args.rf) {
        (Some(r), None, None) => Ok((r, r)),
        (None, Some(ri), Some(rf)) => Ok((ri, rf)),
        (None, Some(ri), None) => Ok((ri, ri)),
        (None, None, Some(rf)) => Ok((rf, rf)),
        _ => Err(CliError::Usage(
            "give either --r or --ri/--rf, not both".into(),
        )),
    }
}

/// The field-size floor a family publishes for given parameters, before
/// divisibility constraints; None when the parameters are inadmissible.
fn family_field_floor(
    target: BuildTarget,
    k: usize,
    r_i: usize,
    r_f: usize,
    lambda: usize,
) -> Option<u64> {
    let (k64, ri64, rf64, l64) = (k as u64, r_i as u64, r_f as u64, lambda as u64);
    match target {
        BuildTarget::Scalar(Family::SubgroupMult(v)) => {
            let (delta, cap) = match v {
                MultVariant::Base => (0usize, r_i),
                MultVariant::A => (1, r_i.saturating_sub(1)),
                MultVariant::B => (2, r_i.saturating_sub(2)),
            };
            if r_f > r_i || r_i < 2 {
                return None;
            }
            let d = r_i.checked_sub(delta).filter(|&d| d >= 1)? as u64;
            (lambda <= cap).then_some((k64 + 1) * d + 1)
        }
        BuildTarget::Scalar(Family::SubgroupAdd(v)) => {
            let (delta, cap) = match v {
                AddVariant::Base => (0usize, r_i),
                AddVariant::A => (1, r_i.saturating_sub(1)),
            };
            if r_f > r_i || r_i < 2 {
                return None;
            }
            let d = r_i.checked_sub(delta).filter(|&d| d >= 2)? as u64;
            let (_, u) = factor_prime_power(d)?;
            (u >= 1 && lambda <= cap).then_some((k64 + 1) * d)
        }
        BuildTarget::Scalar(Family::Grs) => {
            (r_f <= r_i.min(k)).then_some((k64 + ri64).max(l64 * k64 + rf64))
        }
        BuildTarget::Scalar(Family::GrsDoublyExtended) => {
            (r_f <= r_i.min(k)).then_some((k64 + ri64).max(l64 * k64 + rf64) - 1)
        }
        BuildTarget::Scalar(Family::GrsTriplyExtended) => {
            (r_i == 3 && r_f == 3 && k >= 3).then_some(l64 * k64 + 1)
        }
        BuildTarget::Scalar(Family::Default) => Some((k64 + ri64).max(l64 * k64 + rf64)),
        BuildTarget::Piggyback => {
            (k > r_f && r_f > r_i && r_i >= 1).then_some(l64 * k64 + rf64 - 1)
        }
    }
}

fn admissible_q(target: BuildTarget, r_i: usize, q: u64) -> bool {
    match target {
        BuildTarget::Scalar(Family::SubgroupMult(v)) => {
            let delta = match v {
                MultVariant::Base => 0,
                MultVariant::A => 1,
                MultVariant::B => 2,
            };
            let d = (r_i - delta) as u64;
            (q - 1).is_multiple_of(d)
        }
        BuildTarget::Scalar(Family::SubgroupAdd(v)) => {
            let delta = match v {
                AddVariant::Base => 0,
                AddVariant::A => 1,
            };
            let d = (r_i - delta) as u64;
            let Some((dp, _)) = factor_prime_power(d) else {
                return false;
            };
            match factor_prime_power(q) {
                Some((p, _)) => p == dp && q.is_multiple_of(d) && q > d,
                None => false,
            }
        }
        BuildTarget::Scalar(Family::GrsTriplyExtended) => {
            matches!(factor_prime_power(q), Some((2, _)))
        }
        _ => true,
    }
}

/// Smallest admissible prime power for the family at these parameters.
fn min_q_for(target: BuildTarget, k: usize, r_i: usize, r_f: usize, lambda: usize) -> Option<u64> {
    let floor = family_field_floor(target, k, r_i, r_f, lambda)?;
    (floor..=MAX_FIELD_SIZE)
        .find(|&q| factor_prime_power(q).is_some() && admissible_q(target, r_i, q))
}

fn build_scalar(
    family: Family,
    params: &MergeParams,
    field: &Field,
) -> Result<ConvertiblePair, Error> {
    match family {
        Family::SubgroupMult(v) => {
            if params.r_i() != params.r_f() {
                let full =
                    MergeParams::new(params.k_i(), params.r_i(), params.r_i(), params.lambda())?;
                build_subgroup_mult(&full, field, v, None)?.truncate_final_parities(params.r_f())
            } else {
                build_subgroup_mult(params, field, v, None)
            }
        }
        Family::SubgroupAdd(v) => {
            if params.r_i() != params.r_f() {
                let full =
                    MergeParams::new(params.k_i(), params.r_i(), params.r_i(), params.lambda())?;
                build_subgroup_add(&full, field, v, None)?.truncate_final_parities(params.r_f())
            } else {
                build_subgroup_add(params, field, v, None)
            }
        }
        Family::Grs => build_grs(params, field, false),
        Family::GrsDoublyExtended => build_grs(params, field, true),
        Family::GrsTriplyExtended => build_triply_extended(params, field),
        Family::Default => build_default(params, field),
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), CliError> {
    let target = parse_target(&args.family, args.variant.as_deref())?;
    let (r_i, r_f) = resolve_parities(args)?;

    let mut field_bound = None;
    let field = match (&args.q, &args.field_json) {
        (Some(q), None) if q == "auto" => {
            let bound = family_field_floor(target, args.k, r_i, r_f, args.lambda).ok_or_else(
                || CliError::Usage("parameters are inadmissible for this family".into()),
            )?;
            let q = min_q_for(target, args.k, r_i, r_f, args.lambda).ok_or_else(|| {
                CliError::Usage("no admissible field size within the supported range".into())
            })?;
            field_bound = Some(bound);
            eprintln!("auto field: bound q >= {bound}, selected q = {q}");
            Field::gf(q)?
        }
        (Some(q), None) => {
            let q: u64 = q
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid field size {q:?}")))?;
            Field::gf(q)?
        }
        (None, Some(path)) => {
            let spec: FieldSpecJson = serde_json::from_str(&fs::read_to_string(path)?)?;
            spec.to_field()?
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --q or --field-json".into(),
            ))
        }
    };

    let file = match target {
        BuildTarget::Scalar(family) => {
            let params = MergeParams::new(args.k, r_i, r_f, args.lambda)?;
            let pair = build_scalar(family, &params, &field)?;
            let mut j = PairJson::of(&pair);
            j.field_bound = field_bound;
            eprintln!(
                "constructed {} pair: initial [{}, {}], final [{}, {}] over GF({})",
                pair.family().name(),
                params.n_i(),
                params.k_i(),
                params.n_f(),
                params.k_f(),
                field.q()
            );
            PairFileJson::Scalar(j)
        }
        BuildTarget::Piggyback => {
            let params = BwParams::new(args.k, r_i, r_f, args.lambda)?;
            let pair = build_vector_pair(&params, &field)?;
            let mut j = VectorPairJson::of(&pair);
            j.field_bound = field_bound;
            eprintln!(
                "constructed piggyback pair: [{}, {}, alpha={}] -> [{}, {}, alpha={}] over GF({})",
                params.n_i(),
                params.k_i(),
                params.alpha(),
                params.n_f(),
                params.k_f(),
                params.alpha(),
                field.q()
            );
            PairFileJson::Vector(j)
        }
    };
    write_output(&args.out, &serde_json::to_string_pretty(&file)?)
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ScalarConvertOutput {
    kind: &'static str,
    trace: AccessTraceJson,
    expected_reads: usize,
    expected_writes: usize,
    total_cost: usize,
    cost_bound: usize,
    optimal: bool,
    #[serde(rename = "final")]
    final_codeword: CodewordJson,
}

#[derive(Serialize)]
struct VectorConvertOutput {
    kind: &'static str,
    trace: BandwidthTraceJson,
    report: BandwidthReportJson,
    #[serde(rename = "final")]
    final_codeword: VectorCodewordJson,
}

fn load_pair(path: &Path) -> Result<PairFileJson, CliError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn load_messages(
    args: &ConvertArgs,
    lambda: usize,
    row_len: usize,
    q: u64,
) -> Result<Vec<Vec<u64>>, CliError> {
    match (&args.messages, args.random) {
        (Some(path), false) => {
            let m: MessagesJson = serde_json::from_str(&fs::read_to_string(path)?)?;
            if m.messages.len() != lambda || m.messages.iter().any(|row| row.len() != row_len) {
                return Err(CliError::Usage(format!(
                    "messages file must hold {lambda} rows of {row_len} symbols"
                )));
            }
            Ok(m.messages)
        }
        (None, true) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            Ok((0..lambda)
                .map(|_| (0..row_len).map(|_| rng.gen_range(0..q)).collect())
                .collect())
        }
        _ => Err(CliError::Usage(
            "give exactly one of --messages or --random".into(),
        )),
    }
}

fn cmd_convert(args: &ConvertArgs) -> Result<(), CliError> {
    match load_pair(&args.pair)? {
        PairFileJson::Scalar(pj) => {
            let pair = pj.to_pair()?;
            let params = *pair.params();
            let messages =
                load_messages(args, params.lambda(), params.k_i(), pair.field().q())?;
            let inputs: Vec<Codeword> = messages
                .iter()
                .map(|m| pair.initial().encode_values(m))
                .collect::<Result<_, _>>()?;
            let (out, trace) = if args.use_default {
                pair.convert_default(&inputs)?
            } else {
                pair.convert(&inputs)?
            };
            let expected_reads =
                if !args.use_default && params.r_f() <= params.r_i().min(params.k_i()) {
                    params.lambda() * params.r_f()
                } else {
                    params.lambda() * params.k_i()
                };
            let bound = access_cost_bound(&params);
            let optimal = trace.total_cost() == bound;
            eprintln!(
                "reads  {:>4} / {:<4}\nwrites {:>4} / {:<4}\ntotal  {:>4} / {:<4}  {}",
                trace.disks_read(),
                expected_reads,
                trace.disks_written(),
                params.r_f(),
                trace.total_cost(),
                bound,
                if optimal { "OPTIMAL" } else { "SUBOPTIMAL" }
            );
            let output = ScalarConvertOutput {
                kind: "scalar",
                trace: AccessTraceJson {
                    reads: trace.disks_read(),
                    writes: trace.disks_written(),
                    per_symbol: pair.plan().is_per_symbol() && !args.use_default,
                    read_set: trace.read_set().iter().copied().collect(),
                },
                expected_reads,
                expected_writes: params.r_f(),
                total_cost: trace.total_cost(),
                cost_bound: bound,
                optimal,
                final_codeword: CodewordJson::of(&out),
            };
            write_output(&args.out, &serde_json::to_string_pretty(&output)?)
        }
        PairFileJson::Vector(vj) => {
            let pair = vj.to_pair()?;
            let params = *pair.params();
            if args.use_default {
                return Err(CliError::Usage(
                    "the baseline conversion applies to scalar pairs only".into(),
                ));
            }
            let messages =
                load_messages(args, params.lambda(), pair.message_len(), pair.field().q())?;
            let inputs: Vec<VectorCodeword> = messages
                .iter()
                .map(|m| pair.encode_initial(m))
                .collect::<Result<_, _>>()?;
            let (out, trace) = pair.convert(&inputs)?;
            let bound =
                bandwidth_bound(params.k_i(), params.r_i(), params.r_f(), params.lambda());
            let optimal = trace.read() == bound.read && trace.write() == bound.write;
            eprintln!(
                "read {}/{}, write {}/{}, {}",
                trace.read(),
                bound.read,
                trace.write(),
                bound.write,
                if optimal { "OPTIMAL" } else { "SUBOPTIMAL" }
            );
            let output = VectorConvertOutput {
                kind: "vector",
                trace: BandwidthTraceJson::of(&trace),
                report: BandwidthReportJson {
                    read: trace.read(),
                    write: trace.write(),
                    bound_read: bound.read,
                    bound_write: bound.write,
                    optimal,
                },
                final_codeword: VectorCodewordJson::of(&out),
            };
            write_output(&args.out, &serde_json::to_string_pretty(&output)?)
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize, Clone)]
struct CheckJson {
    name: String,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct VerifyOutput {
    pair: String,
    checks: Vec<CheckJson>,
    passed: bool,
}

struct Checks {
    list: Vec<CheckJson>,
}

impl Checks {
    fn new() -> Checks {
        Checks { list: Vec::new() }
    }

    fn record(&mut self, name: &str, outcome: Result<bool, Error>, detail: Option<String>) {
        let (status, detail) = match outcome {
            Ok(true) => ("PASS", detail),
            Ok(false) => ("FAIL", detail),
            Err(Error::SizeCapExceeded(msg)) => ("SKIP", Some(msg)),
            Err(e) => ("FAIL", Some(e.to_string())),
        };
        match &detail {
            Some(d) => println!("{status} {name}: {d}"),
            None => println!("{status} {name}"),
        }
        self.list.push(CheckJson {
            name: name.into(),
            status: status.into(),
            detail,
        });
    }

    fn passed(&self) -> bool {
        self.list.iter().all(|c| c.status != "FAIL")
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut checks = Checks::new();
    match load_pair(&args.pair)? {
        PairFileJson::Scalar(pj) => {
            let pair = pj.to_pair()?;
            let params = *pair.params();
            checks.record("mds-initial", pair.initial().verify_mds(), None);
            checks.record("mds-final", pair.final_code().verify_mds(), None);

            if matches!(
                pair.family(),
                Family::SubgroupMult(_) | Family::SubgroupAdd(_)
            ) {
                let p = pair.final_code().parity_matrix()?;
                checks.record("superregular-final-parity", p.is_superregular(), None);
                // the matrix-internal column matching is meaningful on the
                // untruncated matrix; truncated pairs keep per-symbol reads
                // in the plan, which the access check reports
                if params.r_f() == params.r_i() {
                    let map = verify_parallel_block_reconstructible(&p, params.k_i())?;
                    checks.record(
                        "per-symbol-structure",
                        Ok(map.is_some()),
                        Some(format!("blocks = {}", params.lambda())),
                    );
                } else {
                    checks.record(
                        "per-symbol-plan",
                        Ok(pair.plan().is_per_symbol()),
                        Some("truncated pair; checked at the plan level".into()),
                    );
                }
            }
            if matches!(
                pair.family(),
                Family::Grs | Family::GrsDoublyExtended | Family::GrsTriplyExtended
            ) && pair.sets().is_some()
            {
                checks.record("f-matrix-identity", verify_f_matrix_identity(&pair), None);
            }
            if params.r_f() <= params.r_i().min(params.k_i()) {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                match verify_access_optimal(&pair, args.trials, &mut rng) {
                    Ok(report) => {
                        let detail = format!(
                            "reads {}/{}, writes {}/{}, per_symbol = {}",
                            report.disks_read,
                            report.expected_reads,
                            report.disks_written,
                            report.expected_writes,
                            report.per_symbol
                        );
                        checks.record("access-optimal", Ok(report.pass), Some(detail));
                    }
                    Err(e) => checks.record("access-optimal", Err(e), None),
                }
            }
            finish_verify(args, &checks, "scalar")
        }
        PairFileJson::Vector(vj) => {
            let pair = vj.to_pair()?;
            checks.record("mds-base-initial", pair.base().initial().verify_mds(), None);
            checks.record("mds-base-final", pair.base().final_code().verify_mds(), None);
            checks.record(
                "vector-mds-sampled",
                vector_mds_sample(&pair, args.seed),
                None,
            );
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            match verify_bandwidth_optimal(&pair, args.trials, &mut rng) {
                Ok(report) => {
                    let detail = format!(
                        "read {}/{}, write {}/{}",
                        report.read, report.bound_read, report.write, report.bound_write
                    );
                    checks.record("bandwidth-optimal", Ok(report.pass), Some(detail));
                }
                Err(e) => checks.record("bandwidth-optimal", Err(e), None),
            }
            finish_verify(args, &checks, "vector")
        }
    }
}

fn vector_mds_sample(pair: &VectorCodePair, seed: u64) -> Result<bool, Error> {
    let params = pair.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let q = pair.field().q();
    let message: Vec<u64> = (0..pair.message_len())
        .map(|_| rng.gen_range(0..q))
        .collect();
    let cw = pair.encode_initial(&message)?;
    let n = params.n_i();
    for _ in 0..20 {
        let mut coords: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            coords.swap(i, j);
        }
        let known: Vec<(usize, Vec<u64>)> = coords[..params.k_i()]
            .iter()
            .map(|&i| (i, cw.symbol(i).to_vec()))
            .collect();
        if pair.decode(&known)? != message {
            return Ok(false);
        }
    }
    Ok(true)
}

fn finish_verify(args: &VerifyArgs, checks: &Checks, kind: &str) -> Result<(), CliError> {
    let passed = checks.passed();
    let output = VerifyOutput {
        pair: kind.into(),
        checks: checks.list.clone(),
        passed,
    };
    if let Some(path) = &args.out {
        fs::write(path, serde_json::to_string_pretty(&output)?)?;
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification(
            "one or more checks failed (see report)".into(),
        ))
    }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn parse_range(text: &str) -> Result<Vec<usize>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let bounds: Option<(usize, usize)> = if let Some((a, b)) = part.split_once("..") {
            a.parse().ok().zip(b.parse().ok())
        } else if let Some((a, b)) = part.split_once('-') {
            a.parse().ok().zip(b.parse().ok())
        } else {
            part.parse().ok().map(|v: usize| (v, v))
        };
        let (lo, hi) =
            bounds.ok_or_else(|| CliError::Usage(format!("bad range element {part:?}")))?;
        if lo > hi {
            return Err(CliError::Usage(format!("empty range {part:?}")));
        }
        out.extend(lo..=hi);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

const SWEEP_FAMILIES: &[&str] = &[
    "subgroup-mult",
    "subgroup-mult-A",
    "subgroup-mult-B",
    "subgroup-add",
    "subgroup-add-A",
    "grs",
    "grs-doubly-ext",
    "grs-triply-ext",
];

#[derive(Serialize)]
struct SweepRow {
    k: usize,
    lambda: usize,
    r: usize,
    access_bound: usize,
    default_cost: usize,
    min_q: BTreeMap<String, Option<u64>>,
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let ks = parse_range(&args.k)?;
    let lambdas = parse_range(&args.lambda)?;
    let rs = parse_range(&args.r)?;
    let families: Vec<String> = match &args.families {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => SWEEP_FAMILIES.iter().map(|s| s.to_string()).collect(),
    };
    for f in &families {
        parse_target(f, None)?;
    }

    let mut rows = Vec::new();
    for &k in &ks {
        for &lambda in &lambdas {
            for &r in &rs {
                let mut min_q = BTreeMap::new();
                for family in &families {
                    let target = parse_target(family, None)?;
                    min_q.insert(family.clone(), min_q_for(target, k, r, r, lambda));
                }
                let access_bound = match MergeParams::new(k, r, r, lambda) {
                    Ok(p) => access_cost_bound(&p),
                    Err(_) => 0,
                };
                rows.push(SweepRow {
                    k,
                    lambda,
                    r,
                    access_bound,
                    default_cost: lambda * k + r,
                    min_q,
                });
            }
        }
    }

    let as_json = args
        .out
        .as_ref()
        .map(|p| p.extension().is_some_and(|e| e == "json"))
        .unwrap_or(false);
    let text = if as_json {
        serde_json::to_string_pretty(&rows)?
    } else {
        let mut csv = String::from("k,lambda,r,access_bound,default_cost");
        for f in &families {
            let _ = write!(csv, ",min_q[{f}]");
        }
        csv.push('\n');
        for row in &rows {
            let _ = write!(
                csv,
                "{},{},{},{},{}",
                row.k, row.lambda, row.r, row.access_bound, row.default_cost
            );
            for f in &families {
                match row.min_q[f] {
                    Some(q) => {
                        let _ = write!(csv, ",{q}");
                    }
                    None => csv.push_str(",n/a"),
                }
            }
            csv.push('\n');
        }
        csv
    };
    write_output(&args.out, text.trim_end())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("4").unwrap(), vec![4]);
        assert_eq!(parse_range("2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("4-6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_range("4..6,2").unwrap(), vec![2, 4, 5, 6]);
        assert_eq!(parse_range("").unwrap(), Vec::<usize>::new());
        assert!(parse_range("6-4").is_err());
    }

    #[test]
    fn family_floors_match_published_bounds() {
        let mult_b = parse_target("subgroup-mult-B", None).unwrap();
        assert_eq!(family_field_floor(mult_b, 5, 4, 4, 2), Some(13));
        let add_a = parse_target("subgroup-add-A", None).unwrap();
        assert_eq!(family_field_floor(add_a, 7, 3, 3, 2), Some(16));
        let dbl = parse_target("grs-doubly-ext", None).unwrap();
        assert_eq!(family_field_floor(dbl, 4, 3, 3, 2), Some(10));
        assert_eq!(min_q_for(dbl, 4, 3, 3, 2), Some(11));
        let triply = parse_target("grs-triply-ext", None).unwrap();
        assert_eq!(min_q_for(triply, 3, 3, 3, 2), Some(8));
        let pig = parse_target("piggyback", None).unwrap();
        assert_eq!(family_field_floor(pig, 8, 2, 6, 2), Some(21));
        assert_eq!(min_q_for(pig, 8, 2, 6, 2), Some(23));
    }

    #[test]
    fn subgroup_add_q_must_share_characteristic() {
        let add = parse_target("subgroup-add", None).unwrap();
        // r = 4 = 2^2: q must be a power of two at least (k+1)r
        assert_eq!(min_q_for(add, 3, 4, 4, 2), Some(16));
        // r = 3: powers of three
        assert_eq!(min_q_for(add, 2, 3, 3, 2), Some(9));
        // r = 6 is not a prime power: inadmissible
        assert_eq!(min_q_for(add, 3, 6, 6, 2), None);
    }

    #[test]
    fn mult_variant_b_needs_lambda_room() {
        let mult_b = parse_target("subgroup-mult-B", None).unwrap();
        // lambda = 2 > r - 2 = 1 for r = 3
        assert_eq!(family_field_floor(mult_b, 5, 3, 3, 2), None);
    }
}
