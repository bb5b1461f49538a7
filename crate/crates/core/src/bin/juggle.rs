// SPDX-License-Identifier: Apache-2.0

//! `juggle`: key generation, standalone juggling prove/verify, swap
//! simulation with adversary scripts, abort sweeps and transcript audits.
//!
//! Exit codes: 0 success, 1 rejection or protocol abort, 2 usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use juggling::elgamal::EncKeyPair;
use juggling::group::{Group, GroupKind, Secp256k1, ToyGroup};
use juggling::juggling::{encryptor_setup, Decryptor, SegmentRelease, SetupBundle, Verifier};
use juggling::segmentation::{random_secret, SegmentationParams};
use juggling::swap::{
    abort_sweep, audit_transcript, run_swap, sub_seed, Adversary, Role, Step, SwapConfig, Transcript, Verdict,
};
use juggling::wire::Encode;

const EXIT_REJECT: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "juggle", version, about = "Segmented verifiable encryption and cross-chain swap simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a juggling encryption key pair.
    Keygen {
        #[arg(long, default_value = "toy")]
        group: GroupKind,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Standalone juggling session.
    #[command(subcommand)]
    Juggle(JuggleCmd),
    /// Simulate a full swap and write its transcript.
    Swap(SwapArgs),
    /// Abort at every segment for both owners and tabulate the advantage.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 40)]
        amount1: u64,
        #[arg(long, default_value_t = 70)]
        amount2: u64,
    },
    /// Re-verify a swap transcript and name the deviating role.
    Audit { transcript: PathBuf },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value = "toy")]
    group: GroupKind,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(2..=16))]
    segment_bits: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum JuggleCmd {
    /// Encrypt a fresh secret and write the setup bundle plus all releases.
    Prove {
        #[command(flatten)]
        common: Common,
        /// Recipient key file from `keygen`; derived from the seed if absent.
        #[arg(long)]
        recipient: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every proof in a file written by `prove`.
    Verify {
        file: PathBuf,
        /// Recipient key file; also decrypts and checks `xG = Q`.
        #[arg(long)]
        key: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SwapArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 40)]
    amount1: u64,
    #[arg(long, default_value_t = 70)]
    amount2: u64,
    /// none, abort-at=K:P1, corrupt-proof=K:P2, biased-segments=P1,
    /// provider-withhold, provider-partial-sign
    #[arg(long, default_value = "none")]
    adversary: Adversary,
    /// Owners' genesis balances.
    #[arg(long, default_value_t = 100)]
    initial: u64,
    /// Brute-force budget for limbs missing after an abort.
    #[arg(long, default_value_t = 0)]
    recovery_bits: u32,
    /// Generate the swap addresses between the owners only.
    #[arg(long)]
    two_party_keys: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

macro_rules! with_group {
    ($kind:expr, $f:ident($($arg:expr),*)) => {
        match $kind {
            GroupKind::Toy => $f::<ToyGroup>($($arg),*),
            GroupKind::Secp256k1 => $f::<Secp256k1>($($arg),*),
        }
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Keygen { group, seed, out } => with_group!(group, cmd_keygen(seed, out.as_deref())),
        Cmd::Juggle(JuggleCmd::Prove { common, recipient, out }) => {
            with_group!(common.group, cmd_prove(&common, recipient.as_deref(), &out))
        }
        Cmd::Juggle(JuggleCmd::Verify { file, key }) => cmd_verify(&file, key.as_deref()),
        Cmd::Swap(args) => cmd_swap(args),
        Cmd::Sweep { common, amount1, amount2 } => cmd_sweep(&common, [amount1, amount2]),
        Cmd::Audit { transcript } => cmd_audit(&transcript),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

fn reject(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_REJECT, msg: msg.into() }
}

type CmdResult = Result<u8, Failure>;

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// `key value` lines.
fn fields(text: &str) -> Vec<(&str, &str)> {
    text.lines().filter_map(|l| l.split_once(' ')).collect()
}

fn field<'a>(f: &[(&'a str, &'a str)], name: &str) -> Option<&'a str> {
    f.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
}

fn cmd_keygen<G: Group>(seed: u64, out: Option<&Path>) -> CmdResult {
    let mut rng = ChaCha20Rng::from_seed(sub_seed(seed, Role::P2));
    let keys = EncKeyPair::<G>::generate(&mut rng);
    let text = format!(
        "group {}\nsecret {}\npublic {}\n",
        G::NAME,
        hex::encode(G::encode_scalar(&keys.secret)),
        hex::encode(G::encode_point(&keys.public))
    );
    match out {
        Some(p) => write_out(p, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// Public key plus the secret, when the file carries one.
fn read_key<G: Group>(path: &Path) -> Result<(G::Point, Option<EncKeyPair<G>>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let f = fields(&text);
    if field(&f, "group") != Some(G::NAME) {
        return Err(usage(format!("{} is not a {} key", path.display(), G::NAME)));
    }
    let public = field(&f, "public")
        .and_then(|h| hex::decode(h).ok())
        .and_then(|b| G::decode_point(&b).ok())
        .ok_or_else(|| usage("key file lacks a valid public key"))?;
    let keys = field(&f, "secret")
        .map(|h| {
            let s = hex::decode(h).ok().and_then(|b| G::decode_scalar(&b).ok());
            s.map(EncKeyPair::<G>::from_secret).filter(|k| k.public == public)
        })
        .map(|k| k.ok_or_else(|| usage("key file secret does not match its public key")))
        .transpose()?;
    Ok((public, keys))
}

fn cmd_prove<G: Group>(common: &Common, recipient: Option<&Path>, out: &Path) -> CmdResult {
    let params = SegmentationParams::for_group::<G>(common.segment_bits).map_err(|e| usage(e.to_string()))?;
    let y = match recipient {
        Some(p) => read_key::<G>(p)?.0,
        None => EncKeyPair::<G>::generate(&mut ChaCha20Rng::from_seed(sub_seed(common.seed, Role::P2))).public,
    };
    let mut rng = ChaCha20Rng::from_seed(sub_seed(common.seed, Role::P1));
    let x = random_secret::<G, _>(&params, &mut rng);
    let q = G::mul_base(&x);
    let (mut state, bundle) = encryptor_setup::<G, _>(&x, &q, &y, &params, &mut rng).map_err(|e| reject(e.to_string()))?;
    let mut text = format!(
        "group {}\nsegment-bits {}\nq {}\ny {}\nsetup {}\n",
        G::NAME,
        params.l,
        hex::encode(G::encode_point(&q)),
        hex::encode(G::encode_point(&y)),
        hex::encode(bundle.to_bytes())
    );
    while !state.is_exhausted() {
        let rel = state.release_next(&mut rng).map_err(|e| reject(e.to_string()))?;
        text.push_str(&format!("release {}\n", hex::encode(rel.to_bytes())));
    }
    write_out(out, &text)?;
    println!("wrote setup and {} releases (l = {}) to {}", params.m, params.l, out.display());
    println!("Q = {}", hex::encode(G::encode_point(&q)));
    Ok(0)
}

fn cmd_verify(file: &Path, key: Option<&Path>) -> CmdResult {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let f = fields(&text);
    let group: GroupKind =
        field(&f, "group").ok_or_else(|| reject("missing group line"))?.parse().map_err(reject)?;
    with_group!(group, verify_file(&f, key))
}

fn verify_file<G: Group>(f: &[(&str, &str)], key: Option<&Path>) -> CmdResult {
    let hex_field = |name: &str| -> Result<Vec<u8>, Failure> {
        let h = field(f, name).ok_or_else(|| reject(format!("missing {name} line")))?;
        hex::decode(h).map_err(|_| reject(format!("{name}: bad hex")))
    };
    let point = |name: &str| -> Result<G::Point, Failure> {
        G::decode_point(&hex_field(name)?).map_err(|e| reject(format!("{name}: {e}")))
    };
    let l: u32 = field(f, "segment-bits")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| reject("missing segment-bits line"))?;
    let params = SegmentationParams::for_group::<G>(l).map_err(|e| reject(e.to_string()))?;
    let (q, y) = (point("q")?, point("y")?);
    let keys = match key.map(read_key::<G>).transpose()? {
        None => None,
        Some((_, None)) => return Err(usage("decryption needs a key file with a secret")),
        Some((public, Some(_))) if public != y => {
            return Err(usage("key does not belong to the recipient of this file"))
        }
        Some((_, k)) => k,
    };
    let bundle = SetupBundle::<G>::from_bytes(&hex_field("setup")?).map_err(|e| reject(format!("setup: {e}")))?;
    let mut verifier = Verifier::<G>::new(params, q, y);
    let mut decryptor = keys.as_ref().map(|k| Decryptor::<G>::new(params, k, q)).transpose().map_err(|e| reject(e.to_string()))?;
    verifier.accept_setup(bundle.clone()).map_err(|e| reject(e.to_string()))?;
    if let Some(d) = decryptor.as_mut() {
        d.accept_setup(bundle).map_err(|e| reject(e.to_string()))?;
    }
    for (i, (_, h)) in f.iter().filter(|(k, _)| *k == "release").enumerate() {
        let rel = hex::decode(h)
            .ok()
            .and_then(|b| SegmentRelease::<G>::from_bytes(&b).ok())
            .ok_or_else(|| reject(format!("release {} is malformed", i + 1)))?;
        verifier.accept_release(&rel).map_err(|e| reject(e.to_string()))?;
        if let Some(d) = decryptor.as_mut() {
            d.accept_segment(&rel).map_err(|e| reject(e.to_string()))?;
        }
    }
    if verifier.verified() < params.m {
        return Err(reject(format!("only {} of {} releases present", verifier.verified(), params.m)));
    }
    println!("setup and {} releases verified", params.m);
    if let Some(d) = decryptor {
        let x = d.finish().map_err(|e| reject(e.to_string()))?;
        println!("decrypted x = {} (xG = Q)", hex::encode(G::encode_scalar(&x)));
    }
    Ok(0)
}

fn cmd_swap(a: SwapArgs) -> CmdResult {
    let cfg = SwapConfig {
        group: a.common.group,
        segment_bits: a.common.segment_bits,
        amounts: [a.amount1, a.amount2],
        initial: [a.initial; 2],
        adversary: a.adversary,
        seed: a.common.seed,
        two_party_swap_keys: a.two_party_keys,
        recovery_bits: a.recovery_bits,
        ..SwapConfig::default()
    };
    let out = run_swap(&cfg).map_err(|e| usage(e.to_string()))?;
    if let Some(p) = &a.out {
        write_out(p, &out.transcript.to_text())?;
    }
    let b = &out.balances;
    println!("group {} l={} adversary {} seed {}", cfg.group, cfg.segment_bits, cfg.adversary, cfg.seed);
    println!("final step: {}", out.step);
    println!("balances:");
    println!("  P1  in (b1) {:>6}  out (b2) {:>6}", b.inputs[0], b.outputs[0]);
    println!("  P2  in (b2) {:>6}  out (b1) {:>6}", b.inputs[1], b.outputs[1]);
    println!("  a1 (b1) {:>6}  a2 (b2) {:>6}", b.swap[0], b.swap[1]);
    println!("  S  (b1) {:>6}  S  (b2) {:>6}", b.provider[0], b.provider[1]);
    let r = &out.report;
    println!(
        "fairness: P1 decrypted {} / P2 decrypted {} segments, advantage {}",
        r.decrypted[0], r.decrypted[1], r.advantage
    );
    println!("withdrawn: P1 {} P2 {}", r.withdrawn[0], r.withdrawn[1]);
    if !out.revoked.is_empty() {
        let names: Vec<String> = out.revoked.iter().map(ToString::to_string).collect();
        println!("provider revoked: {}", names.join(", "));
    }
    println!("messages: {} frames, {} payload bytes", out.transcript.len(), out.transcript.message_bytes());
    for c in &out.chains {
        println!("chain {}: {} transactions, supply {}", c.chain_id, c.tx_count, c.supply);
    }
    println!("footprint: a completed swap is one deposit and one withdraw per chain");
    match &out.step {
        Step::Aborted(abort) => {
            println!("aborted: {abort}");
            Ok(EXIT_REJECT)
        }
        _ => Ok(0),
    }
}

fn cmd_sweep(common: &Common, amounts: [u64; 2]) -> CmdResult {
    let cfg = SwapConfig {
        group: common.group,
        segment_bits: common.segment_bits,
        amounts,
        seed: common.seed,
        ..SwapConfig::default()
    };
    let rows = abort_sweep(&cfg).map_err(|e| usage(e.to_string()))?;
    println!("{:<6} {:>3} {:>6} {:>6} {:>9}", "party", "k", "P1", "P2", "advantage");
    let mut worst = 0;
    for row in &rows {
        let r = &row.report;
        println!("{:<6} {:>3} {:>6} {:>6} {:>9}", row.party.to_string(), row.k, r.decrypted[0], r.decrypted[1], r.advantage);
        worst = worst.max(r.advantage);
    }
    println!("max advantage {worst} over {} runs", rows.len());
    Ok(if worst <= 1 { 0 } else { EXIT_REJECT })
}

fn cmd_audit(path: &Path) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let t = Transcript::parse(&text).map_err(|e| usage(e.to_string()))?;
    match audit_transcript(&t).map_err(|e| usage(e.to_string()))? {
        Verdict::Clean => {
            println!("clean");
            Ok(0)
        }
        v => {
            println!("{v}");
            Ok(EXIT_REJECT)
        }
    }
}
