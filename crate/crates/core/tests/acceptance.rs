// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use juggling::elgamal::{encrypt, EncKeyPair};
use juggling::group::{Group, Secp256k1, ToyGroup, TOY_ORDER};
use juggling::juggling::attack::{biased_setup, Bias};
use juggling::juggling::{encryptor_setup, verify_setup, Decryptor};
use juggling::segmentation::{random_secret, SegmentationParams};
use juggling::sigma::{
    self, Ddh, DdhStatement, Enc, EncDlog, EncDlogStatement, EncStatement, SigmaProtocol,
};
use juggling::swap::transcript::KIND_TX;
use juggling::swap::{abort_sweep, run_swap, Adversary, Party, Role, Step, SwapConfig, SwapOutcome};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 9] = [
        ("secp256k1 session at l=8, m=32 under 10s", secp256k1_l8_run),
        ("toy decryption matches brute-force dlog", oracle_equivalence),
        ("biased segments rejected 1000/1000", biased_segment_rejection),
        ("sigma completeness, extraction, simulation", sigma_properties),
        ("abort sweep advantage at most one", fairness_bound),
        ("honest swap moves both deposits", swap_correctness),
        ("no party gains under any adversary", no_steal),
        ("two transactions per chain", footprint),
        ("seeded run matches golden transcript", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(note) => println!("criterion {} PASS  {name} ({note}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn secp256k1_l8_run() -> Result<String, String> {
    let mut rng = rng(1);
    let params = SegmentationParams::for_group::<Secp256k1>(8).map_err(|e| e.to_string())?;
    ensure!(params.m == 32, "m = {}", params.m);
    let keys = EncKeyPair::<Secp256k1>::generate(&mut rng);
    let x = random_secret::<Secp256k1, _>(&params, &mut rng);
    let q = Secp256k1::mul_base(&x);

    let start = Instant::now();
    let (mut enc, bundle) = encryptor_setup(&x, &q, &keys.public, &params, &mut rng).map_err(|e| e.to_string())?;
    let mut dec = Decryptor::<Secp256k1>::new(params, &keys, q).map_err(|e| e.to_string())?;
    dec.accept_setup(bundle).map_err(|e| e.to_string())?;
    let mut releases = 0;
    while !enc.is_exhausted() {
        let rel = enc.release_next(&mut rng).map_err(|e| e.to_string())?;
        dec.accept_segment(&rel).map_err(|e| e.to_string())?;
        releases += 1;
    }
    let got = dec.finish().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure!(releases == 32, "{releases} releases");
    ensure!(got == x && Secp256k1::mul_base(&got) == q, "wrong secret");
    ensure!(dec.bsgs_table_len() == 16, "baby-step table has {} entries", dec.bsgs_table_len());
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{:.0} ms, 16-entry table", elapsed.as_secs_f64() * 1e3))
}

fn oracle_equivalence() -> Result<String, String> {
    let mut rng = rng(2);
    let mut cases = Vec::new();
    for i in 0..120 {
        let l = [2, 3, 4, 5, 7, 10][i % 6];
        let params = SegmentationParams::for_group::<ToyGroup>(l).map_err(|e| e.to_string())?;
        let keys = EncKeyPair::<ToyGroup>::generate(&mut rng);
        let x = random_secret::<ToyGroup, _>(&params, &mut rng);
        let q = ToyGroup::mul_base(&x);
        let (mut enc, bundle) = encryptor_setup(&x, &q, &keys.public, &params, &mut rng).map_err(|e| e.to_string())?;
        let mut dec = Decryptor::<ToyGroup>::new(params, &keys, q).map_err(|e| e.to_string())?;
        dec.accept_setup(bundle).map_err(|e| e.to_string())?;
        while !enc.is_exhausted() {
            dec.accept_segment(&enc.release_next(&mut rng).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        }
        cases.push((q, dec.finish().map_err(|e| e.to_string())?));
    }
    // one linear walk over the whole group answers every query
    let mut want: HashMap<Vec<u8>, Option<u64>> =
        cases.iter().map(|(q, _)| (ToyGroup::encode_point(q), None)).collect();
    let mut p = ToyGroup::identity();
    for k in 0..TOY_ORDER {
        if let Some(slot) = want.get_mut(&ToyGroup::encode_point(&p)) {
            slot.get_or_insert(k);
        }
        p = p + ToyGroup::generator();
    }
    for (q, x) in &cases {
        let dlog = want[&ToyGroup::encode_point(q)].ok_or("point not in group")?;
        ensure!(*x == ToyGroup::scalar_from_u64(dlog), "decrypted {x:?}, brute force {dlog}");
    }
    Ok(format!("{} keys", cases.len()))
}

fn biased_segment_rejection() -> Result<String, String> {
    let mut rng = rng(3);
    let mut rejected = 0;
    for trial in 0..1000 {
        let l = [2, 3, 4, 5, 8][trial % 5];
        let params = SegmentationParams::for_group::<ToyGroup>(l).map_err(|e| e.to_string())?;
        let keys = EncKeyPair::<ToyGroup>::generate(&mut rng);
        let x = random_secret::<ToyGroup, _>(&params, &mut rng);
        let q = ToyGroup::mul_base(&x);
        let bias = if trial % 4 == 0 {
            Bias::<ToyGroup>::adjacent(&params, rng.gen_range(0..params.m - 1))
        } else {
            Bias::random(&params, &mut rng)
        };
        let (_, bundle) = biased_setup(&x, &q, &keys.public, &params, &bias, &mut rng).map_err(|e| e.to_string())?;
        if !verify_setup(&bundle, &q, &keys.public, &params) {
            rejected += 1;
        }
    }
    ensure!(rejected == 1000, "only {rejected}/1000 rejected on the toy group");

    let params = SegmentationParams::for_group::<Secp256k1>(8).map_err(|e| e.to_string())?;
    let keys = EncKeyPair::<Secp256k1>::generate(&mut rng);
    for _ in 0..10 {
        let x = random_secret::<Secp256k1, _>(&params, &mut rng);
        let q = Secp256k1::mul_base(&x);
        let bias = Bias::<Secp256k1>::random(&params, &mut rng);
        let (_, bundle) = biased_setup(&x, &q, &keys.public, &params, &bias, &mut rng).map_err(|e| e.to_string())?;
        ensure!(!verify_setup(&bundle, &q, &keys.public, &params), "secp256k1 biased bundle accepted");
    }
    Ok("1000 toy + 10 secp256k1".into())
}

/// Completeness, special soundness and HVZK for one protocol over 1000
/// random instances. `instance` returns a statement, its witness and a
/// relation check for extracted witnesses.
fn sigma_battery<G: Group, P: SigmaProtocol<G>>(
    rng: &mut ChaCha20Rng,
    instance: impl Fn(&mut ChaCha20Rng) -> (P::Statement, P::Witness),
    holds: impl Fn(&P::Statement, &P::Witness) -> bool,
) -> Result<(), String> {
    for i in 0..1000 {
        let (stmt, w) = instance(rng);
        let proof = sigma::prove::<G, P, _>(&stmt, &w, rng);
        ensure!(sigma::verify(&stmt, &proof), "honest proof {i} rejected");

        let (commitment, nonce) = P::commit(&stmt, rng);
        let e1 = G::random_scalar(rng);
        let e2 = G::random_scalar(rng);
        let (z1, z2) = (P::respond(&w, &nonce, &e1), P::respond(&w, &nonce, &e2));
        ensure!(
            P::verify_with_challenge(&stmt, &commitment, &e1, &z1) && P::verify_with_challenge(&stmt, &commitment, &e2, &z2),
            "forked transcript {i} rejected"
        );
        if e1 != e2 {
            let got = P::extract((&e1, &z1), (&e2, &z2)).map_err(|e| e.to_string())?;
            ensure!(holds(&stmt, &got), "extracted witness {i} fails the relation");
        }

        let e = G::random_scalar(rng);
        let (c, z) = P::simulate(&stmt, &e, rng);
        ensure!(P::verify_with_challenge(&stmt, &c, &e, &z), "simulated transcript {i} rejected");
    }
    Ok(())
}

fn sigma_suite<G: Group>(rng: &mut ChaCha20Rng) -> Result<(), String> {
    sigma_battery::<G, Ddh<G>>(
        rng,
        |rng| {
            let x = G::random_scalar(rng);
            let g1 = G::mul_base(&G::random_scalar(rng));
            let g2 = G::mul_base(&G::random_scalar(rng));
            (DdhStatement { g1, h1: G::mul(&g1, &x), g2, h2: G::mul(&g2, &x) }, x)
        },
        |s, x| s.h1 == G::mul(&s.g1, x) && s.h2 == G::mul(&s.g2, x),
    )
    .map_err(|e| format!("ddh: {e}"))?;
    sigma_battery::<G, Enc<G>>(
        rng,
        |rng| {
            let y = G::mul_base(&G::random_scalar(rng));
            let v = G::random_scalar(rng);
            let c = encrypt::<G, _>(&v, &y, rng);
            (EncStatement { y, d: c.ct.d, e: c.ct.e }, (v, c.randomness))
        },
        |s, (v, r)| s.d == G::mul_base(v) + G::mul(&s.y, r) && s.e == G::mul_base(r),
    )
    .map_err(|e| format!("enc: {e}"))?;
    sigma_battery::<G, EncDlog<G>>(
        rng,
        |rng| {
            let y = G::mul_base(&G::random_scalar(rng));
            let x = G::random_scalar(rng);
            let c = encrypt::<G, _>(&x, &y, rng);
            (EncDlogStatement { y, q: G::mul_base(&x), d: c.ct.d, e: c.ct.e }, (x, c.randomness))
        },
        |s, (x, r)| s.q == G::mul_base(x) && s.d == G::mul_base(x) + G::mul(&s.y, r) && s.e == G::mul_base(r),
    )
    .map_err(|e| format!("encdlog: {e}"))
}

fn sigma_properties() -> Result<String, String> {
    let mut rng = rng(4);
    sigma_suite::<Secp256k1>(&mut rng).map_err(|e| format!("secp256k1 {e}"))?;
    sigma_suite::<ToyGroup>(&mut rng).map_err(|e| format!("toy {e}"))?;
    Ok("3 protocols x 1000 on both groups".into())
}

fn fairness_bound() -> Result<String, String> {
    let mut runs = 0;
    let mut ones = 0;
    for l in [2, 3, 4, 5] {
        let base = SwapConfig { segment_bits: l, ..SwapConfig::default() };
        let m = base.validate().map_err(|e| e.to_string())?.m;
        let rows = abort_sweep(&base).map_err(|e| e.to_string())?;
        ensure!(rows.len() == 2 * (m + 1), "sweep at l={l} has {} rows", rows.len());
        for row in rows {
            ensure!(row.report.advantage <= 1, "{} abort at {} (l={l}): advantage {}", row.party, row.k, row.report.advantage);
            ensure!(matches!(row.step, Step::Aborted(_)), "{} abort at {} did not abort", row.party, row.k);
            runs += 1;
            ones += usize::from(row.report.advantage == 1);
        }
    }
    Ok(format!("{runs} runs, {ones} with advantage 1"))
}

fn conservation(out: &SwapOutcome, cfg: &SwapConfig) -> Result<(), String> {
    let b = &out.balances;
    // chain 1 holds P1's input, a_1, P2's output and the provider's address
    let on_b1 = b.inputs[0] + b.swap[0] + b.outputs[1] + b.provider[0];
    let on_b2 = b.inputs[1] + b.swap[1] + b.outputs[0] + b.provider[1];
    ensure!(on_b1 == cfg.initial[0] && on_b2 == cfg.initial[1], "tracked balances {on_b1}/{on_b2}");
    ensure!(
        out.chains[0].supply == u128::from(cfg.initial[0]) && out.chains[1].supply == u128::from(cfg.initial[1]),
        "supply changed"
    );
    Ok(())
}

fn swap_correctness() -> Result<String, String> {
    for cfg in [
        SwapConfig::default(),
        SwapConfig { amounts: [1, 99], initial: [5, 99], seed: 9, ..SwapConfig::default() },
        SwapConfig { group: juggling::group::GroupKind::Secp256k1, segment_bits: 16, ..SwapConfig::default() },
    ] {
        let out = run_swap(&cfg).map_err(|e| e.to_string())?;
        let [c1, c2] = cfg.amounts;
        let b = &out.balances;
        ensure!(out.step == Step::Done, "ended at {}", out.step);
        ensure!(b.outputs == [c2, c1], "outputs {:?}", b.outputs);
        ensure!(b.inputs == [cfg.initial[0] - c1, cfg.initial[1] - c2], "inputs {:?}", b.inputs);
        ensure!(b.swap == [0, 0], "swap addresses hold {:?}", b.swap);
        ensure!(out.report.advantage == 0, "advantage {}", out.report.advantage);
        conservation(&out, &cfg)?;
    }
    Ok("toy l=4, toy seed 9, secp256k1 l=16".into())
}

fn all_scripts(m: usize) -> Vec<Adversary> {
    let mut v = vec![Adversary::None, Adversary::ProviderWithhold, Adversary::ProviderPartialSign];
    for party in Party::BOTH {
        v.push(Adversary::BiasedSegments(party));
        for k in 0..=m {
            v.push(Adversary::AbortAtSegment { k, party });
            if k > 0 {
                v.push(Adversary::CorruptProof { k, party });
            }
        }
    }
    v
}

fn no_steal() -> Result<String, String> {
    let mut runs = 0;
    for (l, recovery_bits) in [(4, 0), (4, 3), (3, 0)] {
        let base = SwapConfig { segment_bits: l, recovery_bits, ..SwapConfig::default() };
        let m = base.validate().map_err(|e| e.to_string())?.m;
        for adversary in all_scripts(m) {
            let cfg = SwapConfig { adversary, ..base.clone() };
            let out = run_swap(&cfg).map_err(|e| e.to_string())?;
            let b = &out.balances;
            ensure!(b.provider == [0, 0], "{adversary}: provider holds {:?}", b.provider);
            for p in Party::BOTH {
                let cap = cfg.initial[p.index()] + cfg.amounts[p.other().index()];
                ensure!(b.holdings(p) <= cap, "{adversary}: {p} holds {} > {cap}", b.holdings(p));
            }
            conservation(&out, &cfg).map_err(|e| format!("{adversary}: {e}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} scripted runs"))
}

fn footprint() -> Result<String, String> {
    let out = run_swap(&SwapConfig::default()).map_err(|e| e.to_string())?;
    for (i, chain) in [Role::Chain1, Role::Chain2].into_iter().enumerate() {
        let n = out.transcript.count(chain, KIND_TX);
        ensure!(n == 2 && out.chains[i].tx_count == 2, "chain {} has {n} transactions", i + 1);
    }
    let cli = Command::new(env!("CARGO_BIN_EXE_juggle"))
        .args(["swap", "--group", "toy", "--segment-bits", "4", "--seed", "1"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&cli.stdout);
    ensure!(cli.status.success(), "cli exited with {}", cli.status);
    for id in [1, 2] {
        ensure!(stdout.contains(&format!("chain {id}: 2 transactions")), "cli report lacks chain {id} count");
    }
    Ok("2 + 2, reported by the cli".into())
}

fn determinism() -> Result<String, String> {
    let golden = include_str!("data/golden_honest_toy.txt");
    let text = run_swap(&SwapConfig::default()).map_err(|e| e.to_string())?.transcript.to_text();
    ensure!(text == golden, "transcript differs from the golden file");
    let again = run_swap(&SwapConfig::default()).map_err(|e| e.to_string())?.transcript.to_text();
    ensure!(text == again, "two runs differ");
    Ok(format!("{} lines", golden.lines().count()))
}
