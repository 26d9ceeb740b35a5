use htlie_core::*;
use rand::prelude::*;
use rand::rngs::StdRng;
use std::time::Instant;

/// Enumerates one signature given by command-line `r [s] [stress-rounds]`,
/// printing the class summary, the published-table match, and timing.  With
/// a stress round count, every class representative is relabelled by random
/// block-preserving permutations and re-canonicalised, checking that the
/// canonical form is constant on the equivalence class.
fn main() {
    let mut args = std::env::args().skip(1);
    let r: u32 = args.next().expect("usage: rprobe R [S] [STRESS]").parse().unwrap();
    let s: u32 = args.next().map(|v| v.parse().unwrap()).unwrap_or(0);
    let stress: u32 = args.next().map(|v| v.parse().unwrap()).unwrap_or(0);
    let sig = Signature::new(r, s).unwrap();
    let t = Instant::now();
    let mut report = enumerate_maximal(sig);
    println!(
        "({r},{s}): ell={} classes={} by_pi0={:?} in {:.2?}",
        report.ell,
        report.classes.len(),
        report.counts_by_pi0(),
        t.elapsed()
    );
    match match_paper_tables(&mut report) {
        Ok(()) => {
            let pairs: Vec<String> = report
                .classes
                .iter()
                .map(|c| format!("{}={}", c.id, c.paper_label.as_deref().unwrap_or("?")))
                .collect();
            println!("match: ok [{}]", pairs.join(", "));
        }
        Err(e) => println!("match: MISMATCH {e}"),
    }
    for class in &report.classes {
        // Union support of the weight-3 codewords: a cheap invariant that
        // separates classes even when their weight enumerators coincide.
        let w3_union: Support = class
            .canonical_code
            .codewords()
            .into_iter()
            .filter(|w| w.count_ones() == 3)
            .fold(0, |acc, w| acc | w);
        println!(
            "  {}: pi0={} supp={} t2={} w3supp={} wt={:?} {:?}",
            class.id,
            class.pi0,
            class.stats.supp_size,
            class.stats.is_t2_type,
            w3_union.count_ones(),
            class.stats.block_weight_enumerators,
            class.canonical_basis_strings(),
        );
    }
    if stress > 0 {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let n = sig.n() as usize;
        for class in &report.classes {
            for round in 0..stress {
                let mut map: Vec<u32> = (0..n as u32).collect();
                map[..r as usize].shuffle(&mut rng);
                map[r as usize..].shuffle(&mut rng);
                let perm = ColPerm::from_map(map);
                let permuted = apply_perm(&class.canonical_code, &perm);
                let back = canonical_form(&permuted);
                assert_eq!(
                    back, class.canonical_code,
                    "class {} not stable under relabelling (round {round})",
                    class.id
                );
            }
            println!("stress: {} stable under {} relabellings", class.id, stress);
        }
    }
}
