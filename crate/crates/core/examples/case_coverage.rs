use matchaug_core::bridgecover::CaseTag;
use matchaug_core::oracle;
use matchaug_core::pipeline::solve;
use std::collections::BTreeMap;

fn main() {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut solved = 0u64;
    for n in [8u32, 10, 12, 14] {
        for phase_density in [0.25f64, 0.3, 0.35, 0.45] {
            for seed in 0..400u64 {
                let Ok(g) = oracle::gen_random(n, phase_density, seed) else { continue };
                let Ok(r) = solve(&g) else { eprintln!("SOLVE FAILED n={n} d={phase_density} seed={seed}"); continue };
                solved += 1;
                for leaf in &r.leaves {
                    for it in &leaf.iterations {
                        *counts.entry(format!("{:?}/{:?}", it.phase, it.case_tag)).or_default() += 1;
                    }
                }
            }
        }
    }
    println!("solved {solved}");
    for (k, v) in counts {
        println!("{k}: {v}");
    }
    let _ = CaseTag::Case2;
}
