use matchaug_core::oracle;
use matchaug_core::pipeline::solve;
fn main() {
    for k in 1..=3u32 {
        let g = oracle::gen_prop19(k);
        let r = solve(&g).unwrap();
        println!("k={k}: cost={} lb={} leaves={}", r.cost, r.lower_bound, r.leaves.len());
        for (i, leaf) in r.leaves.iter().enumerate() {
            println!("  leaf {i}: n={} tau={} cost={}", leaf.n_nodes, leaf.tau, leaf.cost);
            for it in &leaf.iterations {
                println!("    {:?} {:?} bought={:?} sold={:?} pot={}", it.phase, it.case_tag, it.bought, it.sold, it.pot_to_root);
            }
        }
    }
}
