use matchaug_core::oracle;
use matchaug_core::pipeline::solve;
fn main() {
    let g = oracle::gen_random(10, 0.25, 125).unwrap();
    println!("n={} m={}", g.node_count(), g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        println!("  {i}: {}-{} c{}", e.u, e.v, e.cost);
    }
    match solve(&g) {
        Ok(r) => println!("ok cost {}", r.cost),
        Err(e) => println!("ERR: {e}"),
    }
}
