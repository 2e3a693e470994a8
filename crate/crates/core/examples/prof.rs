use sdsearch_core::bits::{self, BitVec};
use std::ops::ControlFlow;
use std::time::Instant;

fn main() {
    // count DFS candidate volume per depth for the n=12 parity form
    let n = 12;
    let diag = BitVec::ones(n);
    let ident = |v: &BitVec| v.clone();
    for target in 1..=6usize {
        let t0 = Instant::now();
        let mut count = 0u64;
        bits::max_isotropic_dfs(n, target, &ident, &diag, &mut |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        println!("dim {target}: {count} subspaces in {:?}", t0.elapsed());
    }
}
