use std::time::Instant;
use ginv::convex::{solve, IpmOptions};
use ginv::formulations::GinvFormulation;
use ginv::linalg::DenseMatrix;
use rand::{Rng, SeedableRng};

fn main() {
    let mut fails = 0;
    let mut total = 0;
    let t0 = Instant::now();
    for seed in [42u64, 7, 123, 2024] {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _trial in 0..10 {
            let left = DenseMatrix::from_fn(10, 5, |_, _| rng.gen_range(-1.0..1.0));
            let right = DenseMatrix::from_fn(5, 10, |_, _| rng.gen_range(-1.0..1.0));
            let a = left.mul(&right);
            let form = GinvFormulation::new(a).unwrap();
            for (name, p) in [
                ("p13", form.build_p13()),
                ("p123", form.build_p123()),
                ("frob.5", form.build_penalty_frob_qp(0.5)),
                ("frob50", form.build_penalty_frob_qp(50.0)),
                ("frob5e4", form.build_penalty_frob_qp(5e4)),
                ("pl1", form.build_penalty_l1_lp(0.05)),
                ("pl1b", form.build_penalty_l1_lp(5.0)),
                ("pl1c", form.build_penalty_l1_lp(0.0)),
            ] {
                total += 1;
                let sol = solve(&p, &IpmOptions::default());
                if !sol.is_optimal() {
                    println!("seed {seed} trial {_trial} {name}: {:?} iters={}", sol.status.kind, sol.status.iterations);
                    fails += 1;
                }
            }
        }
    }
    println!("fails: {fails}/{total}  total {:.1}s", t0.elapsed().as_secs_f64());
}
