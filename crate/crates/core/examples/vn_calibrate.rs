// Calibration for the numeric domination check sizes (scratch).
use rwslab_core::law::WeightLaw;
use rwslab_core::sample::{sample_weights, stream_for, stream_rng};
use rwslab_core::shift::FreePolynomial;
use rwslab_core::vonneumann::{example_fixture, numeric_domination_check};

fn random_polys(seed: u64, count: usize, max_deg: usize) -> Vec<FreePolynomial> {
    use rand::Rng;
    use rwslab_core::freepoly::Letter;
    let mut rng = stream_rng(seed, stream_for("vn-random-polys", 0));
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            FreePolynomial::new(
                (0..terms)
                    .map(|_| {
                        let len = rng.gen_range(0..=max_deg);
                        let word: Vec<Letter> = (0..len)
                            .map(|_| if rng.gen::<bool>() { Letter::S } else { Letter::Star })
                            .collect();
                        (
                            word,
                            num_complex::Complex64::new(2.0 * rng.gen::<f64>() - 1.0, 0.0),
                        )
                    })
                    .collect(),
            )
        })
        .collect()
}

fn main() {
    let law = WeightLaw::FiniteDiscrete {
        atoms: vec![0.0, 1.0, 2.0],
        probs: vec![1.0 / 3.0; 3],
    };
    let polys = random_polys(1, 20, 3);
    for &(m, n) in &[(110_000usize, 30_000usize)] {
        let start = std::time::Instant::now();
        for which in 1..=4usize {
            let a = example_fixture(which, &[1.0, 2.0]).unwrap();
            let sample = sample_weights(&law, n, 11, which as u64).unwrap();
            let chk = numeric_domination_check(&a, &sample, &polys, m, n, 1e-3).unwrap();
            let mut worst_at = 0.0f64; // norm_a - norm_t (bad for A ◁ T)
            let mut worst_ta = 0.0f64; // norm_t - norm_a (bad for T ◁ A)
            for c in &chk.comparisons {
                worst_at = worst_at.max(c.norm_a - c.norm_t);
                worst_ta = worst_ta.max(c.norm_t - c.norm_a);
            }
            println!(
                "M={m} N={n} A{which}: worst a-t = {worst_at:.3e}, worst t-a = {worst_ta:.3e}, cex: {} {}",
                chk.counterexamples_a_under_t, chk.counterexamples_t_under_a
            );
        }
        println!("  elapsed {:?}", start.elapsed());
    }
}
