//! Phase-sum table by recurrence.
use gabor_hrt_lab::dioph::phase_sums;

fn main() {
    let b = [0.5, 2f64.sqrt(), 1.75, -0.3];
    for alpha in [0.0, 0.37] {
        let t = phase_sums(&b, alpha);
        println!("α = {alpha}");
        for n in 1..=t.m() {
            let row: Vec<String> = (0..n).map(|m| format!("{:+.4}{:+.4}i", t.get(n, m).re, t.get(n, m).im)).collect();
            println!("  B_{n}: {}", row.join("  "));
        }
    }
}
