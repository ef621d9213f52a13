//! Orders germs at +∞, including a pair that separates only far out.
use gabor_hrt_lab::asym::germ_compare;
use gabor_hrt_lab::expr::{parse, TailConfig};

fn main() {
    let near = TailConfig::default();
    let far = TailConfig { start: 1e3, end: 1e100, points: 8192 };
    for (f, g, cfg) in [("log(x)", "x", near), ("x^2 + 1", "x^2", near), ("log(x)", "x^(1/10)", near), ("log(x)", "x^(1/10)", far)] {
        let r = germ_compare(&parse(f).unwrap(), &parse(g).unwrap(), &cfg);
        println!("{f} vs {g} on [{:e}, {:e}]: {:?}", cfg.start, cfg.end, r.relation);
    }
}
