use laguerre_calc::quad::HalfLineRule;
use laguerre_calc::special::laguerre_basis_row;

fn main() {
    for &nu in &[-0.9f64, -0.5, 0.0, 1.3] {
        for &pts in &[1024usize, 2048, 4096] {
            let rule = HalfLineRule::new(HalfLineRule::basis_upper(32, nu, 1), 2.0 * nu + 1.0, pts).unwrap();
            let mut gram = vec![0.0f64; 33 * 33];
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let row = laguerre_basis_row(32, nu, x).unwrap();
                for i in 0..=32 {
                    for j in i..=32 {
                        gram[i * 33 + j] += w * row[i] * row[j];
                    }
                }
            }
            let mut worst: f64 = 0.0;
            for i in 0..=32 {
                for j in i..=32 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((gram[i * 33 + j] - expect).abs());
                }
            }
            println!("nu={nu} pts={pts}: max deviation {worst:.3e}");
        }
    }
}
