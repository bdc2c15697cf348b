use tcf_core::petersson::{self, QuadratureConfig};

fn main() {
    let base = QuadratureConfig { refine: false, ..QuadratureConfig::default() };
    let g1 = petersson::gram(12, &base).unwrap().matrix[(0, 0)].re;
    let g2 = petersson::gram(12, &base.doubled()).unwrap().matrix[(0, 0)].re;
    println!("w12 base={g1:.16e} doubled rel={:.3e} vs oracle rel={:.3e}",
        ((g2-g1)/g1).abs(), ((g1 - 1.0353620568043209e-6)/1.0353620568043209e-6).abs());
    for n in [2u64, 3, 5, 7] {
        let coarse = QuadratureConfig { nu: 16, nv: 16, qprec: 40, refine: false, ..QuadratureConfig::default() };
        let rc = petersson::self_adjointness_residual(24, n, &coarse).unwrap();
        let rd = petersson::self_adjointness_residual(24, n, &base).unwrap();
        let rf = petersson::self_adjointness_residual(24, n, &base.doubled()).unwrap();
        println!("k=24 n={n}: coarse={rc:.3e} default={rd:.3e} doubled={rf:.3e}");
    }
}
