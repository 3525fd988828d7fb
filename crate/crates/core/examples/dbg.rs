fn main() {
    for x in [1.5f64, 2.0, 3.0] {
        println!("erfc({x}) = {:.17e}", kudla_core::specfun::erfc(x));
    }
    for t in [4.999999999f64, 5.000000001, 5.0, 4.0, 6.0] {
        println!("e1_scaled({t}) = {:.17e}", kudla_core::specfun::e1_scaled(t).unwrap());
    }
    let p = (1.0f64, 1.0f64, 1i64, -1i64);
    println!("quad r^-3/2: {:.15}", kudla_core::quad::adaptive_upper_inf(|r: f64| r.powf(-1.5), 1.0, 0.0, 1e-12).value);
}
