use breakup::phase::PhaseContext;
use breakup::profile::{locate_catastrophe, InitialProfile};
use std::time::Instant;

fn main() {
    let p = InitialProfile::sech2();
    let cp = locate_catastrophe(&p).unwrap();
    let ctx = PhaseContext::new(&p, &cp).unwrap();
    let (x, t) = (cp.x_c, cp.t_c);
    // warm the cache
    let t0 = Instant::now();
    let _ = ctx.g_function(-0.9, x, t).unwrap();
    println!("first call (cache build): {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = ctx.g_function(-0.9, x, t).unwrap();
    println!("second call: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = ctx.g_function(cp.u_c + 0.2, x, t).unwrap();
    println!("pv call: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = ctx.rho(-0.5).unwrap();
    println!("one direct rho: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = ctx.phi(-0.8, x, t).unwrap();
    println!("one phi: {:?}", t0.elapsed());
}
