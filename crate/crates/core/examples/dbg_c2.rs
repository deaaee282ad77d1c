use breakup::phase::{alpha, PhaseContext};
use breakup::profile::{locate_catastrophe, InitialProfile};
use std::time::Instant;

fn main() {
    let p = InitialProfile::sech2();
    let cp = locate_catastrophe(&p).unwrap();
    let ctx = PhaseContext::new(&p, &cp).unwrap();
    let (x, t) = (cp.x_c, cp.t_c);
    let uc = cp.u_c;
    let t0 = Instant::now();
    let mut worst_id = 0.0f64;
    for i in 0..50 {
        let lam = -0.95 + (uc - 0.05 + 0.95) * i as f64 / 49.0;
        let id = (ctx.g_function(lam, x, t).unwrap().re - ctx.rho(lam).unwrap()
            + alpha(lam, x, t)
            - ctx.phi(lam, x, t).unwrap().re)
            .abs();
        worst_id = worst_id.max(id);
    }
    println!("identity sweep: worst {worst_id:.3e} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let mut worst_pg = 0.0f64;
    for i in 0..50 {
        let lam = uc + 0.05 + (-0.02 - uc - 0.05) * i as f64 / 49.0;
        let gp = ctx.g_function(lam, x, t).unwrap();
        let resid = (2.0 * gp.re - 2.0 * ctx.rho(lam).unwrap() + 2.0 * alpha(lam, x, t)).abs();
        worst_pg = worst_pg.max(resid);
    }
    println!("prop-g sweep: worst {worst_pg:.3e} in {:?}", t0.elapsed());
    let t0 = Instant::now();
    let mut worst_routes = 0.0f64;
    for i in 0..50 {
        let lam = -0.95 + 0.9 * i as f64 / 49.0;
        let d = (ctx.phi(lam, x, t).unwrap() - ctx.phi_alt(lam, x, t).unwrap()).norm();
        worst_routes = worst_routes.max(d);
    }
    println!("phi routes sweep: worst {worst_routes:.3e} in {:?}", t0.elapsed());
}
