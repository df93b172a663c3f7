use sweeptime::hjcheck::*;
use sweeptime::geometry::Shape;
use sweeptime::scenarios;

fn main() {
    let b = scenarios::example1();
    let plan = SamplePlan { time_samples: 7, space_samples: 21, ..Default::default() };
    let whole = Shape::box_nd(vec![f64::NEG_INFINITY], vec![f64::INFINITY]);
    let report = strong_invariance_check(&b.set, &b.control, &whole, &plan, b.rho, 1e-9).unwrap();
    println!("strong whole: pass={} max={}", report.pass, report.max_value);
    for e in report.entries.iter().filter(|e| !e.pass).take(8) {
        println!("  FAIL tau={} x={:?} p={:?} v={}", e.tau, e.x, e.p, e.value);
    }
    let report = weak_invariance_check(&b.set, &b.control, &whole, &plan, b.rho, 1e-9).unwrap();
    println!("weak whole: pass={} entries={} max={}", report.pass, report.entries.len(), report.max_value);
}
