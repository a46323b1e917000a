use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qtransfer_core::analytic::failure_integral;
use qtransfer_core::cavity4::Protocol;
use qtransfer_core::lambda3::stirap_transfer;
use qtransfer_core::pulses::PulseSpec;
use qtransfer_core::scenario::{Cavity4Scenario, Scenario};
use qtransfer_core::sweep::{run_sweep, SweepAxis};
use qtransfer_core::tables::{reproduce_row, Reading, TableKind};
use qtransfer_core::IntegratorConfig;

fn dip() -> Scenario {
    Scenario::Cavity4(Cavity4Scenario {
        protocol: Protocol::Adiabatic,
        omega: PulseSpec::gaussian(2.0, 1.0, 0.0),
        g: PulseSpec::gaussian(2.0, 1.0, 0.0),
        delay: 1.31,
        gamma: 0.0,
        kappa: 0.0,
        target: Default::default(),
        window: None,
    })
}

fn single_runs(c: &mut Criterion) {
    let icfg = IntegratorConfig::default();
    let p1 = PulseSpec::gaussian(20.0, 1.0, 1.2);
    let p2 = PulseSpec::gaussian(20.0, 1.0, 0.0);
    c.bench_function("lambda3 gaussian", |b| b.iter(|| stirap_transfer(black_box(&p1), &p2, 0.0, 0.0, None, &icfg).unwrap()));
    c.bench_function("cavity4 adiabatic", |b| b.iter(|| black_box(dip()).run(&icfg).unwrap()));
    c.bench_function("twoatom density row", |b| {
        b.iter(|| reproduce_row(TableKind::Coherence, black_box(0), Reading::Verbatim, &icfg).unwrap())
    });
    c.bench_function("failure integral", |b| b.iter(|| failure_integral(black_box(&p1), &p2, None).unwrap()));
}

fn sweeps(c: &mut Criterion) {
    let icfg = IntegratorConfig::default();
    let axes = [SweepAxis::new("amp1", 1.8, 2.2, 0.02).unwrap(), SweepAxis::new("delay", 1.1, 1.5, 0.02).unwrap()];
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut g = c.benchmark_group("sweep 21x21");
    g.sample_size(10);
    g.bench_function("1 thread", |b| b.iter(|| run_sweep(&dip(), &axes, 1, &icfg).unwrap()));
    g.bench_function("all threads", |b| b.iter(|| run_sweep(&dip(), &axes, threads, &icfg).unwrap()));
    g.finish();
}

criterion_group!(benches, single_runs, sweeps);
criterion_main!(benches);
