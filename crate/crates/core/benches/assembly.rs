//! Hamiltonian matvecs and supercharge assembly.
//!
//! With the default `parallel` feature each case runs twice, once in a
//! one-thread rayon pool and once in the global pool, so both timings come
//! from the same build. `--no-default-features` benchmarks the plain
//! iterator fallback instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use susyxxz::hamiltonian::ChainHamiltonian;
use susyxxz::operators::{global_supercharge, SuperchargeSpec};
use susyxxz::spectra::Operator;
use susyxxz::C64;

const CASES: &[(usize, usize)] = &[(1, 14), (2, 9), (3, 7)];

fn spec(ell: usize, len: usize) -> SuperchargeSpec {
    SuperchargeSpec::new(ell, len)
        .with_y(C64::new(0.4, 0.3))
        .with_labels(0, ell)
}

fn variants() -> Vec<(&'static str, Box<dyn Fn(&mut (dyn FnMut() + Send))>)> {
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        vec![
            ("rayon-1", Box::new(move |f: &mut (dyn FnMut() + Send)| single.install(|| f()))),
            ("rayon-all", Box::new(|f: &mut (dyn FnMut() + Send)| f())),
        ]
    }
    #[cfg(not(feature = "parallel"))]
    {
        vec![("sequential", Box::new(|f: &mut (dyn FnMut() + Send)| f()))]
    }
}

fn matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("hamiltonian_matvec");
    for &(ell, len) in CASES {
        let h = ChainHamiltonian::new(&spec(ell, len)).unwrap();
        let x: Vec<C64> = (0..h.dim()).map(|i| C64::new((i as f64).sin(), 0.5)).collect();
        let mut out = vec![C64::new(0.0, 0.0); h.dim()];
        for (name, run) in variants() {
            group.bench_function(BenchmarkId::new(name, format!("ell{ell}_L{len}")), |b| {
                b.iter(|| run(&mut || h.apply_into(black_box(&x), &mut out)))
            });
        }
    }
    group.finish();
}

fn supercharge(c: &mut Criterion) {
    let mut group = c.benchmark_group("supercharge_assembly");
    group.sample_size(10);
    for &(ell, len) in CASES {
        let s = spec(ell, len - 1);
        for (name, run) in variants() {
            group.bench_function(BenchmarkId::new(name, format!("ell{ell}_L{}", len - 1)), |b| {
                b.iter(|| run(&mut || drop(black_box(global_supercharge(&s).unwrap()))))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, matvec, supercharge);
criterion_main!(benches);
