use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pecr::conjecture::{generate_conjectures, TemplateGroup};
use pecr::corpus::shipped;
use pecr::semantics::soundness_check;
use pecr::{Ap, MachParams};

fn mach(parallel: bool) -> MachParams {
    MachParams { parallel, ..MachParams::default() }
}

fn soundness(c: &mut Criterion) {
    let rules: Vec<_> = shipped().entries.into_iter().map(|e| e.rule).collect();
    let mut g = c.benchmark_group("corpus_soundness");
    g.sample_size(10);
    for parallel in [false, true] {
        let m = mach(parallel);
        g.bench_with_input(BenchmarkId::from_parameter(if parallel { "parallel" } else { "sequential" }), &m, |b, m| {
            b.iter(|| rules.iter().map(|r| soundness_check(r, m).unwrap().witness_count).sum::<u64>())
        });
    }
    g.finish();
}

fn generation(c: &mut Criterion) {
    let group = TemplateGroup::new(1).with_names(&[Ap::Add, Ap::Add]);
    let mut g = c.benchmark_group("generate_one_row_add");
    g.sample_size(10);
    for parallel in [false, true] {
        let m = mach(parallel);
        g.bench_with_input(BenchmarkId::from_parameter(if parallel { "parallel" } else { "sequential" }), &m, |b, m| {
            b.iter(|| generate_conjectures(&group, m).survivors.len())
        });
    }
    g.finish();
}

criterion_group!(benches, soundness, generation);
criterion_main!(benches);
