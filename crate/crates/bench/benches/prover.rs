use criterion::{black_box, criterion_group, criterion_main, Criterion};
use itl::morphism::find_strong_morphism;
use itl::proof::{check_proof, extract_proof};
use itl::{countermodel, prove};
use itlprove_bench::{load, CORPUS};

fn bench_prove(c: &mut Criterion) {
    let mut group = c.benchmark_group("prove");
    for entry in CORPUS {
        let (tree, logic) = load(entry);
        group.bench_function(entry.0, |b| b.iter(|| prove(black_box(&tree), logic).unwrap()));
    }
    group.finish();
}

fn bench_certificates(c: &mut Criterion) {
    let mut group = c.benchmark_group("certificates");
    for entry in CORPUS {
        let (tree, logic) = load(entry);
        let verdict = prove(&tree, logic).unwrap();
        if verdict.provable {
            let proof = extract_proof(&verdict).unwrap();
            group.bench_function(format!("check_proof/{}", entry.0), |b| {
                b.iter(|| check_proof(black_box(&proof), logic).is_ok())
            });
        } else {
            group.bench_function(format!("extract_model/{}", entry.0), |b| {
                b.iter(|| countermodel::countermodel(black_box(&verdict)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_morphisms(c: &mut Criterion) {
    let g = itl::SeqTree::parse("a |- (f)[|- (b)[b |-]], (b)[|-], (f)[|-], (b)[|-], (f)[|- p]").unwrap();
    let h = itl::SeqTree::parse("a |- (f)[|- (b)[b |-]], (b)[|-], (f)[|- p]").unwrap();
    c.bench_function("find_strong_morphism", |b| {
        b.iter(|| find_strong_morphism(black_box(&g), black_box(&h)))
    });
}

criterion_group!(benches, bench_prove, bench_certificates, bench_morphisms);
criterion_main!(benches);
