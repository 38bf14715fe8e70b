//! Parallel-vs-sequential comparison on the crate's heavy map workloads.
//!
//! Each group runs the identical closure through `exec::map` (rayon when the
//! default `parallel` feature is on) and `exec::map_seq`, so the numbers
//! isolate the fan-out overhead against the per-item cost. Results are exact
//! and order-preserving on both paths, so the outputs are interchangeable.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use weylstar::moyal::{self, BracketKind};
use weylstar::multi_index::{monomials_of_degree, monomials_up_to_degree};
use weylstar::operators::{reconstruct_diffop, LinOp, SpecialOp};
use weylstar::poly::Poly;
use weylstar::scalar::Scalar;
use weylstar::trace::{iw_numeric, SummationPolicy, TraceInput};
use weylstar::{exec, MultiIndex, VarKind};

/// All ⋆-products over a pair of homogeneous monomial bases (n = 2): the
/// inner loop of Gram matrices and degree-image rank checks.
fn star_table(c: &mut Criterion) {
    let kind = VarKind::Symplectic { pairs: 2 };
    let left: Vec<Poly> = monomials_of_degree(4, 3)
        .into_iter()
        .map(|m| Poly::monomial(kind, m, Scalar::from_int(1)))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|a| (0..left.len()).map(move |b| (a, b)))
        .collect();
    let work = |&(a, b): &(usize, usize)| moyal::star(&left[a], &left[b]);

    let mut group = c.benchmark_group("star_table");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(black_box(&pairs), work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(black_box(&pairs), work)))
    });
    group.finish();
}

/// The supertrace table Str(P^I ⋆ Q^J) over all |I|, |J| ≤ 4 (n = 2).
fn supertrace_table(c: &mut Criterion) {
    let kind = VarKind::Symplectic { pairs: 2 };
    let orders = monomials_up_to_degree(2, 4);
    let to_power = |m: &MultiIndex, offset: usize| {
        let mut exps = vec![0u32; 4];
        for v in 0..2 {
            exps[offset + v] = m.get(v);
        }
        Poly::monomial(kind, MultiIndex::new(exps), Scalar::from_int(1))
    };
    let pairs: Vec<(Poly, Poly)> = orders
        .iter()
        .flat_map(|i| orders.iter().map(|j| (to_power(i, 0), to_power(j, 2))))
        .collect();
    let work = |(pi, qj): &(Poly, Poly)| moyal::star(pi, qj).eval_zero();

    let mut group = c.benchmark_group("supertrace_table");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(black_box(&pairs), work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(black_box(&pairs), work)))
    });
    group.finish();
}

/// Super brackets of S² against the S⁶ basis (n = 2): the spanning-check
/// workload behind the decomposition reports.
fn bracket_image(c: &mut Criterion) {
    let kind = VarKind::Symplectic { pairs: 2 };
    let s2: Vec<Poly> = monomials_of_degree(4, 2)
        .into_iter()
        .map(|m| Poly::monomial(kind, m, Scalar::from_int(1)))
        .collect();
    let s6: Vec<Poly> = monomials_of_degree(4, 6)
        .into_iter()
        .map(|m| Poly::monomial(kind, m, Scalar::from_int(1)))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..s2.len())
        .flat_map(|a| (0..s6.len()).map(move |b| (a, b)))
        .collect();
    let work = |&(a, b): &(usize, usize)| moyal::bracket(BracketKind::Super, &s2[a], &s6[b]);

    let mut group = c.benchmark_group("bracket_image");
    group.sample_size(20);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(exec::map(black_box(&pairs), work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::map_seq(black_box(&pairs), work)))
    });
    group.finish();
}

/// Whole-pipeline comparison: the graded transform of a dilation operator,
/// whose per-batch and per-order maps route through `exec::map` internally.
fn transform_pipeline(c: &mut Criterion) {
    let op = LinOp::special(
        2,
        SpecialOp::S {
            lambda: Scalar::from_ratio(1, 2),
        },
    )
    .unwrap();
    let policy = SummationPolicy::default();

    let mut group = c.benchmark_group("transform_pipeline");
    group.sample_size(10);
    group.bench_function("iw_numeric_deg8_n2", |b| {
        b.iter(|| black_box(iw_numeric(TraceInput::Op(black_box(&op)), 8, &policy).unwrap()))
    });
    group.bench_function("reconstruct_deg10_n2", |b| {
        b.iter(|| black_box(reconstruct_diffop(black_box(&op), 10).unwrap()))
    });
    group.finish();
}

criterion_group!(
    benches,
    star_table,
    supertrace_table,
    bracket_image,
    transform_pipeline
);
criterion_main!(benches);
