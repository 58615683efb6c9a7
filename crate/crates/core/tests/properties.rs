//! Property suites; each one also runs inside the acceptance harness with fewer cases.

mod support;

use proptest::test_runner::TestRunner;

fn run(suite: support::Suite) {
    let mut runner = TestRunner::new(proptest::test_runner::Config { cases: 48, failure_persistence: None, ..Default::default() });
    if let Err(e) = suite(&mut runner) {
        panic!("{e}");
    }
}

#[test]
fn graded_commutativity() {
    run(support::graded_commutativity);
}

#[test]
fn dolbeault_operators() {
    run(support::dolbeault);
}

#[test]
fn bismut_and_chern_are_hermitian() {
    run(support::metric_and_complex);
}

#[test]
fn balanced_iff_psi_parallel() {
    run(support::balanced_iff_psi);
}

#[test]
fn unbalanced_example_is_detected() {
    let h = support::unbalanced(support::q(1));
    assert!(!h.balanced_check().unwrap().balanced);
    let b = support::bismut(&h);
    assert!(!b.is_parallel(&h.psi()));
}

#[test]
fn gamma_brackets() {
    run(support::gamma_brackets);
}

#[test]
fn instanton_condition() {
    run(support::instanton_condition);
}
