use gcplab::brownian::{bessel_moments, bessel_pmf, fp_pgf, fp_pmf, fpd_moments, sojourn_moments, sojourn_pgf};
use gcplab::clocks::{elastic_q, ClockSpec};
use gcplab::drift::{drifted_laplace, gstfcp_drift_laplace, hitting_boundary_laplace_gap, RandomDrift};
use gcplab::family::Family;
use gcplab::fracint::{fracint_conditional_mean, fracint_gcp_moments, rl_integral_step};
use gcplab::gcp::{enumerate_omega, gcp_moments, gcp_pgf, gcp_pmf};
use gcplab::subordinated::{gfcp_mean, gsfcp_pmf, incgamma_gcp_pmf, tempered_corr_ratio, tempered_gcp_moments};
use gcplab::{GcpParams, StepPath};

fn rates(r: &[f64]) -> GcpParams {
    GcpParams::new(r.to_vec()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn omega_sets() {
    assert_eq!(enumerate_omega(2, 4).unwrap().len(), 3);
    assert_eq!(enumerate_omega(3, 4).unwrap().len(), 4);
    assert_eq!(enumerate_omega(5, 0).unwrap().len(), 1);
}

#[test]
fn gcp_closed_forms() {
    let p = rates(&[1.0, 1.0]);
    close(gcp_pmf(&p, 2, 1.0).unwrap(), 0.203_002_924_854_919, 1e-13);
    close(gcp_pgf(&p, 0.5, 1.0).unwrap(), 0.286_504_796_860_190, 1e-13);
    close(gcp_pgf(&p, 0.0, 1.0).unwrap(), gcp_pmf(&p, 0, 1.0).unwrap(), 1e-14);
    let m = gcp_moments(&p, 0.0, 2.0).unwrap();
    assert_eq!((m.mean, m.var, m.cov), (6.0, 10.0, 0.0));
}

#[test]
fn brownian_time_changes() {
    let unit = rates(&[1.0]);
    close(fp_pmf(&unit, 0, 1.0).unwrap(), 0.243_116_734_434_214, 1e-13);
    close(fp_pgf(&unit, 1.0, 1.0).unwrap(), 1.0, 1e-13);
    let m = fpd_moments(&unit, 2.0, 4.0).unwrap();
    close(m.mean, 2.0, 1e-14);
    close(m.var, 2.5, 1e-14);
    close(bessel_pmf(&unit, 2.0, 0, 1.0).unwrap(), 1.0 / 3.0, 1e-14);
    let m = bessel_moments(&rates(&[1.0, 1.0]), 2.0, 0.5).unwrap();
    close(m.mean, 3.0, 1e-14);
    close(m.var, 14.0, 1e-14);
    let s = sojourn_moments(&unit, 2.0).unwrap();
    close(s.mean, 1.0, 1e-14);
    close(s.var, 1.5, 1e-14);
    close(sojourn_pgf(&unit, 1.0, 2.0).unwrap(), 1.0, 1e-14);
    close(elastic_q(1.0, 2.0).unwrap(), 0.572_416_423_844_193, 1e-12);
}

#[test]
fn subordinated_closed_forms() {
    let unit = rates(&[1.0]);
    close(gsfcp_pmf(&unit, 0.5, 1, 1.0).unwrap(), 0.183_939_720_585_721, 1e-12);
    close(gfcp_mean(&unit, 0.5, 1.0).unwrap(), 1.128_379_167_095_513, 1e-12);
    close(incgamma_gcp_pmf(&unit, 0.5, 1.0, 0, 1.0).unwrap(), 0.473_869_110_875_994_5, 1e-12);
    close(tempered_gcp_moments(&unit, 0.5, 1.0, 1.0, 1.0).unwrap().mean, 0.183_939_720_585_721, 1e-12);
    let r = tempered_corr_ratio(&rates(&[0.7, 0.3]), 0.5, 1.0, 1.0, 1e6).unwrap();
    assert!((r - 1.0).abs() < 0.01);
}

#[test]
fn drift_closed_forms() {
    let p = rates(&[1.0, 1.0]);
    assert_eq!(drifted_laplace(&p, 0.7, 0.0, 1.3).unwrap(), 1.0);
    let d = RandomDrift { b: 1.0, alpha: 1.0, gamma: 1.0, beta: 1.0 };
    close(gstfcp_drift_laplace(&rates(&[1.0]), d, 1.0, 1.0).unwrap(), 0.195_514_534_152_588_1, 1e-12);
    let plain = RandomDrift { b: 0.0, alpha: 1.0, gamma: 1.0, beta: 1.0 };
    // Zero drift and unit indices reduce to E e^{−ηM(t)}.
    let expected = gcp_pgf(&p, (-0.8f64).exp(), 1.5).unwrap();
    close(gstfcp_drift_laplace(&p, plain, 0.8, 1.5).unwrap(), expected, 1e-12);
    assert!(hitting_boundary_laplace_gap(&rates(&[1.0]), 0.5, 1.0, 200.0, 300).unwrap() < 1e-3);
}

#[test]
fn fractional_integrals() {
    let path = StepPath::new(vec![0.0], vec![1], 1.0).unwrap();
    close(rl_integral_step(&path, 0.5, 1.0).unwrap(), 1.128_379_167_095_513, 1e-13);
    let unit = rates(&[1.0]);
    let m = fracint_gcp_moments(&unit, 1.0, 1.0).unwrap();
    close(m.mean, 0.5, 1e-14);
    close(m.var, 1.0 / 3.0, 1e-14);
    close(fracint_conditional_mean(&unit, 1.0, 2, 1.0).unwrap(), 1.0, 1e-12);
    assert_eq!(fracint_conditional_mean(&unit, 1.0, 0, 1.0).unwrap(), 0.0);
}

#[test]
fn every_family_is_a_distribution() {
    let p = rates(&[0.7, 0.3]);
    for f in gcplab::verify::pmf_families() {
        if f.pgf(&p, 1.0, 1.0).is_ok() {
            close(f.pgf(&p, 1.0, 1.0).unwrap(), 1.0, 1e-12);
        }
        let n = f.normalization(&p, 1.0).unwrap();
        assert!((n.total - 1.0).abs() < 1e-6, "{f}: {}", n.total);
    }
    assert_eq!(ClockSpec::Stable { alpha: 0.6 }.laplace(0.0, 1.0).unwrap(), 1.0);
    assert!(Family::Fpd { mu: -0.5 }.normalization(&p, 1.0).unwrap().total < 1.0);
}
