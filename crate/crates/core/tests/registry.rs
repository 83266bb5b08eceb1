use matbeta::integrate::{Engine, VerificationReport, Verdict};
use matbeta::registry::{identities, list, lookup, verify, RunOptions};
use matbeta::{Error, ParamMap};

fn quick() -> RunOptions {
    RunOptions { samples: 20_000, seed: 11, rel_tol: 1e-6, ..RunOptions::default() }
}

#[test]
fn catalogue_is_complete() {
    let ids: Vec<&str> = identities().iter().map(|i| i.id).collect();
    for id in [
        "euler", "cauchy", "beta3", "lobachevsky", "wilson", "selberg-box", "selberg-halfline",
        "selberg-cauchy", "hua-ball", "hua-symm", "weyl", "projection", "gindikin-gamma",
        "gindikin-beta", "wedge", "opq", "rayleigh-d", "rayleigh-theta", "flag", "flag-projectivity",
        "lattice-zeta", "tamagawa", "berezin",
    ] {
        assert!(ids.contains(&id), "missing {id}");
    }
    assert_eq!(list().len(), identities().len());
    assert!(matches!(lookup("nope"), Err(Error::UnknownIdentity(_))));
}

#[test]
fn gindikin_sign_convention_is_listed() {
    for id in ["gindikin-gamma", "gindikin-beta"] {
        let info = list().into_iter().find(|i| i.id == id).unwrap();
        assert!(info.notes.iter().any(|n| n.contains("sign convention")), "{id}");
    }
}

#[test]
fn scalar_defaults_pass() {
    for id in ["euler", "cauchy", "beta3", "lobachevsky", "wilson"] {
        let r = verify(id, &ParamMap::new(), &quick()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{id}: {r:?}");
        assert_eq!(r.lhs.engine, Engine::Quadrature);
    }
}

#[test]
fn published_wilson_fails() {
    let p = ParamMap::new().with_text("form", "published");
    let r = verify("wilson", &p, &quick()).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert!((r.rhs - 2.0 * verify("wilson", &ParamMap::new(), &quick()).unwrap().rhs).abs() < 1e-12);
}

#[test]
fn unknown_parameter_is_rejected() {
    let p = ParamMap::new().with_real("zeta", 1.0);
    assert!(verify("euler", &p, &quick()).unwrap_err().is_invalid_input());
    let p = ParamMap::new().with_real("alpha", -1.0);
    assert!(verify("euler", &p, &quick()).unwrap_err().is_invalid_input());
}

#[test]
fn monte_carlo_is_reproducible_and_serializes() {
    let opts = RunOptions { engine: Engine::MonteCarlo, ..quick() };
    let p = ParamMap::new().with_real("n", 2.0);
    let a = verify("hua-symm", &p, &opts).unwrap();
    let b = verify("hua-symm", &p, &opts).unwrap();
    assert_eq!(a.lhs.value.to_bits(), b.lhs.value.to_bits());
    let json = serde_json::to_string(&a).unwrap();
    let back: VerificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
    let other = verify("hua-symm", &p, &RunOptions { seed: 12, ..opts }).unwrap();
    assert_ne!(other.lhs.value.to_bits(), a.lhs.value.to_bits());
}
