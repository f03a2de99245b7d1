use isl_core::corpus;
use isl_core::machine::SearchLimits;

#[test]
fn every_bundle_replays() {
    let mut failures = Vec::new();
    for name in corpus::list() {
        let bundle = corpus::get(name).unwrap();
        for r in bundle.replay(SearchLimits::default()).unwrap() {
            if !r.passed {
                failures.push(format!("{name}: {} ({})", r.expectation, r.detail));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn bundles_export_to_file_formats() {
    for name in corpus::list() {
        let bundle = corpus::get(name).unwrap();
        if let Some((m1, m2)) = bundle.machines() {
            for m in [m1, m2] {
                let back = isl_core::pda::Pda::from_json(&m.to_json()).unwrap();
                assert_eq!(back.transitions().len(), m.transitions().len());
            }
        }
        if let Some(spec) = bundle.spec() {
            assert_eq!(&isl_core::blocks::JointSpec::from_json(&spec.to_json()).unwrap(), spec);
        }
        if let Some(cfg) = bundle.grammar() {
            assert_eq!(&isl_core::grammar::Cfg::from_json(&cfg.to_json()).unwrap(), cfg);
        }
    }
}
