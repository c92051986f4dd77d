//! Campaigns outside the acceptance criteria.

use skewrank::campaign::{run_verification, CampaignParams, CAMPAIGNS};

fn unlimited(nmax: usize) -> CampaignParams {
    CampaignParams { nmax: Some(nmax), budget: u128::MAX, ..Default::default() }
}

#[test]
fn engine_is_sound_against_oracle() {
    let r = run_verification("engine-sound", &unlimited(6)).unwrap();
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.skipped, 0);
}

#[test]
fn complete_multipartite_rank_two() {
    let r = run_verification("lem-multipartite", &unlimited(7)).unwrap();
    assert!(r.passed(), "{}", r.summary());
    assert_eq!(r.skipped, 0);
}

#[test]
fn every_campaign_runs_small() {
    for c in CAMPAIGNS {
        let p = CampaignParams { nmax: Some(4), samples: Some(5), ..Default::default() };
        let r = run_verification(c.name, &p).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert!(r.graphs_checked > 0, "{}", c.name);
    }
}
