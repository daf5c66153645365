use sdof_core::precoders::{build_precoders, eavesdropper_coverage_rank, verify_geometry};
use sdof_core::regions::jamming_plan;
use sdof_core::rng::{derive_seed, rng_from_seed, standard_cn};
use sdof_core::{AntennaConfig, EveChannel, EveDistribution};

fn grid(max: usize) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for m1 in 1..=max {
        for m2 in 1..=m1 {
            for n in 1..=max {
                for ne in 0..m1 + m2 {
                    out.push(AntennaConfig::new(m1, m2, n, ne));
                }
            }
        }
    }
    out
}

#[test]
fn geometry_and_dimension_audit_over_grid() {
    for cfg in grid(6) {
        let plan = jamming_plan(&cfg).unwrap();
        let e = plan.extension;
        for seed in 0..20u64 {
            let mut rng = rng_from_seed(derive_seed(seed, 40, 0));
            let h1 = standard_cn(cfg.n, cfg.m1, &mut rng);
            let h2 = standard_cn(cfg.n, cfg.m2, &mut rng);
            let ps = build_precoders(&plan, &h1, &h2, derive_seed(seed, 41, 0))
                .unwrap_or_else(|err| panic!("{cfg} seed {seed}: {err}"));
            let g = verify_geometry(&ps, &h1, &h2, &plan).unwrap();
            assert!(g.pass, "{cfg} seed {seed}: {g:?}");
            assert_eq!(ps.v1j.ncols() + ps.v2j.ncols(), e * cfg.ne, "{cfg}");
            assert_eq!(ps.u.nrows(), e * cfg.n - plan.j_s, "{cfg}");
            assert_eq!(g.decodability_rank, plan.d1 + plan.d2, "{cfg}");
        }
    }
}

#[test]
fn jamming_covers_every_eavesdropper_dimension() {
    let dist = EveDistribution::default();
    for cfg in grid(5).into_iter().filter(|c| c.ne > 0) {
        let plan = jamming_plan(&cfg).unwrap();
        for seed in 0..5u64 {
            let mut rng = rng_from_seed(derive_seed(seed, 42, 0));
            let h1 = standard_cn(cfg.n, cfg.m1, &mut rng);
            let h2 = standard_cn(cfg.n, cfg.m2, &mut rng);
            let ps = build_precoders(&plan, &h1, &h2, derive_seed(seed, 43, 0)).unwrap();
            for _ in 0..4 {
                let eve = EveChannel::draw_extended(&cfg, cfg.ne, plan.extension, &dist, &mut rng);
                assert_eq!(eavesdropper_coverage_rank(&ps, &eve).unwrap(), plan.extension * cfg.ne, "{cfg}");
            }
        }
    }
}
