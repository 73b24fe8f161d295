use std::collections::BTreeMap;

use maslovkit::{parse_config, render_config, Format, Mode, RunConfig};
use maslovkit_core::critical::admissible_vectors;
use maslovkit_core::iteration::{nullity, NormalFormCase, OrbitConfig};
use maslovkit_core::Rational;
use proptest::prelude::*;

fn case_strategy() -> impl Strategy<Value = NormalFormCase> {
    prop_oneof![
        (-1i8..=1).prop_map(|b| NormalFormCase::Case1 { b }),
        (1i64..=12, 1i64..24)
            .prop_filter_map("rotation", |(q, p)| NormalFormCase::case2(p % (2 * q), q).ok()),
        (0i8..=1).prop_map(|b| NormalFormCase::Case3 { b }),
        Just(NormalFormCase::Case4),
        (
            any::<bool>(),
            any::<bool>(),
            prop::option::of((-50i64..50, 1i64..9))
        )
            .prop_map(|(e, j, mean)| {
                NormalFormCase::NonDegenerate {
                    elliptic: e,
                    index_jump_odd: j,
                    mean_index: mean.map(|(p, q)| Rational::new(p, q)),
                }
            }),
    ]
}

fn orbit_strategy() -> impl Strategy<Value = OrbitConfig> {
    (
        case_strategy(),
        -10i64..=40,
        any::<bool>(),
        prop::collection::vec(0usize..16, 1..4),
    )
        .prop_map(|(case, i1, with_k, picks)| {
            let i1 = match case.required_i1_odd() {
                Some(true) => 2 * (i1 / 2) + 1,
                Some(false) => 2 * (i1 / 2),
                None => i1,
            };
            let orbit = OrbitConfig::new(case, i1).unwrap();
            if !with_k || case.number() == 0 {
                return orbit;
            }
            let ks: BTreeMap<u32, _> = (1..=orbit.minimal_period())
                .map(|m| {
                    let all = admissible_vectors(nullity(&case, m).unwrap(), 6).unwrap();
                    (m as u32, all[picks[m as usize % picks.len()] % all.len()].clone())
                })
                .collect();
            orbit.with_k_vectors(ks).unwrap()
        })
}

fn run_config_strategy() -> impl Strategy<Value = RunConfig> {
    (
        prop::option::of(prop_oneof![
            Just(Mode::Analyze),
            Just(Mode::Sweep),
            Just(Mode::Table),
            Just(Mode::Resonance)
        ]),
        prop::collection::vec(orbit_strategy(), 0..4),
        prop::option::of(0i64..1000),
        prop::option::of(-10i64..10),
        prop::option::of(-10i64..50),
        prop::option::of(1i64..20),
        prop::option::of(1u64..100),
        prop::option::of(prop_oneof![Just(Format::Text), Just(Format::Kv)]),
    )
        .prop_map(
            |(mode, orbits, truncation, i1_min, i1_max, q_max, m_max, format)| RunConfig {
                mode,
                orbits,
                truncation,
                i1_min,
                i1_max,
                q_max,
                m_max,
                format,
            },
        )
}

proptest! {
    #[test]
    fn parse_render_parse(cfg in run_config_strategy()) {
        let text = render_config(&cfg);
        let parsed = parse_config(&text).unwrap();
        prop_assert_eq!(&parsed, &cfg);
        prop_assert_eq!(render_config(&parsed), text);
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9_.=/,#\\[\\] \n-]{0,200}") {
        let _ = parse_config(&text);
    }
}
