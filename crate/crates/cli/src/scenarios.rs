//! Scenarios compiled into the binary.

pub struct Bundled {
    pub name: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[Bundled] = &[
    Bundled {
        name: "blue_detuned_backaction",
        text: include_str!("../scenarios/blue_detuned_backaction.json"),
    },
    Bundled {
        name: "decay_length_1550",
        text: include_str!("../scenarios/decay_length_1550.json"),
    },
    Bundled {
        name: "kerr_response",
        text: include_str!("../scenarios/kerr_response.json"),
    },
    Bundled {
        name: "paper_eq26_unity_ratio",
        text: include_str!("../scenarios/paper_eq26_unity_ratio.json"),
    },
    Bundled {
        name: "paper_fig3_sensitivity",
        text: include_str!("../scenarios/paper_fig3_sensitivity.json"),
    },
    Bundled {
        name: "paper_si_horizontal_g",
        text: include_str!("../scenarios/paper_si_horizontal_g.json"),
    },
    Bundled {
        name: "readout_qba_ratio",
        text: include_str!("../scenarios/readout_qba_ratio.json"),
    },
    Bundled {
        name: "sheet_g",
        text: include_str!("../scenarios/sheet_g.json"),
    },
    Bundled {
        name: "shift_fit_noisy",
        text: include_str!("../scenarios/shift_fit_noisy.json"),
    },
    Bundled {
        name: "short_string_mass",
        text: include_str!("../scenarios/short_string_mass.json"),
    },
    Bundled {
        name: "stress_inversion",
        text: include_str!("../scenarios/stress_inversion.json"),
    },
    Bundled {
        name: "thermal_rms",
        text: include_str!("../scenarios/thermal_rms.json"),
    },
    Bundled {
        name: "vertical_g",
        text: include_str!("../scenarios/vertical_g.json"),
    },
];

pub fn find(name: &str) -> Option<&'static Bundled> {
    BUNDLED.iter().find(|b| b.name == name)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::config::parse_scenario;

    #[test]
    fn every_bundled_scenario_parses_under_its_own_name() {
        for b in BUNDLED {
            let s = parse_scenario(b.text).unwrap_or_else(|e| panic!("{}: {e}", b.name));
            assert_eq!(s.name, b.name);
            assert!(!s.description.is_empty(), "{}", b.name);
        }
    }

    #[test]
    fn names_unique_and_required_present() {
        let names: BTreeSet<_> = BUNDLED.iter().map(|b| b.name).collect();
        assert_eq!(names.len(), BUNDLED.len());
        assert!(BUNDLED.len() >= 10);
        for n in [
            "paper_si_horizontal_g",
            "paper_fig3_sensitivity",
            "paper_eq26_unity_ratio",
        ] {
            assert!(find(n).is_some(), "{n}");
        }
    }
}
