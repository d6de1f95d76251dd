// SPDX-License-Identifier: Apache-2.0
use gatemin::oracle::assignment_count;
use gatemin::{
    encode, enumerate_oracle, expand, solve, verify, verify_with_cost, Architecture, Bitvector, Connectivity,
    CostModel, ExpansionKind, GateKind, SearchConfig, SolveStatus, TruthSpec,
};
use proptest::prelude::*;

const ORACLE_LIMIT: u128 = 500_000;

fn gate_set() -> impl Strategy<Value = Vec<GateKind>> {
    proptest::sample::subsequence(GateKind::ALL.to_vec(), 1..=7)
        .prop_filter("needs a non-CON gate", |s| s.iter().any(|k| *k != GateKind::Con))
}

fn arch(n: usize, outputs: usize) -> impl Strategy<Value = Architecture> {
    (proptest::collection::vec(1usize..=2, 1..=3), gate_set(), any::<bool>()).prop_map(move |(mut w, set, all)| {
        let top = w.len() - 1;
        w[top] = w[top].max(outputs);
        let c = if all { Connectivity::AllPrevious } else { Connectivity::PreviousLevel };
        Architecture::with_widths(n, w, &set, outputs).connectivity(c)
    })
}

fn spec(n: usize, outputs: usize) -> impl Strategy<Value = TruthSpec> {
    let full = (1u64 << (1 << n)) - 1;
    (proptest::collection::vec(0..=full, outputs), 0..=full, 0..=full).prop_map(move |(fs, a, b)| {
        let dc = a & b;
        let fs = fs.into_iter().map(|f| Bitvector::new(n, f & !dc).unwrap()).collect();
        TruthSpec::new(n, fs, Bitvector::new(n, dc).unwrap()).unwrap()
    })
}

fn spec_and_arch() -> impl Strategy<Value = (TruthSpec, Architecture)> {
    (2usize..=3, 1usize..=2).prop_flat_map(|(n, m)| (spec(n, m), arch(n, m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solved_circuits_verify_and_match_the_oracle((spec, arch) in spec_and_arch(), transistors in any::<bool>()) {
        let cost = if transistors { CostModel::transistors() } else { CostModel::gate_count() };
        let model = encode(&spec, &arch, &cost).unwrap();
        let r = solve(&model, &SearchConfig::default());
        if let Some(c) = &r.circuit {
            let rep = verify_with_cost(c, &spec, &cost).unwrap();
            prop_assert!(rep.pass, "{:?}", rep.mismatches);
            prop_assert_eq!(Some(rep.cost), r.cost);
        }
        prop_assert!(matches!(r.status, SolveStatus::Optimal | SolveStatus::Infeasible));
        if assignment_count(&arch).unwrap() <= ORACLE_LIMIT {
            prop_assert_eq!(enumerate_oracle(&spec, &arch, &cost).unwrap().cost, r.cost);
        }
    }

    #[test]
    fn more_dont_cares_never_cost_more(f in 0..256u64, a in 0..256u64, b in 0..256u64, extra in 0..256u64) {
        let arch = Architecture::grid(3, 3, 2, &GateKind::ALL, 1);
        let small = a & b;
        let large = small | extra;
        let cost_at = |dc: u64| {
            let spec = TruthSpec::new(3, vec![Bitvector::new(3, f & !dc).unwrap()], Bitvector::new(3, dc).unwrap())
                .unwrap();
            let r = solve(&encode(&spec, &arch, &CostModel::gate_count()).unwrap(), &SearchConfig::default());
            assert!(matches!(r.status, SolveStatus::Optimal | SolveStatus::Infeasible));
            r.cost
        };
        match (cost_at(small), cost_at(large)) {
            (Some(s), Some(l)) => prop_assert!(l <= s),
            (Some(_), None) => prop_assert!(false, "feasible became infeasible"),
            _ => {}
        }
    }

    #[test]
    fn expansions_are_exact_and_bounded(n in 2usize..=4, seed in any::<u64>(), k in 0usize..3) {
        let f = Bitvector::masked(n, seed);
        let c = expand(f, ExpansionKind::ALL[k]).unwrap();
        prop_assert_eq!(c.output_functions(), vec![f]);
        let rep = verify(&c, &TruthSpec::complete(n, vec![f]).unwrap()).unwrap();
        prop_assert!(u64::from(rep.cost) <= 3u64.pow(n as u32));
    }

    #[test]
    fn symmetry_breaking_keeps_the_optimum((spec, arch) in spec_and_arch()) {
        let model = encode(&spec, &arch, &CostModel::gate_count()).unwrap();
        let on = solve(&model, &SearchConfig::default());
        let off = solve(&model, &SearchConfig::default().with_symmetry_breaking(false));
        prop_assert_eq!(on.cost, off.cost);
    }
}
