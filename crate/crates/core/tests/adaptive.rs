//! Adaptive-play chains against a from-scratch enumeration and a simulation.

mod common;

use std::collections::HashMap;

use common::*;
use itertools::Itertools;
use num::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stochstab::format::parse_game;
use stochstab::{build_chain, AdaptiveConfig, EpsPoly, NormalFormGame, Player, Rational};

/// Per-action probabilities `(c0, c1)` meaning `c0 + c1 e`, computed by
/// walking every size-`s` set of positions in the opponent's history.
fn oracle_response(game: &NormalFormGame, player: Player, opponent: &[usize], s: usize) -> Vec<(Rational, Rational)> {
    let k = game.num_actions(player);
    let subsets: Vec<Vec<usize>> = (0..opponent.len()).combinations(s).collect();
    let weight = q(1, subsets.len() as i64);
    let mut out = vec![(Rational::zero(), Rational::zero()); k];
    for subset in subsets {
        let value = |own: usize| -> Rational {
            subset
                .iter()
                .map(|&pos| {
                    let other = opponent[pos];
                    match player {
                        Player::One => game.payoff(own, other).0.clone(),
                        Player::Two => game.payoff(other, own).1.clone(),
                    }
                })
                .sum()
        };
        let values: Vec<Rational> = (0..k).map(value).collect();
        let best = values.iter().max().unwrap();
        let winners: Vec<usize> = (0..k).filter(|&a| &values[a] == best).collect();
        for a in 0..k {
            let share = if winners.contains(&a) { q(1, winners.len() as i64) } else { q(0, 1) };
            // (1 - e) share + e / k
            out[a].0 += &weight * &share;
            out[a].1 += &weight * (q(1, k as i64) - &share);
        }
    }
    out
}

fn oracle_label(game: &NormalFormGame, h1: &[usize], h2: &[usize]) -> String {
    let p1: String = h1.iter().map(|&a| game.actions(Player::One)[a].to_lowercase()).collect();
    let p2: String = h2.iter().map(|&a| game.actions(Player::Two)[a].to_uppercase()).collect();
    p1 + &p2
}

/// Transition polynomials keyed by `(to, from)` labels.
fn oracle_chain(game: &NormalFormGame, m: usize, s: usize) -> HashMap<(String, String), EpsPoly> {
    let k1 = game.num_actions(Player::One);
    let k2 = game.num_actions(Player::Two);
    let histories = |k: usize| -> Vec<Vec<usize>> {
        (0..m).map(|_| 0..k).multi_cartesian_product().collect()
    };
    let mut out = HashMap::new();
    for h1 in histories(k1) {
        for h2 in histories(k2) {
            let r1 = oracle_response(game, Player::One, &h2, s);
            let r2 = oracle_response(game, Player::Two, &h1, s);
            let from = oracle_label(game, &h1, &h2);
            for a1 in 0..k1 {
                for a2 in 0..k2 {
                    let next1: Vec<usize> = h1[1..].iter().copied().chain([a1]).collect();
                    let next2: Vec<usize> = h2[1..].iter().copied().chain([a2]).collect();
                    let p = &EpsPoly::new(vec![r1[a1].0.clone(), r1[a1].1.clone()])
                        * &EpsPoly::new(vec![r2[a2].0.clone(), r2[a2].1.clone()]);
                    let entry = out
                        .entry((oracle_label(game, &next1, &next2), from.clone()))
                        .or_insert_with(EpsPoly::zero);
                    *entry = &*entry + &p;
                }
            }
        }
    }
    out
}

fn assert_matches_oracle(game: &NormalFormGame, m: usize, s: usize) {
    let chain = build_chain(game, AdaptiveConfig::new(m, s).unwrap()).unwrap();
    let oracle = oracle_chain(game, m, s);
    let n = chain.labels.len();
    for from in 0..n {
        for to in 0..n {
            let key = (chain.labels[to].clone(), chain.labels[from].clone());
            let expected = oracle.get(&key).cloned().unwrap_or_else(EpsPoly::zero);
            assert_eq!(chain.matrix.get(to, from), &expected, "{} -> {} at m={m} s={s}", key.1, key.0);
        }
    }
}

fn game_strategy() -> impl Strategy<Value = NormalFormGame> {
    (2usize..=3, 2usize..=3)
        .prop_flat_map(|(k1, k2)| (Just(k1), Just(k2), proptest::collection::vec((0i64..=5, 0i64..=5), k1 * k2)))
        .prop_map(|(k1, k2, pays)| {
            let names = |upper: bool, k: usize| -> Vec<String> {
                (0..k)
                    .map(|a| {
                        let c = (b'a' + a as u8) as char;
                        if upper { c.to_ascii_uppercase().to_string() } else { c.to_string() }
                    })
                    .collect()
            };
            let payoffs = (0..k1)
                .map(|a1| (0..k2).map(|a2| { let (x, y) = pays[a1 * k2 + a2]; (q(x, 1), q(y, 1)) }).collect())
                .collect();
            NormalFormGame::new(names(true, k1), names(false, k2), payoffs).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_games_give_valid_chains(game in game_strategy()) {
        for m in 1..=3 {
            for s in 1..=m {
                let states = game.num_actions(Player::One).pow(m as u32) * game.num_actions(Player::Two).pow(m as u32);
                if states > 300 {
                    continue;
                }
                let chain = build_chain(&game, AdaptiveConfig::new(m, s).unwrap()).unwrap();
                let p = &chain.matrix;
                prop_assert!(p.matrix().column_sums().iter().all(|c| *c == EpsPoly::one()));
                prop_assert!(p.symbolic_classes().is_regular());
                prop_assert!(p.max_degree() <= 2);
            }
        }
    }

    #[test]
    fn random_games_match_enumeration(game in game_strategy(), m in 1usize..=2, s in 1usize..=2) {
        prop_assume!(s <= m);
        assert_matches_oracle(&game, m, s);
    }
}

#[test]
fn fixture_games_match_enumeration() {
    for name in ["qwerty.game", "coordination.game", "battle_of_the_sexes.game", "biased_battle_of_the_sexes.game"] {
        let game = parse_game(&read_fixture(name)).unwrap();
        for (m, s) in [(1, 1), (2, 1), (2, 2), (3, 2), (4, 3)] {
            assert_matches_oracle(&game, m, s);
        }
    }
}

#[test]
fn simulation_agrees_with_chain() {
    let game = parse_game(&read_fixture("coordination.game")).unwrap();
    let (m, s) = (2, 2);
    let eps = 0.25;
    let chain = build_chain(&game, AdaptiveConfig::new(m, s).unwrap()).unwrap();
    let at = chain.matrix.eval_at(&q(1, 4)).unwrap();

    let mut rng = StdRng::seed_from_u64(20_240_601);
    let choose = |rng: &mut StdRng, player: Player, opponent: &[usize]| -> usize {
        let k = game.num_actions(player);
        if rng.gen_bool(eps) {
            return rng.gen_range(0..k);
        }
        let picks = rand::seq::index::sample(rng, opponent.len(), s);
        let value = |own: usize| -> Rational {
            picks
                .iter()
                .map(|pos| match player {
                    Player::One => game.payoff(own, opponent[pos]).0.clone(),
                    Player::Two => game.payoff(opponent[pos], own).1.clone(),
                })
                .sum()
        };
        let values: Vec<Rational> = (0..k).map(value).collect();
        let best = values.iter().max().unwrap().clone();
        let winners: Vec<usize> = (0..k).filter(|&a| values[a] == best).collect();
        winners[rng.gen_range(0..winners.len())]
    };

    let mut h1 = vec![0; m];
    let mut h2 = vec![0; m];
    let mut counts: HashMap<(String, String), u64> = HashMap::new();
    let mut visits: HashMap<String, u64> = HashMap::new();
    for _ in 0..100_000 {
        let from = oracle_label(&game, &h1, &h2);
        let a1 = choose(&mut rng, Player::One, &h2);
        let a2 = choose(&mut rng, Player::Two, &h1);
        h1 = h1[1..].iter().copied().chain([a1]).collect();
        h2 = h2[1..].iter().copied().chain([a2]).collect();
        *counts.entry((oracle_label(&game, &h1, &h2), from.clone())).or_default() += 1;
        *visits.entry(from).or_default() += 1;
    }

    let mut checked = 0;
    for (from_idx, from) in chain.labels.iter().enumerate() {
        let n = visits.get(from).copied().unwrap_or(0);
        if n < 100 {
            continue;
        }
        checked += 1;
        for (to_idx, to) in chain.labels.iter().enumerate() {
            let p = at.get(to_idx, from_idx).to_f64().unwrap();
            let hits = counts.get(&(to.clone(), from.clone())).copied().unwrap_or(0);
            let observed = hits as f64 / n as f64;
            let se = (p * (1.0 - p) / n as f64).sqrt();
            assert!(
                (observed - p).abs() <= 3.0 * se + 1e-12,
                "{from} -> {to}: observed {observed:.4}, chain {p:.4}, se {se:.4}"
            );
        }
    }
    assert!(checked >= 12, "only {checked} states were visited often enough");
}
