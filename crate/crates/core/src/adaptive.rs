//! Adaptive play in two-player normal-form games.
//!
//! Each player remembers the opponent's last `m` actions, draws a uniform
//! sample of `s` of them without replacement, and best-responds to the
//! empirical frequencies of the sample. With probability `e` the player
//! instead picks uniformly among all of their actions. Ties between best
//! replies are broken uniformly. The state is the pair of histories.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::Zero;

use crate::error::{Error, Result};
use crate::matrix::PolyMatrix;
use crate::perturbed::PerturbedMatrix;
use crate::poly::EpsPoly;
use crate::rational::Rational;

pub const DEFAULT_STATE_BUDGET: usize = 65_536;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormGame {
    actions_p1: Vec<String>,
    actions_p2: Vec<String>,
    /// `payoffs[a1][a2] = (u1, u2)`
    payoffs: Vec<Vec<(Rational, Rational)>>,
}

impl NormalFormGame {
    pub fn new(
        actions_p1: Vec<String>,
        actions_p2: Vec<String>,
        payoffs: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidGame {
            reason: reason.to_string(),
        };
        if actions_p1.is_empty() || actions_p2.is_empty() {
            return Err(invalid("each player needs at least one action"));
        }
        if !actions_p1.iter().all_unique() || !actions_p2.iter().all_unique() {
            return Err(invalid("action labels must be distinct"));
        }
        if payoffs.len() != actions_p1.len()
            || payoffs.iter().any(|row| row.len() != actions_p2.len())
        {
            return Err(invalid("payoff table does not match the action sets"));
        }
        Ok(NormalFormGame {
            actions_p1,
            actions_p2,
            payoffs,
        })
    }

    pub fn actions(&self, player: Player) -> &[String] {
        match player {
            Player::One => &self.actions_p1,
            Player::Two => &self.actions_p2,
        }
    }

    pub fn num_actions(&self, player: Player) -> usize {
        self.actions(player).len()
    }

    pub fn payoff(&self, a1: usize, a2: usize) -> &(Rational, Rational) {
        &self.payoffs[a1][a2]
    }

    fn utility(&self, player: Player, own: usize, other: usize) -> &Rational {
        match player {
            Player::One => &self.payoffs[own][other].0,
            Player::Two => &self.payoffs[other][own].1,
        }
    }

    /// Own actions maximizing expected payoff against the opponent action
    /// counts `empirical`, ascending.
    pub fn best_response_set(&self, player: Player, empirical: &[usize]) -> Vec<usize> {
        assert_eq!(empirical.len(), self.num_actions(player.opponent()));
        assert!(empirical.iter().any(|&c| c > 0), "empirical sample is empty");
        // Counts instead of frequencies: the common denominator does not change the argmax.
        let values: Vec<Rational> = (0..self.num_actions(player))
            .map(|own| {
                empirical
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(|(other, &c)| self.utility(player, own, other) * Rational::from_integer(c.into()))
                    .sum()
            })
            .collect();
        let best = values.iter().max().expect("nonempty action set");
        (0..values.len()).filter(|&a| &values[a] == best).collect()
    }

    /// Probability of each own action, given the opponent's history.
    pub fn response_distribution(
        &self,
        player: Player,
        opponent_history: &[usize],
        sample: usize,
    ) -> Result<Vec<EpsPoly>> {
        let k = self.num_actions(player);
        let samples = sample_distribution(opponent_history, sample, self.num_actions(player.opponent()))?;
        let mut best_reply_weight = vec![Rational::zero(); k];
        for (counts, prob) in &samples {
            let br = self.best_response_set(player, counts);
            let share = prob / Rational::from_integer(br.len().into());
            for a in br {
                best_reply_weight[a] += &share;
            }
        }
        // (1 - e) * weight + e / k
        let uniform = Rational::from_integer(k.into()).recip();
        Ok(best_reply_weight
            .into_iter()
            .map(|w| EpsPoly::new(vec![w.clone(), uniform.clone() - w]))
            .collect())
    }
}

/// Distribution of the action counts in a uniform size-`sample` subset of
/// the positions of `history`.
pub fn sample_distribution(
    history: &[usize],
    sample: usize,
    num_actions: usize,
) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let m = history.len();
    if sample > m {
        return Err(Error::SampleTooLarge { s: sample, m });
    }
    if sample == 0 {
        return Err(Error::InvalidConfig {
            reason: "sample size must be positive".into(),
        });
    }
    let mut tally: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut subsets = 0usize;
    for positions in (0..m).combinations(sample) {
        let mut counts = vec![0; num_actions];
        for p in positions {
            counts[history[p]] += 1;
        }
        *tally.entry(counts).or_default() += 1;
        subsets += 1;
    }
    let total = Rational::from_integer(subsets.into());
    Ok(tally
        .into_iter()
        .map(|(counts, n)| (counts, Rational::from_integer(n.into()) / &total))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdaptiveConfig {
    memory: usize,
    sample: usize,
}

impl AdaptiveConfig {
    pub fn new(memory: usize, sample: usize) -> Result<Self> {
        if memory == 0 || sample == 0 {
            return Err(Error::InvalidConfig {
                reason: "memory and sample size must be positive".into(),
            });
        }
        if sample > memory {
            return Err(Error::SampleTooLarge { s: sample, m: memory });
        }
        Ok(AdaptiveConfig { memory, sample })
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn sample(&self) -> usize {
        self.sample
    }
}

/// Both players' recent actions, oldest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HistoryState {
    /// Player 2's actions, as seen by player 1.
    pub h2: Vec<usize>,
    /// Player 1's actions, as seen by player 2.
    pub h1: Vec<usize>,
}

impl HistoryState {
    /// Player 1's history in lowercase followed by player 2's in uppercase,
    /// e.g. `bfFB`: player 1 played B then F while player 2 played f then b.
    pub fn label(&self, game: &NormalFormGame) -> String {
        let p1: String = self.h1.iter().map(|&a| game.actions_p1[a].to_lowercase()).collect();
        let p2: String = self.h2.iter().map(|&a| game.actions_p2[a].to_uppercase()).collect();
        p1 + &p2
    }
}

fn encode(history: &[usize], base: usize) -> usize {
    history.iter().fold(0, |acc, &a| acc * base + a)
}

fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn shifted(history: &[usize], next: usize) -> Vec<usize> {
    history[1..].iter().copied().chain(std::iter::once(next)).collect()
}

/// The perturbed chain of an adaptive-play model together with its state space.
#[derive(Clone, Debug)]
pub struct AdaptiveChain {
    pub matrix: PerturbedMatrix,
    pub states: Vec<HistoryState>,
    pub labels: Vec<String>,
}

impl AdaptiveChain {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

pub fn build_chain(game: &NormalFormGame, config: AdaptiveConfig) -> Result<AdaptiveChain> {
    build_chain_with_budget(game, config, DEFAULT_STATE_BUDGET)
}

/// States are indexed in mixed radix with the player-1 history most
/// significant and the oldest action most significant within a history.
pub fn build_chain_with_budget(
    game: &NormalFormGame,
    config: AdaptiveConfig,
    budget: usize,
) -> Result<AdaptiveChain> {
    let m = config.memory;
    let (k1, k2) = (game.num_actions(Player::One), game.num_actions(Player::Two));
    let count = |k: usize| (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let (n1, n2) = (count(k1), count(k2));
    let states_total = n1.saturating_mul(n2);
    if states_total > budget as u128 {
        return Err(Error::StateBudgetExceeded {
            states: states_total,
            budget,
        });
    }
    let (n1, n2) = (n1 as usize, n2 as usize);
    let n = n1 * n2;

    // Player 1 reacts to h2, player 2 to h1.
    let reply_p1: Vec<Vec<EpsPoly>> = (0..n2)
        .map(|h| game.response_distribution(Player::One, &decode(h, k2, m), config.sample))
        .collect::<Result<_>>()?;
    let reply_p2: Vec<Vec<EpsPoly>> = (0..n1)
        .map(|h| game.response_distribution(Player::Two, &decode(h, k1, m), config.sample))
        .collect::<Result<_>>()?;

    let states: Vec<HistoryState> = (0..n)
        .map(|idx| HistoryState {
            h1: decode(idx / n2, k1, m),
            h2: decode(idx % n2, k2, m),
        })
        .collect();

    let mut matrix = PolyMatrix::zeros(n, n);
    for (from, state) in states.iter().enumerate() {
        let r1 = &reply_p1[encode(&state.h2, k2)];
        let r2 = &reply_p2[encode(&state.h1, k1)];
        for (a1, p1) in r1.iter().enumerate() {
            if p1.is_zero() {
                continue;
            }
            for (a2, p2) in r2.iter().enumerate() {
                if p2.is_zero() {
                    continue;
                }
                let to = encode(&shifted(&state.h1, a1), k1) * n2 + encode(&shifted(&state.h2, a2), k2);
                matrix[(to, from)] = &matrix[(to, from)] + &(p1 * p2);
            }
        }
    }
    let labels = states.iter().map(|s| s.label(game)).collect();
    Ok(AdaptiveChain {
        matrix: PerturbedMatrix::validated(matrix)?,
        states,
        labels,
    })
}

/// Probability that player 1 draws `counts_p1` from `h2` while player 2 draws `counts_p2` from `h1`.
pub fn joint_sample_probability(
    game: &NormalFormGame,
    state: &HistoryState,
    sample: usize,
    counts_p1: &[usize],
    counts_p2: &[usize],
) -> Result<Rational> {
    let d1 = sample_distribution(&state.h2, sample, game.num_actions(Player::Two))?;
    let d2 = sample_distribution(&state.h1, sample, game.num_actions(Player::One))?;
    let p1 = d1.get(counts_p1).cloned().unwrap_or_else(Rational::zero);
    let p2 = d2.get(counts_p2).cloned().unwrap_or_else(Rational::zero);
    Ok(p1 * p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_game, parse_poly_matrix};
    use crate::rational::{int, rat};

    fn qwerty() -> NormalFormGame {
        parse_game("p1: D Q\np2: d q\n5,5 0,0\n0,0 4,4\n").unwrap()
    }

    #[test]
    fn sample_of_two_from_four() {
        // d q q d
        let dist = sample_distribution(&[0, 1, 1, 0], 2, 2).unwrap();
        assert_eq!(dist[&vec![0, 2]], rat(1, 6));
        assert_eq!(dist[&vec![2, 0]], rat(1, 6));
        assert_eq!(dist[&vec![1, 1]], rat(4, 6));
        let whole = sample_distribution(&[0, 1, 1, 0], 4, 2).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[&vec![2, 2]], int(1));
        assert!(matches!(
            sample_distribution(&[0, 1], 3, 2),
            Err(Error::SampleTooLarge { s: 3, m: 2 })
        ));
    }

    #[test]
    fn best_responses() {
        let g = qwerty();
        assert_eq!(g.best_response_set(Player::One, &[1, 0]), vec![0]);
        // 5 * 4/9 = 4 * 5/9
        assert_eq!(g.best_response_set(Player::One, &[4, 5]), vec![0, 1]);
        assert_eq!(g.best_response_set(Player::One, &[5, 4]), vec![0]);
        assert_eq!(g.best_response_set(Player::Two, &[0, 1]), vec![1]);
    }

    #[test]
    fn response_with_mistakes() {
        let r = qwerty().response_distribution(Player::One, &[0], 1).unwrap();
        assert_eq!(r[0], parse_poly_matrix("1 - 1/2 e").unwrap()[(0, 0)]);
        assert_eq!(r[1], EpsPoly::monomial(rat(1, 2), 1));
    }

    #[test]
    fn indifferent_player_mixes_evenly() {
        let g = parse_game("p1: A B\np2: a b\n1,1 1,1\n1,1 1,1\n").unwrap();
        let r = g.response_distribution(Player::One, &[0, 1, 1], 2).unwrap();
        assert_eq!(r, vec![EpsPoly::constant(rat(1, 2)), EpsPoly::constant(rat(1, 2))]);
    }

    #[test]
    fn response_from_mixed_history_matches_enumeration() {
        let g = parse_game("p1: A B\np2: a b\n5,5 0,3\n3,0 4,4\n").unwrap();
        let history = [0, 1, 1, 0];
        let got = g.response_distribution(Player::One, &history, 2).unwrap();
        // enumerate the six position pairs directly
        let mut weight_a = Rational::zero();
        let mut weight_b = Rational::zero();
        for (x, y) in (0..4).tuple_combinations() {
            let n_a = [history[x], history[y]].iter().filter(|&&h| h == 0).count() as i64;
            let n_b = 2 - n_a;
            let value_a = int(5 * n_a);
            let value_b = int(3 * n_a + 4 * n_b);
            match value_a.cmp(&value_b) {
                std::cmp::Ordering::Greater => weight_a += rat(1, 6),
                std::cmp::Ordering::Less => weight_b += rat(1, 6),
                std::cmp::Ordering::Equal => {
                    weight_a += rat(1, 12);
                    weight_b += rat(1, 12);
                }
            }
        }
        let expect = |w: Rational| EpsPoly::new(vec![w.clone(), rat(1, 2) - w]);
        assert_eq!(got, vec![expect(weight_a), expect(weight_b)]);
    }

    #[test]
    fn qwerty_chain_matches_closed_form() {
        let chain = build_chain(&qwerty(), AdaptiveConfig::new(1, 1).unwrap()).unwrap();
        assert_eq!(chain.labels, vec!["dD", "dQ", "qD", "qQ"]);
        let quarter = parse_poly_matrix(
            "4 - 4e + e^2, 2e - e^2, 2e - e^2, e^2
             2e - e^2, e^2, 4 - 4e + e^2, 2e - e^2
             2e - e^2, 4 - 4e + e^2, e^2, 2e - e^2
             e^2, 2e - e^2, 2e - e^2, 4 - 4e + e^2",
        )
        .unwrap()
        .map(|p| p.scale(&rat(1, 4)));
        assert_eq!(chain.matrix.matrix(), &quarter);
    }

    #[test]
    fn joint_sample_of_four_thirty_sixths() {
        let g = qwerty();
        // player 1 played D Q Q D, player 2 played d q d q
        let state = HistoryState {
            h2: vec![0, 1, 0, 1],
            h1: vec![0, 1, 1, 0],
        };
        assert_eq!(state.label(&g), "dqqdDQDQ");
        let p = joint_sample_probability(&g, &state, 2, &[0, 2], &[1, 1]).unwrap();
        assert_eq!(p, rat(4, 36));
    }

    #[test]
    fn mistake_free_limit_is_deterministic() {
        let g = parse_game("p1: B F\np2: b f\n2,1 0,0\n0,0 1,2\n").unwrap();
        let chain = build_chain(&g, AdaptiveConfig::new(1, 1).unwrap()).unwrap();
        let m0 = chain.matrix.constant_part();
        for j in 0..4 {
            let nonzero: Vec<_> = (0..4).filter(|&i| !m0.get(i, j).is_zero()).collect();
            assert_eq!(nonzero.len(), 1);
        }
    }

    #[test]
    fn config_and_budget() {
        assert!(matches!(AdaptiveConfig::new(2, 3), Err(Error::SampleTooLarge { .. })));
        assert!(matches!(AdaptiveConfig::new(0, 0), Err(Error::InvalidConfig { .. })));
        let err = build_chain_with_budget(&qwerty(), AdaptiveConfig::new(4, 2).unwrap(), 100).unwrap_err();
        assert!(matches!(err, Error::StateBudgetExceeded { states: 256, budget: 100 }));
    }
}
