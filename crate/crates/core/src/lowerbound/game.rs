//! The leaf-query pricing game on a complete binary tree.
//!
//! Leaves of a complete binary tree of height `h` carry labels `0..2^h` in
//! inorder; a label's bits spell the root-to-leaf path. The player may only
//! query leaves. Before querying a leaf the player must have walked its
//! whole root path, so the price of a query is the number of root-path
//! edges not already walked by earlier queries: `h` for the first query,
//! afterwards the smallest LCA rank against any earlier query.
//!
//! The adversary keeps an active range `[lo, hi]` and, for a query inside
//! it, keeps the larger side (the right side on ties). The game ends once
//! the range holds a single label.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::GameError;
use crate::generators::rng;
use crate::oracle::OracleAnswer;

/// Largest height [`minimax_price`] accepts.
pub const MAX_MINIMAX_HEIGHT: u32 = 10;
/// Largest height a [`GameState`] accepts.
pub const MAX_GAME_HEIGHT: u32 = 30;

fn check_label(label: u64, h: u32) -> Result<(), GameError> {
    if h > MAX_GAME_HEIGHT {
        return Err(GameError::TooLarge {
            h,
            max: MAX_GAME_HEIGHT,
        });
    }
    if label >> h != 0 {
        return Err(GameError::OutOfRange { label, h });
    }
    Ok(())
}

/// Rank (subtree height) of the lowest common ancestor of leaves `p` and `q`.
pub fn lca_rank(p: u64, q: u64, h: u32) -> Result<u32, GameError> {
    check_label(p, h)?;
    check_label(q, h)?;
    Ok(lca_rank_unchecked(p, q))
}

#[inline]
fn lca_rank_unchecked(p: u64, q: u64) -> u32 {
    u64::BITS - (p ^ q).leading_zeros()
}

/// Price of querying `q` after the queries in `history`.
pub fn query_price(q: u64, history: &[u64], h: u32) -> Result<u32, GameError> {
    check_label(q, h)?;
    if history.contains(&q) {
        return Err(GameError::Duplicate(q));
    }
    let mut price = h;
    for &p in history {
        check_label(p, h)?;
        price = price.min(lca_rank_unchecked(p, q));
    }
    Ok(price)
}

/// One query of a played game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameStep {
    pub query: u64,
    pub price: u32,
    pub answer: OracleAnswer,
    /// Labels dropped from the active range by this answer, if any.
    pub discarded: Option<(u64, u64)>,
    /// Active range after the answer.
    pub lo: u64,
    pub hi: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    h: u32,
    lo: u64,
    hi: u64,
    queried: BTreeSet<u64>,
    total_price: u64,
}

impl GameState {
    pub fn new(h: u32) -> Result<Self, GameError> {
        if h == 0 || h > MAX_GAME_HEIGHT {
            return Err(GameError::TooLarge {
                h,
                max: MAX_GAME_HEIGHT,
            });
        }
        Ok(GameState {
            h,
            lo: 0,
            hi: (1u64 << h) - 1,
            queried: BTreeSet::new(),
            total_price: 0,
        })
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn range(&self) -> (u64, u64) {
        (self.lo, self.hi)
    }

    pub fn range_len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_over(&self) -> bool {
        self.lo == self.hi
    }

    pub fn total_price(&self) -> u64 {
        self.total_price
    }

    pub fn queried(&self) -> &BTreeSet<u64> {
        &self.queried
    }

    /// Queried label immediately left of the active range.
    pub fn left_flank(&self) -> Option<u64> {
        self.lo.checked_sub(1).filter(|x| self.queried.contains(x))
    }

    /// Queried label immediately right of the active range.
    pub fn right_flank(&self) -> Option<u64> {
        Some(self.hi + 1).filter(|y| self.queried.contains(y))
    }

    /// Price of querying `q` now. The nearest queried labels on either side
    /// of `q` realize the minimum LCA rank.
    pub fn price_of(&self, q: u64) -> Result<u32, GameError> {
        check_label(q, self.h)?;
        if self.queried.contains(&q) {
            return Err(GameError::Duplicate(q));
        }
        let below = self.queried.range(..q).next_back();
        let above = self.queried.range(q + 1..).next();
        Ok([below, above]
            .into_iter()
            .flatten()
            .map(|&p| lca_rank_unchecked(p, q))
            .fold(self.h, u32::min))
    }

    /// Queries the adversary that never isolates the target early.
    pub fn adversary_answer(&mut self, q: u64) -> Result<GameStep, GameError> {
        if self.is_over() {
            return Err(GameError::GameOver);
        }
        let price = self.price_of(q)?;
        self.queried.insert(q);
        self.total_price += u64::from(price);
        let (answer, discarded) = if q < self.lo {
            (OracleAnswer::TargetLarger, None)
        } else if q > self.hi {
            (OracleAnswer::TargetSmaller, None)
        } else if q - self.lo > self.hi - q {
            let dropped = (q, self.hi);
            self.hi = q - 1;
            (OracleAnswer::TargetSmaller, Some(dropped))
        } else {
            let dropped = (self.lo, q);
            self.lo = q + 1;
            (OracleAnswer::TargetLarger, Some(dropped))
        };
        Ok(GameStep {
            query: q,
            price,
            answer,
            discarded,
            lo: self.lo,
            hi: self.hi,
        })
    }

    /// Queries a player who knows the adversary would consider: strictly
    /// inside the range while it holds more than two labels, anywhere in it
    /// otherwise.
    pub fn sensible_queries(&self) -> std::ops::RangeInclusive<u64> {
        if self.range_len() > 2 {
            self.lo + 1..=self.hi - 1
        } else {
            self.lo..=self.hi
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub h: u32,
    pub steps: Vec<GameStep>,
    pub total_price: u64,
}

impl Transcript {
    /// The isolated label.
    pub fn target(&self) -> Option<u64> {
        self.steps.last().map(|s| s.lo)
    }

    /// CSV with columns `step,query,price,answer,range_lo,range_hi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,query,price,answer,range_lo,range_hi\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                s.query,
                s.price,
                s.answer.as_str(),
                s.lo,
                s.hi
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameStrategy {
    /// Query the middle of the active range.
    BalancedBisect,
    /// Query the cheapest sensible label, nearest the middle on ties.
    GreedyCheapest,
    /// Query a uniformly random sensible label.
    Random(u64),
}

impl std::str::FromStr for GameStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "balanced_bisect" | "balanced" => Ok(GameStrategy::BalancedBisect),
            "greedy_cheapest" | "greedy" => Ok(GameStrategy::GreedyCheapest),
            other => other
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(GameStrategy::Random)
                .or_else(|| (other == "random").then_some(GameStrategy::Random(0)))
                .ok_or_else(|| format!("unknown strategy `{other}` (balanced_bisect, greedy_cheapest, random:SEED)")),
        }
    }
}

/// Plays `player` against the adversary until the target is isolated.
pub fn play_with(
    h: u32,
    mut player: impl FnMut(&GameState) -> u64,
) -> Result<Transcript, GameError> {
    let mut state = GameState::new(h)?;
    let mut steps = Vec::new();
    while !state.is_over() {
        let q = player(&state);
        steps.push(state.adversary_answer(q)?);
    }
    Ok(Transcript {
        h,
        steps,
        total_price: state.total_price(),
    })
}

/// Plays one of the built-in strategies. Strategies only issue sensible
/// queries; anything else is reported as an error.
pub fn play_game(strategy: GameStrategy, h: u32) -> Result<Transcript, GameError> {
    let mut rng = match strategy {
        GameStrategy::Random(seed) => Some(rng(seed, 0)),
        _ => None,
    };
    let mut bad = None;
    let transcript = play_with(h, |state| {
        let (lo, hi) = state.range();
        let allowed = state.sensible_queries();
        let q = match strategy {
            GameStrategy::BalancedBisect => lo + (hi - lo) / 2,
            GameStrategy::GreedyCheapest => allowed
                .clone()
                .min_by_key(|&q| {
                    (
                        state.price_of(q).unwrap_or(u32::MAX),
                        (2 * q).abs_diff(lo + hi),
                        q,
                    )
                })
                .expect("sensible query range is non-empty"),
            GameStrategy::Random(_) => rng.as_mut().expect("seeded").gen_range(allowed.clone()),
        };
        if !allowed.contains(&q) && bad.is_none() {
            bad = Some(GameError::Disallowed { query: q, lo, hi });
        }
        q
    })?;
    match bad {
        Some(e) => Err(e),
        None => Ok(transcript),
    }
}

/// Which queries the minimax player may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QueryRule {
    /// Strictly inside the range while it has more than two labels.
    #[default]
    Sensible,
    /// Any label inside the active range.
    InRange,
}

/// Exact minimum total price any player can guarantee against the adversary.
pub fn minimax_price(h: u32) -> Result<u64, GameError> {
    minimax_price_with(h, QueryRule::Sensible)
}

/// Minimax price under a chosen query rule.
///
/// After the first query every state is an active range `[x, y]` whose
/// flanks `x-1` and `y+1` are queried exactly when they exist. By the
/// ultrametric property of LCA ranks, a query inside the range costs the
/// smaller of its LCA ranks against the two flanks, so the value depends on
/// `(x, y)` alone and an interval dynamic program computes it exactly.
pub fn minimax_price_with(h: u32, rule: QueryRule) -> Result<u64, GameError> {
    if h == 0 || h > MAX_MINIMAX_HEIGHT {
        return Err(GameError::TooLarge {
            h,
            max: MAX_MINIMAX_HEIGHT,
        });
    }
    let nu = 1usize << h;
    let last = nu - 1;
    // value[x * nu + y] for x <= y.
    let mut value = vec![0u64; nu * nu];
    let next = |x: usize, y: usize, q: usize| {
        if q - x > y - q {
            (x, q - 1)
        } else {
            (q + 1, y)
        }
    };
    let choices = |x: usize, y: usize| match rule {
        QueryRule::Sensible if y - x + 1 > 2 => x + 1..=y - 1,
        _ => x..=y,
    };

    for len in 2..nu {
        for x in 0..=nu - len {
            let y = x + len - 1;
            let mut best = u64::MAX;
            for q in choices(x, y) {
                let mut price = u32::MAX;
                if x > 0 {
                    price = price.min(lca_rank_unchecked(q as u64, x as u64 - 1));
                }
                if y < last {
                    price = price.min(lca_rank_unchecked(q as u64, y as u64 + 1));
                }
                let (a, b) = next(x, y, q);
                best = best.min(u64::from(price) + value[a * nu + b]);
            }
            value[x * nu + y] = best;
        }
    }

    let best = choices(0, last)
        .map(|q| {
            let (a, b) = next(0, last, q);
            u64::from(h) + value[a * nu + b]
        })
        .min()
        .expect("at least one query");
    Ok(best)
}
