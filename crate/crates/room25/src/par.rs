//! Thread-parallel drivers over the core's batch and subtree splits.

use std::sync::atomic::AtomicU64;

use rayon::prelude::*;
use room25_core::adversary::{
    merge, search_subtree, split, SearchConfig, SearchError, SearchReport,
};
use room25_core::openings::Opening;
use room25_core::prob::{batches, run_batch, McReport, McTally};
use room25_core::Roster;

fn pool(jobs: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j.max(1));
    }
    b.build().expect("thread pool")
}

/// Same tallies as the sequential estimator for any `jobs`.
pub fn monte_carlo(
    opening: Opening,
    roster: &Roster,
    trials: u64,
    seed: u64,
    jobs: Option<usize>,
) -> McReport {
    let work: Vec<(u64, u64)> = batches(trials).collect();
    let tally = pool(jobs).install(|| {
        work.par_iter()
            .map(|&(b, n)| run_batch(opening, roster, seed, b, n))
            .reduce(McTally::default, McTally::merge)
    });
    McReport::from_tally(opening, seed, tally)
}

/// Searches the root's children in parallel against one shared node budget.
/// Subtrees run in order, one chunk of `jobs` at a time, and the search stops
/// after the chunk that brings in enough certificates; results therefore
/// depend only on the worker count.
pub fn search(cfg: &SearchConfig, jobs: Option<usize>) -> Result<SearchReport, SearchError> {
    let counter = AtomicU64::new(0);
    let parts = split(cfg);
    let pool = pool(jobs);
    let width = pool.current_num_threads().max(1);
    let mut done = Vec::new();
    let mut found = 0;
    for chunk in parts.chunks(width) {
        let got = pool.install(|| {
            chunk
                .par_iter()
                .map(|t| search_subtree(cfg, t, &counter))
                .collect::<Result<Vec<_>, _>>()
        })?;
        found += got.iter().map(|p| p.certificates.len()).sum::<usize>();
        done.extend(got);
        if found >= cfg.max_certificates {
            break;
        }
    }
    Ok(merge(cfg, done, counter.into_inner()))
}

/// Standard deviation of an estimator from its variance.
pub fn sigma(variance: f64) -> f64 {
    variance.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use room25_core::adversary::Verdict;

    #[test]
    fn parallel_monte_carlo_matches_sequential() {
        let seq = room25_core::prob::monte_carlo(Opening::Veloce, &Roster::solo(), 23_456, 5);
        for jobs in [Some(1), Some(3), None] {
            assert_eq!(
                monte_carlo(Opening::Veloce, &Roster::solo(), 23_456, 5, jobs).tally,
                seq.tally
            );
        }
    }

    #[test]
    fn parallel_search_matches_sequential() {
        let cfg = SearchConfig::one_turn(2);
        assert_eq!(search(&cfg, Some(2)).unwrap().verdict, Verdict::NoWin);
        let cfg = SearchConfig {
            max_certificates: usize::MAX,
            ..SearchConfig::angelic(1, 2)
        };
        assert_eq!(search(&cfg, Some(2)).unwrap().certificates.len(), 512);
    }
}
