//! Self-consistency aggregation: majority vote over extracted answers.

use crate::error::{Error, Result};
use crate::extract::numeric_eq;
use crate::tasks::AnswerKind;

/// Whether two canonical answers belong to the same vote class.
fn same_class(a: &str, b: &str, kind: AnswerKind) -> bool {
    if kind == AnswerKind::Number {
        if let (Ok(x), Ok(y)) = (a.parse::<f64>(), b.parse::<f64>()) {
            return numeric_eq(x, y);
        }
    }
    a == b
}

/// Majority vote over per-sample extracted answers.
///
/// Missing extractions are dropped. Answers are grouped by canonical
/// equivalence (numeric tolerance for numbers, using the first member seen as
/// the group representative); the largest group wins and ties go to the group
/// whose first member has the earliest sample index. All answers missing
/// yields no winner.
pub fn majority_vote(answers: &[Option<String>], kind: AnswerKind) -> Result<Option<String>> {
    if answers.is_empty() {
        return Err(Error::EmptyInput);
    }
    struct Group {
        representative: String,
        count: usize,
        first_index: usize,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (index, answer) in answers.iter().enumerate() {
        let Some(answer) = answer else { continue };
        match groups
            .iter_mut()
            .find(|g| same_class(&g.representative, answer, kind))
        {
            Some(group) => group.count += 1,
            None => groups.push(Group {
                representative: answer.clone(),
                count: 1,
                first_index: index,
            }),
        }
    }
    Ok(groups
        .into_iter()
        .max_by(|a, b| a.count.cmp(&b.count).then(b.first_index.cmp(&a.first_index)))
        .map(|g| g.representative))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vote(values: &[&str]) -> Option<String> {
        let answers: Vec<Option<String>> = values.iter().map(|v| Some(v.to_string())).collect();
        majority_vote(&answers, AnswerKind::Number).unwrap()
    }

    #[test]
    fn test_strict_majority() {
        assert_eq!(vote(&["20", "20", "60"]).as_deref(), Some("20"));
    }

    #[test]
    fn test_tolerance_groups_equivalent_numbers() {
        assert_eq!(vote(&["60", "60.0", "59"]).as_deref(), Some("60"));
    }

    #[test]
    fn test_tie_breaks_to_earliest_index() {
        assert_eq!(vote(&["20", "60"]).as_deref(), Some("20"));
        assert_eq!(vote(&["60", "20", "20", "60"]).as_deref(), Some("60"));
    }

    #[test]
    fn test_all_missing() {
        let answers = vec![None, None];
        assert_eq!(majority_vote(&answers, AnswerKind::Number).unwrap(), None);
    }

    #[test]
    fn test_missing_entries_dropped() {
        let answers = vec![None, Some("5".to_string()), None, Some("7".to_string()), Some("7".to_string())];
        assert_eq!(
            majority_vote(&answers, AnswerKind::Number).unwrap().as_deref(),
            Some("7")
        );
    }

    #[test]
    fn test_empty_input_rejected() {
        assert!(matches!(
            majority_vote(&[], AnswerKind::Number),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn test_reduction_single_sample() {
        let answers = vec![Some("yes".to_string())];
        assert_eq!(
            majority_vote(&answers, AnswerKind::YesNo).unwrap().as_deref(),
            Some("yes")
        );
    }

    #[test]
    fn test_exact_equality_for_choices() {
        let answers: Vec<Option<String>> =
            ["B", "b", "B"].iter().map(|v| Some(v.to_string())).collect();
        // Canonical choices are uppercase; a stray lowercase form is its own class.
        assert_eq!(
            majority_vote(&answers, AnswerKind::MultipleChoice).unwrap().as_deref(),
            Some("B")
        );
    }

    /// Mode by exhaustive counting; `None` when the mode is not unique.
    fn brute_force_unique_mode(values: &[u8]) -> Option<u8> {
        let mut counts = [0usize; 6];
        for &v in values {
            counts[v as usize] += 1;
        }
        let best = *counts.iter().max().unwrap();
        let winners: Vec<u8> = (0u8..6)
            .filter(|&v| counts[v as usize] == best && best > 0)
            .collect();
        match winners.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }

    #[test]
    fn test_vote_matches_brute_force_mode() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for trial in 0..1000 {
            let size = rng.random_range(1..=15);
            let values: Vec<u8> = (0..size).map(|_| rng.random_range(0..=5)).collect();
            let answers: Vec<Option<String>> =
                values.iter().map(|v| Some(v.to_string())).collect();
            let voted = majority_vote(&answers, AnswerKind::Number).unwrap().unwrap();
            if let Some(mode) = brute_force_unique_mode(&values) {
                assert_eq!(voted, mode.to_string(), "trial {trial} values {values:?}");
            }
        }
    }

    #[test]
    fn test_permutation_stable_with_unique_mode() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let size = rng.random_range(1..=12);
            let values: Vec<u8> = (0..size).map(|_| rng.random_range(0..=5)).collect();
            let Some(mode) = brute_force_unique_mode(&values) else { continue };
            let mut shuffled = values.clone();
            shuffled.shuffle(&mut rng);
            let answers: Vec<Option<String>> =
                shuffled.iter().map(|v| Some(v.to_string())).collect();
            let voted = majority_vote(&answers, AnswerKind::Number).unwrap().unwrap();
            assert_eq!(voted, mode.to_string(), "{values:?} -> {shuffled:?}");
        }
    }

    #[test]
    fn test_appending_winner_preserves_winner() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let size = rng.random_range(1..=10);
            let mut answers: Vec<Option<String>> = (0..size)
                .map(|_| Some(rng.random_range(0u8..=5).to_string()))
                .collect();
            let winner = majority_vote(&answers, AnswerKind::Number).unwrap().unwrap();
            answers.push(Some(winner.clone()));
            let after = majority_vote(&answers, AnswerKind::Number).unwrap().unwrap();
            assert_eq!(winner, after);
        }
    }
}
