use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metrics::{Metric, MetricScores};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Movement {
    Up,
    Down,
    Same,
}

impl Movement {
    pub fn from_delta(delta: i64) -> Self {
        match delta.cmp(&0) {
            Ordering::Greater => Movement::Up,
            Ordering::Less => Movement::Down,
            Ordering::Equal => Movement::Same,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Movement::Up => "up",
            Movement::Down => "down",
            Movement::Same => "same",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedItem {
    pub label: String,
    pub score_left: f64,
    pub score_right: f64,
    /// 1-based.
    pub rank_left: usize,
    /// 1-based.
    pub rank_right: usize,
    /// `rank_left - rank_right`; positive means the item climbs on the right.
    pub delta: i64,
    pub movement: Movement,
}

/// Items in left-rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankComparison {
    pub left_name: String,
    pub right_name: String,
    pub items: Vec<RankedItem>,
    /// Labels dropped because a metric was undefined.
    pub excluded: Vec<String>,
}

impl RankComparison {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn tally(&self) -> HashMap<Movement, usize> {
        let mut t = HashMap::new();
        for item in &self.items {
            *t.entry(item.movement).or_insert(0) += 1;
        }
        t
    }

    pub fn get(&self, label: &str) -> Option<&RankedItem> {
        self.items.iter().find(|i| i.label == label)
    }
}

/// Descending-score ranks; equal scores are ordered by label.
fn ranks(labels: &[String], scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| labels[a].cmp(&labels[b]))
    });
    let mut rank = vec![0; labels.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    rank
}

pub fn rank_comparison_from(
    labels: &[String],
    left: &[f64],
    right: &[f64],
    left_name: &str,
    right_name: &str,
) -> Result<RankComparison> {
    if labels.len() != left.len() || left.len() != right.len() {
        return Err(Error::Validation("rank comparison inputs have different lengths".into()));
    }
    if labels.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 items to compare ranks, got {}",
            labels.len()
        )));
    }
    let rl = ranks(labels, left);
    let rr = ranks(labels, right);
    let mut items: Vec<RankedItem> = (0..labels.len())
        .map(|i| {
            let delta = rl[i] as i64 - rr[i] as i64;
            RankedItem {
                label: labels[i].clone(),
                score_left: left[i],
                score_right: right[i],
                rank_left: rl[i],
                rank_right: rr[i],
                delta,
                movement: Movement::from_delta(delta),
            }
        })
        .collect();
    items.sort_by_key(|i| i.rank_left);
    Ok(RankComparison {
        left_name: left_name.to_string(),
        right_name: right_name.to_string(),
        items,
        excluded: Vec::new(),
    })
}

/// Ranks journals by `left` and by `right`, skipping journals where either
/// metric is undefined.
pub fn rank_comparison(scores: &MetricScores, left: Metric, right: Metric) -> Result<RankComparison> {
    let mut labels = Vec::new();
    let (mut ls, mut rs) = (Vec::new(), Vec::new());
    let mut excluded = Vec::new();
    for r in &scores.records {
        match (r.metric(left), r.metric(right)) {
            (Some(a), Some(b)) => {
                labels.push(r.journal_id.clone());
                ls.push(a);
                rs.push(b);
            }
            _ => excluded.push(r.journal_id.clone()),
        }
    }
    let mut cmp = rank_comparison_from(&labels, &ls, &rs, left.as_str(), right.as_str())?;
    cmp.excluded = excluded;
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn identical_metrics_do_not_move() {
        let c = rank_comparison_from(&labels(&["a", "b", "c"]), &[3.0, 1.0, 2.0], &[3.0, 1.0, 2.0], "l", "r")
            .unwrap();
        assert!(c.items.iter().all(|i| i.delta == 0 && i.movement == Movement::Same));
    }

    #[test]
    fn reversal() {
        let c = rank_comparison_from(&labels(&["A", "B", "C"]), &[3.0, 2.0, 1.0], &[1.0, 2.0, 3.0], "l", "r")
            .unwrap();
        let deltas: Vec<i64> = c.items.iter().map(|i| i.delta).collect();
        assert_eq!(deltas, vec![-2, 0, 2]);
        assert_eq!(c.items[2].movement, Movement::Up);
    }

    #[test]
    fn ties_broken_by_label() {
        let c = rank_comparison_from(&labels(&["b", "a"]), &[1.0, 1.0], &[2.0, 1.0], "l", "r").unwrap();
        assert_eq!(c.get("a").unwrap().rank_left, 1);
        assert_eq!(c.get("b").unwrap().rank_left, 2);
        assert_eq!(c.get("b").unwrap().rank_right, 1);
    }

    #[test]
    fn too_few_items() {
        assert!(matches!(
            rank_comparison_from(&labels(&["a"]), &[1.0], &[1.0], "l", "r"),
            Err(Error::Degenerate(_))
        ));
    }
}
