use nalgebra::DVector;

use super::{DistanceFn, EvalError, Metric};

/// Average precision of one ranking: mean over relevant ranks `r` of the
/// precision at `r`. `None` when nothing is relevant.
pub fn average_precision(ranked_relevance: &[bool]) -> Option<f64> {
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (r, &rel) in ranked_relevance.iter().enumerate() {
        if rel {
            hits += 1;
            sum += hits as f64 / (r + 1) as f64;
        }
    }
    (hits > 0).then(|| sum / hits as f64)
}

/// Database order for one query: ascending distance, ties by index.
pub fn rank_database(query: &DVector<f64>, db: &[DVector<f64>], dist: &DistanceFn) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = db.iter().enumerate().map(|(i, x)| (dist.distance(query, x), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    order.into_iter().map(|(_, i)| i).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapResult {
    pub map: f64,
    /// Per scored query, in input order.
    pub average_precisions: Vec<f64>,
    /// Queries with no relevant database item; left out of the mean.
    pub skipped: Vec<usize>,
}

/// Mean average precision. `relevance[q][i]` marks database item `i` as
/// relevant to query `q`. The metric is fitted on the database.
pub fn mean_average_precision(
    queries: &[DVector<f64>],
    db: &[DVector<f64>],
    relevance: &[Vec<bool>],
    metric: Metric,
) -> Result<MapResult, EvalError> {
    if relevance.len() != queries.len() {
        return Err(EvalError::Invalid(format!(
            "{} relevance lists for {} queries",
            relevance.len(),
            queries.len()
        )));
    }
    if let Some(q) = relevance.iter().position(|r| r.len() != db.len()) {
        return Err(EvalError::Invalid(format!(
            "relevance list of query {q} has length {}, database has {}",
            relevance[q].len(),
            db.len()
        )));
    }
    if db.is_empty() {
        return Err(EvalError::Invalid("empty database".into()));
    }
    let dist = DistanceFn::fit(metric, db)?;
    let mut aps = Vec::with_capacity(queries.len());
    let mut skipped = Vec::new();
    for (q, query) in queries.iter().enumerate() {
        let ranked: Vec<bool> = rank_database(query, db, &dist).into_iter().map(|i| relevance[q][i]).collect();
        match average_precision(&ranked) {
            Some(ap) => aps.push(ap),
            None => skipped.push(q),
        }
    }
    if !skipped.is_empty() {
        log::warn!("{} queries have no relevant item and were left out", skipped.len());
    }
    if aps.is_empty() {
        return Err(EvalError::Invalid("no query has a relevant item".into()));
    }
    Ok(MapResult {
        map: aps.iter().sum::<f64>() / aps.len() as f64,
        average_precisions: aps,
        skipped,
    })
}

/// Each query against every representation except itself; relevant means
/// same label.
pub fn leave_one_out_map(
    reps: &[DVector<f64>],
    labels: &[usize],
    queries: &[usize],
    metric: Metric,
) -> Result<MapResult, EvalError> {
    let mut per_query = Vec::with_capacity(queries.len());
    let mut skipped = Vec::new();
    for (qi, &q) in queries.iter().enumerate() {
        let others: Vec<usize> = (0..reps.len()).filter(|&i| i != q).collect();
        let db: Vec<DVector<f64>> = others.iter().map(|&i| reps[i].clone()).collect();
        let rel = vec![others.iter().map(|&i| labels[i] == labels[q]).collect::<Vec<_>>()];
        match mean_average_precision(std::slice::from_ref(&reps[q]), &db, &rel, metric) {
            Ok(r) => per_query.push(r.map),
            Err(EvalError::Invalid(_)) if rel[0].iter().all(|&b| !b) => skipped.push(qi),
            Err(e) => return Err(e),
        }
    }
    if per_query.is_empty() {
        return Err(EvalError::Invalid("no query has a relevant item".into()));
    }
    Ok(MapResult {
        map: per_query.iter().sum::<f64>() / per_query.len() as f64,
        average_precisions: per_query,
        skipped,
    })
}
