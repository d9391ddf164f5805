#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fcd/descriptor.hpp"
#include "fcd/errors.hpp"

namespace fcd {

// One detection hypothesis: a contour descriptor plus its confidence,
// which must lie strictly inside (0, 1).
struct Proposal {
  FourierDescriptor fd;
  double score = 0.5;
};

// Outcome of matching rows (predictions) against columns (targets).
struct MatchResult {
  std::vector<std::pair<int, int>> positives;  // (row, col), one col use per
                                               // round, rows used at most once
  std::vector<int> negatives;                  // unmatched rows, ascending
};

// Minimum-total-cost pairing of (row, col), sorted by row.
struct Assignment {
  std::vector<std::pair<int, int>> pairs;
  double total_cost = 0.0;
};

// Cost of assigning a prediction to a target: -log(score) plus lambda times
// the regression distance between the two descriptors (see
// regression_loss).  Throws ScoreOutOfRange unless score is strictly inside
// (0, 1).
double pair_cost(const Proposal& pred, const FourierDescriptor& target,
                 double lambda, double alpha1, double alpha2, int n = 400);

// Full cost matrix: entry (i, j) = pair_cost(preds[i], targets[j], ...).
Eigen::MatrixXd build_cost_matrix(const std::vector<Proposal>& preds,
                                  const std::vector<FourierDescriptor>& targets,
                                  double lambda, double alpha1, double alpha2,
                                  int n = 400);

// Optimal one-to-one partial assignment covering min(rows, cols) pairs by
// shortest augmenting paths.  Entries may be +inf to forbid a pairing; rows
// consisting only of +inf are never matched.  Throws Infeasible when no
// complete finite-cost assignment exists, and Error for NaN entries or an
// empty matrix.
Assignment hungarian(const Eigen::MatrixXd& cost);

// Repeated assignment: runs `rounds` passes of hungarian, after each pass
// masking the matched rows with +inf so later passes must pick fresh rows.
// Columns may be re-used across passes, so each target collects up to
// `rounds` distinct predictions.  Rows whose entries are all +inf drop out;
// remaining unmatched rows become negatives.
MatchResult dense_match(const Eigen::MatrixXd& cost, int rounds);

// The n_q highest-scoring proposals (ties keep the earlier index), in
// descending score order.  Throws LengthMismatch when scores and
// descriptors disagree in length and NotEnoughProposals when fewer than n_q
// candidates exist.
std::vector<Proposal> select_top_proposals(
    const std::vector<double>& scores,
    const std::vector<FourierDescriptor>& fds, int n_q);

}  // namespace fcd
