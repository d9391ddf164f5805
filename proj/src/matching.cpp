#include "fcd/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fcd/loss.hpp"

namespace fcd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cost_matrix(const Eigen::MatrixXd& cost) {
  if (cost.rows() < 1 || cost.cols() < 1) {
    throw Error("cost matrix must have at least one row and one column");
  }
  if (cost.hasNaN()) {
    throw Error("cost matrix has NaN entries");
  }
}

// Shortest-augmenting-path assignment for rows <= cols, with potentials
// (Jonker-Volgenant style).  Entries may be +inf; an augmenting step whose
// cheapest reachable column is still at +inf proves that no complete
// finite-cost assignment exists.  Indices are 1-based inside; column 0 is
// the virtual root of each augmenting tree.  Returns p, where p[j] is the
// 1-based row matched to column j (0 = free).
std::vector<int> solve_rows_le_cols(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 == -1 || !(delta < kInf)) {
        throw Infeasible("no complete finite-cost assignment exists");
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    // Augment along the alternating path back to the root.
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  return p;
}

}  // namespace

double pair_cost(const Proposal& pred, const FourierDescriptor& target,
                 double lambda, double alpha1, double alpha2, int n) {
  if (!(pred.score > 0.0 && pred.score < 1.0)) {
    throw ScoreOutOfRange("score " + std::to_string(pred.score) +
                          " not strictly inside (0, 1)");
  }
  return -std::log(pred.score) +
         lambda * regression_loss(pred.fd, target, alpha1, alpha2, n);
}

Eigen::MatrixXd build_cost_matrix(const std::vector<Proposal>& preds,
                                  const std::vector<FourierDescriptor>& targets,
                                  double lambda, double alpha1, double alpha2,
                                  int n) {
  if (preds.empty() || targets.empty()) {
    throw Error("need at least one prediction and one target");
  }
  Eigen::MatrixXd cost(preds.size(), targets.size());
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      cost(i, j) = pair_cost(preds[static_cast<size_t>(i)],
                             targets[static_cast<size_t>(j)], lambda, alpha1,
                             alpha2, n);
    }
  }
  return cost;
}

Assignment hungarian(const Eigen::MatrixXd& cost) {
  check_cost_matrix(cost);
  const bool transposed = cost.rows() > cost.cols();
  const Eigen::MatrixXd oriented =
      transposed ? Eigen::MatrixXd(cost.transpose()) : cost;
  const std::vector<int> p = solve_rows_le_cols(oriented);

  Assignment out;
  for (int j = 1; j < static_cast<int>(p.size()); ++j) {
    if (p[j] == 0) continue;
    const int row = p[j] - 1;
    const int col = j - 1;
    if (transposed) {
      out.pairs.emplace_back(col, row);
    } else {
      out.pairs.emplace_back(row, col);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (const auto& [r, c] : out.pairs) out.total_cost += cost(r, c);
  return out;
}

MatchResult dense_match(const Eigen::MatrixXd& cost, int rounds) {
  check_cost_matrix(cost);
  if (rounds < 1) {
    throw Error("round count must be >= 1, got " + std::to_string(rounds));
  }

  const int rows = static_cast<int>(cost.rows());
  Eigen::MatrixXd work = cost;
  std::vector<char> matched(static_cast<size_t>(rows), 0);

  MatchResult result;
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> alive;
    for (int r = 0; r < rows; ++r) {
      if (!matched[static_cast<size_t>(r)] &&
          (work.row(r).array() < kInf).any()) {
        alive.push_back(r);
      }
    }
    if (alive.empty()) break;

    Eigen::MatrixXd sub(static_cast<Eigen::Index>(alive.size()), cost.cols());
    for (size_t i = 0; i < alive.size(); ++i) {
      sub.row(static_cast<Eigen::Index>(i)) = work.row(alive[i]);
    }
    const Assignment assignment = hungarian(sub);
    for (const auto& [sub_row, col] : assignment.pairs) {
      const int row = alive[static_cast<size_t>(sub_row)];
      result.positives.emplace_back(row, col);
      matched[static_cast<size_t>(row)] = 1;
      work.row(row).setConstant(kInf);
    }
  }

  for (int r = 0; r < rows; ++r) {
    if (!matched[static_cast<size_t>(r)]) result.negatives.push_back(r);
  }
  return result;
}

std::vector<Proposal> select_top_proposals(
    const std::vector<double>& scores,
    const std::vector<FourierDescriptor>& fds, int n_q) {
  if (scores.size() != fds.size()) {
    throw LengthMismatch("got " + std::to_string(scores.size()) +
                         " scores but " + std::to_string(fds.size()) +
                         " descriptors");
  }
  if (n_q < 0) {
    throw Error("n_q must be >= 0, got " + std::to_string(n_q));
  }
  if (static_cast<size_t>(n_q) > scores.size()) {
    throw NotEnoughProposals("asked for " + std::to_string(n_q) +
                             " proposals but only " +
                             std::to_string(scores.size()) + " candidates");
  }

  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
    return scores[static_cast<size_t>(l)] > scores[static_cast<size_t>(r)];
  });

  std::vector<Proposal> out;
  out.reserve(static_cast<size_t>(n_q));
  for (int i = 0; i < n_q; ++i) {
    const size_t idx = static_cast<size_t>(order[static_cast<size_t>(i)]);
    out.push_back({fds[idx], scores[idx]});
  }
  return out;
}

}  // namespace fcd
