// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eigtrack/matching.hpp"

namespace eigtrack::matching {
namespace {

// Square assignment state on the zero-padded matrix.
class SquareSolver {
 public:
  explicit SquareSolver(const Eigen::MatrixXd& cost)
      : rows_(static_cast<int>(cost.rows())),
        cols_(static_cast<int>(cost.cols())),
        size_(std::max(rows_, cols_)),
        padded_(Eigen::MatrixXd::Zero(size_, size_)) {
    padded_.topLeftCorner(rows_, cols_) = cost;
    const double scale = std::max(1.0, padded_.cwiseAbs().maxCoeff());
    tight_tolerance_ = 1e-12 * scale * size_;
  }

  void solve() {
    kuhn_munkres();
    lexicographic_refinement();
  }

  int column_of(int row) const { return col_of_row_[static_cast<std::size_t>(row)]; }

 private:
  double reduced(int i, int j) const { return padded_(i, j) - u_[i + 1] - v_[j + 1]; }
  bool tight(int i, int j) const { return reduced(i, j) <= tight_tolerance_; }

  // O(n^3) shortest augmenting path with potentials; 1-based bookkeeping,
  // column 0 is the virtual root.
  void kuhn_munkres() {
    const int n = size_;
    const double inf = std::numeric_limits<double>::infinity();
    u_.assign(n + 1, 0.0);
    v_.assign(n + 1, 0.0);
    std::vector<int> p(n + 1, 0);
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
      p[0] = i;
      int j0 = 0;
      std::vector<double> minv(n + 1, inf);
      std::vector<char> used(n + 1, 0);
      do {
        used[j0] = 1;
        const int i0 = p[j0];
        double delta = inf;
        int j1 = 0;
        for (int j = 1; j <= n; ++j) {
          if (used[j]) continue;
          const double cur = padded_(i0 - 1, j - 1) - u_[i0] - v_[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (int j = 0; j <= n; ++j) {
          if (used[j]) {
            u_[p[j]] += delta;
            v_[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        const int j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0 != 0);
    }
    col_of_row_.assign(n, -1);
    row_of_col_.assign(n, -1);
    for (int j = 1; j <= n; ++j) {
      col_of_row_[p[j] - 1] = j - 1;
      row_of_col_[j - 1] = p[j] - 1;
    }
  }

  // Every optimal assignment uses only zero-reduced-cost edges of the final
  // duals. Walk rows in order and give each the smallest column that still
  // admits a perfect matching on the remaining tight edges.
  void lexicographic_refinement() {
    locked_col_.assign(size_, 0);
    for (int i = 0; i < size_; ++i) {
      for (int j = 0; j < size_; ++j) {
        if (locked_col_[j]) continue;
        if (col_of_row_[i] == j) break;
        if (tight(i, j) && try_reassign(i, j)) break;
      }
      locked_col_[col_of_row_[i]] = 1;
    }
  }

  bool try_reassign(int row, int col) {
    const auto saved_cols = col_of_row_;
    const auto saved_rows = row_of_col_;
    const int displaced = row_of_col_[col];
    const int freed = col_of_row_[row];
    col_of_row_[row] = col;
    row_of_col_[col] = row;
    row_of_col_[freed] = -1;
    col_of_row_[displaced] = -1;

    locked_col_[col] = 1;
    std::vector<char> visited(size_, 0);
    const bool ok = augment(displaced, visited);
    locked_col_[col] = 0;
    if (!ok) {
      col_of_row_ = saved_cols;
      row_of_col_ = saved_rows;
    }
    return ok;
  }

  bool augment(int row, std::vector<char>& visited) {
    for (int j = 0; j < size_; ++j) {
      if (locked_col_[j] || visited[j] || !tight(row, j)) continue;
      visited[j] = 1;
      if (row_of_col_[j] < 0 || augment(row_of_col_[j], visited)) {
        col_of_row_[row] = j;
        row_of_col_[j] = row;
        return true;
      }
    }
    return false;
  }

  int rows_;
  int cols_;
  int size_;
  Eigen::MatrixXd padded_;
  double tight_tolerance_ = 0.0;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<int> col_of_row_;
  std::vector<int> row_of_col_;
  std::vector<char> locked_col_;
};

bool near(double a, double b) { return std::abs(a - b) <= kAmbiguityTolerance; }

}  // namespace

std::optional<int> Assignment::column_of(int row) const {
  for (const auto& [r, c] : pairs) {
    if (r == row) return c;
  }
  return std::nullopt;
}

double assignment_cost(const Eigen::MatrixXd& cost, std::span<const std::pair<int, int>> pairs) {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& [r, c] : pairs) values.push_back(cost(r, c));
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

Assignment hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() == 0 || cost.cols() == 0) {
    throw std::invalid_argument("hungarian: empty cost matrix");
  }
  if (!cost.allFinite()) {
    throw std::invalid_argument("hungarian: cost matrix has non-finite entries");
  }
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());

  SquareSolver solver(cost);
  solver.solve();

  Assignment result;
  std::vector<char> col_used(static_cast<std::size_t>(cols), 0);
  for (int i = 0; i < rows; ++i) {
    const int j = solver.column_of(i);
    if (j < cols) {
      result.pairs.emplace_back(i, j);
      col_used[static_cast<std::size_t>(j)] = 1;
    } else {
      result.unmatched_rows.push_back(i);
    }
  }
  for (int j = 0; j < cols; ++j) {
    if (!col_used[static_cast<std::size_t>(j)]) result.unmatched_cols.push_back(j);
  }
  result.total_cost = assignment_cost(cost, result.pairs);

  result.ambiguous.assign(result.pairs.size(), false);
  for (std::size_t a = 0; a < result.pairs.size(); ++a) {
    const auto [r, c] = result.pairs[a];
    bool flag = false;
    for (std::size_t b = 0; b < result.pairs.size() && !flag; ++b) {
      if (a == b) continue;
      const auto [r2, c2] = result.pairs[b];
      flag = near(cost(r, c) + cost(r2, c2), cost(r, c2) + cost(r2, c));
    }
    for (int c2 : result.unmatched_cols) flag = flag || near(cost(r, c), cost(r, c2));
    for (int r2 : result.unmatched_rows) flag = flag || near(cost(r, c), cost(r2, c));
    result.ambiguous[a] = flag;
  }
  return result;
}

}  // namespace eigtrack::matching
