// Copyright (c) The eigtrack authors.
// SPDX-License-Identifier: Apache-2.0

#include "eigtrack/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eigtrack::matching {

double eigvec_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const SparseMatrix& M) {
  if (u.size() != v.size() || u.size() != M.rows()) {
    throw MeshMismatch("eigvec_distance: vectors live on different meshes");
  }
  const Eigen::VectorXd diff = u - v;
  const Eigen::VectorXd sum = u + v;
  const double minus = diff.dot(M * diff);
  const double plus = sum.dot(M * sum);
  return std::sqrt(std::max(0.0, std::min(minus, plus)));
}

CostMatrix build_cost_matrix(const EigenSet& source, const EigenSet& target,
                             const SparseMatrix& M, double weight) {
  if (source.mesh != target.mesh) {
    throw MeshMismatch("build_cost_matrix: eigensets come from different meshes");
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("build_cost_matrix: weight must be finite and non-negative");
  }
  CostMatrix cost;
  cost.weight = weight;
  cost.mu_source = source.mu;
  cost.mu_target = target.mu;
  cost.entries.resize(static_cast<Eigen::Index>(source.size()),
                      static_cast<Eigen::Index>(target.size()));
  for (std::size_t j = 0; j < source.size(); ++j) {
    for (std::size_t l = 0; l < target.size(); ++l) {
      cost.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) =
          std::abs(source[j].lambda - target[l].lambda) +
          weight * eigvec_distance(source[j].vec, target[l].vec, M);
    }
  }
  return cost;
}

Assignment match_sets(const EigenSet& source, const EigenSet& target, const SparseMatrix& M,
                      double weight) {
  return hungarian(build_cost_matrix(source, target, M, weight));
}

int CurveFamily::curve_at(int grid_index, int sorted_index) const {
  return owner_.at(static_cast<std::size_t>(grid_index)).at(static_cast<std::size_t>(sorted_index));
}

std::vector<CurveEvent> CurveFamily::events() const {
  std::vector<CurveEvent> events;
  const int last = static_cast<int>(sets_.size()) - 1;
  for (const auto& curve : curves_) {
    if (curve.points.front().grid_index > 0) {
      events.push_back({curve.id, CurveEvent::Kind::kBirth, curve.birth_mu()});
    }
    if (curve.points.back().grid_index < last) {
      events.push_back({curve.id, CurveEvent::Kind::kDeath, curve.death_mu()});
    }
  }
  return events;
}

CurveFamily track_curves(std::vector<EigenSet> sets, const SparseMatrix& M,
                         const TrackingOptions& options) {
  if (sets.size() < 2) {
    throw std::invalid_argument("track_curves: the grid needs at least two points");
  }
  for (std::size_t k = 1; k < sets.size(); ++k) {
    if (!(sets[k - 1].mu < sets[k].mu)) {
      throw std::invalid_argument("track_curves: parameter grid must be strictly increasing");
    }
    if (sets[k].mesh != sets[0].mesh) {
      throw MeshMismatch("track_curves: eigensets come from different meshes");
    }
  }

  CurveFamily family;
  family.sets_ = std::move(sets);
  const auto& all = family.sets_;
  family.owner_.resize(all.size());
  for (std::size_t k = 0; k < all.size(); ++k) family.owner_[k].assign(all[k].size(), -1);

  const auto start_curve = [&family](int k, int idx) {
    Curve curve;
    curve.id = static_cast<int>(family.curves_.size());
    const auto& pair = family.sets_[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)];
    curve.points.push_back({k, family.sets_[static_cast<std::size_t>(k)].mu, pair.lambda, idx});
    family.owner_[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] = curve.id;
    family.curves_.push_back(std::move(curve));
  };

  for (int idx = 0; idx < static_cast<int>(all[0].size()); ++idx) start_curve(0, idx);

  for (std::size_t k = 0; k + 1 < all.size(); ++k) {
    const auto& left = all[k];
    const auto& right = all[k + 1];
    Assignment step;
    if (left.empty() || right.empty()) {
      for (int r = 0; r < static_cast<int>(left.size()); ++r) step.unmatched_rows.push_back(r);
      for (int c = 0; c < static_cast<int>(right.size()); ++c) step.unmatched_cols.push_back(c);
    } else {
      step = match_sets(left, right, M, options.weight);
    }
    for (const auto& [r, c] : step.pairs) {
      const double distance = eigvec_distance(left[static_cast<std::size_t>(r)].vec,
                                              right[static_cast<std::size_t>(c)].vec, M);
      if (!(distance <= options.gate)) continue;
      const int id = family.owner_[k][static_cast<std::size_t>(r)];
      family.owner_[k + 1][static_cast<std::size_t>(c)] = id;
      family.curves_[static_cast<std::size_t>(id)].points.push_back(
          {static_cast<int>(k + 1), right.mu, right[static_cast<std::size_t>(c)].lambda, c});
    }
    for (int c = 0; c < static_cast<int>(right.size()); ++c) {
      if (family.owner_[k + 1][static_cast<std::size_t>(c)] < 0) start_curve(static_cast<int>(k + 1), c);
    }
    family.steps_.push_back(std::move(step));
  }
  return family;
}

CurveFamily track_curves(EigenSweep& sweep, std::span<const double> grid,
                         const TrackingOptions& options) {
  return track_curves(sweep.over(grid), sweep.problem().mass(), options);
}

void write_curves_csv(std::ostream& out, const CurveFamily& family) {
  out << "curve_id,mu,lambda,sorted_index\n";
  out.precision(17);
  for (const auto& curve : family.curves()) {
    for (const auto& p : curve.points) {
      out << curve.id << ',' << p.mu << ',' << p.lambda << ',' << p.sorted_index + 1 << '\n';
    }
  }
}

void write_events_csv(std::ostream& out, const CurveFamily& family) {
  out << "curve_id,event,mu\n";
  out.precision(17);
  for (const auto& e : family.events()) {
    out << e.curve_id << ',' << (e.kind == CurveEvent::Kind::kBirth ? "birth" : "death") << ','
        << e.mu << '\n';
  }
}

namespace {

const CurvePoint* point_at(const Curve& curve, int grid_index) {
  const int offset = grid_index - curve.points.front().grid_index;
  if (offset < 0 || offset >= static_cast<int>(curve.points.size())) return nullptr;
  return &curve.points[static_cast<std::size_t>(offset)];
}

double extrapolate(const CurvePoint& a, const CurvePoint& b, double mu) {
  return b.lambda + (b.lambda - a.lambda) * (mu - b.mu) / (b.mu - a.mu);
}

}  // namespace

std::vector<IntervalIndicator> interval_indicators(const CurveFamily& family,
                                                   const SparseMatrix& M,
                                                   const RefinementOptions& options) {
  const auto& sets = family.sets();
  std::vector<IntervalIndicator> indicators;
  for (std::size_t k = 0; k + 1 < sets.size(); ++k) {
    IntervalIndicator interval{sets[k].mu, sets[k + 1].mu, 0.0};
    const int left = static_cast<int>(k);
    const int right = left + 1;
    for (const auto& [r, c] : family.steps()[k].pairs) {
      const double distance = eigvec_distance(sets[k][static_cast<std::size_t>(r)].vec,
                                              sets[k + 1][static_cast<std::size_t>(c)].vec, M);
      double misfit = 0.0;
      if (distance <= options.gate) {
        const auto& curve = family.curves()[static_cast<std::size_t>(family.curve_at(left, r))];
        const CurvePoint* here = point_at(curve, left);
        const CurvePoint* next = point_at(curve, right);
        if (const CurvePoint* prev = point_at(curve, left - 1)) {
          misfit = std::abs(next->lambda - extrapolate(*prev, *here, next->mu));
        } else if (const CurvePoint* after = point_at(curve, right + 1)) {
          misfit = std::abs(here->lambda - extrapolate(*after, *next, here->mu));
        }
      }
      const double value = misfit / options.window_width +
                           options.weight * distance / std::numbers::sqrt2;
      interval.value = std::max(interval.value, value);
    }
    indicators.push_back(interval);
  }
  return indicators;
}

RefinementResult refine_grid(std::span<const double> initial, const EigenSetProvider& provider,
                             const SparseMatrix& M, const RefinementOptions& options) {
  if (options.budget < 0) throw std::invalid_argument("refine_grid: budget must be >= 0");
  if (!(options.theta > 0.0)) throw std::invalid_argument("refine_grid: theta must be positive");
  if (!(options.window_width > 0.0)) {
    throw std::invalid_argument("refine_grid: window width must be positive");
  }

  RefinementResult result;
  result.grid.assign(initial.begin(), initial.end());
  std::sort(result.grid.begin(), result.grid.end());
  result.grid.erase(std::unique(result.grid.begin(), result.grid.end()), result.grid.end());
  if (result.grid.size() < 2) {
    throw std::invalid_argument("refine_grid: the initial grid needs at least two points");
  }

  std::map<double, EigenSet> cache;
  const auto solve = [&](double mu) -> const EigenSet& {
    if (auto it = cache.find(mu); it != cache.end()) return it->second;
    return cache.emplace(mu, provider(mu)).first->second;
  };

  const TrackingOptions tracking{options.weight, options.gate};
  for (int iteration = 0;; ++iteration) {
    std::vector<EigenSet> sets;
    sets.reserve(result.grid.size());
    for (double mu : result.grid) sets.push_back(solve(mu));
    const CurveFamily family = track_curves(std::move(sets), M, tracking);

    RefinementStep step;
    step.iteration = iteration;
    step.indicators = interval_indicators(family, M, options);
    const auto worst = std::max_element(
        step.indicators.begin(), step.indicators.end(),
        [](const IntervalIndicator& a, const IntervalIndicator& b) { return a.value < b.value; });
    if (iteration >= options.budget || worst->value < options.theta) {
      result.history.push_back(std::move(step));
      break;
    }
    const double mid = 0.5 * (worst->mu_left + worst->mu_right);
    step.inserted = mid;
    result.history.push_back(std::move(step));
    result.grid.insert(std::upper_bound(result.grid.begin(), result.grid.end(), mid), mid);
  }
  return result;
}

void write_grid_csv(std::ostream& out, std::span<const double> grid) {
  out << "mu\n";
  out.precision(17);
  for (double mu : grid) out << mu << '\n';
}

void write_indicators_csv(std::ostream& out, const RefinementResult& result) {
  out << "iteration,mu_left,mu_right,indicator\n";
  out.precision(17);
  for (const auto& step : result.history) {
    for (const auto& interval : step.indicators) {
      out << step.iteration << ',' << interval.mu_left << ',' << interval.mu_right << ','
          << interval.value << '\n';
    }
  }
}

}  // namespace eigtrack::matching
