// Copyright 2026 The Hotspot IPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hotspot/gp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hotspot/error.hpp"

namespace hotspot {

void Hyperparameters::validate() const {
  if (!(signal_std > 0.0) || !(length_scales[0] > 0.0) || !(length_scales[1] > 0.0) ||
      !(noise_var >= 0.0) || !std::isfinite(signal_std) || !std::isfinite(length_scales[0]) ||
      !std::isfinite(length_scales[1]) || !std::isfinite(noise_var)) {
    std::ostringstream os;
    os << "invalid hyperparameters (sigma=" << signal_std << ", l=(" << length_scales[0] << ", "
       << length_scales[1] << "), noise_var=" << noise_var << ")";
    throw Error(ErrorCode::kInvalidArgument, os.str());
  }
}

double kernel(Point2 x, Point2 x2, const Hyperparameters& hyper) {
  const double dx = (x.x - x2.x) / hyper.length_scales[0];
  const double dy = (x.y - x2.y) / hyper.length_scales[1];
  return hyper.signal_std * hyper.signal_std * std::exp(-0.5 * (dx * dx + dy * dy));
}

namespace {

Eigen::MatrixXd gram(std::span<const Point2> points, const Hyperparameters& hyper) {
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd k(n, n);
  const double var = hyper.signal_std * hyper.signal_std;
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = var;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = kernel(points[i], points[j], hyper);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace

Eigen::LLT<Eigen::MatrixXd> factorize_covariance(const Eigen::MatrixXd& k_plus_noise, double signal_var,
                                                  double* jitter_used) {
  Eigen::LLT<Eigen::MatrixXd> llt(k_plus_noise);
  double jitter = 0.0;
  if (llt.info() != Eigen::Success) {
    for (jitter = 1e-8 * signal_var; jitter <= 1e-2 * signal_var * (1.0 + 1e-9); jitter *= 10.0) {
      Eigen::MatrixXd m = k_plus_noise;
      m.diagonal().array() += jitter;
      llt.compute(m);
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kNumerical, "covariance factorization failed: jitter retry exhausted");
    }
    std::ostringstream os;
    os << "covariance needed diagonal jitter " << jitter;
    log_warning(os.str());
  }
  if (jitter_used != nullptr) *jitter_used = jitter;
  return llt;
}

GPModel::GPModel(const Hyperparameters& hyper) : hyper_(hyper) { hyper_.validate(); }

GPModel::GPModel(const Hyperparameters& hyper, std::vector<Point2> points, std::vector<double> values)
    : hyper_(hyper) {
  hyper_.validate();
  set_data(std::move(points), std::move(values));
}

void GPModel::set_hyperparameters(const Hyperparameters& hyper) {
  hyper.validate();
  hyper_ = hyper;
  refactor();
}

void GPModel::add_observation(Point2 x, double y) {
  points_.push_back(x);
  values_.push_back(y);
  refactor();
}

void GPModel::add_observation(Point2 x, double y, const Hyperparameters& hyper) {
  hyper.validate();
  hyper_ = hyper;
  points_.push_back(x);
  values_.push_back(y);
  refactor();
}

void GPModel::set_data(std::vector<Point2> points, std::vector<double> values) {
  if (points.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "points and values must have equal length");
  }
  points_ = std::move(points);
  values_ = std::move(values);
  refactor();
}

void GPModel::refactor() {
  jitter_ = 0.0;
  if (points_.empty()) {
    llt_ = Eigen::LLT<Eigen::MatrixXd>();
    alpha_.resize(0);
    return;
  }
  Eigen::MatrixXd k = gram(points_, hyper_);
  k.diagonal().array() += hyper_.noise_var;
  llt_ = factorize_covariance(k, hyper_.signal_std * hyper_.signal_std, &jitter_);
  alpha_ = llt_.solve(Eigen::Map<const Eigen::VectorXd>(values_.data(), static_cast<Eigen::Index>(values_.size())));
}

Eigen::MatrixXd GPModel::cross_covariance(std::span<const Point2> queries) const {
  const auto n = static_cast<Eigen::Index>(points_.size());
  const auto m = static_cast<Eigen::Index>(queries.size());
  Eigen::MatrixXd ks(n, m);
  const double inv_l0 = 1.0 / hyper_.length_scales[0];
  const double inv_l1 = 1.0 / hyper_.length_scales[1];
  const double var = hyper_.signal_std * hyper_.signal_std;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Point2 q = queries[j];
    double* col = ks.col(j).data();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dx = (points_[i].x - q.x) * inv_l0;
      const double dy = (points_[i].y - q.y) * inv_l1;
      col[i] = -0.5 * (dx * dx + dy * dy);
    }
  }
  ks = var * ks.array().exp();
  return ks;
}

Prediction GPModel::predict(std::span<const Point2> queries) const {
  Prediction out;
  const double var = hyper_.signal_std * hyper_.signal_std;
  out.mean.assign(queries.size(), 0.0);
  out.std.assign(queries.size(), hyper_.signal_std);
  if (points_.empty() || queries.empty()) return out;

  Eigen::MatrixXd ks = cross_covariance(queries);
  const Eigen::VectorXd mean = ks.transpose() * alpha_;
  llt_.matrixL().solveInPlace(ks);
  const Eigen::VectorXd reduction = ks.colwise().squaredNorm().transpose();
  for (std::size_t j = 0; j < queries.size(); ++j) {
    out.mean[j] = mean[static_cast<Eigen::Index>(j)];
    out.std[j] = std::sqrt(std::max(var - reduction[static_cast<Eigen::Index>(j)], 0.0));
  }
  return out;
}

std::vector<double> GPModel::predict_mean(std::span<const Point2> queries) const {
  std::vector<double> out(queries.size(), 0.0);
  if (points_.empty() || queries.empty()) return out;
  // Chunked so the cross-covariance block stays cache sized on large grids.
  constexpr std::size_t kChunk = 512;
  for (std::size_t start = 0; start < queries.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, queries.size() - start);
    const Eigen::MatrixXd ks = cross_covariance(queries.subspan(start, count));
    const Eigen::VectorXd mean = ks.transpose() * alpha_;
    for (std::size_t j = 0; j < count; ++j) out[start + j] = mean[static_cast<Eigen::Index>(j)];
  }
  return out;
}

double GPModel::mean_ucb(std::span<const Point2> queries, double sqrt_beta) const {
  if (queries.empty()) return 0.0;
  if (points_.empty()) return sqrt_beta * hyper_.signal_std;
  const double var = hyper_.signal_std * hyper_.signal_std;
  Eigen::MatrixXd ks = cross_covariance(queries);
  const Eigen::VectorXd mean = ks.transpose() * alpha_;
  llt_.matrixL().solveInPlace(ks);
  const Eigen::VectorXd reduction = ks.colwise().squaredNorm().transpose();
  double total = 0.0;
  for (Eigen::Index j = 0; j < mean.size(); ++j) {
    total += mean[j] + sqrt_beta * std::sqrt(std::max(var - reduction[j], 0.0));
  }
  return total / static_cast<double>(queries.size());
}

double GPModel::nlml() const {
  if (points_.empty()) throw Error(ErrorCode::kInvalidArgument, "nlml needs at least one observation");
  const auto n = static_cast<double>(points_.size());
  const Eigen::Map<const Eigen::VectorXd> y(values_.data(), static_cast<Eigen::Index>(values_.size()));
  const double log_det_half = llt_.matrixLLT().diagonal().array().log().sum();
  return 0.5 * y.dot(alpha_) + log_det_half + 0.5 * n * std::log(2.0 * std::numbers::pi);
}

NlmlGradient nlml_with_gradient(std::span<const Point2> points, std::span<const double> values,
                                const Hyperparameters& hyper) {
  if (points.empty() || points.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "nlml needs matching, non-empty points and values");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd kf(n, n);
  Eigen::MatrixXd d0(n, n);
  Eigen::MatrixXd d1(n, n);
  const double var = hyper.signal_std * hyper.signal_std;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = (points[i].x - points[j].x) / hyper.length_scales[0];
      const double b = (points[i].y - points[j].y) / hyper.length_scales[1];
      d0(i, j) = a * a;
      d1(i, j) = b * b;
      kf(i, j) = var * std::exp(-0.5 * (a * a + b * b));
    }
  }
  Eigen::MatrixXd k = kf;
  k.diagonal().array() += hyper.noise_var;
  const Eigen::LLT<Eigen::MatrixXd> llt = factorize_covariance(k, var, nullptr);
  const Eigen::Map<const Eigen::VectorXd> y(values.data(), n);
  const Eigen::VectorXd alpha = llt.solve(y);

  NlmlGradient out;
  out.value = 0.5 * y.dot(alpha) + llt.matrixLLT().diagonal().array().log().sum() +
              0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  // d nlml / d theta = -1/2 tr((alpha alpha^T - K^-1) dK/dtheta)
  Eigen::MatrixXd w = llt.solve(Eigen::MatrixXd::Identity(n, n));
  w.noalias() -= alpha * alpha.transpose();
  // w now holds K^-1 - alpha alpha^T, hence the sign flip below.
  out.gradient[0] = 0.5 * (w.array() * kf.array()).sum() * 2.0;
  out.gradient[1] = 0.5 * (w.array() * kf.array() * d0.array()).sum();
  out.gradient[2] = 0.5 * (w.array() * kf.array() * d1.array()).sum();
  out.gradient[3] = 0.5 * hyper.noise_var * w.trace();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMemory = 6;

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

Eigen::VectorXd project(const Eigen::VectorXd& x, const Bounds& b) {
  return x.cwiseMax(b.lower).cwiseMin(b.upper);
}

class LogSpaceObjective {
 public:
  LogSpaceObjective(const GPModel& model, const Hyperparameters& base, bool fix_noise)
      : model_(model), base_(base), fix_noise_(fix_noise) {}

  int dimension() const { return fix_noise_ ? 3 : 4; }

  Eigen::VectorXd encode(const Hyperparameters& h) const {
    Eigen::VectorXd x(dimension());
    x[0] = std::log(h.signal_std);
    x[1] = std::log(h.length_scales[0]);
    x[2] = std::log(h.length_scales[1]);
    if (!fix_noise_) x[3] = std::log(std::max(h.noise_var, 1e-10));
    return x;
  }

  Hyperparameters decode(const Eigen::VectorXd& x) const {
    Hyperparameters h = base_;
    h.signal_std = std::exp(x[0]);
    h.length_scales = {std::exp(x[1]), std::exp(x[2])};
    if (!fix_noise_) h.noise_var = std::exp(x[3]);
    return h;
  }

  // Returns +inf on numerical failure.
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    try {
      const NlmlGradient r = nlml_with_gradient(model_.points(), model_.values(), decode(x));
      if (!std::isfinite(r.value)) return std::numeric_limits<double>::infinity();
      if (grad != nullptr) {
        grad->resize(dimension());
        for (int i = 0; i < dimension(); ++i) (*grad)[i] = r.gradient[static_cast<std::size_t>(i)];
      }
      return r.value;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  }

 private:
  const GPModel& model_;
  Hyperparameters base_;
  bool fix_noise_;
};

struct StartResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
};

StartResult minimize_from(const LogSpaceObjective& objective, Eigen::VectorXd x, const Bounds& bounds,
                          int max_iterations) {
  x = project(x, bounds);
  Eigen::VectorXd g;
  double f = objective(x, &g);
  if (!std::isfinite(f)) return {};

  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;
  for (int iter = 0; iter < max_iterations; ++iter) {
    // Projected-gradient stationarity test.
    const Eigen::VectorXd pg = project(x - g, bounds) - x;
    if (pg.lpNorm<Eigen::Infinity>() < 1e-7) break;

    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alphas(memory.size());
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      const auto& [s, yv] = memory[static_cast<std::size_t>(i)];
      alphas[static_cast<std::size_t>(i)] = s.dot(q) / yv.dot(s);
      q -= alphas[static_cast<std::size_t>(i)] * yv;
    }
    if (!memory.empty()) {
      const auto& [s, yv] = memory.back();
      q *= s.dot(yv) / yv.dot(yv);
    } else {
      q /= std::max(1.0, g.norm());
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
      const auto& [s, yv] = memory[i];
      const double beta = yv.dot(q) / yv.dot(s);
      q += (alphas[i] - beta) * s;
    }
    Eigen::VectorXd direction = -q;
    // Freeze coordinates pinned at a bound and pushing outward.
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if ((x[i] <= bounds.lower[i] && direction[i] < 0) || (x[i] >= bounds.upper[i] && direction[i] > 0)) {
        direction[i] = 0.0;
      }
    }
    if (g.dot(direction) >= 0.0) {
      memory.clear();
      direction = -g / std::max(1.0, g.norm());
    }

    double step = 1.0;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new;
    double f_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = project(x + step * direction, bounds);
      f_new = objective(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(x_new - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd yv = g_new - g;
    if (s.dot(yv) > 1e-12) {
      memory.emplace_back(s, yv);
      if (memory.size() > kMemory) memory.pop_front();
    }
    const double decrease = f - f_new;
    x = x_new;
    f = f_new;
    g = g_new;
    if (decrease < 1e-10 * (1.0 + std::abs(f))) break;
  }
  return {x, f};
}

double bounding_diagonal(const std::vector<Point2>& points) {
  double x0 = points.front().x, x1 = x0, y0 = points.front().y, y1 = y0;
  for (const Point2& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return std::hypot(x1 - x0, y1 - y0);
}

}  // namespace

OptimizeResult optimize_hyperparameters(const GPModel& model, const Hyperparameters& init, bool fix_noise,
                                        const OptimizeOptions& options) {
  init.validate();
  if (model.size() < 2) throw Error(ErrorCode::kInvalidArgument, "hyperparameter optimization needs >= 2 observations");

  const LogSpaceObjective objective(model, init, fix_noise);
  const int dim = objective.dimension();
  double diameter = options.domain_diameter > 0.0 ? options.domain_diameter : bounding_diagonal(model.points());
  diameter = std::max(diameter, 1e-3);

  Bounds bounds{Eigen::VectorXd(dim), Eigen::VectorXd(dim)};
  bounds.lower[0] = std::log(1e-3);
  bounds.upper[0] = std::log(1e3);
  bounds.lower[1] = bounds.lower[2] = std::log(1e-2);
  bounds.upper[1] = bounds.upper[2] = std::log(10.0 * diameter);
  if (!fix_noise) {
    bounds.lower[3] = std::log(1e-10);
    bounds.upper[3] = std::log(1e2);
  }

  const Eigen::VectorXd x0 = objective.encode(init);
  const double f_init = objective(x0, nullptr);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> perturb(-1.5, 1.5);
  StartResult best;
  const int starts = std::max(1, options.restarts);
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd start = x0;
    if (s > 0) {
      for (int i = 0; i < dim; ++i) start[i] += perturb(rng);
    }
    StartResult r = minimize_from(objective, start, bounds, options.max_iterations);
    if (r.f < best.f) best = std::move(r);
  }

  OptimizeResult out;
  if (!std::isfinite(best.f)) {
    log_warning("hyperparameter optimization failed from every start; keeping initial values");
    out.hyper = init;
    out.nlml = f_init;
    out.status = OptimizeStatus::kFailed;
    return out;
  }
  if (std::isfinite(f_init) && !(best.f < f_init)) {
    out.hyper = init;
    out.nlml = f_init;
    out.status = OptimizeStatus::kNoImprovement;
    return out;
  }
  out.hyper = objective.decode(best.x);
  out.nlml = best.f;
  out.status = OptimizeStatus::kImproved;
  return out;
}

}  // namespace hotspot
