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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hotspot/geometry.hpp"

namespace hotspot {

/// Squared-exponential ARD kernel parameters.
struct Hyperparameters {
  double signal_std = 1.0;
  std::array<double, 2> length_scales{1.0, 1.0};
  double noise_var = 0.0;

  void validate() const;
  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// sigma^2 exp(-sum_d (x_d - x2_d)^2 / (2 l_d^2))
double kernel(Point2 x, Point2 x2, const Hyperparameters& hyper);

struct Prediction {
  std::vector<double> mean;
  std::vector<double> std;
};

/// Zero-mean GP regression model. Every mutation refactors (K + w^2 I)
/// immediately, so const members are safe to call concurrently.
class GPModel {
 public:
  explicit GPModel(const Hyperparameters& hyper);
  GPModel(const Hyperparameters& hyper, std::vector<Point2> points, std::vector<double> values);

  void set_hyperparameters(const Hyperparameters& hyper);
  void add_observation(Point2 x, double y);
  /// Appends an observation and swaps hyperparameters with one refactor.
  void add_observation(Point2 x, double y, const Hyperparameters& hyper);
  void set_data(std::vector<Point2> points, std::vector<double> values);

  const Hyperparameters& hyperparameters() const { return hyper_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  /// Diagonal jitter that the last factorization needed (0 when none).
  double jitter() const { return jitter_; }

  Prediction predict(std::span<const Point2> queries) const;
  std::vector<double> predict_mean(std::span<const Point2> queries) const;

  /// Mean of mu(x) + sqrt_beta * sigma(x) over the given points.
  double mean_ucb(std::span<const Point2> queries, double sqrt_beta) const;

  /// Negative log marginal likelihood of the current data.
  double nlml() const;

 private:
  void refactor();
  Eigen::MatrixXd cross_covariance(std::span<const Point2> queries) const;

  Hyperparameters hyper_;
  std::vector<Point2> points_;
  std::vector<double> values_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

/// Cholesky of K + (w^2 + jitter) I with the escalating jitter policy:
/// 1e-8 sigma^2, x10 per retry, up to 1e-2 sigma^2. Throws kNumerical when
/// every level fails.
Eigen::LLT<Eigen::MatrixXd> factorize_covariance(const Eigen::MatrixXd& k_plus_noise, double signal_var,
                                                  double* jitter_used);

struct NlmlGradient {
  double value = 0.0;
  /// d/d log(sigma), d/d log(l1), d/d log(l2), d/d log(w^2).
  std::array<double, 4> gradient{};
};

NlmlGradient nlml_with_gradient(std::span<const Point2> points, std::span<const double> values,
                                const Hyperparameters& hyper);

struct OptimizeOptions {
  int restarts = 5;
  int max_iterations = 200;
  /// Upper length-scale bound is 10x this; 0 means the data bounding-box diagonal.
  double domain_diameter = 0.0;
  std::uint64_t seed = 0x5eed;
};

enum class OptimizeStatus { kImproved, kNoImprovement, kFailed };

struct OptimizeResult {
  Hyperparameters hyper;
  double nlml = 0.0;
  OptimizeStatus status = OptimizeStatus::kNoImprovement;
};

/// Multi-start projected L-BFGS on log-parameters. Never returns a worse
/// NLML than `init`; when every start fails numerically returns `init` with
/// status kFailed.
OptimizeResult optimize_hyperparameters(const GPModel& model, const Hyperparameters& init, bool fix_noise,
                                        const OptimizeOptions& options = {});

}  // namespace hotspot
