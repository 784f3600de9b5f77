// Copyright 2026 The SRAIS Authors
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

#ifndef SRAIS_DENSITY_HPP
#define SRAIS_DENSITY_HPP

#include <srais/numeric.hpp>
#include <srais/random.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

/**
 * \file
 * \brief Log-space probability densities: Gaussian, Student-t, finite mixtures and
 * the Bayesian logistic-regression posterior.
 */

namespace srais {

enum class DensityKind { gaussian, student_t, mixture, unnormalized_target, kernel_mixture };

std::string_view to_string(DensityKind kind) noexcept;

/// A probability density on R^d, possibly known only up to a constant.
/**
 * All evaluation happens in log space. Implementations are immutable once built,
 * so a single instance may be evaluated from several threads; sampling only
 * mutates the caller's random source.
 */
class Density {
 public:
  virtual ~Density() = default;

  virtual DensityKind kind() const noexcept = 0;
  virtual bool can_sample() const noexcept = 0;
  virtual bool normalized() const noexcept = 0;

  std::size_t dim() const noexcept { return dim_; }

  /// Log-density at `x`; may be -inf. Throws InputError on dimension mismatch.
  double log_density(const Eigen::Ref<const Vector>& x) const;

  /// Log-density of every column of `xs`.
  Vector log_densities(const Points& xs) const;

  /// `n` i.i.d. draws as columns. Throws CapabilityError when `!can_sample()`.
  Points sample(std::size_t n, Rng& rng) const;

 protected:
  explicit Density(std::size_t dim);

  virtual double log_density_unchecked(const Eigen::Ref<const Vector>& x) const = 0;
  virtual void sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const;

 private:
  std::size_t dim_;
};

using DensityPtr = std::shared_ptr<const Density>;

class Gaussian final : public Density {
 public:
  static std::shared_ptr<Gaussian> isotropic(Vector mean, double variance);
  static std::shared_ptr<Gaussian> diagonal(Vector mean, const Vector& variances);
  static std::shared_ptr<Gaussian> full(Vector mean, const Eigen::MatrixXd& covariance);

  DensityKind kind() const noexcept override { return DensityKind::gaussian; }
  bool can_sample() const noexcept override { return true; }
  bool normalized() const noexcept override { return true; }

  const Vector& mean() const noexcept { return mean_; }
  Eigen::MatrixXd covariance() const;

 protected:
  double log_density_unchecked(const Eigen::Ref<const Vector>& x) const override;
  void sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const override;

 private:
  Gaussian(Vector mean, const Eigen::MatrixXd& covariance);

  Vector mean_;
  Eigen::MatrixXd chol_;  // lower Cholesky factor of the covariance
  double log_norm_;
};

/// Multivariate Student-t with location `mean`, scale matrix and `nu` degrees of freedom.
class StudentT final : public Density {
 public:
  StudentT(Vector mean, const Eigen::MatrixXd& scale, double nu);

  /// Picks the scale so that the covariance equals `covariance`. Requires nu > 2.
  static std::shared_ptr<StudentT> with_covariance(Vector mean, const Eigen::MatrixXd& covariance,
                                                   double nu);

  DensityKind kind() const noexcept override { return DensityKind::student_t; }
  bool can_sample() const noexcept override { return true; }
  bool normalized() const noexcept override { return true; }

  const Vector& mean() const noexcept { return mean_; }
  double degrees_of_freedom() const noexcept { return nu_; }
  Eigen::MatrixXd scale() const;
  /// scale * nu / (nu - 2); throws CapabilityError when nu <= 2.
  Eigen::MatrixXd covariance() const;

 protected:
  double log_density_unchecked(const Eigen::Ref<const Vector>& x) const override;
  void sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const override;

 private:
  Vector mean_;
  Eigen::MatrixXd chol_;
  double nu_;
  double log_norm_;
};

/// Finite mixture sum_i weight_i * density_i. Weights must sum to one.
class Mixture final : public Density {
 public:
  struct Component {
    double weight;
    DensityPtr density;
  };

  explicit Mixture(std::vector<Component> components);

  DensityKind kind() const noexcept override { return DensityKind::mixture; }
  bool can_sample() const noexcept override { return can_sample_; }
  bool normalized() const noexcept override { return normalized_; }

  const std::vector<Component>& components() const noexcept { return components_; }

 protected:
  double log_density_unchecked(const Eigen::Ref<const Vector>& x) const override;
  void sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const override;

 private:
  std::vector<Component> components_;
  Vector log_weights_;
  bool can_sample_;
  bool normalized_;
};

/// Unnormalized posterior of Bayesian logistic regression with a Gamma hyperprior.
/**
 * Parameter layout is x = [omega (L entries), beta]. The model is
 *   beta ~ Gamma(a, b) (shape a, rate b),  omega_l | beta ~ N(0, 1/beta),
 *   P(c_i = 1 | z_i, omega) = sigmoid(omega^T z_i),  c_i in {-1, +1}.
 * The log-density is -inf whenever beta <= 0.
 */
class LogisticPosterior final : public Density {
 public:
  /// `features` holds one datapoint per row; `labels` entries must be -1 or +1.
  LogisticPosterior(Vector labels, Eigen::MatrixXd features, double a = 1.0, double b = 0.01);

  DensityKind kind() const noexcept override { return DensityKind::unnormalized_target; }
  bool can_sample() const noexcept override { return false; }
  bool normalized() const noexcept override { return false; }

  std::size_t num_features() const noexcept { return static_cast<std::size_t>(features_.cols()); }
  double shape() const noexcept { return a_; }
  double rate() const noexcept { return b_; }

  /// Analytic gradient of the log-density. Requires beta > 0.
  Vector gradient(const Eigen::Ref<const Vector>& x) const;

 protected:
  double log_density_unchecked(const Eigen::Ref<const Vector>& x) const override;

 private:
  Vector labels_;
  Eigen::MatrixXd features_;
  double a_;
  double b_;
  double log_prior_norm_;
};

enum class ToyTarget { cold_start, gaussian_mixture, anisotropic_mixture };

ToyTarget parse_toy_target(std::string_view name);
std::string_view to_string(ToyTarget target) noexcept;

struct ToyProblem {
  DensityPtr target;
  DensityPtr initial;  // also serves as the safe density
  Vector true_mean;
};

/// The three synthetic targets with their heavy-tailed starting densities.
/**
 * Lengths scale with 1/sqrt(d) so that the distance between the start and the
 * target does not depend on the dimension. The Student-t starting density has
 * covariance (5/d) I, which fixes its scale at (5/d)(nu-2)/nu I.
 */
ToyProblem toy_target(ToyTarget target, std::size_t dim, double nu = 3.0);

}  // namespace srais

#endif  // SRAIS_DENSITY_HPP
