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

#include <srais/density.hpp>
#include <srais/error.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace srais {

namespace {

Eigen::MatrixXd cholesky_or_throw(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string(what) + " must be square");
  }
  if (!m.isApprox(m.transpose(), 1e-12)) {
    throw InputError(std::string(what) + " must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw InputError(std::string(what) + " must be positive definite");
  }
  Eigen::MatrixXd l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any()) {
    throw InputError(std::string(what) + " must be positive definite");
  }
  return l;
}

double log_det_from_chol(const Eigen::MatrixXd& l) {
  return 2.0 * l.diagonal().array().log().sum();
}

void fill_standard_normal(Eigen::Ref<Vector> z, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
}

}  // namespace

std::string_view to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::gaussian: return "gaussian";
    case DensityKind::student_t: return "student_t";
    case DensityKind::mixture: return "mixture";
    case DensityKind::unnormalized_target: return "unnormalized_target";
    case DensityKind::kernel_mixture: return "kernel_mixture";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Density

Density::Density(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InputError("density dimension must be positive");
}

double Density::log_density(const Eigen::Ref<const Vector>& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_) {
    throw InputError("dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                     std::to_string(x.size()));
  }
  return log_density_unchecked(x);
}

Vector Density::log_densities(const Points& xs) const {
  if (static_cast<std::size_t>(xs.rows()) != dim_) {
    throw InputError("dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                     std::to_string(xs.rows()));
  }
  Vector out(xs.cols());
  for (Eigen::Index j = 0; j < xs.cols(); ++j) out(j) = log_density_unchecked(xs.col(j));
  return out;
}

Points Density::sample(std::size_t n, Rng& rng) const {
  if (!can_sample()) {
    throw CapabilityError("density of kind '" + std::string(to_string(kind())) +
                          "' cannot be sampled");
  }
  if (n == 0) throw InputError("sample count must be at least 1");
  Points out(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(n));
  sample_unchecked(out, rng);
  return out;
}

void Density::sample_unchecked(Eigen::Ref<Points>, Rng&) const {
  throw CapabilityError("sampling not implemented");
}

// ---------------------------------------------------------------------------
// Gaussian

Gaussian::Gaussian(Vector mean, const Eigen::MatrixXd& covariance)
    : Density(static_cast<std::size_t>(mean.size())), mean_(std::move(mean)) {
  if (covariance.rows() != mean_.size()) {
    throw InputError("covariance and mean dimensions differ");
  }
  chol_ = cholesky_or_throw(covariance, "covariance");
  const auto d = static_cast<double>(dim());
  log_norm_ = -0.5 * d * kLog2Pi - 0.5 * log_det_from_chol(chol_);
}

std::shared_ptr<Gaussian> Gaussian::isotropic(Vector mean, double variance) {
  if (!(variance > 0.0)) throw InputError("variance must be positive");
  const auto d = mean.size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d) * variance;
  return std::shared_ptr<Gaussian>(new Gaussian(std::move(mean), cov));
}

std::shared_ptr<Gaussian> Gaussian::diagonal(Vector mean, const Vector& variances) {
  if (variances.size() != mean.size()) throw InputError("variances and mean dimensions differ");
  if ((variances.array() <= 0.0).any()) throw InputError("variances must be positive");
  Eigen::MatrixXd cov = variances.asDiagonal();
  return std::shared_ptr<Gaussian>(new Gaussian(std::move(mean), cov));
}

std::shared_ptr<Gaussian> Gaussian::full(Vector mean, const Eigen::MatrixXd& covariance) {
  return std::shared_ptr<Gaussian>(new Gaussian(std::move(mean), covariance));
}

Eigen::MatrixXd Gaussian::covariance() const { return chol_ * chol_.transpose(); }

double Gaussian::log_density_unchecked(const Eigen::Ref<const Vector>& x) const {
  const Vector z = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

void Gaussian::sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const {
  Vector z(mean_.size());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    fill_standard_normal(z, rng);
    out.col(j) = mean_ + chol_.triangularView<Eigen::Lower>() * z;
  }
}

// ---------------------------------------------------------------------------
// StudentT

StudentT::StudentT(Vector mean, const Eigen::MatrixXd& scale, double nu)
    : Density(static_cast<std::size_t>(mean.size())), mean_(std::move(mean)), nu_(nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InputError("degrees of freedom must be positive");
  if (scale.rows() != mean_.size()) throw InputError("scale and mean dimensions differ");
  chol_ = cholesky_or_throw(scale, "scale");
  const auto d = static_cast<double>(dim());
  log_norm_ = std::lgamma(0.5 * (nu_ + d)) - std::lgamma(0.5 * nu_) -
              0.5 * d * std::log(nu_ * std::numbers::pi) - 0.5 * log_det_from_chol(chol_);
}

std::shared_ptr<StudentT> StudentT::with_covariance(Vector mean, const Eigen::MatrixXd& covariance,
                                                    double nu) {
  if (!(nu > 2.0)) throw InputError("covariance is only defined for nu > 2");
  return std::make_shared<StudentT>(std::move(mean), covariance * ((nu - 2.0) / nu), nu);
}

Eigen::MatrixXd StudentT::scale() const { return chol_ * chol_.transpose(); }

Eigen::MatrixXd StudentT::covariance() const {
  if (!(nu_ > 2.0)) throw CapabilityError("Student-t variance is infinite for nu <= 2");
  return scale() * (nu_ / (nu_ - 2.0));
}

double StudentT::log_density_unchecked(const Eigen::Ref<const Vector>& x) const {
  const Vector z = chol_.triangularView<Eigen::Lower>().solve(x - mean_);
  const auto d = static_cast<double>(dim());
  return log_norm_ - 0.5 * (nu_ + d) * std::log1p(z.squaredNorm() / nu_);
}

void StudentT::sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const {
  std::chi_squared_distribution<double> chi2(nu_);
  Vector z(mean_.size());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    fill_standard_normal(z, rng);
    const double g = chi2(rng);
    out.col(j) = mean_ + (chol_.triangularView<Eigen::Lower>() * z) * std::sqrt(nu_ / g);
  }
}

// ---------------------------------------------------------------------------
// Mixture

namespace {

std::size_t mixture_dim(const std::vector<Mixture::Component>& components) {
  if (components.empty()) throw InputError("mixture needs at least one component");
  if (!components.front().density) throw InputError("mixture component is null");
  return components.front().density->dim();
}

}  // namespace

Mixture::Mixture(std::vector<Component> components)
    : Density(mixture_dim(components)), components_(std::move(components)) {
  double total = 0.0;
  can_sample_ = true;
  normalized_ = true;
  log_weights_.resize(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto& c = components_[i];
    if (!c.density) throw InputError("mixture component is null");
    if (c.density->dim() != dim()) throw InputError("mixture components differ in dimension");
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
      throw InputError("mixture weights must be finite and nonnegative");
    }
    total += c.weight;
    log_weights_(static_cast<Eigen::Index>(i)) = std::log(c.weight);
    can_sample_ = can_sample_ && c.density->can_sample();
    normalized_ = normalized_ && c.density->normalized();
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("mixture weights must sum to 1");
}

double Mixture::log_density_unchecked(const Eigen::Ref<const Vector>& x) const {
  Vector terms(log_weights_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    terms(idx) = log_weights_(idx) == kNegInf ? kNegInf
                                              : log_weights_(idx) + components_[i].density->log_density(x);
  }
  return log_sum_exp(terms);
}

void Mixture::sample_unchecked(Eigen::Ref<Points> out, Rng& rng) const {
  std::vector<double> weights;
  weights.reserve(components_.size());
  for (const auto& c : components_) weights.push_back(c.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j) = components_[pick(rng)].density->sample(1, rng).col(0);
  }
}

// ---------------------------------------------------------------------------
// LogisticPosterior

LogisticPosterior::LogisticPosterior(Vector labels, Eigen::MatrixXd features, double a, double b)
    : Density(static_cast<std::size_t>(features.cols()) + 1),
      labels_(std::move(labels)),
      features_(std::move(features)),
      a_(a),
      b_(b) {
  if (labels_.size() != features_.rows()) throw InputError("labels and features differ in length");
  if (features_.cols() == 0) throw InputError("need at least one feature");
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_(i) != 1.0 && labels_(i) != -1.0) throw InputError("labels must be -1 or +1");
  }
  if (!(a > 0.0) || !(b > 0.0)) throw InputError("Gamma hyperparameters must be positive");
  log_prior_norm_ = a_ * std::log(b_) - std::lgamma(a_);
}

double LogisticPosterior::log_density_unchecked(const Eigen::Ref<const Vector>& x) const {
  const auto nf = features_.cols();
  const double beta = x(nf);
  if (!(beta > 0.0)) return kNegInf;
  const auto omega = x.head(nf);
  const double log_beta = std::log(beta);
  const auto l = static_cast<double>(nf);
  double lp = log_prior_norm_ + (a_ - 1.0) * log_beta - b_ * beta;
  lp += 0.5 * l * (log_beta - kLog2Pi) - 0.5 * beta * omega.squaredNorm();
  const Vector margins = (features_ * omega).cwiseProduct(labels_);
  for (Eigen::Index i = 0; i < margins.size(); ++i) lp += log_sigmoid(margins(i));
  return lp;
}

Vector LogisticPosterior::gradient(const Eigen::Ref<const Vector>& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw InputError("dimension mismatch");
  const auto nf = features_.cols();
  const double beta = x(nf);
  if (!(beta > 0.0)) throw InputError("gradient requires beta > 0");
  const auto omega = x.head(nf);
  const Vector margins = (features_ * omega).cwiseProduct(labels_);
  Vector coeff(margins.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) coeff(i) = labels_(i) * sigmoid(-margins(i));
  Vector g(x.size());
  g.head(nf) = -beta * omega + features_.transpose() * coeff;
  const auto l = static_cast<double>(nf);
  g(nf) = (a_ - 1.0) / beta - b_ + 0.5 * l / beta - 0.5 * omega.squaredNorm();
  return g;
}

// ---------------------------------------------------------------------------
// Synthetic targets

ToyTarget parse_toy_target(std::string_view name) {
  if (name == "cold_start" || name == "cold-start") return ToyTarget::cold_start;
  if (name == "gaussian_mixture" || name == "gaussian-mixture") return ToyTarget::gaussian_mixture;
  if (name == "anisotropic_mixture" || name == "anisotropic-mixture" || name == "anisotropic") {
    return ToyTarget::anisotropic_mixture;
  }
  throw InputError("unknown toy target '" + std::string(name) + "'");
}

std::string_view to_string(ToyTarget target) noexcept {
  switch (target) {
    case ToyTarget::cold_start: return "cold_start";
    case ToyTarget::gaussian_mixture: return "gaussian_mixture";
    case ToyTarget::anisotropic_mixture: return "anisotropic_mixture";
  }
  return "unknown";
}

ToyProblem toy_target(ToyTarget target, std::size_t dim, double nu) {
  if (dim == 0) throw InputError("dimension must be at least 1");
  const auto d = static_cast<Eigen::Index>(dim);
  const double sqrt_d = std::sqrt(static_cast<double>(dim));
  const Vector ones = Vector::Ones(d);
  const double sd = 0.4 / sqrt_d;
  const Eigen::MatrixXd start_cov = Eigen::MatrixXd::Identity(d, d) * (5.0 / static_cast<double>(dim));

  Vector offcenter = Vector::Zero(d);
  offcenter(0) = 1.0 / sqrt_d;
  if (d > 1) offcenter(1) = -1.0 / sqrt_d;

  ToyProblem p;
  switch (target) {
    case ToyTarget::cold_start: {
      const Vector center = ones * (5.0 / sqrt_d);
      p.target = Gaussian::isotropic(center, sd * sd);
      p.initial = StudentT::with_covariance(Vector::Zero(d), start_cov, nu);
      p.true_mean = center;
      break;
    }
    case ToyTarget::gaussian_mixture: {
      const Vector shift = ones / (2.0 * sqrt_d);
      p.target = std::make_shared<Mixture>(std::vector<Mixture::Component>{
          {0.5, Gaussian::isotropic(shift, sd * sd)}, {0.5, Gaussian::isotropic(-shift, sd * sd)}});
      p.initial = StudentT::with_covariance(offcenter, start_cov, nu);
      p.true_mean = Vector::Zero(d);
      break;
    }
    case ToyTarget::anisotropic_mixture: {
      const Vector shift = ones / (2.0 * sqrt_d);
      Vector variances = Vector::Constant(d, sd * sd);
      variances(0) *= 10.0;
      p.target = std::make_shared<Mixture>(
          std::vector<Mixture::Component>{{0.25, Gaussian::diagonal(shift, variances)},
                                          {0.75, Gaussian::diagonal(-shift, variances)}});
      p.initial = StudentT::with_covariance(offcenter, start_cov, nu);
      p.true_mean = (0.25 - 0.75) * shift;
      break;
    }
  }
  return p;
}

}  // namespace srais
