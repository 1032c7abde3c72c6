#include "volterra/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "volterra/csv.hpp"
#include "volterra/error.hpp"

namespace volterra {

CovarianceEstimate sample_covariance(const Eigen::MatrixXd& samples) {
  const long p = samples.rows();
  if (p < 2) throw InsufficientData("covariance needs at least 2 samples");
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - mean;
  CovarianceEstimate out;
  out.estimate = centered.transpose() * centered / static_cast<double>(p - 1);
  const long m = samples.cols();
  out.standard_error.resize(m, m);
  for (long s = 0; s < m; ++s)
    for (long t = 0; t < m; ++t) {
      const double r = out.estimate(s, t);
      out.standard_error(s, t) =
          std::sqrt((out.estimate(s, s) * out.estimate(t, t) + r * r) / static_cast<double>(p - 1));
    }
  if ((out.standard_error.array() == 0.0).all())
    throw InsufficientData("all samples are identical; standard errors vanish");
  return out;
}

CovarianceEstimate empirical_covariance(const PathEnsemble& ens, const std::vector<std::size_t>& subgrid) {
  Eigen::MatrixXd s(ens.paths.rows(), static_cast<long>(subgrid.size()));
  for (std::size_t k = 0; k < subgrid.size(); ++k) s.col(static_cast<long>(k)) = ens.paths.col(static_cast<long>(subgrid[k]));
  return sample_covariance(s);
}

const ComparisonEntry& ComparisonReport::add(std::string label, double estimate, double target, double se) {
  const bool pass = std::abs(estimate - target) <= std::max(k_ * se, floor_ * std::abs(target));
  entries_.push_back({std::move(label), estimate, target, se, pass});
  return entries_.back();
}

void ComparisonReport::add_check(std::string label, double value, double bound, bool pass) {
  entries_.push_back({std::move(label), value, bound, 0.0, pass});
}

bool ComparisonReport::all_pass() const { return failures() == 0; }

std::size_t ComparisonReport::failures() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [](const ComparisonEntry& e) { return !e.pass; }));
}

void ComparisonReport::write_csv(std::ostream& out, bool header) const {
  if (header) out << "label,estimate,target,se,pass\n";
  for (const auto& e : entries_)
    out << e.label << ',' << csv::format_number(e.estimate) << ',' << csv::format_number(e.target) << ','
        << csv::format_number(e.standard_error) << ',' << (e.pass ? "true" : "false") << '\n';
}

ComparisonReport compare_covariance(const CovarianceEstimate& est, const Eigen::MatrixXd& target,
                                    const std::string& prefix, double k, double floor) {
  ComparisonReport r(k, floor);
  for (long s = 0; s < target.rows(); ++s)
    for (long t = s; t < target.cols(); ++t)
      r.add(prefix + "[" + std::to_string(s) + "," + std::to_string(t) + "]", est.estimate(s, t), target(s, t),
            est.standard_error(s, t));
  return r;
}

KsResult ks_normality(std::vector<double> sample, double mean, double variance) {
  if (sample.size() < 100) throw InsufficientData("KS test needs at least 100 observations");
  std::sort(sample.begin(), sample.end());
  const double sd = std::sqrt(variance);
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = 0.5 * std::erfc(-(sample[k] - mean) / (sd * std::numbers::sqrt2));
    d = std::max({d, static_cast<double>(k + 1) / n - f, f - static_cast<double>(k) / n});
  }
  KsResult r;
  r.statistic = d;
  r.critical = 1.628 / std::sqrt(n);
  r.pass = d < r.critical;
  return r;
}

double convergence_order(const std::vector<double>& residuals, const std::vector<double>& steps) {
  if (residuals.size() != steps.size()) throw DimensionMismatch("residuals and steps differ in length");
  if (residuals.size() < 3) throw InsufficientData("convergence order needs at least 3 levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(residuals.size());
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    if (!(residuals[k] > 0.0)) throw DomainError("convergence order needs positive residuals");
    const double x = std::log(steps[k]);
    const double y = std::log(residuals[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double convergence_order(const std::vector<double>& residuals) {
  std::vector<double> steps(residuals.size());
  for (std::size_t k = 0; k < steps.size(); ++k) steps[k] = std::ldexp(1.0, -static_cast<int>(k));
  return convergence_order(residuals, steps);
}

}  // namespace volterra
