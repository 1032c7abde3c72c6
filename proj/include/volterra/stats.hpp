#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "volterra/simulate.hpp"

namespace volterra {

struct CovarianceEstimate {
  Eigen::MatrixXd estimate;
  Eigen::MatrixXd standard_error;
};

// Unbiased covariance of the columns of `samples` (rows are observations) with
// SE^2 = (R_ss R_tt + R_st^2) / (P - 1).
CovarianceEstimate sample_covariance(const Eigen::MatrixXd& samples);
CovarianceEstimate empirical_covariance(const PathEnsemble& ens, const std::vector<std::size_t>& subgrid);

struct ComparisonEntry {
  std::string label;
  double estimate = 0.0;
  double target = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

class ComparisonReport {
public:
  ComparisonReport(double k = 3.0, double floor = 0.0) : k_(k), floor_(floor) {}

  // pass iff |estimate - target| <= max(k * se, floor * |target|)
  const ComparisonEntry& add(std::string label, double estimate, double target, double se);
  void add_check(std::string label, double value, double bound, bool pass);
  bool all_pass() const;
  std::size_t failures() const;
  const std::vector<ComparisonEntry>& entries() const { return entries_; }
  double k() const { return k_; }
  double floor() const { return floor_; }
  void write_csv(std::ostream& out, bool header = true) const;

private:
  double k_;
  double floor_;
  std::vector<ComparisonEntry> entries_;
};

// Entrywise comparison of an empirical covariance against a target matrix.
ComparisonReport compare_covariance(const CovarianceEstimate& est, const Eigen::MatrixXd& target,
                                    const std::string& prefix, double k = 3.0, double floor = 0.05);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// One-sample Kolmogorov-Smirnov test against N(mean, variance) at the 1% level.
KsResult ks_normality(std::vector<double> sample, double mean = 0.0, double variance = 1.0);

// Least-squares slope of log residual against log step, steps halving.
double convergence_order(const std::vector<double>& residuals);
double convergence_order(const std::vector<double>& residuals, const std::vector<double>& steps);

}  // namespace volterra
