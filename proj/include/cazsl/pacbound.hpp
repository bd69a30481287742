#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cazsl/errors.hpp"

namespace cazsl::pacbound {

// Right-continuous step CDF over a finite support grid.
struct EmpiricalCdf {
  std::vector<double> grid;  // strictly increasing
  std::vector<double> cdf;   // non-decreasing, in [0,1]

  static EmpiricalCdf from_samples(std::vector<double> distances);
  static EmpiricalCdf from_table(std::vector<double> z, std::vector<double> p);
  double value_at(double z) const;  // 0 left of the grid
};

struct BoundInput {
  int num_attributes = 0;  // M
  int feature_dim = 0;     // d, VC-style capacity of each linear classifier
  int num_points = 0;      // points in attribute space backing the nearest-neighbor step
  double gamma = 0.0;      // label-stage failure probability
  double delta = 0.0;      // per-classifier PAC failure probability
  std::optional<EmpiricalCdf> rp;
  std::optional<double> g_override;  // skip the CDF and use this tolerance directly
  double log_base = 0.0;             // 0 = natural log
  bool strict_double_count = false;  // also report (1-delta)^{2M} variant
};

struct BoundReport {
  double g_inv_gamma = 0.0;
  double epsilon = 0.0;
  double n_delta = 0.0;
  double p_att = 0.0;
  double p_zsl = 0.0;
  double n_delta_ca = 0.0;
  double p_att_ca = 0.0;
  double p_zsl_ca = 0.0;
  std::optional<double> p_zsl_ca_strict;
  bool g_degenerate = false;
};

// 1 - (1 - Rp(z))^n : distribution of the nearest of n points.
double gp_from_rp(const EmpiricalCdf& rp, int num_points, double z);

struct GpInverse {
  double value = 0.0;
  bool degenerate = false;  // no grid point satisfied the constraint
};

// Largest grid z with G_p(z) <= gamma; 0 (flagged) when none qualifies.
GpInverse gp_inverse(const EmpiricalCdf& rp, int num_points, double gamma);

// P(X <= floor(k)) for X ~ Binomial(n_trials, p), each term via log-space.
double binocdf(double k, int n_trials, double p);

BoundReport bound_report(const BoundInput& input);

std::string bound_report_csv(const BoundReport& report);

}  // namespace cazsl::pacbound
