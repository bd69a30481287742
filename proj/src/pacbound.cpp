#include "cazsl/pacbound.hpp"

#include <algorithm>
#include <cmath>

#include "cazsl/csv.hpp"

namespace cazsl::pacbound {

EmpiricalCdf EmpiricalCdf::from_samples(std::vector<double> distances) {
  if (distances.empty()) throw EmptyCdf("distance sample is empty");
  for (double v : distances)
    if (!std::isfinite(v) || v < 0.0)
      throw DataError("distances must be finite and non-negative");
  std::sort(distances.begin(), distances.end());
  EmpiricalCdf out;
  const double n = static_cast<double>(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const bool last_of_run = i + 1 == distances.size() || distances[i + 1] != distances[i];
    if (last_of_run) {
      out.grid.push_back(distances[i]);
      out.cdf.push_back(static_cast<double>(i + 1) / n);
    }
  }
  return out;
}

EmpiricalCdf EmpiricalCdf::from_table(std::vector<double> z, std::vector<double> p) {
  if (z.empty() || z.size() != p.size())
    throw EmptyCdf("CDF table must be non-empty with matching columns");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(p[i]))
      throw DataError("CDF table contains non-finite values");
    if (p[i] < 0.0 || p[i] > 1.0) throw DataError("CDF values must lie in [0,1]");
    if (i > 0 && z[i] <= z[i - 1]) throw DataError("CDF grid must be strictly increasing");
    if (i > 0 && p[i] < p[i - 1]) throw DataError("CDF values must be non-decreasing");
  }
  EmpiricalCdf out;
  out.grid = std::move(z);
  out.cdf = std::move(p);
  return out;
}

double EmpiricalCdf::value_at(double z) const {
  // Largest grid point <= z, right-continuous step.
  auto it = std::upper_bound(grid.begin(), grid.end(), z);
  if (it == grid.begin()) return 0.0;
  return cdf[static_cast<std::size_t>(it - grid.begin() - 1)];
}

double gp_from_rp(const EmpiricalCdf& rp, int num_points, double z) {
  if (num_points < 1) throw DataError("number of attribute-space points must be >= 1");
  if (z < 0.0) throw DataError("distance must be non-negative");
  return 1.0 - std::pow(1.0 - rp.value_at(z), num_points);
}

GpInverse gp_inverse(const EmpiricalCdf& rp, int num_points, double gamma) {
  if (rp.grid.empty()) throw EmptyCdf("empty CDF grid");
  if (gamma <= 0.0 || gamma >= 1.0) throw DataError("gamma must lie in (0,1)");
  GpInverse out;
  out.degenerate = true;
  for (std::size_t i = 0; i < rp.grid.size(); ++i) {
    const double g = 1.0 - std::pow(1.0 - rp.cdf[i], num_points);
    if (g <= gamma) {
      out.value = rp.grid[i];
      out.degenerate = false;
    }
  }
  return out;
}

double binocdf(double k, int n_trials, double p) {
  if (n_trials < 0) throw DataError("trial count must be non-negative");
  if (p < 0.0 || p > 1.0) throw DataError("success probability must lie in [0,1]");
  if (k < 0.0) return 0.0;
  if (k >= static_cast<double>(n_trials)) return 1.0;
  const int kk = static_cast<int>(std::floor(k));
  if (p == 0.0) return 1.0;
  if (p == 1.0) return kk >= n_trials ? 1.0 : 0.0;

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_fact_n = std::lgamma(static_cast<double>(n_trials) + 1.0);
  double sum = 0.0;
  for (int j = 0; j <= kk; ++j) {
    const double log_term = log_fact_n - std::lgamma(static_cast<double>(j) + 1.0) -
                            std::lgamma(static_cast<double>(n_trials - j) + 1.0) +
                            j * log_p + (n_trials - j) * log_q;
    sum += std::exp(log_term);
  }
  return std::clamp(sum, 0.0, 1.0);
}

BoundReport bound_report(const BoundInput& input) {
  if (input.num_attributes < 1) throw DataError("attribute count must be >= 1");
  if (input.feature_dim < 1) throw DataError("feature dimension must be >= 1");
  if (input.num_points < 1) throw DataError("attribute-space point count must be >= 1");
  if (input.gamma <= 0.0 || input.gamma >= 1.0) throw DataError("gamma must lie in (0,1)");
  if (input.delta <= 0.0 || input.delta >= 1.0) throw DataError("delta must lie in (0,1)");
  if (input.rp.has_value() == input.g_override.has_value())
    throw DataError("provide exactly one of a distance CDF or an explicit tolerance");
  if (input.log_base < 0.0 || input.log_base == 1.0)
    throw DataError("log base must be 0 (natural) or a positive value != 1");

  BoundReport rep;
  if (input.g_override) {
    rep.g_inv_gamma = *input.g_override;
    if (rep.g_inv_gamma < 0.0) throw DataError("tolerance override must be non-negative");
  } else {
    const GpInverse inv = gp_inverse(*input.rp, input.num_points, input.gamma);
    rep.g_inv_gamma = inv.value;
    rep.g_degenerate = inv.degenerate;
  }
  if (rep.g_inv_gamma == 0.0)
    throw ZeroTolerance(
        "tolerated attribute error is zero; the sample-complexity bound diverges");

  const double m = static_cast<double>(input.num_attributes);
  const double d = static_cast<double>(input.feature_dim);
  const double g = rep.g_inv_gamma;
  rep.epsilon = std::min(g / m, 1.0);

  auto logb = [&](double v) {
    return input.log_base == 0.0 ? std::log(v) : std::log(v) / std::log(input.log_base);
  };
  auto sample_bound = [&](double ratio) {
    return ratio * (4.0 * logb(2.0 / input.delta) + 8.0 * (d + 1.0) * logb(13.0 * ratio));
  };

  const double q = 1.0 - rep.epsilon;
  rep.n_delta = sample_bound(m / g);
  rep.p_att = 1.0 - binocdf(m * q, input.num_attributes, q);
  const double label_stage = std::pow(1.0 - input.delta, m) * (1.0 - input.gamma);
  rep.p_zsl = label_stage * rep.p_att;

  // Doubled-attribute path written with 2M and 2g so the algebraic identity
  // with the plain path is observable rather than assumed.
  rep.n_delta_ca = sample_bound((2.0 * m) / (2.0 * g));
  rep.p_att_ca = 1.0 - binocdf(2.0 * m * q, 2 * input.num_attributes, q);
  rep.p_zsl_ca = label_stage * rep.p_att_ca;
  if (input.strict_double_count)
    rep.p_zsl_ca_strict =
        std::pow(1.0 - input.delta, 2.0 * m) * (1.0 - input.gamma) * rep.p_att_ca;
  return rep;
}

std::string bound_report_csv(const BoundReport& report) {
  std::string out = "metric,value\n";
  auto row = [&](const char* name, double v) {
    out += std::string(name) + "," + csv::format_double(v) + "\n";
  };
  row("g_inv_gamma", report.g_inv_gamma);
  row("epsilon", report.epsilon);
  row("n_delta", report.n_delta);
  row("p_att", report.p_att);
  row("p_zsl", report.p_zsl);
  row("n_delta_ca", report.n_delta_ca);
  row("p_att_ca", report.p_att_ca);
  row("p_zsl_ca", report.p_zsl_ca);
  if (report.p_zsl_ca_strict) row("p_zsl_ca_strict_2m", *report.p_zsl_ca_strict);
  out += std::string("g_degenerate,") + (report.g_degenerate ? "true" : "false") + "\n";
  return out;
}

}  // namespace cazsl::pacbound
