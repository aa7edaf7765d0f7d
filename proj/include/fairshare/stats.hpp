#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fairshare {

// Two-sided 97.5% Student-t quantile for small samples; normal beyond the table.
inline double t_quantile_975(std::size_t df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df == 0) return 12.706;
  if (df <= 30) return table[df - 1];
  if (df <= 40) return 2.021;
  if (df <= 60) return 2.000;
  return 1.960;
}

struct Estimate {
  double mean = 0.0;
  double ci_half = 0.0;  // 95% half-width over replications
  std::size_t reps = 0;
};

inline Estimate summarize(const std::vector<double>& samples) {
  Estimate e;
  e.reps = samples.size();
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double x : samples) sum += x;
  e.mean = sum / static_cast<double>(samples.size());
  if (samples.size() < 2) return e;
  double ss = 0.0;
  for (double x : samples) ss += (x - e.mean) * (x - e.mean);
  const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
  e.ci_half = t_quantile_975(samples.size() - 1) * sd /
              std::sqrt(static_cast<double>(samples.size()));
  return e;
}

}  // namespace fairshare
