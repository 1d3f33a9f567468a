#pragma once

#include <vector>

namespace levysg {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double rms_residual = 0;
  int n = 0;
};

/// Ordinary least squares y = intercept + slope x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log y against log x.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> logspace(double lo, double hi, int n);

}  // namespace levysg
