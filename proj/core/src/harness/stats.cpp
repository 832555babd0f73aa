#include "sacre/harness/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace sacre::harness {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty series");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double ppmcc(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("ppmcc: series lengths differ");
  if (x.size() < 2) throw std::invalid_argument("ppmcc: need at least 2 points");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument("ppmcc: zero-variance series");
  return sxy / std::sqrt(sxx * syy);
}

double sample_size(double population, double z, double e, double p, double q) {
  if (population <= 0.0) throw std::invalid_argument("population must be positive");
  if (e <= 0.0) throw std::invalid_argument("margin of error must be positive");
  const double n0 = z * z * p * q / (e * e);
  return n0 / (1.0 + (n0 - 1.0) / population);
}

}  // namespace sacre::harness
