#pragma once

#include <vector>

namespace sacre::harness {

double mean(const std::vector<double>& xs);

// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 samples.
double sample_stddev(const std::vector<double>& xs);

// Pearson product-moment correlation. Throws std::invalid_argument on size
// mismatch, fewer than 2 points, or a zero-variance series.
double ppmcc(const std::vector<double>& x, const std::vector<double>& y);

// Cochran sample size with finite-population correction:
// n0 = z^2 p q / e^2, n = n0 / (1 + (n0 - 1) / population).
double sample_size(double population, double z, double e, double p, double q);

}  // namespace sacre::harness
