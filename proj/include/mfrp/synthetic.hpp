#pragma once

#include <cstdint>
#include <vector>

namespace mfrp {

struct FbmSpec {
  double hurst = 0.5;  // strictly inside (0, 1)
  int length = 32768;
  std::uint64_t seed = 1;
};

// Exact-covariance fractional Gaussian noise by circulant embedding
// (Davies-Harte); the fBm path is its running sum.
std::vector<double> generate_fgn(const FbmSpec& spec);
std::vector<double> generate_fbm(const FbmSpec& spec);

// Analytic fGn autocovariance at lag k for unit-variance increments.
double fgn_autocovariance(double hurst, int lag);

struct CascadeSpec {
  double p = 0.7;  // in (0.5, 1)
  int depth = 15;  // series length 2^depth
  std::uint64_t seed = 1;
};

// Deterministic-weight binomial multiplicative cascade with the (p, 1-p)
// pair shuffled left/right independently at every node. Total mass 1.
std::vector<double> generate_cascade(const CascadeSpec& spec);

// Analytic references for the binomial cascade.
double cascade_tau_q(double p, double q);    // -log2(p^q + (1-p)^q)
double cascade_h_of_q(double p, double q);   // d tau / dq
double cascade_d_of_q(double p, double q);   // q h(q) - tau(q)
double cascade_width(double p);              // log2(p / (1-p)), p > 1/2

}  // namespace mfrp
