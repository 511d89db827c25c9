#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carve/volume.hpp"

namespace carve {

/// Fraction of pixels whose first-hit labels differ. The miss sentinel is
/// compared like any other label.
double mae_first_segment(std::span<const Label> ref, std::span<const Label> test);

/// Root-mean-square difference of normalized depths over all pixels.
double rmse_depth(std::span<const float> ref, std::span<const float> test);

// ---------------------------------------------------------------------------
// Plackett-Luce rank aggregation

struct RankingData {
  std::vector<std::string> items;
  std::vector<std::vector<std::size_t>> rankings;  // indices into items, best first
};

/// One ranking per line, comma-separated item ids, best first. Items are
/// numbered in order of first appearance. Blank lines and '#' comments are
/// skipped.
RankingData parse_rankings(std::string_view text);

struct PlackettLuceOptions {
  int max_iter = 10000;
  double tol = 1e-10;
  double smoothing = 0.01;  // pseudo-observation weight
};

struct PlackettLuceFit {
  std::vector<double> worths;           // normalized to sum 1
  std::vector<double> log_likelihood;   // smoothed objective, one entry per iterate (initial included)
  int iterations = 0;
  bool converged = false;
};

/// Minorization-maximization fit. The smoothing term adds
/// eps * (log w - w) per item, which keeps worths finite for items that
/// always win and positive for items that always lose.
PlackettLuceFit plackett_luce_fit(const RankingData& data, const PlackettLuceOptions& opts = {});

/// Smoothed log-likelihood of (unnormalized) worths.
double plackett_luce_log_likelihood(const RankingData& data, std::span<const double> worths, double smoothing);

/// Item indices in descending worth, ties by ascending index.
std::vector<std::size_t> global_rank(std::span<const double> worths);

// ---------------------------------------------------------------------------

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of value on rank. R^2 is 0 when the values are
/// constant.
Regression rank_metric_regression(std::span<const double> ranks, std::span<const double> values);

}  // namespace carve
