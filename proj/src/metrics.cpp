#include "carve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "carve/error.hpp"

namespace carve {

double mae_first_segment(std::span<const Label> ref, std::span<const Label> test) {
  if (ref.size() != test.size()) throw Error(ErrorCode::DimsMismatch, "segment buffers differ in size");
  if (ref.empty()) return 0.0;
  std::size_t mismatches = 0;
  for (std::size_t p = 0; p < ref.size(); ++p) mismatches += ref[p] != test[p];
  return static_cast<double>(mismatches) / static_cast<double>(ref.size());
}

double rmse_depth(std::span<const float> ref, std::span<const float> test) {
  if (ref.size() != test.size()) throw Error(ErrorCode::DimsMismatch, "depth buffers differ in size");
  if (ref.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    const double d = static_cast<double>(ref[p]) - static_cast<double>(test[p]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(ref.size()));
}

RankingData parse_rankings(std::string_view text) {
  RankingData data;
  std::map<std::string, std::size_t> index;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::size_t> ranking;
    std::istringstream fields(line);
    for (std::string tok; std::getline(fields, tok, ',');) {
      const auto b = tok.find_first_not_of(" \t\r");
      const auto e = tok.find_last_not_of(" \t\r");
      if (b == std::string::npos)
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty item id");
      const std::string id = tok.substr(b, e - b + 1);
      auto [it, inserted] = index.try_emplace(id, data.items.size());
      if (inserted) data.items.push_back(id);
      ranking.push_back(it->second);
    }
    data.rankings.push_back(std::move(ranking));
  }
  return data;
}

namespace {

void validate(const RankingData& data) {
  if (data.items.empty() || data.rankings.empty()) throw Error(ErrorCode::EmptyData, "no rankings");
  std::vector<bool> seen(data.items.size(), false);
  for (std::size_t r = 0; r < data.rankings.size(); ++r) {
    const auto& ranking = data.rankings[r];
    if (ranking.size() < 2)
      throw Error(ErrorCode::ValueError, "ranking " + std::to_string(r) + " has fewer than 2 items");
    std::vector<bool> in_ranking(data.items.size(), false);
    for (std::size_t item : ranking) {
      if (item >= data.items.size()) throw Error(ErrorCode::ValueError, "ranking refers to an unknown item");
      if (in_ranking[item])
        throw Error(ErrorCode::ValueError, "ranking " + std::to_string(r) + " repeats item " + data.items[item]);
      in_ranking[item] = seen[item] = true;
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw Error(ErrorCode::ItemNeverRanked, data.items[i]);
}

}  // namespace

double plackett_luce_log_likelihood(const RankingData& data, std::span<const double> worths, double smoothing) {
  double ll = 0.0;
  for (const auto& ranking : data.rankings) {
    // Stage i picks ranking[i] out of ranking[i..]; suffix sums give each
    // stage's denominator.
    double remaining = 0.0;
    for (std::size_t i = ranking.size(); i-- > 0;) {
      remaining += worths[ranking[i]];
      if (i + 1 < ranking.size()) ll += std::log(worths[ranking[i]]) - std::log(remaining);
    }
  }
  for (double w : worths) ll += smoothing * (std::log(w) - w);
  return ll;
}

PlackettLuceFit plackett_luce_fit(const RankingData& data, const PlackettLuceOptions& opts) {
  validate(data);
  if (!(opts.smoothing >= 0.0)) throw Error(ErrorCode::ValueError, "smoothing must be non-negative");
  const std::size_t n = data.items.size();

  // Stage wins per item (every position but the last).
  std::vector<double> wins(n, 0.0);
  for (const auto& ranking : data.rankings)
    for (std::size_t i = 0; i + 1 < ranking.size(); ++i) wins[ranking[i]] += 1.0;

  PlackettLuceFit fit;
  std::vector<double> w(n, 1.0), next(n), denom(n), suffix;
  fit.log_likelihood.push_back(plackett_luce_log_likelihood(data, w, opts.smoothing));

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::fill(denom.begin(), denom.end(), 0.0);
    for (const auto& ranking : data.rankings) {
      const std::size_t m = ranking.size();
      suffix.assign(m, 0.0);
      double acc = 0.0;
      for (std::size_t i = m; i-- > 0;) suffix[i] = acc += w[ranking[i]];
      // An item at position p takes part in stages 0..min(p, m-2).
      double inverse_sum = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (i + 1 < m) inverse_sum += 1.0 / suffix[i];
        denom[ranking[i]] += inverse_sum;
      }
    }
    double change = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      next[t] = (wins[t] + opts.smoothing) / (denom[t] + opts.smoothing);
      change = std::max(change, std::abs(next[t] - w[t]) / w[t]);
    }
    w.swap(next);
    fit.iterations = iter + 1;
    fit.log_likelihood.push_back(plackett_luce_log_likelihood(data, w, opts.smoothing));
    if (change < opts.tol) {
      fit.converged = true;
      break;
    }
  }

  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  fit.worths.resize(n);
  for (std::size_t t = 0; t < n; ++t) fit.worths[t] = w[t] / total;
  return fit;
}

std::vector<std::size_t> global_rank(std::span<const double> worths) {
  std::vector<std::size_t> order(worths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return worths[a] > worths[b]; });
  return order;
}

Regression rank_metric_regression(std::span<const double> ranks, std::span<const double> values) {
  if (ranks.size() != values.size()) throw Error(ErrorCode::LengthMismatch, "ranks and values differ in length");
  if (ranks.size() < 2) throw Error(ErrorCode::TooFewPoints, "need at least 2 points");
  const double n = static_cast<double>(ranks.size());
  const bool constant = std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
  const double mx = std::accumulate(ranks.begin(), ranks.end(), 0.0) / n;
  const double my = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const double dx = ranks[i] - mx, dy = values[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(ErrorCode::TooFewPoints, "need at least 2 distinct ranks");
  Regression r;
  if (constant) {
    r.intercept = values[0];
    return r;
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  if (syy == 0.0) return r;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const double e = values[i] - (r.intercept + r.slope * ranks[i]);
    ss_res += e * e;
  }
  r.r_squared = 1.0 - ss_res / syy;
  return r;
}

}  // namespace carve
