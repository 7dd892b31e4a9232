#include "wlpp/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "wlpp/errors.hpp"
#include "wlpp/parallel.hpp"

namespace wlpp {

TestReport decide(TestReport r) {
  r.verdict = r.statistic <= r.threshold ? Verdict::pass : Verdict::fail;
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

double ks_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

TestReport ks_two_sample(std::span<const double> x, std::span<const double> y, double alpha) {
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  TestReport r;
  r.test_name = "ks_two_sample";
  r.n1 = a.size();
  r.n2 = b.size();
  r.alpha = alpha;
  if (a.empty() || b.empty()) {
    r.verdict = Verdict::inconclusive;
    r.detail = "empty sample";
    return r;
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  r.statistic = d;
  r.threshold = ks_critical_value(alpha) * std::sqrt((na + nb) / (na * nb));
  if (a.size() < 100 || b.size() < 100) {
    r.verdict = Verdict::inconclusive;
    r.detail = "fewer than 100 points in a sample";
    return r;
  }
  return decide(r);
}

TestReport ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf,
                         double alpha) {
  std::vector<double> a(x.begin(), x.end());
  std::sort(a.begin(), a.end());
  TestReport r;
  r.test_name = "ks_one_sample";
  r.n1 = a.size();
  r.alpha = alpha;
  if (a.size() < 100) {
    r.verdict = Verdict::inconclusive;
    r.detail = "fewer than 100 points";
    return r;
  }
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  r.statistic = d;
  r.threshold = ks_critical_value(alpha) / std::sqrt(n);
  return decide(r);
}

TestReport chi_square_binned(std::span<const std::uint64_t> observed,
                             std::span<const double> expected_probabilities, double alpha) {
  if (observed.size() != expected_probabilities.size()) {
    throw ValidationError("observed and expected bin counts differ");
  }
  TestReport r;
  r.test_name = "chi_square_binned";
  r.alpha = alpha;
  const double total =
      static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  r.n1 = static_cast<std::size_t>(total);
  if (total <= 0.0) {
    r.verdict = Verdict::inconclusive;
    r.detail = "no observations";
    return r;
  }
  std::vector<double> obs;
  std::vector<double> expect;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    o_acc += static_cast<double>(observed[k]);
    e_acc += expected_probabilities[k] * total;
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      expect.push_back(e_acc);
      o_acc = 0.0;
      e_acc = 0.0;
    }
  }
  if (o_acc > 0.0 || e_acc > 0.0) {
    if (obs.empty()) {
      obs.push_back(o_acc);
      expect.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      expect.back() += e_acc;
    }
  }
  r.n2 = obs.size();
  if (obs.size() < 2) {
    r.verdict = Verdict::inconclusive;
    r.detail = "fewer than two bins after merging";
    return r;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (expect[k] <= 0.0) {
      r.verdict = Verdict::inconclusive;
      r.detail = "bin with zero expected mass";
      return r;
    }
    stat += (obs[k] - expect[k]) * (obs[k] - expect[k]) / expect[k];
  }
  r.statistic = stat;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(obs.size() - 1));
  r.threshold = boost::math::quantile(dist, 1.0 - alpha);
  r.detail = std::to_string(obs.size()) + " merged bins";
  return decide(r);
}

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

TestReport energy_distance_test(const PointSample& x, const PointSample& y,
                                std::size_t permutations, double alpha, const RngStream& stream) {
  if (x.empty() || y.empty()) throw ValidationError("energy test needs nonempty samples");
  const std::size_t dim = x.front().size();
  for (const auto* s : {&x, &y}) {
    for (const auto& p : *s) {
      if (p.size() != dim) throw ValidationError("energy test samples differ in dimension");
    }
  }
  if (permutations < 200) throw ParameterError("energy test needs at least 200 permutations");
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const std::size_t total = n + m;
  if (total > 30000) throw SizeError("energy test limited to 30000 pooled points");

  std::vector<const std::vector<double>*> pooled;
  pooled.reserve(total);
  for (const auto& p : x) pooled.push_back(&p);
  for (const auto& p : y) pooled.push_back(&p);

  // Packed strict upper triangle: row i holds d(i, j) for j > i.
  std::vector<std::size_t> offset(total + 1, 0);
  for (std::size_t i = 0; i < total; ++i) offset[i + 1] = offset[i] + (total - i - 1);
  std::vector<float> dist(offset[total]);
  std::vector<double> row_sum(total, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    float* row = dist.data() + offset[i];
    for (std::size_t j = i + 1; j < total; ++j) {
      const auto f = static_cast<float>(euclidean(*pooled[i], *pooled[j]));
      const double d = f;
      row[j - i - 1] = f;
      row_sum[i] += d;
      row_sum[j] += d;
      grand += d;
    }
  }

  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  // Permutations sum in float lanes; the observed statistic is summed in double.
  const auto statistic = [&](const std::vector<float>& in_x, bool exact) {
    double within_x = 0.0;
    double rows_x = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      if (in_x[i] == 0.0f) continue;
      rows_x += row_sum[i];
      const float* row = dist.data() + offset[i];
      const float* mask = in_x.data() + i + 1;
      const std::size_t len = total - i - 1;
      if (exact) {
        for (std::size_t j = 0; j < len; ++j) within_x += static_cast<double>(row[j]) * mask[j];
        continue;
      }
      double acc_d = 0.0;
      for (std::size_t start = 0; start < len; start += 1024) {
        const std::size_t stop = std::min(len, start + 1024);
        float lanes[8] = {};
        std::size_t j = start;
        for (; j + 8 <= stop; j += 8) {
          for (std::size_t l = 0; l < 8; ++l) lanes[l] += row[j + l] * mask[j + l];
        }
        for (; j < stop; ++j) lanes[0] += row[j] * mask[j];
        for (float v : lanes) acc_d += v;
      }
      within_x += acc_d;
    }
    const double cross = rows_x - 2.0 * within_x;
    const double within_y = grand - within_x - cross;
    const double e = 2.0 * cross / (dn * dm) - 2.0 * within_x / (dn * dn) -
                     2.0 * within_y / (dm * dm);
    return dn * dm / (dn + dm) * e;
  };

  std::vector<float> observed_mask(total, 0.0f);
  std::fill(observed_mask.begin(), observed_mask.begin() + static_cast<std::ptrdiff_t>(n), 1.0f);
  const double observed = statistic(observed_mask, true);

  std::vector<double> perm_stats(permutations);
  parallel_for(permutations, [&](std::size_t k) {
    RngStream s = stream.child(k);
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first n slots are a uniform n-subset.
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(s.uniform01() * static_cast<double>(total - i));
      std::swap(idx[i], idx[std::min(j, total - 1)]);
    }
    std::vector<float> mask(total, 0.0f);
    for (std::size_t i = 0; i < n; ++i) mask[idx[i]] = 1.0f;
    perm_stats[k] = statistic(mask, false);
  });
  std::sort(perm_stats.begin(), perm_stats.end());

  TestReport r;
  r.test_name = "energy_distance_test";
  r.n1 = n;
  r.n2 = m;
  r.alpha = alpha;
  r.seed_info = stream.provenance();
  r.statistic = observed;
  // Reject when (1 + #{perm >= observed}) / (P + 1) <= alpha.
  const auto allowed = static_cast<long>(std::floor(alpha * static_cast<double>(permutations + 1))) - 1;
  if (allowed < 0) {
    r.threshold = std::numeric_limits<double>::infinity();
  } else {
    r.threshold = perm_stats[permutations - 1 - static_cast<std::size_t>(allowed)];
  }
  r.detail = std::to_string(permutations) + " permutations";
  return decide(r);
}

MeanEstimate estimate_mean(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace wlpp
