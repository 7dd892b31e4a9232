#include "wlpp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wlpp/errors.hpp"
#include "wlpp/kernels.hpp"
#include "wlpp/lpp.hpp"
#include "wlpp/matrixproc.hpp"
#include "wlpp/parallel.hpp"
#include "wlpp/rsk.hpp"
#include "wlpp/sampling.hpp"

namespace wlpp {

namespace {

TestReport named(TestReport r, std::string name, const RngStream& stream) {
  r.test_name = std::move(name);
  if (r.seed_info.empty()) r.seed_info = stream.provenance();
  return r;
}

TestReport exact_check(std::string name, double statistic, double threshold, std::size_t n,
                       const RngStream& stream, std::string detail = {}) {
  TestReport r;
  r.test_name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.n1 = n;
  r.seed_info = stream.provenance();
  r.detail = std::move(detail);
  return decide(r);
}

double uniform(RngStream& s, double lo, double hi) { return lo + (hi - lo) * s.uniform01(); }

std::vector<std::vector<double>> simulate_rows(
    std::size_t reps, const RngStream& root,
    const std::function<std::vector<double>(RngStream&)>& draw) {
  std::vector<std::vector<double>> rows(reps);
  parallel_for(reps, [&](std::size_t r) {
    RngStream s = root.child(r);
    rows[r] = draw(s);
  });
  return rows;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t t) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[t]);
  return out;
}

/// Strictly decreasing vector with gaps drawn from [0.2, 2).
std::vector<double> random_interior_point(RngStream& s, std::size_t n, double top) {
  std::vector<double> z(n);
  z[0] = top;
  for (std::size_t i = 1; i < n; ++i) z[i] = z[i - 1] - uniform(s, 0.2, 2.0);
  return z;
}

}  // namespace

std::vector<TestReport> identity_suite(const ExperimentConfig& c) {
  const ParameterSet params(c.pi, c.pihat);
  const std::size_t horizon = *std::max_element(c.grid.begin(), c.grid.end());
  const RngStream root(c.seed);
  const auto lam = simulate_rows(c.reps, root.child(stream_id::wishart), [&](RngStream& s) {
    return simulate_top_eigenvalues(params, horizon, s);
  });
  const auto lpp = simulate_rows(c.reps, root.child(stream_id::lpp), [&](RngStream& s) {
    return simulate_lpp(params, horizon, s);
  });

  std::vector<TestReport> out;
  for (std::size_t t : c.grid) {
    out.push_back(named(ks_two_sample(column(lam, t - 1), column(lpp, t - 1), c.alpha),
                        "identity.marginal t=" + std::to_string(t), root));
  }
  const std::size_t m = std::min(c.energy_reps, c.reps);
  if (c.grid.size() >= 2 && m > 0) {
    PointSample joint_l, joint_y, inc_l, inc_y;
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<double> jl, jy, il, iy;
      double prev_l = 0.0, prev_y = 0.0;
      for (std::size_t t : c.grid) {
        jl.push_back(lam[r][t - 1]);
        jy.push_back(lpp[r][t - 1]);
        il.push_back(lam[r][t - 1] - prev_l);
        iy.push_back(lpp[r][t - 1] - prev_y);
        prev_l = lam[r][t - 1];
        prev_y = lpp[r][t - 1];
      }
      joint_l.push_back(std::move(jl));
      joint_y.push_back(std::move(jy));
      inc_l.push_back(std::move(il));
      inc_y.push_back(std::move(iy));
    }
    const RngStream joint_stream = root.child(stream_id::energy_joint);
    const RngStream inc_stream = root.child(stream_id::energy_increments);
    out.push_back(named(energy_distance_test(joint_l, joint_y, c.permutations, c.alpha, joint_stream),
                        "identity.energy joint", joint_stream));
    out.push_back(named(energy_distance_test(inc_l, inc_y, c.permutations, c.alpha, inc_stream),
                        "identity.energy increments", inc_stream));
  }
  return out;
}

std::vector<TestReport> kernel_suite(const ExperimentConfig& c) {
  const RngStream root(c.seed);
  std::vector<TestReport> out;

  // Normalization sweep.
  const RngStream sweep = root.child(stream_id::kernel_sweep);
  double worst_quad = 0.0, worst_agree = 0.0, worst_cb3 = 0.0;
  for (std::size_t k = 0; k < c.sweep; ++k) {
    RngStream s = sweep.child(k);
    {
      const auto z = random_interior_point(s, 2, uniform(s, 0.5, 4.0));
      const KernelParams kp({uniform(s, 0.3, 2.0), uniform(s, 0.3, 2.0)}, uniform(s, 0.0, 1.0));
      const double quad = kernel_normalization(z, kp, NormalizationMethod::quadrature);
      const double cb = kernel_normalization(z, kp, NormalizationMethod::cauchy_binet);
      worst_quad = std::max(worst_quad, std::abs(quad - 1.0));
      worst_agree = std::max(worst_agree, std::abs(quad - cb));
    }
    {
      const auto z = random_interior_point(s, 3, uniform(s, 1.0, 5.0));
      const KernelParams kp({uniform(s, 0.3, 2.0), uniform(s, 0.3, 2.0), uniform(s, 0.3, 2.0)},
                            uniform(s, 0.0, 1.0));
      worst_cb3 = std::max(
          worst_cb3, std::abs(kernel_normalization(z, kp, NormalizationMethod::cauchy_binet) - 1.0));
    }
  }
  out.push_back(exact_check("kernel.normalization N=2 quadrature", worst_quad, 1e-7, c.sweep, sweep,
                            "max |mass - 1|"));
  out.push_back(exact_check("kernel.normalization N=2 methods agree", worst_agree, 1e-9, c.sweep,
                            sweep, "max |quadrature - cauchy_binet|"));
  out.push_back(exact_check("kernel.normalization N=3 cauchy_binet", worst_cb3, 1e-5, c.sweep,
                            sweep, "max |mass - 1|"));

  // One-step law of sp(M) from z under the tilted initial law.
  const std::size_t n = c.z.size();
  const Spectrum z(c.z);
  const std::vector<double> pi(c.pi.begin(), c.pi.begin() + static_cast<std::ptrdiff_t>(n));
  const ParameterSet params(pi, {c.pihat.front()});
  const KernelParams kp(pi, c.pihat.front());
  const double slowest = *std::min_element(pi.begin(), pi.end()) + c.pihat.front();
  std::vector<std::vector<double>> edges(n);
  for (double o : {0.0, 0.15, 0.35, 0.6, 0.95, 1.45, 2.2, 3.4}) edges[0].push_back(z[0] + o / slowest);
  edges[0].push_back(std::numeric_limits<double>::infinity());
  const std::size_t splits = n == 2 ? 5 : 4;
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t s = 0; s <= splits; ++s) {
      edges[k].push_back(z[k] + (z[k - 1] - z[k]) * static_cast<double>(s) / static_cast<double>(splits));
    }
  }
  std::vector<std::size_t> shape(n);
  std::size_t bins = 1;
  for (std::size_t k = 0; k < n; ++k) {
    shape[k] = edges[k].size() - 1;
    bins *= shape[k];
  }
  std::vector<double> probs(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    std::vector<double> lo(n), hi(n);
    std::size_t rem = b;
    for (std::size_t k = n; k-- > 0;) {
      const std::size_t idx = rem % shape[k];
      rem /= shape[k];
      lo[k] = edges[k][idx];
      hi[k] = edges[k][idx + 1];
    }
    probs[b] = q_pihat_box_probability(z.values(), kp, lo, hi);
  }
  const RngStream step_stream = root.child(stream_id::one_step);
  const auto samples = simulate_rows(c.reps, step_stream, [&](RngStream& s) {
    const HermitianMatrix m0 = sample_tilted_initial(z, pi, s);
    const Spectrum next = step_spectrum(m0, params, 1, s);
    return std::vector<double>(next.values().begin(), next.values().end());
  });
  std::vector<std::uint64_t> observed(bins, 0);
  for (const auto& x : samples) {
    std::size_t b = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto it = std::upper_bound(edges[k].begin(), edges[k].end(), x[k]);
      const auto idx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - edges[k].begin() - 1, 0, static_cast<std::ptrdiff_t>(shape[k] - 1)));
      b = b * shape[k] + idx;
    }
    ++observed[b];
  }
  auto chi = named(chi_square_binned(observed, probs, c.alpha), "kernel.one_step chi_square",
                   step_stream);
  chi.detail += " from " + std::to_string(bins) + " raw bins";
  out.push_back(chi);
  return out;
}

std::vector<TestReport> rsk_suite(const ExperimentConfig& c) {
  const RngStream root(c.seed);
  std::vector<TestReport> out;

  // Top entry vs LPP and mass conservation on real exponential input.
  const RngStream exact = root.child(stream_id::rsk_exact);
  const std::size_t arrays = 1000;
  double worst_top = 0.0, worst_mass = 0.0, worst_lipschitz = 0.0;
  std::size_t invalid = 0;
  const auto standard = ParameterSet::standard(c.n, c.horizon);
  for (std::size_t k = 0; k < arrays; ++k) {
    RngStream s = exact.child(k);
    const WeightMatrix xi = sample_exponential_weights(standard, c.horizon, s);
    const auto patterns = rsk_apply(xi, c.horizon);
    const auto y = lpp_table(xi);
    double mass = 0.0;
    for (std::size_t t = 1; t <= c.horizon; ++t) {
      const auto& x = patterns[t - 1];
      if (!x.is_valid(1e-12)) ++invalid;
      worst_top = std::max(worst_top, std::abs(x.bottom()[0] - y[c.n - 1][t - 1]));
      for (std::size_t i = 0; i < c.n; ++i) mass += xi(i, t - 1);
      double bottom_sum = 0.0;
      for (double v : x.bottom()) bottom_sum += v;
      worst_mass = std::max(worst_mass, std::abs(bottom_sum - mass) / std::max(1.0, mass));
    }
    // Perturb one entry by eps: every pattern entry moves by at most eps.
    const double eps = 1e-3;
    const std::size_t pi_row = static_cast<std::size_t>(s.uniform01() * static_cast<double>(c.n));
    const std::size_t pj_col = static_cast<std::size_t>(s.uniform01() * static_cast<double>(c.horizon));
    WeightMatrix bumped = xi;
    bumped.set(pi_row, pj_col, xi(pi_row, pj_col) + eps);
    const auto moved = rsk_apply(bumped, c.horizon);
    for (std::size_t t = 0; t < c.horizon; ++t) {
      for (std::size_t lvl = 0; lvl < c.n; ++lvl) {
        for (std::size_t i = 0; i <= lvl; ++i) {
          worst_lipschitz = std::max(
              worst_lipschitz, std::abs(moved[t].level(lvl)[i] - patterns[t].level(lvl)[i]) / eps);
        }
      }
    }
  }
  out.push_back(exact_check("rsk.top_entry_equals_lpp", worst_top, 1e-12, arrays, exact,
                            "max |x_1^N(n) - Y(N,n)|"));
  out.push_back(exact_check("rsk.mass_conservation", worst_mass, 1e-12, arrays, exact,
                            "max relative |sum x^N(n) - sum xi|"));
  out.push_back(exact_check("rsk.patterns_interlace", static_cast<double>(invalid), 0.0, arrays,
                            exact, "count of invalid patterns"));
  out.push_back(exact_check("rsk.continuity", worst_lipschitz, 1.0 + 1e-9, arrays, exact,
                            "max |delta x| / eps"));

  // Greene partial sums, exhaustive over 3x3 arrays with entries in {0,..,3}.
  std::size_t mismatches = 0;
  std::size_t instances = 0;
  std::vector<double> entries(9, 0.0);
  for (std::size_t code = 0; code < 262144; ++code) {
    std::size_t rem = code;
    for (auto& e : entries) {
      e = static_cast<double>(rem % 4);
      rem /= 4;
    }
    const WeightMatrix xi(3, 3, entries);
    const auto bottom = rsk_apply(xi, 3).back().bottom();
    double partial = 0.0;
    for (std::size_t k = 1; k <= 3; ++k) {
      partial += bottom[k - 1];
      if (greene_oracle(xi, k, 3) != partial) ++mismatches;
    }
    ++instances;
  }
  out.push_back(exact_check("rsk.greene_exhaustive_3x3", static_cast<double>(mismatches), 0.0,
                            instances, root, "partial-sum mismatches over entries <= 3"));

  // Markov property of the bottom row with geometric input.
  const RngStream chain = root.child(stream_id::rsk_chain);
  const std::size_t chain_horizon = c.b.size();
  const bool constant_b = std::all_of(c.b.begin(), c.b.end(), [&](double v) { return v == c.b[0]; });
  if (constant_b) {
    out.push_back(named(rsk_chain_check(c.a, c.b, chain_horizon, c.reps, chain, c.alpha),
                        "rsk.chain pooled", chain));
  } else {
    for (std::size_t step = 1; step <= chain_horizon; ++step) {
      out.push_back(named(rsk_chain_check(c.a, c.b, chain_horizon, c.reps, chain, c.alpha, step),
                          "rsk.chain step=" + std::to_string(step), chain));
    }
  }

  // Schur polynomial: GT enumeration vs bialternant.
  const RngStream schur = root.child(stream_id::schur);
  double worst_schur = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    RngStream s = schur.child(k);
    const std::size_t n = 2 + static_cast<std::size_t>(s.uniform01() * 3.0);
    std::vector<std::int64_t> parts(n);
    for (auto& p : parts) p = static_cast<std::int64_t>(s.uniform01() * 7.0);
    std::sort(parts.rbegin(), parts.rend());
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = 0.2 + 0.25 * static_cast<double>(i) + 0.2 * s.uniform01();
    const Partition lambda(parts);
    const double gt = schur_gt(lambda, a);
    const double bi = schur_bialternant(lambda, a);
    worst_schur = std::max(worst_schur, std::abs(gt - bi) / std::abs(bi));
  }
  out.push_back(exact_check("rsk.schur_gt_vs_bialternant", worst_schur, 1e-10, 100, schur,
                            "max relative difference"));
  return out;
}

std::vector<TestReport> hciz_suite(const ExperimentConfig& c) {
  const RngStream root(c.seed);
  const std::size_t n = c.mu.size();
  const Spectrum mu(c.mu);
  const std::vector<double> pi(c.pi.begin(), c.pi.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<TestReport> out;

  const RngStream haar = root.child(stream_id::haar);
  std::vector<double> values(c.reps);
  parallel_for(c.reps, [&](std::size_t r) {
    RngStream s = haar.child(r);
    const Eigen::MatrixXcd u = sample_haar_unitary(s, n);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) {
        tr += pi[static_cast<std::size_t>(i)] * std::norm(u(i, j)) * mu[static_cast<std::size_t>(j)];
      }
    }
    values[r] = std::exp(-tr);
  });
  const auto mc = estimate_mean(values);
  const double closed = h_pi(pi, mu.values()) / hciz_constant(n);
  const double tolerance = n <= 2 ? 0.01 : 0.02;
  std::ostringstream os;
  os << "MC=" << mc.mean << " (se " << mc.std_error << ") closed form=" << closed;
  out.push_back(exact_check("hciz.haar_integral N=" + std::to_string(n),
                            std::abs(mc.mean - closed) / std::abs(mc.mean), tolerance, c.reps, haar,
                            os.str()));

  const RngStream init = root.child(stream_id::initial);
  std::vector<double> rn(c.reps);
  parallel_for(c.reps, [&](std::size_t r) {
    RngStream s = init.child(r);
    rn[r] = rn_derivative_initial(sample_isospectral(mu, s), mu, pi);
  });
  const auto rn_mean = estimate_mean(rn);
  std::ostringstream os2;
  os2 << "mean=" << rn_mean.mean << " se=" << rn_mean.std_error;
  out.push_back(exact_check("hciz.initial_density_mean", std::abs(rn_mean.mean - 1.0) / rn_mean.std_error,
                            3.0, c.reps, init, os2.str()));
  return out;
}

std::vector<TestReport> rn_suite(const ExperimentConfig& c) {
  const RngStream root(c.seed);
  const ParameterSet params(c.pi, c.pihat);
  const ParameterSet standard = ParameterSet::standard(c.n, c.horizon);
  std::vector<TestReport> out;

  // Importance sampling: E_P[RN f] vs E_{P^{pi,pihat}}[f].
  const RngStream std_stream = root.child(stream_id::standard_paths);
  const RngStream tilt_stream = root.child(stream_id::tilted_paths);
  const auto weighted = simulate_rows(c.reps, std_stream, [&](RngStream& s) {
    const MatrixPath path = simulate_wishart_path(standard, c.horizon, s);
    const double w = rn_derivative_increments(path, params);
    const auto& last = path.states.back();
    return std::vector<double>{w * last.trace(), w * hermitian_spectrum(last).largest()};
  });
  const auto direct = simulate_rows(c.reps, tilt_stream, [&](RngStream& s) {
    const MatrixPath path = simulate_wishart_path(params, c.horizon, s);
    const auto& last = path.states.back();
    return std::vector<double>{last.trace(), hermitian_spectrum(last).largest()};
  });
  const char* names[] = {"rn.importance_sampling trace", "rn.importance_sampling largest_eigenvalue"};
  for (std::size_t f = 0; f < 2; ++f) {
    const auto is = estimate_mean(column(weighted, f));
    const auto dr = estimate_mean(column(direct, f));
    const double se = std::sqrt(is.std_error * is.std_error + dr.std_error * dr.std_error);
    std::ostringstream os;
    os << "importance=" << is.mean << " direct=" << dr.mean << " combined se=" << se;
    TestReport r = exact_check(names[f], std::abs(is.mean - dr.mean) / se, 3.0, c.reps, root, os.str());
    r.n2 = c.reps;
    out.push_back(r);
  }

  // prod q_pihat = rn_spectra * prod q on random interlacing paths.
  const RngStream paths = root.child(stream_id::spectra_paths);
  double worst = 0.0;
  const std::size_t count = 1000;
  for (std::size_t k = 0; k < count; ++k) {
    RngStream s = paths.child(k);
    std::vector<Spectrum> path;
    std::vector<double> z = random_interior_point(s, c.n, uniform(s, 1.0, 4.0));
    path.emplace_back(z);
    for (std::size_t r = 1; r <= c.horizon; ++r) {
      std::vector<double> next(c.n);
      next[0] = z[0] + sample_exponential(s, 1.0);
      for (std::size_t i = 1; i < c.n; ++i) next[i] = uniform(s, z[i], z[i - 1]);
      z = next;
      path.emplace_back(z);
    }
    double log_kernels = 0.0;
    double log_standard = 0.0;
    for (std::size_t r = 1; r <= c.horizon; ++r) {
      const KernelParams kp(c.pi, c.pihat[r - 1]);
      const SignedLog q = log_q_pihat_density(path[r - 1].values(), path[r].values(), kp);
      log_kernels += q.log_abs;
      log_standard += std::log(q_density(path[r - 1].values(), path[r].values()));
    }
    const double rel = std::abs(std::expm1(log_kernels - log_rn_spectra(path, params) - log_standard));
    worst = std::max(worst, rel);
  }
  out.push_back(exact_check("rn.spectra_identity", worst, 1e-10, count, paths,
                            "max relative |prod q_pihat - rn_spectra prod q|"));
  return out;
}

std::vector<TestReport> geometric_limit_suite(const ExperimentConfig& c) {
  const ParameterSet params(c.pi, c.pihat);
  const std::size_t horizon = *std::max_element(c.grid.begin(), c.grid.end());
  const RngStream root(c.seed);
  const auto geo = simulate_rows(c.reps, root.child(stream_id::geometric_lpp), [&](RngStream& s) {
    return simulate_geometric_lpp(params, horizon, c.scale, s);
  });
  const auto lpp = simulate_rows(c.reps, root.child(stream_id::lpp), [&](RngStream& s) {
    return simulate_lpp(params, horizon, s);
  });
  std::vector<TestReport> out;
  for (std::size_t t : c.grid) {
    out.push_back(named(ks_two_sample(column(geo, t - 1), column(lpp, t - 1), c.alpha),
                        "geometric_limit t=" + std::to_string(t), root));
  }
  return out;
}

std::vector<TestReport> calibration_suite(const ExperimentConfig& c) {
  const RngStream root(c.seed);
  const RngStream cal = root.child(stream_id::calibration);
  constexpr std::size_t kRepeats = 100;
  const double expected = static_cast<double>(kRepeats) * (1.0 - c.alpha);
  const double sigma = std::sqrt(static_cast<double>(kRepeats) * c.alpha * (1.0 - c.alpha));

  const auto band = [&](std::string name, std::size_t passes, const RngStream& s) {
    std::ostringstream os;
    os << passes << "/" << kRepeats << " passed; expected " << expected << " +- 3*" << sigma;
    TestReport r = exact_check(std::move(name), std::abs(static_cast<double>(passes) - expected) / sigma,
                               3.0, kRepeats, s, os.str());
    r.alpha = c.alpha;
    return r;
  };

  std::vector<TestReport> out;
  std::size_t ks_pass = 0, chi_pass = 0, energy_pass = 0;
  for (std::size_t k = 0; k < kRepeats; ++k) {
    RngStream s = cal.child(0).child(k);
    std::vector<double> x(500), y(500);
    for (auto& v : x) v = sample_exponential(s, 1.0);
    for (auto& v : y) v = sample_exponential(s, 1.0);
    ks_pass += ks_two_sample(x, y, c.alpha).passed();
  }
  out.push_back(band("calibration.ks_two_sample", ks_pass, cal.child(0)));

  for (std::size_t k = 0; k < kRepeats; ++k) {
    RngStream s = cal.child(1).child(k);
    std::vector<std::uint64_t> counts(10, 0);
    for (int i = 0; i < 1000; ++i) {
      const double u = 1.0 - std::exp(-sample_exponential(s, 1.0));  // Exp(1) CDF
      ++counts[std::min<std::size_t>(9, static_cast<std::size_t>(u * 10.0))];
    }
    const std::vector<double> probs(10, 0.1);
    chi_pass += chi_square_binned(counts, probs, c.alpha).passed();
  }
  out.push_back(band("calibration.chi_square", chi_pass, cal.child(1)));

  for (std::size_t k = 0; k < kRepeats; ++k) {
    RngStream s = cal.child(2).child(k);
    PointSample x(100), y(100);
    for (auto& p : x) p = {sample_exponential(s, 1.0), sample_exponential(s, 1.0)};
    for (auto& p : y) p = {sample_exponential(s, 1.0), sample_exponential(s, 1.0)};
    energy_pass += energy_distance_test(x, y, 200, c.alpha, cal.child(3).child(k)).passed();
  }
  out.push_back(band("calibration.energy", energy_pass, cal.child(2)));
  return out;
}

}  // namespace wlpp
