#include "qrad/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "qrad/error.hpp"
#include "qrad/json_io.hpp"
#include "qrad/linalg.hpp"
#include "qrad/random.hpp"

namespace qrad {

namespace {

constexpr EnsembleKind kCycle[] = {EnsembleKind::ginibre,       EnsembleKind::hermitian,  EnsembleKind::unitary,
                                   EnsembleKind::psd,           EnsembleKind::contraction01, EnsembleKind::projection,
                                   EnsembleKind::nilpotent_sq_zero};

// Draws the inputs of one cell. Generic operands cycle through the
// ensembles by trial; Ginibre draws are scaled by 1/√n to keep norms O(1).
class Draws {
 public:
  Draws(std::size_t dim, int trial, std::uint64_t seed)
      : dim_(dim), kind_(kCycle[trial % std::size(kCycle)]), seed_(seed), rng_(seed, 0x7E57ULL) {}

  CMatrix generic() { return of(kind_); }

  CMatrix of(EnsembleKind kind) {
    CMatrix m = gen_random(kind, dim_, derive_seed(seed_, {next_++}));
    if (kind == EnsembleKind::ginibre) m *= 1.0 / std::sqrt(static_cast<double>(dim_));
    return m;
  }

  CounterRng& rng() { return rng_; }
  EnsembleKind kind() const { return kind_; }

 private:
  std::size_t dim_;
  EnsembleKind kind_;
  std::uint64_t seed_;
  CounterRng rng_;
  std::uint64_t next_ = 0;
};

void append(std::vector<IneqReport>& out, std::vector<IneqReport> more) {
  for (IneqReport& r : more) out.push_back(std::move(r));
}

std::uint64_t suite_tag(std::string_view suite) {
  const auto names = suite_names();
  return static_cast<std::uint64_t>(std::find(names.begin(), names.end(), suite) - names.begin());
}

}  // namespace

std::vector<std::string> resolve_suites(const VerifyConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::ParamOutOfRange, "trials must be >= 1");
  if (cfg.dims.empty() || cfg.qs.empty()) throw Error(ErrorCode::ParamOutOfRange, "dims and qs must be non-empty");
  for (std::size_t d : cfg.dims) {
    if (d < 2 || d > 8) throw Error(ErrorCode::ParamOutOfRange, "block sizes must lie in 2..8");
  }
  for (double q : cfg.qs) {
    if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::ParamOutOfRange, "q values must lie in (0, 1]");
  }
  std::vector<std::string> out;
  for (const std::string& s : cfg.suites) {
    if (s == "all") {
      for (std::string_view name : suite_names()) out.emplace_back(name);
      continue;
    }
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw Error(ErrorCode::ParamOutOfRange, "unknown suite " + s);
    }
    out.push_back(s);
  }
  if (out.empty()) throw Error(ErrorCode::ParamOutOfRange, "no suites selected");
  std::vector<std::string> unique;
  for (std::string_view name : suite_names()) {
    if (std::find(out.begin(), out.end(), name) != out.end()) unique.emplace_back(name);
  }
  return unique;
}

std::vector<IneqReport> run_trial(std::string_view suite, std::size_t dim, double qv, int trial, std::uint64_t seed,
                                  Effort effort, CertificateAudit* audit) {
  const std::uint64_t cell = derive_seed(seed, {suite_tag(suite), dim, std::bit_cast<std::uint64_t>(qv),
                                                static_cast<std::uint64_t>(trial)});
  const CheckContext ctx{effort, cell, audit};
  const QValue q(qv);
  const bool q_below_one = qv < 1.0;
  Draws d(dim, trial, cell);
  std::vector<IneqReport> out;

  if (suite == "check_norm_sandwich") {
    append(out, check_norm_sandwich(ctx, d.generic(), q));
  } else if (suite == "check_power_ineq") {
    const CMatrix t = d.generic();
    for (unsigned n : {1u, 2u, 3u}) append(out, check_power_ineq(ctx, t, q, n));
  } else if (suite == "check_basic_props") {
    const CMatrix t1 = d.generic(), t2 = d.generic(), t3 = d.generic(), t4 = d.generic();
    const double theta = 2.0 * std::numbers::pi * d.rng().uniform();
    append(out, check_basic_props(ctx, t1, t2, t3, t4, q, theta, d.rng().complex_normal()));
  } else if (suite == "check_sandwich") {
    const CMatrix a = d.generic(), b = d.generic(), c = d.generic();
    for (SandwichKind k : {SandwichKind::diag, SandwichKind::sym, SandwichKind::skew}) {
      append(out, check_sandwich(ctx, k, a, b, q));
    }
    const CMatrix blocks[] = {a, b, c};
    append(out, check_direct_sum_sandwich(ctx, blocks, q));
  } else if (suite == "check_alpha_r_upper") {
    if (!q_below_one) return out;
    const CMatrix s = d.generic();
    for (double alpha : {0.0, 0.5, 1.0}) {
      for (double r : {1.0, 2.0}) append(out, check_alpha_r_upper(ctx, s, q, alpha, r));
    }
  } else if (suite == "check_four_block_upper") {
    const CMatrix p = d.generic(), qb = d.generic(), r = d.generic(), s = d.generic();
    append(out, check_four_block_upper(ctx, p, qb, r, s, q));
  } else if (suite == "check_nilpotent_upper") {
    if (!q_below_one) return out;
    append(out, check_nilpotent_upper(ctx, d.of(EnsembleKind::nilpotent_sq_zero), q));
  } else if (suite == "check_offdiag_bounds") {
    if (!q_below_one) return out;
    const CMatrix t2 = d.generic(), t3 = d.generic();
    append(out, check_offdiag_bounds(ctx, t2, t3, q));
  } else if (suite == "check_lower_products") {
    const CMatrix t1 = d.generic(), t2 = d.generic(), t3 = d.generic(), t4 = d.generic();
    append(out, check_lower_products(ctx, t1, t2, t3, t4, q, 1 + trial % 3));
  } else if (suite == "check_power_structure") {
    const CMatrix t1 = d.generic(), t2 = d.generic();
    append(out, check_power_structure(ctx, t1, t2, q, 1 + trial % 3));
  } else if (suite == "check_vector_inequalities") {
    const CMatrix s = d.generic(), pos = d.of(EnsembleKind::psd);
    const CVector a = random_gaussian_vector(d.rng(), dim), b = random_gaussian_vector(d.rng(), dim);
    const CVector c = random_unit_vector(d.rng(), dim);
    const double t = d.rng().normal();
    append(out, check_vector_inequalities(ctx, s, pos, a, b, c, t, d.rng().uniform()));
  } else if (suite == "check_radius_gap") {
    append(out, check_radius_gap(ctx, d.generic(), q, default_lambda_grid(cell)));
  } else if (suite == "check_offdiag_product_upper") {
    const CMatrix t = d.generic(), s = d.generic();
    append(out, check_offdiag_product_upper(ctx, t, s, q));
  } else if (suite == "check_buzano_uppers") {
    const CMatrix p = d.generic(), qb = d.generic(), r = d.generic(), s = d.generic();
    append(out, check_buzano_uppers(ctx, p, qb, r, s, q, d.of(EnsembleKind::unitary)));
  } else if (suite == "check_commutators") {
    const CMatrix t = d.generic(), proj = d.of(EnsembleKind::projection);
    append(out, check_commutators(ctx, CommutatorKind::projection, t, proj, q));
    const CMatrix pos = d.of(EnsembleKind::psd), x = d.generic();
    append(out, check_commutators(ctx, CommutatorKind::positive, pos, x, q));
  } else {
    throw Error(ErrorCode::ParamOutOfRange, "unknown suite " + std::string(suite));
  }
  for (IneqReport& r : out) {
    r.params["block_size"] = static_cast<double>(dim);
    r.params["trial"] = trial;
    r.params["ensemble"] = static_cast<double>(d.kind());
  }
  return out;
}

VerifyResult run_verify(const VerifyConfig& cfg) {
  const std::vector<std::string> suites = resolve_suites(cfg);
  struct Cell {
    std::string_view suite;
    std::size_t dim;
    double q;
    int trial;
  };
  std::vector<Cell> cells;
  for (const std::string& s : suites) {
    for (std::size_t dim : cfg.dims) {
      for (double q : cfg.qs) {
        for (int t = 0; t < cfg.trials; ++t) cells.push_back({s, dim, q, t});
      }
    }
  }

  std::vector<std::vector<IneqReport>> slots(cells.size());
  std::vector<CertificateAudit> audits(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      try {
        slots[i] = run_trial(c.suite, c.dim, c.q, c.trial, cfg.seed, cfg.effort, &audits[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  VerifyResult res;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    res.audit.merge(audits[i]);
    for (IneqReport& r : slots[i]) {
      ++res.checks_run;
      if (!r.pass) ++res.failures;
      auto [it, fresh] = res.min_slack_per_suite.try_emplace(r.suite, r.slack);
      if (!fresh) it->second = std::min(it->second, r.slack);
      res.reports.push_back(std::move(r));
    }
  }
  return res;
}

nlohmann::json verify_to_json(const VerifyConfig& cfg, const VerifyResult& result) {
  nlohmann::json reports = nlohmann::json::array();
  for (const IneqReport& r : result.reports) reports.push_back(report_to_json(r));
  nlohmann::json summary = {
      {"checks_run", result.checks_run},
      {"failures", result.failures},
      {"min_slack_per_suite", result.min_slack_per_suite},
      {"certificates_checked", result.audit.checked},
      {"certificate_failures", result.audit.failures},
      {"worst_certificate_value_gap", result.audit.worst_value_gap},
      {"worst_certificate_admissibility", result.audit.worst_admissibility},
  };
  nlohmann::json config = {
      {"suites", resolve_suites(cfg)},
      {"dims", cfg.dims},
      {"qs", cfg.qs},
      {"trials", cfg.trials},
      {"seed", cfg.seed},
      {"effort", {{"restarts", cfg.effort.restarts}, {"max_iter", cfg.effort.max_iter}}},
  };
  return {{"config", std::move(config)}, {"reports", std::move(reports)}, {"summary", std::move(summary)}};
}

}  // namespace qrad
