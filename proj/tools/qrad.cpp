// qrad: compute w_q, export W_q point clouds and run the inequality sweep.
//
// Exit codes: 0 ok, 1 failed checks (verify), 2 malformed input or config,
// 3 dimension error, 4 unwritable output.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qrad/error.hpp"
#include "qrad/json_io.hpp"
#include "qrad/qradius.hpp"
#include "qrad/verify.hpp"

using nlohmann::json;

namespace {

constexpr int kExitFailedChecks = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDimension = 3;
constexpr int kExitUnwritable = 4;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(qrad::ErrorCode c) {
  switch (c) {
    case qrad::ErrorCode::DimensionTooSmall:
    case qrad::ErrorCode::NotTwoByTwo:
    case qrad::ErrorCode::BadDimension:
    case qrad::ErrorCode::DimensionMismatch:
      return kExitDimension;
    default:
      return kExitBadInput;
  }
}

// "0.6" or "re,im". Complex q is reduced to its modulus: W_q(T) is
// W_|q|(T) rotated by arg q, so the radius only depends on |q|.
double parse_q(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw CliError{kExitBadInput, "--q: cannot parse '" + text + "'"};
    }
    if (used != item.size() || !std::isfinite(v)) throw CliError{kExitBadInput, "--q: cannot parse '" + text + "'"};
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts[0];
  if (parts.size() != 2) throw CliError{kExitBadInput, "--q takes a real or re,im"};
  const double m = std::abs(std::complex<double>(parts[0], parts[1]));
  std::cerr << "note: complex q reduced to |q| = " << m << " (W_q is W_|q| rotated by arg q, same radius)\n";
  return m;
}

qrad::Effort effort_from(int restarts, int iters) {
  qrad::Effort e = qrad::scaled_effort(qrad::kComputeEffort);
  if (restarts > 0) e.restarts = restarts;
  if (iters > 0) e.max_iter = iters;
  return e;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kExitUnwritable, "cannot write " + path};
  out << content;
  out.flush();
  if (!out) throw CliError{kExitUnwritable, "cannot write " + path};
}

struct ComputeArgs {
  std::string matrix;
  std::string q;
  std::string method = "auto";
  int restarts = 0;
  int iters = 0;
  std::uint64_t seed = 1;
  long samples = 100000;
};

int run_compute(const ComputeArgs& a) {
  const qrad::CMatrix t = qrad::read_matrix_file(a.matrix);
  const qrad::QValue q(parse_q(a.q));
  const qrad::Effort effort = effort_from(a.restarts, a.iters);
  std::string method = a.method;
  if (method == "auto") method = t.rows() == 2 ? "exact2x2" : "optimize";

  qrad::RadiusEstimate est;
  double value = 0.0;
  if (method == "exact2x2") {
    value = qrad::wq_2x2_exact(t, q).value;
    // The closed form has no witness; the optimizer supplies one.
    est = qrad::estimate_wq(t, q, effort, a.seed);
  } else if (method == "optimize") {
    est = qrad::estimate_wq(t, q, effort, a.seed);
    value = est.value;
  } else if (method == "sample") {
    if (a.samples < 1) throw CliError{kExitBadInput, "--samples must be positive"};
    est = qrad::sample_wq(t, q, a.samples, a.seed);
    value = est.value;
  } else {
    throw CliError{kExitBadInput, "unknown method " + a.method};
  }

  const json out = {{"value", value},
                    {"method", method},
                    {"witness_x", qrad::vector_to_json(est.witness.x)},
                    {"witness_y", qrad::vector_to_json(est.witness.y)},
                    {"q", q.q()}};
  std::cout << out.dump() << '\n';
  return 0;
}

struct RangeArgs {
  std::string matrix;
  std::string q;
  long points = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_range(const RangeArgs& a) {
  const qrad::CMatrix t = qrad::read_matrix_file(a.matrix);
  const qrad::QValue q(parse_q(a.q));
  if (a.points < 1) throw CliError{kExitBadInput, "--points must be positive"};
  const qrad::RangeCloud cloud = qrad::range_cloud(t, q, a.points, a.seed);

  std::string csv = "re,im,kind\n";
  char line[96];
  auto emit = [&](const qrad::cplx& z, const char* kind) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%s\n", z.real(), z.imag(), kind);
    csv += line;
  };
  for (const qrad::cplx& z : cloud.points) emit(z, "sample");
  if (cloud.boundary) {
    for (const qrad::cplx& z : *cloud.boundary) emit(z, "boundary");
  }
  write_file(a.out, csv);
  return 0;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::vector<int> dims{2, 3, 4};
  std::vector<double> qs{0.1, 0.3, 0.5, 0.7, 0.9};
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 0;
};

int run_verify(const VerifyArgs& a) {
  qrad::VerifyConfig cfg;
  cfg.suites.clear();
  for (const std::string& s : a.suites) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.suites.push_back(item);
    }
  }
  if (cfg.suites.empty()) cfg.suites = {"all"};
  cfg.dims.clear();
  for (int d : a.dims) {
    if (d < 1) throw CliError{kExitBadInput, "--dims entries must be positive"};
    cfg.dims.push_back(static_cast<std::size_t>(d));
  }
  cfg.qs = a.qs;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.effort = qrad::scaled_effort(qrad::kVerifyEffort);
  cfg.threads = a.threads;
  qrad::resolve_suites(cfg);

  const qrad::VerifyResult res = qrad::run_verify(cfg);
  const json doc = qrad::verify_to_json(cfg, res);
  write_file(a.out, doc.dump(1) + "\n");

  json summary = doc.at("summary");
  summary["out"] = a.out;
  std::cout << summary.dump(2) << '\n';
  return res.failures == 0 && res.audit.failures == 0 ? 0 : kExitFailedChecks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-numerical radius: compute, range clouds and inequality sweeps"};
  app.require_subcommand(1);

  ComputeArgs ca;
  CLI::App* compute = app.add_subcommand("compute", "estimate w_q(T) and print JSON");
  compute->add_option("--matrix", ca.matrix, "matrix JSON file")->required();
  compute->add_option("--q", ca.q, "q in [0,1], or re,im")->required();
  compute->add_option("--method", ca.method, "auto | exact2x2 | optimize | sample")
      ->check(CLI::IsMember({"auto", "exact2x2", "optimize", "sample"}));
  compute->add_option("--restarts", ca.restarts, "optimizer restarts (default from QRAD_EFFORT)");
  compute->add_option("--iters", ca.iters, "optimizer iterations per restart");
  compute->add_option("--seed", ca.seed);
  compute->add_option("--samples", ca.samples, "sample count for --method sample");

  RangeArgs ra;
  CLI::App* range = app.add_subcommand("range", "write a CSV point cloud of W_q(T)");
  range->add_option("--matrix", ra.matrix, "matrix JSON file")->required();
  range->add_option("--q", ra.q, "q in [0,1], or re,im")->required();
  range->add_option("--points", ra.points, "sample points");
  range->add_option("--seed", ra.seed);
  range->add_option("--out", ra.out, "CSV output path")->required();

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run the inequality sweep");
  verify->add_option("--suite", va.suites, "suite name or all; repeat or comma-separate");
  verify->add_option("--dims", va.dims, "block sizes")->delimiter(',');
  verify->add_option("--qs", va.qs, "q values")->delimiter(',');
  verify->add_option("--trials", va.trials);
  verify->add_option("--seed", va.seed);
  verify->add_option("--out", va.out, "report JSON path")->required();
  verify->add_option("--threads", va.threads, "worker threads, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*compute) return run_compute(ca);
    if (*range) return run_range(ra);
    return run_verify(va);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const qrad::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
