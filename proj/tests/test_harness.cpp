#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bundlekit/errors.hpp"
#include "bundlekit/experiment.hpp"
#include "bundlekit/hexfloat.hpp"
#include "bundlekit/rate_fit.hpp"
#include "bundlekit/trace_io.hpp"

using namespace bundlekit;

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bundlekit-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("hex floats round-trip exactly") {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e307, std::numeric_limits<double>::denorm_min()}) {
    CHECK(parse_hexfloat(hexfloat(v)) == v);
    CHECK(std::signbit(parse_hexfloat(hexfloat(v))) == std::signbit(v));
  }
  CHECK(std::isnan(parse_hexfloat(hexfloat(std::nan("")))));
  CHECK(parse_hexfloat("0.125") == 0.125);
  CHECK_THROWS_AS(parse_hexfloat("12abc"), ConfigError);
  CHECK(shortest_decimal(1e-4) == "1e-04");
  CHECK(shortest_decimal(0.1) == "0.1");
}

TEST_CASE("trace CSV round-trip") {
  std::vector<TraceRecord> trace(3);
  for (int i = 0; i < 3; ++i) {
    TraceRecord& r = trace[static_cast<std::size_t>(i)];
    r.iter = i + 1;
    r.kind = i == 1 ? StepKind::Serious : StepKind::Null;
    r.f_y = 1.0 / (i + 3.0);
    r.gap = std::nan("");
    r.xi = 1e-17 * i;
    r.null_run_len = i;
    r.t = 1.5 + i;
  }
  std::stringstream s;
  write_trace_csv(s, trace);
  std::string header;
  std::getline(s, header);
  CHECK(header == kTraceHeader);
  s.seekg(0);
  const std::vector<TraceRecord> back = read_trace_csv(s);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].iter == trace[i].iter);
    CHECK(back[i].kind == trace[i].kind);
    CHECK(back[i].f_y == trace[i].f_y);
    CHECK(std::isnan(back[i].gap));
    CHECK(back[i].xi == trace[i].xi);
    CHECK(back[i].t == trace[i].t);
  }
}

TEST_CASE("malformed trace reports its line") {
  std::stringstream s;
  s << kTraceHeader << "\n1,serious\n";
  try {
    read_trace_csv(s);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("gap fit recovers an inverse-square rate") {
  std::vector<TraceRecord> trace;
  for (long k = 1; k <= 40; ++k) {
    TraceRecord r;
    r.iter = k;
    r.kind = StepKind::Serious;
    r.serious_count = k;
    r.gap = 1.0 / static_cast<double>((k + 1) * (k + 1));
    trace.push_back(r);
  }
  const RateFit fit = fit_gap_rate({trace});
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("null-run fit recovers a logarithmic law") {
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<std::vector<TraceRecord>> traces;
  std::vector<double> expected;
  for (double e : eps) {
    TraceRecord r;
    r.kind = StepKind::Null;
    r.null_run_len = static_cast<long>(std::lround(3.0 + 2.0 * std::log(1.0 / e)));
    traces.push_back({r});
  }
  const RateFit fit = fit_null_run_rate(traces, eps);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(0.2));

  std::vector<double> x, y;
  for (double e : eps) {
    x.push_back(std::log(1.0 / e));
    y.push_back(3.0 + 2.0 * std::log(1.0 / e));
  }
  const RateFit exact = fit_line(x, y);
  CHECK(exact.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(exact.intercept == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("fits need enough distinct points") {
  CHECK_THROWS_AS(fit_line({1, 2, 3}, {1, 2, 3}), InsufficientDataError);
  CHECK_THROWS_AS(fit_line({1, 1, 1, 1, 1}, {1, 2, 3, 4, 5}), InsufficientDataError);
  CHECK(fit_line({1, 2, 3, 4, 5}, {7, 7, 7, 7, 7}).r_squared == 1.0);
}

TEST_CASE("experiment config parsing") {
  std::istringstream in(
      "# grid\n"
      "family=log-sum-exp\n"
      "n=6\n"
      "m=12\n"
      "algorithm=apbm\n"
      "rho_scale=2\n"
      "eps=1e-2,1e-3\n"
      "repetitions=3\n"
      "qp_tol=1e-11\n");
  const ExperimentConfig c = parse_experiment_config(in);
  CHECK(c.problem.family == "log-sum-exp");
  CHECK(c.problem.n == 6);
  CHECK(c.rho_scale == 2.0);
  CHECK(c.eps == std::vector<double>{1e-2, 1e-3});
  CHECK(c.repetitions == 3);
  CHECK(c.solver.qp.tol == 1e-11);
}

TEST_CASE("experiment config errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_experiment_config(in);
  };
  CHECK_THROWS_AS(parse("algorithm=newton\n"), ConfigError);
  CHECK_THROWS_AS(parse("bogus=1\n"), ConfigError);
  CHECK_THROWS_AS(parse("eps=1e-2,x\n"), ConfigError);
  CHECK_THROWS_AS(parse("algorithm=apbm-composite\nfamily=quadratic\n"), ConfigError);
  try {
    parse("n=3\nnot a pair\n");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse("algorithm=newton\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("apbm") != std::string::npos);
  }
}

TEST_CASE("experiments are reproducible") {
  ExperimentConfig c;
  c.problem.n = 8;
  c.eps = {1e-3, 1e-5};
  c.repetitions = 2;
  c.solver.max_iter = 5000;
  const fs::path a = scratch_dir("a");
  const fs::path b = scratch_dir("b");
  c.output_dir = a.string();
  const ExperimentSummary sa = run_experiment(c, 1);
  c.output_dir = b.string();
  const ExperimentSummary sb = run_experiment(c, 3);
  REQUIRE(sa.runs.size() == 4);
  REQUIRE(sb.runs.size() == 4);
  CHECK(sa.all_ok());
  CHECK(sa.total_envelope_violations() == 0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sa.runs[i].seed == sb.runs[i].seed);
    const std::string ta = slurp(sa.runs[i].trace_path);
    CHECK(!ta.empty());
    CHECK(ta == slurp(sb.runs[i].trace_path));
  }
  CHECK(fs::exists(a / "summary.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}
