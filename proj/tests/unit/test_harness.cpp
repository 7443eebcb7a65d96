#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"
#include "support.hpp"

using namespace exdyn;

namespace {

ExperimentConfig small_thom() {
  ExperimentConfig c;
  c.system = SystemSpec::thom();
  c.observable = ObservableSpec::power_sum({0.510001, 0.5090001}, 2.0, 1.0);
  c.N_blocklen = 100;
  c.N_bmax = 200;
  c.N_samp = 10;
  c.seed = 17;
  c.transient = 1000;
  return c;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("exdyn_test_" + name)).string();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("profiles") {
  CHECK(profile_sizes(Profile::fast) == std::pair<std::size_t, std::size_t>{1000, 1000});
  CHECK(profile_sizes(profile_from_string("paper")) == std::pair<std::size_t, std::size_t>{10000, 10000});
  CHECK_THROWS_AS(profile_from_string("huge"), ConfigError);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_thom();
  CHECK_NOTHROW(c.validate());
  c.N_samp = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_thom();
  c.N_blocklen = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_thom();
  c.observable = ObservableSpec::plane_theta_xz(0.1);
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("config JSON parsing") {
  const auto c = parse_config(R"({
    "system": {"system_id": "henon", "params": {"a": 1.3}},
    "observable": {"family": "plane_theta_2d", "theta": 0.25},
    "N_blocklen": 1e3, "N_bmax": 500, "N_samp": 50, "seed": 4,
    "sweep": {"param": "theta", "values": [0, 0.5]},
    "prediction": true
  })");
  CHECK(c.system.id() == SystemId::henon);
  CHECK(c.system.param("a") == 1.3);
  CHECK(c.system.param("b") == 0.3);
  CHECK(c.observable.family == ObservableFamily::plane_theta_2d);
  CHECK(c.observable.theta == 0.25);
  CHECK(c.N_blocklen == 1000);
  CHECK(c.N_bmax == 500);
  CHECK(c.sweep->values == std::vector<double>{0.0, 0.5});
  CHECK(c.prediction.has_value());

  const auto p = parse_config(R"({"system": "thom", "observable": {"family": "coord_x"}, "profile": "paper"})");
  CHECK(p.N_blocklen == 10000);
  CHECK(p.N_bmax == 10000);

  const auto g = parse_config(
      R"({"system": "lorenz63", "observable": {"family": "dist_power", "center": "generic", "alpha": 1}})");
  CHECK(g.generic_center);

  CHECK_THROWS_AS(parse_config(R"({"system": "thom", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"system": "thom", "N_bmax": -3})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(load_config(temp_path("does_not_exist.json")), IoError);
}

TEST_CASE("config JSON round trip") {
  ExperimentConfig c = small_thom();
  c.system = SystemSpec::solenoid(0.3, 0.4);
  c.observable = ObservableSpec::linear(0.1, 0.2, 0.3, 0.4);
  c.sweep = SweepSpec{"system.lambda", {0.2, 0.3}};
  c.prediction = PredictionRequest{};
  c.prediction->d_tilde_s = 0.06;
  const auto d = parse_config(config_to_json(c));
  CHECK(d.system == c.system);
  CHECK(d.observable.coefficients == c.observable.coefficients);
  CHECK(d.N_blocklen == c.N_blocklen);
  CHECK(d.N_bmax == c.N_bmax);
  CHECK(d.N_samp == c.N_samp);
  CHECK(d.seed == c.seed);
  CHECK(d.transient == c.transient);
  CHECK(d.sweep->param == "system.lambda");
  CHECK(d.sweep->values == c.sweep->values);
  CHECK(d.prediction->d_tilde_s == 0.06);
  CHECK(config_to_json(d) == config_to_json(c));
}

TEST_CASE("run_experiment is deterministic and follows the pipeline") {
  const ExperimentConfig c = small_thom();
  const auto a = run_experiment(c), b = run_experiment(c);
  CHECK(a.per_subsample == b.per_subsample);
  CHECK(a.N_bmax == 200);
  CHECK(a.N_blocklen == 100);
  CHECK(a.N_samp == 10);

  // Same result through the materialised series.
  const auto s = series(c.system, resolved_observable(c), orbit_config(c));
  const auto e = estimate_from_series(s.values, c.N_blocklen, c.N_bmax, c.N_samp);
  CHECK(e.per_subsample == a.per_subsample);

  ExperimentConfig one = c;
  one.N_samp = 1;
  const auto r = run_experiment(one);
  CHECK(r.s_mu == 0.0);
  CHECK(r.s_sigma == 0.0);
  CHECK(r.s_xi == 0.0);
}

TEST_CASE("passthrough of i.i.d. GEV noise recovers the generator") {
  const GevParams truth{0.5, 2.0, -0.4};
  const auto v = sample_gev(truth, 100000, 99);
  const auto rep = estimate_from_series(v, 1, v.size(), 100);
  CHECK(std::abs(rep.xi_hat - truth.xi) <= 0.03);
  CHECK(std::abs(rep.sigma_hat - truth.sigma) <= 0.05);
  CHECK(std::abs(rep.mu_hat - truth.mu) <= 0.05);
}

TEST_CASE("blocklen_sweep rows equal stand-alone runs") {
  const ExperimentConfig c = small_thom();
  const std::vector<std::size_t> ls{30, 100, 60};
  const auto rows = blocklen_sweep(c, ls);
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 0; k < ls.size(); ++k) {
    ExperimentConfig r = c;
    r.N_blocklen = ls[k];
    const auto rep = run_experiment(r);
    CHECK(rows[k].sweep_value == static_cast<double>(ls[k]));
    CHECK(rows[k].xi_hat == rep.xi_hat);
    CHECK(rows[k].s_xi == rep.s_xi);
    CHECK(rows[k].mu_hat == rep.mu_hat);
    CHECK(rows[k].n_iterates_used == ls[k] * c.N_bmax);
    CHECK_FALSE(rows[k].predicted_xi.has_value());
  }
  const auto single = blocklen_sweep(c, {100});
  CHECK(single[0] == rows[1]);
  const auto reversed = blocklen_sweep(c, {60, 100, 30});
  CHECK(reversed[0] == rows[2]);
  CHECK(reversed[2] == rows[0]);
  CHECK(blocklen_sweep(c, {}).empty());
}

TEST_CASE("param_sweep over an observable parameter") {
  ExperimentConfig c = small_thom();
  c.prediction = PredictionRequest{};
  const std::vector<double> bs{1.0, 2.0, 3.5};
  const auto rows = param_sweep(c, "b", bs);
  REQUIRE(rows.size() == 3);
  for (std::size_t k = 0; k < bs.size(); ++k) {
    const ExperimentConfig r = with_parameter(c, "b", bs[k]);
    CHECK(r.observable.b == bs[k]);
    CHECK(rows[k].xi_hat == run_experiment(r).xi_hat);
    REQUIRE(rows[k].predicted_xi.has_value());
    CHECK(*rows[k].predicted_xi == predict_thom_ab(2.0, bs[k]).xi);
    CHECK(rows[k].s_xi >= 0.0);
  }
  CHECK(param_sweep(c, "b", {}).empty());
  CHECK_THROWS_AS(param_sweep(c, "theta", {0.1}), ConfigError);
}

TEST_CASE("param_sweep over a system parameter fills the prediction column") {
  ExperimentConfig c;
  c.system = SystemSpec::solenoid();
  c.observable = ObservableSpec::plane_theta_xy(0.0);
  c.N_blocklen = 50;
  c.N_bmax = 60;
  c.N_samp = 6;
  c.transient = 100;
  c.prediction = PredictionRequest{};
  const std::vector<double> lams{0.2, 0.25, 0.3, 0.4};
  const auto rows = param_sweep(c, "lambda", lams);
  REQUIRE(rows.size() == 4);
  for (std::size_t k = 0; k < lams.size(); ++k) {
    REQUIRE(rows[k].predicted_xi.has_value());
    CHECK(-1.0 / *rows[k].predicted_xi == doctest::Approx(0.5 + std::log(2.0) / std::log(1.0 / lams[k])));
    CHECK(*rows[k].predicted_xi == predict_solenoid(SolenoidObservable::planar, lams[k]).xi);
    CHECK_FALSE(rows[k].error.has_value());
  }
}

TEST_CASE("failed rows carry NaN estimates and the error") {
  ExperimentConfig c;
  c.system = SystemSpec::henon();
  c.observable = ObservableSpec::coord_x();
  c.N_blocklen = 10;
  c.N_bmax = 30;
  c.N_samp = 3;
  c.transient = 1000;
  const auto rows = param_sweep(c, "system.a", {1.4, 3.0});
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].error.has_value());
  REQUIRE(rows[1].error.has_value());
  CHECK(rows[1].error->find("orbit") != std::string::npos);
  CHECK(std::isnan(rows[1].xi_hat));
  const auto csv = rows_to_csv(rows);
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("with_parameter") {
  ExperimentConfig c = small_thom();
  CHECK(with_parameter(c, "x_M", 0.7).observable.center->x() == 0.7);
  CHECK(with_parameter(c, "N_blocklen", 77).N_blocklen == 77);
  CHECK_THROWS_AS(with_parameter(c, "N_blocklen", 1.5), ConfigError);
  CHECK_THROWS_AS(with_parameter(c, "nonsense", 1.0), ConfigError);
  ExperimentConfig h;
  h.system = SystemSpec::henon();
  h.observable = ObservableSpec::plane_theta_2d(0.0);
  CHECK(with_parameter(h, "a", 1.2).system.param("a") == 1.2);
  CHECK(with_parameter(h, "theta", 0.5).observable.theta == 0.5);
}

TEST_CASE("run_sweep without a sweep gives one row") {
  const ExperimentConfig c = small_thom();
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].sweep_value == 100.0);
  CHECK(rows[0].xi_hat == run_experiment(c).xi_hat);
}

TEST_CASE("kernel_density examples") {
  const std::vector<double> one{2.0};
  const std::vector<double> grid{1.0, 2.0, 2.5};
  const auto d = kernel_density(one, 0.5, grid);
  const double norm = 1.0 / (0.5 * std::sqrt(2.0 * 3.141592653589793));
  CHECK(d[1] == doctest::Approx(norm));
  CHECK(d[0] == doctest::Approx(norm * std::exp(-2.0)));
  CHECK(d[2] == doctest::Approx(norm * std::exp(-0.5)));

  const std::vector<double> two{-1.0, 3.0};
  std::vector<double> g2;
  for (int i = -50; i <= 50; ++i) g2.push_back(1.0 + 0.1 * i);
  const auto d2 = kernel_density(two, 0.7, g2);
  for (std::size_t i = 0; i < g2.size(); ++i) CHECK(d2[i] == doctest::Approx(d2[g2.size() - 1 - i]).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_density(std::vector<double>{}, 1.0, grid), ConfigError);
  CHECK_THROWS_AS(kernel_density(one, 0.0, grid), ConfigError);
}

TEST_CASE("kernel_density integrates to one") {
  testing::Gen g(401);
  for (int k = 0; k < 10; ++k) {
    const auto v = g.reals(g.between(1, 200), -2, 2);
    const double h = g.real(0.01, 0.5);
    const double lo = *std::min_element(v.begin(), v.end()) - 8 * h;
    const double hi = *std::max_element(v.begin(), v.end()) + 8 * h;
    std::vector<double> grid;
    const std::size_t n = 20000;
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
    const auto d = kernel_density(v, h, grid);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass += 0.5 * (d[i] + d[i + 1]) * (grid[i + 1] - grid[i]);
    CHECK(mass >= 0.999);
    CHECK(mass <= 1.001);
  }
}

TEST_CASE("qq_data") {
  const GevParams p{0.0, 1.0, -0.3};
  const auto one = qq_data(std::vector<double>{0.7}, p);
  REQUIRE(one.size() == 1);
  CHECK(one[0].empirical == 0.7);
  CHECK(one[0].theoretical == gev_quantile(p, 0.5));

  const std::size_t n = 10000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto v = sample_gev(p, n, seed);
    const auto qq = qq_data(v, p);
    REQUIRE(qq.size() == n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) CHECK(qq[i].empirical >= qq[i - 1].empirical);
      worst = std::max(worst, std::abs(qq[i].empirical - qq[i].theoretical));
    }
    CHECK(worst <= 5.0 * p.sigma * std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n)));
  }

  const auto v = sample_gev(p, 500, 3);
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = 2.0 + 3.0 * v[i];
  const auto a = qq_data(v, p);
  const auto b = qq_data(w, GevParams{2.0, 3.0, -0.3});
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(b[i].empirical == doctest::Approx(2.0 + 3.0 * a[i].empirical));
    CHECK(b[i].theoretical == doctest::Approx(2.0 + 3.0 * a[i].theoretical));
  }
  CHECK_THROWS_AS(qq_data(std::vector<double>{}, p), ConfigError);
}

TEST_CASE("CSV export") {
  CHECK(rows_to_csv({}) == "sweep_value,xi_hat,xi_sd,mu_hat,mu_sd,sigma_hat,sigma_sd,predicted_xi,n_iterates\n");
  SweepRow r;
  r.sweep_value = 0.1;
  r.xi_hat = -2.0 / 3.0;
  r.s_xi = 0.25;
  r.mu_hat = 1.0;
  r.sigma_hat = 0.5;
  r.n_iterates_used = 12;
  const auto csv = rows_to_csv({r});
  CHECK(count_lines(csv) == 2);
  CHECK(csv.substr(csv.find('\n') + 1) == "0.10000000000000001,-0.66666666666666663,0.25,1,0,0.5,0,,12\n");
  r.predicted_xi = -0.5;
  const auto with_pred = rows_to_csv({r});
  CHECK(with_pred.find(",-0.5,12\n") != std::string::npos);
  std::ostringstream os;
  write_rows_csv(os, {r});
  CHECK(os.str() == with_pred);
}

TEST_CASE("JSON round trip is lossless") {
  testing::Gen g(402);
  std::vector<SweepRow> rows;
  for (int k = 0; k < 50; ++k) {
    SweepRow r;
    r.sweep_value = g.real(-1e3, 1e3);
    r.mu_hat = g.real(-1, 1) * 1e-300;
    r.sigma_hat = g.real(0, 1e10);
    r.xi_hat = g.real(-3, 1);
    r.s_mu = g.real(0, 1);
    r.s_sigma = g.real(0, 1);
    r.s_xi = g.real(0, 1);
    if (k % 2) r.predicted_xi = g.real(-2, 0);
    r.n_iterates_used = g.below(1u << 30);
    rows.push_back(r);
  }
  CHECK(rows_from_json(rows_to_json(rows)) == rows);
  CHECK(rows_from_json(rows_to_json({})).empty());

  EstimateReport rep;
  rep.per_subsample = {{0.1, 1.2, -0.3}, {0.2, 1.1, -0.4}};
  rep = summarize(rep.per_subsample);
  rep.N_bmax = 10;
  rep.N_blocklen = 7;
  const auto back = report_from_json(report_to_json(rep));
  CHECK(back.per_subsample == rep.per_subsample);
  CHECK(back.xi_hat == rep.xi_hat);
  CHECK(back.s_sigma == rep.s_sigma);
  CHECK(back.N_blocklen == 7);
  CHECK(back.N_samp == 2);
}

TEST_CASE("file export and IO errors name the path") {
  const std::string path = temp_path("rows.csv");
  export_rows({}, path, Format::csv);
  CHECK(read_text(path) == rows_to_csv({}));
  std::remove(path.c_str());
  const std::string bad = "/nonexistent_dir_exdyn/out.json";
  try {
    export_rows({}, bad, Format::json);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(bad) != std::string::npos);
  }
  CHECK(format_from_string("json") == Format::json);
  CHECK_THROWS_AS(format_from_string("xml"), ConfigError);
}

TEST_CASE("series files") {
  CHECK(parse_series("# header\n1.5\n\n-2\n  3e-1 \n") == std::vector<double>{1.5, -2.0, 0.3});
  CHECK_THROWS_AS(parse_series("1\nabc\n"), ConfigError);
  CHECK_THROWS_AS(read_series(temp_path("missing_series.txt")), IoError);
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}
