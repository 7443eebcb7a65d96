#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "exdyn/dynamics.hpp"
#include "exdyn/error.hpp"
#include "oracle_values.hpp"
#include "support.hpp"

using namespace exdyn;

namespace {

void check_state(const StateVector& got, std::initializer_list<double> want, double tol = 0.0) {
  REQUIRE(got.dim() == want.size());
  std::size_t i = 0;
  for (double w : want) {
    CHECK(std::abs(got[i] - w) <= tol);
    ++i;
  }
}

OrbitConfig from_point(StateVector p, std::size_t transient, std::size_t n) {
  OrbitConfig c;
  c.initial = p;
  c.transient = transient;
  c.n_samples = n;
  return c;
}

}  // namespace

TEST_CASE("map_step examples") {
  check_state(map_step(SystemSpec::thom(), {0.5, 0.5}), {0.5, 0.0});
  check_state(map_step(SystemSpec::thom(), {0.0, 0.0}), {0.0, 0.0});
  check_state(map_step(SystemSpec::henon(), {0.0, 0.0}), {1.0, 0.0});
  check_state(map_step(SystemSpec::lozi(), {1.0, 0.0}), {-0.7, 0.1}, 1e-15);
  check_state(map_step(SystemSpec::solenoid(), {0.0, 1.0, 0.0}), {0.0, 1.5, 0.0});
}

TEST_CASE("map_step rejects flows, wrong dimension and non-finite input") {
  CHECK_THROWS_AS(map_step(SystemSpec::lorenz63(), {1.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(map_step(SystemSpec::henon(), {1.0, 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(map_step(SystemSpec::henon(), {NAN, 0.0}), ConfigError);
}

TEST_CASE("system parameters: defaults, validation, unknown names") {
  CHECK(SystemSpec::henon().param("a") == 1.4);
  CHECK(SystemSpec::lozi().param("b") == 0.1);
  CHECK(SystemSpec::lorenz63().param("beta") == 8.0 / 3.0);
  CHECK(SystemSpec::lorenz84().param("F") == 8.0);
  CHECK(SystemSpec::solenoid().param("K") == 0.5);
  CHECK(SystemSpec::thom().params().empty());
  CHECK_THROWS_AS(SystemSpec::make("henon", {{"c", 1.0}}), ConfigError);
  CHECK_THROWS_AS(SystemSpec::make("pendulum"), ConfigError);
  CHECK_THROWS_AS(SystemSpec::solenoid(0.5, 0.4), ConfigError);
  CHECK_THROWS_AS(SystemSpec::solenoid(0.25, 0.8), ConfigError);
  CHECK(SystemSpec::henon().with_param("a", 1.2).param("a") == 1.2);
  CHECK(SystemSpec::henon().kind() == SystemKind::map);
  CHECK(SystemSpec::lorenz84().kind() == SystemKind::flow);
}

TEST_CASE("vector_field examples") {
  check_state(vector_field(SystemSpec::lorenz63(), {0.0, 0.0, 0.0}), {0.0, 0.0, 0.0});
  check_state(vector_field(SystemSpec::lorenz63(), {1.0, 1.0, 1.0}), {0.0, 26.0, -5.0 / 3.0}, 1e-15);
  check_state(vector_field(SystemSpec::lorenz84(), {0.0, 0.0, 0.0}), {2.0, 1.0, 0.0});
}

TEST_CASE("flow_sample: one RK4 step matches the high-precision oracle") {
  const StateVector s = flow_sample(SystemSpec::lorenz63(), {1.0, 1.0, 1.0}, 0.01, 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(s[i] - oracle::kLorenz63Rk4Step[i]) <= 1e-12);
}

TEST_CASE("flow_sample: equilibrium is fixed") {
  check_state(flow_sample(SystemSpec::lorenz63(), {0.0, 0.0, 0.0}, 0.05, 10), {0.0, 0.0, 0.0});
}

TEST_CASE("flow_sample: fourth-order convergence under step halving") {
  for (const auto& sys : {SystemSpec::lorenz63(), SystemSpec::lorenz84()}) {
    const StateVector p0 = sys.id() == SystemId::lorenz63 ? StateVector(1.0, 1.0, 1.0) : StateVector(1.0, 0.5, 0.2);
    const double T = 0.5;
    const StateVector ref = flow_sample(sys, p0, T, 4096);
    auto err = [&](std::size_t n) {
      const StateVector s = flow_sample(sys, p0, T, n);
      double e = 0.0;
      for (std::size_t i = 0; i < 3; ++i) e = std::max(e, std::abs(s[i] - ref[i]));
      return e;
    };
    const double ratio = err(50) / err(100);
    INFO(sys.name(), " ratio ", ratio);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("flow_sample reports divergence with the substep index") {
  const auto sys = SystemSpec::lorenz63(10.0, 28.0, 8.0 / 3.0);
  try {
    flow_sample(sys, {1e154, 1e154, 1e154}, 1.0, 4);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.index() >= 1);
    CHECK(e.index() <= 4);
    CHECK(e.stage() == "orbit");
  }
}

TEST_CASE("jacobian examples") {
  const auto jt = *jacobian(SystemSpec::thom(), {0.3, 0.7});
  CHECK(jt(0, 0) == 2.0);
  CHECK(jt(0, 1) == 1.0);
  CHECK(jt(1, 0) == 1.0);
  CHECK(jt(1, 1) == 1.0);
  CHECK(jt.determinant() == 1.0);
  testing::Gen g(7);
  for (int i = 0; i < 100; ++i) {
    const StateVector p(g.real(-2, 2), g.real(-2, 2));
    CHECK(jacobian(SystemSpec::henon(), p)->determinant() == -0.3);
    const auto jl = jacobian(SystemSpec::lozi(), p);
    REQUIRE(jl.has_value());
    CHECK(std::abs(std::abs(jl->determinant()) - 0.1) <= 1e-16);
  }
  CHECK_FALSE(jacobian(SystemSpec::lozi(), {0.0, 0.4}).has_value());
}

TEST_CASE("jacobian matches finite differences") {
  testing::Gen g(11);
  for (const auto& sys : {SystemSpec::henon(), SystemSpec::lozi(), SystemSpec::lorenz63(), SystemSpec::lorenz84()}) {
    for (int k = 0; k < 20; ++k) {
      StateVector p = sys.state_dim() == 2 ? StateVector(g.real(0.1, 1), g.real(-0.3, 0.3))
                                           : StateVector(g.real(-5, 5), g.real(-5, 5), g.real(0, 10));
      const auto j = *jacobian(sys, p);
      const double h = 1e-6;
      for (std::size_t c = 0; c < p.dim(); ++c) {
        StateVector a = p, b = p;
        a[c] += h;
        b[c] -= h;
        const auto fa = sys.kind() == SystemKind::map ? map_step(sys, a) : vector_field(sys, a);
        const auto fb = sys.kind() == SystemKind::map ? map_step(sys, b) : vector_field(sys, b);
        for (std::size_t r = 0; r < p.dim(); ++r) {
          CHECK(std::abs((fa[r] - fb[r]) / (2 * h) - j(r, c)) <= 1e-6 * (1 + std::abs(j(r, c))));
        }
      }
    }
  }
}

TEST_CASE("orbit: first sample is the initial state") {
  const auto o = orbit(SystemSpec::thom(), from_point({0.1, 0.1}, 0, 3));
  REQUIRE(o.size() == 3);
  check_state(o[0], {0.1, 0.1});
  check_state(o[1], {0.3, 0.2}, 1e-15);
  check_state(o[2], {0.8, 0.5}, 1e-15);
}

TEST_CASE("orbit: transient composition identity") {
  for (const auto& sys : {SystemSpec::thom(), SystemSpec::henon(), SystemSpec::solenoid(), SystemSpec::lorenz84()}) {
    OrbitConfig a;
    a.seed = 5;
    a.transient = 37;
    a.n_samples = 1;
    OrbitConfig b = a;
    b.transient = 0;
    b.n_samples = 38;
    CHECK(orbit(sys, a).back() == orbit(sys, b).back());
  }
}

TEST_CASE("orbit: deterministic and seed dependent") {
  OrbitConfig c;
  c.seed = 99;
  c.transient = 1000;
  c.n_samples = 50;
  const auto sys = SystemSpec::henon();
  CHECK(orbit(sys, c) == orbit(sys, c));
  OrbitConfig d = c;
  d.seed = 100;
  CHECK(orbit(sys, c) != orbit(sys, d));
}

TEST_CASE("orbit: divergence carries the step index") {
  // Outside the basin the Henon orbit escapes to infinity.
  try {
    orbit(SystemSpec::henon(), from_point({5.0, 5.0}, 100, 1));
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.index() > 0);
    CHECK(e.index() <= 100);
  }
}

TEST_CASE("thom orbit stays in the half-open unit square") {
  OrbitConfig c;
  c.seed = 3;
  c.transient = 0;
  c.n_samples = 100000;
  for_each_state(SystemSpec::thom(), c, [](const auto&, const StateVector& s) {
    if (!(s[0] >= 0.0 && s[0] < 1.0 && s[1] >= 0.0 && s[1] < 1.0)) FAIL("left [0,1)^2");
  });
}

TEST_CASE("thom orbit equidistributes (Lebesgue smoke test)") {
  OrbitConfig c;
  c.seed = 21;
  c.transient = 100;
  c.n_samples = 1000000;
  struct Box {
    double x0, y0, w, h;
  };
  const Box boxes[] = {{0.1, 0.2, 0.3, 0.3}, {0.5, 0.5, 0.1, 0.4}, {0.0, 0.0, 0.05, 0.05}};
  for (const auto& b : boxes) {
    std::size_t hits = 0;
    for_each_state(SystemSpec::thom(), c, [&](const auto&, const StateVector& s) {
      hits += s[0] >= b.x0 && s[0] < b.x0 + b.w && s[1] >= b.y0 && s[1] < b.y0 + b.h;
    });
    const double A = b.w * b.h;
    const double frac = static_cast<double>(hits) / 1e6;
    // Deterministic bound plus 4 binomial standard deviations.
    CHECK(std::abs(frac - A) <= 5.0 * std::sqrt(A) * 1e-3 + 4.0 * std::sqrt(A * (1 - A) / 1e6));
  }
}

TEST_CASE("solenoid orbit stays in the solid torus of radius 0.9") {
  OrbitConfig c;
  c.seed = 4;
  c.n_samples = 10000;
  for_each_state(SystemSpec::solenoid(), c, [](const auto&, const StateVector& s) {
    const double d = (s[1] - 1.0) * (s[1] - 1.0) + s[2] * s[2];
    if (!(d <= 0.81)) FAIL("left the torus");
  });
}

TEST_CASE("solenoid angle is exact doubling on the lattice") {
  const auto sys = SystemSpec::solenoid();
  const double psi = 12345.0 / static_cast<double>(SolenoidMap::kLattice);
  const StateVector s = map_step(sys, {psi, 1.0, 0.0});
  CHECK(SolenoidMap::lattice_index(s[0]) == 24690);
  // Does not collapse: after 200 steps the angle is still far from 0.
  OrbitConfig c;
  c.seed = 1;
  c.transient = 200;
  const auto last = orbit(sys, c).back();
  CHECK(last[0] != 0.0);
}

TEST_CASE("to_cartesian examples") {
  const auto sys = SystemSpec::solenoid();
  check_state(to_cartesian(sys, {0.0, 1.5, 0.0}), {1.5, 0.0, 0.0});
  check_state(to_cartesian(sys, {0.25, 1.0, 0.2}), {0.0, 1.0, 0.2}, 1e-15);
  check_state(to_cartesian(sys, {0.5, 2.0, 0.0}), {-2.0, 0.0, 0.0}, 1e-15);
  check_state(to_cartesian(SystemSpec::henon(), {0.3, 0.1}), {0.3, 0.1});
}

TEST_CASE("random initial states come from the documented boxes") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    OrbitConfig c;
    c.seed = seed;
    const auto h = initial_state(SystemSpec::henon(), c);
    CHECK(std::abs(h[0]) <= 0.1);
    CHECK(std::abs(h[1]) <= 0.1);
    const auto l = initial_state(SystemSpec::lorenz63(), c);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(l[i] - 1.0) <= 0.1);
    const auto s = initial_state(SystemSpec::solenoid(), c);
    CHECK(s[1] == 1.0);
    CHECK(s[2] == 0.0);
  }
}

TEST_CASE("orbit config validation") {
  OrbitConfig c;
  c.n_samples = 0;
  CHECK_THROWS_AS(orbit(SystemSpec::thom(), c), ConfigError);
  OrbitConfig d;
  d.sample_interval = -1.0;
  CHECK_THROWS_AS(orbit(SystemSpec::lorenz63(), d), ConfigError);
  OrbitConfig e;
  e.initial = StateVector(0.1, 0.1, 0.1);
  CHECK_THROWS_AS(orbit(SystemSpec::thom(), e), ConfigError);
}
