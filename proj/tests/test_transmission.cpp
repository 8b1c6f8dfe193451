#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rwdrive/transmission.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace rwd;

TEST_CASE("capstan efficiency") {
  CHECK(tsm_efficiency(0.085, 0.0) == 1.0);
  CHECK(std::abs(tsm_efficiency(0.085, 2.0 * M_PI) - 0.5862137756244961) <= 1e-12);
  const double deg600 = 600.0 * M_PI / 180.0;
  CHECK(std::abs(tsm_efficiency(0.085, deg600) - 0.410607331689865) <= 1e-12);

  CHECK_THROWS_AS(tsm_efficiency(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(tsm_efficiency(0.1, -1.0), std::domain_error);

  // strictly decreasing in the bend angle for positive friction
  double prev = 1.0;
  for (double a = 0.1; a < 12.0; a += 0.1) {
    const double e = tsm_efficiency(0.085, a);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("joint chain efficiency") {
  CHECK(chain_efficiency(0.5, 0) == 1.0);
  CHECK(std::abs(chain_efficiency(0.99, 4) - 0.96059601) <= 1e-12);
  CHECK(std::abs(chain_efficiency(0.97, 4) - 0.8852928099999999) <= 1e-12);
  CHECK_THROWS_AS(chain_efficiency(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(chain_efficiency(1.2, 2), std::domain_error);

  double prev = 1.0;
  for (int n = 1; n < 30; ++n) {
    const double e = chain_efficiency(0.97, n);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("superiority fraction") {
  CHECK(std::abs(superiority_fraction(0.98, 0.04) - 0.7856426177718647) <= 1e-12);
  CHECK(std::abs(superiority_fraction(0.99, 0.2) - 0.9786725249224204) <= 1e-12);
  CHECK(std::abs(superiority_fraction(0.98, 0.04) - 0.786) <= 5e-4);
  CHECK(std::abs(superiority_fraction(0.99, 0.2) - 0.979) <= 5e-4);
  CHECK(superiority_fraction(1.0, 0.1) == 1.0);
  CHECK(superiority_fraction(0.5, 0.01) == 0.0);  // clamped
  CHECK_THROWS_AS(superiority_fraction(0.98, 0.0), std::domain_error);

  // envelope over the published parameter ranges
  double lo = 1.0, hi = 0.0;
  for (double eta = 0.98; eta <= 0.990001; eta += 0.001) {
    for (double mu = 0.04; mu <= 0.2001; mu += 0.005) {
      const double f = superiority_fraction(eta, mu);
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
  }
  CHECK(std::abs(lo - 0.79) <= 0.01);
  CHECK(std::abs(hi - 0.98) <= 0.01);
}

TEST_CASE("total transmission efficiency") {
  TransmissionConfig cfg;
  cfg.n_joints = 0;
  cfg.eta_dj = 0.97;
  cfg.theta_tsm = 0.0;
  CHECK(rwtm_efficiency(cfg) == 1.0);

  cfg.n_joints = 4;
  CHECK(std::abs(rwtm_efficiency(cfg) - 0.8852928099999999) <= 1e-12);
  CHECK(std::abs(rwtm_efficiency(cfg) - 0.884) <= 0.002);

  cfg.theta_tsm = M_PI;
  CHECK(std::abs(rwtm_efficiency(cfg) - 0.677820886264652) <= 1e-12);

  // factorization holds across a parameter grid
  for (int n = 0; n <= 6; ++n) {
    for (double th = 0.0; th < 7.0; th += 0.7) {
      TransmissionConfig c;
      c.n_joints = n;
      c.eta_dj = 0.97;
      c.mu_tsm = 0.085;
      c.theta_tsm = th;
      CHECK(std::abs(rwtm_efficiency(c) -
                     chain_efficiency(0.97, n) * tsm_efficiency(0.085, th)) <= 1e-15);
    }
  }

  TransmissionConfig bad;
  bad.joint_bends = {3.0};  // beyond 3*pi/4
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("tension propagation stiction model") {
  TransmissionConfig cfg;
  cfg.n_joints = 4;
  cfg.eta_dj = 0.97;
  cfg.mu_tsm = 0.085;
  cfg.theta_tsm = 0.0;
  const double eta = rwtm_efficiency(cfg);

  SUBCASE("steady input from rest lands on the rising branch") {
    TransmissionConfig simple = cfg;
    simple.eta_dj = 0.9;
    simple.n_joints = 1;
    HysteresisState st;
    const double out = propagate_tension(100.0, st, simple);
    CHECK(std::abs(out - 90.0) <= 1e-12);
    CHECK(st.motion == WireMotion::Raising);
    // holding the input leaves the output in place
    propagate_tension(100.0, st, simple);
    CHECK(std::abs(st.output - 90.0) <= 1e-12);
  }

  SUBCASE("ramp produces the expected hysteresis loop") {
    HysteresisState st;
    std::vector<double> inputs;
    for (double u = 10.0; u <= 400.0; u += 1.0) inputs.push_back(u);
    for (double u = 399.0; u >= 10.0; u -= 1.0) inputs.push_back(u);

    double peak_output = 0.0;
    for (size_t i = 0; i < inputs.size(); ++i) {
      const double u = inputs[i];
      const double out = propagate_tension(u, st, cfg);
      if (i < 391) {
        CHECK(std::abs(out - eta * u) <= 1e-9);  // rising branch
        CHECK(out <= u + 1e-12);
        peak_output = out;
      } else if (u / eta < peak_output) {
        CHECK(std::abs(out - u / eta) <= 1e-9);  // falling branch
        CHECK(out >= u - 1e-12);
      } else {
        CHECK(std::abs(out - peak_output) <= 1e-9);  // stuck at the corner
      }
    }
  }

  SUBCASE("infinite band never moves") {
    TransmissionConfig frozen = cfg;
    frozen.stiction_band = std::numeric_limits<double>::infinity();
    HysteresisState st;
    for (double u : {10.0, 200.0, 400.0, 5.0}) {
      CHECK(propagate_tension(u, st, frozen) == 0.0);
      CHECK(st.motion == WireMotion::Stuck);
    }
  }

  SUBCASE("monotone ramps give monotone outputs") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      TransmissionConfig c = cfg;
      c.stiction_band = 20.0 * (static_cast<double>(rng()) / 4294967296.0);
      HysteresisState st;
      double u = 0.0;
      double prev_out = 0.0;
      bool first = true;
      while (u < 450.0) {
        u += 10.0 * (static_cast<double>(rng()) / 4294967296.0);
        const double out = propagate_tension(u, st, c);
        if (!first) CHECK(out >= prev_out - 1e-12);
        prev_out = out;
        first = false;
      }
    }
  }

  SUBCASE("loop area is non-negative") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      TransmissionConfig c = cfg;
      c.stiction_band = 15.0 * (static_cast<double>(rng()) / 4294967296.0);
      HysteresisState st;
      std::vector<double> u, y;
      for (double v = 10.0; v <= 400.0; v += 2.0) {
        u.push_back(v);
        y.push_back(propagate_tension(v, st, c));
      }
      for (double v = 398.0; v >= 10.0; v -= 2.0) {
        u.push_back(v);
        y.push_back(propagate_tension(v, st, c));
      }
      double area = 0.0;  // integral of y du around the closed loop
      for (size_t i = 1; i < u.size(); ++i) {
        area -= 0.5 * (y[i] + y[i - 1]) * (u[i] - u[i - 1]);
      }
      CHECK(area >= -1e-9);
    }
  }

  SUBCASE("negative input rejected") {
    HysteresisState st;
    CHECK_THROWS_AS(propagate_tension(-1.0, st, cfg), std::domain_error);
  }
}

TEST_CASE("mass budget") {
  const DesignBudget budget;
  CHECK(total_mass(0, 0.0, budget) == 0.0);
  CHECK(std::abs(total_mass(4, 4.0, budget) - 2.66176) <= 1e-12);
  CHECK(std::abs(total_mass(1, 0.096, budget) - 0.34) <= 1e-12);
  CHECK_THROWS_AS(total_mass(4, 0.2, budget), std::domain_error);
  CHECK_THROWS_AS(total_mass(-1, 1.0, budget), std::domain_error);
}

TEST_CASE("traction feasibility") {
  DesignBudget budget;  // m_tip = 3, mu_tip = 0.5, mu_rwtm = 0.3
  const TractionCheck ok = traction_feasible(4, 4.0, budget);
  CHECK(ok.feasible);
  CHECK(std::abs(ok.margin - (1.5 - 2.66176 * 0.3)) <= 1e-12);

  budget.m_tip = 0.0;
  CHECK_FALSE(traction_feasible(4, 4.0, budget).feasible);

  // boundary: equality counts as feasible with zero margin
  DesignBudget exact;
  exact.m_tip = total_mass(4, 4.0, exact);
  exact.mu_tip = 0.25;
  exact.mu_rwtm = 0.25;
  const TractionCheck edge = traction_feasible(4, 4.0, exact);
  CHECK(edge.feasible);
  CHECK(edge.margin == 0.0);
}

TEST_CASE("largest sheath bend for an efficiency threshold") {
  const TsmAngleBudget base = max_tsm_angle_for_efficiency(0, 0.97, 0.085, 0.6);
  CHECK(base.feasible);
  CHECK_FALSE(base.unbounded);
  CHECK(std::abs(base.angle - 6.009713220776361) <= 1e-9);
  CHECK(std::abs(base.angle - 6.009) <= 1e-3);

  // threshold of 1 with a lossy chain is infeasible
  const TsmAngleBudget lossy = max_tsm_angle_for_efficiency(4, 0.97, 0.085, 1.0);
  CHECK_FALSE(lossy.feasible);
  CHECK(lossy.angle == 0.0);

  // threshold of 1 with a lossless chain allows zero bend
  const TsmAngleBudget lossless = max_tsm_angle_for_efficiency(0, 0.97, 0.085, 1.0);
  CHECK(lossless.feasible);
  CHECK(lossless.angle == 0.0);

  // a chain long enough to fall below the threshold on its own
  const TsmAngleBudget deep = max_tsm_angle_for_efficiency(40, 0.97, 0.085, 0.6);
  CHECK_FALSE(deep.feasible);
  CHECK(deep.angle == 0.0);

  // frictionless sheath is unbounded when the chain is feasible
  const TsmAngleBudget unbounded = max_tsm_angle_for_efficiency(4, 0.97, 0.0, 0.6);
  CHECK(unbounded.feasible);
  CHECK(unbounded.unbounded);

  CHECK_THROWS_AS(max_tsm_angle_for_efficiency(4, 0.97, 0.085, 0.0), std::domain_error);
}
