#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rwdrive/plant.hpp"
#include "rwdrive/transmission.hpp"

#include <cmath>
#include <random>

using namespace rwd;

namespace {
const TendonJacobian G = TendonJacobian::gcd_joints();
const PlantParams kParams;
const ActuationConstants kConstants;
}  // namespace

TEST_CASE("joint dynamics") {
  SUBCASE("zero torque leaves the state alone") {
    PlantState s;
    s.q = JointVector(0.2, -0.1, 0.5);
    const JointVector q0 = s.q;
    step_joints(s, JointVector::Zero(), 0.01, kParams);
    CHECK((s.q - q0).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("first-order model advances at tau/b") {
    PlantState s;
    const JointVector tau(2.0, -4.0, 1.0);
    for (int i = 0; i < 100; ++i) step_joints(s, tau, 0.01, kParams);
    // b = 2 for all joints, 1 second of integration
    CHECK(std::abs(s.q[0] - 1.0) <= 1e-9);
    CHECK(std::abs(s.q[1] - -2.0) <= 1e-9);
    CHECK(std::abs(s.q[2] - 0.5) <= 1e-9);
  }

  SUBCASE("limits clamp with zero velocity") {
    PlantState s;
    s.q = JointVector(kParams.joint_limit, 0.0, 0.0);
    step_joints(s, JointVector(10.0, 0.0, 0.0), 0.01, kParams);
    CHECK(s.q[0] == kParams.joint_limit);
    CHECK(s.qd[0] == 0.0);
  }

  SUBCASE("second-order energy decays without drive") {
    PlantParams p = kParams;
    p.inertia = JointVector::Constant(0.1);
    PlantState s;
    s.qd = JointVector(1.0, -2.0, 0.5);
    double prev = 0.5 * 0.1 * s.qd.squaredNorm();
    for (int i = 0; i < 500; ++i) {
      step_joints(s, JointVector::Zero(), 0.001, p);
      const double ke = 0.5 * 0.1 * s.qd.squaredNorm();
      CHECK(ke <= prev + 1e-12);
      prev = ke;
    }
  }
}

TEST_CASE("contract link") {
  SUBCASE("tension above the spring contracts to the lock") {
    VscLink link;
    int ticks = 0;
    while (!link.locked && ticks < 20000) {
      step_vsc(link, 300.0, 0.001, kParams);
      ++ticks;
    }
    CHECK(link.locked);
    CHECK(link.length == kParams.vsc_min);
    // length always at the minimum while locked
    step_vsc(link, 300.0, 0.001, kParams);
    CHECK(link.locked);
    CHECK(link.length == kParams.vsc_min);
  }

  SUBCASE("released wire extends to full length") {
    VscLink link;
    link.length = kParams.vsc_min;
    for (int i = 0; i < 20000; ++i) step_vsc(link, 0.0, 0.001, kParams);
    CHECK(link.length == kParams.vsc_max);
    CHECK_FALSE(link.locked);
  }

  SUBCASE("spring-equal tension holds") {
    VscLink link;
    link.length = 0.25;
    step_vsc(link, kParams.vsc_spring_max, 0.01, kParams);
    CHECK(link.length == 0.25);
  }

  SUBCASE("unlock requires dropping below the spring force") {
    VscLink link;
    link.length = kParams.vsc_min;
    link.locked = true;
    step_vsc(link, 250.0, 0.01, kParams);  // still above 244
    CHECK(link.locked);
    step_vsc(link, 240.0, 0.01, kParams);
    CHECK_FALSE(link.locked);
    CHECK(link.length > kParams.vsc_min);
  }

  SUBCASE("length stays within bounds") {
    std::mt19937 rng(5);
    VscLink link;
    for (int i = 0; i < 5000; ++i) {
      const double f = 500.0 * (static_cast<double>(rng()) / 4294967296.0);
      step_vsc(link, f, 0.01, kParams);
      CHECK(link.length >= kParams.vsc_min);
      CHECK(link.length <= kParams.vsc_max);
      if (link.locked) CHECK(link.length == kParams.vsc_min);
    }
  }
}

TEST_CASE("anchor-gripper end effector") {
  SUBCASE("close tension closes from any open state") {
    AgiState ee;
    ee.phase = AgiPhase::FullyOpenLocked;
    ee.angle = 0.0;
    int ticks = 0;
    while (ee.phase != AgiPhase::Closed && ticks < 20000) {
      step_agi_ee(ee, 450.0, 0.0, 0.001, kParams);
      ++ticks;
    }
    CHECK(ee.phase == AgiPhase::Closed);
    CHECK(ee.angle == kParams.agi_closed_angle);
    CHECK(ticks * 0.001 < 2.0);  // closes briskly
  }

  SUBCASE("the open lock shrugs off external loads") {
    AgiState ee;
    ee.phase = AgiPhase::FullyOpenLocked;
    ee.angle = 0.0;
    for (double load : {0.5, 2.0, 3.9}) {
      for (int i = 0; i < 1000; ++i) step_agi_ee(ee, 0.0, load, 0.001, kParams);
      CHECK(ee.phase == AgiPhase::FullyOpenLocked);
      CHECK(ee.angle == 0.0);
    }
  }

  SUBCASE("releasing the wire opens through partial to the lock") {
    AgiState ee;  // default: closed
    bool saw_partial = false;
    int ticks = 0;
    while (ee.phase != AgiPhase::FullyOpenLocked && ticks < 20000) {
      step_agi_ee(ee, 0.0, 0.0, 0.001, kParams);
      if (ee.phase == AgiPhase::Partial) saw_partial = true;
      ++ticks;
    }
    CHECK(saw_partial);
    CHECK(ee.phase == AgiPhase::FullyOpenLocked);
  }

  SUBCASE("no way out of the lock except the close threshold") {
    std::mt19937 rng(9);
    AgiState ee;
    ee.phase = AgiPhase::FullyOpenLocked;
    ee.angle = 0.0;
    for (int i = 0; i < 5000; ++i) {
      const double f =
          (kParams.agi_close_threshold - 1e-6) * (static_cast<double>(rng()) / 4294967296.0);
      const double load = 8.0 * (static_cast<double>(rng()) / 4294967296.0 - 0.5);
      step_agi_ee(ee, f, load, 0.001, kParams);
      CHECK(ee.phase == AgiPhase::FullyOpenLocked);
    }
    step_agi_ee(ee, kParams.agi_close_threshold, 0.0, 0.001, kParams);
    CHECK(ee.phase != AgiPhase::FullyOpenLocked);
  }

  SUBCASE("finger torque is clamped to its bounds") {
    // at full close tension the net torque sits exactly at the upper bound
    const double net = kParams.agi_moment_arm * (450.0 - kParams.agi_spring_max);
    CHECK(net >= kParams.agi_torque_max);
    AgiState ee;
    ee.phase = AgiPhase::Partial;
    ee.angle = 0.5;
    step_agi_ee(ee, 450.0, 0.0, 0.01, kParams);
    const double rate = (ee.angle - 0.5) / 0.01;
    CHECK(std::abs(rate - kParams.agi_torque_max / kParams.agi_damping) <= 1e-9);
  }
}

TEST_CASE("body track bookkeeping") {
  SUBCASE("anchored contraction advances the shoulder") {
    PlantState s;
    s.agi.phase = AgiPhase::FullyOpenLocked;
    s.agi.angle = 0.0;
    const double prox0 = s.vsc_proximal.length;
    s.vsc_proximal.length -= 0.05;
    step_body(s, prox0, s.vsc_distal.length, kParams);
    CHECK(s.anchored);
    CHECK(std::abs(s.body_displacement - 0.05) <= 1e-12);
    CHECK(std::abs(s.ee_displacement - 2.0 * kVscMaxLength) <= 1e-12);
  }

  SUBCASE("free extension advances the end effector") {
    PlantState s;  // default: closed gripper, not anchored
    s.vsc_distal.length = 0.2;
    const double dist0 = 0.25;
    step_body(s, s.vsc_proximal.length, dist0, kParams);
    CHECK_FALSE(s.anchored);
    CHECK(s.body_displacement == 0.0);
    CHECK(std::abs(s.ee_displacement - (s.vsc_proximal.length + 0.2)) <= 1e-12);
  }

  SUBCASE("no length change, no motion") {
    PlantState s;
    step_body(s, s.vsc_proximal.length, s.vsc_distal.length, kParams);
    CHECK(s.body_displacement == 0.0);
    CHECK(std::abs(s.ee_displacement - 2.0 * kVscMaxLength) <= 1e-12);
  }

  SUBCASE("slip gives back part of the anchored stroke") {
    PlantParams p = kParams;
    p.slip = 0.4;
    PlantState s;
    s.agi.phase = AgiPhase::FullyOpenLocked;
    s.agi.angle = 0.0;
    const double prox0 = s.vsc_proximal.length;
    s.vsc_proximal.length -= 0.1;
    step_body(s, prox0, s.vsc_distal.length, p);
    CHECK(std::abs(s.body_displacement - 0.06) <= 1e-12);
    CHECK(std::abs(s.ee_displacement - (2.0 * kVscMaxLength - 0.04)) <= 1e-12);
  }
}

TEST_CASE("motor-side observation") {
  PlantState s;
  s.q = JointVector(0.5, -0.3, 0.8);
  s.vsc_proximal.length = 0.25;
  const WireVector f_motor = WireVector::Constant(85.0);
  const WireVector f_distal = WireVector::Constant(75.0);

  SUBCASE("motor feedback reproduces the plant-side lengths exactly") {
    const MotorObservation obs =
        observe(s, G, f_motor, f_distal, TensionFeedback::MotorSide, kConstants);
    CHECK((obs.tensions - f_motor).cwiseAbs().maxCoeff() == 0.0);
    // invert the winch model with the same tensions
    const WireVector l_hat =
        kConstants.r_pulley * obs.angles - kConstants.elongation_k * obs.tensions;
    const WireVector expected =
        (G.entries * s.q).array() + (kVscMaxLength - s.vsc_proximal.length);
    CHECK((l_hat - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("distal feedback leaves the elongation mismatch in place") {
    const MotorObservation obs =
        observe(s, G, f_motor, f_distal, TensionFeedback::DistalSide, kConstants);
    CHECK((obs.tensions - f_distal).cwiseAbs().maxCoeff() == 0.0);
    const WireVector l_hat =
        kConstants.r_pulley * obs.angles - kConstants.elongation_k * obs.tensions;
    const WireVector expected =
        (G.entries * s.q).array() + (kVscMaxLength - s.vsc_proximal.length) +
        kConstants.elongation_k * (85.0 - 75.0);
    CHECK((l_hat - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("slack wires observe zero tension") {
    const MotorObservation obs = observe(s, G, WireVector::Zero(), WireVector::Zero(),
                                         TensionFeedback::MotorSide, kConstants);
    CHECK(obs.tensions.isZero(0.0));
  }
}
