#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qlink/device/device_params.hpp"
#include "qlink/error.hpp"
#include "qlink/multimode/multimode.hpp"

using namespace qlink;
using namespace qlink::multimode;

namespace {

const double kFsr = hz_to_angular(1.8783e6);

MultimodeSpec single_mode(double g, double detuning) {
  MultimodeSpec s;
  s.qubits.push_back({detuning, uniform_coupling(g), CableEnd::Near});
  s.m_lo = s.m_hi = 10;
  s.omega_fsr = kFsr;
  s.rotating_frame_freq = 10 * kFsr;
  return s;
}

}  // namespace

TEST(Hamiltonian, SymmetricWithLadderDiagonal) {
  MultimodeSpec s;
  s.qubits.push_back({0.0, uniform_coupling(1e6), CableEnd::Near});
  s.qubits.push_back({2e6, uniform_coupling(2e6), CableEnd::Far});
  s.m_lo = 5;
  s.m_hi = 9;
  s.omega_fsr = kFsr;
  s.rotating_frame_freq = 7 * kFsr;
  const auto H = build_hamiltonian(s);
  ASSERT_EQ(H.rows(), 7);
  EXPECT_LT((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(H(2, 2), -2 * kFsr, 1e-6);
  EXPECT_NEAR(H(6, 6), 2 * kFsr, 1e-6);
  // Far end: (-1)^m on the coupling, modes 5 and 7 odd.
  EXPECT_NEAR(H(1, 2), -2e6, 1e-9);
  EXPECT_NEAR(H(1, 3), 2e6, 1e-9);
  EXPECT_NEAR(H(0, 2), 1e6, 1e-9);
  EXPECT_EQ(H(0, 1), 0.0);
  EXPECT_EQ(basis_labels(s).size(), 7u);
}

TEST(Hamiltonian, RejectsEmptyLadder) {
  MultimodeSpec s;
  s.qubits.push_back({0.0, uniform_coupling(1e6), CableEnd::Near});
  s.m_lo = 5;
  s.m_hi = 4;
  s.omega_fsr = kFsr;
  EXPECT_THROW(build_hamiltonian(s), InvalidParameter);
}

TEST(Evolve, VacuumRabiOracle) {
  const double g = hz_to_angular(1e6);
  std::vector<double> t;
  for (int i = 0; i <= 50; ++i) t.push_back(i * 20e-9);
  const auto tr = evolve(build_hamiltonian(single_mode(g, 0.0)), basis_state(2, 0), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(tr.populations(i, 0), std::pow(std::cos(g * t[i]), 2), 1e-10);
  }
}

TEST(Evolve, DetunedRabiOracle) {
  const double g = hz_to_angular(1e6);
  const double d = hz_to_angular(1.5e6);
  const double W = std::sqrt(g * g + d * d / 4);
  std::vector<double> t{0, 100e-9, 333e-9, 1e-6};
  const auto tr = evolve(build_hamiltonian(single_mode(g, d)), basis_state(2, 0), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double p = 1 - g * g / (W * W) * std::pow(std::sin(W * t[i]), 2);
    EXPECT_NEAR(tr.populations(i, 0), p, 1e-10);
  }
}

TEST(Evolve, NormPreservedOnRandomLadders) {
  prop::for_all(10, 4, [](prop::Gen& gen) {
    MultimodeSpec s;
    s.qubits.push_back({gen.uniform(-5e6, 5e6), uniform_coupling(gen.uniform(1e5, 1e7)), CableEnd::Far});
    s.m_lo = 100;
    s.m_hi = 100 + gen.integer(2, 40);
    s.omega_fsr = kFsr;
    s.rotating_frame_freq = (s.m_lo + s.m_hi) / 2 * kFsr;
    const auto tr = evolve(build_hamiltonian(s), basis_state(s.dim(), 0), {0.0, 1e-7, 1e-6, 5e-6});
    for (Eigen::Index i = 0; i < tr.populations.rows(); ++i) {
      EXPECT_NEAR(tr.populations.row(i).sum(), 1.0, 1e-10);
    }
  });
}

TEST(Evolve, TimeDependentMatchesStaticForConstantH) {
  const auto H = build_hamiltonian(single_mode(hz_to_angular(2e6), hz_to_angular(0.5e6)));
  std::vector<double> t{0, 50e-9, 130e-9, 400e-9};
  const auto a = evolve(H, basis_state(2, 0), t);
  const auto b = evolve_time_dependent([&](double) { return H; }, basis_state(2, 0), t);
  EXPECT_LT((a.populations - b.populations).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolve, TimeDependentLinearSweepConverges) {
  // Slow sweep through resonance: a coarse and a fine step agree.
  const double g = hz_to_angular(0.5e6);
  auto H = [&](double t) {
    Eigen::MatrixXd h(2, 2);
    h << hz_to_angular(-5e6 + 10e6 * t / 2e-6), g, g, 0.0;
    return h;
  };
  std::vector<double> t{0, 1e-6, 2e-6};
  const auto coarse = evolve_time_dependent(H, basis_state(2, 0), t, 0.5e-9);
  const auto fine = evolve_time_dependent(H, basis_state(2, 0), t, 0.1e-9);
  EXPECT_NEAR(coarse.populations(2, 0), fine.populations(2, 0), 1e-5);
}

TEST(Chevron, WeakCouplingCentresSitOnModes) {
  ChevronConfig c;
  c.g = hz_to_angular(0.08e6);
  c.omega_fsr = kFsr;
  c.half_width = 20;
  for (int i = 0; i < 61; ++i) c.detunings.push_back(hz_to_angular(-3e6 + 6e6 * i / 60.0));
  for (int i = 0; i < 80; ++i) c.times.push_back(5e-6 * i / 79.0);
  const auto map = chevron_scan(c);
  const auto centres = chevron_centres(map);
  ASSERT_EQ(centres.size(), 3u);
  for (double x : centres) {
    const double k = x / kFsr;
    EXPECT_NEAR(k, std::round(k), 0.03);
  }
  EXPECT_NEAR(chevron_spacing(map) / kFsr, 1.0, 0.02);
}

TEST(Revival, SyntheticOnset) {
  std::vector<double> t, p;
  for (int i = 0; i < 100; ++i) {
    t.push_back(i);
    p.push_back(i < 60 ? 0.0 : 0.5 * (i - 60));
  }
  // Peak 19.5, threshold 1.95, crossed between samples 63 and 64.
  EXPECT_NEAR(revival_onset(t, p, 10, 0.1), 63.0 + (1.95 - 1.5) / 0.5, 1e-9);
  std::vector<double> flat(100, 0.0);
  EXPECT_TRUE(std::isnan(revival_onset(t, flat, 10)));
}

TEST(Revival, StrongCouplingReturnsAfterRoundTrip) {
  const auto dev = device::DeviceParams::defaults();
  const auto cable = device::cable_derived_params(dev.cable);
  std::vector<double> t;
  for (int i = 0; i < 300; ++i) t.push_back(1.2e-6 * i / 299.0);
  const auto tr = resonant_ladder(hz_to_angular(1.63e6), cable.omega_fsr, 100, t);
  std::vector<double> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) p[i] = tr.populations(i, 0);
  EXPECT_NEAR(revival_onset(t, p, cable.tau_st), 2 * cable.tau_st, 15e-9);
}

TEST(Coherence, RecoversModeT1) {
  prop::for_all(5, 8, [](prop::Gen& g) {
    device::CableParams cable = device::DeviceParams::defaults().cable;
    cable.T1_mode = g.uniform(20e-6, 100e-6);
    cable.T2_mode = 2 * cable.T1_mode;
    CoherenceConfig cfg;
    for (int i = 0; i <= 60; ++i) cfg.wait.push_back(3 * cable.T1_mode * i / 60);
    const auto r = mode_coherence_experiment(cfg, cable);
    EXPECT_NEAR(r.time_constant / cable.T1_mode, 1.0, 0.01);
    EXPECT_FALSE(r.non_decaying);
  });
}

TEST(Coherence, RamseyRecoversT2) {
  const auto cable = device::DeviceParams::defaults().cable;
  CoherenceConfig cfg;
  cfg.kind = CoherenceKind::Ramsey;
  for (int i = 0; i <= 200; ++i) cfg.wait.push_back(250e-6 * i / 200);
  const auto r = mode_coherence_experiment(cfg, cable);
  EXPECT_NEAR(r.time_constant * 1e6, 106.8, 2.0);
  cfg.pure_dephasing = false;
  EXPECT_NEAR(mode_coherence_experiment(cfg, cable).time_constant / (2 * cable.T1_mode), 1.0, 0.03);
}

TEST(Coherence, LosslessModeFlaggedNonDecaying) {
  auto cable = device::DeviceParams::defaults().cable;
  cable.T1_mode = 1.0;
  cable.T2_mode = 2.0;
  CoherenceConfig cfg;
  for (int i = 0; i <= 20; ++i) cfg.wait.push_back(100e-6 * i / 20);
  EXPECT_TRUE(mode_coherence_experiment(cfg, cable).non_decaying);
}
