#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qlink/error.hpp"
#include "qlink/protocol/analysis.hpp"
#include "qlink/protocol/budget.hpp"
#include "qlink/protocol/gates.hpp"
#include "qlink/protocol/protocols.hpp"
#include "qlink/tomography/tomography.hpp"

using namespace qlink;
using namespace qlink::protocol;

namespace {

void expect_physical(const DensityMatrix& rho, double tol = 1e-10) {
  const Matrix& m = rho.matrix();
  EXPECT_LT(prop::max_abs(m - m.adjoint()), 1e-12);
  EXPECT_NEAR(rho.trace(), 1.0, tol);
  EXPECT_GT(rho.min_eigenvalue(), -tol);
}

Vector ket(std::initializer_list<cdouble> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  int i = 0;
  for (auto a : amps) v(i++) = a;
  return v.normalized();
}

double fidelity(const DensityMatrix& rho, const Vector& psi) {
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

// Reference partial trace over the last qubit of an n-qubit matrix.
Matrix trace_last(const Matrix& m) {
  const auto d = m.rows() / 2;
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  }
  return out;
}

}  // namespace

TEST(DensityMatrix, RejectsUnphysical) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  EXPECT_THROW(DensityMatrix{m}, NumericalError);
  Matrix nh = Matrix::Identity(2, 2) * 0.5;
  nh(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{nh}, NumericalError);
  EXPECT_THROW(DensityMatrix{Matrix::Identity(3, 3) / 3.0}, DimensionMismatch);
}

TEST(DensityMatrix, PartialTraceMatchesReference) {
  prop::for_all(50, 11, [](prop::Gen& g) {
    const int n = g.integer(2, 4);
    const DensityMatrix rho(g.density(1 << n, g.integer(1, 3)));
    std::vector<int> keep(n - 1);
    for (int k = 0; k < n - 1; ++k) keep[k] = k;
    EXPECT_LT(prop::max_abs(rho.partial_trace(keep).matrix() - trace_last(rho.matrix())), 1e-12);
  });
}

TEST(DensityMatrix, TensorThenTraceRecoversFactors) {
  prop::for_all(30, 12, [](prop::Gen& g) {
    const DensityMatrix a(g.density(2, 2));
    const DensityMatrix b(g.density(4, 2));
    const auto ab = a.tensor(b);
    EXPECT_LT(prop::max_abs(ab.partial_trace({0}).matrix() - a.matrix()), 1e-12);
    EXPECT_LT(prop::max_abs(ab.partial_trace({1, 2}).matrix() - b.matrix()), 1e-12);
    // Reordering then tracing picks the same factor.
    const auto ba = ab.permuted({1, 2, 0});
    EXPECT_LT(prop::max_abs(ba.partial_trace({2}).matrix() - a.matrix()), 1e-12);
  });
}

TEST(Channel, KrausCompleteness) {
  prop::for_all(50, 13, [](prop::Gen& g) {
    const double x = g.uniform(0.0, 1.0);
    EXPECT_LT(amplitude_damping(x).completeness_error(), 1e-12);
    EXPECT_LT(phase_flip(x).completeness_error(), 1e-12);
    EXPECT_LT(depolarizing(x, g.integer(1, 3)).completeness_error(), 1e-12);
    EXPECT_LT(channel_from_transfer(x).completeness_error(), 1e-12);
    EXPECT_LT(idle_channel(g.uniform(0, 5e-6), g.log_uniform(1e-6, 1e-4), g.log_uniform(1e-6, 1e-4))
                  .completeness_error(),
              1e-12);
  });
}

TEST(Channel, ApplicationPreservesPhysicality) {
  prop::for_all(60, 14, [](prop::Gen& g) {
    const int n = g.integer(2, 4);
    DensityMatrix rho(g.density(1 << n, g.integer(1, 4)));
    const int a = g.integer(0, n - 1);
    const int b = (a + g.integer(1, n - 1)) % n;
    rho = channel_from_transfer(g.uniform(0, 1)).apply(rho, {a, b});
    expect_physical(rho);
    rho = idle_channel(g.uniform(0, 2e-6), g.log_uniform(1e-6, 1e-4), g.log_uniform(1e-6, 1e-4)).apply(rho, {b});
    expect_physical(rho);
    rho = apply_gate(rho, Gate::CZ, {a, b}, g.uniform(0, 0.5));
    expect_physical(rho);
    rho = apply_gate(rho, Gate::Y2, {a}, g.uniform(0, 0.5));
    expect_physical(rho);
  });
}

TEST(Channel, IdleCoherenceFactor) {
  const double t = 1e-6, T1 = 10e-6, Tphi = 5e-6;
  auto rho = DensityMatrix::pure(ket({1.0, 1.0}));
  rho = idle_channel(t, T1, Tphi).apply(rho, {0});
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.5 * std::exp(-t / (2 * T1) - t / Tphi), 1e-12);
  EXPECT_NEAR(rho.population(1), 0.5 * std::exp(-t / T1), 1e-12);
}

TEST(Transfer, UnitEfficiencyIsSwap) {
  const auto out = channel_from_transfer(1.0).apply(DensityMatrix::basis(2, 0b10), {0, 1});
  EXPECT_NEAR(out.population(0b01), 1.0, 1e-15);
  prop::for_all(20, 15, [](prop::Gen& g) {
    const Vector psi = g.state(2);
    Vector in = Vector::Zero(4);
    in(0) = psi(0);
    in(2) = psi(1);
    const auto rho = channel_from_transfer(1.0).apply(DensityMatrix::pure(in), {0, 1});
    EXPECT_NEAR(fidelity(rho.partial_trace({1}), psi), 1.0, 1e-12);
  });
}

TEST(Transfer, ReceiverPopulation) {
  const auto out = channel_from_transfer(0.904).apply(DensityMatrix::basis(2, 0b10), {0, 1});
  EXPECT_NEAR(out.partial_trace({1}).population(1), 0.904, 1e-12);
  EXPECT_NEAR(out.partial_trace({0}).population(1), 0.0, 1e-12);
}

TEST(Transfer, RejectsOutOfRange) {
  EXPECT_THROW(channel_from_transfer(1.01), InvalidParameter);
  EXPECT_THROW(channel_from_transfer(-0.1), InvalidParameter);
}

TEST(Gates, XFlipsGround) {
  const auto out = apply_gate(DensityMatrix::basis(1, 0), Gate::X, {0});
  EXPECT_NEAR(out.population(1), 1.0, 1e-15);
}

TEST(Gates, CzPhaseOnEleven) {
  const auto plus = ket({1.0, 1.0, 1.0, 1.0});
  const auto out = apply_gate(DensityMatrix::pure(plus), Gate::CZ, {0, 1});
  const Vector expect = ket({1.0, 1.0, 1.0, -1.0});
  EXPECT_NEAR(fidelity(out, expect), 1.0, 1e-12);
  EXPECT_NEAR(out(0, 3).real(), -0.25, 1e-12);
  // Maximally entangled: the reduced state is fully mixed.
  EXPECT_NEAR(out.partial_trace({0}).population(0), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(out.partial_trace({0})(0, 1)), 0.0, 1e-12);
}

TEST(Gates, NamesRoundTrip) {
  for (Gate g : {Gate::I, Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::X2, Gate::MinusX2, Gate::Y2,
                 Gate::MinusY2, Gate::CZ, Gate::CNOT}) {
    EXPECT_EQ(gate_from_string(to_string(g)), g);
  }
  EXPECT_THROW(gate_from_string("T"), InvalidParameter);
}

TEST(Gates, ArityMismatchThrows) {
  EXPECT_THROW(apply_gate(DensityMatrix::basis(2, 0), Gate::CZ, {0}), DimensionMismatch);
  EXPECT_THROW(apply_gate(DensityMatrix::basis(2, 0), Gate::X, {2}), Error);
}

TEST(Gates, CnotDecomposition) {
  // -Y/2 on the target, CZ, Y/2 on the target equals CNOT.
  const Matrix seq = embed(gate_unitary(Gate::Y2), {1}, 2) * gate_unitary(Gate::CZ) *
                     embed(gate_unitary(Gate::MinusY2), {1}, 2);
  EXPECT_LT(prop::max_abs(seq - gate_unitary(Gate::CNOT)), 1e-12);
}

TEST(Gates, DepolarizedCzFidelity) {
  const double p = depolarizing_from_fidelity(0.973, 4);
  // Brute-force chi of the composed channel, built from its Kraus set.
  std::vector<Matrix> kraus;
  for (const auto& k : depolarizing(p, 2).kraus) kraus.push_back(k * gate_unitary(Gate::CZ));
  const auto chi = tomography::chi_from_kraus(kraus);
  const auto ideal = tomography::chi_from_unitary(gate_unitary(Gate::CZ));
  const double fpro = tomography::process_fidelity(chi, ideal);
  EXPECT_NEAR((4.0 * fpro + 1.0) / 5.0, 0.973, 1e-3);

  // Same number through apply_gate and process tomography.
  const auto inputs = tomography::standard_input_states(2);
  std::vector<Matrix> outputs;
  for (const auto& in : inputs) outputs.push_back(apply_gate(in, Gate::CZ, {0, 1}, p).matrix());
  EXPECT_NEAR(tomography::process_fidelity(tomography::qpt(inputs, outputs), ideal), fpro, 1e-9);
}

TEST(Readout, ConfusionBuilders) {
  const auto c = single_confusion(0.996, 0.980);
  EXPECT_TRUE(is_column_stochastic(c));
  prop::for_all(30, 16, [](prop::Gen& g) {
    std::array<double, 4> diag{};
    for (auto& d : diag) d = g.uniform(0.7, 1);
    const auto j = joint_confusion(diag);
    EXPECT_TRUE(is_column_stochastic(j, 1e-12));
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 4; ++r) EXPECT_NEAR(j(r, c), r == c ? diag[c] : (1 - diag[c]) / 3, 1e-15);
    }
  });
}

TEST(Measure, GroundWithQ1Readout) {
  const auto r = measure(DensityMatrix::basis(1, 0), {0}, single_confusion(0.996, 0.980), 0, 1);
  EXPECT_NEAR(r.reported_probabilities(1), 0.004, 1e-12);
  EXPECT_EQ(r.shots.total, 0);
  EXPECT_TRUE(r.shots.outcomes.empty());
}

TEST(Measure, MixedStateIdealReadout) {
  const DensityMatrix mixed(Matrix::Identity(2, 2) * 0.5);
  const auto r = measure(mixed, {0}, Eigen::Matrix2d::Identity(), 100, 2);
  EXPECT_NEAR(r.reported_probabilities(0), 0.5, 1e-15);
  EXPECT_NEAR(r.reported_probabilities(1), 0.5, 1e-15);
}

TEST(Measure, JointReadoutOfGround) {
  const auto noise = NoiseConfig::paper_defaults();
  const auto r = measure(DensityMatrix::basis(2, 0), {0, 1}, noise.joint12, 0, 3);
  EXPECT_NEAR(r.reported_probabilities(0), 0.954, 1e-12);
}

TEST(Measure, CountsSumToShots) {
  prop::for_all(20, 17, [](prop::Gen& g) {
    const int n = g.integer(1, 3);
    const DensityMatrix rho(g.density(1 << n, 2));
    std::vector<int> qs;
    for (int k = 0; k < n; ++k) qs.push_back(k);
    const long shots = g.integer(1, 5000);
    const auto seed = static_cast<std::uint64_t>(g.integer(0, 1 << 30));
    const auto r = measure(rho, qs, g.confusion(1 << n, 0.8), shots, seed);
    long sum = 0;
    for (long c : r.shots.counts) sum += c;
    EXPECT_EQ(sum, shots);
    EXPECT_EQ(r.shots.total, shots);
    EXPECT_EQ(r.shots.seed, seed);
    for (const auto& s : r.shots.outcomes) EXPECT_EQ(static_cast<int>(s.size()), n);
  });
}

TEST(Measure, SeedReproducible) {
  const DensityMatrix rho(Matrix::Identity(4, 4) * 0.25);
  const auto a = measure(rho, {0, 1}, Eigen::Matrix4d::Identity(), 1000, 42);
  const auto b = measure(rho, {0, 1}, Eigen::Matrix4d::Identity(), 1000, 42);
  EXPECT_EQ(a.shots.outcomes, b.shots.outcomes);
  EXPECT_EQ(a.shots.counts, b.shots.counts);
}

TEST(Measure, ShotFrequenciesConverge) {
  prop::Gen g(18);
  const DensityMatrix rho(g.density(4, 2));
  const auto C = g.confusion(4, 0.85);
  for (long shots : {4096L, 65536L}) {
    const auto r = measure(rho, {0, 1}, C, shots, 100 + shots);
    for (int k = 0; k < 4; ++k) {
      const std::string label = std::string(1, k & 2 ? '1' : '0') + (k & 1 ? '1' : '0');
      const double p = r.reported_probabilities(k);
      const double f = static_cast<double>(r.shots.count(label)) / static_cast<double>(shots);
      EXPECT_LT(std::abs(f - p), 5.0 * std::sqrt(p * (1 - p) / static_cast<double>(shots)) + 1e-12)
          << "shots " << shots << " outcome " << label;
    }
  }
}

TEST(Measure, PostStateUsesTrueProjectors) {
  // Reporting 1 from |+> with a noisy readout leaves a mixture of both
  // projections weighted by the confusion row.
  const auto C = single_confusion(0.9, 0.8);
  const auto r = measure(DensityMatrix::pure(ket({1.0, 1.0})), {0}, C, 0, 1);
  const double w0 = C(1, 0) * 0.5, w1 = C(1, 1) * 0.5;
  EXPECT_NEAR(r.post_states[1].population(1), w1 / (w0 + w1), 1e-12);
  EXPECT_NEAR(std::abs(r.post_states[1](0, 1)), 0.0, 1e-12);
}

TEST(Entangle, NoiselessBellPair) {
  const auto rho = entangle_remote(NoiseConfig::ideal());
  EXPECT_NEAR(fidelity(rho, bell_target()), 1.0, 1e-12);
  EXPECT_NEAR(rho.partial_trace({0}).population(1), 0.5, 1e-12);
  EXPECT_NEAR(rho.partial_trace({1}).population(1), 0.5, 1e-12);
}

TEST(Entangle, DefaultNoiseBand) {
  const auto rho = entangle_remote(NoiseConfig::paper_defaults());
  expect_physical(rho);
  const double f = fidelity(rho, bell_target());
  EXPECT_GE(f, 0.92);
  EXPECT_LE(f, 0.96);
}

TEST(Entangle, EmittedFractionSetsPopulations) {
  auto noise = NoiseConfig::ideal();
  prop::for_all(20, 19, [&](prop::Gen& g) {
    const double alpha = g.uniform(0.0, 1.0);
    noise.transfer_efficiency = g.uniform(0.5, 1.0);
    const auto rho = entangle_remote(noise, alpha);
    EXPECT_NEAR(rho.partial_trace({0}).population(1), 1.0 - alpha, 1e-12);
    EXPECT_NEAR(rho.partial_trace({1}).population(1), alpha * noise.transfer_efficiency, 1e-12);
  });
}

TEST(Teleport, NoiselessIdentityOnEveryBranch) {
  const auto noise = NoiseConfig::ideal();
  prop::for_all(40, 20, [&](prop::Gen& g) {
    const Vector psi = g.state(2);
    const auto ff = teleport_state(psi, TeleportMode::FeedForward, noise);
    ASSERT_EQ(ff.outputs.size(), 4u);
    for (int r = 0; r < 4; ++r) {
      EXPECT_NEAR(ff.probabilities[r], 0.25, 1e-10);
      EXPECT_NEAR(fidelity(ff.outputs[r], psi), 1.0, 1e-10) << "branch " << r;
    }
  });
}

TEST(Teleport, FeedForwardMatchesCorrectedPostSelection) {
  const auto noise = NoiseConfig::ideal();
  prop::for_all(20, 21, [&](prop::Gen& g) {
    const Vector psi = g.state(2);
    const auto ff = teleport_state(psi, TeleportMode::FeedForward, noise);
    const auto ps = teleport_state(psi, TeleportMode::PostSelect, noise);
    for (int r = 0; r < 4; ++r) {
      EXPECT_NEAR(ps.probabilities[r], ff.probabilities[r], 1e-12);
      const Matrix U = teleport_correction(r);
      const Matrix corrected = U * ps.outputs[r].matrix() * U.adjoint();
      EXPECT_LT(prop::max_abs(corrected - ff.outputs[r].matrix()), 1e-10) << "branch " << r;
    }
  });
}

TEST(Teleport, NoisyOutputsPhysical) {
  const auto noise = NoiseConfig::paper_defaults();
  prop::for_all(10, 22, [&](prop::Gen& g) {
    const auto res = teleport_state(g.state(2), TeleportMode::FeedForward, noise);
    double total = 0.0;
    for (int r = 0; r < 4; ++r) {
      total += res.probabilities[r];
      expect_physical(res.outputs[r]);
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  });
}

TEST(Teleport, DefaultNoiseProcessFidelity) {
  const auto ff = teleport_process(TeleportMode::FeedForward, NoiseConfig::paper_defaults());
  EXPECT_GE(ff.average, 0.74);
  EXPECT_LE(ff.average, 0.83);
  const auto ps = teleport_process(TeleportMode::PostSelect, NoiseConfig::paper_defaults());
  EXPECT_NEAR(ps.branch_fidelity[0], 0.816, 0.03);
  EXPECT_GT(ps.average, ff.average);
}

TEST(Teleport, BranchFidelitiesNearMeasured) {
  const auto ff = teleport_process(TeleportMode::FeedForward, NoiseConfig::paper_defaults());
  const double measured[4] = {0.790, 0.763, 0.796, 0.793};
  for (int b = 0; b < 4; ++b) EXPECT_NEAR(ff.branch_fidelity[b], measured[b], 0.02) << "branch " << b;
}

TEST(Teleport, LatencyMonotone) {
  auto noise = NoiseConfig::paper_defaults();
  double prev = 2.0;
  for (double lat : {0.0, 0.5e-6, 1.0e-6, 1.5e-6, 2.0e-6, 3.0e-6}) {
    noise.feedforward_latency = lat;
    const double f = teleport_process(TeleportMode::FeedForward, noise).average;
    EXPECT_LT(f, prev) << "latency " << lat;
    prev = f;
  }
}

TEST(Teleport, CorrectionTable) {
  const Matrix X = pauli(1), Z = pauli(3), I = pauli(0);
  EXPECT_LT(prop::max_abs(teleport_correction(0b00) - I), 1e-15);
  EXPECT_LT(prop::max_abs(teleport_correction(0b01) - X), 1e-15);
  EXPECT_LT(prop::max_abs(teleport_correction(0b10) - Z), 1e-15);
  EXPECT_LT(prop::max_abs(teleport_correction(0b11) - Z * X), 1e-15);
}

TEST(CnotTeleport, TruthTable) {
  const auto noise = NoiseConfig::ideal();
  for (int in = 0; in < 4; ++in) {
    const int expect = (in & 2) ? (in ^ 1) : in;
    const auto out = teleport_cnot(DensityMatrix::basis(2, in), noise);
    EXPECT_NEAR(out.population(expect), 1.0, 1e-10) << "input " << in;
  }
}

TEST(CnotTeleport, NoiselessPhases) {
  const auto noise = NoiseConfig::ideal();
  prop::for_all(10, 23, [&](prop::Gen& g) {
    const Vector psi = g.state(4);
    const Vector expect = gate_unitary(Gate::CNOT) * psi;
    EXPECT_NEAR(fidelity(teleport_cnot(DensityMatrix::pure(psi), noise), expect), 1.0, 1e-10);
  });
  EXPECT_NEAR(cnot_process(noise).fidelity, 1.0, 1e-10);
}

TEST(CnotTeleport, DefaultNoiseBand) {
  const auto p = cnot_process(NoiseConfig::paper_defaults());
  EXPECT_GE(p.fidelity, 0.66);
  EXPECT_LE(p.fidelity, 0.75);
}

TEST(StateTransfer, ProcessFidelityBand) {
  const auto ideal = transfer_process(NoiseConfig::ideal());
  EXPECT_NEAR(ideal.fidelity, 1.0, 1e-10);
  const auto p = transfer_process(NoiseConfig::paper_defaults());
  EXPECT_GE(p.fidelity, 0.91);
  EXPECT_LE(p.fidelity, 0.95);
}

TEST(Noise, ValidateRejectsBadInputs) {
  auto n = NoiseConfig::ideal();
  n.transfer_efficiency = 1.2;
  EXPECT_THROW(n.validate(), InvalidParameter);
  n = NoiseConfig::ideal();
  n.confusion[1](0, 0) = 0.5;
  EXPECT_THROW(n.validate(), InvalidParameter);
  n = NoiseConfig::ideal();
  n.p_single = -0.1;
  EXPECT_THROW(n.validate(), InvalidParameter);
}

TEST(Cooling, SettlesNearFloor) {
  CoolingConfig cfg;
  const auto tr = active_cooling_sim(cfg);
  ASSERT_EQ(tr.cable.size(), static_cast<std::size_t>(cfg.n_cycles + 1));
  EXPECT_NEAR(tr.cable[0], 0.04, 1e-15);
  EXPECT_NEAR(tr.cable[70], 0.015, 0.001);
  for (std::size_t k = 1; k < tr.cable.size(); ++k) EXPECT_LE(tr.cable[k], tr.cable[k - 1]);
  EXPECT_NEAR(tr.cable.back(), cooling_floor(cfg), 1e-4);
}

TEST(Cooling, PerfectSwapDecaysGeometrically) {
  CoolingConfig cfg;
  cfg.swap_fraction = 1.0;
  cfg.qubit_thermal = 0.0;
  cfg.reset_residual = 0.0;
  cfg.rethermalization = 0.0;
  cfg.n_cycles = 10;
  const auto tr = active_cooling_sim(cfg);
  for (std::size_t k = 1; k < tr.cable.size(); ++k) EXPECT_NEAR(tr.cable[k], 0.0, 1e-15);
  cfg.swap_fraction = 0.5;
  const auto half = active_cooling_sim(cfg);
  for (std::size_t k = 1; k < half.cable.size(); ++k) {
    EXPECT_NEAR(half.cable[k], 0.5 * half.cable[k - 1], 1e-15);
  }
  EXPECT_NEAR(cooling_floor(cfg), 0.0, 1e-15);
}

TEST(Cooling, ZeroCyclesReturnsInitial) {
  CoolingConfig cfg;
  cfg.n_cycles = 0;
  const auto tr = active_cooling_sim(cfg);
  ASSERT_EQ(tr.cable.size(), 1u);
  EXPECT_EQ(tr.cable[0], cfg.cable_thermal);
  EXPECT_EQ(tr.qubit[0], cfg.qubit_thermal);
}

TEST(Budget, Defaults) {
  const auto b = inefficiency_budget(BudgetConfig::from_device(device::DeviceParams::defaults()));
  ASSERT_EQ(b.items.size(), 5u);
  EXPECT_NEAR(b.item("cable loss"), 0.005, 0.001);
  EXPECT_NEAR(b.item("thermal photons"), 0.013, 1e-15);
  EXPECT_NEAR(b.item("joint loss"), 0.0103, 0.0001);
  EXPECT_GT(b.item("qubit decoherence"), 0.0);
  EXPECT_NEAR(b.measured_inefficiency, 0.096, 1e-12);
  double sum = 0.0;
  for (const auto& it : b.items) sum += it.value;
  EXPECT_NEAR(sum, b.measured_inefficiency, 1e-12);
  EXPECT_THROW(b.item("nope"), InvalidParameter);
}

TEST(Budget, LosslessIsZero) {
  auto cfg = BudgetConfig::from_device(device::DeviceParams::defaults());
  cfg.cable.T1_mode = std::numeric_limits<double>::infinity();
  cfg.cable.n_joints = 0;
  cfg.thermal_inefficiency = 0.0;
  cfg.sender_T1 = 0.0;
  cfg.receiver_T1 = 0.0;
  cfg.measured_efficiency = 1.0;
  for (const auto& it : inefficiency_budget(cfg).items) EXPECT_NEAR(it.value, 0.0, 1e-15) << it.name;
}

TEST(Budget, JointsOnly) {
  auto cfg = BudgetConfig::from_device(device::DeviceParams::defaults());
  cfg.cable.n_joints = 3;
  cfg.cable.joint_transmission_db = -0.015;
  EXPECT_NEAR(inefficiency_budget(cfg).item("joint loss"), 1.0 - std::pow(10.0, -0.0045), 1e-15);
}
