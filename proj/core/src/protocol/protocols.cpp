#include "qlink/protocol/protocols.hpp"

#include <cmath>
#include <random>

#include "qlink/error.hpp"
#include "qlink/protocol/gates.hpp"
#include "qlink/tomography/tomography.hpp"
#include "qlink/util/rng.hpp"

namespace qlink::protocol {

namespace {

std::string bitstring(int value, int k) {
  std::string s;
  for (int b = k - 1; b >= 0; --b) s += ((value >> b) & 1) ? '1' : '0';
  return s;
}

// CNOT built from the native set: -Y/2 on the target, CZ, Y/2 on the target.
DensityMatrix cnot(const DensityMatrix& rho, int c, int t, double p_cz, double p1) {
  DensityMatrix r = apply_gate(rho, Gate::MinusY2, {t}, p1);
  r = apply_gate(r, Gate::CZ, {c, t}, p_cz);
  return apply_gate(r, Gate::Y2, {t}, p1);
}

}  // namespace

long ShotRecord::count(const std::string& outcome) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] == outcome) return counts[i];
  }
  return 0;
}

MeasurementResult measure(const DensityMatrix& rho, const std::vector<int>& qubits,
                          const Eigen::MatrixXd& confusion, long shots, std::uint64_t seed) {
  const int k = static_cast<int>(qubits.size());
  const int m = 1 << k;
  if (confusion.rows() != m || confusion.cols() != m) {
    throw DimensionMismatch("confusion matrix must be " + std::to_string(m) + "x" + std::to_string(m));
  }
  if (!is_column_stochastic(confusion, 1e-9)) {
    throw InvalidParameter("confusion matrix must be column-stochastic");
  }
  if (shots < 0) throw InvalidParameter("shot count must be non-negative");

  MeasurementResult res;
  res.qubits = qubits;
  res.ideal_probabilities = Eigen::VectorXd::Zero(m);
  std::vector<Matrix> branch;
  for (int t = 0; t < m; ++t) {
    Matrix proj = Matrix::Zero(m, m);
    proj(t, t) = 1.0;
    const Matrix P = embed(proj, qubits, rho.n_qubits());
    branch.push_back(P * rho.matrix() * P);
    res.ideal_probabilities(t) = std::max(0.0, branch.back().trace().real());
  }
  res.reported_probabilities = confusion * res.ideal_probabilities;
  for (int r = 0; r < m; ++r) {
    const double pr = res.reported_probabilities(r);
    if (pr <= 1e-15) {
      res.post_states.push_back(rho);
      continue;
    }
    Matrix acc = Matrix::Zero(rho.dim(), rho.dim());
    for (int t = 0; t < m; ++t) acc += confusion(r, t) * branch[t];
    res.post_states.push_back(DensityMatrix::unchecked(acc / pr, rho.labels()));
  }

  res.shots.seed = seed;
  res.shots.total = shots;
  if (shots > 0) {
    for (int r = 0; r < m; ++r) {
      res.shots.outcomes.push_back(bitstring(r, k));
      res.shots.counts.push_back(0);
    }
    Rng rng(seed);
    std::discrete_distribution<int> dist(res.reported_probabilities.data(),
                                         res.reported_probabilities.data() + m);
    for (long s = 0; s < shots; ++s) ++res.shots.counts[dist(rng)];
  }
  return res;
}

DensityMatrix idle(const DensityMatrix& rho, const NoiseConfig& noise, double t,
                   const std::vector<std::pair<int, int>>& register_to_device) {
  if (t <= 0.0) return rho;
  DensityMatrix out = rho;
  for (const auto& [reg, dev] : register_to_device) {
    const auto& q = noise.qubits.at(dev);
    out = idle_channel(t, q.T1, q.Tphi).apply(out, {reg});
  }
  return out;
}

DensityMatrix prepare(const Vector& psi, double n) {
  if (psi.size() != 2) throw DimensionMismatch("single-qubit state expected");
  if (!(n >= 0.0 && n <= 1.0)) throw InvalidParameter("thermal population must lie in [0, 1]");
  const Vector v = psi.normalized();
  Vector perp(2);
  perp << -std::conj(v(1)), std::conj(v(0));
  return DensityMatrix((1.0 - n) * v * v.adjoint() + n * perp * perp.adjoint());
}

Vector bell_target() {
  Vector psi = Vector::Zero(4);
  psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
  return psi;
}

DensityMatrix entangle_remote(const NoiseConfig& noise, double alpha) {
  noise.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("emission fraction must lie in [0, 1]");
  // Registers: Q2, flying photon, Q3.
  DensityMatrix rho = DensityMatrix::basis(3, 0b100);
  Matrix emit = Matrix::Identity(4, 4);
  emit(2, 2) = emit(1, 1) = std::sqrt(1.0 - alpha);
  emit(1, 2) = std::sqrt(alpha);
  emit(2, 1) = -std::sqrt(alpha);
  rho = apply_unitary(rho, emit, {0, 1});
  rho = channel_from_transfer(noise.transfer_efficiency).apply(rho, {1, 2});
  DensityMatrix pair = rho.partial_trace({0, 2});
  pair = idle(pair, noise, noise.transfer_duration, {{0, 1}});
  return DensityMatrix(pair.matrix(), {"Q2", "Q3"});
}

std::string to_string(TeleportMode m) {
  return m == TeleportMode::FeedForward ? "feedforward" : "postselect";
}

Matrix teleport_correction(int outcome) {
  if (outcome < 0 || outcome > 3) throw InvalidParameter("outcome must be 0..3");
  const int i = outcome >> 1;
  const int j = outcome & 1;
  Matrix U = Matrix::Identity(2, 2);
  if (i) U = pauli(3) * U;
  if (j) U = U * pauli(1);
  return U;
}

TeleportResult teleport_state(const Vector& psi, TeleportMode mode, const NoiseConfig& noise) {
  noise.validate();
  const DensityMatrix input = prepare(psi, noise.qubit_thermal_population[0]);
  DensityMatrix rho = input.tensor(entangle_remote(noise));
  const double p1 = noise.p_single;

  // Bell-basis rotation on (Q1, Q2): CNOT closed with -Y/2 instead of Y/2,
  // which also flips Q2, then H on Q1. Outcome 00 needs no correction.
  rho = apply_gate(rho, Gate::MinusY2, {1}, p1);
  rho = apply_gate(rho, Gate::CZ, {0, 1}, noise.p_cz12);
  rho = apply_gate(rho, Gate::MinusY2, {1}, p1);
  rho = apply_gate(rho, Gate::H, {0}, p1);
  rho = idle(rho, noise, noise.gate_duration, {{0, 0}, {1, 1}, {2, 2}});

  const auto meas = measure(rho, {0, 1}, noise.joint12, 0, 0);
  TeleportResult res;
  res.mode = mode;
  for (int r = 0; r < 4; ++r) {
    res.probabilities[r] = meas.reported_probabilities(r);
    DensityMatrix q3 = meas.post_states[r].partial_trace({2});
    if (mode == TeleportMode::FeedForward) {
      q3 = idle(q3, noise, noise.feedforward_latency, {{0, 2}});
      q3 = apply_unitary(q3, teleport_correction(r), {0});
    }
    res.outputs.push_back(DensityMatrix::unchecked(q3.matrix() / q3.trace(), {"Q3"}));
  }
  return res;
}

DensityMatrix teleport_cnot(const DensityMatrix& input14, const NoiseConfig& noise) {
  noise.validate();
  if (input14.n_qubits() != 2) throw DimensionMismatch("CNOT teleportation needs a two-qubit input");
  // Registers Q1, Q4, Q2, Q3 -> Q1, Q2, Q3, Q4.
  DensityMatrix rho = input14.tensor(entangle_remote(noise)).permuted({0, 2, 3, 1});
  const double p1 = noise.p_single;
  rho = cnot(rho, 0, 1, noise.p_cz12, p1);
  rho = cnot(rho, 2, 3, noise.p_cz34, p1);
  rho = apply_gate(rho, Gate::MinusY2, {2}, p1);
  rho = idle(rho, noise, noise.gate_duration, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});

  // Q2 and Q3 sit on different nodes, so their readout errors are independent.
  const Eigen::MatrixXd conf = kron(noise.confusion[1], noise.confusion[2]);
  const auto meas = measure(rho, {1, 2}, conf, 0, 0);
  Matrix out = Matrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r) {
    const double pr = meas.reported_probabilities(r);
    if (pr <= 1e-15) continue;
    DensityMatrix r14 = meas.post_states[r].partial_trace({0, 3});
    r14 = idle(r14, noise, noise.feedforward_latency, {{0, 0}, {1, 3}});
    const int r2 = r >> 1;
    const int r3 = r & 1;
    if (r3 == 1) r14 = apply_gate(r14, Gate::Z, {0});
    if (r2 == 0) r14 = apply_gate(r14, Gate::X, {1});
    out += pr * r14.matrix();
  }
  return DensityMatrix(out / out.trace().real(), {"Q1", "Q4"});
}

CnotTeleportResult teleport_cnot(const NoiseConfig& noise) {
  CnotTeleportResult res;
  const auto single = tomography::standard_inputs();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const DensityMatrix ideal = DensityMatrix::pure(single[a]).tensor(DensityMatrix::pure(single[b]));
      const DensityMatrix prepared = prepare(single[a], noise.qubit_thermal_population[0])
                                         .tensor(prepare(single[b], noise.qubit_thermal_population[3]));
      res.inputs.push_back(ideal);
      res.outputs.push_back(teleport_cnot(prepared, noise));
    }
  }
  return res;
}

DensityMatrix transfer_state(const Vector& input, const NoiseConfig& noise) {
  noise.validate();
  DensityMatrix rho = prepare(input, noise.qubit_thermal_population[1]).tensor(DensityMatrix::basis(1, 0));
  // Energy loss is already inside the transfer efficiency; only the sender's
  // pure dephasing over the window is added.
  if (noise.transfer_duration > 0.0) {
    rho = idle_channel(noise.transfer_duration, std::numeric_limits<double>::infinity(),
                       noise.qubits[1].Tphi)
              .apply(rho, {0});
  }
  rho = channel_from_transfer(noise.transfer_efficiency).apply(rho, {0, 1});
  return DensityMatrix(rho.partial_trace({1}).matrix(), {"Q3"});
}

}  // namespace qlink::protocol
