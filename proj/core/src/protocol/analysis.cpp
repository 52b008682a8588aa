#include "qlink/protocol/analysis.hpp"

#include <random>

#include "qlink/error.hpp"
#include "qlink/protocol/gates.hpp"

namespace qlink::protocol {

namespace tomo = qlink::tomography;

namespace {

tomo::TomographyData reconstruct_input(const tomo::TomographyData& raw, const Eigen::MatrixXd& C,
                                       ReadoutMode mode) {
  return mode == ReadoutMode::Corrected ? tomo::readout_correct(raw, C) : raw;
}

}  // namespace

std::string to_string(ReadoutMode m) {
  switch (m) {
    case ReadoutMode::Raw: return "raw";
    case ReadoutMode::Corrected: return "corrected";
    case ReadoutMode::Ideal: return "ideal";
  }
  return "?";
}

DensityMatrix tomograph(const DensityMatrix& rho, const Eigen::MatrixXd& confusion, ReadoutMode mode) {
  const auto settings = tomo::complete_settings(rho.n_qubits());
  if (mode == ReadoutMode::Ideal) return tomo::qst(tomo::exact_data(rho, settings));
  const auto raw = tomo::exact_data(rho, settings, &confusion);
  return tomo::qst(reconstruct_input(raw, confusion, mode));
}

TeleportProcess teleport_process(TeleportMode mode, const NoiseConfig& noise, ReadoutMode readout) {
  const auto inputs = tomo::standard_inputs();
  const auto input_states = tomo::standard_input_states(1);
  TeleportProcess res;
  res.mode = mode;
  for (const auto& psi : inputs) {
    const auto out = teleport_state(psi, mode, noise);
    for (int r = 0; r < 4; ++r) {
      res.probabilities[r] += out.probabilities[r] / inputs.size();
      res.outputs[r].push_back(tomograph(out.outputs[r], noise.confusion[2], readout));
    }
  }
  const auto ideal = tomo::chi_from_unitary(Matrix::Identity(2, 2));
  for (int r = 0; r < 4; ++r) {
    std::vector<Matrix> outs;
    for (const auto& o : res.outputs[r]) {
      if (mode == TeleportMode::PostSelect) {
        const Matrix U = teleport_correction(r);
        outs.push_back(U * o.matrix() * U.adjoint());
      } else {
        outs.push_back(o.matrix());
      }
    }
    res.chi.push_back(tomo::qpt(input_states, outs));
    res.branch_fidelity[r] = tomo::process_fidelity(res.chi.back(), ideal);
    res.average += res.branch_fidelity[r] / 4.0;
  }
  return res;
}

CnotProcess cnot_process(const NoiseConfig& noise, ReadoutMode readout) {
  const auto run = teleport_cnot(noise);
  const Eigen::MatrixXd C = kron(noise.confusion[0], noise.confusion[3]);
  CnotProcess res;
  std::vector<Matrix> outs;
  for (const auto& o : run.outputs) {
    res.outputs.push_back(tomograph(o, C, readout));
    outs.push_back(res.outputs.back().matrix());
  }
  res.chi = tomo::qpt(run.inputs, outs);
  res.fidelity = tomo::process_fidelity(res.chi, tomo::chi_from_unitary(gate_unitary(Gate::CNOT)));
  return res;
}

TransferProcess transfer_process(const NoiseConfig& noise) {
  const auto inputs = tomo::standard_inputs();
  std::vector<Matrix> outs;
  for (const auto& psi : inputs) outs.push_back(transfer_state(psi, noise).matrix());
  TransferProcess res;
  res.chi = tomo::qpt(tomo::standard_input_states(1), outs);
  res.fidelity = tomo::process_fidelity(res.chi, tomo::chi_from_unitary(Matrix::Identity(2, 2)));
  return res;
}

double sampled_teleport_fidelity(TeleportMode mode, const NoiseConfig& noise, int shots, Rng& rng,
                                 ReadoutMode readout, int branch) {
  if (shots <= 0) throw InvalidParameter("shots must be positive");
  if (branch < -1 || branch > 3) throw InvalidParameter("branch must be -1 or 0..3");
  const auto settings = tomo::complete_settings(1);
  const Eigen::MatrixXd C = noise.confusion[2];
  const auto input_states = tomo::standard_input_states(1);
  const auto ideal = tomo::chi_from_unitary(Matrix::Identity(2, 2));

  // outs[r][j]: reconstructed Q3 state for branch r, input j.
  std::array<std::vector<Matrix>, 4> outs;
  for (const auto& psi : tomo::standard_inputs()) {
    const auto run = teleport_state(psi, mode, noise);
    std::array<tomo::TomographyData, 4> data;
    for (int r = 0; r < 4; ++r) {
      data[r].n_qubits = 1;
      data[r].settings = settings;
    }
    for (const auto& s : settings) {
      // Joint distribution of (reported branch, Q3 click) for this setting.
      std::vector<double> joint;
      for (int r = 0; r < 4; ++r) {
        const auto p = tomo::exact_data(run.outputs[r], {s}, &C).probabilities[0];
        joint.push_back(run.probabilities[r] * p(0));
        joint.push_back(run.probabilities[r] * p(1));
      }
      std::discrete_distribution<int> dist(joint.begin(), joint.end());
      std::vector<double> counts(8, 0.0);
      for (int k = 0; k < shots; ++k) counts[dist(rng)] += 1.0;
      for (int r = 0; r < 4; ++r) {
        const double n = counts[2 * r] + counts[2 * r + 1];
        if (n <= 0.0) throw NumericalError("a teleportation branch received no shots");
        Eigen::VectorXd p(2);
        p << counts[2 * r] / n, counts[2 * r + 1] / n;
        data[r].probabilities.push_back(p);
      }
    }
    for (int r = 0; r < 4; ++r) {
      const auto corrected = readout == ReadoutMode::Corrected ? tomo::readout_correct(data[r], C) : data[r];
      Matrix rho = tomo::qst(corrected).matrix();
      if (mode == TeleportMode::PostSelect) {
        const Matrix U = teleport_correction(r);
        rho = U * rho * U.adjoint();
      }
      outs[r].push_back(rho);
    }
  }
  double total = 0.0;
  int used = 0;
  for (int r = 0; r < 4; ++r) {
    if (branch >= 0 && r != branch) continue;
    total += tomo::process_fidelity(tomo::qpt(input_states, outs[r]), ideal);
    ++used;
  }
  return total / used;
}

double sampled_bell_fidelity(const NoiseConfig& noise, int shots, Rng& rng) {
  const DensityMatrix bell = entangle_remote(noise);
  const Eigen::MatrixXd C = kron(noise.confusion[1], noise.confusion[2]);
  const auto raw = tomo::sampled_data(bell, tomo::complete_settings(2), shots, rng, &C);
  return tomo::state_fidelity(tomo::qst(tomo::readout_correct(raw, C)), bell_target());
}

}  // namespace qlink::protocol
