#pragma once

#include <array>
#include <vector>

#include "qlink/protocol/protocols.hpp"
#include "qlink/tomography/tomography.hpp"

// Protocol outputs pushed through the tomography pipeline.

namespace qlink::protocol {

/// Raw: tomography sees the confused probabilities. Corrected: the confusion
/// is inverted before reconstruction.
enum class ReadoutMode { Raw, Corrected, Ideal };
std::string to_string(ReadoutMode m);

/// Exact-probability state tomography through a readout confusion.
DensityMatrix tomograph(const DensityMatrix& rho, const Eigen::MatrixXd& confusion, ReadoutMode mode);

struct TeleportProcess {
  TeleportMode mode = TeleportMode::FeedForward;
  std::array<double, 4> probabilities{};     // averaged over the input set
  std::array<double, 4> branch_fidelity{};
  std::vector<tomography::ProcessMatrix> chi;  // per branch, corrected for post-selection
  double average = 0.0;                        // mean over branches
  /// Per branch and input: Q3 state as tomography reports it.
  std::array<std::vector<DensityMatrix>, 4> outputs;
};

/// Q3 tomography uses Q3's single-qubit confusion.
TeleportProcess teleport_process(TeleportMode mode, const NoiseConfig& noise,
                                 ReadoutMode readout = ReadoutMode::Raw);

struct CnotProcess {
  tomography::ProcessMatrix chi;
  double fidelity = 0.0;
  std::vector<DensityMatrix> outputs;
};
/// (Q1, Q4) tomography uses kron(C1, C4).
CnotProcess cnot_process(const NoiseConfig& noise, ReadoutMode readout = ReadoutMode::Raw);

struct TransferProcess {
  tomography::ProcessMatrix chi;
  double fidelity = 0.0;
};
TransferProcess transfer_process(const NoiseConfig& noise);

/// One sampled repeat of the teleportation experiment: `shots` per input and
/// tomography setting, outcomes split by reported branch, per-branch QPT.
/// Returns the branch-averaged process fidelity (or one branch if >= 0).
double sampled_teleport_fidelity(TeleportMode mode, const NoiseConfig& noise, int shots, Rng& rng,
                                 ReadoutMode readout = ReadoutMode::Raw, int branch = -1);

/// One sampled repeat of two-qubit tomography of the Bell pair with
/// readout-corrected probabilities.
double sampled_bell_fidelity(const NoiseConfig& noise, int shots, Rng& rng);

}  // namespace qlink::protocol
