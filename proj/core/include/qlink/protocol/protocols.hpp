#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qlink/protocol/density_matrix.hpp"
#include "qlink/protocol/noise.hpp"

namespace qlink::protocol {

struct ShotRecord {
  std::vector<std::string> outcomes;  // bitstrings, measured qubits in order
  std::vector<long> counts;
  long total = 0;
  std::uint64_t seed = 0;

  long count(const std::string& outcome) const;
};

struct MeasurementResult {
  std::vector<int> qubits;
  Eigen::VectorXd ideal_probabilities;     // Born rule
  Eigen::VectorXd reported_probabilities;  // after the confusion matrix
  /// Per reported outcome r: sum_true C[r,true] P_true rho P_true, normalized.
  /// Where r is never reported the entry is the unmeasured state.
  std::vector<DensityMatrix> post_states;
  ShotRecord shots;
};

/// Projective Z measurement of `qubits` with a 2^k x 2^k confusion matrix.
MeasurementResult measure(const DensityMatrix& rho, const std::vector<int>& qubits,
                          const Eigen::MatrixXd& confusion, long shots, std::uint64_t seed);

/// Idle every listed qubit (register index -> device qubit 0..3) for t.
DensityMatrix idle(const DensityMatrix& rho, const NoiseConfig& noise, double t,
                   const std::vector<std::pair<int, int>>& register_to_device);

/// Single-qubit state with thermal population n mixed into its orthogonal
/// complement.
DensityMatrix prepare(const Vector& psi, double thermal_population = 0.0);

/// (|01> + |10>)/sqrt(2) on (Q2, Q3).
Vector bell_target();

/// Q2 emits the fraction alpha of its excitation toward Q3; the emitted part
/// goes through channel_from_transfer and Q2 idles for the transfer duration.
DensityMatrix entangle_remote(const NoiseConfig& noise, double alpha = 0.5);

enum class TeleportMode { FeedForward, PostSelect };
std::string to_string(TeleportMode m);

/// Z^i X^j for the reported outcome ij of (Q1, Q2).
Matrix teleport_correction(int outcome);

struct TeleportResult {
  TeleportMode mode = TeleportMode::FeedForward;
  std::array<double, 4> probabilities{};  // reported outcome ij, i on Q1
  std::vector<DensityMatrix> outputs;     // Q3 per reported outcome
};

/// Feed-forward outputs are corrected after the latency idle; post-selected
/// outputs are the raw conditioned Q3 states.
TeleportResult teleport_state(const Vector& psi, TeleportMode mode, const NoiseConfig& noise);

/// (Q1, Q4) output of the CNOT teleportation for a two-qubit input on (Q1, Q4),
/// averaged over the (Q2, Q3) outcomes with feed-forward corrections.
DensityMatrix teleport_cnot(const DensityMatrix& input14, const NoiseConfig& noise);

struct CnotTeleportResult {
  std::vector<DensityMatrix> inputs;
  std::vector<DensityMatrix> outputs;
};
/// Runs the 16 product inputs of the standard process-tomography set.
CnotTeleportResult teleport_cnot(const NoiseConfig& noise);

/// Receiver state after a single-photon state transfer of `input` from Q2.
DensityMatrix transfer_state(const Vector& input, const NoiseConfig& noise);

}  // namespace qlink::protocol
