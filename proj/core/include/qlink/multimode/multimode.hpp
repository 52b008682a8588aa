#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlink/device/device_model.hpp"
#include "qlink/units.hpp"

// Single-excitation sector of qubits coupled to the standing-wave ladder of
// the cable. Basis: the qubits in order, then modes m_lo..m_hi.

namespace qlink::multimode {

enum class CableEnd { Near, Far };

struct QubitSpec {
  double detuning = 0.0;              // rad/s, qubit frequency minus frame
  std::function<double(int)> coupling;  // g(m), rad/s
  CableEnd side = CableEnd::Near;       // couplings at the far end pick up (-1)^m
};

struct MultimodeSpec {
  std::vector<QubitSpec> qubits;
  int m_lo = 0;
  int m_hi = -1;
  double omega_fsr = 0.0;            // rad/s
  double rotating_frame_freq = 0.0;  // rad/s

  int n_modes() const { return m_hi - m_lo + 1; }
  int dim() const { return static_cast<int>(qubits.size()) + n_modes(); }
  double mode_detuning(int m) const { return m * omega_fsr - rotating_frame_freq; }
  void validate() const;
};

/// g(m) = g for every mode.
std::function<double(int)> uniform_coupling(double g);

/// Real symmetric single-excitation Hamiltonian (units rad/s).
Eigen::MatrixXd build_hamiltonian(const MultimodeSpec& spec);

std::vector<std::string> basis_labels(const MultimodeSpec& spec);

using StateVector = Eigen::VectorXcd;

/// Excitation in basis state `index`.
StateVector basis_state(int dim, int index);

struct Trajectory {
  std::vector<double> t;
  Eigen::MatrixXd populations;  // rows time, columns basis states
  std::vector<StateVector> states;  // kept only when requested
};

/// Exact propagation for a time-independent H via its eigendecomposition.
Trajectory evolve(const Eigen::MatrixXd& H, const StateVector& psi0, const std::vector<double>& t_grid,
                  bool keep_states = false);

/// Piecewise-constant H(t) (sampled at substep midpoints) with exact
/// exponentials. Intervals longer than max_step are split. Throws
/// NumericalError when one step disagrees with two half steps by more than
/// `tolerance` in the state norm on the first interval.
Trajectory evolve_time_dependent(const std::function<Eigen::MatrixXd(double)>& H,
                                 const StateVector& psi0, const std::vector<double>& t_grid,
                                 double max_step = 0.5e-9, double tolerance = 1e-6,
                                 bool keep_states = false);

/// Qubit resonant with mode m0 at detuning zero; modes m0-half..m0+half.
struct ChevronConfig {
  double g = 0.0;          // rad/s
  double omega_fsr = 0.0;  // rad/s
  int m0 = 2094;           // mode index nearest the qubit
  int half_width = 100;
  CableEnd side = CableEnd::Far;
  std::vector<double> detunings;  // rad/s, qubit relative to mode m0
  std::vector<double> times;      // s
  int workers = 1;
};

struct PopulationMap {
  std::vector<double> axis_time;      // s
  std::vector<double> axis_detuning;  // rad/s
  Eigen::MatrixXd p1;                 // rows detuning, columns time
};

MultimodeSpec chevron_spec(const ChevronConfig& cfg, double detuning);

PopulationMap chevron_scan(const ChevronConfig& cfg);

/// Detunings where the time-averaged qubit loss 1 - <P1> has a local maximum
/// above `threshold` (chevron centres).
std::vector<double> chevron_centres(const PopulationMap& map, double threshold = 0.2);

/// Mean spacing of consecutive chevron centres; NaN with fewer than two.
double chevron_spacing(const PopulationMap& map, double threshold = 0.2);

/// Onset of the first revival: the first time after `after` where P1 reaches
/// `fraction` of its largest value later in the record. NaN when no revival.
double revival_onset(const std::vector<double>& t, const std::vector<double>& p1, double after,
                     double fraction = 0.1);

/// Single qubit, constant coupling, resonant with the centre mode.
Trajectory resonant_ladder(double g, double omega_fsr, int half_width, const std::vector<double>& times);

/// CSV (time_ns, detuning_mhz, p1) plus a JSON sidecar with the inputs.
void write_population_map(const std::string& csv_path, const std::string& json_path,
                          const PopulationMap& map, const ChevronConfig& cfg);

// Mode coherence: swap an excitation into one cable mode, wait, swap back.

enum class CoherenceKind { T1, Ramsey };

struct CoherenceConfig {
  CoherenceKind kind = CoherenceKind::T1;
  double g_swap = hz_to_angular(0.08e6);  // rad/s
  double ramsey_detuning = hz_to_angular(50e3);  // rad/s, artificial
  bool pure_dephasing = true;            // from T2_mode when set
  int neighbor_modes = 0;                // extra modes each side, detuned by omega_fsr
  std::vector<double> wait;              // s
};

struct CoherenceResult {
  std::vector<double> wait;
  std::vector<double> p1;
  double time_constant = 0.0;  // s, T1 or T2
  double time_constant_error = 0.0;
  double fit_residual_rms = 0.0;
  bool non_decaying = false;
};

CoherenceResult mode_coherence_experiment(const CoherenceConfig& cfg, const device::CableParams& cable);

}  // namespace qlink::multimode
