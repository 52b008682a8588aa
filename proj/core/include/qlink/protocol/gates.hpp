#pragma once

#include <string>
#include <vector>

#include "qlink/protocol/density_matrix.hpp"

namespace qlink::protocol {

enum class Gate { I, X, Y, Z, H, X2, MinusX2, Y2, MinusY2, CZ, CNOT };

std::string to_string(Gate g);
Gate gate_from_string(const std::string& name);
int gate_arity(Gate g);
/// X2 = Rx(pi/2), Y2 = Ry(pi/2); CNOT has its control on the first target.
Matrix gate_unitary(Gate g);

Matrix pauli(int k);  // 0..3 -> I, X, Y, Z
Matrix rotation(int axis, double theta);  // exp(-i theta sigma_axis / 2)

/// Depolarizing probability (uniform, identity term included) whose channel
/// has average gate fidelity F in dimension d.
double depolarizing_from_fidelity(double F, int d);

/// (1-p) U rho U^dag + p * (uniform depolarization of the targets).
DensityMatrix apply_gate(const DensityMatrix& rho, Gate g, const std::vector<int>& targets,
                         double p_depol = 0.0);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& U,
                            const std::vector<int>& targets);

}  // namespace qlink::protocol
