#pragma once

#include <string>
#include <vector>

#include "qlink/tomography/tomography.hpp"

namespace qlink::tomography {

/// Computational basis labels "00", "01", ... for n qubits.
std::vector<std::string> computational_labels(int n_qubits);

/// {"kind", "dim", "basis": [...], "data": [re00, im00, re01, im01, ...]}
/// with entries row-major.
std::string matrix_json(const Matrix& m, const std::vector<std::string>& basis,
                        const std::string& kind, int indent = 2);
std::string state_json(const DensityMatrix& rho, int indent = 2);
std::string process_json(const ProcessMatrix& chi, int indent = 2);

struct LabeledMatrix {
  std::string kind;
  std::vector<std::string> basis;
  Matrix m;
};
LabeledMatrix matrix_from_json(const std::string& text);

/// One row per element: row label, column label, real, imag.
void write_bar_csv(const std::string& path, const Matrix& m,
                   const std::vector<std::string>& basis);

}  // namespace qlink::tomography
