#include "qlink/protocol/gates.hpp"

#include <cmath>
#include <map>

#include "qlink/error.hpp"
#include "qlink/units.hpp"

namespace qlink::protocol {

namespace {

const std::map<Gate, std::string>& names() {
  static const std::map<Gate, std::string> m = {
      {Gate::I, "I"},        {Gate::X, "X"},     {Gate::Y, "Y"},
      {Gate::Z, "Z"},        {Gate::H, "H"},     {Gate::X2, "X/2"},
      {Gate::MinusX2, "-X/2"}, {Gate::Y2, "Y/2"}, {Gate::MinusY2, "-Y/2"},
      {Gate::CZ, "CZ"},      {Gate::CNOT, "CNOT"}};
  return m;
}

}  // namespace

std::string to_string(Gate g) { return names().at(g); }

Gate gate_from_string(const std::string& name) {
  for (const auto& [g, s] : names()) {
    if (s == name) return g;
  }
  throw InvalidParameter("unknown gate '" + name + "'");
}

int gate_arity(Gate g) { return (g == Gate::CZ || g == Gate::CNOT) ? 2 : 1; }

Matrix pauli(int k) {
  switch (k) {
    case 0: return Matrix::Identity(2, 2);
    case 1: return (Matrix(2, 2) << 0, 1, 1, 0).finished();
    case 2: return (Matrix(2, 2) << 0, cdouble(0, -1), cdouble(0, 1), 0).finished();
    case 3: return (Matrix(2, 2) << 1, 0, 0, -1).finished();
    default: throw InvalidParameter("Pauli index must be 0..3");
  }
}

Matrix rotation(int axis, double theta) {
  return std::cos(theta / 2) * pauli(0) - cdouble(0, 1) * std::sin(theta / 2) * pauli(axis);
}

Matrix gate_unitary(Gate g) {
  switch (g) {
    case Gate::I: return pauli(0);
    case Gate::X: return pauli(1);
    case Gate::Y: return pauli(2);
    case Gate::Z: return pauli(3);
    case Gate::H: return rotation(2, kPi / 2) * pauli(3);
    case Gate::X2: return rotation(1, kPi / 2);
    case Gate::MinusX2: return rotation(1, -kPi / 2);
    case Gate::Y2: return rotation(2, kPi / 2);
    case Gate::MinusY2: return rotation(2, -kPi / 2);
    case Gate::CZ: {
      Matrix U = Matrix::Identity(4, 4);
      U(3, 3) = -1.0;
      return U;
    }
    case Gate::CNOT: {
      Matrix U = Matrix::Zero(4, 4);
      U(0, 0) = U(1, 1) = 1.0;
      U(2, 3) = U(3, 2) = 1.0;
      return U;
    }
  }
  throw InvalidParameter("unknown gate");
}

double depolarizing_from_fidelity(double F, int d) {
  if (d < 2) throw InvalidParameter("dimension must be at least 2");
  if (!(F >= 1.0 / (d + 1) && F <= 1.0)) {
    throw InvalidParameter("average gate fidelity must lie in [1/(d+1), 1]");
  }
  const double f_pro = ((d + 1) * F - 1.0) / d;
  const double d2 = static_cast<double>(d) * d;
  return (1.0 - f_pro) * d2 / (d2 - 1.0);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& U,
                            const std::vector<int>& targets) {
  const Matrix E = embed(U, targets, rho.n_qubits());
  return DensityMatrix::unchecked(E * rho.matrix() * E.adjoint(), rho.labels());
}

DensityMatrix apply_gate(const DensityMatrix& rho, Gate g, const std::vector<int>& targets,
                         double p_depol) {
  if (static_cast<int>(targets.size()) != gate_arity(g)) {
    throw DimensionMismatch(to_string(g) + " needs " + std::to_string(gate_arity(g)) +
                            " target(s)");
  }
  DensityMatrix out = apply_unitary(rho, gate_unitary(g), targets);
  if (p_depol > 0.0) out = depolarizing(p_depol, gate_arity(g)).apply(out, targets);
  return out;
}

}  // namespace qlink::protocol
