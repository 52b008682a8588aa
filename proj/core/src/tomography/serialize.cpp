#include "qlink/tomography/serialize.hpp"

#include "json.hpp"
#include "qlink/error.hpp"
#include "qlink/util/csv.hpp"

namespace qlink::tomography {

std::vector<std::string> computational_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < (1 << n); ++i) {
    std::string s;
    for (int q = n - 1; q >= 0; --q) s += ((i >> q) & 1) ? '1' : '0';
    out.push_back(s);
  }
  return out;
}

std::string matrix_json(const Matrix& m, const std::vector<std::string>& basis,
                        const std::string& kind, int indent) {
  if (static_cast<Eigen::Index>(basis.size()) != m.rows()) {
    throw DimensionMismatch("one basis label per row expected");
  }
  nlohmann::json j;
  j["kind"] = kind;
  j["dim"] = m.rows();
  j["basis"] = basis;
  j["layout"] = "row-major, interleaved real/imag";
  std::vector<double> data;
  data.reserve(2 * m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  }
  j["data"] = data;
  return j.dump(indent);
}

std::string state_json(const DensityMatrix& rho, int indent) {
  return matrix_json(rho.matrix(), computational_labels(rho.n_qubits()), "density", indent);
}

std::string process_json(const ProcessMatrix& chi, int indent) {
  return matrix_json(chi.chi, chi.labels(), "chi_pauli", indent);
}

LabeledMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("matrix json: ") + e.what());
  }
  LabeledMatrix out;
  try {
    out.kind = j.at("kind").get<std::string>();
    out.basis = j.at("basis").get<std::vector<std::string>>();
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != 2 * dim * dim ||
        static_cast<Eigen::Index>(out.basis.size()) != dim) {
      throw DimensionMismatch("matrix json: data length does not match dim");
    }
    out.m = Matrix(dim, dim);
    for (Eigen::Index k = 0; k < dim * dim; ++k) {
      out.m(k / dim, k % dim) = {data[2 * k], data[2 * k + 1]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("matrix json: ") + e.what());
  }
  return out;
}

void write_bar_csv(const std::string& path, const Matrix& m,
                   const std::vector<std::string>& basis) {
  CsvWriter w(path, {"row", "col", "real", "imag"});
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      w.row({basis[r], basis[c]}, {m(r, c).real(), m(r, c).imag()});
    }
  }
}

}  // namespace qlink::tomography
