#include "qdlab/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdlab {

std::string format_double(double value, int significant_digits) {
  if (value == 0.0) value = 0.0;  // fold -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

namespace {

void write_array(std::ostream& os, const ComplexMatrix& m, bool imag) {
  os << '[';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (r != 0 || c != 0) os << ',';
      const Complex z = m(r, c);
      os << format_double(imag ? z.imag() : z.real(), 17);
    }
  }
  os << ']';
}

}  // namespace

void write_matrix_json(std::ostream& os, const ComplexMatrix& m) {
  os << "{\"dim\":" << m.rows() << ",\"re\":";
  write_array(os, m, false);
  os << ",\"im\":";
  write_array(os, m, true);
  os << '}';
}

std::string matrix_to_json(const ComplexMatrix& m) {
  std::ostringstream os;
  write_matrix_json(os, m);
  return os.str();
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") ||
      !j.contains("im")) {
    throw std::invalid_argument("matrix JSON: expected keys dim, re, im");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long>() <= 0) {
    throw std::invalid_argument("matrix JSON: dim must be a positive integer");
  }
  const auto dim = j["dim"].get<long>();
  const auto& re = j["re"];
  const auto& im = j["im"];
  const auto n = static_cast<std::size_t>(dim * dim);
  if (!re.is_array() || !im.is_array() || re.size() != n || im.size() != n) {
    throw std::invalid_argument("matrix JSON: re/im must hold dim*dim numbers");
  }
  ComplexMatrix m(dim, dim);
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) {
      const auto k = static_cast<std::size_t>(r * dim + c);
      if (!re[k].is_number() || !im[k].is_number()) {
        throw std::invalid_argument("matrix JSON: non-numeric entry");
      }
      m(r, c) = Complex{re[k].get<double>(), im[k].get<double>()};
    }
  }
  return m;
}

ComplexMatrix read_matrix_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("matrix JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

ComplexMatrix read_matrix_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  return read_matrix_json(in);
}

}  // namespace qdlab
