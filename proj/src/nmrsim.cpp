#include "qdlab/nmrsim.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "qdlab/matrix_io.hpp"

namespace qdlab {

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix on_target(const ComplexMatrix& u, PulseTarget target) {
  switch (target) {
    case PulseTarget::A:
      return tensor(u, identity(2));
    case PulseTarget::B:
      return tensor(identity(2), u);
    case PulseTarget::Both:
      return tensor(u, u);
  }
  throw std::invalid_argument("hard_pulse: unknown target");
}

void require_two_qubit(const ComplexMatrix& m, const char* what) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw std::invalid_argument(std::string(what) + ": 4x4 matrix required");
  }
}

ComplexMatrix j_only(double j_coupling) {
  LiquidHamiltonianParams p;
  p.j_coupling = j_coupling;
  return liquid_hamiltonian(p);
}

ComplexMatrix rotation_of(Rotation r) {
  switch (r) {
    case Rotation::none:
      return identity(2);
    case Rotation::x90:
      return pulse_rotation(kPi / 2, PulseAxis::PlusX);
    case Rotation::y90:
      return pulse_rotation(kPi / 2, PulseAxis::PlusY);
  }
  throw std::invalid_argument("unknown rotation");
}

Rotation rotation_from_char(char c) {
  switch (c) {
    case 'I':
      return Rotation::none;
    case 'X':
      return Rotation::x90;
    case 'Y':
      return Rotation::y90;
    default:
      throw std::invalid_argument(std::string("tomography: bad setting letter '") + c + "'");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad number '" +
                                s + "'");
  }
  return v;
}

template <class Row, class Parse>
std::vector<Row> read_csv(std::istream& is, const std::string& header, std::size_t columns,
                          Parse parse) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw std::invalid_argument("csv: expected header '" + header + "'");
  }
  std::vector<Row> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != columns) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(columns) + " fields");
    }
    rows.push_back(parse(f, line_no));
  }
  return rows;
}

// Real parametrization of a 4x4 Hermitian matrix: four diagonal entries,
// then (re, im) of the upper triangle in row-major order.
constexpr int kParams = 16;

ComplexMatrix basis_element(int k) {
  ComplexMatrix e = ComplexMatrix::Zero(4, 4);
  if (k < 4) {
    e(k, k) = 1.0;
    return e;
  }
  int pair = (k - 4) / 2;
  const bool imag = (k - 4) % 2 == 1;
  for (int r = 0; r < 4; ++r) {
    for (int c = r + 1; c < 4; ++c) {
      if (pair-- == 0) {
        e(r, c) = imag ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
        e(c, r) = std::conj(e(r, c));
        return e;
      }
    }
  }
  throw std::out_of_range("basis_element");
}

std::array<double, 8> readout_values(const ComplexMatrix& delta,
                                     const TomographySetting& setting) {
  const ComplexMatrix u =
      tensor(rotation_of(setting.rotation_a), rotation_of(setting.rotation_b));
  const ComplexMatrix dn = u * delta * u.adjoint();
  auto tr = [&](const ComplexMatrix& op) { return (dn * op).trace().real(); };
  const ComplexMatrix id = identity(2);
  const ComplexMatrix sz = pauli(3);
  return {tr(tensor(pauli(1) / 2.0, id)), tr(tensor(pauli(2) / 2.0, id)),
          tr(tensor(id, pauli(1) / 2.0)), tr(tensor(id, pauli(2) / 2.0)),
          tr(tensor(pauli(1) / 2.0, sz)), tr(tensor(pauli(2) / 2.0, sz)),
          tr(tensor(sz, pauli(1) / 2.0)), tr(tensor(sz, pauli(2) / 2.0))};
}

}  // namespace

DeviationMatrix thermal_deviation(double epsilon, double gamma_ratio) {
  if (!(epsilon > 0.0 && epsilon <= 0.25)) {
    throw std::invalid_argument("thermal_deviation: epsilon must lie in (0, 0.25]");
  }
  if (!(gamma_ratio > 0.0) || !std::isfinite(gamma_ratio)) {
    throw std::invalid_argument("thermal_deviation: gamma_ratio must be positive");
  }
  const double wa = gamma_ratio / (1.0 + gamma_ratio);
  const double wb = 1.0 / (1.0 + gamma_ratio);
  const ComplexMatrix id = identity(2);
  return DeviationMatrix(wa * tensor(pauli(3), id) + wb * tensor(id, pauli(3)), epsilon);
}

ComplexMatrix liquid_hamiltonian(const LiquidHamiltonianParams& p) {
  const SpinOperators s = spin_operators(0.5);
  const ComplexMatrix id = identity(2);
  ComplexMatrix h = -p.offset_h * tensor(s.iz, id) - p.offset_c * tensor(id, s.iz) +
                    2.0 * kPi * p.j_coupling * tensor(s.iz, s.iz);
  h += p.rf_amp_h *
       tensor(std::cos(p.rf_phase_h) * s.ix + std::sin(p.rf_phase_h) * s.iy, id);
  h += p.rf_amp_c *
       tensor(id, std::cos(p.rf_phase_c) * s.ix + std::sin(p.rf_phase_c) * s.iy);
  return h;
}

ComplexMatrix quadrupolar_hamiltonian(const QuadrupolarHamiltonianParams& p) {
  if (p.omega_q == 0.0) throw std::invalid_argument("quadrupolar_hamiltonian: omega_q = 0");
  const SpinOperators s = spin_operators(1.5);
  return -p.offset * s.iz + (p.omega_q / 6.0) * (3.0 * s.iz * s.iz - s.isq) +
         p.rf_amp * (std::cos(p.rf_phase) * s.ix + std::sin(p.rf_phase) * s.iy);
}

ComplexMatrix propagator(const ComplexMatrix& h, double t) {
  const Spectrum sp = eigendecompose(h);
  ComplexVector phases(static_cast<Eigen::Index>(sp.values.size()));
  for (std::size_t k = 0; k < sp.values.size(); ++k) {
    phases(static_cast<Eigen::Index>(k)) = std::exp(Complex(0.0, -sp.values[k] * t));
  }
  return sp.vectors * phases.asDiagonal() * sp.vectors.adjoint();
}

ComplexMatrix evolve(const ComplexMatrix& rho, const ComplexMatrix& h, double t) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw std::invalid_argument("evolve: dimension mismatch");
  }
  const ComplexMatrix u = propagator(h, t);
  return u * rho * u.adjoint();
}

DensityMatrix evolve(const DensityMatrix& rho, const ComplexMatrix& h, double t) {
  return DensityMatrix(evolve(rho.matrix(), h, t), rho.subsystem_dims());
}

ComplexMatrix pulse_rotation(double angle, PulseAxis axis) {
  ComplexMatrix n;
  switch (axis) {
    case PulseAxis::PlusX:
      n = pauli(1);
      break;
    case PulseAxis::PlusY:
      n = pauli(2);
      break;
    case PulseAxis::MinusX:
      n = -pauli(1);
      break;
    case PulseAxis::MinusY:
      n = -pauli(2);
      break;
  }
  return std::cos(angle / 2) * identity(2) - Complex(0.0, std::sin(angle / 2)) * n;
}

ComplexMatrix hard_pulse(const ComplexMatrix& rho, PulseTarget target, double angle,
                         PulseAxis axis) {
  require_two_qubit(rho, "hard_pulse");
  const ComplexMatrix u = on_target(pulse_rotation(angle, axis), target);
  return u * rho * u.adjoint();
}

DensityMatrix hard_pulse(const DensityMatrix& rho, PulseTarget target, double angle,
                         PulseAxis axis) {
  if (!rho.is_two_qubit()) throw std::invalid_argument("hard_pulse: two-qubit state required");
  return DensityMatrix(hard_pulse(rho.matrix(), target, angle, axis));
}

ComplexMatrix gradient_crush(const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  out.diagonal() = rho.diagonal();
  return out;
}

DensityMatrix gradient_crush(const DensityMatrix& rho) {
  return DensityMatrix(gradient_crush(rho.matrix()), rho.subsystem_dims());
}

ComplexMatrix pseudo_pure_11_sequence(const ComplexMatrix& rho, double j_coupling) {
  require_two_qubit(rho, "pseudo_pure_11_sequence");
  if (!(j_coupling > 0.0)) throw std::invalid_argument("pseudo_pure_11: J must be > 0");
  const ComplexMatrix hj = j_only(j_coupling);
  const double quarter = 1.0 / (4.0 * j_coupling);
  const auto both = PulseTarget::Both;

  ComplexMatrix m = hard_pulse(rho, both, kPi / 2, PulseAxis::MinusX);
  m = evolve(m, hj, quarter);
  m = hard_pulse(m, both, kPi / 2, PulseAxis::PlusY);
  m = evolve(m, hj, quarter);
  m = hard_pulse(m, both, kPi / 2, PulseAxis::MinusX);
  m = gradient_crush(m);
  m = hard_pulse(m, both, kPi / 4, PulseAxis::MinusY);
  m = evolve(m, hj, 2.0 * quarter);
  m = hard_pulse(m, both, kPi / 6, PulseAxis::PlusX);
  return gradient_crush(m);
}

DensityMatrix prepare_pseudo_pure_11(double epsilon, double j_coupling) {
  const DensityMatrix thermal = thermal_deviation(epsilon).state();
  return DensityMatrix(pseudo_pure_11_sequence(thermal.matrix(), j_coupling));
}

DeviationMatrix prepare_pseudo_pure_11_deviation(double epsilon, double j_coupling) {
  const DeviationMatrix thermal = thermal_deviation(epsilon);
  return DeviationMatrix(pseudo_pure_11_sequence(thermal.matrix(), j_coupling), epsilon);
}

DeviationMatrix sum_deviations(const std::vector<DeviationMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("sum_deviations: nothing to sum");
  ComplexMatrix total = ComplexMatrix::Zero(parts.front().dim(), parts.front().dim());
  for (const auto& d : parts) {
    if (d.dim() != parts.front().dim() || d.epsilon() != parts.front().epsilon()) {
      throw std::invalid_argument("sum_deviations: parts must share dimension and epsilon");
    }
    total += d.matrix();
  }
  return DeviationMatrix(total, parts.front().epsilon());
}

TomographySetting TomographySetting::from_label(std::string_view label) {
  static const std::set<std::string_view> known = {"II", "XX", "IX", "IY", "XI",
                                                   "YI", "XY", "YX", "YY"};
  if (!known.contains(label)) {
    throw std::invalid_argument("tomography: unknown setting '" + std::string(label) + "'");
  }
  return {std::string(label), rotation_from_char(label[0]), rotation_from_char(label[1])};
}

const std::vector<TomographySetting>& all_settings() {
  static const std::vector<TomographySetting> settings = [] {
    std::vector<TomographySetting> s;
    for (const char* l : {"II", "XX", "IX", "IY", "XI", "YI", "XY", "YX", "YY"}) {
      s.push_back(TomographySetting::from_label(l));
    }
    return s;
  }();
  return settings;
}

TomographyRecord tomography_readout(const ComplexMatrix& delta,
                                    const TomographySetting& setting) {
  require_two_qubit(delta, "tomography_readout");
  const auto v = readout_values(delta, setting);
  return {setting, v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

TomographyRecord tomography_readout(const DeviationMatrix& delta,
                                    const TomographySetting& setting) {
  return tomography_readout(delta.matrix(), setting);
}

std::vector<TomographyRecord> tomography_readout_all(const DeviationMatrix& delta) {
  std::vector<TomographyRecord> out;
  for (const auto& s : all_settings()) out.push_back(tomography_readout(delta, s));
  return out;
}

Eigen::MatrixXd tomography_design_matrix(const std::vector<TomographySetting>& settings) {
  const auto rows = static_cast<Eigen::Index>(8 * settings.size() + 1);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows, kParams);
  for (int k = 0; k < kParams; ++k) {
    const ComplexMatrix e = basis_element(k);
    for (std::size_t s = 0; s < settings.size(); ++s) {
      const auto v = readout_values(e, settings[s]);
      for (int c = 0; c < 8; ++c) x(static_cast<Eigen::Index>(8 * s) + c, k) = v[c];
    }
  }
  x.block(rows - 1, 0, 1, 4).setOnes();
  return x;
}

DeviationMatrix tomography_reconstruct(const std::vector<TomographyRecord>& records,
                                       double epsilon) {
  std::set<std::string> seen;
  std::vector<TomographySetting> settings;
  for (const auto& r : records) {
    settings.push_back(TomographySetting::from_label(r.setting.label));
    seen.insert(r.setting.label);
  }
  std::string missing;
  for (const auto& s : all_settings()) {
    if (!seen.contains(s.label)) missing += (missing.empty() ? "" : ",") + s.label;
  }
  if (!missing.empty()) {
    throw std::invalid_argument("tomography_reconstruct: missing settings " + missing);
  }

  const Eigen::MatrixXd x = tomography_design_matrix(settings);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(x.rows());
  for (std::size_t s = 0; s < records.size(); ++s) {
    const auto v = records[s].values();
    for (int c = 0; c < 8; ++c) b(static_cast<Eigen::Index>(8 * s) + c) = v[c];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < kParams) {
    throw RankDeficientError("tomography_reconstruct: design matrix has rank " +
                             std::to_string(qr.rank()) + " < 16");
  }
  const Eigen::VectorXd a = qr.solve(b);
  ComplexMatrix delta = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < kParams; ++k) delta += a(k) * basis_element(k);
  // Noise leaves a small trace residue; the trace row is only a soft constraint.
  delta -= (delta.trace() / 4.0) * identity(4);
  return DeviationMatrix(delta, epsilon);
}

constexpr const char* kRecordHeader = "setting,mx_a,my_a,mx_b,my_b,ax_a,ay_a,ax_b,ay_b";

void write_tomography_csv(std::ostream& os, const std::vector<TomographyRecord>& records) {
  os << kRecordHeader << '\n';
  for (const auto& r : records) {
    os << r.setting.label;
    for (double v : r.values()) os << ',' << format_double(v, 17);
    os << '\n';
  }
}

std::vector<TomographyRecord> read_tomography_csv(std::istream& is) {
  return read_csv<TomographyRecord>(is, kRecordHeader, 9, [](const auto& f, int line) {
    std::array<double, 8> v{};
    for (int c = 0; c < 8; ++c) v[c] = parse_double(f[c + 1], line);
    return TomographyRecord{TomographySetting::from_label(f[0]), v[0], v[1], v[2], v[3],
                            v[4], v[5], v[6], v[7]};
  });
}

std::vector<SmpLiquidStep> read_smp_liquid_csv(std::istream& is) {
  return read_csv<SmpLiquidStep>(
      is, "step,amp_h,phase_h,duration_ms,amp_c,phase_c", 6, [](const auto& f, int line) {
        return SmpLiquidStep{static_cast<int>(parse_double(f[0], line)),
                             parse_double(f[1], line),
                             parse_double(f[2], line),
                             parse_double(f[3], line),
                             parse_double(f[4], line),
                             parse_double(f[5], line)};
      });
}

std::vector<SmpSodiumStep> read_smp_sodium_csv(std::istream& is) {
  return read_csv<SmpSodiumStep>(
      is, "group,step,amp,phase,duration_us", 5, [](const auto& f, int line) {
        return SmpSodiumStep{f[0], static_cast<int>(parse_double(f[1], line)),
                             parse_double(f[2], line), parse_double(f[3], line),
                             parse_double(f[4], line)};
      });
}

}  // namespace qdlab
