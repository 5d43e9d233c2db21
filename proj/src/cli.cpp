#include "qdlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdlab/channels.hpp"
#include "qdlab/correlations.hpp"
#include "qdlab/matrix_io.hpp"
#include "qdlab/nmrsim.hpp"
#include "qdlab/optimizer.hpp"
#include "qdlab/witness.hpp"

namespace qdlab::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kBitUnit = "bit";
constexpr const char* kDeviationUnit = "eps2_over_ln2_bit";

/// Collected before any computation; reported together.
struct ConfigErrors {
  std::vector<std::string> messages;
  void add(std::string m) { messages.push_back(std::move(m)); }
  bool empty() const { return messages.empty(); }
};

class ConfigFailure : public std::runtime_error {
 public:
  explicit ConfigFailure(std::vector<std::string> messages)
      : std::runtime_error("configuration error"), messages_(std::move(messages)) {}
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

void raise_if_any(const ConfigErrors& errors) {
  if (!errors.empty()) throw ConfigFailure(errors.messages);
}

std::optional<std::array<double, 3>> parse_triple(const std::string& text) {
  std::array<double, 3> out{};
  std::stringstream ss(text);
  std::string field;
  int n = 0;
  while (std::getline(ss, field, ',')) {
    if (n == 3) return std::nullopt;
    try {
      std::size_t used = 0;
      out[n] = std::stod(field, &used);
      if (used != field.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    ++n;
  }
  if (n != 3) return std::nullopt;
  return out;
}

ComplexMatrix bell_operator(const std::array<double, 3>& c) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  for (int j = 0; j < 3; ++j) m += c[j] * tensor(pauli(j + 1), pauli(j + 1));
  return m / 4.0;
}

// ---------------------------------------------------------------- shared options

struct StateOptions {
  std::string bell;
  std::string file;
  bool deviation = false;
  double epsilon = 1e-5;

  void attach(CLI::App& app) {
    app.add_option("--bell", bell, "Bell-diagonal triple c1,c2,c3");
    app.add_option("--file", file, "matrix JSON file {dim, re, im}");
    app.add_flag("--deviation", deviation,
                 "treat the input as a deviation matrix (Bell triple: sum c_j s_j s_j / 4)");
    app.add_option("--epsilon", epsilon, "high-temperature expansion scale");
  }

  void check(ConfigErrors& errors, bool required = true) const {
    if (!bell.empty() && !file.empty()) errors.add("use only one of --bell and --file");
    if (required && bell.empty() && file.empty()) errors.add("a state is required (--bell or --file)");
    if (!bell.empty() && !parse_triple(bell)) {
      errors.add("--bell expects three comma-separated numbers, got '" + bell + "'");
    }
    if (!(epsilon > 0.0 && epsilon <= 0.25)) errors.add("--epsilon must lie in (0, 0.25]");
  }

  bool has_state() const { return !bell.empty() || !file.empty(); }

  std::optional<std::array<double, 3>> triple() const {
    if (bell.empty()) return std::nullopt;
    return parse_triple(bell);
  }

  ComplexMatrix raw_matrix() const {
    if (!bell.empty()) {
      const auto c = *parse_triple(bell);
      return deviation ? bell_operator(c) : BellDiagonalParams(c[0], c[1], c[2]).matrix();
    }
    return read_matrix_json_file(file);
  }

  DensityMatrix density() const { return DensityMatrix(raw_matrix()); }
  DeviationMatrix deviation_matrix() const { return DeviationMatrix(raw_matrix(), epsilon); }
  const char* unit() const { return deviation ? kDeviationUnit : kBitUnit; }
};

struct OptimizerOptions {
  OptimizerConfig config;
  bool serial = false;

  void attach(CLI::App& app) {
    app.add_option("--grid-theta", config.grid_theta, "grid points in theta");
    app.add_option("--grid-phi", config.grid_phi, "grid points in phi");
    app.add_option("--budget", config.refine_budget, "Nelder-Mead evaluation budget");
    app.add_option("--simplex-tol", config.simplex_tol, "simplex diameter tolerance");
    app.add_option("--seed", config.seed, "grid offset seed (0 = none)");
    app.add_flag("--serial", serial, "use the serial reference grid kernel");
  }

  void check(ConfigErrors& errors) const {
    if (config.grid_theta < 2) errors.add("--grid-theta must be >= 2");
    if (config.grid_phi < 1) errors.add("--grid-phi must be >= 1");
    if (config.refine_budget < 0) errors.add("--budget must be >= 0");
    if (!(config.simplex_tol > 0.0)) errors.add("--simplex-tol must be > 0");
  }

  OptimizerConfig resolved() const {
    OptimizerConfig c = config;
    c.parallel = !serial;
    return c;
  }
};

struct RelaxationOptions {
  RelaxationParams params;
  std::optional<double> gamma;
  bool no_amplitude = false;

  void attach(CLI::App& app) {
    app.add_option("--t1a", params.t1_a, "T1 of qubit A (s)");
    app.add_option("--t1b", params.t1_b, "T1 of qubit B (s)");
    app.add_option("--t2a", params.t2_a, "T2 of qubit A (s)");
    app.add_option("--t2b", params.t2_b, "T2 of qubit B (s)");
    app.add_option("--gamma", gamma, "GAD fixed-point population (default (1-eps)/2)");
    app.add_flag("--no-amplitude", no_amplitude, "pure phase damping, no GAD");
  }

  RelaxationParams resolved(double epsilon) const {
    RelaxationParams p = params;
    p.epsilon = epsilon;
    p.gamma = gamma.value_or((1.0 - epsilon) / 2.0);
    p.include_amplitude = !no_amplitude;
    return p;
  }

  void check(ConfigErrors& errors, double epsilon) const {
    try {
      resolved(epsilon).validate();
    } catch (const std::invalid_argument& e) {
      errors.add(e.what());
    }
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path);
  if (!file) throw ConfigFailure({"cannot open output file '" + path + "'"});
  return file;
}

ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson matrix_json(const ComplexMatrix& m) { return ojson::parse(matrix_to_json(m)); }

// ---------------------------------------------------------------- discord

struct DiscordCommand {
  StateOptions state;
  OptimizerOptions opt;
  std::string asymmetric;

  void attach(CLI::App& app) {
    state.attach(app);
    opt.attach(app);
    app.add_option("--asymmetric", asymmetric, "also report one-sided discord, measuring A or B");
  }

  int run(std::ostream& out) const {
    ConfigErrors errors;
    state.check(errors);
    opt.check(errors);
    if (!asymmetric.empty() && asymmetric != "A" && asymmetric != "B") {
      errors.add("--asymmetric must be A or B");
    }
    if (!asymmetric.empty() && state.deviation) {
      errors.add("--asymmetric is not available for deviation input");
    }
    raise_if_any(errors);

    const OptimizerConfig config = opt.resolved();
    CorrelationReport report;
    ojson j;
    bool converged = true;
    if (state.deviation) {
      report = deviation_discord(state.deviation_matrix(), config);
      j = to_json(report);
    } else {
      const DensityMatrix rho = state.density();
      report = symmetric_discord(rho, config);
      j = to_json(report);
      if (const auto c = state.triple()) {
        const CorrelationReport a = bell_diagonal_analytic(BellDiagonalParams((*c)[0], (*c)[1], (*c)[2]));
        j["analytic"] = {{"mi_bits", a.mutual_information},
                         {"cc_bits", a.classical_correlation},
                         {"qd_bits", a.symmetric_discord}};
      }
      if (!asymmetric.empty()) {
        const AsymmetricDiscord ad =
            asymmetric_discord(rho, asymmetric == "A" ? Side::A : Side::B, config);
        j["asymmetric"] = {{"measured", asymmetric}, {"qd_bits", ad.value},
                           {"j_bits", ad.classical}, {"theta", ad.theta},
                           {"phi", ad.phi},          {"evals", ad.evals}};
        converged = converged && ad.converged;
      }
    }
    converged = converged && report.converged;
    j["unit"] = state.unit();
    j["converged"] = converged;
    out << j.dump(2) << '\n';
    return converged ? kOk : kOptimizerFlag;
  }
};

// ---------------------------------------------------------------- dynamics

struct DynamicsCommand {
  StateOptions state;
  OptimizerOptions opt;
  RelaxationOptions relax;
  std::string channel = "pd";
  double p_step = 0.01;
  double j_coupling = kDefaultJ;
  int m_max = 250;
  std::string out_path;

  void attach(CLI::App& app) {
    state.attach(app);
    opt.attach(app);
    relax.attach(app);
    app.add_option("--channel", channel, "pd (analytic phase damping) or nmr (GAD + phase)");
    app.add_option("--p-step", p_step, "step of the parametrized time p (pd)");
    app.add_option("--j", j_coupling, "J coupling in Hz; nmr grid is t = m/(4J)");
    app.add_option("--m-max", m_max, "last grid index m (nmr)");
    app.add_option("--out", out_path, "trajectory CSV path (default: stdout)");
  }

  int run(std::ostream& out, std::ostream& err) const {
    ConfigErrors errors;
    state.check(errors);
    if (channel != "pd" && channel != "nmr") errors.add("--channel must be pd or nmr");
    if (channel == "pd") {
      if (state.bell.empty()) errors.add("--channel pd needs --bell");
      if (state.deviation) errors.add("--channel pd works on exact Bell-diagonal states");
      if (!(p_step > 0.0 && p_step <= 1.0)) errors.add("--p-step must lie in (0, 1]");
    } else {
      opt.check(errors);
      relax.check(errors, state.epsilon);
      if (!(j_coupling > 0.0)) errors.add("--j must be > 0");
      if (m_max < 0) errors.add("--m-max must be >= 0");
    }
    raise_if_any(errors);

    Trajectory traj;
    ojson summary;
    summary["channel"] = channel;
    std::optional<BellDiagonalParams> c0;
    if (const auto c = state.triple()) {
      if (state.deviation) {
        // Regime and p_sc depend only on ratios; shrink into the physical set.
        const double l1 = std::abs((*c)[0]) + std::abs((*c)[1]) + std::abs((*c)[2]);
        const double k = 1.0 / std::max(1.0, l1);
        c0.emplace(k * (*c)[0], k * (*c)[1], k * (*c)[2]);
      } else {
        c0.emplace((*c)[0], (*c)[1], (*c)[2]);
      }
    }

    std::vector<std::string> warnings;
    if (channel == "pd") {
      traj = pd_trajectory(*c0, uniform_p_grid(p_step));
    } else {
      const RelaxationParams params = relax.resolved(state.epsilon);
      warnings = params.validate();
      const auto grid = default_time_grid(j_coupling, m_max);
      traj = state.deviation ? nmr_trajectory(state.deviation_matrix(), params, grid, opt.resolved())
                             : nmr_trajectory(state.density(), params, grid, opt.resolved());
      summary["t2_effective"] = effective_t2(params);
      summary["t_sc_predicted"] =
          c0 ? optional_number(predicted_sudden_change_time(*c0, params)) : ojson(nullptr);
    }
    summary["regime"] = std::string(to_string(traj.regime));
    summary["p_sc"] = c0 ? optional_number(sudden_change_point(*c0)) : ojson(nullptr);
    summary["unit"] = traj.unit;
    summary["points"] = traj.times.size();
    bool converged = std::all_of(traj.reports.begin(), traj.reports.end(),
                                 [](const CorrelationReport& r) { return r.converged; });
    summary["converged"] = converged;
    summary["warnings"] = warnings;

    std::ofstream file;
    std::ostream& csv = open_output(out_path, file, out);
    write_trajectory_csv(csv, traj);
    (out_path.empty() ? err : out) << summary.dump(2) << '\n';
    return converged ? kOk : kOptimizerFlag;
  }
};

// ---------------------------------------------------------------- witness

struct WitnessCommand {
  StateOptions state;
  RelaxationOptions relax;
  OptimizerOptions opt;
  std::uint64_t seed = 1;
  double cutoff = kDefaultWitnessCutoff;
  bool circuit = false;
  bool table = false;
  int steps = 0;
  double dt = 0.0557;
  std::string out_path;

  void attach(CLI::App& app) {
    state.attach(app);
    relax.attach(app);
    opt.attach(app);
    app.add_option("--dir-seed", seed, "seed for the random directions z, w");
    app.add_option("--cutoff", cutoff, "classicality cutoff");
    app.add_flag("--circuit", circuit, "use the rotation + CNOT measurement route");
    app.add_flag("--table", table, "print Witness / Quantum Discord / Classical Correlation");
    app.add_option("--steps", steps, "relaxation series t_n = n dt, n = 0..steps-1");
    app.add_option("--dt", dt, "relaxation step (s)");
    app.add_option("--out", out_path, "series CSV path (default: stdout)");
  }

  int run(std::ostream& out) const {
    ConfigErrors errors;
    state.check(errors);
    if (!(cutoff >= 0.0)) errors.add("--cutoff must be >= 0");
    if (steps < 0) errors.add("--steps must be >= 0");
    if (steps > 0) {
      if (!(dt > 0.0)) errors.add("--dt must be > 0");
      if (state.deviation) errors.add("--steps works on exact states");
      if (table) errors.add("--table and --steps are exclusive");
      relax.check(errors, state.epsilon);
    }
    if (table) opt.check(errors);
    raise_if_any(errors);

    const WitnessDirections dirs = WitnessDirections::random(seed);
    if (steps > 0) {
      const auto reports = witness_dynamics(state.density(), relax.resolved(state.epsilon),
                                            steps, dt, dirs, cutoff);
      std::ofstream file;
      std::ostream& csv = open_output(out_path, file, out);
      csv << "n,t,w_value,o1,o2,o3,o4,verdict\n";
      for (std::size_t n = 0; n < reports.size(); ++n) {
        const auto& r = reports[n];
        csv << n << ',' << format_double(static_cast<double>(n) * dt, 12) << ','
            << format_double(r.value, 12);
        for (double e : r.expectations) csv << ',' << format_double(e, 12);
        csv << ',' << to_string(r.verdict) << '\n';
      }
      return kOk;
    }

    WitnessReport report;
    if (state.deviation) {
      const DeviationMatrix d = state.deviation_matrix();
      report = circuit ? witness_circuit(d, dirs, cutoff) : witness_direct(d, dirs, cutoff);
    } else {
      const DensityMatrix rho = state.density();
      report = circuit ? witness_circuit(rho, dirs, cutoff) : witness_direct(rho, dirs, cutoff);
    }

    if (table) {
      const CorrelationReport corr = state.deviation
                                         ? deviation_discord(state.deviation_matrix(), opt.resolved())
                                         : symmetric_discord(state.density(), opt.resolved());
      out << "row,value,unit\n"
          << "Witness," << format_double(report.value, 6) << ','
          << (state.deviation ? "eps2" : "1") << '\n'
          << "Quantum Discord," << format_double(corr.symmetric_discord, 6) << ','
          << state.unit() << '\n'
          << "Classical Correlation," << format_double(corr.classical_correlation, 6) << ','
          << state.unit() << '\n';
      return corr.converged ? kOk : kOptimizerFlag;
    }

    ojson j = to_json(report);
    j["route"] = circuit ? "circuit" : "direct";
    j["unit"] = state.deviation ? "eps2" : "1";
    j["dir_seed"] = seed;
    out << j.dump(2) << '\n';
    return kOk;
  }
};

// ---------------------------------------------------------------- tomo

struct TomoCommand {
  StateOptions state;
  std::optional<std::uint64_t> random_seed;
  double noise = 0.0;
  std::uint64_t noise_seed = 1;
  std::string records_out;
  std::string replay;

  void attach(CLI::App& app) {
    state.attach(app);
    app.add_option("--random", random_seed, "random traceless deviation from this seed");
    app.add_option("--noise", noise, "Gaussian sigma added to every readout");
    app.add_option("--noise-seed", noise_seed, "seed for the readout noise");
    app.add_option("--records-out", records_out, "write the simulated records CSV");
    app.add_option("--replay", replay, "reconstruct from a records CSV instead of simulating");
  }

  int run(std::ostream& out) const {
    ConfigErrors errors;
    const int sources = (state.has_state() ? 1 : 0) + (random_seed ? 1 : 0);
    if (sources > 1) errors.add("use only one of --bell, --file, --random");
    if (sources == 0 && replay.empty()) errors.add("need --bell, --file, --random or --replay");
    state.check(errors, false);
    if (!(noise >= 0.0)) errors.add("--noise must be >= 0");
    if (!replay.empty() && noise > 0.0) errors.add("--noise does not apply to --replay");
    raise_if_any(errors);

    std::optional<ComplexMatrix> truth;
    if (random_seed) {
      std::mt19937_64 rng(*random_seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      ComplexMatrix m(4, 4);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) m(r, c) = Complex(normal(rng), normal(rng));
      }
      m = 0.5 * (m + m.adjoint()).eval();
      m -= (m.trace() / 4.0) * identity(4);
      truth = m;
    } else if (state.has_state()) {
      const auto c = state.triple();
      truth = c ? bell_operator(*c) : state.raw_matrix();
    }

    std::vector<TomographyRecord> records;
    if (!replay.empty()) {
      std::ifstream in(replay);
      if (!in) throw ConfigFailure({"cannot open records file '" + replay + "'"});
      records = read_tomography_csv(in);
    } else {
      records = tomography_readout_all(DeviationMatrix(*truth, state.epsilon));
      if (noise > 0.0) {
        std::mt19937_64 rng(noise_seed);
        std::normal_distribution<double> normal(0.0, noise);
        for (auto& r : records) {
          for (double* v : {&r.mx_a, &r.my_a, &r.mx_b, &r.my_b, &r.ax_a, &r.ay_a, &r.ax_b,
                            &r.ay_b}) {
            *v += normal(rng);
          }
        }
      }
    }
    if (!records_out.empty()) {
      std::ofstream f(records_out);
      if (!f) throw ConfigFailure({"cannot open output file '" + records_out + "'"});
      write_tomography_csv(f, records);
    }

    const DeviationMatrix rec = tomography_reconstruct(records, state.epsilon);
    ojson j;
    j["records"] = records.size();
    j["noise_sigma"] = noise;
    j["max_error"] = truth ? ojson((rec.matrix() - *truth).cwiseAbs().maxCoeff())
                           : ojson(nullptr);
    j["reconstructed"] = matrix_json(rec.matrix());
    out << j.dump(2) << '\n';
    return kOk;
  }
};

// ---------------------------------------------------------------- prepare

struct PrepareCommand {
  std::string sequence;
  double epsilon = 1e-5;
  double j_coupling = kDefaultJ;

  void attach(CLI::App& app) {
    app.add_option("sequence", sequence, "sequence name (pp11)")->required();
    app.add_option("--epsilon", epsilon, "high-temperature expansion scale");
    app.add_option("--j", j_coupling, "J coupling in Hz");
  }

  int run(std::ostream& out) const {
    ConfigErrors errors;
    if (sequence != "pp11") errors.add("unknown sequence '" + sequence + "' (known: pp11)");
    if (!(epsilon > 0.0 && epsilon <= 0.25)) errors.add("--epsilon must lie in (0, 0.25]");
    if (!(j_coupling > 0.0)) errors.add("--j must be > 0");
    raise_if_any(errors);

    const DensityMatrix rho = prepare_pseudo_pure_11(epsilon, j_coupling);
    const DeviationMatrix delta = prepare_pseudo_pure_11_deviation(epsilon, j_coupling);
    std::vector<double> re, im;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        re.push_back(delta.matrix()(r, c).real());
        im.push_back(delta.matrix()(r, c).imag());
      }
    }
    Eigen::Index argmax = 0;
    delta.matrix().diagonal().real().maxCoeff(&argmax);
    ojson j;
    j["sequence"] = sequence;
    j["epsilon"] = epsilon;
    j["state"] = matrix_json(rho.matrix());
    j["deviation"] = {{"re", re}, {"im", im}};
    j["argmax_population"] = argmax;
    out << j.dump(2) << '\n';
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_threads_from_env();
  CLI::App app{"qdlab: correlations, decoherence and NMR simulation for two-qubit states"};
  app.require_subcommand(1);

  DiscordCommand discord;
  DynamicsCommand dynamics;
  WitnessCommand witness;
  TomoCommand tomo;
  PrepareCommand prepare;
  discord.attach(*app.add_subcommand("discord", "correlation report for one state"));
  dynamics.attach(*app.add_subcommand("dynamics", "correlations along a decoherence trajectory"));
  witness.attach(*app.add_subcommand("witness", "nonlinear classicality witness"));
  tomo.attach(*app.add_subcommand("tomo", "9-setting tomography round trip"));
  prepare.attach(*app.add_subcommand("prepare", "hard-pulse state preparation"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "discord") return discord.run(out);
    if (name == "dynamics") return dynamics.run(out, err);
    if (name == "witness") return witness.run(out);
    if (name == "tomo") return tomo.run(out);
    return prepare.run(out);
  } catch (const ConfigFailure& e) {
    err << "configuration error:\n";
    for (const auto& m : e.messages()) err << "  - " << m << '\n';
    return kConfigError;
  } catch (const PhysicsError& e) {
    err << "physics error: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const RankDeficientError& e) {
    err << "physics error: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const std::invalid_argument& e) {
    err << "configuration error:\n  - " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    err << "configuration error:\n  - " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qdlab::cli
