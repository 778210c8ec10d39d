// rydsim: command-line front end for the analog neutral-atom emulator.
//
// Subcommands:
//   validate  check a program file against the hardware restrictions
//   run       execute a program and write the shot records
//   analyze   turn result files (or scan CSVs) into summary tables
//   example   emit a self-contained, reproducible demo bundle
//
// Exit codes: 0 success, 1 domain failure (invalid program, analysis with no
// usable data, simulation breakdown), 2 usage or I/O failure (bad flags,
// unreadable or malformed files).

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "ryd/ryd.hpp"

namespace {

using ryd::json;

constexpr std::uint64_t kDefaultSeed = 1234;
constexpr int kDefaultShots = 100;

// Flag misuse and unreadable/malformed input files; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Input loading (any failure here is the file's fault, not the domain's)
// ---------------------------------------------------------------------------

ryd::AnalogProgram load_program(const std::string& path) {
  try {
    return ryd::program_from_json(ryd::parse_json_file(path));
  } catch (const std::exception& e) {
    throw UsageError("cannot load program from " + path + ": " + e.what());
  }
}

ryd::TaskResult load_result(const std::string& path) {
  try {
    return ryd::result_from_json(ryd::parse_json_file(path));
  } catch (const std::exception& e) {
    throw UsageError("cannot load result from " + path + ": " + e.what());
  }
}

std::optional<ryd::NoiseParams> load_noise(const std::string& arg) {
  if (arg == "off") return std::nullopt;
  if (arg == "default") return ryd::aquila_noise();
  try {
    return ryd::noise_from_json(ryd::parse_json_file(arg));
  } catch (const std::exception& e) {
    throw UsageError("cannot load noise parameters from " + arg + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

void emit(const std::string& out_path, const std::string& bytes) {
  if (out_path.empty()) {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  } else {
    ryd::write_text_file(out_path, bytes);
  }
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& program_path, bool relaxed, const std::string& out_path) {
  const auto prog = load_program(program_path);
  const auto report = ryd::validate(prog, ryd::aquila_capabilities(), relaxed);
  emit(out_path, pretty(ryd::validation_report_to_json(report)));
  return report.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

std::string result_csv(const ryd::TaskResult& result) {
  std::ostringstream out;
  out << "shot,pre_sequence,post_sequence\n";
  for (std::size_t s = 0; s < result.shots.size(); ++s) {
    const auto& shot = result.shots[s];
    out << s << ',';
    for (auto b : shot.pre_sequence) out << (b ? '1' : '0');
    out << ',';
    for (auto b : shot.post_sequence) out << (b ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

std::string run_bytes(const ryd::AnalogProgram& prog, int shots,
                      const std::optional<ryd::NoiseParams>& noise, std::uint64_t seed,
                      bool relaxed, const std::string& format) {
  const auto result = ryd::run_task(prog, shots, noise, seed, relaxed);
  return format == "csv" ? result_csv(result) : ryd::serialize(result);
}

int cmd_run(const std::string& program_path, int shots, const std::string& noise_arg,
            std::uint64_t seed, bool relaxed, const std::string& format,
            const std::string& out_path) {
  const auto prog = load_program(program_path);
  const auto noise = load_noise(noise_arg);
  emit(out_path, run_bytes(prog, shots, noise, seed, relaxed, format));
  return 0;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

std::vector<int> parse_chain_order(const std::string& arg, std::size_t n_sites) {
  std::vector<int> order;
  if (arg.empty()) {
    for (std::size_t i = 0; i < n_sites; ++i) order.push_back(static_cast<int>(i));
    return order;
  }
  std::istringstream in(arg);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      const int idx = std::stoi(item);
      if (idx < 0 || static_cast<std::size_t>(idx) >= n_sites)
        throw UsageError("--order index " + item + " is outside the register");
      order.push_back(idx);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("--order must be a comma-separated list of site indices");
    }
  }
  if (order.empty()) throw UsageError("--order must name at least one site");
  return order;
}

std::vector<std::uint8_t> parse_target_bits(const std::string& arg, std::size_t n_sites) {
  if (arg.size() != n_sites)
    throw UsageError("--target must have exactly one 0/1 character per register site");
  std::vector<std::uint8_t> bits;
  for (char c : arg) {
    if (c != '0' && c != '1')
      throw UsageError("--target may contain only the characters 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

// Scan CSV input for `analyze fit`: two numeric columns per row, optional
// single header line.
std::pair<std::vector<double>, std::vector<double>> parse_scan_csv(const std::string& text) {
  std::vector<double> t, z;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string spaced = line;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream row(spaced);
    double a = 0.0, b = 0.0;
    if (row >> a >> b) {
      t.push_back(a);
      z.push_back(b);
    } else if (lineno > 1 || !t.empty()) {
      throw UsageError("scan CSV line " + std::to_string(lineno) +
                       ": expected two numeric columns");
    }
    // else: header line, skip
  }
  if (t.empty()) throw UsageError("scan CSV holds no numeric rows");
  return {t, z};
}

std::string fit_json_text(const ryd::FitResult& f) {
  json j;
  j["amplitude"] = f.A;
  j["omega"] = f.Omega;
  j["phi"] = f.phi;
  if (f.tau_unbounded()) {
    j["tau"] = nullptr;
  } else {
    j["tau"] = f.tau;
  }
  j["offset"] = f.B;
  j["residual_rms"] = f.residual_rms;
  return pretty(j);
}

std::string analyze_fit_bytes(const std::string& csv_text, const std::string& format) {
  const auto [t, z] = parse_scan_csv(csv_text);
  const auto fit = ryd::fit_damped_sinusoid(t, z);
  return format == "json" ? fit_json_text(fit) : ryd::fit_to_csv(fit);
}

// All result-based analyses run on post-selected shots: only shots where
// every user-requested site actually loaded enter the statistics.
std::string analyze_result_bytes(const std::string& kind, const ryd::TaskResult& result,
                                 const std::string& order_arg, const std::string& target_arg,
                                 const std::string& format) {
  const std::size_t n = result.program.reg.size();
  const auto kept = ryd::post_select(result);

  if (kind == "density") {
    const auto density = ryd::density_map(kept);
    if (format == "json") {
      json rows = json::array();
      for (std::size_t i = 0; i < density.size(); ++i) {
        json row;
        row["site"] = i;
        row["x"] = result.program.reg.sites[i].x;
        row["y"] = result.program.reg.sites[i].y;
        row["density"] = density[i];
        rows.push_back(std::move(row));
      }
      return pretty(rows);
    }
    return ryd::density_to_csv(result.program.reg, density);
  }

  if (kind == "correlation1d") {
    const auto order = parse_chain_order(order_arg, n);
    const auto c = ryd::connected_correlation_1d(kept, order);
    if (format == "json") {
      json rows = json::array();
      for (Eigen::Index i = 0; i < c.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < c.cols(); ++j) row.push_back(c(i, j));
        rows.push_back(std::move(row));
      }
      return pretty(rows);
    }
    return ryd::matrix_to_csv(c);
  }

  if (kind == "correlation2d") {
    const auto coords = ryd::lattice_coords(result.program.reg);
    const auto g2 = ryd::connected_correlation_2d(kept, coords);
    if (format == "json") {
      json rows = json::array();
      for (const auto& [d, value] : g2) {
        json row;
        row["dx"] = d.first;
        row["dy"] = d.second;
        row["correlation"] = value;
        rows.push_back(std::move(row));
      }
      return pretty(rows);
    }
    return ryd::displacement_correlations_to_csv(g2);
  }

  if (kind == "probability") {
    if (target_arg.empty())
      throw UsageError("analyze probability requires --target");
    const auto target = parse_target_bits(target_arg, n);
    const auto [p, se] = ryd::bitstring_probability(kept, target);
    if (format == "json") {
      json j;
      j["probability"] = p;
      j["std_error"] = se;
      return pretty(j);
    }
    std::ostringstream out;
    out << "statistic,value\n";
    out << "probability," << ryd::detail::csv_num(p) << '\n';
    out << "std_error," << ryd::detail::csv_num(se) << '\n';
    return out.str();
  }

  throw UsageError("unknown analysis kind: " + kind);
}

int cmd_analyze(const std::string& kind, const std::string& input_path,
                const std::string& order_arg, const std::string& target_arg,
                const std::string& format, const std::string& out_path) {
  if (kind == "fit") {
    std::string text;
    try {
      text = ryd::read_text_file(input_path);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    emit(out_path, analyze_fit_bytes(text, format));
    return 0;
  }
  const auto result = load_result(input_path);
  emit(out_path, analyze_result_bytes(kind, result, order_arg, target_arg, format));
  return 0;
}

// ---------------------------------------------------------------------------
// example bundles
// ---------------------------------------------------------------------------

namespace fs = std::filesystem;

struct Bundle {
  fs::path dir;
  std::vector<std::string> commands;  // reproduction lines for commands.txt

  void file(const std::string& name, const std::string& bytes) const {
    ryd::write_text_file((dir / name).string(), bytes);
  }
  void note(std::string line) { commands.push_back(std::move(line)); }
};

std::string run_command_line(int shots, const std::string& noise_arg, std::uint64_t seed,
                             bool relaxed) {
  std::ostringstream cmd;
  cmd << "rydsim run program.json --shots " << shots << " --seed " << seed << " --noise "
      << noise_arg;
  if (relaxed) cmd << " --relaxed";
  cmd << " --out result.json";
  return cmd.str();
}

// Duration scan of a resonant (or detuned) drive on one atom; the oscillation
// frequency recovered by the fit is the (generalized) Rabi frequency.
void example_rabi(Bundle& b, const std::string& variant, std::uint64_t seed) {
  const double omega = 10.0, ramp = 0.05;
  const double delta = variant == "detuned" ? 10.0 : 0.0;
  const auto reg = ryd::Register::from_positions({{0.0, 0.0}});

  std::ostringstream scan;
  scan << "t,value\n";
  ryd::AnalogProgram last;
  for (int k = 0; k < 25; ++k) {
    const double t_total = 0.15 + 0.05 * k;
    const auto prog = ryd::build_rabi(reg, omega, delta, t_total, ramp);
    const auto result = ryd::run_task(prog, 400, std::nullopt, ryd::mix64(seed, k));
    const double z = ryd::rydberg_fraction(ryd::post_select(result));
    scan << ryd::detail::csv_num(t_total) << ',' << ryd::detail::csv_num(z) << '\n';
    last = prog;
  }
  b.file("rabi_scan.csv", scan.str());
  b.file("program.json", pretty(ryd::program_to_json(last)));
  b.file("result.json", run_bytes(last, 500, std::nullopt, seed, false, "json"));
  const auto result = load_result((b.dir / "result.json").string());
  b.file("density.csv", analyze_result_bytes("density", result, "", "", "csv"));
  b.file("fit.csv", analyze_fit_bytes(ryd::read_text_file((b.dir / "rabi_scan.csv").string()),
                                      "csv"));

  b.note("# rabi_scan.csv is a duration scan produced by `rydsim example 1` itself.");
  b.note(run_command_line(500, "off", seed, false));
  b.note("rydsim analyze density result.json --out density.csv");
  b.note("rydsim analyze fit rabi_scan.csv --out fit.csv");
}

// Two quarter-turn pulses around a detuned dark hold (interference fringes),
// or a three-pulse echo, under the default hardware noise model.
void example_interference(Bundle& b, const std::string& variant, std::uint64_t seed) {
  const double omega = 12.0, ramp = 0.06;
  const auto reg = ryd::Register::from_positions({{0.0, 0.0}});
  const auto noise = ryd::aquila_noise();
  b.file("noise.json", pretty(ryd::noise_to_json(noise)));

  if (variant == "echo") {
    const auto prog = ryd::build_spin_echo(reg, 0.8, omega, ramp);
    b.file("program.json", pretty(ryd::program_to_json(prog)));
    b.file("result.json", run_bytes(prog, 1000, noise, seed, false, "json"));
    const auto result = load_result((b.dir / "result.json").string());
    b.file("density.csv", analyze_result_bytes("density", result, "", "", "csv"));
    b.note(run_command_line(1000, "noise.json", seed, false));
    b.note("rydsim analyze density result.json --out density.csv");
    return;
  }

  // Ramsey: detune only the hold, with fast (slew-free) detuning edges, so
  // the fringe frequency equals the hold detuning.
  const double delta_hold = 8.0, edge = 2e-3;
  auto ramsey_with_hold = [&](double hold) {
    auto prog = ryd::build_ramsey(reg, hold, omega, ramp);
    if (hold > 2 * edge) {
      const double pulse_t = (std::numbers::pi / 2.0) / omega + ramp;
      prog.delta = ryd::Waveform({{0.0, 0.0},
                                  {pulse_t, 0.0},
                                  {pulse_t + edge, delta_hold},
                                  {pulse_t + hold - edge, delta_hold},
                                  {pulse_t + hold, 0.0},
                                  {prog.duration, 0.0}});
    }
    return prog;
  };

  std::ostringstream scan;
  scan << "t,value\n";
  for (int k = 0; k < 11; ++k) {
    const double hold = 0.125 * k;
    const auto result = ryd::run_task(ramsey_with_hold(hold), 200, noise, ryd::mix64(seed, k));
    scan << ryd::detail::csv_num(hold) << ','
         << ryd::detail::csv_num(ryd::rydberg_fraction(ryd::post_select(result))) << '\n';
  }
  b.file("ramsey_scan.csv", scan.str());

  const auto prog = ramsey_with_hold(0.8);
  b.file("program.json", pretty(ryd::program_to_json(prog)));
  b.file("result.json", run_bytes(prog, 1000, noise, seed, false, "json"));
  const auto result = load_result((b.dir / "result.json").string());
  b.file("density.csv", analyze_result_bytes("density", result, "", "", "csv"));
  b.file("fit.csv",
         analyze_fit_bytes(ryd::read_text_file((b.dir / "ramsey_scan.csv").string()), "csv"));

  b.note("# ramsey_scan.csv is a hold-time scan produced by `rydsim example 2` itself.");
  b.note(run_command_line(1000, "noise.json", seed, false));
  b.note("rydsim analyze density result.json --out density.csv");
  b.note("rydsim analyze fit ramsey_scan.csv --out fit.csv");
}

// Eleven-atom chain swept into the alternating ordered phase; or, in the
// quench variant, prepared and then released at zero detuning (needs the
// relaxed duration limit).
void example_chain(Bundle& b, const std::string& variant, std::uint64_t seed) {
  std::vector<ryd::Vec2> pos;
  for (int i = 0; i < 11; ++i) pos.push_back({6.1 * i, 0.0});
  const auto reg = ryd::Register::from_positions(pos);

  const bool quench = variant == "quench";
  const auto prog = quench
                        ? ryd::build_scar(reg, 15.0, -30.0, 30.0, 0.5, 1.4, 2.0, 2.2)
                        : ryd::build_adiabatic(reg, 15.0, -30.0, 30.0, 0.5, 3.0, 4.0);
  b.file("program.json", pretty(ryd::program_to_json(prog)));
  b.file("result.json", run_bytes(prog, 1000, std::nullopt, seed, quench, "json"));
  const auto result = load_result((b.dir / "result.json").string());
  b.file("density.csv", analyze_result_bytes("density", result, "", "", "csv"));
  b.file("correlation1d.csv", analyze_result_bytes("correlation1d", result, "", "", "csv"));
  b.note(run_command_line(1000, "off", seed, quench));
  b.note("rydsim analyze density result.json --out density.csv");
  b.note("rydsim analyze correlation1d result.json --out correlation1d.csv");

  if (!quench) {
    // probability of the perfect alternating pattern: atoms on even sites
    // excited, so those read absent (0) after the sequence
    std::string target;
    for (int i = 0; i < 11; ++i) target += (i % 2 == 0) ? '0' : '1';
    b.file("probability.csv", analyze_result_bytes("probability", result, "", target, "csv"));
    b.note("rydsim analyze probability result.json --target " + target +
           " --out probability.csv");
  }
}

// 4x3 lattice swept into the checkerboard phase; displacement-averaged
// correlations show the staggered order. (12 atoms keeps the exact basis.)
void example_checkerboard(Bundle& b, const std::string&, std::uint64_t seed) {
  std::vector<ryd::Vec2> pos;
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 4; ++col) pos.push_back({7.5 * col, 7.5 * row});
  const auto prog = ryd::build_adiabatic(ryd::Register::from_positions(pos), 15.0, -20.0, 20.0,
                                         0.5, 3.0, 4.0);
  b.file("program.json", pretty(ryd::program_to_json(prog)));
  b.file("result.json", run_bytes(prog, 1000, std::nullopt, seed, false, "json"));
  const auto result = load_result((b.dir / "result.json").string());
  b.file("density.csv", analyze_result_bytes("density", result, "", "", "csv"));
  b.file("correlation2d.csv", analyze_result_bytes("correlation2d", result, "", "", "csv"));
  b.note(run_command_line(1000, "off", seed, false));
  b.note("rydsim analyze density result.json --out density.csv");
  b.note("rydsim analyze correlation2d result.json --out correlation2d.csv");
}

// Kings-lattice independent-set optimization: sweep to several final
// detunings, repair and augment each shot, and tabulate against the exact
// optimum.
void example_optimizer(Bundle& b, const std::string&, std::uint64_t seed) {
  const auto g = ryd::kings_graph(5, 5, 4.5, 0.3, 7);
  b.file("graph.json", pretty(ryd::graph_to_json(g)));

  const std::vector<double> grid{10.0, 20.0, 30.0, 40.0, 50.0};
  const auto reports = ryd::detuning_scan(g, grid, 200, std::nullopt, seed);
  b.file("mis_scan.csv", ryd::mis_reports_to_csv(reports));

  const auto prog = ryd::mis_program(g, 30.0);
  b.file("program.json", pretty(ryd::program_to_json(prog)));
  b.file("result.json", run_bytes(prog, 200, std::nullopt, seed, false, "json"));
  b.note("# graph.json and mis_scan.csv are produced by `rydsim example 5` itself.");
  b.note(run_command_line(200, "off", seed, false));
}

int cmd_example(int n, std::string variant, const std::string& out_dir, std::uint64_t seed) {
  static const std::vector<std::vector<std::string>> variants{
      {"resonant", "detuned"},  // 1
      {"ramsey", "echo"},       // 2
      {"order", "quench"},      // 3
      {"checkerboard"},         // 4
      {"kings"},                // 5
  };
  const auto& allowed = variants[static_cast<std::size_t>(n - 1)];
  if (variant.empty()) variant = allowed.front();
  if (std::find(allowed.begin(), allowed.end(), variant) == allowed.end()) {
    std::string names;
    for (const auto& v : allowed) names += (names.empty() ? "" : ", ") + v;
    throw UsageError("example " + std::to_string(n) + " has variants: " + names);
  }

  Bundle b;
  b.dir = out_dir.empty() ? fs::path("example" + std::to_string(n)) : fs::path(out_dir);
  fs::create_directories(b.dir);

  switch (n) {
    case 1: example_rabi(b, variant, seed); break;
    case 2: example_interference(b, variant, seed); break;
    case 3: example_chain(b, variant, seed); break;
    case 4: example_checkerboard(b, variant, seed); break;
    case 5: example_optimizer(b, variant, seed); break;
    default: throw UsageError("example number must be 1..5");
  }

  std::ostringstream cmds;
  cmds << "# Commands that regenerate the derived artifacts in this directory.\n"
       << "# Run them from inside this directory with rydsim on PATH.\n";
  for (const auto& line : b.commands) cmds << line << '\n';
  b.file("commands.txt", cmds.str());
  std::printf("wrote bundle: %s\n", b.dir.string().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// exception → exit-code mapping
// ---------------------------------------------------------------------------

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 2;
  } catch (const ryd::ValidationError& e) {
    std::fprintf(stderr, "rydsim: program rejected: %s\n", e.what());
    return 1;
  } catch (const ryd::EmptySelectionError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const ryd::InsufficientDataError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const ryd::FitError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const ryd::IntegratorError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const ryd::FormatError& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const std::length_error& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rydsim: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analog neutral-atom emulator"};
  app.set_version_flag("--version", ryd::version_string);
  app.require_subcommand(1);

  // validate ---------------------------------------------------------------
  auto* validate_cmd =
      app.add_subcommand("validate", "check a program file against the hardware restrictions; "
                                     "prints a JSON report, exits 0 only when it passes");
  std::string v_program, v_out;
  bool v_relaxed = false;
  validate_cmd->add_option("program", v_program, "program JSON file")->required();
  validate_cmd->add_flag("--relaxed", v_relaxed,
                         "lift the duration and pattern-height caps (extended access)");
  validate_cmd->add_option("--out", v_out, "write the report here instead of stdout");

  // run --------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand(
      "run", "validate and execute a program, writing one record per shot");
  std::string r_program, r_noise = "off", r_format = "json", r_out;
  int r_shots = kDefaultShots;
  std::uint64_t r_seed = kDefaultSeed;
  bool r_relaxed = false;
  run_cmd->add_option("program", r_program, "program JSON file")->required();
  run_cmd->add_option("--shots", r_shots, "number of shots")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", r_seed, "random seed; identical seeds reproduce results exactly")
      ->capture_default_str();
  run_cmd->add_option("--noise", r_noise,
                      "noise model: off, default, or a noise parameter JSON file")
      ->capture_default_str();
  run_cmd->add_flag("--relaxed", r_relaxed, "validate with the extended-access limits");
  run_cmd->add_option("--format", r_format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--out", r_out, "write the result here instead of stdout");

  // analyze ----------------------------------------------------------------
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "summarize a result file (post-selected shots) or fit a scan CSV");
  std::string a_kind, a_input, a_order, a_target, a_format = "csv", a_out;
  analyze_cmd
      ->add_option("kind", a_kind,
                   "density | correlation1d | correlation2d | probability | fit")
      ->required()
      ->check(CLI::IsMember({"density", "correlation1d", "correlation2d", "probability", "fit"}));
  analyze_cmd->add_option("input", a_input, "result JSON file (fit: two-column t,value CSV)")
      ->required();
  analyze_cmd->add_option("--order", a_order,
                          "correlation1d: comma-separated site order along the chain");
  analyze_cmd->add_option("--target", a_target,
                          "probability: post-sequence bits, one 0/1 character per site");
  analyze_cmd->add_option("--format", a_format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  analyze_cmd->add_option("--out", a_out, "write the table here instead of stdout");

  // example ----------------------------------------------------------------
  auto* example_cmd = app.add_subcommand(
      "example", "write a self-contained demo bundle (program, result, analyses)");
  int e_number = 1;
  std::string e_variant, e_dir;
  std::uint64_t e_seed = kDefaultSeed;
  example_cmd->add_option("number", e_number,
                          "1 rabi, 2 interference, 3 chain order, 4 checkerboard, 5 optimizer")
      ->required()
      ->check(CLI::Range(1, 5));
  example_cmd->add_option("--variant", e_variant, "bundle variant (see the docs per example)");
  example_cmd->add_option("--out-dir", e_dir, "bundle directory (default example<number>)");
  example_cmd->add_option("--seed", e_seed, "random seed for the bundled runs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  return guarded([&]() -> int {
    if (validate_cmd->parsed()) return cmd_validate(v_program, v_relaxed, v_out);
    if (run_cmd->parsed())
      return cmd_run(r_program, r_shots, r_noise, r_seed, r_relaxed, r_format, r_out);
    if (analyze_cmd->parsed())
      return cmd_analyze(a_kind, a_input, a_order, a_target, a_format, a_out);
    if (example_cmd->parsed()) return cmd_example(e_number, e_variant, e_dir, e_seed);
    return 2;
  });
}
