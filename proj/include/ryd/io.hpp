#pragma once

// File formats: programs, noise parameter sets, task results, and unit-disk
// graphs are stored as JSON; tabular analysis output (correlation matrices,
// fit parameters, site densities, annealing scans) is emitted as CSV.
//
// Serialization is deterministic: objects are written with sorted keys
// (nlohmann::json's default ordered map) and doubles use the library's
// shortest-round-trip formatting, so serializing the same in-memory value
// always produces byte-identical output and a serialize/deserialize cycle
// is lossless.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ryd/fit.hpp"
#include "ryd/geometry.hpp"
#include "ryd/mis.hpp"
#include "ryd/noise.hpp"
#include "ryd/program.hpp"
#include "ryd/sampler.hpp"
#include "ryd/udg.hpp"
#include "ryd/validate.hpp"

namespace ryd {

using nlohmann::json;

// Thrown when a document parses as JSON but does not describe a valid
// object of the requested kind (missing keys, wrong types, bad values).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline double require_number(const json& j, const char* context) {
  if (!j.is_number()) {
    throw FormatError(std::string(context) + ": expected a number, got " +
                      std::string(j.type_name()));
  }
  return j.get<double>();
}

inline const json& require_key(const json& j, const char* key,
                               const char* context) {
  if (!j.is_object()) {
    throw FormatError(std::string(context) + ": expected an object, got " +
                      std::string(j.type_name()));
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string(context) + ": missing key \"" + key + "\"");
  }
  return *it;
}

// Parses a list of [t, value] pairs into separate time/value vectors.
inline void parse_knot_list(const json& j, const char* context,
                            std::vector<double>& times,
                            std::vector<double>& values) {
  if (!j.is_array()) {
    throw FormatError(std::string(context) + ": expected a list of [t, value] pairs");
  }
  times.clear();
  values.clear();
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw FormatError(std::string(context) + ": each entry must be a [t, value] pair");
    }
    times.push_back(require_number(pair[0], context));
    values.push_back(require_number(pair[1], context));
  }
}

inline json knot_list_to_json(const std::vector<double>& times,
                              const std::vector<double>& values) {
  json out = json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.push_back(json::array({times[i], values[i]}));
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

inline json program_to_json(const AnalogProgram& prog) {
  json j;
  json reg = json::array();
  for (const auto& site : prog.reg.sites) {
    json js;
    js["x"] = site.x;
    js["y"] = site.y;
    js["filled"] = site.filled;
    reg.push_back(std::move(js));
  }
  j["register"] = std::move(reg);

  std::vector<double> t, v;
  for (const auto& k : prog.omega.knots) {
    t.push_back(k.t);
    v.push_back(k.value);
  }
  j["omega"] = detail::knot_list_to_json(t, v);

  t.clear();
  v.clear();
  for (const auto& k : prog.delta.knots) {
    t.push_back(k.t);
    v.push_back(k.value);
  }
  j["delta"] = detail::knot_list_to_json(t, v);

  // The phase is piecewise constant: each [t, value] entry means "phi equals
  // value from this time until the next entry's time".
  t.clear();
  v.clear();
  for (const auto& seg : prog.phase.segments) {
    t.push_back(seg.start);
    v.push_back(seg.value);
  }
  j["phase"] = detail::knot_list_to_json(t, v);

  j["duration"] = prog.duration;
  return j;
}

inline AnalogProgram program_from_json(const json& j) {
  const json& jreg = detail::require_key(j, "register", "program");
  if (!jreg.is_array()) {
    throw FormatError("program: \"register\" must be a list of sites");
  }
  std::vector<Site> sites;
  for (const auto& js : jreg) {
    Site s;
    s.x = detail::require_number(detail::require_key(js, "x", "register site"),
                                 "register site x");
    s.y = detail::require_number(detail::require_key(js, "y", "register site"),
                                 "register site y");
    const json& jf = detail::require_key(js, "filled", "register site");
    if (!jf.is_boolean()) {
      throw FormatError("register site: \"filled\" must be a boolean");
    }
    s.filled = jf.get<bool>();
    sites.push_back(s);
  }

  std::vector<double> t, v;
  auto to_knots = [&]() {
    std::vector<WaveformKnot> ks;
    for (std::size_t i = 0; i < t.size(); ++i) ks.push_back({t[i], v[i]});
    return ks;
  };
  detail::parse_knot_list(detail::require_key(j, "omega", "program"),
                          "program omega", t, v);
  Waveform omega(to_knots());

  detail::parse_knot_list(detail::require_key(j, "delta", "program"),
                          "program delta", t, v);
  Waveform delta(to_knots());

  detail::parse_knot_list(detail::require_key(j, "phase", "program"),
                          "program phase", t, v);
  if (t.empty()) {
    throw FormatError("program phase: needs at least one [t, value] entry");
  }
  std::vector<PhaseSegment> segs;
  for (std::size_t i = 0; i < t.size(); ++i) segs.push_back({t[i], v[i]});
  PhaseWaveform phase(std::move(segs));

  double duration = detail::require_number(
      detail::require_key(j, "duration", "program"), "program duration");

  AnalogProgram prog;
  prog.reg = Register{sites};
  prog.omega = std::move(omega);
  prog.delta = std::move(delta);
  prog.phase = std::move(phase);
  prog.duration = duration;
  return prog;
}

// ---------------------------------------------------------------------------
// Noise parameters
// ---------------------------------------------------------------------------

inline json noise_to_json(const NoiseParams& p) {
  json j;
  j["sigma_pos"] = p.sigma_pos;
  j["delta_pos_sys"] = p.delta_pos_sys;
  j["rabi_inhom_rel"] = p.rabi_inhom_rel;
  j["det_inhom_rms"] = p.det_inhom_rms;
  j["det_sys"] = p.det_sys;
  j["det_shot_rms"] = p.det_shot_rms;
  j["rabi_shot_rel"] = p.rabi_shot_rel;
  j["eps_fill"] = p.eps_fill;
  j["eps_det_fn"] = p.eps_det_fn;
  j["eps_det_fp"] = p.eps_det_fp;
  j["eps_det_gnd"] = p.eps_det_gnd;
  j["eps_det_ryd"] = p.eps_det_ryd;
  return j;
}

inline NoiseParams noise_from_json(const json& j) {
  NoiseParams p;
  auto field = [&](const char* key, double& slot) {
    slot = detail::require_number(detail::require_key(j, key, "noise"), key);
  };
  field("sigma_pos", p.sigma_pos);
  field("delta_pos_sys", p.delta_pos_sys);
  field("rabi_inhom_rel", p.rabi_inhom_rel);
  field("det_inhom_rms", p.det_inhom_rms);
  field("det_sys", p.det_sys);
  field("det_shot_rms", p.det_shot_rms);
  field("rabi_shot_rel", p.rabi_shot_rel);
  field("eps_fill", p.eps_fill);
  field("eps_det_fn", p.eps_det_fn);
  field("eps_det_fp", p.eps_det_fp);
  field("eps_det_gnd", p.eps_det_gnd);
  field("eps_det_ryd", p.eps_det_ryd);
  return p;
}

// ---------------------------------------------------------------------------
// Task results
// ---------------------------------------------------------------------------

inline json result_to_json(const TaskResult& r) {
  json j;
  j["program"] = program_to_json(r.program);
  // Noise is null when the task ran noiseless, so a result file always
  // records unambiguously how it was produced.
  j["noise"] = r.noise_enabled ? noise_to_json(r.noise) : json(nullptr);
  j["seed"] = r.seed;
  json shots = json::array();
  for (const auto& shot : r.shots) {
    shots.push_back({{"pre_sequence", shot.pre_sequence},
                     {"post_sequence", shot.post_sequence}});
  }
  j["shots"] = std::move(shots);
  j["version"] = r.version;
  return j;
}

inline TaskResult result_from_json(const json& j) {
  TaskResult r;
  r.program = program_from_json(detail::require_key(j, "program", "result"));
  const json& jn = detail::require_key(j, "noise", "result");
  if (jn.is_null()) {
    r.noise_enabled = false;
    r.noise = NoiseParams{};
  } else {
    r.noise_enabled = true;
    r.noise = noise_from_json(jn);
  }
  const json& jseed = detail::require_key(j, "seed", "result");
  if (!jseed.is_number_unsigned() && !jseed.is_number_integer()) {
    throw FormatError("result: \"seed\" must be an integer");
  }
  r.seed = jseed.get<std::uint64_t>();

  const json& jshots = detail::require_key(j, "shots", "result");
  if (!jshots.is_array() || jshots.empty()) {
    throw FormatError("result: \"shots\" must be a non-empty list");
  }
  const std::size_t n_sites = r.program.reg.sites.size();
  auto parse_bits = [&](const json& jb, const char* what) {
    if (!jb.is_array() || jb.size() != n_sites) {
      throw FormatError(std::string("result shot: \"") + what + "\" must list one 0/1 entry per site");
    }
    std::vector<std::uint8_t> bits;
    for (const auto& b : jb) {
      if (!b.is_number_integer() && !b.is_number_unsigned()) {
        throw FormatError(std::string("result shot: \"") + what + "\" entries must be 0 or 1");
      }
      auto val = b.get<std::int64_t>();
      if (val != 0 && val != 1) {
        throw FormatError(std::string("result shot: \"") + what + "\" entries must be 0 or 1");
      }
      bits.push_back(static_cast<std::uint8_t>(val));
    }
    return bits;
  };
  for (const auto& js : jshots) {
    ShotRecord rec;
    rec.pre_sequence = parse_bits(
        detail::require_key(js, "pre_sequence", "result shot"), "pre_sequence");
    rec.post_sequence = parse_bits(
        detail::require_key(js, "post_sequence", "result shot"), "post_sequence");
    for (std::size_t i = 0; i < n_sites; ++i) {
      if (rec.pre_sequence[i] == 0 && rec.post_sequence[i] != 0) {
        throw FormatError("result shot: a site absent before the sequence cannot be present after it");
      }
    }
    r.shots.push_back(std::move(rec));
  }

  const json& jver = detail::require_key(j, "version", "result");
  if (!jver.is_string()) {
    throw FormatError("result: \"version\" must be a string");
  }
  r.version = jver.get<std::string>();
  return r;
}

// Canonical byte representations. serialize() output is byte-identical for
// equal in-memory results; deserialize(serialize(r)) reproduces r exactly.
inline std::string serialize(const TaskResult& r) {
  return result_to_json(r).dump() + "\n";
}

inline TaskResult deserialize(const std::string& bytes) {
  return result_from_json(json::parse(bytes));
}

// ---------------------------------------------------------------------------
// Unit-disk graphs
// ---------------------------------------------------------------------------

inline json graph_to_json(const UnitDiskGraph& g) {
  json j;
  json pos = json::array();
  for (const auto& p : g.positions) {
    pos.push_back(json::array({p.x, p.y}));
  }
  j["positions"] = std::move(pos);
  j["radius"] = g.radius;
  return j;
}

inline UnitDiskGraph graph_from_json(const json& j) {
  const json& jpos = detail::require_key(j, "positions", "graph");
  if (!jpos.is_array()) {
    throw FormatError("graph: \"positions\" must be a list of [x, y] pairs");
  }
  std::vector<Vec2> positions;
  for (const auto& jp : jpos) {
    if (!jp.is_array() || jp.size() != 2) {
      throw FormatError("graph: each position must be an [x, y] pair");
    }
    positions.push_back({detail::require_number(jp[0], "graph position"),
                         detail::require_number(jp[1], "graph position")});
  }
  double radius = detail::require_number(
      detail::require_key(j, "radius", "graph"), "graph radius");
  if (radius <= 0) {
    throw FormatError("graph: \"radius\" must be positive");
  }
  return UnitDiskGraph{std::move(positions), radius};
}

// ---------------------------------------------------------------------------
// Validation reports
// ---------------------------------------------------------------------------

inline json validation_report_to_json(const ValidationReport& rep) {
  json j;
  auto findings_to_json = [](const std::vector<Finding>& fs) {
    json out = json::array();
    for (const auto& f : fs) {
      json jf;
      jf["rule"] = f.rule;
      jf["message"] = f.message;
      if (f.element >= 0) jf["element"] = f.element;
      out.push_back(std::move(jf));
    }
    return out;
  };
  j["ok"] = rep.ok();
  j["errors"] = findings_to_json(rep.errors);
  j["warnings"] = findings_to_json(rep.warnings);
  return j;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

namespace detail {

// Fixed decimal formatting for CSV: enough digits for analysis, stable
// across writes of the same values.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

// One row per scan point; the final column is blank when no exact optimum
// is available for the instance.
inline std::string mis_reports_to_csv(const std::vector<MisReport>& reports) {
  std::ostringstream out;
  out << "delta_f,avg_rydberg,avg_repaired,avg_maximal,best,exact_mis_if_known\n";
  for (const auto& r : reports) {
    out << detail::csv_num(r.delta_f) << ',' << detail::csv_num(r.avg_rydberg)
        << ',' << detail::csv_num(r.avg_repaired) << ','
        << detail::csv_num(r.avg_maximal) << ',' << r.best << ',';
    if (r.exact) out << *r.exact;
    out << '\n';
  }
  return out.str();
}

// Square matrix as plain rows of comma-separated numbers.
inline std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << detail::csv_num(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

inline std::string fit_to_csv(const FitResult& f) {
  std::ostringstream out;
  out << "parameter,value\n";
  out << "amplitude," << detail::csv_num(f.A) << '\n';
  out << "omega," << detail::csv_num(f.Omega) << '\n';
  out << "phi," << detail::csv_num(f.phi) << '\n';
  out << "tau,";
  if (f.tau_unbounded()) {
    out << "inf";
  } else {
    out << detail::csv_num(f.tau);
  }
  out << '\n';
  out << "offset," << detail::csv_num(f.B) << '\n';
  out << "residual_rms," << detail::csv_num(f.residual_rms) << '\n';
  return out.str();
}

inline std::string density_to_csv(const Register& reg,
                                  const std::vector<double>& density) {
  if (density.size() != reg.sites.size()) {
    throw std::invalid_argument("density_to_csv: one value per site required");
  }
  std::ostringstream out;
  out << "site,x,y,density\n";
  for (std::size_t i = 0; i < density.size(); ++i) {
    out << i << ',' << detail::csv_num(reg.sites[i].x) << ','
        << detail::csv_num(reg.sites[i].y) << ','
        << detail::csv_num(density[i]) << '\n';
  }
  return out.str();
}

inline std::string displacement_correlations_to_csv(
    const std::map<std::pair<int, int>, double>& corr) {
  std::ostringstream out;
  out << "dx,dy,correlation\n";
  for (const auto& [disp, value] : corr) {
    out << disp.first << ',' << disp.second << ',' << detail::csv_num(value)
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Whole-file helpers
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::runtime_error("error while reading: " + path);
  }
  return buf.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << content;
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("error while writing: " + path);
  }
}

inline json parse_json_file(const std::string& path) {
  return json::parse(read_text_file(path));
}

// Pretty-printed JSON for files meant to be read by people (programs,
// noise parameter sets, graphs). Results use serialize() instead: compact,
// since shot lists dominate the size.
inline void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ryd
