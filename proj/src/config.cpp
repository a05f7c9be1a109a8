#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "spincal/cli.hpp"
#include "spincal/linalg.hpp"

namespace spincal::cli {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": '" + key + "' must be finite");
  return d;
}

double get_number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

int get_int(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!obj.at(key).is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

std::uint64_t get_seed(const json& obj, const std::string& where) {
  if (!obj.contains("seed")) return 1;
  const json& v = obj.at("seed");
  if (!v.is_number_unsigned()) throw ConfigError(where + ": 'seed' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

Vec get_vector(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + ": '" + key + "' must be an array of numbers");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + ": '" + key + "' must be an array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    if (!std::isfinite(out[static_cast<Eigen::Index>(i)]))
      throw ConfigError(where + ": '" + key + "' entries must be finite");
  }
  return out;
}

SpaceSpec parse_space(const json& obj, const std::string& where) {
  const std::string fam = obj.is_object() && obj.contains("family") ? get_string(obj, "family", where) : "";
  try {
    if (fam == "su") {
      require_keys(obj, where, {"family", "m", "n"});
      return SpaceSpec::su(get_int(obj, "m", where), get_int(obj, "n", where));
    }
    if (fam == "sl") {
      require_keys(obj, where, {"family", "k"});
      return SpaceSpec::sl(get_int(obj, "k", where));
    }
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": 'family' must be \"su\" or \"sl\"");
}

SpinlessModel parse_spinless(const json& obj, const std::string& where) {
  require_keys(obj, where, {"type", "family", "n", "k", "kappa", "x", "m"});
  const std::string fam = get_string(obj, "family", where);
  const double kappa = get_number(obj, "kappa", where);
  SpinlessModel m;
  if (fam == "A") {
    if (obj.contains("n") || obj.contains("m") || obj.contains("x"))
      throw ConfigError(where + ": the A family takes 'k' and 'kappa' only");
    m = SpinlessModel::sutherland(get_int(obj, "k", where), kappa);
  } else {
    if (obj.contains("k")) throw ConfigError(where + ": 'k' applies to the A family only");
    const int n = get_int(obj, "n", where);
    if (fam == "BC") {
      if (obj.contains("m")) throw ConfigError(where + ": 'm' applies to the D family only");
      m = SpinlessModel::bc(n, kappa, get_number(obj, "x", where));
    } else if (fam == "C") {
      if (obj.contains("m")) throw ConfigError(where + ": 'm' applies to the D family only");
      m = SpinlessModel::c(n, kappa, get_number(obj, "x", where));
    } else if (fam == "D") {
      if (obj.contains("x")) throw ConfigError(where + ": the D family has no 'x'");
      m = SpinlessModel::d(n, kappa, obj.contains("m") ? get_int(obj, "m", where) : 0);
    } else {
      throw ConfigError(where + ": 'family' must be one of BC, C, D, A");
    }
  }
  if (auto v = validate_params(m)) throw ConfigError(where + ": " + m.name() + ": " + *v);
  return m;
}

std::string default_name(std::size_t index, bool many) {
  return many ? "run" + std::to_string(index + 1) : "run";
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

RunConfig parse_run(const json& obj, std::size_t index, bool many) {
  const std::string where = many ? "runs[" + std::to_string(index) + "]" : "config";
  require_keys(obj, where,
               {"name", "space", "model", "seed", "q", "p", "t_end", "tol", "sample_dt", "method",
                "gauge", "monitors", "spectrum_x", "output"});
  RunConfig c;
  c.canonical = obj.dump();
  c.name = obj.contains("name") ? get_string(obj, "name", where) : default_name(index, many);
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError(where + ": 'name' must be a non-empty plain file stem");
  c.seed = get_seed(obj, where);

  if (!obj.contains("model")) throw ConfigError(where + ": missing 'model'");
  const json& model = obj.at("model");
  const std::string mw = where + ".model";
  const std::string type = model.is_object() ? get_string(model, "type", mw) : "";
  std::optional<SpaceSpec> space;
  if (obj.contains("space")) space = parse_space(obj.at("space"), where + ".space");

  if (type == "spinless") {
    c.source = SpinSource::Spinless;
    c.model = parse_spinless(model, mw);
    if (space && !(*space == c.model->space()))
      throw ConfigError(where + ": " + c.model->name() + " lives on " + c.model->space().name() +
                        ", but 'space' is " + space->name());
    space = c.model->space();
  } else if (type == "orbit") {
    require_keys(model, mw, {"type", "kappa_m", "kappa_n", "central_x", "kks_kappa"});
    c.source = SpinSource::Orbit;
    if (model.contains("kappa_m")) c.orbit.kappa_m = get_number(model, "kappa_m", mw);
    if (model.contains("kappa_n")) c.orbit.kappa_n = get_number(model, "kappa_n", mw);
    if (model.contains("kks_kappa")) c.orbit.kks_kappa = get_number(model, "kks_kappa", mw);
    c.orbit.central_x = get_number_or(model, "central_x", 0.0, mw);
  } else if (type == "random_spin") {
    require_keys(model, mw, {"type", "scale"});
    c.source = SpinSource::RandomSpin;
    c.spin_scale = get_number_or(model, "scale", 1.0, mw);
    if (!(c.spin_scale >= 0.0)) throw ConfigError(mw + ": 'scale' must be non-negative");
  } else if (type == "free") {
    require_keys(model, mw, {"type"});
    c.source = SpinSource::Free;
  } else {
    throw ConfigError(mw + ": 'type' must be one of spinless, orbit, random_spin, free");
  }
  if (!space) throw ConfigError(where + ": missing 'space'");
  c.space = *space;
  if (c.source == SpinSource::Orbit) {
    try {
      c.orbit.validate(*build_space(c.space));
    } catch (const DomainError& e) {
      throw ConfigError(mw + ": " + e.what());
    }
  }

  c.q = get_vector(obj, "q", where);
  c.p = obj.contains("p") ? get_vector(obj, "p", where) : Vec::Zero(c.q.size());
  const int cc = c.space.coord_count();
  if (c.q.size() != cc || c.p.size() != cc) {
    std::ostringstream os;
    os << where << ": " << c.space.name() << " needs " << cc << " entries in 'q' and 'p'";
    throw ConfigError(os.str());
  }

  c.t_end = get_number(obj, "t_end", where);
  if (!(c.t_end > 0.0)) throw ConfigError(where + ": 't_end' must be positive");
  c.tol = get_number_or(obj, "tol", 1e-10, where);
  if (!(c.tol > 0.0 && c.tol <= 1e-4)) throw ConfigError(where + ": 'tol' must lie in (0, 1e-4]");
  c.sample_dt = get_number_or(obj, "sample_dt", c.t_end / 100.0, where);
  if (!(c.sample_dt > 0.0)) throw ConfigError(where + ": 'sample_dt' must be positive");

  if (obj.contains("method")) {
    c.method = get_string(obj, "method", where);
    if (c.method != "direct" && c.method != "projection")
      throw ConfigError(where + ": 'method' must be \"direct\" or \"projection\"");
  }
  if (obj.contains("gauge")) {
    const std::string g = get_string(obj, "gauge", where);
    if (g == "thick") c.gauge = Gauge::Thick;
    else if (g == "frozen") c.gauge = Gauge::Frozen;
    else throw ConfigError(where + ": 'gauge' must be \"thick\" or \"frozen\"");
  }

  if (obj.contains("monitors")) {
    const json& ms = obj.at("monitors");
    if (!ms.is_array()) throw ConfigError(where + ": 'monitors' must be an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string w = where + ".monitors[" + std::to_string(i) + "]";
      require_keys(ms[i], w, {"class", "k", "x"});
      const std::string cls = get_string(ms[i], "class", w);
      InvariantSpec s;
      if (cls == "trace_power") s.kind = InvariantKind::TracePower;
      else if (cls == "block_invariant") s.kind = InvariantKind::BlockInvariant;
      else throw ConfigError(w + ": 'class' must be trace_power or block_invariant");
      s.k = get_int(ms[i], "k", w);
      s.x = get_number_or(ms[i], "x", 1.0, w);
      try {
        s.validate(*build_space(c.space));
      } catch (const DomainError& e) {
        throw ConfigError(w + ": " + e.what());
      }
      c.monitors.push_back(s);
    }
  } else {
    c.monitors = {InvariantSpec::trace_power(2, 0.5), InvariantSpec::trace_power(4, 1.0)};
    if (c.space.family == SpaceSpec::Family::SU) c.monitors.push_back(InvariantSpec::block_invariant(1, 0.5));
  }
  if (obj.contains("spectrum_x")) {
    const Vec xs = get_vector(obj, "spectrum_x", where);
    c.spectrum_x.assign(xs.data(), xs.data() + xs.size());
  }

  c.trajectory_path = c.name + ".trajectory.csv";
  c.report_path = c.name + ".report.json";
  c.spectrum_path = c.name + ".spectrum.csv";
  c.spectrum_report_path = c.name + ".spectrum.json";
  if (obj.contains("output")) {
    const json& o = obj.at("output");
    const std::string w = where + ".output";
    require_keys(o, w, {"trajectory", "report", "spectrum", "spectrum_report"});
    if (o.contains("trajectory")) c.trajectory_path = get_string(o, "trajectory", w);
    if (o.contains("report")) c.report_path = get_string(o, "report", w);
    if (o.contains("spectrum")) c.spectrum_path = get_string(o, "spectrum", w);
    if (o.contains("spectrum_report")) c.spectrum_report_path = get_string(o, "spectrum_report", w);
  }

  // Chamber and spin data are part of the contract; surface them now.
  initial_point(c, *build_space(c.space));
  return c;
}

std::vector<RunConfig> parse_runs(const json& doc) {
  std::vector<RunConfig> out;
  if (doc.is_object() && doc.contains("runs")) {
    require_keys(doc, "config", {"runs"});
    const json& runs = doc.at("runs");
    if (!runs.is_array() || runs.empty()) throw ConfigError("config: 'runs' must be a non-empty array");
    for (std::size_t i = 0; i < runs.size(); ++i) out.push_back(parse_run(runs[i], i, true));
  } else {
    out.push_back(parse_run(doc));
  }
  std::set<std::string> paths;
  for (const auto& r : out)
    for (const auto& p : {r.trajectory_path, r.report_path, r.spectrum_path, r.spectrum_report_path})
      if (!paths.insert(p).second) throw ConfigError("config: output path '" + p + "' is used twice");
  return out;
}

PhasePoint initial_point(const RunConfig& cfg, const SymmetricSpace& space) {
  try {
    Mat xi = space.zero();
    switch (cfg.source) {
      case SpinSource::Spinless: xi = model_spin(*cfg.model, space).xi; break;
      case SpinSource::Orbit: xi = slice_orbit_point(space, cfg.orbit, cfg.seed).xi; break;
      case SpinSource::RandomSpin: {
        std::mt19937_64 rng(cfg.seed);
        xi = random_slice_spin(space, rng, cfg.spin_scale).xi;
        break;
      }
      case SpinSource::Free: break;
    }
    return make_phase_point(space, CartanPoint(cfg.q), CartanPoint(cfg.p), xi);
  } catch (const DomainError& e) {
    throw ConfigError(cfg.name + ": " + e.what());
  } catch (const WallError& e) {
    throw ConfigError(cfg.name + ": " + e.what());
  }
}

VerifyConfig parse_verify(const json& doc) {
  require_keys(doc, "verify config", {"spaces", "bc_cases", "samples", "seed"});
  VerifyConfig v;
  v.canonical = doc.dump();
  if (!doc.contains("spaces") || !doc.at("spaces").is_array() || doc.at("spaces").empty())
    throw ConfigError("verify config: 'spaces' must be a non-empty array");
  const json& sp = doc.at("spaces");
  for (std::size_t i = 0; i < sp.size(); ++i)
    v.spaces.push_back(parse_space(sp[i], "spaces[" + std::to_string(i) + "]"));
  if (doc.contains("bc_cases")) {
    const json& bc = doc.at("bc_cases");
    if (!bc.is_array()) throw ConfigError("verify config: 'bc_cases' must be an array");
    for (std::size_t i = 0; i < bc.size(); ++i) {
      const std::string w = "bc_cases[" + std::to_string(i) + "]";
      require_keys(bc[i], w, {"n", "kappa", "x"});
      v.bc_cases.push_back({get_int(bc[i], "n", w), get_number(bc[i], "kappa", w), get_number(bc[i], "x", w)});
    }
  }
  if (doc.contains("samples")) {
    v.samples = get_int(doc, "samples", "verify config");
    if (v.samples < 1) throw ConfigError("verify config: 'samples' must be positive");
  }
  v.seed = get_seed(doc, "verify config");
  return v;
}

// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const SymmetricSpace& space, const Trajectory& traj) {
  const int c = space.coord_count();
  std::string s = "t";
  for (int i = 1; i <= c; ++i) s += ",q" + std::to_string(i);
  for (int i = 1; i <= c; ++i) s += ",p" + std::to_string(i);
  s += ",H\n";
  for (std::size_t r = 0; r < traj.size(); ++r) {
    const PhasePoint& pt = traj.points[r];
    s += format_double(traj.t[r]);
    for (int i = 0; i < c; ++i) s += "," + format_double(pt.q[i]);
    for (int i = 0; i < c; ++i) s += "," + format_double(pt.p[i]);
    s += "," + format_double(hamiltonian(space, pt)) + "\n";
  }
  return s;
}

std::string spectrum_csv(const SymmetricSpace& space, const Trajectory& traj, const std::vector<double>& xs) {
  std::string s = "t,x,index,re,im\n";
  for (std::size_t r = 0; r < traj.size(); ++r) {
    for (double x : xs) {
      const auto ev = linalg::sorted_spectrum(lax(space, traj.points[r], x));
      for (std::size_t i = 0; i < ev.size(); ++i)
        s += format_double(traj.t[r]) + "," + format_double(x) + "," + std::to_string(i) + "," +
             format_double(ev[i].real()) + "," + format_double(ev[i].imag()) + "\n";
    }
  }
  return s;
}

}  // namespace spincal::cli
