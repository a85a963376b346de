#include "eqwalk/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace eqwalk::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {
    "mode",    "phi",    "phi_rational", "phi_named", "theta",     "steps",
    "dephase_p", "initial", "sampling",  "grid_points", "compare", "against",
    "threshold", "cap",   "width_t_max", "output"};
const std::set<std::string> kPhiKeys = {"phi", "phi_rational", "phi_named"};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail(join(where, key), "unknown key");
  }
}

double read_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "expected a finite number");
  return x;
}

long long read_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<long long>();
}

int read_count(const json& v, const std::string& field, int min_value) {
  const long long x = read_integer(v, field);
  if (x < min_value || x > 1'000'000) {
    fail(field, "expected an integer in [" + std::to_string(min_value) + ", 1000000]");
  }
  return static_cast<int>(x);
}

Complex read_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fail(field, "expected [re, im]");
  return {read_real(v[0], field + "[0]"), read_real(v[1], field + "[1]")};
}

// Reads exactly one of phi / phi_rational / phi_named from `obj`.
PhiSpec read_phi(const json& obj, const std::string& where) {
  int present = 0;
  for (const auto& key : kPhiKeys) present += obj.contains(key) ? 1 : 0;
  if (present != 1) {
    fail(where.empty() ? "phi" : where,
         "exactly one of phi, phi_rational, phi_named must be given");
  }
  if (obj.contains("phi")) return PhiSpec::radians(read_real(obj["phi"], join(where, "phi")));
  if (obj.contains("phi_named")) {
    const auto& v = obj["phi_named"];
    const std::string field = join(where, "phi_named");
    if (!v.is_string()) fail(field, "expected a string");
    if (v.get<std::string>() != "golden") fail(field, "unknown named field (known: golden)");
    return PhiSpec::golden();
  }
  const auto& v = obj["phi_rational"];
  const std::string field = join(where, "phi_rational");
  if (!v.is_array() || v.size() != 2) fail(field, "expected [n, m]");
  const long long n = read_integer(v[0], field + "[0]");
  const long long m = read_integer(v[1], field + "[1]");
  if (m <= 0) fail(field, "denominator must be positive");
  return PhiSpec::rational(n, m);
}

std::vector<int> read_steps(const json& v, bool allow_list) {
  std::vector<int> out;
  if (v.is_array()) {
    if (!allow_list) fail("steps", "this mode takes a single step count");
    if (v.empty()) fail("steps", "step list must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(read_count(v[i], "steps[" + std::to_string(i) + "]", 0));
    }
  } else {
    out.push_back(read_count(v, "steps", 0));
  }
  return out;
}

Mode parse_mode(const json& v) {
  if (!v.is_string()) fail("mode", "expected a string");
  const std::string s = v.get<std::string>();
  for (Mode m : {Mode::Evolve, Mode::Bands, Mode::Revival, Mode::Localize, Mode::Compare,
                 Mode::Discriminate, Mode::Sample}) {
    if (s == to_string(m)) return m;
  }
  fail("mode", "unknown mode '" + s + "'");
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Evolve: return "evolve";
    case Mode::Bands: return "bands";
    case Mode::Revival: return "revival";
    case Mode::Localize: return "localize";
    case Mode::Compare: return "compare";
    case Mode::Discriminate: return "discriminate";
    case Mode::Sample: return "sample";
  }
  return "?";
}

PhiSpec PhiSpec::radians(double value) {
  PhiSpec s;
  s.kind_ = Kind::Radians;
  s.radians_ = value;
  return s;
}

PhiSpec PhiSpec::rational(long long n, long long m) {
  PhiSpec s;
  s.kind_ = Kind::Rational;
  s.rational_ = RationalPhase(n, m);
  return s;
}

PhiSpec PhiSpec::golden() {
  PhiSpec s;
  s.kind_ = Kind::Golden;
  return s;
}

double PhiSpec::evaluate() const {
  switch (kind_) {
    case Kind::Radians: return radians_;
    case Kind::Rational: return rational_->phi();
    case Kind::Golden: {
      const long double golden_ratio = (std::sqrt(5.0L) + 1.0L) / 2.0L;
      return static_cast<double>(2.0L * std::numbers::pi_v<long double> / golden_ratio);
    }
  }
  return radians_;
}

const RationalPhase& PhiSpec::as_rational() const {
  if (kind_ != Kind::Rational) throw ConfigError("field 'phi': a rational field is required");
  return *rational_;
}

json PhiSpec::describe() const {
  json j;
  switch (kind_) {
    case Kind::Radians: j["spec"] = json{{"phi", radians_}}; break;
    case Kind::Rational:
      j["spec"] = json{{"phi_rational", {rational_->n(), rational_->m()}}};
      break;
    case Kind::Golden: j["spec"] = json{{"phi_named", "golden"}}; break;
  }
  j["radians"] = evaluate();
  return j;
}

RunConfig parse_config(const std::string& text, const Overrides& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config at " + locate(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                      e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  if (overrides.mode) doc["mode"] = *overrides.mode;
  if (overrides.out) doc["output"]["path"] = *overrides.out;
  if (overrides.format) doc["output"]["format"] = *overrides.format;
  if (overrides.seed) doc["sampling"]["seed"] = *overrides.seed;

  reject_unknown(doc, kTopLevelKeys, "");
  RunConfig cfg;
  cfg.source = doc;

  if (!doc.contains("mode")) fail("mode", "missing");
  cfg.mode = parse_mode(doc["mode"]);
  cfg.phi = read_phi(doc, "");

  cfg.theta = doc.contains("theta") ? read_real(doc["theta"], "theta") : std::numbers::pi / 4;
  if (doc.contains("dephase_p")) {
    cfg.dephase_p = read_real(doc["dephase_p"], "dephase_p");
    if (cfg.dephase_p < 0.0 || cfg.dephase_p > 1.0) fail("dephase_p", "must lie in [0, 1]");
  }

  const bool needs_steps = cfg.mode != Mode::Bands && cfg.mode != Mode::Discriminate;
  if (doc.contains("steps")) {
    cfg.steps = read_steps(doc["steps"], cfg.mode == Mode::Localize);
  } else if (needs_steps) {
    fail("steps", "missing");
  }
  if (cfg.mode == Mode::Compare && cfg.steps.front() < 1) fail("steps", "must be at least 1");

  if (doc.contains("initial")) {
    const auto& init = doc["initial"];
    if (!init.is_object()) fail("initial", "expected an object");
    reject_unknown(init, {"site", "spinor"}, "initial");
    if (init.contains("site")) {
      const long long site = read_integer(init["site"], "initial.site");
      if (std::abs(site) > 1'000'000) fail("initial.site", "out of range");
      cfg.initial_site = static_cast<int>(site);
    }
    if (init.contains("spinor")) {
      const auto& sp = init["spinor"];
      if (!sp.is_object()) fail("initial.spinor", "expected {up: [re, im], down: [re, im]}");
      reject_unknown(sp, {"up", "down"}, "initial.spinor");
      cfg.initial_spinor.up =
          sp.contains("up") ? read_complex(sp["up"], "initial.spinor.up") : Complex{};
      cfg.initial_spinor.down =
          sp.contains("down") ? read_complex(sp["down"], "initial.spinor.down") : Complex{};
      const double n2 = std::norm(cfg.initial_spinor.up) + std::norm(cfg.initial_spinor.down);
      if (std::abs(n2 - 1.0) > 1e-12) fail("initial.spinor", "must be normalized");
    }
  }

  if (doc.contains("sampling")) {
    const auto& s = doc["sampling"];
    if (!s.is_object()) fail("sampling", "expected an object");
    reject_unknown(s, {"shots", "seed", "detect_eff", "confidence"}, "sampling");
    Sampling smp;
    if (s.contains("shots")) {
      const long long shots = read_integer(s["shots"], "sampling.shots");
      if (shots < 1) fail("sampling.shots", "must be at least 1");
      smp.shots = static_cast<std::uint64_t>(shots);
    }
    if (s.contains("seed")) {
      if (!s["seed"].is_number_unsigned()) fail("sampling.seed", "expected a non-negative integer");
      smp.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("detect_eff")) {
      smp.detect_eff = read_real(s["detect_eff"], "sampling.detect_eff");
      if (!(smp.detect_eff > 0.0 && smp.detect_eff <= 1.0)) {
        fail("sampling.detect_eff", "must lie in (0, 1]");
      }
    }
    if (s.contains("confidence")) {
      smp.confidence = read_real(s["confidence"], "sampling.confidence");
      if (!(smp.confidence > 0.0 && smp.confidence < 1.0)) {
        fail("sampling.confidence", "must lie in (0, 1)");
      }
    }
    cfg.sampling = smp;
  }
  if (cfg.mode == Mode::Sample && (!cfg.sampling || cfg.sampling->shots == 0)) {
    fail("sampling.shots", "required in sample mode");
  }

  if (doc.contains("grid_points")) cfg.grid_points = read_count(doc["grid_points"], "grid_points", 2);
  if (cfg.mode == Mode::Bands && cfg.phi.kind() != PhiSpec::Kind::Rational) {
    fail("phi_rational", "bands mode requires a rational field");
  }

  if (doc.contains("compare")) {
    const auto& list = doc["compare"];
    if (!list.is_array()) fail("compare", "expected a list of field objects");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "compare[" + std::to_string(i) + "]";
      if (!list[i].is_object()) fail(where, "expected an object");
      reject_unknown(list[i], kPhiKeys, where);
      cfg.compare.push_back(read_phi(list[i], where));
    }
  }
  if (cfg.mode == Mode::Compare && cfg.compare.empty()) fail("compare", "required in compare mode");

  if (doc.contains("against")) {
    if (!doc["against"].is_object()) fail("against", "expected a field object");
    reject_unknown(doc["against"], kPhiKeys, "against");
    cfg.against = read_phi(doc["against"], "against");
  }
  if (cfg.mode == Mode::Discriminate && !cfg.against) fail("against", "required in discriminate mode");
  if (doc.contains("threshold")) {
    cfg.threshold = read_real(doc["threshold"], "threshold");
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) fail("threshold", "must lie in (0, 1)");
  }
  if (doc.contains("cap")) cfg.cap = read_count(doc["cap"], "cap", 1);
  if (doc.contains("width_t_max")) cfg.width_t_max = read_count(doc["width_t_max"], "width_t_max", 1);

  if (!doc.contains("output")) fail("output.path", "missing");
  const auto& out = doc["output"];
  if (!out.is_object()) fail("output", "expected an object");
  reject_unknown(out, {"path", "format"}, "output");
  if (!out.contains("path") || !out["path"].is_string() || out["path"].get<std::string>().empty()) {
    fail("output.path", "expected a non-empty string");
  }
  cfg.output_path = out["path"].get<std::string>();
  if (out.contains("format")) {
    if (!out["format"].is_string()) fail("output.format", "expected \"csv\" or \"json\"");
    const std::string f = out["format"].get<std::string>();
    if (f == "csv") {
      cfg.format = OutputFormat::Csv;
    } else if (f == "json") {
      cfg.format = OutputFormat::Json;
    } else {
      fail("output.format", "expected \"csv\" or \"json\"");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string config_hash(const RunConfig& config) {
  // Where and how results land does not change them.
  nlohmann::json physics = config.source;
  physics.erase("output");
  const std::string canonical = physics.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace eqwalk::cli
