// SPDX-License-Identifier: Apache-2.0
#include "irssec/app/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace irssec::app {
namespace {

using nlohmann::json;

// Line of every key path in the source ("radio.P_dbm", "scenario.geometry.bob").
std::map<std::string, int> key_lines(const std::string& text) {
  struct Ctx {
    bool object;
    std::string path;
    bool want_key = true;
    int index = 0;
  };
  std::map<std::string, int> lines;
  std::vector<Ctx> stack;
  std::string pending;  // path of the value about to start
  int line = 1;
  auto child = [&](const Ctx& c, const std::string& key) { return c.path.empty() ? key : c.path + "." + key; };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '\n') {
      ++line;
    } else if (ch == '"') {
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().want_key) {
        pending = child(stack.back(), s);
        lines.emplace(pending, line);
        stack.back().want_key = false;
      }
    } else if (ch == '{' || ch == '[') {
      std::string path = pending;
      if (!stack.empty() && !stack.back().object) path = stack.back().path + "[" + std::to_string(stack.back().index) + "]";
      stack.push_back({ch == '{', path});
    } else if (ch == '}' || ch == ']') {
      if (!stack.empty()) stack.pop_back();
    } else if (ch == ',' && !stack.empty()) {
      if (stack.back().object)
        stack.back().want_key = true;
      else
        ++stack.back().index;
    }
  }
  return lines;
}

class Reader {
 public:
  Reader(const json& doc, const std::map<std::string, int>& lines, std::string source)
      : lines_(lines), source_(std::move(source)) {
    if (!doc.is_object()) throw ConfigError(source_ + ": top level must be a JSON object", "", 1);
    doc_ = &doc;
  }

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    const auto it = lines_.find(field);
    const int line = it == lines_.end() ? 0 : it->second;
    std::ostringstream os;
    os << source_;
    if (line > 0) os << ":" << line;
    os << ": " << field << ": " << msg;
    throw ConfigError(os.str(), field, line);
  }

  // Object at `path` ("" is the root), or nullptr when absent.
  const json* object(const std::string& path) {
    const json* node = find(path);
    if (node && !node->is_object()) fail(path, "expected an object");
    if (node) objects_.push_back(path);
    return node;
  }

  template <class T>
  void get(const std::string& path, T& out) {
    const json* node = find(path);
    if (!node) return;
    used_.insert(path);
    if constexpr (std::is_same_v<T, bool>) {
      if (!node->is_boolean()) fail(path, "expected true or false");
      out = node->get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!node->is_number_integer()) fail(path, "expected an integer");
      if (std::is_unsigned_v<T> && !node->is_number_unsigned()) fail(path, "expected a nonnegative integer");
      if (node->is_number_unsigned()) {
        const auto v = node->get<std::uint64_t>();
        if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) fail(path, "integer out of range");
        out = static_cast<T>(v);
      } else {
        const auto v = node->get<std::int64_t>();
        if (v < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
            v > static_cast<std::int64_t>(std::numeric_limits<T>::max()))
          fail(path, "integer out of range");
        out = static_cast<T>(v);
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!node->is_number()) fail(path, "expected a number");
      out = node->get<double>();
    } else {
      if (!node->is_string()) fail(path, "expected a string");
      out = node->get<std::string>();
    }
  }

  const json* raw(const std::string& path) {
    const json* node = find(path);
    if (node) used_.insert(path);
    return node;
  }

  void point(const std::string& path, chansim::Point2& p) {
    const json* node = raw(path);
    if (!node) return;
    if (!node->is_array() || node->size() != 2 || !(*node)[0].is_number() || !(*node)[1].is_number())
      fail(path, "expected [x, y] in meters");
    p = {(*node)[0].get<double>(), (*node)[1].get<double>()};
  }

  // Every key of every visited object must have been consumed.
  void reject_unknown() const {
    for (const auto& obj : objects_) {
      const json* node = find(obj);
      for (const auto& [key, value] : node->items()) {
        const std::string path = obj.empty() ? key : obj + "." + key;
        if (!used_.count(path) && std::find(objects_.begin(), objects_.end(), path) == objects_.end())
          fail(path, "unknown key");
      }
    }
  }

 private:
  const json* find(const std::string& path) const {
    const json* node = doc_;
    if (path.empty()) return node;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!node->is_object()) return nullptr;
      const auto it = node->find(key);
      if (it == node->end()) return nullptr;
      node = &*it;
      if (dot == std::string::npos) return node;
      start = dot + 1;
    }
  }

  const json* doc_ = nullptr;
  const std::map<std::string, int>& lines_;
  std::string source_;
  std::set<std::string> used_;
  std::vector<std::string> objects_;
};

model::PhaseDomain read_domain(Reader& r, const std::string& path, model::PhaseDomain fallback) {
  const json* node = r.raw(path);
  if (!node) return fallback;
  if (node->is_string() && node->get<std::string>() == "continuous") return model::PhaseDomain::continuous();
  if (!node->is_number_integer()) r.fail(path, "expected an integer level count >= 2 or \"continuous\"");
  const auto l = node->get<std::int64_t>();
  if (l < 2 || l > 1 << 20) r.fail(path, "level count must be >= 2");
  return model::PhaseDomain::discrete(static_cast<int>(l));
}

json domain_json(model::PhaseDomain d) { return d.is_discrete() ? json(d.levels()) : json("continuous"); }

json point_json(chansim::Point2 p) { return json::array({p.x, p.y}); }

std::string projection_name(gda::ProjectionMode m) {
  return m == gda::ProjectionMode::kElementwise ? "elementwise" : "linearized";
}
std::string gradient_name(gda::GradientVariant g) {
  return g == gda::GradientVariant::kConsistent ? "consistent" : "printed";
}
std::string beamformer_name(GameBeamformer b) { return b == GameBeamformer::kPerPair ? "per_pair" : "from_ao"; }

void check(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + field + ": " + msg, field);
}

}  // namespace

std::string to_string(Solver s) {
  switch (s) {
    case Solver::kAo: return "ao";
    case Solver::kGda: return "gda";
    case Solver::kGame: return "game";
    case Solver::kAll: return "all";
  }
  return "all";
}

Solver parse_solver(const std::string& name) {
  for (Solver s : {Solver::kAo, Solver::kGda, Solver::kGame, Solver::kAll})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown solver \"" + name + "\" (expected ao, gda, game or all)", "solver");
}

model::RadioParams RadioSpec::params() const {
  const double noise = model::noise_power(noise_density_dbm_hz, bandwidth_hz);
  return {model::dbm_to_watt(P_dbm), noise, noise};
}

void ExperimentConfig::validate() const {
  const auto& s = scenario;
  check(s.M >= 1, "scenario.M", "must be >= 1");
  check(s.N_B >= 0, "scenario.N_B", "must be >= 0");
  check(s.N_E >= 0, "scenario.N_E", "must be >= 0");
  check(s.direct_exponent >= 0.0 && std::isfinite(s.direct_exponent), "scenario.direct_exponent", "must be >= 0");
  check(s.reflected_exponent >= 0.0 && std::isfinite(s.reflected_exponent), "scenario.reflected_exponent",
        "must be >= 0");
  check(std::isfinite(s.reference_loss_db), "scenario.reference_loss_db", "must be finite");
  check(s.correlation_rho >= 0.0 && s.correlation_rho < 1.0, "scenario.correlation_rho", "must lie in [0, 1)");
  try {
    s.geometry.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("config: scenario.geometry: ") + e.what(), "scenario.geometry");
  }
  check(std::isfinite(radio.P_dbm), "radio.P_dbm", "must be finite");
  check(radio.bandwidth_hz > 0.0 && std::isfinite(radio.bandwidth_hz), "radio.bandwidth_hz", "must be > 0");
  check(std::isfinite(radio.noise_density_dbm_hz), "radio.noise_density_dbm_hz", "must be finite");

  check(ao.max_iters >= 1, "ao.max_iters", "must be >= 1");
  check(ao.tolerance > 0.0, "ao.tolerance", "must be > 0");
  check(ao.randomization_count >= 1, "ao.randomization_count", "must be >= 1");
  check(gda.step_size > 0.0 && std::isfinite(gda.step_size), "gda.step_size", "must be > 0");
  check(gda.max_iters >= 1, "gda.max_iters", "must be >= 1");
  check(gda.tolerance > 0.0, "gda.tolerance", "must be > 0");
  check(gda.max_halvings >= 0, "gda.max_halvings", "must be >= 0");
  check(gda_init_randomization_count >= 1, "gda.init_randomization_count", "must be >= 1");

  if (solver == Solver::kGame || solver == Solver::kAll) {
    check(domain_B.is_discrete(), "domains.L_B", "the game needs a discrete domain");
    check(domain_E.is_discrete(), "domains.L_E", "the game needs a discrete domain");
    check(s.N_B >= 1, "scenario.N_B", "the game needs at least one element per surface");
    check(s.N_E >= 1, "scenario.N_E", "the game needs at least one element per surface");
    check(game.strategy_cap >= 1, "game.strategy_cap", "must be >= 1");
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  const auto& s = cfg.scenario;
  const auto& g = s.geometry;
  return {
      {"seed", s.seed},
      {"solver", to_string(cfg.solver)},
      {"scenario",
       {{"M", s.M},
        {"N_B", s.N_B},
        {"N_E", s.N_E},
        {"direct_exponent", s.direct_exponent},
        {"reflected_exponent", s.reflected_exponent},
        {"reference_loss_db", s.reference_loss_db},
        {"correlation_rho", s.correlation_rho},
        {"geometry",
         {{"alice", point_json(g.alice)},
          {"bob", point_json(g.bob)},
          {"eve", point_json(g.eve)},
          {"irs_bob", point_json(g.irs_bob)},
          {"irs_eve", point_json(g.irs_eve)}}}}},
      {"radio",
       {{"P_dbm", cfg.radio.P_dbm},
        {"bandwidth_hz", cfg.radio.bandwidth_hz},
        {"noise_density_dbm_hz", cfg.radio.noise_density_dbm_hz}}},
      {"domains", {{"L_B", domain_json(cfg.domain_B)}, {"L_E", domain_json(cfg.domain_E)}}},
      {"ao",
       {{"max_iters", cfg.ao.max_iters},
        {"tolerance", cfg.ao.tolerance},
        {"randomization_count", cfg.ao.randomization_count},
        {"incumbent_protection", cfg.ao.incumbent_protection}}},
      {"gda",
       {{"step_size", cfg.gda.step_size},
        {"max_iters", cfg.gda.max_iters},
        {"tolerance", cfg.gda.tolerance},
        {"projection", projection_name(cfg.gda.projection)},
        {"gradient", gradient_name(cfg.gda.gradient)},
        {"backtracking", cfg.gda.backtracking},
        {"max_halvings", cfg.gda.max_halvings},
        {"init_randomization_count", cfg.gda_init_randomization_count}}},
      {"game",
       {{"strategy_cap", cfg.game.strategy_cap},
        {"beamformer", beamformer_name(cfg.game.beamformer)},
        {"threads", cfg.game.threads}}},
      {"output", {{"timing", cfg.timing}}},
  };
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character
    const std::size_t at = e.byte == 0 ? 0 : std::min(e.byte - 1, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n'));
    const std::size_t bol = text.rfind('\n', at == 0 ? 0 : at - 1);
    const std::size_t col = bol == std::string::npos ? at + 1 : at - bol;
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": JSON parse error";
    const std::string what = e.what();
    const auto colon = what.rfind(": ");
    if (colon != std::string::npos) os << ": " << what.substr(colon + 2);
    throw ConfigError(os.str(), "", line);
  }

  const auto lines = key_lines(text);
  Reader r(doc, lines, source);
  ExperimentConfig c;
  r.object("");

  r.get("seed", c.scenario.seed);
  std::string solver;
  r.get("solver", solver);
  if (!solver.empty()) {
    try {
      c.solver = parse_solver(solver);
    } catch (const ConfigError&) {
      r.fail("solver", "expected one of ao, gda, game, all");
    }
  }

  if (r.object("scenario")) {
    auto& s = c.scenario;
    r.get("scenario.M", s.M);
    r.get("scenario.N_B", s.N_B);
    r.get("scenario.N_E", s.N_E);
    r.get("scenario.direct_exponent", s.direct_exponent);
    r.get("scenario.reflected_exponent", s.reflected_exponent);
    r.get("scenario.reference_loss_db", s.reference_loss_db);
    r.get("scenario.correlation_rho", s.correlation_rho);
    if (r.object("scenario.geometry")) {
      r.point("scenario.geometry.alice", s.geometry.alice);
      r.point("scenario.geometry.bob", s.geometry.bob);
      r.point("scenario.geometry.eve", s.geometry.eve);
      r.point("scenario.geometry.irs_bob", s.geometry.irs_bob);
      r.point("scenario.geometry.irs_eve", s.geometry.irs_eve);
    }
  }
  if (r.object("radio")) {
    r.get("radio.P_dbm", c.radio.P_dbm);
    r.get("radio.bandwidth_hz", c.radio.bandwidth_hz);
    r.get("radio.noise_density_dbm_hz", c.radio.noise_density_dbm_hz);
  }
  if (r.object("domains")) {
    c.domain_B = read_domain(r, "domains.L_B", c.domain_B);
    c.domain_E = read_domain(r, "domains.L_E", c.domain_E);
  }
  if (r.object("ao")) {
    r.get("ao.max_iters", c.ao.max_iters);
    r.get("ao.tolerance", c.ao.tolerance);
    r.get("ao.randomization_count", c.ao.randomization_count);
    r.get("ao.incumbent_protection", c.ao.incumbent_protection);
  }
  if (r.object("gda")) {
    r.get("gda.step_size", c.gda.step_size);
    r.get("gda.max_iters", c.gda.max_iters);
    r.get("gda.tolerance", c.gda.tolerance);
    r.get("gda.backtracking", c.gda.backtracking);
    r.get("gda.max_halvings", c.gda.max_halvings);
    r.get("gda.init_randomization_count", c.gda_init_randomization_count);
    std::string mode;
    r.get("gda.projection", mode);
    if (mode == "elementwise")
      c.gda.projection = gda::ProjectionMode::kElementwise;
    else if (mode == "linearized")
      c.gda.projection = gda::ProjectionMode::kLinearized;
    else if (!mode.empty())
      r.fail("gda.projection", "expected \"elementwise\" or \"linearized\"");
    std::string grad;
    r.get("gda.gradient", grad);
    if (grad == "consistent")
      c.gda.gradient = gda::GradientVariant::kConsistent;
    else if (grad == "printed")
      c.gda.gradient = gda::GradientVariant::kPrinted;
    else if (!grad.empty())
      r.fail("gda.gradient", "expected \"consistent\" or \"printed\"");
  }
  if (r.object("game")) {
    r.get("game.strategy_cap", c.game.strategy_cap);
    r.get("game.threads", c.game.threads);
    std::string bf;
    r.get("game.beamformer", bf);
    if (bf == "per_pair")
      c.game.beamformer = GameBeamformer::kPerPair;
    else if (bf == "from_ao")
      c.game.beamformer = GameBeamformer::kFromAo;
    else if (!bf.empty())
      r.fail("game.beamformer", "expected \"per_pair\" or \"from_ao\"");
  }
  if (r.object("output")) {
    std::string dir;
    r.get("output.directory", dir);
    if (!dir.empty()) c.output_dir = dir;
    r.get("output.timing", c.timing);
  }
  r.reject_unknown();

  try {
    c.validate();
  } catch (const ConfigError& e) {
    r.fail(e.field(), std::string(e.what()).substr(std::string("config: ").size() + e.field().size() + 2));
  }
  return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading config file " + path.string());
  return parse_config_text(ss.str(), path.string());
}

}  // namespace irssec::app
