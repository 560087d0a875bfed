#include "bubbletree/scenario.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bubbletree/error.hpp"
#include "bubbletree/families.hpp"
#include "bubbletree/sequence_io.hpp"
#include "json.hpp"

namespace bubbletree {

namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

[[noreturn]] void config_error(const std::string& m) { throw Error(ErrorCode::ConfigError, m); }

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) config_error(key + ": trailing characters in '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    config_error(key + ": expected a number, got '" + v + "'");
  }
}

long to_int(const std::string& key, const std::string& v) {
  double x = to_real(key, v);
  if (x != std::floor(x)) config_error(key + ": expected an integer, got '" + v + "'");
  return static_cast<long>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(key + ": expected true or false, got '" + v + "'");
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"kind", "center", "outer_radius", "inner_radius", "grid_n"}},
      {"sequence",
       {"family", "n_values", "beta", "roots", "offset_exp", "seed", "file", "profile", "view",
        "normalized", "amplitude", "length", "concentrate"}},
      {"analysis",
       {"filter_eps", "eps0", "eta", "tail_window", "max_depth", "mass_tol", "efficiency_tol",
        "thick_thin_eps", "profile_radius", "levels", "child_window", "min_area", "min_sup_growth",
        "budget_tol", "vanish_threshold", "vanish_drop", "vanish_area_fraction"}},
      {"output", {"directory", "artifacts"}},
  };
  return keys;
}

void validate(const Scenario& s) {
  try {
    s.domain.validate();
  } catch (const Error& e) {
    config_error(std::string("domain: ") + e.what());
  }
  const auto& a = s.analysis;
  if (!(a.blowup.filter_eps > 0 && a.blowup.filter_eps < a.blowup.eps0)) {
    config_error("analysis: filter_eps must lie in (0, eps0)");
  }
  if (!(a.detection.eta > 0 && a.detection.eta < 1)) config_error("analysis: eta must lie in (0, 1)");
  if (a.detection.tail_window < 2) config_error("analysis: tail_window must be at least 2");
  if (a.max_depth < 1) config_error("analysis: max_depth must be at least 1");
  if (a.detection.levels < 3) config_error("analysis: levels must be at least 3");
  if (!(s.mass_tol > 0)) config_error("analysis: mass_tol must be positive");
  if (!(s.thick_thin_eps >= a.blowup.filter_eps)) {
    config_error("analysis: thick_thin_eps must be at least filter_eps");
  }
  if (s.sequence.file.empty()) {
    if (s.sequence.n_values.size() < 2) config_error("sequence: n_values needs at least two labels");
    for (std::size_t k = 1; k < s.sequence.n_values.size(); ++k) {
      if (!(s.sequence.n_values[k] > s.sequence.n_values[k - 1])) {
        config_error("sequence: n_values must increase strictly");
      }
    }
  }
  static const std::set<std::string> families{"example1", "example2", "example2_glued", "example3",
                                              "random_rotsym", "flat", "file"};
  if (!families.count(s.sequence.family)) config_error("sequence: unknown family '" + s.sequence.family + "'");
  if (s.sequence.family == "file" && s.sequence.file.empty()) config_error("sequence: family file needs file");
  static const std::set<std::string> artifacts{"tree.json", "thick_thin.json", "accounting.json",
                                               "profiles.csv", "run.json", "sequence.btseq"};
  for (const auto& n : s.output.artifacts) {
    if (!artifacts.count(n)) config_error("output: unknown artifact '" + n + "'");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(e.what());
  }
  Scenario s;
  s.source_text = text;
  s.domain = DomainChart::disk({0, 0}, 1.0, 256);
  s.thick_thin_eps = -1.0;
  for (const auto& [section, body] : tree) {
    auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (!body.data().empty()) config_error("key '" + section + "' outside any section");
      config_error("unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      if (!known->second.count(key)) config_error(section + ": unknown key '" + key + "'");
      std::string v = trim(node.data());
      std::string name = section + "." + key;
      if (section == "domain") {
        if (key == "kind") {
          try {
            s.domain.region.kind = parse_chart_kind(v);
          } catch (const Error&) {
            config_error(name + ": unknown chart kind '" + v + "'");
          }
        } else if (key == "center") {
          auto parts = split(v, ',');
          if (parts.size() != 2) config_error(name + ": expected 'x, y'");
          s.domain.region.center = {to_real(name, parts[0]), to_real(name, parts[1])};
        } else if (key == "outer_radius") {
          s.domain.region.outer_radius = to_real(name, v);
        } else if (key == "inner_radius") {
          s.domain.region.inner_radius = to_real(name, v);
        } else if (key == "grid_n") {
          s.domain.grid_n = static_cast<int>(to_int(name, v));
        }
      } else if (section == "sequence") {
        auto& q = s.sequence;
        if (key == "family") q.family = v;
        else if (key == "n_values") {
          q.n_values.clear();
          for (const auto& p : split(v, ',')) q.n_values.push_back(to_real(name, p));
        } else if (key == "beta") q.beta = to_real(name, v);
        else if (key == "roots") {
          q.roots.clear();
          for (const auto& p : split(v, ',')) {
            auto xy = split(p, ':');
            if (xy.size() == 1) q.roots.emplace_back(to_real(name, xy[0]), 0.0);
            else if (xy.size() == 2) q.roots.emplace_back(to_real(name, xy[0]), to_real(name, xy[1]));
            else config_error(name + ": roots are 'x' or 'x:y' separated by commas");
          }
        } else if (key == "offset_exp") q.offset_exp = to_real(name, v);
        else if (key == "seed") q.seed = static_cast<std::uint64_t>(to_int(name, v));
        else if (key == "file") q.file = v;
        else if (key == "profile") {
          if (v != "literal" && v != "cylindrical") config_error(name + ": literal or cylindrical");
          q.profile = v;
        } else if (key == "view") {
          if (v != "plane" && v != "inverted") config_error(name + ": plane or inverted");
          q.view = v;
        } else if (key == "normalized") q.normalized = to_bool(name, v);
        else if (key == "amplitude") q.amplitude = to_real(name, v);
        else if (key == "length") q.length = to_real(name, v);
        else if (key == "concentrate") q.concentrate = to_bool(name, v);
      } else if (section == "analysis") {
        auto& a = s.analysis;
        if (key == "filter_eps") a.blowup.filter_eps = to_real(name, v);
        else if (key == "eps0") a.blowup.eps0 = to_real(name, v);
        else if (key == "eta") a.detection.eta = to_real(name, v);
        else if (key == "tail_window") {
          long w = to_int(name, v);
          if (w < 2) config_error(name + ": must be at least 2");
          a.detection.tail_window = a.blowup.tail_window = static_cast<std::size_t>(w);
        } else if (key == "max_depth") a.max_depth = static_cast<int>(to_int(name, v));
        else if (key == "mass_tol") s.mass_tol = to_real(name, v);
        else if (key == "efficiency_tol") a.efficiency_tol = to_real(name, v);
        else if (key == "thick_thin_eps") s.thick_thin_eps = to_real(name, v);
        else if (key == "profile_radius") a.detection.profile_radius = to_real(name, v);
        else if (key == "levels") a.detection.levels = static_cast<int>(to_int(name, v));
        else if (key == "child_window") a.blowup.child_window = to_real(name, v);
        else if (key == "min_area") a.detection.min_area = to_real(name, v);
        else if (key == "min_sup_growth") a.detection.min_sup_growth = to_real(name, v);
        else if (key == "budget_tol") a.blowup.budget_tol = to_real(name, v);
        else if (key == "vanish_threshold") a.vanish_threshold = to_real(name, v);
        else if (key == "vanish_drop") a.vanish_drop = to_real(name, v);
        else if (key == "vanish_area_fraction") a.vanish_area_fraction = to_real(name, v);
      } else if (section == "output") {
        if (key == "directory") s.output.directory = v;
        else if (key == "artifacts") s.output.artifacts = split(v, ',');
      }
    }
  }
  if (s.thick_thin_eps < 0) s.thick_thin_eps = s.analysis.blowup.filter_eps;
  if (s.domain.kind() != ChartKind::annulus) s.domain.region.inner_radius = 0.0;
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

MetricSequence make_sequence(const Scenario& s) {
  const SequenceSpec& q = s.sequence;
  if (!q.file.empty()) return load_sequence(q.file);
  if (q.family == "example1") return families::example1(s.domain, q.n_values, q.offset_exp, q.normalized);
  if (q.family == "example2" || q.family == "example2_glued") {
    families::Example2Params p;
    p.beta = q.beta;
    p.profile = q.profile == "literal" ? families::NeckProfile::literal : families::NeckProfile::cylindrical;
    p.view = (q.family == "example2_glued" || q.view == "inverted") ? families::View::inverted
                                                                    : families::View::plane;
    return families::example2(s.domain, q.n_values, p);
  }
  if (q.family == "example3") return families::example3(s.domain, q.n_values, q.roots);
  families::RandomRotsymParams p;
  p.seed = q.seed;
  p.amplitude = q.family == "flat" ? 0.0 : q.amplitude;
  p.length = q.length;
  p.concentrate = q.family != "flat" && q.concentrate;
  return families::random_rotsym(s.domain, q.n_values, p);
}

std::string profiles_csv(const TreeBuild& build) {
  std::string out = "n,r,center_x,center_y,area,energy,circle_length\n";
  const MetricSequence& seq = build.sequences[0];
  for (const auto& cand : build.detections[0].accepted) {
    const auto& p = cand.profile;
    for (std::size_t k = 0; k < p.labels.size(); ++k) {
      for (std::size_t j = 0; j < p.radii.size(); ++j) {
        double len = circle_length(seq.frames[k], p.frame_centers[k], p.radii[j]);
        out += format_real(p.labels[k]) + "," + format_real(p.radii[j]) + "," +
               format_real(p.frame_centers[k].x) + "," + format_real(p.frame_centers[k].y) + "," +
               format_real(p.area_at[k][j]) + "," + format_real(p.energy_at[k][j]) + "," +
               format_real(len) + "\n";
      }
    }
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CountBoundViolated:
    case ErrorCode::BudgetViolated:
    case ErrorCode::GhostLawViolated:
    case ErrorCode::MalformedTree:
    case ErrorCode::ThinViolation:
    case ErrorCode::SolverDivergence:
    case ErrorCode::VanishedMetric:
      return kExitAnalysis;
    default:
      return kExitConfig;
  }
}

int run_scenario(const Scenario& s, std::string& message) {
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  std::vector<std::pair<std::string, double>> timings;
  auto lap = [&](const std::string& name, clock::time_point t0) {
    timings.emplace_back(name, std::chrono::duration<double>(clock::now() - t0).count());
  };
  auto wants = [&](const std::string& name) {
    for (const auto& a : s.output.artifacts) {
      if (a == name) return true;
    }
    return false;
  };
  fs::path dir(s.output.directory);
  std::vector<fs::path> written;
  std::vector<std::pair<std::string, std::string>> checksums;
  auto emit = [&](const std::string& name, const std::string& body) {
    if (!wants(name)) return;
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + p.string());
    written.push_back(p);
    out << body;
    out.close();
    if (!out) throw Error(ErrorCode::ConfigError, "failed writing " + p.string());
    if (name != "run.json") checksums.emplace_back(name, fnv1a_hex(body));
  };
  try {
    fs::create_directories(dir);
    auto t0 = clock::now();
    MetricSequence seq = make_sequence(s);
    lap("sequence", t0);
    if (wants("sequence.btseq")) {
      std::ostringstream os;
      write_sequence(os, seq);
      emit("sequence.btseq", os.str());
    }
    t0 = clock::now();
    TreeBuild build = build_tree(seq, s.analysis);
    lap("tree", t0);
    t0 = clock::now();
    MassReport mass = mass_accounting(build, s.mass_tol);
    lap("accounting", t0);
    t0 = clock::now();
    ThickThin tt = thick_thin(build, s.thick_thin_eps);
    lap("thick_thin", t0);
    std::vector<std::string> warnings = build.warnings;
    for (const auto& c : mass.checks) {
      if (!c.pass) warnings.push_back("mass check " + c.name + " residual " + format_real(c.residual));
    }
    emit("tree.json", serialize(build.tree));
    emit("thick_thin.json", serialize(tt));
    emit("accounting.json", serialize(mass));
    emit("profiles.csv", profiles_csv(build));

    nlohmann::ordered_json run;
    run["scenario_hash"] = fnv1a_hex(s.source_text);
    run["tool_version"] = kToolVersion;
    run["wall_time_s"] = std::chrono::duration<double>(clock::now() - start).count();
    nlohmann::ordered_json tj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : timings) tj[k] = v;
    run["timings_s"] = tj;
    run["warnings"] = warnings;
    nlohmann::ordered_json arts = nlohmann::ordered_json::array();
    for (const auto& [k, v] : checksums) arts.push_back({{"name", k}, {"fnv1a64", v}});
    run["artifacts"] = arts;
    emit("run.json", run.dump(2) + "\n");
    message = "ok: " + std::to_string(build.tree.vertices.size()) + " vertices, " +
              std::to_string(build.tree.edges.size()) + " edges";
    return kExitOk;
  } catch (const Error& e) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    message = e.what();
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    message = e.what();
    return kExitConfig;
  }
}

}  // namespace bubbletree
