#include <filesystem>
#include <fstream>
#include <set>
#include <iostream>

#include "CLI11.hpp"
#include "bubbletree/error.hpp"
#include "bubbletree/scenario.hpp"
#include "bubbletree/sequence_io.hpp"

using namespace bubbletree;

namespace {

// Builds a scenario from a family name and key=value settings.
Scenario family_scenario(const std::string& family, const std::vector<std::string>& settings) {
  static const std::set<std::string> domain_keys{"kind", "center", "outer_radius", "inner_radius", "grid_n"};
  std::string domain = "[domain]\n", sequence = "[sequence]\nfamily = " + family + "\n";
  for (const auto& kv : settings) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--set expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    (domain_keys.count(key) ? domain : sequence) += key + " = " + kv.substr(eq + 1) + "\n";
  }
  return parse_scenario(domain + sequence);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bubble-tree analysis of conformal metric sequences"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "analyze a scenario and write artifacts");
  run->add_option("config", config, "scenario config")->required();

  auto* check = app.add_subcommand("validate", "parse and check a scenario config");
  check->add_option("config", config, "scenario config")->required();

  std::string out_path;
  std::vector<std::string> settings;
  auto* gen = app.add_subcommand("gen", "write a metric sequence as a BTSEQ file");
  gen->add_option("source", config, "scenario config, or a family name")->required();
  gen->add_option("-o,--out", out_path, "output file (stdout when omitted)");
  gen->add_option("--set", settings, "domain or sequence key=value, used with a family name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    Scenario s = gen->parsed() && !std::filesystem::exists(config) ? family_scenario(config, settings)
                                                                   : load_scenario(config);
    if (check->parsed()) {
      std::cout << "ok\n";
      return kExitOk;
    }
    if (gen->parsed()) {
      MetricSequence seq = make_sequence(s);
      if (out_path.empty()) {
        write_sequence(std::cout, seq);
      } else {
        save_sequence(out_path, seq);
      }
      return kExitOk;
    }
    std::string message;
    int rc = run_scenario(s, message);
    (rc == kExitOk ? std::cout : std::cerr) << message << "\n";
    return rc;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
}
