#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bubbletree/bubble_tree.hpp"
#include "bubbletree/error.hpp"

namespace bubbletree {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAnalysis = 3;

struct SequenceSpec {
  std::string family = "example1";
  std::vector<double> n_values;
  double beta = 1.0;
  std::vector<std::complex<double>> roots{{1.0, 0.0}, {2.0, 0.0}};
  double offset_exp = 0.33;
  std::uint64_t seed = 1;
  std::string file;
  std::string profile = "cylindrical";
  std::string view = "plane";
  bool normalized = true;
  double amplitude = 1.5;
  double length = 1.0;
  bool concentrate = false;
};

struct OutputSpec {
  std::string directory = "bubbletree_out";
  std::vector<std::string> artifacts{"tree.json", "thick_thin.json", "accounting.json",
                                     "profiles.csv", "run.json"};
};

struct Scenario {
  DomainChart domain;
  SequenceSpec sequence;
  TreeConfig analysis;
  double mass_tol = 0.05;
  double thick_thin_eps = 0.5;
  OutputSpec output;
  std::string source_text;  // config text, hashed into the run record
};

// Sectioned key=value text with [domain], [sequence], [analysis], [output].
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

MetricSequence make_sequence(const Scenario& s);

// Root-level concentration profiles, one row per frame and radius.
std::string profiles_csv(const TreeBuild& build);

std::string fnv1a_hex(const std::string& bytes);

// Builds the tree and writes the listed artifacts; returns the exit code.
// Artifacts already written are removed when a later stage fails.
int run_scenario(const Scenario& s, std::string& message);

// Exit code for an error raised while running.
int exit_code_for(ErrorCode code);

}  // namespace bubbletree
