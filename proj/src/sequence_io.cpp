#include "bubbletree/sequence_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bubbletree/error.hpp"

namespace bubbletree {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_sequence(std::ostream& out, const MetricSequence& seq) {
  seq.validate();
  const DomainChart& c = seq.frames.front().chart();
  for (const auto& f : seq.frames) {
    if (!(f.chart() == c)) throw Error(ErrorCode::InvalidSequence, "frames must share one chart");
  }
  out << "BTSEQ 1\n";
  out << "chart " << chart_kind_name(c.kind()) << ' ' << format_real(c.center().x) << ' '
      << format_real(c.center().y) << ' ' << format_real(c.outer_radius()) << ' '
      << format_real(c.inner_radius()) << ' ' << c.grid_n << '\n';
  out << "frames " << seq.size() << '\n';
  for (std::size_t k = 0; k < seq.size(); ++k) {
    out << "frame " << format_real(seq.labels[k]) << '\n';
    const MetricGrid& f = seq.frames[k];
    if (f.vanished()) {
      out << "VANISHED\n";
      continue;
    }
    std::string line;
    for (int j = 0; j < c.grid_n; ++j) {
      line.clear();
      for (int i = 0; i < c.grid_n; ++i) {
        if (i) line += ' ';
        line += format_real(f.phi_node(i, j));
      }
      line += '\n';
      out << line;
    }
  }
}

MetricSequence read_sequence(std::istream& in) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::ParseError, m); };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "BTSEQ" || version != 1) fail("missing BTSEQ 1 header");
  std::string kind;
  DomainChart c;
  if (!(in >> tag >> kind >> c.region.center.x >> c.region.center.y >> c.region.outer_radius >>
        c.region.inner_radius >> c.grid_n) ||
      tag != "chart") {
    fail("bad chart line");
  }
  c.region.kind = parse_chart_kind(kind);
  c.validate();
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "frames") fail("bad frames line");
  MetricSequence seq;
  for (std::size_t k = 0; k < count; ++k) {
    double label;
    if (!(in >> tag >> label) || tag != "frame") fail("bad frame header");
    seq.labels.push_back(label);
    std::string first;
    if (!(in >> first)) fail("truncated frame");
    if (first == "VANISHED") {
      seq.frames.push_back(MetricGrid::vanished_on(c));
      continue;
    }
    std::vector<double> phi(c.node_count());
    std::istringstream head(first);
    if (!(head >> phi[0])) fail("bad sample");
    for (std::size_t n = 1; n < phi.size(); ++n) {
      if (!(in >> phi[n])) fail("truncated frame samples");
    }
    seq.frames.push_back(MetricGrid::from_samples(c, std::move(phi)));
  }
  seq.validate();
  return seq;
}

void save_sequence(const std::string& path, const MetricSequence& seq) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  write_sequence(out, seq);
}

MetricSequence load_sequence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  return read_sequence(in);
}

}  // namespace bubbletree
