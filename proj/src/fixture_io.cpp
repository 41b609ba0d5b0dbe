#include "cba/fixture_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cba {
namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* species_name(Kind k) {
  switch (k) {
    case Kind::LeftArrow: return "left";
    case Kind::RightArrow: return "right";
    case Kind::Cluster: return "cluster";
  }
  return "?";
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw std::invalid_argument("fixture line " + std::to_string(line_no) + ": " + why);
}

} // namespace

Configuration read_fixture(std::istream& in) {
  Configuration c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;

    if (head[0] == '@') {
      std::string value;
      if (!(ls >> value)) bad_line(line_no, "directive without a value");
      if (head == "@side") {
        if (value == "half-line") {
          c.side = Side::RightHalfLine;
        } else if (value == "two-sided") {
          c.side = Side::TwoSided;
        } else {
          bad_line(line_no, "unknown side '" + value + "'");
        }
      } else if (head == "@origin") {
        c.origin = std::stod(value);
      } else if (head == "@first") {
        c.first_index = std::stoll(value);
      } else {
        bad_line(line_no, "unknown directive " + head);
      }
      continue;
    }

    double x = 0.0;
    try {
      std::size_t used = 0;
      x = std::stod(head, &used);
      if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
      bad_line(line_no, "bad position '" + head + "'");
    }
    std::string species;
    if (!(ls >> species)) bad_line(line_no, "missing species");
    Site site;
    if (species == "L") {
      site = Site::left();
    } else if (species == "R") {
      site = Site::right();
    } else if (species == "C") {
      long long m = -1;
      if (!(ls >> m) || m < 0) bad_line(line_no, "cluster needs a nonnegative multiplicity");
      site = Site::cluster(static_cast<std::uint32_t>(m));
    } else {
      bad_line(line_no, "unknown species '" + species + "'");
    }
    std::string extra;
    if (ls >> extra) bad_line(line_no, "trailing token '" + extra + "'");
    c.positions.push_back(x);
    c.sites.push_back(site);
  }
  c.validate();
  return c;
}

void write_fixture(std::ostream& out, const Configuration& config) {
  out << "@side " << (config.side == Side::RightHalfLine ? "half-line" : "two-sided") << '\n';
  out << "@origin " << full_precision(config.origin) << '\n';
  out << "@first " << config.first_index << '\n';
  for (std::size_t i = 0; i < config.size(); ++i) {
    const Site& s = config.sites[i];
    out << full_precision(config.positions[i]) << ' ';
    switch (s.kind) {
      case Kind::LeftArrow: out << 'L'; break;
      case Kind::RightArrow: out << 'R'; break;
      case Kind::Cluster: out << "C " << s.multiplicity; break;
    }
    out << '\n';
  }
}

void write_collisions_csv(std::ostream& out, const Outcome& outcome) {
  out << "time,position,kind,left_site,right_site,remaining\n";
  for (const auto& c : outcome.collisions) {
    out << full_precision(c.time) << ',' << full_precision(c.position) << ','
        << (c.kind == CollisionKind::ArrowArrow ? "arrow-arrow" : "arrow-cluster") << ',' << c.left_site << ','
        << c.right_site << ',' << c.remaining << '\n';
  }
}

void write_survivors_csv(std::ostream& out, const Outcome& outcome) {
  out << "site,species,remaining\n";
  for (const auto& s : outcome.survivors) {
    out << s.site << ',' << species_name(s.kind) << ',' << s.remaining << '\n';
  }
}

} // namespace cba
