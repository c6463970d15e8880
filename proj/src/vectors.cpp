#include "mmp/vectors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace mmp {

namespace {

struct RawLine {
  std::string label;
  RationalVector components;
  std::size_t line = 0;
};

bool is_number(const std::string& t) {
  std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
  auto digits = [&](std::size_t& k) {
    const std::size_t start = k;
    while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
    return k > start;
  };
  if (!digits(i)) return false;
  if (i == t.size()) return true;
  if (t[i] != '/') return false;
  ++i;
  return digits(i) && i == t.size();
}

std::vector<RawLine> read_lines(std::string_view text) {
  std::vector<RawLine> out;
  std::size_t line_no = 0;
  int dimension = -1;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string line(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw VectorParseError("expected 'label: components'", line_no);
    RawLine raw;
    raw.line = line_no;
    std::istringstream label_in(line.substr(0, colon));
    label_in >> raw.label;
    std::string extra;
    if (raw.label.empty() || (label_in >> extra)) throw VectorParseError("bad label", line_no);
    std::istringstream in(line.substr(colon + 1));
    for (std::string tok; in >> tok;) {
      if (!is_number(tok)) throw VectorParseError("bad component '" + tok + "'", line_no);
      if (tok[0] == '+') tok.erase(0, 1);
      Rational q(tok);
      if (q.get_den() == 0) throw VectorParseError("zero denominator in '" + tok + "'", line_no);
      q.canonicalize();
      raw.components.push_back(std::move(q));
    }
    if (raw.components.empty()) throw VectorParseError("no components", line_no);
    if (dimension >= 0 && static_cast<int>(raw.components.size()) != dimension) {
      throw VectorParseError("ragged dimension: expected " + std::to_string(dimension) + " components, got " +
                                 std::to_string(raw.components.size()),
                             line_no);
    }
    dimension = static_cast<int>(raw.components.size());
    if (is_zero(raw.components)) throw VectorParseError("zero vector for " + raw.label, line_no);
    out.push_back(std::move(raw));
  }
  return out;
}

template <class Resolve>
VectorSet assemble(std::vector<RawLine> lines, Resolve resolve) {
  VectorSet set;
  for (RawLine& raw : lines) {
    const std::optional<Vertex> v = resolve(raw.label);
    if (!v) throw VectorParseError("unknown label '" + raw.label + "'", raw.line);
    set.dimension = static_cast<int>(raw.components.size());
    if (!set.vectors.emplace(*v, std::move(raw.components)).second) {
      throw VectorParseError("duplicate label '" + raw.label + "'", raw.line);
    }
  }
  return set;
}

std::string line_for(const std::string& label, const RationalVector& v) {
  std::string s = label + ":";
  for (const Rational& x : v) s += " " + x.get_str();
  return s + "\n";
}

}  // namespace

VectorSet parse_vectors(std::string_view text, const MmpDiagram& d) {
  return assemble(read_lines(text), [&](const std::string& label) { return d.vertex_of(label); });
}

VectorSet parse_vectors(std::string_view text) {
  auto lines = read_lines(text);
  const bool letters = std::all_of(lines.begin(), lines.end(), [](const RawLine& r) { return r.label.size() == 1; });
  return assemble(std::move(lines), [&](const std::string& label) -> std::optional<Vertex> {
    if (letters) {
      const auto pos = kLabelAlphabet.find(label[0]);
      if (pos == std::string_view::npos) return std::nullopt;
      return static_cast<Vertex>(pos);
    }
    if (label[0] == '0' || !std::all_of(label.begin(), label.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return std::nullopt;
    }
    if (label.size() > 9) return std::nullopt;
    return static_cast<Vertex>(std::stoi(label) - 1);
  });
}

std::string serialize_vectors(const VectorSet& v) {
  const int n = v.vectors.empty() ? 0 : v.vectors.rbegin()->first + 1;
  std::string out;
  for (const auto& [vertex, vec] : v.vectors) out += line_for(default_label(vertex, n), vec);
  return out;
}

std::string serialize_vectors(const VectorSet& v, const MmpDiagram& d) {
  std::string out;
  for (const auto& [vertex, vec] : v.vectors) out += line_for(d.label(vertex), vec);
  return out;
}

RealizationReport verify_realization(const MmpDiagram& d, const VectorSet& v) {
  for (Vertex x = 0; x < d.vertex_count(); ++x) {
    const auto it = v.vectors.find(x);
    if (it == v.vectors.end()) throw std::invalid_argument("no vector for vertex " + d.label(x));
    if (static_cast<int>(it->second.size()) != v.dimension) {
      throw std::invalid_argument("vector for " + d.label(x) + " has the wrong dimension");
    }
  }
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    if (static_cast<int>(d.block(b).size()) > v.dimension) {
      throw std::invalid_argument("block " + std::to_string(b) + " has more vertices than the dimension " +
                                  std::to_string(v.dimension));
    }
  }
  RealizationReport report;
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    const Block& blk = d.block(b);
    for (std::size_t i = 0; i < blk.size(); ++i) {
      for (std::size_t j = i + 1; j < blk.size(); ++j) {
        Rational ip = dot(v.vectors.at(blk[i]), v.vectors.at(blk[j]));
        if (ip != 0) report.violations.push_back({b, blk[i], blk[j], std::move(ip)});
      }
    }
  }
  report.valid = report.violations.empty();
  return report;
}

std::string to_string(RealizeStatus s) {
  switch (s) {
    case RealizeStatus::Realized: return "REALIZED";
    case RealizeStatus::BudgetExhausted: return "UNKNOWN (budget exhausted)";
    case RealizeStatus::ImpossibleInCandidateSpace: return "IMPOSSIBLE (candidate space exhausted)";
  }
  return "?";
}

}  // namespace mmp
