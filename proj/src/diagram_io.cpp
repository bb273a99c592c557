#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "wassdict/diagram.hpp"
#include "wassdict/error.hpp"
#include "wassdict/text_format.hpp"

namespace wassdict {

namespace text {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

double parse_double(std::string_view token, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(source, line, "expected a finite number, got '" + std::string(token) + "'");
  return value;
}

std::size_t parse_size(std::string_view token, const std::string& source, std::size_t line) {
  std::size_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ParseError(source, line, "expected a non-negative integer, got '" + std::string(token) +
                                       "'");
  return value;
}

std::string_view expect_key(std::string_view token, std::string_view key,
                            const std::string& source, std::size_t line) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
      token[key.size()] != '=')
    throw ParseError(source, line, "expected '" + std::string(key) + "=<value>' in header");
  return token.substr(key.size() + 1);
}

DiagramHeader parse_diagram_header(std::string_view line, const std::string& source,
                                   std::size_t line_no) {
  constexpr std::string_view kMagic = "#pd v1 ";
  if (line.substr(0, kMagic.size()) != kMagic)
    throw ParseError(source, line_no, "missing '#pd v1' header");
  const auto label_pos = line.find(" label=");
  if (label_pos == std::string_view::npos)
    throw ParseError(source, line_no, "header lacks 'label='");
  const auto fields = split_whitespace(line.substr(kMagic.size(), label_pos - kMagic.size()));
  if (fields.size() != 2) throw ParseError(source, line_no, "header must be fmin=, fmax=, label=");
  DiagramHeader h;
  h.scalar_min = parse_double(expect_key(fields[0], "fmin", source, line_no), source, line_no);
  h.scalar_max = parse_double(expect_key(fields[1], "fmax", source, line_no), source, line_no);
  if (h.scalar_max < h.scalar_min) throw ParseError(source, line_no, "fmax < fmin");
  std::string_view label = line.substr(label_pos + 7);
  while (!label.empty() && (label.back() == '\r' || label.back() == '\n')) label.remove_suffix(1);
  h.label = std::string(label);
  return h;
}

PersistencePair parse_pair_line(std::string_view line, const std::string& source,
                                std::size_t line_no) {
  const auto tokens = split_whitespace(line);
  if (tokens.size() != 3)
    throw ParseError(source, line_no, "expected '<birth> <death> <type>'");
  const double birth = parse_double(tokens[0], source, line_no);
  const double death = parse_double(tokens[1], source, line_no);
  const auto type = pair_type_from_token(tokens[2]);
  if (!type)
    throw ParseError(source, line_no,
                     "unknown pair type '" + std::string(tokens[2]) + "' (expected ms, ss or sm)");
  if (death < birth) throw ParseError(source, line_no, "death < birth");
  return PersistencePair(birth, death, *type);
}

PersistenceDiagram parse_diagram_lines(const std::vector<std::string>& lines,
                                       const std::string& source, std::size_t first_line_no) {
  if (lines.empty()) throw ParseError(source, first_line_no, "empty diagram");
  const DiagramHeader header = parse_diagram_header(lines[0], source, first_line_no);
  std::vector<PersistencePair> pairs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = first_line_no + i;
    if (trim(lines[i]).empty()) continue;
    PersistencePair p = parse_pair_line(lines[i], source, line_no);
    if (p.birth() < header.scalar_min || p.death() > header.scalar_max)
      throw ParseError(source, line_no, "pair outside the header scalar range");
    pairs.push_back(p);
  }
  return PersistenceDiagram(std::move(pairs), header.scalar_min, header.scalar_max, header.label);
}

}  // namespace text

std::string format_scalar(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PersistenceDiagram parse_diagram(std::istream& in, const std::string& source_name) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  // Leading blank lines are not allowed; the header must be line 1.
  return text::parse_diagram_lines(lines, source_name, 1);
}

void format_diagram(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "#pd v1 fmin=" << format_scalar(diagram.scalar_min())
      << " fmax=" << format_scalar(diagram.scalar_max()) << " label=" << diagram.label() << '\n';
  for (const auto& p : diagram.pairs()) {
    if (p.is_diagonal()) continue;
    out << format_scalar(p.birth()) << ' ' << format_scalar(p.death()) << ' ' << to_token(p.type())
        << '\n';
  }
}

PersistenceDiagram read_diagram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open diagram file " + path.string());
  return parse_diagram(in, path.string());
}

void write_diagram(const PersistenceDiagram& diagram, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write diagram file " + path.string());
  format_diagram(out, diagram);
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace wassdict
