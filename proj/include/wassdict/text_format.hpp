#pragma once

// Line-level helpers shared by the diagram and model file codecs.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wassdict/diagram.hpp"

namespace wassdict::text {

struct DiagramHeader {
  double scalar_min = 0.0;
  double scalar_max = 0.0;
  std::string label;
};

std::string_view trim(std::string_view s);
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Strict full-token conversion; throws ParseError naming source:line.
double parse_double(std::string_view token, const std::string& source, std::size_t line);
std::size_t parse_size(std::string_view token, const std::string& source, std::size_t line);

/// Value of `key=` in a header token, or throws.
std::string_view expect_key(std::string_view token, std::string_view key, const std::string& source,
                            std::size_t line);

DiagramHeader parse_diagram_header(std::string_view line, const std::string& source,
                                   std::size_t line_no);
PersistencePair parse_pair_line(std::string_view line, const std::string& source,
                                std::size_t line_no);

/// Parses a header line followed by pair lines. `lines[0]` is the header;
/// `first_line_no` is its 1-based line number in the source.
PersistenceDiagram parse_diagram_lines(const std::vector<std::string>& lines,
                                       const std::string& source, std::size_t first_line_no);

}  // namespace wassdict::text
