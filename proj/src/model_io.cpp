#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wassdict/error.hpp"
#include "wassdict/reduce.hpp"
#include "wassdict/text_format.hpp"

namespace wassdict {

namespace {

constexpr std::string_view kMagic = "#wd v1 ";

}  // namespace

void DictionaryModel::validate() const {
  if (weights.size() != member_labels.size())
    throw DataError("model has " + std::to_string(weights.size()) + " weight rows but " +
                    std::to_string(member_labels.size()) + " labels");
  for (const auto& w : weights)
    if (w.size() != atom_count())
      throw DataError("weight vector of size " + std::to_string(w.size()) + " in a model with " +
                      std::to_string(atom_count()) + " atoms");
}

bool operator==(const DictionaryModel& a, const DictionaryModel& b) {
  return a.dictionary.atoms == b.dictionary.atoms && a.weights == b.weights &&
         a.member_labels == b.member_labels && a.scalar_min == b.scalar_min &&
         a.scalar_max == b.scalar_max && a.format_version == b.format_version;
}

DictionaryModel make_model(DictionaryResult result, std::span<const PersistenceDiagram> ensemble) {
  DictionaryModel model;
  model.dictionary = std::move(result.dictionary);
  model.weights = std::move(result.weights);
  for (const auto& x : ensemble) model.member_labels.push_back(x.label());
  const auto [lo, hi] = global_range(ensemble);
  model.scalar_min = lo;
  model.scalar_max = hi;
  model.validate();
  return model;
}

void format_model(std::ostream& out, const DictionaryModel& model) {
  model.validate();
  out << kMagic << "m=" << model.atom_count() << " N=" << model.member_count()
      << " fmin=" << format_scalar(model.scalar_min) << " fmax=" << format_scalar(model.scalar_max)
      << '\n';
  out << "[atoms]\n";
  for (const auto& a : model.dictionary.atoms) format_diagram(out, a);
  out << "[weights]\n";
  for (std::size_t n = 0; n < model.member_count(); ++n) {
    for (double w : model.weights[n].values()) out << format_scalar(w) << ' ';
    out << model.member_labels[n] << '\n';
  }
}

DictionaryModel parse_model(std::istream& in, const std::string& source) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (lines.empty()) throw ParseError(source, 1, "empty model file");

  const std::string_view header = lines[0];
  if (header.substr(0, kMagic.size()) != kMagic)
    throw ParseError(source, 1, "expected '#wd v1' header");
  const auto fields = text::split_whitespace(header.substr(kMagic.size()));
  if (fields.size() != 4) throw ParseError(source, 1, "header must be m=, N=, fmin=, fmax=");
  const std::size_t m = text::parse_size(text::expect_key(fields[0], "m", source, 1), source, 1);
  const std::size_t n = text::parse_size(text::expect_key(fields[1], "N", source, 1), source, 1);
  DictionaryModel model;
  model.scalar_min = text::parse_double(text::expect_key(fields[2], "fmin", source, 1), source, 1);
  model.scalar_max = text::parse_double(text::expect_key(fields[3], "fmax", source, 1), source, 1);
  if (m == 0) throw ParseError(source, 1, "model needs at least one atom");

  std::size_t i = 1;
  auto skip_blank = [&] {
    while (i < lines.size() && text::trim(lines[i]).empty()) ++i;
  };
  skip_blank();
  if (i >= lines.size() || text::trim(lines[i]) != "[atoms]")
    throw ParseError(source, i + 1, "expected [atoms]");
  ++i;
  for (std::size_t a = 0; a < m; ++a) {
    skip_blank();
    if (i >= lines.size() || lines[i].rfind("#pd", 0) != 0)
      throw ParseError(source, i + 1, "expected atom " + std::to_string(a + 1) + " of " +
                                          std::to_string(m));
    const std::size_t first = i;
    std::vector<std::string> block{lines[i++]};
    while (i < lines.size() && lines[i].rfind("#pd", 0) != 0 && text::trim(lines[i]) != "[weights]")
      block.push_back(lines[i++]);
    model.dictionary.atoms.push_back(text::parse_diagram_lines(block, source, first + 1));
  }
  skip_blank();
  if (i >= lines.size() || text::trim(lines[i]) != "[weights]")
    throw ParseError(source, i + 1, "expected [weights] after " + std::to_string(m) + " atoms");
  ++i;
  for (; i < lines.size(); ++i) {
    std::string_view row = text::trim(lines[i]);
    if (row.empty()) continue;
    std::vector<double> w;
    w.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto space = row.find_first_of(" \t");
      const std::string_view token = row.substr(0, space);
      if (token.empty()) throw ParseError(source, i + 1, "weight row too short");
      w.push_back(text::parse_double(token, source, i + 1));
      row = space == std::string_view::npos ? std::string_view{} : text::trim(row.substr(space));
    }
    try {
      model.weights.emplace_back(std::move(w));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, i + 1, e.what());
    }
    model.member_labels.emplace_back(row);
  }
  if (model.weights.size() != n)
    throw ParseError(source, lines.size(), "header declares N=" + std::to_string(n) + " but " +
                                               std::to_string(model.weights.size()) +
                                               " weight rows follow");
  model.dictionary.size_cap = model.dictionary.total_size();
  model.validate();
  return model;
}

void write_model(const DictionaryModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  format_model(out, model);
  if (!out) throw DataError("failed writing " + path.string());
}

DictionaryModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_model(in, path.string());
}

}  // namespace wassdict
