#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "symconj/coefficients.hpp"
#include "symconj/errors.hpp"

namespace symconj {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> words;
  std::string rest;  // text after the first word, trimmed
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<Line> significant_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++number;
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    Line line{number, {}, {}};
    std::istringstream in(content);
    for (std::string w; in >> w;) line.words.push_back(w);
    const auto sp = content.find_first_of(" \t");
    if (sp != std::string::npos) line.rest = trim(std::string_view(content).substr(sp));
    out.push_back(std::move(line));
  }
  return out;
}

double parse_real(const Line& line, const std::string& word) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(word.c_str(), &end);
  if (end == word.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(line.number, "not a decimal number: '" + word + "'");
  }
  return v;
}

int parse_int(const Line& line, const std::string& word) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(word, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != word.size()) throw ParseError(line.number, "not an integer: '" + word + "'");
  return v;
}

const Line& expect_key(const std::vector<Line>& lines, std::size_t i, std::string_view key,
                       std::size_t words) {
  if (i >= lines.size()) throw ParseError(lines.empty() ? 1 : lines.back().number + 1,
                                          "missing '" + std::string(key) + "' line");
  const Line& line = lines[i];
  if (line.words.front() != key) {
    throw ParseError(line.number, "expected '" + std::string(key) + "', found '" + line.words.front() + "'");
  }
  if (line.words.size() != words) {
    throw ParseError(line.number, "'" + std::string(key) + "' takes " + std::to_string(words - 1) + " value(s)");
  }
  return line;
}

std::string format_real(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

CoefficientSet parse_coefficient_text(std::string_view text) {
  const auto lines = significant_lines(text);
  CoefficientSet set;
  set.name = expect_key(lines, 0, "name", 2).words[1];
  const Line& stages_line = expect_key(lines, 1, "stages", 2);
  const int stages = parse_int(stages_line, stages_line.words[1]);
  if (stages < 1) throw ParseError(stages_line.number, "stages must be positive");
  const Line& co = expect_key(lines, 2, "composition_order", 2);
  set.composition_order = parse_int(co, co.words[1]);
  const Line& po = expect_key(lines, 3, "projected_order", 2);
  set.projected_order = parse_int(po, po.words[1]);
  const Line& sy = expect_key(lines, 4, "symmetry", 2);
  try {
    set.symmetry = parse_symmetry(sy.words[1]);
  } catch (const DomainError& e) {
    throw ParseError(sy.number, e.what());
  }
  if (set.symmetry == Symmetry::both) throw ParseError(sy.number, "symmetry must be none, palindromic or symmetric-conjugate");

  std::size_t i = 5;
  for (int j = 0; j < stages; ++j, ++i) {
    const Line& st = expect_key(lines, i, "stage", 3);
    set.coeffs.emplace_back(parse_real(st, st.words[1]), parse_real(st, st.words[2]));
  }
  // Optional trailing metadata.
  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.words.front() == "pseudo_symmetry_order" && line.words.size() == 2) {
      set.pseudo_symmetry_order = parse_int(line, line.words[1]);
    } else if (line.words.front() == "provenance") {
      set.provenance = line.rest;
    } else if (line.words.front() == "stage") {
      throw ParseError(line.number, "more stage lines than declared (" + std::to_string(stages) + ")");
    } else {
      throw ParseError(line.number, "unexpected line '" + line.words.front() + "'");
    }
  }
  validate(set);
  return set;
}

std::string format_coefficient_text(const CoefficientSet& set) {
  if (set.symmetry == Symmetry::both) throw ValidationError(set.name + ": 'both' is not a file symmetry tag");
  std::ostringstream out;
  out << "name " << set.name << '\n'
      << "stages " << set.stages() << '\n'
      << "composition_order " << set.composition_order << '\n'
      << "projected_order " << set.projected_order << '\n'
      << "symmetry " << to_string(set.symmetry) << '\n';
  for (const Complex& z : set.coeffs) out << "stage " << format_real(z.real()) << ' ' << format_real(z.imag()) << '\n';
  if (set.pseudo_symmetry_order) out << "pseudo_symmetry_order " << *set.pseudo_symmetry_order << '\n';
  if (!set.provenance.empty()) out << "provenance " << set.provenance << '\n';
  return out.str();
}

CoefficientSet read_coefficient_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open coefficient file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coefficient_text(buf.str());
}

void write_coefficient_file(const CoefficientSet& set, const std::filesystem::path& path) {
  const std::string text = format_coefficient_text(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write coefficient file '" + path.string() + "'");
  out << text;
}

}  // namespace symconj
