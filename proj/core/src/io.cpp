#include "screenopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "screenopt/errors.hpp"

namespace screenopt {
namespace {

// Strips one trailing '\r' so CRLF files parse the same as LF files.
void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool split_two(const std::string& line, std::string& first, std::string& second) {
  const std::size_t comma = line.find(',');
  if (comma == std::string::npos) return false;
  if (line.find(',', comma + 1) != std::string::npos) return false;
  first = line.substr(0, comma);
  second = line.substr(comma + 1);
  return true;
}

double parse_double_field(const std::string& text, const std::string& path, long line_no) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParseError(path, line_no, "malformed number '" + text + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

ScoreFile read_score_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  ScoreFile out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "id,score") {
        throw ParseError(path, line_no, "expected header 'id,score', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::string id;
    std::string field;
    if (!split_two(line, id, field)) {
      throw ParseError(path, line_no, "expected two comma-separated fields");
    }
    const double score = parse_double_field(field, path, line_no);
    if (!(score >= 0.0 && score <= 1.0)) {
      throw ParseError(path, line_no, "score " + field + " outside [0,1]");
    }
    out.ids.push_back(std::move(id));
    out.scores.push_back(score);
  }
  if (!header_seen) throw ParseError(path, line_no, "missing 'id,score' header");
  if (out.scores.empty()) throw ParseError(path, line_no, "no score rows");
  return out;
}

LabelFile read_label_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  LabelFile out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "id,label") {
        throw ParseError(path, line_no, "expected header 'id,label', got '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::string id;
    std::string field;
    if (!split_two(line, id, field)) {
      throw ParseError(path, line_no, "expected two comma-separated fields");
    }
    if (field != "0" && field != "1") {
      throw ParseError(path, line_no, "label must be 0 or 1, got '" + field + "'");
    }
    out.ids.push_back(std::move(id));
    out.labels.push_back(field == "1" ? 1 : 0);
  }
  if (!header_seen) throw ParseError(path, line_no, "missing 'id,label' header");
  if (out.labels.empty()) throw ParseError(path, line_no, "no label rows");
  return out;
}

std::string csv_header_block(const std::string& tool, const std::string& args,
                             std::uint64_t seed) {
  std::ostringstream os;
  os << "# format_version=" << kFormatVersion << "\n";
  os << "# tool=" << tool << "\n";
  os << "# args=" << args << "\n";
  os << "# seed=" << seed << "\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace screenopt
