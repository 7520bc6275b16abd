#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace screenopt {

// Bumped whenever an output schema changes shape.
inline constexpr const char* kFormatVersion = "1";
inline constexpr std::uint64_t kDefaultSeed = 42;

// Shortest round-trip decimal form (std::to_chars); locale-independent, so
// identical runs produce byte-identical files.
std::string format_double(double v);

// CSV with header "id,score"; scores must lie in [0,1]. Rows keep file order.
struct ScoreFile {
  std::vector<std::string> ids;
  std::vector<double> scores;
};
ScoreFile read_score_file(const std::string& path);

// CSV with header "id,label"; labels must be 0 or 1.
struct LabelFile {
  std::vector<std::string> ids;
  std::vector<int> labels;
};
LabelFile read_label_file(const std::string& path);

// Comment block stamped at the top of every CSV artifact:
//   # format_version=...
//   # tool=...
//   # args=...
//   # seed=...
std::string csv_header_block(const std::string& tool, const std::string& args,
                             std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace screenopt
