#ifndef MALNORM_SUBGROUP_IO_HPP
#define MALNORM_SUBGROUP_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "malnorm/word.hpp"

namespace malnorm {

/// Parse failure with the 1-based line it occurred on.
struct parse_error : std::runtime_error {
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;
};

struct SubgroupFile {
  int rank = 0;
  std::vector<Word> generators;
};

/// Subgroup file format: one generator word per line, '#' starts a comment,
/// blank lines ignored. The first non-comment line may be "rank=N";
/// otherwise the rank is inferred from the letters used (and raised to
/// min_rank if given).
SubgroupFile parse_subgroup_stream(std::istream& in, int min_rank = 0);
SubgroupFile parse_subgroup_file(const std::string& path, int min_rank = 0);

}  // namespace malnorm

#endif
