#include "malnorm/subgroup_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace malnorm {

namespace {

std::string strip(const std::string& line) {
  std::string out = line.substr(0, line.find('#'));
  const auto is_space = [](unsigned char c) { return std::isspace(c); };
  out.erase(out.begin(),
            std::find_if_not(out.begin(), out.end(), is_space));
  out.erase(std::find_if_not(out.rbegin(), out.rend(), is_space).base(),
            out.end());
  return out;
}

}  // namespace

SubgroupFile parse_subgroup_stream(std::istream& in, int min_rank) {
  SubgroupFile result;
  std::vector<std::pair<std::size_t, std::string>> words;
  std::string line;
  std::size_t line_no = 0;
  int declared = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = strip(line);
    if (text.empty()) continue;
    if (first_content && text.starts_with("rank=")) {
      first_content = false;
      try {
        declared = std::stoi(text.substr(5));
      } catch (const std::exception&) {
        throw parse_error(line_no, "invalid rank declaration '" + text + "'");
      }
      if (declared < 1) throw parse_error(line_no, "rank must be >= 1");
      continue;
    }
    first_content = false;
    words.emplace_back(line_no, text);
  }

  int rank = std::max(declared, min_rank);
  std::vector<Word> parsed;
  parsed.reserve(words.size());
  for (const auto& [no, text] : words) {
    try {
      Word w = Word::parse(text);
      if (declared && w.rank() > declared)
        throw std::invalid_argument("letter outside declared rank " +
                                    std::to_string(declared));
      rank = std::max(rank, w.rank());
      parsed.push_back(std::move(w));
    } catch (const std::invalid_argument& e) {
      throw parse_error(no, e.what());
    }
  }
  result.rank = std::max(rank, 1);
  for (Word& w : parsed) result.generators.push_back(w.with_rank(result.rank));
  return result;
}

SubgroupFile parse_subgroup_file(const std::string& path, int min_rank) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return parse_subgroup_stream(in, min_rank);
}

}  // namespace malnorm
