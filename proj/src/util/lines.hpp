#pragma once

#include "cyclarb/types.hpp"

#include <fstream>
#include <functional>
#include <string>

namespace cyclarb::util {

/// Calls `fn(line_number, line)` for every non-empty line of `path`.
/// Line numbers are 1-based. Throws FileError if the file cannot be opened.
inline void for_each_line(const std::string& path,
                          const std::function<void(size_t, const std::string&)>& fn) {
  std::ifstream in(path);
  if (!in) throw FileError(path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(lineno, line);
  }
}

}  // namespace cyclarb::util
