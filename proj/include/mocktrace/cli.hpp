#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mocktrace/arith.hpp"

namespace mocktrace {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitVerify = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

enum class OutputFormat { json, csv };

struct RunConfig {
  std::string command;  // "trace", "verify thm2", ...
  std::filesystem::path cache_dir;
  bool use_cache = true;
  double tol = 0;  // 0: the command's default
  OutputFormat format = OutputFormat::json;
};

struct TableRange {
  i64 d_min = 1, d_max = 12;
  std::vector<i64> D = {1};
  std::vector<int> m = {1};
};

// one row per (D, m, d), d fastest; d neither 0 nor 1 mod 4 (and d = 0) gives a `skipped` row
void write_table(const TableRange& r, OutputFormat format, std::ostream& out);

// argv[0] is the program name
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mocktrace
