#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mocktrace/modfun.hpp"

namespace mocktrace {

inline constexpr int kCacheVersion = 1;

// "# jm m=<m> N=<N> version=1" then c(-m), ..., c(N), one per line, shortest round-trip decimal
std::string format_jm_expansion(int m, int N, const QExpansion& e);
// nullopt unless the header matches (m, N, version) and the body is a valid expansion of that length
std::optional<QExpansion> parse_jm_expansion(const std::string& text, int m, int N);

// MOCKTRACE_CACHE if set, else $XDG_CACHE_HOME/mocktrace, else $HOME/.cache/mocktrace, else ./.mocktrace-cache
std::filesystem::path default_cache_dir();

class JmCache {
 public:
  JmCache(std::filesystem::path dir, bool enabled);
  bool enabled() const { return enabled_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(int m, int N) const;

  // cached expansion if present and valid, otherwise computed and written; corruption is
  // reported in `warnings` and never returned
  QExpansion get(int m, int N);
  // runs get(m, kDefaultN) and installs the result in the shared evaluation table
  void prime(int m);

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  void store(int m, int N, const QExpansion& e);

  std::filesystem::path dir_;
  bool enabled_;
  std::vector<std::string> warnings_;
};

}  // namespace mocktrace
