#include "mocktrace/cache.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mocktrace/errors.hpp"

namespace mocktrace {

namespace fs = std::filesystem;

namespace {
std::string header(int m, int N) {
  return "# jm m=" + std::to_string(m) + " N=" + std::to_string(N) + " version=" + std::to_string(kCacheVersion);
}

std::string shortest(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}
}  // namespace

std::string format_jm_expansion(int m, int N, const QExpansion& e) {
  std::string out = header(m, N) + "\n";
  for (int n = -m; n <= N; ++n) out += shortest(e.coeff(n)) + "\n";
  return out;
}

std::optional<QExpansion> parse_jm_expansion(const std::string& text, int m, int N) {
  // a missing final newline means a cut inside the last line
  if (text.empty() || text.back() != '\n') return std::nullopt;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header(m, N)) return std::nullopt;
  QExpansion e;
  e.lead = -m;
  while (std::getline(in, line)) {
    double v = 0;
    auto r = std::from_chars(line.data(), line.data() + line.size(), v);
    if (r.ec != std::errc() || r.ptr != line.data() + line.size()) return std::nullopt;
    e.coeffs.push_back(v);
  }
  if (e.last() != N || !jm_expansion_valid(m, e)) return std::nullopt;
  // the coefficients are integers; below 2^52 a double shows it
  for (double v : e.coeffs)
    if (std::abs(v) < 0x1p52 && v != std::round(v)) return std::nullopt;
  return e;
}

fs::path default_cache_dir() {
  if (const char* p = std::getenv("MOCKTRACE_CACHE"); p && *p) return p;
  if (const char* p = std::getenv("XDG_CACHE_HOME"); p && *p) return fs::path(p) / "mocktrace";
  if (const char* p = std::getenv("HOME"); p && *p) return fs::path(p) / ".cache" / "mocktrace";
  return ".mocktrace-cache";
}

JmCache::JmCache(fs::path dir, bool enabled) : dir_(std::move(dir)), enabled_(enabled) {}

fs::path JmCache::file_for(int m, int N) const {
  return dir_ / ("jm_m" + std::to_string(m) + "_N" + std::to_string(N) + "_v" + std::to_string(kCacheVersion) + ".txt");
}

QExpansion JmCache::get(int m, int N) {
  if (enabled_) {
    fs::path f = file_for(m, N);
    std::ifstream in(f);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      if (auto e = parse_jm_expansion(buf.str(), m, N)) return *e;
      warnings_.push_back("cache: " + f.string() + " is corrupt, recomputing");
    }
  }
  QExpansion e = jm_coeffs(m, N);
  if (enabled_) store(m, N, e);
  return e;
}

void JmCache::prime(int m) { jm_table_install(m, get(m, kDefaultN)); }

void JmCache::store(int m, int N, const QExpansion& e) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  fs::path f = file_for(m, N);
  fs::path tmp = f;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << format_jm_expansion(m, N, e);
    out.close();
    if (!out) {
      warnings_.push_back("cache: cannot write " + tmp.string());
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, f, ec);
  if (ec) {
    warnings_.push_back("cache: cannot rename into " + f.string() + ": " + ec.message());
    fs::remove(tmp, ec);
  }
}

}  // namespace mocktrace
