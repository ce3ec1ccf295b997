#include "mocktrace/cli.hpp"

#include <charconv>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "mocktrace/cache.hpp"
#include "mocktrace/errors.hpp"
#include "mocktrace/verify.hpp"

namespace mocktrace {

namespace {
std::string shortest(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void need(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

void check_disc_pair(i64 d, i64 D) {
  need(is_discriminant(d), "d = " + std::to_string(d) + " is not 0 or 1 mod 4");
  need(D > 0 && is_fundamental(D), "D = " + std::to_string(D) + " is not a positive fundamental discriminant");
  need(d != 0, "d must be nonzero");
}

void check_m(int m, int lo) {
  need(m >= lo && m <= kMaxM, "m = " + std::to_string(m) + " outside [" + std::to_string(lo) + ", 10]");
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int verdict(std::ostream& out, const json& report) {
  print_json(out, report);
  return report.at("pass").get<bool>() ? kExitOk : kExitVerify;
}

std::string params_field(const std::map<std::string, double>& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : ";") + k + "=" + shortest(v);
  return s;
}

std::vector<DiscPair> pair_grid(const std::optional<i64>& d, const std::optional<i64>& D) {
  if (d && D) return {{*d, *D}};
  need(!d && !D, "give both --d and --D, or neither for the default grid");
  return kloosterman_grid();
}
}  // namespace

void write_table(const TableRange& r, OutputFormat format, std::ostream& out) {
  need(r.d_min <= r.d_max, "d-min exceeds d-max");
  for (i64 D : r.D) need(D > 0 && is_fundamental(D), "D = " + std::to_string(D) + " is not a positive fundamental discriminant");
  for (int m : r.m) check_m(m, 1);
  if (format == OutputFormat::csv) out << "d,D,m,value,method,err_estimate,params\n";
  for (i64 D : r.D)
    for (int m : r.m)
      for (i64 d = r.d_min; d <= r.d_max; ++d) {
        std::string head = std::to_string(d) + "," + std::to_string(D) + "," + std::to_string(m);
        if (d == 0 || !is_discriminant(d)) {
          const char* reason = d == 0 ? "zero" : "not_a_discriminant";
          if (format == OutputFormat::csv)
            out << head << ",,skipped,,reason=" << reason << "\n";
          else
            out << json{{"d", d}, {"D", D}, {"m", m}, {"method", "skipped"}, {"reason", reason}}.dump() << "\n";
          continue;
        }
        TraceResult t = trace(d, D, m);
        if (format == OutputFormat::csv)
          out << head << "," << shortest(t.value) << "," << to_string(t.method) << "," << shortest(t.err_estimate) << ","
              << params_field(t.params) << "\n";
        else
          out << json(t).dump() << "\n";
      }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Traces of j_m over quadratic-form classes and their Kloosterman-series counterparts", "mocktrace"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string cache_dir;
  bool no_cache = false;
  app.add_option("--cache-dir", cache_dir, "q-expansion cache directory (default: $MOCKTRACE_CACHE)");
  app.add_flag("--no-cache", no_cache, "do not read or write the cache");

  i64 d = 0, D = 0, disc = 0, bound = 0, cmax_one = 0;
  int m = 1, N = kDefaultN, m_max = 6;
  double s = 2.0, tol = 0;
  std::optional<i64> od, oD;
  std::vector<double> deltas;
  std::vector<i64> cmaxes;
  std::string format = "csv";
  TableRange range;
  std::vector<int> m_list;
  std::vector<i64> D_list;

  auto add_dD = [&](CLI::App* c) {
    c->add_option("--d", d, "discriminant d")->required();
    c->add_option("--D", D, "fundamental discriminant D")->required();
  };

  CLI::App* c_trace = app.add_subcommand("trace", "trace of j_m as JSON");
  add_dD(c_trace);
  c_trace->add_option("--m", m, "index of j_m")->required();
  c_trace->add_option("--tol", tol, "quadrature tolerance");

  CLI::App* c_coeff = app.add_subcommand("coeff", "a(d, D) from the Kloosterman series as JSON");
  add_dD(c_coeff);
  c_coeff->add_option("--deltas", deltas, "offsets s - 3/4")->delimiter(',');
  c_coeff->add_option("--cmax", cmaxes, "c cutoffs, one per delta")->delimiter(',');

  CLI::App* c_qforms = app.add_subcommand("qforms", "quadratic forms");
  c_qforms->require_subcommand(1);
  CLI::App* c_qlist = c_qforms->add_subcommand("list", "one class representative per line");
  c_qlist->add_option("--disc", disc, "discriminant")->required();

  CLI::App* c_jm = app.add_subcommand("jm", "q-expansions of j_m");
  c_jm->require_subcommand(1);
  CLI::App* c_jmc = c_jm->add_subcommand("coeffs", "coefficients c_m(-m..N) in the cache format");
  c_jmc->add_option("--m", m, "index")->required();
  c_jmc->add_option("--n", N, "last exponent")->required();

  CLI::App* c_verify = app.add_subcommand("verify", "cross-checks; exit 2 on discrepancy");
  c_verify->require_subcommand(1);
  CLI::App* v_prop1 = c_verify->add_subcommand("prop1", "box-truncated integral vs Kloosterman series");
  add_dD(v_prop1);
  v_prop1->add_option("--m", m, "index")->required();
  v_prop1->add_option("--s", s, "spectral parameter in [1.25, 3]")->required();
  v_prop1->add_option("--bound", bound, "coset box bound");
  v_prop1->add_option("--cmax", cmax_one, "c cutoff of the series");
  v_prop1->add_option("--tol", tol, "relative tolerance (default 1e-2)");
  CLI::App* v_thm2 = c_verify->add_subcommand("thm2", "trace vs divisor sum of coefficients");
  add_dD(v_thm2);
  v_thm2->add_option("--m", m, "index")->required();
  v_thm2->add_option("--tol", tol, "bound on the combined error (default 0.1)");
  CLI::App* v_kl = c_verify->add_subcommand("kloosterman", "finite S_m / K+ identity");
  v_kl->add_option("--cmax", cmax_one, "largest c (default 50)");
  v_kl->add_option("--mmax", m_max, "largest m (default 6)");
  v_kl->add_option("--d", od, "single pair instead of the default grid");
  v_kl->add_option("--D", oD, "single pair instead of the default grid");
  CLI::App* v_sym = c_verify->add_subcommand("symmetry", "K+(d, D; 4c) = K+(D, d; 4c)");
  v_sym->add_option("--cmax", cmax_one, "largest c (default 100)");
  v_sym->add_option("--d", od, "single pair instead of the default grid");
  v_sym->add_option("--D", oD, "single pair instead of the default grid");
  CLI::App* v_values = c_verify->add_subcommand("values", "classical values");

  CLI::App* c_table = app.add_subcommand("table", "traces over ranges of d, D, m");
  c_table->add_option("--d-min", range.d_min, "smallest d");
  c_table->add_option("--d-max", range.d_max, "largest d");
  c_table->add_option("--D", D_list, "fundamental discriminants")->delimiter(',');
  c_table->add_option("--m", m_list, "indices")->delimiter(',');
  c_table->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "mocktrace: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  cfg.cache_dir = cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);
  cfg.use_cache = !no_cache;
  cfg.tol = tol;
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  JmCache cache(cfg.cache_dir, cfg.use_cache);
  auto flush_warnings = [&] {
    for (const auto& w : cache.warnings()) err << "warning: " << w << "\n";
  };

  try {
    int code = kExitOk;
    need(tol >= 0, "--tol must be positive");
    if (c_trace->parsed()) {
      cfg.command = "trace";
      check_disc_pair(d, D);
      check_m(m, 0);
      cache.prime(m);
      TraceOptions o;
      if (tol > 0) o.quad.abs_tol = tol;
      print_json(out, json(trace(d, D, m, o)));
    } else if (c_coeff->parsed()) {
      cfg.command = "coeff";
      check_disc_pair(d, D);
      CoeffOptions o;
      if (!deltas.empty()) o.deltas = deltas;
      if (!cmaxes.empty()) o.c_max = cmaxes;
      need(o.deltas.size() == o.c_max.size(), "--deltas and --cmax need the same length");
      for (double x : o.deltas) need(x > 0 && x <= 1, "deltas must lie in (0, 1]");
      for (i64 x : o.c_max) need(x >= 100 && x <= 2000000, "cmax values must lie in [100, 2e6]");
      print_json(out, json(coeff_a(d, D, o)));
    } else if (c_qlist->parsed()) {
      cfg.command = "qforms list";
      need(disc != 0 && is_discriminant(disc), "disc = " + std::to_string(disc) + " is not a nonzero discriminant");
      ClassList cl = classes(disc);
      for (size_t i = 0; i < cl.reps.size(); ++i) {
        json j = cl.reps[i];
        if (!cl.stab_orders.empty()) j["stab_order"] = cl.stab_orders[i];
        out << j.dump() << "\n";
      }
    } else if (c_jmc->parsed()) {
      cfg.command = "jm coeffs";
      check_m(m, 0);
      need(N >= 1 && N <= kMaxSeriesN, "n = " + std::to_string(N) + " outside [1, 64]");
      out << format_jm_expansion(m, N, cache.get(m, N));
    } else if (v_prop1->parsed()) {
      cfg.command = "verify prop1";
      need(s >= 1.25 && s <= 3, "s must lie in [1.25, 3]");
      need(bound == 0 || bound >= 10, "--bound must be at least 10");
      need(cmax_one >= 0 && cmax_one <= 2000000, "--cmax must lie in [1, 2e6]");
      check_m(m, 0);
      Prop1Check c{d, D, m, s, bound, cmax_one, tol > 0 ? tol : 1e-2};
      code = verdict(out, verify_prop1(c));
    } else if (v_thm2->parsed()) {
      cfg.command = "verify thm2";
      check_disc_pair(d, D);
      check_m(m, 1);
      cache.prime(m);
      code = verdict(out, verify_thm2(d, D, m, tol > 0 ? tol : 0.1));
    } else if (v_kl->parsed()) {
      cfg.command = "verify kloosterman";
      i64 cm = cmax_one > 0 ? cmax_one : 50;
      need(cm <= 1000, "--cmax must lie in [1, 1000]");
      need(m_max >= 0 && m_max <= 50, "--mmax must lie in [0, 50]");
      code = verdict(out, verify_kloosterman(pair_grid(od, oD), cm, m_max));
    } else if (v_sym->parsed()) {
      cfg.command = "verify symmetry";
      i64 cm = cmax_one > 0 ? cmax_one : 100;
      need(cm <= 1000, "--cmax must lie in [1, 1000]");
      code = verdict(out, verify_symmetry(pair_grid(od, oD), cm));
    } else if (v_values->parsed()) {
      cfg.command = "verify values";
      cache.prime(1);
      code = verdict(out, verify_values());
    } else if (c_table->parsed()) {
      cfg.command = "table";
      if (!D_list.empty()) range.D = D_list;
      if (!m_list.empty()) range.m = m_list;
      for (int mm : range.m) check_m(mm, 1), cache.prime(mm);
      write_table(range, cfg.format, out);
    }
    flush_warnings();
    return code;
  } catch (const DomainError& e) {
    flush_warnings();
    err << "mocktrace: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ConfigError& e) {
    flush_warnings();
    err << "mocktrace: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ContractViolation& e) {
    flush_warnings();
    err << "mocktrace: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    flush_warnings();
    err << "mocktrace: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"mocktrace"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mocktrace
