#include "bautin/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "bautin/error.hpp"
#include "bautin/lyapunov.hpp"
#include "bautin/manifold.hpp"
#include "bautin/serialize.hpp"

namespace bautin::cli {

namespace {

bool parse_finite(const std::string& text, double& value) {
  try {
    std::size_t pos = 0;
    value = std::stod(text, &pos);
    return pos == text.size() && std::isfinite(value);
  } catch (const std::exception&) {
    return false;
  }
}

const CLI::Validator kFinite(
    [](std::string& text) -> std::string {
      double v = 0.0;
      return parse_finite(text, v) ? std::string() : "expected a finite real, got '" + text + "'";
    },
    "REAL");

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out_path) {
    write_atomically(*cfg.out_path, content);
  } else {
    out << content;
  }
}

std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

std::string l1_csv(const RunConfig& cfg) {
  if (cfg.steps < 1) throw DomainError("l1: --steps must be >= 1");
  if (!(cfg.c_min <= cfg.c_max)) throw DomainError("l1: need --c-min <= --c-max");
  std::string csv = "c,l1_closed,l1_cascade\n";
  for (int i = 0; i <= cfg.steps; ++i) {
    const double c = cfg.c_min + (cfg.c_max - cfg.c_min) * i / cfg.steps;
    csv += io::format_real(c) + "," + io::format_real(lyapunov::l1_closed_form(c)) + "," +
           io::format_real(lyapunov::l1_from_cascade(c)) + "\n";
  }
  return csv;
}

}  // namespace

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

double resolve_c_star(const std::string& text) {
  const auto cand = lyapunov::bautin_candidates();
  if (text == "c1") return cand.c1;
  if (text == "c2") return cand.c2;
  double v = 0.0;
  if (!parse_finite(text, v)) throw DomainError("--c-star must be c1, c2 or a finite real, got '" + text + "'");
  return v;
}

std::optional<int> parse(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bautin analysis of x' = a x(t-r) + x^2 + c x x(t-r)", "bautin"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "Write the result to this file instead of stdout");

  auto* sp = app.add_subcommand("spectrum", "Leading roots and root count right of sigma");
  sp->add_option("--a", cfg.a, "Gain a")->check(kFinite);
  sp->add_option("--r", cfg.r, "Delay r")->check(kFinite);
  sp->add_option("--sigma", cfg.sigma, "Counting abscissa")->check(kFinite);

  auto* co = app.add_subcommand("coeffs", "Center-manifold coefficient table at a = -1");
  co->add_option("--c", cfg.c, "Mixed coefficient c")->required()->check(kFinite);
  co->add_option("--order", cfg.order, "Highest total order (2..5)")->check(CLI::Range(2, 5));

  auto* l1 = app.add_subcommand("l1", "CSV of l1 by closed form and by cascade");
  l1->add_option("--c-min", cfg.c_min)->required()->check(kFinite);
  l1->add_option("--c-max", cfg.c_max)->required()->check(kFinite);
  l1->add_option("--steps", cfg.steps, "Number of intervals")->required()->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("report", "Bautin report at c1, c2 or a value");
  rep->add_option("--c-star", cfg.c_star)->required();

  auto* sim = app.add_subcommand("simulate", "Integrate from a constant history, CSV (t, x)");
  std::string csv_path;
  sim->add_option("--a", cfg.a)->required()->check(kFinite);
  sim->add_option("--c", cfg.c)->required()->check(kFinite);
  sim->add_option("--amp", cfg.amp, "Constant history value")->required()->check(kFinite);
  sim->add_option("--T", cfg.T, "Final time")->required()->check(kFinite);
  sim->add_option("--N", cfg.N, "Steps per delay (>= 200)");
  sim->add_option("--csv", csv_path, "CSV output file");

  auto* sc = app.add_subcommand("scan", "Two-cycle scan next to a Bautin point");
  std::string scan_csv_path, summary_path;
  sc->add_option("--c-star", cfg.c_star)->required();
  sc->add_option("--rows", cfg.rows)->check(CLI::PositiveNumber);
  sc->add_option("--mu-fraction", cfg.mu_fraction, "mu as a fraction of the fold value")->check(kFinite);
  sc->add_option("--csv", scan_csv_path, "CSV output file");
  sc->add_option("--summary", summary_path, "JSON summary file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  if (!out_path.empty()) cfg.out_path = out_path;
  if (sp->parsed()) cfg.subcommand = Subcommand::spectrum;
  if (co->parsed()) cfg.subcommand = Subcommand::coeffs;
  if (l1->parsed()) {
    cfg.subcommand = Subcommand::l1;
    cfg.format = Format::csv;
  }
  if (rep->parsed()) cfg.subcommand = Subcommand::report;
  if (sim->parsed()) {
    cfg.subcommand = Subcommand::simulate;
    cfg.format = Format::csv;
    if (!csv_path.empty()) cfg.out_path = csv_path;
  }
  if (sc->parsed()) {
    cfg.subcommand = Subcommand::scan;
    cfg.format = Format::csv;
    if (!scan_csv_path.empty()) cfg.out_path = scan_csv_path;
    if (!summary_path.empty()) cfg.summary_path = summary_path;
  }
  return std::nullopt;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::spectrum: {
        const auto s = spectrum::summarize({cfg.a, 0.0, cfg.r}, cfg.sigma);
        emit(cfg, dump(io::to_json(s)), out);
        break;
      }
      case Subcommand::coeffs:
        emit(cfg, dump(io::to_json(manifold::build_coeff_table(cfg.c, cfg.order))), out);
        break;
      case Subcommand::l1:
        emit(cfg, l1_csv(cfg), out);
        break;
      case Subcommand::report:
        emit(cfg, dump(io::to_json(lyapunov::bautin_report(resolve_c_star(cfg.c_star)))), out);
        break;
      case Subcommand::simulate: {
        const auto traj = dde::integrate({cfg.a, cfg.c, kDelay}, cfg.amp, cfg.T, cfg.N);
        if (traj.diverged) err << "diverged at t = " << io::format_real(traj.divergence_time) << "\n";
        emit(cfg, io::trajectory_csv(traj), out);
        break;
      }
      case Subcommand::scan: {
        dde::ScanSpec spec;
        spec.rows = cfg.rows;
        spec.mu_fraction = cfg.mu_fraction;
        const auto res = dde::two_cycle_scan(resolve_c_star(cfg.c_star), spec);
        if (!res.feasible) throw DomainError("scan: " + res.message);
        emit(cfg, io::scan_csv(res), out);
        const std::string summary = dump(io::to_json(res));
        if (cfg.summary_path) {
          write_atomically(*cfg.summary_path, summary);
        } else if (cfg.out_path) {
          out << summary;
        }
        break;
      }
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (auto code = parse(argc, argv, cfg, out, err)) return *code;
  return run(cfg, out, err);
}

}  // namespace bautin::cli
