#include "bautin/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "bautin/error.hpp"

namespace bautin::io {

namespace {

std::string order_key(manifold::Order o) { return std::to_string(o.first) + std::to_string(o.second); }

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

json to_json(const ep::ExpPoly& f) {
  json terms = json::array();
  for (const auto& [key, coef] : f.terms()) {
    terms.push_back({{"p", key.power}, {"q", key.freq}, {"re", coef.real()}, {"im", coef.imag()}});
  }
  return json{{"interval", {f.interval().lo, f.interval().hi}}, {"terms", terms}};
}

ep::ExpPoly exp_poly_from_json(const json& j) {
  const auto& iv = j.at("interval");
  if (!iv.is_array() || iv.size() != 2) throw DomainError("ExpPoly JSON: interval must be [lo, hi]");
  ep::ExpPoly f(ep::Interval{iv[0].get<double>(), iv[1].get<double>()});
  for (const auto& t : j.at("terms")) {
    const int p = t.at("p").get<int>();
    if (p < 0) throw DomainError("ExpPoly JSON: negative power");
    f += ep::ExpPoly::monomial(f.interval(), p, t.at("q").get<int>(),
                               {t.at("re").get<double>(), t.at("im").get<double>()});
  }
  return f;
}

json to_json(const spectrum::SpectrumSummary& s) {
  return json{{"mu", s.mu},
              {"omega", s.omega},
              {"mu_prime", s.mu_prime},
              {"right_count", s.right_count},
              {"sigma", s.sigma},
              {"box", {{"re_min", s.box.re_min}, {"re_max", s.box.re_max}, {"im_min", s.box.im_min}, {"im_max", s.box.im_max}}}};
}

json to_json(const manifold::CoeffTable& t) {
  json F = json::object(), g = json::object(), w = json::object();
  for (const auto& [o, v] : t.F) F[order_key(o)] = to_json(v);
  for (const auto& [o, v] : t.g) g[order_key(o)] = to_json(v);
  for (const auto& [o, v] : t.w) {
    w[order_key(o)] = {{"at0", to_json(v.at0)}, {"at_mr", to_json(v.at_mr)}, {"fn", to_json(v.fn)}};
  }
  return json{{"c", t.c}, {"F", F}, {"g", g}, {"w", w}};
}

json to_json(const lyapunov::BifurcationReport& r) {
  return json{{"c_star", r.c_star},
              {"l1_at", r.l1_at},
              {"dl1_dc", r.dl1_dc},
              {"l2", r.l2},
              {"mu_prime", r.mu_prime},
              {"jacobian_det", r.jacobian_det},
              {"classification", lyapunov::to_string(r.classification)}};
}

json to_json(const dde::ScanResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"a", r.a},
                    {"c", r.c},
                    {"mu", r.mu},
                    {"l1", r.l1},
                    {"l2", r.l2},
                    {"mu_fold", r.mu_fold},
                    {"rho_in", r.prediction.two_cycles ? json(r.prediction.rho_in) : json(nullptr)},
                    {"rho_out", r.prediction.two_cycles ? json(r.prediction.rho_out) : json(nullptr)},
                    {"inner_amp", optional_real(r.inner_amp)},
                    {"inner_period", r.inner_amp ? json(r.inner_period) : json(nullptr)},
                    {"inner_stability", r.inner_attracting ? "attracting" : "unconfirmed"},
                    {"outer_amp", optional_real(r.outer_amp)},
                    {"outer_stability", dde::to_string(dde::Stability::repelling_estimated)},
                    {"flags", r.flags}});
  }
  return json{{"c_star", s.c_star},
              {"direction", s.direction},
              {"feasible", s.feasible},
              {"message", s.message},
              {"rows", rows}};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trajectory_csv(const dde::Trajectory& traj) {
  std::string out = "t,x\n";
  out.reserve(out.size() + traj.x.size() * 48);
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    out += format_real(traj.t(k));
    out += ',';
    out += format_real(traj.x[k]);
    out += '\n';
  }
  return out;
}

std::string scan_csv(const dde::ScanResult& s) {
  std::ostringstream out;
  out << "a,c,inner_amp,outer_amp,mu,l1,l2,rho_in,rho_out,flags\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  for (const auto& r : s.rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    const bool two = r.prediction.two_cycles;
    out << format_real(r.a) << ',' << format_real(r.c) << ',' << opt(r.inner_amp) << ',' << opt(r.outer_amp) << ','
        << format_real(r.mu) << ',' << format_real(r.l1) << ',' << format_real(r.l2) << ','
        << (two ? format_real(r.prediction.rho_in) : "") << ',' << (two ? format_real(r.prediction.rho_out) : "")
        << ',' << flags << '\n';
  }
  return out.str();
}

}  // namespace bautin::io
