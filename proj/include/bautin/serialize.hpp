#pragma once

// JSON and CSV forms of the pipeline outputs.  Complex numbers are {re, im};
// an ExpPoly is {interval: [lo, hi], terms: [{p, q, re, im}, ...]} in term order.

#include <string>

#include <json.hpp>

#include "bautin/dde_sim.hpp"
#include "bautin/exp_poly.hpp"
#include "bautin/lyapunov.hpp"
#include "bautin/manifold.hpp"
#include "bautin/spectrum.hpp"

namespace bautin::io {

using json = nlohmann::ordered_json;

json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const ep::ExpPoly& f);
ep::ExpPoly exp_poly_from_json(const json& j);

json to_json(const spectrum::SpectrumSummary& s);
json to_json(const manifold::CoeffTable& t);
json to_json(const lyapunov::BifurcationReport& r);
json to_json(const dde::ScanResult& s);

// %.17g
std::string format_real(double v);

std::string trajectory_csv(const dde::Trajectory& traj);
std::string scan_csv(const dde::ScanResult& s);

}  // namespace bautin::io
