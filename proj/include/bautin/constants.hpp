#pragma once

#include <complex>
#include <numbers>

namespace bautin {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// The Hopf point analysed by the manifold and lyapunov modules.
inline constexpr double kDelay = kPi / 2.0;
inline constexpr double kGainAtHopf = -1.0;
inline constexpr double kOmegaAtHopf = 1.0;

}  // namespace bautin
