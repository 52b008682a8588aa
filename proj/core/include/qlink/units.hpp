#pragma once

#include <numbers>

namespace qlink {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Magnetic flux quantum h/2e in webers.
inline constexpr double kFluxQuantum = 2.067833848e-15;

// Everything inside the library is SI with angular frequencies. Config and
// data files speak Hz / ns / nH / pF per meter / dB and convert here.
namespace units {
inline constexpr double ns = 1e-9;
inline constexpr double us = 1e-6;
inline constexpr double nH = 1e-9;
inline constexpr double pF = 1e-12;
inline constexpr double kHz = 1e3;
inline constexpr double MHz = 1e6;
inline constexpr double GHz = 1e9;
}  // namespace units

constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

}  // namespace qlink
