#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "qlink/device/device_params.hpp"
#include "qlink/error.hpp"
#include "qlink/pulse/calibration.hpp"
#include "qlink/pulse/schedule.hpp"

using namespace qlink;
using namespace qlink::pulse;

namespace {

const double kKc = 1.0 / 22e-9;
const double kTau = 266.197e-9;

double trapezoid(const PulseSchedule& s) {
  double sum = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) sum += 0.5 * (s.kappa[i] + s.kappa[i - 1]) * (s.t[i] - s.t[i - 1]);
  return sum;
}

}  // namespace

TEST(Grid, EvenIntervalCount) {
  for (double w : {1e-9, 1.05e-9, 10.3e-9}) {
    const auto t = make_grid(w, 0.1e-9);
    EXPECT_EQ((t.size() - 1) % 2, 0u);
    EXPECT_GE(t.back(), w - 1e-18);
  }
  EXPECT_THROW(make_grid(1e-9, 0.0), InvalidParameter);
}

TEST(Logistic, MidpointAndLead) {
  EXPECT_DOUBLE_EQ(logistic_rate(kKc, 0.0), kKc / 2);
  EXPECT_NEAR(logistic_rate(kKc, -logistic_lead(kKc)) / kKc, 1e-3, 1e-15);
  EXPECT_NEAR(shaped_window(kKc, kTau) * 1e9, 570.1, 0.1);
}

TEST(Shaped, ReceiverMirrorsSender) {
  const double dt = 0.05e-9;
  const auto p = shaped_schedules(kKc, kTau, shaped_window(kKc, kTau), dt);
  const double lead = logistic_lead(kKc);
  for (std::size_t i = 0; i < p.sender.size(); i += 97) {
    const double t = p.sender.t[i];
    EXPECT_NEAR(p.sender.kappa[i], kKc / (1 + std::exp(-kKc * (t - lead))), 1e-6 * kKc);
    const double mirror = 2 * lead + kTau - t;
    const double expect = mirror >= 0 ? kKc / (1 + std::exp(-kKc * (mirror - lead))) : 0.0;
    EXPECT_NEAR(p.receiver.kappa[i], expect, 1e-6 * kKc);
  }
}

TEST(Shaped, RefusesRatesAboveCap) {
  EXPECT_THROW(shaped_schedules(kKc, kTau, 600e-9, 0.05e-9, 0.5 * kKc), InvalidParameter);
  EXPECT_THROW(shaped_schedules(kKc, kTau, 300e-9, 0.05e-9), ConfigError);
}

TEST(Fractional, IntegratedRateGivesResidual) {
  // exp(-int kappa) is the no-echo residual; the law asks for 1 - alpha.
  for (double alpha = 0.1; alpha < 0.95; alpha += 0.1) {
    const auto s = fractional_schedule(kKc, alpha, 2 * logistic_lead(kKc) + 12 / kKc, 0.02e-9);
    EXPECT_NEAR(std::exp(-trapezoid(s)), 1 - alpha, 2e-3) << alpha;
  }
}

TEST(Fractional, FullEmissionMatchesLogisticShape) {
  const auto f = fractional_schedule(kKc, 1.0, 400e-9, 0.1e-9);
  const double lead = logistic_lead(kKc);
  for (std::size_t i = 0; i < f.size(); i += 50) {
    EXPECT_NEAR(f.kappa[i], logistic_rate(kKc, f.t[i] - lead), 1e-9 * kKc);
  }
}

TEST(Distort, ScaleAndSkew) {
  const auto s = constant_schedule(1e7, 10e-9, 1e-9);
  const auto d = distort(s, {1.2, 2e-9});
  EXPECT_DOUBLE_EQ(d.kappa[0], 0.0);
  EXPECT_DOUBLE_EQ(d.kappa[1], 0.0);
  EXPECT_DOUBLE_EQ(d.kappa[5], 1.2e7);
}

class Chain : public ::testing::Test {
 protected:
  device::DeviceParams dev = device::DeviceParams::defaults();
  double Z0 = device::cable_derived_params(dev.cable).Z0;
};

TEST_F(Chain, KappaFluxRoundTrip) {
  const auto s = shaped_schedules(kKc, kTau, shaped_window(kKc, kTau), 0.5e-9);
  const auto flux = kappa_to_flux(s.sender, dev.coupler_a, dev.qubits[1], Z0);
  const auto back = flux_to_kappa(flux, dev.coupler_a, dev.qubits[1], Z0);
  for (std::size_t i = 0; i < flux.size(); ++i) {
    EXPECT_NEAR(back[i], s.sender.kappa[i], 1e-9 * kKc);
    EXPECT_GE(flux[i], device::coupler_off_bias(dev.coupler_a) - 1e-12);
    EXPECT_LE(flux[i], 0.5 + 1e-12);
  }
}

TEST_F(Chain, OutOfRangeNamesFirstSample) {
  auto s = constant_schedule(0.5 * kKc, 5e-9, 1e-9);
  s.kappa[3] = 10 * kKc;
  s.kappa[4] = 20 * kKc;
  try {
    kappa_to_flux(s, dev.coupler_a, dev.qubits[1], Z0);
    FAIL();
  } catch (const OutOfRange& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}

TEST_F(Chain, CompensationCancelsShift) {
  const auto s = shaped_schedules(kKc, kTau, shaped_window(kKc, kTau), 1e-9).sender;
  const auto comp = compensation_schedule(s, dev.qubits[1], dev.coupler_a, Z0);
  const auto shift = induced_shift(s, dev.qubits[1], dev.coupler_a, Z0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(comp[i] + shift[i], 0.0, 1e-6);
    EXPECT_NEAR(comp[i], 0.5 * std::sqrt(s.kappa[i] * Z0 / (dev.coupler_a.L_g + dev.qubits[1].L_J)), 1e-3);
  }
}

TEST(KappaTable, InterpolatesAndInverts) {
  KappaFluxTable tab({0.3, 0.4, 0.5}, {0.0, 1e7, 4e7});
  EXPECT_DOUBLE_EQ(tab.kappa_at(0.45), 2.5e7);
  EXPECT_NEAR(tab.flux_at(2.5e7), 0.45, 1e-12);
  EXPECT_THROW(tab.flux_at(5e7), OutOfRange);
  EXPECT_THROW(KappaFluxTable({0.3, 0.2}, {0.0, 1.0}), InvalidParameter);
}

TEST(KappaTable, LoadsCsv) {
  const std::string path = std::string(QLINK_TEST_TMP) + "/table.csv";
  {
    std::ofstream out(path);
    out << "# measured\nflux,kappa_per_ns\n0.3,0\n0.5,0.04\n";
  }
  const auto tab = KappaFluxTable::load_csv(path);
  EXPECT_NEAR(tab.kappa_max(), 4e7, 1e-3);
}

class Calibration : public ::testing::Test {
 protected:
  CalibrationConfig cfg = [] {
    CalibrationConfig c;
    c.kappa_c = kKc;
    c.channel.tau_st = kTau;
    return c;
  }();
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

TEST_F(Calibration, ResidualFollowsLaw) {
  for (double a : grid) EXPECT_NEAR(fractional_residual(kKc, a, cfg), 1 - a, 0.01);
}

TEST_F(Calibration, ClassifiesDistortions) {
  EXPECT_EQ(calibration_scan(grid, cfg).verdict, CouplingVerdict::Calibrated);
  cfg.distortion.kappa_scale = 0.8;
  const auto under = calibration_scan(grid, cfg);
  EXPECT_EQ(under.verdict, CouplingVerdict::UnderCoupling);
  // Too little coupling leaves population above the ideal line.
  EXPECT_GT(under.deviation[4], 0.0);
  cfg.distortion.kappa_scale = 1.2;
  const auto over = calibration_scan(grid, cfg);
  EXPECT_EQ(over.verdict, CouplingVerdict::OverCoupling);
  EXPECT_LT(over.deviation[4], 0.0);
}

TEST_F(Calibration, NeedsThreePoints) {
  EXPECT_THROW(calibration_scan({0.5, 0.6}, cfg), InvalidParameter);
  EXPECT_THROW(calibration_scan({0.0, 0.5, 0.6}, cfg), InvalidParameter);
}
