#include "xslab/riskstats.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "xslab/rng.hpp"
#include "xslab/stats.hpp"

using namespace xslab;

TEST_CASE("sharpe is (mean/SD)*sqrt(12) with the sample SD") {
  // mean exactly 0.01 and sample SD exactly 0.02 by construction
  std::vector<double> r;
  for (int i = 0; i < 6; ++i) r.push_back(-0.01);
  for (int i = 0; i < 6; ++i) r.push_back(0.03);
  r.push_back(0.01);
  CHECK(mean(r) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(sample_sd(r) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(sharpe(r) == doctest::Approx(0.5 * std::sqrt(12.0)).epsilon(1e-12));

  std::vector<double> zero_mean = {0.01, -0.01, 0.02, -0.02, 0.01, -0.01,
                                   0.02, -0.02, 0.01, -0.01, 0.02, -0.02};
  CHECK(sharpe(zero_mean) == doctest::Approx(0.0));

  std::vector<double> constant(24, 0.004);
  CHECK_THROWS_AS(sharpe(constant), std::invalid_argument);
  std::vector<double> too_short(11, 0.01);
  CHECK_THROWS_AS(sharpe(too_short), std::invalid_argument);
}

TEST_CASE("tstat_of_mean matches the Sharpe arithmetic over 23 years") {
  // monthly Sharpe 1.2/sqrt(12) over 276 months gives t = 1.2 * sqrt(23)
  const int n = 276;
  std::vector<double> r;
  const double target_monthly = 1.2 / std::sqrt(12.0);
  // alternating series with mean m and SD s chosen so m/s is the target
  const double s = 0.02;
  const double m = target_monthly * s;
  for (int i = 0; i < n; ++i) r.push_back(i % 2 == 0 ? m + s : m - s);
  // sample SD of the alternating pattern is s * sqrt(n/(n-1))
  const double expected =
      (m / (s * std::sqrt(double(n) / double(n - 1)))) * std::sqrt(double(n));
  CHECK(tstat_of_mean(r) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(1.2 * std::sqrt(23.0)).epsilon(0.005));
  CHECK(expected == doctest::Approx(5.755).epsilon(0.01));

  std::vector<double> zero = {0.01, -0.01, 0.01, -0.01};
  CHECK(tstat_of_mean(zero) == doctest::Approx(0.0));
  std::vector<double> one = {0.01};
  CHECK_THROWS_AS(tstat_of_mean(one), std::invalid_argument);
}

TEST_CASE("beta_full and downside_beta") {
  RandomStream rng(100, 1, 0);
  std::vector<double> mkt(600);
  for (auto& m : mkt) m = rng.gaussian(0.0, 0.04);

  CHECK(beta_full(mkt, mkt) == doctest::Approx(1.0));
  CHECK(downside_beta(mkt, mkt) == doctest::Approx(1.0));

  // independent returns: both betas within 3 standard errors of zero
  std::vector<double> indep(mkt.size());
  for (auto& r : indep) r = rng.gaussian(0.0, 0.05);
  const double se = 0.05 / (0.04 * std::sqrt(double(mkt.size())));
  CHECK(std::abs(beta_full(indep, mkt)) < 3.0 * se);

  // exposure only on negative market months
  std::vector<double> down(mkt.size());
  for (std::size_t i = 0; i < mkt.size(); ++i) down[i] = mkt[i] < 0.0 ? mkt[i] : 0.0;
  CHECK(downside_beta(down, mkt) == doctest::Approx(1.0));
  CHECK(beta_full(down, mkt) < 1.0);
  CHECK(beta_full(down, mkt) > 0.0);

  std::vector<double> up = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06};
  CHECK_THROWS_AS(downside_beta(up, up), std::invalid_argument);
}

TEST_CASE("skew_proxy is (mean - median)/SD") {
  std::vector<double> sym = {-0.02, -0.01, 0.0, 0.01, 0.02};
  CHECK(skew_proxy(sym) == doctest::Approx(0.0));

  std::vector<double> skewed = {-1.0, 0.0, 0.0, 0.0, 0.0, 5.0};
  const double m = 4.0 / 6.0;
  double ss = 0.0;
  for (double v : skewed) ss += (v - 4.0 / 6.0) * (v - 4.0 / 6.0);
  const double sd = std::sqrt(ss / 5.0);
  CHECK(skew_proxy(skewed) == doctest::Approx((m - 0.0) / sd).epsilon(1e-12));
  CHECK(skew_proxy(skewed) > 0.0);

  std::vector<double> constant(10, 1.0);
  CHECK_THROWS_AS(skew_proxy(constant), std::invalid_argument);
}

TEST_CASE("median conventions") {
  CHECK(median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);
  CHECK(median(std::vector<double>{4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("tail_prob counts months below mean - 2 SD") {
  // one extreme point among 100
  std::vector<double> r(99, 0.01);
  for (int i = 0; i < 50; ++i) r[i] = -0.01;  // keep some variance
  r.push_back(-5.0);
  CHECK(tail_prob(r) == doctest::Approx(0.01));

  RandomStream rng(2024, 2, 0);
  std::vector<double> gauss(100000);
  for (auto& g : gauss) g = rng.gaussian(0.0, 1.0);
  // normal-CDF oracle: Phi(-2) = erfc(2/sqrt(2))/2
  const double expected = 0.5 * std::erfc(2.0 / std::sqrt(2.0));
  CHECK(tail_prob(gauss) == doctest::Approx(expected).epsilon(0.2));
  CHECK(std::abs(tail_prob(gauss) - expected) < 0.004);

  std::vector<double> flat(20, 0.1);
  CHECK_THROWS_AS(tail_prob(flat), std::invalid_argument);
}

namespace {

SignalFrame make_frame(MonthStamp t, const std::map<FirmId, double>& ranks) {
  SignalFrame f;
  f.month = t;
  f.values = ranks;
  f.ranks = ranks;
  return f;
}

}  // namespace

TEST_CASE("persistence: frozen ranks give exactly 1") {
  std::map<FirmId, double> ranks = {{"A", -0.5}, {"B", -0.25}, {"C", 0.25}, {"D", 0.5}};
  std::vector<SignalFrame> frames;
  for (int t = 0; t < 10; ++t) frames.push_back(make_frame(MonthStamp{2000, 1}.plus_months(t), ranks));
  CHECK(persistence(frames) == 1.0);
}

TEST_CASE("persistence: iid signal has slope near zero, AR(1) recovers rho") {
  RandomStream rng(17, 3, 0);
  const int firms = 150, months = 120;

  std::vector<SignalFrame> iid;
  for (int t = 0; t < months; ++t) {
    std::map<FirmId, double> ranks;
    for (int i = 0; i < firms; ++i)
      ranks["F" + std::to_string(i)] = rng.uniform(-0.5, 0.5);
    iid.push_back(make_frame(MonthStamp{2000, 1}.plus_months(t), ranks));
  }
  const double n_pairs = double(firms * (months - 1));
  const double se = 1.0 / std::sqrt(n_pairs);  // unit-variance AR(1) slope SE
  CHECK(std::abs(persistence(iid)) < 3.0 * se);

  const double rho = 0.97;
  std::vector<double> state(firms);
  for (auto& s : state) s = rng.gaussian(0.0, 1.0);
  std::vector<SignalFrame> ar;
  for (int t = 0; t < months; ++t) {
    std::map<FirmId, double> ranks;
    for (int i = 0; i < firms; ++i) {
      state[i] = rho * state[i] + rng.gaussian(0.0, std::sqrt(1.0 - rho * rho));
      ranks["F" + std::to_string(i)] = state[i];
    }
    ar.push_back(make_frame(MonthStamp{2000, 1}.plus_months(t), ranks));
  }
  CHECK(persistence(ar) == doctest::Approx(rho).epsilon(0.02));
}

TEST_CASE("persistence needs overlapping consecutive months") {
  std::vector<SignalFrame> one = {make_frame({2000, 1}, {{"A", 0.1}, {"B", -0.1}})};
  CHECK_THROWS_AS(persistence(one), std::invalid_argument);

  std::vector<SignalFrame> constant;
  for (int t = 0; t < 5; ++t)
    constant.push_back(make_frame(MonthStamp{2000, 1}.plus_months(t), {{"A", 0.0}, {"B", 0.0}}));
  CHECK_THROWS_AS(persistence(constant), std::invalid_argument);  // zero variance in the lag
}

TEST_CASE("scaling behaviour: sharpe and skew are scale-free, beta is not") {
  RandomStream rng(55, 6, 0);
  std::vector<double> mkt(60), r(60), r3(60), mkt2(60);
  for (int i = 0; i < 60; ++i) {
    mkt[i] = rng.gaussian(0.001, 0.04);
    r[i] = 0.8 * mkt[i] + rng.gaussian(0.002, 0.03);
    r3[i] = 3.0 * r[i];
    mkt2[i] = 2.0 * mkt[i];
  }
  CHECK(sharpe(r3) == doctest::Approx(sharpe(r)).epsilon(1e-12));
  CHECK(skew_proxy(r3) == doctest::Approx(skew_proxy(r)).epsilon(1e-12));
  CHECK(tail_prob(r3) == tail_prob(r));
  CHECK(beta_full(r3, mkt) == doctest::Approx(3.0 * beta_full(r, mkt)).epsilon(1e-12));
  CHECK(beta_full(r, mkt2) == doctest::Approx(0.5 * beta_full(r, mkt)).epsilon(1e-12));
}

TEST_CASE("risk_report assembles all six columns") {
  RandomStream rng(8, 4, 0);
  std::vector<double> mkt(120), r(120);
  for (int i = 0; i < 120; ++i) {
    mkt[i] = rng.gaussian(0.002, 0.04);
    r[i] = 0.3 * mkt[i] + rng.gaussian(0.001, 0.02);
  }
  std::vector<SignalFrame> frames;
  std::map<FirmId, double> ranks = {{"A", -0.5}, {"B", 0.0}, {"C", 0.5}};
  for (int t = 0; t < 12; ++t) frames.push_back(make_frame(MonthStamp{2000, 1}.plus_months(t), ranks));

  RiskReport rep = risk_report("demo", r, mkt, frames);
  CHECK(rep.n_months == 120);
  CHECK(rep.beta == doctest::Approx(0.3).epsilon(0.2));
  REQUIRE(rep.downside_beta.has_value());
  CHECK(rep.tail_prob >= 0.0);
  CHECK(rep.tail_prob <= 1.0);
  REQUIRE(rep.persistence_b.has_value());
  CHECK(*rep.persistence_b == 1.0);

  std::vector<double> short_series(6, 0.01);
  CHECK_THROWS_AS(risk_report("x", short_series, short_series, {}), std::invalid_argument);
}
