#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semcoop/channel.hpp"

using namespace semcoop;

TEST_CASE("dB and dBm conversions are lossless round trips") {
  for (double db : {-90.0, -60.0, -30.0, 0.0, 10.0, 27.5}) {
    CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    CHECK(watt_to_dbm(dbm_to_watt(db)) == doctest::Approx(db).epsilon(1e-12));
  }
  CHECK(dbm_to_watt(10.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(dbm_to_watt(-90.0) == doctest::Approx(1e-12).epsilon(1e-15));
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3).epsilon(1e-15));
}

TEST_CASE("path loss at the reference distance is beta0") {
  const LinkParams p = default_link_params();
  CHECK(path_loss(10.0, p) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("path loss at 150 m with defaults") {
  const LinkParams p = default_link_params();
  CHECK(path_loss(150.0, p) ==
        doctest::Approx(1e-3 / (15.0 * 15.0 * 15.0)).epsilon(1e-12));
  CHECK(path_loss(150.0, p) == doctest::Approx(2.963e-7).epsilon(1e-3));
}

TEST_CASE("doubling the distance divides the gain by 8 at zeta 3") {
  const LinkParams p = default_link_params();
  for (double d : {20.0, 75.0, 140.0}) {
    CHECK(path_loss(2 * d, p) ==
          doctest::Approx(path_loss(d, p) / 8.0).epsilon(1e-12));
  }
}

TEST_CASE("non-positive distance is rejected") {
  const LinkParams p = default_link_params();
  CHECK_THROWS_AS(path_loss(0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(path_loss(-5.0, p), std::invalid_argument);
}

TEST_CASE("unit SNR gives rate equal to bandwidth") {
  LinkParams p = default_link_params();
  // choose gain so P*g/(B*N0) = 1
  const double g = p.bandwidth_hz * p.noise_power_w / p.tx_power_w;
  CHECK(uplink_rate(g, p) == doctest::Approx(p.bandwidth_hz).epsilon(1e-12));
}

TEST_CASE("rate at 150 m with the paper-results preset") {
  const LinkParams p = default_link_params("paper-results");
  const double r = uplink_rate(path_loss(150.0, p), p);
  CHECK(r == doctest::Approx(4.27e3).epsilon(5e-3));
}

TEST_CASE("low-SNR rate ratio approaches the path-loss ratio") {
  // log2(1+x) ~ x/ln2, so R(150)/R(300) -> 2^zeta as SNR -> 0
  LinkParams p = default_link_params();
  p.noise_power_w = 1.0;  // crush the SNR
  const double r150 = uplink_rate(path_loss(150.0, p), p);
  const double r300 = uplink_rate(path_loss(300.0, p), p);
  CHECK(r150 / r300 == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("payload accounting: Q bits per scalar, d+1 scalars per class") {
  CHECK(payload_bits(0, 81, 10) == 0);
  CHECK(payload_bits(14, 81, 10) == 10ull * 14 * 82);
  CHECK(payload_bits(21, 81, 10) == 17220);
}

TEST_CASE("uplink latency on the paper's operating point") {
  const LinkParams p = default_link_params("paper-results");

  const double t1 = uplink_latency(0, 81, p, uplink_rate(path_loss(50, p), p));
  CHECK(t1 == 0.0);

  const double r2 = uplink_rate(path_loss(150, p), p);
  const double t2 = uplink_latency(14, 81, p, r2);
  CHECK(std::abs(t2 - 2.69) < 0.01);

  const double r3 = uplink_rate(path_loss(300, p), p);
  const double t3 = uplink_latency(21, 81, p, r3);
  CHECK(std::abs(t3 - 32.23) < 0.01);

  CHECK(std::abs(t1 + t2 + t3 - 34.92) < 0.02);
}

TEST_CASE("paper-text preset exists but yields far slower links") {
  const LinkParams text = default_link_params("paper-text");
  const LinkParams results = default_link_params("paper-results");
  CHECK(watt_to_dbm(text.noise_power_w) == doctest::Approx(-60.0));
  CHECK(watt_to_dbm(results.noise_power_w) == doctest::Approx(-90.0));
  const double rt = uplink_rate(path_loss(150, text), text);
  const double rr = uplink_rate(path_loss(150, results), results);
  CHECK(rt < rr / 100.0);  // the -60 dBm reading cannot match the latencies
  CHECK_THROWS_AS(default_link_params("bogus"), std::invalid_argument);
}

TEST_CASE("latency is linear in the upload count") {
  const LinkParams p = default_link_params();
  const double r = uplink_rate(path_loss(150, p), p);
  CHECK(uplink_latency(28, 81, p, r) ==
        doctest::Approx(2 * uplink_latency(14, 81, p, r)).epsilon(1e-12));
}

TEST_CASE("zero-rate link with pending uploads is an error") {
  const LinkParams p = default_link_params();
  CHECK_THROWS_WITH_AS(uplink_latency(3, 81, p, 0.0), "zero-rate link",
                       std::runtime_error);
  CHECK(uplink_latency(0, 81, p, 0.0) == 0.0);
}

TEST_CASE("monotonicity along the chain distance -> gain -> rate -> latency") {
  const LinkParams p = default_link_params();
  double prev_gain = path_loss(10.0, p);
  for (double d : {20.0, 50.0, 100.0, 200.0, 400.0}) {
    const double g = path_loss(d, p);
    CHECK(g < prev_gain);
    prev_gain = g;
  }
  const double g1 = path_loss(50, p), g2 = path_loss(150, p);
  CHECK(uplink_rate(g1, p) > uplink_rate(g2, p));
  CHECK(uplink_latency(5, 81, p, uplink_rate(g1, p)) <
        uplink_latency(5, 81, p, uplink_rate(g2, p)));
}

TEST_CASE("compute_uplink_stats ties the pieces together") {
  const LinkParams p = default_link_params();
  const UplinkStats s = compute_uplink_stats(2, 14, 81, 150.0, p);
  CHECK(s.pair_id == 2);
  CHECK(s.payload == 11480);
  CHECK(s.gain == doctest::Approx(path_loss(150.0, p)).epsilon(1e-15));
  CHECK(s.latency_s ==
        doctest::Approx(double(s.payload) / s.rate_bps).epsilon(1e-15));
}

TEST_CASE("link parameter validation") {
  LinkParams p = default_link_params();
  p.quantization_bits = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = default_link_params();
  p.path_loss_exponent = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = default_link_params();
  p.noise_power_w = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
