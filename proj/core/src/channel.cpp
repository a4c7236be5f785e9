#include "semcoop/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace semcoop {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

void LinkParams::validate() const {
  if (beta0 <= 0.0 || reference_distance_m <= 0.0 || bandwidth_hz <= 0.0 ||
      tx_power_w <= 0.0 || noise_power_w <= 0.0) {
    throw std::invalid_argument("link parameters must be positive");
  }
  if (path_loss_exponent < 1.0) {
    throw std::invalid_argument("path loss exponent must be >= 1");
  }
  if (quantization_bits < 1) {
    throw std::invalid_argument("quantization bits must be >= 1");
  }
}

LinkParams make_link_params(double beta0_db, double reference_distance_m,
                            double path_loss_exponent, double bandwidth_hz,
                            double tx_power_dbm, double noise_dbm,
                            std::uint32_t quantization_bits) {
  LinkParams p;
  p.beta0 = db_to_linear(beta0_db);
  p.reference_distance_m = reference_distance_m;
  p.path_loss_exponent = path_loss_exponent;
  p.bandwidth_hz = bandwidth_hz;
  p.tx_power_w = dbm_to_watt(tx_power_dbm);
  p.noise_power_w = dbm_to_watt(noise_dbm);
  p.quantization_bits = quantization_bits;
  p.validate();
  return p;
}

LinkParams default_link_params(const std::string& noise_preset) {
  double noise_dbm = 0.0;
  if (noise_preset == "paper-results") {
    noise_dbm = kNoiseDbmPaperResults;
  } else if (noise_preset == "paper-text") {
    noise_dbm = kNoiseDbmPaperText;
  } else {
    throw std::invalid_argument("unknown noise preset '" + noise_preset +
                                "' (expected paper-results or paper-text)");
  }
  return make_link_params(-30.0, 10.0, 3.0, 1e6, 10.0, noise_dbm, 10);
}

double path_loss(double distance_m, const LinkParams& p) {
  if (distance_m <= 0.0) {
    throw std::invalid_argument("distance must be positive");
  }
  return p.beta0 *
         std::pow(distance_m / p.reference_distance_m, -p.path_loss_exponent);
}

double uplink_rate(double gain, const LinkParams& p) {
  if (gain <= 0.0) {
    throw std::invalid_argument("channel gain must be positive");
  }
  const double snr = p.tx_power_w * gain / (p.bandwidth_hz * p.noise_power_w);
  return p.bandwidth_hz * std::log2(1.0 + snr);
}

std::uint64_t payload_bits(std::uint32_t uploaded_classes,
                           std::uint32_t dimension, std::uint32_t q_bits) {
  return static_cast<std::uint64_t>(q_bits) * uploaded_classes *
         (static_cast<std::uint64_t>(dimension) + 1);
}

double uplink_latency(std::uint32_t uploaded_classes, std::uint32_t dimension,
                      const LinkParams& p, double rate_bps) {
  if (uploaded_classes == 0) {
    return 0.0;
  }
  if (rate_bps <= 0.0) {
    throw std::runtime_error("zero-rate link");
  }
  const auto bits = payload_bits(uploaded_classes, dimension,
                                 p.quantization_bits);
  return static_cast<double>(bits) / rate_bps;
}

UplinkStats compute_uplink_stats(PairId pair_id,
                                 std::uint32_t uploaded_classes,
                                 std::uint32_t dimension, double distance_m,
                                 const LinkParams& p) {
  UplinkStats stats;
  stats.pair_id = pair_id;
  stats.uploaded_classes = uploaded_classes;
  stats.payload = payload_bits(uploaded_classes, dimension, p.quantization_bits);
  stats.gain = path_loss(distance_m, p);
  stats.rate_bps = uplink_rate(stats.gain, p);
  stats.latency_s = uplink_latency(uploaded_classes, dimension, p, stats.rate_bps);
  return stats;
}

}  // namespace semcoop
