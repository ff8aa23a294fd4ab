#include "t2t/channel.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace t2t {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double main_lobe_width_deg(double hpbw_deg) { return 2.6 * hpbw_deg; }

double cos_between(const Point& u, const Point& v) {
  const double denom = u.norm() * v.norm();
  return std::clamp(u.dot(v) / denom, -1.0, 1.0);
}

}  // namespace

double RadioParams::free_space_k0(double carrier_hz) {
  const double lambda = kSpeedOfLight / carrier_hz;
  const double r = lambda / (4.0 * std::numbers::pi);
  return r * r;
}

void RadioParams::validate() const {
  if (!(tx_power_mw > 0 && carrier_hz > 0 && bandwidth_hz > 0 && path_loss_exp > 0 &&
        hpbw_deg > 0 && si_cancellation >= 0 && k0 > 0))
    throw std::domain_error("radio parameters must be positive");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw std::domain_error("transceiver efficiency must lie in (0, 1]");
  const double expect = free_space_k0(carrier_hz);
  if (std::abs(k0 - expect) > 1e-12 * expect)
    throw std::domain_error("k0 does not match the carrier frequency");
}

double RadioParams::noise_floor_dbm() const {
  return noise_dbm_per_mhz + linear_to_db(bandwidth_hz / 1.0e6);
}

double RadioParams::noise_floor_mw() const { return dbm_to_mw(noise_floor_dbm()); }

double max_gain_dbi(double hpbw_deg) {
  const double r = 1.6162 / std::sin(hpbw_deg * kDegToRad / 2.0);
  return 10.0 * std::log10(r * r);
}

double side_lobe_gain_dbi(double hpbw_deg) { return -0.4111 * std::log(hpbw_deg) - 10.579; }

double antenna_gain(double theta_deg, const RadioParams& radio) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0))
    throw std::domain_error("antenna offset angle must lie in [0, 180] degrees");
  const double hpbw = radio.hpbw_deg;
  if (theta_deg <= main_lobe_width_deg(hpbw) / 2.0) {
    const double r = 2.0 * theta_deg / hpbw;
    return max_gain_dbi(hpbw) - 3.01 * r * r;
  }
  return side_lobe_gain_dbi(hpbw);
}

AntennaPattern::AntennaPattern(const RadioParams& radio)
    : hpbw_deg_(radio.hpbw_deg),
      g0_dbi_(max_gain_dbi(radio.hpbw_deg)),
      g0_lin_(db_to_linear(g0_dbi_)),
      gsl_lin_(db_to_linear(side_lobe_gain_dbi(radio.hpbw_deg))),
      cos_main_lobe_edge_(std::cos(main_lobe_width_deg(radio.hpbw_deg) / 2.0 * kDegToRad)) {}

double AntennaPattern::linear_gain_cos(double cos_theta) const {
  if (cos_theta < cos_main_lobe_edge_) return gsl_lin_;
  if (cos_theta >= 1.0) return g0_lin_;
  const double r = 2.0 * std::acos(cos_theta) * kRadToDeg / hpbw_deg_;
  return db_to_linear(g0_dbi_ - 3.01 * r * r);
}

bool Deployment::blocked(NodeId a, NodeId b, std::int64_t slot) const {
  if (a.train == b.train) return false;
  return los_blocked(position(a, slot), position(b, slot), field);
}

bool valid_link_set(ActiveLinkSet links) {
  for (std::size_t i = 0; i < links.size(); ++i)
    for (std::size_t j = i + 1; j < links.size(); ++j)
      if (links[i].tx == links[j].tx || links[i].rx == links[j].rx) return false;
  return true;
}

double received_power(const Point& tx_pos, const Point& rx_pos, const Point& tx_aim,
                      const Point& rx_aim, const RadioParams& radio) {
  const Point d = rx_pos - tx_pos;
  const double dist = d.norm();
  if (!(dist > 0.0)) throw std::domain_error("received_power: zero distance");
  const double theta_t = std::acos(cos_between(tx_aim - tx_pos, d)) * kRadToDeg;
  const double theta_r = std::acos(cos_between(rx_aim - rx_pos, -d)) * kRadToDeg;
  const double gt = db_to_linear(antenna_gain(theta_t, radio));
  const double gr = db_to_linear(antenna_gain(theta_r, radio));
  return radio.k0 * radio.tx_power_mw * gt * gr * std::pow(dist, -radio.path_loss_exp);
}

double received_power(NodeId tx, NodeId rx, NodeId tx_boresight_target,
                      NodeId rx_boresight_target, std::int64_t slot, const Deployment& dep) {
  if (tx == rx) throw std::domain_error("received_power: transmitter equals receiver");
  return received_power(dep.position(tx, slot), dep.position(rx, slot),
                        dep.position(tx_boresight_target, slot),
                        dep.position(rx_boresight_target, slot), dep.radio);
}

double self_interference(const RadioParams& radio) {
  return radio.si_cancellation * radio.tx_power_mw;
}

double cross_interference(NodeId victim_rx, NodeId victim_tx, ActiveLinkSet others,
                          std::int64_t slot, const Deployment& dep) {
  double total = 0.0;
  for (const ActiveLink& l : others) {
    if (l.tx == victim_rx || l.tx == victim_tx || l.rx == victim_rx || l.rx == victim_tx) continue;
    if (dep.blocked(l.tx, victim_rx, slot)) continue;
    total += received_power(l.tx, victim_rx, l.rx, victim_tx, slot, dep);
  }
  return total;
}

double shannon_rate(double signal_mw, double interference_mw, const RadioParams& radio) {
  const double sinr = signal_mw / (radio.noise_floor_mw() + interference_mw);
  return radio.efficiency * radio.bandwidth_hz * std::log2(1.0 + sinr);
}

double link_rate(NodeId tx, NodeId rx, ActiveLinkSet others, bool rx_is_also_transmitting,
                 std::int64_t slot, const Deployment& dep) {
  if (dep.blocked(tx, rx, slot)) return 0.0;
  const double signal = received_power(tx, rx, rx, tx, slot, dep);
  double interference = cross_interference(rx, tx, others, slot, dep);
  if (rx_is_also_transmitting) interference += self_interference(dep.radio);
  return shannon_rate(signal, interference, dep.radio);
}

double flow_rate(NodeId src, NodeId dst, std::optional<NodeId> relay, ActiveLinkSet others,
                 std::int64_t slot, const Deployment& dep) {
  if (!relay) return link_rate(src, dst, others, false, slot, dep);
  if (*relay == src || *relay == dst) throw std::domain_error("relay must differ from the flow ends");
  const double first = link_rate(src, *relay, others, true, slot, dep);
  if (first == 0.0) return 0.0;
  return std::min(first, link_rate(*relay, dst, others, false, slot, dep));
}

}  // namespace t2t
