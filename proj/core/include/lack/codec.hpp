#pragma once

#include <string>

namespace lack {

// Framing and loss tolerance of a voice codec as seen by the RTP stream.
struct CodecProfile {
  std::string name;
  double packets_per_second = 0.0;  // N_p
  double payload_bits = 0.0;        // P_p, bits per RTP payload
  double loss_tolerance = 0.0;      // maximum tolerable loss without PLC
  double plc_loss_tolerance = 0.0;  // tolerable loss when PLC is enabled
  bool plc_enabled = false;

  // Throws DomainError on non-positive framing or tolerances outside (0, 1).
  void validate() const;

  double effective_tolerance() const noexcept {
    return plc_enabled ? plc_loss_tolerance : loss_tolerance;
  }

  // N_p * P_p: the hidden rate reached if every packet carried steganogram bits.
  double capacity_bps() const noexcept { return packets_per_second * payload_bits; }

  // 64 kbit/s with 20 ms frames: 50 packets/s of 1280 bits. 3% tolerance, 5% with PLC.
  static CodecProfile g711(bool plc = false);
  // Only the tolerances (2% and 1%) are fixed; framing must be supplied.
  static CodecProfile g729a(double packets_per_second, double payload_bits);
  static CodecProfile g723_1(double packets_per_second, double payload_bits);
};

}  // namespace lack
