#include "lack/codec.hpp"

#include "lack/error.hpp"

namespace lack {
namespace {

bool is_probability_open(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

void CodecProfile::validate() const {
  if (!(packets_per_second > 0.0)) throw DomainError(name + ": packets per second must be > 0");
  if (!(payload_bits > 0.0)) throw DomainError(name + ": payload bits must be > 0");
  if (!is_probability_open(loss_tolerance) || !is_probability_open(plc_loss_tolerance)) {
    throw DomainError(name + ": loss tolerance must lie in (0, 1)");
  }
}

CodecProfile CodecProfile::g711(bool plc) {
  return {"G.711", 50.0, 1280.0, 0.03, 0.05, plc};
}

CodecProfile CodecProfile::g729a(double packets_per_second, double payload_bits) {
  CodecProfile c{"G.729A", packets_per_second, payload_bits, 0.02, 0.02, false};
  c.validate();
  return c;
}

CodecProfile CodecProfile::g723_1(double packets_per_second, double payload_bits) {
  CodecProfile c{"G.723.1", packets_per_second, payload_bits, 0.01, 0.01, false};
  c.validate();
  return c;
}

}  // namespace lack
