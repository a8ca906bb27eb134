#include "lack/budget.hpp"

#include <algorithm>
#include <string>

#include "lack/error.hpp"

namespace lack::budget {
namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

double total_loss(double network_loss, double lack_loss) {
  require_probability(network_loss, "network loss");
  require_probability(lack_loss, "LACK loss");
  return 1.0 - (1.0 - network_loss) * (1.0 - lack_loss);
}

double admissible_lack_loss(double total_target, double network_loss) {
  require_probability(total_target, "total loss target");
  require_probability(network_loss, "network loss");
  if (network_loss == 1.0) throw DomainError("no LACK budget on a network that loses every packet");
  return std::max(0.0, (total_target - network_loss) / (1.0 - network_loss));
}

void DelayBudget::validate() const {
  for (double v : {dsp_ms, coding_ms, encapsulation_ms, jitter_buffer_ms, network_ms, lack_ms}) {
    if (!(v >= 0.0)) throw DomainError("delay components must be non-negative");
  }
}

double min_lack_delay(const DelayBudget& delays, BufferMode mode, double step_ms) {
  delays.validate();
  if (mode == BufferMode::Fixed) {
    return std::max(0.0, delays.jitter_buffer_ms - delays.processing_ms());
  }
  return std::max(0.0, delays.jitter_buffer_ms - delays.network_ms - delays.processing_ms()) +
         step_ms;
}

double rate_to_loss(const CodecProfile& codec, double rate_bps) {
  if (!(rate_bps >= 0.0)) throw DomainError("insertion rate must be >= 0");
  if (rate_bps > codec.capacity_bps()) {
    throw DomainError("insertion rate exceeds the codec's payload capacity");
  }
  return rate_bps / codec.capacity_bps();
}

double loss_to_rate(const CodecProfile& codec, double lack_loss) {
  require_probability(lack_loss, "LACK loss");
  return lack_loss * codec.capacity_bps();
}

double effective_loss_cap(const CodecProfile& codec, double network_loss,
                          double quality_total_loss) {
  return std::min(admissible_lack_loss(codec.effective_tolerance(), network_loss),
                  admissible_lack_loss(quality_total_loss, network_loss));
}

}  // namespace lack::budget
