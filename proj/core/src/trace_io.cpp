#include "lack/trace_io.hpp"

#include <fstream>
#include <ostream>

#include "lack/csv.hpp"
#include "lack/error.hpp"

namespace lack::sim {

void write_events_csv(const CallTrace& trace, std::ostream& out) {
  out << kEventsHeader << '\n';
  for (const auto& e : trace.events) {
    out << e.seq << ',' << e.send_time_ms << ',' << (e.carries_steg ? 1 : 0) << ',' << e.steg_bits
        << ',' << csv::number(e.lack_delay_ms) << ',' << csv::number(e.network_delay_ms) << ','
        << csv::number(e.total_delay_ms) << ',' << csv::number(e.buffer_ms) << ','
        << to_string(e.outcome) << ',' << (e.extracted ? 1 : 0) << '\n';
  }
}

void write_reports_csv(const CallTrace& trace, std::ostream& out) {
  out << kReportsHeader << '\n';
  for (const auto& r : trace.reports) {
    out << csv::number(r.time_s) << ',' << r.expected << ',' << r.network_lost << ','
        << r.discarded << ',' << csv::number(r.loss_fraction) << ','
        << csv::number(r.network_loss_fraction) << ',' << r.cumulative_lost << ','
        << csv::number(r.mean_delay_ms) << ',' << csv::number(r.jitter_ms) << ','
        << csv::number(r.mos) << '\n';
  }
}

std::string summary_row(const CallTrace& t, const quality::MosParams& params) {
  return csv::join({t.scenario, std::to_string(t.seed), csv::number(t.duration_s),
                    std::to_string(t.sent), std::to_string(t.played), std::to_string(t.late),
                    std::to_string(t.network_lost), std::to_string(t.steg_packets),
                    std::to_string(t.steg_network_lost), std::to_string(t.delivered_bits),
                    std::to_string(t.steganogram_bits), csv::number(t.realized_network_loss()),
                    csv::number(t.realized_lack_loss()), csv::number(t.realized_total_loss()),
                    csv::number(t.mean_mos(params))});
}

CallTrace read_events_csv(std::istream& in) {
  std::string line;
  if (!csv::next_line(in, line) || line != kEventsHeader) {
    throw DomainError("not a packet-event CSV (header mismatch)");
  }
  CallTrace trace;
  std::size_t row = 1;
  while (csv::next_line(in, line)) {
    ++row;
    const auto f = csv::split(line);
    if (f.size() != 10) {
      throw DomainError("event row " + std::to_string(row) + " has " + std::to_string(f.size()) +
                        " fields, expected 10");
    }
    PacketEvent e;
    e.seq = csv::to_uint(f[0]);
    e.send_time_ms = static_cast<std::int64_t>(csv::to_double(f[1]));
    e.carries_steg = csv::to_uint(f[2]) != 0;
    e.steg_bits = csv::to_uint(f[3]);
    e.lack_delay_ms = csv::to_double(f[4]);
    e.network_delay_ms = csv::to_double(f[5]);
    e.total_delay_ms = csv::to_double(f[6]);
    e.buffer_ms = csv::to_double(f[7]);
    e.outcome = outcome_from_string(f[8]);
    e.extracted = csv::to_uint(f[9]) != 0;
    trace.events.push_back(e);
  }
  if (!trace.events.empty()) {
    trace.duration_s = static_cast<double>(trace.events.back().send_time_ms) / 1000.0;
  }
  trace.recount();
  return trace;
}

CallTrace read_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  CallTrace trace = read_events_csv(in);
  trace.scenario = path.stem().string();
  return trace;
}

}  // namespace lack::sim
