#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lack/sim.hpp"

namespace lack::sim {

// One row per packet:
//   seq,send_time_ms,carries_steg,steg_bits,lack_delay_ms,network_delay_ms,
//   total_delay_ms,buffer_ms,outcome,extracted
inline constexpr const char* kEventsHeader =
    "seq,send_time_ms,carries_steg,steg_bits,lack_delay_ms,network_delay_ms,total_delay_ms,"
    "buffer_ms,outcome,extracted";

// One row per call.
inline constexpr const char* kSummaryHeader =
    "scenario,seed,duration_s,sent,played,late,network_lost,steg_packets,steg_network_lost,"
    "delivered_bits,steganogram_bits,realized_network_loss,realized_lack_loss,"
    "realized_total_loss,mean_mos";

// One row per RTCP report.
inline constexpr const char* kReportsHeader =
    "time_s,expected,network_lost,discarded,loss_fraction,network_loss_fraction,cumulative_lost,"
    "mean_delay_ms,jitter_ms,mos";

void write_events_csv(const CallTrace& trace, std::ostream& out);
void write_reports_csv(const CallTrace& trace, std::ostream& out);
std::string summary_row(const CallTrace& trace, const quality::MosParams& params);

// Reads an events CSV back into a trace with recomputed tallies. Scenario
// name and seed are not stored in the events file; duration_s is set to the
// last send time.
CallTrace read_events_csv(std::istream& in);
CallTrace read_events_csv(const std::filesystem::path& path);

}  // namespace lack::sim
