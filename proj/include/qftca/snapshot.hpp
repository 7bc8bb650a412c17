#pragma once

#include <iosfwd>

#include "qftca/state.hpp"

namespace qftca {

// CSV block: fields one row per cell (tick,time,id,cell,re,im,abs2),
// particles one row each (tick,time,id,cell,x,v,tau).  Shortest
// round-tripping number formatting, so equal states give equal bytes.
constexpr const char* snapshot_header = "tick,time,object,cell,a,b,c";

std::string format_snapshot(const SystemState& state);

// Gnuplot-ready columns: per field "x re im abs2" (blank line between
// objects), per particle its kinematic row.
std::string format_plot_data(const SystemState& state);

// 64-bit FNV-1a, the run digest accumulator.
std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes);
constexpr std::uint64_t fnv1a_seed = 0xCBF29CE484222325ULL;

struct RunRecord {
    std::uint64_t seed = 0;
    long ticks = 0;
    double dt = 0.0;
    std::string mode;           // corrected | literal
    bool allow_unstable = false;
    std::uint64_t digest = fnv1a_seed;  // over every emitted snapshot byte
    std::vector<InteractionEvent> events;

    std::string str() const;
};

}  // namespace qftca
