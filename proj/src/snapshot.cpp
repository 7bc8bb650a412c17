#include "qftca/snapshot.hpp"

#include <sstream>

namespace qftca {

std::string format_snapshot(const SystemState& state) {
    std::string out;
    std::string prefix =
        std::to_string(state.tick_count) + "," + format_number(state.time) + ",";
    for (const auto& f : state.fields) {
        for (std::size_t c = 0; c < f.psi.size(); ++c) {
            out += prefix;
            out += f.id;
            out += ",";
            out += std::to_string(c);
            out += ",";
            out += format_number(f.psi[c].real());
            out += ",";
            out += format_number(f.psi[c].imag());
            out += ",";
            out += format_number(std::norm(f.psi[c]));
            out += "\n";
        }
    }
    for (const auto& p : state.particles) {
        out += prefix;
        out += p.id;
        out += ",";
        out += std::to_string(state.grid.cell_of(p.x));
        out += ",";
        out += format_number(p.x);
        out += ",";
        out += format_number(p.v);
        out += ",";
        out += format_number(p.tau);
        out += "\n";
    }
    return out;
}

std::string format_plot_data(const SystemState& state) {
    std::string out;
    for (const auto& f : state.fields) {
        out += "# field " + f.id + "  (x re im abs2)\n";
        std::size_t nx = f.extents[0];
        for (std::size_t c = 0; c < f.psi.size(); ++c) {
            if (f.dim == 2 && c > 0 && c % nx == 0) out += "\n";  // gnuplot rows
            double x = state.grid.origin + static_cast<double>(c % nx) * f.dx;
            out += format_number(x);
            out += " ";
            out += format_number(f.psi[c].real());
            out += " ";
            out += format_number(f.psi[c].imag());
            out += " ";
            out += format_number(std::norm(f.psi[c]));
            out += "\n";
        }
        out += "\n";
    }
    for (const auto& p : state.particles) {
        out += "# particle " + p.id + "  (x v tau)\n";
        out += format_number(p.x);
        out += " ";
        out += format_number(p.v);
        out += " ";
        out += format_number(p.tau);
        out += "\n\n";
    }
    return out;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes) {
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string RunRecord::str() const {
    std::ostringstream out;
    out << "seed=" << seed << " ticks=" << ticks << " dt=" << format_number(dt)
        << " mode=" << mode << " allow_unstable=" << (allow_unstable ? "yes" : "no")
        << " digest=" << std::hex << digest << std::dec << "\n";
    for (const auto& e : events) {
        out << "event tick=" << e.tick << " cell=" << e.cell << " in=" << e.in1 << "+"
            << e.in2;
        if (e.out1.empty())
            out << " -> (void)";
        else
            out << " -> " << e.out1 << "+" << e.out2;
        out << "\n";
    }
    return out.str();
}

}  // namespace qftca
