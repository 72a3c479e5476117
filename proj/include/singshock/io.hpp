#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "singshock/errors.hpp"
#include "singshock/grid.hpp"
#include "singshock/io_format.hpp"

namespace singshock {

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Header "x,u,v", one row per cell in ascending x, x at the cell center.
inline std::string profile_csv(const StateField& s) {
    std::string out = "x,u,v\n";
    out.reserve(out.size() + s.size() * 64);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += format_double(s.grid.center(i));
        out += ',';
        out += format_double(s.u[i]);
        out += ',';
        out += format_double(s.v[i]);
        out += '\n';
    }
    return out;
}

inline void write_profile_csv(const StateField& s, const std::string& path) { write_text_file(path, profile_csv(s)); }

struct Profile {
    std::vector<double> x, u, v;
};

inline Profile parse_profile_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x,u,v") throw ConfigError("profile csv: missing header x,u,v");
    Profile p;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("profile csv: malformed row \"" + line + "\"");
        p.x.push_back(parse_double(std::string_view(line).substr(0, c1)));
        p.u.push_back(parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1)));
        p.v.push_back(parse_double(std::string_view(line).substr(c2 + 1)));
    }
    return p;
}

inline Profile read_profile_csv(const std::string& path) { return parse_profile_csv(read_text_file(path)); }

/// Gnuplot script drawing u and v against x for every profile. Nothing is executed.
inline std::string plot_script(const std::vector<std::string>& profiles, const std::string& image) {
    if (profiles.empty()) throw ConfigError("plot script: no profile files given");
    std::string s;
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 1200,800\n";
    s += "set output '" + image + "'\n";
    s += "set xlabel 'x'\n";
    s += "set key outside\n";
    s += "plot \\\n";
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const std::string name = std::filesystem::path(profiles[k]).filename().string();
        s += "  '" + profiles[k] + "' using 1:2 every ::1 with lines title 'u " + name + "', \\\n";
        s += "  '" + profiles[k] + "' using 1:3 every ::1 with lines title 'v " + name + "'";
        s += k + 1 < profiles.size() ? ", \\\n" : "\n";
    }
    return s;
}

inline void emit_plot_script(const std::vector<std::string>& profiles, const std::string& path) {
    const auto image = std::filesystem::path(path).replace_extension(".png").string();
    write_text_file(path, plot_script(profiles, image));
}

} // namespace singshock
