#pragma once

// Time-series records, CSV emission and plot-script generation.

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "refrig/adiabatic_solver.hpp"
#include "refrig/error.hpp"

namespace refrig::output {

inline constexpr int significant_digits = 12;
inline constexpr std::array<std::string_view, 5> time_series_columns{
    "s", "omega_over_omega1", "eta", "mean_n", "T_ratio"};

/// Scientific notation with 12 significant digits, locale independent.
inline std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                   std::chars_format::scientific, significant_digits - 1);
    return {buf.data(), res.ptr};
}

/// Shortest representation that parses back to the same double.
inline std::string format_roundtrip(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

inline double parse_double(std::string_view text) {
    double v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::validation, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

/// Value as it appears in emitted files.
inline double quantize(double x) { return parse_double(format_double(x)); }

/// One row per output sample; values are stored at output precision so that
/// the CSV is an exact image of the record.
struct TimeSeriesRecord {
    std::vector<adiabatic::Sample> rows;

    static TimeSeriesRecord from(const adiabatic::EtaTrajectory& traj) {
        TimeSeriesRecord rec;
        rec.rows.reserve(traj.samples.size());
        for (const auto& x : traj.samples) {
            rec.rows.push_back({quantize(x.s), quantize(x.omega_over_omega1), quantize(x.eta),
                                quantize(x.mean_n), quantize(x.T_ratio)});
        }
        return rec;
    }

    bool operator==(const TimeSeriesRecord&) const = default;
};

inline std::string header_line() {
    std::string h;
    for (std::size_t i = 0; i < time_series_columns.size(); ++i) {
        if (i) h += ',';
        h += time_series_columns[i];
    }
    return h;
}

inline std::string to_csv(const TimeSeriesRecord& rec) {
    std::string out = header_line() + '\n';
    out.reserve(out.size() + rec.rows.size() * 90);
    for (const auto& r : rec.rows) {
        out += format_double(r.s);
        out += ',';
        out += format_double(r.omega_over_omega1);
        out += ',';
        out += format_double(r.eta);
        out += ',';
        out += format_double(r.mean_n);
        out += ',';
        out += format_double(r.T_ratio);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    os.close();
    if (!os) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline void emit_csv(const TimeSeriesRecord& rec, const std::filesystem::path& path) {
    write_file(path, to_csv(rec));
}

/// RFC-4180 quoting for free-text fields.
inline std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string q = "\"";
    for (char c : text) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

namespace detail {

inline std::string script_prologue(std::string_view csv_name) {
    std::string s;
    s += "#!/usr/bin/env python3\n";
    s += "import csv\nimport os\nimport sys\n\n";
    s += "HERE = os.path.dirname(os.path.abspath(__file__))\n";
    s += "CSV = os.path.join(HERE, \"" + std::string(csv_name) + "\")\n\n";
    s += "if not os.path.exists(CSV):\n";
    s += "    sys.stderr.write(\"error: data file not found: %s\\n\" % CSV)\n";
    s += "    sys.exit(1)\n\n";
    s += "import matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n";
    s += "with open(CSV, newline=\"\") as fh:\n";
    s += "    rows = list(csv.DictReader(fh))\n\n";
    return s;
}

} // namespace detail

/// Two stacked panels: T(t)/T with omega/omega1, and <n>, against t/tau_open.
inline std::string trajectory_plot_script(std::string_view csv_name, std::string_view png_name) {
    std::string s = detail::script_prologue(csv_name);
    s += "s = [float(r[\"s\"]) for r in rows]\n";
    s += "fig, (ax_t, ax_n) = plt.subplots(2, 1, sharex=True, figsize=(6, 7))\n";
    s += "ax_t.plot(s, [float(r[\"T_ratio\"]) for r in rows], color=\"tab:blue\", label=\"T(t)/T\")\n";
    s += "ax_t.plot(s, [float(r[\"omega_over_omega1\"]) for r in rows], color=\"tab:red\", "
         "label=\"omega(t)/omega1\")\n";
    s += "ax_t.set_ylabel(\"omega(t)/omega1, T(t)/T\")\n";
    s += "ax_t.legend(loc=\"lower right\")\n";
    s += "ax_t.set_title(\"(a)\", loc=\"left\")\n";
    s += "ax_n.plot(s, [float(r[\"mean_n\"]) for r in rows], color=\"tab:blue\")\n";
    s += "ax_n.set_ylabel(\"<a^dag a>\")\n";
    s += "ax_n.set_xlabel(\"t/tau_open\")\n";
    s += "ax_n.set_title(\"(b)\", loc=\"left\")\n";
    s += "fig.tight_layout()\n";
    s += "fig.savefig(os.path.join(HERE, \"" + std::string(png_name) + "\"), dpi=120)\n";
    return s;
}

/// Single curve: min T/T against the swept parameter.
inline std::string sweep_plot_script(std::string_view csv_name, std::string_view axis_column,
                                     std::string_view png_name, bool log_axis) {
    std::string s = detail::script_prologue(csv_name);
    s += "ok = [r for r in rows if r[\"status\"] in (\"ok\", \"not_recovered\")]\n";
    s += "x = [float(r[\"" + std::string(axis_column) + "\"]) for r in ok]\n";
    s += "y = [float(r[\"min_T_ratio\"]) for r in ok]\n";
    s += "fig, ax = plt.subplots(figsize=(6, 4))\n";
    s += "ax.plot(x, y, marker=\"o\")\n";
    if (log_axis) s += "ax.set_xscale(\"log\")\n";
    s += "ax.set_xlabel(\"" + std::string(axis_column) + "\")\n";
    s += "ax.set_ylabel(\"min T(t)/T\")\n";
    s += "fig.tight_layout()\n";
    s += "fig.savefig(os.path.join(HERE, \"" + std::string(png_name) + "\"), dpi=120)\n";
    return s;
}

/// Writes a trajectory plot script next to `csv_path`, referencing it by name.
inline std::filesystem::path emit_plot_script(const TimeSeriesRecord& rec,
                                              const std::filesystem::path& csv_path,
                                              const std::filesystem::path& script_path) {
    if (rec.rows.empty()) throw Error(ErrorKind::validation, "cannot plot an empty record");
    const auto png = script_path.stem().string() + ".png";
    write_file(script_path, trajectory_plot_script(csv_path.filename().string(), png));
    return script_path;
}

} // namespace refrig::output
