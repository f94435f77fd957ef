#include "detform/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace detform {

std::string format_float(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

} // namespace

void write_phi_table_csv(const std::string& path, const PhiTable& table) {
    auto out = open_csv(path);
    out << "theta,g\n";
    for (const auto& s : table.samples)
        out << format_float(s.theta) << "," << format_float(s.g) << "\n";
}

void write_param_path_csv(const std::string& path, const ParamPath& path_data) {
    auto out = open_csv(path);
    out << "tau,value,variant\n";
    const char* name = variant_name(path_data.variant);
    for (size_t i = 0; i < path_data.taus.size(); ++i)
        out << format_float(path_data.taus[i]) << "," << format_float(path_data.values[i]) << ","
            << name << "\n";
}

void write_rate_fit_csv(const std::string& path, const std::vector<RateFitRow>& rows) {
    auto out = open_csv(path);
    out << "case,exponent,residual,window\n";
    for (const auto& row : rows)
        out << row.rate_case << "," << format_float(row.fit.exponent) << ","
            << format_float(row.fit.rms_residual) << "," << format_float(row.fit.window_lo) << ":"
            << format_float(row.fit.window_hi) << "\n";
}

void write_secant_trace_csv(const std::string& path, const SecantTrace& trace) {
    auto out = open_csv(path);
    out << "i,eta_i,residual_i\n";
    for (const auto& row : trace.rows)
        out << row.i << "," << format_float(row.eta) << "," << format_float(row.residual) << "\n";
}

void write_assimilation_csv(const std::string& path, const std::vector<AssimilationRow>& rows) {
    auto out = open_csv(path);
    out << "s,observed_error,state_norm\n";
    for (const auto& row : rows)
        out << format_float(row.s) << "," << format_float(row.observed_error) << ","
            << format_float(row.state_norm) << "\n";
}

} // namespace detform
