// csv.hpp — experiment CSV emission.  All floats are printed with 17
// significant digits so identical runs produce bit-identical files.

#pragma once

#include <string>
#include <vector>

#include "detform/nudging.hpp"
#include "detform/param_ode.hpp"
#include "detform/secant.hpp"

namespace detform {

std::string format_float(double value); // %.17g

void write_phi_table_csv(const std::string& path, const PhiTable& table);
void write_param_path_csv(const std::string& path, const ParamPath& path_data);

struct RateFitRow {
    std::string rate_case;
    RateFit fit;
};
void write_rate_fit_csv(const std::string& path, const std::vector<RateFitRow>& rows);

void write_secant_trace_csv(const std::string& path, const SecantTrace& trace);
void write_assimilation_csv(const std::string& path, const std::vector<AssimilationRow>& rows);

} // namespace detform
