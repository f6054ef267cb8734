#pragma once

// CSV view of a grid result: one row per cell, fixed columns, deterministic
// formatting. Undefined rates and RSPs print as NA.

#include <ostream>
#include <sstream>
#include <string>

#include "cstrig/format.hpp"
#include "cstrig/grid.hpp"

namespace cstrig {

inline constexpr const char* kGridCsvHeader =
    "direction,mode,distance,a,b,c,d,shared_rate,nonshared_rate,rsp,p,significant";

inline void write_grid_csv(const GridResult& g, std::ostream& out) {
  out << kGridCsvHeader << "\n";
  for (const auto& cell : g.cells) {
    const TestResult& r = cell.result;
    out << to_string(cell.direction) << ',' << to_string(cell.mode) << ','
        << cell.distance << ',' << r.table.a << ',' << r.table.b << ','
        << r.table.c << ',' << r.table.d << ','
        << (r.shared_rate ? fmt_fixed(*r.shared_rate, 6) : "NA") << ','
        << (r.nonshared_rate ? fmt_fixed(*r.nonshared_rate, 6) : "NA") << ','
        << (r.rsp ? fmt_fixed(*r.rsp, 3) : "NA") << ','
        << fmt_p_value(r.p_value, r.log10_p) << ','
        << (r.p_value < g.spec.alpha ? "true" : "false") << "\n";
  }
}

inline std::string write_grid_csv(const GridResult& g) {
  std::ostringstream out;
  write_grid_csv(g, out);
  return out.str();
}

}  // namespace cstrig
